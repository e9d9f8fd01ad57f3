//! Explicit groups: the `beta_T` and `rho_k` representations of
//! `G = <x, y, z | zxz^-1 = xy, zyz^-1 = yxy>`, the hypergeometric groups
//! `G(d, k)` in `Sp(4, Z)`, groups generated by three transvections, and a
//! few assembled test groups.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::factor_u64;
use crate::error::{Error, Result};
use crate::gammas::Ambient;
use crate::group::{GroupSpec, Transvection};
use crate::intmat::{GroupWord, IntMatrix};

/// Default seed for the random parts of assembled groups.
pub const DEFAULT_FAMILY_SEED: u64 = 20_140_613;

/// `X_T, Y_T, Z_T`.
pub fn beta_matrices(t: i64) -> [IntMatrix; 3] {
    let x = IntMatrix::from_rows(&[[-1 + t * t * t, -t, t * t], [0, -1, 2 * t], [-t, 0, 1]]);
    let y = IntMatrix::from_rows(&[[-1, 0, 0], [-t * t, 1, -t], [t, 0, -1]]);
    let z = IntMatrix::from_rows(&[[0, 0, 1], [1, 0, t * t], [0, 1, 0]]);
    [x, y, z]
}

/// `b_1 = x^-1 y^3 x y^2 x y^-1 x` over generators `x = 1`, `y = 2`.
pub fn b1_word() -> GroupWord {
    GroupWord::new(vec![-1, 2, 2, 2, 1, 2, 2, 1, -2, 1])
}

/// `beta_T(F)`, or `beta_T(G)` when `with_z`, with transvection `b_1`.
pub fn beta(t: i64, with_z: bool) -> Result<GroupSpec> {
    let [x, y, z] = beta_matrices(t);
    let mut gens = vec![x, y];
    if with_z {
        gens.push(z);
    }
    GroupSpec::new(Ambient::sl(3)?, gens)?.with_transvection(Transvection::Word(b1_word()))
}

/// `rho_k(x), rho_k(y), rho_k(z)`.
pub fn rho_matrices(k: i64) -> [IntMatrix; 3] {
    let x = IntMatrix::from_rows(&[[1, -2, 3], [0, k, -1 - 2 * k], [0, 1, -2]]);
    let y = IntMatrix::from_rows(&[[-2 - k, -1, 1], [-2 - k, -2, 3], [-1, -1, 2]]);
    let z = IntMatrix::from_rows(&[[0, 0, 1], [1, 0, -k], [0, 1, -1 - k]]);
    [x, y, z]
}

/// `rho_k(F)`, or `rho_k(G)` when `with_z`. No transvection is designated.
pub fn rho(k: i64, with_z: bool) -> Result<GroupSpec> {
    let [x, y, z] = rho_matrices(k);
    let mut gens = vec![x, y];
    if with_z {
        gens.push(z);
    }
    GroupSpec::new(Ambient::sl(3)?, gens)
}

/// `U` and `T` of `G(d, k)`.
pub fn hypergeometric_matrices(d: i64, k: i64) -> [IntMatrix; 2] {
    let u = IntMatrix::from_rows(&[[1, 1, 0, 0], [0, 1, 0, 0], [d, d, 1, 0], [0, -k, -1, 1]]);
    let t = IntMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]);
    [u, t]
}

/// `G(d, k) = <U, T> <= Sp(4, Z)` with transvection `T`.
pub fn hypergeometric(d: i64, k: i64) -> Result<GroupSpec> {
    let [u, t] = hypergeometric_matrices(d, k);
    GroupSpec::new(Ambient::sp(4)?, vec![u, t])?
        .with_transvection(Transvection::Word(GroupWord::new(vec![2])))
}

/// The rows `(d, k)` of the hypergeometric table.
pub const HYPERGEOMETRIC_ROWS: [(i64, i64); 14] = [
    (1, 3),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 4),
    (6, 5),
    (9, 6),
    (5, 5),
    (2, 4),
    (1, 4),
    (16, 8),
    (12, 7),
    (8, 6),
    (4, 5),
];

/// `|Sp(4,Z) : Ghat(d1, d2)| = d1^4 prod_{p|d1}(1 - p^-4) d2^2 prod_{p|d2}(1 - p^-2)`.
pub fn hat_g_index(d1: u64, d2: u64) -> Result<BigUint> {
    if d1 == 0 || d2 == 0 || !d1.is_multiple_of(d2) {
        return Err(Error::NonDivisor { d1, d2 });
    }
    let part = |d: u64, e: u32| -> BigUint {
        factor_u64(d)
            .into_iter()
            .map(|(p, a)| {
                let p = BigUint::from(p);
                p.pow(e * (a - 1)) * (p.pow(e) - BigUint::one())
            })
            .product()
    };
    Ok(part(d1, 4) * part(d2, 2))
}

/// `T_1, T_2, T_3`.
pub fn humphries_matrices(x: i64) -> [IntMatrix; 3] {
    [
        IntMatrix::from_rows(&[[1, x * x + 1, x], [0, 1, 0], [0, 0, 1]]),
        IntMatrix::from_rows(&[[1, 0, 0], [x, 1, x + 1], [0, 0, 1]]),
        IntMatrix::from_rows(&[[1, 0, 0], [0, 1, 0], [-x + 1, x * x, 1]]),
    ]
}

/// `<T_1, T_2, T_3>` with transvection `T_1`.
pub fn humphries(x: i64) -> Result<GroupSpec> {
    GroupSpec::new(Ambient::sl(3)?, humphries_matrices(x).to_vec())?
        .with_transvection(Transvection::Word(GroupWord::new(vec![1])))
}

/// Upper unitriangular elementary matrices `t_ij(1)`, `i < j`.
fn upper_elementary(n: usize) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(IntMatrix::elementary(n, i, j, 1));
        }
    }
    out
}

/// A generating set of `SL(n, Z)`: `t_12, t_21`, a signed cyclic
/// permutation and `t_(n-1)n`.
fn sl_generators(n: usize) -> Vec<IntMatrix> {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n - 1 {
        rows[i][i + 1] = 1;
    }
    rows[n - 1][0] = if n.is_multiple_of(2) { -1 } else { 1 };
    vec![
        IntMatrix::elementary(n, 0, 1, 1),
        IntMatrix::elementary(n, 1, 0, 1),
        IntMatrix::from_rows(&rows),
        IntMatrix::elementary(n, n - 2, n - 1, 1),
    ]
}

/// `E_{7, 3^4 5 7^2}` with `diag(h, 1_3, 1)` for `h` in `beta_2(G)` and
/// `diag(1_3, h, 1)` for `h` in `rho_4(G)`. Arithmetic in `SL(7, Z)`.
pub fn g3() -> Result<GroupSpec> {
    let amb = Ambient::sl(7)?;
    let mut gens = amb.elementary_generators(3u64.pow(4) * 5 * 49);
    let i1 = IntMatrix::identity(1);
    let i3 = IntMatrix::identity(3);
    for h in beta_matrices(2) {
        gens.push(IntMatrix::block_diag(&[&h, &i3, &i1]));
    }
    for h in rho_matrices(4) {
        gens.push(IntMatrix::block_diag(&[&i3, &h, &i1]));
    }
    GroupSpec::new(amb, gens)?.with_transvection(Transvection::Word(GroupWord::new(vec![1])))
}

/// `diag(h_1, h_2)` for `h_1` in `beta_5(G)` and `h_2` in `{t_12, t_21}`
/// of `SL(2, Z)`, with the upper elementary matrices of `SL(5, Z)`.
pub fn g7() -> Result<GroupSpec> {
    let i2 = IntMatrix::identity(2);
    let i3 = IntMatrix::identity(3);
    let mut gens: Vec<IntMatrix> = beta_matrices(5)
        .iter()
        .map(|h| IntMatrix::block_diag(&[h, &i2]))
        .collect();
    for h in [
        IntMatrix::elementary(2, 0, 1, 1),
        IntMatrix::elementary(2, 1, 0, 1),
    ] {
        gens.push(IntMatrix::block_diag(&[&i3, &h]));
    }
    gens.extend(upper_elementary(5));
    GroupSpec::new(Ambient::sl(5)?, gens)?
        .with_transvection(Transvection::Word(GroupWord::new(vec![4])))
}

/// The `5 x 5` upper unitriangular group.
pub fn g8() -> Result<GroupSpec> {
    GroupSpec::new(Ambient::sl(5)?, upper_elementary(5))?
        .with_transvection(Transvection::Word(GroupWord::new(vec![1])))
}

/// `diag(h_1, h_2)` over generating sets of `SL(6, Z)` and `SL(5, Z)`,
/// with five random upper unitriangular matrices drawn from `seed`.
pub fn g9(seed: u64) -> Result<GroupSpec> {
    let i5 = IntMatrix::identity(5);
    let i6 = IntMatrix::identity(6);
    let mut gens: Vec<IntMatrix> = sl_generators(6)
        .iter()
        .map(|h| IntMatrix::block_diag(&[h, &i5]))
        .collect();
    gens.extend(
        sl_generators(5)
            .iter()
            .map(|h| IntMatrix::block_diag(&[&i6, h])),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..5 {
        let mut rows = vec![vec![0i64; 11]; 11];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
            for x in row.iter_mut().skip(i + 1) {
                *x = rng.gen_range(-3..=3);
            }
        }
        gens.push(IntMatrix::from_rows(&rows));
    }
    GroupSpec::new(Ambient::sl(11)?, gens)?
        .with_transvection(Transvection::Word(GroupWord::new(vec![1])))
}

/// A subgroup of `SL(3, Z)` containing `Gamma_{3,45}` whose level is 45
/// although `delta(3) = delta(9)` and `delta(5) = delta(25)`.
pub fn mixed_level_example() -> Result<GroupSpec> {
    let gens = vec![
        IntMatrix::from_rows(&[[1, 30, 0], [0, 1, 0], [0, 0, 1]]),
        IntMatrix::from_rows(&[[-29, 0, -30], [0, 1, 0], [30, 0, 31]]),
        IntMatrix::from_rows(&[[-29, -45, 15], [30, 1, 30], [30, 0, 31]]),
        IntMatrix::from_rows(&[[1, 0, 0], [15, -29, -30], [30, 30, 31]]),
        IntMatrix::from_rows(&[[16, 15, 0], [-255, -239, 0], [0, 0, 1]]),
        IntMatrix::from_rows(&[[16, 15, 30], [-255, -239, 15], [0, 0, 1]]),
        IntMatrix::from_rows(&[[1, 0, 30], [0, 1, 30], [0, 0, 1]]),
        IntMatrix::from_rows(&[[10, 0, 9], [36, -137, 66], [-99, -453, 22]]),
    ];
    GroupSpec::new(Ambient::sl(3)?, gens)?.with_pcs_level(45)
}
