//! The primes `p` for which a dense group fails to surject modulo `p`, and
//! the prime divisors of its level.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs::factors;
use num_prime::FactorizationConfig;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::inv_mod_prime;
use crate::config::Config;
use crate::density::{self, AlgebraBasis};
use crate::error::{Error, Result};
use crate::gammas::Kind;
use crate::group::GroupSpec;
use crate::intmat::IntMatrix;
use crate::modgroup::DeltaMemo;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeReport {
    /// Determinant of the trace form on the algebra basis.
    pub gram_det: BigInt,
    /// Primes that may fail surjectivity.
    pub candidates: Vec<u64>,
    /// Primes `p` with `phi_p(H)` proper.
    pub exceptional: Vec<u64>,
    /// Candidates whose surjectivity could not be decided.
    pub undecided: Vec<u64>,
    /// Prime divisors of the level.
    pub pi_tilde: Vec<u64>,
    /// Product of the odd exceptional primes.
    pub q: u64,
    /// `(delta(q), delta(4q))` when the even-level test ran.
    pub even_test: Option<(BigUint, BigUint)>,
}

impl PrimeReport {
    pub fn even_test_used(&self) -> bool {
        self.even_test.is_some()
    }
}

/// Prime factors of `|x|`, which must be nonzero.
pub fn prime_factors(x: &BigInt, config: &Config) -> Result<Vec<BigUint>> {
    let x = x.abs().to_biguint().expect("absolute value");
    if x.is_one() {
        return Ok(Vec::new());
    }
    let mut fc = FactorizationConfig::default();
    fc.rho_trials = config.factor_effort;
    let (found, rest) = factors(x, Some(fc));
    if let Some(rest) = rest {
        let rest: Vec<String> = rest.iter().map(|r| r.to_string()).collect();
        return Err(Error::FactorizationTooHard {
            remaining: rest.join(" * "),
        });
    }
    Ok(found.into_keys().collect())
}

/// The Gram matrix `[tr(A_i A_j)]` of the basis.
pub fn gram_matrix(basis: &AlgebraBasis) -> IntMatrix {
    let e = basis.elements();
    let k = e.len();
    let mut entries = Vec::with_capacity(k * k);
    for a in e {
        for b in e {
            entries.push(a.matrix.trace_product(&b.matrix));
        }
    }
    IntMatrix::from_entries(k, entries).expect("square")
}

/// `(d, Pi_1)`: the Gram determinant and the primes that may fail
/// surjectivity. The prime 2 is always included.
pub fn candidate_primes(
    basis: &AlgebraBasis,
    t: &IntMatrix,
    config: &Config,
) -> Result<(BigInt, Vec<u64>)> {
    if !basis.is_full() {
        return Err(Error::SingularGram);
    }
    let d = gram_matrix(basis).det();
    if d.is_zero() {
        return Err(Error::SingularGram);
    }
    let mut primes = BTreeSet::from([2u64]);
    let mut add = |x: &BigInt| -> Result<()> {
        for p in prime_factors(x, config)? {
            let p = p
                .to_u64()
                .ok_or(Error::ModulusTooLarge { modulus: u64::MAX })?;
            primes.insert(p);
        }
        Ok(())
    };
    add(&d)?;
    for x in density::off_diagonal_entries(t) {
        add(&x)?;
    }
    Ok((d, primes.into_iter().collect()))
}

/// Whether `phi_p(H)` is the whole of `phi_p(Gamma_n)`.
///
/// For odd `p` at which the designated transvection stays a transvection,
/// the answer is whether its conjugates span `M_n(F_p)`. Otherwise, when
/// `p^n` is within the orbit budget, the order of the image decides.
pub fn surjective_mod_p(spec: &GroupSpec, p: u64, config: &Config) -> Result<bool> {
    if let Some(r) = spec.pcs_level() {
        if r % p != 0 {
            return Ok(true);
        }
    }
    match surjective_by_algebra(spec, p) {
        Err(Error::Undecided { .. }) | Err(Error::NoTransvectionFound) => {}
        other => return other,
    }
    surjective_by_order(spec, p, config)
}

/// Surjectivity from the order of `phi_p(H)`; needs `p^n` within the orbit
/// budget.
pub fn surjective_by_order(spec: &GroupSpec, p: u64, config: &Config) -> Result<bool> {
    match p.checked_pow(spec.degree() as u32) {
        Some(size) if size <= config.orbit_budget => {
            Ok(crate::modgroup::delta(spec, p, config)?.is_one())
        }
        _ => Err(Error::Undecided { prime: p }),
    }
}

/// Surjectivity from the `F_p`-algebra spanned by the conjugates of the
/// designated transvection.
pub fn surjective_by_algebra(spec: &GroupSpec, p: u64) -> Result<bool> {
    let undecided = Err(Error::Undecided { prime: p });
    if p == 2 {
        return undecided;
    }
    let amb = spec.ambient();
    let (t, _) = density::transvection_of(spec)?;
    let n = spec.degree();
    let tp = reduce(&t, p);
    if tp == identity(n) || (amb.kind() == Kind::SL && n.is_multiple_of(2)) {
        return undecided;
    }
    let gens: Vec<Vec<u64>> = spec
        .integral_generators()
        .iter()
        .map(|g| reduce(g, p))
        .collect();
    let mut inverses: Vec<Vec<u64>> = spec.inverses().iter().map(|g| reduce(g, p)).collect();
    for g in &spec.integral_generators()[inverses.len()..] {
        inverses.push(reduce(&g.invert_unimodular()?, p));
    }
    Ok(fp_algebra_dim(n, p, &gens, &inverses, &tp) == n * n)
}

fn reduce(g: &IntMatrix, p: u64) -> Vec<u64> {
    let m = BigInt::from(p);
    g.entries()
        .iter()
        .map(|x| x.mod_floor(&m).to_u64().unwrap())
        .collect()
}

fn identity(n: usize) -> Vec<u64> {
    (0..n * n).map(|k| u64::from(k / n == k % n)).collect()
}

fn mul_mod(n: usize, p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u128;
            for k in 0..n {
                acc = (acc + a[i * n + k] as u128 * b[k * n + j] as u128) % p as u128;
            }
            out[i * n + j] = (acc % p as u128) as u64;
        }
    }
    out
}

/// Echelon basis of a subspace of `F_p^d`.
struct FpSpan {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FpSpan {
    fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = ((*x as u128 + (p - f) as u128 * *r as u128) % p as u128) as u64;
                }
            }
        }
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod_prime(v[c], p);
        for x in v.iter_mut() {
            *x = (*x as u128 * inv as u128 % p as u128) as u64;
        }
        self.rows.push(v);
        self.pivots.push(c);
        true
    }
}

/// Dimension of the `F_p`-algebra generated by the conjugates of `t`.
fn fp_algebra_dim(n: usize, p: u64, gens: &[Vec<u64>], inverses: &[Vec<u64>], t: &[u64]) -> usize {
    let full = n * n;
    let mut span = FpSpan {
        p,
        rows: Vec::new(),
        pivots: Vec::new(),
    };
    span.insert(&identity(n));
    span.insert(t);
    let mut conjugates = vec![t.to_vec()];
    let mut queue = VecDeque::from([t.to_vec()]);
    while let Some(e) = queue.pop_front() {
        for (g, gi) in gens.iter().zip(inverses) {
            for (c, ci) in [(g, gi), (gi, g)] {
                let x = mul_mod(n, p, &mul_mod(n, p, ci, &e), c);
                if span.insert(&x) {
                    conjugates.push(x.clone());
                    queue.push_back(x);
                }
            }
        }
        if span.rows.len() == full {
            return full;
        }
    }
    let mut elems = vec![identity(n)];
    elems.extend(conjugates.iter().cloned());
    let mut k = 0;
    while k < elems.len() && span.rows.len() < full {
        for c in &conjugates {
            let x = mul_mod(n, p, &elems[k], c);
            if span.insert(&x) {
                elems.push(x);
            }
        }
        k += 1;
    }
    span.rows.len()
}

/// Exceptional primes and the prime divisors of the level, from a full
/// algebra basis of the designated transvection.
pub fn prime_report(memo: &DeltaMemo<'_>, basis: &AlgebraBasis) -> Result<PrimeReport> {
    let spec = memo.spec();
    let config = memo.config();
    let (t, _) = density::transvection_of(spec)?;
    let (gram_det, candidates) = candidate_primes(basis, &t, config)?;
    let mut exceptional = Vec::new();
    let mut undecided = Vec::new();
    for &p in &candidates {
        match surjective_mod_p(spec, p, config) {
            Ok(true) => {}
            Ok(false) => exceptional.push(p),
            Err(Error::Undecided { prime }) => undecided.push(prime),
            Err(e) => return Err(e),
        }
    }
    let q: u64 = exceptional.iter().filter(|&&p| p != 2).product();
    let mut pi_tilde = exceptional.clone();
    let mut even_test = None;
    if spec.degree() <= 4 && !exceptional.contains(&2) {
        let four_q = q
            .checked_mul(4)
            .ok_or(Error::ModulusTooLarge { modulus: q })?;
        let (dq, d4q) = (memo.get(q)?, memo.get(four_q)?);
        if d4q > dq {
            pi_tilde.insert(0, 2);
        }
        even_test = Some((dq, d4q));
    }
    Ok(PrimeReport {
        gram_det,
        candidates,
        exceptional,
        undecided,
        pi_tilde,
        q,
        even_test,
    })
}

/// [`prime_report`] for a group whose density is checked first.
pub fn pi_tilde(spec: &GroupSpec, config: &Config) -> Result<PrimeReport> {
    density::check_scope(&spec.ambient())?;
    let basis = density::basis_for(spec)?;
    if !basis.is_full() {
        return Err(Error::NotDense);
    }
    prime_report(&DeltaMemo::new(spec, config), &basis)
}
