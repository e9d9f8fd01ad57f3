//! Exact integer matrices, words over generators and rational row spans.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A square matrix with arbitrary-precision integer entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn from_entries(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(IntMatrix { n, entries })
    }

    /// Builds a matrix from rows of machine integers.
    ///
    /// Panics if the rows do not form a square matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), n, "matrix rows must have length {n}");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { n, entries }
    }

    /// The elementary matrix `1 + m e_{ij}` (0-based indices, `i != j`).
    pub fn elementary(n: usize, i: usize, j: usize, m: impl Into<BigInt>) -> Self {
        assert!(i != j && i < n && j < n);
        let mut g = Self::identity(n);
        g.entries[i * n + j] = m.into();
        g
    }

    /// Block-diagonal matrix with the given blocks along the diagonal.
    pub fn block_diag(blocks: &[&IntMatrix]) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut g = Self::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    g.entries[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.n;
        }
        g
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n.max(1))
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n;
        self.entries.iter().enumerate().all(|(k, x)| {
            if k / n == k % n {
                x.is_one()
            } else {
                x.is_zero()
            }
        })
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * &other.entries[k * n + j];
                }
                entries.push(acc);
            }
        }
        IntMatrix { n, entries }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        IntMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        IntMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entries[j * n + i].clone());
            }
        }
        IntMatrix { n, entries }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Trace of `self * other` without forming the product.
    pub fn trace_product(&self, other: &IntMatrix) -> BigInt {
        let n = self.n;
        let mut acc = BigInt::zero();
        for i in 0..n {
            for k in 0..n {
                acc += &self.entries[i * n + k] * &other.entries[k * n + i];
            }
        }
        acc
    }

    /// Non-negative power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = IntMatrix::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.rows().map(|r| r.to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut span = RationalSpan::new(self.n);
        for row in self.rows() {
            // rank of the row space; dimension check cannot fail here
            let _ = span.insert(row);
        }
        span.rank()
    }

    /// Exact inverse of a matrix with determinant `±1`.
    pub fn invert_unimodular(&self) -> Result<IntMatrix> {
        let det = self.det();
        if det.abs() != BigInt::one() {
            return Err(Error::NonUnimodular {
                det: det.to_string(),
            });
        }
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = self
            .rows()
            .enumerate()
            .map(|(i, r)| {
                let mut row: Vec<BigRational> = r
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("unimodular matrix is nonsingular");
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let v = &a[col][c] * &f;
                        a[r][c] -= v;
                    }
                }
            }
        }
        let entries = a
            .into_iter()
            .flat_map(|row| row.into_iter().skip(n))
            .map(|x| {
                debug_assert!(x.is_integer());
                x.to_integer()
            })
            .collect();
        Ok(IntMatrix { n, entries })
    }

    /// True iff `g - 1` has rank one and squares to zero.
    pub fn is_transvection(&self) -> bool {
        let d = self.sub(&IntMatrix::identity(self.n));
        if d.entries.iter().all(Zero::is_zero) {
            return false;
        }
        if !d.mul(&d).entries.iter().all(Zero::is_zero) {
            return false;
        }
        d.rank() == 1
    }

    /// Largest absolute value of an entry, in bits.
    pub fn max_bits(&self) -> u64 {
        self.entries.iter().map(|x| x.bits()).max().unwrap_or(0)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A word in a list of generators: signed 1-based generator indices, negative
/// entries denote inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupWord(pub Vec<i32>);

impl GroupWord {
    pub fn new(letters: Vec<i32>) -> Self {
        GroupWord(letters)
    }

    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&x| -x).collect())
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        GroupWord(letters)
    }

    /// Conjugate `w^-1 self w`.
    pub fn conjugate_by(&self, w: &GroupWord) -> GroupWord {
        w.inverse().concat(self).concat(w)
    }

    pub fn check(&self, count: usize) -> Result<()> {
        for &x in &self.0 {
            if x == 0 || x.unsigned_abs() as usize > count {
                return Err(Error::WordNotInGroup {
                    index: x as i64,
                    count,
                });
            }
        }
        Ok(())
    }

    /// Folds the word left to right with `mul`, looking up each letter with
    /// `letter` (which receives the signed index).
    pub fn eval_with<T>(
        &self,
        identity: T,
        mut letter: impl FnMut(i32) -> T,
        mut mul: impl FnMut(&T, &T) -> T,
    ) -> T {
        self.0
            .iter()
            .fold(identity, |acc, &x| mul(&acc, &letter(x)))
    }

    /// Evaluates over the integers given the generators and their inverses.
    pub fn eval(&self, gens: &[IntMatrix], inverses: &[IntMatrix]) -> Result<IntMatrix> {
        self.check(gens.len())?;
        let n = gens.first().map_or(0, |g| g.degree());
        Ok(self.eval_with(
            IntMatrix::identity(n),
            |x| {
                let i = x.unsigned_abs() as usize - 1;
                if x > 0 {
                    gens[i].clone()
                } else {
                    inverses[i].clone()
                }
            },
            |a, b| a.mul(b),
        ))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The rational span of a set of integer vectors, kept as primitive integer
/// rows in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSpan {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl RationalSpan {
    pub fn new(dim: usize) -> Self {
        RationalSpan {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let (a, b) = (row[p].clone(), v[p].clone());
            let g = a.gcd(&b);
            let (a, b) = (a / &g, b / &g);
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x * &a - r * &b;
            }
            make_primitive(&mut v);
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        self.check_len(v)?;
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &[BigInt]) -> Result<bool> {
        self.check_len(v)?;
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        if v[p].is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let (a, b) = (v[p].clone(), row[p].clone());
            let g = a.gcd(&b);
            let (a, b) = (a / &g, b / &g);
            for (x, y) in row.iter_mut().zip(&v) {
                *x = &*x * &a - y * &b;
            }
            make_primitive(row);
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        Ok(true)
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> IntMatrix {
        IntMatrix::from_rows(&[[0, -1, 1], [0, -1, 2], [-1, 0, 1]])
    }

    #[test]
    fn inverse_of_identity() {
        let id = IntMatrix::identity(4);
        assert_eq!(id.invert_unimodular().unwrap(), id);
    }

    #[test]
    fn inverse_of_elementary() {
        let g = IntMatrix::elementary(3, 0, 1, 5);
        assert_eq!(
            g.invert_unimodular().unwrap(),
            IntMatrix::elementary(3, 0, 1, -5)
        );
    }

    #[test]
    fn inverse_of_x1_multiplies_back() {
        let g = x1();
        let gi = g.invert_unimodular().unwrap();
        assert!(g.mul(&gi).is_identity());
        assert!(gi.mul(&g).is_identity());
    }

    #[test]
    fn non_unimodular_is_rejected() {
        let g = IntMatrix::from_rows(&[[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(
            g.invert_unimodular(),
            Err(Error::NonUnimodular { .. })
        ));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let g = IntMatrix::from_rows(&[[2, -3, 1], [4, 0, 5], [-1, 7, 2]]);
        // 2(0-35) + 3(8+5) + 1(28-0)
        assert_eq!(g.det(), BigInt::from(-70 + 39 + 28));
        let zero_pivot = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(zero_pivot.det(), BigInt::from(-1));
    }

    #[test]
    fn transvection_predicate() {
        assert!(IntMatrix::elementary(3, 0, 2, 7).is_transvection());
        assert!(!IntMatrix::identity(3).is_transvection());
        // unipotent but rank 2
        let u = IntMatrix::from_rows(&[[1, 1, 0], [0, 1, 1], [0, 0, 1]]);
        assert!(!u.is_transvection());
        // rank one but not unipotent
        let d = IntMatrix::from_rows(&[[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(!d.is_transvection());
    }

    #[test]
    fn b1_word_is_transvection_at_t1() {
        let x = x1();
        let y = IntMatrix::from_rows(&[[-1, 0, 0], [-1, 1, -1], [1, 0, -1]]);
        let gens = vec![x.clone(), y.clone()];
        let invs: Vec<_> = gens
            .iter()
            .map(|g| g.invert_unimodular().unwrap())
            .collect();
        let b1 = GroupWord::new(vec![-1, 2, 2, 2, 1, 2, 2, 1, -2, 1]);
        let t = b1.eval(&gens, &invs).unwrap();
        assert!(t.is_transvection());
        assert_eq!(
            t,
            IntMatrix::from_rows(&[[1, 1, -2], [0, -3, 8], [0, -2, 5]])
        );
    }

    #[test]
    fn word_index_out_of_range() {
        let gens = vec![IntMatrix::identity(3)];
        let w = GroupWord::new(vec![1, -2]);
        assert!(matches!(
            w.eval(&gens, &gens),
            Err(Error::WordNotInGroup {
                index: -2,
                count: 1
            })
        ));
    }

    fn unit(dim: usize, k: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); dim];
        v[k] = BigInt::one();
        v
    }

    #[test]
    fn span_insert_examples() {
        let mut sp = RationalSpan::new(4);
        assert!(sp.insert(&unit(4, 0)).unwrap());
        assert_eq!(sp.rank(), 1);
        assert!(!sp.insert(&unit(4, 0)).unwrap());
        assert_eq!(sp.rank(), 1);

        let mut full = RationalSpan::new(9);
        for k in 0..9 {
            assert!(full.insert(&unit(9, k)).unwrap());
        }
        assert_eq!(full.rank(), 9);
        assert!(matches!(
            full.insert(&unit(4, 0)),
            Err(Error::DimensionMismatch {
                expected: 9,
                got: 4
            })
        ));
    }

    #[test]
    fn span_stays_reduced() {
        let mut sp = RationalSpan::new(3);
        let v = |a: i64, b: i64, c: i64| vec![BigInt::from(a), BigInt::from(b), BigInt::from(c)];
        sp.insert(&v(2, 4, 6)).unwrap();
        sp.insert(&v(0, 3, 1)).unwrap();
        assert!(sp.contains(&v(2, 7, 7)).unwrap());
        assert!(!sp.contains(&v(0, 0, 1)).unwrap());
        for (k, &p) in sp.pivots().iter().enumerate() {
            for (j, row) in sp.rows().iter().enumerate() {
                if j != k {
                    assert!(row[p].is_zero());
                }
            }
        }
        assert_eq!(sp.rows()[0], v(3, 0, 7));
    }
}
