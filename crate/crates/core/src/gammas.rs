//! The ambient groups `SL(n,Z)` and `Sp(n,Z)`: membership, elementary
//! generators of level `m`, and orders of their images modulo `m`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::arith::{big_pow, factor_u64};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    SL,
    Sp,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::SL => write!(f, "SL"),
            Kind::Sp => write!(f, "Sp"),
        }
    }
}

/// An ambient group `SL(n, -)` or `Sp(n, -)` of a fixed degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    kind: Kind,
    n: usize,
}

impl Ambient {
    /// Ambient group of an input group; requires `n > 2` (and `n` even for `Sp`).
    pub fn new(kind: Kind, n: usize) -> Result<Self> {
        if n <= 2 {
            return Err(Error::InvalidDegree {
                kind: kind_name(kind),
                n,
            });
        }
        Self::finite(kind, n)
    }

    /// Ambient group for computations over `Z/m` only, where degree 2 is
    /// allowed.
    pub fn finite(kind: Kind, n: usize) -> Result<Self> {
        if n < 2 || (kind == Kind::Sp && !n.is_multiple_of(2)) {
            return Err(Error::InvalidDegree {
                kind: kind_name(kind),
                n,
            });
        }
        Ok(Ambient { kind, n })
    }

    pub fn sl(n: usize) -> Result<Self> {
        Self::new(Kind::SL, n)
    }

    pub fn sp(n: usize) -> Result<Self> {
        Self::new(Kind::Sp, n)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// The symplectic form `[[0, 1_s], [-1_s, 0]]`; `None` for `SL`.
    pub fn form(&self) -> Option<IntMatrix> {
        match self.kind {
            Kind::SL => None,
            Kind::Sp => Some(symplectic_form(self.n / 2)),
        }
    }

    /// Whether `g` lies in the ambient group over `Z`.
    pub fn contains(&self, g: &IntMatrix) -> bool {
        if g.degree() != self.n || !g.det().is_one() {
            return false;
        }
        match self.form() {
            None => true,
            Some(j) => g.mul(&j).mul(&g.transpose()) == j,
        }
    }

    /// The generating set of the elementary subgroup of level `m`.
    pub fn elementary_generators(&self, m: impl Into<BigInt>) -> Vec<IntMatrix> {
        let m: BigInt = m.into();
        let n = self.n;
        match self.kind {
            Kind::SL => {
                let mut out = Vec::with_capacity(n * (n - 1));
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            out.push(IntMatrix::elementary(n, i, j, m.clone()));
                        }
                    }
                }
                out
            }
            Kind::Sp => {
                let s = n / 2;
                let t = |i: usize, j: usize| IntMatrix::elementary(n, i, j, m.clone());
                let mut out = Vec::new();
                for i in 0..s {
                    for j in i + 1..s {
                        out.push(t(i, s + j).mul(&t(j, s + i)));
                        out.push(t(s + i, j).mul(&t(s + j, i)));
                    }
                }
                for i in 0..s {
                    out.push(t(i, s + i));
                    out.push(t(s + i, i));
                }
                out
            }
        }
    }

    /// Dimension over `F_p` of each layer `ker phi_{p^i} / ker phi_{p^(i+1)}`.
    pub fn layer_dim(&self) -> usize {
        match self.kind {
            Kind::SL => self.n * self.n - 1,
            Kind::Sp => {
                let s = self.n / 2;
                s * (2 * s + 1)
            }
        }
    }

    /// `|Sigma(n, p)|` for a prime `p`.
    pub fn order_mod_prime(&self, p: u64) -> BigUint {
        let n = self.n as u64;
        match self.kind {
            Kind::SL => {
                let mut acc = big_pow(p, n * (n - 1) / 2);
                for i in 2..=n {
                    acc *= big_pow(p, i) - BigUint::one();
                }
                acc
            }
            Kind::Sp => {
                let s = n / 2;
                let mut acc = big_pow(p, s * s);
                for i in 1..=s {
                    acc *= big_pow(p, 2 * i) - BigUint::one();
                }
                acc
            }
        }
    }

    /// `|Sigma(n, Z/p^a)|`.
    pub fn order_mod_prime_power(&self, p: u64, a: u32) -> BigUint {
        if a == 0 {
            return BigUint::one();
        }
        big_pow(p, (a as u64 - 1) * self.layer_dim() as u64) * self.order_mod_prime(p)
    }

    /// `|Sigma(n, Z/m)|`, multiplicative over the prime-power factors of `m`.
    pub fn order(&self, m: u64) -> BigUint {
        factor_u64(m)
            .into_iter()
            .map(|(p, a)| self.order_mod_prime_power(p, a))
            .product()
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, Z)", self.kind, self.n)
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::SL => "SL",
        Kind::Sp => "Sp",
    }
}

pub fn symplectic_form(s: usize) -> IntMatrix {
    let n = 2 * s;
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..s {
        rows[i][s + i] = 1;
        rows[s + i][i] = -1;
    }
    IntMatrix::from_rows(&rows)
}
