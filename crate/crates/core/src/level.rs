//! Level and index of the closure of a dense group in the congruence
//! topology, and membership testing modulo the level.

use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::arith::prime_divisors;
use crate::config::Config;
use crate::density;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, Transvection};
use crate::intmat::{GroupWord, IntMatrix};
use crate::modgroup::{image_chain, DeltaMemo, ResidueMatrix};
use crate::primeset::{prime_report, PrimeReport};

/// How the reported index should be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interpretation {
    /// The caller asserted that the group is arithmetic, so the index is
    /// `|Gamma_n : H|` and the level is that of `H`.
    ArithmeticAssumed,
    /// The index and level are those of the minimal arithmetic overgroup
    /// `Gamma_{n,M} H`.
    MinimalOvergroup,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub density: Duration,
    pub primes: Duration,
    pub level: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub primes: PrimeReport,
    /// Transvection used, when it was found by search.
    pub found_transvection: Option<GroupWord>,
    pub level: u64,
    /// `(p, mu_p)` with `level = prod p^mu_p`.
    pub exponents: Vec<(u64, u32)>,
    /// `delta_H(level)`.
    pub index: BigUint,
    pub interpretation: Interpretation,
    pub timings: Timings,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Word length searched for a transvection when none is designated.
    pub find_depth: usize,
    pub assume_arithmetic: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            find_depth: 10,
            assume_arithmetic: false,
        }
    }
}

fn mul_checked(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b)
        .ok_or(Error::ModulusTooLarge { modulus: a })
}

/// Level of the maximal principal congruence subgroup, given the primes
/// dividing it. Primes are scanned in ascending order and rescanned after
/// every increment.
pub fn level_max_pcs(memo: &DeltaMemo<'_>, sigma: &[u64]) -> Result<(u64, Vec<(u64, u32)>)> {
    let mut sigma = sigma.to_vec();
    sigma.sort_unstable();
    sigma.dedup();
    let mut mu = vec![1u32; sigma.len()];
    let mut z = Vec::with_capacity(sigma.len());
    for (i, _) in sigma.iter().enumerate() {
        let mut zp = 1u64;
        for (j, &q) in sigma.iter().enumerate() {
            if i != j {
                zp = mul_checked(zp, q)?;
            }
        }
        z.push(zp);
    }
    'scan: loop {
        for (i, &p) in sigma.iter().enumerate() {
            let lo = mul_checked(p.pow(mu[i]), z[i])?;
            let hi = mul_checked(lo, p)?;
            if memo.get(hi)? > memo.get(lo)? {
                mu[i] += 1;
                log::debug!("level: mu_{p} -> {}", mu[i]);
                continue 'scan;
            }
        }
        break;
    }
    let exps: Vec<(u64, u32)> = sigma.into_iter().zip(mu).collect();
    let mut level = 1u64;
    for &(p, a) in &exps {
        level = mul_checked(level, p.pow(a))?;
    }
    Ok((level, exps))
}

/// Density test, prime sets, level and index for a group with a designated
/// (or findable) transvection.
pub fn analyze(spec: &GroupSpec, config: &Config, opts: &AnalyzeOptions) -> Result<LevelReport> {
    density::check_scope(&spec.ambient())?;
    let start = Instant::now();
    let mut found_transvection = None;
    let owned;
    let spec = if spec.transvection().is_none() {
        let w =
            density::find_transvection(spec, opts.find_depth).ok_or(Error::NoTransvectionFound)?;
        found_transvection = Some(w.clone());
        owned = spec.clone().with_transvection(Transvection::Word(w))?;
        &owned
    } else {
        spec
    };
    let basis = density::basis_for(spec)?;
    if !basis.is_full() {
        return Err(Error::NotDense);
    }
    let t_density = start.elapsed();

    let memo = DeltaMemo::new(spec, config);
    let start = Instant::now();
    let primes = prime_report(&memo, &basis)?;
    if let Some(&p) = primes.undecided.first() {
        return Err(Error::Undecided { prime: p });
    }
    let t_primes = start.elapsed();

    let start = Instant::now();
    let (level, exponents) = level_max_pcs(&memo, &primes.pi_tilde)?;
    let index = memo.get(level)?;
    check_level(&memo, level, &primes.pi_tilde)?;
    let t_level = start.elapsed();

    Ok(LevelReport {
        primes,
        found_transvection,
        level,
        exponents,
        index,
        interpretation: if opts.assume_arithmetic {
            Interpretation::ArithmeticAssumed
        } else {
            Interpretation::MinimalOvergroup
        },
        timings: Timings {
            density: t_density,
            primes: t_primes,
            level: t_level,
        },
    })
}

/// `delta(level * p) = delta(level)` for `p` in `sigma`, and
/// `delta(level / p) < delta(level)` for `p | level`.
fn check_level(memo: &DeltaMemo<'_>, level: u64, sigma: &[u64]) -> Result<()> {
    let at = memo.get(level)?;
    for &p in sigma {
        let above = memo.get(mul_checked(level, p)?)?;
        assert_eq!(above, at, "delta grows past the level at {p}");
    }
    for p in prime_divisors(level) {
        let below = memo.get(level / p)?;
        assert!(below < at, "level is not minimal at {p}");
    }
    Ok(())
}

/// Membership of `g` in a group of level `level`: `g` lies in `H` iff its
/// image modulo the level lies in the image of `H`.
pub fn is_member(spec: &GroupSpec, level: u64, g: &IntMatrix, config: &Config) -> Result<bool> {
    if !spec.ambient().contains(g) {
        return Err(Error::NotInAmbient { index: 0 });
    }
    if level == 1 {
        return Ok(true);
    }
    let chain = image_chain(spec, level, config)?;
    chain.contains(&ResidueMatrix::reduce(g, level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn beta_one() {
        let spec = families::beta(1, true).unwrap();
        let r = analyze(&spec, &Config::default(), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.level, 5);
        assert_eq!(r.index, BigUint::from(31u8));
        assert_eq!(r.exponents, vec![(5, 1)]);
    }

    #[test]
    fn mixed_level() {
        let spec = families::mixed_level_example().unwrap();
        let memo = DeltaMemo::new(&spec, &Config::default());
        assert_eq!(level_max_pcs(&memo, &[5, 3]).unwrap().0, 45);
        assert_eq!(level_max_pcs(&memo, &[]).unwrap().0, 1);
    }

    #[test]
    fn membership() {
        let spec = families::beta(1, true).unwrap();
        let c = Config::default();
        assert!(is_member(&spec, 5, &IntMatrix::identity(3), &c).unwrap());
        assert!(is_member(&spec, 5, &IntMatrix::elementary(3, 2, 0, 5), &c).unwrap());
        assert!(is_member(&spec, 5, &IntMatrix::identity(4), &c).is_err());
    }

    #[test]
    fn not_dense() {
        let spec = families::g8().unwrap();
        assert_eq!(
            analyze(&spec, &Config::default(), &AnalyzeOptions::default()).unwrap_err(),
            Error::NotDense
        );
    }
}
