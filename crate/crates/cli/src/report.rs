//! Serializable reports. Big integers are decimal strings.

use arithlevel::level::{Interpretation, LevelReport};
use arithlevel::primeset::{prime_factors, PrimeReport};
use arithlevel::Config;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

/// `2^17 * 7` style factorization; `1` for one.
pub fn factored(x: &BigUint) -> String {
    if x.is_one() {
        return "1".into();
    }
    if x.is_zero() {
        return "0".into();
    }
    let Ok(primes) = prime_factors(&BigInt::from(x.clone()), &Config::default()) else {
        return x.to_string();
    };
    let mut rest = x.clone();
    let mut parts = Vec::new();
    for p in primes {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        parts.push(if e == 1 {
            p.to_string()
        } else {
            format!("{p}^{e}")
        });
    }
    parts.join(" * ")
}

pub fn factored_u64(x: u64) -> String {
    factored(&BigUint::from(x))
}

#[derive(Clone, Debug, Serialize)]
pub struct EvenTest {
    pub delta_q: String,
    pub delta_4q: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimesJson {
    pub gram_det: String,
    pub candidates: Vec<u64>,
    pub exceptional: Vec<u64>,
    pub undecided: Vec<u64>,
    pub pi_tilde: Vec<u64>,
    pub q: u64,
    pub even_test: Option<EvenTest>,
}

impl From<&PrimeReport> for PrimesJson {
    fn from(r: &PrimeReport) -> Self {
        PrimesJson {
            gram_det: r.gram_det.to_string(),
            candidates: r.candidates.clone(),
            exceptional: r.exceptional.clone(),
            undecided: r.undecided.clone(),
            pi_tilde: r.pi_tilde.clone(),
            q: r.q,
            even_test: r.even_test.as_ref().map(|(a, b)| EvenTest {
                delta_q: a.to_string(),
                delta_4q: b.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TimingsJson {
    pub density_ms: f64,
    pub primes_ms: f64,
    pub level_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeJson {
    pub dense: bool,
    pub ambient: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found_transvection: Option<Vec<i32>>,
    #[serde(flatten)]
    pub primes: PrimesJson,
    pub level: u64,
    pub level_factored: String,
    pub exponents: Vec<(u64, u32)>,
    pub index: String,
    pub index_factored: String,
    pub interpretation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<TimingsJson>,
}

pub fn interpretation_name(i: Interpretation) -> &'static str {
    match i {
        Interpretation::ArithmeticAssumed => "arithmetic-assumed",
        Interpretation::MinimalOvergroup => "minimal-overgroup",
    }
}

impl AnalyzeJson {
    pub fn new(ambient: String, r: &LevelReport, timings: bool) -> Self {
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        AnalyzeJson {
            dense: true,
            ambient,
            found_transvection: r.found_transvection.as_ref().map(|w| w.letters().to_vec()),
            primes: PrimesJson::from(&r.primes),
            level: r.level,
            level_factored: factored_u64(r.level),
            exponents: r.exponents.clone(),
            index: r.index.to_string(),
            index_factored: factored(&r.index),
            interpretation: interpretation_name(r.interpretation),
            timings: timings.then(|| TimingsJson {
                density_ms: ms(r.timings.density),
                primes_ms: ms(r.timings.primes),
                level_ms: ms(r.timings.level),
            }),
        }
    }

    pub fn human(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("group       {}\n", self.ambient));
        s.push_str("dense       true\n");
        if let Some(w) = &self.found_transvection {
            s.push_str(&format!("transvection word {w:?}\n"));
        }
        s.push_str(&format!("candidates  {:?}\n", self.primes.candidates));
        s.push_str(&format!("Pi          {:?}\n", self.primes.exceptional));
        s.push_str(&format!("Pi~         {:?}\n", self.primes.pi_tilde));
        if !self.primes.undecided.is_empty() {
            s.push_str(&format!("undecided   {:?}\n", self.primes.undecided));
        }
        s.push_str(&format!(
            "level       {} = {}\n",
            self.level, self.level_factored
        ));
        s.push_str(&format!(
            "index       {} = {}\n",
            self.index, self.index_factored
        ));
        s.push_str(&format!("reading     {}\n", self.interpretation));
        if let Some(t) = &self.timings {
            s.push_str(&format!(
                "time        density {:.1} ms, primes {:.1} ms, level {:.1} ms\n",
                t.density_ms, t.primes_ms, t.level_ms
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_forms() {
        assert_eq!(factored(&BigUint::from(917504u32)), "2^17 * 7");
        assert_eq!(factored(&BigUint::from(31u32)), "31");
        assert_eq!(factored(&BigUint::one()), "1");
        assert_eq!(factored_u64(45), "3^2 * 5");
    }
}
