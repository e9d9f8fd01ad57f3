//! Finitely generated subgroups of `SL(n,Z)` / `Sp(n,Z)` given by generators.

use crate::error::{Error, Result};
use crate::gammas::Ambient;
use crate::intmat::{GroupWord, IntMatrix};

/// A designated transvection, either as a matrix or as a word in the
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transvection {
    Word(GroupWord),
    Matrix(IntMatrix),
}

/// A subgroup `H = <S>` of an ambient group, with an optional designated
/// transvection and an optional principal congruence subgroup of level
/// `pcs_level` included among the generators.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    ambient: Ambient,
    generators: Vec<IntMatrix>,
    inverses: Vec<IntMatrix>,
    transvection: Option<Transvection>,
    pcs_level: Option<u64>,
}

impl GroupSpec {
    /// Validates every generator against the ambient group.
    pub fn new(ambient: Ambient, generators: Vec<IntMatrix>) -> Result<Self> {
        let mut inverses = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            if !ambient.contains(g) {
                return Err(Error::NotInAmbient { index });
            }
            inverses.push(g.invert_unimodular()?);
        }
        Ok(GroupSpec {
            ambient,
            generators,
            inverses,
            transvection: None,
            pcs_level: None,
        })
    }

    pub fn with_transvection(mut self, t: Transvection) -> Result<Self> {
        match &t {
            Transvection::Word(w) => w.check(self.generators.len())?,
            Transvection::Matrix(m) => {
                if m.degree() != self.degree() {
                    return Err(Error::DimensionMismatch {
                        expected: self.degree(),
                        got: m.degree(),
                    });
                }
            }
        }
        self.transvection = Some(t);
        Ok(self)
    }

    /// Adds the principal congruence subgroup of level `m` as a generator.
    pub fn with_pcs_level(mut self, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidModulus { modulus: m });
        }
        self.pcs_level = Some(m);
        Ok(self)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn degree(&self) -> usize {
        self.ambient.degree()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn inverses(&self) -> &[IntMatrix] {
        &self.inverses
    }

    pub fn transvection(&self) -> Option<&Transvection> {
        self.transvection.as_ref()
    }

    pub fn pcs_level(&self) -> Option<u64> {
        self.pcs_level
    }

    pub fn eval(&self, w: &GroupWord) -> Result<IntMatrix> {
        w.eval(&self.generators, &self.inverses)
    }

    /// The designated transvection as a matrix, if one is set.
    pub fn transvection_matrix(&self) -> Result<Option<IntMatrix>> {
        match &self.transvection {
            None => Ok(None),
            Some(Transvection::Matrix(m)) => Ok(Some(m.clone())),
            Some(Transvection::Word(w)) => self.eval(w).map(Some),
        }
    }

    /// The generating set with the principal congruence subgroup, if any,
    /// replaced by the elementary generators of its level.
    pub fn integral_generators(&self) -> Vec<IntMatrix> {
        let mut gens = self.generators.clone();
        if let Some(m) = self.pcs_level {
            gens.extend(self.ambient.elementary_generators(m));
        }
        gens
    }
}
