//! Zariski density of a group containing a known transvection `t`: the group
//! is dense iff the normal closure `<t>^H` is absolutely irreducible, i.e.
//! iff the rational enveloping algebra of `<t>^H` is all of `M_n(Q)`.

use std::collections::VecDeque;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gammas::{Ambient, Kind};
use crate::group::{GroupSpec, Transvection};
use crate::intmat::{GroupWord, IntMatrix, RationalSpan};

/// An element of `<t>^H` with the word it was built from, when `t` itself is
/// known as a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub matrix: IntMatrix,
    pub word: Option<GroupWord>,
}

/// Linearly independent elements spanning the enveloping algebra of `<t>^H`.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    n: usize,
    elements: Vec<AlgebraElement>,
    span: RationalSpan,
}

impl AlgebraBasis {
    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.n * self.n
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    pub fn span(&self) -> &RationalSpan {
        &self.span
    }

    fn insert(&mut self, e: AlgebraElement) -> Result<bool> {
        let grew = self.span.insert(e.matrix.entries())?;
        if grew {
            self.elements.push(e);
        }
        Ok(grew)
    }
}

/// The designated transvection of `spec` and its word, if it has one.
pub fn transvection_of(spec: &GroupSpec) -> Result<(IntMatrix, Option<GroupWord>)> {
    let (t, w) = match spec.transvection() {
        None => return Err(Error::NoTransvectionFound),
        Some(Transvection::Word(w)) => (spec.eval(w)?, Some(w.clone())),
        Some(Transvection::Matrix(m)) => (m.clone(), None),
    };
    if !t.is_transvection() {
        return Err(Error::NotATransvection);
    }
    Ok((t, w))
}

/// Closure of `{1, t}` first under conjugation by the generators and their
/// inverses, then under multiplication.
pub fn algebra_basis(
    gens: &[IntMatrix],
    inverses: &[IntMatrix],
    t: &IntMatrix,
    t_word: Option<&GroupWord>,
) -> Result<AlgebraBasis> {
    if !t.is_transvection() {
        return Err(Error::NotATransvection);
    }
    if let Some(w) = t_word {
        w.check(gens.len())?;
    }
    let n = t.degree();
    let mut basis = AlgebraBasis {
        n,
        elements: Vec::new(),
        span: RationalSpan::new(n * n),
    };
    basis.insert(AlgebraElement {
        matrix: IntMatrix::identity(n),
        word: t_word.map(|_| GroupWord::empty()),
    })?;
    let seed = AlgebraElement {
        matrix: t.clone(),
        word: t_word.cloned(),
    };
    basis.insert(seed.clone())?;

    let mut conjugates = vec![seed.clone()];
    let mut queue = VecDeque::from([seed]);
    while let Some(e) = queue.pop_front() {
        for (i, (g, gi)) in gens.iter().zip(inverses).enumerate() {
            let letter = i as i32 + 1;
            for (c, ci, l) in [(g, gi, letter), (gi, g, -letter)] {
                let next = AlgebraElement {
                    matrix: ci.mul(&e.matrix).mul(c),
                    word: e
                        .word
                        .as_ref()
                        .map(|w| w.conjugate_by(&GroupWord::new(vec![l]))),
                };
                if basis.insert(next.clone())? {
                    conjugates.push(next.clone());
                    queue.push_back(next);
                }
                if basis.is_full() {
                    return Ok(basis);
                }
            }
        }
    }

    let mut k = 0;
    while k < basis.elements.len() && !basis.is_full() {
        let b = basis.elements[k].clone();
        for c in &conjugates {
            let next = AlgebraElement {
                matrix: b.matrix.mul(&c.matrix),
                word: match (&b.word, &c.word) {
                    (Some(x), Some(y)) => Some(x.concat(y)),
                    _ => None,
                },
            };
            basis.insert(next)?;
            if basis.is_full() {
                break;
            }
        }
        k += 1;
    }
    Ok(basis)
}

/// The algebra basis for the designated transvection of `spec`.
pub fn basis_for(spec: &GroupSpec) -> Result<AlgebraBasis> {
    let (t, w) = transvection_of(spec)?;
    let gens = spec.integral_generators();
    let inverses = inverses_of(spec, &gens)?;
    algebra_basis(&gens, &inverses, &t, w.as_ref())
}

fn inverses_of(spec: &GroupSpec, gens: &[IntMatrix]) -> Result<Vec<IntMatrix>> {
    let mut inv = spec.inverses().to_vec();
    for g in &gens[inv.len()..] {
        inv.push(g.invert_unimodular()?);
    }
    Ok(inv)
}

/// Density is decided here for `SL(n)` with `n` odd and for `Sp(n)`.
pub fn check_scope(ambient: &Ambient) -> Result<()> {
    if ambient.kind() == Kind::SL && ambient.degree().is_multiple_of(2) {
        return Err(Error::UnsupportedDegreeParity {
            n: ambient.degree(),
        });
    }
    Ok(())
}

pub fn is_dense(spec: &GroupSpec) -> Result<bool> {
    check_scope(&spec.ambient())?;
    Ok(basis_for(spec)?.is_full())
}

/// Rank of the enveloping algebra of `<gens>` itself.
pub fn enveloping_rank(gens: &[IntMatrix]) -> Result<usize> {
    let Some(first) = gens.first() else {
        return Ok(0);
    };
    let n = first.degree();
    let mut span = RationalSpan::new(n * n);
    let mut elems = vec![IntMatrix::identity(n)];
    span.insert(elems[0].entries())?;
    let mut k = 0;
    while k < elems.len() && span.rank() < n * n {
        for g in gens {
            let x = elems[k].mul(g);
            if span.insert(x.entries())? {
                elems.push(x);
            }
        }
        k += 1;
    }
    Ok(span.rank())
}

/// Breadth-first search for a transvection among reduced words of length at
/// most `depth`, then among commutators of short words. Letters are tried in
/// the order `1, -1, 2, -2, ...`.
pub fn find_transvection(spec: &GroupSpec, depth: usize) -> Option<GroupWord> {
    const COMMUTATOR_POOL: usize = 300;
    let gens = spec.generators();
    let inverses = spec.inverses();
    let letters: Vec<i32> = (1..=gens.len() as i32).flat_map(|i| [i, -i]).collect();
    let matrix = |l: i32| {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            &gens[i]
        } else {
            &inverses[i]
        }
    };
    let mut pool: Vec<(GroupWord, IntMatrix, IntMatrix)> = Vec::new();
    let mut layer: Vec<(GroupWord, IntMatrix, IntMatrix)> = vec![(
        GroupWord::empty(),
        IntMatrix::identity(spec.degree()),
        IntMatrix::identity(spec.degree()),
    )];
    for len in 1..=depth {
        let mut next = Vec::new();
        for (w, g, gi) in &layer {
            for &l in &letters {
                if w.letters().last() == Some(&-l) {
                    continue;
                }
                let h = g.mul(matrix(l));
                if h.is_transvection() {
                    return Some(w.concat(&GroupWord::new(vec![l])));
                }
                if len < depth {
                    let hi = matrix(-l).mul(gi);
                    next.push((w.concat(&GroupWord::new(vec![l])), h, hi));
                }
            }
        }
        if 2 * len <= depth.max(2) {
            pool.extend(
                next.iter()
                    .take(COMMUTATOR_POOL.saturating_sub(pool.len()))
                    .cloned(),
            );
        }
        layer = next;
    }
    for (i, (a, x, xi)) in pool.iter().enumerate() {
        for (b, y, yi) in &pool[i + 1..] {
            let c = xi.mul(yi).mul(x).mul(y);
            if c.is_transvection() {
                return Some(a.inverse().concat(&b.inverse()).concat(a).concat(b));
            }
        }
    }
    None
}

/// Entries of `t - 1` off the diagonal that are nonzero.
pub fn off_diagonal_entries(t: &IntMatrix) -> Vec<BigInt> {
    let n = t.degree();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && t.get(i, j) != &BigInt::from(0) {
                out.push(t.get(i, j).clone());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn full_group_has_full_algebra() {
        let sl3 = Ambient::sl(3).unwrap();
        let spec = GroupSpec::new(sl3, sl3.elementary_generators(1))
            .unwrap()
            .with_transvection(Transvection::Word(GroupWord::new(vec![1])))
            .unwrap();
        assert_eq!(basis_for(&spec).unwrap().rank(), 9);
        assert!(is_dense(&spec).unwrap());
    }

    #[test]
    fn single_transvection_spans_two() {
        let t = IntMatrix::elementary(3, 0, 1, 1);
        let ti = t.invert_unimodular().unwrap();
        let b = algebra_basis(std::slice::from_ref(&t), &[ti], &t, None).unwrap();
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn words_match_matrices() {
        let spec = families::beta(2, false).unwrap();
        let b = basis_for(&spec).unwrap();
        assert_eq!(b.rank(), 9);
        for e in b.elements() {
            assert_eq!(spec.eval(e.word.as_ref().unwrap()).unwrap(), e.matrix);
        }
    }

    #[test]
    fn scope_and_errors() {
        let sl4 = Ambient::sl(4).unwrap();
        let spec = GroupSpec::new(sl4, sl4.elementary_generators(1))
            .unwrap()
            .with_transvection(Transvection::Word(GroupWord::new(vec![1])))
            .unwrap();
        assert_eq!(
            is_dense(&spec),
            Err(Error::UnsupportedDegreeParity { n: 4 })
        );
        let id = IntMatrix::identity(3);
        assert_eq!(
            algebra_basis(
                std::slice::from_ref(&id),
                std::slice::from_ref(&id),
                &id,
                None
            )
            .unwrap_err(),
            Error::NotATransvection
        );
    }

    #[test]
    fn finds_transvections() {
        let sl3 = Ambient::sl(3).unwrap();
        let spec = GroupSpec::new(sl3, vec![IntMatrix::elementary(3, 0, 1, 1)]).unwrap();
        assert_eq!(find_transvection(&spec, 1), Some(GroupWord::new(vec![1])));
        let spec = GroupSpec::new(sl3, vec![IntMatrix::identity(3)]).unwrap();
        assert_eq!(find_transvection(&spec, 4), None);
        let spec = families::beta(1, false).unwrap();
        let w = find_transvection(&spec, 10).unwrap();
        assert!(spec.eval(&w).unwrap().is_transvection());
    }
}
