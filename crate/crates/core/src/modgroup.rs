//! Matrix groups over `Z/m`.
//!
//! The order of `phi_m(H)` is computed one prime-power component `p^a || m`
//! at a time. For each component the image modulo `p` is handled by a
//! base-and-transversal stabilizer chain acting on row vectors of `F_p^n`,
//! and the congruence kernel `ker phi_p` of the image is handled by linear
//! algebra over `F_p`: the kernel `ker phi_{p^i} / ker phi_{p^(i+1)}` is an
//! elementary abelian group whose elements are identified with their relics
//! `x mod p`, where `g = 1 + p^i x`.
//!
//! All chain elements are carried as matrices modulo the full modulus `m`
//! together with their inverses, so elements that become trivial on one
//! component can seed the computation on the next one.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{factor_u64, inv_mod_prime};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::gammas::Ambient;
use crate::group::GroupSpec;
use crate::intmat::{GroupWord, IntMatrix};

/// An `n x n` matrix over `Z/m` with entries in `0..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    modulus: u64,
    n: usize,
    entries: Vec<u64>,
}

impl ResidueMatrix {
    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut entries = vec![0; n * n];
        if modulus > 1 {
            for i in 0..n {
                entries[i * n + i] = 1;
            }
        }
        ResidueMatrix {
            modulus,
            n,
            entries,
        }
    }

    /// Entrywise reduction of an integer matrix.
    pub fn reduce(g: &IntMatrix, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let entries = g
            .entries()
            .iter()
            .map(|x| x.mod_floor(&m).to_u64().expect("residue fits in u64"))
            .collect();
        ResidueMatrix {
            modulus,
            n: g.degree(),
            entries,
        }
    }

    pub fn from_entries(n: usize, modulus: u64, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(ResidueMatrix {
            modulus,
            n,
            entries: entries.into_iter().map(|x| x % modulus).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        self.ring().is_identity(&self.entries)
    }

    pub fn mul(&self, other: &ResidueMatrix) -> ResidueMatrix {
        assert_eq!(self.modulus, other.modulus);
        ResidueMatrix {
            modulus: self.modulus,
            n: self.n,
            entries: self.ring().mul(&self.entries, &other.entries).into_vec(),
        }
    }

    /// Further reduction to a divisor of the modulus.
    pub fn reduce_to(&self, modulus: u64) -> ResidueMatrix {
        debug_assert_eq!(self.modulus % modulus, 0);
        ResidueMatrix {
            modulus,
            n: self.n,
            entries: self.entries.iter().map(|x| x % modulus).collect(),
        }
    }

    /// Determinant modulo `m`, via the integer representative.
    pub fn det(&self) -> u64 {
        let det = self.lift().det();
        det.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap()
    }

    /// The integer matrix with entries in `0..m`.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::from_entries(
            self.n,
            self.entries.iter().map(|&x| BigInt::from(x)).collect(),
        )
        .unwrap()
    }

    /// Inverse modulo `m`, through the rational inverse of a lift.
    pub fn inverse(&self) -> Result<ResidueMatrix> {
        let lift = self.lift();
        let det = lift.det();
        let m = BigInt::from(self.modulus);
        if !det.gcd(&m).is_one() {
            return Err(Error::NonInvertibleGenerator {
                modulus: self.modulus,
            });
        }
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from_integer(lift.get(i, j).clone())
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).unwrap();
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
        // adj = det * inverse is integral; inverse mod m = adj * det^-1
        let det_inv = mod_inverse(&det, &m);
        let entries = a
            .into_iter()
            .flat_map(|row| row.into_iter().skip(n))
            .map(|x| {
                let adj = (x * BigRational::from_integer(det.clone())).to_integer();
                (adj * &det_inv).mod_floor(&m).to_u64().unwrap()
            })
            .collect();
        Ok(ResidueMatrix {
            modulus: self.modulus,
            n,
            entries,
        })
    }

    fn ring(&self) -> Ring {
        Ring {
            n: self.n,
            m: self.modulus,
        }
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

/// Reduction modulo `m` of an integer matrix.
pub fn reduce_mod(g: &IntMatrix, m: u64) -> Result<ResidueMatrix> {
    if m < 2 {
        return Err(Error::InvalidModulus { modulus: m });
    }
    Ok(ResidueMatrix::reduce(g, m))
}

/// Evaluates a word modulo `m`.
pub fn eval_word_mod(
    w: &GroupWord,
    gens: &[ResidueMatrix],
    inverses: &[ResidueMatrix],
) -> Result<ResidueMatrix> {
    w.check(gens.len())?;
    let first = gens
        .first()
        .ok_or(Error::WordNotInGroup { index: 0, count: 0 })?;
    Ok(w.eval_with(
        ResidueMatrix::identity(first.degree(), first.modulus()),
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

#[derive(Clone, Copy, Debug)]
struct Ring {
    n: usize,
    m: u64,
}

/// A group element modulo the full modulus, with its inverse.
#[derive(Clone, Debug)]
struct Elt {
    g: Box<[u64]>,
    inv: Box<[u64]>,
}

impl Ring {
    fn mul(&self, a: &[u64], b: &[u64]) -> Box<[u64]> {
        let n = self.n;
        let m = self.m as u128;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            let row = &a[i * n..(i + 1) * n];
            for j in 0..n {
                let mut acc = 0u128;
                for k in 0..n {
                    acc += row[k] as u128 * b[k * n + j] as u128;
                }
                out[i * n + j] = (acc % m) as u64;
            }
        }
        out.into_boxed_slice()
    }

    fn is_identity(&self, a: &[u64]) -> bool {
        let n = self.n;
        let one = if self.m > 1 { 1 } else { 0 };
        a.iter()
            .enumerate()
            .all(|(k, &x)| x == if k / n == k % n { one } else { 0 })
    }

    fn identity(&self) -> Elt {
        let id = ResidueMatrix::identity(self.n, self.m)
            .entries
            .into_boxed_slice();
        Elt {
            g: id.clone(),
            inv: id,
        }
    }

    fn emul(&self, x: &Elt, y: &Elt) -> Elt {
        Elt {
            g: self.mul(&x.g, &y.g),
            inv: self.mul(&y.inv, &x.inv),
        }
    }

    /// `c^-1 x c`
    fn conj(&self, x: &Elt, c: &Elt) -> Elt {
        Elt {
            g: self.mul(&self.mul(&c.inv, &x.g), &c.g),
            inv: self.mul(&self.mul(&c.inv, &x.inv), &c.g),
        }
    }

    /// `x^-1 y^-1 x y`
    fn comm(&self, x: &Elt, y: &Elt) -> Elt {
        let xy = self.emul(x, y);
        let yx = self.emul(y, x);
        Elt {
            g: self.mul(&yx.inv, &xy.g),
            inv: self.mul(&xy.inv, &yx.g),
        }
    }

    fn pow(&self, x: &Elt, mut e: u64) -> Elt {
        let mut base = x.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.emul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.emul(&base, &base);
            }
        }
        acc
    }
}

fn inverse_elt(x: &Elt) -> Elt {
    Elt {
        g: x.inv.clone(),
        inv: x.g.clone(),
    }
}

/// One level of the stabilizer chain of the image modulo `p`.
#[derive(Clone, Debug, Default)]
struct Level {
    base: Vec<u64>,
    gens: Vec<usize>,
    /// Number of orbit points whose Schreier generators have been sifted,
    /// per generator.
    checked: Vec<usize>,
    orbit: Vec<u64>,
    index: HashMap<u64, u32>,
    transversal: Vec<Elt>,
}

/// Attained relics in one kernel layer, in semi-echelon form over `F_p`.
#[derive(Clone, Debug, Default)]
struct Layer {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    pivot_inv: Vec<u64>,
    reps: Vec<Elt>,
}

/// Stabilizer chain and kernel layers for one prime-power component `p^a`.
#[derive(Clone, Debug)]
struct Component {
    p: u64,
    a: u32,
    pa: u64,
    n: usize,
    top_gens: Vec<Elt>,
    levels: Vec<Level>,
    /// `layers[i - 1]` holds layer `i`, for `i` in `1..a`.
    layers: Vec<Layer>,
}

enum Sifted {
    Top {
        level: usize,
        g: Elt,
    },
    Layer {
        layer: usize,
        g: Elt,
        relic: Vec<u64>,
    },
    Kernel(Elt),
}

impl Component {
    fn new(p: u64, a: u32, n: usize) -> Self {
        Component {
            p,
            a,
            pa: p.pow(a),
            n,
            top_gens: Vec::new(),
            levels: Vec::new(),
            layers: vec![Layer::default(); a as usize - 1],
        }
    }

    fn encode(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0u64, |acc, &x| acc * self.p + x)
    }

    fn decode(&self, mut key: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let x = key % self.p;
                key /= self.p;
                x
            })
            .collect()
    }

    /// Row vector times matrix, modulo `p`.
    fn apply(&self, v: &[u64], g: &[u64]) -> Vec<u64> {
        let n = self.n;
        let p = self.p as u128;
        (0..n)
            .map(|j| {
                let mut acc = 0u128;
                for k in 0..n {
                    if v[k] != 0 {
                        acc += v[k] as u128 * (g[k * n + j] % self.p) as u128;
                    }
                }
                (acc % p) as u64
            })
            .collect()
    }

    fn is_one_mod(&self, g: &[u64], q: u64) -> bool {
        let n = self.n;
        g.iter().enumerate().all(|(k, &x)| {
            let want = if k / n == k % n { 1 % q } else { 0 };
            x % q == want
        })
    }

    /// Relic of `g = 1 + p^i x` modulo `p^a`.
    fn relic(&self, g: &[u64], i: u32) -> Vec<u64> {
        let n = self.n;
        let pi = self.p.pow(i);
        g.iter()
            .enumerate()
            .map(|(k, &x)| {
                let x = x % self.pa;
                let d = if k / n == k % n {
                    (x + self.pa - 1) % self.pa
                } else {
                    x
                };
                debug_assert_eq!(d % pi, 0);
                (d / pi) % self.p
            })
            .collect()
    }

    fn sift(&self, ring: &Ring, mut g: Elt, start: usize) -> Sifted {
        if !self.is_one_mod(&g.g, self.p) {
            for (l, level) in self.levels.iter().enumerate().skip(start) {
                let v = self.apply(&level.base, &g.g);
                match level.index.get(&self.encode(&v)) {
                    Some(&k) => {
                        let u = &level.transversal[k as usize];
                        g = Elt {
                            g: ring.mul(&g.g, &u.inv),
                            inv: ring.mul(&u.g, &g.inv),
                        };
                    }
                    None => return Sifted::Top { level: l, g },
                }
            }
            if !self.is_one_mod(&g.g, self.p) {
                return Sifted::Top {
                    level: self.levels.len(),
                    g,
                };
            }
        }
        for i in 1..self.a {
            let layer = &self.layers[i as usize - 1];
            let mut x = self.relic(&g.g, i);
            for (k, row) in layer.rows.iter().enumerate() {
                let c = x[layer.pivots[k]] * layer.pivot_inv[k] % self.p;
                if c == 0 {
                    continue;
                }
                for (xe, re) in x.iter_mut().zip(row) {
                    *xe = (*xe + (self.p - c) * re) % self.p;
                }
                let r = ring.pow(&inverse_elt(&layer.reps[k]), c);
                g = ring.emul(&g, &r);
            }
            if x.iter().any(|&e| e != 0) {
                return Sifted::Layer {
                    layer: i as usize,
                    g,
                    relic: x,
                };
            }
        }
        Sifted::Kernel(g)
    }

    fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for level in &self.levels {
            acc *= BigUint::from(level.orbit.len());
        }
        for layer in &self.layers {
            acc *= BigUint::from(self.p).pow(layer.rows.len() as u32);
        }
        acc
    }
}

/// Order and membership structure for a subgroup of `GL(n, Z/m)`.
#[derive(Clone, Debug)]
pub struct LayeredChain {
    n: usize,
    modulus: u64,
    components: Vec<Component>,
}

impl LayeredChain {
    /// Chain for the subgroup generated by `gens`.
    pub fn build(gens: &[ResidueMatrix], config: &Config) -> Result<Self> {
        Self::build_with_normal(gens, &[], config)
    }

    /// Chain for the subgroup generated by `gens` together with the normal
    /// closure of `extra_normal` under `<gens>`.
    pub fn build_with_normal(
        gens: &[ResidueMatrix],
        extra_normal: &[ResidueMatrix],
        config: &Config,
    ) -> Result<Self> {
        let (n, modulus) = match gens.first().or(extra_normal.first()) {
            Some(g) => (g.degree(), g.modulus()),
            None => return Err(Error::InvalidModulus { modulus: 0 }),
        };
        let conj = to_elts(gens, modulus)?;
        let mut seeds = conj.clone();
        seeds.extend(to_elts(extra_normal, modulus)?);
        Self::normal_closure(n, modulus, &conj, seeds, config)
    }

    /// Chain for the normal closure of `seeds` under `<conjugators>`. The
    /// seeds must lie in `<conjugators>` or be normalized by it.
    fn normal_closure(
        n: usize,
        modulus: u64,
        conj: &[Elt],
        mut seeds: Vec<Elt>,
        config: &Config,
    ) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus { modulus });
        }
        // products of n entries must fit in u128
        if modulus >= 1 << 40 {
            return Err(Error::ModulusTooLarge { modulus });
        }
        let ring = Ring { n, m: modulus };
        let mut components = Vec::new();
        for (p, a) in factor_u64(modulus) {
            let mut builder = Builder::new(Component::new(p, a, n), ring, conj, config);
            builder.run(seeds)?;
            seeds = builder.kernel;
            log::debug!(
                "mod {modulus}: component {p}^{a} order {} ({} kernel seeds)",
                builder.comp.order(),
                seeds.len()
            );
            components.push(builder.comp);
        }
        debug_assert!(seeds.iter().all(|s| ring.is_identity(&s.g)));
        Ok(LayeredChain {
            n,
            modulus,
            components,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> BigUint {
        self.components.iter().map(Component::order).product()
    }

    /// Sifts `g`; the result is the identity iff `g` lies in the group.
    pub fn sift(&self, g: &ResidueMatrix) -> Result<ResidueMatrix> {
        if g.modulus() != self.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                got: g.modulus(),
            });
        }
        let ring = Ring {
            n: self.n,
            m: self.modulus,
        };
        let mut cur = Elt {
            g: g.entries.clone().into_boxed_slice(),
            inv: g.entries.clone().into_boxed_slice(),
        };
        for comp in &self.components {
            match comp.sift(&ring, cur, 0) {
                Sifted::Kernel(h) => cur = h,
                Sifted::Top { g, .. } | Sifted::Layer { g, .. } => {
                    return Ok(ResidueMatrix {
                        modulus: self.modulus,
                        n: self.n,
                        entries: g.g.into_vec(),
                    })
                }
            }
        }
        Ok(ResidueMatrix {
            modulus: self.modulus,
            n: self.n,
            entries: cur.g.into_vec(),
        })
    }

    pub fn contains(&self, g: &ResidueMatrix) -> Result<bool> {
        Ok(self.sift(g)?.is_identity())
    }

    /// `(p, orbit lengths, layer dimensions)` per component.
    pub fn shape(&self) -> Vec<(u64, Vec<usize>, Vec<usize>)> {
        self.components
            .iter()
            .map(|c| {
                (
                    c.p,
                    c.levels.iter().map(|l| l.orbit.len()).collect(),
                    c.layers.iter().map(|l| l.rows.len()).collect(),
                )
            })
            .collect()
    }

    /// Layer dimensions for the component of `p`.
    pub fn layer_dims(&self, p: u64) -> Option<Vec<usize>> {
        self.components
            .iter()
            .find(|c| c.p == p)
            .map(|c| c.layers.iter().map(|l| l.rows.len()).collect())
    }

    /// Relic bases of each layer for the component of `p`.
    pub fn layer_relics(&self, p: u64) -> Option<Vec<Vec<Vec<u64>>>> {
        self.components
            .iter()
            .find(|c| c.p == p)
            .map(|c| c.layers.iter().map(|l| l.rows.clone()).collect())
    }

    /// A generating set: the strong generators of every component.
    pub fn strong_generators(&self) -> Vec<ResidueMatrix> {
        self.elements()
            .into_iter()
            .map(|e| ResidueMatrix {
                modulus: self.modulus,
                n: self.n,
                entries: e.g.into_vec(),
            })
            .collect()
    }

    fn elements(&self) -> Vec<Elt> {
        let mut out = Vec::new();
        for c in &self.components {
            out.extend(c.top_gens.iter().cloned());
            for l in &c.layers {
                out.extend(l.reps.iter().cloned());
            }
        }
        out
    }
}

fn to_elts(gens: &[ResidueMatrix], modulus: u64) -> Result<Vec<Elt>> {
    gens.iter()
        .map(|g| {
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch {
                    expected: modulus,
                    got: g.modulus(),
                });
            }
            let inv = g.inverse()?;
            Ok(Elt {
                g: g.entries.clone().into_boxed_slice(),
                inv: inv.entries.into_boxed_slice(),
            })
        })
        .collect()
}

struct Builder<'a> {
    comp: Component,
    ring: Ring,
    conj: &'a [Elt],
    queue: VecDeque<Elt>,
    kernel: Vec<Elt>,
    kernel_seen: HashSet<Box<[u64]>>,
    budget: u64,
    random_elements: usize,
    rng: ChaCha8Rng,
}

impl<'a> Builder<'a> {
    fn new(comp: Component, ring: Ring, conj: &'a [Elt], config: &Config) -> Self {
        let seed = config.seed ^ ring.m.wrapping_mul(0x9e37_79b9) ^ comp.p.rotate_left(32);
        Builder {
            comp,
            ring,
            conj,
            queue: VecDeque::new(),
            kernel: Vec::new(),
            kernel_seen: HashSet::new(),
            budget: config.orbit_budget,
            random_elements: config.random_elements,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn run(&mut self, seeds: Vec<Elt>) -> Result<()> {
        self.queue.extend(seeds);
        self.drain()?;
        self.random_phase()?;
        self.verify()
    }

    fn drain(&mut self) -> Result<()> {
        while let Some(g) = self.queue.pop_front() {
            let s = self.comp.sift(&self.ring, g, 0);
            self.absorb(s)?;
        }
        Ok(())
    }

    fn absorb(&mut self, s: Sifted) -> Result<()> {
        match s {
            Sifted::Top { level, g } => self.add_top(level, g),
            Sifted::Layer { layer, g, relic } => {
                self.add_rep(layer, g, relic);
                Ok(())
            }
            Sifted::Kernel(g) => {
                if !self.ring.is_identity(&g.g) && self.kernel_seen.insert(g.g.clone()) {
                    self.kernel.push(g);
                }
                Ok(())
            }
        }
    }

    fn add_top(&mut self, level: usize, g: Elt) -> Result<()> {
        let comp = &mut self.comp;
        if level == comp.levels.len() {
            let base = (0..comp.n)
                .map(|k| {
                    let mut e = vec![0u64; comp.n];
                    e[k] = 1;
                    e
                })
                .find(|e| comp.apply(e, &g.g) != *e)
                .expect("element nontrivial mod p moves a basis vector");
            let key = comp.encode(&base);
            comp.levels.push(Level {
                base,
                gens: Vec::new(),
                checked: Vec::new(),
                orbit: vec![key],
                index: HashMap::from([(key, 0)]),
                transversal: vec![self.ring.identity()],
            });
        }
        let gi = comp.top_gens.len();
        comp.top_gens.push(g.clone());
        for l in 0..=level {
            self.comp.levels[l].gens.push(gi);
            self.comp.levels[l].checked.push(0);
            self.extend_orbit(l)?;
        }
        for c in self.conj {
            self.queue.push_back(self.ring.conj(&g, c));
        }
        for layer in &self.comp.layers {
            for r in &layer.reps {
                self.queue.push_back(self.ring.conj(r, &g));
            }
        }
        Ok(())
    }

    fn extend_orbit(&mut self, l: usize) -> Result<()> {
        let mut level = std::mem::take(&mut self.comp.levels[l]);
        let comp = &self.comp;
        // points closed under the old generators are revisited; their images
        // are already known
        let mut k = 0;
        while k < level.orbit.len() {
            let v = comp.decode(level.orbit[k]);
            for &gi in &level.gens {
                let g = &comp.top_gens[gi];
                let key = comp.encode(&comp.apply(&v, &g.g));
                if level.index.contains_key(&key) {
                    continue;
                }
                if level.orbit.len() as u64 >= self.budget {
                    return Err(Error::OrbitBudgetExceeded {
                        prime: comp.p,
                        budget: self.budget,
                    });
                }
                let u = self.ring.emul(&level.transversal[k], g);
                level.index.insert(key, level.orbit.len() as u32);
                level.orbit.push(key);
                level.transversal.push(u);
            }
            k += 1;
        }
        self.comp.levels[l] = level;
        Ok(())
    }

    fn add_rep(&mut self, layer: usize, g: Elt, relic: Vec<u64>) {
        let p = self.comp.p;
        let pivot = relic.iter().position(|&x| x != 0).unwrap();
        let pinv = inv_mod_prime(relic[pivot], p);
        {
            let l = &mut self.comp.layers[layer - 1];
            l.rows.push(relic);
            l.pivots.push(pivot);
            l.pivot_inv.push(pinv);
            l.reps.push(g.clone());
        }
        self.queue.push_back(self.ring.pow(&g, p));
        for other in &self.comp.layers {
            for r in &other.reps {
                self.queue.push_back(self.ring.comm(&g, r));
            }
        }
        for c in self.conj {
            self.queue.push_back(self.ring.conj(&g, c));
        }
        for y in &self.comp.top_gens {
            self.queue.push_back(self.ring.conj(&g, y));
        }
    }

    fn random_phase(&mut self) -> Result<()> {
        if self.comp.top_gens.is_empty() {
            return Ok(());
        }
        for _ in 0..self.random_elements {
            let gens = &self.comp.top_gens;
            let mut x = self.ring.identity();
            for _ in 0..12 {
                let g = &gens[self.rng.gen_range(0..gens.len())];
                x = if self.rng.gen_bool(0.5) {
                    self.ring.emul(&x, g)
                } else {
                    self.ring.emul(&x, &inverse_elt(g))
                };
            }
            if !self.conj.is_empty() {
                for _ in 0..3 {
                    let c = &self.conj[self.rng.gen_range(0..self.conj.len())];
                    x = self.ring.conj(&x, c);
                }
            }
            let s = self.comp.sift(&self.ring, x, 0);
            self.absorb(s)?;
            self.drain()?;
        }
        Ok(())
    }

    /// Sifts every Schreier generator of every level until none produces a
    /// new element.
    fn verify(&mut self) -> Result<()> {
        loop {
            let mut progressed = false;
            let mut l = 0;
            while l < self.comp.levels.len() {
                let mut j = 0;
                while j < self.comp.levels[l].gens.len() {
                    while self.comp.levels[l].checked[j] < self.comp.levels[l].orbit.len() {
                        let level = &self.comp.levels[l];
                        let k = level.checked[j];
                        let g = &self.comp.top_gens[level.gens[j]];
                        let v = self.comp.decode(level.orbit[k]);
                        let w = self.comp.apply(&v, &g.g);
                        let target = level.index[&self.comp.encode(&w)] as usize;
                        let u = &level.transversal[k];
                        let ut = &level.transversal[target];
                        let ug = self.ring.emul(u, g);
                        let schreier = self.ring.emul(&ug, &inverse_elt(ut));
                        self.comp.levels[l].checked[j] += 1;
                        let s = self.comp.sift(&self.ring, schreier, l + 1);
                        let before = self.comp.order();
                        self.absorb(s)?;
                        self.drain()?;
                        if self.comp.order() != before {
                            progressed = true;
                        }
                    }
                    j += 1;
                }
                l += 1;
            }
            if !progressed {
                return Ok(());
            }
        }
    }
}

/// Generators of `phi_m(Gamma_{n,r})`, the image of the principal congruence
/// subgroup of level `r`, computed as the normal closure of the elementary
/// generators of level `gcd(m, r)` in `Sigma(n, Z/m)`.
pub fn pcs_image_generators(
    ambient: &Ambient,
    r: u64,
    m: u64,
    config: &Config,
) -> Result<Vec<ResidueMatrix>> {
    let g = r.gcd(&m);
    if g == m {
        return Ok(Vec::new());
    }
    let n = ambient.degree();
    let reduce = |x: &IntMatrix| ResidueMatrix::reduce(x, m);
    let conj: Vec<ResidueMatrix> = ambient
        .elementary_generators(1)
        .iter()
        .map(reduce)
        .collect();
    let seeds: Vec<ResidueMatrix> = ambient
        .elementary_generators(g)
        .iter()
        .map(reduce)
        .collect();
    let conj = to_elts(&conj, m)?;
    let seeds = to_elts(&seeds, m)?;
    let chain = LayeredChain::normal_closure(n, m, &conj, seeds, config)?;
    Ok(chain.strong_generators())
}

/// Chain for `phi_m(H)`.
pub fn image_chain(spec: &GroupSpec, m: u64, config: &Config) -> Result<LayeredChain> {
    if m < 2 {
        return Err(Error::InvalidModulus { modulus: m });
    }
    let mut gens: Vec<ResidueMatrix> = spec
        .generators()
        .iter()
        .map(|g| ResidueMatrix::reduce(g, m))
        .collect();
    if let Some(r) = spec.pcs_level() {
        gens.extend(pcs_image_generators(&spec.ambient(), r, m, config)?);
    }
    if gens.is_empty() {
        gens.push(ResidueMatrix::identity(spec.degree(), m));
    }
    LayeredChain::build(&gens, config)
}

/// `delta_H(m) = |phi_m(Gamma_n) : phi_m(H)|`, with `delta_H(1) = 1`.
pub fn delta(spec: &GroupSpec, m: u64, config: &Config) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::InvalidModulus { modulus: m });
    }
    if m == 1 {
        return Ok(BigUint::one());
    }
    let chain = image_chain(spec, m, config)?;
    let full = spec.ambient().order(m);
    let order = chain.order();
    assert!(
        (&full % &order).is_zero(),
        "image order {order} does not divide |Sigma(n, Z/{m})| = {full}"
    );
    Ok(full / order)
}

/// Memoized `delta_H(m)` for one group. Safe to share between threads.
#[derive(Debug)]
pub struct DeltaMemo<'a> {
    spec: &'a GroupSpec,
    config: Config,
    values: Mutex<BTreeMap<u64, BigUint>>,
}

impl<'a> DeltaMemo<'a> {
    pub fn new(spec: &'a GroupSpec, config: &Config) -> Self {
        DeltaMemo {
            spec,
            config: *config,
            values: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        self.spec
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn get(&self, m: u64) -> Result<BigUint> {
        if let Some(v) = self.values.lock().unwrap().get(&m) {
            return Ok(v.clone());
        }
        let v = delta(self.spec, m, &self.config)?;
        self.values.lock().unwrap().insert(m, v.clone());
        Ok(v)
    }

    /// All values computed so far, by modulus.
    pub fn values(&self) -> BTreeMap<u64, BigUint> {
        self.values.lock().unwrap().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammas::Kind;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn reduce_examples() {
        let g = IntMatrix::elementary(3, 0, 1, 45);
        assert!(reduce_mod(&g, 45).unwrap().is_identity());
        assert_eq!(
            reduce_mod(&g, 25).unwrap(),
            reduce_mod(&IntMatrix::elementary(3, 0, 1, 20), 25).unwrap()
        );
        let x1 = IntMatrix::from_rows(&[[0, -1, 1], [0, -1, 2], [-1, 0, 1]]);
        let r = reduce_mod(&x1, 5).unwrap();
        assert_eq!(r.entries(), &[0, 4, 1, 0, 4, 2, 4, 0, 1]);
        assert_eq!(r.det(), 1);
        assert!(reduce_mod(&x1, 1).is_err());
    }

    #[test]
    fn residue_inverse() {
        let g = ResidueMatrix::from_entries(3, 45, vec![1, 2, 3, 0, 1, 4, 5, 6, 0]).unwrap();
        // det = 1 over Z
        let gi = g.inverse().unwrap();
        assert!(g.mul(&gi).is_identity());
        let sing = ResidueMatrix::from_entries(2, 6, vec![2, 0, 0, 1]).unwrap();
        assert!(matches!(
            sing.inverse(),
            Err(Error::NonInvertibleGenerator { modulus: 6 })
        ));
    }

    #[test]
    fn full_sl3_mod5() {
        let sl3 = Ambient::sl(3).unwrap();
        let gens: Vec<_> = sl3
            .elementary_generators(1)
            .iter()
            .map(|g| ResidueMatrix::reduce(g, 5))
            .collect();
        let chain = LayeredChain::build(&gens, &cfg()).unwrap();
        assert_eq!(chain.order(), BigUint::from(372000u32));
        for g in &gens {
            assert!(chain.contains(g).unwrap());
        }
    }

    #[test]
    fn trivial_group_mod12() {
        let chain = LayeredChain::build(&[ResidueMatrix::identity(3, 12)], &cfg()).unwrap();
        assert_eq!(chain.order(), BigUint::one());
    }

    #[test]
    fn cyclic_unipotent_mod5() {
        let g = ResidueMatrix::reduce(&IntMatrix::elementary(3, 0, 2, 1), 5);
        let chain = LayeredChain::build(&[g], &cfg()).unwrap();
        assert_eq!(chain.order(), BigUint::from(5u8));
        let h = ResidueMatrix::reduce(&IntMatrix::elementary(3, 0, 1, 1), 5);
        assert!(!chain.sift(&h).unwrap().is_identity());
        let other = ResidueMatrix::identity(3, 7);
        assert!(matches!(
            chain.sift(&other),
            Err(Error::ModulusMismatch {
                expected: 5,
                got: 7
            })
        ));
    }

    #[test]
    fn full_groups_at_prime_powers() {
        for (kind, n, m) in [
            (Kind::SL, 3, 8),
            (Kind::SL, 3, 9),
            (Kind::SL, 3, 45),
            (Kind::Sp, 4, 8),
            (Kind::Sp, 4, 9),
            (Kind::SL, 2, 4),
            (Kind::SL, 2, 9),
        ] {
            let amb = Ambient::finite(kind, n).unwrap();
            let gens: Vec<_> = amb
                .elementary_generators(1)
                .iter()
                .map(|g| ResidueMatrix::reduce(g, m))
                .collect();
            let chain = LayeredChain::build(&gens, &cfg()).unwrap();
            assert_eq!(chain.order(), amb.order(m), "{kind}({n}, Z/{m})");
        }
    }

    #[test]
    fn full_layers_have_expected_dimension() {
        let sl3 = Ambient::sl(3).unwrap();
        let gens: Vec<_> = sl3
            .elementary_generators(1)
            .iter()
            .map(|g| ResidueMatrix::reduce(g, 27))
            .collect();
        let chain = LayeredChain::build(&gens, &cfg()).unwrap();
        assert_eq!(chain.layer_dims(3).unwrap(), vec![8, 8]);
        for layer in chain.layer_relics(3).unwrap() {
            for x in layer {
                assert_eq!((x[0] + x[4] + x[8]) % 3, 0, "relics are traceless");
            }
        }
        let sp4 = Ambient::sp(4).unwrap();
        let j = sp4.form().unwrap();
        let gens: Vec<_> = sp4
            .elementary_generators(1)
            .iter()
            .map(|g| ResidueMatrix::reduce(g, 25))
            .collect();
        let chain = LayeredChain::build(&gens, &cfg()).unwrap();
        assert_eq!(chain.layer_dims(5).unwrap(), vec![10]);
        for x in &chain.layer_relics(5).unwrap()[0] {
            let xm =
                IntMatrix::from_entries(4, x.iter().map(|&e| BigInt::from(e)).collect()).unwrap();
            let jx = j.mul(&xm);
            let diff = jx.sub(&jx.transpose());
            assert!(diff.entries().iter().all(|e| (e % 5i32).is_zero()));
        }
    }

    #[test]
    fn elementary_level_three_mod_nine() {
        let sl3 = Ambient::sl(3).unwrap();
        let gens: Vec<_> = sl3
            .elementary_generators(3)
            .iter()
            .map(|g| ResidueMatrix::reduce(g, 9))
            .collect();
        let chain = LayeredChain::build(&gens, &cfg()).unwrap();
        // elementary group of level 3 mod 9 is the off-diagonal part of the
        // first layer: relics with zero diagonal, dimension 6
        assert_eq!(chain.order(), BigUint::from(729u32));
    }

    #[test]
    fn pcs_image_is_kernel() {
        let sl3 = Ambient::sl(3).unwrap();
        let gens = pcs_image_generators(&sl3, 3, 9, &cfg()).unwrap();
        let chain = LayeredChain::build(&gens, &cfg()).unwrap();
        assert_eq!(chain.order(), BigUint::from(6561u32));
        let gens = pcs_image_generators(&sl3, 45, 15, &cfg()).unwrap();
        assert!(gens.is_empty());
        let gens = pcs_image_generators(&sl3, 45, 135, &cfg()).unwrap();
        let chain = LayeredChain::build(&gens, &cfg()).unwrap();
        assert_eq!(chain.order(), BigUint::from(6561u32));
    }

    #[test]
    fn delta_of_full_group_is_one() {
        for kind in [Kind::SL, Kind::Sp] {
            let amb = Ambient::new(kind, 4).unwrap();
            let spec = GroupSpec::new(amb, amb.elementary_generators(1)).unwrap();
            for m in [2, 4, 6, 9, 10] {
                assert_eq!(delta(&spec, m, &cfg()).unwrap(), BigUint::one());
            }
        }
    }

    #[test]
    fn orbit_budget_is_enforced() {
        let sl3 = Ambient::sl(3).unwrap();
        let gens: Vec<_> = sl3
            .elementary_generators(1)
            .iter()
            .map(|g| ResidueMatrix::reduce(g, 7))
            .collect();
        let config = Config {
            orbit_budget: 100,
            ..Config::default()
        };
        assert!(matches!(
            LayeredChain::build(&gens, &config),
            Err(Error::OrbitBudgetExceeded { prime: 7, .. })
        ));
    }
}
