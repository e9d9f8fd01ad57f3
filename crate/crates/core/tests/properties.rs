use arithlevel::density::basis_for;
use arithlevel::{
    delta, Ambient, Config, GroupSpec, GroupWord, IntMatrix, LayeredChain, ResidueMatrix,
    Transvection,
};
use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

/// A word in the elementary generators of `amb`, as a matrix.
fn product(amb: Ambient, word: &[(usize, bool)]) -> IntMatrix {
    let gens = amb.elementary_generators(1);
    let mut g = IntMatrix::identity(amb.degree());
    for &(i, inv) in word {
        let h = &gens[i % gens.len()];
        g = g.mul(&if inv {
            h.invert_unimodular().unwrap()
        } else {
            h.clone()
        });
    }
    g
}

fn word() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..16, any::<bool>()), 0..12)
}

fn ambient() -> impl Strategy<Value = Ambient> {
    prop_oneof![
        Just(Ambient::sl(3).unwrap()),
        Just(Ambient::sp(4).unwrap()),
        Just(Ambient::sl(4).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_stay_in_ambient(amb in ambient(), w in word()) {
        let g = product(amb, &w);
        prop_assert!(amb.contains(&g));
        prop_assert_eq!(g.det(), 1.into());
        let inv = g.invert_unimodular().unwrap();
        prop_assert!(g.mul(&inv).is_identity());
    }

    #[test]
    fn reduction_is_a_homomorphism(amb in ambient(), a in word(), b in word(), m in 2u64..60) {
        let (g, h) = (product(amb, &a), product(amb, &b));
        let lhs = ResidueMatrix::reduce(&g.mul(&h), m);
        let rhs = ResidueMatrix::reduce(&g, m).mul(&ResidueMatrix::reduce(&h, m));
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs.det(), 1 % m);
        let inv = lhs.inverse().unwrap();
        prop_assert!(lhs.mul(&inv).is_identity());
    }

    #[test]
    fn word_inverse_evaluates_to_inverse(w in prop::collection::vec(prop_oneof![1i32..=3, -3i32..=-1], 0..10)) {
        let amb = Ambient::sl(3).unwrap();
        let gens = amb.elementary_generators(2)[..3].to_vec();
        let spec = GroupSpec::new(amb, gens).unwrap();
        let w = GroupWord::new(w);
        let g = spec.eval(&w).unwrap();
        let gi = spec.eval(&w.inverse()).unwrap();
        prop_assert!(g.mul(&gi).is_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The chain order divides the ambient order and the chain contains its
    /// generators and their products.
    #[test]
    fn chain_membership(
        amb in prop_oneof![Just(Ambient::sl(3).unwrap()), Just(Ambient::sp(4).unwrap())],
        words in prop::collection::vec(word(), 1..3),
        extra in word(),
        m in prop::sample::select(vec![4u64, 6, 8, 9, 10, 12, 15]),
    ) {
        let gens: Vec<IntMatrix> = words.iter().map(|w| product(amb, w)).collect();
        let res: Vec<ResidueMatrix> = gens.iter().map(|g| ResidueMatrix::reduce(g, m)).collect();
        let chain = LayeredChain::build(&res, &Config::default()).unwrap();
        let full = amb.order(m);
        prop_assert!((&full % chain.order()).is_zero());
        for r in &res {
            prop_assert!(chain.contains(r).unwrap());
        }
        let prod = res.iter().fold(ResidueMatrix::identity(amb.degree(), m), |a, b| a.mul(b));
        prop_assert!(chain.sift(&prod).unwrap().is_identity());
        // an arbitrary element lies in the chain iff the chain of the
        // enlarged generating set has the same order
        let x = ResidueMatrix::reduce(&product(amb, &extra), m);
        let mut more = res.clone();
        more.push(x.clone());
        let bigger = LayeredChain::build(&more, &Config::default()).unwrap();
        prop_assert_eq!(chain.contains(&x).unwrap(), bigger.order() == chain.order());
    }

    /// `delta(a)` divides `delta(a * b)`, and the chain order does not depend
    /// on the seed.
    #[test]
    fn delta_divisibility(a in 2u64..8, b in 2u64..5, seed in any::<u64>()) {
        let amb = Ambient::sl(3).unwrap();
        let gens = vec![
            IntMatrix::from_rows(&[[1, 2, 0], [0, 1, 0], [0, 0, 1]]),
            IntMatrix::from_rows(&[[1, 0, 0], [0, 1, 0], [3, 0, 1]]),
            IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
        ];
        let spec = GroupSpec::new(amb, gens).unwrap();
        let c1 = Config { seed, ..Config::default() };
        let da = delta(&spec, a, &c1).unwrap();
        let dab = delta(&spec, a * b, &c1).unwrap();
        prop_assert!((&dab % &da).is_zero());
        prop_assert_eq!(delta(&spec, a * b, &Config::default()).unwrap(), dab);
    }

    /// Density does not change under conjugation in the ambient group.
    #[test]
    fn density_is_conjugation_invariant(w in word(), x in -20i64..20) {
        let amb = Ambient::sl(3).unwrap();
        let c = product(amb, &w);
        let ci = c.invert_unimodular().unwrap();
        let gens = vec![
            IntMatrix::from_rows(&[[1, x * x + 1, x], [0, 1, 0], [0, 0, 1]]),
            IntMatrix::from_rows(&[[1, 0, 0], [x, 1, x + 1], [0, 0, 1]]),
            IntMatrix::from_rows(&[[1, 0, 0], [0, 1, 0], [1 - x, x * x, 1]]),
        ];
        let conj: Vec<IntMatrix> = gens.iter().map(|g| ci.mul(g).mul(&c)).collect();
        let t = Transvection::Word(GroupWord::new(vec![1]));
        let a = GroupSpec::new(amb, gens).unwrap().with_transvection(t.clone()).unwrap();
        let b = GroupSpec::new(amb, conj).unwrap().with_transvection(t).unwrap();
        prop_assert_eq!(basis_for(&a).unwrap().rank(), basis_for(&b).unwrap().rank());
    }
}

#[test]
fn full_group_has_index_one() {
    for amb in [Ambient::sl(3).unwrap(), Ambient::sp(4).unwrap()] {
        let spec = GroupSpec::new(amb, amb.elementary_generators(1)).unwrap();
        for m in [2u64, 12, 25, 27] {
            assert_eq!(
                delta(&spec, m, &Config::default()).unwrap(),
                BigUint::from(1u8)
            );
        }
    }
}
