use loopalg::affine::builtin_catalog;
use loopalg::algebra::eigengrading;
use loopalg::classify::{conjugacy_classes, FiniteGroup};
use loopalg::cyclo::{cyclotomic_polynomial, totient, CycloNum};
use loopalg::descent::lie_twist;
use loopalg::lie::cartan::permutation_equivalent;
use loopalg::lie::{chevalley_algebra, DiagramPermutation, FiniteCartanMatrix, RootSystem, ToralCharge};
use proptest::prelude::*;

fn cyclo(m: u32) -> impl Strategy<Value = CycloNum> {
    prop::collection::vec(-5i64..=5, totient(m)).prop_map(move |c| CycloNum::from_int_coeffs(m, &c))
}

fn triple() -> impl Strategy<Value = (CycloNum, CycloNum, CycloNum)> {
    (1u32..=12).prop_flat_map(|m| (cyclo(m), cyclo(m), cyclo(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn inverses((a, _, _) in triple()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn embedding_is_compatible(m in 1u32..=6, c in 1u32..=3, d in 1u32..=3, e in -12i64..12) {
        let a = CycloNum::zeta_power(m, e);
        let n = m * c;
        let p = n * d;
        prop_assert_eq!(a.embed(n).unwrap().embed(p).unwrap(), a.embed(p).unwrap());
    }

    #[test]
    fn embedding_is_a_ring_map((a, b, _) in (1u32..=6).prop_flat_map(|m| (cyclo(m), cyclo(m), Just(m))), k in 2u32..=3) {
        let n = a.order() * k;
        let lhs = (&a * &b).embed(n).unwrap();
        prop_assert_eq!(lhs, &a.embed(n).unwrap() * &b.embed(n).unwrap());
    }

    #[test]
    fn permutation_inverse(p in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let p = DiagramPermutation::from_zero_based(p).unwrap();
        prop_assert!(p.compose(&p.inverse()).is_identity());
        let mut q = DiagramPermutation::identity(6);
        for _ in 0..p.order() {
            q = q.compose(&p);
        }
        prop_assert!(q.is_identity());
    }

    #[test]
    fn toral_gradings_cover_the_algebra(s1 in -3i64..=3, s2 in -3i64..=3, m in 1u32..=4) {
        let ch = chevalley_algebra(&RootSystem::new(&FiniteCartanMatrix::parse("A2").unwrap()).unwrap()).unwrap();
        let data = lie_twist(&ch, &DiagramPermutation::identity(2), &ToralCharge::new(vec![s1, s2], m)).unwrap();
        let g = eigengrading(&data.alg, &data.source).unwrap();
        prop_assert_eq!(g.dims().iter().sum::<usize>(), 8);
        prop_assert!(g.dims()[0] >= 2);
        g.check_product_rule(&data.alg).unwrap();
    }

    #[test]
    fn catalog_matching_ignores_relabeling(k in 0usize..11, seed in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let gcm = &builtin_catalog().entries[k].gcm.0;
        let n = gcm.len();
        let p: Vec<usize> = seed.into_iter().filter(|&i| i < n).collect();
        let relabeled: Vec<Vec<i64>> = p.iter().map(|&i| p.iter().map(|&j| gcm[i][j]).collect()).collect();
        prop_assert!(permutation_equivalent(gcm, &relabeled).is_some());
    }

    #[test]
    fn cyclic_groups_are_abelian(n in 1usize..=12) {
        let g = FiniteGroup::cyclic(n);
        let t = conjugacy_classes(&g);
        prop_assert_eq!(t.classes.len(), n);
        prop_assert!(t.classes.iter().all(|c| c.size == 1));
    }
}

#[test]
fn zeta_is_primitive_and_a_root_of_phi() {
    for m in 1..=24 {
        let z = CycloNum::zeta_power(m, 1);
        assert!(CycloNum::zeta_power(m, m as i64).is_one());
        for i in 1..m {
            assert!(!CycloNum::zeta_power(m, i as i64).is_one());
        }
        assert!(z.eval_poly(&cyclotomic_polynomial(m)).is_zero());
    }
}
