mod common;

use common::*;
use fdcstar::algebra::{wedderburn_decompose, AlgebraElement};
use fdcstar::spectral::{
    arveson_spectrum, connes_spectrum, minimal_invariant_projections, restricted_spectrum, spectral_projection,
    spectral_subspace,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn spectral_subspaces_decompose_the_algebra(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let order = action.group().order();
        let total: usize = (0..order).map(|g| spectral_subspace(&action, g, tol()).unwrap().dim()).sum();
        prop_assert_eq!(total, action.shape().dimension());
        let a = random_element(action.shape(), seed);
        let mut sum = AlgebraElement::zeros(action.shape());
        for gamma in 0..order {
            let pa = spectral_projection(&action, gamma, &a).unwrap();
            sum = sum.add(&pa).unwrap();
            for other in (0..order).filter(|&o| o != gamma) {
                prop_assert!(spectral_projection(&action, other, &pa).unwrap().norm() < 1e-10);
            }
        }
        prop_assert!(sum.distance(&a).unwrap() < 1e-10);
    }

    #[test]
    fn spectral_subspaces_multiply_additively(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let s = action.group().abelian_structure().unwrap().clone();
        let spaces: Vec<_> = (0..s.order()).map(|g| spectral_subspace(&action, g, tol()).unwrap()).collect();
        for (g1, a1) in spaces.iter().enumerate() {
            for (g2, a2) in spaces.iter().enumerate() {
                let target = &spaces[s.add(g1, g2)];
                for x in a1.basis() {
                    for y in a2.basis() {
                        prop_assert!(target.residual(&x.mul(y).unwrap()).unwrap() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn connes_spectrum_is_a_subgroup_of_the_arveson_spectrum(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let s = action.group().abelian_structure().unwrap();
        let sp = arveson_spectrum(&action, tol()).unwrap();
        let gamma = connes_spectrum(&action, tol()).unwrap();
        prop_assert!(gamma.is_subset(&sp));
        prop_assert!(gamma.is_subgroup(s));
    }

    // Γ is the intersection over every invariant projection, so it must sit
    // inside the restricted spectrum of any spectral projection of A^α
    #[test]
    fn connes_spectrum_matches_random_invariant_projections(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let gamma = connes_spectrum(&action, tol()).unwrap();
        let fixed = action.fixed_point_algebra(tol()).unwrap();
        let mut r = rng(seed);
        for _ in 0..4 {
            let h = fixed.random_self_adjoint(&mut r);
            let (values, vectors) = fdcstar::linalg::hermitian_eigen(&h.to_dense());
            let cut = values[0] + 1e-6;
            let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] <= cut).collect();
            let v = vectors.select_columns(keep.iter());
            let p = AlgebraElement::from_dense(action.shape(), &(&v * v.adjoint())).unwrap();
            prop_assert!(fixed.contains(&p, tol()).unwrap());
            prop_assert!(gamma.is_subset(&restricted_spectrum(&action, &p, tol()).unwrap()));
        }
        let mut meet = arveson_spectrum(&action, tol()).unwrap();
        for p in minimal_invariant_projections(&action, tol()).unwrap() {
            meet = meet.intersection(&restricted_spectrum(&action, &p, tol()).unwrap());
        }
        prop_assert_eq!(meet, gamma);
    }

    #[test]
    fn restricted_spectrum_is_monotone(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let fixed = action.fixed_point_algebra(tol()).unwrap();
        let w = wedderburn_decompose(&fixed, tol()).unwrap();
        let one = AlgebraElement::identity(action.shape());
        let whole = restricted_spectrum(&action, &one, tol()).unwrap();
        prop_assert_eq!(&whole, &arveson_spectrum(&action, tol()).unwrap());
        for (q, c) in w.minimal_projections().iter().zip(w.central_projections()) {
            let small = restricted_spectrum(&action, q, tol()).unwrap();
            let middle = restricted_spectrum(&action, c, tol()).unwrap();
            prop_assert!(small.is_subset(&middle));
            prop_assert!(middle.is_subset(&whole));
        }
    }

    #[test]
    fn spectra_are_conjugation_invariant(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let conj = action.conjugated(&random_inner(action.shape(), seed)).unwrap();
        prop_assert_eq!(arveson_spectrum(&action, tol()).unwrap(), arveson_spectrum(&conj, tol()).unwrap());
        prop_assert_eq!(connes_spectrum(&action, tol()).unwrap(), connes_spectrum(&conj, tol()).unwrap());
    }
}

#[test]
fn restricted_spectrum_rejects_moved_projections() {
    let action = small_action(fdcstar::harness::Family::BlockPermutation, 1);
    let p = AlgebraElement::block_unit(action.shape(), 0);
    assert!(restricted_spectrum(&action, &p, tol()).is_err());
}
