mod common;

use common::*;
use fdcstar::actions::{Automorphism, GroupAction};
use fdcstar::algebra::{AlgebraElement, BlockShape};
use fdcstar::crossed_product::{cp_structure, CrossedProduct, CrossedProductElement};
use fdcstar::groups::FiniteGroup;
use fdcstar::linalg::{CMatrix, C};
use nalgebra::DVector;
use proptest::prelude::*;

fn random_cp_element(cp: &CrossedProduct, seed: u64) -> CrossedProductElement {
    let shape = cp.action().shape();
    let coeffs = cp
        .action()
        .group()
        .elements()
        .map(|g| random_element(shape, seed.wrapping_add(g as u64)))
        .collect();
    cp.from_coeffs(coeffs).unwrap()
}

fn z2(shape: &BlockShape, alpha: Automorphism) -> GroupAction {
    GroupAction::from_generators(FiniteGroup::cyclic(2).unwrap(), shape, &[(1, alpha)], tol()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dimension_is_product(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let cp = CrossedProduct::new(&action, tol()).unwrap();
        let expected = action.shape().dimension() * action.group().order();
        prop_assert_eq!(cp.dimension(), expected);
        prop_assert_eq!(cp.span().dim(), expected);
        prop_assert_eq!(cp.shape().unwrap().dimension(), expected);
    }

    #[test]
    fn covariance_holds(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let cp = CrossedProduct::new(&action, tol()).unwrap();
        for g in action.group().elements() {
            let u = cp.embed_group(g);
            let u_inv = cp.embed_group(action.group().inv(g));
            for a in action.shape().matrix_units() {
                let lhs = cp.multiply(&cp.multiply(&u, &cp.embed_base(&a).unwrap()).unwrap(), &u_inv).unwrap();
                let rhs = cp.embed_base(&action.alpha(g).apply(&a).unwrap()).unwrap();
                prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn regular_representation_is_a_star_homomorphism(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let cp = CrossedProduct::new(&action, tol()).unwrap();
        let f = random_cp_element(&cp, seed);
        let h = random_cp_element(&cp, seed + 100);
        let fh = cp.regular_representation(&cp.multiply(&f, &h).unwrap()).unwrap();
        let product = cp.regular_representation(&f).unwrap() * cp.regular_representation(&h).unwrap();
        prop_assert!((fh - product).norm() < 1e-9);
        let star = cp.regular_representation(&cp.adjoint(&f).unwrap()).unwrap();
        prop_assert!((star - cp.regular_representation(&f).unwrap().adjoint()).norm() < 1e-9);
        let decoded = cp.decode(&cp.regular_representation(&f).unwrap()).unwrap();
        prop_assert!(decoded.distance(&f).unwrap() < 1e-9);
        let back = cp.from_blocks(&cp.to_blocks(&f).unwrap()).unwrap();
        prop_assert!(back.distance(&f).unwrap() < 1e-8);
    }

    // the multiplier algebra of a unital crossed product is itself: the
    // unit of A is the unit of A ⋊ G
    #[test]
    fn crossed_product_is_unital(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let cp = CrossedProduct::new(&action, tol()).unwrap();
        let one = cp.embed_base(&AlgebraElement::identity(action.shape())).unwrap();
        prop_assert!(one.distance(&cp.unit()).unwrap() < 1e-12);
        let rep = cp.represent(&one).unwrap();
        prop_assert!(rep.distance(&AlgebraElement::identity(cp.ambient())).unwrap() < 1e-12);
        let f = random_cp_element(&cp, seed);
        prop_assert!(cp.multiply(&one, &f).unwrap().distance(&f).unwrap() < 1e-10);
        prop_assert!(cp.multiply(&f, &one).unwrap().distance(&f).unwrap() < 1e-10);
    }

    #[test]
    fn dual_action_fixes_exactly_the_base(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let cp = CrossedProduct::new(&action, tol()).unwrap();
        let dual = cp.dual_action().unwrap();
        dual.validate(tol()).unwrap();
        prop_assert!(dual.is_faithful(tol()).unwrap());
        prop_assert_eq!(dual.fixed_point_algebra(tol()).unwrap().dim(), action.shape().dimension());
        let a = random_element(action.shape(), seed);
        let embedded = cp.to_blocks(&cp.embed_base(&a).unwrap()).unwrap();
        for gamma in dual.group().elements() {
            prop_assert!(dual.alpha(gamma).apply(&embedded).unwrap().distance(&embedded).unwrap() < 1e-8);
        }
    }

    #[test]
    fn takai_duality_on_shapes(family in families(), seed in 0u64..1000) {
        let action = small_action(family, seed);
        let order = action.group().order();
        prop_assume!(action.shape().dimension() * order * order <= 256);
        let cp = CrossedProduct::new(&action, tol()).unwrap();
        let dual = cp.dual_action().unwrap();
        let twice = cp_structure(&dual, tol()).unwrap();
        let mut expected: Vec<usize> = action.shape().dims().iter().map(|&n| n * order).collect();
        expected.sort_unstable();
        prop_assert_eq!(twice.sorted_dims(), expected);
    }
}

#[test]
fn swap_on_two_points_gives_m2() {
    let shape = BlockShape::new(vec![1, 1]).unwrap();
    let swap = Automorphism::new(&shape, vec![1, 0], AlgebraElement::identity(&shape), tol()).unwrap();
    assert_eq!(cp_structure(&z2(&shape, swap), tol()).unwrap().dims(), &[2]);
}

#[test]
fn inner_z2_on_m2_gives_two_copies() {
    let shape = BlockShape::full_matrix(2).unwrap();
    let u = CMatrix::from_diagonal(&DVector::from_vec(vec![C::new(1.0, 0.0), C::new(-1.0, 0.0)]));
    let alpha = Automorphism::inner(&AlgebraElement::from_blocks(vec![u]).unwrap(), tol()).unwrap();
    assert_eq!(
        cp_structure(&z2(&shape, alpha), tol()).unwrap().sorted_dims(),
        vec![2, 2]
    );
}

#[test]
fn trivial_action_gives_group_algebra_copies() {
    let shape = BlockShape::new(vec![1, 2]).unwrap();
    let action = GroupAction::trivial(FiniteGroup::cyclic(3).unwrap(), &shape);
    assert_eq!(
        cp_structure(&action, tol()).unwrap().sorted_dims(),
        vec![1, 1, 1, 2, 2, 2]
    );
}

#[test]
fn symmetric_group_permuting_points() {
    let shape = BlockShape::new(vec![1, 1, 1]).unwrap();
    let group = FiniteGroup::symmetric(3).unwrap();
    let perms = fdcstar::groups::permutations(3);
    let alphas = perms
        .into_iter()
        .map(|p| Automorphism::new(&shape, p, AlgebraElement::identity(&shape), tol()).unwrap())
        .collect();
    let action = GroupAction::new(group, alphas, tol()).unwrap();
    // C(S_3 / S_2) ⋊ S_3 is Morita equivalent to C*(S_2), giving M_3 ⊕ M_3
    assert_eq!(cp_structure(&action, tol()).unwrap().sorted_dims(), vec![3, 3]);
}
