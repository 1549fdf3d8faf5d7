#![allow(dead_code)]

use fdcstar::actions::{Automorphism, GroupAction};
use fdcstar::algebra::{AlgebraElement, BlockShape, Subspace, Tolerance};
use fdcstar::harness::{generate_action, Family, GeneratorConfig};
use fdcstar::linalg::haar_unitary;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn shapes() -> impl Strategy<Value = BlockShape> {
    prop::collection::vec(1usize..=3, 1..=3).prop_map(|dims| BlockShape::new(dims).unwrap())
}

pub fn families() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

/// Small systems keep proptest runs fast.
pub fn small_config() -> GeneratorConfig {
    GeneratorConfig {
        max_dimension: 12,
        max_block: 3,
        include_nonabelian: false,
        ..GeneratorConfig::default()
    }
}

pub fn small_action(family: Family, seed: u64) -> GroupAction {
    generate_action(family, seed, 0, &small_config()).unwrap()
}

pub fn random_element(shape: &BlockShape, seed: u64) -> AlgebraElement {
    Subspace::full(shape).random_element(&mut rng(seed))
}

pub fn random_inner(shape: &BlockShape, seed: u64) -> Automorphism {
    let mut r = rng(seed);
    let blocks = shape.dims().iter().map(|&n| haar_unitary(n, &mut r)).collect();
    Automorphism::inner(&AlgebraElement::from_blocks(blocks).unwrap(), tol()).unwrap()
}

pub fn same_space(a: &Subspace, b: &Subspace) -> bool {
    a.dim() == b.dim() && a.contains_subspace(b, tol()).unwrap() && b.contains_subspace(a, tol()).unwrap()
}
