//! Deterministic random example systems.
//!
//! Every abelian example is induced from a subgroup `H ≤ G`: the blocks are
//! indexed by the cosets `G/H` (all of one size `m`), and writing
//! `g + r_c = r_{c'} + h` for coset representatives `r_c`,
//!
//! ```text
//! α_g(a)_{c'} = Ad(W_{c'} v_h W_c*)(a_c)
//! ```
//!
//! where `v` is a projective unitary representation of `H` on `C^m` and the
//! `W_c` are unitaries. The families differ in how `H`, `v` and `W` are
//! drawn. Draws that are not faithful are rejected and redrawn.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::actions::{Automorphism, GroupAction};
use crate::algebra::{AlgebraElement, BlockShape, Tolerance};
use crate::error::{Error, Result};
use crate::groups::{permutations, FiniteGroup};
use crate::linalg::{haar_unitary, CMatrix, C, ONE, ZERO};

use super::descriptor::SystemDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// One block, `g ↦ Ad(W v_g W*)` with `v` diagonal (or Pauli) of finite
    /// order; occasionally `S_3` through its permutation representation.
    Inner,
    /// `H = {0}`: `G` permutes `|G|` equal blocks, with a random twist.
    BlockPermutation,
    /// One block, diagonal character actions `Ad diag(⟨g, γ_k⟩)`.
    Gauge,
    /// Random subgroup, representation and twist.
    Mixed,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Inner, Family::BlockPermutation, Family::Gauge, Family::Mixed];

    pub fn name(self) -> &'static str {
        match self {
            Family::Inner => "inner",
            Family::BlockPermutation => "block-permutation",
            Family::Gauge => "gauge",
            Family::Mixed => "mixed",
        }
    }

    fn salt(self) -> u64 {
        match self {
            Family::Inner => 0x11,
            Family::BlockPermutation => 0x22,
            Family::Gauge => 0x33,
            Family::Mixed => 0x44,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family {s:?}; expected inner, block-permutation, gauge or mixed"))
    }
}

/// Bounds on generated systems.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    /// Upper bound on `dim A = Σ n_i²`.
    pub max_dimension: usize,
    /// Upper bound on each block size.
    pub max_block: usize,
    /// Candidate groups as invariant factors.
    pub groups: Vec<Vec<usize>>,
    /// Let the inner family use `S_3`.
    pub include_nonabelian: bool,
    /// Emit only single-block algebras (restricts the block-permutation
    /// and mixed families to `H = G`).
    pub prime_only: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_dimension: 24,
            max_block: 6,
            groups: vec![vec![2], vec![3], vec![4], vec![2, 2]],
            include_nonabelian: true,
            prime_only: false,
        }
    }
}

const MAX_ATTEMPTS: usize = 200;

fn example_rng(family: Family, seed: u64, index: usize) -> ChaCha8Rng {
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(family.salt() << 56)
        .wrapping_add(index as u64);
    ChaCha8Rng::seed_from_u64(mixed)
}

/// `count` validated faithful systems of `family`, deterministic in
/// `(family, seed, count)`.
pub fn generate_examples(family: Family, seed: u64, count: usize) -> Result<Vec<SystemDescriptor>> {
    generate_with(family, seed, count, &GeneratorConfig::default())
}

pub fn generate_with(
    family: Family,
    seed: u64,
    count: usize,
    config: &GeneratorConfig,
) -> Result<Vec<SystemDescriptor>> {
    (0..count)
        .map(|i| {
            let action = generate_action(family, seed, i, config)?;
            let label = format!("{}-{seed}-{i}", family.name());
            Ok(SystemDescriptor::from_action(&action, Some(label)))
        })
        .collect()
}

/// The `index`-th system of a family, as a validated action.
pub fn generate_action(family: Family, seed: u64, index: usize, config: &GeneratorConfig) -> Result<GroupAction> {
    let tol = Tolerance::default();
    let mut rng = example_rng(family, seed, index);
    for _ in 0..MAX_ATTEMPTS {
        let candidate = match family {
            Family::Inner if config.include_nonabelian && rng.random_bool(0.2) => {
                draw_symmetric(&mut rng, config, tol)?
            }
            _ => draw_induced(family, &mut rng, config, tol)?,
        };
        if let Some(action) = candidate {
            if action.is_faithful(tol)? {
                return Ok(action);
            }
        }
    }
    Err(Error::PreconditionViolated(format!(
        "no faithful {family} system found within the configured bounds"
    )))
}

fn pick_block_size<R: Rng>(rng: &mut R, blocks: usize, config: &GeneratorConfig, min: usize) -> Option<usize> {
    let fits = (1..=config.max_block)
        .filter(|&m| m >= min && blocks * m * m <= config.max_dimension)
        .collect::<Vec<_>>();
    fits.choose(rng).copied()
}

fn random_subgroup<R: Rng>(group: &FiniteGroup, rng: &mut R) -> Vec<usize> {
    let picks: Vec<usize> = group.elements().filter(|_| rng.random_bool(0.4)).collect();
    group.subgroup_generated(&picks)
}

fn draw_induced<R: Rng>(
    family: Family,
    rng: &mut R,
    config: &GeneratorConfig,
    tol: Tolerance,
) -> Result<Option<GroupAction>> {
    let factors = config
        .groups
        .choose(rng)
        .cloned()
        .ok_or_else(|| Error::InvalidGroup("no candidate groups".into()))?;
    let group = FiniteGroup::abelian(factors)?;
    let all: Vec<usize> = group.elements().collect();
    let h = match family {
        Family::Inner | Family::Gauge => all,
        Family::BlockPermutation if !config.prime_only => vec![0],
        Family::Mixed if !config.prime_only => random_subgroup(&group, rng),
        _ => all,
    };
    let blocks = group.order() / h.len();
    let pauli_possible = group
        .abelian_structure()
        .map(|s| s.factors() == [2, 2])
        .unwrap_or(false)
        && h.len() == 4
        && family != Family::Gauge;
    let use_pauli = pauli_possible && rng.random_bool(0.5);
    let Some(m) = pick_block_size(rng, blocks, config, if use_pauli { 2 } else { 1 }) else {
        return Ok(None);
    };
    let m = if use_pauli && m % 2 == 1 { m - 1 } else { m };
    if m == 0 {
        return Ok(None);
    }
    let v = if use_pauli {
        pauli_representation(&group, m, rng)
    } else {
        character_representation(&group, &h, m, rng)
    };
    let twist = match family {
        Family::Gauge => false,
        Family::BlockPermutation => rng.random_bool(0.7),
        _ => true,
    };
    let ws: Vec<CMatrix> = (0..blocks)
        .map(|_| {
            if twist {
                haar_unitary(m, rng)
            } else {
                CMatrix::identity(m, m)
            }
        })
        .collect();
    induced_action(group, &h, m, &v, &ws, tol).map(Some)
}

/// `v_h = diag(⟨h, γ_1⟩, …, ⟨h, γ_m⟩)` for random characters `γ_k`, indexed
/// by group element (only values on `H` are used).
fn character_representation<R: Rng>(group: &FiniteGroup, h: &[usize], m: usize, rng: &mut R) -> Vec<CMatrix> {
    let s = group.abelian_structure().expect("abelian");
    let gammas: Vec<usize> = (0..m).map(|_| rng.random_range(0..s.order())).collect();
    group
        .elements()
        .map(|g| {
            if !h.contains(&g) {
                return CMatrix::identity(m, m);
            }
            let diag: Vec<C> = gammas.iter().map(|&gamma| s.pairing_index(g, gamma)).collect();
            CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
        })
        .collect()
}

/// `Z_2 × Z_2` acting projectively by `X^a Z^b ⊗ D(a, b)` with a diagonal
/// character representation `D` on the remaining factor.
fn pauli_representation<R: Rng>(group: &FiniteGroup, m: usize, rng: &mut R) -> Vec<CMatrix> {
    let s = group.abelian_structure().expect("abelian");
    let x = CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
    let z = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    let all: Vec<usize> = group.elements().collect();
    let d = character_representation(group, &all, m / 2, rng);
    group
        .elements()
        .map(|g| {
            let t = s.tuple(g);
            let mut p = CMatrix::identity(2, 2);
            if t[0] == 1 {
                p = &p * &x;
            }
            if t[1] == 1 {
                p = &p * &z;
            }
            p.kronecker(&d[g])
        })
        .collect()
}

/// The induced action described in the module docs. `v` is indexed by
/// group element; only entries on `h` are read.
pub fn induced_action(
    group: FiniteGroup,
    h: &[usize],
    m: usize,
    v: &[CMatrix],
    ws: &[CMatrix],
    tol: Tolerance,
) -> Result<GroupAction> {
    let s = group.require_abelian()?.clone();
    let reps = group.quotient_transversal(h)?;
    let k = reps.len();
    let coset_of = |x: usize| -> (usize, usize) {
        // x = r_c + h  ⇒  h = x - r_c ∈ H
        reps.iter()
            .enumerate()
            .find_map(|(c, &r)| {
                let diff = s.add(x, s.neg(r));
                h.contains(&diff).then_some((c, diff))
            })
            .expect("transversal covers the group")
    };
    let shape = BlockShape::new(vec![m; k])?;
    let alphas = group
        .elements()
        .map(|g| {
            let mut perm = vec![0; k];
            let mut blocks = vec![CMatrix::zeros(m, m); k];
            for (c, &r) in reps.iter().enumerate() {
                let (target, hh) = coset_of(s.add(g, r));
                perm[c] = target;
                blocks[target] = &ws[target] * &v[hh] * ws[c].adjoint();
            }
            Automorphism::new(&shape, perm, AlgebraElement::from_blocks(blocks)?, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    GroupAction::new(group, alphas, tol)
}

/// `S_3` acting on `M_m` by `Ad(W P(g) W*)`, where `P` is a direct sum of
/// copies of the trivial, sign and 3-dimensional permutation
/// representations.
fn draw_symmetric<R: Rng>(rng: &mut R, config: &GeneratorConfig, tol: Tolerance) -> Result<Option<GroupAction>> {
    let Some(m) = pick_block_size(rng, 1, config, 3) else {
        return Ok(None);
    };
    let group = FiniteGroup::symmetric(3)?;
    let perms = permutations(3);
    // summands: 0 trivial, 1 sign, 2 permutation
    let mut summands = vec![2usize];
    let mut size = 3;
    while size < m {
        let pick = if m - size >= 3 {
            rng.random_range(0..3)
        } else {
            rng.random_range(0..2)
        };
        size += if pick == 2 { 3 } else { 1 };
        summands.push(pick);
    }
    let w = haar_unitary(m, rng);
    let alphas = perms
        .iter()
        .map(|p| {
            let sign = if inversions(p).is_multiple_of(2) { ONE } else { -ONE };
            let mut u = CMatrix::zeros(m, m);
            let mut at = 0;
            for &kind in &summands {
                match kind {
                    0 => u[(at, at)] = ONE,
                    1 => u[(at, at)] = sign,
                    _ => {
                        for (from, &to) in p.iter().enumerate() {
                            u[(at + to, at + from)] = ONE;
                        }
                    }
                }
                at += if kind == 2 { 3 } else { 1 };
            }
            let u = AlgebraElement::from_blocks(vec![&w * u * w.adjoint()])?;
            Automorphism::inner(&u, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    GroupAction::new(group, alphas, tol).map(Some)
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_and_valid() {
        let tol = Tolerance::default();
        for family in Family::ALL {
            let a = generate_examples(family, 7, 3).unwrap();
            let b = generate_examples(family, 7, 3).unwrap();
            assert_eq!(a, b);
            for d in &a {
                let action = d.to_action(tol).unwrap();
                assert!(action.is_faithful(tol).unwrap());
                assert!(action.is_g_prime());
                assert!(action.shape().dimension() <= 24);
            }
        }
    }

    #[test]
    fn block_permutation_examples_are_g_prime() {
        let tol = Tolerance::default();
        let config = GeneratorConfig {
            groups: vec![vec![2]],
            ..GeneratorConfig::default()
        };
        for seed in 0..5 {
            let d = &generate_with(Family::BlockPermutation, seed, 1, &config).unwrap()[0];
            let action = d.to_action(tol).unwrap();
            assert_eq!(action.shape().num_blocks(), 2);
            assert!(action.is_g_prime());
        }
    }

    #[test]
    fn gauge_examples_on_m2_have_full_spectrum() {
        let tol = Tolerance::default();
        let config = GeneratorConfig {
            groups: vec![vec![2]],
            max_block: 2,
            max_dimension: 4,
            ..GeneratorConfig::default()
        };
        for seed in 0..5 {
            let action = generate_action(Family::Gauge, seed, 0, &config).unwrap();
            assert_eq!(action.shape().dims(), &[2]);
            let sp = crate::spectral::arveson_spectrum(&action, tol).unwrap();
            assert_eq!(sp.members(), &[0, 1]);
        }
    }
}
