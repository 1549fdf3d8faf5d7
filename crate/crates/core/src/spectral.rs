//! Spectral subspaces and the Arveson and Connes spectra of actions of
//! finite abelian groups.
//!
//! Characters are addressed by their index in the dual group, which uses the
//! same mixed-radix encoding as the group itself.

use crate::actions::GroupAction;
use crate::algebra::{wedderburn_decompose, AlgebraElement, Subspace, Tolerance};
use crate::error::{Error, Result};
use crate::groups::AbelianStructure;

/// A subset of the dual group, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpectrumSet {
    members: Vec<usize>,
}

impl SpectrumSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        SpectrumSet { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, gamma: usize) -> bool {
        self.members.binary_search(&gamma).is_ok()
    }

    pub fn is_subset(&self, other: &SpectrumSet) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &SpectrumSet) -> SpectrumSet {
        SpectrumSet {
            members: self.members.iter().copied().filter(|&g| other.contains(g)).collect(),
        }
    }

    /// Contains 0 and is closed under addition and negation.
    pub fn is_subgroup(&self, structure: &AbelianStructure) -> bool {
        self.contains(0)
            && self.members.iter().all(|&a| {
                self.contains(structure.neg(a)) && self.members.iter().all(|&b| self.contains(structure.add(a, b)))
            })
    }

    /// Members as character tuples.
    pub fn tuples(&self, structure: &AbelianStructure) -> Vec<Vec<usize>> {
        self.members.iter().map(|&g| structure.tuple(g)).collect()
    }
}

fn spectral_weights(action: &GroupAction, gamma: usize) -> Result<Vec<crate::linalg::C>> {
    let abelian = action.group().require_abelian()?;
    if gamma >= abelian.order() {
        return Err(Error::StructureMismatch(format!(
            "character index {gamma} out of range"
        )));
    }
    Ok(action
        .group()
        .elements()
        .map(|g| abelian.pairing_index(g, gamma).conj())
        .collect())
}

/// `A_γ = {a : α_g(a) = ⟨g, γ⟩ a}`, the image of
/// `P_γ = (1/|G|) Σ_g conj⟨g, γ⟩ α_g`.
pub fn spectral_subspace(action: &GroupAction, gamma: usize, tol: Tolerance) -> Result<Subspace> {
    let weights = spectral_weights(action, gamma)?;
    action.averaged_image(&weights, tol)
}

/// `P_γ(a)`.
pub fn spectral_projection(action: &GroupAction, gamma: usize, a: &AlgebraElement) -> Result<AlgebraElement> {
    let weights = spectral_weights(action, gamma)?;
    action.average(&weights, a)
}

/// `Sp(α) = {γ : A_γ ≠ 0}`.
pub fn arveson_spectrum(action: &GroupAction, tol: Tolerance) -> Result<SpectrumSet> {
    let order = action.group().require_abelian()?.order();
    let mut members = Vec::new();
    for gamma in 0..order {
        if spectral_subspace(action, gamma, tol)?.dim() > 0 {
            members.push(gamma);
        }
    }
    Ok(SpectrumSet::new(members))
}

/// Arveson spectrum of the restriction of the action to `pAp`.
///
/// Fails with "not an invariant projection" unless `p` is a projection
/// fixed by every `α_g`.
pub fn restricted_spectrum(action: &GroupAction, p: &AlgebraElement, tol: Tolerance) -> Result<SpectrumSet> {
    let order = action.group().require_abelian()?.order();
    if &p.shape() != action.shape() {
        return Err(Error::IncompatibleShapes(format!(
            "{} vs {}",
            p.shape(),
            action.shape()
        )));
    }
    if !p.is_projection(tol) {
        return Err(Error::NotInvariantProjection("element is not a projection".into()));
    }
    for alpha in action.alphas() {
        if !tol.is_zero(alpha.apply(p)?.distance(p)?, 1.0) {
            return Err(Error::NotInvariantProjection(
                "projection is moved by the action".into(),
            ));
        }
    }
    // p is invariant, so P_γ commutes with compression by p
    let mut members = Vec::new();
    for gamma in 0..order {
        if spectral_subspace(action, gamma, tol)?.compress(p, tol)?.dim() > 0 {
            members.push(gamma);
        }
    }
    Ok(SpectrumSet::new(members))
}

/// One minimal projection per simple block of `A^α`; these cut out the
/// minimal invariant hereditary subalgebras up to conjugacy in `A^α`.
pub fn minimal_invariant_projections(action: &GroupAction, tol: Tolerance) -> Result<Vec<AlgebraElement>> {
    let fixed = action.fixed_point_algebra(tol)?;
    Ok(wedderburn_decompose(&fixed, tol)?.minimal_projections().to_vec())
}

/// `Γ(α)`, the intersection of the restricted spectra over the minimal
/// invariant projections.
pub fn connes_spectrum(action: &GroupAction, tol: Tolerance) -> Result<SpectrumSet> {
    let order = action.group().require_abelian()?.order();
    let mut gamma = SpectrumSet::new((0..order).collect());
    for p in minimal_invariant_projections(action, tol)? {
        gamma = gamma.intersection(&restricted_spectrum(action, &p, tol)?);
    }
    Ok(gamma)
}
