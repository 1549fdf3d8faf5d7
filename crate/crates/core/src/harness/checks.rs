//! Checkers that evaluate each condition of an equivalence statement by its
//! own computation and report whether they agree.

use std::fmt;
use std::str::FromStr;

use crate::actions::GroupAction;
use crate::algebra::{wedderburn_decompose, AlgebraElement, Subspace, Tolerance};
use crate::crossed_product::CrossedProduct;
use crate::error::{Error, Result};
use crate::groups::AbelianStructure;
use crate::outerness::{implementing_unitaries, implementing_unitary_for_connes_kernel, proper_outerness, Witness};
use crate::spectral::{
    arveson_spectrum, connes_spectrum, restricted_spectrum, spectral_projection, spectral_subspace, SpectrumSet,
};

use super::report::VerdictReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    T9,
    T11,
    T14,
    P13,
    P7,
    Facts,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::Facts,
        Theorem::T9,
        Theorem::T11,
        Theorem::T14,
        Theorem::P13,
        Theorem::P7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::T9 => "theorem9",
            Theorem::T11 => "theorem11",
            Theorem::T14 => "theorem14",
            Theorem::P13 => "prop13",
            Theorem::P7 => "prop7",
            Theorem::Facts => "spectral_facts",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "9" => Ok(Theorem::T9),
            "11" => Ok(Theorem::T11),
            "14" => Ok(Theorem::T14),
            "p13" => Ok(Theorem::P13),
            "p7" => Ok(Theorem::P7),
            "facts" => Ok(Theorem::Facts),
            other => Err(format!(
                "unknown theorem {other:?}; expected 9, 11, 14, p13, p7 or facts"
            )),
        }
    }
}

/// Runs one checker. `t0` is only used by [`Theorem::P7`].
pub fn run_check(theorem: Theorem, action: &GroupAction, t0: Option<usize>, tol: Tolerance) -> Result<VerdictReport> {
    match theorem {
        Theorem::T9 => check_theorem9(action, tol),
        Theorem::T11 => check_theorem11(action, tol),
        Theorem::T14 => check_theorem14(action, tol),
        Theorem::P13 => check_prop13(action, tol),
        Theorem::P7 => check_prop7(action, t0, tol),
        Theorem::Facts => spectral_facts_suite(action, tol),
    }
}

struct Hypotheses {
    check: &'static str,
    violations: Vec<String>,
}

impl Hypotheses {
    fn new(check: &'static str) -> Self {
        Hypotheses {
            check,
            violations: Vec::new(),
        }
    }

    fn require(&mut self, holds: bool, violation: &str) {
        if !holds {
            self.violations.push(violation.to_string());
        }
    }

    fn finish(self) -> Result<()> {
        if self.violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Hypothesis {
                check: self.check.to_string(),
                violations: self.violations,
            })
        }
    }
}

fn tuples(set: &SpectrumSet, s: &AbelianStructure) -> Vec<Vec<usize>> {
    set.tuples(s)
}

fn tuple_name(s: &AbelianStructure, g: usize) -> String {
    let t: Vec<String> = s.tuple(g).iter().map(|x| x.to_string()).collect();
    format!("({})", t.join(","))
}

fn element_name(action: &GroupAction, g: usize) -> String {
    match action.group().abelian_structure() {
        Some(s) => tuple_name(s, g),
        None => g.to_string(),
    }
}

fn new_report(theorem: Theorem, action: &GroupAction, tol: Tolerance) -> VerdictReport {
    let mut r = VerdictReport::new(theorem.name(), tol.epsilon());
    r.vacuous = action.group().order() == 1;
    r
}

fn note_inconclusive(report: &mut VerdictReport, action: &GroupAction, inconclusive: &[usize]) {
    for &g in inconclusive {
        report.warnings.push(format!(
            "witness search inconclusive for element {}",
            element_name(action, g)
        ));
    }
}

/// Equivalence of: a) `Sp(α) = Γ(α)`; b) `A^α` prime; c) the center of
/// `A^α` is trivial; d) no `α_t`, `t ≠ 0`, is implemented by a unitary of
/// `A^α`. Hypotheses: abelian group, faithful and G-prime action.
pub fn check_theorem9(action: &GroupAction, tol: Tolerance) -> Result<VerdictReport> {
    let mut hyp = Hypotheses::new("theorem9");
    hyp.require(action.group().abelian_structure().is_some(), "group is not abelian");
    hyp.require(action.is_faithful(tol)?, "action is not faithful");
    hyp.require(action.is_g_prime(), "action is not G-prime");
    hyp.finish()?;
    let s = action.group().require_abelian()?;
    let mut report = new_report(Theorem::T9, action, tol);

    let sp = arveson_spectrum(action, tol)?;
    let gamma = connes_spectrum(action, tol)?;
    report.condition("a_spectrum_equals_connes_spectrum", sp == gamma);
    report.spectra.insert("arveson".into(), tuples(&sp, s));
    report.spectra.insert("connes".into(), tuples(&gamma, s));

    let fixed = action.fixed_point_algebra(tol)?;
    report.dimension("fixed_point_algebra", fixed.dim());
    let blocks = wedderburn_decompose(&fixed, tol)?;
    report.condition("b_fixed_point_algebra_prime", blocks.num_blocks() == 1);
    report.dimension("fixed_point_algebra_blocks", blocks.num_blocks());

    let center = fixed.center(tol)?;
    report.condition("c_center_of_fixed_point_algebra_trivial", center.dim() == 1);
    report.dimension("center_of_fixed_point_algebra", center.dim());

    let mut implemented = false;
    let mut inconclusive = Vec::new();
    for t in action.group().elements().skip(1) {
        match implementing_unitaries(action.alpha(t), &fixed, tol)?.witness {
            Witness::Found(u) => {
                implemented = true;
                report.witness(&format!("unitary_in_fixed_point_algebra{}", tuple_name(s, t)), &u);
            }
            Witness::Inconclusive => inconclusive.push(t),
            Witness::Absent => {}
        }
    }
    note_inconclusive(&mut report, action, &inconclusive);
    report.condition("d_no_implementing_unitary_in_fixed_point_algebra", !implemented);
    report.set_consistent_if_all_equal();
    Ok(report)
}

/// Largest residual of `v(g) α_g(a) = a v(g)` and whether every nonzero
/// component has `v(g)* v(g), v(g) v(g)* ∈ ℂ1`.
fn commutant_component_checks(
    action: &GroupAction,
    commutant: &[crate::crossed_product::CrossedProductElement],
    tol: Tolerance,
) -> Result<(f64, bool)> {
    let units = action.shape().matrix_units();
    let scalars = Subspace::scalars(action.shape());
    let mut relation: f64 = 0.0;
    let mut scalar_norms = true;
    for v in commutant {
        for g in action.group().elements() {
            let vg = v.coeff(g);
            for a in &units {
                let lhs = vg.mul(&action.alpha(g).apply(a)?)?;
                relation = relation.max(lhs.distance(&a.mul(vg)?)?);
            }
            if vg.frobenius_norm() > tol.threshold(1.0) {
                let left = vg.adjoint().mul(vg)?;
                let right = vg.mul(&vg.adjoint())?;
                scalar_norms &= scalars.contains(&left, tol)? && scalars.contains(&right, tol)?;
            }
        }
    }
    Ok((relation, scalar_norms))
}

/// Proper outerness versus strict outerness, on prime `A`.
pub fn check_theorem11(action: &GroupAction, tol: Tolerance) -> Result<VerdictReport> {
    let mut hyp = Hypotheses::new("theorem11");
    hyp.require(action.shape().is_prime(), "algebra is not prime");
    hyp.require(action.is_faithful(tol)?, "action is not faithful");
    hyp.finish()?;
    let mut report = new_report(Theorem::T11, action, tol);

    let outer = proper_outerness(action, tol)?;
    note_inconclusive(&mut report, action, &outer.inconclusive);
    report.condition("properly_outer", outer.is_properly_outer());

    let cp = CrossedProduct::new(action, tol)?;
    let commutant = cp.relative_commutant_of_base()?;
    report.dimension("relative_commutant_in_crossed_product", commutant.len());
    report.condition("strictly_outer", commutant.len() == 1);

    let (relation, scalar_norms) = commutant_component_checks(action, &commutant, tol)?;
    report.residual("commutant_component_relation", relation);
    report.auxiliary("commutant_component_relation", tol.is_zero(relation, 1.0));
    report.auxiliary("commutant_components_scalar_norm", scalar_norms);
    report.set_consistent_if_all_equal();
    Ok(report)
}

fn prime_abelian_faithful(check: &'static str, action: &GroupAction, tol: Tolerance) -> Result<()> {
    let mut hyp = Hypotheses::new(check);
    hyp.require(action.shape().is_prime(), "algebra is not prime");
    hyp.require(action.group().abelian_structure().is_some(), "group is not abelian");
    hyp.require(action.is_faithful(tol)?, "action is not faithful");
    hyp.finish()
}

/// Equivalence of: a) proper outerness; b) `(A^α)′ ∩ A = ℂ1`; c) strict
/// outerness; d) `A^α` prime and the dual action properly outer. Hypotheses:
/// prime `A`, abelian group, faithful action.
pub fn check_theorem14(action: &GroupAction, tol: Tolerance) -> Result<VerdictReport> {
    prime_abelian_faithful("theorem14", action, tol)?;
    let mut report = new_report(Theorem::T14, action, tol);

    let outer = proper_outerness(action, tol)?;
    note_inconclusive(&mut report, action, &outer.inconclusive);
    report.condition("a_properly_outer", outer.is_properly_outer());

    let fixed = action.fixed_point_algebra(tol)?;
    let relative = fixed.commutant(&Subspace::full(action.shape()), tol)?;
    report.dimension("commutant_of_fixed_point_algebra", relative.dim());
    report.condition("b_commutant_of_fixed_point_algebra_trivial", relative.dim() == 1);

    let cp = CrossedProduct::new(action, tol)?;
    let commutant = cp.relative_commutant_of_base()?;
    report.dimension("relative_commutant_in_crossed_product", commutant.len());
    report.condition("c_strictly_outer", commutant.len() == 1);

    let fixed_prime = wedderburn_decompose(&fixed, tol)?.num_blocks() == 1;
    let dual = cp.dual_action()?;
    let dual_outer = proper_outerness(&dual, tol)?;
    if !dual_outer.inconclusive.is_empty() {
        report.warnings.push(format!(
            "dual witness search inconclusive for {} characters",
            dual_outer.inconclusive.len()
        ));
    }
    report.condition(
        "d_fixed_point_algebra_prime_and_dual_properly_outer",
        fixed_prime && dual_outer.is_properly_outer(),
    );

    let cp_shape = cp.shape()?;
    report.dimension("crossed_product_blocks", cp_shape.num_blocks());
    report.auxiliary(
        "fixed_point_prime_iff_crossed_product_prime",
        fixed_prime == cp_shape.is_prime(),
    );
    // trivial commutant of A^α forces every α_t to be outer
    report.auxiliary(
        "trivial_commutant_implies_properly_outer",
        relative.dim() != 1 || outer.is_properly_outer(),
    );
    report.set_consistent_if_all_equal();
    Ok(report)
}

/// `(A^α)′ ∩ A = ℂ1` iff every `α_t`, `t ≠ 0`, is properly outer, on
/// prime `A` with an abelian faithful action.
pub fn check_prop13(action: &GroupAction, tol: Tolerance) -> Result<VerdictReport> {
    prime_abelian_faithful("prop13", action, tol)?;
    let mut report = new_report(Theorem::P13, action, tol);

    let fixed = action.fixed_point_algebra(tol)?;
    let relative = fixed.commutant(&Subspace::full(action.shape()), tol)?;
    report.dimension("commutant_of_fixed_point_algebra", relative.dim());
    report.condition("commutant_of_fixed_point_algebra_trivial", relative.dim() == 1);

    let outer = proper_outerness(action, tol)?;
    note_inconclusive(&mut report, action, &outer.inconclusive);
    report.condition("every_nontrivial_element_properly_outer", outer.is_properly_outer());
    report.set_consistent_if_all_equal();
    Ok(report)
}

/// Constructs the unitary `u ∈ A^α` implementing `α_{t0}` for `t0`
/// annihilating `Γ(α)`; with `t0 = None` every such `t0` is tried.
pub fn check_prop7(action: &GroupAction, t0: Option<usize>, tol: Tolerance) -> Result<VerdictReport> {
    let mut hyp = Hypotheses::new("prop7");
    hyp.require(action.group().abelian_structure().is_some(), "group is not abelian");
    hyp.require(action.is_g_prime(), "action is not G-prime");
    hyp.finish()?;
    let s = action.group().require_abelian()?;
    let gamma = connes_spectrum(action, tol)?;
    let kernel = action.group().dual_annihilator(gamma.members())?;
    let targets = match t0 {
        Some(t) if t >= s.order() => {
            return Err(Error::input("t0", format!("element index {t} out of range")));
        }
        Some(t) if !kernel.contains(&t) => {
            return Err(Error::Hypothesis {
                check: "prop7".into(),
                violations: vec![format!(
                    "t0 = {} does not annihilate the Connes spectrum",
                    tuple_name(s, t)
                )],
            });
        }
        Some(t) => vec![t],
        None => kernel,
    };
    let mut report = new_report(Theorem::P7, action, tol);
    report.spectra.insert("connes".into(), tuples(&gamma, s));

    let units = action.shape().matrix_units();
    let fixed = action.fixed_point_algebra(tol)?;
    for t in targets {
        let name = tuple_name(s, t);
        let witness = implementing_unitary_for_connes_kernel(action, t, tol).map_err(|e| match e {
            Error::PreconditionViolated(msg) => Error::Hypothesis {
                check: "prop7".into(),
                violations: vec![msg],
            },
            other => other,
        })?;
        let Witness::Found(u) = witness else {
            report.condition(&format!("unitary_found{name}"), false);
            report.falsification = true;
            continue;
        };
        report.condition(&format!("unitary_found{name}"), true);
        let mut implement: f64 = 0.0;
        for a in &units {
            implement = implement.max(action.alpha(t).apply(a)?.distance(&a.conjugate_by(&u)?)?);
        }
        let mut invariance: f64 = 0.0;
        for alpha in action.alphas() {
            invariance = invariance.max(alpha.apply(&u)?.distance(&u)?);
        }
        let unitary_ok = u.is_unitary(tol) && fixed.contains(&u, tol)?;
        report.residual(&format!("implementation{name}"), implement);
        report.residual(&format!("invariance{name}"), invariance);
        report.witness(&format!("u{name}"), &u);
        if !unitary_ok || !tol.is_zero(implement, 1.0) || !tol.is_zero(invariance, 1.0) {
            report.falsification = true;
        }
    }
    report.consistent = !report.falsification;
    Ok(report)
}

/// The elementary facts about spectral subspaces, together with
/// `Γ(α) ⊆ Sp(α)`, the subgroup property of `Γ(α)` and monotonicity of
/// restricted spectra.
pub fn spectral_facts_suite(action: &GroupAction, tol: Tolerance) -> Result<VerdictReport> {
    let mut hyp = Hypotheses::new("spectral_facts");
    hyp.require(action.group().abelian_structure().is_some(), "group is not abelian");
    hyp.finish()?;
    let s = action.group().require_abelian()?;
    let mut report = new_report(Theorem::Facts, action, tol);
    let shape = action.shape();
    let n = s.order();
    let subspaces = (0..n)
        .map(|g| spectral_subspace(action, g, tol))
        .collect::<Result<Vec<_>>>()?;

    // 1) the spectral subspaces decompose A
    let total: usize = subspaces.iter().map(Subspace::dim).sum();
    report.dimension("sum_of_spectral_subspace_dimensions", total);
    let mut decomposition: f64 = 0.0;
    for a in shape.matrix_units() {
        let mut sum = AlgebraElement::zeros(shape);
        for gamma in 0..n {
            sum = sum.add(&spectral_projection(action, gamma, &a)?)?;
        }
        decomposition = decomposition.max(sum.distance(&a)?);
    }
    let mut orthogonality: f64 = 0.0;
    for (gamma, sub) in subspaces.iter().enumerate() {
        for b in sub.basis() {
            for other in (0..n).filter(|&o| o != gamma) {
                orthogonality = orthogonality.max(spectral_projection(action, other, b)?.frobenius_norm());
            }
        }
    }
    report.residual("fact1_projections_sum_to_identity", decomposition);
    report.residual("fact1_projections_orthogonal", orthogonality);
    report.condition(
        "fact1_spectral_subspaces_span",
        total == shape.dimension() && tol.is_zero(decomposition, 1.0) && tol.is_zero(orthogonality, 1.0),
    );

    // 2) A_γ1 A_γ2 ⊆ A_{γ1+γ2}
    let mut products: f64 = 0.0;
    for g1 in 0..n {
        for g2 in 0..n {
            let target = &subspaces[s.add(g1, g2)];
            for x in subspaces[g1].basis() {
                for y in subspaces[g2].basis() {
                    products = products.max(target.residual(&x.mul(y)?)?);
                }
            }
        }
    }
    report.residual("fact2_product_membership", products);
    report.condition("fact2_products_graded", tol.is_zero(products, 1.0));

    // 3) span(A_γ A_γ*) is an ideal of A^α
    let fixed = &subspaces[0];
    let mut ideal: f64 = 0.0;
    for sub in &subspaces {
        let i = sub.product_span(&sub.adjoint_space(), tol)?;
        for x in i.basis() {
            ideal = ideal.max(fixed.residual(x)?);
            for a in fixed.basis() {
                ideal = ideal.max(i.residual(&a.mul(x)?)?).max(i.residual(&x.mul(a)?)?);
            }
        }
    }
    report.residual("fact3_ideal_membership", ideal);
    report.condition("fact3_ideals_of_fixed_point_algebra", tol.is_zero(ideal, 1.0));

    // 4) and 5) need A^α prime
    let sp = arveson_spectrum(action, tol)?;
    report.spectra.insert("arveson".into(), tuples(&sp, s));
    let fixed_prime = fixed.is_prime(tol)?;
    if fixed_prime {
        report.condition("fact4_spectrum_is_subgroup", sp.is_subgroup(s));
        if action.is_faithful(tol)? {
            report.condition("fact5_spectrum_is_full_dual", sp.len() == n);
        } else {
            report
                .skipped
                .insert("fact5_spectrum_is_full_dual".into(), "action is not faithful".into());
        }
    } else {
        let reason = "fixed-point algebra is not prime".to_string();
        report
            .skipped
            .insert("fact4_spectrum_is_subgroup".into(), reason.clone());
        report.skipped.insert("fact5_spectrum_is_full_dual".into(), reason);
    }

    let gamma = connes_spectrum(action, tol)?;
    report.spectra.insert("connes".into(), tuples(&gamma, s));
    report.condition("connes_spectrum_within_arveson_spectrum", gamma.is_subset(&sp));
    report.condition("connes_spectrum_is_subgroup", gamma.is_subgroup(s));

    // q ≤ p for a minimal projection q inside its central block p of A^α
    let blocks = wedderburn_decompose(fixed, tol)?;
    let mut monotone = true;
    for (q, p) in blocks.minimal_projections().iter().zip(blocks.central_projections()) {
        let small = restricted_spectrum(action, q, tol)?;
        monotone &= small.is_subset(&restricted_spectrum(action, p, tol)?) && small.is_subset(&sp);
    }
    report.condition("restricted_spectrum_monotone", monotone);

    report.consistent = report.conditions.values().all(|&v| v);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::Automorphism;
    use crate::algebra::BlockShape;
    use crate::groups::FiniteGroup;
    use crate::linalg::{root_of_unity, CMatrix, C, ONE};
    use nalgebra::DVector;

    fn diag_action(entries: Vec<C>, order: usize, tol: Tolerance) -> GroupAction {
        let group = FiniteGroup::cyclic(order).unwrap();
        let shape = BlockShape::new(vec![entries.len()]).unwrap();
        let u = AlgebraElement::from_blocks(vec![CMatrix::from_diagonal(&DVector::from_vec(entries))]).unwrap();
        let gen = Automorphism::inner(&u, tol).unwrap();
        GroupAction::from_generators(group, &shape, &[(1, gen)], tol).unwrap()
    }

    fn swap_c2(tol: Tolerance) -> GroupAction {
        let shape = BlockShape::new(vec![1, 1]).unwrap();
        let s = Automorphism::new(&shape, vec![1, 0], AlgebraElement::identity(&shape), tol).unwrap();
        GroupAction::new(
            FiniteGroup::cyclic(2).unwrap(),
            vec![Automorphism::identity(&shape), s],
            tol,
        )
        .unwrap()
    }

    #[test]
    fn theorem9_examples() {
        let tol = Tolerance::default();
        let r = check_theorem9(&swap_c2(tol), tol).unwrap();
        assert!(r.consistent && r.conditions.values().all(|&v| v));
        let r = check_theorem9(&diag_action(vec![ONE, -ONE], 2, tol), tol).unwrap();
        assert!(r.consistent && r.conditions.values().all(|&v| !v));
        let trivial = GroupAction::trivial(FiniteGroup::trivial().unwrap(), &BlockShape::new(vec![2]).unwrap());
        let r = check_theorem9(&trivial, tol).unwrap();
        assert!(r.consistent && r.vacuous);
    }

    #[test]
    fn theorem11_and_14_examples() {
        let tol = Tolerance::default();
        let inner = diag_action(vec![ONE, -ONE], 2, tol);
        let r = check_theorem11(&inner, tol).unwrap();
        assert!(r.consistent && !r.is_flagged());
        assert!(!r.conditions["properly_outer"]);
        let omega = root_of_unity(1, 3);
        let z3 = diag_action(vec![ONE, omega, omega * omega], 3, tol);
        for r in [
            check_theorem14(&inner, tol).unwrap(),
            check_theorem14(&z3, tol).unwrap(),
        ] {
            assert!(!r.is_flagged(), "{}", r.to_text());
            assert!(r.conditions.values().all(|&v| !v));
        }
        let trivial = GroupAction::trivial(FiniteGroup::trivial().unwrap(), &BlockShape::new(vec![3]).unwrap());
        let r = check_theorem14(&trivial, tol).unwrap();
        assert!(r.vacuous && r.conditions.values().all(|&v| v));
        assert!(matches!(
            check_theorem11(&swap_c2(tol), tol),
            Err(Error::Hypothesis { .. })
        ));
    }

    #[test]
    fn prop7_examples() {
        let tol = Tolerance::default();
        let r = check_prop7(&diag_action(vec![ONE, -ONE], 2, tol), Some(1), tol).unwrap();
        assert!(!r.falsification && r.residuals.values().all(|&v| v < 1e-9));
        let r = check_prop7(&swap_c2(tol), Some(0), tol).unwrap();
        assert_eq!(r.residuals["implementation(0)"], 0.0);
        assert!(matches!(
            check_prop7(&swap_c2(tol), Some(1), tol),
            Err(Error::Hypothesis { .. })
        ));
    }

    #[test]
    fn facts_examples() {
        let tol = Tolerance::default();
        let r = spectral_facts_suite(&swap_c2(tol), tol).unwrap();
        assert!(r.consistent && r.skipped.is_empty());
        let r = spectral_facts_suite(&diag_action(vec![ONE, -ONE], 2, tol), tol).unwrap();
        assert!(r.consistent);
        assert_eq!(r.skipped.len(), 2);
    }
}
