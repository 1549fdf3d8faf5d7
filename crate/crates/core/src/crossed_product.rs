//! The crossed product `A ⋊_α G` of a finite group action.
//!
//! Elements are stored in coordinates `f = Σ_g f(g) δ_g`. The algebra is
//! realized concretely through the regular representation on
//! `H ⊗ ℓ²(G)`, `H = ⊕ C^{n_i}`, where `f` acts by the block matrix whose
//! `(p, q)` block is `α_{p⁻¹}(f(p q⁻¹))`. Since `H` already carries a
//! faithful representation of `A`, this representation is faithful and the
//! image is a unital *-subalgebra of `M_{N|G|}`; its Wedderburn
//! decomposition gives the block shape of the crossed product.

use std::sync::OnceLock;

use crate::actions::{Automorphism, GroupAction};
use crate::algebra::{decompose_algebra, AlgebraElement, BlockShape, Subspace, Tolerance, Wedderburn};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C};

/// `f = Σ_g f(g) δ_g`, indexed by group element.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossedProductElement {
    coeffs: Vec<AlgebraElement>,
}

impl CrossedProductElement {
    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> &AlgebraElement {
        &self.coeffs[g]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(CrossedProductElement { coeffs })
    }

    pub fn scale(&self, c: C) -> Self {
        CrossedProductElement {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Largest coordinate distance `max_g ‖f(g) - h(g)‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            worst = worst.max(a.distance(b)?);
        }
        Ok(worst)
    }
}

/// `A ⋊_α G` together with its regular-representation image.
#[derive(Debug)]
pub struct CrossedProduct {
    action: GroupAction,
    ambient: BlockShape,
    span: Subspace,
    tol: Tolerance,
    wedderburn: OnceLock<Result<Wedderburn>>,
}

impl CrossedProduct {
    pub fn new(action: &GroupAction, tol: Tolerance) -> Result<Self> {
        let n = action.shape().hilbert_dimension();
        let ambient = BlockShape::new(vec![n * action.group().order()])?;
        let mut cp = CrossedProduct {
            action: action.clone(),
            ambient: ambient.clone(),
            span: Subspace::zero(&ambient),
            tol,
            wedderburn: OnceLock::new(),
        };
        // images of distinct δ_g have disjoint supports and each α is
        // isometric, so the coordinate basis maps to an orthogonal family
        // of norm sqrt|G|
        let scale = C::new(1.0 / (action.group().order() as f64).sqrt(), 0.0);
        let images = cp
            .basis()
            .iter()
            .map(|f| Ok(cp.represent(f)?.scale(scale)))
            .collect::<Result<Vec<_>>>()?;
        cp.span = Subspace::from_orthonormal(&ambient, images);
        Ok(cp)
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    /// `dim(A)·|G|`.
    pub fn dimension(&self) -> usize {
        self.action.shape().dimension() * self.action.group().order()
    }

    /// The regular-representation image as a subspace of `M_{N|G|}`.
    pub fn span(&self) -> &Subspace {
        &self.span
    }

    /// The shape `[N·|G|]` of the representation space.
    pub fn ambient(&self) -> &BlockShape {
        &self.ambient
    }

    /// Wedderburn decomposition of the regular-representation image,
    /// computed on first use.
    pub fn wedderburn(&self) -> Result<&Wedderburn> {
        self.wedderburn
            .get_or_init(|| decompose_algebra(&self.span, self.tol))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Block shape of `A ⋊ G`.
    pub fn shape(&self) -> Result<&BlockShape> {
        Ok(self.wedderburn()?.shape())
    }

    /// Coordinate basis `{E δ_g}` over matrix units `E` of `A`.
    pub fn basis(&self) -> Vec<CrossedProductElement> {
        let units = self.action.shape().matrix_units();
        self.action
            .group()
            .elements()
            .flat_map(|g| units.iter().map(move |a| self.delta(a.clone(), g)))
            .collect()
    }

    pub fn zero(&self) -> CrossedProductElement {
        CrossedProductElement {
            coeffs: vec![AlgebraElement::zeros(self.action.shape()); self.action.group().order()],
        }
    }

    fn delta(&self, a: AlgebraElement, g: usize) -> CrossedProductElement {
        let mut f = self.zero();
        f.coeffs[g] = a;
        f
    }

    pub fn from_coeffs(&self, coeffs: Vec<AlgebraElement>) -> Result<CrossedProductElement> {
        if coeffs.len() != self.action.group().order() {
            return Err(Error::IncompatibleShapes(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                self.action.group().order()
            )));
        }
        if let Some(a) = coeffs.iter().find(|a| &a.shape() != self.action.shape()) {
            return Err(Error::IncompatibleShapes(format!(
                "{} vs {}",
                a.shape(),
                self.action.shape()
            )));
        }
        Ok(CrossedProductElement { coeffs })
    }

    fn check(&self, f: &CrossedProductElement) -> Result<()> {
        if f.coeffs.len() != self.action.group().order() || &f.coeffs[0].shape() != self.action.shape() {
            return Err(Error::IncompatibleShapes(
                "element of a different crossed product".into(),
            ));
        }
        Ok(())
    }

    /// `a δ_e`.
    pub fn embed_base(&self, a: &AlgebraElement) -> Result<CrossedProductElement> {
        if &a.shape() != self.action.shape() {
            return Err(Error::IncompatibleShapes(format!(
                "{} vs {}",
                a.shape(),
                self.action.shape()
            )));
        }
        Ok(self.delta(a.clone(), 0))
    }

    /// `δ_g = 1 δ_g`.
    pub fn embed_group(&self, g: usize) -> CrossedProductElement {
        self.delta(AlgebraElement::identity(self.action.shape()), g)
    }

    pub fn unit(&self) -> CrossedProductElement {
        self.embed_group(0)
    }

    /// `(f·h)(g) = Σ_p f(p) α_p(h(p⁻¹ g))`.
    pub fn multiply(&self, f: &CrossedProductElement, h: &CrossedProductElement) -> Result<CrossedProductElement> {
        self.check(f)?;
        self.check(h)?;
        let group = self.action.group();
        let mut out = self.zero();
        for p in group.elements() {
            if f.coeffs[p].frobenius_norm() == 0.0 {
                continue;
            }
            let alpha = self.action.alpha(p);
            for q in group.elements() {
                if h.coeffs[q].frobenius_norm() == 0.0 {
                    continue;
                }
                // q = p⁻¹ g, so g = p q
                let g = group.mul(p, q);
                let term = f.coeffs[p].mul(&alpha.apply(&h.coeffs[q])?)?;
                out.coeffs[g] = out.coeffs[g].add(&term)?;
            }
        }
        Ok(out)
    }

    /// `f*(g) = α_g(f(g⁻¹)*)`.
    pub fn adjoint(&self, f: &CrossedProductElement) -> Result<CrossedProductElement> {
        self.check(f)?;
        let group = self.action.group();
        let coeffs = group
            .elements()
            .map(|g| self.action.alpha(g).apply(&f.coeffs[group.inv(g)].adjoint()))
            .collect::<Result<_>>()?;
        Ok(CrossedProductElement { coeffs })
    }

    /// Matrix of `f` in the regular representation, block `(p, q)` equal to
    /// `α_{p⁻¹}(f(p q⁻¹))`.
    pub fn regular_representation(&self, f: &CrossedProductElement) -> Result<CMatrix> {
        self.check(f)?;
        let group = self.action.group();
        let n = self.action.shape().hilbert_dimension();
        let mut m = CMatrix::zeros(n * group.order(), n * group.order());
        for p in group.elements() {
            let alpha = self.action.alpha(group.inv(p));
            for q in group.elements() {
                let g = group.mul(p, group.inv(q));
                if f.coeffs[g].frobenius_norm() == 0.0 {
                    continue;
                }
                let block = alpha.apply(&f.coeffs[g])?.to_dense();
                m.view_mut((p * n, q * n), (n, n)).copy_from(&block);
            }
        }
        Ok(m)
    }

    /// The representation as an element of the ambient algebra `[N·|G|]`.
    pub fn represent(&self, f: &CrossedProductElement) -> Result<AlgebraElement> {
        AlgebraElement::from_blocks(vec![self.regular_representation(f)?])
    }

    /// Reads coordinates back from a representation matrix via
    /// `f(g) = block(e, g⁻¹)`. Only meaningful on the image.
    pub fn decode(&self, m: &CMatrix) -> Result<CrossedProductElement> {
        let group = self.action.group();
        let shape = self.action.shape();
        let n = shape.hilbert_dimension();
        if m.nrows() != n * group.order() || m.ncols() != n * group.order() {
            return Err(Error::IncompatibleShapes(format!(
                "{}x{} matrix for a representation of size {}",
                m.nrows(),
                m.ncols(),
                n * group.order()
            )));
        }
        let coeffs = group
            .elements()
            .map(|g| {
                let q = group.inv(g);
                AlgebraElement::from_dense(shape, &m.view((0, q * n), (n, n)).into_owned())
            })
            .collect::<Result<_>>()?;
        Ok(CrossedProductElement { coeffs })
    }

    /// Image of `f` in the decomposed form `⊕ M_{m_j}`.
    pub fn to_blocks(&self, f: &CrossedProductElement) -> Result<AlgebraElement> {
        self.wedderburn()?.to_blocks(&self.represent(f)?)
    }

    pub fn from_blocks(&self, b: &AlgebraElement) -> Result<CrossedProductElement> {
        let dense = self.wedderburn()?.from_blocks(b)?;
        self.decode(dense.block(0))
    }

    /// Image of the embedded base `{a δ_e}` in the ambient algebra.
    pub fn base_span(&self) -> Result<Subspace> {
        let images = self
            .action
            .shape()
            .matrix_units()
            .into_iter()
            .map(|a| self.represent(&self.delta(a, 0)))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(&self.ambient, &images, self.tol)
    }

    /// `{v ∈ A⋊G : v (a δ_e) = (a δ_e) v ∀a}`, returned in coordinates.
    pub fn relative_commutant_of_base(&self) -> Result<Vec<CrossedProductElement>> {
        let commutant = self.base_span()?.commutant(&self.span, self.tol)?;
        commutant.basis().iter().map(|b| self.decode(b.block(0))).collect()
    }

    /// `(α̂_γ f)(g) = ⟨g, γ⟩ f(g)`.
    pub fn dual_apply(&self, gamma: usize, f: &CrossedProductElement) -> Result<CrossedProductElement> {
        self.check(f)?;
        let abelian = self.action.group().require_abelian()?;
        let coeffs = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(g, a)| a.scale(abelian.pairing_index(g, gamma)))
            .collect();
        Ok(CrossedProductElement { coeffs })
    }

    /// The dual action of `Ĝ`, factored into `(π, u)` form on the block
    /// shape of the crossed product.
    pub fn dual_action(&self) -> Result<GroupAction> {
        let group = self.action.group();
        let dual = group.dual()?;
        let shape = self.shape()?.clone();
        let alphas = dual
            .elements()
            .map(|gamma| {
                Automorphism::from_linear_map(
                    &shape,
                    |b| self.to_blocks(&self.dual_apply(gamma, &self.from_blocks(b)?)?),
                    self.tol,
                )
                .map_err(|e| match e {
                    Error::NotAutomorphism(msg) => Error::DecompositionUnresolved(msg),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GroupAction::new(dual, alphas, self.tol)
    }
}

/// Block shape of `A ⋊_α G`.
pub fn cp_structure(action: &GroupAction, tol: Tolerance) -> Result<BlockShape> {
    Ok(CrossedProduct::new(action, tol)?.shape()?.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteGroup;
    use crate::linalg::ONE;
    use nalgebra::DVector;

    fn swap_c2(tol: Tolerance) -> GroupAction {
        let shape = BlockShape::new(vec![1, 1]).unwrap();
        let swap = Automorphism::new(&shape, vec![1, 0], AlgebraElement::identity(&shape), tol).unwrap();
        GroupAction::new(
            FiniteGroup::cyclic(2).unwrap(),
            vec![Automorphism::identity(&shape), swap],
            tol,
        )
        .unwrap()
    }

    fn inner_m2(tol: Tolerance) -> GroupAction {
        let u = AlgebraElement::from_blocks(vec![CMatrix::from_diagonal(&DVector::from_vec(vec![ONE, -ONE]))]).unwrap();
        let shape = u.shape();
        GroupAction::new(
            FiniteGroup::cyclic(2).unwrap(),
            vec![Automorphism::identity(&shape), Automorphism::inner(&u, tol).unwrap()],
            tol,
        )
        .unwrap()
    }

    #[test]
    fn delta_relations() {
        let tol = Tolerance::default();
        let action = swap_c2(tol);
        let cp = CrossedProduct::new(&action, tol).unwrap();
        let d1 = cp.embed_group(1);
        assert_eq!(cp.multiply(&d1, &d1).unwrap(), cp.unit());
        assert_eq!(cp.adjoint(&d1).unwrap(), d1);
        let a = AlgebraElement::matrix_unit(action.shape(), 0, 0, 0);
        let conj = cp
            .multiply(&cp.multiply(&d1, &cp.embed_base(&a).unwrap()).unwrap(), &d1)
            .unwrap();
        let expected = cp.embed_base(&action.alpha(1).apply(&a).unwrap()).unwrap();
        assert!(conj.distance(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn representation_of_unit_is_identity() {
        let tol = Tolerance::default();
        let cp = CrossedProduct::new(&swap_c2(tol), tol).unwrap();
        assert_eq!(cp.regular_representation(&cp.unit()).unwrap(), CMatrix::identity(4, 4));
        let d1 = cp.regular_representation(&cp.embed_group(1)).unwrap();
        // a permutation-type matrix: one unit entry per row and column
        for r in 0..4 {
            let row_sum: f64 = (0..4).map(|c| d1[(r, c)].norm()).sum();
            assert!((row_sum - 1.0).abs() < 1e-14);
        }
        let back = cp.decode(&d1).unwrap();
        assert_eq!(back, cp.embed_group(1));
    }

    #[test]
    fn span_basis_is_orthonormal() {
        let tol = Tolerance::default();
        let shape = BlockShape::new(vec![1, 2]).unwrap();
        let u = AlgebraElement::from_blocks(vec![
            CMatrix::identity(1, 1),
            CMatrix::from_diagonal(&DVector::from_vec(vec![ONE, -ONE])),
        ])
        .unwrap();
        let action = GroupAction::new(
            FiniteGroup::cyclic(2).unwrap(),
            vec![Automorphism::identity(&shape), Automorphism::inner(&u, tol).unwrap()],
            tol,
        )
        .unwrap();
        for cp in [
            CrossedProduct::new(&swap_c2(tol), tol).unwrap(),
            CrossedProduct::new(&action, tol).unwrap(),
        ] {
            let basis = cp.span().basis();
            for (i, a) in basis.iter().enumerate() {
                for (j, b) in basis.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((a.inner(b).unwrap() - C::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn structure_examples() {
        let tol = Tolerance::default();
        assert_eq!(cp_structure(&swap_c2(tol), tol).unwrap().sorted_dims(), vec![2]);
        assert_eq!(cp_structure(&inner_m2(tol), tol).unwrap().sorted_dims(), vec![2, 2]);
        let shape = BlockShape::new(vec![1, 2]).unwrap();
        let trivial = GroupAction::trivial(FiniteGroup::trivial().unwrap(), &shape);
        assert_eq!(cp_structure(&trivial, tol).unwrap().sorted_dims(), vec![1, 2]);
    }

    #[test]
    fn relative_commutant_examples() {
        let tol = Tolerance::default();
        let shape = BlockShape::new(vec![2]).unwrap();
        let trivial = GroupAction::trivial(FiniteGroup::cyclic(2).unwrap(), &shape);
        let cp = CrossedProduct::new(&trivial, tol).unwrap();
        assert_eq!(cp.relative_commutant_of_base().unwrap().len(), 2);
        let cp = CrossedProduct::new(&swap_c2(tol), tol).unwrap();
        assert_eq!(cp.relative_commutant_of_base().unwrap().len(), 2);
        let cp = CrossedProduct::new(&inner_m2(tol), tol).unwrap();
        assert_eq!(cp.relative_commutant_of_base().unwrap().len(), 2);
    }

    #[test]
    fn dual_action_scales_coordinates() {
        let tol = Tolerance::default();
        let cp = CrossedProduct::new(&swap_c2(tol), tol).unwrap();
        let dual = cp.dual_action().unwrap();
        assert!(dual.alpha(0).is_identity(tol).unwrap());
        let d1 = cp.embed_group(1);
        let moved = cp
            .from_blocks(&dual.alpha(1).apply(&cp.to_blocks(&d1).unwrap()).unwrap())
            .unwrap();
        assert!(moved.distance(&d1.scale(-ONE)).unwrap() < 1e-10);
        let fixed = dual.fixed_point_algebra(tol).unwrap();
        assert_eq!(fixed.dim(), 2);
    }
}
