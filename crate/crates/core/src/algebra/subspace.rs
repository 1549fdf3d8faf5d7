use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgebraElement, BlockShape, Tolerance};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C, ZERO};

const PROBES: usize = 3;
const PROBE_SEED: u64 = 0x5052_4f42;

/// A linear subspace of a block algebra, stored as a basis that is
/// orthonormal for the trace inner product `⟨a, b⟩ = Σ_i tr(a_i* b_i)`.
#[derive(Debug, Clone)]
pub struct Subspace {
    shape: BlockShape,
    basis: Vec<AlgebraElement>,
}

fn columns_of(elems: &[AlgebraElement], len: usize) -> CMatrix {
    let mut m = CMatrix::zeros(len, elems.len());
    for (j, e) in elems.iter().enumerate() {
        m.set_column(j, &e.to_vector());
    }
    m
}

fn elements_of(shape: &BlockShape, m: &CMatrix) -> Vec<AlgebraElement> {
    (0..m.ncols())
        .map(|j| {
            let col = m.column(j).into_owned();
            AlgebraElement::from_vector(shape, col.as_slice()).expect("column length matches shape")
        })
        .collect()
}

impl Subspace {
    /// Orthonormalized span of `elems` (dependent vectors are dropped).
    pub fn span(shape: &BlockShape, elems: &[AlgebraElement], tol: Tolerance) -> Result<Self> {
        for e in elems {
            if &e.shape() != shape {
                return Err(Error::IncompatibleShapes(format!("{} vs {shape}", e.shape())));
            }
        }
        let m = columns_of(elems, shape.dimension());
        let q = linalg::column_space(&m, tol.epsilon());
        Ok(Subspace {
            shape: shape.clone(),
            basis: elements_of(shape, &q),
        })
    }

    /// Wraps elements the caller knows to be orthonormal.
    pub(crate) fn from_orthonormal(shape: &BlockShape, basis: Vec<AlgebraElement>) -> Self {
        Subspace {
            shape: shape.clone(),
            basis,
        }
    }

    pub fn full(shape: &BlockShape) -> Self {
        Subspace {
            shape: shape.clone(),
            basis: shape.matrix_units(),
        }
    }

    pub fn scalars(shape: &BlockShape) -> Self {
        let n = shape.hilbert_dimension() as f64;
        Subspace {
            shape: shape.clone(),
            basis: vec![AlgebraElement::identity(shape).scale(C::new(1.0 / n.sqrt(), 0.0))],
        }
    }

    pub fn zero(shape: &BlockShape) -> Self {
        Subspace {
            shape: shape.clone(),
            basis: Vec::new(),
        }
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn coordinates(&self, a: &AlgebraElement) -> Result<Vec<C>> {
        self.basis.iter().map(|b| b.inner(a)).collect()
    }

    pub fn combination(&self, coeffs: &[C]) -> AlgebraElement {
        let mut out = AlgebraElement::zeros(&self.shape);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            for (o, bb) in out.blocks_mut().iter_mut().zip(b.blocks()) {
                *o += bb * c;
            }
        }
        out
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        let coeffs = self.coordinates(a)?;
        Ok(self.combination(&coeffs))
    }

    /// Frobenius distance from `a` to the subspace.
    pub fn residual(&self, a: &AlgebraElement) -> Result<f64> {
        Ok(a.sub(&self.project(a)?)?.frobenius_norm())
    }

    pub fn contains(&self, a: &AlgebraElement, tol: Tolerance) -> Result<bool> {
        Ok(tol.is_zero(self.residual(a)?, a.frobenius_norm()))
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: Tolerance) -> Result<bool> {
        for b in &other.basis {
            if !self.contains(b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Largest membership residual of all pairwise basis products.
    pub fn closure_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            for b in &self.basis {
                worst = worst.max(self.residual(&a.mul(b)?)?);
            }
            worst = worst.max(self.residual(&a.adjoint())?);
        }
        Ok(worst)
    }

    /// Fails with "not a subalgebra" unless the subspace is a unital
    /// *-subalgebra (closed under products and adjoints, containing 1).
    pub fn check_unital_star_subalgebra(&self, tol: Tolerance) -> Result<()> {
        if self.basis.is_empty() {
            return Err(Error::NotSubalgebra("zero subspace".into()));
        }
        if !tol.is_zero(self.closure_residual()?, 1.0) {
            return Err(Error::NotSubalgebra(
                "subspace is not closed under products and adjoints".into(),
            ));
        }
        if !self.contains(&AlgebraElement::identity(&self.shape), tol)? {
            return Err(Error::NotSubalgebra("subspace does not contain the unit".into()));
        }
        Ok(())
    }

    /// `{x ∈ self : l·x = x·r for every (l, r) in pairs}`.
    ///
    /// A few random combinations of the constraints are imposed first, which
    /// usually cuts the space down to the answer at once; every original pair
    /// is then checked and any that still fails is imposed exactly.
    pub fn solve_intertwiners(&self, pairs: &[(AlgebraElement, AlgebraElement)], tol: Tolerance) -> Result<Subspace> {
        for (l, r) in pairs {
            if l.shape() != self.shape || r.shape() != self.shape {
                return Err(Error::IncompatibleShapes(format!("{} vs {}", l.shape(), self.shape)));
            }
        }
        let mut current = self.basis.clone();
        if pairs.len() > PROBES {
            let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
            let probes = (0..PROBES)
                .map(|_| {
                    let mut l = AlgebraElement::zeros(&self.shape);
                    let mut r = AlgebraElement::zeros(&self.shape);
                    for (pl, pr) in pairs {
                        let c = linalg::random_complex(&mut rng);
                        l = l.add(&pl.scale(c))?;
                        r = r.add(&pr.scale(c))?;
                    }
                    Ok((l, r))
                })
                .collect::<Result<Vec<_>>>()?;
            current = self.impose(current, &probes, tol)?;
        }
        for pair in pairs {
            if current.is_empty() {
                break;
            }
            let scale = pair.0.threshold_scale().max(pair.1.threshold_scale());
            let violated = current.iter().try_fold(false, |acc, w| -> Result<bool> {
                if acc {
                    return Ok(true);
                }
                let c = pair.0.mul(w)?.sub(&w.mul(&pair.1)?)?;
                Ok(!tol.is_zero(c.frobenius_norm(), scale))
            })?;
            if violated {
                current = self.impose(current, std::slice::from_ref(pair), tol)?;
            }
        }
        Subspace::span(&self.shape, &current, tol)
    }

    fn impose(
        &self,
        mut current: Vec<AlgebraElement>,
        pairs: &[(AlgebraElement, AlgebraElement)],
        tol: Tolerance,
    ) -> Result<Vec<AlgebraElement>> {
        let len = self.shape.dimension();
        for (l, r) in pairs {
            if current.is_empty() {
                break;
            }
            let mut m = CMatrix::zeros(len, current.len());
            for (k, w) in current.iter().enumerate() {
                let c = l.mul(w)?.sub(&w.mul(r)?)?;
                m.set_column(k, &c.to_vector());
            }
            let null = linalg::nullspace(&m, tol.epsilon());
            if null.ncols() == current.len() {
                continue;
            }
            let w = columns_of(&current, len) * null;
            current = elements_of(&self.shape, &w);
        }
        Ok(current)
    }

    /// `{x ∈ within : x s = s x for all s in self}`.
    pub fn commutant(&self, within: &Subspace, tol: Tolerance) -> Result<Subspace> {
        if self.shape != within.shape {
            return Err(Error::IncompatibleShapes(format!("{} vs {}", self.shape, within.shape)));
        }
        let pairs: Vec<_> = self.basis.iter().map(|s| (s.clone(), s.clone())).collect();
        within.solve_intertwiners(&pairs, tol)
    }

    /// Center of a unital *-subalgebra, as the kernel of the stacked
    /// commutator map.
    pub fn center(&self, tol: Tolerance) -> Result<Subspace> {
        self.check_unital_star_subalgebra(tol)?;
        self.commutant(self, tol)
    }

    /// A unital *-subalgebra is prime iff its center is one-dimensional.
    pub fn is_prime(&self, tol: Tolerance) -> Result<bool> {
        Ok(self.center(tol)?.dim() == 1)
    }

    /// Linear span of `{a b : a ∈ self, b ∈ other}`.
    pub fn product_span(&self, other: &Subspace, tol: Tolerance) -> Result<Subspace> {
        let mut prods = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                prods.push(a.mul(b)?);
            }
        }
        Subspace::span(&self.shape, &prods, tol)
    }

    pub fn adjoint_space(&self) -> Subspace {
        Subspace {
            shape: self.shape.clone(),
            basis: self.basis.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// `{p x p : x ∈ self}`.
    pub fn compress(&self, p: &AlgebraElement, tol: Tolerance) -> Result<Subspace> {
        let elems = self
            .basis
            .iter()
            .map(|b| p.mul(b)?.mul(p))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(&self.shape, &elems, tol)
    }

    /// `{x c : x ∈ self}` for a fixed element `c`.
    pub fn right_multiply(&self, c: &AlgebraElement, tol: Tolerance) -> Result<Subspace> {
        let elems = self.basis.iter().map(|b| b.mul(c)).collect::<Result<Vec<_>>>()?;
        Subspace::span(&self.shape, &elems, tol)
    }

    /// Random element with standard complex Gaussian coordinates.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        let coeffs: Vec<C> = (0..self.dim()).map(|_| linalg::random_complex(rng)).collect();
        self.combination(&coeffs)
    }

    /// Random self-adjoint element; requires the subspace to be *-closed.
    pub fn random_self_adjoint<R: Rng + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        let x = self.random_element(rng);
        x.add(&x.adjoint()).expect("same shape").scale(C::new(0.5, 0.0))
    }

    /// Coefficient vector `(1, 1, ..., 1)`.
    pub(crate) fn ones(&self) -> Vec<C> {
        vec![C::new(1.0, 0.0); self.dim()]
    }

    pub(crate) fn unit_vector(&self, k: usize) -> Vec<C> {
        let mut v = vec![ZERO; self.dim()];
        v[k] = C::new(1.0, 0.0);
        v
    }
}
