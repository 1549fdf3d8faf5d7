//! Finite-dimensional C*-algebras `M_{n_1}(C) ⊕ ... ⊕ M_{n_k}(C)`.
//!
//! Every finite-dimensional C*-algebra is of this form. Such an algebra is
//! unital and its only essential ideal is the whole algebra, so its
//! multiplier algebra and its local multiplier algebra both coincide with
//! the algebra itself. The rest of the crate relies on this: wherever a
//! statement about actions quantifies over multipliers or local multipliers,
//! it is evaluated inside the algebra.

mod subspace;
mod wedderburn;

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C, ONE, ZERO};

pub use subspace::Subspace;
pub(crate) use wedderburn::decompose_algebra;
pub use wedderburn::{wedderburn_decompose, Wedderburn};

/// Numerical policy for every rank and zero decision.
///
/// A quantity is treated as zero when it is at most
/// `epsilon * max(1, scale)`, where `scale` is the largest singular value
/// (or norm) of the object under test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    epsilon: f64,
}

impl Tolerance {
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::input(
                "tolerance",
                format!("epsilon must be positive, got {epsilon}"),
            ));
        }
        Ok(Tolerance { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn threshold(&self, scale: f64) -> f64 {
        linalg::rank_threshold(self.epsilon, scale)
    }

    pub fn is_zero(&self, value: f64, scale: f64) -> bool {
        value <= self.threshold(scale)
    }

    /// Eigenvalue separation used when clustering spectra of generic elements.
    pub(crate) fn cluster_gap(&self, scale: f64) -> f64 {
        1e3 * self.threshold(scale)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

/// Block sizes `(n_1, ..., n_k)` of `⊕ M_{n_i}(C)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct BlockShape {
    dims: Vec<usize>,
}

impl BlockShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidShape("at least one block is required".into()));
        }
        if let Some(pos) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidShape(format!("block {pos} has size 0")));
        }
        Ok(BlockShape { dims })
    }

    pub fn full_matrix(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.dims.len()
    }

    /// Linear dimension `Σ n_i²`.
    pub fn dimension(&self) -> usize {
        self.dims.iter().map(|n| n * n).sum()
    }

    /// Dimension `Σ n_i` of the identity representation space.
    pub fn hilbert_dimension(&self) -> usize {
        self.dims.iter().sum()
    }

    /// A single full matrix block; in finite dimension this is primeness.
    pub fn is_prime(&self) -> bool {
        self.dims.len() == 1
    }

    /// Block sizes sorted ascending, for multiset comparisons.
    pub fn sorted_dims(&self) -> Vec<usize> {
        let mut d = self.dims.clone();
        d.sort_unstable();
        d
    }

    /// Matrix units `E^{(i)}_{kl}`, ordered by block then column-major.
    pub fn matrix_units(&self) -> Vec<AlgebraElement> {
        let mut out = Vec::with_capacity(self.dimension());
        for (i, &n) in self.dims.iter().enumerate() {
            for col in 0..n {
                for row in 0..n {
                    out.push(AlgebraElement::matrix_unit(self, i, row, col));
                }
            }
        }
        out
    }
}

impl TryFrom<Vec<usize>> for BlockShape {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        BlockShape::new(dims)
    }
}

impl From<BlockShape> for Vec<usize> {
    fn from(s: BlockShape) -> Self {
        s.dims
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|n| n.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A two-sided ideal, given by the blocks it contains.
///
/// The ideals of `⊕ M_{n_i}` are exactly the partial direct sums, and such
/// an ideal is essential iff it contains every block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDescriptor {
    pub block_subset: BTreeSet<usize>,
}

impl IdealDescriptor {
    /// Smallest ideal containing `a`: the blocks where `a` is nonzero.
    pub fn generated_by(a: &AlgebraElement, tol: Tolerance) -> Self {
        let scale = a.norm();
        let block_subset = a
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| !tol.is_zero(linalg::spectral_norm(b), scale))
            .map(|(i, _)| i)
            .collect();
        IdealDescriptor { block_subset }
    }

    pub fn is_essential(&self, shape: &BlockShape) -> bool {
        self.block_subset.len() == shape.num_blocks()
    }

    pub fn dimension(&self, shape: &BlockShape) -> usize {
        self.block_subset.iter().map(|&i| shape.dims[i] * shape.dims[i]).sum()
    }
}

/// An element of `⊕ M_{n_i}(C)`: one square complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidShape("at least one block is required".into()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.nrows() != b.ncols() || b.nrows() == 0 {
                return Err(Error::InvalidShape(format!(
                    "block {i} is {}x{}, expected a nonempty square matrix",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(AlgebraElement { blocks })
    }

    pub fn zeros(shape: &BlockShape) -> Self {
        AlgebraElement {
            blocks: shape.dims.iter().map(|&n| CMatrix::zeros(n, n)).collect(),
        }
    }

    pub fn identity(shape: &BlockShape) -> Self {
        AlgebraElement {
            blocks: shape.dims.iter().map(|&n| CMatrix::identity(n, n)).collect(),
        }
    }

    /// Unit of block `block` (a minimal central projection of the algebra).
    pub fn block_unit(shape: &BlockShape, block: usize) -> Self {
        let mut a = Self::zeros(shape);
        a.blocks[block] = CMatrix::identity(shape.dims[block], shape.dims[block]);
        a
    }

    pub fn matrix_unit(shape: &BlockShape, block: usize, row: usize, col: usize) -> Self {
        let mut a = Self::zeros(shape);
        a.blocks[block][(row, col)] = ONE;
        a
    }

    pub fn shape(&self) -> BlockShape {
        BlockShape {
            dims: self.blocks.iter().map(|b| b.nrows()).collect(),
        }
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub(crate) fn blocks_mut(&mut self) -> &mut [CMatrix] {
        &mut self.blocks
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        let same = self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.nrows() == b.nrows());
        if same {
            Ok(())
        } else {
            Err(Error::IncompatibleShapes(format!(
                "{} vs {}",
                self.shape(),
                other.shape()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a * b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: C) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// `a ↦ x a x*`, blockwise.
    pub fn conjugate_by(&self, x: &Self) -> Result<Self> {
        self.check_compatible(x)?;
        Ok(AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&x.blocks)
                .map(|(a, u)| u * a * u.adjoint())
                .collect(),
        })
    }

    /// C*-norm: the largest operator norm over blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// The norm where it matters for [`Tolerance::threshold`], which treats
    /// every scale below 1 alike; the Frobenius bound skips the SVD there.
    pub(crate) fn threshold_scale(&self) -> f64 {
        if self.frobenius_norm() <= 1.0 {
            1.0
        } else {
            self.norm()
        }
    }

    /// Norm induced by the trace inner product.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    /// Trace inner product `Σ_i tr(a_i* b_i)`.
    pub fn inner(&self, other: &Self) -> Result<C> {
        self.check_compatible(other)?;
        Ok(self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.dotc(b)).sum())
    }

    /// `‖self - other‖` in the C*-norm.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        self.blocks.iter().all(|u| {
            let n = u.nrows();
            let err = (u.adjoint() * u - CMatrix::identity(n, n)).norm();
            tol.is_zero(err, 1.0)
        })
    }

    pub fn is_self_adjoint(&self, tol: Tolerance) -> bool {
        self.blocks
            .iter()
            .all(|b| tol.is_zero((b - b.adjoint()).norm(), b.norm()))
    }

    pub fn is_projection(&self, tol: Tolerance) -> bool {
        self.is_self_adjoint(tol) && self.blocks.iter().all(|b| tol.is_zero((b * b - b).norm(), b.norm()))
    }

    /// Flattened coordinates (blocks in order, each column-major).
    pub fn to_vector(&self) -> DVector<C> {
        let len: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut v = DVector::zeros(len);
        let mut at = 0;
        for b in &self.blocks {
            v.rows_mut(at, b.len()).copy_from_slice(b.as_slice());
            at += b.len();
        }
        v
    }

    pub fn from_vector(shape: &BlockShape, v: &[C]) -> Result<Self> {
        if v.len() != shape.dimension() {
            return Err(Error::IncompatibleShapes(format!(
                "vector of length {} for shape {shape}",
                v.len()
            )));
        }
        let mut at = 0;
        let blocks = shape
            .dims
            .iter()
            .map(|&n| {
                let b = CMatrix::from_column_slice(n, n, &v[at..at + n * n]);
                at += n * n;
                b
            })
            .collect();
        Ok(AlgebraElement { blocks })
    }

    /// The block-diagonal matrix acting on `⊕ C^{n_i}`.
    pub fn to_dense(&self) -> CMatrix {
        let n: usize = self.blocks.iter().map(|b| b.nrows()).sum();
        let mut m = CMatrix::zeros(n, n);
        let mut at = 0;
        for b in &self.blocks {
            let k = b.nrows();
            m.view_mut((at, at), (k, k)).copy_from(b);
            at += k;
        }
        m
    }

    /// Inverse of [`to_dense`](Self::to_dense): reads the diagonal blocks.
    pub fn from_dense(shape: &BlockShape, m: &CMatrix) -> Result<Self> {
        let n = shape.hilbert_dimension();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::IncompatibleShapes(format!(
                "{}x{} matrix for shape {shape}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut at = 0;
        let blocks = shape
            .dims
            .iter()
            .map(|&k| {
                let b = m.view((at, at), (k, k)).into_owned();
                at += k;
                b
            })
            .collect();
        Ok(AlgebraElement { blocks })
    }

    /// Spectral projections of the Hermitian part of `self`, one per
    /// eigenvalue cluster, in ascending eigenvalue order.
    pub(crate) fn spectral_projections(&self, tol: Tolerance) -> Vec<(f64, AlgebraElement)> {
        let shape = self.shape();
        let mut entries: Vec<(f64, usize, DVector<C>)> = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let (values, vectors) = linalg::hermitian_eigen(b);
            for (k, &lambda) in values.iter().enumerate() {
                entries.push((lambda, i, vectors.column(k).into_owned()));
            }
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let gap = tol.cluster_gap(self.norm());
        let mut out: Vec<(f64, AlgebraElement)> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for (lambda, i, v) in entries {
            if out.is_empty() || lambda - last > gap {
                out.push((lambda, AlgebraElement::zeros(&shape)));
            }
            last = lambda;
            let proj = &mut out.last_mut().expect("pushed above").1;
            proj.blocks[i] += &v * v.adjoint();
        }
        out
    }

    /// Entry of largest modulus, scanning blocks then column-major, taking
    /// the first entry within a relative margin of the maximum.
    pub(crate) fn leading_entry(&self) -> C {
        let max = self
            .blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .find(|z| z.norm() >= max * (1.0 - 1e-6))
            .copied()
            .unwrap_or(ZERO)
    }
}
