//! Wedderburn decomposition of a unital *-subalgebra `S ≅ ⊕_j M_{m_j}(C)`.
//!
//! Minimal central projections come from the spectral decomposition of a
//! random self-adjoint central element. When two central characters take
//! (numerically) the same value, the merged spectral projection still has a
//! multi-dimensional center and is split again with a fresh random element.
//! Each simple block is then identified with `M_{m_j}` through an isometry
//! onto an irreducible invariant subspace `S ξ`, where `ξ` lies in the range
//! of a minimal projection of the block.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AlgebraElement, BlockShape, Subspace, Tolerance};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C};

const SPLIT_ATTEMPTS: usize = 8;
const SEED: u64 = 0x5745_4444;

/// Structure of a decomposed subalgebra together with an explicit
/// *-isomorphism onto `⊕_j M_{m_j}`.
#[derive(Debug, Clone)]
pub struct Wedderburn {
    source: Subspace,
    shape: BlockShape,
    central_projections: Vec<AlgebraElement>,
    minimal_projections: Vec<AlgebraElement>,
    isometries: Vec<CMatrix>,
    inverse: CMatrix,
}

fn unresolved(msg: impl Into<String>) -> Error {
    Error::DecompositionUnresolved(msg.into())
}

fn minimal_central_projections(
    s: &Subspace,
    center: &Subspace,
    rng: &mut ChaCha8Rng,
    tol: Tolerance,
) -> Result<Vec<AlgebraElement>> {
    let mut pending = vec![AlgebraElement::identity(s.shape())];
    let mut done = Vec::new();
    while let Some(q) = pending.pop() {
        let local = center.right_multiply(&q, tol)?;
        match local.dim() {
            0 => return Err(unresolved("central projection with empty center")),
            1 => {
                done.push(q);
                continue;
            }
            _ => {}
        }
        let mut parts = Vec::new();
        for _ in 0..SPLIT_ATTEMPTS {
            let h = local.random_self_adjoint(rng);
            parts = h
                .spectral_projections(tol)
                .into_iter()
                .map(|(_, e)| e.mul(&q))
                .collect::<Result<Vec<_>>>()?;
            parts.retain(|e| e.frobenius_norm() > 0.5);
            if parts.len() >= 2 {
                break;
            }
        }
        if parts.len() < 2 {
            return Err(unresolved("could not separate central characters"));
        }
        // keep discovery order stable: lowest eigenvalue is processed first
        parts.reverse();
        pending.extend(parts);
    }
    if done.len() != center.dim() {
        return Err(unresolved(format!(
            "found {} central projections for a center of dimension {}",
            done.len(),
            center.dim()
        )));
    }
    let mut sum = AlgebraElement::zeros(s.shape());
    for p in &done {
        if !p.is_projection(tol) || !center.contains(p, tol)? {
            return Err(unresolved("spectral projection is not central"));
        }
        sum = sum.add(p)?;
    }
    if !tol.is_zero(sum.distance(&AlgebraElement::identity(s.shape()))?, 1.0) {
        return Err(unresolved("central projections do not sum to the unit"));
    }
    Ok(done)
}

fn minimal_projection(
    s: &Subspace,
    block: &Subspace,
    q: &AlgebraElement,
    m: usize,
    rng: &mut ChaCha8Rng,
    tol: Tolerance,
) -> Result<AlgebraElement> {
    for _ in 0..SPLIT_ATTEMPTS {
        let h = block.random_self_adjoint(rng);
        let mut parts = h
            .spectral_projections(tol)
            .into_iter()
            .map(|(_, e)| e.mul(q))
            .collect::<Result<Vec<_>>>()?;
        parts.retain(|e| e.frobenius_norm() > 0.5);
        if parts.len() == m {
            let e = parts.swap_remove(0);
            if e.is_projection(tol) && s.contains(&e, tol)? {
                return Ok(e);
            }
        }
    }
    Err(unresolved(format!(
        "no minimal projection found in a block of size {m}"
    )))
}

/// Decomposes a unital *-subalgebra into simple blocks.
///
/// Fails with "not a subalgebra" if `s` is not a unital *-subalgebra, and
/// with "decomposition unresolved" when the numerical splitting cannot be
/// certified.
pub fn wedderburn_decompose(s: &Subspace, tol: Tolerance) -> Result<Wedderburn> {
    s.check_unital_star_subalgebra(tol)?;
    decompose_algebra(s, tol)
}

/// Same as [`wedderburn_decompose`] for a subspace already known to be a
/// unital *-subalgebra by construction.
pub(crate) fn decompose_algebra(s: &Subspace, tol: Tolerance) -> Result<Wedderburn> {
    let center = s.commutant(s, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let central = minimal_central_projections(s, &center, &mut rng, tol)?;

    let mut dims = Vec::with_capacity(central.len());
    let mut minimal = Vec::with_capacity(central.len());
    let mut isometries = Vec::with_capacity(central.len());
    for q in &central {
        let block = if central.len() == 1 {
            s.clone()
        } else {
            s.right_multiply(q, tol)?
        };
        let d = block.dim();
        let m = (d as f64).sqrt().round() as usize;
        if m * m != d || m == 0 {
            return Err(unresolved(format!("simple block of dimension {d} is not a square")));
        }
        let e = minimal_projection(s, &block, q, m, &mut rng, tol)?;
        let dense_e = e.to_dense();
        let (best, _) = (0..dense_e.ncols())
            .map(|j| (j, dense_e.column(j).norm()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let xi = dense_e.column(best).normalize();
        let mut orbit = CMatrix::zeros(xi.len(), block.dim());
        for (k, b) in block.basis().iter().enumerate() {
            orbit.set_column(k, &(b.to_dense() * &xi));
        }
        let w = linalg::column_space(&orbit, tol.epsilon());
        if w.ncols() != m {
            return Err(unresolved(format!(
                "cyclic subspace has dimension {} instead of {m}",
                w.ncols()
            )));
        }
        dims.push(m);
        minimal.push(e);
        isometries.push(w);
    }
    let shape = BlockShape::new(dims)?;

    let n = s.dim();
    let mut forward = CMatrix::zeros(shape.dimension(), n);
    for (k, b) in s.basis().iter().enumerate() {
        let img = restrict(&isometries, &b.to_dense());
        forward.set_column(k, &img.to_vector());
    }
    let (hi, lo) = linalg::singular_extremes(&forward);
    if tol.is_zero(lo, hi) {
        return Err(unresolved("block representation is not injective"));
    }
    let inverse = forward
        .try_inverse()
        .ok_or_else(|| unresolved("block representation is not invertible"))?;

    Ok(Wedderburn {
        source: s.clone(),
        shape,
        central_projections: central,
        minimal_projections: minimal,
        isometries,
        inverse,
    })
}

fn restrict(isometries: &[CMatrix], dense: &CMatrix) -> AlgebraElement {
    let blocks = isometries.iter().map(|w| w.adjoint() * dense * w).collect();
    AlgebraElement::from_blocks(blocks).expect("isometries have nonzero width")
}

impl Wedderburn {
    /// Block sizes `(m_1, ..., m_r)` with `Σ m_j² = dim S`.
    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn num_blocks(&self) -> usize {
        self.shape.num_blocks()
    }

    pub fn source(&self) -> &Subspace {
        &self.source
    }

    pub fn central_projections(&self) -> &[AlgebraElement] {
        &self.central_projections
    }

    /// One minimal projection of `S` per simple block.
    pub fn minimal_projections(&self) -> &[AlgebraElement] {
        &self.minimal_projections
    }

    /// Isometries `W_j` onto irreducible subspaces; block `j` of the
    /// isomorphism is `s ↦ W_j* s W_j`.
    pub fn isometries(&self) -> &[CMatrix] {
        &self.isometries
    }

    /// Image of an element of `S` in `⊕ M_{m_j}`.
    pub fn to_blocks(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if &a.shape() != self.source.shape() {
            return Err(Error::IncompatibleShapes(format!(
                "{} vs {}",
                a.shape(),
                self.source.shape()
            )));
        }
        Ok(restrict(&self.isometries, &a.to_dense()))
    }

    /// Preimage in `S` of an element of `⊕ M_{m_j}`.
    pub fn from_blocks(&self, b: &AlgebraElement) -> Result<AlgebraElement> {
        if b.shape() != self.shape {
            return Err(Error::IncompatibleShapes(format!("{} vs {}", b.shape(), self.shape)));
        }
        let coeffs = &self.inverse * b.to_vector();
        let coeffs: Vec<C> = coeffs.iter().copied().collect();
        Ok(self.source.combination(&coeffs))
    }
}
