//! *-Automorphisms of block algebras and finite group actions.
//!
//! Every *-automorphism of `⊕ M_{n_i}` permutes blocks of equal size and
//! conjugates each block by a unitary, so it is stored as a pair `(π, u)`
//! acting by `α(a)_{π(i)} = u_{π(i)} a_i u_{π(i)}*`. The unitaries are only
//! determined up to a phase per block, which is why every law below is
//! checked on the maps and never on the stored data.

use crate::algebra::{AlgebraElement, BlockShape, Subspace, Tolerance};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::{self, CMatrix, C};

#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    shape: BlockShape,
    perm: Vec<usize>,
    unitary: AlgebraElement,
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter()
        .all(|&p| p < perm.len() && !std::mem::replace(&mut seen[p], true))
}

impl Automorphism {
    /// `perm[i]` is the block that block `i` is sent to.
    pub fn new(shape: &BlockShape, perm: Vec<usize>, unitary: AlgebraElement, tol: Tolerance) -> Result<Self> {
        if perm.len() != shape.num_blocks() || !is_permutation(&perm) {
            return Err(Error::NotAutomorphism(format!(
                "{perm:?} is not a permutation of {} blocks",
                shape.num_blocks()
            )));
        }
        if let Some(i) = (0..perm.len()).find(|&i| shape.dims()[perm[i]] != shape.dims()[i]) {
            return Err(Error::NotAutomorphism(format!(
                "block {i} of size {} cannot be sent to block {} of size {}",
                shape.dims()[i],
                perm[i],
                shape.dims()[perm[i]]
            )));
        }
        if &unitary.shape() != shape {
            return Err(Error::IncompatibleShapes(format!("{} vs {shape}", unitary.shape())));
        }
        if !unitary.is_unitary(tol) {
            return Err(Error::NotAutomorphism("implementing element is not unitary".into()));
        }
        Ok(Automorphism {
            shape: shape.clone(),
            perm,
            unitary,
        })
    }

    pub fn identity(shape: &BlockShape) -> Self {
        Automorphism {
            shape: shape.clone(),
            perm: (0..shape.num_blocks()).collect(),
            unitary: AlgebraElement::identity(shape),
        }
    }

    /// `Ad u`.
    pub fn inner(u: &AlgebraElement, tol: Tolerance) -> Result<Self> {
        let shape = u.shape();
        Self::new(&shape, (0..shape.num_blocks()).collect(), u.clone(), tol)
    }

    /// Factors a linear map of the algebra into `(π, u)` form.
    ///
    /// The block permutation is read off the images of the block units; the
    /// unitary of each target block is recovered as `Σ_k f(E_{k1}) X E_{1k}`
    /// for a matrix unit `X = E_{r1}`, which equals `u · conj(u_{r1})`.
    /// Fails with "not an automorphism" unless `f` agrees with the factored
    /// automorphism on every matrix unit.
    pub fn from_linear_map<F>(shape: &BlockShape, f: F, tol: Tolerance) -> Result<Self>
    where
        F: Fn(&AlgebraElement) -> Result<AlgebraElement>,
    {
        let k = shape.num_blocks();
        let mut perm = Vec::with_capacity(k);
        for i in 0..k {
            let img = f(&AlgebraElement::block_unit(shape, i))?;
            if img.shape() != *shape {
                return Err(Error::IncompatibleShapes(format!("{} vs {shape}", img.shape())));
            }
            let target = (0..k).find(|&j| {
                shape.dims()[j] == shape.dims()[i]
                    && tol.is_zero(
                        img.distance(&AlgebraElement::block_unit(shape, j)).unwrap_or(f64::MAX),
                        1.0,
                    )
            });
            match target {
                Some(j) => perm.push(j),
                None => {
                    return Err(Error::NotAutomorphism(format!(
                        "image of the unit of block {i} is not a block unit"
                    )))
                }
            }
        }
        if !is_permutation(&perm) {
            return Err(Error::NotAutomorphism("block units are not permuted".into()));
        }
        let mut blocks: Vec<CMatrix> = shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        for (i, &j) in perm.iter().enumerate() {
            let n = shape.dims()[i];
            let images: Vec<CMatrix> = (0..n)
                .map(|row| f(&AlgebraElement::matrix_unit(shape, i, row, 0)).map(|e| e.block(j).clone()))
                .collect::<Result<_>>()?;
            let mut best = CMatrix::zeros(n, n);
            for r in 0..n {
                let mut cand = CMatrix::zeros(n, n);
                for (row, img) in images.iter().enumerate() {
                    // f(E_{row,0}) · E_{r,0} · E_{0,row}
                    for a in 0..n {
                        cand[(a, row)] += img[(a, r)];
                    }
                }
                if cand.norm() > best.norm() {
                    best = cand;
                }
            }
            let norm = best.norm();
            if norm == 0.0 {
                return Err(Error::NotAutomorphism(format!("block {i} is annihilated")));
            }
            blocks[j] = linalg::polar_unitary(&(best / C::new(norm, 0.0)));
        }
        let candidate = Automorphism {
            shape: shape.clone(),
            perm,
            unitary: AlgebraElement::from_blocks(blocks)?,
        };
        for a in shape.matrix_units() {
            let err = f(&a)?.distance(&candidate.apply(&a)?)?;
            if !tol.is_zero(err, 1.0) {
                return Err(Error::NotAutomorphism(format!(
                    "linear map differs from its factorization by {err:.3e}"
                )));
            }
        }
        Ok(candidate)
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn unitary(&self) -> &AlgebraElement {
        &self.unitary
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.shape() != self.shape {
            return Err(Error::IncompatibleShapes(format!("{} vs {}", a.shape(), self.shape)));
        }
        let mut blocks: Vec<CMatrix> = Vec::with_capacity(self.perm.len());
        blocks.resize(self.perm.len(), CMatrix::zeros(0, 0));
        for (i, &j) in self.perm.iter().enumerate() {
            let u = self.unitary.block(j);
            blocks[j] = u * a.block(i) * u.adjoint();
        }
        AlgebraElement::from_blocks(blocks)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.shape != other.shape {
            return Err(Error::IncompatibleShapes(format!("{} vs {}", self.shape, other.shape)));
        }
        let perm: Vec<usize> = other.perm.iter().map(|&j| self.perm[j]).collect();
        let mut blocks: Vec<CMatrix> = self.unitary.blocks().to_vec();
        for &mid in &other.perm {
            let target = self.perm[mid];
            blocks[target] = self.unitary.block(target) * other.unitary.block(mid);
        }
        Ok(Automorphism {
            shape: self.shape.clone(),
            perm,
            unitary: AlgebraElement::from_blocks(blocks)?,
        })
    }

    pub fn inverse(&self) -> Automorphism {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut blocks: Vec<CMatrix> = self.unitary.blocks().to_vec();
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
            blocks[i] = self.unitary.block(j).adjoint();
        }
        Automorphism {
            shape: self.shape.clone(),
            perm,
            unitary: AlgebraElement::from_blocks(blocks).expect("same blocks"),
        }
    }

    /// `w ∘ self ∘ w⁻¹`.
    pub fn conjugated(&self, w: &Automorphism) -> Result<Automorphism> {
        w.compose(self)?.compose(&w.inverse())
    }

    /// Largest deviation `‖self(a) - other(a)‖` over the matrix units.
    pub fn distance(&self, other: &Automorphism) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for a in self.shape.matrix_units() {
            worst = worst.max(self.apply(&a)?.distance(&other.apply(&a)?)?);
        }
        Ok(worst)
    }

    pub fn is_identity(&self, tol: Tolerance) -> Result<bool> {
        Ok(tol.is_zero(self.distance(&Automorphism::identity(&self.shape))?, 1.0))
    }
}

/// An action `g ↦ α_g` of a finite group, validated on construction.
#[derive(Debug, Clone)]
pub struct GroupAction {
    group: FiniteGroup,
    shape: BlockShape,
    alphas: Vec<Automorphism>,
}

impl GroupAction {
    /// Checks `α_e = id` and `α_{gh} = α_g ∘ α_h` on the matrix units;
    /// fails with "not an action" naming the violating pair.
    pub fn new(group: FiniteGroup, alphas: Vec<Automorphism>, tol: Tolerance) -> Result<Self> {
        if alphas.len() != group.order() {
            return Err(Error::NotAutomorphism(format!(
                "{} automorphisms for a group of order {}",
                alphas.len(),
                group.order()
            )));
        }
        let shape = alphas[0].shape().clone();
        if let Some(a) = alphas.iter().find(|a| a.shape() != &shape) {
            return Err(Error::IncompatibleShapes(format!("{} vs {shape}", a.shape())));
        }
        let action = GroupAction { group, shape, alphas };
        action.validate(tol)?;
        Ok(action)
    }

    pub fn trivial(group: FiniteGroup, shape: &BlockShape) -> Self {
        let alphas = vec![Automorphism::identity(shape); group.order()];
        GroupAction {
            group,
            shape: shape.clone(),
            alphas,
        }
    }

    /// Builds the action from the images of generators, closing under
    /// composition, then validates it.
    pub fn from_generators(
        group: FiniteGroup,
        shape: &BlockShape,
        generators: &[(usize, Automorphism)],
        tol: Tolerance,
    ) -> Result<Self> {
        let n = group.order();
        let mut alphas: Vec<Option<Automorphism>> = vec![None; n];
        alphas[0] = Some(Automorphism::identity(shape));
        let mut frontier = vec![0];
        while let Some(g) = frontier.pop() {
            for (s, beta) in generators {
                if *s >= n {
                    return Err(Error::input(format!("action.{s}"), "element index out of range"));
                }
                let gs = group.mul(g, *s);
                let composed = alphas[g].as_ref().expect("visited").compose(beta)?;
                match &alphas[gs] {
                    Some(existing) => {
                        if !tol.is_zero(existing.distance(&composed)?, 1.0) {
                            return Err(Error::NotAnAction { g, h: *s });
                        }
                    }
                    None => {
                        alphas[gs] = Some(composed);
                        frontier.push(gs);
                    }
                }
            }
        }
        let alphas = alphas
            .into_iter()
            .enumerate()
            .map(|(g, a)| a.ok_or_else(|| Error::input("action", format!("generators do not reach element {g}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, alphas, tol)
    }

    pub fn validate(&self, tol: Tolerance) -> Result<()> {
        let units = self.shape.matrix_units();
        for a in &units {
            if !tol.is_zero(self.alphas[0].apply(a)?.distance(a)?, 1.0) {
                return Err(Error::NotAnAction { g: 0, h: 0 });
            }
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                for a in &units {
                    let lhs = self.alphas[gh].apply(a)?;
                    let rhs = self.alphas[g].apply(&self.alphas[h].apply(a)?)?;
                    if !tol.is_zero(lhs.distance(&rhs)?, 1.0) {
                        return Err(Error::NotAnAction { g, h });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn alpha(&self, g: usize) -> &Automorphism {
        &self.alphas[g]
    }

    pub fn alphas(&self) -> &[Automorphism] {
        &self.alphas
    }

    /// `α_g ≠ id` for every `g ≠ e`.
    pub fn is_faithful(&self, tol: Tolerance) -> Result<bool> {
        for g in self.group.elements().skip(1) {
            if self.alphas[g].is_identity(tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every nonzero invariant ideal is essential, i.e. the induced
    /// permutation action on blocks is transitive.
    pub fn is_g_prime(&self) -> bool {
        let k = self.shape.num_blocks();
        let mut orbit = vec![false; k];
        for a in &self.alphas {
            orbit[a.perm()[0]] = true;
        }
        orbit.into_iter().all(|x| x)
    }

    /// `(1/|G|) Σ_g w_g α_g(a)`.
    pub fn average(&self, weights: &[C], a: &AlgebraElement) -> Result<AlgebraElement> {
        let n = self.group.order();
        let mut out = AlgebraElement::zeros(&self.shape);
        for (g, &w) in weights.iter().enumerate() {
            out = out.add(&self.alphas[g].apply(a)?.scale(w / n as f64))?;
        }
        Ok(out)
    }

    /// Image of the weighted averaging map on the matrix units, verified
    /// to be idempotent on its image.
    pub fn averaged_image(&self, weights: &[C], tol: Tolerance) -> Result<Subspace> {
        let images = self
            .shape
            .matrix_units()
            .iter()
            .map(|a| self.average(weights, a))
            .collect::<Result<Vec<_>>>()?;
        let image = Subspace::span(&self.shape, &images, tol)?;
        for b in image.basis() {
            if !tol.is_zero(self.average(weights, b)?.distance(b)?, 1.0) {
                return Err(Error::NotAutomorphism("averaging map is not idempotent".into()));
            }
        }
        Ok(image)
    }

    /// Fixed-point algebra `A^α`, the image of `E = (1/|G|) Σ_g α_g`.
    pub fn fixed_point_algebra(&self, tol: Tolerance) -> Result<Subspace> {
        let ones = vec![C::new(1.0, 0.0); self.group.order()];
        self.averaged_image(&ones, tol)
    }

    /// The action `g ↦ w ∘ α_g ∘ w⁻¹`.
    pub fn conjugated(&self, w: &Automorphism) -> Result<GroupAction> {
        let alphas = self
            .alphas
            .iter()
            .map(|a| a.conjugated(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupAction {
            group: self.group.clone(),
            shape: self.shape.clone(),
            alphas,
        })
    }
}
