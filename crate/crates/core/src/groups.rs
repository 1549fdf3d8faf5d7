//! Finite groups by multiplication table, finite abelian groups
//! `Z_{d_1} × ... × Z_{d_r}`, their duals and the character pairing.
//!
//! Elements are dense indices `0..order`, with the identity at index 0.
//! For abelian structures the index of `(t_1, ..., t_r)` is the mixed-radix
//! number `t_1 + d_1 t_2 + d_1 d_2 t_3 + ...` (first factor varies fastest).
//! The dual group `Ĝ` is identified with the same tuples, so characters use
//! the same index encoding.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, C};

/// Invariant factors `(d_1, ..., d_r)`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianStructure {
    factors: Vec<usize>,
}

/// A character `γ = (γ_1, ..., γ_r)` with `γ_j ∈ Z_{d_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualCharacter {
    pub gamma: Vec<usize>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl AbelianStructure {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if let Some(&d) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("invariant factor {d} must be at least 2")));
        }
        Ok(AbelianStructure { factors })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        self.factors
            .iter()
            .map(|&d| {
                let t = index % d;
                index /= d;
                t
            })
            .collect()
    }

    pub fn index(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.factors.len() {
            return Err(Error::StructureMismatch(format!(
                "tuple of length {} for {} factors",
                tuple.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0;
        for (&t, &d) in tuple.iter().zip(&self.factors).rev() {
            if t >= d {
                return Err(Error::StructureMismatch(format!("coordinate {t} out of range Z_{d}")));
            }
            idx = idx * d + t;
        }
        Ok(idx)
    }

    fn lcm(&self) -> usize {
        self.factors.iter().fold(1, |l, &d| l / gcd(l, d) * d)
    }

    /// `⟨t, γ⟩ = exp(2πi k / L)`; returns `(k mod L, L)`.
    fn pairing_exponent(&self, t: usize, gamma: usize) -> (usize, usize) {
        let l = self.lcm();
        let (ts, gs) = (self.tuple(t), self.tuple(gamma));
        let k = ts
            .iter()
            .zip(&gs)
            .zip(&self.factors)
            .map(|((&a, &b), &d)| a * b % d * (l / d))
            .sum::<usize>()
            % l;
        (k, l)
    }

    /// `⟨t, γ⟩ = exp(2πi Σ_j t_j γ_j / d_j)`, both given by index.
    pub fn pairing_index(&self, t: usize, gamma: usize) -> C {
        let (k, l) = self.pairing_exponent(t, gamma);
        root_of_unity(k as i64, l as i64)
    }

    /// Exact test of `⟨t, γ⟩ = 1`.
    pub fn pairs_trivially(&self, t: usize, gamma: usize) -> bool {
        self.pairing_exponent(t, gamma).0 == 0
    }

    pub fn pairing(&self, t: &[usize], gamma: &DualCharacter) -> Result<C> {
        let ti = self.index(t)?;
        let gi = self.index(&gamma.gamma)?;
        Ok(self.pairing_index(ti, gi))
    }

    pub fn character(&self, index: usize) -> DualCharacter {
        DualCharacter {
            gamma: self.tuple(index),
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let s: Vec<usize> = self
            .tuple(a)
            .iter()
            .zip(self.tuple(b))
            .zip(&self.factors)
            .map(|((&x, y), &d)| (x + y) % d)
            .collect();
        self.index(&s).expect("in range")
    }

    pub fn neg(&self, a: usize) -> usize {
        let s: Vec<usize> = self
            .tuple(a)
            .iter()
            .zip(&self.factors)
            .map(|(&x, &d)| (d - x) % d)
            .collect();
        self.index(&s).expect("in range")
    }
}

/// All permutations of `0..n` in lexicographic order; element `g` of
/// [`FiniteGroup::symmetric`] sends `k` to `permutations(n)[g][k]`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        perms.push(current.clone());
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    perms
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    abelian: Option<AbelianStructure>,
}

impl FiniteGroup {
    /// Validates associativity, the identity (which must be index 0) and
    /// inverses exhaustively.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "row {i} contains out-of-range element {x}"
                )));
            }
        }
        for (g, row) in table.iter().enumerate() {
            if table[0][g] != g || row[0] != g {
                return Err(Error::InvalidGroup(format!(
                    "element 0 is not the identity (fails at {g})"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for (g, row) in table.iter().enumerate() {
            match row.iter().position(|&x| x == 0) {
                Some(h) if table[h][g] == 0 => inverses.push(h),
                _ => return Err(Error::InvalidGroup(format!("element {g} has no inverse"))),
            }
        }
        Ok(FiniteGroup {
            table,
            inverses,
            abelian: None,
        })
    }

    pub fn abelian(factors: Vec<usize>) -> Result<Self> {
        let s = AbelianStructure::new(factors)?;
        let n = s.order();
        let table = (0..n).map(|a| (0..n).map(|b| s.add(a, b)).collect()).collect();
        let mut g = Self::from_table(table)?;
        g.abelian = Some(s);
        Ok(g)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 1 {
            return Self::trivial();
        }
        Self::abelian(vec![n])
    }

    pub fn trivial() -> Result<Self> {
        Self::abelian(Vec::new())
    }

    /// The symmetric group on `n` letters, permutations in the order of
    /// [`permutations`] (so the identity comes first); `g·h` is `g ∘ h`.
    pub fn symmetric(n: usize) -> Result<Self> {
        let perms = permutations(n);
        let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index_of(&(0..n).map(|k| g[h[k]]).collect()))
                    .collect()
            })
            .collect();
        Self::from_table(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn abelian_structure(&self) -> Option<&AbelianStructure> {
        self.abelian.as_ref()
    }

    pub fn require_abelian(&self) -> Result<&AbelianStructure> {
        self.abelian.as_ref().ok_or(Error::AbelianRequired)
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        !set.is_empty()
            && set.iter().all(|&x| x < self.order())
            && set.contains(&0)
            && set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    fn check_subgroup(&self, h: &[usize]) -> Result<BTreeSet<usize>> {
        if !self.is_subgroup(h) {
            return Err(Error::NotSubgroup(format!("{h:?} is not closed under the group law")));
        }
        Ok(h.iter().copied().collect())
    }

    /// Closure of `elements` under the group law, sorted.
    pub fn subgroup_generated(&self, elements: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier: Vec<usize> = vec![0];
        while let Some(g) = frontier.pop() {
            for &s in elements {
                let next = self.mul(g, s);
                if set.insert(next) {
                    frontier.push(next);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Smallest representative of each left coset `gH`, sorted.
    pub fn quotient_transversal(&self, h: &[usize]) -> Result<Vec<usize>> {
        let h = self.check_subgroup(h)?;
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in self.elements() {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in &h {
                covered[self.mul(g, x)] = true;
            }
        }
        Ok(reps)
    }

    /// `H^⊥ = {γ : ⟨t, γ⟩ = 1 for all t ∈ H}`, as dual indices.
    pub fn annihilator(&self, h: &[usize]) -> Result<Vec<usize>> {
        let s = self.require_abelian()?;
        let h = self.check_subgroup(h)?;
        Ok(self
            .elements()
            .filter(|&gamma| h.iter().all(|&t| s.pairs_trivially(t, gamma)))
            .collect())
    }

    /// `{t : ⟨t, γ⟩ = 1 for all γ ∈ characters}`.
    pub fn dual_annihilator(&self, characters: &[usize]) -> Result<Vec<usize>> {
        let s = self.require_abelian()?;
        Ok(self
            .elements()
            .filter(|&t| characters.iter().all(|&gamma| s.pairs_trivially(t, gamma)))
            .collect())
    }

    /// The dual group, identified with the same tuples.
    pub fn dual(&self) -> Result<FiniteGroup> {
        Self::abelian(self.require_abelian()?.factors.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_values() {
        let z2 = AbelianStructure::new(vec![2]).unwrap();
        let one = DualCharacter { gamma: vec![1] };
        assert_eq!(z2.pairing(&[0], &one).unwrap(), C::new(1.0, 0.0));
        assert_eq!(z2.pairing(&[1], &one).unwrap(), C::new(-1.0, 0.0));
        let z4 = AbelianStructure::new(vec![4]).unwrap();
        assert_eq!(z4.pairing(&[1], &one).unwrap(), C::new(0.0, 1.0));
        assert!(z4.pairing(&[1, 0], &one).is_err());
    }

    #[test]
    fn annihilator_examples() {
        let g = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(g.annihilator(&[0, 1, 2, 3]).unwrap(), vec![0]);
        assert_eq!(g.annihilator(&[0]).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(g.annihilator(&[0, 2]).unwrap(), vec![0, 2]);
        assert!(g.annihilator(&[0, 1]).is_err());
    }

    #[test]
    fn generated_subgroups_and_transversals() {
        let g = FiniteGroup::cyclic(6).unwrap();
        assert_eq!(g.subgroup_generated(&[0]), vec![0]);
        assert_eq!(g.subgroup_generated(&[2]), vec![0, 2, 4]);
        assert_eq!(g.quotient_transversal(&[0, 3]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn tables_are_validated() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).is_ok());
    }

    #[test]
    fn symmetric_group_of_three_letters() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_commutative());
        assert!(s3.abelian_structure().is_none());
        assert!(s3.annihilator(&[0]).is_err());
    }

    #[test]
    fn klein_four_indices() {
        let s = AbelianStructure::new(vec![2, 2]).unwrap();
        assert_eq!(s.tuple(1), vec![1, 0]);
        assert_eq!(s.tuple(2), vec![0, 1]);
        assert_eq!(s.index(&[1, 1]).unwrap(), 3);
        assert_eq!(s.add(1, 2), 3);
    }
}
