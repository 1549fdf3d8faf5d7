//! JSON system descriptors: a block shape, a group and the images of
//! generators.
//!
//! ```json
//! {"blocks":[2],
//!  "group":{"abelian":[2]},
//!  "action":{"1":{"perm":[0],"unitary":[[[[1,0],[0,0]],[[0,0],[-1,0]]]]}}}
//! ```
//!
//! Each generator carries the block permutation and one unitary matrix per
//! block, written row by row with entries as `[re, im]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::actions::{Automorphism, GroupAction};
use crate::algebra::{AlgebraElement, BlockShape, Tolerance};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::linalg::{CMatrix, C};

/// A matrix as rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Abelian(Vec<usize>),
    Table(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub perm: Vec<usize>,
    pub unitary: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub blocks: Vec<usize>,
    pub group: GroupSpec,
    pub action: BTreeMap<usize, GeneratorSpec>,
}

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn matrix_from_json(rows: &MatrixJson, n: usize, location: &str) -> Result<CMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::input(location, format!("expected a {n}x{n} matrix")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::input(location, "non-finite entry"));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| C::new(rows[r][c][0], rows[r][c][1])))
}

impl SystemDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::input(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptors always serialize")
    }

    pub fn group(&self) -> Result<FiniteGroup> {
        match &self.group {
            GroupSpec::Abelian(factors) => FiniteGroup::abelian(factors.clone()),
            GroupSpec::Table(table) => FiniteGroup::from_table(table.clone()),
        }
        .map_err(|e| Error::input("group", e.to_string()))
    }

    /// Builds and validates the action, closing the generators under
    /// composition.
    pub fn to_action(&self, tol: Tolerance) -> Result<GroupAction> {
        let shape = BlockShape::new(self.blocks.clone()).map_err(|e| Error::input("blocks", e.to_string()))?;
        let group = self.group()?;
        let mut generators = Vec::with_capacity(self.action.len());
        for (&g, spec) in &self.action {
            let location = format!("action.{g}");
            if g >= group.order() {
                return Err(Error::input(location, format!("group has order {}", group.order())));
            }
            if spec.unitary.len() != shape.num_blocks() {
                return Err(Error::input(
                    format!("{location}.unitary"),
                    format!("expected {} blocks, found {}", shape.num_blocks(), spec.unitary.len()),
                ));
            }
            let blocks = spec
                .unitary
                .iter()
                .zip(shape.dims())
                .enumerate()
                .map(|(i, (rows, &n))| matrix_from_json(rows, n, &format!("{location}.unitary[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let u = AlgebraElement::from_blocks(blocks)?;
            let alpha = Automorphism::new(&shape, spec.perm.clone(), u, tol)
                .map_err(|e| Error::input(location.clone(), e.to_string()))?;
            generators.push((g, alpha));
        }
        GroupAction::from_generators(group, &shape, &generators, tol)
    }

    /// Describes `action` by the images of a generating set, chosen greedily
    /// in index order.
    pub fn from_action(action: &GroupAction, label: Option<String>) -> Self {
        let group = action.group();
        let group_spec = match group.abelian_structure() {
            Some(s) => GroupSpec::Abelian(s.factors().to_vec()),
            None => GroupSpec::Table(group.table().to_vec()),
        };
        let mut chosen: Vec<usize> = Vec::new();
        let mut reached = group.subgroup_generated(&chosen);
        for g in group.elements() {
            if reached.len() == group.order() {
                break;
            }
            if reached.binary_search(&g).is_err() {
                chosen.push(g);
                reached = group.subgroup_generated(&chosen);
            }
        }
        let action_spec = chosen
            .into_iter()
            .map(|g| {
                let alpha = action.alpha(g);
                let spec = GeneratorSpec {
                    perm: alpha.perm().to_vec(),
                    unitary: alpha.unitary().blocks().iter().map(matrix_to_json).collect(),
                };
                (g, spec)
            })
            .collect();
        SystemDescriptor {
            label,
            blocks: action.shape().dims().to_vec(),
            group: group_spec,
            action: action_spec,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INNER_M2: &str = r#"{"blocks":[2],"group":{"abelian":[2]},
        "action":{"1":{"perm":[0],"unitary":[[[[1,0],[0,0]],[[0,0],[-1,0]]]]}}}"#;

    #[test]
    fn parses_and_builds_action() {
        let tol = Tolerance::default();
        let d = SystemDescriptor::from_json(INNER_M2).unwrap();
        let action = d.to_action(tol).unwrap();
        assert_eq!(action.group().order(), 2);
        assert!(action.is_faithful(tol).unwrap());
        let back = SystemDescriptor::from_action(&action, None);
        assert_eq!(back, d);
    }

    #[test]
    fn errors_are_located() {
        let tol = Tolerance::default();
        let bad = INNER_M2.replace("[[[[1,0],[0,0]],[[0,0],[-1,0]]]]", "[[[[1,0]]]]");
        let err = SystemDescriptor::from_json(&bad).unwrap().to_action(tol).unwrap_err();
        assert!(matches!(err, Error::InvalidInput { ref location, .. } if location == "action.1.unitary[0]"));
        let err = SystemDescriptor::from_json("{\"blocks\": [2],").unwrap_err();
        assert!(matches!(err, Error::InvalidInput { .. }));
        let not_unitary = INNER_M2.replace("[-1,0]", "[2,0]");
        let err = SystemDescriptor::from_json(&not_unitary)
            .unwrap()
            .to_action(tol)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidInput { ref location, .. } if location == "action.1"));
    }

    #[test]
    fn non_homomorphic_generators_are_rejected() {
        let tol = Tolerance::default();
        // Ad diag(1, i) squares to Ad diag(1, -1), not the identity
        let bad = INNER_M2.replace("[-1,0]", "[0,1]");
        let err = SystemDescriptor::from_json(&bad).unwrap().to_action(tol).unwrap_err();
        assert!(matches!(err, Error::NotAnAction { .. }));
    }
}
