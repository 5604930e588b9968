//! JSON input specs and the table view of JSON output.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::algebra::{make_algebra, FdCStarAlgebra};
use crate::crossed::{ActionMaps, GroupAction};
use crate::error::{invalid, Budget, Result};
use crate::groups::FiniteGroup;
use crate::linalg::Tolerance;

/// `{"blocks": [2, 3]}` describes `M_2 ⊕ M_3`.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<FdCStarAlgebra> {
        make_algebra(&self.blocks)
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Symmetric(usize),
    Cyclic(usize),
    /// Multiplication table and inverse list.
    Table {
        mult: Vec<Vec<usize>>,
        inv: Vec<usize>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n),
            GroupSpec::Cyclic(m) => FiniteGroup::cyclic(*m),
            GroupSpec::Table { mult, inv } => FiniteGroup::from_table(mult.clone(), inv.clone()),
        }
    }
}

/// How the group acts.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MapsSpec {
    /// Factor permutation on `A^{⊗n}`; the group must be `S_n`.
    Tensor,
    Trivial,
    /// Images of the matrix-unit coefficients, one list per group element.
    Permutation(Vec<Vec<usize>>),
}

/// Contents of a `--spec` file.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub maps: Option<MapsSpec>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Build the action described by the file. Without `group` and `maps`, this is `S_n` on `A^{⊗n}`.
    pub fn action(&self, budget: Budget, tol: Tolerance) -> Result<GroupAction> {
        let base = self.algebra.build()?;
        match (&self.group, &self.maps) {
            (None, None) | (None, Some(MapsSpec::Tensor)) => {
                let n = self.n.ok_or_else(|| invalid("a tensor action needs \"n\""))?;
                GroupAction::tensor_permutation(&base, n, budget)
            }
            (Some(g), Some(MapsSpec::Tensor)) => {
                let group = g.build()?;
                let n = group
                    .symmetric_degree()
                    .ok_or_else(|| invalid("a tensor action needs a symmetric group"))?;
                if self.n.is_some_and(|m| m != n) {
                    return Err(invalid("\"n\" disagrees with the group degree"));
                }
                GroupAction::tensor_permutation(&base, n, budget)
            }
            (Some(g), Some(MapsSpec::Trivial)) => Ok(GroupAction::trivial(g.build()?, base)),
            (Some(g), Some(MapsSpec::Permutation(maps))) => {
                budget.check(base.ambient(), "action spec")?;
                GroupAction::new(g.build()?, base, ActionMaps::Permutation(maps.clone()), tol)
            }
            (_, _) => Err(invalid("\"group\" and \"maps\" must be given together")),
        }
    }
}

/// Parse `"2,3"` into `[2, 3]`.
pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| invalid(format!("'{s}' is not a non-negative integer")))
        })
        .collect()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Two aligned columns, one line per leaf of the JSON value.
pub fn render_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, x) in rows {
        let pad = width - k.chars().count();
        out.push_str(&format!("{k}{}  {x}\n", " ".repeat(pad)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        let s = SpecFile::parse(r#"{"algebra": {"blocks": [2, 3]}, "n": 2}"#).unwrap();
        assert_eq!(s.algebra.blocks, vec![2, 3]);
        let a = s.action(Budget::default(), Tolerance::default()).unwrap();
        assert_eq!(a.group().order(), 2);
        assert_eq!(a.algebra().dim(), 169);

        let s = SpecFile::parse(
            r#"{"algebra": {"blocks": [1, 1]}, "group": {"symmetric": 2}, "maps": {"permutation": [[0, 1], [1, 0]]}}"#,
        )
        .unwrap();
        assert_eq!(
            s.action(Budget::default(), Tolerance::default())
                .unwrap()
                .algebra()
                .dim(),
            2
        );

        let s = SpecFile::parse(r#"{"algebra": {"blocks": [3]}, "group": {"cyclic": 4}, "maps": "trivial"}"#).unwrap();
        assert_eq!(
            s.action(Budget::default(), Tolerance::default())
                .unwrap()
                .group()
                .order(),
            4
        );
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SpecFile::parse(r#"{"algebra": {"blocks": [2]}, "extra": 1}"#).is_err());
        assert!(SpecFile::parse("not json").is_err());
        let s = SpecFile::parse(r#"{"algebra": {"blocks": [2]}}"#).unwrap();
        assert!(s.action(Budget::default(), Tolerance::default()).is_err());
        let s = SpecFile::parse(
            r#"{"algebra": {"blocks": [1, 1]}, "group": {"symmetric": 2}, "maps": {"permutation": [[1, 0], [1, 0]]}}"#,
        )
        .unwrap();
        assert!(s.action(Budget::default(), Tolerance::default()).is_err());
        assert!(parse_list("2,x").is_err());
        assert_eq!(parse_list("2, 3").unwrap(), vec![2, 3]);
    }

    #[test]
    fn table_lists_every_leaf() {
        let v: Value = serde_json::json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": true}]});
        let t = render_table(&v);
        assert_eq!(t, "a       1\nb.c     [1,2]\nd[0].e  true\n");
    }
}
