//! Canonical JSON instance parsing and emission.
//!
//! Group instances: `{"group": {...}, "A": [elements], "B": [elements]}`.
//! Field instances: `{"field": {...}, "A": [rows], "B": [rows],
//! "a_basis": [coeffs, ...]?}`. Subsets may arrive in any order (duplicates
//! are rejected); subspace rows must already be in reduced echelon form —
//! non-canonical rows are rejected with the canonicalized suggestion in the
//! error message.

use crate::{CliError, CliResult};
use matchlab_core::field::{BasisSeq, FieldCtx, FqElement, Subspace};
use matchlab_core::group::{GroupElement, GroupSpec, GroupSubset};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone)]
pub struct GroupInstance {
    pub group: GroupSpec,
    pub a: GroupSubset,
    pub b: GroupSubset,
}

#[derive(Debug, Clone)]
pub struct FieldInstance {
    pub field: FieldCtx,
    pub a: Subspace,
    pub b: Subspace,
    pub a_basis: Option<BasisSeq>,
}

#[derive(Serialize, Deserialize)]
struct GroupInstanceWire {
    group: GroupSpec,
    #[serde(rename = "A")]
    a: Vec<GroupElement>,
    #[serde(rename = "B")]
    b: Vec<GroupElement>,
}

#[derive(Serialize, Deserialize)]
struct FieldInstanceWire {
    field: FieldCtx,
    #[serde(rename = "A")]
    a: Vec<Vec<u64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_basis: Option<Vec<FqElement>>,
}

fn bad(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn parse_group_instance(json: &str) -> CliResult<GroupInstance> {
    let wire: GroupInstanceWire = serde_json::from_str(json).map_err(bad)?;
    let a = GroupSubset::new_strict(wire.group.clone(), wire.a).map_err(bad)?;
    let b = GroupSubset::new_strict(wire.group.clone(), wire.b).map_err(bad)?;
    Ok(GroupInstance {
        group: wire.group,
        a,
        b,
    })
}

pub fn emit_group_instance(inst: &GroupInstance) -> Value {
    serde_json::json!({
        "group": inst.group,
        "A": inst.a,
        "B": inst.b,
    })
}

pub fn group_instance_value(a: &GroupSubset, b: &GroupSubset) -> Value {
    serde_json::json!({
        "group": a.group(),
        "A": a,
        "B": b,
    })
}

pub fn parse_field_instance(json: &str) -> CliResult<FieldInstance> {
    let wire: FieldInstanceWire = serde_json::from_str(json).map_err(bad)?;
    let field = wire.field;
    let a = Subspace::from_canonical_rows(field.p(), field.n(), wire.a).map_err(bad)?;
    let b = Subspace::from_canonical_rows(field.p(), field.n(), wire.b).map_err(bad)?;
    let a_basis = match wire.a_basis {
        None => None,
        Some(vecs) => {
            for v in &vecs {
                field.check_element(v).map_err(bad)?;
            }
            Some(BasisSeq::new(&field, vecs).map_err(bad)?)
        }
    };
    Ok(FieldInstance {
        field,
        a,
        b,
        a_basis,
    })
}

pub fn emit_field_instance(inst: &FieldInstance) -> Value {
    let mut v = serde_json::json!({
        "field": inst.field,
        "A": inst.a,
        "B": inst.b,
    });
    if let Some(basis) = &inst.a_basis {
        v["a_basis"] = serde_json::to_value(basis.vectors()).unwrap();
    }
    v
}

pub fn field_instance_value(field: &FieldCtx, a: &Subspace, b: &Subspace) -> Value {
    serde_json::json!({
        "field": field,
        "A": a,
        "B": b,
    })
}

/// Parse either `{"group": {...}}` or a bare group object.
pub fn parse_group_only(json: &str) -> CliResult<GroupSpec> {
    #[derive(Deserialize)]
    struct Wrap {
        group: GroupSpec,
    }
    if let Ok(w) = serde_json::from_str::<Wrap>(json) {
        return Ok(w.group);
    }
    serde_json::from_str::<GroupSpec>(json).map_err(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_instance_round_trip() {
        let json = r#"{"group":{"free_rank":0,"torsion":[8]},
                       "A":[{"free":[],"torsion":[0]},{"free":[],"torsion":[2]},{"free":[],"torsion":[6]}],
                       "B":[{"free":[],"torsion":[1]},{"free":[],"torsion":[3]},{"free":[],"torsion":[4]}]}"#;
        let inst = parse_group_instance(json).unwrap();
        assert_eq!(inst.a.len(), 3);
        let emitted = emit_group_instance(&inst);
        let again = parse_group_instance(&emitted.to_string()).unwrap();
        assert_eq!(again.a, inst.a);
        assert_eq!(again.b, inst.b);
        assert_eq!(emit_group_instance(&again), emitted);
    }

    #[test]
    fn duplicate_subset_elements_rejected() {
        let json = r#"{"group":{"free_rank":0,"torsion":[8]},
                       "A":[{"free":[],"torsion":[2]},{"free":[],"torsion":[2]}],
                       "B":[{"free":[],"torsion":[1]},{"free":[],"torsion":[3]}]}"#;
        assert!(parse_group_instance(json).is_err());
    }

    #[test]
    fn non_echelon_subspace_rejected_with_hint() {
        let json = r#"{"field":{"p":2,"n":4,"modulus":[1,1,0,0,1]},
                       "A":[[1,1,0,0],[1,0,0,0]],
                       "B":[[0,0,1,0]]}"#;
        let err = parse_field_instance(json).unwrap_err().to_string();
        assert!(err.contains("reduced echelon"), "{err}");
        assert!(err.contains("[[1,0,0,0],[0,1,0,0]]"), "{err}");
    }

    #[test]
    fn field_instance_with_basis() {
        let json = r#"{"field":{"p":2,"n":2,"modulus":[1,1,1]},
                       "A":[[1,0]],
                       "B":[[0,1]],
                       "a_basis":[[1,0]]}"#;
        let inst = parse_field_instance(json).unwrap();
        assert_eq!(inst.a_basis.as_ref().unwrap().len(), 1);
        let emitted = emit_field_instance(&inst);
        assert!(emitted.get("a_basis").is_some());
    }
}
