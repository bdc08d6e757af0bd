//! The scheme file format.
//!
//! Schemes are stored as JSON with the tag `ctscheme-v1`. Coefficients are
//! least nonnegative residues, transition maps are keyed by decimal state
//! indices, and deserialization re-validates every structural invariant so a
//! loaded scheme is as trustworthy as a computed one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::modring::Modulus;

use super::{CongruenceScheme, SchemeError, SchemeKind, SchemeMeta, SparseRow, TransitionRow};

pub const FORMAT_TAG: &str = "ctscheme-v1";

#[derive(Serialize, Deserialize)]
struct MetaFile {
    #[serde(rename = "P")]
    p: String,
    #[serde(rename = "Q")]
    q: String,
    vars: Vec<String>,
    symmetry_folded: bool,
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    format: String,
    kind: String,
    p: u64,
    r: u32,
    states: usize,
    initial: Vec<u64>,
    transitions: Vec<Vec<BTreeMap<String, u64>>>,
    meta: MetaFile,
}

pub fn serialize(s: &CongruenceScheme) -> String {
    let transitions = s
        .transitions()
        .iter()
        .map(|row| {
            row.per_digit
                .iter()
                .map(|entry| {
                    entry
                        .iter()
                        .map(|&(j, alpha)| (j.to_string(), alpha))
                        .collect::<BTreeMap<String, u64>>()
                })
                .collect()
        })
        .collect();
    let file = SchemeFile {
        format: FORMAT_TAG.to_string(),
        kind: s.kind().as_str().to_string(),
        p: s.modulus().p(),
        r: s.modulus().r(),
        states: s.num_states(),
        initial: s.initial().to_vec(),
        transitions,
        meta: MetaFile {
            p: s.meta().p_text.clone(),
            q: s.meta().q_text.clone(),
            vars: s.meta().vars.clone(),
            symmetry_folded: s.meta().symmetry_folded,
        },
    };
    let mut text = serde_json::to_string_pretty(&file).expect("scheme serialization");
    text.push('\n');
    text
}

pub fn deserialize(text: &str) -> Result<CongruenceScheme, SchemeError> {
    let file: SchemeFile = serde_json::from_str(text)
        .map_err(|e| SchemeError::FormatError(format!("invalid JSON: {e}")))?;
    if file.format != FORMAT_TAG {
        return Err(SchemeError::FormatError(format!(
            "format tag `{}` is not `{FORMAT_TAG}`",
            file.format
        )));
    }
    let kind = SchemeKind::parse(&file.kind)
        .ok_or_else(|| SchemeError::FormatError(format!("unknown kind `{}`", file.kind)))?;
    let modulus = Modulus::new(file.p, file.r)
        .map_err(|e| SchemeError::FormatError(format!("bad modulus: {e}")))?;
    if file.initial.len() != file.states {
        return Err(SchemeError::FormatError(format!(
            "states = {} but {} initial conditions",
            file.states,
            file.initial.len()
        )));
    }
    if file.transitions.len() != file.states {
        return Err(SchemeError::FormatError(format!(
            "states = {} but {} transition rows",
            file.states,
            file.transitions.len()
        )));
    }
    let mut transitions = Vec::with_capacity(file.states);
    for (i, row) in file.transitions.iter().enumerate() {
        let mut per_digit = Vec::with_capacity(row.len());
        for (k, map) in row.iter().enumerate() {
            let mut entry: SparseRow = Vec::with_capacity(map.len());
            for (key, &alpha) in map {
                let j: usize = key.parse().map_err(|_| {
                    SchemeError::FormatError(format!(
                        "state {i} digit {k}: key `{key}` is not a state index"
                    ))
                })?;
                if j.to_string() != *key {
                    return Err(SchemeError::FormatError(format!(
                        "state {i} digit {k}: key `{key}` is not canonical decimal"
                    )));
                }
                entry.push((j, alpha));
            }
            entry.sort_by_key(|&(j, _)| j);
            per_digit.push(entry);
        }
        transitions.push(TransitionRow { per_digit });
    }
    let meta = SchemeMeta {
        p_text: file.meta.p,
        q_text: file.meta.q,
        vars: file.meta.vars,
        symmetry_folded: file.meta.symmetry_folded,
    };
    CongruenceScheme::from_parts_checked(kind, modulus, file.initial, transitions, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scheme::{compute_scheme, ComputeOptions};

    fn catalan_mod3(kind: SchemeKind) -> CongruenceScheme {
        let m = Modulus::new(3, 1).unwrap();
        let (p, q) = catalog::builtin("catalan").unwrap().parse(m).unwrap();
        compute_scheme(&p, &q, kind, &ComputeOptions::default()).unwrap()
    }

    #[test]
    fn round_trip_identity() {
        for kind in [SchemeKind::Linear, SchemeKind::Scaling, SchemeKind::Automatic] {
            let s = catalan_mod3(kind);
            let text = serialize(&s);
            let back = deserialize(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn rejects_unknown_kind() {
        let text = serialize(&catalan_mod3(SchemeKind::Linear)).replace("linear", "affine");
        match deserialize(&text) {
            Err(SchemeError::FormatError(msg)) => assert!(msg.contains("affine"), "{msg}"),
            other => panic!("expected FormatError, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unreduced_coefficients() {
        let s = catalan_mod3(SchemeKind::Linear);
        let text = serialize(&s).replace("\"0\": 2", "\"0\": 9");
        match deserialize(&text) {
            Err(SchemeError::FormatError(_)) => {}
            other => panic!("expected FormatError, got {other:?}"),
        }
    }

    #[test]
    fn rejects_broken_fixed_point() {
        let s = catalan_mod3(SchemeKind::Automatic);
        // corrupt one initial condition: [1, 1, 2, 2] -> [2, 1, 2, 2]
        let mut value: serde_json::Value = serde_json::from_str(&serialize(&s)).unwrap();
        value["initial"][0] = serde_json::json!(2);
        let text = serde_json::to_string(&value).unwrap();
        match deserialize(&text) {
            Err(SchemeError::FormatError(msg)) => {
                assert!(msg.contains("fixed point"), "{msg}")
            }
            other => panic!("expected FormatError, got {other:?}"),
        }
    }
}
