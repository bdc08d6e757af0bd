//! Graphviz export of automatic and scaling schemes.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{CongruenceScheme, SchemeError, SchemeKind};

/// Renders the scheme as a digraph: one node per state labeled with its
/// initial value, digit-labeled edges (digits with the same target and
/// coefficient are merged into one edge; scaling edges carry `k:alpha` when
/// `alpha != 1`), and a zero node exactly when some right-hand side is 0.
pub fn export_dot(s: &CongruenceScheme) -> Result<String, SchemeError> {
    if s.kind() == SchemeKind::Linear {
        return Err(SchemeError::KindMismatch {
            expected: "automatic or scaling",
            got: s.kind(),
        });
    }
    let mut out = String::new();
    out.push_str("digraph scheme {\n");
    out.push_str("    rankdir=LR;\n");
    out.push_str("    node [shape=circle];\n");
    out.push_str("    start [shape=none, label=\"\", width=0, height=0];\n");
    for (i, c) in s.initial().iter().enumerate() {
        writeln!(out, "    {i} [label=\"{c}\"];").unwrap();
    }
    let zero_needed = s.has_zero_entry();
    if zero_needed {
        out.push_str("    zero [label=\"0\"];\n");
    }
    out.push_str("    start -> 0;\n");
    for (i, row) in s.transitions().iter().enumerate() {
        // digit -> (target, coeff), grouped for merged edge labels
        let mut groups: BTreeMap<(Option<usize>, u64), Vec<u64>> = BTreeMap::new();
        for (k, entry) in row.per_digit.iter().enumerate() {
            let key = match entry.first() {
                None => (None, 1),
                Some(&(j, alpha)) => (Some(j), alpha),
            };
            groups.entry(key).or_default().push(k as u64);
        }
        for ((target, alpha), digits) in groups {
            let label = digits
                .iter()
                .map(|k| {
                    if alpha == 1 {
                        k.to_string()
                    } else {
                        format!("{k}:{alpha}")
                    }
                })
                .collect::<Vec<_>>()
                .join(",");
            match target {
                Some(j) => writeln!(out, "    {i} -> {j} [label=\"{label}\"];").unwrap(),
                None => writeln!(out, "    {i} -> zero [label=\"{label}\"];").unwrap(),
            }
        }
    }
    if zero_needed {
        let all: Vec<String> = (0..s.modulus().p()).map(|k| k.to_string()).collect();
        writeln!(out, "    zero -> zero [label=\"{}\"];", all.join(",")).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
