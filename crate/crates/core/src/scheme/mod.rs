//! Congruence p-schemes for constant-term sequences.
//!
//! A scheme is a finite family of sequences `A_i(n) = ct[P_i^n Q_i]` over
//! `Z/p^r`, closed under `n -> pn + k`, together with the transition
//! coefficients and initial conditions that determine every value of the
//! underlying sequence `A_0`. Depending on the shape of the transitions the
//! scheme is linear (arbitrary linear combinations), scaling (at most one
//! term per right-hand side) or automatic (single terms with coefficient 1,
//! equivalent to a finite state automaton over base-p digits).

mod build;
mod dot;
mod serial;
mod transform;

use std::fmt;

use thiserror::Error;

pub use build::{ComputeOptions, SchemeBuilder};
pub use dot::export_dot;
pub use serial::{deserialize, serialize, FORMAT_TAG};
pub use transform::{minimize, scaling_to_automatic};

use crate::laurent::{LaurentError, LaurentPoly};
use crate::modring::{Modulus, ModringError};

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("state cap of {cap} exceeded")]
    StateCapExceeded { cap: usize },
    #[error("operation requires a {expected} scheme, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: SchemeKind,
    },
    #[error("the weight polynomial folds to zero; the sequence is identically zero")]
    ZeroSequence,
    #[error("malformed scheme: {0}")]
    FormatError(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Modring(#[from] ModringError),
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum SchemeKind {
    Linear,
    Scaling,
    Automatic,
}

impl SchemeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeKind::Linear => "linear",
            SchemeKind::Scaling => "scaling",
            SchemeKind::Automatic => "automatic",
        }
    }

    pub fn parse(text: &str) -> Option<SchemeKind> {
        match text {
            "linear" => Some(SchemeKind::Linear),
            "scaling" => Some(SchemeKind::Scaling),
            "automatic" => Some(SchemeKind::Automatic),
            _ => None,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One right-hand side of a transition: the sparse linear form
/// `sum alpha_j A_j(n)`, kept sorted by state index. Empty means 0.
pub type SparseRow = Vec<(usize, u64)>;

/// The `p` right-hand sides of one state, indexed by the digit `k` of the
/// transition `A_i(pn + k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionRow {
    pub per_digit: Vec<SparseRow>,
}

/// One state `A_i(n) = ct[P_i^n Q_i]` of a freshly computed scheme.
#[derive(Clone, Debug)]
pub struct SchemeState {
    pub p_index: usize,
    pub q: LaurentPoly,
}

/// The polynomial data behind a computed scheme. This is construction-time
/// information: it is not serialized and transformations drop or rewrite it.
#[derive(Clone, Debug)]
pub struct ConstructionData {
    pub ptable: Vec<LaurentPoly>,
    pub states: Vec<SchemeState>,
}

/// Provenance recorded in scheme files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeMeta {
    pub p_text: String,
    pub q_text: String,
    pub vars: Vec<String>,
    pub symmetry_folded: bool,
}

#[derive(Clone, Debug)]
pub struct CongruenceScheme {
    kind: SchemeKind,
    modulus: Modulus,
    initial: Vec<u64>,
    transitions: Vec<TransitionRow>,
    meta: SchemeMeta,
    construction: Option<ConstructionData>,
}

impl PartialEq for CongruenceScheme {
    /// Equality on the serialized content; construction data is auxiliary.
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.modulus == other.modulus
            && self.initial == other.initial
            && self.transitions == other.transitions
            && self.meta == other.meta
    }
}

impl CongruenceScheme {
    pub(crate) fn assemble(
        kind: SchemeKind,
        modulus: Modulus,
        initial: Vec<u64>,
        transitions: Vec<TransitionRow>,
        meta: SchemeMeta,
        construction: Option<ConstructionData>,
    ) -> Result<Self, SchemeError> {
        let scheme = CongruenceScheme {
            kind,
            modulus,
            initial,
            transitions,
            meta,
            construction,
        };
        scheme
            .validate()
            .map_err(SchemeError::InvariantViolation)?;
        Ok(scheme)
    }

    pub(crate) fn from_parts_checked(
        kind: SchemeKind,
        modulus: Modulus,
        initial: Vec<u64>,
        transitions: Vec<TransitionRow>,
        meta: SchemeMeta,
    ) -> Result<Self, SchemeError> {
        let scheme = CongruenceScheme {
            kind,
            modulus,
            initial,
            transitions,
            meta,
            construction: None,
        };
        scheme.validate().map_err(SchemeError::FormatError)?;
        Ok(scheme)
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    /// Whether any right-hand side is zero; in automaton terms, whether the
    /// zero sink is reachable.
    pub fn has_zero_entry(&self) -> bool {
        self.transitions
            .iter()
            .any(|row| row.per_digit.iter().any(|e| e.is_empty()))
    }

    /// States of the corresponding finite state automaton: the scheme states
    /// plus an explicit zero node exactly when some transition maps to 0.
    pub fn automaton_nodes(&self) -> usize {
        self.num_states() + usize::from(self.has_zero_entry())
    }

    pub fn initial(&self) -> &[u64] {
        &self.initial
    }

    pub fn transitions(&self) -> &[TransitionRow] {
        &self.transitions
    }

    pub fn row(&self, state: usize, digit: u64) -> &SparseRow {
        &self.transitions[state].per_digit[digit as usize]
    }

    pub fn meta(&self) -> &SchemeMeta {
        &self.meta
    }

    pub fn with_meta(mut self, meta: SchemeMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn construction(&self) -> Option<&ConstructionData> {
        self.construction.as_ref()
    }

    /// Structural invariants: dimensions, reduced coefficients, kind arity,
    /// and the digit-0 fixed point that makes leading zeros value-neutral.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.initial.len();
        if n == 0 {
            return Err("a scheme needs at least one state".to_string());
        }
        if self.transitions.len() != n {
            return Err(format!(
                "{} states but {} transition rows",
                n,
                self.transitions.len()
            ));
        }
        let m = self.modulus.m();
        let p = self.modulus.p();
        for (i, &c) in self.initial.iter().enumerate() {
            if c >= m {
                return Err(format!("initial[{i}] = {c} is not reduced modulo {m}"));
            }
        }
        for (i, row) in self.transitions.iter().enumerate() {
            if row.per_digit.len() as u64 != p {
                return Err(format!(
                    "state {i} has {} digit entries, expected {p}",
                    row.per_digit.len()
                ));
            }
            for (k, entry) in row.per_digit.iter().enumerate() {
                let mut last: Option<usize> = None;
                for &(j, alpha) in entry {
                    if j >= n {
                        return Err(format!(
                            "state {i} digit {k}: target {j} out of range"
                        ));
                    }
                    if alpha == 0 || alpha >= m {
                        return Err(format!(
                            "state {i} digit {k}: coefficient {alpha} invalid modulo {m}"
                        ));
                    }
                    if last.is_some_and(|prev| prev >= j) {
                        return Err(format!(
                            "state {i} digit {k}: indices not strictly ascending"
                        ));
                    }
                    last = Some(j);
                }
                match self.kind {
                    SchemeKind::Automatic => {
                        if entry.len() > 1 || entry.iter().any(|&(_, a)| a != 1) {
                            return Err(format!(
                                "state {i} digit {k}: not an automatic right-hand side"
                            ));
                        }
                    }
                    SchemeKind::Scaling => {
                        if entry.len() > 1 {
                            return Err(format!(
                                "state {i} digit {k}: not a scaling right-hand side"
                            ));
                        }
                    }
                    SchemeKind::Linear => {}
                }
            }
        }
        // digit-0 fixed point: c_i = sum_j alpha_{i,j}^{(0)} c_j
        for (i, row) in self.transitions.iter().enumerate() {
            let mut acc = 0u64;
            for &(j, alpha) in &row.per_digit[0] {
                acc = self.modulus.add(acc, self.modulus.mul(alpha, self.initial[j]));
            }
            if acc != self.initial[i] {
                return Err(format!(
                    "digit-0 fixed point fails at state {i}: {acc} != {}",
                    self.initial[i]
                ));
            }
        }
        Ok(())
    }
}

/// The degree ceiling `p^(r-1) a - 1 + max(0, b - a + 1)` satisfied by every
/// state weight of a scheme construction, where `a` and `b` are the values
/// of a degree-like statistic on `P` and `Q`.
pub fn degree_bound(a: u32, b: u32, p: u64, r: u32) -> u64 {
    let lead = (p as u128).pow(r - 1) * a as u128;
    let extra = (b as i64 - a as i64 + 1).max(0) as u128;
    // lead + extra >= 1: either a >= 1 or the max-term contributes b + 1
    u64::try_from(lead + extra - 1).unwrap_or(u64::MAX)
}

/// Computes a congruence p-scheme for `ct[P^n Q]` over the ring of `p` and
/// `q`, which must be nonzero and share one context.
pub fn compute_scheme(
    p: &LaurentPoly,
    q: &LaurentPoly,
    kind: SchemeKind,
    opts: &ComputeOptions,
) -> Result<CongruenceScheme, SchemeError> {
    SchemeBuilder::new(p, q, kind, opts.clone())?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_bound_examples() {
        // Motzkin upper: a = 1, b = 2
        assert_eq!(degree_bound(1, 2, 2, 2), 3);
        assert_eq!(degree_bound(1, 2, 2, 3), 5);
        assert_eq!(degree_bound(1, 2, 5, 5), 626);
        // Motzkin lower: a = 1, b = 0
        assert_eq!(degree_bound(1, 0, 2, 2), 1);
        assert_eq!(degree_bound(1, 0, 13, 2), 12);
        // r = 1 reduces to max(a - 1, b)
        assert_eq!(degree_bound(1, 2, 7, 1), 2);
        assert_eq!(degree_bound(3, 1, 7, 1), 2);
        assert_eq!(degree_bound(0, 0, 3, 2), 0);
        assert_eq!(degree_bound(0, 2, 3, 2), 2);
    }
}
