//! Built-in constant-term representations and the reference formula for the
//! 2-adic valuation of Motzkin numbers.

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::modring::Modulus;
use crate::polyparse::{self, ParseError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown sequence `{0}`")]
    UnknownSequence(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A named sequence given by the expressions of its constant-term kernel
/// `A(n) = ct[P^n Q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDef {
    pub name: String,
    pub p_text: String,
    pub q_text: String,
    pub vars: Vec<String>,
}

impl SequenceDef {
    pub fn new(name: &str, p_text: &str, q_text: &str, vars: &[&str]) -> Self {
        SequenceDef {
            name: name.to_string(),
            p_text: p_text.to_string(),
            q_text: q_text.to_string(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn parse(&self, modulus: Modulus) -> Result<(LaurentPoly, LaurentPoly), CatalogError> {
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let p = polyparse::parse_laurent(&self.p_text, &vars, modulus)?;
        let q = polyparse::parse_laurent(&self.q_text, &vars, modulus)?;
        Ok((p, q))
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["catalan", "motzkin", "apery2", "apery3"];

pub fn builtin(name: &str) -> Result<SequenceDef, CatalogError> {
    match name {
        "catalan" => Ok(SequenceDef::new("catalan", "1/x+2+x", "1-x", &["x"])),
        "motzkin" => Ok(SequenceDef::new("motzkin", "1/x+1+x", "1-x^2", &["x"])),
        "apery2" => Ok(SequenceDef::new(
            "apery2",
            "((x+1)*(x+y)*(x+y+1))/x/y",
            "1",
            &["x", "y"],
        )),
        "apery3" => Ok(SequenceDef::new(
            "apery3",
            "((x+y)*(1+z)*(x+y+z)*(1+y+z))/x/y/z",
            "1",
            &["x", "y", "z"],
        )),
        other => Err(CatalogError::UnknownSequence(other.to_string())),
    }
}

/// Does `v` equal `(4i + residue) * 4^t` for some `i >= 0` and `t >= min_t`?
///
/// Decided by stripping trailing base-4 zeros and comparing the next digit,
/// so the check is logarithmic in `v`.
fn has_form(v: &BigUint, min_t: u32, residue: u32) -> bool {
    let Some(tz_bits) = v.trailing_zeros() else {
        return false; // v == 0
    };
    let t = (tz_bits / 2) as u32;
    if t < min_t {
        return false;
    }
    let shifted = v >> (2 * t as u64);
    (shifted & BigUint::from(3u32)) == BigUint::from(residue)
}

/// The 2-adic valuation of the Motzkin number `M(n)`.
///
/// Valuation 2 exactly when `n = (4i+1)4^(j+1) - 1` or `n = (4i+3)4^(j+1) - 2`,
/// valuation 1 exactly when `n = (4i+1)4^(j+1) - 2` or `n = (4i+3)4^(j+1) - 1`
/// (with `i, j >= 0`), and 0 otherwise. Each case is decided by digit
/// inspection of `n+1` or `n+2` in base 4 rather than by search.
pub fn motzkin_nu2_reference(n: &BigUint) -> u32 {
    let n1 = n + BigUint::one();
    let n2 = &n1 + BigUint::one();
    if has_form(&n1, 1, 1) || has_form(&n2, 1, 3) {
        2
    } else if has_form(&n2, 1, 1) || has_form(&n1, 1, 3) {
        1
    } else {
        0
    }
}

/// Which (if any) of the four index families of [`motzkin_nu2_reference`]
/// contain `n`; used to sanity-check that the case split is disjoint.
pub fn motzkin_nu2_families(n: &BigUint) -> Vec<usize> {
    let n1 = n + BigUint::one();
    let n2 = &n1 + BigUint::one();
    let checks = [
        has_form(&n1, 1, 1),
        has_form(&n2, 1, 3),
        has_form(&n2, 1, 1),
        has_form(&n1, 1, 3),
    ];
    checks
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_lookup() {
        let m = builtin("motzkin").unwrap();
        assert_eq!(m.p_text, "1/x+1+x");
        assert_eq!(m.q_text, "1-x^2");
        let c = builtin("catalan").unwrap();
        assert_eq!(c.p_text, "1/x+2+x");
        let a = builtin("apery3").unwrap();
        assert_eq!(a.vars, vec!["x", "y", "z"]);
        assert_eq!(a.q_text, "1");
        assert!(matches!(
            builtin("fibonacci"),
            Err(CatalogError::UnknownSequence(_))
        ));
    }

    #[test]
    fn builtins_parse_under_any_modulus() {
        for name in BUILTIN_NAMES {
            for (p, r) in [(2, 3), (3, 2), (13, 2), (5, 5)] {
                let m = Modulus::new(p, r).unwrap();
                builtin(name).unwrap().parse(m).unwrap();
            }
        }
    }

    #[test]
    fn nu2_small_cases() {
        assert_eq!(motzkin_nu2_reference(&BigUint::from(3u32)), 2); // M(3) = 4
        assert_eq!(motzkin_nu2_reference(&BigUint::from(2u32)), 1); // M(2) = 2
        assert_eq!(motzkin_nu2_reference(&BigUint::from(0u32)), 0); // M(0) = 1
    }

    /// Exact Motzkin numbers via the trinomial triangle: M(n) is the central
    /// coefficient of (1+x+x^2)^n minus the coefficient two to its right.
    fn motzkin_exact(limit: usize) -> Vec<u128> {
        let mut row: Vec<u128> = vec![1];
        let mut out = Vec::with_capacity(limit);
        for _ in 0..limit {
            let mid = row.len() / 2;
            let center = row[mid];
            let next = if mid + 2 < row.len() { row[mid + 2] } else { 0 };
            out.push(center - next);
            let mut new_row = vec![0u128; row.len() + 2];
            for (i, &c) in row.iter().enumerate() {
                new_row[i] += c;
                new_row[i + 1] += c;
                new_row[i + 2] += c;
            }
            row = new_row;
        }
        out
    }

    #[test]
    fn nu2_matches_exact_values() {
        let values = motzkin_exact(60);
        for (n, v) in values.iter().enumerate() {
            let expected = v.trailing_zeros();
            assert_eq!(
                motzkin_nu2_reference(&BigUint::from(n)),
                expected,
                "n={n} M(n)={v}"
            );
        }
    }

    #[test]
    fn nu2_families_disjoint() {
        for n in 0u32..1 << 14 {
            let fams = motzkin_nu2_families(&BigUint::from(n));
            assert!(fams.len() <= 1, "n={n} families={fams:?}");
        }
    }
}
