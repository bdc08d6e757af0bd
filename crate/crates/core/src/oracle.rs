//! Brute-force constant-term evaluation.
//!
//! Used as the independent reference in equivalence tests: no scheme
//! machinery, just polynomial powering and coefficient extraction.

use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly};
use crate::modring::Residue;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("term count exceeded the cap of {cap}")]
    TermCapExceeded { cap: usize },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

pub const DEFAULT_TERM_CAP: usize = 10_000_000;

fn check_cap(poly: &LaurentPoly, cap: usize) -> Result<(), OracleError> {
    if poly.num_terms() > cap {
        Err(OracleError::TermCapExceeded { cap })
    } else {
        Ok(())
    }
}

/// `ct[P^n Q]` by direct binary powering.
pub fn ct_direct(p: &LaurentPoly, q: &LaurentPoly, n: u64) -> Result<Residue, OracleError> {
    ct_direct_capped(p, q, n, DEFAULT_TERM_CAP)
}

pub fn ct_direct_capped(
    p: &LaurentPoly,
    q: &LaurentPoly,
    n: u64,
    cap: usize,
) -> Result<Residue, OracleError> {
    let mut acc = q.clone();
    let mut base = p.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.multiply(&base)?;
            check_cap(&acc, cap)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.multiply(&base)?;
            check_cap(&base, cap)?;
        }
    }
    Ok(acc.constant_term())
}

/// The first `count` values `ct[P^n Q]`, one multiplication per step.
pub fn sequence_prefix(
    p: &LaurentPoly,
    q: &LaurentPoly,
    count: usize,
) -> Result<Vec<Residue>, OracleError> {
    sequence_prefix_capped(p, q, count, DEFAULT_TERM_CAP)
}

pub fn sequence_prefix_capped(
    p: &LaurentPoly,
    q: &LaurentPoly,
    count: usize,
    cap: usize,
) -> Result<Vec<Residue>, OracleError> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    let mut acc = q.clone();
    out.push(acc.constant_term());
    for _ in 1..count {
        acc = acc.multiply(p)?;
        check_cap(&acc, cap)?;
        out.push(acc.constant_term());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::modring::Modulus;

    fn values(p: &LaurentPoly, q: &LaurentPoly, count: usize) -> Vec<u64> {
        sequence_prefix(p, q, count)
            .unwrap()
            .iter()
            .map(|r| r.value())
            .collect()
    }

    #[test]
    fn motzkin_examples() {
        let m16 = Modulus::new(2, 4).unwrap();
        let (p, q) = catalog::builtin("motzkin").unwrap().parse(m16).unwrap();
        assert_eq!(ct_direct(&p, &q, 4).unwrap().value(), 9);
        assert_eq!(ct_direct(&p, &q, 0).unwrap(), q.constant_term());

        let m8 = Modulus::new(2, 3).unwrap();
        let (p, q) = catalog::builtin("motzkin").unwrap().parse(m8).unwrap();
        assert_eq!(values(&p, &q, 6), vec![1, 1, 2, 4, 1, 5]);
        assert!(sequence_prefix(&p, &q, 0).unwrap().is_empty());
    }

    #[test]
    fn catalan_examples() {
        let m7 = Modulus::new(7, 1).unwrap();
        let (p, q) = catalog::builtin("catalan").unwrap().parse(m7).unwrap();
        // C(5) = 42 = 6 * 7
        assert_eq!(ct_direct(&p, &q, 5).unwrap().value(), 0);

        let m3 = Modulus::new(3, 1).unwrap();
        let (p, q) = catalog::builtin("catalan").unwrap().parse(m3).unwrap();
        assert_eq!(values(&p, &q, 5), vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn classical_prefixes() {
        let m = Modulus::new(101, 2).unwrap();
        let (p, q) = catalog::builtin("catalan").unwrap().parse(m).unwrap();
        assert_eq!(values(&p, &q, 6), vec![1, 1, 2, 5, 14, 42]);
        let (p, q) = catalog::builtin("motzkin").unwrap().parse(m).unwrap();
        assert_eq!(values(&p, &q, 6), vec![1, 1, 2, 4, 9, 21]);
        let (p, q) = catalog::builtin("apery3").unwrap().parse(m).unwrap();
        assert_eq!(
            values(&p, &q, 4),
            vec![1, 5, 73, 1445 % 101u64.pow(2)]
        );
        let (p, q) = catalog::builtin("apery2").unwrap().parse(m).unwrap();
        assert_eq!(values(&p, &q, 4), vec![1, 3, 19, 147]);
    }

    #[test]
    fn prefix_matches_direct() {
        let m = Modulus::new(5, 2).unwrap();
        let (p, q) = catalog::builtin("motzkin").unwrap().parse(m).unwrap();
        let prefix = sequence_prefix(&p, &q, 30).unwrap();
        for (n, v) in prefix.iter().enumerate() {
            assert_eq!(*v, ct_direct(&p, &q, n as u64).unwrap());
        }
    }

    #[test]
    fn term_cap_enforced() {
        let m = Modulus::new(2, 3).unwrap();
        let (p, q) = catalog::builtin("apery3").unwrap().parse(m).unwrap();
        assert_eq!(
            ct_direct_capped(&p, &q, 1000, 100),
            Err(OracleError::TermCapExceeded { cap: 100 })
        );
    }
}
