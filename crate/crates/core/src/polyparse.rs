//! Textual Laurent polynomial expressions.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' signedInt)?
//! base   := uint | var | '(' expr ')'
//! ```
//!
//! Whitespace is ignored, `^` binds tighter than `*` and `/`, and there is no
//! implicit multiplication. Division (and negative powers of non-monomial
//! bases) is only defined when the divisor normalizes to a single monomial
//! with a unit coefficient.

use thiserror::Error;

use crate::laurent::{LaurentPoly, Monomial};
use crate::modring::Modulus;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("divisor at byte {offset} is not a single monomial")]
    NonMonomialDivisor { offset: usize },
    #[error("divisor at byte {offset} has a non-unit coefficient")]
    NonUnitDivisor { offset: usize },
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("invalid variable list: {0}")]
    BadVariables(String),
}

/// A polynomial expression together with its ordered variable names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprSource {
    text: String,
    vars: Vec<String>,
}

impl ExprSource {
    pub fn new(text: &str, vars: &[&str]) -> Result<Self, ParseError> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for v in &vars {
            if v.is_empty() || !v.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(ParseError::BadVariables(format!(
                    "`{v}` is not a nonempty alphabetic name"
                )));
            }
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(ParseError::BadVariables(format!("`{v}` appears twice")));
            }
        }
        Ok(ExprSource {
            text: text.to_string(),
            vars,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }
}

pub fn parse(src: &ExprSource, modulus: Modulus) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser {
        bytes: src.text.as_bytes(),
        pos: 0,
        vars: &src.vars,
        modulus,
    };
    let poly = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

/// Convenience wrapper building the [`ExprSource`] in place.
pub fn parse_laurent(
    text: &str,
    vars: &[&str],
    modulus: Modulus,
) -> Result<LaurentPoly, ParseError> {
    parse(&ExprSource::new(text, vars)?, modulus)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [String],
    modulus: Modulus,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> ParseError {
        ParseError::SyntaxError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse_expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.add(&t).expect("same context");
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.parse_term()?;
                    acc = acc.sub(&t).expect("same context");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.multiply(&f).expect("same context");
                }
                Some(b'/') => {
                    self.pos += 1;
                    let offset = {
                        self.skip_ws();
                        self.pos
                    };
                    let f = self.parse_factor()?;
                    let inv = self.invert_monomial(&f, offset)?;
                    acc = acc.multiply(&inv).expect("same context");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn invert_monomial(
        &self,
        f: &LaurentPoly,
        offset: usize,
    ) -> Result<LaurentPoly, ParseError> {
        let mut terms = f.terms();
        let (mono, coeff) = match (terms.next(), terms.next()) {
            (Some(t), None) => t,
            _ => return Err(ParseError::NonMonomialDivisor { offset }),
        };
        let inv = self
            .modulus
            .unit_inverse(coeff)
            .map_err(|_| ParseError::NonUnitDivisor { offset })?;
        let neg_mono = Monomial::from_vec(mono.exponents().iter().map(|&e| -e).collect());
        Ok(LaurentPoly::term(neg_mono, inv, self.modulus))
    }

    fn parse_factor(&mut self) -> Result<LaurentPoly, ParseError> {
        let base_offset = {
            self.skip_ws();
            self.pos
        };
        let base = self.parse_base()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.parse_signed_int()?;
        if exp >= 0 {
            Ok(base.power(exp as u64))
        } else {
            let inv = self.invert_monomial(&base, base_offset)?;
            Ok(inv.power(exp.unsigned_abs()))
        }
    }

    fn parse_signed_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let mut negate = false;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            negate = true;
        }
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: i64 = text
            .parse()
            .map_err(|_| self.syntax("exponent out of range"))?;
        Ok(if negate { -value } else { value })
    }

    fn parse_base(&mut self) -> Result<LaurentPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let mut value: u64 = 0;
                let m = self.modulus.m() as u128;
                while let Some(&d) = self.bytes.get(self.pos).filter(|b| b.is_ascii_digit()) {
                    // literals longer than u64 are fine: reduce as we go
                    value = ((value as u128 * 10 + (d - b'0') as u128) % m) as u64;
                    self.pos += 1;
                }
                Ok(LaurentPoly::constant(
                    value,
                    self.vars.len(),
                    self.modulus,
                ))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphabetic())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let Some(index) = self.vars.iter().position(|v| v == name) else {
                    return Err(ParseError::UnknownVariable {
                        offset: start,
                        name: name.to_string(),
                    });
                };
                let mut exps = smallvec::SmallVec::from_elem(0i32, self.vars.len());
                exps[index] = 1;
                Ok(LaurentPoly::term(Monomial::from_vec(exps), 1, self.modulus))
            }
            _ => Err(self.syntax("expected a number, variable or `(`")),
        }
    }
}

pub fn default_var_names(nvars: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    if nvars <= NAMES.len() {
        NAMES[..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// Canonical text form: terms in ascending lexicographic order joined by
/// ` + `, every coefficient a least nonnegative residue. Parsing the output
/// reproduces the polynomial.
pub fn to_text(poly: &LaurentPoly, vars: &[String]) -> String {
    assert_eq!(vars.len(), poly.nvars());
    if poly.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::with_capacity(poly.num_terms());
    for (mono, coeff) in poly.terms() {
        let mut factors = Vec::new();
        if coeff != 1 || mono.is_zero() {
            factors.push(coeff.to_string());
        }
        for (name, &e) in vars.iter().zip(mono.exponents()) {
            match e {
                0 => {}
                1 => factors.push(name.clone()),
                _ => factors.push(format!("{name}^{e}")),
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(p: u64, r: u32) -> Modulus {
        Modulus::new(p, r).unwrap()
    }

    #[test]
    fn parses_catalan_kernel() {
        let m = modulus(3, 1);
        let p = parse_laurent("1/x+2+x", &["x"], m).unwrap();
        let expected = LaurentPoly::from_terms(
            1,
            m,
            [
                (Monomial::new(&[-1]), 1),
                (Monomial::new(&[0]), 2),
                (Monomial::new(&[1]), 1),
            ],
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn parses_apery_kernel() {
        let m = modulus(2, 3);
        let p = parse_laurent(
            "((x+y)*(1+z)*(x+y+z)*(1+y+z))/x/y/z",
            &["x", "y", "z"],
            m,
        )
        .unwrap();
        // ct[P^1] = A(1) = 5 for the Apery zeta(3) kernel
        assert_eq!(p.constant_term().value(), 5);
        assert_eq!(p.power(0).constant_term().value(), 1);
    }

    #[test]
    fn division_requires_unit_monomial() {
        let m = modulus(2, 2);
        assert!(matches!(
            parse_laurent("1/(1+x)", &["x"], m),
            Err(ParseError::NonMonomialDivisor { .. })
        ));
        assert!(matches!(
            parse_laurent("1/(2*x)", &["x"], m),
            Err(ParseError::NonUnitDivisor { .. })
        ));
        // unit coefficient is fine
        let p = parse_laurent("x/(3*x^2)", &["x"], m).unwrap();
        assert_eq!(p, parse_laurent("3/x", &["x"], m).unwrap());
    }

    #[test]
    fn no_implicit_multiplication() {
        let m = modulus(2, 2);
        let err = parse_laurent("2x", &["x"], m).unwrap_err();
        assert!(matches!(err, ParseError::SyntaxError { offset: 1, .. }), "{err:?}");
    }

    #[test]
    fn unary_minus_and_precedence() {
        let m = modulus(5, 1);
        assert_eq!(
            parse_laurent("-x + x", &["x"], m).unwrap(),
            LaurentPoly::zero(1, m)
        );
        // ^ binds tighter than *
        assert_eq!(
            parse_laurent("2*x^2", &["x"], m).unwrap(),
            LaurentPoly::term(Monomial::new(&[2]), 2, m)
        );
        assert_eq!(
            parse_laurent("x^-2", &["x"], m).unwrap(),
            LaurentPoly::term(Monomial::new(&[-2]), 1, m)
        );
    }

    #[test]
    fn unknown_variable_reported() {
        let m = modulus(2, 2);
        assert_eq!(
            parse_laurent("x + q", &["x"], m),
            Err(ParseError::UnknownVariable {
                offset: 4,
                name: "q".to_string()
            })
        );
    }

    #[test]
    fn big_literals_reduce() {
        let m = modulus(2, 3);
        let p = parse_laurent("123456789012345678901234567890123", &["x"], m).unwrap();
        // mod 8 only the last three decimal digits matter: 123 mod 8
        assert_eq!(p.constant_term().value(), 3);
    }

    #[test]
    fn print_parse_round_trip() {
        let m = modulus(3, 2);
        let texts = ["1/x + 2 + x", "2*x^-3 + 7", "0", "1", "x^2"];
        for t in texts {
            let p = parse_laurent(t, &["x"], m).unwrap();
            let printed = to_text(&p, &default_var_names(1));
            let q = parse_laurent(&printed, &["x"], m).unwrap();
            assert_eq!(p, q, "text `{t}` printed `{printed}`");
        }
    }
}
