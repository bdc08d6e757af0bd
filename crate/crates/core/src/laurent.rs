//! Sparse multivariate Laurent polynomials over `Z/p^r`.
//!
//! Terms are kept as a vector of (exponent vector, coefficient) pairs sorted
//! lexicographically with zero coefficients pruned, so equality, hashing and
//! iteration order are canonical. Univariate products take a dense
//! convolution path since the scheme construction spends nearly all of its
//! time there.

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::modring::{Modulus, Residue};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("operands live in different rings")]
    ContextMismatch,
    #[error("degree statistic of the zero polynomial")]
    ZeroPolynomial,
    #[error("symmetry search supports at most {max} variables, got {got}")]
    TooManyVariables { max: usize, got: usize },
}

/// An exponent vector; the arity is fixed by the surrounding ring context.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(SmallVec<[i32; 4]>);

impl Monomial {
    pub fn new(exponents: &[i32]) -> Self {
        Monomial(SmallVec::from_slice(exponents))
    }

    pub(crate) fn from_vec(exponents: SmallVec<[i32; 4]>) -> Self {
        Monomial(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// Which degree-like statistic to read off a polynomial.
///
/// All variants are subadditive under multiplication and shrink by a factor
/// `p` under the Cartier operator, which is exactly what the state-degree
/// bound of the scheme construction requires.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DegreeKind {
    /// Largest exponent of variable `i`, clamped at 0.
    Upper(usize),
    /// Largest negated exponent of variable `i`, clamped at 0.
    Lower(usize),
    /// Largest exponent sum, clamped at 0.
    TotalUpper,
    /// Largest negated exponent sum, clamped at 0.
    TotalLower,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    modulus: Modulus,
    terms: Vec<(Monomial, u64)>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize, modulus: Modulus) -> Self {
        LaurentPoly {
            nvars,
            modulus,
            terms: Vec::new(),
        }
    }

    pub fn constant(c: u64, nvars: usize, modulus: Modulus) -> Self {
        let c = modulus.reduce(c);
        let mut poly = LaurentPoly::zero(nvars, modulus);
        if c != 0 {
            poly.terms.push((Monomial::zero(nvars), c));
        }
        poly
    }

    pub fn one(nvars: usize, modulus: Modulus) -> Self {
        LaurentPoly::constant(1, nvars, modulus)
    }

    pub fn term(mono: Monomial, c: u64, modulus: Modulus) -> Self {
        let nvars = mono.exponents().len();
        let c = modulus.reduce(c);
        let mut poly = LaurentPoly::zero(nvars, modulus);
        if c != 0 {
            poly.terms.push((mono, c));
        }
        poly
    }

    /// Builds a polynomial from arbitrary (monomial, coefficient) pairs,
    /// accumulating duplicates and pruning zeros.
    pub fn from_terms(
        nvars: usize,
        modulus: Modulus,
        terms: impl IntoIterator<Item = (Monomial, u64)>,
    ) -> Self {
        let mut collected: Vec<(Monomial, u64)> = Vec::new();
        for (mono, c) in terms {
            assert_eq!(mono.exponents().len(), nvars, "monomial arity mismatch");
            collected.push((mono, modulus.reduce(c)));
        }
        collected.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Monomial, u64)> = Vec::with_capacity(collected.len());
        for (mono, c) in collected {
            match out.last_mut() {
                Some((last, acc)) if *last == mono => *acc = modulus.add(*acc, c),
                _ => out.push((mono, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        LaurentPoly {
            nvars,
            modulus,
            terms: out,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographically ascending order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coefficient(&self, mono: &Monomial) -> u64 {
        match self.terms.binary_search_by(|(m, _)| m.cmp(mono)) {
            Ok(i) => self.terms[i].1,
            Err(_) => 0,
        }
    }

    /// Coefficient of the zero exponent vector.
    pub fn constant_term(&self) -> Residue {
        self.modulus
            .residue(self.coefficient(&Monomial::zero(self.nvars)))
    }

    fn check_context(&self, other: &Self) -> Result<(), LaurentError> {
        if self.nvars != other.nvars || self.modulus != other.modulus {
            return Err(LaurentError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_context(other)?;
        let m = self.modulus;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = m.add(self.terms[i].1, other.terms[j].1);
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(LaurentPoly {
            nvars: self.nvars,
            modulus: m,
            terms: out,
        })
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        LaurentPoly {
            nvars: self.nvars,
            modulus: m,
            terms: self
                .terms
                .iter()
                .map(|(mono, c)| (mono.clone(), m.neg(*c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: u64) -> Self {
        let m = self.modulus;
        let c = m.reduce(c);
        let mut terms: Vec<(Monomial, u64)> = self
            .terms
            .iter()
            .map(|(mono, x)| (mono.clone(), m.mul(*x, c)))
            .collect();
        terms.retain(|&(_, c)| c != 0);
        LaurentPoly {
            nvars: self.nvars,
            modulus: m,
            terms,
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_context(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentPoly::zero(self.nvars, self.modulus));
        }
        if self.nvars == 1 {
            return Ok(self.multiply_univariate(other));
        }
        let m = self.modulus;
        let mut acc: std::collections::BTreeMap<Monomial, u64> = std::collections::BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = m.mul(*ca, *cb);
                if c == 0 {
                    continue;
                }
                let mono = ma.add(mb);
                let slot = acc.entry(mono).or_insert(0);
                *slot = m.add(*slot, c);
            }
        }
        let terms: Vec<(Monomial, u64)> =
            acc.into_iter().filter(|&(_, c)| c != 0).collect();
        Ok(LaurentPoly {
            nvars: self.nvars,
            modulus: m,
            terms,
        })
    }

    /// Dense convolution over the exponent window. Coefficients are below
    /// `m`, so when `(m-1)^2 * min_len` fits in a u64 the inner loop can
    /// accumulate raw products and reduce once per output coefficient.
    fn multiply_univariate(&self, other: &Self) -> Self {
        let m = self.modulus;
        let (alo, ahi) = (
            self.terms.first().unwrap().0.exponents()[0],
            self.terms.last().unwrap().0.exponents()[0],
        );
        let (blo, bhi) = (
            other.terms.first().unwrap().0.exponents()[0],
            other.terms.last().unwrap().0.exponents()[0],
        );
        let alen = (ahi - alo) as usize + 1;
        let blen = (bhi - blo) as usize + 1;
        let mut a = vec![0u64; alen];
        for (mono, c) in &self.terms {
            a[(mono.exponents()[0] - alo) as usize] = *c;
        }
        let mut b = vec![0u64; blen];
        for (mono, c) in &other.terms {
            b[(mono.exponents()[0] - blo) as usize] = *c;
        }
        if alen > blen {
            std::mem::swap(&mut a, &mut b);
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        let max_coeff = (m.m() - 1) as u128;
        if max_coeff * max_coeff * a.len() as u128 <= u64::MAX as u128 {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.iter().enumerate() {
                    out[i + j] += ai * bj;
                }
            }
            for x in out.iter_mut() {
                *x %= m.m();
            }
        } else {
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.iter().enumerate() {
                    if bj != 0 {
                        out[i + j] = m.add(out[i + j], m.mul(ai, bj));
                    }
                }
            }
        }
        let lo = alo + blo;
        let terms: Vec<(Monomial, u64)> = out
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(i, c)| (Monomial::new(&[lo + i as i32]), c))
            .collect();
        LaurentPoly {
            nvars: 1,
            modulus: m,
            terms,
        }
    }

    /// `self^e` by repeated squaring; `e = 0` gives 1.
    pub fn power(&self, e: u64) -> Self {
        if e == 0 {
            return LaurentPoly::one(self.nvars, self.modulus);
        }
        let mut base = self.clone();
        let mut e = e;
        while e & 1 == 0 {
            base = base.multiply(&base).expect("same context");
            e >>= 1;
        }
        let mut acc = base.clone();
        e >>= 1;
        while e > 0 {
            base = base.multiply(&base).expect("same context");
            if e & 1 == 1 {
                acc = acc.multiply(&base).expect("same context");
            }
            e >>= 1;
        }
        acc
    }

    /// The Cartier operator: keeps the terms whose exponents are all
    /// divisible by `p` and divides those exponents by `p`.
    pub fn cartier(&self, p: u64) -> Self {
        let p = p as i32;
        // exact division preserves the lexicographic term order
        let terms: Vec<(Monomial, u64)> = self
            .terms
            .iter()
            .filter(|(mono, _)| mono.exponents().iter().all(|&e| e % p == 0))
            .map(|(mono, c)| {
                (
                    Monomial(mono.exponents().iter().map(|&e| e / p).collect()),
                    *c,
                )
            })
            .collect();
        LaurentPoly {
            nvars: self.nvars,
            modulus: self.modulus,
            terms,
        }
    }

    /// Substitutes `x -> x^p`, multiplying every exponent by `p`.
    pub fn expand_exponents(&self, p: u64) -> Self {
        let p = p as i32;
        let terms: Vec<(Monomial, u64)> = self
            .terms
            .iter()
            .map(|(mono, c)| {
                (
                    Monomial(mono.exponents().iter().map(|&e| e * p).collect()),
                    *c,
                )
            })
            .collect();
        LaurentPoly {
            nvars: self.nvars,
            modulus: self.modulus,
            terms,
        }
    }

    /// If every exponent of `self` is divisible by `p`, returns `g` with
    /// `self = g(x^p)`.
    pub fn collapse_pth_roots(&self, p: u64) -> Option<Self> {
        let pi = p as i32;
        if self
            .terms
            .iter()
            .all(|(mono, _)| mono.exponents().iter().all(|&e| e % pi == 0))
        {
            Some(self.cartier(p))
        } else {
            None
        }
    }

    pub fn degree_stat(&self, kind: DegreeKind) -> Result<u32, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        let value = self
            .terms
            .iter()
            .map(|(mono, _)| {
                let e = mono.exponents();
                match kind {
                    DegreeKind::Upper(i) => e[i] as i64,
                    DegreeKind::Lower(i) => -(e[i] as i64),
                    DegreeKind::TotalUpper => e.iter().map(|&x| x as i64).sum(),
                    DegreeKind::TotalLower => -e.iter().map(|&x| x as i64).sum::<i64>(),
                }
            })
            .max()
            .unwrap();
        Ok(value.max(0) as u32)
    }

    /// Max of all per-variable upper and lower degrees: the largest absolute
    /// exponent appearing anywhere. Invariant under signed permutations of
    /// the variables, which makes it the right statistic to bound states of
    /// symmetry-folded schemes.
    pub fn degree_star(&self) -> Result<u32, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(self
            .terms
            .iter()
            .flat_map(|(mono, _)| mono.exponents().iter().map(|&e| e.unsigned_abs()))
            .max()
            .unwrap())
    }

    pub fn hash_value(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::polyparse::default_var_names(self.nvars);
        write!(f, "{}", crate::polyparse::to_text(self, &names))
    }
}

/// A signed permutation of the variable slots: variable `i` maps to variable
/// `perm[i]`, inverted when `negate[i]` is set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedPerm {
    perm: SmallVec<[u8; 6]>,
    negate: SmallVec<[bool; 6]>,
}

impl SignedPerm {
    pub fn identity(nvars: usize) -> Self {
        SignedPerm {
            perm: (0..nvars as u8).collect(),
            negate: SmallVec::from_elem(false, nvars),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.negate.iter().all(|&n| !n)
            && self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    pub fn apply(&self, mono: &Monomial) -> Monomial {
        let e = mono.exponents();
        let mut out = SmallVec::from_elem(0i32, e.len());
        for (i, &x) in e.iter().enumerate() {
            out[self.perm[i] as usize] = if self.negate[i] { -x } else { x };
        }
        Monomial(out)
    }

    /// `self` after `other`: applies `other` first.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let n = self.perm.len();
        let mut perm = SmallVec::from_elem(0u8, n);
        let mut negate = SmallVec::from_elem(false, n);
        for i in 0..n {
            let mid = other.perm[i] as usize;
            perm[i] = self.perm[mid];
            negate[i] = other.negate[i] ^ self.negate[mid];
        }
        SignedPerm { perm, negate }
    }

    fn transform(&self, poly: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            poly.nvars,
            poly.modulus,
            poly.terms.iter().map(|(mono, c)| (self.apply(mono), *c)),
        )
    }
}

/// The signed permutations fixing a reference polynomial, used to fold the
/// weight polynomials of scheme states onto canonical orbit representatives.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    nvars: usize,
    elements: Vec<SignedPerm>,
}

pub const MAX_SYMMETRY_VARS: usize = 6;

impl SymmetryGroup {
    pub fn trivial(nvars: usize) -> Self {
        SymmetryGroup {
            nvars,
            elements: vec![SignedPerm::identity(nvars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn elements(&self) -> &[SignedPerm] {
        &self.elements
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: &SignedPerm) -> bool {
        self.elements.contains(g)
    }
}

fn permutations(n: usize) -> Vec<SmallVec<[u8; 6]>> {
    let mut out = Vec::new();
    let mut items: SmallVec<[u8; 6]> = (0..n as u8).collect();
    fn heap(k: usize, items: &mut SmallVec<[u8; 6]>, out: &mut Vec<SmallVec<[u8; 6]>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// All signed permutations fixing `p`. The stabilizer of `p` inside the
/// group generated by transpositions and single-variable inversions is found
/// by direct enumeration, which is affordable for up to 6 variables.
pub fn detect_symmetries(p: &LaurentPoly) -> Result<SymmetryGroup, LaurentError> {
    let n = p.nvars();
    if n > MAX_SYMMETRY_VARS {
        return Err(LaurentError::TooManyVariables {
            max: MAX_SYMMETRY_VARS,
            got: n,
        });
    }
    let mut elements = Vec::new();
    for perm in permutations(n) {
        for mask in 0u32..(1 << n) {
            let g = SignedPerm {
                perm: perm.clone(),
                negate: (0..n).map(|i| mask >> i & 1 == 1).collect(),
            };
            if g.transform(p) == *p {
                elements.push(g);
            }
        }
    }
    // sort for a canonical element order, identity first
    elements.sort_by_key(|g| (!g.is_identity(), g.perm.clone(), g.negate.clone()));
    Ok(SymmetryGroup {
        nvars: n,
        elements,
    })
}

/// Replaces each monomial of `q` by the lexicographically maximal element of
/// its orbit under `sym`, accumulating coefficients. When `sym` fixes the
/// governing polynomial of a constant-term sequence this leaves all values
/// `ct[P^n q]` unchanged.
pub fn canonical_fold(q: &LaurentPoly, sym: &SymmetryGroup) -> LaurentPoly {
    if sym.is_trivial() || q.is_zero() {
        return q.clone();
    }
    LaurentPoly::from_terms(
        q.nvars(),
        q.modulus(),
        q.terms.iter().map(|(mono, c)| {
            let best = sym
                .elements()
                .iter()
                .map(|g| g.apply(mono))
                .max()
                .expect("group contains identity");
            (best, *c)
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyparse::{parse, ExprSource};

    fn modulus(p: u64, r: u32) -> Modulus {
        Modulus::new(p, r).unwrap()
    }

    fn poly(text: &str, m: Modulus) -> LaurentPoly {
        parse(&ExprSource::new(text, &["x"]).unwrap(), m).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let m = modulus(5, 3);
        let p = poly("1/x+1+x", m);
        let q = poly("1-x", m);
        assert_eq!(p.multiply(&q).unwrap(), poly("1/x - x^2", m));
        assert_eq!(p.multiply(&LaurentPoly::one(1, m)).unwrap(), p);

        let m2 = modulus(2, 1);
        let f = poly("1+x", m2);
        assert_eq!(f.multiply(&f).unwrap(), poly("1+x^2", m2));
    }

    #[test]
    fn multiply_context_mismatch() {
        let f = poly("1+x", modulus(2, 1));
        let g = poly("1+x", modulus(3, 1));
        assert_eq!(f.multiply(&g), Err(LaurentError::ContextMismatch));
    }

    #[test]
    fn power_examples() {
        let m4 = modulus(2, 2);
        let p = poly("1/x+2+x", m4);
        assert_eq!(p.power(2), poly("x^-2 + 2 + x^2", m4));
        assert_eq!(p.power(0), LaurentPoly::one(1, m4));

        let m2 = modulus(2, 1);
        let p = poly("1/x+1+x", m2);
        assert_eq!(p.power(2), poly("x^-2 + 1 + x^2", m2));
    }

    #[test]
    fn power_matches_iterated_multiply() {
        let m = modulus(3, 2);
        let f = poly("2/x + 1 + x^2", m);
        let mut acc = LaurentPoly::one(1, m);
        for e in 0..=16u64 {
            assert_eq!(f.power(e), acc, "exponent {e}");
            acc = acc.multiply(&f).unwrap();
        }
    }

    #[test]
    fn cartier_examples() {
        let m = modulus(2, 3);
        assert_eq!(poly("1 - x^2", m).cartier(2), poly("1 - x", m));
        let m3 = modulus(3, 2);
        assert_eq!(
            poly("x^-3 + x + 2*x^6", m3).cartier(3),
            poly("x^-1 + 2*x^2", m3)
        );
        assert!(poly("x", m).cartier(2).is_zero());
    }

    #[test]
    fn constant_term_examples() {
        let m = modulus(5, 2);
        assert_eq!(poly("1/x - x^2", m).constant_term().value(), 0);
        // ct[(1/x+1+x)^2 (1-x^2)] = M(2) = 2
        let p = poly("1/x+1+x", m).power(2);
        let f = p.multiply(&poly("1-x^2", m)).unwrap();
        assert_eq!(f.constant_term().value(), 2);
        let m8 = modulus(2, 3);
        assert_eq!(poly("5", m8).constant_term().value(), 5);
    }

    #[test]
    fn collapse_examples() {
        let m4 = modulus(2, 2);
        assert_eq!(
            poly("x^-2 + 2 + x^2", m4).collapse_pth_roots(2),
            Some(poly("1/x + 2 + x", m4))
        );
        assert_eq!(poly("1 + x", m4).collapse_pth_roots(2), None);
        let zero = LaurentPoly::zero(1, m4);
        assert_eq!(zero.collapse_pth_roots(2), Some(zero.clone()));
    }

    #[test]
    fn degree_examples() {
        let m4 = modulus(2, 2);
        let q = poly("1 - x^2", m4);
        assert_eq!(q.degree_stat(DegreeKind::Upper(0)).unwrap(), 2);
        assert_eq!(q.degree_stat(DegreeKind::Lower(0)).unwrap(), 0);
        let p = poly("1/x + 1 + x", m4);
        assert_eq!(p.degree_stat(DegreeKind::Lower(0)).unwrap(), 1);
        // clamped at zero
        let f = poly("x^-3", m4);
        assert_eq!(f.degree_stat(DegreeKind::Upper(0)).unwrap(), 0);
        assert_eq!(
            LaurentPoly::zero(1, m4).degree_stat(DegreeKind::Upper(0)),
            Err(LaurentError::ZeroPolynomial)
        );
    }

    #[test]
    fn symmetry_detection() {
        let m = modulus(3, 1);
        let p = poly("1/x + 1 + x", m);
        let group = detect_symmetries(&p).unwrap();
        assert_eq!(group.elements().len(), 2);

        let q = poly("1 + x", m);
        assert!(detect_symmetries(&q).unwrap().is_trivial());

        let c = poly("1/x + 2 + x", m);
        assert_eq!(detect_symmetries(&c).unwrap().elements().len(), 2);
    }

    #[test]
    fn symmetry_closed_under_composition() {
        let m = modulus(2, 3);
        let src = ExprSource::new("(x+y)*(1/x+1/y)", &["x", "y"]).unwrap();
        let p = parse(&src, m).unwrap();
        let group = detect_symmetries(&p).unwrap();
        assert!(group.elements().len() > 1);
        for a in group.elements() {
            for b in group.elements() {
                assert!(group.contains(&a.compose(b)));
            }
        }
        assert!(group.contains(&SignedPerm::identity(2)));
    }

    #[test]
    fn fold_examples() {
        let m4 = modulus(2, 2);
        let p = poly("1/x + 1 + x", m4);
        let sym = detect_symmetries(&p).unwrap();
        assert_eq!(
            canonical_fold(&poly("1/x + 1 - x^2 - x^3", m4), &sym),
            poly("1 + x - x^2 - x^3", m4)
        );
        let q = poly("1 - x^2", m4);
        assert_eq!(canonical_fold(&q, &SymmetryGroup::trivial(1)), q);
        assert!(canonical_fold(&poly("1/x - x", m4), &sym).is_zero());
    }

    #[test]
    fn fold_preserves_constant_terms() {
        let m = modulus(2, 2);
        let p = poly("1/x + 1 + x", m);
        let sym = detect_symmetries(&p).unwrap();
        let q = poly("1/x + 1 - x^2 - x^3", m);
        let folded = canonical_fold(&q, &sym);
        for n in 0..=20u64 {
            let pn = p.power(n);
            assert_eq!(
                pn.multiply(&q).unwrap().constant_term(),
                pn.multiply(&folded).unwrap().constant_term(),
                "n={n}"
            );
        }
    }

    #[test]
    fn cartier_adjoint_identity() {
        // ct[f(x^p) g] = ct[f * cartier(g)]
        let m = modulus(3, 2);
        let f = poly("2/x + 1 + x", m);
        let g = poly("1 + 2*x + x^3 + 4*x^4", m);
        let lhs = f
            .expand_exponents(3)
            .multiply(&g)
            .unwrap()
            .constant_term();
        let rhs = f.multiply(&g.cartier(3)).unwrap().constant_term();
        assert_eq!(lhs, rhs);
    }
}
