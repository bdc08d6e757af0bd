//! Arithmetic in `Z/p^r` for a prime `p`.
//!
//! The ring `Z/p^r` is not a field for `r > 1`, so the linear algebra needed
//! to match states of congruence schemes cannot rely on Gaussian elimination.
//! This module provides the pieces that work in the presence of zero
//! divisors: p-adic valuations, unit inversion, proportionality solving for
//! scaling schemes, and Howell-form row reduction for deciding span
//! membership in linear schemes.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModringError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus exponent must be at least 1")]
    ZeroExponent,
    #[error("{p}^{r} does not fit below 2^63")]
    ModulusTooLarge { p: u64, r: u32 },
    #[error("{0} is not a unit modulo {1}")]
    NonUnit(u64, u64),
}

/// Deterministic Miller-Rabin witnesses valid for all 64-bit inputs.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The ring `Z/p^r` with `p` prime and `p^r < 2^63`.
///
/// All residues handled by this type are least nonnegative representatives
/// stored in machine words; the exponent bound keeps every product inside
/// `u128` intermediate arithmetic.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    r: u32,
    m: u64,
}

impl Modulus {
    pub fn new(p: u64, r: u32) -> Result<Self, ModringError> {
        if !is_prime(p) {
            return Err(ModringError::NotPrime(p));
        }
        if r == 0 {
            return Err(ModringError::ZeroExponent);
        }
        let mut m: u64 = 1;
        for _ in 0..r {
            m = m
                .checked_mul(p)
                .filter(|&m| m < (1 << 63))
                .ok_or(ModringError::ModulusTooLarge { p, r })?;
        }
        Ok(Modulus { p, r, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.m
    }

    /// Reduces a signed value into `[0, m)`.
    pub fn reduce_i64(&self, x: i64) -> u64 {
        let m = self.m as i64;
        (((x % m) + m) % m) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.m)
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.m)
    }

    /// The p-adic valuation of `x`, capped at `r`; by convention the residue
    /// `0` has valuation `r` so the map is total on the ring.
    pub fn valuation(&self, x: u64) -> u32 {
        debug_assert!(x < self.m);
        if x == 0 {
            return self.r;
        }
        let mut x = x;
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// `p^v` for `v <= r`; `p^r` wraps to the residue 0.
    pub fn p_to(&self, v: u32) -> u64 {
        if v >= self.r {
            0
        } else {
            self.p.pow(v)
        }
    }

    /// Splits `x != 0` as `p^s * u` with `u` a unit.
    pub fn unit_part(&self, x: u64) -> (u32, u64) {
        debug_assert!(x != 0 && x < self.m);
        let mut u = x;
        let mut s = 0;
        while u % self.p == 0 {
            u /= self.p;
            s += 1;
        }
        (s, u)
    }

    pub fn unit_inverse(&self, x: u64) -> Result<u64, ModringError> {
        let x = self.reduce(x);
        if x % self.p == 0 {
            return Err(ModringError::NonUnit(x, self.m));
        }
        // Extended Euclid on (x, m); m < 2^63 keeps everything in i128.
        let (mut r0, mut r1) = (x as i128, self.m as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        let m = self.m as i128;
        Ok((((s0 % m) + m) % m) as u64)
    }

    /// Finds the smallest `alpha` with `target = alpha * base` componentwise,
    /// if any exists.
    ///
    /// Anchored on the first coordinate of `base` with minimal valuation: if
    /// that coordinate is `p^s * u`, any solution satisfies a congruence mod
    /// `p^(r-s)`, and the at most `p^s` lifts are verified in ascending order
    /// so the returned representative is deterministic.
    pub fn solve_scalar_multiple(&self, target: &[u64], base: &[u64]) -> Option<u64> {
        assert_eq!(target.len(), base.len());
        let anchor = (0..base.len())
            .filter(|&i| base[i] != 0)
            .min_by_key(|&i| (self.valuation(base[i]), i))?;
        let (s, u) = self.unit_part(base[anchor]);
        let t = target[anchor];
        let p_s = self.p.pow(s);
        if t % p_s != 0 {
            return None;
        }
        let u_inv = self.unit_inverse(u).expect("unit part is a unit");
        let step = self.m / p_s; // p^(r-s)
        let alpha0 = self.mul(t / p_s, u_inv) % step;
        let mut alpha = alpha0;
        loop {
            if target
                .iter()
                .zip(base)
                .all(|(&t, &b)| self.mul(alpha, b) == t)
            {
                debug_assert!(target
                    .iter()
                    .zip(base)
                    .all(|(&t, &b)| self.mul(alpha, b) == t));
                return Some(alpha);
            }
            match alpha.checked_add(step) {
                Some(next) if next < self.m => alpha = next,
                _ => return None,
            }
        }
    }

    pub fn residue(&self, value: u64) -> Residue {
        Residue {
            value: self.reduce(value),
            modulus: *self,
        }
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.r)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// An element of `Z/p^r`, stored as the least nonnegative representative.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn valuation(&self) -> u32 {
        self.modulus.valuation(self.value)
    }

    pub fn unit_inverse(&self) -> Result<Residue, ModringError> {
        Ok(self.modulus.residue(self.modulus.unit_inverse(self.value)?))
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A list of equal-width coefficient rows over one `Modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMatrix {
    modulus: Modulus,
    width: usize,
    rows: Vec<Vec<u64>>,
}

impl RowMatrix {
    pub fn new(modulus: Modulus, width: usize) -> Self {
        RowMatrix {
            modulus,
            width,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(modulus: Modulus, width: usize, rows: Vec<Vec<u64>>) -> Self {
        let mut mat = RowMatrix::new(modulus, width);
        for row in rows {
            mat.push_row(row);
        }
        mat
    }

    pub fn push_row(&mut self, row: Vec<u64>) {
        assert_eq!(row.len(), self.width, "row width mismatch");
        assert!(row.iter().all(|&x| x < self.modulus.m()));
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The Howell normal form of the row span.
    ///
    /// Every vector of the span reduces to zero against the result, including
    /// all leading-zero truncations, which is what makes span membership over
    /// `Z/p^r` decidable by a single reduction pass.
    pub fn howell_form(&self) -> RowMatrix {
        let mut basis = HowellBasis::new(self.modulus, self.width);
        for row in &self.rows {
            basis.insert_source(row.clone());
        }
        RowMatrix {
            modulus: self.modulus,
            width: basis.width,
            rows: basis.rows.iter().map(|r| r.vec.clone()).collect(),
        }
    }

    /// Expresses `target` as a combination of the original rows, if possible.
    /// The combination is found by reduction against the Howell form and is
    /// deterministic for a fixed row order.
    pub fn solve_span_membership(&self, target: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(target.len(), self.width, "target width mismatch");
        let mut basis = HowellBasis::new(self.modulus, self.width);
        for row in &self.rows {
            basis.insert_source(row.clone());
        }
        let (rem, combo) = basis.reduce(target.to_vec());
        if rem.iter().any(|&x| x != 0) {
            return None;
        }
        let mut coeffs = vec![0u64; self.rows.len()];
        for (i, c) in combo.into_iter().enumerate() {
            coeffs[i] = c;
        }
        debug_assert!({
            let m = self.modulus;
            (0..self.width).all(|j| {
                let mut acc = 0u64;
                for (row, &c) in self.rows.iter().zip(&coeffs) {
                    acc = m.add(acc, m.mul(c, row[j]));
                }
                acc == target[j]
            })
        });
        Some(coeffs)
    }
}

struct HowellRow {
    vec: Vec<u64>,
    /// Expresses `vec` as a combination of the inserted source rows; treated
    /// as zero beyond its length so older rows need no padding when new
    /// sources arrive.
    combo: Vec<u64>,
    pivot_col: usize,
    pivot_exp: u32,
}

/// Incremental Howell basis: rows stay in echelon order with pivots `p^s`,
/// entries above pivots reduced, and the span closed under leading-zero
/// truncation. Supports appending both columns and source rows, which is how
/// the linear-scheme builder grows its per-class workspace.
pub(crate) struct HowellBasis {
    modulus: Modulus,
    width: usize,
    sources: usize,
    rows: Vec<HowellRow>,
}

impl HowellBasis {
    pub fn new(modulus: Modulus, width: usize) -> Self {
        HowellBasis {
            modulus,
            width,
            sources: 0,
            rows: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn grow_width(&mut self, width: usize) {
        assert!(width >= self.width);
        self.width = width;
        for row in &mut self.rows {
            row.vec.resize(width, 0);
        }
    }

    fn combo_at(combo: &[u64], i: usize) -> u64 {
        combo.get(i).copied().unwrap_or(0)
    }

    /// Reduces `v` against the basis; returns the canonical remainder and the
    /// combination of source rows that was subtracted.
    pub fn reduce(&self, mut v: Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        assert_eq!(v.len(), self.width);
        let m = self.modulus;
        let mut combo = vec![0u64; self.sources];
        for row in &self.rows {
            let x = v[row.pivot_col];
            if x == 0 {
                continue;
            }
            let pivot = m.p().pow(row.pivot_exp);
            let c = x / pivot;
            if c == 0 {
                continue;
            }
            for j in row.pivot_col..self.width {
                v[j] = m.sub(v[j], m.mul(c, row.vec[j]));
            }
            for (i, acc) in combo.iter_mut().enumerate() {
                *acc = m.add(*acc, m.mul(c, Self::combo_at(&row.combo, i)));
            }
        }
        (v, combo)
    }

    /// Inserts a fresh source row. Returns `Some(coeffs)` when the row is
    /// already in the span (it is then not added as a basis row).
    pub fn insert_source(&mut self, v: Vec<u64>) -> Option<Vec<u64>> {
        let idx = self.sources;
        self.sources += 1;
        let (rem, combo) = self.reduce(v);
        if rem.iter().all(|&x| x == 0) {
            return Some(combo);
        }
        let m = self.modulus;
        let mut src_combo = vec![0u64; idx + 1];
        src_combo[idx] = 1;
        for (i, c) in combo.iter().enumerate() {
            if *c != 0 {
                src_combo[i] = m.neg(*c);
            }
        }
        self.insert_reduced(rem, src_combo);
        None
    }

    /// Registers a source row that is already fully reduced against the
    /// basis (so the source IS the basis row to insert).
    pub fn add_source_reduced(&mut self, v: Vec<u64>) {
        let idx = self.sources;
        self.sources += 1;
        debug_assert!(v.iter().any(|&x| x != 0));
        let mut combo = vec![0u64; idx + 1];
        combo[idx] = 1;
        self.insert_reduced(v, combo);
    }

    /// Inserts an already-reduced nonzero row together with its source
    /// combination, restoring echelon order and the Howell closure.
    pub fn insert_reduced(&mut self, v: Vec<u64>, combo: Vec<u64>) {
        let mut stack = vec![(v, combo)];
        let m = self.modulus;
        while let Some((v, combo)) = stack.pop() {
            // Rows queued earlier may have become reducible by the pivots
            // inserted since; reduction is what the echelon steps below rely
            // on, so redo it (a no-op for already-reduced rows).
            let (mut v, sub) = self.reduce(v);
            let mut combo = combo;
            if combo.len() < sub.len() {
                combo.resize(sub.len(), 0);
            }
            for (i, s) in sub.iter().enumerate() {
                if *s != 0 {
                    combo[i] = m.sub(combo[i], *s);
                }
            }
            let Some(col) = v.iter().position(|&x| x != 0) else {
                continue;
            };
            let (s, u) = m.unit_part(v[col]);
            if u != 1 {
                let u_inv = m.unit_inverse(u).expect("unit part");
                for x in v.iter_mut() {
                    *x = m.mul(*x, u_inv);
                }
                for x in combo.iter_mut() {
                    *x = m.mul(*x, u_inv);
                }
            }
            debug_assert_eq!(v[col], m.p().pow(s));

            // Where does this pivot land among the existing rows?
            let pos = self.rows.partition_point(|r| r.pivot_col < col);
            if pos < self.rows.len() && self.rows[pos].pivot_col == col {
                // A pivot already sits in this column. The incoming row was
                // reduced mod that pivot, so its valuation is strictly
                // smaller: it replaces the old row, which is re-reduced by it
                // and reinserted.
                debug_assert!(s < self.rows[pos].pivot_exp);
                let old = std::mem::replace(
                    &mut self.rows[pos],
                    HowellRow {
                        vec: v,
                        combo,
                        pivot_col: col,
                        pivot_exp: s,
                    },
                );
                let new_row = &self.rows[pos];
                let c = m.p().pow(old.pivot_exp - s);
                let mut w = old.vec;
                for j in col..self.width {
                    w[j] = m.sub(w[j], m.mul(c, new_row.vec[j]));
                }
                let mut wc = old.combo;
                if wc.len() < new_row.combo.len() {
                    wc.resize(new_row.combo.len(), 0);
                }
                for (i, x) in wc.iter_mut().enumerate() {
                    *x = m.sub(*x, m.mul(c, Self::combo_at(&new_row.combo, i)));
                }
                stack.push((w, wc));
            } else {
                self.rows.insert(
                    pos,
                    HowellRow {
                        vec: v,
                        combo,
                        pivot_col: col,
                        pivot_exp: s,
                    },
                );
            }

            // Howell closure: p^(r-s) times the new pivot row starts with a
            // zero in its pivot column and must itself be representable.
            if s > 0 {
                let row = &self.rows[self.rows.partition_point(|r| r.pivot_col < col)];
                let c = m.p().pow(m.r() - s) % m.m();
                let w: Vec<u64> = row.vec.iter().map(|&x| m.mul(c, x)).collect();
                if w.iter().any(|&x| x != 0) {
                    let wc: Vec<u64> = row.combo.iter().map(|&x| m.mul(c, x)).collect();
                    stack.push((w, wc));
                }
            }

            // Re-reduce entries above the (possibly new) pivot in this column.
            self.reduce_above(col);
        }
    }

    fn reduce_above(&mut self, col: usize) {
        let m = self.modulus;
        let pos = self.rows.partition_point(|r| r.pivot_col < col);
        if pos >= self.rows.len() || self.rows[pos].pivot_col != col {
            return;
        }
        let pivot = m.p().pow(self.rows[pos].pivot_exp);
        let (above, rest) = self.rows.split_at_mut(pos);
        let pivot_row = &rest[0];
        for row in above {
            let c = row.vec[col] / pivot;
            if c == 0 {
                continue;
            }
            for j in col..self.width {
                row.vec[j] = m.sub(row.vec[j], m.mul(c, pivot_row.vec[j]));
            }
            if row.combo.len() < pivot_row.combo.len() {
                row.combo.resize(pivot_row.combo.len(), 0);
            }
            for (i, x) in row.combo.iter_mut().enumerate() {
                *x = m.sub(*x, m.mul(c, Self::combo_at(&pivot_row.combo, i)));
            }
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }
}
