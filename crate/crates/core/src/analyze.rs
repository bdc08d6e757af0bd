//! Consumers of computed schemes: evaluation at arbitrary indices, attained
//! and forbidden residues, valuation schemes, minimal-index search, CRT
//! recombination, residue censuses and prime scans.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::catalog::SequenceDef;
use crate::modring::{is_prime, Modulus, Residue};
use crate::scheme::{
    compute_scheme, minimize, scaling_to_automatic, ComputeOptions, CongruenceScheme, SchemeError,
    SchemeKind,
};

#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error("breadth-first closure exceeded the node cap of {cap}")]
    NodeCapExceeded { cap: usize },
    #[error("no index found within {max_digits} base-p digits")]
    DigitCapExceeded { max_digits: usize },
    #[error("moduli are not pairwise coprime: {0} and {1}")]
    NonCoprimeModuli(u64, u64),
    #[error("invalid index `{0}`: expected decimal digits or B^E")]
    BadIndex(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// Default ceiling for reachable-node closures; override per call or through
/// the CLI environment variable.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

/// An arbitrary-precision sequence index, written in decimal or as `B^E`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BigIndex(pub BigUint);

impl BigIndex {
    pub fn from_u64(n: u64) -> Self {
        BigIndex(BigUint::from(n))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Base-p digits, least significant first; empty for 0.
    pub fn digits(&self, p: u64) -> Vec<u64> {
        let mut digits = Vec::new();
        let mut n = self.0.clone();
        let p = BigUint::from(p);
        while !n.is_zero() {
            let (q, rem) = n.div_rem(&p);
            digits.push(rem.to_u64().expect("remainder below a u64 prime"));
            n = q;
        }
        digits
    }
}

impl FromStr for BigIndex {
    type Err = AnalyzeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || AnalyzeError::BadIndex(text.to_string());
        if let Some((base, exp)) = text.split_once('^') {
            let base: BigUint = base.parse().map_err(|_| bad())?;
            let exp: u32 = exp.parse().map_err(|_| bad())?;
            Ok(BigIndex(base.pow(exp)))
        } else {
            Ok(BigIndex(text.parse().map_err(|_| bad())?))
        }
    }
}

impl fmt::Display for BigIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Evaluates `A(n)` by feeding the base-p digits of `n`, least significant
/// first, through the transition matrices: a row vector starting at the unit
/// vector of state 0 is multiplied by one matrix per digit and finally paired
/// with the initial conditions.
pub fn nth_term(s: &CongruenceScheme, n: &BigIndex) -> Residue {
    let m = s.modulus();
    let digits = n.digits(m.p());
    if s.kind() == SchemeKind::Automatic {
        // single-path walk
        let mut state = Some(0usize);
        for &k in &digits {
            state = match state {
                None => None,
                Some(i) => s.row(i, k).first().map(|&(j, _)| j),
            };
            if state.is_none() {
                break;
            }
        }
        return m.residue(state.map_or(0, |i| s.initial()[i]));
    }
    let mut v = vec![0u64; s.num_states()];
    v[0] = 1;
    let mut next = vec![0u64; s.num_states()];
    for &k in &digits {
        next.iter_mut().for_each(|x| *x = 0);
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(j, alpha) in s.row(i, k) {
                next[j] = m.add(next[j], m.mul(c, alpha));
            }
        }
        std::mem::swap(&mut v, &mut next);
    }
    let mut acc = 0u64;
    for (x, c) in v.iter().zip(s.initial()) {
        acc = m.add(acc, m.mul(*x, *c));
    }
    m.residue(acc)
}

/// The exact set of values attained by the sequence, with its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueSet {
    modulus: Modulus,
    possible: BTreeSet<u64>,
}

impl ValueSet {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn possible(&self) -> &BTreeSet<u64> {
        &self.possible
    }

    pub fn impossible(&self) -> Vec<u64> {
        (0..self.modulus.m())
            .filter(|v| !self.possible.contains(v))
            .collect()
    }

    pub fn contains(&self, value: u64) -> bool {
        self.possible.contains(&value)
    }
}

/// Closes the set of row vectors reachable from the unit vector under the
/// digit matrices and collects their pairings with the initial conditions.
/// Correctness rests on the digit-0 fixed point: a vector reached by a digit
/// string with leading zeros pairs to the same value as without them, so the
/// closure sees exactly the values `A(n)` for all `n`.
///
/// Automatic schemes reach at most `states + 1` vectors and scaling schemes
/// at most `states * (m - 1) + 1`; linear schemes can be exponential, which
/// is what the node cap is for.
pub fn value_set(s: &CongruenceScheme, node_cap: usize) -> Result<ValueSet, AnalyzeError> {
    let m = s.modulus();
    let mut possible = BTreeSet::new();
    match s.kind() {
        SchemeKind::Automatic | SchemeKind::Scaling => {
            // vectors are scaled unit vectors (state, factor)
            let mut seen: HashSet<(usize, u64)> = HashSet::new();
            let mut queue: Vec<(usize, u64)> = vec![(0, 1)];
            seen.insert((0, 1));
            let mut zero_reached = false;
            while let Some((i, beta)) = queue.pop() {
                possible.insert(m.mul(beta, s.initial()[i]));
                for k in 0..m.p() {
                    match s.row(i, k).first() {
                        None => zero_reached = true,
                        Some(&(j, alpha)) => {
                            let gamma = m.mul(beta, alpha);
                            if gamma == 0 {
                                zero_reached = true;
                            } else if seen.insert((j, gamma)) {
                                if seen.len() > node_cap {
                                    return Err(AnalyzeError::NodeCapExceeded { cap: node_cap });
                                }
                                queue.push((j, gamma));
                            }
                        }
                    }
                }
            }
            if zero_reached {
                possible.insert(0);
            }
        }
        SchemeKind::Linear => {
            let mut seen: HashSet<Vec<u64>> = HashSet::new();
            let mut start = vec![0u64; s.num_states()];
            start[0] = 1;
            let mut queue = vec![start.clone()];
            seen.insert(start);
            while let Some(v) = queue.pop() {
                let mut acc = 0u64;
                for (x, c) in v.iter().zip(s.initial()) {
                    acc = m.add(acc, m.mul(*x, *c));
                }
                possible.insert(acc);
                for k in 0..m.p() {
                    let mut next = vec![0u64; s.num_states()];
                    for (i, &c) in v.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for &(j, alpha) in s.row(i, k) {
                            next[j] = m.add(next[j], m.mul(c, alpha));
                        }
                    }
                    if seen.insert(next.clone()) {
                        if seen.len() > node_cap {
                            return Err(AnalyzeError::NodeCapExceeded { cap: node_cap });
                        }
                        queue.push(next);
                    }
                }
            }
        }
    }
    Ok(ValueSet {
        modulus: m,
        possible,
    })
}

/// Derives the scheme computing `p^min(v_p(A(n)), r)` from a scaling scheme
/// for `A(n)` mod `p^r`: every transition coefficient and initial condition
/// is replaced by `p` to its valuation. Valuations add along digit paths, so
/// the rewrite is exact. The rewritten scheme is then deduplicated down to
/// its minimal automaton (scale expansion followed by Moore minimization),
/// which is small because only `r + 1` distinct factors remain.
pub fn valuation_scheme(s: &CongruenceScheme) -> Result<CongruenceScheme, AnalyzeError> {
    if s.kind() == SchemeKind::Linear {
        return Err(SchemeError::KindMismatch {
            expected: "scaling or automatic",
            got: s.kind(),
        }
        .into());
    }
    let m = s.modulus();
    let rewrite = |x: u64| m.p_to(m.valuation(x));
    let transitions = s
        .transitions()
        .iter()
        .map(|row| crate::scheme::TransitionRow {
            per_digit: row
                .per_digit
                .iter()
                .map(|entry| {
                    entry
                        .iter()
                        .map(|&(j, alpha)| (j, rewrite(alpha)))
                        .filter(|&(_, alpha)| alpha != 0)
                        .collect()
                })
                .collect(),
        })
        .collect();
    let initial = s.initial().iter().map(|&c| rewrite(c)).collect();
    let rewritten = CongruenceScheme::assemble(
        SchemeKind::Scaling,
        m,
        initial,
        transitions,
        s.meta().clone(),
        None,
    )?;
    let expanded = scaling_to_automatic(&rewritten, None)?;
    Ok(minimize(&expanded)?)
}

/// Smallest `n` with `A(n) = target`, or `None` when the value is never
/// attained.
///
/// Works on the automaton view (scaling schemes are expanded on the fly).
/// Digit strings are searched by increasing length; within one length the
/// digits are fixed most significant first, each chosen minimal subject to
/// completability, tracked with forward reachable sets and backward
/// consistent sets.
pub fn first_index(
    s: &CongruenceScheme,
    target: u64,
    max_digits: usize,
    node_cap: usize,
) -> Result<Option<BigIndex>, AnalyzeError> {
    let auto = match s.kind() {
        SchemeKind::Automatic => s.clone(),
        SchemeKind::Scaling => scaling_to_automatic(s, Some(node_cap))?,
        SchemeKind::Linear => {
            return Err(SchemeError::KindMismatch {
                expected: "automatic or scaling",
                got: s.kind(),
            }
            .into())
        }
    };
    let m = auto.modulus();
    let target = m.reduce(target);
    if !value_set(&auto, node_cap)?.contains(target) {
        return Ok(None);
    }
    if auto.initial()[0] == target {
        return Ok(Some(BigIndex(BigUint::zero())));
    }
    let p = m.p() as usize;
    let n = auto.num_states();
    let sink = n;
    let mut delta = vec![vec![sink; p]; n + 1];
    for i in 0..n {
        for k in 0..p {
            if let Some(&(j, _)) = auto.row(i, k as u64).first() {
                delta[i][k] = j;
            }
        }
    }
    let mut output = Vec::with_capacity(n + 1);
    output.extend_from_slice(auto.initial());
    output.push(0);

    let hits = Bitset::collect(n + 1, (0..=n).filter(|&i| output[i] == target));

    // forward reachable sets, one per digit depth, memoized across lengths
    let mut forward: Vec<Bitset> = vec![Bitset::collect(n + 1, [0usize])];
    for len in 1..=max_digits {
        while forward.len() < len {
            let prev = forward.last().unwrap();
            let mut next = Bitset::new(n + 1);
            for i in prev.iter() {
                for k in 0..p {
                    next.set(delta[i][k]);
                }
            }
            forward.push(next);
        }
        // backward pass: fix digits from the most significant (consumed last)
        let mut digits_msb_first: Vec<usize> = Vec::with_capacity(len);
        let mut consistent = hits.clone();
        let mut feasible = true;
        for depth in (0..len).rev() {
            // digit consumed at step depth; the most significant one (depth
            // = len-1) may not be zero
            let min_digit = usize::from(depth == len - 1);
            let mut chosen = None;
            for k in min_digit..p {
                let mut pred = Bitset::new(n + 1);
                let mut any = false;
                for i in forward[depth].iter() {
                    if consistent.get(delta[i][k]) {
                        pred.set(i);
                        any = true;
                    }
                }
                if any {
                    chosen = Some((k, pred));
                    break;
                }
            }
            match chosen {
                Some((k, pred)) => {
                    digits_msb_first.push(k);
                    consistent = pred;
                }
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible {
            debug_assert!(consistent.get(0));
            let mut value = BigUint::zero();
            let p_big = BigUint::from(m.p());
            for &d in &digits_msb_first {
                value = value * &p_big + BigUint::from(d as u64);
            }
            return Ok(Some(BigIndex(value)));
        }
    }
    Err(AnalyzeError::DigitCapExceeded { max_digits })
}

/// Chinese remainder recombination of residues over pairwise coprime prime
/// powers: the unique value modulo the product.
pub fn crt_combine(parts: &[Residue]) -> Result<(BigUint, BigUint), AnalyzeError> {
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            if a.modulus().p() == b.modulus().p() {
                return Err(AnalyzeError::NonCoprimeModuli(
                    a.modulus().m(),
                    b.modulus().m(),
                ));
            }
        }
    }
    let mut value = BigUint::zero();
    let mut modulus = BigUint::one();
    for part in parts {
        let m = part.modulus();
        let m_red = (&modulus % m.m()).to_u64().unwrap();
        let inv = m.unit_inverse(m_red).expect("coprime moduli");
        let cur = (&value % m.m()).to_u64().unwrap();
        let t = m.mul(m.sub(part.value(), cur), inv);
        value += &modulus * t;
        modulus *= m.m();
    }
    Ok((value, modulus))
}

/// One row of a residue census: how many residues modulo `p^r` the sequence
/// never attains.
#[derive(Clone, Debug)]
pub struct CensusRow {
    pub r: u32,
    /// N(r): count of residues never attained modulo p^r.
    pub missed: usize,
    /// A(r) = N(r) - p * N(r-1): misses not forced by the previous level.
    pub fresh: i64,
    /// P(r) = N(r) / p^r.
    pub proportion: f64,
    pub impossible: Vec<u64>,
}

/// Computes scaling schemes modulo `p^r` for `r = 1..=r_max` and tabulates
/// the missed-residue counts.
pub fn residue_census(
    def: &SequenceDef,
    p: u64,
    r_max: u32,
    node_cap: usize,
) -> Result<Vec<CensusRow>, AnalyzeError> {
    let mut rows: Vec<CensusRow> = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let modulus = Modulus::new(p, r).map_err(SchemeError::from)?;
        let (pp, qq) = def
            .parse(modulus)
            .map_err(|e| SchemeError::FormatError(e.to_string()))?;
        let scheme = compute_scheme(&pp, &qq, SchemeKind::Scaling, &ComputeOptions::default())?;
        let values = value_set(&scheme, node_cap)?;
        let impossible = values.impossible();
        let missed = impossible.len();
        let prev = rows.last().map_or(0, |row| row.missed);
        rows.push(CensusRow {
            r,
            missed,
            fresh: missed as i64 - p as i64 * prev as i64,
            proportion: missed as f64 / modulus.m() as f64,
            impossible,
        });
    }
    Ok(rows)
}

/// Outcome of testing one prime.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub prime: u64,
    pub zero_attained: bool,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Option<BigIndex>,
    pub states_scaling: usize,
    pub elapsed_ms: u64,
    pub error: Option<String>,
}

fn serialize_witness<S: serde::Serializer>(
    w: &Option<BigIndex>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    match w {
        Some(ix) => ser.serialize_some(&ix.to_string()),
        None => ser.serialize_none(),
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub witness: bool,
    pub jobs: usize,
    pub node_cap: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            witness: false,
            jobs: 1,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

fn scan_one(def: &SequenceDef, prime: u64, r: u32, target: u64, opts: &ScanOptions) -> ScanReport {
    let start = Instant::now();
    let mut report = ScanReport {
        prime,
        zero_attained: false,
        witness: None,
        states_scaling: 0,
        elapsed_ms: 0,
        error: None,
    };
    let mut run = || -> Result<(), AnalyzeError> {
        let modulus = Modulus::new(prime, r).map_err(SchemeError::from)?;
        let (pp, qq) = def
            .parse(modulus)
            .map_err(|e| SchemeError::FormatError(e.to_string()))?;
        let scheme = compute_scheme(&pp, &qq, SchemeKind::Scaling, &ComputeOptions::default())?;
        report.states_scaling = scheme.num_states();
        let target = modulus.reduce(target);
        if target == 0 {
            // divisibility: read it off the (much smaller) valuation scheme
            let vs = valuation_scheme(&scheme)?;
            report.zero_attained = value_set(&vs, opts.node_cap)?.contains(0);
            if report.zero_attained && opts.witness {
                let digits = vs.num_states() + 2;
                report.witness = first_index(&vs, 0, digits, opts.node_cap)?;
            }
        } else {
            report.zero_attained = value_set(&scheme, opts.node_cap)?.contains(target);
            if report.zero_attained && opts.witness {
                let digits = (scheme.num_states() + 2) * (modulus.m() as usize + 1);
                report.witness = first_index(&scheme, target, digits, opts.node_cap)?;
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        report.error = Some(e.to_string());
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    report
}

/// Tests, for every prime in `lo..=hi`, whether the sequence attains
/// `target` modulo `p^r` (target 0 scans for divisibility by `p^r`).
/// Primes run on a small worker pool; `sink` sees reports as they complete
/// and the returned list is ordered by prime.
pub fn divisibility_scan_with(
    def: &SequenceDef,
    lo: u64,
    hi: u64,
    r: u32,
    target: u64,
    opts: &ScanOptions,
    mut sink: impl FnMut(&ScanReport),
) -> Vec<ScanReport> {
    let primes: Vec<u64> = (lo.max(2)..=hi).filter(|&p| is_prime(p)).collect();
    if primes.is_empty() {
        return Vec::new();
    }
    let jobs = opts.jobs.max(1).min(primes.len());
    if jobs == 1 {
        let mut out = Vec::with_capacity(primes.len());
        for &p in &primes {
            let report = scan_one(def, p, r, target, opts);
            sink(&report);
            out.push(report);
        }
        return out;
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, ScanReport)>();
    let mut slots: Vec<Option<ScanReport>> = vec![None; primes.len()];
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            let tx = tx.clone();
            let next = &next;
            let primes = &primes;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= primes.len() {
                    break;
                }
                let report = scan_one(def, primes[idx], r, target, opts);
                if tx.send((idx, report)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (idx, report) in rx {
            sink(&report);
            slots[idx] = Some(report);
        }
    });
    slots.into_iter().map(|r| r.expect("all primes done")).collect()
}

pub fn divisibility_scan(
    def: &SequenceDef,
    lo: u64,
    hi: u64,
    r: u32,
    target: u64,
    opts: &ScanOptions,
) -> Vec<ScanReport> {
    divisibility_scan_with(def, lo, hi, r, target, opts, |_| {})
}

/// A tiny fixed-size bitset over automaton nodes.
#[derive(Clone, PartialEq, Eq)]
struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn collect(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Bitset::new(len);
        for i in items {
            set.set(i);
        }
        set
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn built(seq: &str, p: u64, r: u32, kind: SchemeKind) -> CongruenceScheme {
        let m = Modulus::new(p, r).unwrap();
        let (pp, qq) = catalog::builtin(seq).unwrap().parse(m).unwrap();
        compute_scheme(&pp, &qq, kind, &ComputeOptions::default()).unwrap()
    }

    #[test]
    fn big_index_parsing() {
        assert_eq!(
            "10^100".parse::<BigIndex>().unwrap().0,
            BigUint::from(10u32).pow(100)
        );
        assert_eq!("35".parse::<BigIndex>().unwrap().0, BigUint::from(35u32));
        assert!("10^".parse::<BigIndex>().is_err());
        assert!("-3".parse::<BigIndex>().is_err());
    }

    #[test]
    fn nth_term_catalan_35() {
        for kind in [SchemeKind::Linear, SchemeKind::Scaling, SchemeKind::Automatic] {
            let s = built("catalan", 3, 1, kind);
            assert_eq!(nth_term(&s, &BigIndex::from_u64(35)).value(), 1);
            assert_eq!(
                nth_term(&s, &BigIndex::from_u64(0)).value(),
                s.initial()[0]
            );
        }
    }

    #[test]
    fn value_set_catalan_mod4() {
        let s = built("catalan", 2, 2, SchemeKind::Scaling);
        let values = value_set(&s, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(values.impossible(), vec![3]);
        let lin = built("catalan", 2, 2, SchemeKind::Linear);
        assert_eq!(value_set(&lin, DEFAULT_NODE_CAP).unwrap(), values);
    }

    #[test]
    fn node_cap_triggers() {
        let s = built("motzkin", 2, 3, SchemeKind::Scaling);
        assert!(matches!(
            value_set(&s, 3),
            Err(AnalyzeError::NodeCapExceeded { cap: 3 })
        ));
    }

    #[test]
    fn first_index_basics() {
        let s = built("catalan", 2, 2, SchemeKind::Scaling);
        // target = initial value -> index 0
        let zero = first_index(&s, 1, 64, DEFAULT_NODE_CAP).unwrap();
        assert_eq!(zero, Some(BigIndex::from_u64(0)));
        // 3 is never attained mod 4
        assert_eq!(first_index(&s, 3, 64, DEFAULT_NODE_CAP).unwrap(), None);
        // C(2) = 2 is the first index with value 2
        assert_eq!(
            first_index(&s, 2, 64, DEFAULT_NODE_CAP).unwrap(),
            Some(BigIndex::from_u64(2))
        );
    }

    #[test]
    fn first_index_agrees_with_enumeration() {
        let s = built("motzkin", 2, 3, SchemeKind::Scaling);
        let auto = scaling_to_automatic(&s, None).unwrap();
        for target in 0..8u64 {
            let got = first_index(&auto, target, 64, DEFAULT_NODE_CAP).unwrap();
            let brute = (0..5000u64)
                .find(|&n| nth_term(&auto, &BigIndex::from_u64(n)).value() == target);
            match (got, brute) {
                (Some(ix), Some(n)) => assert_eq!(ix, BigIndex::from_u64(n), "target {target}"),
                (None, None) => {}
                (got, brute) => {
                    panic!("target {target}: first_index {got:?} vs enumeration {brute:?}")
                }
            }
        }
    }

    #[test]
    fn crt_examples() {
        let m8 = Modulus::new(2, 3).unwrap();
        let m125 = Modulus::new(5, 3).unwrap();
        let (v, m) = crt_combine(&[m8.residue(3), m125.residue(62)]).unwrap();
        assert_eq!(v, BigUint::from(187u32));
        assert_eq!(m, BigUint::from(1000u32));

        let m2 = Modulus::new(2, 1).unwrap();
        let m3 = Modulus::new(3, 1).unwrap();
        let (v, m) = crt_combine(&[m2.residue(0), m3.residue(0)]).unwrap();
        assert_eq!((v, m), (BigUint::zero(), BigUint::from(6u32)));
        let (v, _) = crt_combine(&[m2.residue(1), m3.residue(2)]).unwrap();
        assert_eq!(v, BigUint::from(5u32));

        assert!(matches!(
            crt_combine(&[m2.residue(1), m8.residue(3)]),
            Err(AnalyzeError::NonCoprimeModuli(2, 8))
        ));
    }

    #[test]
    fn crt_output_reduces_to_inputs() {
        let m8 = Modulus::new(2, 3).unwrap();
        let m27 = Modulus::new(3, 3).unwrap();
        let m5 = Modulus::new(5, 1).unwrap();
        let parts = [m8.residue(5), m27.residue(20), m5.residue(3)];
        let (v, m) = crt_combine(&parts).unwrap();
        assert_eq!(m, BigUint::from(8u32 * 27 * 5));
        for part in &parts {
            assert_eq!(
                (&v % part.modulus().m()).to_u64().unwrap(),
                part.value()
            );
        }
    }
}
