//! Iterative state discovery.
//!
//! Starting from `A_0(n) = ct[P^n Q]`, each pair (state, digit) is rewritten
//! as `ct[Phat^n Qhat]` and matched against the existing states sharing the
//! same table entry `Phat`. The matching rule is what separates the three
//! scheme kinds:
//!
//! * automatic: `Qhat` must equal an existing weight exactly;
//! * scaling: `Qhat` must be a scalar multiple of an existing weight;
//! * linear: `Qhat` is reduced against the span of the existing weights and
//!   the reduction remainder, if nonzero, becomes the new state.
//!
//! States are processed first-in-first-out with digits ascending, and the
//! first matching state in creation order wins, so the result is fully
//! deterministic.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::laurent::{canonical_fold, detect_symmetries, LaurentPoly, Monomial, SymmetryGroup};
use crate::modring::{HowellBasis, Modulus};
use crate::polyparse;

use super::{
    degree_bound, CongruenceScheme, ConstructionData, SchemeError, SchemeKind, SchemeMeta,
    SchemeState, SparseRow, TransitionRow,
};

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    /// Fold state weights onto canonical representatives of their orbits
    /// under the symmetries of `P`. Folding shrinks schemes (often
    /// substantially) without changing any value of the sequence.
    pub use_symmetry: bool,
    /// Abort with `StateCapExceeded` when discovery would exceed this count.
    pub max_states: Option<usize>,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            use_symmetry: true,
            max_states: None,
        }
    }
}

struct LinWorkspace {
    columns: HashMap<Monomial, usize>,
    column_order: Vec<Monomial>,
    basis: HowellBasis,
    /// Global state index of each inserted source row.
    member_states: Vec<usize>,
}

impl LinWorkspace {
    fn new(modulus: Modulus) -> Self {
        LinWorkspace {
            columns: HashMap::new(),
            column_order: Vec::new(),
            basis: HowellBasis::new(modulus, 0),
            member_states: Vec::new(),
        }
    }

    fn register_columns(&mut self, q: &LaurentPoly) {
        for (mono, _) in q.terms() {
            if !self.columns.contains_key(mono) {
                self.columns.insert(mono.clone(), self.column_order.len());
                self.column_order.push(mono.clone());
            }
        }
        if self.column_order.len() > self.basis.width() {
            self.basis.grow_width(self.column_order.len());
        }
    }

    fn vector_of(&self, q: &LaurentPoly) -> Vec<u64> {
        let mut v = vec![0u64; self.basis.width()];
        for (mono, c) in q.terms() {
            v[self.columns[mono]] = c;
        }
        v
    }

    fn poly_of(&self, v: &[u64], nvars: usize, modulus: Modulus) -> LaurentPoly {
        LaurentPoly::from_terms(
            nvars,
            modulus,
            v.iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(i, &c)| (self.column_order[i].clone(), c)),
        )
    }
}

enum MatchIndex {
    /// weight hash -> candidate states, per table entry
    Automatic(HashMap<(usize, u64), SmallVec<[usize; 2]>>),
    /// Value prefixes of the states, aligned with the state list. Scaling
    /// schemes match up to equality of the state *sequences*, with a value
    /// prefix as the search key and the advance-orbit certificate as proof.
    Scaling { prefixes: Vec<Vec<u64>> },
    Linear(Vec<LinWorkspace>),
}

/// Length of the value prefix used to discover scaling matches. Digits of
/// indices below this bound stay below it as well, which keeps the per-class
/// digit power cache small for every prime.
const PREFIX_LEN: u64 = 32;

/// Node budget for one zero-sequence certificate; exceeding it conservatively
/// rejects the merge (extra states, never wrong values).
const CERTIFY_CAP: usize = 100_000;

pub struct SchemeBuilder {
    modulus: Modulus,
    kind: SchemeKind,
    opts: ComputeOptions,
    sym: SymmetryGroup,
    input_p: LaurentPoly,
    input_q: LaurentPoly,
    ptable: Vec<LaurentPoly>,
    /// Memoized per table entry: index of the collapsed p-th power and how
    /// many Cartier steps accompany it.
    padvance: Vec<Option<(usize, u32)>>,
    states: Vec<SchemeState>,
    rows: Vec<TransitionRow>,
    index: MatchIndex,
    /// Per table entry: powers `P_c^k` for the digits needed by value walks.
    digit_powers: Vec<Vec<LaurentPoly>>,
    /// Weights certified to generate the zero sequence, keyed by table entry
    /// and unit-normalized weight.
    zero_weights: std::collections::HashSet<(usize, LaurentPoly)>,
    /// Ceiling for the largest absolute exponent of any state weight.
    bound_star: u64,
    /// Per-variable (upper, lower) ceilings, asserted only without folding
    /// (folding may move degree between the two sides of a variable).
    per_side_bounds: Option<Vec<(u64, u64)>>,
}

impl SchemeBuilder {
    pub fn new(
        p: &LaurentPoly,
        q: &LaurentPoly,
        kind: SchemeKind,
        opts: ComputeOptions,
    ) -> Result<Self, SchemeError> {
        if p.nvars() != q.nvars() || p.modulus() != q.modulus() {
            return Err(crate::laurent::LaurentError::ContextMismatch.into());
        }
        if p.is_zero() || q.is_zero() {
            return Err(SchemeError::ZeroSequence);
        }
        let modulus = p.modulus();
        let sym = if opts.use_symmetry {
            detect_symmetries(p)?
        } else {
            SymmetryGroup::trivial(p.nvars())
        };
        let q0 = canonical_fold(q, &sym);
        if q0.is_zero() {
            return Err(SchemeError::ZeroSequence);
        }
        let a_star = p.degree_star()?;
        let b_star = q0.degree_star()?;
        let bound_star = degree_bound(a_star, b_star, modulus.p(), modulus.r());
        let per_side_bounds = if sym.is_trivial() {
            use crate::laurent::DegreeKind::{Lower, Upper};
            let bounds = (0..p.nvars())
                .map(|v| {
                    let up = degree_bound(
                        p.degree_stat(Upper(v)).unwrap(),
                        q0.degree_stat(Upper(v)).unwrap(),
                        modulus.p(),
                        modulus.r(),
                    );
                    let low = degree_bound(
                        p.degree_stat(Lower(v)).unwrap(),
                        q0.degree_stat(Lower(v)).unwrap(),
                        modulus.p(),
                        modulus.r(),
                    );
                    (up, low)
                })
                .collect();
            Some(bounds)
        } else {
            None
        };
        let index = match kind {
            SchemeKind::Automatic => MatchIndex::Automatic(HashMap::new()),
            SchemeKind::Scaling => MatchIndex::Scaling {
                prefixes: Vec::new(),
            },
            SchemeKind::Linear => MatchIndex::Linear(Vec::new()),
        };
        let mut builder = SchemeBuilder {
            modulus,
            kind,
            opts,
            sym,
            input_p: p.clone(),
            input_q: q.clone(),
            ptable: vec![p.clone()],
            padvance: vec![None],
            states: Vec::new(),
            rows: Vec::new(),
            index,
            digit_powers: vec![Vec::new()],
            zero_weights: std::collections::HashSet::new(),
            bound_star,
            per_side_bounds,
        };
        builder.push_state(0, q0)?;
        Ok(builder)
    }

    fn check_degrees(&self, q: &LaurentPoly) -> Result<(), SchemeError> {
        let star = q.degree_star().expect("state weights are nonzero") as u64;
        if star > self.bound_star {
            return Err(SchemeError::InvariantViolation(format!(
                "state weight degree {star} exceeds the ceiling {}",
                self.bound_star
            )));
        }
        if let Some(bounds) = &self.per_side_bounds {
            use crate::laurent::DegreeKind::{Lower, Upper};
            for (v, &(up, low)) in bounds.iter().enumerate() {
                let u = q.degree_stat(Upper(v)).unwrap() as u64;
                let l = q.degree_stat(Lower(v)).unwrap() as u64;
                if u > up || l > low {
                    return Err(SchemeError::InvariantViolation(format!(
                        "state weight degrees ({u}, {l}) in variable {v} exceed ({up}, {low})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Appends a state, indexing it for matching. `q` must already be folded
    /// (and, for scaling schemes, normalized).
    fn push_state(&mut self, p_index: usize, q: LaurentPoly) -> Result<usize, SchemeError> {
        if let Some(cap) = self.opts.max_states {
            if self.states.len() >= cap {
                return Err(SchemeError::StateCapExceeded { cap });
            }
        }
        self.check_degrees(&q)?;
        let id = self.states.len();
        let prefix = match self.kind {
            SchemeKind::Scaling => Some(self.weight_prefix(p_index, &q)?),
            _ => None,
        };
        match &mut self.index {
            MatchIndex::Automatic(map) => {
                map.entry((p_index, q.hash_value())).or_default().push(id);
            }
            MatchIndex::Scaling { prefixes } => {
                prefixes.push(prefix.expect("computed above"));
            }
            MatchIndex::Linear(classes) => {
                while classes.len() <= p_index {
                    classes.push(LinWorkspace::new(self.modulus));
                }
                let ws = &mut classes[p_index];
                ws.register_columns(&q);
                let v = ws.vector_of(&q);
                ws.basis.add_source_reduced(v);
                ws.member_states.push(id);
            }
        }
        self.states.push(SchemeState { p_index, q });
        Ok(id)
    }

    /// Collapsed p-th power of a table entry: the new table index and the
    /// number of Cartier steps every weight advanced past it must take.
    fn class_advance(&mut self, p_index: usize) -> Result<(usize, u32), SchemeError> {
        if let Some(hit) = self.padvance[p_index] {
            return Ok(hit);
        }
        let p = self.modulus.p();
        let mut t = self.ptable[p_index].power(p);
        let mut cartier_steps = 0;
        while let Some(collapsed) = t.collapse_pth_roots(p) {
            if collapsed == t {
                // constant polynomials collapse to themselves
                break;
            }
            t = collapsed;
            cartier_steps += 1;
        }
        let next = match self.ptable.iter().position(|f| *f == t) {
            Some(i) => i,
            None => {
                self.ptable.push(t);
                self.padvance.push(None);
                self.digit_powers.push(Vec::new());
                if self.ptable.len() as u64 > self.modulus.r() as u64 {
                    return Err(SchemeError::InvariantViolation(format!(
                        "P-table grew past r = {}",
                        self.modulus.r()
                    )));
                }
                self.ptable.len() - 1
            }
        };
        self.padvance[p_index] = Some((next, cartier_steps));
        Ok((next, cartier_steps))
    }

    /// The advanced pair for `A_i(pn + k)`: the table index of the collapsed
    /// `P_i^p` together with the folded weight `Qhat`.
    pub fn advance_state(
        &mut self,
        state: usize,
        digit: u64,
    ) -> Result<(usize, LaurentPoly), SchemeError> {
        let p_index = self.states[state].p_index;
        let q = self.states[state].q.clone();
        self.advance_weight(p_index, digit, &q)
    }

    /// One advance applied to an arbitrary weight at a table entry.
    fn advance_weight(
        &mut self,
        p_index: usize,
        digit: u64,
        weight: &LaurentPoly,
    ) -> Result<(usize, LaurentPoly), SchemeError> {
        let (next, cartier_steps) = self.class_advance(p_index)?;
        let mut u = self.digit_power(p_index, digit)?.multiply(weight)?;
        for _ in 0..cartier_steps {
            u = u.cartier(self.modulus.p());
        }
        Ok((next, canonical_fold(&u, &self.sym)))
    }

    fn digit_power(&mut self, p_index: usize, digit: u64) -> Result<LaurentPoly, SchemeError> {
        let powers = &mut self.digit_powers[p_index];
        while (powers.len() as u64) <= digit {
            let next = match powers.last() {
                None => LaurentPoly::one(self.ptable[p_index].nvars(), self.modulus),
                Some(prev) => prev.multiply(&self.ptable[p_index])?,
            };
            powers.push(next);
        }
        Ok(self.digit_powers[p_index][digit as usize].clone())
    }

    /// `ct[P_c^n w]` for a small index, by the digit walk.
    fn weight_value(
        &mut self,
        p_index: usize,
        weight: &LaurentPoly,
        n: u64,
    ) -> Result<u64, SchemeError> {
        let p = self.modulus.p();
        let mut class = p_index;
        let mut w = weight.clone();
        let mut n = n;
        while n > 0 {
            let (next, advanced) = self.advance_weight(class, n % p, &w)?;
            class = next;
            w = advanced;
            n /= p;
            if w.is_zero() {
                return Ok(0);
            }
        }
        Ok(w.constant_term().value())
    }

    /// The first values of the sequence generated by a weight; the search
    /// key for sequence-level matching.
    fn weight_prefix(
        &mut self,
        p_index: usize,
        weight: &LaurentPoly,
    ) -> Result<Vec<u64>, SchemeError> {
        (0..PREFIX_LEN)
            .map(|n| self.weight_value(p_index, weight, n))
            .collect()
    }

    /// All `p` advances of one weight, sharing the incremental digit powers
    /// of the sweep instead of the cache (certificates visit every digit, and
    /// for large primes caching the high powers would cost real memory).
    fn advance_children(
        &mut self,
        p_index: usize,
        weight: &LaurentPoly,
    ) -> Result<(usize, Vec<LaurentPoly>), SchemeError> {
        let p = self.modulus.p();
        let (next, cartier_steps) = self.class_advance(p_index)?;
        let p_c = self.ptable[p_index].clone();
        let mut children = Vec::with_capacity(p as usize);
        let mut u = weight.clone();
        for k in 0..p {
            if k > 0 {
                u = u.multiply(&p_c)?;
            }
            let mut child = u.clone();
            for _ in 0..cartier_steps {
                child = child.cartier(p);
            }
            children.push(canonical_fold(&child, &self.sym));
        }
        Ok((next, children))
    }

    /// Proves `ct[P_c^n w] = 0` for every `n` by closing the advance-orbit of
    /// `w` and checking all constant terms vanish. Sound in both directions
    /// up to the node budget: running out of budget rejects conservatively.
    fn certify_zero(
        &mut self,
        p_index: usize,
        weight: &LaurentPoly,
    ) -> Result<bool, SchemeError> {
        let key = |p_index: usize, w: &LaurentPoly| (p_index, normal_form(w).1);
        let mut visited = std::collections::HashSet::new();
        let mut queue = vec![(p_index, weight.clone())];
        visited.insert(key(p_index, weight));
        while let Some((class, w)) = queue.pop() {
            if w.constant_term().value() != 0 {
                return Ok(false);
            }
            if self.zero_weights.contains(&key(class, &w)) {
                continue;
            }
            let (next, children) = self.advance_children(class, &w)?;
            for advanced in children {
                if advanced.is_zero() {
                    continue;
                }
                if visited.insert(key(next, &advanced)) {
                    if visited.len() > CERTIFY_CAP {
                        return Ok(false);
                    }
                    queue.push((next, advanced));
                }
            }
        }
        self.zero_weights.extend(visited);
        Ok(true)
    }

    /// Expresses `q_hat` over the states of table entry `p_index` according
    /// to the scheme kind, creating a state when nothing matches.
    fn match_or_insert(
        &mut self,
        p_index: usize,
        q_hat: LaurentPoly,
    ) -> Result<SparseRow, SchemeError> {
        match self.kind {
            SchemeKind::Automatic => {
                let key = (p_index, q_hat.hash_value());
                let cands = match &self.index {
                    MatchIndex::Automatic(map) => map.get(&key).cloned().unwrap_or_default(),
                    _ => unreachable!(),
                };
                for j in cands {
                    if self.states[j].p_index == p_index && self.states[j].q == q_hat {
                        return Ok(vec![(j, 1)]);
                    }
                }
                let id = self.push_state(p_index, q_hat)?;
                Ok(vec![(id, 1)])
            }
            SchemeKind::Scaling => {
                // Scaling states are matched as sequences: A = alpha * A_j.
                // The value prefix proposes (j, alpha) pairs; equality of
                // weights settles exact matches, and everything else must
                // pass the zero certificate for the difference weight.
                let prefix = self.weight_prefix(p_index, &q_hat)?;
                if prefix.iter().all(|&v| v == 0) && self.certify_zero(p_index, &q_hat)? {
                    return Ok(Vec::new());
                }
                for j in 0..self.states.len() {
                    if self.states[j].p_index != p_index {
                        continue;
                    }
                    let base_prefix = match &self.index {
                        MatchIndex::Scaling { prefixes } => prefixes[j].clone(),
                        _ => unreachable!(),
                    };
                    for alpha in prefix_scalars(self.modulus, &prefix, &base_prefix) {
                        let scaled = self.states[j].q.scalar_mul(alpha);
                        if scaled == q_hat {
                            return Ok(vec![(j, alpha)]);
                        }
                        let diff = q_hat.sub(&scaled)?;
                        if self.certify_zero(p_index, &diff)? {
                            return Ok(vec![(j, alpha)]);
                        }
                    }
                }
                let (unit, nf) = normal_form(&q_hat);
                let id = self.push_state(p_index, nf)?;
                Ok(vec![(id, unit)])
            }
            SchemeKind::Linear => {
                let (mut entries, rem_poly) = {
                    let classes = match &mut self.index {
                        MatchIndex::Linear(classes) => classes,
                        _ => unreachable!(),
                    };
                    while classes.len() <= p_index {
                        classes.push(LinWorkspace::new(self.modulus));
                    }
                    let ws = &mut classes[p_index];
                    ws.register_columns(&q_hat);
                    let v = ws.vector_of(&q_hat);
                    let (rem, combo) = ws.basis.reduce(v);
                    let entries: SparseRow = combo
                        .iter()
                        .enumerate()
                        .filter(|&(_, &c)| c != 0)
                        .map(|(t, &c)| (ws.member_states[t], c))
                        .collect();
                    let rem_poly = if rem.iter().any(|&c| c != 0) {
                        Some(ws.poly_of(&rem, q_hat.nvars(), self.modulus))
                    } else {
                        None
                    };
                    (entries, rem_poly)
                };
                if let Some(rem_poly) = rem_poly {
                    let id = self.push_state(p_index, rem_poly)?;
                    entries.push((id, 1));
                }
                entries.sort_by_key(|&(j, _)| j);
                Ok(entries)
            }
        }
    }

    fn process_state(&mut self, state: usize) -> Result<(), SchemeError> {
        let p = self.modulus.p();
        let p_index = self.states[state].p_index;
        let (next, cartier_steps) = self.class_advance(p_index)?;
        let p_i = self.ptable[p_index].clone();
        let mut u = self.states[state].q.clone();
        let mut per_digit = Vec::with_capacity(p as usize);
        for k in 0..p {
            if k > 0 {
                u = u.multiply(&p_i)?;
            }
            let mut u_hat = u.clone();
            for _ in 0..cartier_steps {
                u_hat = u_hat.cartier(p);
            }
            let q_hat = canonical_fold(&u_hat, &self.sym);
            let entry = if q_hat.is_zero() {
                Vec::new()
            } else {
                self.match_or_insert(next, q_hat)?
            };
            per_digit.push(entry);
        }
        debug_assert_eq!(self.rows.len(), state);
        self.rows.push(TransitionRow { per_digit });
        Ok(())
    }

    pub fn build(mut self) -> Result<CongruenceScheme, SchemeError> {
        let mut next = 0;
        while next < self.states.len() {
            self.process_state(next)?;
            next += 1;
        }
        let initial: Vec<u64> = self
            .states
            .iter()
            .map(|s| s.q.constant_term().value())
            .collect();
        let vars = polyparse::default_var_names(self.input_p.nvars());
        let meta = SchemeMeta {
            p_text: polyparse::to_text(&self.input_p, &vars),
            q_text: polyparse::to_text(&self.input_q, &vars),
            vars,
            symmetry_folded: self.opts.use_symmetry,
        };
        CongruenceScheme::assemble(
            self.kind,
            self.modulus,
            initial,
            self.rows,
            meta,
            Some(ConstructionData {
                ptable: self.ptable,
                states: self.states,
            }),
        )
    }

    pub fn states(&self) -> &[SchemeState] {
        &self.states
    }

    pub fn ptable(&self) -> &[LaurentPoly] {
        &self.ptable
    }
}

/// Splits a nonzero polynomial as `unit * nf` where the first coefficient of
/// minimal valuation in `nf` is exactly a power of `p`. Two polynomials are
/// unit multiples of each other precisely when their normal forms agree.
fn normal_form(q: &LaurentPoly) -> (u64, LaurentPoly) {
    let m = q.modulus();
    let anchor = q
        .terms()
        .enumerate()
        .map(|(i, (_, c))| (m.valuation(c), i, c))
        .min()
        .map(|(_, _, c)| c)
        .expect("nonzero polynomial");
    let (_, unit) = m.unit_part(anchor);
    if unit == 1 {
        (1, q.clone())
    } else {
        let inv = m.unit_inverse(unit).expect("unit part");
        (unit, q.scalar_mul(inv))
    }
}

/// All nonzero scalars `alpha` with `target = alpha * base` componentwise,
/// smallest first. Anchored like `solve_scalar_multiple` but keeping every
/// verifying lift, since for sequence matching each one is a separate
/// candidate to certify.
fn prefix_scalars(m: Modulus, target: &[u64], base: &[u64]) -> SmallVec<[u64; 2]> {
    let mut out = SmallVec::new();
    let Some(anchor) = (0..base.len())
        .filter(|&i| base[i] != 0)
        .min_by_key(|&i| (m.valuation(base[i]), i))
    else {
        return out; // base prefix all zero: nothing to anchor on
    };
    let (s, u) = m.unit_part(base[anchor]);
    let p_s = m.p().pow(s);
    if target[anchor] % p_s != 0 {
        return out;
    }
    let u_inv = m.unit_inverse(u).expect("unit part");
    let step = m.m() / p_s;
    let mut alpha = m.mul(target[anchor] / p_s, u_inv) % step;
    if alpha == 0 {
        alpha += step;
        if alpha >= m.m() {
            return out;
        }
    }
    loop {
        if target.iter().zip(base).all(|(&t, &b)| m.mul(alpha, b) == t) {
            out.push(alpha);
        }
        match alpha.checked_add(step) {
            Some(next) if next < m.m() => alpha = next,
            _ => return out,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::modring::Modulus;
    use crate::scheme::compute_scheme;

    fn modulus(p: u64, r: u32) -> Modulus {
        Modulus::new(p, r).unwrap()
    }

    fn built(seq: &str, p: u64, r: u32, kind: SchemeKind) -> CongruenceScheme {
        let m = modulus(p, r);
        let (pp, qq) = catalog::builtin(seq).unwrap().parse(m).unwrap();
        compute_scheme(&pp, &qq, kind, &ComputeOptions::default()).unwrap()
    }

    #[test]
    fn catalan_mod3_linear_matches_known_transitions() {
        let s = built("catalan", 3, 1, SchemeKind::Linear);
        assert_eq!(s.num_states(), 2);
        assert_eq!(s.initial(), &[1, 0]);
        let rows: Vec<Vec<SparseRow>> =
            s.transitions().iter().map(|r| r.per_digit.clone()).collect();
        assert_eq!(
            rows,
            vec![
                vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, 1)], vec![(0, 2), (1, 1)]],
                vec![vec![], vec![(0, 1), (1, 1)], vec![(0, 1), (1, 2)]],
            ]
        );
    }

    #[test]
    fn catalan_mod3_scaling_matches_known_transitions() {
        let s = built("catalan", 3, 1, SchemeKind::Scaling);
        assert_eq!(s.num_states(), 3);
        assert_eq!(s.initial(), &[1, 1, 1]);
        let rows: Vec<Vec<SparseRow>> =
            s.transitions().iter().map(|r| r.per_digit.clone()).collect();
        assert_eq!(
            rows,
            vec![
                vec![vec![(1, 1)], vec![(1, 1)], vec![(2, 2)]],
                vec![vec![(1, 1)], vec![(1, 2)], vec![]],
                vec![vec![(1, 1)], vec![], vec![(2, 1)]],
            ]
        );
    }

    #[test]
    fn catalan_mod3_automatic_matches_known_transitions() {
        let s = built("catalan", 3, 1, SchemeKind::Automatic);
        assert_eq!(s.num_states(), 4);
        assert_eq!(s.initial(), &[1, 1, 2, 2]);
        let rows: Vec<Vec<SparseRow>> =
            s.transitions().iter().map(|r| r.per_digit.clone()).collect();
        assert_eq!(
            rows,
            vec![
                vec![vec![(1, 1)], vec![(1, 1)], vec![(2, 1)]],
                vec![vec![(1, 1)], vec![(3, 1)], vec![]],
                vec![vec![(3, 1)], vec![], vec![(2, 1)]],
                vec![vec![(3, 1)], vec![(1, 1)], vec![]],
            ]
        );
    }

    #[test]
    fn advance_state_motzkin_mod4_symmetry_fold() {
        let m = modulus(2, 2);
        let (p, q) = catalog::builtin("motzkin").unwrap().parse(m).unwrap();
        let mut b =
            SchemeBuilder::new(&p, &q, SchemeKind::Automatic, ComputeOptions::default()).unwrap();
        let (p_idx, q_hat) = b.advance_state(0, 1).unwrap();
        // P^2 does not collapse modulo 4, so a second table entry appears
        assert_eq!(p_idx, 1);
        assert_eq!(b.ptable().len(), 2);
        let expected =
            crate::polyparse::parse_laurent("1 + x - x^2 - x^3", &["x"], m).unwrap();
        assert_eq!(q_hat, expected);
    }

    #[test]
    fn advance_state_catalan_mod4_collapses() {
        let m = modulus(2, 2);
        let (p, q) = catalog::builtin("catalan").unwrap().parse(m).unwrap();
        let mut b =
            SchemeBuilder::new(&p, &q, SchemeKind::Automatic, ComputeOptions::default()).unwrap();
        let (p_idx, _) = b.advance_state(0, 0).unwrap();
        assert_eq!(p_idx, 0);
        assert_eq!(b.ptable().len(), 1);
    }

    #[test]
    fn mod_p_advance_keeps_table_singleton() {
        for seq in ["catalan", "motzkin"] {
            for p in [2, 3, 5, 7] {
                let s = built(seq, p, 1, SchemeKind::Linear);
                assert_eq!(s.construction().unwrap().ptable.len(), 1, "{seq} mod {p}");
            }
        }
    }

    #[test]
    fn state_cap_is_enforced() {
        let m = modulus(2, 3);
        let (p, q) = catalog::builtin("motzkin").unwrap().parse(m).unwrap();
        let opts = ComputeOptions {
            max_states: Some(3),
            ..Default::default()
        };
        match compute_scheme(&p, &q, SchemeKind::Automatic, &opts) {
            Err(SchemeError::StateCapExceeded { cap: 3 }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn zero_weight_rejected() {
        let m = modulus(2, 2);
        let (p, _) = catalog::builtin("motzkin").unwrap().parse(m).unwrap();
        let zero = LaurentPoly::zero(1, m);
        assert!(matches!(
            compute_scheme(&p, &zero, SchemeKind::Linear, &ComputeOptions::default()),
            Err(SchemeError::ZeroSequence)
        ));
        // folds to zero under the x -> 1/x symmetry
        let q = crate::polyparse::parse_laurent("1/x - x", &["x"], m).unwrap();
        assert!(matches!(
            compute_scheme(&p, &q, SchemeKind::Linear, &ComputeOptions::default()),
            Err(SchemeError::ZeroSequence)
        ));
    }
}
