//! Scheme transformations: scale expansion and Moore minimization.

use std::collections::HashMap;

use super::{
    CongruenceScheme, ConstructionData, SchemeError, SchemeKind, SchemeState, SparseRow,
    TransitionRow,
};

/// Expands a scaling scheme into an automatic one whose states are the
/// reachable scaled copies `alpha * A_j`, discovered breadth-first from
/// `(0, 1)` with digits ascending.
pub fn scaling_to_automatic(
    s: &CongruenceScheme,
    cap: Option<usize>,
) -> Result<CongruenceScheme, SchemeError> {
    match s.kind() {
        SchemeKind::Automatic => return Ok(s.clone()),
        SchemeKind::Scaling => {}
        other => {
            return Err(SchemeError::KindMismatch {
                expected: "scaling",
                got: other,
            })
        }
    }
    let m = s.modulus();
    let mut pair_ids: HashMap<(usize, u64), usize> = HashMap::new();
    let mut pairs: Vec<(usize, u64)> = vec![(0, 1)];
    pair_ids.insert((0, 1), 0);
    let mut rows: Vec<TransitionRow> = Vec::new();
    let mut next = 0;
    while next < pairs.len() {
        let (j, beta) = pairs[next];
        next += 1;
        let mut per_digit = Vec::with_capacity(m.p() as usize);
        for k in 0..m.p() {
            let entry: SparseRow = match s.row(j, k).first() {
                None => Vec::new(),
                Some(&(j2, alpha)) => {
                    let gamma = m.mul(beta, alpha);
                    if gamma == 0 {
                        Vec::new()
                    } else {
                        let key = (j2, gamma);
                        let id = match pair_ids.get(&key) {
                            Some(&id) => id,
                            None => {
                                let id = pairs.len();
                                if let Some(cap) = cap {
                                    if id >= cap {
                                        return Err(SchemeError::StateCapExceeded { cap });
                                    }
                                }
                                pair_ids.insert(key, id);
                                pairs.push(key);
                                id
                            }
                        };
                        vec![(id, 1)]
                    }
                }
            };
            per_digit.push(entry);
        }
        rows.push(TransitionRow { per_digit });
    }
    let initial: Vec<u64> = pairs
        .iter()
        .map(|&(j, beta)| m.mul(beta, s.initial()[j]))
        .collect();
    let construction = s.construction().map(|c| ConstructionData {
        ptable: c.ptable.clone(),
        states: pairs
            .iter()
            .map(|&(j, beta)| SchemeState {
                p_index: c.states[j].p_index,
                q: c.states[j].q.scalar_mul(beta),
            })
            .collect(),
    });
    CongruenceScheme::assemble(
        SchemeKind::Automatic,
        m,
        initial,
        rows,
        s.meta().clone(),
        construction,
    )
}

/// Moore minimization of an automatic scheme.
///
/// The scheme is read as a Moore machine over the digit alphabet: its states
/// plus an implicit zero sink, with the initial conditions as outputs (sink
/// output 0). The partition starts from output values and is refined by
/// per-digit successor blocks until stable; the quotient is renumbered
/// breadth-first from the initial state with digits ascending, which makes
/// the result canonical. The sink's block is re-encoded as empty right-hand
/// sides rather than a state.
pub fn minimize(s: &CongruenceScheme) -> Result<CongruenceScheme, SchemeError> {
    if s.kind() != SchemeKind::Automatic {
        return Err(SchemeError::KindMismatch {
            expected: "automatic",
            got: s.kind(),
        });
    }
    let m = s.modulus();
    let p = m.p() as usize;
    let n = s.num_states();
    let sink = n;

    // delta over states 0..n plus the sink
    let mut delta = vec![vec![sink; p]; n + 1];
    for i in 0..n {
        for k in 0..p {
            if let Some(&(j, _)) = s.row(i, k as u64).first() {
                delta[i][k] = j;
            }
        }
    }
    let mut output = Vec::with_capacity(n + 1);
    output.extend_from_slice(s.initial());
    output.push(0);

    // initial partition by output value
    let mut block = vec![0usize; n + 1];
    let mut nblocks = {
        let mut ids: HashMap<u64, usize> = HashMap::new();
        for (i, &out) in output.iter().enumerate() {
            let next = ids.len();
            block[i] = *ids.entry(out).or_insert(next);
        }
        ids.len()
    };

    // refine until the partition stabilizes
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next_block = vec![0usize; n + 1];
        for i in 0..=n {
            let mut sig = Vec::with_capacity(p + 1);
            sig.push(block[i]);
            for k in 0..p {
                sig.push(block[delta[i][k]]);
            }
            let fresh = ids.len();
            next_block[i] = *ids.entry(sig).or_insert(fresh);
        }
        let count = ids.len();
        if count == nblocks {
            block = next_block;
            break;
        }
        nblocks = count;
        block = next_block;
    }

    let sink_block = block[sink];
    if block[0] == sink_block {
        // the sequence is identically zero; keep a single dead state
        let rows = vec![TransitionRow {
            per_digit: vec![Vec::new(); p],
        }];
        return CongruenceScheme::assemble(
            SchemeKind::Automatic,
            m,
            vec![0],
            rows,
            s.meta().clone(),
            None,
        );
    }

    // representative (smallest real state) per block
    let mut rep = vec![usize::MAX; nblocks];
    for i in 0..n {
        if rep[block[i]] == usize::MAX {
            rep[block[i]] = i;
        }
    }

    // canonical breadth-first renumbering from the initial block
    let mut new_id = vec![usize::MAX; nblocks];
    let mut order = Vec::new();
    new_id[block[0]] = 0;
    order.push(block[0]);
    let mut head = 0;
    while head < order.len() {
        let b = order[head];
        head += 1;
        let r = rep[b];
        for k in 0..p {
            let tb = block[delta[r][k]];
            if tb != sink_block && new_id[tb] == usize::MAX {
                new_id[tb] = order.len();
                order.push(tb);
            }
        }
    }

    let mut rows = Vec::with_capacity(order.len());
    let mut initial = Vec::with_capacity(order.len());
    for &b in &order {
        let r = rep[b];
        let mut per_digit = Vec::with_capacity(p);
        for k in 0..p {
            let tb = block[delta[r][k]];
            if tb == sink_block {
                per_digit.push(Vec::new());
            } else {
                per_digit.push(vec![(new_id[tb], 1)]);
            }
        }
        rows.push(TransitionRow { per_digit });
        initial.push(output[r]);
    }
    let construction = s.construction().map(|c| ConstructionData {
        ptable: c.ptable.clone(),
        states: order
            .iter()
            .map(|&b| {
                let r = rep[b];
                SchemeState {
                    p_index: c.states[r].p_index,
                    q: c.states[r].q.clone(),
                }
            })
            .collect(),
    });
    CongruenceScheme::assemble(
        SchemeKind::Automatic,
        m,
        initial,
        rows,
        s.meta().clone(),
        construction,
    )
}
