// scratch probe: semantic scaling-equivalence classes of the mod-169 scheme

use ctscheme::modring::Modulus;
use ctscheme::scheme::{compute_scheme, ComputeOptions, SchemeKind};
use ctscheme::builtin;

#[test]
fn count_sequence_proportional_classes() {
    let m = Modulus::new(13, 2).unwrap();
    let (p, q) = builtin("motzkin").unwrap().parse(m).unwrap();
    let s = compute_scheme(&p, &q, SchemeKind::Scaling, &ComputeOptions::default()).unwrap();
    let n_states = s.num_states();
    let n_prefix = 2048usize;

    // values[i][n] = A_i(n) for n < n_prefix, by digit recursion
    let mut values = vec![vec![0u64; n_prefix]; n_states];
    for (i, v) in values.iter_mut().enumerate() {
        v[0] = s.initial()[i];
    }
    for n in 1..n_prefix {
        let (q_, k) = (n / 13, (n % 13) as u64);
        for i in 0..n_states {
            let val = match s.row(i, k).first() {
                None => 0,
                Some(&(j, alpha)) => m.mul(alpha, values[j][q_]),
            };
            values[i][n] = val;
        }
    }

    // partition by proportionality of value prefixes
    let mut class_of = vec![usize::MAX; n_states];
    let mut reps: Vec<usize> = Vec::new();
    'outer: for i in 0..n_states {
        for (c, &r) in reps.iter().enumerate() {
            // A_i = alpha * A_r for some alpha?
            if let Some(alpha) = m.solve_scalar_multiple(&values[i], &values[r]) {
                let _ = alpha;
                class_of[i] = c;
                continue 'outer;
            }
        }
        class_of[i] = reps.len();
        reps.push(i);
    }
    println!("sequence-proportional classes: {}", reps.len());

    // also try unit-only proportionality
    let mut reps_u: Vec<usize> = Vec::new();
    'outer2: for i in 0..n_states {
        for &r in reps_u.iter() {
            if let Some(alpha) = m.solve_scalar_multiple(&values[i], &values[r]) {
                if alpha % 13 != 0 {
                    continue 'outer2;
                }
            }
            if let Some(alpha) = m.solve_scalar_multiple(&values[r], &values[i]) {
                if alpha % 13 != 0 {
                    continue 'outer2;
                }
            }
        }
        reps_u.push(i);
    }
    println!("unit-proportional classes: {}", reps_u.len());
}
