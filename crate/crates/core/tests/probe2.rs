// scratch probe: structure of the Motzkin mod 169 scaling states

use ctscheme::laurent::{canonical_fold, detect_symmetries, LaurentPoly};
use ctscheme::modring::Modulus;
use ctscheme::scheme::{compute_scheme, ComputeOptions, SchemeKind};
use ctscheme::builtin;

fn solve_prop(a: &LaurentPoly, b: &LaurentPoly) -> Option<u64> {
    // align over union of supports
    let m = a.modulus();
    let mut support: Vec<_> = a.terms().map(|(mo, _)| mo.clone()).collect();
    support.extend(b.terms().map(|(mo, _)| mo.clone()));
    support.sort();
    support.dedup();
    let av: Vec<u64> = support.iter().map(|mo| a.coefficient(mo)).collect();
    let bv: Vec<u64> = support.iter().map(|mo| b.coefficient(mo)).collect();
    m.solve_scalar_multiple(&av, &bv)
}

#[test]
fn audit_motzkin_169_scaling() {
    let m = Modulus::new(13, 2).unwrap();
    let (p, q) = builtin("motzkin").unwrap().parse(m).unwrap();
    let s = compute_scheme(&p, &q, SchemeKind::Scaling, &ComputeOptions::default()).unwrap();
    let c = s.construction().unwrap();
    let class1: Vec<&LaurentPoly> = c
        .states
        .iter()
        .filter(|st| st.p_index == 1)
        .map(|st| &st.q)
        .collect();
    println!("class-1 states: {}", class1.len());
    let mut missed = 0;
    for j in 1..class1.len() {
        for i in 0..j {
            if solve_prop(class1[j], class1[i]).is_some() {
                missed += 1;
                println!("MISSED MATCH: state {j} = alpha * state {i}");
            }
        }
    }
    println!("missed matches: {missed}");

    // canonical family fold(Lambda[P^j Q]) for j < 169, up to scaling
    let sym = detect_symmetries(&p).unwrap();
    let mut reps: Vec<LaurentPoly> = Vec::new();
    let mut pk = q.clone();
    for _j in 0..169u64 {
        let lam = canonical_fold(&pk.cartier(13), &sym);
        if !lam.is_zero() && !reps.iter().any(|r| solve_prop(&lam, r).is_some()) {
            reps.push(lam);
        }
        pk = pk.multiply(&p).unwrap();
    }
    println!("distinct classes among fold(Lambda[P^j Q]), j<169: {}", reps.len());

    // extend with depth-2 elements
    let p13 = p.power(13);
    let mut frontier = reps.clone();
    let mut all = reps.clone();
    for _round in 0..6 {
        let mut next = Vec::new();
        for g in &frontier {
            let mut u = g.clone();
            for k in 0..13u64 {
                if k > 0 {
                    u = u.multiply(&p13).unwrap();
                }
                let lam = canonical_fold(&u.cartier(13), &sym);
                if !lam.is_zero() && !all.iter().any(|r| solve_prop(&lam, r).is_some()) {
                    all.push(lam.clone());
                    next.push(lam);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    println!("closure size (depth >= 1): {}", all.len());
}

#[test]
fn scaling_counts_small_primes() {
    for pr in [3u64, 5, 7, 11, 13] {
        let m = Modulus::new(pr, 2).unwrap();
        let (p, q) = builtin("motzkin").unwrap().parse(m).unwrap();
        let s = compute_scheme(&p, &q, SchemeKind::Scaling, &ComputeOptions::default()).unwrap();
        println!("motzkin scaling mod {pr}^2: {}", s.num_states());
    }
}
