// scratch probe, replaced by the real suites

use ctscheme::laurent::DegreeKind;
use ctscheme::modring::Modulus;
use ctscheme::scheme::{compute_scheme, ComputeOptions, SchemeKind};
use ctscheme::{builtin, minimize};

#[test]
fn probe_apery_ptable() {
    let m = Modulus::new(2, 3).unwrap();
    let (p, q) = builtin("apery3").unwrap().parse(m).unwrap();
    println!("P terms: {}", p.num_terms());
    let p2 = p.power(2);
    println!("P^2 terms: {}", p2.num_terms());
    println!("P^2 collapses: {}", p2.collapse_pth_roots(2).is_some());
    let odd: usize = p2
        .terms()
        .filter(|(mono, _)| mono.exponents().iter().any(|e| e % 2 != 0))
        .count();
    println!("P^2 odd-exponent terms: {odd}");
    let sym = ctscheme::detect_symmetries(&p).unwrap();
    println!("symmetry group order: {}", sym.elements().len());

    let s = compute_scheme(&p, &q, SchemeKind::Automatic, &ComputeOptions::default()).unwrap();
    println!("automatic states: {}", s.num_states());
    let c = s.construction().unwrap();
    println!("ptable len: {}", c.ptable.len());
    let mut per_class = vec![0usize; c.ptable.len()];
    for st in &c.states {
        per_class[st.p_index] += 1;
    }
    println!("states per class: {per_class:?}");
    let min = minimize(&s).unwrap();
    println!("minimized: {}", min.num_states());
}

#[test]
fn probe_motzkin_169() {
    let m = Modulus::new(13, 2).unwrap();
    let (p, q) = builtin("motzkin").unwrap().parse(m).unwrap();
    let s = compute_scheme(&p, &q, SchemeKind::Scaling, &ComputeOptions::default()).unwrap();
    let c = s.construction().unwrap();
    let mut per_class = vec![0usize; c.ptable.len()];
    for st in &c.states {
        per_class[st.p_index] += 1;
    }
    println!("scaling states: {} per class {per_class:?}", s.num_states());
    for (i, f) in c.ptable.iter().enumerate() {
        println!(
            "ptable[{i}]: {} terms, deg {}",
            f.num_terms(),
            f.degree_stat(DegreeKind::Upper(0)).unwrap()
        );
    }
    // how many states have non-unit content (all coefficients divisible by 13)?
    let mut divisible = 0;
    for st in &c.states {
        if st.q.terms().all(|(_, c)| c % 13 == 0) {
            divisible += 1;
        }
    }
    println!("states with 13 | content: {divisible}");
}
