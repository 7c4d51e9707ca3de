use cartan_odd_core::*;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("m25");
    match which {
        "m25" => {
            let field = PrimeField::new(5).unwrap();
            let t = Instant::now();
            let ca = contact::build_m(2, field).unwrap();
            println!("build m(2,5): {:?} dim {}", t.elapsed(), ca.lsa.dim());
            let t = Instant::now();
            let jac = ca.lsa.verify_jacobi();
            println!("jacobi: {:?} violations {}", t.elapsed(), jac.len());
            let t = Instant::now();
            let res = ca.lsa.verify_restricted();
            println!("restricted: {:?} violations {}", t.elapsed(), res.len());
        }
        "m17" => {
            let field = PrimeField::new(7).unwrap();
            let t = Instant::now();
            let ca = contact::build_m(1, field).unwrap();
            println!("build m(1,7): {:?} dim {}", t.elapsed(), ca.lsa.dim());
            let t = Instant::now();
            match chars::search_char(&ca, CharTarget::DeltaInvertible, 5, 40000).unwrap() {
                SearchOutcome::Found { chi, evaluations, description, delta } => {
                    println!("delta FOUND after {evaluations} evals: {description} ({:?})", t.elapsed());
                    let w = delta.unwrap();
                    println!("  h = {}, r = {}, I = {:?}, J = {:?}, c = {}", w.h, w.r, w.i_set, w.j_set, w.c);
                    let support: Vec<(usize, Fp)> = chi.values().iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, &v)| (i, v)).collect();
                    for (i, v) in support { println!("  chi({}) = {}", ca.lsa.label(i), v); }
                }
                SearchOutcome::Exhausted { evaluations, log } => {
                    println!("delta EXHAUSTED after {evaluations} evals ({:?})", t.elapsed());
                    for l in log.iter().take(5) { println!("  {l}"); }
                }
            }
        }
        "regss" => {
            let field = PrimeField::new(5).unwrap();
            let t = Instant::now();
            let ca = contact::build_m(2, field).unwrap();
            println!("build m(2,5): {:?}", t.elapsed());
            let g0 = SubAlgebra::filtration(&ca.lsa, 0);
            let chi = match chars::search_char(&ca, CharTarget::RegularSemisimple, 3, 50).unwrap() {
                SearchOutcome::Found { chi, .. } => chi,
                _ => panic!("no regss"),
            };
            let t = Instant::now();
            let pol = repn::sweep::polarization(&ca, &g0, &chi).unwrap();
            println!("polarization: {:?}; P dim {}, complement {:?}", t.elapsed(), pol.p_basis.len(), pol.complement);
            for &c in &pol.complement {
                println!("  comp: {} deg {} parity {:?}", g0.lsa.label(c), g0.lsa.degree(c), g0.lsa.parity(c));
            }
            let psis = repn::sweep::enumerate_psi(&g0, &chi, &pol, 5).unwrap();
            println!("psi count (capped 5): {}", psis.len());
            let t = Instant::now();
            let verma = repn::sweep::generalized_verma(&g0, &chi, &pol, &psis[0]).unwrap();
            println!("verma: {:?} dim {}", t.elapsed(), verma.module.dim);
            let t = Instant::now();
            let gens: Vec<usize> = (0..g0.lsa.dim()).collect();
            let head = repn::meataxe::simple_head(g0.lsa.dim(), &verma.module, &gens, 3).unwrap();
            println!("head: {:?} dim {}", t.elapsed(), head.dim);
        }
        _ => panic!("unknown"),
    }
}
