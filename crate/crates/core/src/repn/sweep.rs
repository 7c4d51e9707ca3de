//! Enumeration of simple `u_chi(g^0)`-modules as heads of induced
//! highest-weight modules.
//!
//! For a character of height `h`, a chi-isotropic restricted subalgebra
//! `P` of `g^0` is grown greedily from the filtration piece `g^{ceil(h/2)}`
//! (always isotropic) by Cartan combinations and root vectors, keeping
//! the one-dimensional weight system solvable. Every solution `psi` of
//! that system induces a generalized Verma module
//! `u_chi(g^0) (x)_{u_chi(P)} F_psi`, whose simple head the MeatAxe
//! extracts. At height <= 1 with chi vanishing on the Cartan this
//! recovers the classical baby-Verma sweep; a nonzero value on a toral
//! Cartan element has no rational weight line, and the excluded direction
//! simply moves to the free side of the induction (the companion-matrix
//! module of the Artin-Schreier algebra `F_p[t]/(t^p - t - chi(t)^p)`).

use crate::dps::Parity;
use crate::field::Fp;
use crate::linalg::{Mat, RowSpace};
use crate::lsa::{height, pmap_of_vector, Lsa, PChar};
use crate::{Error, Result};

use super::induce::{induce, validate_one_dim_rep};
use super::meataxe::simple_head;
use super::{GModule, SparseMat, SubAlgebra};

/// One head of the sweep: a certified-simple `u_chi(g^0)`-module.
#[derive(Debug, Clone)]
pub struct HeadInfo {
    pub module: GModule,
    /// The weight functional on the polarization basis.
    pub psi: Vec<Fp>,
    pub verma_dim: usize,
}

/// The polarization data: basis vectors of `P` in `g^0`-coordinates and
/// the ordered complement (unit-vector transversal).
#[derive(Debug, Clone)]
pub struct Polarization {
    pub p_basis: Vec<Vec<u8>>,
    pub complement: Vec<usize>,
}

fn chi_pairs_to_zero(g: &Lsa, chi: &PChar, v: &[u8], others: &[Vec<u8>]) -> bool {
    let field = *g.field();
    if !chi.eval(&field, &g.bracket(v, v)).is_zero() {
        return false;
    }
    others
        .iter()
        .all(|w| chi.eval(&field, &g.bracket(v, w)).is_zero())
}

/// Solves the one-dimensional weight system on `P`: unknowns on even
/// basis vectors (odd ones act by zero), equations from bracket-killing
/// and the reduced power rule. Returns `(particular, kernel basis)` or
/// `None` when inconsistent.
fn solve_psi_system(
    g: &Lsa,
    chi: &PChar,
    p_basis: &[Vec<u8>],
) -> Option<(Vec<Fp>, Vec<Vec<Fp>>)> {
    let field = *g.field();
    let unknowns: Vec<usize> = (0..p_basis.len())
        .filter(|&t| g.vector_parity(&p_basis[t]) != Some(Parity::Odd))
        .collect();
    let col_of: std::collections::BTreeMap<usize, usize> = unknowns
        .iter()
        .enumerate()
        .map(|(c, &t)| (t, c))
        .collect();
    let solver = Mat::from_rows(&field, p_basis.to_vec(), g.dim()).into_solver();
    let coords_of = |v: &[u8]| -> Option<Vec<u8>> { solver.solve(v) };
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut rhs: Vec<Fp> = Vec::new();
    // bracket killing: psi([P, P]) = 0
    for (a, va) in p_basis.iter().enumerate() {
        for vb in p_basis.iter().skip(a) {
            let br = g.bracket(va, vb);
            if br.iter().all(|&x| x == 0) {
                continue;
            }
            let coords = coords_of(&br)?;
            let mut row = vec![0u8; unknowns.len()];
            for (t, &c) in coords.iter().enumerate() {
                if c != 0 {
                    if let Some(&col) = col_of.get(&t) {
                        row[col] = c;
                    }
                    // odd coordinates are forced to zero weight anyway
                }
            }
            rows.push(row);
            rhs.push(Fp::ZERO);
        }
    }
    // power rule on even vectors: psi(x) - psi(x^[p]) = chi(x)
    for (a, va) in p_basis.iter().enumerate() {
        let Some(&acol) = col_of.get(&a) else { continue };
        let img = pmap_of_vector(g, va)?;
        let coords = coords_of(&img)?;
        let mut row = vec![0u8; unknowns.len()];
        row[acol] = 1;
        for (t, &c) in coords.iter().enumerate() {
            if c != 0 {
                if let Some(&col) = col_of.get(&t) {
                    row[col] = field.sub(Fp(row[col] as u32), Fp(c as u32)).0 as u8;
                }
            }
        }
        rows.push(row);
        // chi(x)^p = chi(x) over F_p
        rhs.push(chi.eval(&field, va));
    }
    // solve rows * psi = rhs
    let ncols = unknowns.len();
    let mut aug = Mat::zeros(&field, rows.len().max(1), ncols + 1);
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            aug.set(r, c, Fp(x as u32));
        }
        aug.set(r, ncols, rhs[r]);
    }
    let pivots = aug.rref();
    if pivots.contains(&ncols) {
        return None; // inconsistent
    }
    let mut particular = vec![Fp::ZERO; p_basis.len()];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[unknowns[pc]] = aug.get(r, ncols);
    }
    // kernel of the coefficient part
    let mut coef = Mat::zeros(&field, rows.len().max(1), ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            coef.set(r, c, Fp(x as u32));
        }
    }
    let ns = coef.nullspace();
    let kernel: Vec<Vec<Fp>> = (0..ns.nrows())
        .map(|k| {
            let mut v = vec![Fp::ZERO; p_basis.len()];
            for (c, &t) in unknowns.iter().enumerate() {
                v[t] = ns.get(k, c);
            }
            v
        })
        .collect();
    Some((particular, kernel))
}

/// Grows the chi-isotropic polarization inside `g^0` (sub-algebra
/// coordinates). Deterministic: the filtration seed, then the
/// chi-kernel of the Cartan span, then basis elements by descending
/// degree.
pub fn polarization(
    ca: &crate::contact::ContactAlgebra,
    g0: &SubAlgebra,
    chi: &PChar,
) -> Result<Polarization> {
    let g = &g0.lsa;
    let field = *g.field();
    let dim = g.dim();
    let full_h = height(&ca.lsa, chi);
    let chi0 = g0.restrict_char(chi);
    let j0 = if full_h <= 1 { 1 } else { (full_h + 1) / 2 };
    let mut p_basis: Vec<Vec<u8>> = Vec::new();
    let mut span = RowSpace::new(&field, dim);
    for i in 0..dim {
        if g.degree(i) >= j0 {
            let mut v = vec![0u8; dim];
            v[i] = 1;
            span.insert(&v);
            p_basis.push(v);
        }
    }
    // candidates: Cartan combinations in the chi-kernel first, then the
    // remaining basis elements from high degree to low.
    let to_sub = |v: &[u8]| -> Vec<u8> { g0.parent.iter().map(|&i| v[i]).collect() };
    let mut candidates: Vec<Vec<u8>> = Vec::new();
    {
        let cartan: Vec<Vec<u8>> = ca.cartan.iter().map(|(_, v)| to_sub(v)).collect();
        // Cartan combinations that pair chi-trivially with the whole of
        // g^0 and carry no chi-value themselves (toral directions with
        // nonzero chi admit no rational weight, so they cannot enter P).
        if !cartan.is_empty() {
            let mut m = Mat::zeros(&field, 1 + dim, cartan.len());
            for (c, hv) in cartan.iter().enumerate() {
                m.set(0, c, chi0.eval(&field, hv));
                for b in 0..dim {
                    let mut eb = vec![0u8; dim];
                    eb[b] = 1;
                    m.set(1 + b, c, chi0.eval(&field, &g.bracket(hv, &eb)));
                }
            }
            let ns = m.nullspace();
            for k in 0..ns.nrows() {
                let mut v = vec![0u8; dim];
                for (c, hv) in cartan.iter().enumerate() {
                    let x = ns.get(k, c);
                    if !x.is_zero() {
                        for j in 0..dim {
                            v[j] = field
                                .add(Fp(v[j] as u32), field.mul(x, Fp(hv[j] as u32)))
                                .0 as u8;
                        }
                    }
                }
                candidates.push(v);
            }
        }
    }
    // The positive nil-part joins next (the standard Borel side), then
    // everything else from high degree down.
    for v in &ca.nplus {
        candidates.push(to_sub(v));
    }
    let mut rest: Vec<usize> = (0..dim).filter(|&i| g.degree(i) < j0).collect();
    rest.sort_by_key(|&i| (-g.degree(i), i));
    for i in rest {
        let mut v = vec![0u8; dim];
        v[i] = 1;
        candidates.push(v);
    }
    let trace = std::env::var("CARTAN_ODD_TRACE").is_ok();
    // Repeat until stable: an element can become addable only after a
    // bracket partner joined (the nil-part is not lex-ordered compatibly).
    let mut progress = true;
    while progress {
        progress = false;
        for v in candidates.clone() {
            if span.contains(&v) {
                continue;
            }
            // closure of the candidate span
            let mut trial = span.clone();
            trial.insert(&v);
            let mut trial_basis = p_basis.clone();
            trial_basis.push(v.clone());
            let closed = trial_basis.iter().all(|a| {
                trial_basis
                    .iter()
                    .all(|b| trial.contains(&g.bracket(a, b)))
            }) && trial_basis.iter().all(|a| {
                if g.vector_parity(a) == Some(Parity::Odd) {
                    true
                } else {
                    match pmap_of_vector(g, a) {
                        Some(img) => trial.contains(&img),
                        None => false,
                    }
                }
            });
            if !closed {
                if trace {
                    eprintln!("polarization: reject (closure) {v:?}");
                }
                continue;
            }
            if !chi_pairs_to_zero(g, &chi0, &v, &trial_basis) {
                if trace {
                    eprintln!("polarization: reject (isotropy) {v:?}");
                }
                continue;
            }
            if solve_psi_system(g, &chi0, &trial_basis).is_none() {
                if trace {
                    eprintln!("polarization: reject (weight system) {v:?}");
                }
                continue;
            }
            span = trial;
            p_basis = trial_basis;
            progress = true;
        }
    }
    let pivots: std::collections::BTreeSet<usize> = span.pivot_cols().into_iter().collect();
    let complement: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
    Ok(Polarization {
        p_basis,
        complement,
    })
}

/// Enumerates the weight functionals of the polarization, capped.
pub fn enumerate_psi(
    g0: &SubAlgebra,
    chi: &PChar,
    pol: &Polarization,
    cap: usize,
) -> Result<Vec<Vec<Fp>>> {
    let g = &g0.lsa;
    let field = *g.field();
    let chi0 = g0.restrict_char(chi);
    let (particular, kernel) = solve_psi_system(g, &chi0, &pol.p_basis).ok_or_else(|| {
        Error::InconsistentWeight("polarization admits no one-dimensional weight".into())
    })?;
    let p = field.p() as u64;
    let free = kernel.len();
    let total = p.pow(free as u32).min(cap.max(1) as u64);
    let mut out = Vec::new();
    for code in 0..total {
        let mut psi = particular.clone();
        let mut c = code;
        for kv in &kernel {
            let a = Fp((c % p) as u32);
            c /= p;
            if !a.is_zero() {
                for (t, x) in psi.iter_mut().zip(kv.iter()) {
                    *t = field.add(*t, field.mul(a, *x));
                }
            }
        }
        out.push(psi);
    }
    Ok(out)
}

/// The generalized Verma module of one weight functional.
pub fn generalized_verma(
    g0: &SubAlgebra,
    chi: &PChar,
    pol: &Polarization,
    psi: &[Fp],
) -> Result<super::induce::InducedModule> {
    let g = &g0.lsa;
    let chi0 = g0.restrict_char(chi);
    validate_one_dim_rep(g, &chi0, &pol.p_basis, psi)?;
    let s_mats: Vec<SparseMat> = psi
        .iter()
        .map(|&w| SparseMat {
            dim_rows: 1,
            cols: vec![if w.is_zero() {
                Vec::new()
            } else {
                vec![(0, w.0 as u8)]
            }],
        })
        .collect();
    induce(
        g,
        &chi0,
        &pol.complement,
        &pol.p_basis,
        &s_mats,
        &[Parity::Even],
        None,
    )
}

/// The head sweep: up to `cap` certified-simple `u_chi(g^0)`-modules
/// obtained as MeatAxe heads of the generalized Verma modules of all
/// rational weights.
pub fn simple_g0_heads(
    ca: &crate::contact::ContactAlgebra,
    g0: &SubAlgebra,
    chi: &PChar,
    seed: u64,
    cap: usize,
) -> Result<Vec<HeadInfo>> {
    let g = &g0.lsa;
    let pol = polarization(ca, g0, chi)?;
    let verma_dim: usize = pol
        .complement
        .iter()
        .map(|&c| {
            if g.parity(c).is_odd() {
                2usize
            } else {
                g.field().p() as usize
            }
        })
        .product();
    if verma_dim > 60_000 {
        return Err(Error::ResourceCap(format!(
            "generalized Verma dimension {verma_dim} exceeds the desk-scale cap"
        )));
    }
    let psis = enumerate_psi(g0, chi, &pol, cap)?;
    // A Lie-generating subset keeps MeatAxe words meaningful; invariance
    // under it is invariance under all of g^0.
    let gens = crate::theorems::lie_generating_indices(g);
    let mut heads = Vec::new();
    for psi in psis.into_iter().take(cap.max(1)) {
        let verma = generalized_verma(g0, chi, &pol, &psi)?;
        let head = simple_head(g.dim(), &verma.module, &gens, seed)
            .map_err(Error::ResourceCap)?;
        heads.push(HeadInfo {
            module: head,
            psi,
            verma_dim,
        });
    }
    Ok(heads)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::build_m;
    use crate::field::PrimeField;
    use crate::repn::verify_module;

    #[test]
    fn sweep_at_chi_zero_m15_gives_one_dim_heads() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        let g0 = SubAlgebra::filtration(&ca.lsa, 0);
        let chi = PChar::zero(&ca.lsa);
        let heads = simple_g0_heads(&ca, &g0, &chi, 1, 6).unwrap();
        assert!(!heads.is_empty());
        for h in &heads {
            // n^-_{[0]} = 0 at n = 1: the restricted Vermas are already
            // one-dimensional.
            assert_eq!(h.module.dim, 1);
            let rep = verify_module(&g0.lsa, &h.module, &g0.restrict_char(&chi));
            assert!(rep.is_empty(), "{rep:?}");
        }
    }

    #[test]
    fn sweep_handles_nonsingular_height_2() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        let chi = crate::chars::build_example_nonsingular(&ca, 2).unwrap();
        let g0 = SubAlgebra::filtration(&ca.lsa, 0);
        let heads = simple_g0_heads(&ca, &g0, &chi, 2, 3).unwrap();
        assert!(!heads.is_empty());
        for h in &heads {
            assert!(h.module.dim >= 1);
            let rep = verify_module(&g0.lsa, &h.module, &g0.restrict_char(&chi));
            assert!(rep.is_empty(), "head fails verification: {rep:?}");
        }
    }
}
