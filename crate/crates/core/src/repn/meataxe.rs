//! Norton-criterion MeatAxe over `F_p`, driven by minimal polynomials,
//! with a graded refinement for supermodules.
//!
//! The randomized search samples bounded words in the acting matrices.
//! For each sampled element its minimal polynomial is computed and
//! factored; an irreducible factor `f` whose kernel `ker f(Z)` has
//! dimension exactly `deg f` ("good" factor) decides irreducibility with
//! a single spin on each side (Holt-Rees). Small kernels of other
//! factors are checked exhaustively over their projective vectors. A
//! verdict is only emitted when the criterion is conclusive; exhausting
//! the resource caps yields an explicit `Inconclusive`, never a guess.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dps::Parity;
use crate::field::{Fp, PrimeField};
use crate::linalg::{Mat, RowSpace};
use crate::poly::{factor, Poly};

use super::{spin, GModule, SparseMat};

/// Reproducibility data for an irreducibility certificate.
#[derive(Debug, Clone)]
pub struct MeataxeCertificate {
    pub seed: u64,
    pub attempts: usize,
    pub word: String,
    pub nullity: usize,
}

/// Verdict of the randomized irreducibility test.
#[derive(Debug, Clone)]
pub enum MeataxeOutcome {
    Irreducible(MeataxeCertificate),
    /// A proper nonzero invariant subspace, as a canonical echelon basis.
    Reducible(Vec<Vec<u8>>),
    Inconclusive(String),
}

const MAX_ATTEMPTS: usize = 200;
const MAX_WORD_LEN: usize = 12;

/// Minimal polynomial of `z` by Krylov spin-up with coefficient
/// tracking, as the lcm over a few random start vectors.
pub fn min_poly(field: &PrimeField, z: &Mat, seed: u64) -> Poly {
    let n = z.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Poly::one();
    for _ in 0..3 {
        let v: Vec<u8> = (0..n).map(|_| rng.gen_range(0..field.p()) as u8).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        // rows: (reduced vector, pivot, polynomial coordinates)
        let mut rows: Vec<(Vec<u8>, usize, Vec<Fp>)> = Vec::new();
        let mut w = v.clone();
        let mut k = 0usize;
        let m_v = loop {
            // candidate w = Z^k v with polynomial x^k
            let mut coeffs = vec![Fp::ZERO; k + 1];
            coeffs[k] = Fp::ONE;
            let mut red = w.clone();
            for (row, pivot, rc) in &rows {
                let c = red[*pivot];
                if c != 0 {
                    let neg = field.neg(Fp(c as u32));
                    for (a, b) in red.iter_mut().zip(row.iter()) {
                        *a = field.add(Fp(*a as u32), field.mul(neg, Fp(*b as u32))).0 as u8;
                    }
                    for (i, x) in rc.iter().enumerate() {
                        coeffs[i] = field.add(coeffs[i], field.mul(neg, *x));
                    }
                }
            }
            match red.iter().position(|&x| x != 0) {
                None => break Poly(coeffs),
                Some(pivot) => {
                    let inv = field.inv(Fp(red[pivot] as u32)).unwrap();
                    let mut row = red;
                    for a in row.iter_mut() {
                        *a = field.mul(Fp(*a as u32), inv).0 as u8;
                    }
                    let rc: Vec<Fp> = coeffs.iter().map(|&c| field.mul(c, inv)).collect();
                    rows.push((row, pivot, rc));
                    w = z.matvec(&w);
                    k += 1;
                }
            }
        };
        m = m.lcm(field, &m_v);
        if m.degree() == n {
            break;
        }
    }
    m
}

/// Horner evaluation of `f(z)` as a matrix.
pub fn eval_poly_matrix(field: &PrimeField, f: &Poly, z: &Mat) -> Mat {
    let n = z.nrows();
    let mut acc = Mat::zeros(field, n, n);
    for &c in f.0.iter().rev() {
        acc = acc.mul(z);
        if !c.is_zero() {
            acc = acc.add(&Mat::identity(field, n).scale(c));
        }
    }
    acc
}

/// All projective representatives (leading coefficient 1) of the row
/// space of `basis`.
fn projective_vectors(field: &PrimeField, basis: &Mat) -> Vec<Vec<u8>> {
    let d = basis.nrows();
    let n = basis.ncols();
    let p = field.p();
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    let total = (p as u64).pow(d as u32);
    for code in 1..total {
        let mut c = code;
        let mut coeffs = vec![0u32; d];
        for x in coeffs.iter_mut() {
            *x = (c % p as u64) as u32;
            c /= p as u64;
        }
        let lead = coeffs.iter().find(|&&x| x != 0).copied().unwrap();
        if lead != 1 {
            continue;
        }
        let mut v = vec![0u8; n];
        for (k, &x) in coeffs.iter().enumerate() {
            if x != 0 {
                for j in 0..n {
                    v[j] = field
                        .add(Fp(v[j] as u32), field.mul(Fp(x), basis.get(k, j)))
                        .0 as u8;
                }
            }
        }
        out.push(v);
    }
    out
}

/// Largest factor degree worth materializing as a matrix, by dimension.
fn form_cap(dim: usize) -> usize {
    if dim <= 600 {
        64
    } else if dim <= 3000 {
        24
    } else {
        10
    }
}

/// Largest kernel dimension for the exhaustive projective fallback.
fn exhaust_cap(p: u32, dim: usize) -> usize {
    let budget: u64 = if dim <= 600 { 800 } else { 40 };
    let mut d = 0usize;
    while ((p as u64).pow(d as u32 + 1) - 1) / (p as u64 - 1) <= budget {
        d += 1;
    }
    d
}

enum SideCheck {
    AllFull,
    Proper(Vec<Vec<u8>>),
}

/// Spins every projective vector of `kernel` under `gens`; returns the
/// first proper invariant span found.
fn check_side(
    field: &PrimeField,
    dim: usize,
    gens: &[&SparseMat],
    kernel: &Mat,
) -> SideCheck {
    for v in projective_vectors(field, kernel) {
        let span = spin(field, gens, &v);
        if span.dim() < dim {
            return SideCheck::Proper(span.basis());
        }
    }
    SideCheck::AllFull
}

fn perp_of(field: &PrimeField, rows: &[Vec<u8>], dim: usize) -> Vec<Vec<u8>> {
    let mat = Mat::from_rows(field, rows.to_vec(), dim);
    let perp = mat.nullspace();
    let mut sub = RowSpace::new(field, dim);
    for k in 0..perp.nrows() {
        sub.insert(&perp.row(k).to_vec());
    }
    sub.basis()
}

/// Randomized irreducibility test on the matrix module spanned by the
/// given generator actions.
pub fn meataxe_irreducible(
    field: &PrimeField,
    dim: usize,
    gens: &[&SparseMat],
    seed: u64,
) -> MeataxeOutcome {
    assert!(dim >= 1, "module must be nonzero");
    if dim == 1 {
        return MeataxeOutcome::Irreducible(MeataxeCertificate {
            seed,
            attempts: 0,
            word: "dim 1".into(),
            nullity: 0,
        });
    }
    if gens.is_empty() {
        let mut v = vec![0u8; dim];
        v[0] = 1;
        let mut space = RowSpace::new(field, dim);
        space.insert(&v);
        return MeataxeOutcome::Reducible(space.basis());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let transposed: Vec<SparseMat> = gens.iter().map(|a| a.transpose()).collect();
    let tr_refs: Vec<&SparseMat> = transposed.iter().collect();
    let mut zero_draws = 0usize;
    let mut attempt = 0usize;
    while attempt < MAX_ATTEMPTS {
        // Short words dominate: products of many nilpotent actions
        // vanish, and linear combinations already explore the algebra.
        let terms = rng.gen_range(2..=4usize);
        let mut z = Mat::zeros(field, dim, dim);
        let mut desc = Vec::new();
        for _ in 0..terms {
            let len = if rng.gen_bool(0.75) {
                rng.gen_range(1..=3usize)
            } else {
                rng.gen_range(4..=MAX_WORD_LEN)
            };
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..gens.len())).collect();
            let coeff = Fp(rng.gen_range(1..field.p()));
            desc.push(format!(
                "{}*g{}",
                coeff,
                word.iter()
                    .map(|w| w.to_string())
                    .collect::<Vec<_>>()
                    .join(".g")
            ));
            for b in 0..dim {
                let mut v = vec![0u8; dim];
                v[b] = 1;
                for &w in word.iter().rev() {
                    v = gens[w].matvec(field, &v);
                }
                for (r, &x) in v.iter().enumerate() {
                    if x != 0 {
                        let cur = z.get(r, b);
                        z.set(r, b, field.add(cur, field.mul(coeff, Fp(x as u32))));
                    }
                }
            }
        }
        if z.is_zero() {
            zero_draws += 1;
            if zero_draws > 2000 {
                attempt += 1;
                zero_draws = 0;
            }
            continue;
        }
        attempt += 1;
        let m = min_poly(field, &z, seed.wrapping_add(attempt as u64));
        let factors = factor(field, &m, seed.wrapping_add(1000 + attempt as u64));
        // An element with irreducible minimal polynomial of full degree
        // makes the space a simple module over F[Z] already.
        if factors.len() == 1 && factors[0].1 == 1 && factors[0].0.degree() == dim {
            return MeataxeOutcome::Irreducible(MeataxeCertificate {
                seed,
                attempts: attempt,
                word: format!("{} (irreducible minimal polynomial of degree {dim})", desc.join(" + ")),
                nullity: dim,
            });
        }
        let mut sorted: Vec<&(Poly, usize)> = factors.iter().collect();
        sorted.sort_by_key(|(f, _)| f.degree());
        for (f, _) in sorted {
            if f.degree() > form_cap(dim) || f.degree() == m.degree() {
                continue;
            }
            let fz = eval_poly_matrix(field, f, &z);
            let kernel = fz.nullspace();
            let d_n = kernel.nrows();
            if d_n == 0 {
                continue;
            }
            let good = d_n == f.degree();
            let exhaustible = d_n <= exhaust_cap(field.p(), dim);
            if !good && !exhaustible {
                continue;
            }
            // primal side
            let primal_kernel = if good {
                Mat::from_rows(field, vec![kernel.row(0).to_vec()], dim)
            } else {
                kernel.clone()
            };
            match check_side(field, dim, gens, &primal_kernel) {
                SideCheck::Proper(w) => return MeataxeOutcome::Reducible(w),
                SideCheck::AllFull => {}
            }
            // dual side: f(Z)^t = f(Z^t)
            let kernel_t = fz.transpose().nullspace();
            debug_assert_eq!(kernel_t.nrows(), d_n);
            let dual_kernel = if good {
                Mat::from_rows(field, vec![kernel_t.row(0).to_vec()], dim)
            } else {
                kernel_t
            };
            match check_side(field, dim, &tr_refs, &dual_kernel) {
                SideCheck::Proper(w) => {
                    return MeataxeOutcome::Reducible(perp_of(field, &w, dim));
                }
                SideCheck::AllFull => {}
            }
            return MeataxeOutcome::Irreducible(MeataxeCertificate {
                seed,
                attempts: attempt,
                word: format!(
                    "{} (factor of degree {}, kernel {d_n}{})",
                    desc.join(" + "),
                    f.degree(),
                    if good { ", good" } else { ", exhaustive" }
                ),
                nullity: d_n,
            });
        }
    }
    MeataxeOutcome::Inconclusive(format!(
        "no usable singular element within {MAX_ATTEMPTS} attempts (word length <= {MAX_WORD_LEN})"
    ))
}

/// Outcome of the graded (supermodule) refinement.
#[derive(Debug, Clone)]
pub enum GradedOutcome {
    /// No proper graded submodule; `queer` marks the case where an
    /// ungraded proper submodule exists but pairs with its parity twin to
    /// fill the module.
    Simple {
        certificate: Option<MeataxeCertificate>,
        queer: bool,
    },
    Reducible(Vec<Vec<u8>>),
    Inconclusive(String),
}

fn parity_twin(field: &PrimeField, parity: &[Parity], v: &[u8]) -> Vec<u8> {
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            if parity[i].is_odd() {
                field.neg(Fp(x as u32)).0 as u8
            } else {
                x
            }
        })
        .collect()
}

fn intersect_rowspaces(field: &PrimeField, a: &[Vec<u8>], b: &[Vec<u8>], n: usize) -> RowSpace {
    // v = x A = y B: kernel of the stacked [A; -B] in (x, y) coordinates.
    let mut rows = Vec::new();
    for r in a {
        rows.push(r.clone());
    }
    for r in b {
        rows.push(r.iter().map(|&x| field.neg(Fp(x as u32)).0 as u8).collect());
    }
    let stacked = Mat::from_rows(field, rows, n).transpose();
    let ns = stacked.nullspace();
    let mut out = RowSpace::new(field, n);
    for k in 0..ns.nrows() {
        let coords = ns.row(k);
        let mut v = vec![0u8; n];
        for (i, r) in a.iter().enumerate() {
            let c = coords[i];
            if c != 0 {
                for j in 0..n {
                    v[j] = field
                        .add(Fp(v[j] as u32), field.mul(Fp(c as u32), Fp(r[j] as u32)))
                        .0 as u8;
                }
            }
        }
        out.insert(&v);
    }
    out
}

/// Graded irreducibility: runs the MeatAxe and, when it finds an
/// ungraded proper submodule, refines it to a graded one through the
/// parity involution (`W /\ sigma(W)` or `W + sigma(W)`).
pub fn graded_simple(m: &GModule, gens: &[usize], seed: u64) -> GradedOutcome {
    let field = m.field;
    let actions: Vec<&SparseMat> = gens.iter().map(|&i| m.action(i)).collect();
    match meataxe_irreducible(&field, m.dim, &actions, seed) {
        MeataxeOutcome::Irreducible(c) => GradedOutcome::Simple {
            certificate: Some(c),
            queer: false,
        },
        MeataxeOutcome::Inconclusive(r) => GradedOutcome::Inconclusive(r),
        MeataxeOutcome::Reducible(w) => {
            let twin: Vec<Vec<u8>> = w
                .iter()
                .map(|v| parity_twin(&field, &m.parity, v))
                .collect();
            let mut wspace = RowSpace::new(&field, m.dim);
            for v in &w {
                wspace.insert(v);
            }
            let graded = twin.iter().all(|v| wspace.contains(v));
            if graded {
                return GradedOutcome::Reducible(w);
            }
            let inter = intersect_rowspaces(&field, &w, &twin, m.dim);
            if inter.dim() > 0 && inter.dim() < m.dim {
                return GradedOutcome::Reducible(inter.basis());
            }
            let mut sum = RowSpace::new(&field, m.dim);
            for v in w.iter().chain(twin.iter()) {
                sum.insert(v);
            }
            if sum.dim() < m.dim {
                return GradedOutcome::Reducible(sum.basis());
            }
            // W (+) sigma(W) = M with trivial intersection: no proper
            // graded submodule arises from this witness.
            GradedOutcome::Simple {
                certificate: None,
                queer: true,
            }
        }
    }
}

/// A simple quotient of `m`, found by repeatedly quotienting out proper
/// graded submodules produced by the MeatAxe. The dimension strictly
/// decreases, so this terminates.
pub fn simple_head(
    g_dim: usize,
    m: &GModule,
    gens: &[usize],
    seed: u64,
) -> Result<GModule, String> {
    let _ = g_dim;
    let field = m.field;
    let mut current = m.clone();
    loop {
        match graded_simple(&current, gens, seed) {
            GradedOutcome::Simple { .. } => return Ok(current),
            GradedOutcome::Inconclusive(r) => return Err(r),
            GradedOutcome::Reducible(w) => {
                current = quotient_module(&field, &current, &w);
            }
        }
    }
}

/// Quotient of a module by a graded invariant subspace, over the
/// complementary unit-vector transversal.
pub fn quotient_module(field: &PrimeField, m: &GModule, w: &[Vec<u8>]) -> GModule {
    let dim = m.dim;
    let mut wspace = RowSpace::new(field, dim);
    for v in w {
        wspace.insert(v);
    }
    let pivots: std::collections::BTreeSet<usize> = wspace.pivot_cols().into_iter().collect();
    let transversal: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
    let qdim = transversal.len();
    assert!(qdim > 0, "quotient by the whole space");
    let pos: std::collections::BTreeMap<usize, usize> = transversal
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, k))
        .collect();
    let project = |v: &[u8]| -> Vec<(u32, u8)> {
        let mut red = v.to_vec();
        wspace.reduce(&mut red);
        let mut out = Vec::new();
        for (i, &x) in red.iter().enumerate() {
            if x != 0 {
                let k = *pos.get(&i).expect("reduced vector lives on the transversal");
                out.push((k as u32, x));
            }
        }
        out.sort_by_key(|&(r, _)| r);
        out
    };
    let mut actions = std::collections::BTreeMap::new();
    for (i, a) in &m.actions {
        let mut q = SparseMat::zeros(qdim, qdim);
        for (k, &b) in transversal.iter().enumerate() {
            let mut unit = vec![0u8; dim];
            unit[b] = 1;
            let img = a.matvec(field, &unit);
            q.cols[k] = project(&img);
        }
        actions.insert(*i, q);
    }
    GModule {
        field: *field,
        algebra_dim: m.algebra_dim,
        dim: qdim,
        parity: transversal.iter().map(|&i| m.parity[i]).collect(),
        actions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn dense(field: &PrimeField, rows: Vec<Vec<u8>>) -> SparseMat {
        let n = rows.len();
        SparseMat::from_dense(&Mat::from_rows(field, rows, n))
    }

    #[test]
    fn min_poly_of_companion() {
        let field = f5();
        // companion matrix of x^2 + 2 (irreducible over F_5)
        let z = Mat::from_rows(&field, vec![vec![0, 3], vec![1, 0]], 2);
        let m = min_poly(&field, &z, 1);
        assert_eq!(m.degree(), 2);
        let fz = eval_poly_matrix(&field, &m, &z);
        assert!(fz.is_zero());
    }

    #[test]
    fn min_poly_of_identity() {
        let field = f5();
        let z = Mat::identity(&field, 4);
        let m = min_poly(&field, &z, 2);
        assert_eq!(m.degree(), 1);
    }

    #[test]
    fn one_dimensional_is_irreducible() {
        let field = f5();
        let a = SparseMat::zeros(1, 1);
        match meataxe_irreducible(&field, 1, &[&a], 0) {
            MeataxeOutcome::Irreducible(_) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn direct_sum_is_reducible() {
        let field = f5();
        let a = dense(
            &field,
            vec![
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
            ],
        );
        let b = dense(
            &field,
            vec![
                vec![1, 1, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 1],
                vec![0, 0, 0, 1],
            ],
        );
        match meataxe_irreducible(&field, 4, &[&a, &b], 1) {
            MeataxeOutcome::Reducible(w) => {
                assert!(!w.is_empty() && w.len() < 4);
                let mut space = RowSpace::new(&field, 4);
                for v in &w {
                    space.insert(v);
                }
                for v in &w {
                    assert!(space.contains(&a.matvec(&field, v)));
                    assert!(space.contains(&b.matvec(&field, v)));
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn irreducible_2dim_certified() {
        let field = f5();
        let e = dense(&field, vec![vec![0, 1], vec![0, 0]]);
        let f = dense(&field, vec![vec![0, 0], vec![1, 0]]);
        match meataxe_irreducible(&field, 2, &[&e, &f], 3) {
            MeataxeOutcome::Irreducible(cert) => {
                assert!(cert.attempts >= 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn head_of_direct_sum_is_summand() {
        let field = f5();
        let a = dense(
            &field,
            vec![
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
            ],
        );
        let b = dense(
            &field,
            vec![
                vec![1, 1, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 1],
                vec![0, 0, 0, 1],
            ],
        );
        let mut actions = BTreeMap::new();
        actions.insert(0usize, a);
        actions.insert(1usize, b);
        let m = GModule {
            field,
            algebra_dim: 2,
            dim: 4,
            parity: vec![Parity::Even; 4],
            actions,
        };
        let head = simple_head(2, &m, &[0, 1], 5).unwrap();
        assert_eq!(head.dim, 2);
    }

    #[test]
    fn never_irreducible_with_verified_submodule() {
        // fault-injection style: a module with an obvious invariant line
        let field = f5();
        let a = dense(&field, vec![vec![1, 1], vec![0, 1]]);
        for seed in 0..32 {
            match meataxe_irreducible(&field, 2, &[&a], seed) {
                MeataxeOutcome::Reducible(w) => {
                    let mut space = RowSpace::new(&field, 2);
                    for v in &w {
                        space.insert(v);
                    }
                    for v in &w {
                        assert!(space.contains(&a.matvec(&field, v)));
                    }
                }
                MeataxeOutcome::Irreducible(c) => {
                    panic!("seed {seed} certified a reducible module: {c:?}")
                }
                MeataxeOutcome::Inconclusive(_) => {}
            }
        }
    }

    #[test]
    fn artin_schreier_companion_block_is_irreducible() {
        // t acting as the companion matrix of x^5 - x - 1: simple over
        // F_5[t] alone (the minimal polynomial is irreducible of full
        // degree), which is how toral obstructions enter the sweep.
        let field = f5();
        let mut rows = vec![vec![0u8; 5]; 5];
        // companion of x^5 - x - 1: last column from coefficients (1, 1, 0, 0, 0)
        for r in 1..5 {
            rows[r][r - 1] = 1;
        }
        rows[0][4] = 1; // +1
        rows[1][4] = 1; // +x
        let t = dense(&field, rows);
        match meataxe_irreducible(&field, 5, &[&t], 11) {
            MeataxeOutcome::Irreducible(_) => {}
            other => panic!("{other:?}"),
        }
    }
}
