//! The odd contact Lie superalgebra `m(n)` and the special odd contact
//! Lie superalgebra `sm(n; kappa)` over `F_p`, with their standard
//! gradings, Cartan subalgebras, root decompositions and triangular
//! decompositions.
//!
//! Work happens in `O(n, n+1)`: slots `0..n` are even, `n..2n` are the
//! primed odd variables and slot `2n` is the extra contact variable. The
//! map `f -> M_f` sends a function to its contact vector field; the
//! contact bracket on functions makes it a bracket homomorphism, so the
//! structure constants of `m` come straight from brackets of monomials.
//! `sm(kappa)` is cut out degreewise as the kernel of the divergence.

use std::collections::BTreeMap;

use crate::dps::{koszul_sign, partial, MultiIndex, Parity, Shape, SuperElement, VectorField};
use crate::field::{Fp, PrimeField};
use crate::linalg::{Mat, RowSolver, RowSpace};
use crate::lsa::{Lsa, SparseVec};
use crate::{Error, Result};

/// Which contact family an algebra was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactKind {
    /// The full odd contact algebra `m`.
    M,
    /// The divergence-free subalgebra `sm(kappa)`.
    Sm { kappa: Fp },
}

/// The primed index pairing on the first `2n` slots (0-based).
pub fn prime_slot(n: usize, k: usize) -> usize {
    debug_assert!(k < 2 * n);
    if k < n {
        k + n
    } else {
        k - n
    }
}

/// Euler operator `E = sum_{k < 2n} x_k ∂_k`; diagonal on monomials with
/// eigenvalue `sum_{k < 2n} r_k`.
pub fn euler(f: &SuperElement) -> SuperElement {
    let shape = *f.shape();
    assert_eq!(shape.m, shape.n + 1, "contact shape required");
    let field = shape.field;
    let last = shape.slots() - 1;
    let mut out = SuperElement::zero(&shape);
    for (idx, c) in f.terms() {
        let eig: u64 = idx.entries()[..last].iter().map(|&v| v as u64).sum();
        out.add_term(idx.clone(), field.mul(c, field.reduce(eig)));
    }
    out
}

/// `(2 - E)(f)`.
fn two_minus_euler(f: &SuperElement) -> SuperElement {
    f.scale(Fp(2)).sub(&euler(f))
}

/// Hamiltonian part `Le_f = sum_{i < 2n} (-1)^{|∂_i||f|} ∂_i(f) ∂_{i'}`.
pub fn le_field(f: &SuperElement) -> Result<VectorField> {
    let shape = *f.shape();
    assert_eq!(shape.m, shape.n + 1, "contact shape required");
    let field = shape.field;
    let parity = f.homogeneous_parity().ok_or(Error::NotHomogeneous)?;
    let n = shape.n;
    let mut comps: Vec<(usize, SuperElement)> = Vec::new();
    for i in 0..2 * n {
        let di = partial(i, f)?;
        if di.is_zero() {
            continue;
        }
        let dpar = if shape.is_odd_slot(i) {
            Parity::Odd
        } else {
            Parity::Even
        };
        let sign = koszul_sign(&field, dpar, parity);
        comps.push((prime_slot(n, i), di.scale(sign)));
    }
    Ok(VectorField::from_components(
        &shape,
        parity.flip(),
        comps,
    ))
}

/// The contact vector field
/// `M_f = (2 - E)(f) ∂_{2n} - Le_f - (-1)^{|f|} ∂_{2n}(f) E`,
/// of parity `|f| + 1`.
pub fn m_field(f: &SuperElement) -> Result<VectorField> {
    let shape = *f.shape();
    assert_eq!(shape.m, shape.n + 1, "contact shape required");
    let field = shape.field;
    let parity = f.homogeneous_parity().ok_or(Error::NotHomogeneous)?;
    let n = shape.n;
    let last = shape.slots() - 1;
    let minus_one = field.sign(1);
    let mut comps: Vec<(usize, SuperElement)> = vec![(last, two_minus_euler(f))];
    let le = le_field(f)?;
    for (k, g) in le.components() {
        comps.push((k, g.scale(minus_one)));
    }
    let dlast = partial(last, f)?;
    if !dlast.is_zero() {
        let sign = match parity {
            Parity::Even => minus_one,
            Parity::Odd => Fp::ONE,
        };
        for k in 0..2 * n {
            let xk = SuperElement::generator(&shape, k);
            let comp = dlast.multiply(&xk).scale(sign);
            if !comp.is_zero() {
                comps.push((k, comp));
            }
        }
    }
    Ok(VectorField::from_components(&shape, parity.flip(), comps))
}

/// Contact bracket
/// `{f, g} = M_f(g) + (-1)^{|f|} 2 ∂_{2n}(f) g`;
/// `f -> M_f` is a bracket homomorphism for it.
pub fn contact_bracket(f: &SuperElement, g: &SuperElement) -> Result<SuperElement> {
    let shape = *f.shape();
    let field = shape.field;
    let parity = f.homogeneous_parity().ok_or(Error::NotHomogeneous)?;
    let last = shape.slots() - 1;
    let mf = m_field(f)?;
    let mut out = mf.apply(g);
    let dlast = partial(last, f)?;
    if !dlast.is_zero() {
        let sign = match parity {
            Parity::Even => Fp(2),
            Parity::Odd => field.neg(Fp(2)),
        };
        out = out.add(&dlast.multiply(g).scale(sign));
    }
    Ok(out)
}

/// Odd Laplacian `Delta = sum_{i < n} ∂_i ∂_{i'}`.
pub fn laplacian(f: &SuperElement) -> SuperElement {
    let shape = *f.shape();
    let mut out = SuperElement::zero(&shape);
    for i in 0..shape.n {
        out = out.add(&partial(i, &partial(i + shape.n, f).expect("in range")).expect("in range"));
    }
    out
}

/// Divergence
/// `div_kappa(f) = (-1)^{|f|} 2 (Delta(f) + (E - n kappa)(∂_{2n} f))`;
/// its kernel under `f -> M_f` is `sm(kappa)`.
pub fn div_kappa(f: &SuperElement, kappa: Fp) -> Result<SuperElement> {
    let shape = *f.shape();
    assert_eq!(shape.m, shape.n + 1, "contact shape required");
    let field = shape.field;
    let parity = f.homogeneous_parity().ok_or(Error::NotHomogeneous)?;
    let last = shape.slots() - 1;
    let dlast = partial(last, f)?;
    let nk = field.mul(field.reduce(shape.n as u64), kappa);
    let inner = laplacian(f)
        .add(&euler(&dlast))
        .sub(&dlast.scale(nk));
    let sign = match parity {
        Parity::Even => Fp(2),
        Parity::Odd => field.neg(Fp(2)),
    };
    Ok(inner.scale(sign))
}

fn label_of(idx: &MultiIndex) -> String {
    format!("M[x^{idx}]")
}

fn label_of_function(f: &SuperElement) -> String {
    let mut parts = Vec::new();
    for (idx, c) in f.terms() {
        if c == Fp::ONE {
            parts.push(format!("x^{idx}"));
        } else {
            parts.push(format!("{c}*x^{idx}"));
        }
    }
    if parts.is_empty() {
        "M[0]".to_string()
    } else {
        format!("M[{}]", parts.join("+"))
    }
}

/// Solver for re-expressing a distinguished vector field as `M_f`.
///
/// Flattens a field into `(direction, monomial)` coordinates and solves
/// against the precomputed matrix of `f -> M_f` on monomials; failure to
/// solve means the field is outside `m`, which signals a construction bug.
struct MFieldSolver {
    shape: Shape,
    monomials: Vec<MultiIndex>,
    mono_pos: BTreeMap<MultiIndex, usize>,
    solver: RowSolver,
}

impl MFieldSolver {
    fn flatten(&self, v: &VectorField) -> Vec<u8> {
        let slots = self.shape.slots();
        let nmono = self.monomials.len();
        let mut out = vec![0u8; slots * nmono];
        for (k, comp) in v.components() {
            for (idx, c) in comp.terms() {
                let pos = *self.mono_pos.get(idx).expect("valid monomial");
                out[k * nmono + pos] = c.0 as u8;
            }
        }
        out
    }

    fn new(shape: &Shape) -> MFieldSolver {
        let monomials = shape.all_indices();
        let mono_pos: BTreeMap<MultiIndex, usize> = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let slots = shape.slots();
        let nmono = monomials.len();
        let mut rows = Vec::with_capacity(nmono);
        for idx in &monomials {
            let f = SuperElement::monomial(shape, idx.clone(), Fp::ONE);
            let mf = m_field(&f).expect("monomials are homogeneous");
            let mut row = vec![0u8; slots * nmono];
            for (k, comp) in mf.components() {
                for (jdx, c) in comp.terms() {
                    let pos = *mono_pos.get(jdx).expect("valid monomial");
                    row[k * nmono + pos] = c.0 as u8;
                }
            }
            rows.push(row);
        }
        let mat = Mat::from_rows(&shape.field, rows, slots * nmono);
        MFieldSolver {
            shape: *shape,
            monomials,
            mono_pos,
            solver: mat.into_solver(),
        }
    }

    /// The function `f` with `M_f = v`, as monomial coefficients.
    fn solve(&self, v: &VectorField) -> Option<Vec<(MultiIndex, Fp)>> {
        let coords = self.solver.solve(&self.flatten(v))?;
        Some(
            coords
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (self.monomials[i].clone(), Fp(c as u32)))
                .collect(),
        )
    }
}

/// A built contact-family algebra: the generic structure-constant kernel
/// plus the contact bookkeeping (basis functions, distinguished negative
/// generators, Cartan data, triangular split).
#[derive(Debug, Clone)]
pub struct ContactAlgebra {
    pub lsa: Lsa,
    pub shape: Shape,
    pub kind: ContactKind,
    /// Basis element `i` equals `M_{funcs[i]}`.
    pub funcs: Vec<SuperElement>,
    /// Indices of `M_{x_k}` for the first `2n` slots (degree -1).
    pub neg1: Vec<usize>,
    /// Index of `M_1` (degree -2).
    pub neg2: usize,
    /// Cartan subalgebra basis as coefficient vectors, with labels.
    pub cartan: Vec<(String, Vec<u8>)>,
    /// Basis of `n^+_{[0]}` as coefficient vectors.
    pub nplus: Vec<Vec<u8>>,
    /// Basis of `n^-_{[0]}` as coefficient vectors.
    pub nminus: Vec<Vec<u8>>,
    func_solver: RowSolver,
    monomials: Vec<MultiIndex>,
    mono_pos: BTreeMap<MultiIndex, usize>,
}

impl ContactAlgebra {
    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn field(&self) -> PrimeField {
        self.shape.field
    }

    /// Coefficient vector of `M_f` in the algebra basis, or `None` when
    /// `f` is not in the span of the basis functions.
    pub fn coords_of_function(&self, f: &SuperElement) -> Option<Vec<u8>> {
        let mut flat = vec![0u8; self.monomials.len()];
        for (idx, c) in f.terms() {
            flat[*self.mono_pos.get(idx)?] = c.0 as u8;
        }
        self.func_solver.solve(&flat)
    }

    /// Graded dimensions, ascending by degree.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut map = BTreeMap::new();
        for d in self.lsa.degrees() {
            *map.entry(*d).or_insert(0usize) += 1;
        }
        map
    }

    /// The paper's Cartan elements `h_j` (differences of diagonal
    /// elements), defined for `j = 0..n-1`.
    pub fn h_element(&self, j: usize) -> Option<Vec<u8>> {
        let n = self.n();
        if j + 1 >= n {
            return None;
        }
        let slots = self.shape.slots();
        let mut f = SuperElement::monomial(
            &self.shape,
            MultiIndex::unit(slots, j).plus_unit(j + n),
            Fp::ONE,
        );
        f = f.sub(&SuperElement::monomial(
            &self.shape,
            MultiIndex::unit(slots, j + 1).plus_unit(j + 1 + n),
            Fp::ONE,
        ));
        self.coords_of_function(&f)
    }
}

fn cartan_functions(shape: &Shape, kind: ContactKind) -> Vec<(String, SuperElement)> {
    let n = shape.n;
    let slots = shape.slots();
    let diag = |i: usize| -> SuperElement {
        SuperElement::monomial(
            shape,
            MultiIndex::unit(slots, i).plus_unit(i + n),
            Fp::ONE,
        )
    };
    match kind {
        ContactKind::M => {
            let mut out: Vec<(String, SuperElement)> = (0..n)
                .map(|i| (format!("h({})", i + 1), diag(i)))
                .collect();
            out.push((
                "h(z)".to_string(),
                SuperElement::generator(shape, slots - 1),
            ));
            out
        }
        ContactKind::Sm { kappa } => {
            let field = shape.field;
            let nk = field.mul(field.reduce(n as u64), kappa);
            let mut out: Vec<(String, SuperElement)> = (0..n.saturating_sub(1))
                .map(|j| {
                    (
                        format!("h({})-h({})", j + 1, j + 2),
                        diag(j).sub(&diag(j + 1)),
                    )
                })
                .collect();
            out.push((
                "h(z)+nk*h(1)".to_string(),
                SuperElement::generator(shape, slots - 1).add(&diag(0).scale(nk)),
            ));
            out
        }
    }
}

/// Multi-indices of the `n^+_{[0]}` span: `eps_i + eps_{j'}` for
/// `i < j` and `eps_k + eps_l` for `k <= l` (even slots, 0-based).
fn nplus_indices(n: usize, slots: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(MultiIndex::unit(slots, i).plus_unit(j + n));
        }
    }
    for k in 0..n {
        for l in k..n {
            out.push(MultiIndex::unit(slots, k).plus_unit(l));
        }
    }
    out.sort();
    out
}

/// Multi-indices of the `n^-_{[0]}` span: `eps_i + eps_{j'}` for
/// `j < i` and `eps_{k'} + eps_{l'}` for `k < l`.
fn nminus_indices(n: usize, slots: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..i {
            out.push(MultiIndex::unit(slots, i).plus_unit(j + n));
        }
    }
    for k in 0..n {
        for l in (k + 1)..n {
            out.push(MultiIndex::unit(slots, k + n).plus_unit(l + n));
        }
    }
    out.sort();
    out
}

fn finish_build(
    shape: Shape,
    kind: ContactKind,
    funcs: Vec<SuperElement>,
    labels: Vec<String>,
) -> Result<ContactAlgebra> {
    let field = shape.field;
    let n = shape.n;
    let slots = shape.slots();
    let dim = funcs.len();

    let monomials = shape.all_indices();
    let mono_pos: BTreeMap<MultiIndex, usize> = monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    // Function-coordinate rows of the basis; used to express arbitrary
    // functions (bracket results, p-power images) in the basis.
    let nmono = monomials.len();
    let mut func_rows = Vec::with_capacity(dim);
    for f in &funcs {
        let mut row = vec![0u8; nmono];
        for (idx, c) in f.terms() {
            row[mono_pos[idx]] = c.0 as u8;
        }
        func_rows.push(row);
    }
    let func_solver = Mat::from_rows(&field, func_rows, nmono).into_solver();

    let express = |f: &SuperElement| -> Result<SparseVec> {
        let mut flat = vec![0u8; nmono];
        for (idx, c) in f.terms() {
            flat[mono_pos[idx]] = c.0 as u8;
        }
        let coords = func_solver.solve(&flat).ok_or_else(|| {
            Error::Construction(format!(
                "bracket or p-power image escapes the algebra span: {}",
                label_of_function(f)
            ))
        })?;
        Ok(coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i as u32, Fp(c as u32)))
            .collect())
    };

    let parity: Vec<Parity> = funcs
        .iter()
        .map(|f| {
            f.homogeneous_parity()
                .expect("basis functions are homogeneous")
                .flip()
        })
        .collect();
    let degree: Vec<i64> = funcs
        .iter()
        .map(|f| f.homogeneous_norm().expect("basis functions are graded") as i64 - 2)
        .collect();

    // Structure constants from the contact bracket on functions.
    let mut sc: Vec<SparseVec> = Vec::with_capacity(dim * dim);
    for fi in &funcs {
        for fj in &funcs {
            let br = contact_bracket(fi, fj)?;
            sc.push(express(&br)?);
        }
    }

    // p-mapping: the associative p-power of the vector field, re-expressed
    // first as M_f, then in the basis.
    let msolver = MFieldSolver::new(&shape);
    let mut pmap: Vec<Option<SparseVec>> = Vec::with_capacity(dim);
    for (i, f) in funcs.iter().enumerate() {
        if parity[i].is_odd() {
            pmap.push(None);
            continue;
        }
        let power = m_field(f)?.p_power()?;
        let img = msolver.solve(&power).ok_or_else(|| {
            Error::Construction(format!(
                "p-power of {} is not a contact field",
                labels[i]
            ))
        })?;
        let mut g = SuperElement::zero(&shape);
        for (idx, c) in img {
            g.add_term(idx, c);
        }
        pmap.push(Some(express(&g)?));
    }

    let lsa = Lsa::from_bracket_fn(
        field,
        labels,
        parity,
        degree,
        |i, j| sc[i * dim + j].clone(),
        |i| pmap[i].clone(),
    );

    // Distinguished negative generators.
    let coords = |f: &SuperElement| -> Result<Vec<u8>> {
        let sv = express(f)?;
        let mut v = vec![0u8; dim];
        for (k, c) in sv {
            v[k as usize] = c.0 as u8;
        }
        Ok(v)
    };
    let index_of = |f: &SuperElement| -> Result<usize> {
        let v = coords(f)?;
        let nz: Vec<usize> = (0..dim).filter(|&k| v[k] != 0).collect();
        if nz.len() == 1 && v[nz[0]] == 1 {
            Ok(nz[0])
        } else {
            Err(Error::Construction(
                "negative-part generator is not a basis element".into(),
            ))
        }
    };
    let neg1: Vec<usize> = (0..2 * n)
        .map(|k| index_of(&SuperElement::generator(&shape, k)))
        .collect::<Result<_>>()?;
    let neg2 = index_of(&SuperElement::one(&shape))?;

    let cartan = cartan_functions(&shape, kind)
        .into_iter()
        .map(|(lab, f)| Ok((lab, coords(&f)?)))
        .collect::<Result<Vec<_>>>()?;

    let nplus = nplus_indices(n, slots)
        .into_iter()
        .map(|idx| coords(&SuperElement::monomial(&shape, idx, Fp::ONE)))
        .collect::<Result<Vec<_>>>()?;
    let nminus = nminus_indices(n, slots)
        .into_iter()
        .map(|idx| coords(&SuperElement::monomial(&shape, idx, Fp::ONE)))
        .collect::<Result<Vec<_>>>()?;

    Ok(ContactAlgebra {
        lsa,
        shape,
        kind,
        funcs,
        neg1,
        neg2,
        cartan,
        nplus,
        nminus,
        func_solver,
        monomials,
        mono_pos,
    })
}

/// Builds the odd contact algebra `m(n)` over `F_p`: basis
/// `{ M_{x^(r)} }`, bracket from the contact bracket, parity `|r| + 1`,
/// degree `|r|-norm - 2`, p-mapping by associative p-th powers.
pub fn build_m(n: usize, field: PrimeField) -> Result<ContactAlgebra> {
    let shape = Shape::contact(n, field);
    let mut monomials = shape.all_indices();
    monomials.sort_by_key(|r| (r.norm(&shape), r.clone()));
    let funcs: Vec<SuperElement> = monomials
        .iter()
        .map(|r| SuperElement::monomial(&shape, r.clone(), Fp::ONE))
        .collect();
    let labels = monomials.iter().map(label_of).collect();
    finish_build(shape, ContactKind::M, funcs, labels)
}

/// Builds `sm(n; kappa)` as the degreewise kernel of `div_kappa` inside
/// `m(n)`, in canonical reduced-echelon basis with columns ordered by
/// lexicographic multi-index.
pub fn build_sm(n: usize, kappa: Fp, field: PrimeField) -> Result<ContactAlgebra> {
    let shape = Shape::contact(n, field);
    let all = shape.all_indices();
    let mut by_norm: BTreeMap<u64, Vec<MultiIndex>> = BTreeMap::new();
    for r in &all {
        by_norm.entry(r.norm(&shape)).or_default().push(r.clone());
    }
    let mut funcs: Vec<SuperElement> = Vec::new();
    for (norm, cols) in &by_norm {
        // Rows: monomials of norm - 2 (the divergence drops the norm by 2).
        let rows: Vec<MultiIndex> = if *norm >= 2 {
            by_norm.get(&(norm - 2)).cloned().unwrap_or_default()
        } else {
            Vec::new()
        };
        let row_pos: BTreeMap<&MultiIndex, usize> =
            rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = Mat::zeros(&field, rows.len().max(1), cols.len());
        for (j, r) in cols.iter().enumerate() {
            let image = div_kappa(
                &SuperElement::monomial(&shape, r.clone(), Fp::ONE),
                kappa,
            )?;
            for (idx, c) in image.terms() {
                let i = *row_pos.get(idx).expect("divergence drops norm by 2");
                mat.set(i, j, c);
            }
        }
        let kernel = mat.nullspace();
        for k in 0..kernel.nrows() {
            let mut f = SuperElement::zero(&shape);
            for (j, r) in cols.iter().enumerate() {
                let c = kernel.get(k, j);
                if !c.is_zero() {
                    f.add_term(r.clone(), c);
                }
            }
            funcs.push(f);
        }
    }
    let labels = funcs.iter().map(label_of_function).collect();
    finish_build(shape, ContactKind::Sm { kappa }, funcs, labels)
}

/// Simultaneous-eigenspace root decomposition of `g` under the adjoint
/// action of its Cartan basis.
#[derive(Debug, Clone)]
pub struct RootDecomposition {
    /// Root tuple (one value per Cartan basis vector) -> eigenspace basis.
    pub spaces: BTreeMap<Vec<u32>, Vec<Vec<u8>>>,
    /// The joint 0-eigenspace (should match the Cartan for a genuine
    /// Cartan subalgebra; flagged otherwise).
    pub zero_space: Vec<Vec<u8>>,
    /// True when the zero root space equals the span of the Cartan basis.
    pub zero_is_cartan: bool,
}

/// Computes the root space decomposition with respect to the stored
/// Cartan basis. Fails if a Cartan element acts non-semisimply.
pub fn cartan_and_roots(ca: &ContactAlgebra) -> Result<RootDecomposition> {
    let g = &ca.lsa;
    let field = *g.field();
    let dim = g.dim();
    // Start from the full space and refine by each Cartan element.
    let mut pieces: Vec<(Vec<u32>, Vec<Vec<u8>>)> = vec![(
        Vec::new(),
        (0..dim)
            .map(|i| {
                let mut v = vec![0u8; dim];
                v[i] = 1;
                v
            })
            .collect(),
    )];
    for (_, h) in &ca.cartan {
        let ad = g.ad_vector(h);
        let mut next = Vec::new();
        for (tuple, basis) in &pieces {
            let mut covered = 0usize;
            for lambda in 0..field.p() {
                // v in span(basis) with ad(v) = lambda v: columns of
                // (ad - lambda) b_t, nullspace in the x coordinates.
                let mut m = Mat::zeros(&field, dim, basis.len());
                for (t, b) in basis.iter().enumerate() {
                    let mut col = ad.matvec(b);
                    for (r, c) in col.iter_mut().enumerate() {
                        let scaled =
                            field.sub(Fp(*c as u32), field.mul(Fp(lambda), Fp(b[r] as u32)));
                        *c = scaled.0 as u8;
                    }
                    for r in 0..dim {
                        m.set(r, t, Fp(col[r] as u32));
                    }
                }
                let ns = m.nullspace();
                if ns.nrows() == 0 {
                    continue;
                }
                let mut sub = Vec::new();
                for k in 0..ns.nrows() {
                    let mut v = vec![0u8; dim];
                    for (t, b) in basis.iter().enumerate() {
                        let c = ns.get(k, t);
                        if !c.is_zero() {
                            let bar = field;
                            for r in 0..dim {
                                v[r] = bar.add(Fp(v[r] as u32), bar.mul(c, Fp(b[r] as u32))).0
                                    as u8;
                            }
                        }
                    }
                    sub.push(v);
                }
                covered += sub.len();
                let mut t = tuple.clone();
                t.push(lambda);
                next.push((t, sub));
            }
            if covered != basis.len() {
                return Err(Error::Construction(
                    "Cartan element acts non-semisimply".into(),
                ));
            }
        }
        pieces = next;
    }
    let mut spaces = BTreeMap::new();
    let mut zero_space = Vec::new();
    for (tuple, basis) in pieces {
        // canonicalize each eigenspace
        let mut rs = RowSpace::new(&field, dim);
        for b in &basis {
            rs.insert(b);
        }
        let canon = rs.basis();
        if tuple.iter().all(|&v| v == 0) {
            zero_space = canon;
        } else {
            spaces.insert(tuple, canon);
        }
    }
    let mut cartan_span = RowSpace::new(&field, dim);
    for (_, h) in &ca.cartan {
        cartan_span.insert(h);
    }
    let mut zero_span = RowSpace::new(&field, dim);
    for v in &zero_space {
        zero_span.insert(v);
    }
    let zero_is_cartan = cartan_span.same_space(&zero_span);
    Ok(RootDecomposition {
        spaces,
        zero_space,
        zero_is_cartan,
    })
}

/// The triangular decomposition of the degree-0 part:
/// `g_{[0]} = n^- + cartan + n^+`.
#[derive(Debug, Clone)]
pub struct TriangularSplit {
    pub nminus: Vec<Vec<u8>>,
    pub cartan: Vec<Vec<u8>>,
    pub nplus: Vec<Vec<u8>>,
}

/// Returns the split and checks that the three spans are independent and
/// fill the degree-0 piece, and that `n^{+/-}` are nilpotent subalgebras.
pub fn triangular_split(ca: &ContactAlgebra) -> Result<TriangularSplit> {
    let g = &ca.lsa;
    let field = *g.field();
    let dim = g.dim();
    let mut all = RowSpace::new(&field, dim);
    for v in ca
        .nminus
        .iter()
        .chain(ca.cartan.iter().map(|(_, v)| v))
        .chain(ca.nplus.iter())
    {
        if !all.insert(v) {
            return Err(Error::Construction(
                "triangular pieces are not independent".into(),
            ));
        }
    }
    let degree_zero = g.graded_piece(0).len();
    if all.dim() != degree_zero {
        return Err(Error::Construction(format!(
            "triangular pieces span {} of {} degree-0 dimensions",
            all.dim(),
            degree_zero
        )));
    }
    for part in [&ca.nminus, &ca.nplus] {
        if !is_nilpotent_subalgebra(g, part) {
            return Err(Error::Construction(
                "triangular nil-part is not a nilpotent subalgebra".into(),
            ));
        }
    }
    Ok(TriangularSplit {
        nminus: ca.nminus.clone(),
        cartan: ca.cartan.iter().map(|(_, v)| v.clone()).collect(),
        nplus: ca.nplus.clone(),
    })
}

fn is_nilpotent_subalgebra(g: &Lsa, basis: &[Vec<u8>]) -> bool {
    let field = *g.field();
    let mut span = RowSpace::new(&field, g.dim());
    for v in basis {
        span.insert(v);
    }
    // closed under bracket?
    for a in basis {
        for b in basis {
            if !span.contains(&g.bracket(a, b)) {
                return false;
            }
        }
    }
    // lower central series terminates?
    let mut current: Vec<Vec<u8>> = basis.to_vec();
    for _ in 0..=g.dim() {
        let mut next = RowSpace::new(&field, g.dim());
        for a in basis {
            for b in &current {
                next.insert(&g.bracket(a, b));
            }
        }
        if next.dim() == 0 {
            return true;
        }
        current = next.basis();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape15() -> Shape {
        Shape::contact(1, PrimeField::new(5).unwrap())
    }

    fn mono(shape: &Shape, e: &[u8]) -> SuperElement {
        SuperElement::monomial(shape, MultiIndex::new(e.to_vec()), Fp::ONE)
    }

    #[test]
    fn euler_examples() {
        let s = shape15();
        assert!(euler(&SuperElement::one(&s)).is_zero());
        // the contact variable does not count
        assert!(euler(&SuperElement::generator(&s, 2)).is_zero());
        assert_eq!(
            euler(&mono(&s, &[2, 0, 0])),
            mono(&s, &[2, 0, 0]).scale(Fp(2))
        );
    }

    #[test]
    fn le_field_examples() {
        let s = shape15();
        assert!(le_field(&SuperElement::one(&s)).unwrap().is_zero());
        // Le_{x_1} = ∂_{1'}
        let le = le_field(&SuperElement::generator(&s, 0)).unwrap();
        let comps: Vec<_> = le.components().collect();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0, 1);
        assert_eq!(*comps[0].1, SuperElement::one(&s));
        // Le of the contact variable vanishes
        assert!(le_field(&SuperElement::generator(&s, 2)).unwrap().is_zero());
    }

    #[test]
    fn m_field_examples() {
        let s = shape15();
        // M_1 = 2 ∂_{2n}
        let m1 = m_field(&SuperElement::one(&s)).unwrap();
        let comps: Vec<_> = m1.components().collect();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0, 2);
        assert_eq!(*comps[0].1, SuperElement::one(&s).scale(Fp(2)));
        assert_eq!(m1.parity(), Parity::Odd);
        // M_{x_{2n}} = 2 x_{2n} ∂_{2n} + E
        let mz = m_field(&SuperElement::generator(&s, 2)).unwrap();
        assert_eq!(
            mz.component(2).unwrap().clone(),
            SuperElement::generator(&s, 2).scale(Fp(2))
        );
        assert_eq!(mz.component(0).unwrap().clone(), SuperElement::generator(&s, 0));
        assert_eq!(mz.component(1).unwrap().clone(), SuperElement::generator(&s, 1));
        // degree of M_{x^(e1+e2)} is 0: norm 2
        assert_eq!(mono(&s, &[1, 1, 0]).homogeneous_norm(), Some(2));
    }

    #[test]
    fn contact_bracket_examples() {
        let s = shape15();
        let one = SuperElement::one(&s);
        let z = SuperElement::generator(&s, 2);
        assert!(contact_bracket(&one, &one).unwrap().is_zero());
        assert_eq!(contact_bracket(&one, &z).unwrap(), one.scale(Fp(2)));
        assert!(contact_bracket(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn div_kappa_examples() {
        let s = shape15();
        let field = s.field;
        for k in 0..5u32 {
            let kappa = Fp(k);
            assert!(div_kappa(&SuperElement::one(&s), kappa).unwrap().is_zero());
            // div(x_{2n}) = 2 n kappa (constant)
            let d = div_kappa(&SuperElement::generator(&s, 2), kappa).unwrap();
            let want = SuperElement::one(&s).scale(field.mul(Fp(2), kappa));
            assert_eq!(d, want);
            // the Cartan representative is divergence-free
            let f = SuperElement::generator(&s, 2)
                .add(&mono(&s, &[1, 1, 0]).scale(kappa));
            assert!(div_kappa(&f, kappa).unwrap().is_zero());
        }
    }

    #[test]
    fn build_m_15_shape() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        assert_eq!(ca.lsa.dim(), 20);
        let dims: Vec<usize> = ca.graded_dims().values().copied().collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 4, 3, 2, 1]);
        // [M_1, M_{x_z}] = 2 M_1
        let m1 = ca.neg2;
        let z = ca
            .coords_of_function(&SuperElement::generator(&ca.shape, 2))
            .unwrap();
        let mut e1 = vec![0u8; 20];
        e1[m1] = 1;
        let br = ca.lsa.bracket(&e1, &z);
        let mut want = vec![0u8; 20];
        want[m1] = 2;
        assert_eq!(br, want);
    }

    #[test]
    fn build_m_15_axioms_and_triangular() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        assert!(ca.lsa.verify_jacobi().is_empty());
        assert!(ca.lsa.verify_restricted().is_empty());
        let split = triangular_split(&ca).unwrap();
        assert_eq!(split.nminus.len(), 0);
        assert_eq!(split.cartan.len(), 2);
        assert_eq!(split.nplus.len(), 1);
        let roots = cartan_and_roots(&ca).unwrap();
        assert!(roots.zero_is_cartan);
        let total: usize = roots.spaces.values().map(|v| v.len()).sum();
        assert_eq!(total + roots.zero_space.len(), 20);
    }

    #[test]
    fn build_sm_15_shape() {
        let field = PrimeField::new(5).unwrap();
        for k in [0u32, 2] {
            let ca = build_sm(1, Fp(k), field).unwrap();
            assert_eq!(ca.lsa.dim(), 10, "kappa = {k}");
            let dims: Vec<usize> = ca.graded_dims().values().copied().collect();
            assert_eq!(dims, vec![1, 2, 2, 2, 2, 1], "kappa = {k}");
            assert!(ca.lsa.verify_jacobi().is_empty());
            assert!(ca.lsa.verify_restricted().is_empty());
        }
        // kappa = 1 is a jump value at (n, p) = (1, 5): the monomial
        // x_{1'} x_z is divergence-free on its own, so the degree-1 piece
        // gains a dimension.
        let ca = build_sm(1, Fp(1), field).unwrap();
        assert_eq!(ca.lsa.dim(), 11);
        let dims: Vec<usize> = ca.graded_dims().values().copied().collect();
        assert_eq!(dims, vec![1, 2, 2, 3, 2, 1]);
        assert!(ca.lsa.verify_jacobi().is_empty());
    }

    #[test]
    fn sm_cartan_membership() {
        let field = PrimeField::new(5).unwrap();
        for k in [0u32, 1, 2] {
            let ca = build_sm(1, Fp(k), field).unwrap();
            assert_eq!(ca.cartan.len(), 1);
            // negative generators exist as basis elements
            assert_eq!(ca.neg1.len(), 2);
        }
        let ca = build_sm(2, Fp(1), field).unwrap();
        assert_eq!(ca.cartan.len(), 2);
        assert!(ca.h_element(0).is_some());
    }
}
