//! Generic kernel for finite-dimensional restricted Z-graded Lie
//! superalgebras presented by structure constants.
//!
//! An [`Lsa`] owns its bracket table: brackets of basis elements are
//! computed once at construction time and everything afterwards (axiom
//! verification, ideal closures, filtrations, ad-matrices) is table
//! lookups plus exact linear algebra. Subspaces are canonical reduced
//! row echelon bases, so subspace equality is matrix comparison.

use std::collections::BTreeMap;

use crate::dps::{koszul_sign, Parity};
use crate::field::{Fp, PrimeField};
use crate::linalg::{Mat, RowSpace};
use crate::{worker_threads, Error, Result};

/// Sparse coefficient vector over the algebra basis.
pub type SparseVec = Vec<(u32, Fp)>;

/// A finite-dimensional restricted Z-graded Lie superalgebra given by a
/// labeled basis, parities, degrees, sparse structure constants and a
/// p-mapping table on even basis elements.
#[derive(Debug, Clone)]
pub struct Lsa {
    field: PrimeField,
    dim: usize,
    labels: Vec<String>,
    parity: Vec<Parity>,
    degree: Vec<i64>,
    sc: Vec<SparseVec>,
    pmap: Vec<Option<SparseVec>>,
}

/// One Jacobi or restrictedness violation, for fault reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub indices: Vec<usize>,
    pub what: String,
}

impl Lsa {
    /// Builds the algebra from a bracket oracle on basis pairs.
    pub fn from_bracket_fn(
        field: PrimeField,
        labels: Vec<String>,
        parity: Vec<Parity>,
        degree: Vec<i64>,
        mut bracket: impl FnMut(usize, usize) -> SparseVec,
        mut pmap: impl FnMut(usize) -> Option<SparseVec>,
    ) -> Lsa {
        let dim = labels.len();
        assert_eq!(parity.len(), dim);
        assert_eq!(degree.len(), dim);
        let mut sc = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut v = bracket(i, j);
                v.retain(|(_, c)| !c.is_zero());
                v.sort_by_key(|&(k, _)| k);
                sc.push(v);
            }
        }
        let pmap = (0..dim)
            .map(|i| {
                if parity[i].is_odd() {
                    None
                } else {
                    pmap(i)
                }
            })
            .collect();
        Lsa {
            field,
            dim,
            labels,
            parity,
            degree,
            sc,
            pmap,
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degree[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degree
    }

    pub fn min_degree(&self) -> i64 {
        self.degree.iter().copied().min().unwrap_or(0)
    }

    pub fn top_degree(&self) -> i64 {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Basis indices per degree, ascending.
    pub fn degree_map(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut map: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &d) in self.degree.iter().enumerate() {
            map.entry(d).or_default().push(i);
        }
        map
    }

    pub fn graded_piece(&self, d: i64) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.degree[i] == d).collect()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.sc[i * self.dim + j]
    }

    pub fn pmap(&self, i: usize) -> Option<&SparseVec> {
        self.pmap[i].as_ref()
    }

    /// Replaces one structure constant entry (fault injection in tests).
    pub fn corrupt_sc(&mut self, i: usize, j: usize, entry: SparseVec) {
        self.sc[i * self.dim + j] = entry;
    }

    /// Zeroes the p-mapping of one basis element (fault injection).
    pub fn corrupt_pmap(&mut self, i: usize) {
        self.pmap[i] = Some(Vec::new());
    }

    /// Parity of a homogeneous coefficient vector; `None` when mixed.
    pub fn vector_parity(&self, v: &[u8]) -> Option<Parity> {
        let mut par = None;
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                match par {
                    None => par = Some(self.parity[i]),
                    Some(p) if p == self.parity[i] => {}
                    _ => return None,
                }
            }
        }
        Some(par.unwrap_or(Parity::Even))
    }

    /// Bilinear extension of the structure constants to coefficient
    /// vectors of length `dim`.
    pub fn bracket(&self, u: &[u8], v: &[u8]) -> Vec<u8> {
        assert_eq!(u.len(), self.dim, "length mismatch");
        assert_eq!(v.len(), self.dim, "length mismatch");
        let mut acc = vec![0u64; self.dim];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a as u64 * b as u64;
                for &(k, c) in self.bracket_basis(i, j) {
                    acc[k as usize] += ab * c.0 as u64;
                }
            }
        }
        acc.into_iter()
            .map(|x| (x % self.field.p() as u64) as u8)
            .collect()
    }

    /// Sparse bracket of two sparse vectors.
    pub fn bracket_sparse(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<u32, u64> = BTreeMap::new();
        for &(i, a) in u {
            for &(j, b) in v {
                let ab = a.0 as u64 * b.0 as u64 % self.field.p() as u64;
                for &(k, c) in self.bracket_basis(i as usize, j as usize) {
                    *acc.entry(k).or_insert(0) += ab * c.0 as u64;
                }
            }
        }
        acc.into_iter()
            .filter_map(|(k, x)| {
                let r = (x % self.field.p() as u64) as u32;
                (r != 0).then_some((k, Fp(r)))
            })
            .collect()
    }

    /// `ad(e_i)` as a dense matrix (columns are `[e_i, e_j]`).
    pub fn ad_basis(&self, i: usize) -> Mat {
        let mut m = Mat::zeros(&self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for &(k, c) in self.bracket_basis(i, j) {
                m.set(k as usize, j, c);
            }
        }
        m
    }

    /// `ad(v)` for a coefficient vector.
    pub fn ad_vector(&self, v: &[u8]) -> Mat {
        let mut m = Mat::zeros(&self.field, self.dim, self.dim);
        for j in 0..self.dim {
            let mut ej = vec![0u8; self.dim];
            ej[j] = 1;
            let col = self.bracket(v, &ej);
            for (k, &c) in col.iter().enumerate() {
                if c != 0 {
                    m.set(k, j, Fp(c as u32));
                }
            }
        }
        m
    }

    /// Exhaustive check of antisupersymmetry, degree additivity and the
    /// super Jacobi identity on all basis triples. Empty report = pass.
    pub fn verify_jacobi(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        // antisupersymmetry and degree additivity on pairs
        for i in 0..self.dim {
            for j in 0..self.dim {
                let sign = koszul_sign(&self.field, self.parity[i], self.parity[j]);
                let lhs = self.bracket_basis(i, j);
                let rhs = self.bracket_basis(j, i);
                let mut neg: SparseVec = rhs
                    .iter()
                    .map(|&(k, c)| (k, self.field.neg(self.field.mul(c, sign))))
                    .collect();
                neg.sort_by_key(|&(k, _)| k);
                if *lhs != neg {
                    violations.push(Violation {
                        indices: vec![i, j],
                        what: "antisupersymmetry".into(),
                    });
                }
                for &(k, _) in lhs {
                    if self.degree[k as usize] != self.degree[i] + self.degree[j] {
                        violations.push(Violation {
                            indices: vec![i, j, k as usize],
                            what: "degree additivity".into(),
                        });
                    }
                }
            }
        }
        // super Jacobi in derivation form:
        // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
        let workers = worker_threads().max(1);
        let chunk = self.dim.div_ceil(workers);
        let mut per_worker: Vec<Vec<Violation>> = Vec::new();
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..workers {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(self.dim);
                let alg = &*self;
                handles.push(scope.spawn(move || {
                    let mut out = Vec::new();
                    for a in lo..hi {
                        for b in 0..alg.dim {
                            let sign = koszul_sign(&alg.field, alg.parity[a], alg.parity[b]);
                            let ab = alg.bracket_basis(a, b).clone();
                            for c in 0..alg.dim {
                                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                                for &(k, x) in alg.bracket_basis(b, c) {
                                    for &(l, y) in alg.bracket_basis(a, k as usize) {
                                        *acc.entry(l).or_insert(0) += x.0 as i64 * y.0 as i64;
                                    }
                                }
                                for &(k, x) in &ab {
                                    for &(l, y) in alg.bracket_basis(k as usize, c) {
                                        *acc.entry(l).or_insert(0) -= x.0 as i64 * y.0 as i64;
                                    }
                                }
                                for &(k, x) in alg.bracket_basis(a, c) {
                                    for &(l, y) in alg.bracket_basis(b, k as usize) {
                                        *acc.entry(l).or_insert(0) -=
                                            sign.0 as i64 * (x.0 as i64 * y.0 as i64);
                                    }
                                }
                                if acc
                                    .values()
                                    .any(|&v| v.rem_euclid(alg.field.p() as i64) != 0)
                                {
                                    out.push(Violation {
                                        indices: vec![a, b, c],
                                        what: "super Jacobi".into(),
                                    });
                                }
                            }
                        }
                    }
                    out
                }));
            }
            for h in handles {
                per_worker.push(h.join().expect("jacobi worker"));
            }
        });
        for mut v in per_worker {
            violations.append(&mut v);
        }
        violations.sort_by(|a, b| (&a.indices, &a.what).cmp(&(&b.indices, &b.what)));
        violations
    }

    /// Checks `ad(pmap(i)) = ad(e_i)^p` for every even basis element.
    /// Empty report = pass.
    pub fn verify_restricted(&self) -> Vec<Violation> {
        let p = self.field.p() as u64;
        let mut violations = Vec::new();
        for i in 0..self.dim {
            if self.parity[i].is_odd() {
                continue;
            }
            let Some(img) = self.pmap(i) else {
                violations.push(Violation {
                    indices: vec![i],
                    what: "missing p-mapping entry".into(),
                });
                continue;
            };
            let adp = self.ad_basis(i).pow(p);
            let mut v = vec![0u8; self.dim];
            for &(k, c) in img {
                v[k as usize] = c.0 as u8;
            }
            let adimg = self.ad_vector(&v);
            if adp != adimg {
                violations.push(Violation {
                    indices: vec![i],
                    what: "ad(x^[p]) differs from ad(x)^p".into(),
                });
            }
        }
        violations
    }

    /// Smallest subspace containing `seed` and closed under bracketing
    /// with all basis elements, by iterated spin and echelon reduction.
    pub fn ideal_closure(&self, seed: &[Vec<u8>]) -> RowSpace {
        let mut space = RowSpace::new(&self.field, self.dim);
        let mut queue: Vec<Vec<u8>> = Vec::new();
        for v in seed {
            if space.insert(v) {
                queue.push(v.clone());
            }
        }
        let mut ei = vec![0u8; self.dim];
        while let Some(v) = queue.pop() {
            if space.is_full() {
                break;
            }
            for i in 0..self.dim {
                ei[i] = 1;
                let w = self.bracket(&ei, &v);
                ei[i] = 0;
                if space.insert(&w) {
                    queue.push(w);
                }
            }
        }
        space
    }

    /// k-fold derived subspace, iterating `S -> span[S, S]` from `S = g`.
    pub fn derived_subalgebra(&self, k: usize) -> RowSpace {
        let mut space = RowSpace::new(&self.field, self.dim);
        for i in 0..self.dim {
            let mut v = vec![0u8; self.dim];
            v[i] = 1;
            space.insert(&v);
        }
        for _ in 0..k {
            let basis = space.basis();
            let mut next = RowSpace::new(&self.field, self.dim);
            for a in &basis {
                for b in &basis {
                    next.insert(&self.bracket(a, b));
                }
            }
            space = next;
        }
        space
    }

    /// Filtration piece `g^i = sum of graded pieces of degree >= i`.
    pub fn filtration_piece(&self, i: i64) -> RowSpace {
        let mut space = RowSpace::new(&self.field, self.dim);
        for j in 0..self.dim {
            if self.degree[j] >= i {
                let mut v = vec![0u8; self.dim];
                v[j] = 1;
                space.insert(&v);
            }
        }
        space
    }

    /// Extracts the subalgebra spanned by a set of basis indices, which
    /// must be bracket-closed (panics otherwise). Returns the sub-algebra
    /// and the map from new indices to old ones.
    pub fn sub_from_indices(&self, indices: &[usize]) -> (Lsa, Vec<usize>) {
        let mut old_to_new: BTreeMap<usize, usize> = BTreeMap::new();
        for (new, &old) in indices.iter().enumerate() {
            old_to_new.insert(old, new);
        }
        let remap = |v: &SparseVec| -> SparseVec {
            v.iter()
                .map(|&(k, c)| {
                    let nk = *old_to_new
                        .get(&(k as usize))
                        .expect("index set is not bracket-closed");
                    (nk as u32, c)
                })
                .collect()
        };
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let parity = indices.iter().map(|&i| self.parity[i]).collect();
        let degree = indices.iter().map(|&i| self.degree[i]).collect();
        let sub = Lsa::from_bracket_fn(
            self.field,
            labels,
            parity,
            degree,
            |i, j| remap(self.bracket_basis(indices[i], indices[j])),
            |i| self.pmap(indices[i]).map(|v| remap(v)),
        );
        (sub, indices.to_vec())
    }
}

/// The one-parameter family of grading automorphisms: the element of
/// `Aut*(g)` scaling a degree-`d` basis vector by `c^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradingAut {
    c: Fp,
}

impl GradingAut {
    pub fn new(field: &PrimeField, c: Fp) -> Result<GradingAut> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let _ = field;
        Ok(GradingAut { c })
    }

    pub fn identity() -> GradingAut {
        GradingAut { c: Fp::ONE }
    }

    pub fn c(&self) -> Fp {
        self.c
    }

    fn scale_at_degree(&self, g: &Lsa, d: i64) -> Fp {
        let field = g.field();
        if d >= 0 {
            field.pow(self.c, d as u64)
        } else {
            let inv = field.inv(self.c).expect("c nonzero");
            field.pow(inv, (-d) as u64)
        }
    }

    /// Applies the automorphism to a coefficient vector.
    pub fn apply(&self, g: &Lsa, v: &[u8]) -> Vec<u8> {
        let field = g.field();
        v.iter()
            .enumerate()
            .map(|(i, &x)| {
                let s = self.scale_at_degree(g, g.degree(i));
                field.mul(Fp(x as u32), s).0 as u8
            })
            .collect()
    }

    /// Group law: `compose(c, c') = GradingAut(c * c')`.
    pub fn compose(&self, g: &Lsa, other: &GradingAut) -> GradingAut {
        GradingAut {
            c: g.field().mul(self.c, other.c),
        }
    }
}

/// A p-character: a linear functional on the even part of `g`, extended
/// by zero on the odd part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PChar {
    values: Vec<Fp>,
}

impl PChar {
    pub fn zero(g: &Lsa) -> PChar {
        PChar {
            values: vec![Fp::ZERO; g.dim()],
        }
    }

    /// Builds from per-basis values; values on odd basis elements must be
    /// zero.
    pub fn from_values(g: &Lsa, values: Vec<Fp>) -> Result<PChar> {
        assert_eq!(values.len(), g.dim());
        for (i, v) in values.iter().enumerate() {
            if g.parity(i).is_odd() && !v.is_zero() {
                return Err(Error::Construction(format!(
                    "p-character must vanish on odd basis element {}",
                    g.label(i)
                )));
            }
        }
        Ok(PChar { values })
    }

    /// Dual functional of a single even basis element.
    pub fn dual(g: &Lsa, i: usize, c: Fp) -> Result<PChar> {
        let mut values = vec![Fp::ZERO; g.dim()];
        values[i] = c;
        Self::from_values(g, values)
    }

    pub fn values(&self) -> &[Fp] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn eval_basis(&self, i: usize) -> Fp {
        self.values[i]
    }

    pub fn eval(&self, field: &PrimeField, v: &[u8]) -> Fp {
        let mut acc = Fp::ZERO;
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                acc = field.add(acc, field.mul(Fp(c as u32), self.values[i]));
            }
        }
        acc
    }

    pub fn eval_sparse(&self, field: &PrimeField, v: &SparseVec) -> Fp {
        let mut acc = Fp::ZERO;
        for &(i, c) in v {
            acc = field.add(acc, field.mul(c, self.values[i as usize]));
        }
        acc
    }

    /// Coadjoint action `(Phi . chi)(x) = chi(Phi^{-1} x)`.
    pub fn coadjoint(&self, g: &Lsa, aut: &GradingAut) -> PChar {
        let field = g.field();
        let cinv = field.inv(aut.c()).expect("c nonzero");
        let inv = GradingAut { c: cinv };
        let values = (0..g.dim())
            .map(|i| field.mul(self.values[i], inv.scale_at_degree(g, g.degree(i))))
            .collect();
        PChar { values }
    }
}

/// p-power of an arbitrary even coefficient vector, by folding in one
/// basis element at a time with Jacobson's formula:
/// `(x + y)^[p] = x^[p] + y^[p] + sum_i s_i(x, y)` where `i s_i` is the
/// `t^{i-1}` coefficient of `ad(tx + y)^{p-1}(x)`.
///
/// Returns `None` when a required basis p-mapping entry is missing.
pub fn pmap_of_vector(g: &Lsa, v: &[u8]) -> Option<Vec<u8>> {
    let field = *g.field();
    let p = field.p() as usize;
    let dim = g.dim();
    let mut acc_elt: Option<Vec<u8>> = None; // the partial sum as an element
    let mut acc_pow = vec![0u8; dim]; // its p-power
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        debug_assert!(!g.parity(i).is_odd(), "p-power of an odd vector");
        let img = g.pmap(i)?;
        // (c e_i)^[p] = c^p e_i^[p] = c e_i^[p] over F_p.
        let mut x = vec![0u8; dim];
        x[i] = c;
        let mut xp = vec![0u8; dim];
        for &(k, s) in img {
            xp[k as usize] = field.mul(Fp(c as u32), s).0 as u8;
        }
        match acc_elt.take() {
            None => {
                acc_elt = Some(x);
                acc_pow = xp;
            }
            Some(y) => {
                // fold: (x + y)^[p]
                let adx = g.ad_vector(&x);
                let ady = g.ad_vector(&y);
                // polynomial coefficients of ad(tx + y)^{p-1}(x) in t
                let mut coeff: Vec<Vec<u8>> = vec![vec![0u8; dim]; p];
                coeff[0] = x.clone();
                for _ in 0..p - 1 {
                    let mut next: Vec<Vec<u8>> = vec![vec![0u8; dim]; p];
                    for k in 0..p {
                        let mut w = ady.matvec(&coeff[k]);
                        if k > 0 {
                            let shifted = adx.matvec(&coeff[k - 1]);
                            for (a, b) in w.iter_mut().zip(shifted.iter()) {
                                *a = field.add(Fp(*a as u32), Fp(*b as u32)).0 as u8;
                            }
                        }
                        next[k] = w;
                    }
                    coeff = next;
                }
                let mut total = vec![0u8; dim];
                for (a, (xa, ya)) in total.iter_mut().zip(xp.iter().zip(acc_pow.iter())) {
                    *a = field.add(Fp(*xa as u32), Fp(*ya as u32)).0 as u8;
                }
                for i_s in 1..p {
                    let inv = field.inv(field.reduce(i_s as u64)).expect("i < p");
                    for (a, &cf) in total.iter_mut().zip(coeff[i_s - 1].iter()) {
                        *a = field
                            .add(Fp(*a as u32), field.mul(inv, Fp(cf as u32)))
                            .0 as u8;
                    }
                }
                let mut sum = vec![0u8; dim];
                for (s, (xa, ya)) in sum.iter_mut().zip(x.iter().zip(y.iter())) {
                    *s = field.add(Fp(*xa as u32), Fp(*ya as u32)).0 as u8;
                }
                acc_elt = Some(sum);
                acc_pow = total;
            }
        }
    }
    Some(acc_pow)
}

/// Height of a p-character: `min { i : chi(g^i) = 0 }`.
pub fn height(g: &Lsa, chi: &PChar) -> i64 {
    let mut top: Option<i64> = None;
    for i in 0..g.dim() {
        if !chi.eval_basis(i).is_zero() {
            top = Some(top.map_or(g.degree(i), |t: i64| t.max(g.degree(i))));
        }
    }
    match top {
        None => g.min_degree(),
        Some(t) => t + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// sl(2) over F_5 as a plain Lie algebra (all even): e, h, f.
    fn sl2() -> Lsa {
        let field = PrimeField::new(5).unwrap();
        let table = |i: usize, j: usize| -> SparseVec {
            // basis: 0 = e (deg 1), 1 = h (deg 0), 2 = f (deg -1)
            match (i, j) {
                (0, 2) => vec![(1, Fp(1))],
                (2, 0) => vec![(1, Fp(4))],
                (1, 0) => vec![(0, Fp(2))],
                (0, 1) => vec![(0, Fp(3))],
                (1, 2) => vec![(2, Fp(3))],
                (2, 1) => vec![(2, Fp(2))],
                _ => vec![],
            }
        };
        Lsa::from_bracket_fn(
            field,
            vec!["e".into(), "h".into(), "f".into()],
            vec![Parity::Even; 3],
            vec![1, 0, -1],
            table,
            |i| match i {
                0 | 2 => Some(vec![]),       // e^[p] = f^[p] = 0
                1 => Some(vec![(1, Fp(1))]), // h^[p] = h
                _ => None,
            },
        )
    }

    #[test]
    fn sl2_axioms() {
        let g = sl2();
        assert!(g.verify_jacobi().is_empty());
        assert!(g.verify_restricted().is_empty());
    }

    #[test]
    fn corrupted_sc_detected() {
        let mut g = sl2();
        g.corrupt_sc(0, 2, vec![(0, Fp(1))]);
        assert!(!g.verify_jacobi().is_empty());
    }

    #[test]
    fn corrupted_pmap_detected() {
        let mut g = sl2();
        g.corrupt_pmap(1); // h is not nilpotent, zeroing its pmap must fail
        assert!(!g.verify_restricted().is_empty());
    }

    #[test]
    fn bracket_bilinear() {
        let g = sl2();
        assert_eq!(g.bracket(&[0, 0, 0], &[1, 2, 3]), vec![0, 0, 0]);
        // [e, f] = h
        assert_eq!(g.bracket(&[1, 0, 0], &[0, 0, 1]), vec![0, 1, 0]);
        // [e+h, f] = h + 3f since [h,f] = -2f
        assert_eq!(g.bracket(&[1, 1, 0], &[0, 0, 1]), vec![0, 1, 3]);
    }

    #[test]
    fn ideal_closure_props() {
        let g = sl2();
        // sl2 is simple over F_5: any nonzero seed spins to everything
        let closure = g.ideal_closure(&[vec![1, 0, 0]]);
        assert_eq!(closure.dim(), 3);
        let zero = g.ideal_closure(&[]);
        assert_eq!(zero.dim(), 0);
        // idempotent and monotone
        let again = g.ideal_closure(&closure.basis());
        assert!(again.same_space(&closure));
    }

    #[test]
    fn derived_and_filtration() {
        let g = sl2();
        assert_eq!(g.derived_subalgebra(0).dim(), 3);
        assert_eq!(g.derived_subalgebra(1).dim(), 3); // perfect
        assert_eq!(g.filtration_piece(-5).dim(), 3);
        assert_eq!(g.filtration_piece(1).dim(), 1);
        assert_eq!(g.filtration_piece(2).dim(), 0);
    }

    #[test]
    fn grading_aut_is_automorphism() {
        let g = sl2();
        let field = *g.field();
        for c in 1..5u32 {
            let aut = GradingAut::new(&field, Fp(c)).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let mut ei = vec![0u8; 3];
                    ei[i] = 1;
                    let mut ej = vec![0u8; 3];
                    ej[j] = 1;
                    let lhs = aut.apply(&g, &g.bracket(&ei, &ej));
                    let rhs = g.bracket(&aut.apply(&g, &ei), &aut.apply(&g, &ej));
                    assert_eq!(lhs, rhs);
                }
            }
        }
        assert!(GradingAut::new(&field, Fp(0)).is_err());
        // one-parameter group law
        let a = GradingAut::new(&field, Fp(2)).unwrap();
        let b = GradingAut::new(&field, Fp(3)).unwrap();
        assert_eq!(a.compose(&g, &b).c(), Fp(1));
    }

    #[test]
    fn pmap_of_vector_matches_ad_power() {
        let g = sl2();
        let p = g.field().p() as u64;
        // all even vectors of sl2 over F_5 (125 of them)
        for a in 0..5u8 {
            for b in 0..5u8 {
                for c in 0..5u8 {
                    let v = vec![a, b, c];
                    let img = pmap_of_vector(&g, &v).unwrap();
                    let lhs = g.ad_vector(&img);
                    let rhs = g.ad_vector(&v).pow(p);
                    assert_eq!(lhs, rhs, "v = {v:?}");
                }
            }
        }
    }

    #[test]
    fn pchar_and_height() {
        let g = sl2();
        let field = *g.field();
        let zero = PChar::zero(&g);
        assert_eq!(height(&g, &zero), -1); // min degree of the sl2 grading
        let chi = PChar::dual(&g, 2, Fp(1)).unwrap(); // dual of f, degree -1
        assert_eq!(height(&g, &chi), 0);
        let aut = GradingAut::new(&field, Fp(2)).unwrap();
        let moved = chi.coadjoint(&g, &aut);
        assert_eq!(height(&g, &moved), 0);
        // identity automorphism fixes chi
        assert_eq!(chi.coadjoint(&g, &GradingAut::identity()), chi);
    }
}
