//! Reduced enveloping algebra modules: verification, trivial extension
//! along the filtration, twisting, spins, Kac modules by PBW
//! straightening, baby Verma modules and the MeatAxe.
//!
//! A module is a matrix representation: one action matrix per algebra
//! basis element, over a Z/2-graded space. Action matrices are stored
//! column-sparse; everything scales to the desk sizes the toolkit
//! targets (Kac modules up to a few thousand dimensions).

pub mod induce;
pub mod meataxe;
pub mod sweep;

pub use induce::{baby_verma, kac_module, InducedModule};
pub use meataxe::{meataxe_irreducible, simple_head, MeataxeCertificate, MeataxeOutcome};
pub use sweep::{simple_g0_heads, HeadInfo};

use std::collections::BTreeMap;

use crate::dps::Parity;
use crate::field::{Fp, PrimeField};
use crate::linalg::{Mat, RowSpace};
use crate::lsa::{height, GradingAut, Lsa, PChar};
use crate::{Error, Result};

/// Column-sparse matrix over `F_p` (entries of column `j` are
/// `(row, value)` pairs sorted by row).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    pub dim_rows: usize,
    pub cols: Vec<Vec<(u32, u8)>>,
}

impl SparseMat {
    pub fn zeros(dim_rows: usize, dim_cols: usize) -> SparseMat {
        SparseMat {
            dim_rows,
            cols: vec![Vec::new(); dim_cols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// `A v` for a dense vector.
    pub fn matvec(&self, field: &PrimeField, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols.len());
        let p = field.p() as u64;
        let mut acc = vec![0u64; self.dim_rows];
        for (j, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(r, val) in &self.cols[j] {
                acc[r as usize] += x as u64 * val as u64;
            }
        }
        acc.into_iter().map(|x| (x % p) as u8).collect()
    }

    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::zeros(self.cols.len(), self.dim_rows);
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                out.cols[r as usize].push((j as u32, v));
            }
        }
        for col in out.cols.iter_mut() {
            col.sort_by_key(|&(r, _)| r);
        }
        out
    }

    pub fn to_dense(&self, field: &PrimeField) -> Mat {
        let mut m = Mat::zeros(field, self.dim_rows, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                m.set(r as usize, j, Fp(v as u32));
            }
        }
        m
    }

    pub fn from_dense(m: &Mat) -> SparseMat {
        let mut out = SparseMat::zeros(m.nrows(), m.ncols());
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    out.cols[j].push((i as u32, v.0 as u8));
                }
            }
        }
        out
    }

    /// Scales every entry.
    pub fn scale(&self, field: &PrimeField, c: Fp) -> SparseMat {
        let mut out = self.clone();
        for col in out.cols.iter_mut() {
            col.retain_mut(|(_, v)| {
                *v = field.mul(Fp(*v as u32), c).0 as u8;
                *v != 0
            });
        }
        out
    }
}

/// A finite-dimensional module over (the reduced enveloping algebra of)
/// an [`Lsa`]: per-basis action matrices and a Z/2-grading of the space.
#[derive(Debug, Clone)]
pub struct GModule {
    pub field: PrimeField,
    pub algebra_dim: usize,
    pub dim: usize,
    pub parity: Vec<Parity>,
    /// Action of each algebra basis element; may cover only a generating
    /// subset for large modules (exhaustive verification then refuses).
    pub actions: BTreeMap<usize, SparseMat>,
}

impl GModule {
    pub fn action(&self, i: usize) -> &SparseMat {
        self.actions
            .get(&i)
            .expect("action of this basis element was not materialized")
    }

    pub fn has_full_actions(&self) -> bool {
        self.actions.len() == self.algebra_dim
    }

    /// Action of a coefficient vector (dense output columns).
    pub fn action_of_vector(&self, v: &[u8]) -> SparseMat {
        let field = self.field;
        let mut acc: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); self.dim];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let a = self.action(i);
            for (j, col) in a.cols.iter().enumerate() {
                for &(r, val) in col {
                    *acc[j].entry(r).or_insert(0) += c as u64 * val as u64;
                }
            }
        }
        let p = field.p() as u64;
        SparseMat {
            dim_rows: self.dim,
            cols: acc
                .into_iter()
                .map(|m| {
                    m.into_iter()
                        .filter_map(|(r, x)| {
                            let v = (x % p) as u8;
                            (v != 0).then_some((r, v))
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Exhaustively checks the two module axioms: the bracket relation on all
/// algebra basis pairs and the `u_chi` power relation on all even basis
/// elements, plus parity consistency of every action matrix. Empty
/// report = valid module.
pub fn verify_module(g: &Lsa, m: &GModule, chi: &PChar) -> Vec<String> {
    let field = *g.field();
    let mut out = Vec::new();
    if !m.has_full_actions() {
        out.push("module does not carry actions for the full basis".into());
        return out;
    }
    if m.algebra_dim != g.dim() {
        out.push("module was built over a different algebra".into());
        return out;
    }
    // parity blocks
    for (i, a) in &m.actions {
        let want_flip = g.parity(*i).is_odd();
        for (j, col) in a.cols.iter().enumerate() {
            for &(r, _) in col {
                let flips = m.parity[r as usize] != m.parity[j];
                if flips != want_flip {
                    out.push(format!(
                        "action of {} breaks the Z/2-grading at entry ({r}, {j})",
                        g.label(*i)
                    ));
                }
            }
        }
    }
    // bracket relation, densely
    let dense: BTreeMap<usize, Mat> = m
        .actions
        .iter()
        .map(|(i, a)| (*i, a.to_dense(&field)))
        .collect();
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            let sign = crate::dps::koszul_sign(&field, g.parity(i), g.parity(j));
            let mut want = Mat::zeros(&field, m.dim, m.dim);
            for &(k, c) in g.bracket_basis(i, j) {
                want = want.add(&dense[&(k as usize)].scale(c));
            }
            let got = dense[&i]
                .mul(&dense[&j])
                .sub(&dense[&j].mul(&dense[&i]).scale(sign));
            if want != got {
                out.push(format!(
                    "bracket relation fails on ({}, {})",
                    g.label(i),
                    g.label(j)
                ));
            }
        }
    }
    // u_chi relation on even elements
    let p = field.p() as u64;
    for i in 0..g.dim() {
        if g.parity(i).is_odd() {
            continue;
        }
        let mut want = Mat::zeros(&field, m.dim, m.dim);
        if let Some(img) = g.pmap(i) {
            for &(k, c) in img {
                want = want.add(&dense[&(k as usize)].scale(c));
            }
        } else {
            out.push(format!("even element {} has no p-mapping", g.label(i)));
            continue;
        }
        let chip = field.pow(chi.eval_basis(i), p);
        want = want.add(&Mat::identity(&field, m.dim).scale(chip));
        let got = dense[&i].pow(p);
        if want != got {
            out.push(format!("u_chi power relation fails on {}", g.label(i)));
        }
    }
    out
}

/// Smallest action-invariant subspace containing `v`, spun by the given
/// generator actions.
pub fn spin(field: &PrimeField, gens: &[&SparseMat], v: &[u8]) -> RowSpace {
    let dim = v.len();
    let mut space = RowSpace::new(field, dim);
    let mut queue: Vec<Vec<u8>> = Vec::new();
    if space.insert(v) {
        queue.push(v.to_vec());
    }
    while let Some(w) = queue.pop() {
        if space.is_full() {
            break;
        }
        for a in gens {
            let img = a.matvec(field, &w);
            if space.insert(&img) {
                queue.push(img);
            }
        }
    }
    space
}

/// A subalgebra extracted from a parent algebra, carrying the index map.
#[derive(Debug, Clone)]
pub struct SubAlgebra {
    pub lsa: Lsa,
    /// `parent[i]` is the parent basis index of sub basis element `i`.
    pub parent: Vec<usize>,
}

impl SubAlgebra {
    /// Degree-filtered subalgebra (`degree >= lo`), e.g. `g^0`.
    pub fn filtration(g: &Lsa, lo: i64) -> SubAlgebra {
        let indices: Vec<usize> = (0..g.dim()).filter(|&i| g.degree(i) >= lo).collect();
        let (lsa, parent) = g.sub_from_indices(&indices);
        SubAlgebra { lsa, parent }
    }

    /// Single graded piece as a subalgebra (only valid for degree 0).
    pub fn graded_piece(g: &Lsa, d: i64) -> SubAlgebra {
        let indices = g.graded_piece(d);
        let (lsa, parent) = g.sub_from_indices(&indices);
        SubAlgebra { lsa, parent }
    }

    /// Restriction of a parent character.
    pub fn restrict_char(&self, chi: &PChar) -> PChar {
        let values = self
            .parent
            .iter()
            .map(|&i| chi.eval_basis(i))
            .collect::<Vec<_>>();
        PChar::from_values(&self.lsa, values).expect("parity is preserved by restriction")
    }
}

/// Extends a `g_[0]`-module to `g^0` with `g^1` acting by zero; only
/// valid for characters of height <= 1 (higher heights have nonzero
/// chi on `g^1`, so zero extension breaks the power relation).
pub fn extend_trivially(
    m: &GModule,
    piece: &SubAlgebra,
    g0: &SubAlgebra,
    parent: &Lsa,
    chi: &PChar,
) -> Result<GModule> {
    let h = height(parent, chi);
    if h > 1 {
        return Err(Error::HeightPrecondition {
            need: "ht(chi) <= 1".into(),
            got: h,
        });
    }
    assert_eq!(m.algebra_dim, piece.lsa.dim());
    let by_parent: BTreeMap<usize, usize> = piece
        .parent
        .iter()
        .enumerate()
        .map(|(sub, &par)| (par, sub))
        .collect();
    let mut actions = BTreeMap::new();
    for (i, &par) in g0.parent.iter().enumerate() {
        let a = match by_parent.get(&par) {
            Some(&sub) => m.action(sub).clone(),
            None => SparseMat::zeros(m.dim, m.dim),
        };
        actions.insert(i, a);
    }
    Ok(GModule {
        field: m.field,
        algebra_dim: g0.lsa.dim(),
        dim: m.dim,
        parity: m.parity.clone(),
        actions,
    })
}

/// Twists a module by a grading automorphism: `x . m = (Phi^{-1} x) m`,
/// i.e. the degree-`d` action scales by `c^{-d}`.
pub fn twist_module(g: &Lsa, m: &GModule, aut: &GradingAut) -> GModule {
    let field = *g.field();
    let cinv = field.inv(aut.c()).expect("c nonzero");
    let mut actions = BTreeMap::new();
    for (i, a) in &m.actions {
        let d = g.degree(*i);
        let s = if d >= 0 {
            field.pow(cinv, d as u64)
        } else {
            field.pow(aut.c(), (-d) as u64)
        };
        actions.insert(*i, a.scale(&field, s));
    }
    GModule {
        field,
        algebra_dim: m.algebra_dim,
        dim: m.dim,
        parity: m.parity.clone(),
        actions,
    }
}

/// The 1-dimensional module with every action zero (valid for chi = 0
/// over algebras acting trivially, e.g. as a smoke-test input).
pub fn trivial_module(g: &Lsa) -> GModule {
    let actions = (0..g.dim())
        .map(|i| (i, SparseMat::zeros(1, 1)))
        .collect();
    GModule {
        field: *g.field(),
        algebra_dim: g.dim(),
        dim: 1,
        parity: vec![Parity::Even],
        actions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::build_m;
    use crate::field::PrimeField;

    #[test]
    fn trivial_module_verifies_over_nilpotent_piece() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        // g^1 is p-unipotent: the trivial module with chi = 0 is valid.
        let sub = SubAlgebra::filtration(&ca.lsa, 1);
        let m = trivial_module(&sub.lsa);
        let chi = PChar::zero(&sub.lsa);
        assert!(verify_module(&sub.lsa, &m, &chi).is_empty());
    }

    #[test]
    fn corrupted_action_detected() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        let sub = SubAlgebra::filtration(&ca.lsa, 1);
        let mut m = trivial_module(&sub.lsa);
        m.actions.insert(
            0,
            SparseMat {
                dim_rows: 1,
                cols: vec![vec![(0, 1)]],
            },
        );
        let chi = PChar::zero(&sub.lsa);
        assert!(!verify_module(&sub.lsa, &m, &chi).is_empty());
    }

    #[test]
    fn spin_zero_and_full() {
        let field = PrimeField::new(5).unwrap();
        let a = SparseMat {
            dim_rows: 2,
            cols: vec![vec![(1, 1)], vec![(0, 1)]],
        }; // swap
        let s = spin(&field, &[&a], &[0, 0]);
        assert_eq!(s.dim(), 0);
        let s = spin(&field, &[&a], &[1, 0]);
        assert_eq!(s.dim(), 2);
    }
}
