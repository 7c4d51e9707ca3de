//! p-character analytics for the contact family: characteristic matrices,
//! rank and the nonsingular/singular split, the explicit nonsingular and
//! singular constructions, Delta-invertibility, regular semisimplicity,
//! and seeded witness search.
//!
//! The characteristic matrix pairs the top graded pieces against the
//! distinguished degree -1 and -2 generators; every entry is recomputed
//! from structure constants for the character at hand, never cached.


use crate::contact::{ContactAlgebra, ContactKind};
use crate::dps::{MultiIndex, Parity, SuperElement};
use crate::field::Fp;
use crate::linalg::{Mat, RowSpace};
use crate::lsa::{height, GradingAut, PChar};
use crate::{Error, Result};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The block characteristic matrix of a character of height `h >= 2`:
/// `A1 = chi([g_[h], M_{x_b}])` over the degree-`h` basis and the `2n`
/// degree -1 generators, `A2 = chi([g_[h+1], M_1])`.
#[derive(Debug, Clone)]
pub struct CharMatrix {
    pub h: i64,
    pub a1: Mat,
    pub a2: Mat,
}

impl CharMatrix {
    /// Rank of the block-diagonal sum `A1 (+) A2`.
    pub fn rank(&self) -> usize {
        self.a1.rank() + self.a2.rank()
    }
}

/// Builds the characteristic matrix; requires `ht(chi) >= 2` and nonzero
/// graded pieces at degrees `h` and `h+1`.
pub fn char_matrix(ca: &ContactAlgebra, chi: &PChar) -> Result<CharMatrix> {
    let g = &ca.lsa;
    let field = *g.field();
    let h = height(g, chi);
    if h < 2 {
        return Err(Error::HeightPrecondition {
            need: "ht(chi) >= 2".into(),
            got: h,
        });
    }
    let rows_h = g.graded_piece(h);
    let rows_h1 = g.graded_piece(h + 1);
    if rows_h.is_empty() {
        return Err(Error::EmptyGradedPiece(h));
    }
    if rows_h1.is_empty() {
        return Err(Error::EmptyGradedPiece(h + 1));
    }
    let cols = &ca.neg1;
    let mut a1 = Mat::zeros(&field, rows_h.len(), cols.len());
    for (r, &fi) in rows_h.iter().enumerate() {
        for (c, &xj) in cols.iter().enumerate() {
            a1.set(r, c, chi.eval_sparse(&field, g.bracket_basis(fi, xj)));
        }
    }
    let mut a2 = Mat::zeros(&field, rows_h1.len(), 1);
    for (r, &gi) in rows_h1.iter().enumerate() {
        a2.set(r, 0, chi.eval_sparse(&field, g.bracket_basis(gi, ca.neg2)));
    }
    Ok(CharMatrix { h, a1, a2 })
}

/// `rank(chi)` over the canonical graded basis.
pub fn rank_chi(ca: &ContactAlgebra, chi: &PChar) -> Result<usize> {
    Ok(char_matrix(ca, chi)?.rank())
}

/// Nonsingular means full rank `2n + 1`.
pub fn is_nonsingular(ca: &ContactAlgebra, chi: &PChar) -> Result<bool> {
    Ok(rank_chi(ca, chi)? == 2 * ca.n() + 1)
}

/// Builds a nonsingular character of height `h` by the minimal-support
/// recipe: one even basis monomial per emptiness condition, placed in
/// `g_[h-1]`. Requires `2 <= h < p - 2`; the result is validated.
pub fn build_example_nonsingular(ca: &ContactAlgebra, h: i64) -> Result<PChar> {
    let g = &ca.lsa;
    let p = g.field().p() as i64;
    if !(2..p - 2).contains(&h) {
        return Err(Error::HeightPrecondition {
            need: format!("2 <= h < p-2 = {}", p - 2),
            got: h,
        });
    }
    for d in [h - 1, h, h + 1] {
        if g.graded_piece(d).is_empty() {
            return Err(Error::EmptyGradedPiece(d));
        }
    }
    let n = ca.n();
    let slots = ca.shape.slots();
    // Sigma_k for odd slots k in n..2n-1 needs a supported even monomial
    // with the odd slots n..=k empty; for k = 2n-1 (the last primed slot)
    // and k = 2n (the contact slot) just that slot empty.
    let piece = g.graded_piece(h - 1);
    let mut support: Vec<usize> = Vec::new();
    let mono_of = |i: usize| -> Option<&MultiIndex> {
        let f = &ca.funcs[i];
        let mut it = f.terms();
        let (idx, c) = it.next()?;
        if it.next().is_none() && c == Fp::ONE {
            Some(idx)
        } else {
            None
        }
    };
    let mut conditions: Vec<Box<dyn Fn(&MultiIndex) -> bool>> = Vec::new();
    for k in n..2 * n - 1 {
        conditions.push(Box::new(move |r: &MultiIndex| {
            (n..=k).all(|j| r.entry(j) == 0)
        }));
    }
    for k in [2 * n - 1, 2 * n] {
        conditions.push(Box::new(move |r: &MultiIndex| r.entry(k) == 0));
    }
    for cond in &conditions {
        let found = piece.iter().find(|&&i| {
            g.parity(i) == Parity::Even
                && mono_of(i).map(|r| cond(r)).unwrap_or(false)
        });
        match found {
            Some(&i) => {
                if !support.contains(&i) {
                    support.push(i);
                }
            }
            None => {
                return Err(Error::Unrealizable(format!(
                    "no even monomial in g_[{}] satisfies a Sigma condition at n={n}, h={h}",
                    h - 1
                )))
            }
        }
    }
    let _ = slots;
    let mut values = vec![Fp::ZERO; g.dim()];
    for i in support {
        values[i] = Fp::ONE;
    }
    let chi = PChar::from_values(g, values)?;
    if height(g, &chi) != h {
        return Err(Error::Unrealizable("support does not reach height h".into()));
    }
    if !is_nonsingular(ca, &chi)? {
        return Err(Error::Unrealizable(
            "Sigma-condition support failed nonsingularity validation".into(),
        ));
    }
    Ok(chi)
}

/// Builds a singular character of height `p - 2` supported on even basis
/// monomials of `g_[h-1]` whose last primed slot is occupied and which
/// avoid the pairing against `M_{x_n}` (the column of `x_n` in the
/// characteristic matrix vanishes). Errors when no support exists.
pub fn build_example_singular(ca: &ContactAlgebra) -> Result<PChar> {
    let g = &ca.lsa;
    let p = g.field().p() as i64;
    let h = p - 2;
    let n = ca.n();
    for d in [h - 1, h, h + 1] {
        if g.graded_piece(d).is_empty() {
            return Err(Error::EmptyGradedPiece(d));
        }
    }
    let mono_of = |i: usize| -> Option<&MultiIndex> {
        let f = &ca.funcs[i];
        let mut it = f.terms();
        let (idx, c) = it.next()?;
        if it.next().is_none() && c == Fp::ONE {
            Some(idx)
        } else {
            None
        }
    };
    // s_{2n} = 1 blocks the ∂_{n'} pairing; s_n = 0 or s_z = 1 blocks the
    // contact-slot pairing against x_n (0-based: slot 2n-1 is the last
    // primed slot, slot 2n the contact slot, slot n-1 the n-th even slot).
    let mut values = vec![Fp::ZERO; g.dim()];
    let mut any = false;
    for &i in &g.graded_piece(h - 1) {
        if g.parity(i) != Parity::Even {
            continue;
        }
        let Some(r) = mono_of(i) else { continue };
        if r.entry(2 * n - 1) == 1 && (r.entry(n - 1) == 0 || r.entry(2 * n) == 1) {
            values[i] = Fp::ONE;
            any = true;
        }
    }
    if !any {
        return Err(Error::Unrealizable(format!(
            "no even monomial support for the singular construction at n={n}, p={p}"
        )));
    }
    let chi = PChar::from_values(g, values)?;
    if height(g, &chi) != h {
        return Err(Error::Unrealizable(
            "singular support does not reach height p-2".into(),
        ));
    }
    if is_nonsingular(ca, &chi)? {
        return Err(Error::Unrealizable(
            "singular construction validated nonsingular".into(),
        ));
    }
    Ok(chi)
}

/// Automorphism search mode for the Delta-invertibility and regular
/// semisimplicity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutMode {
    /// Check the conditions for `Phi = id` only.
    Identity,
    /// Range over the implemented grading one-parameter family.
    GradingOrbit,
}

/// A verified witness of Delta-invertibility.
#[derive(Debug, Clone)]
pub struct DeltaWitness {
    /// The grading automorphism parameter used (1 = identity).
    pub c: Fp,
    /// Height of the character.
    pub h: i64,
    /// rank(chi) = r + 1.
    pub r: usize,
    /// Column partition: indices (into the 2n negative generators) with
    /// an invertible minor.
    pub i_set: Vec<usize>,
    /// The complementary columns, whose pairing with `g_[h]` vanishes.
    pub j_set: Vec<usize>,
    /// Basis of the chi-trivial `g_[0]`-submodule `Delta` of `g_[h-1]`.
    pub delta_basis: Vec<Vec<u8>>,
    /// Homogeneous elements of `Delta` pairing invertibly against the
    /// `j_set` generators.
    pub e_elements: Vec<Vec<u8>>,
}

/// Outcome of the Delta-invertibility decision.
#[derive(Debug, Clone)]
pub enum DeltaVerdict {
    Yes(Box<DeltaWitness>),
    No(String),
    Inconclusive(String),
}

/// Checks valid witnesses from scratch: all five defining conditions plus
/// the standing assumption `chi([g_[h+1], M_1]) != 0`.
pub fn validate_delta_witness(
    ca: &ContactAlgebra,
    chi: &PChar,
    w: &DeltaWitness,
) -> Result<()> {
    let g = &ca.lsa;
    let field = *g.field();
    let aut = GradingAut::new(&field, w.c)?;
    let moved = chi.coadjoint(g, &aut);
    let h = height(g, &moved);
    if h != w.h || h < 5 {
        return Err(Error::Construction("witness height mismatch".into()));
    }
    let cm = char_matrix(ca, &moved)?;
    if cm.a2.is_zero() {
        return Err(Error::Construction(
            "standing assumption chi([g_[h+1], M_1]) != 0 fails".into(),
        ));
    }
    let rank = cm.rank();
    if rank != w.r + 1 || rank >= 2 * ca.n() + 1 {
        return Err(Error::Construction("witness rank mismatch".into()));
    }
    // (1) partition
    let mut all: Vec<usize> = w.i_set.iter().chain(w.j_set.iter()).copied().collect();
    all.sort_unstable();
    if all != (0..2 * ca.n()).collect::<Vec<_>>() || w.i_set.len() != w.r {
        return Err(Error::Construction("witness partition invalid".into()));
    }
    // (2) invertible r x r minor against the I columns
    let pick = |cols: &[usize]| -> Mat {
        let mut m = Mat::zeros(&field, cm.a1.nrows(), cols.len());
        for (cc, &c) in cols.iter().enumerate() {
            for rr in 0..cm.a1.nrows() {
                m.set(rr, cc, cm.a1.get(rr, c));
            }
        }
        m
    };
    if pick(&w.i_set).rank() != w.r {
        return Err(Error::Construction("witness minor not invertible".into()));
    }
    // (3) vanishing J columns
    let ja = pick(&w.j_set);
    if !ja.is_zero() {
        return Err(Error::Construction("witness J columns nonzero".into()));
    }
    // (4) Delta is a chi-trivial g_[0]-submodule of g_[h-1]
    let dim = g.dim();
    let mut delta = RowSpace::new(&field, dim);
    let piece = g.filtration_piece(h - 1);
    for v in &w.delta_basis {
        if !moved.eval(&field, v).is_zero() {
            return Err(Error::Construction("chi does not vanish on Delta".into()));
        }
        for (i, &c) in v.iter().enumerate() {
            if c != 0 && g.degree(i) != h - 1 {
                return Err(Error::Construction("Delta not inside g_[h-1]".into()));
            }
        }
        delta.insert(v);
        let _ = &piece;
    }
    for &b in &g.graded_piece(0) {
        let mut eb = vec![0u8; dim];
        eb[b] = 1;
        for v in &w.delta_basis {
            let br = g.bracket(&eb, v);
            if !delta.contains(&br) {
                return Err(Error::Construction("Delta is not a g_[0]-submodule".into()));
            }
            if !moved.eval(&field, &br).is_zero() {
                return Err(Error::Construction("chi does not vanish on Delta".into()));
            }
        }
    }
    // (5) invertible pairing of the e-elements against the J generators
    let m2n = 2 * ca.n();
    let want = m2n - w.r;
    if w.e_elements.len() != want || w.j_set.len() != want {
        return Err(Error::Construction("witness e-element count mismatch".into()));
    }
    let mut pairing = Mat::zeros(&field, want, want);
    for (a, e) in w.e_elements.iter().enumerate() {
        if !delta.contains(e) {
            return Err(Error::Construction("e-element outside Delta".into()));
        }
        if g.vector_parity(e).is_none() {
            return Err(Error::Construction("e-element not homogeneous".into()));
        }
        for (b, &j) in w.j_set.iter().enumerate() {
            let mut xj = vec![0u8; dim];
            xj[ca.neg1[j]] = 1;
            pairing.set(a, b, moved.eval(&field, &g.bracket(e, &xj)));
        }
    }
    if pairing.rank() != want {
        return Err(Error::Construction("witness pairing not invertible".into()));
    }
    Ok(())
}

/// Decides Delta-invertibility by bounded search.
///
/// `No` is returned only on automorphism-invariant precondition failures
/// (height, rank, or the standing assumption); an exhausted search is
/// `Inconclusive`, never `No`, because only the grading slice of
/// `Aut*(g)` is implemented.
pub fn is_delta_invertible(
    ca: &ContactAlgebra,
    chi: &PChar,
    mode: AutMode,
    budget: usize,
) -> Result<DeltaVerdict> {
    let g = &ca.lsa;
    let field = *g.field();
    let h = height(g, chi);
    if h < 5 {
        return Ok(DeltaVerdict::No(format!("ht(chi) = {h} < 5")));
    }
    if g.graded_piece(h).is_empty() || g.graded_piece(h + 1).is_empty() {
        return Ok(DeltaVerdict::No("empty graded piece at h or h+1".into()));
    }
    let rank = rank_chi(ca, chi)?;
    let m2n = 2 * ca.n();
    if rank >= m2n + 1 {
        return Ok(DeltaVerdict::No(format!(
            "rank(chi) = {rank} is full; Delta-invertibility needs rank < {}",
            m2n + 1
        )));
    }
    let cm0 = char_matrix(ca, chi)?;
    if cm0.a2.is_zero() {
        // Invariant under Aut*(g) and Aut_1(g), so this is a sound No.
        return Ok(DeltaVerdict::No(
            "chi([g_[h+1], M_1]) = 0; the standing assumption fails".into(),
        ));
    }
    let r = rank - 1;
    let cs: Vec<Fp> = match mode {
        AutMode::Identity => vec![Fp::ONE],
        AutMode::GradingOrbit => (1..field.p()).map(Fp).collect(),
    };
    let mut spent = 0usize;
    for c in cs {
        let aut = GradingAut::new(&field, c)?;
        let moved = chi.coadjoint(g, &aut);
        let cm = char_matrix(ca, &moved)?;
        // Enumerate candidate partitions: I must index an invertible
        // r-column minor, J must be zero columns.
        let cols: Vec<usize> = (0..m2n).collect();
        for i_set in subsets_of_size(&cols, r) {
            spent += 1;
            if spent > budget {
                return Ok(DeltaVerdict::Inconclusive(format!(
                    "search budget {budget} exhausted (grading orbit only)"
                )));
            }
            let j_set: Vec<usize> = cols.iter().copied().filter(|c| !i_set.contains(c)).collect();
            let sub_rank = {
                let mut m = Mat::zeros(&field, cm.a1.nrows(), i_set.len());
                for (cc, &cidx) in i_set.iter().enumerate() {
                    for rr in 0..cm.a1.nrows() {
                        m.set(rr, cc, cm.a1.get(rr, cidx));
                    }
                }
                m.rank()
            };
            if sub_rank != r {
                continue;
            }
            let j_zero = j_set.iter().all(|&cidx| {
                (0..cm.a1.nrows()).all(|rr| cm.a1.get(rr, cidx).is_zero())
            });
            if !j_zero {
                continue;
            }
            // Conditions (4)/(5): generate candidate Delta submodules from
            // kernel vectors of chi on g_[h-1].
            if let Some((delta_basis, e_elements)) =
                find_delta(ca, &moved, h, &j_set)
            {
                let witness = DeltaWitness {
                    c,
                    h,
                    r,
                    i_set: i_set.clone(),
                    j_set,
                    delta_basis,
                    e_elements,
                };
                validate_delta_witness(ca, chi, &witness)?;
                return Ok(DeltaVerdict::Yes(Box::new(witness)));
            }
        }
    }
    Ok(DeltaVerdict::Inconclusive(
        "search space exhausted without witness (grading orbit only)".into(),
    ))
}

/// Searches for a chi-trivial `g_[0]`-submodule of `g_[h-1]` pairing
/// invertibly against the `J` generators: spins each kernel vector of
/// chi restricted to the piece, then unions of the resulting submodules.
fn find_delta(
    ca: &ContactAlgebra,
    chi: &PChar,
    h: i64,
    j_set: &[usize],
) -> Option<(Vec<Vec<u8>>, Vec<Vec<u8>>)> {
    let g = &ca.lsa;
    let field = *g.field();
    let dim = g.dim();
    let piece = g.graded_piece(h - 1);
    // chi-kernel inside the graded piece, split by parity so the spin
    // generators are homogeneous.
    let mut kernel_vectors: Vec<Vec<u8>> = Vec::new();
    for par in [Parity::Even, Parity::Odd] {
        let idxs: Vec<usize> = piece
            .iter()
            .copied()
            .filter(|&i| g.parity(i) == par)
            .collect();
        if idxs.is_empty() {
            continue;
        }
        let mut m = Mat::zeros(&field, 1, idxs.len());
        for (c, &i) in idxs.iter().enumerate() {
            m.set(0, c, chi.eval_basis(i));
        }
        let ns = m.nullspace();
        for k in 0..ns.nrows() {
            let mut v = vec![0u8; dim];
            for (c, &i) in idxs.iter().enumerate() {
                v[i] = ns.get(k, c).0 as u8;
            }
            kernel_vectors.push(v);
        }
    }
    // g_[0]-submodule generated by a set of vectors, staying inside the
    // graded piece; gives up (None) if chi fails to vanish on it.
    let zero_piece = g.graded_piece(0);
    let gen_submodule = |seeds: &[Vec<u8>]| -> Option<RowSpace> {
        let mut space = RowSpace::new(&field, dim);
        let mut queue: Vec<Vec<u8>> = Vec::new();
        for s in seeds {
            if space.insert(s) {
                queue.push(s.clone());
            }
        }
        while let Some(v) = queue.pop() {
            if !chi.eval(&field, &v).is_zero() {
                return None;
            }
            for &b in &zero_piece {
                let mut eb = vec![0u8; dim];
                eb[b] = 1;
                let w = g.bracket(&eb, &v);
                if space.insert(&w) {
                    queue.push(w);
                }
            }
        }
        // chi must vanish on the whole span, not just the queue path.
        for b in space.basis() {
            if !chi.eval(&field, &b).is_zero() {
                return None;
            }
        }
        Some(space)
    };
    // Candidate Deltas: submodule of each kernel vector, then the union of
    // all of them.
    let mut candidates: Vec<RowSpace> = Vec::new();
    for v in &kernel_vectors {
        if let Some(s) = gen_submodule(std::slice::from_ref(v)) {
            candidates.push(s);
        }
    }
    if let Some(s) = gen_submodule(&kernel_vectors) {
        candidates.push(s);
    }
    let want = j_set.len();
    for delta in &candidates {
        let basis = delta.basis();
        // Homogeneous candidate elements: basis vectors are homogeneous
        // whenever the spin generators were (parity-split above).
        let homo: Vec<Vec<u8>> = basis
            .iter()
            .filter(|v| g.vector_parity(v).is_some())
            .cloned()
            .collect();
        if homo.len() < want {
            continue;
        }
        // Pairing matrix of all homogeneous basis vectors against J.
        let mut pairing = Mat::zeros(&field, homo.len(), want);
        for (a, e) in homo.iter().enumerate() {
            for (b, &j) in j_set.iter().enumerate() {
                let mut xj = vec![0u8; dim];
                xj[ca.neg1[j]] = 1;
                pairing.set(a, b, chi.eval(&field, &g.bracket(e, &xj)));
            }
        }
        if pairing.rank() != want {
            continue;
        }
        // Pick rows achieving the rank greedily.
        let mut chosen: Vec<usize> = Vec::new();
        let mut running = Mat::zeros(&field, 0, want);
        for a in 0..homo.len() {
            if chosen.len() == want {
                break;
            }
            let mut trial_rows: Vec<Vec<u8>> =
                chosen.iter().map(|&x| pairing.row(x).to_vec()).collect();
            trial_rows.push(pairing.row(a).to_vec());
            let trial = Mat::from_rows(&field, trial_rows, want);
            if trial.rank() > running.nrows() {
                chosen.push(a);
                running = trial;
            }
        }
        if chosen.len() == want && running.rank() == want {
            let e_elements: Vec<Vec<u8>> = chosen.iter().map(|&a| homo[a].clone()).collect();
            return Some((basis, e_elements));
        }
    }
    None
}

fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Result of the regular-semisimplicity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegSemisimple {
    pub value: bool,
    /// Set when `n = 1`: the defining family `h_j` is empty there, so the
    /// condition is vacuous.
    pub degenerate: bool,
    /// The grading parameter that satisfied the conditions, when `value`.
    pub witness_c: Option<Fp>,
}

/// Checks Definition of regular semisimplicity for a height-1 character:
/// some automorphism in the implemented family sends chi to a functional
/// vanishing on `n^{+/-}_{[0]}` and nonzero on every `h_j` and on their
/// sum.
pub fn is_regular_semisimple(
    ca: &ContactAlgebra,
    chi: &PChar,
    mode: AutMode,
) -> Result<RegSemisimple> {
    let g = &ca.lsa;
    let field = *g.field();
    let h = height(g, chi);
    if h != 1 {
        return Err(Error::HeightPrecondition {
            need: "ht(chi) = 1".into(),
            got: h,
        });
    }
    let n = ca.n();
    if n == 1 {
        return Ok(RegSemisimple {
            value: true,
            degenerate: true,
            witness_c: None,
        });
    }
    let hs: Vec<Vec<u8>> = (0..n - 1)
        .map(|j| ca.h_element(j).expect("h_j exists for n >= 2"))
        .collect();
    let mut sum = vec![0u8; g.dim()];
    for hj in &hs {
        for (i, &c) in hj.iter().enumerate() {
            sum[i] = field.add(Fp(sum[i] as u32), Fp(c as u32)).0 as u8;
        }
    }
    let cs: Vec<Fp> = match mode {
        AutMode::Identity => vec![Fp::ONE],
        AutMode::GradingOrbit => (1..field.p()).map(Fp).collect(),
    };
    for c in cs {
        let aut = GradingAut::new(&field, c)?;
        let moved = chi.coadjoint(g, &aut);
        let nil_ok = ca
            .nplus
            .iter()
            .chain(ca.nminus.iter())
            .all(|v| moved.eval(&field, v).is_zero());
        if !nil_ok {
            continue;
        }
        if hs.iter().all(|hj| !moved.eval(&field, hj).is_zero())
            && !moved.eval(&field, &sum).is_zero()
        {
            return Ok(RegSemisimple {
                value: true,
                degenerate: false,
                witness_c: Some(c),
            });
        }
    }
    Ok(RegSemisimple {
        value: false,
        degenerate: false,
        witness_c: None,
    })
}

/// Search targets for [`search_char`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharTarget {
    Nonsingular,
    DeltaInvertible,
    RegularSemisimple,
}

/// Outcome of a seeded character search, with the decision log.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        chi: PChar,
        evaluations: usize,
        description: String,
        /// For Delta-invertible targets, the validated witness.
        delta: Option<Box<DeltaWitness>>,
    },
    Exhausted {
        evaluations: usize,
        log: Vec<String>,
    },
}

/// Deterministic seeded search for a character with the given property:
/// structured sparse supports first (single graded piece, then adjacent
/// pairs), then seeded random functionals, up to `budget` predicate
/// evaluations. Every `Found` is validated by the defining predicate.
pub fn search_char(
    ca: &ContactAlgebra,
    target: CharTarget,
    seed: u64,
    budget: usize,
) -> Result<SearchOutcome> {
    let g = &ca.lsa;
    let field = *g.field();
    let mut log: Vec<String> = Vec::new();
    let mut spent = 0usize;

    match target {
        CharTarget::RegularSemisimple => {
            // Cartan-supported characters of height 1.
            let mut patterns: Vec<Vec<Fp>> = Vec::new();
            let k = ca.cartan.len();
            for mask in 1..(1usize << k) {
                let mut coeffs = vec![Fp::ZERO; k];
                for (b, c) in coeffs.iter_mut().enumerate() {
                    if mask & (1 << b) != 0 {
                        *c = Fp::ONE;
                    }
                }
                patterns.push(coeffs);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..budget {
                let coeffs: Vec<Fp> = (0..k)
                    .map(|_| Fp(rng.gen_range(0..field.p())))
                    .collect();
                patterns.push(coeffs);
            }
            for coeffs in patterns {
                if spent >= budget.max(1) {
                    break;
                }
                let mut values = vec![Fp::ZERO; g.dim()];
                let mut vals_vec = vec![0u8; g.dim()];
                for (b, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        let hvec = &ca.cartan[b].1;
                        for (i, &x) in hvec.iter().enumerate() {
                            vals_vec[i] =
                                field.add(Fp(vals_vec[i] as u32), field.mul(*c, Fp(x as u32))).0
                                    as u8;
                        }
                    }
                }
                // Dualize: chi(e_i) = coefficient only on even elements.
                for i in 0..g.dim() {
                    if g.parity(i) == Parity::Even {
                        values[i] = Fp(vals_vec[i] as u32);
                    } else if vals_vec[i] != 0 {
                        values[i] = Fp::ZERO; // odd components carry no chi
                    }
                }
                let Ok(chi) = PChar::from_values(g, values) else {
                    continue;
                };
                if height(g, &chi) != 1 {
                    continue;
                }
                spent += 1;
                let res = is_regular_semisimple(ca, &chi, AutMode::GradingOrbit)?;
                if res.value && !res.degenerate {
                    return Ok(SearchOutcome::Found {
                        chi,
                        evaluations: spent,
                        description: "Cartan-supported height-1 character".into(),
                        delta: None,
                    });
                }
                log.push("cartan pattern rejected".into());
            }
        }
        CharTarget::Nonsingular => {
            let p = field.p() as i64;
            // The explicit recipe first.
            for h in 2..(p - 2).max(3) {
                if spent >= budget.max(1) {
                    break;
                }
                spent += 1;
                match build_example_nonsingular(ca, h) {
                    Ok(chi) => {
                        return Ok(SearchOutcome::Found {
                            chi,
                            evaluations: spent,
                            description: format!("minimal-support recipe at height {h}"),
                            delta: None,
                        })
                    }
                    Err(e) => log.push(format!("recipe h={h}: {e}")),
                }
            }
            // Seeded random supports on a single graded piece.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let top = g.top_degree();
            while spent < budget {
                let h = 2 + (rng.gen_range(0..((top - 2).max(1))) as i64);
                let piece: Vec<usize> = g
                    .graded_piece(h - 1)
                    .into_iter()
                    .filter(|&i| g.parity(i) == Parity::Even)
                    .collect();
                if piece.is_empty()
                    || g.graded_piece(h).is_empty()
                    || g.graded_piece(h + 1).is_empty()
                {
                    spent += 1;
                    continue;
                }
                let mut values = vec![Fp::ZERO; g.dim()];
                for &i in &piece {
                    values[i] = Fp(rng.gen_range(0..field.p()));
                }
                let Ok(chi) = PChar::from_values(g, values) else {
                    spent += 1;
                    continue;
                };
                if height(g, &chi) != h {
                    spent += 1;
                    continue;
                }
                spent += 1;
                if is_nonsingular(ca, &chi)? {
                    return Ok(SearchOutcome::Found {
                        chi,
                        evaluations: spent,
                        description: format!("random support in degree {} piece", h - 1),
                        delta: None,
                    });
                }
            }
            log.push(format!("nonsingular search exhausted after {spent} evaluations"));
        }
        CharTarget::DeltaInvertible => {
            // Structured enumeration: coefficients on the even parts of
            // g_[h-1] (reaching height h) and g_[h-2] (feeding the Delta
            // pairing), small coefficient patterns first.
            let top = g.top_degree();
            'outer: for h in 5..=top - 1 {
                let lead: Vec<usize> = g
                    .graded_piece(h - 1)
                    .into_iter()
                    .filter(|&i| g.parity(i) == Parity::Even)
                    .collect();
                let aux: Vec<usize> = g
                    .graded_piece(h - 2)
                    .into_iter()
                    .filter(|&i| g.parity(i) == Parity::Even)
                    .collect();
                if lead.is_empty() || g.graded_piece(h).is_empty() || g.graded_piece(h + 1).is_empty()
                {
                    continue;
                }
                let slots: Vec<usize> = lead.iter().chain(aux.iter()).copied().collect();
                let k = slots.len();
                let p = field.p() as u64;
                let total = p.pow(k as u32);
                for code in 1..total {
                    if spent >= budget {
                        log.push(format!("budget exhausted at h={h}"));
                        break 'outer;
                    }
                    let mut values = vec![Fp::ZERO; g.dim()];
                    let mut c = code;
                    for &i in &slots {
                        values[i] = Fp((c % p) as u32);
                        c /= p;
                    }
                    let Ok(chi) = PChar::from_values(g, values.clone()) else {
                        continue;
                    };
                    if height(g, &chi) != h {
                        continue;
                    }
                    spent += 1;
                    match is_delta_invertible(ca, &chi, AutMode::Identity, 1000)? {
                        DeltaVerdict::Yes(w) => {
                            return Ok(SearchOutcome::Found {
                                chi,
                                evaluations: spent,
                                description: format!(
                                    "support on degrees {} and {} at height {h}",
                                    h - 1,
                                    h - 2
                                ),
                                delta: Some(w),
                            })
                        }
                        DeltaVerdict::No(_) | DeltaVerdict::Inconclusive(_) => {}
                    }
                }
                log.push(format!("height {h} enumeration finished"));
            }
        }
    }
    Ok(SearchOutcome::Exhausted {
        evaluations: spent,
        log,
    })
}

/// Convenience: all tested (chi, rank, height) invariances under the
/// grading family; used by the invariance suite.
pub fn grading_invariance_report(
    ca: &ContactAlgebra,
    chi: &PChar,
) -> Result<Vec<(Fp, i64, usize)>> {
    let g = &ca.lsa;
    let field = *g.field();
    let mut out = Vec::new();
    for c in 1..field.p() {
        let aut = GradingAut::new(&field, Fp(c))?;
        let moved = chi.coadjoint(g, &aut);
        let h = height(g, &moved);
        let r = rank_chi(ca, &moved)?;
        out.push((Fp(c), h, r));
    }
    Ok(out)
}

/// Seeded random characters of height >= 2 supported anywhere on the even
/// part; used by the invariance suite.
pub fn random_chars_height_ge2(
    ca: &ContactAlgebra,
    seed: u64,
    count: usize,
) -> Vec<PChar> {
    let g = &ca.lsa;
    let field = *g.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut guard = 0usize;
    while out.len() < count && guard < count * 100 {
        guard += 1;
        let mut values = vec![Fp::ZERO; g.dim()];
        for i in 0..g.dim() {
            if g.parity(i) == Parity::Even && rng.gen_bool(0.3) {
                values[i] = Fp(rng.gen_range(0..field.p()));
            }
        }
        let Ok(chi) = PChar::from_values(g, values) else {
            continue;
        };
        let h = height(g, &chi);
        if h >= 2 && !g.graded_piece(h).is_empty() && !g.graded_piece(h + 1).is_empty() {
            out.push(chi);
        }
    }
    out
}

/// Map from root tuples to graded supports, used by reports.
pub fn describe_kind(kind: ContactKind) -> String {
    match kind {
        ContactKind::M => "m".to_string(),
        ContactKind::Sm { kappa } => format!("sm(kappa={kappa})"),
    }
}

/// Builds the dual character of a basis monomial function, failing on odd
/// elements; test helper shared by suites.
pub fn dual_of_monomial(ca: &ContactAlgebra, idx: &MultiIndex, c: Fp) -> Result<PChar> {
    let f = SuperElement::monomial(&ca.shape, idx.clone(), c);
    let v = ca
        .coords_of_function(&f)
        .ok_or_else(|| Error::Construction("monomial outside algebra".into()))?;
    let values: Vec<Fp> = v.iter().map(|&x| Fp(x as u32)).collect();
    PChar::from_values(&ca.lsa, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{build_m, build_sm};
    use crate::field::PrimeField;
    use crate::lsa::height;

    fn m15() -> ContactAlgebra {
        build_m(1, PrimeField::new(5).unwrap()).unwrap()
    }

    #[test]
    fn char_matrix_preconditions() {
        let ca = m15();
        let chi = PChar::zero(&ca.lsa);
        assert!(matches!(
            char_matrix(&ca, &chi),
            Err(Error::HeightPrecondition { .. })
        ));
    }

    #[test]
    fn nonsingular_recipe_at_height_2() {
        let ca = m15();
        let chi = build_example_nonsingular(&ca, 2).unwrap();
        assert_eq!(height(&ca.lsa, &chi), 2);
        assert!(is_nonsingular(&ca, &chi).unwrap());
        assert_eq!(rank_chi(&ca, &chi).unwrap(), 3);
    }

    #[test]
    fn nonsingular_recipe_bounds() {
        let ca = m15();
        // p - 2 = 3 is out of the guaranteed range
        assert!(build_example_nonsingular(&ca, 3).is_err());
        assert!(build_example_nonsingular(&ca, 1).is_err());
    }

    #[test]
    fn zero_matrix_when_chi_sits_low() {
        // A character supported strictly below h-1 can pair to zero: take
        // chi supported on degree h-1 = 1 but evaluate after moving
        // support out of the bracket range is impossible here, so instead
        // check the rank-0 case on a singular support.
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(2, field).unwrap();
        let chi = build_example_singular(&ca).unwrap();
        assert_eq!(height(&ca.lsa, &chi), 3);
        assert!(!is_nonsingular(&ca, &chi).unwrap());
        // the defining property: the column of x_n vanishes
        let cm = char_matrix(&ca, &chi).unwrap();
        let n = ca.n();
        for r in 0..cm.a1.nrows() {
            assert!(cm.a1.get(r, n - 1).is_zero());
        }
    }

    #[test]
    fn singular_unrealizable_at_n1() {
        let ca = m15();
        assert!(build_example_singular(&ca).is_err());
    }

    #[test]
    fn rank_invariant_under_basis_rescale() {
        // rank is defined through the graded pieces, so rescaling the
        // graded basis (a grading automorphism) must not change it.
        let ca = m15();
        let chi = build_example_nonsingular(&ca, 2).unwrap();
        for (c, h, r) in grading_invariance_report(&ca, &chi).unwrap() {
            assert_eq!(h, 2, "c = {c}");
            assert_eq!(r, 3, "c = {c}");
        }
    }

    #[test]
    fn delta_preconditions() {
        let ca = m15();
        let chi = build_example_nonsingular(&ca, 2).unwrap();
        // full rank -> No
        match is_delta_invertible(&ca, &chi, AutMode::Identity, 100).unwrap() {
            DeltaVerdict::No(_) => {}
            other => panic!("expected No, got {other:?}"),
        }
    }

    #[test]
    fn regular_semisimple_examples() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(2, field).unwrap();
        // chi dual to the first diagonal Cartan element: chi(h_1) = 1
        let h0 = ca.cartan[0].1.clone();
        let idx = h0.iter().position(|&c| c != 0).unwrap();
        let chi = PChar::dual(&ca.lsa, idx, Fp::ONE).unwrap();
        assert_eq!(height(&ca.lsa, &chi), 1);
        let res = is_regular_semisimple(&ca, &chi, AutMode::Identity).unwrap();
        assert!(res.value && !res.degenerate);
        // zero on h_1 fails
        let hz = ca.cartan[2].1.clone();
        let zidx = hz.iter().position(|&c| c != 0).unwrap();
        let chi2 = PChar::dual(&ca.lsa, zidx, Fp::ONE).unwrap();
        assert_eq!(height(&ca.lsa, &chi2), 1);
        let res2 = is_regular_semisimple(&ca, &chi2, AutMode::GradingOrbit).unwrap();
        assert!(!res2.value);
        // n = 1 is degenerate
        let ca1 = m15();
        let t = ca1.cartan[0].1.clone();
        let tidx = t.iter().position(|&c| c != 0).unwrap();
        let chi3 = PChar::dual(&ca1.lsa, tidx, Fp::ONE).unwrap();
        let res3 = is_regular_semisimple(&ca1, &chi3, AutMode::Identity).unwrap();
        assert!(res3.value && res3.degenerate);
    }

    #[test]
    fn search_nonsingular_m15() {
        let ca = m15();
        match search_char(&ca, CharTarget::Nonsingular, 7, 200).unwrap() {
            SearchOutcome::Found { chi, .. } => {
                assert!(is_nonsingular(&ca, &chi).unwrap());
            }
            SearchOutcome::Exhausted { .. } => panic!("must find a nonsingular character"),
        }
    }

    #[test]
    fn search_budget_zero_exhausts() {
        let ca = m15();
        match search_char(&ca, CharTarget::DeltaInvertible, 0, 0).unwrap() {
            SearchOutcome::Exhausted { evaluations, .. } => assert_eq!(evaluations, 0),
            _ => panic!("budget 0 must exhaust"),
        }
    }

    #[test]
    fn sm_search_regular_semisimple() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_sm(2, Fp(1), field).unwrap();
        match search_char(&ca, CharTarget::RegularSemisimple, 3, 50).unwrap() {
            SearchOutcome::Found { chi, .. } => {
                let res = is_regular_semisimple(&ca, &chi, AutMode::GradingOrbit).unwrap();
                assert!(res.value);
            }
            SearchOutcome::Exhausted { .. } => {
                panic!("regular semisimple character must exist on sm(2, 1)")
            }
        }
    }
}
