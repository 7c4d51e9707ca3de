//! Composite theorem verification suites at desk scale: the simplicity
//! of Kac modules over nonsingular, Delta-invertible and regular
//! semisimple characters, together with the unique-socle property.
//!
//! Each suite returns a structured report (one line per check) so the
//! command-line frontend and the acceptance tests share the exact same
//! logic and tolerances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chars::{
    is_regular_semisimple, search_char, AutMode, CharTarget, SearchOutcome,
};
use crate::contact::ContactAlgebra;
use crate::field::Fp;
use crate::linalg::RowSpace;
use crate::lsa::{height, Lsa, PChar};
use crate::repn::induce::{kac_module, InducedModule};
use crate::repn::meataxe::{graded_simple, GradedOutcome};
use crate::repn::sweep::simple_g0_heads;
use crate::repn::{verify_module, SparseMat, SubAlgebra};
use crate::{Error, Result};

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// One named check with its outcome and detail line.
#[derive(Debug, Clone)]
pub struct SuiteCheck {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

/// A suite report: named checks plus the seed that drove randomization.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(SuiteCheck {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    /// Worst status across the checks (pass < inconclusive < fail).
    pub fn overall(&self) -> Status {
        self.checks
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(Status::Pass)
    }
}

/// A small set of basis indices whose span Lie-generates the algebra:
/// low degrees first, extended upward until the bracket closure fills.
pub fn lie_generating_indices(g: &Lsa) -> Vec<usize> {
    let field = *g.field();
    let mut top = 1i64.min(g.top_degree());
    loop {
        let indices: Vec<usize> = (0..g.dim()).filter(|&i| g.degree(i) <= top).collect();
        // bracket closure of the span
        let mut space = RowSpace::new(&field, g.dim());
        let mut queue: Vec<Vec<u8>> = Vec::new();
        for &i in &indices {
            let mut v = vec![0u8; g.dim()];
            v[i] = 1;
            if space.insert(&v) {
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            if space.is_full() {
                break;
            }
            for b in space.basis() {
                let w = g.bracket(&v, &b);
                if space.insert(&w) {
                    queue.push(w);
                }
            }
        }
        if space.is_full() || top >= g.top_degree() {
            return indices;
        }
        top += 1;
    }
}

/// Like [`lie_generating_indices`] but for the non-negative subalgebra:
/// returns parent indices of a generating set of `g^0`.
pub fn g0_generating_indices(g: &Lsa) -> Vec<usize> {
    let field = *g.field();
    let g0_all: Vec<usize> = (0..g.dim()).filter(|&i| g.degree(i) >= 0).collect();
    let mut top = 1i64.min(g.top_degree());
    loop {
        let indices: Vec<usize> = g0_all
            .iter()
            .copied()
            .filter(|&i| g.degree(i) <= top)
            .collect();
        let mut space = RowSpace::new(&field, g.dim());
        let mut queue: Vec<Vec<u8>> = Vec::new();
        for &i in &indices {
            let mut v = vec![0u8; g.dim()];
            v[i] = 1;
            if space.insert(&v) {
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            for b in space.basis() {
                let w = g.bracket(&v, &b);
                if space.insert(&w) {
                    queue.push(w);
                }
            }
        }
        let filled = g0_all.iter().all(|&i| {
            let mut v = vec![0u8; g.dim()];
            v[i] = 1;
            space.contains(&v)
        });
        if filled || top >= g.top_degree() {
            return indices;
        }
        top += 1;
    }
}

/// A Kac module materialized with enough action matrices for meataxe
/// certification (a Lie-generating set of `g`) and socle spins (a
/// generating set of `g^0`).
pub struct SuiteKac {
    pub kac: InducedModule,
    pub gens_full: Vec<usize>,
    pub gens_g0: Vec<usize>,
}

/// Builds the Kac module of a head with the action subset the suites
/// need; small modules (where exhaustive verification is affordable)
/// materialize everything.
pub fn build_suite_kac(
    ca: &ContactAlgebra,
    chi: &PChar,
    g0: &SubAlgebra,
    head: &crate::repn::GModule,
) -> Result<SuiteKac> {
    let g = &ca.lsa;
    let gens_full = lie_generating_indices(g);
    let gens_g0 = g0_generating_indices(g);
    let p = g.field().p() as usize;
    let expected = p.pow(ca.n() as u32) * (1usize << (ca.n() + 1)) * head.dim;
    let wanted: Option<Vec<usize>> = if expected <= 600 {
        None
    } else {
        let mut w: Vec<usize> = gens_full.iter().chain(gens_g0.iter()).copied().collect();
        w.sort_unstable();
        w.dedup();
        Some(w)
    };
    let kac = kac_module(ca, chi, g0, head, wanted.as_deref())?;
    Ok(SuiteKac {
        kac,
        gens_full,
        gens_g0,
    })
}

/// Checks that the `g^0`-spin of `v` contains the whole `1 (x) M` block.
fn spin_contains_one_block(
    field: &crate::field::PrimeField,
    gens: &[&SparseMat],
    v: &[u8],
    one_block: &[usize],
) -> bool {
    let dim = v.len();
    let mut space = RowSpace::new(field, dim);
    let mut queue: Vec<Vec<u8>> = Vec::new();
    if space.insert(v) {
        queue.push(v.to_vec());
    }
    let contains_block = |space: &RowSpace| -> bool {
        one_block.iter().all(|&b| {
            let mut unit = vec![0u8; dim];
            unit[b] = 1;
            space.contains(&unit)
        })
    };
    let mut since_check = 0usize;
    while let Some(w) = queue.pop() {
        for a in gens {
            let img = a.matvec(field, &w);
            if space.insert(&img) {
                queue.push(img);
                since_check += 1;
                if since_check >= 16 {
                    since_check = 0;
                    if contains_block(&space) {
                        return true;
                    }
                }
            }
        }
    }
    contains_block(&space)
}

/// The randomized unique-socle property: for `trials` seeded nonzero
/// vectors of the Kac module, the `g^0`-submodule each generates must
/// contain `1 (x) M`.
pub fn socle_check(sk: &SuiteKac, seed: u64, trials: usize) -> (usize, usize) {
    let m = &sk.kac.module;
    let field = m.field;
    let gens: Vec<&SparseMat> = sk.gens_g0.iter().map(|&i| m.action(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0usize;
    for _ in 0..trials {
        let mut v = vec![0u8; m.dim];
        while v.iter().all(|&x| x == 0) {
            for x in v.iter_mut() {
                *x = rng.gen_range(0..field.p()) as u8;
            }
        }
        if spin_contains_one_block(&field, &gens, &v, &sk.kac.one_block) {
            good += 1;
        }
    }
    (good, trials)
}

/// Lower-bound half of simplicity, independent of the MeatAxe:
/// `u_chi(g) (1 (x) M) = K`.
pub fn one_block_generates(sk: &SuiteKac) -> bool {
    let m = &sk.kac.module;
    let field = m.field;
    let gens: Vec<&SparseMat> = sk.gens_full.iter().map(|&i| m.action(i)).collect();
    let mut v = vec![0u8; m.dim];
    v[sk.kac.one_block[0]] = 1;
    let space = crate::repn::spin(&field, &gens, &v);
    space.is_full()
}

fn certify_kac(
    report: &mut SuiteReport,
    label: &str,
    sk: &SuiteKac,
    seed: u64,
    with_socle: bool,
) {
    let m = &sk.kac.module;
    match graded_simple(m, &sk.gens_full, seed) {
        GradedOutcome::Simple { certificate, queer } => {
            let detail = match certificate {
                Some(c) => format!(
                    "dim {} certified irreducible (attempt {}, kernel {}, element {})",
                    m.dim, c.attempts, c.nullity, c.word
                ),
                None => format!(
                    "dim {} graded-simple{}",
                    m.dim,
                    if queer { " (ungraded splitting exists)" } else { "" }
                ),
            };
            report.push(format!("{label}: Kac module simple"), Status::Pass, detail);
        }
        GradedOutcome::Reducible(w) => {
            report.push(
                format!("{label}: Kac module simple"),
                Status::Fail,
                format!("proper graded submodule of dimension {}", w.len()),
            );
        }
        GradedOutcome::Inconclusive(r) => {
            report.push(format!("{label}: Kac module simple"), Status::Inconclusive, r);
        }
    }
    if !one_block_generates(sk) {
        report.push(
            format!("{label}: 1(x)M generates"),
            Status::Fail,
            "u_chi(g)(1 (x) M) is a proper subspace",
        );
    } else {
        report.push(
            format!("{label}: 1(x)M generates"),
            Status::Pass,
            "spin of 1 (x) M fills the Kac module",
        );
    }
    if with_socle {
        let (good, total) = socle_check(sk, seed, 64);
        report.push(
            format!("{label}: unique socle"),
            if good == total { Status::Pass } else { Status::Fail },
            format!("{good}/{total} seeded spins contain 1 (x) M"),
        );
    }
}

fn head_sweep_and_certify(
    report: &mut SuiteReport,
    ca: &ContactAlgebra,
    chi: &PChar,
    seed: u64,
    head_cap: usize,
    with_socle: bool,
) -> Result<()> {
    let g0 = SubAlgebra::filtration(&ca.lsa, 0);
    let heads = simple_g0_heads(ca, &g0, chi, seed, head_cap)?;
    if heads.is_empty() {
        report.push(
            "head sweep",
            Status::Fail,
            "no simple u_chi(g^0)-modules produced".to_string(),
        );
        return Ok(());
    }
    report.push(
        "head sweep",
        Status::Pass,
        format!(
            "{} head(s) from generalized Vermas of dimension {}",
            heads.len(),
            heads[0].verma_dim
        ),
    );
    let chi0 = g0.restrict_char(chi);
    for (k, head) in heads.iter().enumerate() {
        if head.module.dim <= 128 {
            let rep = verify_module(&g0.lsa, &head.module, &chi0);
            report.push(
                format!("head {k}: valid u_chi(g^0)-module"),
                if rep.is_empty() { Status::Pass } else { Status::Fail },
                if rep.is_empty() {
                    format!("dim {} verified exhaustively", head.module.dim)
                } else {
                    rep.join("; ")
                },
            );
        }
        let sk = build_suite_kac(ca, chi, &g0, &head.module)?;
        let p = ca.field().p() as usize;
        let expected = p.pow(ca.n() as u32) * (1usize << (ca.n() + 1)) * head.module.dim;
        report.push(
            format!("head {k}: Kac dimension law"),
            if sk.kac.module.dim == expected {
                Status::Pass
            } else {
                Status::Fail
            },
            format!("dim K = {} = p^n 2^(n+1) dim M", sk.kac.module.dim),
        );
        // Small Kac modules admit the exhaustive module axioms check.
        if sk.kac.module.dim <= 600 && sk.kac.module.has_full_actions() {
            let rep = verify_module(&ca.lsa, &sk.kac.module, chi);
            report.push(
                format!("head {k}: Kac module verifies"),
                if rep.is_empty() { Status::Pass } else { Status::Fail },
                if rep.is_empty() {
                    "module axioms pass exhaustively".to_string()
                } else {
                    rep.join("; ")
                },
            );
        }
        certify_kac(report, &format!("head {k}"), &sk, seed, with_socle);
    }
    Ok(())
}

/// Theorem suite for nonsingular characters: search for a witness, sweep
/// the simple heads, certify every Kac module and the socle property.
pub fn theorem_nonsingular_suite(
    ca: &ContactAlgebra,
    seed: u64,
    budget: usize,
    head_cap: usize,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("theorem-nonsingular", seed);
    match search_char(ca, CharTarget::Nonsingular, seed, budget)? {
        SearchOutcome::Found {
            chi,
            evaluations,
            description,
            ..
        } => {
            report.push(
                "nonsingular witness",
                Status::Pass,
                format!(
                    "height {} ({description}, {evaluations} evaluations)",
                    height(&ca.lsa, &chi)
                ),
            );
            head_sweep_and_certify(&mut report, ca, &chi, seed, head_cap, true)?;
        }
        SearchOutcome::Exhausted { evaluations, log } => {
            report.push(
                "nonsingular witness",
                Status::Inconclusive,
                format!(
                    "search exhausted after {evaluations} evaluations: {}",
                    log.join(" | ")
                ),
            );
        }
    }
    Ok(report)
}

/// Theorem suite for regular semisimple characters of height 1: the
/// explicit Cartan-supported character, validated, then the head sweep
/// and Kac certification.
pub fn theorem_regular_semisimple_suite(
    ca: &ContactAlgebra,
    seed: u64,
    head_cap: usize,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("theorem-regular-semisimple", seed);
    if ca.n() < 2 {
        report.push(
            "regular semisimple witness",
            Status::Inconclusive,
            "n = 1 is degenerate: the h_j family is empty".to_string(),
        );
        return Ok(report);
    }
    let chi = match search_char(ca, CharTarget::RegularSemisimple, seed, 64)? {
        SearchOutcome::Found { chi, .. } => chi,
        SearchOutcome::Exhausted { log, .. } => {
            report.push(
                "regular semisimple witness",
                Status::Fail,
                format!("no Cartan-supported witness: {}", log.join(" | ")),
            );
            return Ok(report);
        }
    };
    let res = is_regular_semisimple(ca, &chi, AutMode::GradingOrbit)?;
    report.push(
        "regular semisimple witness",
        if res.value { Status::Pass } else { Status::Fail },
        format!(
            "height {} character, witness c = {:?}",
            height(&ca.lsa, &chi),
            res.witness_c
        ),
    );
    if res.value {
        head_sweep_and_certify(&mut report, ca, &chi, seed, head_cap, false)?;
    }
    Ok(report)
}

/// Theorem suite for Delta-invertible characters: bounded search over
/// heights >= 5; a found witness runs the Kac and socle suites, an
/// exhausted search reports inconclusive (never a silent pass).
pub fn theorem_delta_suite(
    ca: &ContactAlgebra,
    seed: u64,
    budget: usize,
    head_cap: usize,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("theorem-delta-invertible", seed);
    match search_char(ca, CharTarget::DeltaInvertible, seed, budget)? {
        SearchOutcome::Found {
            chi,
            evaluations,
            description,
            delta,
        } => {
            let w = delta.expect("delta search returns its witness");
            report.push(
                "Delta-invertible witness",
                Status::Pass,
                format!(
                    "height {} rank {} ({description}, {evaluations} evaluations, I = {:?}, J = {:?})",
                    w.h,
                    w.r + 1,
                    w.i_set,
                    w.j_set
                ),
            );
            head_sweep_and_certify(&mut report, ca, &chi, seed, head_cap, true)?;
        }
        SearchOutcome::Exhausted { evaluations, log } => {
            report.push(
                "Delta-invertible witness",
                Status::Inconclusive,
                format!(
                    "search exhausted after {evaluations} evaluations; log: {}",
                    log.join(" | ")
                ),
            );
        }
    }
    Ok(report)
}

/// Invariance suite: height and rank are preserved by the grading
/// automorphism family on seeded random characters of height >= 2.
pub fn invariance_suite(ca: &ContactAlgebra, seed: u64, count: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("coadjoint-invariance", seed);
    let chars = crate::chars::random_chars_height_ge2(ca, seed, count);
    if chars.len() < count {
        report.push(
            "sample generation",
            Status::Inconclusive,
            format!("only {} of {count} characters sampled", chars.len()),
        );
    }
    let mut ok = 0usize;
    let mut total = 0usize;
    for chi in &chars {
        let h = height(&ca.lsa, chi);
        let r = crate::chars::rank_chi(ca, chi)?;
        for (c, hh, rr) in crate::chars::grading_invariance_report(ca, chi)? {
            total += 1;
            if hh == h && rr == r {
                ok += 1;
            } else {
                report.push(
                    "invariance violation",
                    Status::Fail,
                    format!("c = {c}: (ht, rank) moved from ({h}, {r}) to ({hh}, {rr})"),
                );
            }
        }
    }
    report.push(
        "height and rank invariance",
        if ok == total { Status::Pass } else { Status::Fail },
        format!("{ok}/{total} (character, c) pairs invariant"),
    );
    Ok(report)
}

/// Twist coherence: twisting a Kac module by a grading automorphism
/// yields a module whose p-character is the coadjoint image; meataxe
/// verdicts agree between the module and its twist.
pub fn twist_suite(ca: &ContactAlgebra, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("module-twist", seed);
    let g = &ca.lsa;
    let field = *g.field();
    let chi = match search_char(ca, CharTarget::Nonsingular, seed, 64)? {
        SearchOutcome::Found { chi, .. } => chi,
        SearchOutcome::Exhausted { .. } => {
            report.push("witness", Status::Inconclusive, "no nonsingular witness");
            return Ok(report);
        }
    };
    let g0 = SubAlgebra::filtration(g, 0);
    let heads = simple_g0_heads(ca, &g0, &chi, seed, 1)?;
    let head = &heads[0].module;
    let sk = build_suite_kac(ca, &chi, &g0, head)?;
    if !sk.kac.module.has_full_actions() {
        report.push("twist", Status::Inconclusive, "module too large for the twist sweep");
        return Ok(report);
    }
    for c in 2..field.p() {
        let aut = crate::lsa::GradingAut::new(&field, Fp(c))?;
        let twisted = crate::repn::twist_module(g, &sk.kac.module, &aut);
        let moved = chi.coadjoint(g, &aut);
        let rep = verify_module(g, &twisted, &moved);
        report.push(
            format!("twist by c = {c}"),
            if rep.is_empty() { Status::Pass } else { Status::Fail },
            if rep.is_empty() {
                "twisted module has the coadjoint p-character".to_string()
            } else {
                rep.join("; ")
            },
        );
        let verdict_orig = graded_simple(&sk.kac.module, &sk.gens_full, seed);
        let verdict_tw = graded_simple(&twisted, &sk.gens_full, seed);
        let agree = matches!(
            (&verdict_orig, &verdict_tw),
            (GradedOutcome::Simple { .. }, GradedOutcome::Simple { .. })
                | (GradedOutcome::Reducible(_), GradedOutcome::Reducible(_))
        );
        report.push(
            format!("verdicts agree at c = {c}"),
            if agree { Status::Pass } else { Status::Fail },
            "meataxe verdict preserved by twisting".to_string(),
        );
    }
    Ok(report)
}

/// Fault injection: the verifiers must flag corrupted data.
pub fn fault_injection_suite(ca: &ContactAlgebra, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("fault-injection", seed);
    let mut g = ca.lsa.clone();
    g.corrupt_sc(0, 1, vec![(0, Fp(1))]);
    report.push(
        "corrupted structure constant detected",
        if g.verify_jacobi().is_empty() {
            Status::Fail
        } else {
            Status::Pass
        },
        "verify_jacobi flags the corruption".to_string(),
    );
    let mut g2 = ca.lsa.clone();
    let even = (0..g2.dim())
        .find(|&i| {
            !g2.parity(i).is_odd() && g2.pmap(i).map(|v| !v.is_empty()).unwrap_or(false)
        })
        .ok_or_else(|| Error::Construction("no even element with nonzero p-power".into()))?;
    g2.corrupt_pmap(even);
    report.push(
        "corrupted p-mapping detected",
        if g2.verify_restricted().is_empty() {
            Status::Fail
        } else {
            Status::Pass
        },
        format!("zeroed p-power of {}", g2.label(even)),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::build_m;
    use crate::field::PrimeField;

    #[test]
    fn generating_sets_are_generating() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        let gens = lie_generating_indices(&ca.lsa);
        assert!(gens.len() < ca.lsa.dim());
        let g0gens = g0_generating_indices(&ca.lsa);
        assert!(g0gens.iter().all(|&i| ca.lsa.degree(i) >= 0));
    }

    #[test]
    fn nonsingular_suite_m15() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        let report = theorem_nonsingular_suite(&ca, 7, 100, 2).unwrap();
        assert_eq!(report.overall(), Status::Pass, "{:#?}", report.checks);
    }

    #[test]
    fn fault_suite_m15() {
        let field = PrimeField::new(5).unwrap();
        let ca = build_m(1, field).unwrap();
        let report = fault_injection_suite(&ca, 0).unwrap();
        assert_eq!(report.overall(), Status::Pass);
    }
}
