//! The truncated divided power superalgebra `O(n, m)` and its distinguished
//! superderivations.
//!
//! Basis monomials are `x^(r)` for exponent tuples `r` with `0 <= r_i < p`
//! on the first `n` (even) slots and `r_i` in `{0, 1}` on the last `m`
//! (odd) slots. The product carries three factors: truncation of odd
//! slots, the Koszul sign from reordering odd generators, and the
//! divided-power binomial on even slots. Slot indices are 0-based
//! throughout the code; the odd block starts at slot `n`.

use std::collections::BTreeMap;

use crate::field::{Fp, PrimeField};
use crate::{Error, Result};

/// Z/2 parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_u64(v: u64) -> Parity {
        if v % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `(-1)^(|a||b|)` as a field element.
pub fn koszul_sign(field: &PrimeField, a: Parity, b: Parity) -> Fp {
    if a.is_odd() && b.is_odd() {
        field.sign(1)
    } else {
        Fp::ONE
    }
}

/// The ambient shape `(n, m, p)` of `O(n, m)` over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub n: usize,
    pub m: usize,
    pub field: PrimeField,
}

impl Shape {
    pub fn new(n: usize, m: usize, field: PrimeField) -> Shape {
        assert!(n >= 1 && m >= 1, "shape requires positive n, m");
        Shape { n, m, field }
    }

    /// Shape of the contact family: `m = n + 1`.
    pub fn contact(n: usize, field: PrimeField) -> Shape {
        Shape::new(n, n + 1, field)
    }

    pub fn slots(&self) -> usize {
        self.n + self.m
    }

    pub fn is_odd_slot(&self, k: usize) -> bool {
        k >= self.n
    }

    /// Exponent cap per slot: `p - 1` on even slots, `1` on odd slots.
    pub fn cap(&self, k: usize) -> u8 {
        if self.is_odd_slot(k) {
            1
        } else {
            (self.field.p() - 1) as u8
        }
    }

    /// Number of basis monomials `p^n * 2^m`.
    pub fn basis_count(&self) -> usize {
        (self.field.p() as usize).pow(self.n as u32) * (1usize << self.m)
    }

    /// All multi-indices of the shape in lexicographic order.
    pub fn all_indices(&self) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(self.basis_count());
        let mut cur = vec![0u8; self.slots()];
        loop {
            out.push(MultiIndex::new(cur.clone()));
            // increment as a mixed-radix counter, last slot fastest
            let mut k = self.slots();
            loop {
                if k == 0 {
                    out.sort();
                    return out;
                }
                k -= 1;
                if cur[k] < self.cap(k) {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
            }
        }
    }
}

/// An exponent tuple in `I(n, m)`.
///
/// `Ord` is lexicographic on the entries, which fixes the canonical
/// iteration order of every sparse map in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    e: Vec<u8>,
}

impl MultiIndex {
    pub fn new(e: Vec<u8>) -> MultiIndex {
        MultiIndex { e }
    }

    pub fn zero(slots: usize) -> MultiIndex {
        MultiIndex { e: vec![0; slots] }
    }

    /// The unit tuple `eps_k` (0-based slot).
    pub fn unit(slots: usize, k: usize) -> MultiIndex {
        let mut e = vec![0; slots];
        e[k] = 1;
        MultiIndex { e }
    }

    pub fn entries(&self) -> &[u8] {
        &self.e
    }

    pub fn entry(&self, k: usize) -> u8 {
        self.e[k]
    }

    pub fn is_valid(&self, shape: &Shape) -> bool {
        self.e.len() == shape.slots() && self.e.iter().enumerate().all(|(k, &v)| v <= shape.cap(k))
    }

    /// Parity: sum of odd-slot exponents mod 2.
    pub fn parity(&self, shape: &Shape) -> Parity {
        Parity::from_u64(self.e[shape.n..].iter().map(|&v| v as u64).sum())
    }

    /// The norm driving the standard grading of the contact family
    /// (`m = n + 1`): even and first-`n` odd exponents count once, the
    /// last odd slot counts twice.
    pub fn norm(&self, shape: &Shape) -> u64 {
        assert_eq!(shape.m, shape.n + 1, "norm is defined for m = n + 1");
        let last = shape.slots() - 1;
        self.e[..last].iter().map(|&v| v as u64).sum::<u64>() + 2 * self.e[last] as u64
    }

    fn plus(&self, other: &MultiIndex) -> Vec<u16> {
        self.e
            .iter()
            .zip(other.e.iter())
            .map(|(&a, &b)| a as u16 + b as u16)
            .collect()
    }

    /// `self - eps_k`, or `None` when the slot is empty.
    pub fn minus_unit(&self, k: usize) -> Option<MultiIndex> {
        if self.e[k] == 0 {
            return None;
        }
        let mut e = self.e.clone();
        e[k] -= 1;
        Some(MultiIndex { e })
    }

    pub fn plus_unit(&self, k: usize) -> MultiIndex {
        let mut e = self.e.clone();
        e[k] += 1;
        MultiIndex { e }
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.e.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Product of two basis monomials: Koszul sign, odd truncation, and the
/// divided-power binomial; `None` encodes the zero product (including
/// truncation out of `I(n, m)`).
pub fn dp_product(shape: &Shape, r: &MultiIndex, s: &MultiIndex) -> Option<(Fp, MultiIndex)> {
    assert!(r.is_valid(shape) && s.is_valid(shape), "shape mismatch");
    let field = &shape.field;
    let n = shape.n;
    // Odd-slot truncation: min(1, 2 - r_i - s_i) kills repeated odd slots.
    for k in n..shape.slots() {
        if r.e[k] + s.e[k] >= 2 {
            return None;
        }
    }
    // Koszul sign: each odd generator of s at slot i moving left past an
    // odd generator of r at a later slot j > i contributes one -1.
    let mut swaps = 0u64;
    for i in n..shape.slots() {
        if s.e[i] == 1 {
            for j in (i + 1)..shape.slots() {
                swaps += r.e[j] as u64;
            }
        }
    }
    let binom = field.tuple_binom(&r.e, &s.e, n);
    if binom.is_zero() {
        return None;
    }
    let coeff = field.mul(field.sign(swaps), binom);
    let sum: Vec<u8> = r.plus(s).into_iter().map(|v| v as u8).collect();
    Some((coeff, MultiIndex::new(sum)))
}

/// An element of `O(n, m)` as a sparse map from monomials to scalars.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperElement {
    shape: Shape,
    terms: BTreeMap<MultiIndex, Fp>,
}

impl SuperElement {
    pub fn zero(shape: &Shape) -> SuperElement {
        SuperElement {
            shape: *shape,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(shape: &Shape, idx: MultiIndex, coeff: Fp) -> SuperElement {
        assert!(idx.is_valid(shape), "invalid multi-index for shape");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(idx, coeff);
        }
        SuperElement {
            shape: *shape,
            terms,
        }
    }

    /// The unit `x^(0)`.
    pub fn one(shape: &Shape) -> SuperElement {
        Self::monomial(shape, MultiIndex::zero(shape.slots()), Fp::ONE)
    }

    /// The generator `x_k` (0-based slot).
    pub fn generator(shape: &Shape, k: usize) -> SuperElement {
        Self::monomial(shape, MultiIndex::unit(shape.slots(), k), Fp::ONE)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Fp)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Fp {
        self.terms.get(idx).copied().unwrap_or(Fp::ZERO)
    }

    pub fn add_term(&mut self, idx: MultiIndex, coeff: Fp) {
        if coeff.is_zero() {
            return;
        }
        let field = self.shape.field;
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(*o.get(), coeff);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &SuperElement) -> SuperElement {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        let mut out = self.clone();
        for (idx, c) in other.terms() {
            out.add_term(idx.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &SuperElement) -> SuperElement {
        self.add(&other.scale(self.shape.field.sign(1)))
    }

    pub fn scale(&self, c: Fp) -> SuperElement {
        let field = self.shape.field;
        let mut out = SuperElement::zero(&self.shape);
        for (idx, v) in self.terms() {
            out.add_term(idx.clone(), field.mul(v, c));
        }
        out
    }

    /// Parity when homogeneous (zero counts as even); `None` when mixed.
    pub fn homogeneous_parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Some(Parity::Even);
        };
        let par = first.parity(&self.shape);
        if it.all(|idx| idx.parity(&self.shape) == par) {
            Some(par)
        } else {
            None
        }
    }

    /// Norm when all monomials share one (contact grading); `None` if mixed.
    pub fn homogeneous_norm(&self) -> Option<u64> {
        let mut it = self.terms.keys();
        let first = it.next()?.norm(&self.shape);
        if it.all(|idx| idx.norm(&self.shape) == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Bilinear extension of the divided-power product.
    pub fn multiply(&self, other: &SuperElement) -> SuperElement {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        let field = self.shape.field;
        let mut out = SuperElement::zero(&self.shape);
        for (r, a) in self.terms() {
            for (s, b) in other.terms() {
                if let Some((c, idx)) = dp_product(&self.shape, r, s) {
                    out.add_term(idx, field.mul(field.mul(a, b), c));
                }
            }
        }
        out
    }
}

/// The distinguished partial derivative `∂_k` applied to `f` (0-based slot).
///
/// On a monomial this strips one power from slot `k`, with a Koszul sign
/// of -1 per occupied odd slot strictly before `k` (the sign is forced by
/// the Leibniz rule with monomial factors ordered by slot).
pub fn partial(k: usize, f: &SuperElement) -> Result<SuperElement> {
    let shape = *f.shape();
    if k >= shape.slots() {
        return Err(Error::DirectionOutOfRange(k, shape.slots() - 1));
    }
    let field = shape.field;
    let mut out = SuperElement::zero(&shape);
    for (idx, c) in f.terms() {
        let Some(lower) = idx.minus_unit(k) else {
            continue;
        };
        let sign = if shape.is_odd_slot(k) {
            let crossed: u64 = (shape.n..k).map(|j| idx.entry(j) as u64).sum();
            field.sign(crossed)
        } else {
            Fp::ONE
        };
        out.add_term(lower, field.mul(c, sign));
    }
    Ok(out)
}

/// A distinguished vector field `sum_k f_k ∂_k` with homogeneous parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    shape: Shape,
    parity: Parity,
    comps: BTreeMap<usize, SuperElement>,
}

impl VectorField {
    pub fn zero(shape: &Shape, parity: Parity) -> VectorField {
        VectorField {
            shape: *shape,
            parity,
            comps: BTreeMap::new(),
        }
    }

    /// Builds from components, dropping zero entries. `parity` is the
    /// parity of the field as an operator: `|f_k| + |x_k|` for each
    /// stored component.
    pub fn from_components(
        shape: &Shape,
        parity: Parity,
        comps: Vec<(usize, SuperElement)>,
    ) -> VectorField {
        let mut map = BTreeMap::new();
        for (k, f) in comps {
            assert!(k < shape.slots(), "component direction out of range");
            if !f.is_zero() {
                debug_assert!(
                    f.homogeneous_parity()
                        .map(|pf| {
                            let px = if shape.is_odd_slot(k) {
                                Parity::Odd
                            } else {
                                Parity::Even
                            };
                            pf.xor(px) == parity
                        })
                        .unwrap_or(true),
                    "component parity inconsistent with field parity"
                );
                let entry: &mut SuperElement = map.entry(k).or_insert_with(|| SuperElement::zero(shape));
                *entry = entry.add(&f);
            }
        }
        map.retain(|_, f: &mut SuperElement| !f.is_zero());
        VectorField {
            shape: *shape,
            parity,
            comps: map,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn component(&self, k: usize) -> Option<&SuperElement> {
        self.comps.get(&k)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &SuperElement)> {
        self.comps.iter().map(|(&k, f)| (k, f))
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        debug_assert!(
            self.is_zero() || other.is_zero() || self.parity == other.parity,
            "parity mismatch in vector field sum"
        );
        let mut comps: Vec<(usize, SuperElement)> =
            self.comps.iter().map(|(&k, f)| (k, f.clone())).collect();
        comps.extend(other.comps.iter().map(|(&k, f)| (k, f.clone())));
        VectorField::from_components(&self.shape, self.parity, comps)
    }

    pub fn scale(&self, c: Fp) -> VectorField {
        VectorField::from_components(
            &self.shape,
            self.parity,
            self.comps.iter().map(|(&k, f)| (k, f.scale(c))).collect(),
        )
    }

    /// Applies the field to `f`: `sum_k f_k * ∂_k(f)`.
    pub fn apply(&self, f: &SuperElement) -> SuperElement {
        assert_eq!(self.shape, *f.shape(), "shape mismatch");
        let mut out = SuperElement::zero(&self.shape);
        for (k, fk) in self.components() {
            out = out.add(&fk.multiply(&partial(k, f).expect("component in range")));
        }
        out
    }

    /// Superbracket `[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1`, re-expressed
    /// as a distinguished field through its values on the generators.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.shape, other.shape, "shape mismatch");
        let shape = self.shape;
        let field = shape.field;
        let sign = koszul_sign(&field, self.parity, other.parity);
        let mut comps = Vec::new();
        for k in 0..shape.slots() {
            let xk = SuperElement::generator(&shape, k);
            let lhs = self.apply(&other.apply(&xk));
            let rhs = other.apply(&self.apply(&xk)).scale(sign);
            let comp = lhs.sub(&rhs);
            if !comp.is_zero() {
                comps.push((k, comp));
            }
        }
        VectorField::from_components(&shape, self.parity.xor(other.parity), comps)
    }

    /// The `p`-fold operator power of an even field, again a distinguished
    /// field (char-p fact: the p-th power of a derivation is a derivation),
    /// so it is determined by its values on the generators.
    pub fn p_power(&self) -> Result<VectorField> {
        if self.parity.is_odd() {
            return Err(Error::OddPPower);
        }
        let shape = self.shape;
        let p = shape.field.p() as usize;
        let mut comps = Vec::new();
        for k in 0..shape.slots() {
            let mut g = self.apply(&SuperElement::generator(&shape, k));
            for _ in 0..p - 1 {
                g = self.apply(&g);
            }
            if !g.is_zero() {
                comps.push((k, g));
            }
        }
        Ok(VectorField::from_components(&shape, Parity::Even, comps))
    }
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
    fn dp_product_examples() {
        let s = shape15();
        // (e1, e1) -> (2, 2e1): binom(2,1) = 2
        let (c, idx) = dp_product(
            &s,
            &MultiIndex::new(vec![1, 0, 0]),
            &MultiIndex::new(vec![1, 0, 0]),
        )
        .unwrap();
        assert_eq!(c, Fp(2));
        assert_eq!(idx, MultiIndex::new(vec![2, 0, 0]));
        // odd square is zero
        assert!(dp_product(
            &s,
            &MultiIndex::new(vec![0, 1, 0]),
            &MultiIndex::new(vec![0, 1, 0])
        )
        .is_none());
        // (eps_{n+2}, eps_{n+1}) -> (p-1, mixed), anticommutative partner +1
        let (c, idx) = dp_product(
            &s,
            &MultiIndex::new(vec![0, 0, 1]),
            &MultiIndex::new(vec![0, 1, 0]),
        )
        .unwrap();
        assert_eq!(c, Fp(4));
        assert_eq!(idx, MultiIndex::new(vec![0, 1, 1]));
        let (c, _) = dp_product(
            &s,
            &MultiIndex::new(vec![0, 1, 0]),
            &MultiIndex::new(vec![0, 0, 1]),
        )
        .unwrap();
        assert_eq!(c, Fp(1));
    }

    #[test]
    fn multiply_examples() {
        let s = shape15();
        let one = SuperElement::one(&s);
        let x1 = SuperElement::generator(&s, 0);
        assert_eq!(one.multiply(&x1), x1);
        // x1 * x1 = 2 x^(2e1)
        let sq = x1.multiply(&x1);
        assert_eq!(sq, mono(&s, &[2, 0, 0]).scale(Fp(2)));
        // odd-odd anticommutativity
        let x2 = SuperElement::generator(&s, 1);
        let x3 = SuperElement::generator(&s, 2);
        assert_eq!(
            x2.multiply(&x3),
            x3.multiply(&x2).scale(s.field.sign(1))
        );
    }

    #[test]
    fn supercommutativity_exhaustive_small() {
        let s = shape15();
        let field = s.field;
        for r in s.all_indices() {
            for t in s.all_indices() {
                let f = SuperElement::monomial(&s, r.clone(), Fp::ONE);
                let g = SuperElement::monomial(&s, t.clone(), Fp::ONE);
                let sign = koszul_sign(&field, r.parity(&s), t.parity(&s));
                assert_eq!(f.multiply(&g), g.multiply(&f).scale(sign), "{r} {t}");
            }
        }
    }

    #[test]
    fn associativity_exhaustive_small() {
        let s = shape15();
        let idx = s.all_indices();
        for r in &idx {
            for t in &idx {
                let f = SuperElement::monomial(&s, r.clone(), Fp::ONE);
                let g = SuperElement::monomial(&s, t.clone(), Fp::ONE);
                let fg = f.multiply(&g);
                for u in &idx {
                    let h = SuperElement::monomial(&s, u.clone(), Fp::ONE);
                    assert_eq!(fg.multiply(&h), f.multiply(&g.multiply(&h)));
                }
            }
        }
    }

    #[test]
    fn partial_examples() {
        let s = shape15();
        let x1 = SuperElement::generator(&s, 0);
        let x2 = SuperElement::generator(&s, 1);
        assert!(partial(0, &x2).unwrap().is_zero());
        assert_eq!(partial(0, &mono(&s, &[2, 0, 0])).unwrap(), x1);
        assert!(partial(0, &SuperElement::one(&s)).unwrap().is_zero());
        assert!(partial(3, &x1).is_err());
    }

    #[test]
    fn partial_satisfies_signed_leibniz() {
        let s = shape15();
        let field = s.field;
        let idx = s.all_indices();
        for k in 0..s.slots() {
            let dpar = if s.is_odd_slot(k) {
                Parity::Odd
            } else {
                Parity::Even
            };
            for r in &idx {
                for t in &idx {
                    let f = SuperElement::monomial(&s, r.clone(), Fp::ONE);
                    let g = SuperElement::monomial(&s, t.clone(), Fp::ONE);
                    let lhs = partial(k, &f.multiply(&g)).unwrap();
                    let sign = koszul_sign(&field, dpar, r.parity(&s));
                    let rhs = partial(k, &f)
                        .unwrap()
                        .multiply(&g)
                        .add(&f.multiply(&partial(k, &g).unwrap()).scale(sign));
                    assert_eq!(lhs, rhs, "slot {k}, {r} * {t}");
                }
            }
        }
    }

    #[test]
    fn vf_apply_examples() {
        let s = shape15();
        let x1 = SuperElement::generator(&s, 0);
        let d1 = VectorField::from_components(&s, Parity::Even, vec![(0, SuperElement::one(&s))]);
        assert_eq!(d1.apply(&x1), SuperElement::one(&s));
        let zero = VectorField::zero(&s, Parity::Even);
        assert!(zero.apply(&x1).is_zero());
        // (x1 ∂_1)(x^(2e1)) = x1 * x1 = 2 x^(2e1)
        let x1d1 = VectorField::from_components(&s, Parity::Even, vec![(0, x1.clone())]);
        assert_eq!(x1d1.apply(&mono(&s, &[2, 0, 0])), mono(&s, &[2, 0, 0]).scale(Fp(2)));
    }

    #[test]
    fn vf_bracket_examples() {
        let s = shape15();
        let one = SuperElement::one(&s);
        let d1 = VectorField::from_components(&s, Parity::Even, vec![(0, one.clone())]);
        let d2 = VectorField::from_components(&s, Parity::Odd, vec![(1, one.clone())]);
        assert!(d1.bracket(&d2).is_zero());
        // odd bracket of ∂_last with itself
        let dlast = VectorField::from_components(&s, Parity::Odd, vec![(2, one.clone())]);
        assert!(dlast.bracket(&dlast).is_zero());
        // [x1 ∂_1, ∂_1] = -∂_1
        let x1 = SuperElement::generator(&s, 0);
        let x1d1 = VectorField::from_components(&s, Parity::Even, vec![(0, x1)]);
        let b = x1d1.bracket(&d1);
        assert_eq!(b, d1.scale(s.field.sign(1)));
    }

    /// The bracket really is the operator commutator: check on all
    /// monomials, not just generators.
    #[test]
    fn vf_bracket_is_operator_commutator() {
        let s = shape15();
        let field = s.field;
        let x1 = SuperElement::generator(&s, 0);
        let x2 = SuperElement::generator(&s, 1);
        let fields = vec![
            VectorField::from_components(&s, Parity::Even, vec![(0, x1.clone())]),
            VectorField::from_components(&s, Parity::Odd, vec![(1, SuperElement::one(&s))]),
            VectorField::from_components(&s, Parity::Odd, vec![(0, x2.clone())]),
            VectorField::from_components(
                &s,
                Parity::Even,
                vec![(2, x2.clone()), (1, SuperElement::generator(&s, 2))],
            ),
        ];
        for d1 in &fields {
            for d2 in &fields {
                let br = d1.bracket(d2);
                let sign = koszul_sign(&field, d1.parity(), d2.parity());
                for idx in s.all_indices() {
                    let f = SuperElement::monomial(&s, idx, Fp::ONE);
                    let want = d1.apply(&d2.apply(&f)).sub(&d2.apply(&d1.apply(&f)).scale(sign));
                    assert_eq!(br.apply(&f), want);
                }
            }
        }
    }

    #[test]
    fn p_power_examples() {
        let s = shape15();
        let one = SuperElement::one(&s);
        let d1 = VectorField::from_components(&s, Parity::Even, vec![(0, one.clone())]);
        assert!(d1.p_power().unwrap().is_zero());
        let x1 = SuperElement::generator(&s, 0);
        let x1d1 = VectorField::from_components(&s, Parity::Even, vec![(0, x1)]);
        assert_eq!(x1d1.p_power().unwrap(), x1d1);
        assert!(VectorField::zero(&s, Parity::Even).p_power().unwrap().is_zero());
        let dodd = VectorField::from_components(&s, Parity::Odd, vec![(1, one)]);
        assert!(dodd.p_power().is_err());
    }
}
