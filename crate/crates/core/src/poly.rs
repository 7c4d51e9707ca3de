//! Univariate polynomial arithmetic and factorization over `F_p`,
//! supporting the minimal-polynomial route of the MeatAxe.
//!
//! Polynomials are little-endian coefficient vectors with no trailing
//! zeros. Factorization is squarefree decomposition, distinct-degree
//! splitting, then seeded Cantor-Zassenhaus equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Fp, PrimeField};

/// Little-endian coefficients, normalized (no trailing zeros).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<Fp>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![Fp::ONE])
    }

    pub fn x() -> Poly {
        Poly(vec![Fp::ZERO, Fp::ONE])
    }

    pub fn constant(c: Fp) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn norm(mut v: Vec<Fp>) -> Poly {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        Poly(v)
    }

    pub fn add(&self, field: &PrimeField, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![Fp::ZERO; n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] = *c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] = field.add(v[i], *c);
        }
        Poly::norm(v)
    }

    pub fn sub(&self, field: &PrimeField, other: &Poly) -> Poly {
        self.add(field, &other.scale(field, field.sign(1)))
    }

    pub fn scale(&self, field: &PrimeField, c: Fp) -> Poly {
        Poly::norm(self.0.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, field: &PrimeField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a.0 as u64 * b.0 as u64;
            }
        }
        Poly::norm(v.into_iter().map(|x| field.reduce(x)).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, field: &PrimeField, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        if self.degree() < div.degree() || self.is_zero() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.0.clone();
        let dlead = field.inv(*div.0.last().unwrap()).expect("nonzero lead");
        let dd = div.degree();
        let mut quo = vec![Fp::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = field.mul(rem[k], dlead);
            if c.is_zero() {
                continue;
            }
            quo[k - dd] = c;
            for (i, d) in div.0.iter().enumerate() {
                rem[k - dd + i] = field.sub(rem[k - dd + i], field.mul(c, *d));
            }
        }
        (Poly::norm(quo), Poly::norm(rem))
    }

    pub fn rem(&self, field: &PrimeField, div: &Poly) -> Poly {
        self.divrem(field, div).1
    }

    pub fn monic(&self, field: &PrimeField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(field, field.inv(*self.0.last().unwrap()).unwrap())
    }

    pub fn gcd(&self, field: &PrimeField, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    pub fn lcm(&self, field: &PrimeField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(field, other);
        self.mul(field, &other.divrem(field, &g).0).monic(field)
    }

    /// Formal derivative.
    pub fn derivative(&self, field: &PrimeField) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly::norm(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| field.mul(field.reduce(i as u64 + 1), c))
                .collect(),
        )
    }

    /// `self^e mod m`.
    pub fn powmod(&self, field: &PrimeField, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(field, m);
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base).rem(field, m);
            }
            base = base.mul(field, &base).rem(field, m);
            e >>= 1;
        }
        acc
    }

    /// `p`-th root of a polynomial in `x^p` (for squarefree decomposition
    /// in characteristic p): the coefficient at `x^{pi}` moves to `x^i`.
    fn pth_root(&self, field: &PrimeField) -> Poly {
        let p = field.p() as usize;
        let mut v = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            if i % p == 0 {
                v.push(c);
            } else {
                assert!(c.is_zero(), "not a polynomial in x^p");
            }
        }
        Poly::norm(v)
    }
}

/// Irreducible factors with multiplicities, deterministic given the seed.
pub fn factor(field: &PrimeField, f: &Poly, seed: u64) -> Vec<(Poly, usize)> {
    assert!(!f.is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Poly, usize)> = Vec::new();
    squarefree_split(field, &f.monic(field), 1, &mut out, &mut rng);
    out.sort_by(|a, b| (a.0.degree(), &a.0 .0).cmp(&(b.0.degree(), &b.0 .0)));
    out
}

fn squarefree_split(
    field: &PrimeField,
    f: &Poly,
    mult: usize,
    out: &mut Vec<(Poly, usize)>,
    rng: &mut ChaCha8Rng,
) {
    if f.degree() == 0 {
        return;
    }
    let d = f.derivative(field);
    if d.is_zero() {
        // f = u(x^p) = u(x)^p over F_p: recurse on the p-th root.
        let root = f.pth_root(field);
        squarefree_split(field, &root, mult * field.p() as usize, out, rng);
        return;
    }
    // The squarefree part carries every factor whose multiplicity is not
    // divisible by p; extract each with its full multiplicity in f.
    let w = f.gcd(field, &d);
    let squarefree = f.divrem(field, &w).0;
    let mut irreducibles = Vec::new();
    distinct_degree(field, &squarefree.monic(field), &mut irreducibles, rng);
    let mut rest = f.clone();
    for irr in irreducibles {
        let mut m = 0usize;
        loop {
            let (q, r) = rest.divrem(field, &irr);
            if !r.is_zero() {
                break;
            }
            m += 1;
            rest = q;
        }
        merge_factor(field, out, irr, m * mult);
    }
    // What remains has all multiplicities divisible by p, hence zero
    // derivative; the recursion lands in the p-th-root branch.
    if rest.degree() > 0 {
        squarefree_split(field, &rest.monic(field), mult, out, rng);
    }
}

fn merge_factor(field: &PrimeField, out: &mut Vec<(Poly, usize)>, irr: Poly, mult: usize) {
    let irr = irr.monic(field);
    for (f, m) in out.iter_mut() {
        if *f == irr {
            *m += mult;
            return;
        }
    }
    out.push((irr, mult));
}

fn distinct_degree(
    field: &PrimeField,
    f: &Poly,
    out: &mut Vec<Poly>,
    rng: &mut ChaCha8Rng,
) {
    let mut rest = f.clone();
    let mut d = 1usize;
    let mut xq = Poly::x(); // x^(p^d) mod rest, maintained incrementally
    while rest.degree() >= 1 {
        if rest.degree() < 2 * d {
            out.push(rest.monic(field));
            break;
        }
        xq = xq.powmod(field, field.p() as u64, &rest);
        let diff = xq.sub(field, &Poly::x()).rem(field, &rest);
        let g = rest.gcd(field, &diff);
        if g.degree() > 0 {
            equal_degree(field, &g, d, out, rng);
            rest = rest.divrem(field, &g).0;
            xq = xq.rem(field, &rest);
        }
        d += 1;
    }
}

fn equal_degree(
    field: &PrimeField,
    f: &Poly,
    d: usize,
    out: &mut Vec<Poly>,
    rng: &mut ChaCha8Rng,
) {
    if f.degree() == d {
        out.push(f.monic(field));
        return;
    }
    // Cantor-Zassenhaus: random r, gcd(r^((p^d - 1)/2) - 1, f)
    let e = ((field.p() as u64).pow(d as u32) - 1) / 2;
    loop {
        let deg = f.degree();
        let r = Poly::norm(
            (0..deg)
                .map(|_| Fp(rng.gen_range(0..field.p())))
                .collect(),
        );
        if r.degree() == 0 || r.is_zero() {
            continue;
        }
        let pw = r.powmod(field, e, f);
        let g = f.gcd(field, &pw.sub(field, &Poly::one()));
        if g.degree() > 0 && g.degree() < f.degree() {
            equal_degree(field, &g, d, out, rng);
            equal_degree(field, &f.divrem(field, &g).0, d, out, rng);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn poly(cs: &[u32]) -> Poly {
        Poly(cs.iter().map(|&c| Fp(c)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let field = f5();
        let a = poly(&[1, 2, 3, 4, 1]);
        let b = poly(&[2, 0, 1]);
        let (q, r) = a.divrem(&field, &b);
        let back = q.mul(&field, &b).add(&field, &r);
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        let field = f5();
        let a = poly(&[1, 1]); // x + 1
        let b = poly(&[2, 1]); // x + 2
        let c = poly(&[3, 1]); // x + 3
        let ab = a.mul(&field, &b);
        let ac = a.mul(&field, &c);
        assert_eq!(ab.gcd(&field, &ac), a.monic(&field));
    }

    #[test]
    fn factor_product_of_linears() {
        let field = f5();
        // x(x+1)^2(x+4)
        let f = poly(&[0, 1])
            .mul(&field, &poly(&[1, 1]))
            .mul(&field, &poly(&[1, 1]))
            .mul(&field, &poly(&[4, 1]));
        let factors = factor(&field, &f, 1);
        let mut total = Poly::one();
        for (irr, m) in &factors {
            assert!(irr.degree() >= 1);
            for _ in 0..*m {
                total = total.mul(&field, irr);
            }
        }
        assert_eq!(total, f.monic(&field));
        assert_eq!(factors.iter().map(|(_, m)| m).sum::<usize>(), 4);
    }

    #[test]
    fn factor_irreducible_quadratic() {
        let field = f5();
        // x^2 + 2 has no roots mod 5 (squares are 0,1,4)
        let f = poly(&[2, 0, 1]);
        let factors = factor(&field, &f, 3);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.degree(), 2);
        assert_eq!(factors[0].1, 1);
    }

    #[test]
    fn factor_artin_schreier() {
        let field = f5();
        // x^5 - x - 1 is irreducible over F_5
        let mut cs = vec![Fp(4), Fp(4), Fp(0), Fp(0), Fp(0), Fp(1)];
        cs[0] = Fp(4); // -1
        cs[1] = Fp(4); // -x
        let f = Poly(cs);
        let factors = factor(&field, &f, 9);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.degree(), 5);
    }

    #[test]
    fn factor_with_p_power_multiplicity() {
        let field = f5();
        // (x+1)^5 = x^5 + 1 in characteristic 5
        let f = poly(&[1, 0, 0, 0, 0, 1]);
        let factors = factor(&field, &f, 2);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, poly(&[1, 1]));
        assert_eq!(factors[0].1, 5);
    }

    #[test]
    fn random_products_refactor() {
        use rand::{Rng, SeedableRng};
        let field = f5();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..30 {
            // random monic factors multiplied together
            let k = rng.gen_range(1..4usize);
            let mut f = Poly::one();
            for _ in 0..k {
                let d = rng.gen_range(1..4usize);
                let mut cs: Vec<Fp> = (0..d).map(|_| Fp(rng.gen_range(0..5))).collect();
                cs.push(Fp::ONE);
                f = f.mul(&field, &Poly(cs));
            }
            let factors = factor(&field, &f, trial);
            let mut total = Poly::one();
            for (irr, m) in &factors {
                for _ in 0..*m {
                    total = total.mul(&field, irr);
                }
            }
            assert_eq!(total, f.monic(&field), "trial {trial}");
        }
    }
}
