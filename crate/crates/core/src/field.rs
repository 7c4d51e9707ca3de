//! Arithmetic in the prime field `F_p` (`p > 3`) and the binomial
//! coefficients mod `p` that drive the divided-power product.
//!
//! Scalars are canonical residues in `[0, p)`, so equality of elements is
//! bit-exact everywhere downstream. Binomials are computed by Lucas'
//! theorem (base-`p` digit products), which stays correct for the
//! `r_i + s_i` arguments up to `2(p-1)n` that divided-power products
//! produce.

use crate::{Error, Result};

/// A scalar in `F_p`, stored as the canonical residue in `[0, p)`.
///
/// `Fp` carries no reference to its field; all arithmetic goes through
/// [`PrimeField`], which normalizes immediately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp(pub u32);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for Fp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field `F_p`.
///
/// The toolkit works at desk scale: `p` must be a prime with
/// `3 < p <= 251` so that matrix entries pack into bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= 3 || p > 251 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, v: u64) -> Fp {
        Fp((v % self.p as u64) as u32)
    }

    /// Canonical residue of a signed integer.
    pub fn reduce_i64(&self, v: i64) -> Fp {
        let p = self.p as i64;
        Fp(v.rem_euclid(p) as u32)
    }

    pub fn add(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 + b.0;
        Fp(if s >= self.p { s - self.p } else { s })
    }

    pub fn sub(&self, a: Fp, b: Fp) -> Fp {
        Fp(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    pub fn neg(&self, a: Fp) -> Fp {
        Fp(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    pub fn mul(&self, a: Fp, b: Fp) -> Fp {
        Fp(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn pow(&self, a: Fp, mut e: u64) -> Fp {
        let mut base = a;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; signals division by zero on `a = 0`.
    pub fn inv(&self, a: Fp) -> Result<Fp> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // p is prime, so a^(p-2) inverts a.
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// `(-1)^k` as a field element.
    pub fn sign(&self, k: u64) -> Fp {
        if k % 2 == 0 {
            Fp::ONE
        } else {
            Fp(self.p - 1)
        }
    }

    /// `binom(a, b) mod p` by Lucas' theorem; `0` when `b > a`.
    pub fn lucas_binom(&self, a: u64, b: u64) -> Fp {
        if b > a {
            return Fp::ZERO;
        }
        let p = self.p as u64;
        let mut a = a;
        let mut b = b;
        let mut acc = Fp::ONE;
        while a > 0 || b > 0 {
            let (ad, bd) = (a % p, b % p);
            if bd > ad {
                return Fp::ZERO;
            }
            acc = self.mul(acc, self.small_binom(ad as u32, bd as u32));
            a /= p;
            b /= p;
        }
        acc
    }

    /// `binom(a, b) mod p` for digits `0 <= b <= a < p`, by direct product.
    fn small_binom(&self, a: u32, b: u32) -> Fp {
        let mut num = Fp::ONE;
        let mut den = Fp::ONE;
        for i in 0..b {
            num = self.mul(num, Fp(a - i));
            den = self.mul(den, Fp(i + 1));
        }
        self.mul(num, self.inv(den).expect("nonzero factorial digit"))
    }

    /// Product of `binom(r_i + s_i, r_i)` over the first `n` (even) slots.
    ///
    /// This is the divided-power binomial for two exponent tuples of the
    /// same shape; the empty product is 1.
    pub fn tuple_binom(&self, r: &[u8], s: &[u8], n: usize) -> Fp {
        let mut acc = Fp::ONE;
        for i in 0..n {
            acc = self.mul(acc, self.lucas_binom(r[i] as u64 + s[i] as u64, r[i] as u64));
            if acc.is_zero() {
                return Fp::ZERO;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_primes() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(3).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(257).is_err());
        assert!(PrimeField::new(5).is_ok());
        assert!(PrimeField::new(251).is_ok());
    }

    #[test]
    fn inv_examples() {
        // p=5, a=1 -> 1 (identity)
        assert_eq!(f(5).inv(Fp(1)).unwrap(), Fp(1));
        // p=5, a=2 -> 3: 2*3 = 6 = 1 mod 5
        assert_eq!(f(5).inv(Fp(2)).unwrap(), Fp(3));
        // p=7, a=3 -> 5: 3*5 = 15 = 1 mod 7
        assert_eq!(f(7).inv(Fp(3)).unwrap(), Fp(5));
        assert!(f(5).inv(Fp(0)).is_err());
    }

    #[test]
    fn inv_is_involutive() {
        for p in [5u64, 7, 11] {
            let field = f(p);
            for a in 1..p as u32 {
                let inv = field.inv(Fp(a)).unwrap();
                assert_eq!(field.inv(inv).unwrap(), Fp(a));
                assert_eq!(field.mul(Fp(a), inv), Fp::ONE);
            }
        }
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(f(5).lucas_binom(4, 2), Fp(1)); // 6 mod 5
        assert_eq!(f(5).lucas_binom(5, 1), Fp(0)); // binom(p,1) = 0 mod p
        assert_eq!(f(5).lucas_binom(6, 3), Fp(0)); // 20 mod 5
        assert_eq!(f(5).lucas_binom(2, 3), Fp(0)); // b > a
    }

    /// Factorial-based oracle for binom(a, b) mod p, exact for a <= 2p via
    /// cancellation of p-factors in numerator and denominator.
    fn binom_oracle(p: u64, a: u64, b: u64) -> u32 {
        if b > a {
            return 0;
        }
        // Count p-adic valuation and p-free part of k! for k <= 2p.
        let part = |k: u64| -> (u64, u64) {
            let mut val = 0u64;
            let mut unit = 1u64;
            for i in 1..=k {
                let mut i = i;
                while i % p == 0 {
                    val += 1;
                    i /= p;
                }
                unit = unit * (i % p) % p;
            }
            (val, unit)
        };
        let (va, ua) = part(a);
        let (vb, ub) = part(b);
        let (vc, uc) = part(a - b);
        if va > vb + vc {
            return 0;
        }
        assert_eq!(va, vb + vc, "valuation cannot be negative for binomials");
        let field = PrimeField::new(p).unwrap();
        let den = field.mul(Fp(ub as u32), Fp(uc as u32));
        field.mul(Fp(ua as u32), field.inv(den).unwrap()).0
    }

    #[test]
    fn lucas_matches_factorial_oracle_up_to_2p() {
        for p in [5u64, 7] {
            let field = f(p);
            for a in 0..=2 * p {
                for b in 0..=a {
                    assert_eq!(
                        field.lucas_binom(a, b).0,
                        binom_oracle(p, a, b),
                        "binom({a},{b}) mod {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn tuple_binom_examples() {
        let field = f(5);
        // r = s = 0 -> empty product
        assert_eq!(field.tuple_binom(&[0], &[0], 1), Fp(1));
        // p=5, n=1, r=2e1, s=e1 -> binom(3,2) = 3
        assert_eq!(field.tuple_binom(&[2], &[1], 1), Fp(3));
        // p=5, n=1, r=2e1, s=3e1 -> binom(5,2) = 0
        assert_eq!(field.tuple_binom(&[2], &[3], 1), Fp(0));
    }

    #[test]
    fn tuple_binom_symmetric() {
        let field = f(5);
        for r0 in 0..5u8 {
            for s0 in 0..5u8 {
                for r1 in 0..5u8 {
                    for s1 in 0..5u8 {
                        assert_eq!(
                            field.tuple_binom(&[r0, r1], &[s0, s1], 2),
                            field.tuple_binom(&[s0, s1], &[r0, r1], 2)
                        );
                    }
                }
            }
        }
    }
}
