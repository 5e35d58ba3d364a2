//! Arithmetic in the prime field F_p and binomial coefficients.
//!
//! Vectors over F_p are plain `Vec<u32>` with entries in `[0, p)`; the [`Prime`]
//! carries the modulus and the arithmetic. [`FpScalar`] is the checked scalar
//! type for public interfaces.
//!
//! Only prime fields are supported, so the Frobenius map is the identity and
//! p-semilinear maps are linear. Code that mirrors a λ^p rule still computes
//! λ^p explicitly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Check, Report};

/// A prime modulus, checked by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Prime(u32);

/// Primes above this bound are rejected; products of two residues must fit in `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        let p = self.0 as u64;
        ((a as u64 + p - b as u64) % p) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        let a = a % self.0;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    /// Reduce a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    /// `(-1)^k` as a residue.
    #[inline]
    pub fn sign(self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1 % self.0
        } else {
            self.0 - 1
        }
    }

    pub fn scalar(self, value: i64) -> FpScalar {
        FpScalar { value: self.reduce(value), p: self }
    }

    // Vector helpers.

    pub fn axpy(self, y: &mut [u32], a: u32, x: &[u32]) {
        debug_assert_eq!(y.len(), x.len());
        if a == 0 {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = self.add(*yi, self.mul(a, xi));
            }
        }
    }

    pub fn scale(self, a: u32, x: &[u32]) -> Vec<u32> {
        x.iter().map(|&v| self.mul(a, v)).collect()
    }

    pub fn vadd(self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| self.add(a, b)).collect()
    }

    pub fn vsub(self, x: &[u32], y: &[u32]) -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| self.sub(a, b)).collect()
    }

    pub fn vneg(self, x: &[u32]) -> Vec<u32> {
        x.iter().map(|&a| self.neg(a)).collect()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn unit_vector(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// An element of F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FpScalar {
    value: u32,
    p: Prime,
}

impl FpScalar {
    pub fn new(value: i64, p: Prime) -> FpScalar {
        p.scalar(value)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn pow(self, e: u64) -> FpScalar {
        FpScalar { value: self.p.pow(self.value, e), p: self.p }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.p)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        FpScalar { value: self.p.add(self.value, rhs.value), p: self.p }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        FpScalar { value: self.p.sub(self.value, rhs.value), p: self.p }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.p, rhs.p, "mixed moduli");
        FpScalar { value: self.p.mul(self.value, rhs.value), p: self.p }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar { value: self.p.neg(self.value), p: self.p }
    }
}

/// Multiplicative inverse in F_p.
pub fn fp_inv(a: FpScalar) -> Result<FpScalar> {
    Ok(FpScalar { value: a.p.inv(a.value)?, p: a.p })
}

/// C(a, b) over the integers, zero when b > a.
pub fn binom_exact(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::from(0u32);
    }
    let b = b.min(a - b);
    let mut acc = BigUint::from(1u32);
    for k in 0..b {
        // acc = C(a, k) here; C(a, k+1) = C(a, k) * (a - k) / (k + 1) exactly.
        acc = acc * BigUint::from(a - k) / BigUint::from(k + 1);
    }
    acc
}

/// C(a, b) mod p, zero when b > a.
pub fn binom_mod(a: u64, b: u64, p: Prime) -> FpScalar {
    let r = binom_exact(a, b) % BigUint::from(p.get());
    let digits = r.to_u32_digits();
    FpScalar { value: digits.first().copied().unwrap_or(0), p }
}

/// Largest prime accepted by [`verify_identities`].
pub const IDENTITY_BOUND: u32 = 13;

fn signed(sign_odd: bool, v: BigUint) -> BigInt {
    let v = BigInt::from(v);
    if sign_odd {
        -v
    } else {
        v
    }
}

/// Check the four binomial identity families exhaustively for `p`.
pub fn verify_identities(p: Prime) -> Result<Report> {
    verify_identities_bounded(p, IDENTITY_BOUND)
}

pub fn verify_identities_bounded(p: Prime, bound: u32) -> Result<Report> {
    if p.get() > bound {
        return Err(Error::TooLarge {
            what: "prime for identity verification".into(),
            size: p.get() as u64,
            bound: bound as u64,
        });
    }
    let pu = p.get() as u64;
    let mut report = Report::new();

    // (1) C(p-1-s, t) = (-1)^{s+t} C(p-1-t, s) mod p.
    let mut witness = None;
    'one: for s in 0..pu {
        for t in 0..pu {
            let lhs = binom_mod(pu - 1 - s, t, p).value();
            let rhs = p.mul(p.sign((s + t) as usize), binom_mod(pu - 1 - t, s, p).value());
            if lhs != rhs {
                witness = Some(format!("s={s}, t={t}: {lhs} != {rhs}"));
                break 'one;
            }
        }
    }
    report.push(Check::from_witness("reflection", witness));

    // (2) sum_{i=b}^{a-c} (-1)^i C(a, i+c) C(i, b) = (-1)^b C(a-b-1, c-1), over Z.
    let mut witness = None;
    'two: for a in 1..=2 * pu {
        for b in 0..a {
            for c in 1..=a - b {
                let mut lhs = BigInt::from(0);
                for i in b..=a - c {
                    lhs += signed(i % 2 == 1, binom_exact(a, i + c) * binom_exact(i, b));
                }
                let rhs = signed(b % 2 == 1, binom_exact(a - b - 1, c - 1));
                if lhs != rhs {
                    witness = Some(format!("a={a}, b={b}, c={c}: {lhs} != {rhs}"));
                    break 'two;
                }
            }
        }
    }
    report.push(Check::from_witness("alternating convolution", witness));

    // (3) sum_{k=0}^{n-1} C(p-n+k, k) = 0 mod p for 2 <= n <= p.
    let mut witness = None;
    for n in 2..=pu {
        let mut acc = 0;
        for k in 0..n {
            acc = p.add(acc, binom_mod(pu - n + k, k, p).value());
        }
        if acc != 0 {
            witness = Some(format!("n={n}: sum = {acc}"));
            break;
        }
    }
    report.push(Check::from_witness("hockey stick vanishing", witness));

    // (4) sum_{s+2t=k} C(n,s) C(n+t-1,t) = C(n+k-1,k), over Z, 1 <= n <= p, 0 <= k <= p.
    let mut witness = None;
    'four: for n in 1..=pu {
        for k in 0..=pu {
            let mut lhs = BigUint::from(0u32);
            for t in 0..=k / 2 {
                let s = k - 2 * t;
                lhs += binom_exact(n, s) * binom_exact(n + t - 1, t);
            }
            let rhs = binom_exact(n + k - 1, k);
            if lhs != rhs {
                witness = Some(format!("n={n}, k={k}: {lhs} != {rhs}"));
                break 'four;
            }
        }
    }
    report.push(Check::from_witness("symmetric-exterior count", witness));

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn primality() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(13).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn inverses() {
        assert_eq!(fp_inv(FpScalar::new(1, p(5))).unwrap().value(), 1);
        assert_eq!(fp_inv(FpScalar::new(2, p(5))).unwrap().value(), 3);
        assert_eq!(fp_inv(FpScalar::new(0, p(7))), Err(Error::ZeroInverse));
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_mod(5, 2, p(7)).value(), 3);
        assert_eq!(binom_mod(7, 3, p(7)).value(), 0);
        assert_eq!(binom_mod(3, 5, p(5)).value(), 0);
        assert_eq!(binom_exact(10, 3), BigUint::from(120u32));
    }

    #[test]
    fn identity_instances() {
        // (1) at p=7, s=1, t=2.
        let q = p(7);
        assert_eq!(binom_mod(5, 2, q).value(), 3);
        assert_eq!(q.mul(q.sign(3), binom_mod(4, 1, q).value()), 3);
        // (3) at p=5, n=3: 1 + 3 + 6 = 10.
        let q5 = p(5);
        let sum = (0..3).fold(0, |acc, k| q5.add(acc, binom_mod(2 + k, k, q5).value()));
        assert_eq!(sum, 0);
        // (2) at a=5, b=1, c=2: -C(5,3) + 2C(5,4) - 3C(5,5) = -3 = -C(3,1).
        let b = |a, k| BigInt::from(binom_exact(a, k));
        let lhs = -b(5, 3) * b(1, 1) + b(5, 4) * b(2, 1) - b(5, 5) * b(3, 1);
        assert_eq!(lhs, BigInt::from(-3));
        assert_eq!(-b(3, 1), lhs);
    }

    #[test]
    fn identities_hold_up_to_thirteen() {
        for q in [2, 3, 5, 7, 11, 13] {
            let report = verify_identities(p(q)).unwrap();
            assert_eq!(report.checks.len(), 4);
            assert!(report.passed(), "p={q}: {:?}", report.first_failure());
        }
    }

    #[test]
    fn identity_bound() {
        assert!(matches!(verify_identities(p(17)), Err(Error::TooLarge { .. })));
    }

    fn small_prime() -> impl Strategy<Value = Prime> {
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_map(|q| Prime::new(q).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_is_multiplicative(q in small_prime(), a in 1u32..1000, b in 1u32..1000) {
            let (a, b) = (a % q.get(), b % q.get());
            prop_assume!(a != 0 && b != 0);
            let lhs = q.inv(q.mul(a, b)).unwrap();
            let rhs = q.mul(q.inv(a).unwrap(), q.inv(b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn binomial_symmetry(q in small_prime(), a in 0u64..60, b in 0u64..60) {
            prop_assume!(b <= a);
            prop_assert_eq!(binom_mod(a, b, q), binom_mod(a, a - b, q));
        }

        #[test]
        fn fermat(q in small_prime(), a in 0u32..1000) {
            let a = a % q.get();
            prop_assert_eq!(q.pow(a, q.get() as u64), a);
        }
    }
}
