//! Capped-precision arithmetic in `Q_p`.
//!
//! A [`PadicNumber`] is stored as `p^v * u` with `u` a unit known modulo
//! `p^(N - v)`, where `N` is the *absolute* precision: the value is known
//! modulo `p^N`. Zero is tracked explicitly as "zero modulo `p^N`".
//!
//! Units are kept in an `i128`, which caps the relative precision at the
//! largest `r` with `p^r < 2^62` (26 digits for `p = 5`, 17 for `p = 11`).
//! Requests beyond the cap silently lower the absolute precision; the
//! reported precision is always honest.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ext_gcd, int_valuation, Rational};

/// Largest relative precision representable for the prime `p`.
pub fn max_relative_precision(p: u64) -> i64 {
    let mut k = 0;
    let mut m: i128 = 1;
    while m * (p as i128) < (1i128 << 62) {
        m *= p as i128;
        k += 1;
    }
    k
}

fn ppow(p: u64, e: i64) -> i128 {
    debug_assert!(e >= 0);
    (p as i128).pow(e as u32)
}

fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// An element of `Q_p` known modulo `p^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    valuation: i64,
    unit: i128,
    precision: i64,
}

impl PadicNumber {
    fn normalized(prime: u64, valuation: i64, unit: i128, precision: i64) -> Self {
        if unit == 0 || precision <= valuation {
            return Self::zero(prime, precision);
        }
        let p = prime as i128;
        let mut u = unit;
        let mut v = valuation;
        while u % p == 0 {
            u /= p;
            v += 1;
        }
        if precision <= v {
            return Self::zero(prime, precision);
        }
        let precision = precision.min(v + max_relative_precision(prime));
        let m = ppow(prime, precision - v);
        Self { prime, valuation: v, unit: u.rem_euclid(m), precision }
    }

    /// Zero modulo `p^precision`.
    pub fn zero(prime: u64, precision: i64) -> Self {
        Self { prime, valuation: precision, unit: 0, precision }
    }

    pub fn one(prime: u64, precision: i64) -> Self {
        Self::from_int(prime, 1, precision)
    }

    pub fn from_int(prime: u64, n: i64, precision: i64) -> Self {
        Self::from_bigint(prime, &BigInt::from(n), precision)
    }

    pub fn from_bigint(prime: u64, n: &BigInt, precision: i64) -> Self {
        if n.is_zero() {
            return Self::zero(prime, precision);
        }
        let v = int_valuation(n, prime);
        let r = (precision - v).min(max_relative_precision(prime));
        if r <= 0 {
            return Self::zero(prime, precision);
        }
        let m = BigInt::from(ppow(prime, r));
        let pv = BigInt::from(prime).pow(v as u32);
        let u = (n / pv).mod_floor(&m).to_i128().expect("fits");
        Self::normalized(prime, v, u, v + r)
    }

    /// Embeds a rational number at absolute precision `precision`.
    pub fn from_rational(prime: u64, q: &Rational, precision: i64) -> Self {
        if q.is_zero() {
            return Self::zero(prime, precision);
        }
        let vn = int_valuation(q.numer(), prime);
        let vd = int_valuation(q.denom(), prime);
        let v = vn - vd;
        let r = (precision - v).min(max_relative_precision(prime));
        if r <= 0 {
            return Self::zero(prime, precision);
        }
        let m = ppow(prime, r);
        let bm = BigInt::from(m);
        let bp = BigInt::from(prime);
        let n = (q.numer() / bp.pow(vn as u32)).mod_floor(&bm).to_i128().expect("fits");
        let d = (q.denom() / bp.pow(vd as u32)).mod_floor(&bm).to_i128().expect("fits");
        let dinv = inv_mod(d, m).expect("unit denominator");
        Self::normalized(prime, v, (n * dinv).rem_euclid(m), v + r)
    }

    /// Builds `p^valuation * unit` known modulo `p^precision`.
    pub fn from_parts(prime: u64, valuation: i64, unit: i128, precision: i64) -> Self {
        Self::normalized(prime, valuation, unit, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Valuation; for a tracked zero this is the precision.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Absolute precision `N`: the value is known modulo `p^N`.
    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn relative_precision(&self) -> i64 {
        self.precision - self.valuation
    }

    /// The unit part, reduced modulo `p^(N - v)`.
    pub fn unit(&self) -> i128 {
        self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.valuation == 0
    }

    /// Equality modulo the smaller of the two precisions.
    pub fn equals(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }

    /// Lowers the precision to at most `n`.
    pub fn with_precision(&self, n: i64) -> Self {
        Self::normalized(self.prime, self.valuation, self.unit, self.precision.min(n))
    }

    /// Reinterprets the value as known modulo `p^n`, padding with zero
    /// digits if needed. Used for fixed-modulus arithmetic where the loss is
    /// bounded separately.
    pub fn lift_to(&self, n: i64) -> Self {
        Self::normalized(self.prime, self.valuation, self.unit, n)
    }

    /// Fails with `PrecisionExhausted` when no significant digit is left.
    pub fn significant(self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::PrecisionExhausted(format!("value is O({}^{})", self.prime, self.precision)))
        } else {
            Ok(self)
        }
    }

    fn same_prime(&self, other: &Self) {
        assert_eq!(self.prime, other.prime, "mixing p-adic numbers of different primes");
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(*self + *other)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = self.relative_precision();
        let m = ppow(self.prime, r);
        let u = inv_mod(self.unit, m).expect("unit is invertible");
        Ok(Self::normalized(self.prime, -self.valuation, u, r - self.valuation))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(*self * other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one(self.prime, i64::MAX / 4);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow((-e) as u64))
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        *self * Self::from_int(self.prime, n, i64::MAX / 4)
    }

    /// Integer representative in `[0, p^N)` of a value with `v >= 0`.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.valuation < 0 && !self.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        Some(BigInt::from(self.unit) * BigInt::from(self.prime).pow(self.valuation as u32))
    }

    /// Residue modulo `p` of an integral value.
    pub fn residue(&self) -> Option<u64> {
        if self.valuation < 0 && !self.is_zero() {
            return None;
        }
        if self.valuation > 0 || self.is_zero() {
            return Some(0);
        }
        Some((self.unit % self.prime as i128) as u64)
    }

    /// The p-adic digits `d_v, d_{v+1}, ..., d_{N-1}` of the value.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut u = self.unit;
        for _ in 0..self.relative_precision().max(0) {
            out.push((u % self.prime as i128) as u64);
            u /= self.prime as i128;
        }
        out
    }

    /// Digit expansion such as `3*5^-1 + 2 + 4*5^2 + O(5^6)`.
    pub fn digit_string(&self) -> String {
        let p = self.prime;
        let mut terms = Vec::new();
        if !self.is_zero() {
            for (i, d) in self.digits().into_iter().enumerate() {
                if d == 0 {
                    continue;
                }
                let e = self.valuation + i as i64;
                terms.push(match e {
                    0 => format!("{d}"),
                    1 => format!("{d}*{p}"),
                    _ => format!("{d}*{p}^{e}"),
                });
            }
        }
        terms.push(format!("O({p}^{})", self.precision));
        terms.join(" + ")
    }

    /// Teichmüller lift: the `(p-1)`-th root of unity congruent to `self`.
    pub fn teichmuller(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(self.digit_string()));
        }
        let mut x = *self;
        for _ in 0..self.precision.max(1) {
            let next = x.pow(self.prime);
            if next.equals(&x) && next.precision() >= x.precision() {
                x = next;
                break;
            }
            x = next;
        }
        Ok(x.with_precision(self.precision))
    }

    /// Logarithm with respect to `branch`.
    pub fn log(&self, branch: &LogBranch) -> Result<Self> {
        let x = self.significant()?;
        let p = x.prime;
        let v = x.valuation;
        let r = x.relative_precision();
        let u = Self::normalized(p, 0, x.unit, r);
        // u^(p-1) is a principal unit; log of the Teichmüller factor is zero.
        let w = u.pow(p - 1);
        let z = w - Self::one(p, r);
        let principal = if z.is_zero() {
            Self::zero(p, r)
        } else {
            let vz = z.valuation();
            let mut sum = Self::zero(p, r);
            let mut zk = z;
            let mut k: i64 = 1;
            loop {
                let term = zk.checked_div(&Self::from_int(p, k, i64::MAX / 4))?;
                sum = if k % 2 == 1 { sum + term } else { sum - term };
                k += 1;
                // all remaining terms have valuation >= k*vz - log_p(k)
                if k * vz - ilog(p, k) > r {
                    break;
                }
                zk = zk * z;
            }
            sum.with_precision(r)
        };
        let log_u = principal * Self::from_int(p, p as i64 - 1, i64::MAX / 4).inv()?;
        if v == 0 {
            Ok(log_u)
        } else {
            Ok(log_u + branch.constant().scale_int(v))
        }
    }

    /// Exponential, defined for `v(x) >= 1`.
    pub fn exp(&self) -> Result<Self> {
        let p = self.prime;
        if self.is_zero() {
            return Ok(Self::one(p, self.precision));
        }
        if self.valuation < 1 {
            return Err(Error::OutOfConvergenceDomain(format!(
                "exp needs valuation >= 1, got {}",
                self.valuation
            )));
        }
        let n = self.precision;
        let v = self.valuation;
        let mut sum = Self::one(p, n);
        let mut term = Self::one(p, i64::MAX / 4);
        let mut k: i64 = 1;
        loop {
            term = term * *self * Self::from_int(p, k, i64::MAX / 4).inv()?;
            sum = sum + term;
            k += 1;
            // v(x^k / k!) >= k*v - (k-1)/(p-1)
            if k * v - (k - 1) / (p as i64 - 1) > n {
                break;
            }
        }
        Ok(sum.with_precision(n))
    }

    /// Square root congruent to `hint` modulo `p`, by Newton iteration.
    pub fn sqrt_near(&self, hint: &Self) -> Result<Self> {
        if !hint.is_unit() {
            return Err(Error::NotAUnit("square-root hint must be a unit".into()));
        }
        let two_inv = Self::from_int(self.prime, 2, i64::MAX / 4).inv()?;
        let mut y = hint.with_precision(1);
        if !(y * y - *self).with_precision(1).is_zero() {
            return Err(Error::NonInvertible("hint is not a square root mod p".into()));
        }
        y = Self::normalized(y.prime, 0, y.unit, self.precision);
        let mut steps = 0;
        let mut good = 1;
        while good < self.precision && steps < 64 {
            y = (y + *self * y.inv()?) * two_inv;
            good *= 2;
            steps += 1;
        }
        Ok(y.with_precision(self.precision))
    }
}

/// `floor(log_p(k))` for `k >= 1`.
pub(crate) fn ilog(p: u64, k: i64) -> i64 {
    let mut e = 0;
    let mut m = p as i64;
    while m <= k {
        m *= p as i64;
        e += 1;
    }
    e
}

impl Add for PadicNumber {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        self.same_prime(&other);
        let precision = self.precision.min(other.precision);
        if self.is_zero() {
            return other.with_precision(precision);
        }
        if other.is_zero() {
            return self.with_precision(precision);
        }
        let v = self.valuation.min(other.valuation);
        let r = precision - v;
        if r <= 0 {
            return Self::zero(self.prime, precision);
        }
        let m = ppow(self.prime, r);
        let term = |x: &Self| -> i128 {
            let shift = x.valuation - v;
            if shift >= r {
                0
            } else {
                (x.unit % m) * ppow(x.prime, shift) % m
            }
        };
        Self::normalized(self.prime, v, (term(&self) + term(&other)) % m, precision)
    }
}

impl Neg for PadicNumber {
    type Output = Self;
    fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::normalized(self.prime, self.valuation, -self.unit, self.precision)
    }
}

impl Sub for PadicNumber {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        self + (-other)
    }
}

impl Mul for PadicNumber {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        self.same_prime(&other);
        let precision = (self.valuation.saturating_add(other.precision))
            .min(other.valuation.saturating_add(self.precision));
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.prime, precision);
        }
        let v = self.valuation + other.valuation;
        let r = precision - v;
        let m = ppow(self.prime, r.min(max_relative_precision(self.prime)));
        Self::normalized(self.prime, v, (self.unit % m) * (other.unit % m) % m, precision)
    }
}

impl Div for PadicNumber {
    type Output = Self;
    /// Panics on division by a tracked zero; use [`PadicNumber::checked_div`]
    /// where that can happen.
    fn div(self, other: Self) -> Self {
        self.checked_div(&other).expect("p-adic division by zero")
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(v={}, N={}) {}", self.valuation, self.precision, self.digit_string())
    }
}

/// A branch of the p-adic logarithm, fixed by the value it assigns to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogBranch {
    constant: PadicNumber,
}

impl LogBranch {
    pub fn new(constant: PadicNumber) -> Self {
        Self { constant }
    }

    /// The Iwasawa branch, `log(p) = 0`.
    pub fn iwasawa(prime: u64, precision: i64) -> Self {
        Self { constant: PadicNumber::zero(prime, precision) }
    }

    pub fn constant(&self) -> PadicNumber {
        self.constant
    }

    pub fn is_iwasawa(&self) -> bool {
        self.constant.is_zero()
    }
}

/// Serialised form of a p-adic value: the digit string plus the exact
/// `unit * p^valuation mod p^precision` triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicJson {
    pub digits: String,
    pub unit: String,
    pub valuation: i64,
    pub precision: i64,
}

impl From<&PadicNumber> for PadicJson {
    fn from(x: &PadicNumber) -> Self {
        PadicJson {
            digits: x.digit_string(),
            unit: x.unit().to_string(),
            valuation: x.valuation(),
            precision: x.precision(),
        }
    }
}

impl PadicJson {
    pub fn to_padic(&self, prime: u64) -> Result<PadicNumber> {
        let unit: i128 = self
            .unit
            .parse()
            .map_err(|_| Error::Parse(format!("bad unit {:?}", self.unit)))?;
        Ok(PadicNumber::from_parts(prime, self.valuation, unit, self.precision))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn pn(n: i64, prec: i64) -> PadicNumber {
        PadicNumber::from_int(5, n, prec)
    }

    #[test]
    fn product_of_conjugates() {
        let a = pn(6, 6);
        let b = pn(-4, 6);
        assert!((a * b).equals(&pn(-24, 6)));
        assert_eq!((a * b).precision(), 6);
    }

    #[test]
    fn inverse_of_two() {
        let inv = pn(2, 4).inv().unwrap();
        assert_eq!(inv.to_bigint().unwrap(), BigInt::from(313));
    }

    #[test]
    fn sum_takes_min_precision() {
        let a = PadicNumber::from_parts(5, 3, 7, 8);
        let b = pn(3, 4);
        assert_eq!((a + b).precision(), 4);
    }

    #[test]
    fn product_precision_rule() {
        let a = PadicNumber::from_parts(5, 2, 1, 6); // 25 + O(5^6)
        let b = PadicNumber::from_parts(5, 1, 2, 3); // 10 + O(5^3)
        assert_eq!((a * b).precision(), (2 + 3));
    }

    #[test]
    fn rational_embedding() {
        let x = PadicNumber::from_rational(5, &ratio(3, 10), 4);
        assert_eq!(x.valuation(), -1);
        assert!((x * pn(10, 6)).equals(&pn(3, 3)));
        let zero_rel = PadicNumber::from_rational(5, &ratio(125, 1), 2);
        assert!(zero_rel.is_zero());
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(PadicNumber::zero(5, 3).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        assert!(pn(1, 6).teichmuller().unwrap().equals(&pn(1, 6)));
        let w = pn(2, 4).teichmuller().unwrap();
        assert!(w.pow(4).equals(&pn(1, 4)));
        assert_eq!(w.residue(), Some(2));
        // independent Hensel oracle on x^4 - 1 from x0 = 2
        let mut x: BigInt = BigInt::from(2);
        let m = BigInt::from(625);
        for _ in 0..6 {
            let fx: BigInt = x.pow(4) - 1;
            let dfx = BigInt::from(4) * x.pow(3);
            let d = PadicNumber::from_bigint(5, &dfx, 4).inv().unwrap().to_bigint().unwrap();
            x = (&x - fx * d).mod_floor(&m);
        }
        assert_eq!(w.to_bigint().unwrap(), x);
        assert!(matches!(pn(10, 4).teichmuller(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn log_basics() {
        let iw = LogBranch::iwasawa(5, 8);
        assert!(pn(1, 8).log(&iw).unwrap().is_zero());
        let c = pn(3, 8);
        assert!(pn(5, 9).log(&LogBranch::new(c)).unwrap().equals(&c));
    }

    #[test]
    fn log_of_seven_matches_series_oracle() {
        // independent summation at 10 digits: log(7) = log(7^4)/4 with
        // log(1+z) = sum (-1)^{k+1} z^k / k, z = 7^4 - 1 = 2400.
        let p = 5u64;
        let z = Rational::from_integer(BigInt::from(2400));
        let mut sum = Rational::zero();
        let mut zk = z.clone();
        for k in 1..40i64 {
            let term = &zk / Rational::from_integer(BigInt::from(k));
            if k % 2 == 1 {
                sum += term;
            } else {
                sum -= term;
            }
            zk *= &z;
        }
        let oracle = PadicNumber::from_rational(p, &(sum / Rational::from_integer(BigInt::from(4))), 10);
        let got = PadicNumber::from_int(p, 7, 6).log(&LogBranch::iwasawa(p, 6)).unwrap();
        assert!(got.equals(&oracle.with_precision(6)));
        assert!(got.precision() >= 6);
    }

    #[test]
    fn exp_basics() {
        assert!(pn(0, 6).exp().unwrap().equals(&pn(1, 6)));
        let mut oracle = Rational::zero();
        let mut fact = BigInt::from(1);
        for k in 0..30u32 {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            oracle += Rational::new(BigInt::from(5).pow(k), fact.clone());
        }
        let e5 = pn(5, 6).exp().unwrap();
        assert!(e5.equals(&PadicNumber::from_rational(5, &oracle, 6)));
        assert!(matches!(pn(1, 6).exp(), Err(Error::OutOfConvergenceDomain(_))));
    }

    #[test]
    fn digit_printing() {
        let x = PadicNumber::from_rational(5, &ratio(11, 5), 3);
        assert_eq!(x.digit_string(), "1*5^-1 + 2 + O(5^3)");
        assert_eq!(PadicNumber::zero(7, 4).digit_string(), "O(7^4)");
    }

    #[test]
    fn sqrt_lifts() {
        let a = PadicNumber::from_int(7, 2, 10);
        let r = a.sqrt_near(&PadicNumber::from_int(7, 3, 10)).unwrap();
        assert!((r * r).equals(&a));
        assert_eq!(r.residue(), Some(3));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn principal(p: u64, n: i64) -> impl Strategy<Value = PadicNumber> {
        (0i64..1_000_000).prop_map(move |k| PadicNumber::from_int(p, 1 + p as i64 * k, n))
    }

    proptest! {
        #[test]
        fn log_is_additive(a in 1i64..10_000, b in 1i64..10_000, p in prop::sample::select(vec![5u64, 7, 11])) {
            prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
            let n = 8;
            let br = LogBranch::iwasawa(p, n);
            let x = PadicNumber::from_int(p, a, n);
            let y = PadicNumber::from_int(p, b, n);
            let lhs = (x * y).log(&br).unwrap();
            let rhs = x.log(&br).unwrap() + y.log(&br).unwrap();
            prop_assert!(lhs.equals(&rhs));
        }

        #[test]
        fn exp_inverts_log(x in principal(7, 9)) {
            let l = x.log(&LogBranch::iwasawa(7, 9)).unwrap();
            prop_assert!(l.exp().unwrap().equals(&x));
        }

        #[test]
        fn branch_change(a in 1i64..100_000, c in 0i64..1000) {
            prop_assume!(a != 0);
            let p = 5;
            let x = PadicNumber::from_int(p, a, 10);
            let v = x.valuation();
            let cst = PadicNumber::from_int(p, c, 10);
            let l0 = x.log(&LogBranch::iwasawa(p, 10)).unwrap();
            let lc = x.log(&LogBranch::new(cst)).unwrap();
            prop_assert!((lc - l0).equals(&cst.scale_int(v)));
        }

        #[test]
        fn teichmuller_roots(a in 1i64..1000, p in prop::sample::select(vec![5u64, 7, 11])) {
            prop_assume!(a % p as i64 != 0);
            let w = PadicNumber::from_int(p, a, 8).teichmuller().unwrap();
            prop_assert!(w.pow(p - 1).equals(&PadicNumber::one(p, 8)));
            prop_assert_eq!(w.residue(), Some(a as u64 % p));
        }

        #[test]
        fn inverse_roundtrip(a in -100_000i64..100_000, v in -3i64..3) {
            prop_assume!(a != 0);
            let x = PadicNumber::from_int(5, a, 12) * PadicNumber::from_int(5, 5, 20).powi(v).unwrap();
            let y = x.inv().unwrap();
            prop_assert!((x * y).equals(&PadicNumber::one(5, 20)));
        }
    }
}
