//! Helpers around exact rationals (`BigRational`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        None
    } else {
        Some(int_valuation(q.numer(), p) - int_valuation(q.denom(), p))
    }
}

pub fn is_p_integral(q: &Rational, p: u64) -> bool {
    valuation(q, p).is_none_or(|v| v >= 0)
}

/// Reduces a p-integral rational modulo a prime.
pub fn reduce_mod(q: &Rational, p: u64) -> Option<u64> {
    if !is_p_integral(q, p) {
        return None;
    }
    let m = BigInt::from(p);
    let n = q.numer().mod_floor(&m).to_u64()?;
    let d = q.denom().mod_floor(&m).to_u64()?;
    Some(n * mod_inverse_u64(d, p)? % p)
}

pub fn mod_inverse_u64(a: u64, p: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, p as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(p as i128) as u64)
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
/// The non-negative rational square root, if there is one.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Binomial coefficient `binom(r, k)` for a rational upper argument.
pub fn binomial(r: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * (r - rat(i as i64)) / rat(i as i64 + 1);
    }
    acc
}

/// Prime factors of a nonzero integer by trial division up to `limit`.
///
/// Returns the primes found and whatever cofactor is left over (1 when the
/// factorisation is complete).
pub fn trial_factor(n: &BigInt, limit: u64) -> (Vec<u64>, BigInt) {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return (out, n);
    }
    let mut d = 2u64;
    while d <= limit {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let (q, r) = n.div_rem(&bd);
        if r.is_zero() {
            out.push(d);
            n = q;
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        if let Some(m) = n.to_u64() {
            if m <= limit.saturating_mul(limit) || is_prime(m) {
                out.push(m);
                n = BigInt::one();
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    (out, n)
}
