//! Brute-force point counts over `F_p` and `F_{p^2}`, used as an
//! independent oracle for the characteristic polynomial of Frobenius.

use num_traits::ToPrimitive;

use crate::curve::HyperellipticCurve;
use crate::error::{Error, Result};
use crate::rational::reduce_mod;

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn coefficients_mod(curve: &HyperellipticCurve, p: u64) -> Result<Vec<u64>> {
    curve
        .f()
        .coeffs()
        .iter()
        .map(|c| reduce_mod(c, p).ok_or_else(|| Error::BadReduction(format!("f is not {p}-integral"))))
        .collect()
}

/// `#C(F_p)` on the smooth model (one point at infinity).
pub fn count_points_fp(curve: &HyperellipticCurve, p: u64) -> Result<u64> {
    curve.check_good_reduction(p)?;
    let f = coefficients_mod(curve, p)?;
    let mut n = 1;
    for x in 0..p {
        let v = f.iter().rev().fold(0u64, |acc, c| (acc * x + c) % p);
        n += match v {
            0 => 1,
            _ if powmod(v, (p - 1) / 2, p) == 1 => 2,
            _ => 0,
        };
    }
    Ok(n)
}

/// Elements `a + b s` of `F_{p^2} = F_p[s]/(s^2 - nr)`.
#[derive(Clone, Copy)]
struct Fp2 {
    a: u64,
    b: u64,
}

struct Field2 {
    p: u64,
    nr: u64,
}

impl Field2 {
    fn new(p: u64) -> Self {
        let nr = (2..p).find(|&c| powmod(c, (p - 1) / 2, p) == p - 1).expect("p odd");
        Field2 { p, nr }
    }
    fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 { a: (x.a + y.a) % self.p, b: (x.b + y.b) % self.p }
    }
    fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p;
        Fp2 { a: (x.a * y.a + x.b * y.b % p * self.nr) % p, b: (x.a * y.b + x.b * y.a) % p }
    }
    fn pow(&self, mut x: Fp2, mut e: u64) -> Fp2 {
        let mut r = Fp2 { a: 1, b: 0 };
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }
}

/// `#C(F_{p^2})`.
pub fn count_points_fp2(curve: &HyperellipticCurve, p: u64) -> Result<u64> {
    curve.check_good_reduction(p)?;
    let f = coefficients_mod(curve, p)?;
    let k = Field2::new(p);
    let q = p * p;
    let mut n = 1;
    for a in 0..p {
        for b in 0..p {
            let x = Fp2 { a, b };
            let v = f.iter().rev().fold(Fp2 { a: 0, b: 0 }, |acc, c| k.add(k.mul(acc, x), Fp2 { a: *c, b: 0 }));
            n += if v.a == 0 && v.b == 0 {
                1
            } else {
                let e = k.pow(v, (q - 1) / 2);
                if e.a == 1 && e.b == 0 {
                    2
                } else {
                    0
                }
            };
        }
    }
    Ok(n)
}

/// The Weil polynomial `det(T - Frob)` from point counts, ascending, for
/// genus one or two.
pub fn weil_polynomial_from_counts(curve: &HyperellipticCurve, p: u64) -> Result<Vec<i64>> {
    let pi = p.to_i64().unwrap();
    let n1 = count_points_fp(curve, p)? as i64;
    let e1 = pi + 1 - n1;
    match curve.genus() {
        1 => Ok(vec![pi, -e1, 1]),
        2 => {
            let n2 = count_points_fp2(curve, p)? as i64;
            let s2 = pi * pi + 1 - n2;
            let e2 = (e1 * e1 - s2) / 2;
            Ok(vec![pi * pi, -pi * e1, e2, -e1, 1])
        }
        g => Err(Error::DegenerateInput(format!("point-count oracle supports genus <= 2, got {g}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_counts() {
        let c = HyperellipticCurve::from_ints(&[1, -1, 0, 1]).unwrap();
        assert_eq!(count_points_fp(&c, 5).unwrap(), 8);
        assert_eq!(weil_polynomial_from_counts(&c, 5).unwrap(), vec![5, 2, 1]);
    }

    #[test]
    fn fp2_count_consistent_with_zeta() {
        // For an elliptic curve, #E(F_{p^2}) = p^2 + 1 - (a^2 - 2p).
        let c = HyperellipticCurve::from_ints(&[1, 1, 0, 1]).unwrap();
        for p in [5u64, 7, 11, 13] {
            let a = p as i64 + 1 - count_points_fp(&c, p).unwrap() as i64;
            let n2 = count_points_fp2(&c, p).unwrap() as i64;
            assert_eq!(n2, (p * p) as i64 + 1 - (a * a - 2 * p as i64));
        }
    }

    #[test]
    fn supersingular_trace_vanishes() {
        let c = HyperellipticCurve::from_ints(&[0, 1, 0, 1]).unwrap();
        assert_eq!(weil_polynomial_from_counts(&c, 7).unwrap(), vec![7, 0, 1]);
    }
}
