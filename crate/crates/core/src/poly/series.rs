use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::{binomial, ratio};

use super::{Poly, Scalar};

/// Order used for series that are exact (no truncation).
pub const INF_ORDER: i64 = 1 << 40;

/// A truncated Laurent series `sum_i c_i t^(start + i) + O(t^order)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<C: Scalar> {
    start: i64,
    coeffs: Vec<C>,
    order: i64,
    zero: C,
}

impl<C: Scalar> Series<C> {
    /// Builds a series from coefficients beginning at `t^start`, known
    /// modulo `t^order`. Coefficients at or beyond `order` are dropped;
    /// missing ones below `order` are zero.
    pub fn new(start: i64, mut coeffs: Vec<C>, order: i64, zero: C) -> Self {
        let len = (order - start).max(0) as usize;
        coeffs.truncate(len);
        Series { start, coeffs, order, zero }
    }

    fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn zero(order: i64, zero: C) -> Self {
        Series::new(order, Vec::new(), order, zero)
    }

    pub fn from_poly(p: &Poly<C>, order: i64) -> Self {
        Series::new(0, p.coeffs().to_vec(), order, p.zero_template().clone())
    }

    /// The series `t` itself.
    pub fn variable(zero: C, order: i64) -> Self {
        Series::new(1, vec![zero.one_like()], order, zero)
    }

    pub fn constant(c: C, order: i64) -> Self {
        let zero = c.zero_like();
        Series::new(0, vec![c], order, zero)
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn zero_template(&self) -> &C {
        &self.zero
    }

    /// Coefficient of `t^k`; zero outside the stored window.
    pub fn coeff(&self, k: i64) -> C {
        if k < self.start || k >= self.end() {
            return self.zero.clone();
        }
        self.coeffs[(k - self.start) as usize].clone()
    }

    /// Exponent of the first coefficient that is not (numerically) zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero_s()).map(|i| self.start + i as i64)
    }

    /// Drops leading zero coefficients.
    pub fn normalized(&self) -> Self {
        match self.valuation() {
            Some(v) => Series::new(v, self.coeffs[(v - self.start) as usize..].to_vec(), self.order, self.zero.clone()),
            None => Series::zero(self.order, self.zero.clone()),
        }
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Series::new(self.start, self.coeffs.clone(), order, self.zero.clone())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Series { start: self.start + k, coeffs: self.coeffs.clone(), order: self.order + k, zero: self.zero.clone() }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series::new(self.start, self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.order, self.zero.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        let a = self.normalized();
        let v = a.valuation().ok_or(Error::DivisionByZero)?;
        if a.order >= INF_ORDER / 2 {
            if a.coeffs.iter().skip(1).any(|c| !c.is_zero_s()) {
                return Err(Error::NonInvertible("inverse of an untruncated series".into()));
            }
            return Ok(Series::new(-v, vec![a.coeffs[0].try_inv()?], INF_ORDER, self.zero.clone()));
        }
        let n = (a.order - v) as usize;
        let b0 = a.coeffs[0].try_inv()?;
        let mut b = vec![b0.clone()];
        for k in 1..n {
            let mut s = self.zero.clone();
            for j in 1..=k.min(a.coeffs.len() - 1) {
                s = s + a.coeffs[j].clone() * b[k - j].clone();
            }
            b.push(-(s * b0.clone()));
        }
        Ok(Series::new(-v, b, a.order - 2 * v, self.zero.clone()))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = (0..self.coeffs.len())
            .map(|i| {
                let k = self.start + i as i64;
                self.coeffs[i].clone() * self.zero.from_int_like(k)
            })
            .collect();
        Series::new(self.start - 1, coeffs, self.order - 1, self.zero.clone())
    }

    /// Antiderivative with zero constant term, together with the
    /// coefficient of `t^-1` (which integrates to a logarithm).
    pub fn integrate_with_log(&self) -> Result<(Self, C)> {
        let mut residue = self.zero.clone();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for i in 0..self.coeffs.len() {
            let k = self.start + i as i64;
            if k == -1 {
                residue = self.coeffs[i].clone();
                coeffs.push(self.zero.clone());
            } else {
                coeffs.push(self.coeffs[i].try_div(&self.zero.from_int_like(k + 1))?);
            }
        }
        let out = Series::new(self.start + 1, coeffs, self.order + 1, self.zero.clone());
        // the constant of integration is zero
        let out = if out.start <= 0 && out.end() > 0 {
            let mut c = out.coeffs.clone();
            c[(-out.start) as usize] = self.zero.clone();
            Series::new(out.start, c, out.order, self.zero.clone())
        } else {
            out
        };
        Ok((out, residue))
    }

    /// Antiderivative; fails when a `t^-1` term is present.
    pub fn integrate(&self) -> Result<Self> {
        let (s, r) = self.integrate_with_log()?;
        if !r.is_zero_s() {
            return Err(Error::NonInvertible("series has a t^-1 term".into()));
        }
        Ok(s)
    }

    /// `self(inner(t))` for `inner` of valuation at least one.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let inner = inner.normalized();
        let m = inner.valuation().unwrap_or(inner.order);
        if m < 1 {
            return Err(Error::NonComposable(format!("inner series has valuation {m}")));
        }
        let target = self.order * m;
        let mut acc = Series::zero(target, self.zero.clone());
        if self.coeffs.is_empty() {
            return Ok(acc);
        }
        let last = self.start + self.coeffs.len() as i64 - 1;
        let lowest = self.start.min(0);
        let mut pw = if lowest < 0 {
            inner.inverse()?.pow((-lowest) as u32)
        } else {
            Series::constant(self.zero.one_like(), target)
        };
        for k in lowest..=last {
            if k >= self.start {
                let c = self.coeff(k);
                if !(C::EXACT && c.is_zero_s()) {
                    acc = &acc + &pw.scale(&c);
                }
            }
            pw = &pw * &inner;
        }
        Ok(acc.truncate(target))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Series::constant(self.zero.one_like(), INF_ORDER);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `sqrt(1 + z)` via the binomial series, for `z` of valuation >= 1.
    pub fn sqrt_one_plus(z: &Self) -> Result<Self> {
        if z.order >= INF_ORDER / 2 {
            return Err(Error::NonInvertible("square root of an untruncated series".into()));
        }
        let n = z.order.max(1);
        let coeffs: Vec<C> = (0..n as usize)
            .map(|k| z.zero.from_rational_like(&binomial(&ratio(1, 2), k)))
            .collect();
        Series::new(0, coeffs, n, z.zero.clone()).compose(z)
    }

    /// Sum of the stored terms at `t`; the `O(t^order)` tail is ignored.
    pub fn eval(&self, t: &C) -> Result<C> {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        if self.start >= 0 {
            let mut f = self.zero.one_like();
            for _ in 0..self.start {
                f = f * t.clone();
            }
            Ok(acc * f)
        } else {
            let ti = t.try_inv()?;
            let mut f = self.zero.one_like();
            for _ in 0..(-self.start) {
                f = f * ti.clone();
            }
            Ok(acc * f)
        }
    }
}

impl<'a, C: Scalar> Add<&'a Series<C>> for &'a Series<C> {
    type Output = Series<C>;
    fn add(self, o: &Series<C>) -> Series<C> {
        let start = self.start.min(o.start);
        let order = self.order.min(o.order);
        let end = [self, o].iter().filter(|s| !s.coeffs.is_empty()).map(|s| s.end()).max().unwrap_or(start);
        let end = order.min(end);
        let coeffs = (start..end).map(|k| self.coeff(k) + o.coeff(k)).collect();
        Series::new(start, coeffs, order, self.zero.clone())
    }
}

impl<'a, C: Scalar> Sub<&'a Series<C>> for &'a Series<C> {
    type Output = Series<C>;
    fn sub(self, o: &Series<C>) -> Series<C> {
        self + &(-o)
    }
}

impl<C: Scalar> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series::new(self.start, self.coeffs.iter().map(|c| -c.clone()).collect(), self.order, self.zero.clone())
    }
}

impl<'a, C: Scalar> Mul<&'a Series<C>> for &'a Series<C> {
    type Output = Series<C>;
    fn mul(self, o: &Series<C>) -> Series<C> {
        let a = self.normalized();
        let b = o.normalized();
        let sa = a.valuation().unwrap_or(a.order);
        let sb = b.valuation().unwrap_or(b.order);
        let order = (sa + b.order).min(sb + a.order);
        let start = sa + sb;
        let n = ((order - start).max(0) as usize).min((a.coeffs.len() + b.coeffs.len()).saturating_sub(1));
        let mut out = vec![self.zero.clone(); n];
        for (i, x) in a.coeffs.iter().enumerate().take(n) {
            if C::EXACT && x.is_zero_s() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        Series::new(start, out, order, self.zero.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicNumber;
    use crate::rational::{rat, Rational};
    use num_traits::Zero;

    fn q(coeffs: &[i64], order: i64) -> Series<Rational> {
        Series::new(0, coeffs.iter().map(|&c| rat(c)).collect(), order, Rational::zero())
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let s = q(&[1, -1], 8);
        let inv = s.inverse().unwrap();
        for k in 0..8 {
            assert_eq!(inv.coeff(k), rat(1));
        }
        assert_eq!(inv.order(), 8);
        let laurent = s.shift(2).inverse().unwrap();
        assert_eq!(laurent.start(), -2);
        assert_eq!(laurent.order(), 6);
    }

    #[test]
    fn multiplication_order() {
        let a = q(&[1, 2, 3], 5);
        let b = q(&[0, 1], 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a.shift(1) * &b).order(), 4);
    }

    #[test]
    fn sqrt_matches_binomial_oracle() {
        let z = q(&[0, 1], 10);
        let s = Series::sqrt_one_plus(&z).unwrap();
        let sq = &s * &s;
        assert_eq!(sq.coeff(0), rat(1));
        assert_eq!(sq.coeff(1), rat(1));
        for k in 2..10 {
            assert_eq!(sq.coeff(k), rat(0));
            assert_eq!(s.coeff(k), binomial(&ratio(1, 2), k as usize));
        }
    }

    #[test]
    fn integration() {
        let s = Series::new(-1, vec![rat(3), rat(2), rat(3)], 2, Rational::zero());
        assert!(s.integrate().is_err());
        let (i, res) = s.integrate_with_log().unwrap();
        assert_eq!(res, rat(3));
        assert_eq!(i.coeff(1), rat(2));
        assert_eq!(i.coeff(2), ratio(3, 2));
        assert_eq!(i.derivative().coeff(0), rat(2));
    }

    #[test]
    fn compose_geometric() {
        // 1/(1-u) with u = t + t^2: coefficients are Fibonacci numbers
        let g = q(&[1, 1, 1, 1, 1, 1, 1, 1], 8);
        let u = q(&[0, 1, 1], 8);
        let c = g.compose(&u).unwrap();
        let fib = [1, 1, 2, 3, 5, 8, 13, 21];
        for (k, f) in fib.iter().enumerate() {
            assert_eq!(c.coeff(k as i64), rat(*f));
        }
        assert!(g.compose(&q(&[1, 1], 8)).is_err());
    }

    #[test]
    fn padic_series_eval() {
        let z = PadicNumber::zero(7, 10);
        let s = Series::new(0, vec![PadicNumber::one(7, 10); 30], 30, z);
        let t = PadicNumber::from_int(7, 7, 10);
        // 1/(1-7) evaluated through the truncated geometric series
        let v = s.eval(&t).unwrap();
        let exact = PadicNumber::from_int(7, -6, 10).inv().unwrap();
        assert!(v.equals(&exact));
    }
}
