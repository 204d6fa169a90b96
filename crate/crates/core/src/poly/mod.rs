//! Dense univariate polynomials and truncated Laurent series.

mod scalar;
mod series;

pub use scalar::Scalar;
pub use series::{Series, INF_ORDER};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// A polynomial with coefficients in ascending degree order.
///
/// `zero` is a template value used to build constants of the right kind
/// (for p-adic coefficients it fixes the prime and working precision).
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C: Scalar> {
    coeffs: Vec<C>,
    zero: C,
}

pub type QPoly = Poly<Rational>;
pub type PPoly = Poly<PadicNumber>;

impl<C: Scalar> Poly<C> {
    pub fn new(coeffs: Vec<C>, zero: C) -> Self {
        let mut p = Poly { coeffs, zero };
        p.trim();
        p
    }

    pub fn zero(zero: C) -> Self {
        Poly { coeffs: Vec::new(), zero }
    }

    pub fn constant(c: C) -> Self {
        let zero = c.zero_like();
        Poly::new(vec![c], zero)
    }

    /// `c * x^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero.clone(); k];
        coeffs.push(c);
        Poly::new(coeffs, zero)
    }

    pub fn x(zero: C) -> Self {
        Poly::monomial(zero.one_like(), 1)
    }

    fn trim(&mut self) {
        if C::EXACT {
            while self.coeffs.last().is_some_and(|c| c.is_zero_s()) {
                self.coeffs.pop();
            }
        }
    }

    pub fn zero_template(&self) -> &C {
        &self.zero
    }

    /// Drops trailing coefficients that are zero (to the working precision
    /// for inexact coefficients).
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero_s()) {
            self.coeffs.pop();
        }
        self
    }

    /// `self(x^k)`.
    pub fn spread(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![self.zero.clone(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly::new(coeffs, self.zero.clone())
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero past the end).
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_s())
    }

    /// Length of the stored coefficient vector minus one; `None` when empty.
    ///
    /// For inexact coefficients a leading coefficient may be `O(p^N)`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &C) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.zero.clone())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![self.zero.clone(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs, self.zero.clone())
    }

    /// Reduction modulo `x^n`.
    pub fn truncate(&self, n: usize) -> Self {
        Poly::new(self.coeffs.iter().take(n).cloned().collect(), self.zero.clone())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * c.from_int_like(i as i64))
            .collect();
        Poly::new(coeffs, self.zero.clone())
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Result<Self> {
        let mut coeffs = vec![self.zero.clone()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.try_div(&c.from_int_like(i as i64 + 1))?);
        }
        Ok(Poly::new(coeffs, self.zero.clone()))
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero(self.zero.clone());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division by a polynomial with invertible leading coefficient.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.leading().unwrap();
        if !lead.is_unit_s() {
            return Err(Error::DivisionByNonUnitLeading);
        }
        let lead_inv = lead.try_inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(self.zero.clone()), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone() * lead_inv.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].clone() - c.clone() * dc.clone();
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q, self.zero.clone()), Poly::new(r, self.zero.clone())))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut acc = Poly::constant(self.zero.one_like());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map<D: Scalar>(&self, zero: D, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect(), zero)
    }
}

impl<'a, C: Scalar> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, other: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly::new(coeffs, self.zero.clone())
    }
}

impl<'a, C: Scalar> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, other: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Poly::new(coeffs, self.zero.clone())
    }
}

impl<C: Scalar> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect(), self.zero.clone())
    }
}

impl<'a, C: Scalar> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, other: &Poly<C>) -> Poly<C> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero(self.zero.clone());
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if C::EXACT && a.is_zero_s() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out, self.zero.clone())
    }
}

impl QPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat(c)).collect(), Rational::zero())
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Poly::new(coeffs, Rational::zero())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn bezout(&self, other: &Self) -> (Self, Self, Self) {
        let zero = QPoly::zero(Rational::zero());
        let one = QPoly::constant(rat(1));
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        let lead = r0.leading().cloned().unwrap_or_else(|| rat(1)).recip();
        (r0.scale(&lead), s0.scale(&lead), t0.scale(&lead))
    }

    /// Resultant via the Sylvester determinant.
    pub fn resultant(&self, other: &Self) -> Rational {
        let (m, n) = match (self.degree(), other.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Rational::zero(),
        };
        if m == 0 && n == 0 {
            return Rational::one();
        }
        let size = m + n;
        let mut rows = vec![vec![Rational::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                rows[i][i + j] = self.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                rows[n + i][i + j] = other.coeff(n - j);
            }
        }
        determinant(rows)
    }

    /// Discriminant, normalised so that `disc(x^3 + a x + b) = -4a^3 - 27b^2`.
    pub fn discriminant(&self) -> Rational {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Rational::zero(),
        };
        let sign = if (n * (n - 1) / 2) % 2 == 0 { rat(1) } else { rat(-1) };
        sign * self.resultant(&self.derivative()) / self.leading().unwrap()
    }

    /// Parses expressions such as `"x^5 - 3/2*x + 1"` or `"2x^2-x"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("bad polynomial {s:?}: {m}"));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<Rational> = Vec::new();
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (coef, deg) = match body.find('x') {
                None => (parse_rational(body)?, 0usize),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let c = if c.is_empty() { rat(1) } else { parse_rational(c)? };
                    let rest = &body[pos + 1..];
                    let d = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| bad("bad exponent"))?
                    };
                    (c, d)
                }
            };
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Rational::zero());
            }
            coeffs[deg] += if neg { -coef } else { coef };
        }
        Ok(QPoly::from_rationals(coeffs))
    }

    pub fn to_padic(&self, prime: u64, precision: i64) -> PPoly {
        Poly::new(
            self.coeffs.iter().map(|c| PadicNumber::from_rational(prime, c, precision)).collect(),
            PadicNumber::zero(prime, precision),
        )
    }
}

/// Determinant by Gaussian elimination over the rationals.
pub(crate) fn determinant(mut rows: Vec<Vec<Rational>>) -> Rational {
    let n = rows.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            rows.swap(piv, col);
            det = -det;
        }
        let p = rows[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &p;
            for c in col..n {
                let v = &factor * &rows[col][c];
                rows[r][c] -= v;
            }
        }
    }
    det
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            let body = match (i, a.is_one()) {
                (0, _) => format_rational(&a),
                (1, true) => "x".to_string(),
                (1, false) => format!("{}*x", format_rational(&a)),
                (_, true) => format!("x^{i}"),
                (_, false) => format!("{}*x^{i}", format_rational(&a)),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn discriminants() {
        assert_eq!(QPoly::from_ints(&[1, -1, 0, 1]).discriminant(), rat(-23));
        assert_eq!(QPoly::from_ints(&[1, 1, 0, 1]).discriminant(), rat(-31));
        assert_eq!(QPoly::from_ints(&[1, -1, 0, 0, 0, 1]).discriminant(), rat(2869));
        // x^2 - 1 has discriminant 4
        assert_eq!(QPoly::from_ints(&[-1, 0, 1]).discriminant(), rat(4));
    }

    #[test]
    fn parse_and_print() {
        let f = QPoly::parse("x^3 - x + 1").unwrap();
        assert_eq!(f, QPoly::from_ints(&[1, -1, 0, 1]));
        assert_eq!(f.to_string(), "x^3 - x + 1");
        let g = QPoly::parse("-3/2*x^2+2x").unwrap();
        assert_eq!(g.coeffs(), &[rat(0), rat(2), ratio(-3, 2)]);
        assert_eq!(QPoly::parse(&g.to_string()).unwrap(), g);
        assert!(QPoly::parse("x^^2").is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = QPoly::from_ints(&[-1, 0, 0, 1]); // x^3 - 1
        let b = QPoly::from_ints(&[-1, 1]); // x - 1
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, QPoly::from_ints(&[1, 1, 1]));
        assert!(r.is_zero());
        let c = QPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(a.gcd(&c), b);
        assert!(a.resultant(&c).is_zero());
        assert!(!a.resultant(&QPoly::from_ints(&[2, 1])).is_zero());
    }

    #[test]
    fn bezout_identity() {
        let f = QPoly::from_ints(&[1, -1, 0, 0, 0, 1]);
        let df = f.derivative();
        let (g, u, v) = f.bezout(&df);
        assert_eq!(g, QPoly::from_ints(&[1]));
        assert_eq!(&(&u * &f) + &(&v * &df), g);
    }

    #[test]
    fn calculus() {
        let f = QPoly::from_ints(&[1, -1, 0, 1]);
        assert_eq!(f.integral().unwrap().derivative(), f);
        assert_eq!(f.eval(&rat(3)), rat(25));
        let g = f.compose(&QPoly::from_ints(&[1, 1]));
        assert_eq!(g.eval(&rat(2)), f.eval(&rat(3)));
    }

    #[test]
    fn padic_division_needs_unit_leading() {
        let f = QPoly::from_ints(&[1, 0, 5]).to_padic(5, 6);
        let g = QPoly::from_ints(&[3, 1]).to_padic(5, 6);
        assert_eq!(g.divrem(&f).unwrap_err(), Error::DivisionByNonUnitLeading);
        let (q, r) = f.divrem(&g).unwrap();
        assert!((&(&(&q * &g) + &r) - &f).is_zero());
    }
}
