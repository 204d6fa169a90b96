//! Frobenius pullbacks on `y^2 = f(x)` for the lift `x -> x^p`, reduced in
//! Monsky-Washnitzer cohomology.
//!
//! A form `sum_j A_j(x) f^-j dx/2y` is reduced from the top `j` down using
//! `d(S y^(1-2j)) = (2 S' f - (2j-1) S f') f^-j dx/2y`, and the polynomial
//! part is reduced at infinity with `d(x^k y) = (2k x^(k-1) f + x^k f') dx/2y`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{ilog, PadicNumber};
use crate::poly::{PPoly, Poly, QPoly};
use crate::rational::{binomial, is_p_integral, ratio, valuation, Rational};

const EXACT: i64 = i64::MAX / 4;

/// An odd function `y R(x) + sum_j S_j(x) y^(1 - 2j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OddFunction {
    pub pos: PPoly,
    pub neg: Vec<(usize, PPoly)>,
}

impl OddFunction {
    pub fn eval(&self, x: &PadicNumber, y: &PadicNumber) -> Result<PadicNumber> {
        let mut acc = *y * self.pos.eval(x);
        if self.neg.is_empty() {
            return Ok(acc);
        }
        let y2inv = (*y * *y).inv()?;
        let mut terms = self.neg.clone();
        terms.sort_by_key(|(j, _)| *j);
        let mut power = *y; // y^(1 - 2j) for the current j
        let mut cur = 0usize;
        for (j, s) in &terms {
            while cur < *j {
                power = power * y2inv;
                cur += 1;
            }
            acc = acc + s.eval(x) * power;
        }
        Ok(acc)
    }

    /// Smallest absolute precision among the coefficients.
    pub fn precision(&self) -> i64 {
        let mut n = EXACT;
        for c in self.pos.coeffs().iter().chain(self.neg.iter().flat_map(|(_, s)| s.coeffs())) {
            n = n.min(c.precision());
        }
        n
    }
}

/// Cohomological reduction data for one model `y^2 = f(x)` over `Z_p`.
#[derive(Clone, Debug)]
pub struct Reducer {
    pub p: u64,
    pub prec: i64,
    pub genus: usize,
    pub f: PPoly,
    pub df: PPoly,
    v: PPoly,
}

impl Reducer {
    pub fn new(f: &QPoly, p: u64, prec: i64) -> Result<Self> {
        let df = f.derivative();
        let (g, _u, v) = f.bezout(&df);
        if g.degree() != Some(0) {
            return Err(Error::InvalidCurve("f is not squarefree".into()));
        }
        if !v.coeffs().iter().chain(f.coeffs()).all(|c| is_p_integral(c, p)) {
            return Err(Error::BadReduction(format!("f is not separable modulo {p}")));
        }
        let d = f.degree().unwrap();
        Ok(Reducer {
            p,
            prec,
            genus: (d - 1) / 2,
            f: f.to_padic(p, prec),
            df: df.to_padic(p, prec),
            v: v.to_padic(p, prec),
        })
    }

    fn zero(&self) -> PadicNumber {
        PadicNumber::zero(self.p, self.prec)
    }

    fn int(&self, n: i64) -> PadicNumber {
        PadicNumber::from_int(self.p, n, EXACT)
    }

    /// Reduces `sum_j buckets[j] f^-j dx/2y` to `sum_i c_i x^i dx/2y + dh`.
    ///
    /// Arithmetic is done modulo `p^prec` and the divisions by `2j - 1` are
    /// not tracked individually; the result carries the precision left after
    /// the a priori loss bound `floor(log_p(2j_max - 1)) + floor(log_p(2k_max + 2g + 1))`.
    pub fn reduce(&self, mut buckets: Vec<PPoly>) -> Result<(Vec<PadicNumber>, OddFunction)> {
        let input = min_precision(buckets.iter()).min(self.prec);
        let jmax = buckets.iter().rposition(|b| !b.is_zero()).unwrap_or(0);
        let mut neg = Vec::new();
        for j in (1..buckets.len()).rev() {
            let a = std::mem::replace(&mut buckets[j], Poly::zero(self.zero())).trimmed();
            if a.is_zero() {
                continue;
            }
            let s = (&a.rem(&self.f)? * &self.v).rem(&self.f)?;
            let (r, _) = (&a - &(&s * &self.df)).divrem(&self.f)?;
            let inv = self.int(2 * j as i64 - 1).inv()?;
            let next = self.lift(&r + &s.derivative().scale(&(self.int(2) * inv)));
            buckets[j - 1] = &buckets[j - 1] + &next;
            neg.push((j, self.lift(s.scale(&(-inv)))));
        }
        let base = self.lift(buckets.into_iter().next().unwrap_or_else(|| Poly::zero(self.zero())));
        let (coords, pos) = self.reduce_fixed(base)?;
        let loss = if jmax > 0 { ilog(self.p, 2 * jmax as i64 - 1) } else { 0 } + self.infinity_loss(pos.coeffs().len());
        let n = input - loss;
        let zero = self.zero();
        let cap = |q: PPoly| q.map(zero, |c| c.with_precision(n));
        let neg = neg.into_iter().map(|(j, s)| (j, cap(s))).collect();
        Ok((coords.iter().map(|c| c.with_precision(n)).collect(), OddFunction { pos: cap(pos), neg }))
    }

    fn lift(&self, a: PPoly) -> PPoly {
        a.map(self.zero(), |c| c.lift_to(self.prec))
    }

    fn infinity_loss(&self, terms: usize) -> i64 {
        if terms == 0 {
            0
        } else {
            ilog(self.p, (2 * (terms - 1) + 2 * self.genus + 1) as i64)
        }
    }

    /// Reduces `A(x) dx/2y` to the basis; returns the coordinates and `R`
    /// with `A dx/2y = sum c_i x^i dx/2y + d(y R(x))`.
    pub fn reduce_at_infinity(&self, a: PPoly) -> Result<(Vec<PadicNumber>, PPoly)> {
        let input = min_precision(std::iter::once(&a)).min(self.prec);
        let (c, pos) = self.reduce_fixed(self.lift(a))?;
        let n = input - self.infinity_loss(pos.coeffs().len());
        Ok((c.iter().map(|x| x.with_precision(n)).collect(), pos.map(self.zero(), |x| x.with_precision(n))))
    }

    fn reduce_fixed(&self, a: PPoly) -> Result<(Vec<PadicNumber>, PPoly)> {
        let g2 = 2 * self.genus;
        let mut c = a.trimmed().into_coeffs();
        let mut pos = vec![self.zero(); c.len().saturating_sub(g2)];
        for deg in (g2..c.len()).rev() {
            if c[deg].is_zero() {
                continue;
            }
            let k = deg - g2;
            let coef = (c[deg] * self.int((2 * k + g2 + 1) as i64).inv()?).lift_to(self.prec);
            if k >= 1 {
                let two_k = coef * self.int(2 * k as i64);
                for (m, fc) in self.f.coeffs().iter().enumerate() {
                    c[k - 1 + m] = c[k - 1 + m] - two_k * *fc;
                }
            }
            for (m, dc) in self.df.coeffs().iter().enumerate() {
                c[k + m] = c[k + m] - coef * *dc;
            }
            pos[k] = pos[k] + coef;
        }
        c.resize(g2.max(c.len()), self.zero());
        c.truncate(g2);
        Ok((c, Poly::new(pos, self.zero())))
    }
}

fn min_precision<'a>(polys: impl Iterator<Item = &'a PPoly>) -> i64 {
    polys.flat_map(|q| q.coeffs()).map(|c| c.precision()).min().unwrap_or(EXACT)
}

/// Number of terms kept in the binomial expansion of `(1 + E/f^p)^(-1/2)`.
pub fn series_terms(p: u64, prec: i64) -> usize {
    let mut k: i64 = 1;
    // term k has valuation >= k + 1; reductions cost about log_p(2pk) digits
    while k + 1 - 2 * ilog(p, 2 * p as i64 * (k + 1)) < prec + 1 {
        k += 1;
    }
    k as usize
}

struct Pullback {
    p: u64,
    prec: i64,
    /// `p * binom(-1/2, k) * E^k` for `k = 0..=K`.
    numerators: Vec<PPoly>,
}

impl Pullback {
    fn new(f: &PPoly, p: u64, prec: i64) -> Self {
        let e = (&f.spread(p as usize) - &f.pow(p as usize)).trimmed();
        let kmax = series_terms(p, prec);
        let mut numerators = Vec::with_capacity(kmax + 1);
        let mut ek = Poly::constant(PadicNumber::one(p, prec));
        for k in 0..=kmax {
            let c = PadicNumber::from_rational(p, &(binomial(&ratio(-1, 2), k) * Rational::from_integer(p.into())), EXACT);
            numerators.push(ek.scale(&c).trimmed());
            if k < kmax {
                ek = (&ek * &e).trimmed();
            }
        }
        Pullback { p, prec, numerators }
    }

    fn exponent(&self, k: usize) -> usize {
        self.p as usize * k + (self.p as usize - 1) / 2
    }

    fn empty_buckets(&self) -> Vec<PPoly> {
        let top = self.exponent(self.numerators.len() - 1);
        vec![Poly::zero(PadicNumber::zero(self.p, self.prec)); top + 1]
    }
}

/// Rows `i` of the Frobenius matrix (`φ* ω_i = sum_j M_ij ω_j + d h_i`) and
/// the exact parts `h_i`.
pub fn frobenius_images(red: &Reducer) -> Result<(Matrix<PadicNumber>, Vec<OddFunction>)> {
    let pb = Pullback::new(&red.f, red.p, red.prec);
    let g2 = 2 * red.genus;
    let row = |i: usize| -> Result<(Vec<PadicNumber>, OddFunction)> {
        let mut buckets = pb.empty_buckets();
        let shift = red.p as usize * (i + 1) - 1;
        for (k, n) in pb.numerators.iter().enumerate() {
            buckets[pb.exponent(k)] = n.shift(shift);
        }
        red.reduce(buckets)
    };
    let results: Vec<Result<(Vec<PadicNumber>, OddFunction)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..g2).map(|i| scope.spawn(move || row(i))).collect();
        handles.into_iter().map(|h| h.join().expect("frobenius worker panicked")).collect()
    });
    let mut matrix = Vec::with_capacity(g2);
    let mut hs = Vec::with_capacity(g2);
    for r in results {
        let (c, h) = r?;
        matrix.push(c);
        hs.push(h);
    }
    Ok((matrix, hs))
}

/// Frobenius data for `ν_a = dx/((x - a) 2y)`, computed on the translated
/// model `f_a(x) = f(x + a)` with the lift `x - a -> (x - a)^p`:
/// `φ*ν = C ν + sum_j c_j (x - a)^j dx/2y + d h`.
#[derive(Clone, Debug)]
pub struct PoleFrobenius {
    pub a: Rational,
    pub big_c: PadicNumber,
    /// `c_j` in the translated basis `(x - a)^j dx/2y`.
    pub coords: Vec<PadicNumber>,
    /// Exact part, as a function of `x - a` and `y`.
    pub h: OddFunction,
    /// `(x - a)^j = sum_i T[j][i] x^i`.
    pub transform: Matrix<PadicNumber>,
}

pub fn pole_frobenius(f: &QPoly, a: &Rational, p: u64, prec: i64) -> Result<PoleFrobenius> {
    let shift = QPoly::from_rationals(vec![a.clone(), Rational::one()]);
    let fa = f.compose(&shift);
    let f0 = fa.coeff(0);
    if valuation(&f0, p) != Some(0) {
        return Err(Error::UnsupportedSupport(format!(
            "pole at x = {a} lies in a Weierstrass disk at {p}"
        )));
    }
    let red = Reducer::new(&fa, p, prec)?;
    let pb = Pullback::new(&red.f, p, prec);
    let zero = PadicNumber::zero(p, prec);
    let f0_inv = PadicNumber::from_rational(p, &f0.recip(), EXACT);
    // r = (f_a - f0)/x
    let r = Poly::new(red.f.coeffs()[1..].to_vec(), zero);
    let mut buckets = pb.empty_buckets();
    let top = buckets.len() - 1;
    let mut weights = vec![zero; top + 1];
    let mut big_c = zero;
    for (k, n) in pb.numerators.iter().enumerate() {
        let j = pb.exponent(k);
        let n0 = n.coeff(0);
        let q = if n.coeffs().len() > 1 { Poly::new(n.coeffs()[1..].to_vec(), zero) } else { Poly::zero(zero) };
        buckets[j] = &buckets[j] + &q;
        // 1/(x f^j) = f0^-j / x - sum_{i=1..j} f0^-(j-i+1) r / f^i
        let mut w = n0 * f0_inv;
        for i in (1..=j).rev() {
            weights[i] = weights[i] + w;
            w = w * f0_inv;
        }
        big_c = big_c + n0 * f0_inv.pow(j as u64);
    }
    for (i, w) in weights.iter().enumerate().skip(1) {
        if !w.is_zero() {
            buckets[i] = &buckets[i] - &r.scale(w);
        }
    }
    let (coords, h) = red.reduce(buckets)?;
    let g2 = 2 * red.genus;
    let neg_a = PadicNumber::from_rational(p, &(-a.clone()), EXACT);
    let transform = (0..g2)
        .map(|j| {
            (0..g2)
                .map(|i| {
                    if i > j {
                        zero
                    } else {
                        let b = binomial(&Rational::from_integer((j as i64).into()), i);
                        PadicNumber::from_rational(p, &b, EXACT) * neg_a.pow((j - i) as u64)
                    }
                })
                .collect()
        })
        .collect();
    Ok(PoleFrobenius { a: a.clone(), big_c, coords, h, transform })
}
