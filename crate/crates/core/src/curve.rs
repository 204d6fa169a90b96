//! Odd-degree hyperelliptic curves `y^2 = f(x)`, rational points, divisors,
//! residue disks and third-kind differentials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::poly::{Poly, QPoly, Scalar, Series, INF_ORDER};
use crate::rational::{
    format_rational, is_p_integral, parse_rational, rat, reduce_mod, trial_factor, valuation, Rational,
};

/// `y^2 = f(x)` with `f` monic, squarefree, of odd degree `2g + 1 >= 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperellipticCurve {
    f: QPoly,
    genus: usize,
    disc: Rational,
}

impl HyperellipticCurve {
    pub fn new(f: QPoly) -> Result<Self> {
        let d = f.degree().ok_or_else(|| Error::InvalidCurve("f = 0".into()))?;
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidCurve(format!("deg f = {d} must be odd and at least 3")));
        }
        if !f.leading().unwrap().is_one() {
            return Err(Error::InvalidCurve("f must be monic".into()));
        }
        let disc = f.discriminant();
        if disc.is_zero() {
            return Err(Error::InvalidCurve("f is not squarefree".into()));
        }
        Ok(Self { f, genus: (d - 1) / 2, disc })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(QPoly::from_ints(coeffs))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(QPoly::parse(s)?)
    }

    pub fn f(&self) -> &QPoly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        2 * self.genus + 1
    }

    pub fn discriminant(&self) -> &Rational {
        &self.disc
    }

    /// Good reduction at `p`: `p` odd, `f` p-integral and `p` not dividing
    /// the discriminant.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.check_good_reduction(p).is_ok()
    }

    pub fn check_good_reduction(&self, p: u64) -> Result<()> {
        if p == 2 {
            return Err(Error::BadReduction("p = 2".into()));
        }
        if !self.f.coeffs().iter().all(|c| is_p_integral(c, p)) {
            return Err(Error::BadReduction(format!("f is not {p}-integral")));
        }
        if reduce_mod(&self.disc, p) == Some(0) {
            return Err(Error::BadReduction(format!("{p} divides disc(f) = {}", format_rational(&self.disc))));
        }
        Ok(())
    }

    /// Primes of bad reduction among those dividing the discriminant and
    /// coefficient denominators (2 is always included).
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut out = vec![2u64];
        let (ps, _) = trial_factor(self.disc.numer(), 1_000_000);
        out.extend(ps);
        for c in self.f.coeffs() {
            out.extend(trial_factor(c.denom(), 1_000_000).0);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        y * y == self.f.eval(x)
    }

    pub fn point(&self, x: Rational, y: Rational) -> Result<CurvePoint> {
        if !self.contains(&x, &y) {
            return Err(Error::NotOnCurve(format!("({}, {})", format_rational(&x), format_rational(&y))));
        }
        Ok(CurvePoint::Affine { x, y })
    }

    pub fn point_i(&self, x: i64, y: i64) -> Result<CurvePoint> {
        self.point(rat(x), rat(y))
    }

    pub fn check_point(&self, p: &CurvePoint) -> Result<()> {
        match p {
            CurvePoint::Infinity => Ok(()),
            CurvePoint::Affine { x, y } => self.point(x.clone(), y.clone()).map(|_| ()),
        }
    }

    /// Rational roots of `f`, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        rational_roots(&self.f)
    }

    /// Rational points with integer `x`, `|x| <= bound`, plus `∞`.
    pub fn small_points(&self, bound: i64) -> Vec<CurvePoint> {
        let mut out = vec![CurvePoint::Infinity];
        for x in -bound..=bound {
            let fx = self.f.eval(&rat(x));
            if fx.is_negative() || !fx.denom().is_one() {
                continue;
            }
            let s = fx.numer().sqrt();
            if &s * &s == *fx.numer() {
                let y = Rational::from_integer(s);
                out.push(CurvePoint::Affine { x: rat(x), y: y.clone() });
                if !y.is_zero() {
                    out.push(CurvePoint::Affine { x: rat(x), y: -y });
                }
            }
        }
        out
    }

    /// The residue disk at `p` containing `pt`. Since `f` is monic, points
    /// with non-integral `x` reduce to infinity.
    pub fn reduce_point(&self, pt: &CurvePoint, p: u64) -> Result<ResidueDisk> {
        self.check_good_reduction(p)?;
        match pt {
            CurvePoint::Infinity => Ok(ResidueDisk::infinity()),
            CurvePoint::Affine { x, y } => match (reduce_mod(x, p), reduce_mod(y, p)) {
                (Some(xb), Some(yb)) => Ok(ResidueDisk::affine(xb, yb)),
                _ => Ok(ResidueDisk::infinity()),
            },
        }
    }

    /// A third-kind form with residue divisor `d`.
    ///
    /// Non-Weierstrass points `P = (a, b)` of multiplicity `n` contribute
    /// `n (y + b)/(x - a) dx/2y`; Weierstrass points need even multiplicity
    /// `2m` and contribute `m dlog(x - e)`. The residue at `∞` is whatever
    /// balances the degree.
    pub fn third_kind_with_residue(&self, d: &Divisor) -> Result<ThirdKindForm<Rational>> {
        if d.degree() != 0 {
            return Err(Error::DegreeNotZero(d.degree()));
        }
        let mut form = ThirdKindForm::zero(self.genus, Rational::zero());
        for (pt, n) in d.terms() {
            self.check_point(pt)?;
            let CurvePoint::Affine { x, y } = pt else { continue };
            if y.is_zero() {
                if n % 2 != 0 {
                    return Err(Error::UnsupportedSupport(format!(
                        "Weierstrass point x = {} with odd multiplicity {n}",
                        format_rational(x)
                    )));
                }
                form.dlogs.push(DlogTerm { root: x.clone(), weight: n / 2 });
            } else {
                form.poles.push(PoleTerm { x: x.clone(), y: y.clone(), weight: *n });
            }
        }
        Ok(form)
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {}", self.f)
    }
}

/// Distinct rational roots of a nonzero polynomial, increasing.
pub fn rational_roots(f: &QPoly) -> Vec<Rational> {
    // Scale to a monic integer polynomial g(z) = D^n f(z/D), roots z = D x.
    let n = f.degree().unwrap_or(0);
    let monic = f.monic();
    let mut den = BigInt::one();
    for c in monic.coeffs() {
        den = den.lcm(c.denom());
    }
    let dq = Rational::from_integer(den.clone());
    let mut g: Vec<BigInt> = Vec::with_capacity(n + 1);
    for (i, c) in monic.coeffs().iter().enumerate() {
        let scaled = c * num_traits::pow(dq.clone(), n - i);
        g.push(scaled.to_integer());
    }
    let eval = |z: &BigInt| g.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c);
    let mut roots = Vec::new();
    let mut shift = 0;
    while shift < g.len() && g[shift].is_zero() {
        shift += 1;
    }
    if shift > 0 {
        roots.push(Rational::zero());
    }
    if shift < g.len() {
        let c0 = g[shift].abs();
        for d in divisors(&c0) {
            for z in [d.clone(), -d] {
                if eval(&z).is_zero() {
                    roots.push(Rational::new(z, den.clone()));
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let (primes, rest) = trial_factor(n, 1_000_000);
    let mut m = n.clone();
    let mut divs = vec![BigInt::one()];
    for p in primes {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        let base = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..e {
            pk *= &bp;
            divs.extend(base.iter().map(|d| d * &pk));
        }
    }
    if !rest.is_one() {
        let base = divs.clone();
        divs.extend(base.iter().map(|d| d * &rest));
    }
    divs
}

/// A rational point of the curve.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn is_weierstrass(&self) -> bool {
        match self {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { y, .. } => y.is_zero(),
        }
    }

    /// The hyperelliptic conjugate `(x, -y)`.
    pub fn opposite(&self) -> CurvePoint {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y.clone() },
        }
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rational> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CurvePoint::Infinity => json!("infinity"),
            CurvePoint::Affine { x, y } => json!({"x": format_rational(x), "y": format_rational(y)}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "infinity" => Ok(CurvePoint::Infinity),
            Value::Object(m) => {
                let get = |k: &str| -> Result<Rational> {
                    match m.get(k) {
                        Some(Value::String(s)) => parse_rational(s),
                        Some(Value::Number(n)) => parse_rational(&n.to_string()),
                        _ => Err(Error::Parse(format!("point is missing {k:?}"))),
                    }
                };
                Ok(CurvePoint::Affine { x: get("x")?, y: get("y")? })
            }
            _ => Err(Error::Parse(format!("bad point {v}"))),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "infinity"),
            CurvePoint::Affine { x, y } => write!(f, "({}, {})", format_rational(x), format_rational(y)),
        }
    }
}

/// A formal integer combination of rational points; terms are sorted and
/// have nonzero multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: Vec<(CurvePoint, i64)>,
}

impl Divisor {
    pub fn new(terms: impl IntoIterator<Item = (CurvePoint, i64)>) -> Self {
        let mut map: BTreeMap<CurvePoint, i64> = BTreeMap::new();
        for (p, n) in terms {
            *map.entry(p).or_insert(0) += n;
        }
        Divisor { terms: map.into_iter().filter(|(_, n)| *n != 0).collect() }
    }

    pub fn zero() -> Self {
        Divisor::default()
    }

    /// `(p) - (q)`.
    pub fn difference(p: &CurvePoint, q: &CurvePoint) -> Self {
        Divisor::new([(p.clone(), 1), (q.clone(), -1)])
    }

    pub fn terms(&self) -> &[(CurvePoint, i64)] {
        &self.terms
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(_, n)| n).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn multiplicity(&self, p: &CurvePoint) -> i64 {
        self.terms.iter().find(|(q, _)| q == p).map_or(0, |(_, n)| *n)
    }

    pub fn support(&self) -> impl Iterator<Item = &CurvePoint> {
        self.terms.iter().map(|(p, _)| p)
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::new(self.terms.iter().map(|(p, n)| (p.clone(), n * k)))
    }

    pub fn neg(&self) -> Divisor {
        self.scale(-1)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(p, n)| json!({"point": p.to_json(), "mult": n})).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("divisor must be a list".into()))?;
        let mut terms = Vec::new();
        for item in arr {
            let pt = CurvePoint::from_json(item.get("point").ok_or_else(|| Error::Parse("term needs \"point\"".into()))?)?;
            let n = item
                .get("mult")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("term needs integer \"mult\"".into()))?;
            terms.push((pt, n));
        }
        Ok(Divisor::new(terms))
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, n)| format!("{n}*{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiskKind {
    Infinity,
    Weierstrass,
    Ordinary,
}

/// A residue disk at `p`, identified by the reduction of its points.
///
/// The local parameter is `x - x0` in ordinary disks, `y` in Weierstrass
/// disks and `x^g / y` in the disk at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueDisk {
    pub kind: DiskKind,
    /// Reduction `(x mod p, y mod p)`; `None` for the disk at infinity.
    pub center: Option<(u64, u64)>,
}

impl ResidueDisk {
    pub fn infinity() -> Self {
        ResidueDisk { kind: DiskKind::Infinity, center: None }
    }

    pub fn affine(x: u64, y: u64) -> Self {
        let kind = if y == 0 { DiskKind::Weierstrass } else { DiskKind::Ordinary };
        ResidueDisk { kind, center: Some((x, y)) }
    }

    pub fn is_weierstrass(&self) -> bool {
        self.kind != DiskKind::Ordinary
    }
}

impl fmt::Display for ResidueDisk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.center {
            None => write!(f, "disk(infinity)"),
            Some((x, y)) => write!(f, "disk({x}, {y})"),
        }
    }
}

/// A `Q_p`-point of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalPoint {
    Infinity,
    Affine { x: PadicNumber, y: PadicNumber },
}

impl LocalPoint {
    /// Embeds a rational point at absolute precision `prec` (relative
    /// precision for non-integral coordinates).
    pub fn from_point(pt: &CurvePoint, p: u64, prec: i64) -> Result<Self> {
        match pt {
            CurvePoint::Infinity => Ok(LocalPoint::Infinity),
            CurvePoint::Affine { x, y } => {
                let shift = |q: &Rational| valuation(q, p).map_or(0, |v| v.min(0));
                Ok(LocalPoint::Affine {
                    x: PadicNumber::from_rational(p, x, prec + shift(x)),
                    y: PadicNumber::from_rational(p, y, prec + shift(y)),
                })
            }
        }
    }

    pub fn disk(&self) -> Result<ResidueDisk> {
        match self {
            LocalPoint::Infinity => Ok(ResidueDisk::infinity()),
            LocalPoint::Affine { x, y } => match (x.residue(), y.residue()) {
                (Some(a), Some(b)) if x.valuation() >= 0 && y.valuation() >= 0 => Ok(ResidueDisk::affine(a, b)),
                _ if x.valuation() < 0 => Ok(ResidueDisk::infinity()),
                _ => Err(Error::BadIntegrality("point is not integral".into())),
            },
        }
    }

    pub fn opposite(&self) -> Self {
        match *self {
            LocalPoint::Infinity => LocalPoint::Infinity,
            LocalPoint::Affine { x, y } => LocalPoint::Affine { x, y: -y },
        }
    }
}

/// Center of a local parametrisation.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalCenter<C: Scalar> {
    /// `t = x^g / y`.
    Infinity,
    /// `t = x - x0`, with `y0 != 0`.
    Ordinary { x: C, y: C },
    /// `t = y`, centered at the root `e` of `f`.
    Weierstrass { x: C },
}

/// `p(s)` for a polynomial `p` and series `s`.
pub fn poly_at_series<C: Scalar>(p: &Poly<C>, s: &Series<C>) -> Series<C> {
    let zero = s.zero_template().clone();
    let mut acc = Series::zero(INF_ORDER, zero);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * s) + &Series::constant(c.clone(), INF_ORDER);
    }
    acc
}

/// Local coordinates `(x(t), y(t))` at `center`, with the affine
/// coordinates known modulo `t^order` (at infinity, `x` and `y` carry
/// at least `order` terms past their leading ones).
pub fn local_coordinates<C: Scalar>(
    f: &Poly<C>,
    center: &LocalCenter<C>,
    order: i64,
) -> Result<(Series<C>, Series<C>)> {
    let zero = f.zero_template().clone();
    let one = zero.one_like();
    let t = Series::variable(zero.clone(), order);
    match center {
        LocalCenter::Ordinary { x: x0, y: y0 } => {
            if y0.is_zero_s() {
                return Err(Error::SingularAtCenter("ordinary chart at a Weierstrass point".into()));
            }
            let shifted = f.compose(&Poly::new(vec![x0.clone(), one.clone()], zero.clone()));
            let y0sq_inv = (y0.clone() * y0.clone()).try_inv()?;
            let mut z: Vec<C> = shifted.coeffs().iter().map(|c| c.clone() * y0sq_inv.clone()).collect();
            // y0^2 = f(x0) by assumption
            z[0] = zero.clone();
            let z = Series::new(0, z, order, zero.clone());
            let y = Series::sqrt_one_plus(&z)?.scale(y0);
            let x = &Series::constant(x0.clone(), order) + &t;
            Ok((x, y))
        }
        LocalCenter::Weierstrass { x: e } => {
            let taylor = f.compose(&Poly::new(vec![e.clone(), one.clone()], zero.clone()));
            let c1 = taylor.coeff(1);
            let c1_inv = c1.try_inv().map_err(|_| Error::SingularAtCenter("f'(e) = 0".into()))?;
            // u = (t^2 - sum_{k>=2} c_k u^k) / c_1, iterated from u = O(t^2)
            let mut higher = taylor.coeffs().to_vec();
            higher[0] = zero.clone();
            higher[1] = zero.clone();
            let higher = Poly::new(higher, zero.clone());
            let t2 = &t * &t;
            let mut u = Series::zero(2, zero.clone());
            while u.order() < order {
                let h = poly_at_series(&higher, &u);
                let next = (&t2 - &h).scale(&c1_inv).truncate(order);
                if next.order() <= u.order() {
                    break;
                }
                u = next;
            }
            let x = &Series::constant(e.clone(), order) + &u;
            Ok((x, t))
        }
        LocalCenter::Infinity => {
            let n = f.degree().unwrap();
            let g = (n - 1) / 2;
            let rev: Vec<C> = f.coeffs().iter().rev().cloned().collect();
            let s_poly = Poly::new(rev, zero.clone());
            let target = order + 2 * n as i64 + 2;
            let t_long = Series::variable(zero.clone(), target);
            let t2 = &t_long * &t_long;
            let mut w = Series::zero(2, zero.clone());
            while w.order() < target {
                let next = (&t2 * &poly_at_series(&s_poly, &w)).truncate(target);
                if next.order() <= w.order() {
                    break;
                }
                w = next;
            }
            let x = w.inverse()?;
            let y = &x.pow(g as u32) * &t_long.inverse()?;
            Ok((x, y))
        }
    }
}

/// A pole block `weight * (y + b)/(x - a) * dx/(2y)` with residue divisor
/// `weight * ((a, b) - ∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleTerm {
    pub x: Rational,
    pub y: Rational,
    pub weight: i64,
}

impl PoleTerm {
    pub fn point(&self) -> CurvePoint {
        CurvePoint::Affine { x: self.x.clone(), y: self.y.clone() }
    }
}

/// `weight * dlog(x - root)` for a rational root of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlogTerm {
    pub root: Rational,
    pub weight: i64,
}

/// `A(x) dx/(2y) + sum pole blocks + sum dlog terms`.
///
/// The first `2g` coefficients of `A` are coordinates in the basis
/// `x^i dx/(2y)`; longer `A` are allowed and reduce at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ThirdKindForm<C: Scalar> {
    pub genus: usize,
    pub odd: Vec<C>,
    pub poles: Vec<PoleTerm>,
    pub dlogs: Vec<DlogTerm>,
    zero: C,
}

impl<C: Scalar> ThirdKindForm<C> {
    pub fn zero(genus: usize, zero: C) -> Self {
        ThirdKindForm { genus, odd: Vec::new(), poles: Vec::new(), dlogs: Vec::new(), zero }
    }

    /// `x^i dx/(2y)`.
    pub fn basis(genus: usize, i: usize, zero: C) -> Self {
        let mut w = Self::zero(genus, zero.clone());
        w.odd = vec![zero.clone(); i + 1];
        w.odd[i] = zero.one_like();
        w
    }

    pub fn holomorphic(genus: usize, coeffs: Vec<C>, zero: C) -> Self {
        let mut w = Self::zero(genus, zero);
        w.odd = coeffs;
        w
    }

    pub fn zero_template(&self) -> &C {
        &self.zero
    }

    pub fn odd_coeff(&self, i: usize) -> C {
        self.odd.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.odd.len().max(other.odd.len());
        let odd = (0..n).map(|i| self.odd_coeff(i) + other.odd_coeff(i)).collect();
        let mut poles = self.poles.clone();
        poles.extend(other.poles.iter().cloned());
        let mut dlogs = self.dlogs.clone();
        dlogs.extend(other.dlogs.iter().cloned());
        ThirdKindForm { genus: self.genus, odd, poles, dlogs, zero: self.zero.clone() }
    }

    /// Scales the odd part by `c` and the singular weights by `k`; used with
    /// `c` the image of the integer `k`.
    pub fn scale_int(&self, k: i64) -> Self {
        let c = self.zero.from_int_like(k);
        ThirdKindForm {
            genus: self.genus,
            odd: self.odd.iter().map(|a| a.clone() * c.clone()).collect(),
            poles: self.poles.iter().map(|t| PoleTerm { weight: t.weight * k, ..t.clone() }).collect(),
            dlogs: self.dlogs.iter().map(|t| DlogTerm { weight: t.weight * k, ..t.clone() }).collect(),
            zero: self.zero.clone(),
        }
    }

    /// Subtracts a linear combination of basis forms.
    pub fn minus_holomorphic(&self, coeffs: &[C]) -> Self {
        let n = self.odd.len().max(coeffs.len());
        let odd = (0..n)
            .map(|i| self.odd_coeff(i) - coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone()))
            .collect();
        ThirdKindForm { odd, ..self.clone() }
    }

    pub fn has_singular_part(&self) -> bool {
        self.poles.iter().any(|t| t.weight != 0) || self.dlogs.iter().any(|t| t.weight != 0)
    }

    pub fn map<D: Scalar>(&self, zero: D, f: impl Fn(&C) -> D) -> ThirdKindForm<D> {
        ThirdKindForm {
            genus: self.genus,
            odd: self.odd.iter().map(f).collect(),
            poles: self.poles.clone(),
            dlogs: self.dlogs.clone(),
            zero,
        }
    }

    /// `g(t)` with `ω = g(t) dt`, given local coordinates; poles allowed.
    pub fn laurent(&self, x: &Series<C>, y: &Series<C>) -> Result<Series<C>> {
        let z = &self.zero;
        let dx = x.derivative();
        let two_y_inv = y.scale(&z.from_int_like(2)).inverse()?;
        let a = Poly::new(self.odd.clone(), z.clone());
        let mut g = &poly_at_series(&a, x) * &two_y_inv;
        for term in &self.poles {
            if term.weight == 0 {
                continue;
            }
            let ca = Series::constant(z.from_rational_like(&term.x), INF_ORDER);
            let cb = Series::constant(z.from_rational_like(&term.y), INF_ORDER);
            let num = &(y + &cb) * &two_y_inv;
            let block = &num * &(x - &ca).inverse()?;
            g = &g + &block.scale(&z.from_int_like(term.weight));
        }
        for term in &self.dlogs {
            if term.weight == 0 {
                continue;
            }
            let ce = Series::constant(z.from_rational_like(&term.root), INF_ORDER);
            let block = (x - &ce).inverse()?;
            g = &g + &block.scale(&z.from_int_like(term.weight));
        }
        Ok(&g * &dx)
    }

    /// Expansion `ω = g(t) dt` at a point where `ω` is regular.
    pub fn local_expansion(&self, f: &Poly<C>, center: &LocalCenter<C>, order: i64) -> Result<Series<C>> {
        let (x, y) = local_coordinates(f, center, order + 2)?;
        let g = self.laurent(&x, &y)?;
        if g.valuation().is_some_and(|v| v < 0) {
            return Err(Error::SingularAtCenter("the form has a pole at the center".into()));
        }
        Ok(g.truncate(order))
    }
}

impl ThirdKindForm<Rational> {
    pub fn to_padic(&self, p: u64, prec: i64) -> ThirdKindForm<PadicNumber> {
        self.map(PadicNumber::zero(p, prec), |c| PadicNumber::from_rational(p, c, prec))
    }

    /// Residue divisor, computed from Laurent expansions at every pole
    /// block, its conjugate, every dlog root, and infinity.
    pub fn residue_divisor(&self, curve: &HyperellipticCurve) -> Result<Divisor> {
        let mut candidates: Vec<CurvePoint> = vec![CurvePoint::Infinity];
        for t in &self.poles {
            candidates.push(t.point());
            candidates.push(t.point().opposite());
        }
        for t in &self.dlogs {
            candidates.push(CurvePoint::Affine { x: t.root.clone(), y: Rational::zero() });
        }
        candidates.sort();
        candidates.dedup();
        // poles are simple in affine disks; at infinity x^k dx/2y has a pole
        // of order 2k - 2g + 2
        let order = 2 * self.odd.len() as i64 + 7;
        let mut terms = Vec::new();
        for pt in candidates {
            let center = match &pt {
                CurvePoint::Infinity => LocalCenter::Infinity,
                CurvePoint::Affine { x, y } if y.is_zero() => LocalCenter::Weierstrass { x: x.clone() },
                CurvePoint::Affine { x, y } => LocalCenter::Ordinary { x: x.clone(), y: y.clone() },
            };
            let (x, y) = local_coordinates(curve.f(), &center, order)?;
            let g = self.laurent(&x, &y)?;
            let r = g.coeff(-1);
            if !r.is_integer() {
                return Err(Error::NonInvertible(format!("non-integral residue {} at {pt}", format_rational(&r))));
            }
            let n = r.to_integer().to_i64().expect("small residue");
            terms.push((pt, n));
        }
        Ok(Divisor::new(terms))
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn residue_roundtrip(picks in prop::collection::vec((0usize..10, -3i64..4), 1..5)) {
            let c = HyperellipticCurve::from_ints(&[1, -1, 0, 1]).unwrap();
            let pts: Vec<CurvePoint> = c.small_points(6).into_iter().filter(|p| !p.is_infinity()).collect();
            let mut terms: Vec<(CurvePoint, i64)> = picks.iter().map(|(i, n)| (pts[i % pts.len()].clone(), *n)).collect();
            let deg: i64 = terms.iter().map(|(_, n)| n).sum();
            terms.push((CurvePoint::Infinity, -deg));
            let d = Divisor::new(terms);
            let w = c.third_kind_with_residue(&d).unwrap();
            prop_assert_eq!(w.residue_divisor(&c).unwrap(), d);
        }

        #[test]
        fn residues_are_linear(a in -3i64..4, b in -3i64..4) {
            let c = HyperellipticCurve::from_ints(&[1, -1, 0, 0, 0, 1]).unwrap();
            let p = c.point_i(1, 1).unwrap();
            let q = c.point_i(-1, -1).unwrap();
            let w1 = c.third_kind_with_residue(&Divisor::difference(&p, &CurvePoint::Infinity)).unwrap();
            let w2 = c.third_kind_with_residue(&Divisor::difference(&q, &p)).unwrap();
            let combo = w1.scale_int(a).add(&w2.scale_int(b));
            let expect = w1.residue_divisor(&c).unwrap().scale(a).add(&w2.residue_divisor(&c).unwrap().scale(b));
            prop_assert_eq!(combo.residue_divisor(&c).unwrap(), expect);
        }
    }
}
