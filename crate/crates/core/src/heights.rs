//! Idele class characters over `Q`, local heights and the global
//! Coleman-Gross height pairing.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coleman::ColemanContext;
use crate::curve::{CurvePoint, Divisor, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::padic::{LogBranch, PadicJson, PadicNumber};
use crate::rational::{format_rational, reduce_mod, trial_factor, valuation, Rational};
use crate::rigidcoh::{omega_w, Subspace};

/// A continuous idele class character `ℓ` with `ℓ_p = t log` on `Q_p^×`
/// and unramified components `ℓ_q` given by their values on `q`.
#[derive(Clone, Debug)]
pub struct IdeleCharacter {
    pub p: u64,
    pub t: PadicNumber,
    pub branch: LogBranch,
    /// Explicit values `ℓ_q(q)`; missing primes use `-t log_0(q)`.
    pub away_values: BTreeMap<u64, PadicNumber>,
}

/// Outcome of a successful character validation.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterReport {
    /// For every keyed prime, the valuation of `ℓ_q(q) + t log_0(q)`.
    pub residuals: BTreeMap<u64, i64>,
}

impl IdeleCharacter {
    /// `t = 1`, Iwasawa branch, `ℓ_q(q) = -log_0(q)`.
    pub fn canonical(p: u64, prec: i64) -> Self {
        IdeleCharacter {
            p,
            t: PadicNumber::one(p, prec),
            branch: LogBranch::iwasawa(p, prec),
            away_values: BTreeMap::new(),
        }
    }

    pub fn scaled(&self, lambda: &PadicNumber) -> Self {
        IdeleCharacter {
            p: self.p,
            t: self.t * *lambda,
            branch: self.branch,
            away_values: self.away_values.iter().map(|(q, v)| (*q, *v * *lambda)).collect(),
        }
    }

    fn precision(&self) -> i64 {
        self.t.precision().max(1)
    }

    fn iwasawa_log(&self, q: u64) -> Result<PadicNumber> {
        let prec = self.precision();
        PadicNumber::from_int(self.p, q as i64, prec).log(&LogBranch::iwasawa(self.p, prec))
    }

    /// `ℓ_q(q)`.
    pub fn away_value(&self, q: u64) -> Result<PadicNumber> {
        match self.away_values.get(&q) {
            Some(v) => Ok(*v),
            None => Ok(-(self.t * self.iwasawa_log(q)?)),
        }
    }

    /// `ℓ_p(x) = t log(x)` for `x ∈ Q_p^×`.
    pub fn at_p(&self, x: &PadicNumber) -> Result<PadicNumber> {
        Ok(self.t * x.log(&self.branch)?)
    }
}

/// Checks ramification at `p` and triviality on principal ideles: over `Q`
/// this forces `t c = 0` for the branch constant `c` and
/// `ℓ_q(q) = -t log_0(q)` for every keyed prime.
pub fn validate_character(chi: &IdeleCharacter) -> Result<CharacterReport> {
    if chi.t.is_zero() {
        return Err(Error::UnramifiedAtP);
    }
    let mut violations = Vec::new();
    let digits = chi.precision();
    let tc = chi.t * chi.branch.constant();
    if !tc.is_zero() {
        violations.push(format!("t * log({}) = {} is not zero", chi.p, tc.digit_string()));
    }
    let mut residuals = BTreeMap::new();
    for (q, v) in &chi.away_values {
        if *q == chi.p {
            violations.push(format!("a value at the ramified prime {q} was supplied"));
            continue;
        }
        let r = *v + chi.t * chi.iwasawa_log(*q)?;
        let val = if r.is_zero() { r.precision() } else { r.valuation() };
        if val < digits.min(v.precision()) {
            violations.push(format!("l_{q}({q}) + t log_0({q}) has valuation {val}"));
        }
        residuals.insert(*q, val);
    }
    if violations.is_empty() {
        Ok(CharacterReport { residuals })
    } else {
        Err(Error::NotClassCharacter(violations.join("; ")))
    }
}

/// The local parameter used at the common reduction of two points:
/// `x` in ordinary disks, `y` in Weierstrass disks, `x^g / y` at infinity.
fn parameter(curve: &HyperellipticCurve, pt: &CurvePoint, kind: Chart) -> Rational {
    match (pt, kind) {
        (CurvePoint::Infinity, _) => Rational::zero(),
        (CurvePoint::Affine { x, y }, Chart::Infinity) => {
            let mut xg = Rational::one();
            for _ in 0..curve.genus() {
                xg *= x;
            }
            xg / y
        }
        (CurvePoint::Affine { y, .. }, Chart::Weierstrass) => y.clone(),
        (CurvePoint::Affine { x, .. }, Chart::Ordinary) => x.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Chart {
    Infinity,
    Weierstrass,
    Ordinary,
}

/// Common reduction of two points modulo `q`, if they meet there.
fn meeting_chart(p1: &CurvePoint, p2: &CurvePoint, q: u64) -> Option<Chart> {
    let red = |pt: &CurvePoint| match pt {
        CurvePoint::Infinity => None,
        CurvePoint::Affine { x, y } => match (reduce_mod(x, q), reduce_mod(y, q)) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        },
    };
    match (red(p1), red(p2)) {
        (None, None) => Some(Chart::Infinity),
        (Some(a), Some(b)) if a == b => Some(if a.1 == 0 { Chart::Weierstrass } else { Chart::Ordinary }),
        _ => None,
    }
}

/// Intersection multiplicity of the sections through `P` and `Q` on the
/// smooth model at a good prime `q`.
pub fn intersection_multiplicity(curve: &HyperellipticCurve, p1: &CurvePoint, p2: &CurvePoint, q: u64) -> Result<i64> {
    if !curve.has_good_reduction(q) {
        return Err(Error::BadReductionAtQ(q));
    }
    curve.check_point(p1)?;
    curve.check_point(p2)?;
    if p1 == p2 {
        return Err(Error::OverlappingSupport(format!("{p1} appears on both sides")));
    }
    let Some(chart) = meeting_chart(p1, p2, q) else { return Ok(0) };
    let d = parameter(curve, p1, chart) - parameter(curve, p2, chart);
    Ok(valuation(&d, q).expect("distinct points have distinct parameters"))
}

fn prime_factors(n: &BigInt) -> Result<Vec<u64>> {
    let n = n.abs();
    if n.is_zero() {
        return Ok(Vec::new());
    }
    let (ps, rest) = trial_factor(&n, 1 << 20);
    if !rest.is_one() {
        return Err(Error::DegenerateInput(format!("could not factor {n} completely")));
    }
    Ok(ps)
}

/// Primes at which `P` and `Q` reduce to the same point.
pub fn contact_primes(p1: &CurvePoint, p2: &CurvePoint) -> Result<BTreeSet<u64>> {
    let mut cand = BTreeSet::new();
    match (p1, p2) {
        (CurvePoint::Infinity, CurvePoint::Affine { x, .. }) | (CurvePoint::Affine { x, .. }, CurvePoint::Infinity) => {
            cand.extend(prime_factors(x.denom())?);
        }
        (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
            let d = x1 - x2;
            if d.is_zero() {
                cand.extend(prime_factors((y1 - y2).numer())?);
            } else {
                cand.extend(prime_factors(d.numer())?);
            }
            cand.extend(prime_factors(x1.denom())?);
            cand.extend(prime_factors(x2.denom())?);
        }
        (CurvePoint::Infinity, CurvePoint::Infinity) => {}
    }
    Ok(cand.into_iter().filter(|&q| meeting_chart(p1, p2, q).is_some()).collect())
}

fn check_divisors(y: &Divisor, z: &Divisor) -> Result<()> {
    for d in [y, z] {
        if d.degree() != 0 {
            return Err(Error::DegreeNotZero(d.degree()));
        }
    }
    if let Some(pt) = y.support().find(|pt| z.multiplicity(pt) != 0) {
        return Err(Error::OverlappingSupport(format!("{pt} lies in both supports")));
    }
    Ok(())
}

/// `ℓ_q(q) (y, z)_q`.
pub fn local_height_away(
    curve: &HyperellipticCurve,
    y: &Divisor,
    z: &Divisor,
    q: u64,
    chi: &IdeleCharacter,
) -> Result<PadicNumber> {
    check_divisors(y, z)?;
    if !curve.has_good_reduction(q) {
        return Err(Error::BadReductionAtQ(q));
    }
    let mut total = 0i64;
    for (a, n) in y.terms() {
        for (b, m) in z.terms() {
            total += n * m * intersection_multiplicity(curve, a, b, q)?;
        }
    }
    Ok(chi.away_value(q)?.scale_int(total))
}

/// `t ∫_z ω_W(y)`.
pub fn local_height_at_p(
    y: &Divisor,
    z: &Divisor,
    w: &Subspace,
    chi: &IdeleCharacter,
    ctx: &ColemanContext,
) -> Result<PadicNumber> {
    check_divisors(y, z)?;
    if chi.p != ctx.p() {
        return Err(Error::PrimeMismatch(chi.p, ctx.p()));
    }
    let p = ctx.p();
    let disks_y: Vec<_> = y.support().map(|pt| ctx.disk(pt)).collect::<Result<_>>()?;
    for pt in z.support() {
        let dz = ctx.disk(pt)?;
        if disks_y.contains(&dz) {
            return Err(Error::SupportsCollideModP(format!("{pt} meets the support of y modulo {p}")));
        }
    }
    let form = omega_w(y, w, ctx.frobenius())?;
    let integral = ctx.integral_over_divisor(&form, z, None).map_err(|e| match e {
        Error::SingularDiskEndpoint(m) => Error::SupportsCollideModP(m),
        other => other,
    })?;
    Ok(chi.t * integral)
}

/// Precision bookkeeping attached to a height.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionReport {
    pub requested: i64,
    pub working: i64,
    pub frobenius_loss: i64,
    /// Smallest absolute precision among the local terms and the total.
    pub achieved: i64,
}

/// Local terms keyed by prime, and their sum.
#[derive(Clone, Debug)]
pub struct HeightResult {
    pub local_terms: BTreeMap<u64, PadicNumber>,
    pub total: PadicNumber,
    pub precision: PrecisionReport,
}

/// JSON shape of a [`HeightResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightJson {
    pub local_terms: BTreeMap<String, PadicJson>,
    pub total: PadicJson,
    pub precision_report: PrecisionReport,
}

impl HeightResult {
    pub fn to_json(&self) -> HeightJson {
        HeightJson {
            local_terms: self.local_terms.iter().map(|(q, v)| (q.to_string(), PadicJson::from(v))).collect(),
            total: PadicJson::from(&self.total),
            precision_report: self.precision.clone(),
        }
    }
}

/// Sum of the local term at `p` and the terms at every prime where the
/// supports of `y` and `z` meet.
pub fn global_height(
    y: &Divisor,
    z: &Divisor,
    w: &Subspace,
    chi: &IdeleCharacter,
    ctx: &ColemanContext,
) -> Result<HeightResult> {
    check_divisors(y, z)?;
    let curve = ctx.curve();
    let p = ctx.p();
    let mut primes = BTreeSet::new();
    for (a, _) in y.terms() {
        for (b, _) in z.terms() {
            for q in contact_primes(a, b)? {
                if q == p {
                    continue;
                }
                if !curve.has_good_reduction(q) {
                    return Err(Error::BadPrimeContact(q));
                }
                primes.insert(q);
            }
        }
    }
    let mut local_terms = BTreeMap::new();
    local_terms.insert(p, local_height_at_p(y, z, w, chi, ctx)?);
    for q in primes {
        local_terms.insert(q, local_height_away(curve, y, z, q, chi)?);
    }
    let total = local_terms.values().fold(PadicNumber::zero(p, i64::MAX / 4), |s, v| s + *v);
    let fd = ctx.frobenius();
    let achieved = local_terms.values().chain([&total]).map(|v| v.precision()).min().unwrap_or(0);
    Ok(HeightResult {
        local_terms,
        total,
        precision: PrecisionReport {
            requested: fd.precision(),
            working: fd.working_precision(),
            frobenius_loss: fd.loss(),
            achieved,
        },
    })
}

/// Principal divisor of `y - c` when `f - c^2` has only rational roots.
pub fn divisor_of_y_minus(curve: &HyperellipticCurve, c: &Rational) -> Result<Divisor> {
    let shifted = curve.f() - &crate::poly::QPoly::constant(c * c);
    let roots = crate::curve::rational_roots(&shifted);
    if roots.len() != curve.degree() {
        return Err(Error::DegenerateInput(format!(
            "f - {} does not split over Q",
            format_rational(&(c * c))
        )));
    }
    let mut terms: Vec<(CurvePoint, i64)> =
        roots.into_iter().map(|r| (CurvePoint::Affine { x: r, y: c.clone() }, 1)).collect();
    terms.push((CurvePoint::Infinity, -(curve.degree() as i64)));
    Ok(Divisor::new(terms))
}

/// Principal divisor of `(x - a)/(x - b)`.
pub fn divisor_of_x_ratio(curve: &HyperellipticCurve, a: &Rational, b: &Rational) -> Result<Divisor> {
    let fibre = |x: &Rational| -> Result<Vec<CurvePoint>> {
        let fx = curve.f().eval(x);
        let root = crate::rational::rational_sqrt(&fx)
            .ok_or_else(|| Error::DegenerateInput(format!("f({}) is not a square", format_rational(x))))?;
        Ok(vec![CurvePoint::Affine { x: x.clone(), y: root.clone() }, CurvePoint::Affine { x: x.clone(), y: -root }])
    };
    let mut terms = Vec::new();
    for pt in fibre(a)? {
        terms.push((pt, 1));
    }
    for pt in fibre(b)? {
        terms.push((pt, -1));
    }
    Ok(Divisor::new(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::rigidcoh::{annihilator, unit_root_subspace};

    fn e1() -> HyperellipticCurve {
        HyperellipticCurve::from_ints(&[1, -1, 0, 1]).unwrap()
    }

    #[test]
    fn character_validation() {
        let mut chi = IdeleCharacter::canonical(7, 10);
        for q in [2u64, 3, 5] {
            let v = chi.away_value(q).unwrap();
            chi.away_values.insert(q, v);
        }
        assert!(validate_character(&chi).is_ok());
        let mut bad = chi.clone();
        bad.branch = LogBranch::new(PadicNumber::one(7, 10));
        assert!(matches!(validate_character(&bad), Err(Error::NotClassCharacter(_))));
        let zero = chi.scaled(&PadicNumber::zero(7, 10));
        assert!(matches!(validate_character(&zero), Err(Error::UnramifiedAtP)));
        let mut off = chi.clone();
        off.away_values.insert(3, PadicNumber::one(7, 10));
        assert!(matches!(validate_character(&off), Err(Error::NotClassCharacter(_))));
    }

    #[test]
    fn multiplicity_examples() {
        let c = HyperellipticCurve::from_ints(&[15, -11, 0, 1]).unwrap();
        let (a, b) = (c.point_i(2, 1).unwrap(), c.point_i(11, -35).unwrap());
        assert_eq!(intersection_multiplicity(&c, &a, &b, 3).unwrap(), 2);
        assert_eq!(intersection_multiplicity(&c, &a, &b, 5).unwrap(), 0);
        assert!(matches!(intersection_multiplicity(&c, &a, &b, 2), Err(Error::BadReductionAtQ(2))));
        assert_eq!(contact_primes(&a, &b).unwrap().into_iter().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn multiplicity_matches_congruence_ladder() {
        let c = e1();
        let pts = c.small_points(40);
        for q in [5u64, 7, 11] {
            for a in pts.iter().filter(|p| !p.is_infinity()) {
                for b in pts.iter().filter(|p| !p.is_infinity() && *p != a) {
                    let m = intersection_multiplicity(&c, a, b, q).unwrap();
                    // largest n with a ≡ b modulo q^n in (x, y)
                    let (xa, ya) = (a.x().unwrap(), a.y().unwrap());
                    let (xb, yb) = (b.x().unwrap(), b.y().unwrap());
                    let dx = valuation(&(xa - xb), q).unwrap_or(i64::MAX);
                    let dy = valuation(&(ya - yb), q).unwrap_or(i64::MAX);
                    let ladder = dx.min(dy);
                    if ya.is_zero() || reduce_mod(ya, q) != Some(0) {
                        assert_eq!(m, ladder, "{a} {b} mod {q}");
                    }
                }
            }
        }
    }

    fn no_bad_contact(c: &HyperellipticCurve, y: &Divisor, z: &Divisor, p: u64) -> bool {
        y.support().all(|a| {
            z.support().all(|b| {
                contact_primes(a, b).unwrap().into_iter().all(|q| q != p && c.has_good_reduction(q))
            })
        })
    }

    #[test]
    fn principal_divisors_have_height_zero() {
        let c = e1();
        let p = 7;
        let ctx = ColemanContext::build(&c, p, 6).unwrap();
        let w = unit_root_subspace(ctx.frobenius()).unwrap();
        let chi = IdeleCharacter::canonical(p, ctx.frobenius().working_precision());
        // every rational point of e1 has odd y, so contact at 2 is avoided
        // by giving z odd x-coordinates and y even ones
        let y = divisor_of_x_ratio(&c, &rat(0), &rat(56)).unwrap();
        let pts: Vec<CurvePoint> = c.small_points(60).into_iter().filter(|q| !q.is_infinity()).collect();
        let (mut checked, mut with_away) = (0, 0);
        for a in &pts {
            for b in &pts {
                let z = Divisor::new([(a.clone(), 1), (b.clone(), -1)]);
                if a == b || !no_bad_contact(&c, &y, &z, p) {
                    continue;
                }
                match global_height(&y, &z, &w, &chi, &ctx) {
                    Ok(h) => {
                        assert!(h.total.valuation() >= 4, "z = {z}: {}", h.total);
                        checked += 1;
                        with_away += usize::from(h.local_terms.values().any(|v| !v.is_zero()) && h.local_terms.len() > 1);
                    }
                    Err(Error::SupportsCollideModP(_)) => {}
                    Err(e) => panic!("z = {z}: {e}"),
                }
            }
        }
        assert!(checked >= 3 && with_away >= 1, "{checked} instances, {with_away} with away terms");
    }

    #[test]
    fn symmetry_with_annihilator() {
        let c = e1();
        let p = 7;
        let ctx = ColemanContext::build(&c, p, 6).unwrap();
        let fd = ctx.frobenius();
        let w = unit_root_subspace(fd).unwrap();
        let wp = annihilator(&w, fd).unwrap();
        let y = Divisor::new([(c.point_i(1, 1).unwrap(), 1), (c.point_i(0, -1).unwrap(), -1)]);
        let z = Divisor::new([(c.point_i(3, 5).unwrap(), 1), (c.point_i(5, -11).unwrap(), -1)]);
        let lhs = ctx.integral_over_divisor(&omega_w(&y, &w, fd).unwrap(), &z, None).unwrap();
        let rhs = ctx.integral_over_divisor(&omega_w(&z, &wp, fd).unwrap(), &y, None).unwrap();
        assert!((lhs - rhs).valuation() >= 4, "{lhs} vs {rhs}");
    }
}
