//! Coleman integration of odd differentials and forms of the third kind.
//!
//! Every integral is computed as a difference `V(Q) - V(P)` of a primitive
//! `V` normalised by `V(ι P) = -V(P)` on the odd part; in particular
//! `V(∞) = 0` and `V` vanishes at every Weierstrass point. At a
//! Frobenius-fixed point `P'` the values `A_i(P') = V_{ω_i}(P')` solve
//! `(I - M) A = h(P')`; elsewhere a tiny integral is added.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::curve::{local_coordinates, CurvePoint, DiskKind, HyperellipticCurve, LocalCenter, LocalPoint, ResidueDisk, ThirdKindForm};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::padic::{ilog, LogBranch, PadicNumber};
use crate::poly::{PPoly, Series, INF_ORDER};
use crate::rational::{format_rational, reduce_mod, Rational};
use crate::rigidcoh::FrobeniusData;

/// A Frobenius-fixed base point of an ordinary residue disk, with the
/// values `A_i` of the basis primitives there.
#[derive(Clone, Debug)]
struct Anchor {
    x: PadicNumber,
    y: PadicNumber,
    values: Vec<PadicNumber>,
}

/// Curve, Frobenius structure and log branch for Coleman integration.
#[derive(Debug)]
pub struct ColemanContext {
    fd: FrobeniusData,
    branch: LogBranch,
    f: PPoly,
    i_minus_m: Matrix<PadicNumber>,
    anchors: Mutex<BTreeMap<ResidueDisk, Arc<Anchor>>>,
}

impl ColemanContext {
    pub fn new(fd: FrobeniusData, branch: LogBranch) -> Result<Self> {
        if branch.constant().prime() != fd.p() {
            return Err(Error::PrimeMismatch(branch.constant().prime(), fd.p()));
        }
        let f = fd.curve().f().to_padic(fd.p(), fd.working_precision());
        let zero = fd.zero();
        let n = 2 * fd.genus();
        let i_minus_m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { PadicNumber::one(fd.p(), zero.precision()) } else { zero };
                        d - fd.matrix()[i][j]
                    })
                    .collect()
            })
            .collect();
        Ok(ColemanContext { fd, branch, f, i_minus_m, anchors: Mutex::new(BTreeMap::new()) })
    }

    /// Builds the Frobenius data and uses the Iwasawa branch.
    pub fn build(curve: &HyperellipticCurve, p: u64, n: i64) -> Result<Self> {
        let fd = FrobeniusData::new(curve, p, n)?;
        let branch = LogBranch::iwasawa(p, fd.working_precision());
        Self::new(fd, branch)
    }

    pub fn frobenius(&self) -> &FrobeniusData {
        &self.fd
    }

    pub fn curve(&self) -> &HyperellipticCurve {
        self.fd.curve()
    }

    pub fn p(&self) -> u64 {
        self.fd.p()
    }

    pub fn branch(&self) -> &LogBranch {
        &self.branch
    }

    pub fn genus(&self) -> usize {
        self.fd.genus()
    }

    fn prec(&self) -> i64 {
        self.fd.working_precision()
    }

    fn zero(&self) -> PadicNumber {
        self.fd.zero()
    }

    fn exact(&self, q: &Rational) -> PadicNumber {
        PadicNumber::from_rational(self.p(), q, i64::MAX / 4)
    }

    /// Series order for local expansions: `t^m / m` is negligible once
    /// `m - log_p(m)` exceeds the working precision.
    fn order(&self) -> i64 {
        let n = self.prec();
        n + ilog(self.p(), 2 * n) + 3
    }

    /// The point at working precision.
    pub fn local_point(&self, pt: &CurvePoint) -> Result<LocalPoint> {
        self.curve().check_point(pt)?;
        LocalPoint::from_point(pt, self.p(), self.prec())
    }

    /// The residue disk of a curve point.
    pub fn disk(&self, pt: &CurvePoint) -> Result<ResidueDisk> {
        self.curve().reduce_point(pt, self.p())
    }

    /// The root of `f` in the Weierstrass disk over `xbar`.
    fn weierstrass_root(&self, xbar: u64) -> Result<PadicNumber> {
        let df = self.f.derivative();
        let mut e = PadicNumber::from_int(self.p(), xbar as i64, self.prec());
        for _ in 0..64 {
            let step = self.f.eval(&e).checked_div(&df.eval(&e))?;
            e = e - step;
            if step.is_zero() {
                break;
            }
        }
        Ok(e)
    }

    /// Frobenius-fixed point of an ordinary disk and the basis values there.
    fn anchor(&self, disk: ResidueDisk) -> Result<Arc<Anchor>> {
        if let Some(a) = self.anchors.lock().expect("anchor cache").get(&disk) {
            return Ok(a.clone());
        }
        let (xb, yb) = disk.center.expect("ordinary disk");
        let xr = PadicNumber::from_int(self.p(), xb as i64, self.prec());
        let x = if xb == 0 { self.zero() } else { xr.teichmuller()? };
        let y = self.f.eval(&x).sqrt_near(&PadicNumber::from_int(self.p(), yb as i64, self.prec()))?;
        let h: Vec<PadicNumber> =
            (0..2 * self.genus()).map(|i| self.fd.exact_part(i).eval(&x, &y)).collect::<Result<_>>()?;
        let values = linalg::solve(&self.i_minus_m, &h)?;
        let a = Arc::new(Anchor { x, y, values });
        self.anchors.lock().expect("anchor cache").insert(disk, a.clone());
        Ok(a)
    }

    /// Local parametrisation of a disk: center and the parameter value at `pt`.
    fn chart(&self, disk: ResidueDisk, pt: &LocalPoint) -> Result<(LocalCenter<PadicNumber>, PadicNumber)> {
        match (disk.kind, pt) {
            (DiskKind::Infinity, LocalPoint::Infinity) => Ok((LocalCenter::Infinity, self.zero())),
            (DiskKind::Infinity, LocalPoint::Affine { x, y }) => {
                let t = x.pow(self.genus() as u64).checked_div(y)?;
                Ok((LocalCenter::Infinity, t))
            }
            (DiskKind::Weierstrass, LocalPoint::Affine { y, .. }) => {
                let e = self.weierstrass_root(disk.center.expect("finite disk").0)?;
                Ok((LocalCenter::Weierstrass { x: e }, *y))
            }
            (DiskKind::Ordinary, LocalPoint::Affine { x, .. }) => {
                let a = self.anchor(disk)?;
                Ok((LocalCenter::Ordinary { x: a.x, y: a.y }, *x - a.x))
            }
            _ => Err(Error::DegenerateInput("point does not lie in the given disk".into())),
        }
    }

    fn coordinates(&self, center: &LocalCenter<PadicNumber>) -> Result<(Series<PadicNumber>, Series<PadicNumber>)> {
        local_coordinates(&self.f, center, self.order() + 2)
    }

    /// `∫ g(t) dt` from `0` to `t` for integrands regular at the center
    /// except for residue-free poles.
    fn primitive_at(&self, g: &Series<PadicNumber>, t: &PadicNumber) -> Result<PadicNumber> {
        let (big_g, r) = g.truncate(self.order()).integrate_with_log()?;
        if !r.is_zero() {
            return Err(Error::EndpointAtPole("integrand has a residue at the expansion center".into()));
        }
        if t.is_zero() {
            if big_g.valuation().is_some_and(|v| v < 0) {
                return Err(Error::EndpointAtPole("endpoint at a pole of the integrand".into()));
            }
            return Ok(self.zero());
        }
        big_g.eval(t)
    }

    fn basis_expansions(&self, x: &Series<PadicNumber>, y: &Series<PadicNumber>) -> Result<Vec<Series<PadicNumber>>> {
        (0..2 * self.genus()).map(|i| ThirdKindForm::basis(self.genus(), i, self.zero()).laurent(x, y)).collect()
    }

    fn nu_expansion(&self, a: &Rational, x: &Series<PadicNumber>, y: &Series<PadicNumber>) -> Result<Series<PadicNumber>> {
        let ca = Series::constant(self.exact(a), INF_ORDER);
        let two_y = y.scale(&PadicNumber::from_int(self.p(), 2, i64::MAX / 4));
        Ok(&x.derivative() * &(&(x - &ca) * &two_y).inverse()?)
    }

    /// `A_i(P) = ∫_∞^P ω_i` for the basis forms.
    pub fn basis_values(&self, pt: &LocalPoint) -> Result<Vec<PadicNumber>> {
        let disk = pt.disk()?;
        let (center, t) = self.chart(disk, pt)?;
        let (x, y) = self.coordinates(&center)?;
        let base = match disk.kind {
            DiskKind::Ordinary => self.anchor(disk)?.values.clone(),
            _ => vec![self.zero(); 2 * self.genus()],
        };
        self.basis_expansions(&x, &y)?
            .iter()
            .zip(base)
            .map(|(g, b)| Ok(b + self.primitive_at(g, &t)?))
            .collect()
    }

    /// `∫_∞^P ν_a` with `ν_a = dx/((x - a) 2y)`, for `P` outside the disks
    /// `x ≡ a`.
    pub fn nu_value(&self, a: &Rational, pt: &LocalPoint) -> Result<PadicNumber> {
        let disk = pt.disk()?;
        if let (DiskKind::Ordinary | DiskKind::Weierstrass, Some((xb, _))) = (disk.kind, disk.center) {
            if reduce_mod(a, self.p()) == Some(xb) {
                return Err(Error::SingularDiskEndpoint(format!(
                    "endpoint shares the residue disk x = {xb} with the pole x = {}",
                    format_rational(a)
                )));
            }
        }
        if disk.kind != DiskKind::Ordinary {
            let (center, t) = self.chart(disk, pt)?;
            let (x, y) = self.coordinates(&center)?;
            return self.primitive_at(&self.nu_expansion(a, &x, &y)?, &t);
        }
        let LocalPoint::Affine { x: xp, y: yp } = *pt else { unreachable!("ordinary disk") };
        let pf = self.fd.pole(a)?;
        let ap = self.exact(a);
        // Frobenius-fixed point for the lift x - a -> (x - a)^p
        let u = (xp - ap).teichmuller()?;
        let xpp = ap + u;
        let ypp = self.f.eval(&xpp).sqrt_near(&yp)?;
        let fixed = LocalPoint::Affine { x: xpp, y: ypp };
        let a_vals = self.basis_values(&fixed)?;
        let zero = self.zero();
        let mut acc = pf.h.eval(&u, &ypp)?;
        for (j, cj) in pf.coords.iter().enumerate() {
            let aj = pf.transform[j].iter().zip(&a_vals).fold(zero, |s, (t, v)| s + *t * *v);
            acc = acc + *cj * aj;
        }
        let one = PadicNumber::one(self.p(), i64::MAX / 4);
        let at_fixed = acc.checked_div(&(one - pf.big_c))?;
        let center = LocalCenter::Ordinary { x: xpp, y: ypp };
        let (x, y) = self.coordinates(&center)?;
        Ok(at_fixed + self.primitive_at(&self.nu_expansion(a, &x, &y)?, &(xp - xpp))?)
    }

    fn log(&self, z: PadicNumber) -> Result<PadicNumber> {
        if z.is_zero() {
            return Err(Error::EndpointAtPole("logarithm of zero".into()));
        }
        z.log(&self.branch)
    }

    /// Residue disks in which `ω` is singular (or, for pole blocks, whose
    /// `x`-reduction meets a pole), with the infinite disk last.
    fn check_endpoint(&self, w: &ThirdKindForm<PadicNumber>, pt: &CurvePoint, disk: ResidueDisk) -> Result<()> {
        let at_inf: i64 = w.poles.iter().map(|t| t.weight).sum::<i64>() + 2 * w.dlogs.iter().map(|t| t.weight).sum::<i64>();
        if disk.kind == DiskKind::Infinity && at_inf != 0 {
            return Err(Error::SingularDiskEndpoint(format!("{pt} lies in the disk at infinity, where the form has a pole")));
        }
        let Some((xb, _)) = disk.center else { return Ok(()) };
        let singular = w
            .poles
            .iter()
            .filter(|t| t.weight != 0)
            .map(|t| &t.x)
            .chain(w.dlogs.iter().filter(|t| t.weight != 0).map(|t| &t.root));
        for a in singular {
            if reduce_mod(a, self.p()) == Some(xb) {
                return Err(Error::SingularDiskEndpoint(format!(
                    "{pt} lies in a residue disk x = {xb} of a pole at x = {}",
                    format_rational(a)
                )));
            }
        }
        Ok(())
    }

    /// The primitive `V(P)` of `ω`; differences give Coleman integrals.
    pub fn primitive(&self, w: &ThirdKindForm<PadicNumber>, pt: &CurvePoint) -> Result<PadicNumber> {
        let disk = self.disk(pt)?;
        self.check_endpoint(w, pt, disk)?;
        let lp = self.local_point(pt)?;
        let (coords, r) = self.fd.reduce_odd(&w.odd)?;
        let mut acc = self.zero();
        let g = self.genus();
        if lp == LocalPoint::Infinity {
            // V(∞) = 0 for forms regular there; ω_i with i >= g have poles
            if coords[g..].iter().any(|c| !c.is_zero()) {
                return Err(Error::EndpointAtPole("the form has a pole at infinity".into()));
            }
        } else if coords.iter().any(|c| !c.is_zero()) {
            let vals = self.basis_values(&lp)?;
            acc = coords.iter().zip(&vals).fold(acc, |s, (c, v)| s + *c * *v);
        }
        let r_nonzero = r.coeffs().iter().any(|c| !c.is_zero());
        match lp {
            LocalPoint::Infinity => {
                if r_nonzero {
                    return Err(Error::EndpointAtPole("the exact part y R(x) has a pole at infinity".into()));
                }
                // even parts: log of a function equal to 1 at infinity
                for t in w.poles.iter().filter(|t| t.weight != 0) {
                    acc = acc + self.exact(&t.y).scale_int(t.weight) * self.nu_value(&t.x, &lp)?;
                }
            }
            LocalPoint::Affine { x, y } => {
                if r_nonzero {
                    acc = acc + y * r.eval(&x);
                }
                let half = PadicNumber::from_int(self.p(), 2, i64::MAX / 4).inv()?;
                for t in w.poles.iter().filter(|t| t.weight != 0) {
                    let ap = self.exact(&t.x);
                    let nu = self.nu_value(&t.x, &lp)?;
                    let lg = self.log(x - ap)?;
                    acc = acc + (self.exact(&t.y) * nu + half * lg).scale_int(t.weight);
                }
                for t in w.dlogs.iter().filter(|t| t.weight != 0) {
                    acc = acc + self.log(x - self.exact(&t.root))?.scale_int(t.weight);
                }
            }
        }
        Ok(acc)
    }

    /// `∫_P^Q ω`.
    pub fn coleman_integral(&self, w: &ThirdKindForm<PadicNumber>, p: &CurvePoint, q: &CurvePoint) -> Result<PadicNumber> {
        if p == q {
            self.check_endpoint(w, p, self.disk(p)?)?;
            return Ok(self.zero());
        }
        Ok(self.primitive(w, q)? - self.primitive(w, p)?)
    }

    /// `sum n_i ∫_B^{P_i} ω` for `D = sum n_i P_i` of degree zero; the base
    /// point `B` defaults to the normalisation point of the primitive.
    pub fn integral_over_divisor(
        &self,
        w: &ThirdKindForm<PadicNumber>,
        d: &crate::curve::Divisor,
        base: Option<&CurvePoint>,
    ) -> Result<PadicNumber> {
        if d.degree() != 0 {
            return Err(Error::DegreeNotZero(d.degree()));
        }
        let offset = match base {
            Some(b) => self.primitive(w, b)?,
            None => self.zero(),
        };
        let mut acc = self.zero();
        for (pt, n) in d.terms() {
            acc = acc + (self.primitive(w, pt)? - offset).scale_int(*n);
        }
        Ok(acc)
    }

    /// Integral inside one residue disk by expanding around a center of the
    /// disk: the singular point of `ω` there if any, else `P`. A pole at the
    /// center contributes `res * log(t(Q)/t(P))`.
    pub fn tiny_integral(&self, w: &ThirdKindForm<PadicNumber>, p: &CurvePoint, q: &CurvePoint) -> Result<PadicNumber> {
        let (dp, dq) = (self.disk(p)?, self.disk(q)?);
        if dp != dq {
            return Err(Error::DifferentDisks(format!("{dp} and {dq}")));
        }
        if p == q {
            return Ok(self.zero());
        }
        let (lp, lq) = (self.local_point(p)?, self.local_point(q)?);
        let center = self.tiny_center(w, dp, &lp)?;
        let (x, y) = self.coordinates(&center)?;
        let g = w.laurent(&x, &y)?.truncate(self.order());
        let (big_g, res) = g.integrate_with_log()?;
        let tp = self.parameter(&center, &lp)?;
        let tq = self.parameter(&center, &lq)?;
        let mut value = self.eval_primitive(&big_g, &tq)? - self.eval_primitive(&big_g, &tp)?;
        if !res.is_zero() {
            value = value + res * (self.log(tq)? - self.log(tp)?);
        }
        Ok(value)
    }

    fn eval_primitive(&self, big_g: &Series<PadicNumber>, t: &PadicNumber) -> Result<PadicNumber> {
        if t.is_zero() {
            if big_g.valuation().is_some_and(|v| v < 0) {
                return Err(Error::EndpointAtPole("endpoint at a pole of the integrand".into()));
            }
            return Ok(self.zero());
        }
        big_g.eval(t)
    }

    fn tiny_center(&self, w: &ThirdKindForm<PadicNumber>, disk: ResidueDisk, lp: &LocalPoint) -> Result<LocalCenter<PadicNumber>> {
        let p = self.p();
        let in_disk = |x: &Rational, y: &Rational| {
            disk.center.is_some_and(|(xb, yb)| reduce_mod(x, p) == Some(xb) && reduce_mod(y, p) == Some(yb))
        };
        let mut singular: Vec<LocalCenter<PadicNumber>> = Vec::new();
        for t in w.poles.iter().filter(|t| t.weight != 0) {
            if in_disk(&t.x, &t.y) {
                singular.push(LocalCenter::Ordinary { x: self.exact(&t.x), y: self.exact(&t.y) });
            }
            if in_disk(&t.x, &-t.y.clone()) {
                // the even and odd halves are singular at the conjugate too
                singular.push(LocalCenter::Ordinary { x: self.exact(&t.x), y: -self.exact(&t.y) });
            }
        }
        let zero_y = Rational::from_integer(0.into());
        for t in w.dlogs.iter().filter(|t| t.weight != 0) {
            if in_disk(&t.root, &zero_y) {
                singular.push(LocalCenter::Weierstrass { x: self.exact(&t.root) });
            }
        }
        singular.dedup();
        match (singular.len(), disk.kind) {
            (0, DiskKind::Ordinary) => match lp {
                LocalPoint::Affine { x, y } => Ok(LocalCenter::Ordinary { x: *x, y: *y }),
                LocalPoint::Infinity => unreachable!("ordinary disk"),
            },
            (0, DiskKind::Weierstrass) => Ok(LocalCenter::Weierstrass {
                x: self.weierstrass_root(disk.center.expect("finite disk").0)?,
            }),
            (_, DiskKind::Infinity) => Ok(LocalCenter::Infinity),
            (1, _) => Ok(singular.pop().expect("one center")),
            _ => Err(Error::UnsupportedSupport("several poles of the form in one residue disk".into())),
        }
    }

    fn parameter(&self, center: &LocalCenter<PadicNumber>, lp: &LocalPoint) -> Result<PadicNumber> {
        match (center, lp) {
            (LocalCenter::Infinity, LocalPoint::Infinity) => Ok(self.zero()),
            (LocalCenter::Infinity, LocalPoint::Affine { x, y }) => x.pow(self.genus() as u64).checked_div(y),
            (LocalCenter::Weierstrass { .. }, LocalPoint::Affine { y, .. }) => Ok(*y),
            (LocalCenter::Ordinary { x: x0, .. }, LocalPoint::Affine { x, .. }) => Ok(*x - *x0),
            _ => Err(Error::DegenerateInput("point does not lie in the chart".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Divisor;
    use crate::rational::rat;

    fn e1() -> HyperellipticCurve {
        HyperellipticCurve::from_ints(&[1, -1, 0, 1]).unwrap()
    }

    fn ctx(c: &HyperellipticCurve, p: u64, n: i64) -> ColemanContext {
        ColemanContext::build(c, p, n).unwrap()
    }

    fn close(a: &PadicNumber, b: &PadicNumber, digits: i64) -> bool {
        (*a - *b).valuation() >= digits
    }

    #[test]
    fn anchor_values_are_odd() {
        let c = e1();
        let cx = ctx(&c, 5, 6);
        let p = c.point_i(1, 1).unwrap();
        let w0 = ThirdKindForm::basis(1, 0, cx.zero());
        let v = cx.primitive(&w0, &p).unwrap();
        let vm = cx.primitive(&w0, &p.opposite()).unwrap();
        assert!(close(&(v + vm), &cx.zero(), 5), "{v} {vm}");
    }

    #[test]
    fn exact_odd_forms_integrate_to_differences() {
        // d(x y) = (2 f + x f') dx/2y
        let c = e1();
        let cx = ctx(&c, 7, 6);
        let f = c.f();
        let form = &f.scale(&rat(2)) + &(&crate::poly::QPoly::x(rat(0)) * &f.derivative());
        let w = ThirdKindForm::holomorphic(1, form.coeffs().to_vec(), rat(0)).to_padic(7, cx.prec());
        let (p, q) = (c.point_i(1, 1).unwrap(), c.point_i(3, 5).unwrap());
        let got = cx.coleman_integral(&w, &p, &q).unwrap();
        let want = PadicNumber::from_int(7, 3 * 5 - 1, 20);
        assert!(close(&got, &want, 5), "{got}");
    }

    #[test]
    fn agrees_with_tiny_integral_in_one_disk() {
        let c = e1();
        let cx = ctx(&c, 5, 6);
        // (1, 1) and (1, -1) + 5 k ... use two points of the same disk mod 5
        let pts = c.small_points(60);
        let mut pair = None;
        'outer: for a in &pts {
            for b in &pts {
                if a != b && !a.is_infinity() && cx.disk(a).unwrap() == cx.disk(b).unwrap() {
                    pair = Some((a.clone(), b.clone()));
                    break 'outer;
                }
            }
        }
        let (a, b) = pair.expect("two points in one disk");
        for i in 0..2 {
            let w = ThirdKindForm::basis(1, i, cx.zero());
            let big = cx.coleman_integral(&w, &a, &b).unwrap();
            let tiny = cx.tiny_integral(&w, &a, &b).unwrap();
            assert!(close(&big, &tiny, 5), "{big} vs {tiny}");
        }
    }

    #[test]
    fn dlog_integral_is_log_ratio() {
        // pole blocks at (a, b) and (a, -b) sum to dlog(x - a)
        let c = e1();
        let cx = ctx(&c, 5, 6);
        let pa = c.point_i(1, 1).unwrap();
        let d = Divisor::new([(pa.clone(), 1), (pa.opposite(), 1), (CurvePoint::Infinity, -2)]);
        let w = c.third_kind_with_residue(&d).unwrap().to_padic(5, cx.prec());
        let (q1, q2) = (c.point_i(0, 1).unwrap(), c.point_i(5, 11).unwrap());
        let got = cx.coleman_integral(&w, &q1, &q2).unwrap();
        let br = *cx.branch();
        let want = PadicNumber::from_int(5, 4, 20).log(&br).unwrap() - PadicNumber::from_int(5, -1, 20).log(&br).unwrap();
        assert!(close(&got, &want, 5), "{got} vs {want}");
    }

    fn double(x: &Rational, y: &Rational, a: i64) -> (Rational, Rational) {
        let l = (x * x * rat(3) + rat(a)) / (y * rat(2));
        let x2 = &l * &l - x * rat(2);
        let y2 = l * (x - &x2) - y;
        (x2, y2)
    }

    #[test]
    fn doubling_functoriality() {
        let c = e1();
        let cx = ctx(&c, 7, 6);
        let w0 = ThirdKindForm::basis(1, 0, cx.zero());
        for (x, y) in [(1, 1), (3, 5), (0, 1)] {
            let (x2, y2) = double(&rat(x), &rat(y), -1);
            let p = c.point_i(x, y).unwrap();
            let q = c.point(x2, y2).unwrap();
            let one = cx.coleman_integral(&w0, &CurvePoint::Infinity, &p).unwrap();
            let two = cx.coleman_integral(&w0, &CurvePoint::Infinity, &q).unwrap();
            assert!(close(&two, &one.scale_int(2), 5), "P = ({x}, {y}): {two} vs 2 * {one}");
        }
    }

    #[test]
    fn rejects_endpoints_in_pole_disks() {
        let c = e1();
        let cx = ctx(&c, 5, 6);
        let d = Divisor::new([(c.point_i(1, 1).unwrap(), 1), (c.point_i(0, 1).unwrap(), -1)]);
        let w = c.third_kind_with_residue(&d).unwrap().to_padic(5, cx.prec());
        let r = cx.primitive(&w, &c.point_i(1, -1).unwrap());
        assert!(matches!(r, Err(Error::SingularDiskEndpoint(_))));
    }

    #[test]
    fn reciprocity_for_vertical_functions() {
        // ∫_{div(x - a)} ω = sum_P Res_P(ω) log(x(P) - a)
        let c = e1();
        for p in [7u64, 11] {
            let cx = ctx(&c, p, 6);
            let (r1, r2) = (c.point_i(1, 1).unwrap(), c.point_i(3, -5).unwrap());
            let w = c.third_kind_with_residue(&Divisor::new([(r1, 1), (r2, -1)])).unwrap().to_padic(p, cx.prec());
            let a = 0;
            let div_f = Divisor::new([
                (c.point_i(a, 1).unwrap(), 1),
                (c.point_i(a, -1).unwrap(), 1),
                (CurvePoint::Infinity, -2),
            ]);
            let lhs = cx.integral_over_divisor(&w, &div_f, None).unwrap();
            let br = *cx.branch();
            let rhs = PadicNumber::from_int(p, 1 - a, 20).log(&br).unwrap() - PadicNumber::from_int(p, 3 - a, 20).log(&br).unwrap();
            assert!(close(&lhs, &rhs, 5), "p = {p}: {lhs} vs {rhs}");
        }
    }
}
