//! Checks against values computed independently of the library: point
//! counts, truncated series, torsion points and exact differentials.

use coleman_gross::coleman::ColemanContext;
use coleman_gross::curve::{CurvePoint, HyperellipticCurve, ThirdKindForm};
use coleman_gross::padic::{LogBranch, PadicNumber};
use coleman_gross::rational::{rat, ratio};
use coleman_gross::rigidcoh::FrobeniusData;
use num_bigint::BigInt;
use num_rational::BigRational;

fn close(a: &PadicNumber, b: &PadicNumber, digits: i64) -> bool {
    let d = *a - *b;
    d.is_zero() || d.valuation() >= digits
}

/// a_p from a brute-force count done outside this crate.
#[test]
fn frobenius_trace_matches_independent_counts() {
    let table: [(&str, [(u64, i64); 4]); 2] = [
        ("x^3 - x + 1", [(5, -2), (7, -4), (11, 2), (13, -5)]),
        ("x^3 - 11*x + 15", [(5, -2), (7, -4), (11, 0), (13, -1)]),
    ];
    for (f, rows) in table {
        let c = HyperellipticCurve::parse(f).unwrap();
        for (p, ap) in rows {
            let chi = FrobeniusData::new(&c, p, 6).unwrap().char_poly_integers().unwrap();
            let want: Vec<BigInt> = vec![(p as i64).into(), (-ap).into(), 1.into()];
            assert_eq!(chi, want, "{f} at {p}");
        }
    }
}

#[test]
fn log_matches_truncated_series() {
    // log(1 + p) = sum (-1)^(k+1) p^k / k
    for p in [5u64, 7, 11] {
        let n = 12;
        let mut s = BigRational::from_integer(0.into());
        let mut pk = BigRational::from_integer(1.into());
        for k in 1..60i64 {
            pk *= BigRational::from_integer((p as i64).into());
            let term = pk.clone() / BigRational::from_integer(k.into());
            if k % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        let want = PadicNumber::from_rational(p, &s, n);
        let got = PadicNumber::from_int(p, 1 + p as i64, n).log(&LogBranch::iwasawa(p, n)).unwrap();
        assert!(close(&got, &want, n), "p = {p}: {got} vs {want}");
    }
}

#[test]
fn holomorphic_integrals_vanish_on_torsion() {
    // y^2 = x^3 + 1 has E(Q) = Z/6 generated by (2, 3)
    let c = HyperellipticCurve::parse("x^3 + 1").unwrap();
    for p in [7u64, 13] {
        let ctx = ColemanContext::build(&c, p, 8).unwrap();
        let w = ThirdKindForm::basis(1, 0, rat(0)).to_padic(p, ctx.frobenius().working_precision());
        for (x, y) in [(2, 3), (0, 1), (0, -1), (2, -3)] {
            let v = ctx.coleman_integral(&w, &CurvePoint::Infinity, &c.point_i(x, y).unwrap()).unwrap();
            assert!(close(&v, &PadicNumber::zero(p, 8), 6), "p = {p}, ({x}, {y}): {v}");
        }
    }
    // (0, 1) - ∞ is 5-torsion on the Jacobian of y^2 = x^5 + 1
    let c = HyperellipticCurve::parse("x^5 + 1").unwrap();
    let p = 11;
    let ctx = ColemanContext::build(&c, p, 8).unwrap();
    for i in 0..2 {
        let w = ThirdKindForm::basis(2, i, rat(0)).to_padic(p, ctx.frobenius().working_precision());
        let v = ctx.coleman_integral(&w, &CurvePoint::Infinity, &c.point_i(0, 1).unwrap()).unwrap();
        assert!(close(&v, &PadicNumber::zero(p, 8), 6), "ω_{i}: {v}");
    }
}

#[test]
fn exact_differentials_integrate_to_function_differences() {
    // d(x^2 y) = (4 x f + x^2 f') dx/2y = (9x^6 - 35x^4 + 20x^2 + 4x) dx/2y
    let c = HyperellipticCurve::parse("x^5 - 5*x^3 + 4*x + 1").unwrap();
    let p = 7;
    let ctx = ColemanContext::build(&c, p, 8).unwrap();
    let nw = ctx.frobenius().working_precision();
    let odd = vec![rat(0), rat(4), rat(20), rat(0), rat(-35), rat(0), rat(9)];
    let w = ThirdKindForm::holomorphic(2, odd, rat(0)).to_padic(p, nw);
    let (a, b) = (c.point_i(1, 1).unwrap(), c.point_i(3, 11).unwrap());
    let got = ctx.coleman_integral(&w, &a, &b).unwrap();
    let want = PadicNumber::from_int(p, 9 * 11 - 1, nw);
    assert!(close(&got, &want, 6), "{got}");
}

#[test]
fn teichmuller_and_rational_embedding() {
    let p = 11;
    for a in 1..p as i64 {
        let t = PadicNumber::from_int(p, a, 10).teichmuller().unwrap();
        assert!(close(&t.pow(p - 1), &PadicNumber::one(p, 10), 10));
        assert_eq!(t.residue(), Some(a as u64));
    }
    // 1/3 * 3 = 1 and -1/2 has 2-adic-free expansion (p - 1)/2 + ...
    let third = PadicNumber::from_rational(p, &ratio(1, 3), 10);
    assert!(close(&(third * PadicNumber::from_int(p, 3, 10)), &PadicNumber::one(p, 10), 10));
    let half = PadicNumber::from_rational(p, &ratio(-1, 2), 10);
    assert_eq!(half.digits(), vec![5; 10]);
}
