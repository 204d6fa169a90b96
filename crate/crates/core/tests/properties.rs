//! Randomised invariants.

use std::sync::OnceLock;

use coleman_gross::coleman::ColemanContext;
use coleman_gross::curve::{CurvePoint, Divisor, HyperellipticCurve, ThirdKindForm};
use coleman_gross::padic::{LogBranch, PadicJson, PadicNumber};
use coleman_gross::rational::{format_rational, parse_rational, ratio};
use proptest::prelude::*;

const P: u64 = 7;
const N: i64 = 10;

fn unit() -> impl Strategy<Value = PadicNumber> {
    (1i64..1_000_000).prop_filter("unit", |n| n % P as i64 != 0).prop_map(|n| PadicNumber::from_int(P, n, N))
}

fn any_padic() -> impl Strategy<Value = PadicNumber> {
    (-1_000_000i64..1_000_000, 1i64..50).prop_map(|(n, d)| PadicNumber::from_rational(P, &ratio(n, d * P as i64 + 1), N))
}

fn close(a: &PadicNumber, b: &PadicNumber, digits: i64) -> bool {
    let d = *a - *b;
    d.is_zero() || d.valuation() >= digits
}

struct Fixture {
    curve: HyperellipticCurve,
    ctx: ColemanContext,
    points: Vec<CurvePoint>,
}

fn genus_two() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let curve = HyperellipticCurve::parse("x^5 - 5*x^3 + 4*x + 1").unwrap();
        let ctx = ColemanContext::build(&curve, P, 8).unwrap();
        let points: Vec<CurvePoint> = curve.small_points(40).into_iter().filter(|q| !q.is_infinity()).collect();
        Fixture { curve, ctx, points }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in any_padic(), b in any_padic(), c in any_padic()) {
        prop_assert!(close(&((a + b) - b), &a, N));
        prop_assert!(close(&(a * (b + c)), &(a * b + a * c), N));
        prop_assert!(close(&(a * b), &(b * a), N));
    }

    #[test]
    fn division_inverts_multiplication(a in any_padic(), u in unit()) {
        let q = (a * u).checked_div(&u).unwrap();
        prop_assert!(close(&q, &a, N - 1));
    }

    #[test]
    fn log_is_a_homomorphism(a in unit(), b in unit(), k in 0i64..3) {
        let br = LogBranch::iwasawa(P, N);
        let pk = PadicNumber::from_int(P, (P as i64).pow(k as u32), N);
        let lhs = (a * b * pk).log(&br).unwrap();
        let rhs = a.log(&br).unwrap() + b.log(&br).unwrap();
        prop_assert!(close(&lhs, &rhs, N - 2));
    }

    #[test]
    fn exp_inverts_log_on_principal_units(k in 1i64..10_000) {
        let x = PadicNumber::from_int(P, 1 + P as i64 * k, N);
        let back = x.log(&LogBranch::iwasawa(P, N)).unwrap().exp().unwrap();
        prop_assert!(close(&back, &x, N - 2));
    }

    #[test]
    fn padic_json_round_trips(a in any_padic()) {
        let j = PadicJson::from(&a);
        prop_assert!(j.to_padic(P).unwrap().equals(&a));
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let q = ratio(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn divisor_json_round_trips(ms in proptest::collection::vec((-3i64..4, 0usize..6), 0..5)) {
        let pts = genus_two().points.clone();
        let d = Divisor::new(ms.iter().map(|(m, i)| (pts[i % pts.len()].clone(), *m)));
        prop_assert_eq!(Divisor::from_json(&d.to_json()).unwrap(), d.clone());
        prop_assert!(d.add(&d.neg()).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coleman_integrals_are_additive_and_antisymmetric(
        i in 0usize..4, a in 0usize..64, b in 0usize..64, c in 0usize..64,
    ) {
        let f = genus_two();
        let n = f.points.len();
        let (pa, pb, pc) = (&f.points[a % n], &f.points[b % n], &f.points[c % n]);
        let nw = f.ctx.frobenius().working_precision();
        let w = ThirdKindForm::basis(2, i, coleman_gross::rational::rat(0)).to_padic(P, nw);
        let ab = f.ctx.coleman_integral(&w, pa, pb).unwrap();
        let ba = f.ctx.coleman_integral(&w, pb, pa).unwrap();
        let ac = f.ctx.coleman_integral(&w, pa, pc).unwrap();
        let cb = f.ctx.coleman_integral(&w, pc, pb).unwrap();
        prop_assert!(close(&(ab + ba), &PadicNumber::zero(P, nw), 6));
        prop_assert!(close(&ab, &(ac + cb), 6));
    }

    #[test]
    fn integrals_from_infinity_are_odd(i in 0usize..2, a in 0usize..64) {
        let f = genus_two();
        let pt = &f.points[a % f.points.len()];
        let nw = f.ctx.frobenius().working_precision();
        let w = ThirdKindForm::basis(2, i, coleman_gross::rational::rat(0)).to_padic(P, nw);
        let v = f.ctx.coleman_integral(&w, &CurvePoint::Infinity, pt).unwrap();
        let u = f.ctx.coleman_integral(&w, &CurvePoint::Infinity, &pt.opposite()).unwrap();
        prop_assert!(close(&(v + u), &PadicNumber::zero(P, nw), 6));
        prop_assert!(f.curve.check_point(pt).is_ok());
    }
}
