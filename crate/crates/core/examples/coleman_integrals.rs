// Coleman integrals of holomorphic, exact and third-kind differentials.

use coleman_gross::coleman::ColemanContext;
use coleman_gross::curve::{CurvePoint, Divisor, HyperellipticCurve, ThirdKindForm};
use coleman_gross::rational::rat;

fn main() -> coleman_gross::Result<()> {
    let curve = HyperellipticCurve::parse("x^3 - x + 1")?;
    let p = 7;
    let ctx = ColemanContext::build(&curve, p, 8)?;
    let nw = ctx.frobenius().working_precision();
    let (a, b) = (curve.point_i(1, 1)?, curve.point_i(3, 5)?);

    for i in 0..2 {
        let w = ThirdKindForm::basis(1, i, rat(0)).to_padic(p, nw);
        println!("∫ x^{i} dx/2y from {a} to {b} = {}", ctx.coleman_integral(&w, &a, &b)?);
    }
    let w0 = ThirdKindForm::basis(1, 0, rat(0)).to_padic(p, nw);
    let c = curve.point_i(0, 1)?;
    println!("∫ dx/2y from ∞ to {c} = {}", ctx.coleman_integral(&w0, &CurvePoint::Infinity, &c)?);

    // d(xy) = (5x^3 - 3x + 2) dx/2y integrates to xy
    let exact = ThirdKindForm::holomorphic(1, vec![rat(2), rat(-3), rat(0), rat(5)], rat(0)).to_padic(p, nw);
    println!("∫ d(xy) from {a} to {b} = {}  (expect 14)", ctx.coleman_integral(&exact, &a, &b)?);

    // third kind with residue divisor (0, 1) - (5, -11)
    let res = Divisor::new([(curve.point_i(0, 1)?, 1), (curve.point_i(5, -11)?, -1)]);
    let w = curve.third_kind_with_residue(&res)?.to_padic(p, nw);
    let z = Divisor::new([(a.clone(), 1), (b.clone(), -1)]);
    println!("∫ over {z} of ω with residue divisor {res} = {}", ctx.integral_over_divisor(&w, &z, None)?);
    Ok(())
}
