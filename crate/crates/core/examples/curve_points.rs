// Curves, rational points, residue disks and intersection multiplicities
// at primes of good reduction.

use coleman_gross::curve::HyperellipticCurve;
use coleman_gross::heights::{contact_primes, divisor_of_x_ratio, intersection_multiplicity};
use coleman_gross::rational::rat;

fn main() -> coleman_gross::Result<()> {
    let curve = HyperellipticCurve::parse("x^3 - 11*x + 15")?;
    println!("{curve}: genus {}, discriminant {}, bad primes {:?}", curve.genus(), curve.discriminant(), curve.bad_primes());
    let pts = curve.small_points(40);
    for pt in &pts {
        println!("  {pt} reduces mod 5 to {}", curve.reduce_point(pt, 5)?);
    }
    let (a, b) = (curve.point_i(2, 1)?, curve.point_i(11, -35)?);
    println!("{a} and {b} meet at primes {:?}", contact_primes(&a, &b)?);
    for q in [3, 5, 7] {
        println!("  i_{q} = {}", intersection_multiplicity(&curve, &a, &b, q)?);
    }
    println!("div((x + 1)/(x - 3)) = {}", divisor_of_x_ratio(&curve, &rat(-1), &rat(3))?);
    Ok(())
}
