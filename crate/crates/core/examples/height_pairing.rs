// Global Coleman-Gross height of two divisors on a genus two curve, with
// its local decomposition and the symmetry under W ↔ W^⊥.

use coleman_gross::coleman::ColemanContext;
use coleman_gross::curve::{Divisor, HyperellipticCurve};
use coleman_gross::heights::{global_height, IdeleCharacter};
use coleman_gross::rigidcoh::{annihilator, unit_root_subspace};

fn main() -> coleman_gross::Result<()> {
    let curve = HyperellipticCurve::parse("x^5 - 5*x^3 + 4*x + 1")?;
    let p = 7;
    let ctx = ColemanContext::build(&curve, p, 8)?;
    let fd = ctx.frobenius();
    let chi = IdeleCharacter::canonical(p, fd.working_precision());
    let y = Divisor::new([(curve.point_i(0, 1)?, 1), (curve.point_i(2, 1)?, -1)]);
    let z = Divisor::new([(curve.point_i(1, 1)?, 1), (curve.point_i(3, 11)?, -1)]);

    let w = unit_root_subspace(fd)?;
    let h = global_height(&y, &z, &w, &chi, &ctx)?;
    for (q, v) in &h.local_terms {
        println!("h_{q}(y, z) = {v}");
    }
    println!("h(y, z)   = {}", h.total);

    // swapping the arguments requires the complementary subspace
    let h_swapped = global_height(&z, &y, &annihilator(&w, fd)?, &chi, &ctx)?;
    println!("h(z, y) with W^⊥ = {}", h_swapped.total);
    println!("difference has valuation {}", (h.total - h_swapped.total).valuation());
    println!("{}", serde_json::to_string_pretty(&h.to_json()).expect("serialisable"));
    Ok(())
}
