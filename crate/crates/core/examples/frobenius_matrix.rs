// Frobenius on H^1_dR by Kedlaya's algorithm, checked against point
// counts, and the unit-root subspace.

use coleman_gross::curve::HyperellipticCurve;
use coleman_gross::rigidcoh::{unit_root_subspace, weil, FrobeniusData};

fn main() -> coleman_gross::Result<()> {
    for (f, p) in [("x^3 - x + 1", 5), ("x^5 - 5*x^3 + 4*x + 1", 7)] {
        let curve = HyperellipticCurve::parse(f)?;
        let fd = FrobeniusData::new(&curve, p, 8)?;
        println!("{curve} at p = {p}: working precision {}, loss {}", fd.working_precision(), fd.loss());
        for row in fd.matrix() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
        println!("  char poly from Frobenius : {:?}", fd.char_poly_integers()?);
        println!("  char poly from counts    : {:?}", weil::weil_polynomial_from_counts(&curve, p)?);
        let w = unit_root_subspace(&fd)?;
        println!("  unit-root subspace has dimension {}", w.dim());
    }
    Ok(())
}
