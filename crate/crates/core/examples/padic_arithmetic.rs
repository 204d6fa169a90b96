// Fixed-precision p-adic numbers: arithmetic, logarithm branches,
// Teichmüller lifts and square roots.

use coleman_gross::padic::{LogBranch, PadicNumber};
use coleman_gross::rational::ratio;

fn main() -> coleman_gross::Result<()> {
    let p = 7;
    let a = PadicNumber::from_rational(p, &ratio(1, 3), 8);
    let b = PadicNumber::from_int(p, 14, 8);
    println!("1/3        = {a}");
    println!("14         = {b}  (valuation {})", b.valuation());
    println!("1/3 + 14   = {}", a + b);
    println!("(1/3) / 14 = {}", a.checked_div(&b)?);

    let iwasawa = LogBranch::iwasawa(p, 8);
    let other = LogBranch::new(PadicNumber::from_int(p, 1, 8));
    println!("log 2  (Iwasawa)     = {}", PadicNumber::from_int(p, 2, 8).log(&iwasawa)?);
    println!("log 14 (Iwasawa)     = {}", b.log(&iwasawa)?);
    println!("log 14 (log 7 = 1)   = {}", b.log(&other)?);

    let three = PadicNumber::from_int(p, 3, 8);
    let w = three.teichmuller()?;
    println!("teich(3)       = {w}");
    println!("teich(3)^6 - 1 = {}", w.pow(6) - PadicNumber::one(p, 8));
    let two = PadicNumber::from_int(p, 2, 8);
    let r = two.sqrt_near(&PadicNumber::from_int(p, 3, 8))?;
    println!("sqrt(2) near 3 = {r}, squared = {}", r * r);
    Ok(())
}
