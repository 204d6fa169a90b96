// Idele class characters: the canonical one, scaling, and the validation
// that rejects characters not trivial on Q^×.

use coleman_gross::heights::{validate_character, IdeleCharacter};
use coleman_gross::padic::{LogBranch, PadicNumber};

fn main() {
    let p = 5;
    let chi = IdeleCharacter::canonical(p, 8);
    println!("canonical: {:?}", validate_character(&chi).map(|r| r.residuals));

    let scaled = chi.scaled(&PadicNumber::from_int(p, 3, 8));
    println!("scaled by 3: {:?}", validate_character(&scaled).map(|r| r.residuals));

    let mut wrong = chi.clone();
    wrong.away_values.insert(3, PadicNumber::from_int(p, 1, 8));
    println!("bad value at 3: {:?}", validate_character(&wrong));

    let mut good = chi.clone();
    good.away_values.insert(3, chi.away_value(3).expect("log of a unit"));
    println!("explicit value at 3: {:?}", validate_character(&good).map(|r| r.residuals));

    let mut branched = chi.clone();
    branched.branch = LogBranch::new(PadicNumber::from_int(p, 1, 8));
    println!("non-Iwasawa branch: {:?}", validate_character(&branched));

    let mut unramified = chi;
    unramified.t = PadicNumber::zero(p, 8);
    println!("t = 0: {:?}", validate_character(&unramified));
}
