//! Runs the cargo examples as tests so they cannot rot.

/// Unwraps whatever an example's `main` returns.
pub trait Outcome {
    fn check(self);
}

impl Outcome for () {
    fn check(self) {}
}

impl<E: std::fmt::Debug> Outcome for Result<(), E> {
    fn check(self) {
        self.expect("example failed");
    }
}

macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));

            #[test]
            fn runs() {
                crate::Outcome::check(main());
            }
        }
    };
}

example!(padic_arithmetic, "padic_arithmetic.rs");
example!(frobenius_matrix, "frobenius_matrix.rs");
example!(coleman_integrals, "coleman_integrals.rs");
example!(height_pairing, "height_pairing.rs");
example!(idele_characters, "idele_characters.rs");
example!(curve_points, "curve_points.rs");
example!(cli_job, "cli_job.rs");
