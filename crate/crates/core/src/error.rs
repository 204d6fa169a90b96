use thiserror::Error;

/// Every failure the library can report.
///
/// Variants fall in two groups: "scope" errors, where the input is valid
/// mathematics but outside what this implementation handles (bad reduction,
/// colliding residue disks, unsupported divisor supports), and genuine input
/// or numerical errors. [`Error::is_scope`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("NotAUnit: {0}")]
    NotAUnit(String),
    #[error("OutOfConvergenceDomain: {0}")]
    OutOfConvergenceDomain(String),
    #[error("PrimeMismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("DivisionByNonUnitLeading")]
    DivisionByNonUnitLeading,
    #[error("NonComposable: {0}")]
    NonComposable(String),
    #[error("NonInvertible: {0}")]
    NonInvertible(String),
    #[error("InvalidCurve: {0}")]
    InvalidCurve(String),
    #[error("NotOnCurve: {0}")]
    NotOnCurve(String),
    #[error("BadReduction: {0}")]
    BadReduction(String),
    #[error("BadIntegrality: {0}")]
    BadIntegrality(String),
    #[error("UnsupportedSupport: {0}")]
    UnsupportedSupport(String),
    #[error("SingularAtCenter: {0}")]
    SingularAtCenter(String),
    #[error("NotOrdinary: {0}")]
    NotOrdinary(String),
    #[error("DegenerateInput: {0}")]
    DegenerateInput(String),
    #[error("EndpointAtPole: {0}")]
    EndpointAtPole(String),
    #[error("DifferentDisks: {0}")]
    DifferentDisks(String),
    #[error("SingularDiskEndpoint: {0}")]
    SingularDiskEndpoint(String),
    #[error("NotClassCharacter: {0}")]
    NotClassCharacter(String),
    #[error("UnramifiedAtP")]
    UnramifiedAtP,
    #[error("BadReductionAtQ: {0}")]
    BadReductionAtQ(u64),
    #[error("OverlappingSupport: {0}")]
    OverlappingSupport(String),
    #[error("SupportsCollideModP: {0}")]
    SupportsCollideModP(String),
    #[error("BadPrimeContact: {0}")]
    BadPrimeContact(u64),
    #[error("DegreeNotZero: {0}")]
    DegreeNotZero(i64),
    #[error("Parse: {0}")]
    Parse(String),
}

impl Error {
    /// True for inputs that are mathematically meaningful but outside the
    /// supported scope (the CLI maps these to exit code 2).
    pub fn is_scope(&self) -> bool {
        matches!(
            self,
            Error::BadReduction(_)
                | Error::BadIntegrality(_)
                | Error::UnsupportedSupport(_)
                | Error::NotOrdinary(_)
                | Error::SingularDiskEndpoint(_)
                | Error::EndpointAtPole(_)
                | Error::BadReductionAtQ(_)
                | Error::OverlappingSupport(_)
                | Error::SupportsCollideModP(_)
                | Error::BadPrimeContact(_)
                | Error::DegreeNotZero(_)
                | Error::UnramifiedAtP
                | Error::NotClassCharacter(_)
                | Error::DegenerateInput(_)
        )
    }

    /// The bare variant name, used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotAUnit(_) => "NotAUnit",
            Error::OutOfConvergenceDomain(_) => "OutOfConvergenceDomain",
            Error::PrimeMismatch(..) => "PrimeMismatch",
            Error::DivisionByNonUnitLeading => "DivisionByNonUnitLeading",
            Error::NonComposable(_) => "NonComposable",
            Error::NonInvertible(_) => "NonInvertible",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::NotOnCurve(_) => "NotOnCurve",
            Error::BadReduction(_) => "BadReduction",
            Error::BadIntegrality(_) => "BadIntegrality",
            Error::UnsupportedSupport(_) => "UnsupportedSupport",
            Error::SingularAtCenter(_) => "SingularAtCenter",
            Error::NotOrdinary(_) => "NotOrdinary",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::EndpointAtPole(_) => "EndpointAtPole",
            Error::DifferentDisks(_) => "DifferentDisks",
            Error::SingularDiskEndpoint(_) => "SingularDiskEndpoint",
            Error::NotClassCharacter(_) => "NotClassCharacter",
            Error::UnramifiedAtP => "UnramifiedAtP",
            Error::BadReductionAtQ(_) => "BadReductionAtQ",
            Error::OverlappingSupport(_) => "OverlappingSupport",
            Error::SupportsCollideModP(_) => "SupportsCollideModP",
            Error::BadPrimeContact(_) => "BadPrimeContact",
            Error::DegreeNotZero(_) => "DegreeNotZero",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
