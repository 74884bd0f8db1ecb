use thiserror::Error;

/// Errors raised by the core computations.
///
/// Refusals (`IntegralTorsionUnsupported`, `DegenerationNotCertified`,
/// `ExtensionUnresolved`) are errors rather than warnings: a caller that gets
/// one has no K-theoretic answer for that input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("simplex {simplex:?} has face {face:?} that is not listed")]
    MissingFace { simplex: Vec<u32>, face: Vec<u32> },

    #[error("simplex {0:?} does not list its vertices in strictly increasing order")]
    NonIncreasingVertices(Vec<u32>),

    #[error("simplex {simplex:?} listed in degree {degree} has the wrong number of vertices")]
    WrongSimplexSize { degree: usize, simplex: Vec<u32> },

    #[error("simplex {0:?} is listed twice")]
    DuplicateSimplex(Vec<u32>),

    #[error("complex of dimension {0} is not supported (maximum is 3)")]
    DimensionTooHigh(usize),

    #[error("boundary matrix in degree {degree} is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    DimensionMismatch { degree: usize, rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },

    #[error("composite boundary d{lower}.d{upper} is not zero")]
    BoundarySquare { lower: usize, upper: usize },

    #[error("differential {0} matches no vanishing rule")]
    DegenerationNotCertified(String),

    #[error("extension in total degree {degree} at filtration {filtration} does not split by any available rule")]
    ExtensionUnresolved { degree: i32, filtration: i32 },

    #[error(
        "first homology {0} has torsion; integral crossed-product K-theory is not available, use field coefficients"
    )]
    IntegralTorsionUnsupported(String),

    #[error("input failed closed orientable 3-manifold validation: {0}")]
    ValidationFailed(String),

    #[error("the input does not declare the manifold hyperbolic")]
    HyperbolicityNotDeclared,

    #[error("corpus mixes coefficient modes {0} and {1}")]
    MixedModes(String, String),

    #[error("cannot parse group {input:?}: {reason}")]
    GroupSyntax { input: String, reason: String },
}

impl Error {
    /// Stable identifier used in reports and refusal records.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::Shape(_) => "Shape",
            Error::MissingFace { .. } => "MissingFace",
            Error::NonIncreasingVertices(_) => "NonIncreasingVertices",
            Error::WrongSimplexSize { .. } => "WrongSimplexSize",
            Error::DuplicateSimplex(_) => "DuplicateSimplex",
            Error::DimensionTooHigh(_) => "DimensionTooHigh",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::BoundarySquare { .. } => "BoundarySquare",
            Error::DegenerationNotCertified(_) => "DegenerationNotCertified",
            Error::ExtensionUnresolved { .. } => "ExtensionUnresolved",
            Error::IntegralTorsionUnsupported(_) => "IntegralTorsionUnsupported",
            Error::ValidationFailed(_) => "ValidationFailed",
            Error::HyperbolicityNotDeclared => "HyperbolicityNotDeclared",
            Error::MixedModes(..) => "MixedModes",
            Error::GroupSyntax { .. } => "GroupSyntax",
        }
    }

    /// The hypothesis whose failure raised this error, for refusal records.
    pub fn precondition(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "field characteristic is 0 or a prime",
            Error::Shape(_) => "matrix shapes are compatible",
            Error::MissingFace { .. }
            | Error::NonIncreasingVertices(_)
            | Error::WrongSimplexSize { .. }
            | Error::DuplicateSimplex(_) => "input is a genuine simplicial complex",
            Error::DimensionTooHigh(_) => "complex has dimension at most 3",
            Error::DimensionMismatch { .. } => "boundary matrix shapes match the chain ranks",
            Error::BoundarySquare { .. } => "consecutive boundary maps compose to zero",
            Error::DegenerationNotCertified(_) => "every AHSS differential from page 2 on is certified zero",
            Error::ExtensionUnresolved { .. } => "every filtration extension splits by a recorded rule",
            Error::IntegralTorsionUnsupported(_) => "H_1(M) is torsion-free (integral mode)",
            Error::ValidationFailed(_) => "M passes the closed connected orientable 3-manifold checks",
            Error::HyperbolicityNotDeclared => "M is declared hyperbolic",
            Error::MixedModes(..) => "all invariants share one coefficient mode",
            Error::GroupSyntax { .. } => "group text is in normal-form syntax",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
