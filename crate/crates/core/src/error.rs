use core::fmt;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A polynomial or weight parameter lies outside its admissible range.
    ParameterOutOfRange { name: &'static str, value: f64 },
    /// An evaluation point lies outside the domain of the function.
    Domain { name: &'static str, value: f64 },
    /// Structurally invalid arguments (e.g. a derivative order above the degree).
    Argument(&'static str),
    /// `2F1(-m, b; c; x)` with `c` in `{0, -1, ..., 1 - m}`.
    InvalidHypergeometric { m: usize, c: f64 },
    /// Newton refinement of quadrature nodes failed to converge.
    NoConvergence { iterations: usize },
    /// An integrand returned NaN or an infinity at a quadrature node.
    NonFinite { at: f64 },
    /// The spectral series would need more terms than the configured budget.
    TruncationBudget { budget: usize },
    /// The time is below the smallest one the spectral series is truncated for.
    TimeTooSmall { t: f64, min: f64 },
    /// The two points are coincident or antipodal, so the theta integral degenerates.
    DegenerateDistance { distance: f64 },
    /// The point at infinity was passed where a finite chart coordinate is needed.
    PointAtInfinity,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ParameterOutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} is out of range")
            }
            Error::Domain { name, value } => write!(f, "{name} = {value} is outside the domain"),
            Error::Argument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidHypergeometric { m, c } => {
                write!(f, "2F1(-{m}, b; {c}; x) has a vanishing lower Pochhammer symbol")
            }
            Error::NoConvergence { iterations } => {
                write!(f, "node refinement did not converge in {iterations} iterations")
            }
            Error::NonFinite { at } => write!(f, "integrand is not finite at node {at}"),
            Error::TruncationBudget { budget } => write!(
                f,
                "spectral truncation needs more than {budget} terms; increase t or max_terms"
            ),
            Error::TimeTooSmall { t, min } => {
                write!(f, "t = {t} is below {min}; the spectral series converges too slowly there")
            }
            Error::DegenerateDistance { distance } => {
                write!(f, "distance {distance} is degenerate for the theta integral")
            }
            Error::PointAtInfinity => write!(f, "point at infinity has no finite chart coordinate"),
        }
    }
}

impl core::error::Error for Error {}
