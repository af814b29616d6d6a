use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure a numerical routine in this crate can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {x}")]
    Pole { x: f64 },

    #[error("singular parameter: {0}")]
    ParamSingular(String),

    #[error("{what} did not converge within {terms} terms")]
    NoConvergence { what: &'static str, terms: usize },

    #[error("contour abscissa {abscissa} is not right of the rightmost pole at {pole}")]
    Contour { abscissa: f64, pole: f64 },

    #[error("{what}: quadrature failed to stabilize (last relative change {rel_change:e})")]
    QuadratureNotConverged { what: &'static str, rel_change: f64 },

    #[error("x = {x} lies outside the open domain |x| < {halfwidth}")]
    Domain { x: f64, halfwidth: f64 },

    #[error("trajectory reached the mass singularity at t = {t} (x = {x})")]
    DomainEscape { t: f64, x: f64 },

    #[error("relative energy drift {drift:e} exceeds 1e-6; reduce the step size")]
    StepTooLarge { drift: f64 },

    #[error("ground state is not normalizable for lambda_tilde = {lambda_tilde} (needs < 1)")]
    NotNormalizable { lambda_tilde: f64 },

    #[error("square root of negative coefficient l_sq[{index}] = {value}")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("dimension mismatch: need at least {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("truncation {truncation} leaves tail bound {tail_bound:e} > 1e-10")]
    TruncationTooSmall { tail_bound: f64, truncation: usize },

    #[error("closed-form moments have a pole at lambda' = {lambda_prime}")]
    ClosedFormPole { lambda_prime: f64 },

    #[error("Mandel Q and g2 are undefined at the vacuum (z = 0)")]
    VacuumUndefined,

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
