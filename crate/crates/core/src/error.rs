use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dual number with primal part {0:e} is not invertible")]
    NotInvertible(f64),
    #[error("all coordinates vanish")]
    ZeroElement,
    #[error("dual quaternion lies on the null cone; its norm is not invertible")]
    NullConeElement,
    #[error("point has no coordinate with invertible dual number")]
    AllCoordinatesNull,
    #[error("points coincide in P3(D)")]
    CoincidentPoints,
    #[error("line factor is not an invertible dual number")]
    NonInvertibleFactor,
    #[error("curves do not pass through the same point")]
    PointsDiffer,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("motion norm is not invertible at parameter {0}")]
    NullConeParameter(f64),
    #[error("angle function is stationary at parameter {0}")]
    StationaryAngle(f64),
    #[error("interpolation data are linearly dependent over the dual numbers")]
    DegenerateData,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("no start point of the solver converged")]
    NoSolutionFound,
    #[error("osculating branch selection is unstable (best {best:e}, runner-up {second:e})")]
    BranchAmbiguity { best: f64, second: f64 },
    #[error("not a quadratic null cone motion: {0}")]
    NotNullCone(String),
    #[error(
        "primal norm has a single root of multiplicity four; such a polynomial has a real \
         linear factor and parametrizes a line, not a quadratic translation"
    )]
    QuadrupleRoot,
    #[error("no factorization: {0}")]
    NoFactorization(String),
    #[error("leading coefficient of the remainder is not invertible")]
    NonInvertibleRemainder,
    #[error("polynomial is not a bounded quadratic translation (case b)")]
    NotCaseB,
    #[error("polynomial is not a hyperbolic quadratic translation (case c)")]
    NotCaseC,
    #[error("semi-axis lengths must satisfy a >= b >= 0 and a != 0")]
    InvalidSemiAxes,
    #[error("factorizations describe different motions (residual {0:e})")]
    MismatchedMotions(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
