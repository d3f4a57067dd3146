use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("need at least 5 grid points, got {0}")]
    TooFewPoints(usize),
    #[error("non-finite domain bounds [{x_min}, {x_max}]")]
    NonFiniteBounds { x_min: f64, x_max: f64 },
    #[error("empty domain [{x_min}, {x_max}]")]
    EmptyDomain { x_min: f64, x_max: f64 },
    #[error("ghost width {0} is below 3")]
    GhostWidth(usize),
    #[error("x and y ghost widths differ ({0} vs {1})")]
    GhostMismatch(usize, usize),
    #[error("field length {got} does not match grid length {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("non-finite sample in stencil window")]
    NonFiniteSample,
    #[error("epsilon must be finite and non-negative, got {0}")]
    BadEpsilon(f64),
    #[error("epsilon must be positive for solver use")]
    ZeroEpsilon,
    #[error("exponent p must be finite and positive, got {0}")]
    BadExponent(f64),
    #[error("eta must be finite and non-negative, got {0}")]
    BadEta(f64),
    #[error("centering coefficients must be finite and positive, got {0:?}")]
    BadCentering([f64; 3]),
    #[error("dx must be finite and positive, got {0}")]
    BadDx(f64),
    #[error("omega {0} outside [0, 1]")]
    OmegaOutOfRange(f64),
    #[error("substencil index {0} outside 0..=2")]
    BadIndex(usize),
    #[error("vanishing denominator with epsilon = 0")]
    DivisionByZero,
    #[error("weights must be non-negative with a positive sum, got {0:?}")]
    BadWeights([f64; 3]),
    #[error("unknown scheme id '{0}' (valid: js, jsc, m, z, zplus, d, c, zc, zcplus, linear)")]
    UnknownScheme(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhysicsError {
    #[error("non-positive density or pressure (rho = {rho}, p = {p})")]
    PositivityFailure { rho: f64, p: f64 },
    #[error("non-positive averaged sound speed squared ({0})")]
    RoeSoundSpeed(f64),
    #[error("gamma must exceed 1, got {0}")]
    BadGamma(f64),
    #[error("Riemann data generate vacuum")]
    Vacuum,
    #[error("Riemann iteration did not converge")]
    NoConvergence,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("{source} at cell {cell} (t = {t})")]
    Physics {
        source: PhysicsError,
        cell: usize,
        t: f64,
    },
    #[error("non-finite value at cell {cell} (t = {t})")]
    NonFinite { cell: usize, t: f64 },
    #[error("invalid time controls: {0}")]
    Controls(String),
    #[error("time step collapsed to {dt} at t = {t}")]
    StepCollapse { dt: f64, t: f64 },
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        source: Box<SolverError>,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("unknown problem id '{0}'")]
    UnknownProblem(String),
    #[error("unknown test function '{0}' (valid: f0, f1, f2)")]
    UnknownFunction(String),
    #[error("problem '{0}' does not support this operation")]
    Unsupported(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("invalid analysis input: {0}")]
    Input(String),
}
