use thiserror::Error;

/// Errors produced by state construction, grid evaluation and the
/// closed-form evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice spacing must be positive and finite, got {0}")]
    InvalidSpacing(f64),
    #[error("position window is empty")]
    EmptyWindow,
    #[error("state is not normalized: sum |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("amplitudes must be finite")]
    NonFinite,
    #[error("gaussian width must be positive, got {0}")]
    InvalidWidth(f64),
    #[error("tail tolerance must lie in (0, 1), got {0}")]
    InvalidTailEps(f64),
    #[error("superposition needs as many coefficients as states ({states} states, {coeffs} coefficients)")]
    LengthMismatch { states: usize, coeffs: usize },
    #[error("superposition is empty")]
    EmptySuperposition,
    #[error("lattice spacings differ: {0} vs {1}")]
    SpacingMismatch(f64, f64),
    #[error("superposition cancels to the zero vector")]
    ZeroSuperposition,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("matrix has negative eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("imaginary residue {residue:e} exceeds bound; operator is not Hermitian")]
    ImaginaryResidue { residue: f64 },
    #[error("k-grid size must be even and at least 4, got {0}")]
    BadGridSize(usize),
    #[error("k-grid size {n_k} is below the Nyquist bound {required}")]
    Nyquist { n_k: usize, required: usize },
    #[error("grids have incompatible axes: {0}")]
    AxisMismatch(String),
    #[error("window of {sites} sites exceeds the limit of {max} for this operation")]
    WindowTooLarge { sites: usize, max: usize },
    #[error("operation would need about {work:e} multiply-adds (limit {max:e})")]
    TooCostly { work: f64, max: f64 },
    #[error("theta series diverges for nome q = {0} (need 0 <= q < 1)")]
    ThetaDivergent(f64),
    #[error("theta tolerance must be positive, got {0}")]
    ThetaTolerance(f64),
    #[error("theta series needs more than {cap} terms for q = {q}")]
    ThetaTermCap { q: f64, cap: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
