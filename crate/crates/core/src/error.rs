use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid substance data: {0}")]
    Substance(String),

    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),

    #[error("molar density {n} mol/m^3 outside the valid domain (0, {max}) mol/m^3")]
    DensityOutOfDomain { n: f64, max: f64 },

    #[error("influence parameter is not positive at T = {temperature} K (c = {value})")]
    InfluenceParameter { temperature: f64, value: f64 },

    #[error("volumetric heat capacity is not positive at n = {n}, T = {temperature} (got {value})")]
    HeatCapacity { n: f64, temperature: f64, value: f64 },

    #[error("linear solver did not converge: {iterations} iterations, relative residual {residual:e}")]
    LinearSolver { iterations: usize, residual: f64 },

    #[error("singular matrix encountered at row {0}")]
    SingularMatrix(usize),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid scheme configuration: {0}")]
    Scheme(String),

    #[error("config syntax error on line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error("step {step} rejected after {attempts} attempts: {reason}")]
    StepRejected {
        step: usize,
        attempts: usize,
        reason: String,
    },

    #[error("empty phase region for threshold {0} mol/m^3")]
    EmptyPhase(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
