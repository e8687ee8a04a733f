use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("expected a {expected}x{expected} matrix, got {got}x{got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("amplitude count {got} does not match local_dim^n_parties = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("state dimension {0} exceeds the supported cap of 2^22")]
    TooLarge(u128),
    #[error("party index {index} out of range 1..={n_parties}")]
    BadPartyIndex { index: usize, n_parties: usize },
    #[error("pair reduction needs two distinct parties (got {0} twice)")]
    SameParty(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not a probability distribution: {0}")]
    BadDistribution(String),
    #[error("operation requires qubits (local_dim = 2), got local_dim = {0}")]
    NotQubit(usize),
    #[error("sum of squared pairwise concurrences {0} exceeds one")]
    MonogamyViolation(f64),
    #[error("exact arithmetic overflows beyond N = {0}")]
    Overflow(usize),
    #[error("value {value} outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
    #[error("slice acceptance rate {0:.3e} below 1e-4")]
    DegenerateSlice(f64),
}
