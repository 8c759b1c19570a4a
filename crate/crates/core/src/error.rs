use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("singular matrix (determinant zero)")]
    Singular,
    #[error("determinant must be positive, got {0}")]
    NonPositiveDeterminant(String),
    #[error("enumeration of {what} would produce {size} elements, cap is {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("matrix is not regular at depth {depth}: v_p(det) = {valuation} >= depth")]
    NotRegular { valuation: u64, depth: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("lattice does not contain Z^2")]
    NotSuperlattice,
    #[error("modulus {modulus} is not compatible with exponent {exponent}")]
    Incompatible { modulus: u64, exponent: String },
    #[error("matrix is not invertible modulo {0}")]
    NotInvertibleMod(u64),
    #[error("adjoint of class ({0}) leaves the integral semigroup")]
    AdjointLeavesSemigroup(String),
    #[error("lattice {0} is outside the window interior")]
    OutsideInterior(String),
    #[error("beta = {0} is in the divergent range")]
    Divergent(String),
    #[error("beta = {0} is outside the certified range (beta > 2 required)")]
    Uncertified(String),
    #[error("element is not homogeneous in determinant class")]
    NotHomogeneous,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
