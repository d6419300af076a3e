use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the computation modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("ray {0} is not contained in any maximal cone")]
    ConelessRay(usize),

    #[error("class group has torsion; the Frobenius enumeration needs a torsion-free class group")]
    TorsionClassGroup,

    #[error("enumeration of {needed} items exceeds the cap of {cap}")]
    CapExceeded { needed: String, cap: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("action is not small: the non-free locus has codimension {codim}")]
    NotSmall { codim: usize },

    #[error("weights do not sum to zero in the group (action is not in SL)")]
    SlConditionViolated,

    #[error("group is not finite")]
    InfiniteGroup,

    #[error("J is the unit ideal; its height is not finite")]
    UnitIdeal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidFan(_) => "invalid_fan",
            Error::ConelessRay(_) => "coneless_ray",
            Error::TorsionClassGroup => "torsion_class_group",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::NotPrime(_) => "not_prime",
            Error::Overflow(_) => "overflow",
            Error::NotSmall { .. } => "not_small",
            Error::SlConditionViolated => "sl_condition_violated",
            Error::InfiniteGroup => "infinite_group",
            Error::UnitIdeal => "unit_ideal",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
