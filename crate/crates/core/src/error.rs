use num_bigint::BigUint;
use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("refusing to enumerate {count} objects (budget {budget})")]
    Budget { count: BigUint, budget: u64 },

    #[error("support of {support} variables exceeds the maximum of {max}")]
    SupportTooLarge { support: usize, max: usize },

    #[error("variable x{0} has no value in the assignment")]
    MissingVariable(u32),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Fails with [`Error::Budget`] when `count` exceeds `budget`.
pub(crate) fn check_budget(count: &BigUint, budget: u64) -> Result<()> {
    if *count > BigUint::from(budget) {
        return Err(Error::Budget {
            count: count.clone(),
            budget,
        });
    }
    Ok(())
}
