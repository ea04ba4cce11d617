use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A formula was queried outside the parameter range on which it holds.
    #[error("{quantity} undefined for M={m}, p={p}{}: requires {requirement}", k.map(|k| format!(", k={k}")).unwrap_or_default())]
    Domain {
        quantity: &'static str,
        m: u32,
        p: f64,
        k: Option<u8>,
        requirement: &'static str,
    },

    #[error("{quantity} is defined for d={expected} only (got d={got})")]
    WrongDimension {
        quantity: &'static str,
        expected: u8,
        got: u8,
    },

    #[error("functional index k={k} out of range for d={dim}")]
    InvalidOrder { k: u8, dim: u8 },

    #[error("invalid configuration name {0:?}")]
    InvalidConfiguration(String),

    #[error("no sign change of {quantity} on [{lo}, {hi}] for M={m}")]
    NoSignChange {
        quantity: &'static str,
        m: u32,
        lo: f64,
        hi: f64,
    },

    #[error("{quantity} is not unimodal for M={m}: {sign_changes} sign changes of finite differences")]
    NotUnimodal {
        quantity: &'static str,
        m: u32,
        sign_changes: usize,
    },

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("instance too large for exhaustive enumeration: {0}")]
    InstanceTooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
