use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the requested quantity.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// A series or integrator failed to reach its tolerance.
    #[error("numeric error in {what}: {detail}")]
    Numeric { what: &'static str, detail: String },

    /// A Monte Carlo run finished but too many samples stayed undecided.
    #[error("quality check failed in {what}: {detail}")]
    Quality { what: &'static str, detail: String },

    /// Caller broke an explicit precondition of the operation.
    #[error("contract violated in {what}: {detail}")]
    Contract { what: &'static str, detail: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn numeric(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn contract(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Contract {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn quality(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Quality {
            what,
            detail: detail.into(),
        }
    }

    pub fn is_quality(&self) -> bool {
        matches!(self, Error::Quality { .. })
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
