use thiserror::Error;

use crate::lp::{LinearProgram, LpError, LpStatus};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid producer {id}: {reason}")]
    InvalidProducer { id: String, reason: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("producer index {index} out of range for {len} producers")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Lp(#[from] LpError),

    /// The solver returned a status that valid data cannot produce.
    #[error("internal consistency error for {producer}: solver reported {status:?}")]
    Internal {
        producer: String,
        status: LpStatus,
        lp: Box<LinearProgram>,
    },

    #[error("unbounded output estimate for {producer}: some dominating combination uses zero inputs")]
    UnboundedEstimate { producer: String },

    #[error("{producer}: {source}")]
    Producer {
        producer: String,
        #[source]
        source: Box<Error>,
    },

    #[error("sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn for_producer(self, producer: &str) -> Error {
        Error::Producer {
            producer: producer.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
