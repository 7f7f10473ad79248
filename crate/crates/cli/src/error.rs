use std::fmt;

use lanekg::bayes::BayesError;
use lanekg::discretize::DiscretizeError;
use lanekg::eval::EvalError;
use lanekg::ingest::IngestError;
use lanekg::kg_builder::KgError;
use lanekg::kge::KgeError;
use lanekg::ontology::OntologyError;

/// Exit 2 for usage errors, 1 for data errors.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data { name: &'static str, message: String },
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure::Usage(message)
    }

    pub fn data(name: &'static str, message: impl Into<String>) -> Self {
        Failure::Data {
            name,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data { .. } => 1,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure::data("IoFailure", format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Data { name, message } => write!(f, "error[{name}]: {message}"),
        }
    }
}

macro_rules! data_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::data(e.name(), e.to_string())
            }
        }
    )*};
}

data_errors!(
    BayesError,
    DiscretizeError,
    EvalError,
    IngestError,
    KgError,
    KgeError,
    OntologyError
);
