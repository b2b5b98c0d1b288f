//! Command outcomes and the exit-code contract.

use serde_json::Value;
use sqhole::io::ParseError;
use sqhole::shapes::MAX_SUPPORTED_K;
use sqhole::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NOT_FOUND: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

/// What a successful (or NotFound-type) command produced.
#[derive(Debug)]
pub struct Outcome {
    /// The JSON payload, also recorded in run reports.
    pub value: Value,
    /// Human-readable text printed instead of the JSON when present.
    pub text: Option<String>,
    pub code: u8,
}

impl Outcome {
    pub fn json(value: Value) -> Outcome {
        Outcome { value, text: None, code: EXIT_OK }
    }

    pub fn with_text(value: Value, text: String) -> Outcome {
        Outcome { value, text: Some(text), code: EXIT_OK }
    }

    pub fn not_found(value: Value) -> Outcome {
        Outcome { value, text: None, code: EXIT_NOT_FOUND }
    }
}

/// A command failure, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or out-of-contract input (exit 2).
    Invalid(String),
    /// The request exceeds the enumeration budget (exit 4).
    Budget(String),
    /// A bug or an unverifiable internal result (exit 1).
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Budget(_) => EXIT_BUDGET,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Budget(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let msg = e.to_string();
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(msg),
            Error::KOutOfRange(k) if k > MAX_SUPPORTED_K => Failure::Budget(msg),
            Error::CertificateFailed(_) => Failure::Internal(msg),
            _ => Failure::Invalid(msg),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::Invalid(e.to_string())
    }
}

pub type CmdResult = Result<Outcome, Failure>;
