//! Exit-code classification.

use std::fmt::Display;

use oil_core::Error;

pub const USAGE: u8 = 1;
pub const NUMERICAL: u8 = 2;
pub const IO: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(msg: impl Display) -> Self {
        Failure { code: USAGE, message: msg.to_string() }
    }

    pub fn io(msg: impl Display) -> Self {
        Failure { code: IO, message: msg.to_string() }
    }

    /// Failure while computing: bad settings are usage errors, the rest are numerical.
    pub fn solver(e: Error) -> Self {
        let code = match e.root() {
            Error::Config(_) | Error::UnknownLabel(_) => USAGE,
            Error::Io(_) | Error::Json(_) => IO,
            _ => NUMERICAL,
        };
        Failure { code, message: e.to_string() }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

/// Anything that goes wrong while reading inputs counts as an I/O failure.
pub trait LoadContext<T> {
    fn loading(self, what: &str) -> Outcome<T>;
}

impl<T, E: Display> LoadContext<T> for Result<T, E> {
    fn loading(self, what: &str) -> Outcome<T> {
        self.map_err(|e| Failure::io(format!("{what}: {e}")))
    }
}

pub trait SolveContext<T> {
    fn solving(self) -> Outcome<T>;
}

impl<T> SolveContext<T> for oil_core::Result<T> {
    fn solving(self) -> Outcome<T> {
        self.map_err(Failure::solver)
    }
}
