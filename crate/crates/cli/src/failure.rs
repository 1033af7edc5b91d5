use serde::Serialize;
use thiserror::Error;

/// Failure classes surfaced in the JSON error summary and exit code.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Backend(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Config(_) => "config",
            Failure::Input(_) => "input",
            Failure::Backend(_) => "backend",
        }
    }
}

pub fn config(msg: impl Into<String>) -> anyhow::Error {
    Failure::Config(msg.into()).into()
}

pub fn input(msg: impl Into<String>) -> anyhow::Error {
    Failure::Input(msg.into()).into()
}

#[derive(Serialize)]
pub struct ErrorSummary<'a> {
    pub status: &'static str,
    pub command: &'a str,
    pub kind: &'static str,
    pub message: String,
}

impl<'a> ErrorSummary<'a> {
    pub fn new(command: &'a str, err: &anyhow::Error) -> Self {
        let kind = err
            .chain()
            .find_map(|e| e.downcast_ref::<Failure>())
            .map_or("runtime", Failure::kind);
        ErrorSummary {
            status: "error",
            command,
            kind,
            message: format!("{err:#}"),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.kind == "config" {
            2
        } else {
            1
        }
    }
}
