use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Config,
    Numeric,
    Resource,
}

/// Everything that ends a run, tagged with the exit-code class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub kind: Kind,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Self { kind: Kind::Config, message: message.into() }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self { kind: Kind::Numeric, message: message.into() }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        Self { kind: Kind::Resource, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Config => 2,
            Kind::Numeric => 3,
            Kind::Resource => 4,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} error: {}", self.kind, self.message)
    }
}

impl From<skinlab::Error> for Failure {
    fn from(e: skinlab::Error) -> Self {
        let message = e.to_string();
        if matches!(e, skinlab::Error::Resource { .. }) {
            Self::resource(message)
        } else if e.is_input_error() {
            Self::config(message)
        } else {
            Self::numeric(message)
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::resource(e.to_string())
    }
}
