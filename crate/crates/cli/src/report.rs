use serde::Serialize;

use crate::common::Exit;

/// What a command produced, before it is wrapped with provenance.
#[derive(Debug)]
pub struct Outcome {
    pub exit: Exit,
    pub status: String,
    pub result: serde_json::Value,
    pub seed: Option<u64>,
}

impl Outcome {
    pub fn new(exit: Exit, status: &str, result: serde_json::Value) -> Self {
        Outcome { exit, status: status.to_string(), result, seed: None }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[derive(Debug, Serialize)]
pub struct Versions {
    #[serde(rename = "affine-sle")]
    pub core: &'static str,
    #[serde(rename = "affine-sle-cli")]
    pub cli: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Report<'a, C: Serialize> {
    pub command: &'a str,
    pub status: &'a str,
    pub exit_code: u8,
    pub config: &'a C,
    pub seed: Option<u64>,
    pub versions: Versions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
    pub result: &'a serde_json::Value,
}

pub fn versions() -> Versions {
    Versions { core: affine_sle::VERSION, cli: env!("CARGO_PKG_VERSION") }
}
