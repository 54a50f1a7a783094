//! Serializable run reports emitted on stdout by every subcommand.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Ok,
    Error { message: String },
}

/// One report per invocation: command metadata plus the command-specific
/// payload. Serialization is deterministic (struct field order, sorted map
/// keys) so identical invocations produce byte-identical output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub subcommand: String,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub status: ReportStatus,
    pub payload: Value,
}

impl RunReport {
    pub fn ok(subcommand: &str, parameters: Value, seed: Option<u64>, payload: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            parameters,
            seed,
            status: ReportStatus::Ok,
            payload,
        }
    }

    pub fn error(subcommand: &str, message: String) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            parameters: Value::Null,
            seed: None,
            status: ReportStatus::Error { message },
            payload: Value::Null,
        }
    }
}
