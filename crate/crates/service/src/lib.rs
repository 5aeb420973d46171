//! Command-line and HTTP front ends of the mechanical geometer. Both call
//! [`commands::execute`], so the two paths give the same answers.

pub mod commands;
pub mod corpus;
mod error;
pub mod http;
mod registry;

pub use error::ServiceError;
pub use registry::Registry;

use mg_core::reason::Options;
use std::time::Duration;

/// Default wall-clock budget per reasoning call.
pub const DEFAULT_TIMEOUT_MS: u64 = 60_000;

/// Knobs shared by every command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    pub timeout_ms: u64,
    pub wlog: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 1, timeout_ms: DEFAULT_TIMEOUT_MS, wlog: true }
    }
}

impl Settings {
    /// Defaults, with the timeout taken from `MG_TIMEOUT_MS` when set.
    pub fn from_env() -> Settings {
        let timeout_ms = std::env::var("MG_TIMEOUT_MS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_TIMEOUT_MS);
        Settings { timeout_ms, ..Settings::default() }
    }

    pub fn options(&self) -> Options {
        Options { wlog: self.wlog, seed: self.seed, timeout: Some(Duration::from_millis(self.timeout_ms)), ..Options::default() }
    }
}
