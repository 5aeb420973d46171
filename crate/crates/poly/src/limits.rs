//! Per-call resource limits for Groebner computations.

use std::time::{Duration, Instant};
use thiserror::Error;

/// Which cap a computation ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitKind {
    PairReductions,
    Memory,
    Time,
}

impl std::fmt::Display for LimitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitKind::PairReductions => write!(f, "pair-reduction cap"),
            LimitKind::Memory => write!(f, "memory cap"),
            LimitKind::Time => write!(f, "time limit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("resource limit exceeded ({0})")]
    ResourceLimit(LimitKind),
}

pub type KernelResult<T> = Result<T, KernelError>;

/// Caps applied to every basis computation. `deadline`, when set, is an
/// absolute bound shared by all computations issued under these limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_pair_reductions: u64,
    pub max_memory_bytes: usize,
    pub timeout: Duration,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_pair_reductions: 200_000,
            max_memory_bytes: 512 * 1024 * 1024,
            timeout: Duration::from_secs(60),
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    /// Limits whose deadline is `timeout` from now.
    pub fn with_deadline_from_now(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    /// The instant after which the current basis computation must stop.
    pub(crate) fn effective_deadline(&self, start: Instant) -> Instant {
        let own = start + self.timeout;
        match self.deadline {
            Some(d) if d < own => d,
            _ => own,
        }
    }

    pub fn check_deadline(&self) -> KernelResult<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(KernelError::ResourceLimit(LimitKind::Time)),
            _ => Ok(()),
        }
    }
}
