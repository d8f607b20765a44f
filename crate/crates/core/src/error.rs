//! Error type shared across the crate.
//!
//! Oracles and preconditions fail loudly with a typed error; the CLI maps
//! [`Error::exit_code`] onto its process exit codes.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input matrix does not have the rank the operation requires.
    #[error("rank deficient")]
    RankDeficient,

    /// Target vector lies outside the span of the basis.
    #[error("target outside basis span")]
    OutsideSpan,

    /// CVP enumeration found no lattice point within the given radius.
    #[error("radius exceeded")]
    RadiusExceeded,

    /// An enumeration or group scan exceeded its node budget.
    #[error("enumeration budget exceeded: {visited} nodes (cap {budget})")]
    BudgetExceeded { visited: u64, budget: u64 },

    /// A dense statevector or phase-estimation table would exceed memory.
    #[error("state size exceeds dense budget ({size} > {budget}); use the gram backend")]
    DenseBudget { size: u64, budget: u64 },

    /// `q` is not a period of the lattice.
    #[error("not q-periodic: {q}·Z^n is not contained in the lattice")]
    NotPeriodic { q: u64 },

    /// Phase-estimation error budget cannot be met for the requested
    /// parameters; `max_eps1` is the largest promise parameter that fits.
    #[error("pe-approx precondition: p_err^2/(128·eps_ev) < 1; largest feasible eps1 is {max_eps1:.3e}")]
    PeInfeasible { max_eps1: f64 },

    /// Generic violated precondition with a diagnostic message.
    #[error("precondition: {0}")]
    Precondition(String),

    /// Babai verification failed in the certified-radius decoder.
    #[error("outside certified radius")]
    OutsideCertifiedRadius,

    /// Ladder search exhausted without a verified solution.
    #[error("no solution found")]
    NoSolution,
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Process exit code for the CLI: 2 precondition, 3 budget, 4 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } | Error::DenseBudget { .. } => 3,
            Error::OutsideCertifiedRadius | Error::NoSolution => 4,
            _ => 2,
        }
    }
}
