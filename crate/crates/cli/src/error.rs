use std::io;
use std::path::PathBuf;

use jsr_core::{BoundsError, EigenError, SemigroupError};
use thiserror::Error;

use crate::input::InputError;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("invalid input: {0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Rejected(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
    #[error("enumeration budget exhausted in {0} run(s); see the report")]
    PartialBudget(usize),
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Input(_) | CliError::Rejected(_) => EXIT_PARSE,
            CliError::Bounds(e) if is_budget(e) => EXIT_BUDGET,
            CliError::Semigroup(SemigroupError::BudgetExhausted { .. }) | CliError::PartialBudget(_) => EXIT_BUDGET,
            CliError::VerificationFailed { .. } => EXIT_VERIFY,
            _ => EXIT_FAILURE,
        }
    }
}

pub(crate) fn is_budget(e: &BoundsError) -> bool {
    matches!(
        e,
        BoundsError::BudgetExhausted { .. } | BoundsError::Semigroup(SemigroupError::BudgetExhausted { .. })
    )
}
