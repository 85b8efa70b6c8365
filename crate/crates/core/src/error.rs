use thiserror::Error;

use crate::catalog::WeeklyGoal;

#[derive(Debug, Error)]
pub enum CoachError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("goal {0} is not among the offered first-week choices")]
    ChoiceNotOffered(WeeklyGoal),

    #[error("operation `{operation}` not allowed in phase {phase}")]
    WrongPhase { operation: &'static str, phase: String },

    #[error("day {0} is outside the week (0..=6)")]
    DayOutOfRange(u8),

    #[error("day {0} already has a report")]
    DuplicateReport(u8),

    #[error("day {0} has no scheduled session")]
    RestDay(u8),

    #[error("report is for week {got}, current week is {current}")]
    WrongWeek { got: u32, current: u32 },

    #[error("no week is planned")]
    WeekNotPlanned,

    #[error("no proposal is awaiting an answer")]
    NoPendingProposal,

    #[error("no feasible goal for capability {0}")]
    NoFeasibleGoal(f64),

    #[error("unknown profile `{0}`")]
    UnknownProfile(String),

    #[error("event log: {0}")]
    Log(String),

    #[error("event sequence broken: expected seq {expected}, found {found}")]
    SequenceGap { expected: u64, found: u64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = CoachError> = std::result::Result<T, E>;
