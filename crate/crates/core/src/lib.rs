//! Adaptive walking-exercise coach.
//!
//! A trainee's weekly aerobic capability is modeled as a staircase climbing from an assessed
//! baseline to the AHA target of 750 MET-minutes per week. Each week the coach picks the
//! easiest catalog goal that matches the modeled capability, spreads its sessions across the
//! week, collects daily reports and revises the staircase when the trainee struggles or
//! finds the goal too easy.
//!
//! The engine is event sourced ([`engine`]); [`sim`] drives it with scripted trainees.

pub mod assessment;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod model;
pub mod planner;
pub mod report;
pub mod schedule;
pub mod sim;

pub use assessment::{
    baseline_capability, first_week_choices, initialize_model, ActivityAnswer, ActivityLevel,
    AssessmentReport, FirstWeekChoiceSet,
};
pub use catalog::{
    enumerate_combos, goal_space, harder_than, maintenance_goal, volume, ExerciseType, Volume,
    WeeklyGoal, AHA_TARGET,
};
pub use engine::{
    replay, Answer, Coach, CoachConfig, CoachState, Command, Direction, Event, EventBody, Phase,
    Proposal, WeekRecord,
};
pub use error::{CoachError, Result};
pub use model::StaircaseModel;
pub use planner::{apply_revision, decide_revision, select_goal, summarize_week, Revision, WeekSummary};
pub use report::{DailyReport, Reason, ReportStatus};
pub use schedule::{plan_week, reschedule, rolling_view, DayKind, DayStatus, DayView, WeekSchedule};

pub use sim::{builtin_profile, simulate, simulate_with_coach, TraineeProfile, Trajectory, WeekOutcome};
