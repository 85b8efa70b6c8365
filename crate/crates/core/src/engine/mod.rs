//! Event-sourced coaching loop for one trainee.
//!
//! Commands are checked against the current [`CoachState`] and turned into events; state only
//! ever changes by folding events, so replaying a log reproduces the live state exactly.

mod clock;
mod event;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assessment::{
    baseline_capability, first_week_choices, initialize_model, AssessmentReport,
    FirstWeekChoiceSet,
};
use crate::catalog::{maintenance_goal, Volume, WeeklyGoal, AHA_TARGET};
use crate::error::{CoachError, Result};
use crate::model::StaircaseModel;
use crate::planner::{apply_revision, decide_revision, select_goal, summarize_week, Revision, WeekSummary};
use crate::report::{DailyReport, ReportStatus};
use crate::schedule::{plan_week, reschedule, rolling_view, DayView, WeekSchedule};

pub use clock::{Clock, SimClock, SystemClock};
pub use event::{read_events, write_events, Event, EventBody, PAYLOAD_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoachConfig {
    /// Weekly capability the program climbs toward.
    pub target: Volume,
    /// Weeks moved by each change-step or shift manipulation.
    pub revision_weeks: u32,
}

impl Default for CoachConfig {
    fn default() -> Self {
        CoachConfig { target: Volume(AHA_TARGET), revision_weeks: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    #[default]
    New,
    Assessed,
    Active,
    Maintenance,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increase,
    Decrease,
    Stay,
}

impl Direction {
    pub fn between(previous: &WeeklyGoal, proposed: &WeeklyGoal) -> Self {
        let (p, n) = (previous.volume().0, proposed.volume().0);
        if n > p {
            Direction::Increase
        } else if n < p {
            Direction::Decrease
        } else {
            Direction::Stay
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Agree,
    Disagree,
}

/// Next week's goal as offered to the trainee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    pub week_index: u32,
    pub proposed_goal: WeeklyGoal,
    pub previous_goal: WeeklyGoal,
    pub direction: Direction,
    /// Modeled capability for the proposed week.
    pub capability: Volume,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response: Option<Answer>,
}

/// One closed week.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekRecord {
    pub week_index: u32,
    pub goal: WeeklyGoal,
    pub capability: Volume,
    pub summary: WeekSummary,
    pub revision: Revision,
}

impl WeekRecord {
    pub fn performed_volume(&self) -> f64 {
        f64::from(self.summary.done_count) * self.goal.session_volume()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoachState {
    pub trainee_id: String,
    pub name: Option<String>,
    pub config: CoachConfig,
    pub phase: Phase,
    pub baseline: Option<Volume>,
    pub choices: Option<FirstWeekChoiceSet>,
    pub model: Option<StaircaseModel>,
    pub projected_weeks: Option<u32>,
    pub committed_goal: Option<WeeklyGoal>,
    /// Modeled capability for the current week.
    pub week_capability: Option<Volume>,
    pub current_week: Option<WeekSchedule>,
    pub week_closed: bool,
    pub reports: Vec<DailyReport>,
    pub pending_proposal: Option<Proposal>,
    pub last_proposal: Option<Proposal>,
    pub history: Vec<WeekRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Assess(AssessmentReport),
    ChooseGoal(WeeklyGoal),
    Report(DailyReport),
    CloseWeek,
    Respond(Answer),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Assess(_) => "assessment",
            Command::ChooseGoal(_) => "goal choice",
            Command::Report(_) => "daily report",
            Command::CloseWeek => "close week",
            Command::Respond(_) => "proposal response",
        }
    }
}

impl CoachState {
    pub fn current_week_index(&self) -> Option<u32> {
        self.current_week.as_ref().map(|w| w.week_index)
    }

    /// Week currently accepting reports.
    fn open_week(&self) -> Option<&WeekSchedule> {
        self.current_week.as_ref().filter(|_| !self.week_closed)
    }

    fn wrong_phase(&self, cmd: &Command) -> CoachError {
        CoachError::WrongPhase { operation: cmd.name(), phase: self.phase.to_string() }
    }

    fn in_program(&self) -> bool {
        matches!(self.phase, Phase::Active | Phase::Maintenance)
    }

    /// Checks `cmd` and returns the events it produces, without changing the state.
    pub fn decide(&self, cmd: &Command) -> Result<Vec<EventBody>> {
        match cmd {
            Command::Assess(report) => {
                if self.phase != Phase::New {
                    return Err(self.wrong_phase(cmd));
                }
                report.validate()?;
                let baseline = baseline_capability(report);
                Ok(vec![EventBody::AssessmentSubmitted {
                    report: *report,
                    baseline,
                    choices: first_week_choices(baseline),
                }])
            }
            Command::ChooseGoal(chosen) => {
                if self.phase != Phase::Assessed {
                    return Err(self.wrong_phase(cmd));
                }
                chosen.validate()?;
                let baseline = self.baseline.unwrap_or_default();
                let model = initialize_model(baseline, chosen, self.config.target)?;
                let maintenance = model.is_maintenance();
                let goal = if maintenance { maintenance_goal(self.config.target) } else { *chosen };
                Ok(vec![
                    EventBody::InitialGoalChosen {
                        goal: *chosen,
                        model,
                        projected_weeks: model.span(),
                    },
                    EventBody::WeekPlanned {
                        week_index: 1,
                        goal,
                        capability: model.capability_at(1),
                        maintenance,
                    },
                    EventBody::DailyScheduled { schedule: plan_week(&goal, 1) },
                ])
            }
            Command::Report(report) => {
                if !self.in_program() {
                    return Err(self.wrong_phase(cmd));
                }
                report.validate()?;
                let week = self.open_week().ok_or(CoachError::WeekNotPlanned)?;
                if report.week_index != week.week_index {
                    return Err(CoachError::WrongWeek {
                        got: report.week_index,
                        current: week.week_index,
                    });
                }
                let mut recorded = week.clone();
                recorded.record(report.day_index, report.status)?;
                let mut events = vec![EventBody::DailyReported { report: *report }];
                if report.status != ReportStatus::Done {
                    let schedule = reschedule(&recorded, report.day_index)?;
                    if schedule != recorded {
                        events.push(EventBody::DailyScheduled { schedule });
                    }
                }
                Ok(events)
            }
            Command::CloseWeek => {
                if !self.in_program() {
                    return Err(self.wrong_phase(cmd));
                }
                self.decide_close()
            }
            Command::Respond(answer) => {
                if !self.in_program() {
                    return Err(self.wrong_phase(cmd));
                }
                let proposal = self.pending_proposal.ok_or(CoachError::NoPendingProposal)?;
                let model = self.model.ok_or(CoachError::WeekNotPlanned)?;
                let (goal, model, capability) = match answer {
                    Answer::Agree => (proposal.proposed_goal, model, proposal.capability),
                    Answer::Disagree => {
                        let shifted = model.shift(self.config.revision_weeks);
                        (
                            proposal.previous_goal,
                            shifted,
                            shifted.capability_at(proposal.week_index),
                        )
                    }
                };
                Ok(vec![
                    EventBody::ProposalAnswered { answer: *answer, goal, model },
                    EventBody::WeekPlanned {
                        week_index: proposal.week_index,
                        goal,
                        capability,
                        maintenance: capability.0 >= self.config.target.0,
                    },
                    EventBody::DailyScheduled { schedule: plan_week(&goal, proposal.week_index) },
                ])
            }
        }
    }

    fn decide_close(&self) -> Result<Vec<EventBody>> {
        let week = self.open_week().ok_or(CoachError::WeekNotPlanned)?;
        let (Some(model), Some(goal), Some(capability)) =
            (self.model, self.committed_goal, self.week_capability)
        else {
            return Err(CoachError::WeekNotPlanned);
        };
        let summary = summarize_week(&self.reports, &goal);
        let decided = decide_revision(&summary);
        let effective = match (self.phase, decided) {
            (Phase::Maintenance, Revision::Regress) => Revision::Regress,
            (Phase::Maintenance, _) => Revision::None,
            (_, r) => r,
        };
        let mut events = vec![EventBody::WeekClosed { summary, revision: effective }];
        let revised = apply_revision(&model, effective, self.config.revision_weeks);
        if effective != Revision::None {
            events.push(EventBody::RevisionApplied { revision: effective, model: revised });
        }

        let next_week = week.week_index + 1;
        let next_capability = revised.capability_at(next_week);
        let target = self.config.target;
        let maintenance = next_capability.0 >= target.0;
        let proposed = if maintenance {
            maintenance_goal(target)
        } else {
            select_goal(next_capability, Some(&goal), Some(capability))?
        };
        let proposal = Proposal {
            week_index: next_week,
            proposed_goal: proposed,
            previous_goal: goal,
            direction: Direction::between(&goal, &proposed),
            capability: next_capability,
            response: None,
        };
        events.push(EventBody::ProposalMade { proposal });
        if proposal.direction == Direction::Stay {
            events.push(EventBody::WeekPlanned {
                week_index: next_week,
                goal: proposed,
                capability: next_capability,
                maintenance,
            });
            events.push(EventBody::DailyScheduled { schedule: plan_week(&proposed, next_week) });
        }
        Ok(events)
    }

    /// Folds one event into the state.
    pub fn apply(&mut self, trainee: &str, body: &EventBody) -> Result<()> {
        match body {
            EventBody::TraineeCreated { name, config } => {
                if !self.trainee_id.is_empty() {
                    return Err(CoachError::Log("trainee created twice".into()));
                }
                *self = CoachState {
                    trainee_id: trainee.to_string(),
                    name: name.clone(),
                    config: *config,
                    ..CoachState::default()
                };
            }
            EventBody::AssessmentSubmitted { baseline, choices, .. } => {
                self.baseline = Some(*baseline);
                self.choices = Some(choices.clone());
                self.phase = Phase::Assessed;
            }
            EventBody::InitialGoalChosen { model, projected_weeks, .. } => {
                self.model = Some(*model);
                self.projected_weeks = Some(*projected_weeks);
            }
            EventBody::WeekPlanned { goal, capability, maintenance, .. } => {
                self.committed_goal = Some(*goal);
                self.week_capability = Some(*capability);
                self.reports.clear();
                self.pending_proposal = None;
                self.week_closed = false;
                self.phase = if *maintenance || self.phase == Phase::Maintenance {
                    Phase::Maintenance
                } else {
                    Phase::Active
                };
            }
            EventBody::DailyScheduled { schedule } => {
                self.current_week = Some(schedule.clone());
            }
            EventBody::DailyReported { report } => {
                let week = self.current_week.as_mut().ok_or(CoachError::WeekNotPlanned)?;
                week.record(report.day_index, report.status)?;
                self.reports.push(*report);
            }
            EventBody::WeekClosed { summary, revision } => {
                let week = self.current_week.as_ref().ok_or(CoachError::WeekNotPlanned)?;
                self.history.push(WeekRecord {
                    week_index: week.week_index,
                    goal: summary.goal,
                    capability: self.week_capability.unwrap_or_default(),
                    summary: summary.clone(),
                    revision: *revision,
                });
                self.week_closed = true;
            }
            EventBody::RevisionApplied { model, .. } => {
                self.model = Some(*model);
            }
            EventBody::ProposalMade { proposal } => {
                self.pending_proposal = Some(*proposal);
                self.last_proposal = Some(*proposal);
            }
            EventBody::ProposalAnswered { answer, model, .. } => {
                self.model = Some(*model);
                if let Some(p) = self.last_proposal.as_mut() {
                    p.response = Some(*answer);
                }
                self.pending_proposal = None;
            }
        }
        Ok(())
    }

    /// Tentative plan for the week after the current one, used for the rolling view.
    pub fn next_week_preview(&self) -> Option<WeekSchedule> {
        let week = self.current_week.as_ref()?;
        let goal = self
            .pending_proposal
            .map(|p| p.proposed_goal)
            .or(self.committed_goal)?;
        Some(plan_week(&goal, week.week_index + 1))
    }

    pub fn rolling_view(&self, today: u8) -> Result<Vec<DayView>> {
        let current = self.current_week.as_ref().ok_or(CoachError::WeekNotPlanned)?;
        let next = self.next_week_preview().ok_or(CoachError::WeekNotPlanned)?;
        rolling_view(current, &next, today)
    }
}

/// Folds a log into a state. Sequence numbers must run 1, 2, 3, ... without gaps.
pub fn replay(events: &[Event]) -> Result<CoachState> {
    let mut state = CoachState::default();
    for (i, event) in events.iter().enumerate() {
        let expected = i as u64 + 1;
        if event.seq != expected {
            return Err(CoachError::SequenceGap { expected, found: event.seq });
        }
        state.apply(&event.trainee, &event.body)?;
    }
    Ok(state)
}

/// A trainee's coach: the state plus the log that produced it.
pub struct Coach {
    state: CoachState,
    log: Vec<Event>,
    clock: Arc<dyn Clock>,
}

impl fmt::Debug for Coach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Coach")
            .field("state", &self.state)
            .field("events", &self.log.len())
            .finish()
    }
}

impl Coach {
    pub fn new(
        trainee_id: impl Into<String>,
        name: Option<String>,
        config: CoachConfig,
        clock: Arc<dyn Clock>,
    ) -> Result<Self> {
        let trainee_id = trainee_id.into();
        if trainee_id.is_empty() {
            return Err(CoachError::InvalidInput("trainee id must not be empty".into()));
        }
        if !(config.target.0.is_finite() && config.target.0 > 0.0) || config.revision_weeks == 0 {
            return Err(CoachError::InvalidInput(
                "target must be positive and revisions must move at least one week".into(),
            ));
        }
        let mut coach = Coach { state: CoachState::default(), log: Vec::new(), clock };
        let created = coach.stamp(&trainee_id, vec![EventBody::TraineeCreated { name, config }]);
        coach.commit(created)?;
        Ok(coach)
    }

    pub fn from_events(events: Vec<Event>, clock: Arc<dyn Clock>) -> Result<Self> {
        let state = replay(&events)?;
        Ok(Coach { state, log: events, clock })
    }

    pub fn state(&self) -> &CoachState {
        &self.state
    }

    pub fn events(&self) -> &[Event] {
        &self.log
    }

    pub fn trainee_id(&self) -> &str {
        &self.state.trainee_id
    }

    fn stamp(&self, trainee: &str, bodies: Vec<EventBody>) -> Vec<Event> {
        let ts = self.clock.now();
        let first = self.log.len() as u64 + 1;
        bodies
            .into_iter()
            .enumerate()
            .map(|(i, body)| Event { seq: first + i as u64, ts, trainee: trainee.to_string(), body })
            .collect()
    }

    /// Validates `cmd` and returns the stamped events it would append.
    pub fn prepare(&self, cmd: &Command) -> Result<Vec<Event>> {
        let bodies = self.state.decide(cmd)?;
        Ok(self.stamp(&self.state.trainee_id, bodies))
    }

    /// Applies events produced by [`Coach::prepare`]; all or nothing.
    pub fn commit(&mut self, events: Vec<Event>) -> Result<()> {
        let mut next = self.state.clone();
        for (i, event) in events.iter().enumerate() {
            let expected = self.log.len() as u64 + 1 + i as u64;
            if event.seq != expected {
                return Err(CoachError::SequenceGap { expected, found: event.seq });
            }
            next.apply(&event.trainee, &event.body)?;
        }
        self.state = next;
        self.log.extend(events);
        Ok(())
    }

    pub fn execute(&mut self, cmd: &Command) -> Result<Vec<Event>> {
        let events = self.prepare(cmd)?;
        self.commit(events.clone())?;
        Ok(events)
    }

    pub fn submit_assessment(&mut self, report: &AssessmentReport) -> Result<FirstWeekChoiceSet> {
        self.execute(&Command::Assess(*report))?;
        self.state.choices.clone().ok_or(CoachError::WeekNotPlanned)
    }

    pub fn choose_goal(&mut self, goal: &WeeklyGoal) -> Result<()> {
        self.execute(&Command::ChooseGoal(*goal)).map(drop)
    }

    pub fn report(&mut self, report: &DailyReport) -> Result<()> {
        self.execute(&Command::Report(*report)).map(drop)
    }

    /// Closes the current week; a proposal that keeps the volume is committed immediately.
    pub fn close_week(&mut self) -> Result<Proposal> {
        self.execute(&Command::CloseWeek)?;
        self.state.last_proposal.ok_or(CoachError::NoPendingProposal)
    }

    pub fn respond(&mut self, answer: Answer) -> Result<()> {
        self.execute(&Command::Respond(answer)).map(drop)
    }
}
