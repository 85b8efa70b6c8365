//! Scripted trainees driven through the coach week by week.

use std::io::Write;
use std::sync::Arc;

use chrono::{DateTime, TimeDelta, TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assessment::{ActivityAnswer, AssessmentReport, FirstWeekChoiceSet};
use crate::catalog::{ExerciseType, WeeklyGoal};
use crate::engine::{Answer, Coach, CoachConfig, Direction, SimClock};
use crate::error::{CoachError, Result};
use crate::planner::Revision;
use crate::report::{DailyReport, Reason, ReportStatus};
use crate::schedule::{DayStatus, DAYS_PER_WEEK};

/// Which first-week option the trainee picks, counted from the easiest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialChoiceRule {
    Easiest,
    Hardest,
    Index(usize),
}

impl Default for InitialChoiceRule {
    fn default() -> Self {
        InitialChoiceRule::Index(1)
    }
}

impl InitialChoiceRule {
    pub fn pick(&self, choices: &FirstWeekChoiceSet) -> Option<WeeklyGoal> {
        let last = choices.goals.len().checked_sub(1)?;
        let i = match *self {
            InitialChoiceRule::Easiest => 0,
            InitialChoiceRule::Hardest => last,
            InitialChoiceRule::Index(i) => i.min(last),
        };
        choices.goals.get(i).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegotiationRule {
    #[default]
    AlwaysAgree,
    AlwaysDisagree,
    /// Keeps last week's goal whenever the coach proposes more volume.
    DisagreeIncreases,
}

impl NegotiationRule {
    pub fn answer(&self, direction: Direction) -> Answer {
        match (self, direction) {
            (NegotiationRule::AlwaysAgree, _) => Answer::Agree,
            (NegotiationRule::AlwaysDisagree, _) => Answer::Disagree,
            (NegotiationRule::DisagreeIncreases, Direction::Increase) => Answer::Disagree,
            (NegotiationRule::DisagreeIncreases, _) => Answer::Agree,
        }
    }
}

/// How the trainee behaves during a week.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeekBehavior {
    /// Fraction of scheduled sessions completed; rounded up to whole sessions.
    pub compliance: f64,
    /// Exertion reported for completed sessions.
    pub rpe: u8,
    #[serde(default = "default_miss_status")]
    pub miss_status: ReportStatus,
    #[serde(default = "default_miss_reason")]
    pub miss_reason: Reason,
}

fn default_miss_status() -> ReportStatus {
    ReportStatus::Nope
}

fn default_miss_reason() -> Reason {
    Reason::TooHard
}

impl WeekBehavior {
    pub fn compliant(rpe: u8) -> Self {
        WeekBehavior {
            compliance: 1.0,
            rpe,
            miss_status: default_miss_status(),
            miss_reason: default_miss_reason(),
        }
    }

    pub fn sessions_done(&self, frequency: u32) -> u32 {
        let done = (self.compliance * f64::from(frequency) - 1e-9).ceil();
        (done.max(0.0) as u32).min(frequency)
    }
}

/// Goals the trainee finds too demanding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Difficulty {
    /// Sessions longer than this many minutes.
    pub duration_over: u32,
    /// Any exercise more intense than this one.
    pub intensity_above: ExerciseType,
}

impl Difficulty {
    pub fn applies(&self, goal: &WeeklyGoal) -> bool {
        goal.duration_min > self.duration_over || goal.exercise > self.intensity_above
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraineeProfile {
    pub name: String,
    #[serde(default)]
    pub assessment: AssessmentReport,
    #[serde(default)]
    pub initial_choice_rule: InitialChoiceRule,
    #[serde(default)]
    pub negotiation_rule: NegotiationRule,
    pub usual: WeekBehavior,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub struggles_when: Option<Difficulty>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub struggling: Option<WeekBehavior>,
}

impl TraineeProfile {
    pub fn validate(&self) -> Result<()> {
        self.assessment.validate()?;
        for b in std::iter::once(&self.usual).chain(self.struggling.as_ref()) {
            if !(0.0..=1.0).contains(&b.compliance) {
                return Err(CoachError::InvalidInput(format!(
                    "compliance must be in [0, 1], got {}",
                    b.compliance
                )));
            }
            if !(1..=5).contains(&b.rpe) {
                return Err(CoachError::InvalidInput(format!("rpe must be in 1..=5, got {}", b.rpe)));
            }
            if b.miss_status == ReportStatus::Done {
                return Err(CoachError::InvalidInput("a missed session cannot be reported as done".into()));
            }
        }
        Ok(())
    }

    pub fn behavior_for(&self, goal: &WeeklyGoal) -> WeekBehavior {
        match (self.struggles_when, self.struggling) {
            (Some(when), Some(behavior)) if when.applies(goal) => behavior,
            _ => self.usual,
        }
    }

    /// Fraction of the week's sessions completed at `goal`.
    pub fn compliance(&self, goal: &WeeklyGoal) -> f64 {
        let b = self.behavior_for(goal);
        f64::from(b.sessions_done(goal.frequency)) / f64::from(goal.frequency)
    }

    pub fn rpe(&self, goal: &WeeklyGoal) -> u8 {
        self.behavior_for(goal).rpe
    }
}

/// The three scripted trainees: A complies fully at RPE 3; B and C manage half their sessions
/// at RPE 4 once sessions exceed 20 minutes or the pace exceeds moderate walking. C starts
/// from 10 minutes of moderate activity three times a week.
pub fn builtin_profile(name: &str) -> Result<TraineeProfile> {
    let struggling = WeekBehavior {
        compliance: 0.5,
        rpe: 4,
        miss_status: ReportStatus::Nope,
        miss_reason: Reason::TooHard,
    };
    let limits = Difficulty { duration_over: 20, intensity_above: ExerciseType::Moderate };
    let base = TraineeProfile {
        name: String::new(),
        assessment: AssessmentReport::default(),
        initial_choice_rule: InitialChoiceRule::default(),
        negotiation_rule: NegotiationRule::default(),
        usual: WeekBehavior::compliant(3),
        struggles_when: None,
        struggling: None,
    };
    match name.trim().to_ascii_uppercase().as_str() {
        "A" => Ok(TraineeProfile { name: "A".into(), ..base }),
        "B" => Ok(TraineeProfile {
            name: "B".into(),
            struggles_when: Some(limits),
            struggling: Some(struggling),
            ..base
        }),
        "C" => Ok(TraineeProfile {
            name: "C".into(),
            assessment: AssessmentReport {
                moderate: ActivityAnswer { duration_min: 10.0, frequency: 3 },
                ..AssessmentReport::default()
            },
            struggles_when: Some(limits),
            struggling: Some(struggling),
            ..base
        }),
        _ => Err(CoachError::UnknownProfile(name.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekOutcome {
    pub week: u32,
    pub committed_goal: WeeklyGoal,
    pub goal_volume: f64,
    pub performed_volume: f64,
    pub mean_rpe: Option<f64>,
    pub revision: Revision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub profile: String,
    pub seed: u64,
    pub projected_weeks: u32,
    pub weeks: Vec<WeekOutcome>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    week: u32,
    goal_type: &'a str,
    duration: u32,
    frequency: u32,
    goal_volume: f64,
    performed_volume: f64,
    mean_rpe: Option<String>,
    revision: &'a str,
}

fn exercise_key(e: ExerciseType) -> &'static str {
    match e {
        ExerciseType::Moderate => "moderate",
        ExerciseType::IntervalA => "interval_a",
        ExerciseType::IntervalB => "interval_b",
        ExerciseType::Brisk => "brisk",
    }
}

fn revision_key(r: Revision) -> &'static str {
    match r {
        Revision::Regress => "regress",
        Revision::Progress => "progress",
        Revision::Shift => "shift",
        Revision::None => "none",
    }
}

impl Trajectory {
    pub fn goal_volumes(&self) -> Vec<f64> {
        self.weeks.iter().map(|w| w.goal_volume).collect()
    }

    /// Writes `week,goal_type,duration,frequency,goal_volume,performed_volume,mean_rpe,revision`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        for w in &self.weeks {
            writer.serialize(CsvRow {
                week: w.week,
                goal_type: exercise_key(w.committed_goal.exercise),
                duration: w.committed_goal.duration_min,
                frequency: w.committed_goal.frequency,
                goal_volume: w.goal_volume,
                performed_volume: w.performed_volume,
                mean_rpe: w.mean_rpe.map(|m| format!("{m:.2}")),
                revision: revision_key(w.revision),
            })?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| CoachError::InvalidInput(e.to_string()))
    }
}

/// Monday morning the simulated program starts.
pub fn simulation_start() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2024, 1, 1, 8, 0, 0).single().unwrap_or_default()
}

pub fn simulate(profile: &TraineeProfile, weeks: u32, seed: u64) -> Result<Trajectory> {
    simulate_with_coach(profile, weeks, seed).map(|(t, _)| t)
}

/// Runs the simulation and also returns the coach, whose event log records every interaction.
pub fn simulate_with_coach(profile: &TraineeProfile, weeks: u32, seed: u64) -> Result<(Trajectory, Coach)> {
    profile.validate()?;
    if weeks == 0 {
        return Err(CoachError::InvalidInput("simulate at least one week".into()));
    }
    let start = simulation_start();
    let clock = Arc::new(SimClock::starting_at(start));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coach = Coach::new(
        format!("sim-{}-{seed}", profile.name),
        Some(profile.name.clone()),
        CoachConfig::default(),
        clock.clone(),
    )?;

    let choices = coach.submit_assessment(&profile.assessment)?;
    let chosen = profile
        .initial_choice_rule
        .pick(&choices)
        .ok_or_else(|| CoachError::InvalidInput("no first-week choices offered".into()))?;
    coach.choose_goal(&chosen)?;

    let mut outcomes = Vec::with_capacity(weeks as usize);
    for week in 1..=weeks {
        let goal = coach.state().committed_goal.ok_or(CoachError::WeekNotPlanned)?;
        let behavior = profile.behavior_for(&goal);
        let target = behavior.sessions_done(goal.frequency);
        let mut done = 0;

        for day in 0..DAYS_PER_WEEK as u8 {
            clock.set(start + TimeDelta::days(i64::from((week - 1) * 7 + u32::from(day))));
            let schedule = coach.state().current_week.clone().ok_or(CoachError::WeekNotPlanned)?;
            let plan = schedule.days[usize::from(day)];
            if !plan.is_session() || plan.status != DayStatus::Unreported {
                continue;
            }
            let slots_left = schedule.days[usize::from(day)..]
                .iter()
                .filter(|d| d.is_session() && d.status == DayStatus::Unreported)
                .count() as u32;
            let still_needed = target.saturating_sub(done);
            let do_it = if still_needed == 0 {
                false
            } else if still_needed >= slots_left {
                true
            } else {
                rng.random_bool(0.5)
            };
            let report = if do_it {
                done += 1;
                DailyReport::done(week, day, behavior.rpe)
            } else {
                DailyReport::missed(week, day, behavior.miss_status, behavior.miss_reason)
            };
            coach.report(&report)?;
        }

        let proposal = coach.close_week()?;
        if coach.state().pending_proposal.is_some() {
            coach.respond(profile.negotiation_rule.answer(proposal.direction))?;
        }
        let record = coach.state().history.last().ok_or(CoachError::WeekNotPlanned)?;
        outcomes.push(WeekOutcome {
            week,
            committed_goal: record.goal,
            goal_volume: record.goal.volume().0,
            performed_volume: record.performed_volume(),
            mean_rpe: record.summary.mean_rpe,
            revision: record.revision,
        });
    }

    let trajectory = Trajectory {
        profile: profile.name.clone(),
        seed,
        projected_weeks: coach.state().projected_weeks.unwrap_or_default(),
        weeks: outcomes,
    };
    Ok((trajectory, coach))
}
