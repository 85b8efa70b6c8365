//! Placement of weekly sessions on days, with rest days spread evenly.

use serde::{Deserialize, Serialize};

use crate::catalog::WeeklyGoal;
use crate::error::{CoachError, Result};
use crate::report::ReportStatus;

pub const DAYS_PER_WEEK: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayKind {
    Session,
    Rest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayStatus {
    #[default]
    Unreported,
    Done,
    Almost,
    Nope,
}

impl From<ReportStatus> for DayStatus {
    fn from(status: ReportStatus) -> Self {
        match status {
            ReportStatus::Done => DayStatus::Done,
            ReportStatus::Almost => DayStatus::Almost,
            ReportStatus::Nope => DayStatus::Nope,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayPlan {
    pub kind: DayKind,
    pub status: DayStatus,
}

impl DayPlan {
    pub fn is_session(&self) -> bool {
        self.kind == DayKind::Session
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekSchedule {
    pub week_index: u32,
    pub goal: WeeklyGoal,
    pub days: [DayPlan; DAYS_PER_WEEK],
}

impl WeekSchedule {
    pub fn session_days(&self) -> Vec<u8> {
        self.indices(|d| d.is_session())
    }

    pub fn rest_days(&self) -> Vec<u8> {
        self.indices(|d| !d.is_session())
    }

    pub fn done_count(&self) -> u32 {
        self.days.iter().filter(|d| d.status == DayStatus::Done).count() as u32
    }

    fn indices(&self, pred: impl Fn(&DayPlan) -> bool) -> Vec<u8> {
        self.days
            .iter()
            .enumerate()
            .filter(|(_, d)| pred(d))
            .map(|(i, _)| i as u8)
            .collect()
    }

    pub fn day(&self, day: u8) -> Result<&DayPlan> {
        self.days.get(usize::from(day)).ok_or(CoachError::DayOutOfRange(day))
    }

    /// Records a report on a scheduled, not yet reported day.
    pub fn record(&mut self, day: u8, status: ReportStatus) -> Result<()> {
        let plan = self
            .days
            .get_mut(usize::from(day))
            .ok_or(CoachError::DayOutOfRange(day))?;
        if plan.status != DayStatus::Unreported {
            return Err(CoachError::DuplicateReport(day));
        }
        if !plan.is_session() {
            return Err(CoachError::RestDay(day));
        }
        plan.status = status.into();
        Ok(())
    }
}

/// Rest positions for `rest` rest days among `len` days: the midpoints
/// `floor((2k + 1) * len / (2 * rest))`.
pub fn rest_positions(len: usize, rest: usize) -> Vec<usize> {
    (0..rest).map(|k| (2 * k + 1) * len / (2 * rest)).collect()
}

pub fn plan_week(goal: &WeeklyGoal, week_index: u32) -> WeekSchedule {
    let sessions = (goal.frequency as usize).min(DAYS_PER_WEEK);
    let rest = rest_positions(DAYS_PER_WEEK, DAYS_PER_WEEK - sessions);
    let mut days = [DayPlan { kind: DayKind::Session, status: DayStatus::Unreported }; DAYS_PER_WEEK];
    for i in rest {
        days[i].kind = DayKind::Rest;
    }
    WeekSchedule { week_index, goal: *goal, days }
}

/// Spreads the sessions still needed this week over the unreported days after `today`.
pub fn reschedule(schedule: &WeekSchedule, today: u8) -> Result<WeekSchedule> {
    if usize::from(today) >= DAYS_PER_WEEK {
        return Err(CoachError::DayOutOfRange(today));
    }
    let needed = schedule.goal.frequency.saturating_sub(schedule.done_count()) as usize;
    if needed == 0 {
        return Ok(schedule.clone());
    }
    let open: Vec<usize> = (usize::from(today) + 1..DAYS_PER_WEEK)
        .filter(|&i| schedule.days[i].status == DayStatus::Unreported)
        .collect();
    let mut next = schedule.clone();
    let rest = if needed >= open.len() {
        Vec::new()
    } else {
        rest_positions(open.len(), open.len() - needed)
    };
    for (k, &day) in open.iter().enumerate() {
        next.days[day].kind = if rest.contains(&k) { DayKind::Rest } else { DayKind::Session };
    }
    Ok(next)
}

/// One day of the rolling seven-day view.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DayView {
    pub week_index: u32,
    pub day_index: u8,
    pub kind: DayKind,
    pub status: DayStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub goal: Option<WeeklyGoal>,
}

/// Seven contiguous days starting at `today`: the rest of this week, then the start of next.
pub fn rolling_view(current: &WeekSchedule, next: &WeekSchedule, today: u8) -> Result<Vec<DayView>> {
    if usize::from(today) >= DAYS_PER_WEEK {
        return Err(CoachError::DayOutOfRange(today));
    }
    let view = |week: &WeekSchedule, i: usize| {
        let plan = week.days[i];
        DayView {
            week_index: week.week_index,
            day_index: i as u8,
            kind: plan.kind,
            status: plan.status,
            goal: plan.is_session().then_some(week.goal),
        }
    };
    let today = usize::from(today);
    Ok((today..DAYS_PER_WEEK)
        .map(|i| view(current, i))
        .chain((0..today).map(|i| view(next, i)))
        .collect())
}
