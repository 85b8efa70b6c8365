//! Weekly goal selection and end-of-week model revisions.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::catalog::{enumerate_combos, harder_than, Volume, WeeklyGoal};
use crate::error::{CoachError, Result};
use crate::model::StaircaseModel;
use crate::report::{DailyReport, Reason, ReportStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekSummary {
    pub goal: WeeklyGoal,
    pub done_count: u32,
    pub scheduled: u32,
    pub completion: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_rpe: Option<f64>,
    /// Reasons given on `almost` and `nope` reports, in report order.
    #[serde(default)]
    pub reasons: Vec<Reason>,
}

impl WeekSummary {
    pub fn has_reason(&self, reason: Reason) -> bool {
        self.reasons.contains(&reason)
    }

    /// Completion strictly below one half.
    fn under_half(&self) -> bool {
        2 * self.done_count < self.scheduled
    }

    /// Completion of at least three quarters.
    fn three_quarters(&self) -> bool {
        4 * self.done_count >= 3 * self.scheduled
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Revision {
    Regress,
    Progress,
    Shift,
    None,
}

pub fn summarize_week(reports: &[DailyReport], goal: &WeeklyGoal) -> WeekSummary {
    let scheduled = goal.frequency;
    let rpes: Vec<u8> = reports
        .iter()
        .filter(|r| r.status == ReportStatus::Done)
        .filter_map(|r| r.rpe)
        .collect();
    let done_count = (rpes.len() as u32).min(scheduled);
    let mean_rpe = (!rpes.is_empty())
        .then(|| rpes.iter().map(|&r| f64::from(r)).sum::<f64>() / rpes.len() as f64);
    let reasons = reports
        .iter()
        .filter(|r| r.status != ReportStatus::Done)
        .filter_map(|r| r.reason)
        .collect();
    WeekSummary {
        goal: *goal,
        done_count,
        scheduled,
        completion: if scheduled == 0 { 0.0 } else { f64::from(done_count) / f64::from(scheduled) },
        mean_rpe,
        reasons,
    }
}

/// Rule priority is Regress, then Progress, then Shift.
pub fn decide_revision(summary: &WeekSummary) -> Revision {
    if summary.scheduled == 0 {
        return Revision::None;
    }
    let rpe_at_least = |x: f64| summary.mean_rpe.is_some_and(|m| m >= x);
    let rpe_at_most = |x: f64| summary.mean_rpe.is_some_and(|m| m <= x);

    if summary.under_half() || rpe_at_least(4.0) || summary.has_reason(Reason::TooHard) {
        Revision::Regress
    } else if summary.three_quarters() && rpe_at_most(2.0) {
        Revision::Progress
    } else if !summary.three_quarters() && summary.has_reason(Reason::NoTime) {
        Revision::Shift
    } else {
        Revision::None
    }
}

/// Applies a revision with `delta` weeks per manipulation. Narrowing stops at a span of one
/// week.
pub fn apply_revision(model: &StaircaseModel, revision: Revision, delta: u32) -> StaircaseModel {
    let delta_i = i32::try_from(delta).unwrap_or(i32::MAX);
    match revision {
        Revision::Regress => model
            .change_step(delta_i)
            .unwrap_or(*model)
            .shift(delta),
        Revision::Progress => {
            let narrow = delta_i.min(model.span().saturating_sub(1) as i32);
            model.change_step(-narrow).unwrap_or(*model)
        }
        Revision::Shift => model.shift(delta),
        Revision::None => *model,
    }
}

/// Picks the week's goal for `capability`.
///
/// With `previous` but no `previous_capability` this is the first week and `previous` is the
/// trainee's own choice. With neither, the easiest candidate is returned.
pub fn select_goal(
    capability: Volume,
    previous: Option<&WeeklyGoal>,
    previous_capability: Option<Volume>,
) -> Result<WeeklyGoal> {
    let candidates = enumerate_combos(capability);
    match (previous, previous_capability) {
        (None, _) => candidates
            .first()
            .copied()
            .ok_or(CoachError::NoFeasibleGoal(capability.0)),
        (Some(chosen), None) => {
            if candidates.contains(chosen) {
                return Ok(*chosen);
            }
            let target = chosen.volume().0;
            let nearest = candidates.iter().min_by(|a, b| {
                let da = (a.volume().0 - target).abs();
                let db = (b.volume().0 - target).abs();
                da.partial_cmp(&db)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| a.difficulty_cmp(b))
            });
            Ok(nearest.copied().unwrap_or(*chosen))
        }
        (Some(prev), Some(prev_cap)) => {
            if capability.0 == prev_cap.0 {
                return Ok(*prev);
            }
            let dropped = capability.0 < prev_cap.0;
            let pick = candidates.into_iter().find(|c| {
                if dropped {
                    !harder_than(c, prev)
                } else {
                    !harder_than(prev, c)
                }
            });
            Ok(pick.unwrap_or(*prev))
        }
    }
}
