//! Daily session reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoachError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Done,
    Almost,
    Nope,
}

/// Why a session was not completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Forgot,
    NoTime,
    DontEnjoy,
    NotUseful,
    TooHard,
}

impl Reason {
    pub const ALL: [Reason; 5] =
        [Reason::Forgot, Reason::NoTime, Reason::DontEnjoy, Reason::NotUseful, Reason::TooHard];

    pub fn label(self) -> &'static str {
        match self {
            Reason::Forgot => "forgot about it",
            Reason::NoTime => "didn't have time",
            Reason::DontEnjoy => "don't enjoy it",
            Reason::NotUseful => "don't find it useful",
            Reason::TooHard => "it was too hard",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Descriptors for the 1-5 exertion scale; 3 is the on-target level.
pub const RPE_LABELS: [&str; 5] = [
    "Not tired at all",
    "A little tired",
    "Tired, but can still talk",
    "Very tired, hard to talk",
    "Exhausted",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ReportFields")]
pub struct DailyReport {
    pub day_index: u8,
    pub week_index: u32,
    pub status: ReportStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rpe: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_efficacy: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affective_attitude: Option<u8>,
}

#[derive(Deserialize)]
struct ReportFields {
    day_index: u8,
    week_index: u32,
    status: ReportStatus,
    #[serde(default)]
    rpe: Option<u8>,
    #[serde(default)]
    reason: Option<Reason>,
    #[serde(default)]
    self_efficacy: Option<u8>,
    #[serde(default)]
    affective_attitude: Option<u8>,
}

impl TryFrom<ReportFields> for DailyReport {
    type Error = CoachError;

    fn try_from(f: ReportFields) -> Result<Self> {
        let report = DailyReport {
            day_index: f.day_index,
            week_index: f.week_index,
            status: f.status,
            rpe: f.rpe,
            reason: f.reason,
            self_efficacy: f.self_efficacy,
            affective_attitude: f.affective_attitude,
        };
        report.validate()?;
        Ok(report)
    }
}

impl DailyReport {
    pub fn done(week_index: u32, day_index: u8, rpe: u8) -> Self {
        DailyReport {
            day_index,
            week_index,
            status: ReportStatus::Done,
            rpe: Some(rpe),
            reason: None,
            self_efficacy: None,
            affective_attitude: None,
        }
    }

    pub fn missed(week_index: u32, day_index: u8, status: ReportStatus, reason: Reason) -> Self {
        DailyReport {
            day_index,
            week_index,
            status,
            rpe: None,
            reason: Some(reason),
            self_efficacy: None,
            affective_attitude: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.day_index > 6 {
            return Err(CoachError::DayOutOfRange(self.day_index));
        }
        if self.week_index == 0 {
            return Err(CoachError::InvalidInput("week index starts at 1".into()));
        }
        let done = self.status == ReportStatus::Done;
        if done != self.rpe.is_some() {
            return Err(CoachError::InvalidInput(
                "an exertion rating is required exactly when the session was done".into(),
            ));
        }
        if done == self.reason.is_some() {
            return Err(CoachError::InvalidInput(
                "a reason is required exactly when the session was not done".into(),
            ));
        }
        for (name, value) in [
            ("rpe", self.rpe),
            ("self_efficacy", self.self_efficacy),
            ("affective_attitude", self.affective_attitude),
        ] {
            if let Some(v) = value {
                if !(1..=5).contains(&v) {
                    return Err(CoachError::InvalidInput(format!("{name} must be in 1..=5, got {v}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rpe_iff_done() {
        assert!(DailyReport::done(1, 0, 3).validate().is_ok());
        let mut bad = DailyReport::done(1, 0, 3);
        bad.reason = Some(Reason::Forgot);
        assert!(bad.validate().is_err());
        let mut bad = DailyReport::missed(1, 0, ReportStatus::Nope, Reason::Forgot);
        bad.rpe = Some(2);
        assert!(bad.validate().is_err());
        assert!(DailyReport::done(1, 0, 6).validate().is_err());
        assert!(DailyReport::done(1, 7, 3).validate().is_err());
    }

    #[test]
    fn deserialization_checks_invariants() {
        let ok = r#"{"day_index":2,"week_index":1,"status":"almost","reason":"no_time"}"#;
        let report: DailyReport = serde_json::from_str(ok).unwrap();
        assert_eq!(report.reason, Some(Reason::NoTime));
        let bad = r#"{"day_index":2,"week_index":1,"status":"done"}"#;
        assert!(serde_json::from_str::<DailyReport>(bad).is_err());
    }
}
