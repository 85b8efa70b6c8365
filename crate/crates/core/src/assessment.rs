//! Baseline capability from the activity questionnaire and first-week goal choices.

use serde::{Deserialize, Serialize};

use crate::catalog::{
    volume, ExerciseType, Volume, WeeklyGoal, DURATION_STEP, MAX_DURATION, MAX_FREQUENCY,
    MIN_DURATION, MIN_FREQUENCY,
};
use crate::error::{CoachError, Result};
use crate::model::StaircaseModel;

/// Smallest weekly goal in the catalog (Moderate, 5 min, 3x): 45 MET-minutes.
pub const MIN_STEP: f64 = 45.0;

/// Questionnaire intensity categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivityLevel {
    Low,
    Moderate,
    Vigorous,
}

impl ActivityLevel {
    pub const ALL: [ActivityLevel; 3] =
        [ActivityLevel::Low, ActivityLevel::Moderate, ActivityLevel::Vigorous];

    pub fn met(self) -> f64 {
        match self {
            ActivityLevel::Low => 3.0,
            ActivityLevel::Moderate => 5.0,
            ActivityLevel::Vigorous => 8.0,
        }
    }

    pub fn example(self) -> &'static str {
        match self {
            ActivityLevel::Low => "stretching",
            ActivityLevel::Moderate => "fast walking",
            ActivityLevel::Vigorous => "playing a sport",
        }
    }
}

/// Typical-week activity for one category.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ActivityAnswer {
    pub duration_min: f64,
    pub frequency: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AssessmentReport {
    #[serde(default)]
    pub low: ActivityAnswer,
    #[serde(default)]
    pub moderate: ActivityAnswer,
    #[serde(default)]
    pub vigorous: ActivityAnswer,
}

impl AssessmentReport {
    pub fn answer(&self, level: ActivityLevel) -> ActivityAnswer {
        match level {
            ActivityLevel::Low => self.low,
            ActivityLevel::Moderate => self.moderate,
            ActivityLevel::Vigorous => self.vigorous,
        }
    }

    pub fn answer_mut(&mut self, level: ActivityLevel) -> &mut ActivityAnswer {
        match level {
            ActivityLevel::Low => &mut self.low,
            ActivityLevel::Moderate => &mut self.moderate,
            ActivityLevel::Vigorous => &mut self.vigorous,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for level in ActivityLevel::ALL {
            let a = self.answer(level);
            if !a.duration_min.is_finite() || a.duration_min < 0.0 {
                return Err(CoachError::InvalidInput(format!(
                    "{level:?} duration must be non-negative, got {}",
                    a.duration_min
                )));
            }
        }
        Ok(())
    }
}

/// First-week options: one exercise and frequency, durations rising in 5-minute steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstWeekChoiceSet {
    pub exercise: ExerciseType,
    pub frequency: u32,
    pub durations: Vec<u32>,
    pub goals: Vec<WeeklyGoal>,
}

impl FirstWeekChoiceSet {
    fn from_base(base: WeeklyGoal) -> Self {
        let durations: Vec<u32> = (base.duration_min..=MAX_DURATION)
            .step_by(DURATION_STEP as usize)
            .collect();
        let goals = durations
            .iter()
            .map(|&duration_min| WeeklyGoal { duration_min, ..base })
            .collect();
        FirstWeekChoiceSet { exercise: base.exercise, frequency: base.frequency, durations, goals }
    }

    pub fn contains(&self, goal: &WeeklyGoal) -> bool {
        self.goals.contains(goal)
    }
}

pub fn baseline_capability(report: &AssessmentReport) -> Volume {
    let total = ActivityLevel::ALL
        .iter()
        .map(|&level| {
            let a = report.answer(level);
            level.met() * a.duration_min.max(0.0) * f64::from(a.frequency)
        })
        .sum();
    Volume(total)
}

pub fn first_week_choices(c0: Volume) -> FirstWeekChoiceSet {
    let hardest = WeeklyGoal {
        exercise: ExerciseType::Brisk,
        duration_min: MAX_DURATION,
        frequency: MAX_FREQUENCY,
    };
    if c0.0 <= 0.0 {
        return FirstWeekChoiceSet::from_base(WeeklyGoal {
            exercise: ExerciseType::Moderate,
            duration_min: MIN_DURATION,
            frequency: MIN_FREQUENCY,
        });
    }
    let Some(exercise) = ExerciseType::ALL.into_iter().find(|e| {
        volume(&WeeklyGoal { exercise: *e, duration_min: MAX_DURATION, frequency: MAX_FREQUENCY }).0
            >= c0.0
    }) else {
        return FirstWeekChoiceSet::from_base(hardest);
    };
    let base = (MIN_DURATION..=MAX_DURATION)
        .step_by(DURATION_STEP as usize)
        .find_map(|duration_min| {
            (MIN_FREQUENCY..=MAX_FREQUENCY)
                .map(|frequency| WeeklyGoal { exercise, duration_min, frequency })
                .find(|g| volume(g).0 >= c0.0)
        })
        .unwrap_or(hardest);
    FirstWeekChoiceSet::from_base(base)
}

/// Staircase whose first step reaches the chosen goal; the span is the projected number of
/// weeks to the target.
pub fn initialize_model(c0: Volume, chosen: &WeeklyGoal, cn: Volume) -> Result<StaircaseModel> {
    if !first_week_choices(c0).contains(chosen) {
        return Err(CoachError::ChoiceNotOffered(*chosen));
    }
    StaircaseModel::from_first_step(c0, cn, volume(chosen).0 - c0.0, MIN_STEP)
}
