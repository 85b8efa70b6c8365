//! Walking exercise catalog and weekly goal arithmetic.
//!
//! Intensities are kept in tenths of a MET so that volumes of catalog goals
//! are computed exactly (for example `3.6 * 25 * 5` is exactly 450).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CoachError;

/// Weekly volume recommended by the AHA, in MET-minutes.
pub const AHA_TARGET: f64 = 750.0;

/// Session durations are multiples of this many minutes.
pub const DURATION_STEP: u32 = 5;
pub const MIN_DURATION: u32 = 5;
pub const MAX_DURATION: u32 = 30;
pub const MIN_FREQUENCY: u32 = 3;
pub const MAX_FREQUENCY: u32 = 5;

/// Walking exercises in increasing order of intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExerciseType {
    Moderate,
    IntervalA,
    IntervalB,
    Brisk,
}

impl ExerciseType {
    pub const ALL: [ExerciseType; 4] = [
        ExerciseType::Moderate,
        ExerciseType::IntervalA,
        ExerciseType::IntervalB,
        ExerciseType::Brisk,
    ];

    /// Intensity in tenths of a MET.
    pub const fn met_tenths(self) -> u32 {
        match self {
            ExerciseType::Moderate => 30,
            ExerciseType::IntervalA => 36,
            ExerciseType::IntervalB => 48,
            ExerciseType::Brisk => 60,
        }
    }

    pub fn met(self) -> f64 {
        f64::from(self.met_tenths()) / 10.0
    }

    pub const fn name(self) -> &'static str {
        match self {
            ExerciseType::Moderate => "Moderate",
            ExerciseType::IntervalA => "Interval A",
            ExerciseType::IntervalB => "Interval B",
            ExerciseType::Brisk => "Brisk",
        }
    }

    pub const fn description(self) -> &'static str {
        match self {
            ExerciseType::Moderate => "Walking at normal speed, 1 mile in 30-45 minutes",
            ExerciseType::IntervalA => "4 minutes moderate and 1 minute brisk walking",
            ExerciseType::IntervalB => "2 minutes moderate and 3 minutes brisk walking",
            ExerciseType::Brisk => {
                "Walking while vigorously pumping arms, 1 mile in 15-20 minutes"
            }
        }
    }
}

impl fmt::Display for ExerciseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ExerciseType {
    type Err = CoachError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "moderate" => Ok(ExerciseType::Moderate),
            "intervala" => Ok(ExerciseType::IntervalA),
            "intervalb" => Ok(ExerciseType::IntervalB),
            "brisk" => Ok(ExerciseType::Brisk),
            _ => Err(CoachError::InvalidInput(format!("unknown exercise type `{s}`"))),
        }
    }
}

/// Weekly volume in MET-minutes.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Volume(pub f64);

impl Volume {
    pub const ZERO: Volume = Volume(0.0);

    pub fn new(value: f64) -> Result<Self, CoachError> {
        if value.is_finite() && value >= 0.0 {
            Ok(Volume(value))
        } else {
            Err(CoachError::InvalidInput(format!(
                "volume must be a finite non-negative number, got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A weekly walking goal: `frequency` sessions of `duration_min` minutes of `exercise`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeeklyGoal {
    pub exercise: ExerciseType,
    pub duration_min: u32,
    pub frequency: u32,
}

impl WeeklyGoal {
    pub fn new(exercise: ExerciseType, duration_min: u32, frequency: u32) -> Result<Self, CoachError> {
        let goal = WeeklyGoal { exercise, duration_min, frequency };
        goal.validate()?;
        Ok(goal)
    }

    pub fn validate(&self) -> Result<(), CoachError> {
        if !self.duration_min.is_multiple_of(DURATION_STEP)
            || !(MIN_DURATION..=MAX_DURATION).contains(&self.duration_min)
        {
            return Err(CoachError::InvalidInput(format!(
                "duration must be a multiple of {DURATION_STEP} in [{MIN_DURATION}, {MAX_DURATION}], got {}",
                self.duration_min
            )));
        }
        if !(MIN_FREQUENCY..=MAX_FREQUENCY).contains(&self.frequency) {
            return Err(CoachError::InvalidInput(format!(
                "frequency must be in [{MIN_FREQUENCY}, {MAX_FREQUENCY}], got {}",
                self.frequency
            )));
        }
        Ok(())
    }

    pub fn volume(&self) -> Volume {
        volume(self)
    }

    /// MET-minutes of a single session.
    pub fn session_volume(&self) -> f64 {
        f64::from(self.exercise.met_tenths() * self.duration_min) / 10.0
    }

    fn difficulty_key(&self) -> (u32, u32, u32) {
        (self.exercise.met_tenths(), self.duration_min, self.frequency)
    }

    /// Lexicographic difficulty: intensity, then duration, then frequency.
    pub fn difficulty_cmp(&self, other: &WeeklyGoal) -> Ordering {
        self.difficulty_key().cmp(&other.difficulty_key())
    }
}

impl fmt::Display for WeeklyGoal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} min x {}/week",
            self.exercise, self.duration_min, self.frequency
        )
    }
}

pub fn volume(goal: &WeeklyGoal) -> Volume {
    let tenths = goal.exercise.met_tenths() * goal.duration_min * goal.frequency;
    Volume(f64::from(tenths) / 10.0)
}

/// True iff `a` is strictly harder than `b`.
pub fn harder_than(a: &WeeklyGoal, b: &WeeklyGoal) -> bool {
    a.difficulty_cmp(b) == Ordering::Greater
}

/// Every valid goal (4 exercises x 6 durations x 3 frequencies), easiest first.
pub fn goal_space() -> Vec<WeeklyGoal> {
    let mut goals = Vec::with_capacity(72);
    for exercise in ExerciseType::ALL {
        for duration_min in (MIN_DURATION..=MAX_DURATION).step_by(DURATION_STEP as usize) {
            for frequency in MIN_FREQUENCY..=MAX_FREQUENCY {
                goals.push(WeeklyGoal { exercise, duration_min, frequency });
            }
        }
    }
    goals
}

/// Rounds minutes to the nearest multiple of five; a remainder of exactly 2.5 rounds up.
pub fn round_to_step(minutes: f64) -> u32 {
    let steps = (minutes / f64::from(DURATION_STEP) + 0.5).floor();
    if steps <= 0.0 {
        0
    } else {
        (steps as u32).saturating_mul(DURATION_STEP)
    }
}

/// Goals whose rounded session duration delivers roughly `capability` MET-minutes per week.
pub fn enumerate_combos(capability: Volume) -> Vec<WeeklyGoal> {
    let mut combos = Vec::new();
    for exercise in ExerciseType::ALL {
        for frequency in MIN_FREQUENCY..=MAX_FREQUENCY {
            let minutes =
                capability.0 * 10.0 / f64::from(exercise.met_tenths() * frequency);
            let duration_min = round_to_step(minutes);
            if (MIN_DURATION..=MAX_DURATION).contains(&duration_min) {
                combos.push(WeeklyGoal { exercise, duration_min, frequency });
            }
        }
    }
    combos.sort_by(|a, b| a.difficulty_cmp(b));
    combos.dedup();
    combos
}

/// The easiest goal whose volume reaches `target`; the hardest catalog goal if none does.
pub fn maintenance_goal(target: Volume) -> WeeklyGoal {
    goal_space()
        .into_iter()
        .find(|g| g.volume().0 >= target.0)
        .unwrap_or(WeeklyGoal {
            exercise: ExerciseType::Brisk,
            duration_min: MAX_DURATION,
            frequency: MAX_FREQUENCY,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(exercise: ExerciseType, d: u32, f: u32) -> WeeklyGoal {
        WeeklyGoal::new(exercise, d, f).unwrap()
    }

    use ExerciseType::*;

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&g(Brisk, 25, 5)), Volume(750.0));
        assert_eq!(volume(&g(Moderate, 20, 5)), Volume(300.0));
        assert_eq!(volume(&g(Brisk, 30, 5)), Volume(900.0));
        assert_eq!(volume(&g(IntervalA, 25, 5)), Volume(450.0));
    }

    #[test]
    fn met_values_strictly_increase() {
        let mets: Vec<f64> = ExerciseType::ALL.iter().map(|e| e.met()).collect();
        assert_eq!(mets, vec![3.0, 3.6, 4.8, 6.0]);
    }

    #[test]
    fn harder_than_examples() {
        assert!(harder_than(&g(IntervalA, 5, 3), &g(Moderate, 30, 5)));
        assert!(!harder_than(&g(Moderate, 20, 5), &g(Moderate, 20, 5)));
        assert!(!harder_than(&g(Moderate, 20, 4), &g(Moderate, 20, 5)));
    }

    #[test]
    fn goal_validation() {
        assert!(WeeklyGoal::new(Moderate, 0, 3).is_err());
        assert!(WeeklyGoal::new(Moderate, 35, 3).is_err());
        assert!(WeeklyGoal::new(Moderate, 12, 3).is_err());
        assert!(WeeklyGoal::new(Moderate, 10, 2).is_err());
        assert!(WeeklyGoal::new(Moderate, 10, 6).is_err());
        assert_eq!(goal_space().len(), 72);
    }

    #[test]
    fn rounding_ties_go_up() {
        assert_eq!(round_to_step(37.5), 40);
        assert_eq!(round_to_step(37.49), 35);
        assert_eq!(round_to_step(2.5), 5);
        assert_eq!(round_to_step(2.4), 0);
        assert_eq!(round_to_step(0.0), 0);
    }

    #[test]
    fn combos_at_450() {
        let combos = enumerate_combos(Volume(450.0));
        for expected in [
            g(Moderate, 30, 5),
            g(IntervalA, 25, 5),
            g(IntervalB, 20, 5),
            g(Brisk, 15, 5),
            g(Brisk, 25, 3),
            g(IntervalB, 30, 3),
            g(IntervalA, 30, 4),
            g(IntervalB, 25, 4),
            g(Brisk, 20, 4),
        ] {
            assert!(combos.contains(&expected), "missing {expected}");
        }
        assert!(!combos.iter().any(|c| c.exercise == Moderate && c.frequency == 3));
        assert!(combos.windows(2).all(|w| harder_than(&w[1], &w[0])));
    }

    #[test]
    fn combos_at_extremes() {
        assert!(enumerate_combos(Volume(0.0)).is_empty());
        assert_eq!(enumerate_combos(Volume(900.0)), vec![g(Brisk, 30, 5)]);
        assert!(enumerate_combos(Volume(5000.0)).is_empty());
    }

    #[test]
    fn maintenance_goal_for_aha_target() {
        assert_eq!(maintenance_goal(Volume(AHA_TARGET)), g(Brisk, 25, 5));
        assert_eq!(maintenance_goal(Volume(1000.0)), g(Brisk, 30, 5));
    }

    #[test]
    fn parse_exercise_names() {
        assert_eq!("interval_a".parse::<ExerciseType>().unwrap(), IntervalA);
        assert_eq!("Interval B".parse::<ExerciseType>().unwrap(), IntervalB);
        assert!("jog".parse::<ExerciseType>().is_err());
    }
}
