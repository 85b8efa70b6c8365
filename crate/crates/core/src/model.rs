//! Staircase model of weekly aerobic capability.
//!
//! Capability sits on the floor `c0` until `offset` weeks have passed, then
//! climbs by `step` MET-minutes per week and is clamped at the target `cn`.

use serde::{Deserialize, Serialize};

use crate::catalog::Volume;
use crate::error::{CoachError, Result};

const SPAN_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFields")]
pub struct StaircaseModel {
    c0: Volume,
    cn: Volume,
    span: u32,
    offset: u32,
    step: f64,
}

#[derive(Deserialize)]
struct ModelFields {
    c0: Volume,
    cn: Volume,
    span: u32,
    offset: u32,
    step: f64,
}

impl TryFrom<ModelFields> for StaircaseModel {
    type Error = CoachError;

    fn try_from(f: ModelFields) -> Result<Self> {
        StaircaseModel::with_step(f.c0, f.cn, f.span, f.offset, f.step)
    }
}

impl StaircaseModel {
    /// Model with uniform steps of `(cn - c0) / span`.
    pub fn new(c0: Volume, cn: Volume, span: u32, offset: u32) -> Result<Self> {
        check_volumes(c0, cn)?;
        if span == 0 {
            return Err(CoachError::DegenerateModel("span must be at least 1 week".into()));
        }
        if c0.0 >= cn.0 {
            return Ok(Self::maintenance(c0, cn, offset));
        }
        Ok(StaircaseModel { c0, cn, span, offset, step: (cn.0 - c0.0) / f64::from(span) })
    }

    /// Model with an explicit step height; `span` must be the number of steps of that
    /// height needed to climb from `c0` to `cn`.
    pub fn with_step(c0: Volume, cn: Volume, span: u32, offset: u32, step: f64) -> Result<Self> {
        check_volumes(c0, cn)?;
        if span == 0 {
            return Err(CoachError::DegenerateModel("span must be at least 1 week".into()));
        }
        if c0.0 >= cn.0 {
            return Ok(Self::maintenance(c0, cn, offset));
        }
        if !step.is_finite() || step <= 0.0 {
            return Err(CoachError::DegenerateModel(format!("step height {step} must be positive")));
        }
        if steps_to_target(c0, cn, step) != span {
            return Err(CoachError::DegenerateModel(format!(
                "span {span} does not match step height {step} between {c0} and {cn}"
            )));
        }
        Ok(StaircaseModel { c0, cn, span, offset, step })
    }

    /// Staircase whose first step has height `step` (floored at `min_step`), with the span
    /// rounded up so the target is always reached.
    pub fn from_first_step(c0: Volume, cn: Volume, step: f64, min_step: f64) -> Result<Self> {
        check_volumes(c0, cn)?;
        if c0.0 >= cn.0 {
            return Ok(Self::maintenance(c0, cn, 0));
        }
        let step = step.max(min_step);
        if !step.is_finite() || step <= 0.0 {
            return Err(CoachError::DegenerateModel(format!("step height {step} must be positive")));
        }
        let span = steps_to_target(c0, cn, step);
        Ok(StaircaseModel { c0, cn, span, offset: 0, step })
    }

    fn maintenance(c0: Volume, cn: Volume, offset: u32) -> Self {
        StaircaseModel { c0, cn, span: 1, offset, step: 0.0 }
    }

    pub fn c0(&self) -> Volume {
        self.c0
    }

    pub fn cn(&self) -> Volume {
        self.cn
    }

    pub fn span(&self) -> u32 {
        self.span
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Already at or above the target: capability is `cn` in every week.
    pub fn is_maintenance(&self) -> bool {
        self.c0.0 >= self.cn.0
    }

    pub fn capability_at(&self, week: u32) -> Volume {
        if self.is_maintenance() {
            return self.cn;
        }
        let climbed = week.saturating_sub(self.offset);
        if climbed >= self.span {
            return self.cn;
        }
        Volume((self.c0.0 + self.step * f64::from(climbed)).min(self.cn.0))
    }

    /// Widens (positive `delta`) or narrows the span; the step height is recomputed
    /// from the floor and the target.
    pub fn change_step(&self, delta: i32) -> Result<Self> {
        if delta == 0 || self.is_maintenance() {
            return Ok(*self);
        }
        let span = i64::from(self.span) + i64::from(delta);
        if span < 1 {
            return Err(CoachError::DegenerateModel(format!(
                "span {} + {delta} would drop below one week",
                self.span
            )));
        }
        let span = u32::try_from(span)
            .map_err(|_| CoachError::DegenerateModel(format!("span {span} out of range")))?;
        Ok(StaircaseModel {
            span,
            step: (self.cn.0 - self.c0.0) / f64::from(span),
            ..*self
        })
    }

    /// Delays the staircase by `delta` weeks.
    pub fn shift(&self, delta: u32) -> Self {
        StaircaseModel { offset: self.offset.saturating_add(delta), ..*self }
    }

    /// The (c0, cn, span, offset) tuple.
    pub fn as_tuple(&self) -> (f64, f64, u32, u32) {
        (self.c0.0, self.cn.0, self.span, self.offset)
    }
}

fn check_volumes(c0: Volume, cn: Volume) -> Result<()> {
    for v in [c0, cn] {
        if !v.0.is_finite() || v.0 < 0.0 {
            return Err(CoachError::DegenerateModel(format!("capability {v} must be finite and non-negative")));
        }
    }
    Ok(())
}

fn steps_to_target(c0: Volume, cn: Volume, step: f64) -> u32 {
    let steps = ((cn.0 - c0.0) / step - SPAN_EPS).ceil();
    if steps < 1.0 {
        1
    } else if steps >= f64::from(u32::MAX) {
        u32::MAX
    } else {
        steps as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(c0: f64, cn: f64, span: u32, offset: u32) -> StaircaseModel {
        StaircaseModel::new(Volume(c0), Volume(cn), span, offset).unwrap()
    }

    #[test]
    fn capability_examples() {
        assert_eq!(m(0.0, 750.0, 5, 0).capability_at(1), Volume(150.0));
        assert_eq!(m(0.0, 750.0, 5, 0).capability_at(7), Volume(750.0));
        assert_eq!(m(0.0, 750.0, 5, 1).capability_at(1), Volume(0.0));
    }

    #[test]
    fn change_step_examples() {
        let wider = m(0.0, 750.0, 5, 0).change_step(1).unwrap();
        assert_eq!(wider.as_tuple(), (0.0, 750.0, 6, 0));
        assert_eq!(wider.step(), 125.0);
        assert_eq!(m(0.0, 750.0, 5, 0).change_step(0).unwrap(), m(0.0, 750.0, 5, 0));
        assert_eq!(m(0.0, 750.0, 2, 0).change_step(-1).unwrap().as_tuple(), (0.0, 750.0, 1, 0));
    }

    #[test]
    fn change_step_rejects_zero_span() {
        let err = m(0.0, 750.0, 1, 0).change_step(-1).unwrap_err();
        assert!(matches!(err, CoachError::DegenerateModel(_)));
        assert!(StaircaseModel::new(Volume(0.0), Volume(750.0), 0, 0).is_err());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(m(0.0, 750.0, 5, 0).shift(1).as_tuple(), (0.0, 750.0, 5, 1));
        assert_eq!(m(0.0, 750.0, 5, 0).shift(0), m(0.0, 750.0, 5, 0));
        let before = m(0.0, 750.0, 5, 1);
        let after = before.shift(1);
        assert_eq!(before.capability_at(2), Volume(150.0));
        assert_eq!(after.capability_at(3), Volume(150.0));
    }

    #[test]
    fn maintenance_model_is_flat() {
        let model = m(750.0, 750.0, 4, 0);
        assert!(model.is_maintenance());
        assert_eq!(model.span(), 1);
        for w in 1..10 {
            assert_eq!(model.capability_at(w), Volume(750.0));
        }
        assert_eq!(model.change_step(1).unwrap(), model);
    }

    #[test]
    fn first_step_sets_height_and_span() {
        let model = StaircaseModel::from_first_step(Volume(0.0), Volume(750.0), 90.0, 45.0).unwrap();
        assert_eq!(model.as_tuple(), (0.0, 750.0, 9, 0));
        assert_eq!(model.capability_at(1), Volume(90.0));
        assert_eq!(model.capability_at(9), Volume(750.0));
        let floored = StaircaseModel::from_first_step(Volume(0.0), Volume(750.0), 0.0, 45.0).unwrap();
        assert_eq!(floored.span(), 17);
    }

    #[test]
    fn with_step_rejects_inconsistent_span() {
        assert!(StaircaseModel::with_step(Volume(0.0), Volume(750.0), 9, 0, 90.0).is_ok());
        assert!(StaircaseModel::with_step(Volume(0.0), Volume(750.0), 5, 0, 90.0).is_err());
        assert!(StaircaseModel::with_step(Volume(0.0), Volume(750.0), 5, 0, -1.0).is_err());
    }

    #[test]
    fn serde_validates() {
        let model = StaircaseModel::from_first_step(Volume(0.0), Volume(750.0), 90.0, 45.0).unwrap();
        let text = serde_json::to_string(&model).unwrap();
        let back: StaircaseModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, model);
        let bad = r#"{"c0":0,"cn":750,"span":0,"offset":0,"step":150}"#;
        assert!(serde_json::from_str::<StaircaseModel>(bad).is_err());
    }
}
