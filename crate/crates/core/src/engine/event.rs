//! Event records and their line-oriented JSON encoding.
//!
//! Each line of a log is an object `{seq, ts, trainee, kind, payload}`; every payload carries
//! the schema version as `"v": 1`.

use std::io::{BufRead, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::assessment::{AssessmentReport, FirstWeekChoiceSet};
use crate::catalog::{Volume, WeeklyGoal};
use crate::error::{CoachError, Result};
use crate::model::StaircaseModel;
use crate::planner::{Revision, WeekSummary};
use crate::report::DailyReport;
use crate::schedule::WeekSchedule;

use super::{Answer, CoachConfig, Proposal};

pub const PAYLOAD_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload")]
pub enum EventBody {
    TraineeCreated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        config: CoachConfig,
    },
    AssessmentSubmitted {
        report: AssessmentReport,
        baseline: Volume,
        choices: FirstWeekChoiceSet,
    },
    InitialGoalChosen {
        goal: WeeklyGoal,
        model: StaircaseModel,
        projected_weeks: u32,
    },
    WeekPlanned {
        week_index: u32,
        goal: WeeklyGoal,
        capability: Volume,
        maintenance: bool,
    },
    DailyScheduled {
        schedule: WeekSchedule,
    },
    DailyReported {
        report: DailyReport,
    },
    WeekClosed {
        summary: WeekSummary,
        revision: Revision,
    },
    RevisionApplied {
        revision: Revision,
        model: StaircaseModel,
    },
    ProposalMade {
        proposal: Proposal,
    },
    ProposalAnswered {
        answer: Answer,
        goal: WeeklyGoal,
        model: StaircaseModel,
    },
}

impl EventBody {
    pub fn kind(&self) -> &'static str {
        match self {
            EventBody::TraineeCreated { .. } => "TraineeCreated",
            EventBody::AssessmentSubmitted { .. } => "AssessmentSubmitted",
            EventBody::InitialGoalChosen { .. } => "InitialGoalChosen",
            EventBody::WeekPlanned { .. } => "WeekPlanned",
            EventBody::DailyScheduled { .. } => "DailyScheduled",
            EventBody::DailyReported { .. } => "DailyReported",
            EventBody::WeekClosed { .. } => "WeekClosed",
            EventBody::RevisionApplied { .. } => "RevisionApplied",
            EventBody::ProposalMade { .. } => "ProposalMade",
            EventBody::ProposalAnswered { .. } => "ProposalAnswered",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub seq: u64,
    pub ts: DateTime<Utc>,
    pub trainee: String,
    pub body: EventBody,
}

/// On-disk shape of one log line.
#[derive(Serialize, Deserialize)]
struct EventRecord {
    seq: u64,
    ts: DateTime<Utc>,
    trainee: String,
    kind: String,
    payload: Map<String, Value>,
}

impl Event {
    pub fn to_json(&self) -> Result<String> {
        let Value::Object(mut tagged) = serde_json::to_value(&self.body)? else {
            return Err(CoachError::Log("event body did not encode as an object".into()));
        };
        let mut payload = match tagged.remove("payload") {
            Some(Value::Object(map)) => map,
            _ => Map::new(),
        };
        payload.insert("v".into(), Value::from(PAYLOAD_VERSION));
        let record = EventRecord {
            seq: self.seq,
            ts: self.ts,
            trainee: self.trainee.clone(),
            kind: self.body.kind().to_string(),
            payload,
        };
        Ok(serde_json::to_string(&record)?)
    }

    pub fn from_json(line: &str) -> Result<Self> {
        let mut record: EventRecord = serde_json::from_str(line)?;
        match record.payload.remove("v").and_then(|v| v.as_u64()) {
            Some(PAYLOAD_VERSION) => {}
            Some(other) => {
                return Err(CoachError::Log(format!("unsupported payload version {other}")))
            }
            None => return Err(CoachError::Log("payload is missing its version".into())),
        }
        let tagged = serde_json::json!({ "kind": record.kind, "payload": record.payload });
        let body = serde_json::from_value(tagged).map_err(|e| {
            CoachError::Log(format!("event {} of kind `{}`: {e}", record.seq, record.kind))
        })?;
        Ok(Event { seq: record.seq, ts: record.ts, trainee: record.trainee, body })
    }
}

pub fn write_events<W: Write>(mut out: W, events: &[Event]) -> Result<()> {
    for event in events {
        writeln!(out, "{}", event.to_json()?)?;
    }
    Ok(())
}

/// Reads a log, skipping blank lines.
pub fn read_events<R: BufRead>(input: R) -> Result<Vec<Event>> {
    let mut events = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        events.push(Event::from_json(&line)?);
    }
    Ok(events)
}
