//! One append-only event log per trainee plus an index of display names.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use coach_core::engine::{Clock, Event};
use coach_core::{Coach, CoachError, Command, Result};

const INDEX_FILE: &str = "index.json";

#[derive(Debug, Clone)]
pub struct FileStore {
    dir: PathBuf,
}

impl FileStore {
    /// Opens `dir`, creating it and an empty index when missing.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let store = FileStore { dir };
        if !store.index_path().exists() {
            store.save_index(&BTreeMap::new())?;
        }
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn index_path(&self) -> PathBuf {
        self.dir.join(INDEX_FILE)
    }

    pub fn log_path(&self, trainee: &str) -> PathBuf {
        self.dir.join(format!("{trainee}.jsonl"))
    }

    /// Trainee ids mapped to display names.
    pub fn index(&self) -> Result<BTreeMap<String, Option<String>>> {
        let text = fs::read_to_string(self.index_path())?;
        Ok(serde_json::from_str(&text)?)
    }

    fn save_index(&self, index: &BTreeMap<String, Option<String>>) -> Result<()> {
        let tmp = self.dir.join(format!("{INDEX_FILE}.tmp"));
        let mut file = File::create(&tmp)?;
        file.write_all(serde_json::to_string_pretty(index)?.as_bytes())?;
        file.sync_all()?;
        fs::rename(tmp, self.index_path())?;
        Ok(())
    }

    /// Writes a new trainee's log and registers it in the index.
    pub fn create(&self, coach: &Coach) -> Result<()> {
        let id = coach.trainee_id();
        check_id(id)?;
        let mut index = self.index()?;
        if index.contains_key(id) || self.log_path(id).exists() {
            return Err(CoachError::InvalidInput(format!("trainee `{id}` already exists")));
        }
        self.append(id, coach.events())?;
        index.insert(id.to_string(), coach.state().name.clone());
        self.save_index(&index)
    }

    /// Appends events and flushes them to disk.
    pub fn append(&self, trainee: &str, events: &[Event]) -> Result<()> {
        let mut buf = String::new();
        for e in events {
            buf.push_str(&e.to_json()?);
            buf.push('\n');
        }
        let mut file = OpenOptions::new().create(true).append(true).open(self.log_path(trainee))?;
        file.write_all(buf.as_bytes())?;
        file.sync_data()?;
        Ok(())
    }

    /// Rebuilds a trainee from its log. A torn final line (no trailing newline) was never
    /// acknowledged and is dropped.
    pub fn load(&self, trainee: &str, clock: Arc<dyn Clock>) -> Result<Coach> {
        check_id(trainee)?;
        let path = self.log_path(trainee);
        let text = fs::read_to_string(&path)?;
        let complete = match text.rfind('\n') {
            Some(i) => &text[..=i],
            None => "",
        };
        if complete.len() != text.len() {
            let file = OpenOptions::new().write(true).open(&path)?;
            file.set_len(complete.len() as u64)?;
            file.sync_all()?;
        }
        let events = complete
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(Event::from_json)
            .collect::<Result<Vec<_>>>()?;
        Coach::from_events(events, clock)
    }

    pub fn load_all(&self, clock: Arc<dyn Clock>) -> Result<Vec<Coach>> {
        self.index()?
            .keys()
            .map(|id| self.load(id, clock.clone()))
            .collect()
    }

    /// Runs `cmd`, persisting its events before they are applied.
    pub fn execute(&self, coach: &mut Coach, cmd: &Command) -> Result<Vec<Event>> {
        let events = coach.prepare(cmd)?;
        self.append(coach.trainee_id(), &events)?;
        coach.commit(events.clone())?;
        Ok(events)
    }
}

/// Ids become file names, so only a conservative alphabet is accepted.
pub fn check_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && id.len() <= 64
        && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_');
    if ok {
        Ok(())
    } else {
        Err(CoachError::InvalidInput(format!("invalid trainee id `{id}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coach_core::engine::SimClock;
    use coach_core::{AssessmentReport, CoachConfig};

    fn clock() -> Arc<dyn Clock> {
        Arc::new(SimClock::default())
    }

    #[test]
    fn round_trips_a_trainee() {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        let mut coach = Coach::new("t1", Some("Ann".into()), CoachConfig::default(), clock()).unwrap();
        store.create(&coach).unwrap();
        store.execute(&mut coach, &Command::Assess(AssessmentReport::default())).unwrap();
        let loaded = store.load("t1", clock()).unwrap();
        assert_eq!(loaded.state(), coach.state());
        assert_eq!(store.index().unwrap()["t1"], Some("Ann".into()));
        assert!(store.create(&coach).is_err());
    }

    #[test]
    fn drops_torn_tail() {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        let coach = Coach::new("t1", None, CoachConfig::default(), clock()).unwrap();
        store.create(&coach).unwrap();
        let mut f = OpenOptions::new().append(true).open(store.log_path("t1")).unwrap();
        f.write_all(b"{\"seq\":2,\"ts\":").unwrap();
        let loaded = store.load("t1", clock()).unwrap();
        assert_eq!(loaded.events().len(), 1);
        assert!(fs::read_to_string(store.log_path("t1")).unwrap().ends_with('\n'));
    }

    #[test]
    fn rejects_path_like_ids() {
        for id in ["", "../x", "a/b", "a.b"] {
            assert!(check_id(id).is_err(), "{id}");
        }
        check_id("trainee-7_b").unwrap();
    }

    #[test]
    fn failed_command_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let store = FileStore::open(dir.path()).unwrap();
        let mut coach = Coach::new("t1", None, CoachConfig::default(), clock()).unwrap();
        store.create(&coach).unwrap();
        assert!(store.execute(&mut coach, &Command::CloseWeek).is_err());
        assert_eq!(fs::read_to_string(store.log_path("t1")).unwrap().lines().count(), 1);
    }
}
