use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use coach_core::engine::SystemClock;
use coach_core::{
    builtin_profile, enumerate_combos, goal_space, simulate, CoachConfig, CoachError, TraineeProfile, Volume,
};
use coach_cli::service::{self, schedule_view, ServiceConfig};
use coach_cli::{session, FileStore};

#[derive(Parser)]
#[command(name = "coach", version, about = "Adaptive walking coach")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args, Clone)]
struct Engine {
    /// Directory holding one event log per trainee.
    #[arg(long, env = "COACH_DATA_DIR", default_value = "coach-data")]
    data_dir: PathBuf,
    /// Weeks moved by each model revision.
    #[arg(long, default_value_t = 1)]
    delta: u32,
    /// Weekly target in MET-minutes.
    #[arg(long, default_value_t = 750.0)]
    target: f64,
}

impl Engine {
    fn config(&self) -> CoachConfig {
        CoachConfig { target: Volume(self.target), revision_weeks: self.delta }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// List the goal catalog, or the goals matching a weekly capability.
    Catalog {
        #[arg(long)]
        capability: Option<f64>,
    },
    /// Simulate a scripted trainee and write the weekly trajectory as CSV.
    Sim {
        /// A, B, C or a JSON profile file.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 8)]
        weeks: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[command(flatten)]
        engine: Engine,
    },
    /// Coach a trainee interactively in the terminal.
    Session {
        #[arg(long, default_value = "me")]
        trainee: String,
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        engine: Engine,
    },
    /// Print a stored trainee's rolling seven-day schedule as JSON.
    Schedule {
        #[arg(long)]
        trainee: String,
        #[arg(long, default_value_t = 0)]
        today: u8,
        #[arg(long, env = "COACH_DATA_DIR", default_value = "coach-data")]
        data_dir: PathBuf,
    },
}

fn load_profile(arg: &str) -> anyhow::Result<TraineeProfile> {
    let path = Path::new(arg);
    if path.is_file() {
        let profile: TraineeProfile = serde_json::from_reader(File::open(path)?)?;
        profile.validate()?;
        return Ok(profile);
    }
    Ok(builtin_profile(arg)?)
}

fn sim(profile: &str, weeks: u32, seed: u64, out: Option<&Path>) -> anyhow::Result<()> {
    let profile = load_profile(profile)?;
    let trajectory = simulate(&profile, weeks, seed)?;
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
            trajectory.write_csv(BufWriter::new(file))?;
        }
        None => trajectory.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn catalog(capability: Option<f64>) -> anyhow::Result<()> {
    let goals = match capability {
        Some(c) => enumerate_combos(Volume::new(c)?),
        None => goal_space(),
    };
    let mut out = io::stdout().lock();
    for g in goals {
        writeln!(out, "{g}\t{}", g.volume())?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Cmd::Catalog { capability } => catalog(capability),
        Cmd::Sim { profile, weeks, seed, out } => sim(&profile, weeks, seed, out.as_deref()),
        Cmd::Serve { listen, engine } => {
            let config = ServiceConfig { listen, data_dir: engine.data_dir.clone(), coach: engine.config() };
            tokio::runtime::Runtime::new()?.block_on(service::run(config))
        }
        Cmd::Session { trainee, name, engine } => {
            let store = FileStore::open(&engine.data_dir)?;
            let mut coach = session::open_trainee(&store, &trainee, name, engine.config(), Arc::new(SystemClock))?;
            session::run(&store, &mut coach, io::stdin().lock(), io::stdout().lock())
        }
        Cmd::Schedule { trainee, today, data_dir } => {
            let store = FileStore::open(data_dir)?;
            let coach = store.load(&trainee, Arc::new(SystemClock))?;
            println!("{}", serde_json::to_string_pretty(&schedule_view(&coach, today)?)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e.downcast_ref::<CoachError>(), Some(CoachError::UnknownProfile(_))) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
