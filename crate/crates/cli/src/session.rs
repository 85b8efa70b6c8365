//! Interactive terminal coaching session.

use std::io::{BufRead, Write};
use std::sync::Arc;

use coach_core::assessment::ActivityLevel;
use coach_core::engine::Clock;
use coach_core::report::RPE_LABELS;
use coach_core::schedule::{DayKind, DayStatus};
use coach_core::{
    Answer, AssessmentReport, Coach, CoachConfig, Command, DailyReport, Phase, Reason, ReportStatus,
};

use crate::store::FileStore;

enum Input<T> {
    Value(T),
    Eof,
}

struct Terminal<R, W> {
    input: R,
    out: W,
}

impl<R: BufRead, W: Write> Terminal<R, W> {
    /// Prompts until `parse` accepts the line.
    fn ask<T>(&mut self, prompt: &str, parse: impl Fn(&str) -> Result<T, String>) -> anyhow::Result<Input<T>> {
        loop {
            write!(self.out, "{prompt} ")?;
            self.out.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                writeln!(self.out)?;
                return Ok(Input::Eof);
            }
            match parse(line.trim()) {
                Ok(v) => return Ok(Input::Value(v)),
                Err(msg) => writeln!(self.out, "  {msg}")?,
            }
        }
    }
}

fn parse_number<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("`{s}` is not a valid number"))
}

/// A line typed at the report prompt.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportLine {
    Report { day: Option<u8>, status: ReportStatus, rpe: Option<u8>, reason: Option<Reason> },
    Close,
    Show,
    Quit,
}

fn parse_reason(word: &str) -> Option<Reason> {
    let key: String = word.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
    match key.as_str() {
        "forgot" | "forgotten" => Some(Reason::Forgot),
        "notime" | "time" | "busy" => Some(Reason::NoTime),
        "dontenjoy" | "enjoy" | "boring" => Some(Reason::DontEnjoy),
        "notuseful" | "useful" | "useless" => Some(Reason::NotUseful),
        "toohard" | "hard" => Some(Reason::TooHard),
        _ => None,
    }
}

/// Parses `[day] done [rpe] N`, `[day] almost|nope REASON`, `close`, `show` or `quit`.
pub fn parse_report_line(line: &str) -> Result<ReportLine, String> {
    let words: Vec<String> = line
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .map(str::to_ascii_lowercase)
        .collect();
    match words.first().map(String::as_str) {
        Some("close") => return Ok(ReportLine::Close),
        Some("show") | Some("schedule") => return Ok(ReportLine::Show),
        Some("quit") | Some("exit") => return Ok(ReportLine::Quit),
        None => return Err("type a report, `show`, `close` or `quit`".into()),
        _ => {}
    }
    let mut rest = &words[..];
    let day = match rest[0].parse::<u8>() {
        Ok(d) if d <= 6 => {
            rest = &rest[1..];
            Some(d)
        }
        Ok(d) => return Err(format!("day {d} is outside 0..6")),
        Err(_) => None,
    };
    let (status, args) = match rest.split_first() {
        Some((s, args)) => (s.as_str(), args),
        None => return Err("expected done, almost or nope".into()),
    };
    let status = match status {
        "done" | "did" | "didit" => ReportStatus::Done,
        "almost" => ReportStatus::Almost,
        "nope" | "no" | "missed" => ReportStatus::Nope,
        other => return Err(format!("unknown status `{other}`")),
    };
    if status == ReportStatus::Done {
        let rpe = args
            .iter()
            .find_map(|w| w.parse::<u8>().ok())
            .ok_or("give the exertion level 1-5, e.g. `done, rpe 3`")?;
        if !(1..=5).contains(&rpe) {
            return Err(format!("exertion {rpe} is outside 1..5"));
        }
        Ok(ReportLine::Report { day, status, rpe: Some(rpe), reason: None })
    } else {
        let joined = args.concat();
        let reason = parse_reason(&joined)
            .ok_or("give a reason: forgot, no_time, dont_enjoy, not_useful or too_hard")?;
        Ok(ReportLine::Report { day, status, rpe: None, reason: Some(reason) })
    }
}

/// Opens `trainee` from the store, or creates it when absent.
pub fn open_trainee(
    store: &FileStore,
    trainee: &str,
    name: Option<String>,
    config: CoachConfig,
    clock: Arc<dyn Clock>,
) -> anyhow::Result<Coach> {
    if store.log_path(trainee).exists() {
        return Ok(store.load(trainee, clock)?);
    }
    let coach = Coach::new(trainee, name, config, clock)?;
    store.create(&coach)?;
    Ok(coach)
}

fn print_schedule<W: Write>(out: &mut W, coach: &Coach) -> std::io::Result<()> {
    let Some(week) = coach.state().current_week.as_ref() else {
        return Ok(());
    };
    writeln!(out, "Week {}: {} ({} MET-min)", week.week_index, week.goal, week.goal.volume())?;
    for (i, d) in week.days.iter().enumerate() {
        let mark = match (d.kind, d.status) {
            (DayKind::Rest, _) => "rest",
            (_, DayStatus::Unreported) => "session",
            (_, DayStatus::Done) => "done",
            (_, DayStatus::Almost) => "almost",
            (_, DayStatus::Nope) => "nope",
        };
        writeln!(out, "  day {i}: {mark}")?;
    }
    writeln!(out, "  progress {}/{}", week.done_count(), week.goal.frequency)
}

/// Runs the assessment, goal choice, daily report and weekly proposal prompts until the
/// input ends or the user quits. Every accepted answer is saved immediately.
pub fn run<R: BufRead, W: Write>(store: &FileStore, coach: &mut Coach, input: R, out: W) -> anyhow::Result<()> {
    let mut t = Terminal { input, out };
    loop {
        let state = coach.state();
        if let Some(p) = state.pending_proposal {
            writeln!(
                t.out,
                "Next week the coach proposes {} ({} MET-min), {:?} from {}.",
                p.proposed_goal,
                p.proposed_goal.volume(),
                p.direction,
                p.previous_goal
            )?;
            let answer = t.ask("agree or disagree?", |s| match s.to_ascii_lowercase().as_str() {
                "agree" | "a" | "yes" | "y" => Ok(Answer::Agree),
                "disagree" | "d" | "no" | "n" => Ok(Answer::Disagree),
                _ => Err("answer agree or disagree".into()),
            })?;
            let Input::Value(answer) = answer else { break };
            store.execute(coach, &Command::Respond(answer))?;
            print_schedule(&mut t.out, coach)?;
            continue;
        }
        match state.phase {
            Phase::New => {
                writeln!(t.out, "How active are you in a typical week?")?;
                let mut report = AssessmentReport::default();
                for level in ActivityLevel::ALL {
                    let prompt = format!("  {level:?} activity (e.g. {}): minutes per session?", level.example());
                    let Input::Value(minutes) = t.ask(&prompt, |s| {
                        let m: f64 = parse_number(s)?;
                        if m.is_finite() && m >= 0.0 { Ok(m) } else { Err("minutes must be zero or more".into()) }
                    })?
                    else {
                        return finish(&mut t.out);
                    };
                    let Input::Value(times) = t.ask("  sessions per week?", parse_number::<u32>)? else {
                        return finish(&mut t.out);
                    };
                    *report.answer_mut(level) = coach_core::ActivityAnswer { duration_min: minutes, frequency: times };
                }
                store.execute(coach, &Command::Assess(report))?;
            }
            Phase::Assessed => {
                let Some(choices) = state.choices.clone() else { break };
                writeln!(t.out, "Pick your first weekly goal:")?;
                for (i, g) in choices.goals.iter().enumerate() {
                    writeln!(t.out, "  {}) {} ({} MET-min)", i + 1, g, g.volume())?;
                }
                let n = choices.goals.len();
                let Input::Value(i) = t.ask("choice?", |s| match parse_number::<usize>(s)? {
                    i if (1..=n).contains(&i) => Ok(i - 1),
                    _ => Err(format!("choose 1..{n}")),
                })?
                else {
                    break;
                };
                store.execute(coach, &Command::ChooseGoal(choices.goals[i]))?;
                if let Some(weeks) = coach.state().projected_weeks {
                    writeln!(t.out, "You should reach the target in about {weeks} weeks.")?;
                }
                print_schedule(&mut t.out, coach)?;
            }
            Phase::Active | Phase::Maintenance => {
                let Input::Value(line) = t.ask("report>", parse_report_line)? else { break };
                let result = match line {
                    ReportLine::Quit => break,
                    ReportLine::Show => {
                        print_schedule(&mut t.out, coach)?;
                        continue;
                    }
                    ReportLine::Close => store.execute(coach, &Command::CloseWeek).map(|_| None),
                    ReportLine::Report { day, status, rpe, reason } => {
                        let week = coach.state().current_week.as_ref();
                        let day = day.or_else(|| {
                            week.and_then(|w| {
                                (0..7u8).find(|&d| {
                                    let p = w.days[usize::from(d)];
                                    p.is_session() && p.status == DayStatus::Unreported
                                })
                            })
                        });
                        match (day, week.map(|w| w.week_index)) {
                            (Some(day), Some(week_index)) => {
                                let report = DailyReport {
                                    day_index: day,
                                    week_index,
                                    status,
                                    rpe,
                                    reason,
                                    self_efficacy: None,
                                    affective_attitude: None,
                                };
                                store
                                    .execute(coach, &Command::Report(report))
                                    .map(|_| rpe.map(|r| RPE_LABELS[usize::from(r - 1)]))
                            }
                            _ => {
                                writeln!(t.out, "  no session left to report; type `close`")?;
                                continue;
                            }
                        }
                    }
                };
                match result {
                    Ok(label) => {
                        if let Some(label) = label {
                            writeln!(t.out, "  {label}")?;
                        }
                        print_schedule(&mut t.out, coach)?;
                    }
                    Err(e) => writeln!(t.out, "  {e}")?,
                }
            }
        }
    }
    finish(&mut t.out)
}

fn finish<W: Write>(out: &mut W) -> anyhow::Result<()> {
    writeln!(out, "Progress saved.")?;
    out.flush()?;
    Ok(())
}
