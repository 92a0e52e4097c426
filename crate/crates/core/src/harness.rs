//! Episode runner and parallel batch tester.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::agents::AgentSpec;
use crate::env::{EnvConfig, EnvError, Outcome, SaturationEnv, DEFAULT_MAX_CLAUSES};
use crate::tptp::ProblemSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    ProofFound,
    StepLimit,
    OutOfMemory,
    Timeout,
    ParseError,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::ProofFound,
        Category::StepLimit,
        Category::OutOfMemory,
        Category::Timeout,
        Category::ParseError,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::ProofFound => "proof_found",
            Category::StepLimit => "step_limit",
            Category::OutOfMemory => "out_of_memory",
            Category::Timeout => "timeout",
            Category::ParseError => "parse_error",
        }
    }

    fn table_row(self) -> &'static str {
        match self {
            Category::ProofFound => "proof found",
            Category::StepLimit => "step limit",
            Category::OutOfMemory => "out of memory",
            Category::Timeout => "time out",
            Category::ParseError => "parse error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult {
    pub problem: String,
    pub agent: String,
    pub category: Category,
    pub steps_taken: u64,
    /// Generated clauses in the proof; present iff a proof was found.
    pub proof_length: Option<usize>,
    pub wall_time: f64,
    pub proof: Option<String>,
    /// Diagnostic for parse errors and worker failures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl EpisodeResult {
    fn new(problem: &ProblemSource, agent: &AgentSpec, category: Category, steps_taken: u64, started: Instant) -> Self {
        EpisodeResult {
            problem: problem.id(),
            agent: agent.kind.as_str().to_string(),
            category,
            steps_taken,
            proof_length: None,
            wall_time: started.elapsed().as_secs_f64(),
            proof: None,
            error: None,
        }
    }
}

fn category_of(outcome: Outcome) -> Option<Category> {
    match outcome {
        Outcome::ProofFound => Some(Category::ProofFound),
        Outcome::StepLimitReached | Outcome::Saturated => Some(Category::StepLimit),
        Outcome::ClauseLimitReached => Some(Category::OutOfMemory),
        Outcome::Running => None,
    }
}

/// Resets on `problem`, then lets `agent` pick given clauses until the
/// episode ends or `time_limit` of wall clock has passed.
///
/// Only `step_limit` and `max_clauses` are taken from `config`.
pub fn run_episode(
    config: &EnvConfig,
    problem: &ProblemSource,
    agent: &AgentSpec,
    time_limit: Duration,
) -> EpisodeResult {
    let started = Instant::now();
    let deadline = started + time_limit;
    let config = EnvConfig {
        problem_list: vec![problem.clone()],
        ..config.clone()
    };
    let mut env = match SaturationEnv::new(config) {
        Ok(env) => env,
        Err(e) => {
            let mut r = EpisodeResult::new(problem, agent, Category::ParseError, 0, started);
            r.error = Some(e.to_string());
            return r;
        }
    };
    env.set_deadline(Some(deadline));
    if let Err(e) = env.reset(0) {
        let category = match e {
            EnvError::TooManyInputClauses { .. } => Category::OutOfMemory,
            _ => Category::ParseError,
        };
        let mut r = EpisodeResult::new(problem, agent, category, 0, started);
        r.error = Some(e.to_string());
        return r;
    }
    loop {
        let steps = env.step_number().unwrap_or(0);
        if Instant::now() >= deadline {
            return EpisodeResult::new(problem, agent, Category::Timeout, steps, started);
        }
        let observation = env.observation().expect("episode is active");
        let Ok(action) = agent.select(&observation) else {
            return EpisodeResult::new(problem, agent, Category::StepLimit, steps, started);
        };
        match env.step(action) {
            Ok(result) if result.done => {
                let category = category_of(result.info.outcome).expect("done outcome");
                let mut r = EpisodeResult::new(problem, agent, category, result.observation.step_number, started);
                if category == Category::ProofFound {
                    let clauses = env.proof_clauses().expect("proof found");
                    r.proof_length = Some(clauses.iter().filter(|c| c.inference.is_some()).count());
                    r.proof = env.tstp_proof().ok();
                }
                return r;
            }
            Ok(_) => {}
            Err(EnvError::DeadlineExceeded) => {
                return EpisodeResult::new(problem, agent, Category::Timeout, steps, started);
            }
            Err(e) => panic!("agent chose an invalid action: {e}"),
        }
    }
}

/// Where episodes of a batch run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Isolation {
    /// Worker threads inside this process; deadlines are checked cooperatively.
    Threads,
    /// One child process per episode: `program leading_args… --problem P …`,
    /// expected to print one [`EpisodeResult`] JSON line. The child is killed
    /// once it overruns the time limit by `grace`.
    Subprocess {
        program: PathBuf,
        leading_args: Vec<String>,
        grace: Duration,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOptions {
    pub parallelism: usize,
    pub step_limit: u64,
    pub time_limit: Duration,
    pub max_clauses: usize,
    pub isolation: Isolation,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            parallelism: 1,
            step_limit: 1000,
            time_limit: Duration::from_secs(300),
            max_clauses: DEFAULT_MAX_CLAUSES,
            isolation: Isolation::Threads,
        }
    }
}

/// Runs one episode per problem across `parallelism` workers. Results come
/// back in problem order whatever the parallelism.
pub fn batch_test(problems: &[ProblemSource], agent: &AgentSpec, options: &BatchOptions) -> Vec<EpisodeResult> {
    let workers = options.parallelism.max(1).min(problems.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<EpisodeResult>>> = Mutex::new(vec![None; problems.len()]);
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(problem) = problems.get(i) else {
                    break;
                };
                let result = match &options.isolation {
                    Isolation::Threads => {
                        let config = EnvConfig {
                            problem_list: Vec::new(),
                            step_limit: options.step_limit,
                            max_clauses: options.max_clauses,
                        };
                        run_episode(&config, problem, agent, options.time_limit)
                    }
                    Isolation::Subprocess {
                        program,
                        leading_args,
                        grace,
                    } => run_subprocess(program, leading_args, *grace, problem, agent, options),
                };
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every problem ran"))
        .collect()
}

fn run_subprocess(
    program: &PathBuf,
    leading_args: &[String],
    grace: Duration,
    problem: &ProblemSource,
    agent: &AgentSpec,
    options: &BatchOptions,
) -> EpisodeResult {
    let started = Instant::now();
    let fail = |category: Category, message: String| {
        let mut r = EpisodeResult::new(problem, agent, category, 0, started);
        r.error = Some(message);
        r
    };
    let mut cmd = Command::new(program);
    cmd.args(leading_args)
        .arg("--problem")
        .arg(&problem.path)
        .args(["--agent", agent.kind.as_str()])
        .args(["--size-streak", &agent.size_streak.to_string()])
        .args(["--step-limit", &options.step_limit.to_string()])
        .args(["--time-limit", &options.time_limit.as_secs_f64().to_string()])
        .args(["--max-clauses", &options.max_clauses.to_string()]);
    for root in &problem.include_roots {
        cmd.arg("--include-root").arg(root);
    }
    cmd.stdin(Stdio::null()).stdout(Stdio::piped()).stderr(Stdio::inherit());
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => return fail(Category::ParseError, format!("cannot start worker: {e}")),
    };
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut buf = String::new();
        stdout.read_to_string(&mut buf).map(|_| buf)
    });
    let hard_deadline = started + options.time_limit + grace;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if Instant::now() >= hard_deadline => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => thread::sleep(Duration::from_millis(5)),
            Err(e) => return fail(Category::ParseError, format!("lost worker: {e}")),
        }
    };
    let output = reader.join().ok().and_then(io::Result::ok).unwrap_or_default();
    let Some(status) = status else {
        let steps = 0;
        return EpisodeResult::new(problem, agent, Category::Timeout, steps, started);
    };
    match output
        .lines()
        .rev()
        .find_map(|l| serde_json::from_str::<EpisodeResult>(l).ok())
    {
        Some(mut r) => {
            r.problem = problem.id();
            r
        }
        // A worker that dies without reporting most likely hit an allocation failure.
        None => fail(Category::OutOfMemory, format!("worker exited with {status}")),
    }
}

/// Category counts per agent, in the layout of a results table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResultsTable {
    pub columns: Vec<(String, BTreeMap<Category, usize>)>,
}

impl ResultsTable {
    pub fn add(&mut self, agent: &str, results: &[EpisodeResult]) {
        let mut counts: BTreeMap<Category, usize> = Category::ALL.iter().map(|&c| (c, 0)).collect();
        for r in results {
            *counts.entry(r.category).or_default() += 1;
        }
        self.columns.push((agent.to_string(), counts));
    }

    pub fn count(&self, agent: &str, category: Category) -> usize {
        self.columns
            .iter()
            .find(|(a, _)| a == agent)
            .and_then(|(_, c)| c.get(&category).copied())
            .unwrap_or(0)
    }

    pub fn total(&self, agent: &str) -> usize {
        self.columns
            .iter()
            .find(|(a, _)| a == agent)
            .map(|(_, c)| c.values().sum())
            .unwrap_or(0)
    }

    /// Plain-text table; the parse error row only appears when nonzero.
    pub fn render(&self) -> String {
        let mut rows: Vec<(String, Vec<String>)> = Vec::new();
        for cat in Category::ALL {
            let counts: Vec<usize> = self.columns.iter().map(|(_, c)| c[&cat]).collect();
            if cat == Category::ParseError && counts.iter().all(|&n| n == 0) {
                continue;
            }
            rows.push((
                cat.table_row().to_string(),
                counts.iter().map(usize::to_string).collect(),
            ));
        }
        rows.push((
            "total".to_string(),
            self.columns
                .iter()
                .map(|(_, c)| c.values().sum::<usize>().to_string())
                .collect(),
        ));
        let label_width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, (name, _))| rows.iter().map(|(_, v)| v[k].len()).max().unwrap_or(0).max(name.len()))
            .collect();
        let mut out = format!("{:label_width$}", "");
        for ((name, _), w) in self.columns.iter().zip(&widths) {
            out.push_str(&format!("  {name:>w$}"));
        }
        out.push('\n');
        for (label, values) in rows {
            out.push_str(&format!("{label:label_width$}"));
            for (v, w) in values.iter().zip(&widths) {
                out.push_str(&format!("  {v:>w$}"));
            }
            out.push('\n');
        }
        out
    }
}

pub const CSV_HEADER: [&str; 6] = ["problem", "agent", "category", "steps", "proof_length", "wall_time"];

pub fn write_csv<W: Write>(writer: W, results: &[EpisodeResult]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in results {
        w.write_record([
            r.problem.clone(),
            r.agent.clone(),
            r.category.as_str().to_string(),
            r.steps_taken.to_string(),
            r.proof_length.map(|n| n.to_string()).unwrap_or_default(),
            format!("{:.3}", r.wall_time),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::AgentKind;
    use std::fs;

    const SOCRATES: &str = "cnf(p_imp_q, hypothesis, ~man(X0) | mortal(X0)).
cnf(p, hypothesis, man(socrates)).
cnf(q, hypothesis, ~mortal(socrates)).
";

    fn socrates_file(dir: &tempfile::TempDir) -> ProblemSource {
        let path = dir.path().join("TST003-1.p");
        fs::write(&path, SOCRATES).unwrap();
        ProblemSource::new(path)
    }

    fn config(step_limit: u64) -> EnvConfig {
        EnvConfig::new(vec![], step_limit).unwrap()
    }

    #[test]
    fn socrates_with_age_agent() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_episode(
            &config(10),
            &socrates_file(&dir),
            &AgentSpec::new(AgentKind::Age),
            Duration::from_secs(10),
        );
        assert_eq!(r.category, Category::ProofFound);
        assert_eq!(r.proof_length, Some(2));
        assert_eq!(r.problem, "TST003-1");
    }

    #[test]
    fn one_step_is_not_enough() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_episode(
            &config(1),
            &socrates_file(&dir),
            &AgentSpec::new(AgentKind::Age),
            Duration::from_secs(10),
        );
        assert_eq!(r.category, Category::StepLimit);
        assert_eq!(r.proof_length, None);
        assert_eq!(r.steps_taken, 1);
    }

    #[test]
    fn zero_time_limit_times_out() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_episode(
            &config(10),
            &socrates_file(&dir),
            &AgentSpec::new(AgentKind::Age),
            Duration::ZERO,
        );
        assert_eq!(r.category, Category::Timeout);
    }

    #[test]
    fn unreadable_problem_is_a_category() {
        let r = run_episode(
            &config(10),
            &ProblemSource::new("/nonexistent/x.p"),
            &AgentSpec::new(AgentKind::Age),
            Duration::from_secs(1),
        );
        assert_eq!(r.category, Category::ParseError);
        assert!(r.error.is_some());
    }

    #[test]
    fn table_layout() {
        let mk = |category| EpisodeResult {
            problem: "p".into(),
            agent: "size".into(),
            category,
            steps_taken: 1,
            proof_length: None,
            wall_time: 0.0,
            proof: None,
            error: None,
        };
        let mut t = ResultsTable::default();
        t.add("size", &[mk(Category::ProofFound), mk(Category::Timeout)]);
        t.add("age", &[mk(Category::StepLimit), mk(Category::StepLimit)]);
        assert_eq!(t.total("size"), 2);
        assert_eq!(t.count("age", Category::StepLimit), 2);
        let text = t.render();
        assert_eq!(
            text,
            "               size  age\n\
             proof found       1    0\n\
             step limit        0    2\n\
             out of memory     0    0\n\
             time out          1    0\n\
             total             2    2\n"
        );
    }

    #[test]
    fn csv_has_header_even_when_empty() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "problem,agent,category,steps,proof_length,wall_time\n"
        );
    }
}
