use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use saturate::env::DEFAULT_MAX_CLAUSES;
use saturate::harness::write_csv;
use saturate::{
    batch_test, run_episode, AgentKind, AgentSpec, BatchOptions, Category, EnvConfig, Isolation, ProblemSource,
    ResultsTable,
};

#[derive(Parser)]
#[command(name = "saturate", version, about = "Given-clause saturation over TPTP CNF problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one episode and print the refutation in TSTP.
    Prove(EpisodeArgs),
    /// Run every agent over a set of problems and summarize the outcomes.
    Batch(BatchArgs),
    /// Speak the JSON-lines protocol on stdin/stdout.
    Serve(ServeArgs),
    /// Run one episode and print its result as a JSON line.
    #[command(hide = true)]
    Episode(EpisodeArgs),
}

#[derive(Args, Clone)]
struct Limits {
    #[arg(long, default_value_t = 1000)]
    step_limit: u64,
    /// Wall-clock limit per episode, in seconds.
    #[arg(long, default_value_t = 300.0)]
    time_limit: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_CLAUSES)]
    max_clauses: usize,
    #[arg(long, default_value_t = AgentSpec::DEFAULT_SIZE_STREAK)]
    size_streak: u64,
    /// Directory searched for `include` targets; repeatable. Defaults to the
    /// problem's directory and the directory two levels above it.
    #[arg(long)]
    include_root: Vec<PathBuf>,
}

#[derive(Args)]
struct EpisodeArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value = "size-age", value_parser = parse_agent)]
    agent: AgentKind,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Clone, Copy, ValueEnum)]
enum IsolationKind {
    Process,
    Threads,
}

#[derive(Args)]
struct BatchArgs {
    /// Problem path or glob pattern; repeatable.
    #[arg(long)]
    problem: Vec<String>,
    /// File with one problem path per line; relative paths are resolved
    /// against the file's directory.
    #[arg(long)]
    list: Option<PathBuf>,
    /// Agent to run; repeatable. Defaults to all three.
    #[arg(long, value_parser = parse_agent)]
    agent: Vec<AgentKind>,
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    #[arg(long, value_enum, default_value_t = IsolationKind::Process)]
    isolation: IsolationKind,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args)]
struct ServeArgs {
    /// Problems addressable by `problem_index`; repeatable.
    #[arg(long)]
    problem: Vec<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    step_limit: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_CLAUSES)]
    max_clauses: usize,
}

fn parse_agent(s: &str) -> Result<AgentKind, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Prove(args) => prove(args),
        Command::Episode(args) => episode(args),
        Command::Batch(args) => batch(args),
        Command::Serve(args) => serve(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("saturate: {message}");
            ExitCode::from(2)
        }
    }
}

fn source(path: PathBuf, limits: &Limits) -> ProblemSource {
    if limits.include_root.is_empty() {
        ProblemSource::new(path)
    } else {
        ProblemSource::with_roots(path, limits.include_root.clone())
    }
}

fn spec(kind: AgentKind, limits: &Limits) -> Result<AgentSpec, String> {
    AgentSpec::with_size_streak(kind, limits.size_streak)
}

fn time_limit(limits: &Limits) -> Result<Duration, String> {
    Duration::try_from_secs_f64(limits.time_limit).map_err(|e| format!("bad --time-limit: {e}"))
}

fn config(limits: &Limits) -> Result<EnvConfig, String> {
    EnvConfig::new(Vec::new(), limits.step_limit)
        .and_then(|c| c.with_max_clauses(limits.max_clauses))
        .map_err(|e| e.to_string())
}

fn prove(args: EpisodeArgs) -> Result<ExitCode, String> {
    let problem = source(args.problem, &args.limits);
    let agent = spec(args.agent, &args.limits)?;
    let result = run_episode(&config(&args.limits)?, &problem, &agent, time_limit(&args.limits)?);
    match result.category {
        Category::ProofFound => {
            println!("{}", result.proof.unwrap_or_default());
            Ok(ExitCode::SUCCESS)
        }
        Category::ParseError => {
            eprintln!("{}", result.error.unwrap_or_else(|| "parse_error".into()));
            Ok(ExitCode::from(2))
        }
        other => {
            eprintln!("{} after {} steps", other.as_str(), result.steps_taken);
            Ok(ExitCode::from(1))
        }
    }
}

fn episode(args: EpisodeArgs) -> Result<ExitCode, String> {
    let problem = source(args.problem, &args.limits);
    let agent = spec(args.agent, &args.limits)?;
    let result = run_episode(&config(&args.limits)?, &problem, &agent, time_limit(&args.limits)?);
    let line = serde_json::to_string(&result).map_err(|e| e.to_string())?;
    println!("{line}");
    Ok(ExitCode::SUCCESS)
}

fn has_glob_meta(pattern: &str) -> bool {
    pattern.contains(['*', '?', '['])
}

fn expand(pattern: &str) -> Result<Vec<PathBuf>, String> {
    if !has_glob_meta(pattern) {
        return Ok(vec![PathBuf::from(pattern)]);
    }
    let mut paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| format!("bad pattern `{pattern}`: {e}"))?
        .filter_map(Result::ok)
        .collect();
    paths.sort();
    Ok(paths)
}

fn read_list(path: &Path) -> Result<Vec<PathBuf>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect())
}

fn batch(args: BatchArgs) -> Result<ExitCode, String> {
    let mut paths = Vec::new();
    for pattern in &args.problem {
        paths.extend(expand(pattern)?);
    }
    if let Some(list) = &args.list {
        paths.extend(read_list(list)?);
    }
    let problems: Vec<ProblemSource> = paths.into_iter().map(|p| source(p, &args.limits)).collect();
    let agents = if args.agent.is_empty() {
        AgentKind::ALL.to_vec()
    } else {
        args.agent.clone()
    };
    if args.parallelism == 0 {
        return Err("--parallelism must be at least 1".into());
    }
    let isolation = match args.isolation {
        IsolationKind::Threads => Isolation::Threads,
        IsolationKind::Process => Isolation::Subprocess {
            program: std::env::current_exe().map_err(|e| format!("cannot locate own executable: {e}"))?,
            leading_args: vec!["episode".to_string()],
            grace: Duration::from_secs(2),
        },
    };
    let options = BatchOptions {
        parallelism: args.parallelism,
        step_limit: args.limits.step_limit,
        time_limit: time_limit(&args.limits)?,
        max_clauses: args.limits.max_clauses,
        isolation,
    };
    let mut table = ResultsTable::default();
    let mut all = Vec::new();
    for kind in agents {
        let agent = spec(kind, &args.limits)?;
        let results = batch_test(&problems, &agent, &options);
        table.add(kind.as_str(), &results);
        all.extend(results);
    }
    if let Some(out) = &args.out {
        let file = fs::File::create(out).map_err(|e| format!("{}: {e}", out.display()))?;
        write_csv(io::BufWriter::new(file), &all).map_err(|e| format!("{}: {e}", out.display()))?;
    }
    let mut stdout = io::stdout().lock();
    write!(stdout, "{}", table.render()).map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn serve(args: ServeArgs) -> Result<ExitCode, String> {
    let problems = args.problem.into_iter().map(ProblemSource::new).collect();
    let config = EnvConfig::new(problems, args.step_limit)
        .and_then(|c| c.with_max_clauses(args.max_clauses))
        .map_err(|e| e.to_string())?;
    let stdin = io::stdin().lock();
    let stdout = io::stdout().lock();
    saturate::protocol::serve(config, stdin, stdout).map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}
