//! The stepwise given-clause environment.
//!
//! The clause table is append-only: input clauses first, then generated
//! clauses in order of creation. An action is an index into this table and
//! must name a clause that has not been selected yet. Each step marks the
//! selected clause as processed, derives all its children against the
//! previously processed clauses and appends those that are not variants of a
//! clause already in the table.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};
use thiserror::Error;

use crate::calculus::all_signed_children_until;
use crate::json::{clause_to_value, object};
use crate::logic::Clause;
use crate::signature::normalized_signature;
use crate::tptp::{parse_problem, render_tptp, ParseError, ProblemSource};

/// Default cap on the clause table size.
pub const DEFAULT_MAX_CLAUSES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvConfig {
    pub problem_list: Vec<ProblemSource>,
    pub step_limit: u64,
    pub max_clauses: usize,
}

impl EnvConfig {
    pub fn new(problem_list: Vec<ProblemSource>, step_limit: u64) -> Result<Self, EnvError> {
        let config = EnvConfig {
            problem_list,
            step_limit,
            max_clauses: DEFAULT_MAX_CLAUSES,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_max_clauses(mut self, max_clauses: usize) -> Result<Self, EnvError> {
        self.max_clauses = max_clauses;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        if self.step_limit == 0 {
            return Err(EnvError::Config("step_limit must be at least 1".into()));
        }
        if self.max_clauses == 0 {
            return Err(EnvError::Config("max_clauses must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("problem index {index} out of range ({count} problems)")]
    NoSuchProblem { index: usize, count: usize },
    #[error("problem has {count} clauses, more than max_clauses {max}")]
    TooManyInputClauses { count: usize, max: usize },
    #[error("duplicate clause label `{0}`")]
    DuplicateLabel(String),
    #[error("no active episode")]
    NoEpisode,
    #[error("episode is over")]
    EpisodeDone,
    #[error("invalid action {action}: {reason}")]
    InvalidAction { action: usize, reason: &'static str },
    #[error("no proof found")]
    NoProof,
    #[error("deadline passed during clause generation")]
    DeadlineExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    ProofFound,
    StepLimitReached,
    Saturated,
    ClauseLimitReached,
    Running,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::ProofFound => "proof_found",
            Outcome::StepLimitReached => "step_limit_reached",
            Outcome::Saturated => "saturated",
            Outcome::ClauseLimitReached => "clause_limit_reached",
            Outcome::Running => "running",
        }
    }

    pub fn is_done(self) -> bool {
        self != Outcome::Running
    }
}

/// Terminal reward: 1 for a refutation, 0 otherwise.
pub fn reward_for(outcome: Outcome) -> f64 {
    if outcome == Outcome::ProofFound {
        1.0
    } else {
        0.0
    }
}

/// Snapshot of the clause table.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub clauses: Vec<Arc<Clause>>,
    pub step_number: u64,
}

impl Observation {
    pub fn unprocessed(&self) -> impl Iterator<Item = (usize, &Clause)> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.processed)
            .map(|(i, c)| (i, c.as_ref()))
    }

    pub fn to_value(&self) -> Value {
        object([
            ("step_number", self.step_number.into()),
            ("clauses", self.clauses.iter().map(|c| clause_to_value(c)).collect()),
        ])
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepInfo {
    pub outcome: Outcome,
    /// Generated clauses in the table so far.
    pub generated_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub observation: Observation,
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

impl StepResult {
    pub fn to_value(&self) -> Value {
        object([
            ("observation", self.observation.to_value()),
            ("reward", self.reward.into()),
            ("done", self.done.into()),
            (
                "info",
                json!({
                    "outcome": self.info.outcome.as_str(),
                    "generated_count": self.info.generated_count,
                }),
            ),
        ])
    }

    pub fn to_json(&self) -> String {
        self.to_value().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    Human,
    Json,
}

struct Episode {
    table: Vec<Arc<Clause>>,
    signatures: HashSet<String>,
    labels: HashMap<String, usize>,
    processed: Vec<usize>,
    step: u64,
    generated: u64,
    next_label: u64,
    outcome: Outcome,
    first_empty: Option<usize>,
}

pub struct SaturationEnv {
    config: EnvConfig,
    episode: Option<Episode>,
    deadline: Option<Instant>,
}

impl SaturationEnv {
    pub fn new(config: EnvConfig) -> Result<Self, EnvError> {
        config.validate()?;
        Ok(SaturationEnv {
            config,
            episode: None,
            deadline: None,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    /// Steps that are still generating clauses when `deadline` passes fail with
    /// [`EnvError::DeadlineExceeded`] and leave the episode untouched.
    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    /// Starts an episode on `problem_list[problem_index]`.
    pub fn reset(&mut self, problem_index: usize) -> Result<Observation, EnvError> {
        let source = self
            .config
            .problem_list
            .get(problem_index)
            .cloned()
            .ok_or(EnvError::NoSuchProblem {
                index: problem_index,
                count: self.config.problem_list.len(),
            })?;
        self.reset_source(&source)
    }

    /// Starts an episode on an explicit problem source.
    pub fn reset_source(&mut self, source: &ProblemSource) -> Result<Observation, EnvError> {
        let clauses = parse_problem(source)?;
        self.reset_clauses(clauses)
    }

    /// Starts an episode on already-parsed input clauses.
    pub fn reset_clauses(&mut self, clauses: Vec<Clause>) -> Result<Observation, EnvError> {
        if clauses.len() > self.config.max_clauses {
            return Err(EnvError::TooManyInputClauses {
                count: clauses.len(),
                max: self.config.max_clauses,
            });
        }
        let mut episode = Episode {
            table: Vec::with_capacity(clauses.len()),
            signatures: HashSet::new(),
            labels: HashMap::new(),
            processed: Vec::new(),
            step: 0,
            generated: 0,
            next_label: 0,
            outcome: Outcome::Running,
            first_empty: None,
        };
        for mut clause in clauses {
            clause.processed = false;
            clause.birth_step = crate::logic::INPUT_BIRTH_STEP;
            if episode
                .labels
                .insert(clause.label.clone(), episode.table.len())
                .is_some()
            {
                return Err(EnvError::DuplicateLabel(clause.label));
            }
            if clause.is_empty() && episode.first_empty.is_none() {
                episode.first_empty = Some(episode.table.len());
            }
            episode.signatures.insert(normalized_signature(&clause));
            episode.table.push(Arc::new(clause));
        }
        self.episode = Some(episode);
        Ok(self.observation().expect("episode just started"))
    }

    fn active(&self) -> Result<&Episode, EnvError> {
        self.episode.as_ref().ok_or(EnvError::NoEpisode)
    }

    pub fn observation(&self) -> Result<Observation, EnvError> {
        let ep = self.active()?;
        Ok(Observation {
            clauses: ep.table.clone(),
            step_number: ep.step,
        })
    }

    pub fn outcome(&self) -> Result<Outcome, EnvError> {
        Ok(self.active()?.outcome)
    }

    pub fn step_number(&self) -> Result<u64, EnvError> {
        Ok(self.active()?.step)
    }

    /// Selects the clause at `action` as the given clause.
    pub fn step(&mut self, action: usize) -> Result<StepResult, EnvError> {
        let deadline = self.deadline;
        let max_clauses = self.config.max_clauses;
        let step_limit = self.config.step_limit;
        let ep = self.episode.as_mut().ok_or(EnvError::NoEpisode)?;
        if ep.outcome.is_done() {
            return Err(EnvError::EpisodeDone);
        }
        let given = match ep.table.get(action) {
            None => {
                return Err(EnvError::InvalidAction {
                    action,
                    reason: "index out of range",
                })
            }
            Some(c) if c.processed => {
                return Err(EnvError::InvalidAction {
                    action,
                    reason: "clause already processed",
                })
            }
            Some(c) => Arc::clone(c),
        };

        let stop = || deadline.is_some_and(|d| Instant::now() >= d);
        let table = &ep.table;
        let children = all_signed_children_until(&given, ep.processed.iter().map(|&i| table[i].as_ref()), &stop)
            .ok_or(EnvError::DeadlineExceeded)?;

        Arc::make_mut(&mut ep.table[action]).processed = true;
        ep.processed.push(action);
        for (mut child, signature) in children {
            if !ep.signatures.insert(signature) {
                continue;
            }
            let label = loop {
                let candidate = format!("_{}", ep.next_label);
                ep.next_label += 1;
                if !ep.labels.contains_key(&candidate) {
                    break candidate;
                }
            };
            child.label = label.clone();
            child.birth_step = ep.step as i64;
            child.processed = false;
            if child.is_empty() && ep.first_empty.is_none() {
                ep.first_empty = Some(ep.table.len());
            }
            ep.labels.insert(label, ep.table.len());
            ep.table.push(Arc::new(child));
            ep.generated += 1;
        }
        ep.step += 1;

        ep.outcome = if ep.first_empty.is_some() {
            Outcome::ProofFound
        } else if ep.table.len() > max_clauses {
            Outcome::ClauseLimitReached
        } else if ep.table.len() == ep.processed.len() {
            Outcome::Saturated
        } else if ep.step >= step_limit {
            Outcome::StepLimitReached
        } else {
            Outcome::Running
        };
        let outcome = ep.outcome;
        let info = StepInfo {
            outcome,
            generated_count: ep.generated,
        };
        Ok(StepResult {
            observation: self.observation()?,
            reward: reward_for(outcome),
            done: outcome.is_done(),
            info,
        })
    }

    pub fn render(&self, mode: RenderMode) -> Result<String, EnvError> {
        let ep = self.active()?;
        Ok(match mode {
            RenderMode::Human => ep.table.iter().map(|c| render_tptp(c)).collect::<Vec<_>>().join("\n"),
            RenderMode::Json => self.observation()?.to_json(),
        })
    }

    /// Clauses of the refutation: the ancestry of the first empty clause,
    /// generated clauses only, in table order. An empty clause that was part
    /// of the input is its own one-line proof.
    pub fn proof_clauses(&self) -> Result<Vec<Arc<Clause>>, EnvError> {
        let ep = self.active()?;
        if ep.outcome != Outcome::ProofFound {
            return Err(EnvError::NoProof);
        }
        let root = ep.first_empty.ok_or(EnvError::NoProof)?;
        if ep.table[root].inference.is_none() {
            return Ok(vec![Arc::clone(&ep.table[root])]);
        }
        let mut keep = vec![false; ep.table.len()];
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            if keep[i] {
                continue;
            }
            keep[i] = true;
            for parent in ep.table[i].parents() {
                if let Some(&p) = ep.labels.get(parent) {
                    if ep.table[p].inference.is_some() {
                        stack.push(p);
                    }
                }
            }
        }
        Ok(ep
            .table
            .iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(c, _)| Arc::clone(c))
            .collect())
    }

    /// The refutation as TSTP lines.
    pub fn tstp_proof(&self) -> Result<String, EnvError> {
        Ok(self
            .proof_clauses()?
            .iter()
            .map(|c| render_tptp(c))
            .collect::<Vec<_>>()
            .join("\n"))
    }

    /// Looks a clause up by label in the current table.
    pub fn clause_by_label(&self, label: &str) -> Option<Arc<Clause>> {
        let ep = self.episode.as_ref()?;
        ep.labels.get(label).map(|&i| Arc::clone(&ep.table[i]))
    }
}
