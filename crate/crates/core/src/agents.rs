//! Heuristic clause-selection agents.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::env::Observation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no unprocessed clause to select")]
pub struct NoUnprocessed;

/// Index of the unprocessed clause with the fewest literals; ties go to the lowest index.
pub fn select_size(observation: &Observation) -> Result<usize, NoUnprocessed> {
    observation
        .unprocessed()
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i)
        .ok_or(NoUnprocessed)
}

/// Index of the oldest unprocessed clause.
pub fn select_age(observation: &Observation) -> Result<usize, NoUnprocessed> {
    observation.unprocessed().next().map(|(i, _)| i).ok_or(NoUnprocessed)
}

/// `size_streak` size choices, then one age choice, cycling on the step count.
pub fn select_size_and_age(
    observation: &Observation,
    step_count: u64,
    size_streak: u64,
) -> Result<usize, NoUnprocessed> {
    if step_count % (size_streak + 1) < size_streak {
        select_size(observation)
    } else {
        select_age(observation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentKind {
    Size,
    Age,
    SizeAndAge,
}

impl AgentKind {
    pub const ALL: [AgentKind; 3] = [AgentKind::Size, AgentKind::Age, AgentKind::SizeAndAge];

    /// Name used on the command line and in result files.
    pub fn as_str(self) -> &'static str {
        match self {
            AgentKind::Size => "size",
            AgentKind::Age => "age",
            AgentKind::SizeAndAge => "size-age",
        }
    }
}

impl FromStr for AgentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "size" => Ok(AgentKind::Size),
            "age" => Ok(AgentKind::Age),
            "size-age" | "size_and_age" | "size&age" => Ok(AgentKind::SizeAndAge),
            other => Err(format!("unknown agent `{other}` (expected size, age or size-age)")),
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AgentSpec {
    pub kind: AgentKind,
    pub size_streak: u64,
}

impl AgentSpec {
    pub const DEFAULT_SIZE_STREAK: u64 = 5;

    pub fn new(kind: AgentKind) -> Self {
        AgentSpec {
            kind,
            size_streak: Self::DEFAULT_SIZE_STREAK,
        }
    }

    pub fn with_size_streak(kind: AgentKind, size_streak: u64) -> Result<Self, String> {
        if size_streak == 0 {
            return Err("size_streak must be at least 1".into());
        }
        Ok(AgentSpec { kind, size_streak })
    }

    /// The phase of `size-age` follows the observation's step number, so it
    /// restarts with every episode.
    pub fn select(&self, observation: &Observation) -> Result<usize, NoUnprocessed> {
        match self.kind {
            AgentKind::Size => select_size(observation),
            AgentKind::Age => select_age(observation),
            AgentKind::SizeAndAge => select_size_and_age(observation, observation.step_number, self.size_streak),
        }
    }
}
