//! A saturation-based theorem-proving environment for clause-selection agents.
//!
//! Problems in the CNF fragment of TPTP are parsed into [`Clause`] values and
//! handed to a [`SaturationEnv`], which runs the given-clause loop one
//! selection at a time: each [`SaturationEnv::step`] takes the index of the
//! clause an agent wants to process next. The calculus has four generating
//! rules (resolution, paramodulation, factoring and reflexivity resolution)
//! and no redundancy elimination beyond dropping variants.
//!
//! ```
//! use saturate::{parse_clauses_text, EnvConfig, SaturationEnv};
//!
//! let clauses = parse_clauses_text(
//!     "cnf(p_imp_q, hypothesis, ~man(X0) | mortal(X0)).
//!      cnf(p, hypothesis, man(socrates)).
//!      cnf(q, hypothesis, ~mortal(socrates)).",
//! )
//! .unwrap();
//! let mut env = SaturationEnv::new(EnvConfig::new(vec![], 10).unwrap()).unwrap();
//! env.reset_clauses(clauses).unwrap();
//! let mut action = 0;
//! while !env.step(action).unwrap().done {
//!     action += 1;
//! }
//! assert!(env.tstp_proof().unwrap().ends_with("$false, inference(resolution, [], [q, _0]))."));
//! ```

pub mod agents;
pub mod calculus;
pub mod env;
pub mod harness;
pub mod json;
pub mod logic;
pub mod protocol;
pub mod signature;
pub mod tptp;
pub mod unify;

pub use agents::{select_age, select_size, select_size_and_age, AgentKind, AgentSpec, NoUnprocessed};
pub use calculus::{
    all_children, factoring, paramodulation, reflexivity_resolution, resolution, NotApplicable, Orientation,
    TermPosition,
};
pub use env::{EnvConfig, EnvError, Observation, Outcome, RenderMode, SaturationEnv, StepInfo, StepResult};
pub use harness::{batch_test, run_episode, BatchOptions, Category, EpisodeResult, Isolation, ResultsTable};
pub use json::{from_json, to_json, DecodeError};
pub use logic::{
    apply_substitution, variables_of, Atom, Clause, Inference, InferenceRule, Literal, Role, Substitution, Term,
};
pub use signature::normalized_signature;
pub use tptp::{parse_clause_text, parse_clauses_text, parse_problem, render_tptp, ParseError, ProblemSource};
pub use unify::{mgu, mgu_atoms, rename_apart, NotUnifiable};
