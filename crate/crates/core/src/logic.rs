//! First-order terms, literals, clauses and substitutions.
//!
//! Equality is not a separate node kind: it is an ordinary atom whose
//! predicate is named [`EQUALITY`] with exactly two arguments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Predicate name used for equality atoms.
pub const EQUALITY: &str = "=";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Variable(String),
    Function { name: String, arguments: Vec<Term> },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Function {
            name: name.into(),
            arguments: Vec::new(),
        }
    }

    pub fn app(name: impl Into<String>, arguments: Vec<Term>) -> Self {
        Term::Function {
            name: name.into(),
            arguments,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Variable(_) => false,
            Term::Function { arguments, .. } => arguments.iter().all(Term::is_ground),
        }
    }

    /// Height of the term tree; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Variable(_) => 0,
            Term::Function { arguments, .. } => arguments.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Variable(_) => 1,
            Term::Function { arguments, .. } => 1 + arguments.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    pub fn contains_variable(&self, var: &str) -> bool {
        match self {
            Term::Variable(v) => v == var,
            Term::Function { arguments, .. } => arguments.iter().any(|a| a.contains_variable(var)),
        }
    }

    /// Subterm reached by descending through argument indices.
    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&head, rest)) => match self {
                Term::Variable(_) => None,
                Term::Function { arguments, .. } => arguments.get(head)?.subterm(rest),
            },
        }
    }

    /// Copy of the term with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], replacement: &Term) -> Option<Term> {
        match path.split_first() {
            None => Some(replacement.clone()),
            Some((&head, rest)) => match self {
                Term::Variable(_) => None,
                Term::Function { name, arguments } => {
                    let inner = arguments.get(head)?.replace_at(rest, replacement)?;
                    let mut arguments = arguments.clone();
                    arguments[head] = inner;
                    Some(Term::Function {
                        name: name.clone(),
                        arguments,
                    })
                }
            },
        }
    }

    /// Calls `visit(path, subterm)` for every subterm in pre-order, including the term itself.
    pub fn for_each_subterm<'a>(&'a self, path: &mut Vec<usize>, visit: &mut impl FnMut(&[usize], &'a Term)) {
        visit(path, self);
        if let Term::Function { arguments, .. } = self {
            for (i, arg) in arguments.iter().enumerate() {
                path.push(i);
                arg.for_each_subterm(path, visit);
                path.pop();
            }
        }
    }
}

/// A predicate applied to arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: String,
    pub arguments: Vec<Term>,
}

impl Atom {
    pub fn new(name: impl Into<String>, arguments: Vec<Term>) -> Self {
        Atom {
            name: name.into(),
            arguments,
        }
    }

    pub fn equality(left: Term, right: Term) -> Self {
        Atom::new(EQUALITY, vec![left, right])
    }

    pub fn is_equality(&self) -> bool {
        self.name == EQUALITY && self.arguments.len() == 2
    }

    pub fn arity(&self) -> usize {
        self.arguments.len()
    }

    /// Subterm at a path whose first index selects the argument.
    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        let (&head, rest) = path.split_first()?;
        self.arguments.get(head)?.subterm(rest)
    }

    pub fn replace_at(&self, path: &[usize], replacement: &Term) -> Option<Atom> {
        let (&head, rest) = path.split_first()?;
        let inner = self.arguments.get(head)?.replace_at(rest, replacement)?;
        let mut arguments = self.arguments.clone();
        arguments[head] = inner;
        Some(Atom {
            name: self.name.clone(),
            arguments,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub negated: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal { negated: false, atom }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal { negated: true, atom }
    }

    pub fn is_equality(&self) -> bool {
        self.atom.is_equality()
    }
}

/// TPTP formula roles. Roles are carried through unchanged; the prover
/// attaches no meaning to them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Axiom,
    Hypothesis,
    Definition,
    Assumption,
    Lemma,
    Theorem,
    Corollary,
    Conjecture,
    NegatedConjecture,
    Plain,
    Type,
    Unknown,
}

impl Role {
    pub const ALL: [Role; 12] = [
        Role::Axiom,
        Role::Hypothesis,
        Role::Definition,
        Role::Assumption,
        Role::Lemma,
        Role::Theorem,
        Role::Corollary,
        Role::Conjecture,
        Role::NegatedConjecture,
        Role::Plain,
        Role::Type,
        Role::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::Definition => "definition",
            Role::Assumption => "assumption",
            Role::Lemma => "lemma",
            Role::Theorem => "theorem",
            Role::Corollary => "corollary",
            Role::Conjecture => "conjecture",
            Role::NegatedConjecture => "negated_conjecture",
            Role::Plain => "plain",
            Role::Type => "type",
            Role::Unknown => "unknown",
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InferenceRule {
    Resolution,
    Paramodulation,
    Factoring,
    ReflexivityResolution,
}

impl InferenceRule {
    pub const ALL: [InferenceRule; 4] = [
        InferenceRule::Resolution,
        InferenceRule::Paramodulation,
        InferenceRule::Factoring,
        InferenceRule::ReflexivityResolution,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InferenceRule::Resolution => "resolution",
            InferenceRule::Paramodulation => "paramodulation",
            InferenceRule::Factoring => "factoring",
            InferenceRule::ReflexivityResolution => "reflexivity_resolution",
        }
    }
}

impl FromStr for InferenceRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InferenceRule::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown inference rule `{s}`"))
    }
}

impl fmt::Display for InferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a generated clause was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inference {
    pub rule: InferenceRule,
    pub parents: Vec<String>,
}

/// Birth step carried by clauses that come from the problem file.
pub const INPUT_BIRTH_STEP: i64 = -1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub label: String,
    pub role: Role,
    pub inference: Option<Inference>,
    pub birth_step: i64,
    pub processed: bool,
}

impl Clause {
    /// An input clause: no inference record, birth step -1, unprocessed.
    pub fn input(label: impl Into<String>, role: Role, literals: Vec<Literal>) -> Self {
        Clause {
            literals,
            label: label.into(),
            role,
            inference: None,
            birth_step: INPUT_BIRTH_STEP,
            processed: false,
        }
    }

    /// The contradiction has no literals.
    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn inference_rule(&self) -> Option<InferenceRule> {
        self.inference.as_ref().map(|i| i.rule)
    }

    pub fn parents(&self) -> &[String] {
        self.inference.as_ref().map(|i| i.parents.as_slice()).unwrap_or(&[])
    }

    pub fn is_ground(&self) -> bool {
        self.literals
            .iter()
            .all(|l| l.atom.arguments.iter().all(Term::is_ground))
    }
}

/// A finite map from variable names to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a binding. Binding a variable to itself is a no-op.
    pub fn bind(&mut self, var: impl Into<String>, term: Term) {
        let var = var.into();
        if matches!(&term, Term::Variable(v) if *v == var) {
            self.bindings.remove(&var);
        } else {
            self.bindings.insert(var, term);
        }
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Term)>,
        S: Into<String>,
    {
        let mut subst = Substitution::new();
        for (v, t) in pairs {
            subst.bind(v, t);
        }
        subst
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.bindings.keys()
    }

    pub(crate) fn bindings_mut(&mut self) -> &mut BTreeMap<String, Term> {
        &mut self.bindings
    }

    /// `other ∘ self`: applying the result equals applying `self` then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            out.bind(v.clone(), t.apply(other));
        }
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }
}

/// Simultaneous application of a substitution.
pub trait Substitutable: Sized {
    fn apply(&self, subst: &Substitution) -> Self;
}

impl Substitutable for Term {
    fn apply(&self, subst: &Substitution) -> Self {
        match self {
            Term::Variable(v) => subst.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Function { name, arguments } => Term::Function {
                name: name.clone(),
                arguments: arguments.iter().map(|a| a.apply(subst)).collect(),
            },
        }
    }
}

impl Substitutable for Atom {
    fn apply(&self, subst: &Substitution) -> Self {
        Atom {
            name: self.name.clone(),
            arguments: self.arguments.iter().map(|a| a.apply(subst)).collect(),
        }
    }
}

impl Substitutable for Literal {
    fn apply(&self, subst: &Substitution) -> Self {
        Literal {
            negated: self.negated,
            atom: self.atom.apply(subst),
        }
    }
}

impl Substitutable for Clause {
    fn apply(&self, subst: &Substitution) -> Self {
        Clause {
            literals: self.literals.iter().map(|l| l.apply(subst)).collect(),
            ..self.clone()
        }
    }
}

pub fn apply_substitution<T: Substitutable>(subst: &Substitution, target: &T) -> T {
    target.apply(subst)
}

/// Anything whose variables can be enumerated.
pub trait HasVariables {
    fn collect_variables(&self, out: &mut BTreeSet<String>);

    fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }
}

impl HasVariables for Term {
    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Variable(v) => {
                if !out.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Function { arguments, .. } => {
                for a in arguments {
                    a.collect_variables(out);
                }
            }
        }
    }
}

impl HasVariables for Atom {
    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        for a in &self.arguments {
            a.collect_variables(out);
        }
    }
}

impl HasVariables for Literal {
    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        self.atom.collect_variables(out);
    }
}

impl HasVariables for Clause {
    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        for l in &self.literals {
            l.collect_variables(out);
        }
    }
}

pub fn variables_of<T: HasVariables>(target: &T) -> BTreeSet<String> {
    target.variables()
}

/// Renames variables to `X0, X1, …` in order of first occurrence.
pub fn normalize_variables(literals: &[Literal]) -> Vec<Literal> {
    let mut order: Vec<String> = Vec::new();
    for lit in literals {
        for arg in &lit.atom.arguments {
            arg.for_each_subterm(&mut Vec::new(), &mut |_, t| {
                if let Term::Variable(v) = t {
                    if !order.contains(v) {
                        order.push(v.clone());
                    }
                }
            });
        }
    }
    let subst = Substitution::from_pairs(
        order
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, Term::var(format!("X{i}")))),
    );
    literals.iter().map(|l| l.apply(&subst)).collect()
}
