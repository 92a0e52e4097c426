//! The four generating inference rules and the child sweep of the given-clause loop.
//!
//! Conclusions come back with an empty label, the first premise's role and
//! variables renamed to `X0, X1, …` by first occurrence. Binary rules expect
//! variable-disjoint premises; [`all_children`] renames apart before each attempt.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::logic::{normalize_variables, Clause, HasVariables, Inference, InferenceRule, Literal, Substitutable, Term};
use crate::signature::literal_signature;
use crate::unify::{mgu, mgu_atoms, rename_apart, NotUnifiable};

/// Address of a subterm inside a clause: a literal, then argument indices
/// starting at the atom's argument list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermPosition {
    pub literal_index: usize,
    pub path: Vec<usize>,
}

impl TermPosition {
    pub fn new(literal_index: usize, path: Vec<usize>) -> Self {
        TermPosition { literal_index, path }
    }
}

/// Which side of `s = t` is matched against the rewritten subterm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    LeftToRight,
    RightToLeft,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotApplicable {
    #[error("literal index out of range")]
    NoSuchLiteral,
    #[error("literals must have opposite signs")]
    SameSign,
    #[error("literals must have the same sign")]
    OppositeSigns,
    #[error("factoring needs two distinct literals")]
    SameLiteral,
    #[error("factoring of this literal polarity is disabled")]
    PolarityExcluded,
    #[error("not a positive equality literal")]
    NotPositiveEquality,
    #[error("not a negated equality literal")]
    NotNegatedEquality,
    #[error("position does not address a subterm")]
    NoSuchPosition,
    #[error("position addresses a variable")]
    VariablePosition,
    #[error(transparent)]
    NotUnifiable(#[from] NotUnifiable),
}

/// Whether factoring may merge two literals of this polarity.
///
/// Both polarities are accepted; restricting factoring to positive literals
/// means returning `!literal.negated` here.
pub fn factoring_admits(_literal: &Literal) -> bool {
    true
}

fn conclude(rule: InferenceRule, premises: &[&Clause], literals: Vec<Literal>) -> Clause {
    Clause {
        literals: normalize_variables(&literals),
        label: String::new(),
        role: premises[0].role,
        inference: Some(Inference {
            rule,
            parents: premises.iter().map(|c| c.label.clone()).collect(),
        }),
        birth_step: 0,
        processed: false,
    }
}

fn without(literals: &[Literal], index: usize) -> impl Iterator<Item = &Literal> {
    literals
        .iter()
        .enumerate()
        .filter(move |(k, _)| *k != index)
        .map(|(_, l)| l)
}

/// From `C1 ∨ A1` and `C2 ∨ ¬A2` infer `σ(C1 ∨ C2)` with `σ = mgu(A1, A2)`.
/// Either premise may carry the negative literal.
pub fn resolution(c1: &Clause, i: usize, c2: &Clause, j: usize) -> Result<Clause, NotApplicable> {
    let l1 = c1.literals.get(i).ok_or(NotApplicable::NoSuchLiteral)?;
    let l2 = c2.literals.get(j).ok_or(NotApplicable::NoSuchLiteral)?;
    if l1.negated == l2.negated {
        return Err(NotApplicable::SameSign);
    }
    let sigma = mgu_atoms(&l1.atom, &l2.atom)?;
    let literals = without(&c1.literals, i)
        .chain(without(&c2.literals, j))
        .map(|l| l.apply(&sigma))
        .collect();
    Ok(conclude(InferenceRule::Resolution, &[c1, c2], literals))
}

/// From `C1 ∨ s = t` and `C2 ∨ L[r]` infer `σ(L[t] ∨ C1 ∨ C2)` with `σ = mgu(s, r)`,
/// rewriting the single occurrence of `r` at `position`.
pub fn paramodulation(
    c1: &Clause,
    eq: usize,
    c2: &Clause,
    position: &TermPosition,
    orientation: Orientation,
) -> Result<Clause, NotApplicable> {
    let eq_lit = c1.literals.get(eq).ok_or(NotApplicable::NoSuchLiteral)?;
    if eq_lit.negated || !eq_lit.is_equality() {
        return Err(NotApplicable::NotPositiveEquality);
    }
    let (from, to) = match orientation {
        Orientation::LeftToRight => (&eq_lit.atom.arguments[0], &eq_lit.atom.arguments[1]),
        Orientation::RightToLeft => (&eq_lit.atom.arguments[1], &eq_lit.atom.arguments[0]),
    };
    let target = c2
        .literals
        .get(position.literal_index)
        .ok_or(NotApplicable::NoSuchLiteral)?;
    let r = target
        .atom
        .subterm(&position.path)
        .ok_or(NotApplicable::NoSuchPosition)?;
    if r.is_variable() {
        return Err(NotApplicable::VariablePosition);
    }
    let sigma = mgu(from, r)?;
    let rewritten = Literal {
        negated: target.negated,
        atom: target
            .atom
            .replace_at(&position.path, to)
            .ok_or(NotApplicable::NoSuchPosition)?,
    };
    let literals = std::iter::once(&rewritten)
        .chain(without(&c1.literals, eq))
        .chain(without(&c2.literals, position.literal_index))
        .map(|l| l.apply(&sigma))
        .collect();
    Ok(conclude(InferenceRule::Paramodulation, &[c1, c2], literals))
}

/// From `C ∨ A1 ∨ A2` infer `σ(C ∨ A1)` with `σ = mgu(A1, A2)`; literal `j` is dropped.
pub fn factoring(c: &Clause, i: usize, j: usize) -> Result<Clause, NotApplicable> {
    if i == j {
        return Err(NotApplicable::SameLiteral);
    }
    let l1 = c.literals.get(i).ok_or(NotApplicable::NoSuchLiteral)?;
    let l2 = c.literals.get(j).ok_or(NotApplicable::NoSuchLiteral)?;
    if l1.negated != l2.negated {
        return Err(NotApplicable::OppositeSigns);
    }
    if !factoring_admits(l1) {
        return Err(NotApplicable::PolarityExcluded);
    }
    let sigma = mgu_atoms(&l1.atom, &l2.atom)?;
    let literals = without(&c.literals, j).map(|l| l.apply(&sigma)).collect();
    Ok(conclude(InferenceRule::Factoring, &[c], literals))
}

/// From `C ∨ s ≠ t` infer `σ(C)` with `σ = mgu(s, t)`.
pub fn reflexivity_resolution(c: &Clause, i: usize) -> Result<Clause, NotApplicable> {
    let lit = c.literals.get(i).ok_or(NotApplicable::NoSuchLiteral)?;
    if !lit.negated || !lit.is_equality() {
        return Err(NotApplicable::NotNegatedEquality);
    }
    let sigma = mgu(&lit.atom.arguments[0], &lit.atom.arguments[1])?;
    let literals = without(&c.literals, i).map(|l| l.apply(&sigma)).collect();
    Ok(conclude(InferenceRule::ReflexivityResolution, &[c], literals))
}

/// Every non-variable subterm position of a clause, literal by literal, pre-order.
pub fn rewritable_positions(clause: &Clause) -> Vec<TermPosition> {
    let mut out = Vec::new();
    for (li, lit) in clause.literals.iter().enumerate() {
        for (ai, arg) in lit.atom.arguments.iter().enumerate() {
            let mut path = vec![ai];
            arg.for_each_subterm(&mut path, &mut |p, t: &Term| {
                if !t.is_variable() {
                    out.push(TermPosition::new(li, p.to_vec()));
                }
            });
        }
    }
    out
}

/// Collects conclusions, dropping variants of ones already seen.
struct Batch {
    seen: HashSet<String>,
    out: Vec<(Clause, String)>,
}

/// True when some binary inference between the two clauses might apply.
fn may_interact(c1: &Clause, c2: &Clause) -> bool {
    let has_equation = |c: &Clause| c.literals.iter().any(|l| !l.negated && l.is_equality());
    has_equation(c1)
        || has_equation(c2)
        || c1.literals.iter().any(|l1| {
            c2.literals.iter().any(|l2| {
                l1.negated != l2.negated && l1.atom.name == l2.atom.name && l1.atom.arity() == l2.atom.arity()
            })
        })
}

fn rename_apart_cow<'c>(clause: &'c Clause, reserved: &BTreeSet<String>) -> Cow<'c, Clause> {
    if clause.variables().is_disjoint(reserved) {
        Cow::Borrowed(clause)
    } else {
        Cow::Owned(rename_apart(clause, reserved))
    }
}

impl Batch {
    fn push(&mut self, result: Result<Clause, NotApplicable>) {
        if let Ok(c) = result {
            let signature = literal_signature(&c.literals);
            if self.seen.insert(signature.clone()) {
                self.out.push((c, signature));
            }
        }
    }

    /// Resolution of `c1` against `c2` and paramodulation from `c1` into `c2`.
    fn binary(&mut self, c1: &Clause, c2: &Clause) {
        for (i, l1) in c1.literals.iter().enumerate() {
            for (j, l2) in c2.literals.iter().enumerate() {
                if l1.negated != l2.negated && l1.atom.name == l2.atom.name {
                    self.push(resolution(c1, i, c2, j));
                }
            }
        }
        let equations: Vec<usize> = c1
            .literals
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.negated && l.is_equality())
            .map(|(i, _)| i)
            .collect();
        if equations.is_empty() {
            return;
        }
        let positions = rewritable_positions(c2);
        for &eq in &equations {
            for pos in &positions {
                for orientation in [Orientation::LeftToRight, Orientation::RightToLeft] {
                    self.push(paramodulation(c1, eq, c2, pos, orientation));
                }
            }
        }
    }

    fn unary(&mut self, c: &Clause) {
        for i in 0..c.literals.len() {
            for j in i + 1..c.literals.len() {
                self.push(factoring(c, i, j));
            }
        }
        for i in 0..c.literals.len() {
            self.push(reflexivity_resolution(c, i));
        }
    }
}

/// All conclusions of one rule application with `given` as a premise and the
/// other premise (if any) taken from `processed`.
///
/// Order: for each processed clause, the processed clause as first premise,
/// then `given` as first premise; then factoring and reflexivity resolution
/// on `given`. Variants within the batch are dropped, keeping the first.
pub fn all_children(given: &Clause, processed: &[Clause]) -> Vec<Clause> {
    all_children_until(given, processed.iter(), &|| false).unwrap_or_default()
}

/// Like [`all_children`], but gives up and returns `None` as soon as `stop`
/// returns true; it is polled once per processed clause.
pub fn all_children_until<'a>(
    given: &Clause,
    processed: impl IntoIterator<Item = &'a Clause>,
    stop: &dyn Fn() -> bool,
) -> Option<Vec<Clause>> {
    all_signed_children_until(given, processed, stop).map(|v| v.into_iter().map(|(c, _)| c).collect())
}

/// [`all_children_until`] with each child's [`literal_signature`] alongside.
pub(crate) fn all_signed_children_until<'a>(
    given: &Clause,
    processed: impl IntoIterator<Item = &'a Clause>,
    stop: &dyn Fn() -> bool,
) -> Option<Vec<(Clause, String)>> {
    let mut batch = Batch {
        seen: HashSet::new(),
        out: Vec::new(),
    };
    let given_vars = given.variables();
    for other in processed {
        if stop() {
            return None;
        }
        if !may_interact(given, other) {
            continue;
        }
        let renamed_given = rename_apart_cow(given, &other.variables());
        batch.binary(other, &renamed_given);
        let renamed_other = rename_apart_cow(other, &given_vars);
        batch.binary(given, &renamed_other);
    }
    batch.unary(given);
    Some(batch.out)
}
