//! Syntactic unification with occurs check, and renaming clauses apart.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::logic::{Atom, Clause, HasVariables, Substitutable, Substitution, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotUnifiable {
    #[error("symbol clash: `{0}` vs `{1}`")]
    SymbolClash(String, String),
    #[error("arity mismatch for `{name}`: {left} vs {right}")]
    ArityMismatch { name: String, left: usize, right: usize },
    #[error("occurs check: {var} in {term}")]
    OccursCheck { var: String, term: Term },
}

/// Most general unifier of two terms.
///
/// The result is idempotent. Between two variables the lexicographically
/// smaller name is bound to the larger.
pub fn mgu(left: &Term, right: &Term) -> Result<Substitution, NotUnifiable> {
    let mut subst = Substitution::new();
    unify_into(&mut subst, vec![(left.clone(), right.clone())])?;
    Ok(subst)
}

/// Most general unifier of two atoms; predicate name and arity must agree.
pub fn mgu_atoms(left: &Atom, right: &Atom) -> Result<Substitution, NotUnifiable> {
    if left.name != right.name {
        return Err(NotUnifiable::SymbolClash(left.name.clone(), right.name.clone()));
    }
    if left.arity() != right.arity() {
        return Err(NotUnifiable::ArityMismatch {
            name: left.name.clone(),
            left: left.arity(),
            right: right.arity(),
        });
    }
    let mut subst = Substitution::new();
    let pairs = left
        .arguments
        .iter()
        .cloned()
        .zip(right.arguments.iter().cloned())
        .rev()
        .collect();
    unify_into(&mut subst, pairs)?;
    Ok(subst)
}

/// Extends an idempotent substitution so that it unifies every pair on the stack.
fn unify_into(subst: &mut Substitution, mut stack: Vec<(Term, Term)>) -> Result<(), NotUnifiable> {
    while let Some((l, r)) = stack.pop() {
        let l = l.apply(subst);
        let r = r.apply(subst);
        if l == r {
            continue;
        }
        match (l, r) {
            (Term::Variable(a), Term::Variable(b)) => {
                let (from, to) = if a < b { (a, b) } else { (b, a) };
                bind(subst, from, Term::Variable(to));
            }
            (Term::Variable(v), t) | (t, Term::Variable(v)) => {
                if t.contains_variable(&v) {
                    return Err(NotUnifiable::OccursCheck { var: v, term: t });
                }
                bind(subst, v, t);
            }
            (Term::Function { name: f, arguments: fa }, Term::Function { name: g, arguments: ga }) => {
                if f != g {
                    return Err(NotUnifiable::SymbolClash(f, g));
                }
                if fa.len() != ga.len() {
                    return Err(NotUnifiable::ArityMismatch {
                        name: f,
                        left: fa.len(),
                        right: ga.len(),
                    });
                }
                // reversed so that arguments are solved left to right
                stack.extend(fa.into_iter().zip(ga).rev());
            }
        }
    }
    Ok(())
}

/// Adds `var ↦ term` (with `term` already normalized by `subst`) and keeps the map idempotent.
fn bind(subst: &mut Substitution, var: String, term: Term) {
    let single = Substitution::from_pairs([(var.clone(), term.clone())]);
    for image in subst.bindings_mut().values_mut() {
        if image.contains_variable(&var) {
            *image = image.apply(&single);
        }
    }
    subst.bind(var, term);
}

/// Returns a variant of `clause` whose variables avoid `reserved`.
///
/// Colliding variables are renamed to the first free `Xk`; other variables
/// keep their names.
pub fn rename_apart(clause: &Clause, reserved: &BTreeSet<String>) -> Clause {
    let own = clause.variables();
    if own.is_disjoint(reserved) {
        return clause.clone();
    }
    let mut taken: BTreeSet<String> = own.union(reserved).cloned().collect();
    let mut renaming = Substitution::new();
    let mut k = 0usize;
    for v in own.iter().filter(|v| reserved.contains(*v)) {
        let fresh = loop {
            let candidate = format!("X{k}");
            k += 1;
            if !taken.contains(&candidate) {
                break candidate;
            }
        };
        taken.insert(fresh.clone());
        renaming.bind(v.clone(), Term::Variable(fresh));
    }
    clause.apply(&renaming)
}
