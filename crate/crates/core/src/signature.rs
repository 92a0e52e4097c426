//! Canonical clause text used to detect variants.
//!
//! Two clauses get the same signature when they differ only by a bijective
//! renaming of variables and by the order of their literals. The signature is
//! the lexicographically smallest literal sequence over all orderings, where
//! variables are numbered by first occurrence along the chosen ordering.

use std::collections::HashMap;
use std::fmt::Write;

use crate::logic::{Clause, Literal, Term};
use crate::tptp::render::write_symbol;

/// Budget on the number of tie-broken orderings explored per clause.
const TIE_BUDGET: usize = 4096;

pub fn normalized_signature(clause: &Clause) -> String {
    literal_signature(&clause.literals)
}

pub fn literal_signature(literals: &[Literal]) -> String {
    if literals.is_empty() {
        return "$false".to_string();
    }
    let fixed: Vec<Option<String>> = literals
        .iter()
        .map(|l| {
            l.atom
                .arguments
                .iter()
                .all(Term::is_ground)
                .then(|| render_literal(l, &mut HashMap::new()))
        })
        .collect();
    if fixed.iter().all(Option::is_some) {
        // Ground literals render the same in every ordering, so sorting is minimal.
        let mut texts: Vec<String> = fixed.into_iter().flatten().collect();
        texts.sort();
        return texts.join(" | ");
    }
    let mut search = Search {
        literals,
        fixed,
        budget: TIE_BUDGET,
        best: None,
    };
    let mut remaining: Vec<usize> = (0..literals.len()).collect();
    search.explore(&mut remaining, &HashMap::new(), &mut Vec::new());
    search.best.unwrap_or_default().join(" | ")
}

struct Search<'a> {
    literals: &'a [Literal],
    fixed: Vec<Option<String>>,
    budget: usize,
    best: Option<Vec<String>>,
}

impl<'a> Search<'a> {
    fn explore(&mut self, remaining: &mut Vec<usize>, names: &HashMap<&'a str, usize>, prefix: &mut Vec<String>) {
        if let Some(best) = &self.best {
            // Every branch at a level renders identically, so a prefix that is
            // already larger than the best cannot win.
            if prefix.as_slice() > &best[..prefix.len()] {
                return;
            }
        }
        if remaining.is_empty() {
            if self.best.as_ref().map_or(true, |b| *prefix < *b) {
                self.best = Some(prefix.clone());
            }
            return;
        }
        let rendered: Vec<(usize, String, Option<HashMap<&'a str, usize>>)> = remaining
            .iter()
            .map(|&i| match &self.fixed[i] {
                Some(text) => (i, text.clone(), None),
                None => {
                    let mut local = names.clone();
                    let text = render_literal(&self.literals[i], &mut local);
                    (i, text, Some(local))
                }
            })
            .collect();
        let min = rendered.iter().map(|(_, s, _)| s).min().cloned().unwrap();
        let mut ties: Vec<(usize, String, Option<HashMap<&'a str, usize>>)> = Vec::new();
        for candidate in rendered.into_iter().filter(|(_, s, _)| *s == min) {
            // Picking either of two identical literals leaves the same search state.
            if !ties
                .iter()
                .any(|(j, _, _)| self.literals[*j] == self.literals[candidate.0])
            {
                ties.push(candidate);
            }
        }
        let branch = if self.budget > 0 { ties.len() } else { 1 };
        for (i, text, local) in ties.into_iter().take(branch) {
            if self.budget > 0 {
                self.budget -= 1;
            }
            let pos = remaining.iter().position(|&r| r == i).unwrap();
            remaining.remove(pos);
            prefix.push(text);
            self.explore(remaining, local.as_ref().unwrap_or(names), prefix);
            prefix.pop();
            remaining.insert(pos, i);
        }
    }
}

fn render_literal<'a>(lit: &'a Literal, names: &mut HashMap<&'a str, usize>) -> String {
    let mut out = String::new();
    if lit.negated {
        out.push('~');
    }
    write_symbol(&mut out, &lit.atom.name);
    if !lit.atom.arguments.is_empty() {
        out.push('(');
        for (k, a) in lit.atom.arguments.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            render_term(a, names, &mut out);
        }
        out.push(')');
    }
    out
}

fn render_term<'a>(term: &'a Term, names: &mut HashMap<&'a str, usize>, out: &mut String) {
    match term {
        Term::Variable(v) => {
            let next = names.len();
            let id = *names.entry(v.as_str()).or_insert(next);
            let _ = write!(out, "V{id}");
        }
        Term::Function { name, arguments } => {
            write_symbol(out, name);
            if !arguments.is_empty() {
                out.push('(');
                for (k, a) in arguments.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    render_term(a, names, out);
                }
                out.push(')');
            }
        }
    }
}
