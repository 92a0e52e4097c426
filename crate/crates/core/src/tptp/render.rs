//! TPTP/TSTP text output with one canonical spacing.

use std::fmt::{self, Write};

use crate::logic::{Atom, Clause, Literal, Term};

fn is_lower_word(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_number(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

fn is_dollar_word(s: &str) -> bool {
    s.len() > 1 && s.starts_with('$') && s[1..].chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_distinct_object(s: &str) -> bool {
    s.len() >= 2 && s.starts_with('"') && s.ends_with('"')
}

/// Writes a functor or predicate name, single-quoting when it is not a plain word.
pub fn write_symbol(out: &mut String, name: &str) {
    if is_lower_word(name) || is_number(name) || is_dollar_word(name) || is_distinct_object(name) {
        out.push_str(name);
    } else {
        write_quoted(out, name);
    }
}

/// Labels additionally admit `_`-prefixed words such as `_0`.
pub fn write_label(out: &mut String, label: &str) {
    let underscore_word =
        label.len() > 1 && label.starts_with('_') && label[1..].chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    if is_lower_word(label) || is_number(label) || underscore_word {
        out.push_str(label);
    } else {
        write_quoted(out, label);
    }
}

fn write_quoted(out: &mut String, s: &str) {
    out.push('\'');
    for c in s.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
}

fn write_arguments(out: &mut String, arguments: &[Term]) {
    if arguments.is_empty() {
        return;
    }
    out.push('(');
    for (i, a) in arguments.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_term(out, a);
    }
    out.push(')');
}

pub fn write_term(out: &mut String, term: &Term) {
    match term {
        Term::Variable(v) => out.push_str(v),
        Term::Function { name, arguments } => {
            write_symbol(out, name);
            write_arguments(out, arguments);
        }
    }
}

pub fn write_literal(out: &mut String, literal: &Literal) {
    let atom = &literal.atom;
    if atom.is_equality() {
        if literal.negated {
            out.push_str("~ ");
        }
        write_term(out, &atom.arguments[0]);
        out.push_str(" = ");
        write_term(out, &atom.arguments[1]);
    } else {
        if literal.negated {
            out.push('~');
        }
        write_symbol(out, &atom.name);
        write_arguments(out, &atom.arguments);
    }
}

/// The disjunction part of a clause; `$false` when empty.
pub fn write_disjunction(out: &mut String, literals: &[Literal]) {
    if literals.is_empty() {
        out.push_str("$false");
        return;
    }
    for (i, l) in literals.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        write_literal(out, l);
    }
}

/// `cnf(label, role, disjunction[, inference(rule, [], [parents])]).`
pub fn render_tptp(clause: &Clause) -> String {
    let mut out = String::from("cnf(");
    write_label(&mut out, &clause.label);
    let _ = write!(out, ", {}, ", clause.role);
    write_disjunction(&mut out, &clause.literals);
    if let Some(inf) = &clause.inference {
        let _ = write!(out, ", inference({}, [], [", inf.rule);
        for (i, p) in inf.parents.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write_label(&mut out, p);
        }
        out.push_str("])");
    }
    out.push_str(").");
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(&mut s, self);
        f.write_str(&s)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_literal(&mut s, &Literal::positive(self.clone()));
        f.write_str(&s)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_literal(&mut s, self);
        f.write_str(&s)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tptp(self))
    }
}
