//! Reader and writer for the CNF fragment of the TPTP language.
//!
//! Accepted input: `cnf(name, role, formula[, annotations]).` entries,
//! `include('file'[, [names]]).` directives and `%` or `/* */` comments.
//! Formulas are disjunctions of literals, optionally parenthesized, with infix
//! `=` and `!=` (the latter read as a negated equality) and the `$false`
//! literal. Inference annotations produced by [`render_tptp`] are read back
//! into the clause's inference record; other annotations are ignored.

mod lexer;
pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::logic::{Atom, Clause, Inference, InferenceRule, Literal, Role, Term};
use lexer::{tokenize, Tok, Token};
pub use render::render_tptp;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{}{line}:{column}: {message}", file_prefix(.file))]
    Syntax {
        file: Option<PathBuf>,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}{line}:{column}: unsupported formula kind `{kind}` (only cnf is accepted)", file_prefix(.file))]
    UnsupportedFormula {
        file: Option<PathBuf>,
        line: usize,
        column: usize,
        kind: String,
    },
    #[error("{}{line}: include target `{target}` not found under {searched:?}", file_prefix(.file))]
    IncludeNotFound {
        file: Option<PathBuf>,
        line: usize,
        target: String,
        searched: Vec<PathBuf>,
    },
    #[error("include cycle through {}", .path.display())]
    IncludeCycle { path: PathBuf },
    #[error("cannot read {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn file_prefix(file: &Option<PathBuf>) -> String {
    match file {
        Some(p) => format!("{}:", p.display()),
        None => String::new(),
    }
}

impl ParseError {
    fn in_file(mut self, path: &Path) -> Self {
        match &mut self {
            ParseError::Syntax { file, .. }
            | ParseError::UnsupportedFormula { file, .. }
            | ParseError::IncludeNotFound { file, .. } => {
                if file.is_none() {
                    *file = Some(path.to_path_buf());
                }
            }
            _ => {}
        }
        self
    }
}

/// A problem file plus the directories searched for `include` targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSource {
    pub path: PathBuf,
    pub include_roots: Vec<PathBuf>,
}

impl ProblemSource {
    /// Include roots default to the problem's directory, then `../../` from it,
    /// which is where `Axioms/` lives in a TPTP tree.
    pub fn new(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let dir = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        let dir = if dir.as_os_str().is_empty() {
            PathBuf::from(".")
        } else {
            dir
        };
        let include_roots = vec![dir.clone(), dir.join("..").join("..")];
        ProblemSource { path, include_roots }
    }

    pub fn with_roots(path: impl Into<PathBuf>, include_roots: Vec<PathBuf>) -> Self {
        ProblemSource {
            path: path.into(),
            include_roots,
        }
    }

    /// Short name used in reports: the file stem.
    pub fn id(&self) -> String {
        self.path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| self.path.display().to_string())
    }
}

enum Statement {
    Cnf(Clause),
    Include {
        target: String,
        selection: Option<Vec<String>>,
        line: usize,
    },
}

/// Parses a problem file, expanding includes in place.
pub fn parse_problem(source: &ProblemSource) -> Result<Vec<Clause>, ParseError> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    load(&source.path, &source.include_roots, None, &mut stack, &mut out)?;
    Ok(out)
}

fn load(
    path: &Path,
    roots: &[PathBuf],
    selection: Option<&[String]>,
    stack: &mut Vec<PathBuf>,
    out: &mut Vec<Clause>,
) -> Result<(), ParseError> {
    let io_err = |source| ParseError::Io {
        path: path.to_path_buf(),
        source,
    };
    let canonical = fs::canonicalize(path).map_err(io_err)?;
    if stack.contains(&canonical) {
        return Err(ParseError::IncludeCycle { path: canonical });
    }
    let text = fs::read_to_string(path).map_err(io_err)?;
    let statements = parse_statements(&text).map_err(|e| e.in_file(path))?;
    stack.push(canonical);
    for st in statements {
        match st {
            Statement::Cnf(clause) => {
                if selection.map_or(true, |names| names.contains(&clause.label)) {
                    out.push(clause);
                }
            }
            Statement::Include {
                target,
                selection: inner,
                line,
            } => {
                let mut searched: Vec<PathBuf> = roots.to_vec();
                if let Some(dir) = path.parent() {
                    searched.push(dir.to_path_buf());
                }
                let found = searched.iter().map(|r| r.join(&target)).find(|p| p.is_file());
                let Some(found) = found else {
                    return Err(ParseError::IncludeNotFound {
                        file: Some(path.to_path_buf()),
                        line,
                        target,
                        searched,
                    });
                };
                let sel = inner.as_deref().or(selection);
                load(&found, roots, sel, stack, out)?;
            }
        }
    }
    stack.pop();
    Ok(())
}

/// Parses a single annotated `cnf` formula.
pub fn parse_clause_text(text: &str) -> Result<Clause, ParseError> {
    let mut statements = parse_statements(text)?;
    if statements.len() != 1 {
        return Err(ParseError::Syntax {
            file: None,
            line: 1,
            column: 1,
            message: format!("expected exactly one cnf formula, found {}", statements.len()),
        });
    }
    match statements.pop().unwrap() {
        Statement::Cnf(c) => Ok(c),
        Statement::Include { line, .. } => Err(ParseError::Syntax {
            file: None,
            line,
            column: 1,
            message: "expected a cnf formula, found include".into(),
        }),
    }
}

/// Parses clause text out of a string containing any number of `cnf` entries (no includes).
pub fn parse_clauses_text(text: &str) -> Result<Vec<Clause>, ParseError> {
    parse_statements(text)?
        .into_iter()
        .map(|st| match st {
            Statement::Cnf(c) => Ok(c),
            Statement::Include { line, .. } => Err(ParseError::Syntax {
                file: None,
                line,
                column: 1,
                message: "include is not allowed here".into(),
            }),
        })
        .collect()
}

fn parse_statements(text: &str) -> Result<Vec<Statement>, ParseError> {
    let tokens = tokenize(text)?;
    let (eof_line, eof_column) = eof_position(text);
    let mut parser = Parser {
        toks: &tokens,
        pos: 0,
        eof_line,
        eof_column,
    };
    let mut out = Vec::new();
    while !parser.at_end() {
        out.push(parser.statement()?);
    }
    Ok(out)
}

fn eof_position(text: &str) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for c in text.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    eof_line: usize,
    eof_column: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn position(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or((self.eof_line, self.eof_column))
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let (line, column) = self.position();
        Err(ParseError::Syntax {
            file: None,
            line,
            column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let (line, column) = self.position();
        match self.peek() {
            Some(Tok::LowerWord(w)) if w == "cnf" => {
                self.bump();
                self.cnf().map(Statement::Cnf)
            }
            Some(Tok::LowerWord(w)) if w == "include" => {
                self.bump();
                self.include(line)
            }
            Some(Tok::LowerWord(w)) if matches!(w.as_str(), "fof" | "tff" | "thf" | "tcf" | "tpi") => {
                Err(ParseError::UnsupportedFormula {
                    file: None,
                    line,
                    column,
                    kind: w.clone(),
                })
            }
            _ => self.unexpected("`cnf` or `include`"),
        }
    }

    fn include(&mut self, line: usize) -> PResult<Statement> {
        self.expect(&Tok::LParen)?;
        let target = match self.bump() {
            Some(Tok::SingleQuoted(s)) => s.clone(),
            _ => {
                self.pos -= 1;
                return self.unexpected("quoted file name");
            }
        };
        let mut selection = None;
        if self.eat(&Tok::Comma) {
            self.expect(&Tok::LBracket)?;
            let mut names = Vec::new();
            if !self.eat(&Tok::RBracket) {
                loop {
                    names.push(self.name()?);
                    if self.eat(&Tok::RBracket) {
                        break;
                    }
                    self.expect(&Tok::Comma)?;
                }
            }
            selection = Some(names);
        }
        self.expect(&Tok::RParen)?;
        self.expect(&Tok::Dot)?;
        Ok(Statement::Include {
            target,
            selection,
            line,
        })
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::LowerWord(s) | Tok::UnderscoreWord(s) | Tok::SingleQuoted(s) | Tok::Number(s)) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("formula name"),
        }
    }

    fn cnf(&mut self) -> PResult<Clause> {
        self.expect(&Tok::LParen)?;
        let label = self.name()?;
        self.expect(&Tok::Comma)?;
        let role = match self.peek() {
            Some(Tok::LowerWord(w)) => match w.parse::<Role>() {
                Ok(r) => {
                    self.bump();
                    r
                }
                Err(e) => return self.error(e),
            },
            _ => return self.unexpected("formula role"),
        };
        self.expect(&Tok::Comma)?;
        let literals = self.disjunction()?;
        let mut inference = None;
        if self.eat(&Tok::Comma) {
            let start = self.pos;
            self.skip_annotations()?;
            inference = read_inference(&self.toks[start..self.pos]);
        }
        self.expect(&Tok::RParen)?;
        self.expect(&Tok::Dot)?;
        let mut clause = Clause::input(label, role, literals);
        clause.inference = inference;
        Ok(clause)
    }

    /// Skips balanced tokens up to the `)` that closes the `cnf(`.
    fn skip_annotations(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                None => return self.unexpected("`)`"),
                Some(Tok::LParen | Tok::LBracket) => depth += 1,
                Some(Tok::RParen) if depth == 0 => return Ok(()),
                Some(Tok::RParen | Tok::RBracket) => {
                    if depth == 0 {
                        return self.unexpected("annotation term");
                    }
                    depth -= 1;
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn disjunction(&mut self) -> PResult<Vec<Literal>> {
        let mut lits = self.disjunct()?;
        while self.eat(&Tok::Pipe) {
            lits.extend(self.disjunct()?);
        }
        Ok(lits)
    }

    fn disjunct(&mut self) -> PResult<Vec<Literal>> {
        if self.eat(&Tok::LParen) {
            let inner = self.disjunction()?;
            self.expect(&Tok::RParen)?;
            return Ok(inner);
        }
        Ok(self.literal()?.into_iter().collect())
    }

    fn literal(&mut self) -> PResult<Option<Literal>> {
        let negated = self.eat(&Tok::Tilde);
        if negated && self.peek() == Some(&Tok::LParen) {
            self.bump();
            let inner = self.literal()?;
            self.expect(&Tok::RParen)?;
            return Ok(inner.map(|l| Literal {
                negated: !l.negated,
                atom: l.atom,
            }));
        }
        let (atom, flip) = self.atomic()?;
        let negated = negated != flip;
        let constant_truth = match atom.name.as_str() {
            "$false" if atom.arguments.is_empty() => Some(false),
            "$true" if atom.arguments.is_empty() => Some(true),
            _ => None,
        };
        // A literal that is false under every interpretation contributes nothing.
        if constant_truth == Some(negated) {
            return Ok(None);
        }
        Ok(Some(Literal { negated, atom }))
    }

    /// Returns the atom and whether it was written with `!=`.
    fn atomic(&mut self) -> PResult<(Atom, bool)> {
        if let Some(Tok::Other(op)) = self.peek() {
            return self.error(format!("connective `{op}` is not allowed in cnf"));
        }
        let (line, column) = self.position();
        let left = self.term()?;
        if self.eat(&Tok::Equals) {
            let right = self.term()?;
            return Ok((Atom::equality(left, right), false));
        }
        if self.eat(&Tok::NotEquals) {
            let right = self.term()?;
            return Ok((Atom::equality(left, right), true));
        }
        match left {
            Term::Function { name, arguments } => Ok((Atom { name, arguments }, false)),
            Term::Variable(v) => Err(ParseError::Syntax {
                file: None,
                line,
                column,
                message: format!("variable `{v}` used as a predicate"),
            }),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let name = match self.peek() {
            Some(Tok::UpperWord(v)) => {
                let v = v.clone();
                self.bump();
                return Ok(Term::Variable(v));
            }
            Some(Tok::LowerWord(s) | Tok::SingleQuoted(s) | Tok::DollarWord(s) | Tok::Number(s)) => s.clone(),
            Some(Tok::DoubleQuoted(s)) => format!("\"{s}\""),
            _ => return self.unexpected("term"),
        };
        self.bump();
        let mut arguments = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                arguments.push(self.term()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(&Tok::Comma)?;
            }
        }
        Ok(Term::Function { name, arguments })
    }
}

/// Recognizes `inference(<rule>, <anything>, [<names>])` at the head of the annotation tokens.
fn read_inference(toks: &[Token]) -> Option<Inference> {
    let t: Vec<&Tok> = toks.iter().map(|t| &t.tok).collect();
    match t.as_slice() {
        [Tok::LowerWord(head), Tok::LParen, Tok::LowerWord(rule), Tok::Comma, rest @ ..] if head == "inference" => {
            let rule: InferenceRule = rule.parse().ok()?;
            // skip the balanced status/info argument
            let mut depth = 0usize;
            let mut i = 0;
            while i < rest.len() {
                match rest[i] {
                    Tok::LParen | Tok::LBracket => depth += 1,
                    Tok::RParen | Tok::RBracket => depth = depth.checked_sub(1)?,
                    Tok::Comma if depth == 0 => break,
                    _ => {}
                }
                i += 1;
            }
            let rest = rest.get(i + 1..)?;
            let (first, rest) = rest.split_first()?;
            if **first != Tok::LBracket {
                return None;
            }
            let mut parents = Vec::new();
            let mut rest = rest;
            if rest.first() == Some(&&Tok::RBracket) {
                rest = &rest[1..];
            } else {
                loop {
                    match rest.first()? {
                        Tok::LowerWord(s) | Tok::UnderscoreWord(s) | Tok::SingleQuoted(s) | Tok::Number(s) => {
                            parents.push(s.clone())
                        }
                        _ => return None,
                    }
                    match rest.get(1)? {
                        Tok::Comma => rest = &rest[2..],
                        Tok::RBracket => {
                            rest = &rest[2..];
                            break;
                        }
                        _ => return None,
                    }
                }
            }
            if rest.first() != Some(&&Tok::RParen) {
                return None;
            }
            Some(Inference { rule, parents })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::EQUALITY;

    #[test]
    fn parses_a2() {
        let c = parse_clause_text("cnf(a2,hypothesis,\n    ( ~ q(a) | f(X) = X )).").unwrap();
        assert_eq!(c.label, "a2");
        assert_eq!(c.role, Role::Hypothesis);
        assert_eq!(c.literals.len(), 2);
        assert!(c.literals[0].negated);
        assert_eq!(c.literals[0].atom, Atom::new("q", vec![Term::constant("a")]));
        let eq = &c.literals[1];
        assert!(!eq.negated);
        assert_eq!(eq.atom.name, EQUALITY);
        assert_eq!(
            eq.atom.arguments,
            vec![Term::app("f", vec![Term::var("X")]), Term::var("X")]
        );
        assert!(c.inference.is_none());
        assert_eq!(c.birth_step, -1);
    }

    #[test]
    fn parses_negated_unit() {
        let c = parse_clause_text("cnf(q, hypothesis, ~mortal(socrates)).").unwrap();
        assert_eq!(c.label, "q");
        assert_eq!(c.literals.len(), 1);
        assert!(c.literals[0].negated);
    }

    #[test]
    fn false_is_the_empty_clause() {
        let c = parse_clause_text("cnf(e, axiom, $false).").unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn malformed_input_reports_position() {
        match parse_clause_text("cnf(x, axiom, p(X | )") {
            Err(ParseError::Syntax { line, column, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(column, 19);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn not_equals_is_negated_equality() {
        let c = parse_clause_text("cnf(n, axiom, f(X) != a | ~ b = c).").unwrap();
        assert!(c.literals.iter().all(|l| l.negated && l.is_equality()));
        let d = parse_clause_text("cnf(n, axiom, ~ a != b).").unwrap();
        assert!(!d.literals[0].negated);
    }

    #[test]
    fn rejects_fof() {
        let err = parse_clauses_text("fof(a, axiom, p).").unwrap_err();
        assert!(matches!(err, ParseError::UnsupportedFormula { ref kind, .. } if kind == "fof"));
    }

    #[test]
    fn rejects_non_cnf_connectives() {
        assert!(parse_clause_text("cnf(a, axiom, p & q).").is_err());
        assert!(parse_clause_text("cnf(a, axiom, X).").is_err());
        assert!(parse_clause_text("cnf(a, wibble, p).").is_err());
    }

    #[test]
    fn reads_inference_annotation() {
        let c = parse_clause_text("cnf(_0, hypothesis, mortal(socrates), inference(resolution, [], [p_imp_q, p])).")
            .unwrap();
        let inf = c.inference.unwrap();
        assert_eq!(inf.rule, InferenceRule::Resolution);
        assert_eq!(inf.parents, vec!["p_imp_q", "p"]);
    }

    #[test]
    fn ignores_foreign_annotations() {
        let c = parse_clause_text("cnf(c, axiom, p(a), file('x.p', c), [status(thm)]).").unwrap();
        assert!(c.inference.is_none());
        let d = parse_clause_text("cnf(c, plain, p(a), inference(superposition, [status(thm)], [x, y])).").unwrap();
        assert!(d.inference.is_none());
    }

    #[test]
    fn quoted_and_numeric_names() {
        let c = parse_clause_text("cnf('my clause', axiom, 'P'(\"obj\", 12)).").unwrap();
        assert_eq!(c.label, "my clause");
        assert_eq!(c.literals[0].atom.name, "P");
        assert_eq!(
            c.literals[0].atom.arguments,
            vec![Term::constant("\"obj\""), Term::constant("12")]
        );
        assert_eq!(render_tptp(&c), "cnf('my clause', axiom, 'P'(\"obj\",12)).");
    }

    #[test]
    fn empty_text_has_no_clauses() {
        assert!(parse_clauses_text("% nothing here\n").unwrap().is_empty());
    }
}
