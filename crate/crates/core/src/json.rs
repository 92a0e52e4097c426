//! JSON documents for clause trees.
//!
//! Every node carries a `kind` tag (`clause`, `literal`, `predicate`,
//! `function`, `variable`). Keys are emitted in a fixed order and unknown keys
//! are rejected on decode. The schema lives in `schema/clause.schema.json`.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::logic::{Atom, Clause, Inference, InferenceRule, Literal, Role, Term, INPUT_BIRTH_STEP};

/// Version number written into every clause document.
pub const FORMAT_VERSION: u64 = 1;

/// The shipped JSON schema.
pub const SCHEMA: &str = include_str!("../schema/clause.schema.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct DecodeError {
    pub path: String,
    pub message: String,
}

/// Builds an object by moving the values in; `json!` would deep-copy nested
/// `Value`s, which is quadratic in term depth.
pub(crate) fn object<const N: usize>(entries: [(&str, Value); N]) -> Value {
    Value::Object(
        entries
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}

fn terms_to_value(terms: &[Term]) -> Value {
    Value::Array(terms.iter().map(term_to_value).collect())
}

pub fn term_to_value(term: &Term) -> Value {
    match term {
        Term::Variable(name) => object([("kind", "variable".into()), ("name", name.as_str().into())]),
        Term::Function { name, arguments } => object([
            ("kind", "function".into()),
            ("name", name.as_str().into()),
            ("arguments", terms_to_value(arguments)),
        ]),
    }
}

fn atom_to_value(atom: &Atom) -> Value {
    object([
        ("kind", "predicate".into()),
        ("name", atom.name.as_str().into()),
        ("arguments", terms_to_value(&atom.arguments)),
    ])
}

fn literal_to_value(literal: &Literal) -> Value {
    object([
        ("kind", "literal".into()),
        ("negated", literal.negated.into()),
        ("atom", atom_to_value(&literal.atom)),
    ])
}

pub fn clause_to_value(clause: &Clause) -> Value {
    object([
        ("kind", "clause".into()),
        ("format", FORMAT_VERSION.into()),
        ("label", clause.label.as_str().into()),
        ("role", clause.role.as_str().into()),
        (
            "literals",
            Value::Array(clause.literals.iter().map(literal_to_value).collect()),
        ),
        (
            "inference_rule",
            clause.inference.as_ref().map(|i| i.rule.as_str()).into(),
        ),
        (
            "inference_parents",
            clause.parents().iter().map(|p| Value::from(p.as_str())).collect(),
        ),
        ("birth_step", clause.birth_step.into()),
        ("processed", clause.processed.into()),
    ])
}

/// Compact, deterministic serialization of one clause.
pub fn to_json(clause: &Clause) -> String {
    clause_to_value(clause).to_string()
}

pub fn from_json(text: &str) -> Result<Clause, DecodeError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DecodeError {
        path: "$".into(),
        message: format!("invalid JSON: {e}"),
    })?;
    clause_from_value(&value)
}

pub fn clause_from_value(value: &Value) -> Result<Clause, DecodeError> {
    Decoder::root().clause(value)
}

struct Decoder {
    path: String,
}

impl Decoder {
    fn root() -> Self {
        Decoder { path: "$".into() }
    }

    fn field(&self, key: &str) -> Decoder {
        Decoder {
            path: format!("{}.{key}", self.path),
        }
    }

    fn index(&self, i: usize) -> Decoder {
        Decoder {
            path: format!("{}[{i}]", self.path),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, DecodeError> {
        Err(DecodeError {
            path: self.path.clone(),
            message: message.into(),
        })
    }

    fn object<'v>(&self, value: &'v Value, kind: &str, keys: &[&str]) -> Result<&'v Map<String, Value>, DecodeError> {
        let Some(obj) = value.as_object() else {
            return self.fail("expected an object");
        };
        match obj.get("kind") {
            None => return self.fail("missing `kind`"),
            Some(Value::String(k)) if k == kind => {}
            Some(other) => return self.field("kind").fail(format!("expected \"{kind}\", found {other}")),
        }
        for k in obj.keys() {
            if k != "kind" && !keys.contains(&k.as_str()) {
                return self.field(k).fail("unknown field");
            }
        }
        for k in keys {
            if !obj.contains_key(*k) {
                return self.fail(format!("missing `{k}`"));
            }
        }
        Ok(obj)
    }

    fn string<'v>(&self, value: &'v Value) -> Result<&'v str, DecodeError> {
        value.as_str().map_or_else(|| self.fail("expected a string"), Ok)
    }

    fn array<'v>(&self, value: &'v Value) -> Result<&'v [Value], DecodeError> {
        value
            .as_array()
            .map_or_else(|| self.fail("expected an array"), |a| Ok(a.as_slice()))
    }

    fn boolean(&self, value: &Value) -> Result<bool, DecodeError> {
        value.as_bool().map_or_else(|| self.fail("expected a boolean"), Ok)
    }

    fn name(&self, value: &Value) -> Result<String, DecodeError> {
        let s = self.string(value)?;
        if s.is_empty() {
            return self.fail("name must be nonempty");
        }
        Ok(s.to_string())
    }

    fn term(&self, value: &Value) -> Result<Term, DecodeError> {
        let kind = value.get("kind").and_then(Value::as_str);
        match kind {
            Some("variable") => {
                let obj = self.object(value, "variable", &["name"])?;
                let d = self.field("name");
                let name = d.name(&obj["name"])?;
                if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    return d.fail("variable names start with an uppercase letter");
                }
                Ok(Term::Variable(name))
            }
            Some("function") => {
                let obj = self.object(value, "function", &["name", "arguments"])?;
                let name = self.field("name").name(&obj["name"])?;
                let arguments = self.terms(&obj["arguments"], "arguments")?;
                Ok(Term::Function { name, arguments })
            }
            _ if !value.is_object() => self.fail("expected an object"),
            None => self.fail("missing `kind`"),
            Some(other) => self
                .field("kind")
                .fail(format!("expected \"function\" or \"variable\", found \"{other}\"")),
        }
    }

    fn terms(&self, value: &Value, key: &str) -> Result<Vec<Term>, DecodeError> {
        let d = self.field(key);
        d.array(value)?
            .iter()
            .enumerate()
            .map(|(i, v)| d.index(i).term(v))
            .collect()
    }

    fn atom(&self, value: &Value) -> Result<Atom, DecodeError> {
        let obj = self.object(value, "predicate", &["name", "arguments"])?;
        let name = self.field("name").name(&obj["name"])?;
        let arguments = self.terms(&obj["arguments"], "arguments")?;
        Ok(Atom { name, arguments })
    }

    fn literal(&self, value: &Value) -> Result<Literal, DecodeError> {
        let obj = self.object(value, "literal", &["negated", "atom"])?;
        let negated = self.field("negated").boolean(&obj["negated"])?;
        let atom = self.field("atom").atom(&obj["atom"])?;
        Ok(Literal { negated, atom })
    }

    fn clause(&self, value: &Value) -> Result<Clause, DecodeError> {
        let obj = self.object(
            value,
            "clause",
            &[
                "format",
                "label",
                "role",
                "literals",
                "inference_rule",
                "inference_parents",
                "birth_step",
                "processed",
            ],
        )?;
        if obj["format"].as_u64() != Some(FORMAT_VERSION) {
            return self.field("format").fail(format!("expected {FORMAT_VERSION}"));
        }
        let label = self.field("label").name(&obj["label"])?;
        let d = self.field("role");
        let role: Role = d.string(&obj["role"])?.parse().or_else(|e: String| d.fail(e))?;
        let d = self.field("literals");
        let literals = d
            .array(&obj["literals"])?
            .iter()
            .enumerate()
            .map(|(i, v)| d.index(i).literal(v))
            .collect::<Result<Vec<_>, _>>()?;
        let d = self.field("inference_rule");
        let rule = match &obj["inference_rule"] {
            Value::Null => None,
            v => Some(d.string(v)?.parse::<InferenceRule>().or_else(|e| d.fail(e))?),
        };
        let d = self.field("inference_parents");
        let parents = d
            .array(&obj["inference_parents"])?
            .iter()
            .enumerate()
            .map(|(i, v)| d.index(i).name(v))
            .collect::<Result<Vec<_>, _>>()?;
        let inference = match rule {
            Some(rule) if !parents.is_empty() => Some(Inference { rule, parents }),
            Some(_) => return d.fail("an inference needs at least one parent"),
            None if parents.is_empty() => None,
            None => return d.fail("parents given without an inference rule"),
        };
        let d = self.field("birth_step");
        let birth_step = match obj["birth_step"].as_i64() {
            Some(b) if b >= INPUT_BIRTH_STEP => b,
            _ => return d.fail("expected an integer >= -1"),
        };
        let processed = self.field("processed").boolean(&obj["processed"])?;
        Ok(Clause {
            literals,
            label,
            role,
            inference,
            birth_step,
            processed,
        })
    }
}
