//! JSON input files.
//!
//! Context: `{"alternatives": [names], "utilities": [[row per individual]]}`.
//! Lottery: `{name: probability}`; unnamed alternatives get probability 0.
//! Allocation: `{"objects": [names], "utilities": [[row per individual]]}`;
//! rankings are always derived from the utilities.
//!
//! Entries are JSON numbers or `"p/q"` strings. Numbers are read from their
//! literal text, so exact mode loses nothing.

use std::path::Path;

use serde_json::{Map, Value};

use crate::allocation::AllocationProblem;
use crate::context::{Context, Lottery};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn names(v: &Value, key: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("`{key}` must be an array of strings")))?
        .iter()
        .map(|n| {
            n.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("`{key}` must be an array of strings")))
        })
        .collect()
}

/// A scalar from a JSON number or a numeric string.
pub fn scalar<S: Scalar>(v: &Value, coerce: bool) -> Result<S> {
    match v {
        Value::Number(n) => S::parse_literal(&n.to_string(), coerce),
        Value::String(s) => S::parse_literal(s, coerce),
        other => Err(Error::Parse(format!("expected a number, found `{other}`"))),
    }
}

fn matrix<S: Scalar>(v: &Value, coerce: bool) -> Result<Vec<Vec<S>>> {
    let bad = || Error::Parse("`utilities` must be an array of arrays".into());
    v.as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| scalar(x, coerce))
                .collect()
        })
        .collect()
}

pub fn parse_context<S: Scalar>(text: &str, coerce: bool) -> Result<Context<S>> {
    let json = parse_json(text)?;
    let obj = object(&json, "a context file")?;
    let alternatives = names(field(obj, "alternatives")?, "alternatives")?;
    let utilities = matrix(field(obj, "utilities")?, coerce)?;
    Context::new(alternatives, utilities)
}

pub fn parse_lottery<S: Scalar>(text: &str, c: &Context<S>, coerce: bool) -> Result<Lottery<S>> {
    let json = parse_json(text)?;
    let obj = object(&json, "a lottery file")?;
    let mut weights = vec![S::zero(); c.n_alternatives()];
    for (name, p) in obj {
        let a = c
            .index_of(name)
            .ok_or_else(|| Error::UnknownAlternative(name.clone()))?;
        weights[a] = scalar(p, coerce)?;
    }
    Lottery::new(weights)
}

pub fn parse_allocation<S: Scalar>(text: &str, coerce: bool) -> Result<AllocationProblem<S>> {
    let json = parse_json(text)?;
    let obj = object(&json, "an allocation file")?;
    let objects = names(field(obj, "objects")?, "objects")?;
    let utilities = matrix(field(obj, "utilities")?, coerce)?;
    AllocationProblem::new(objects, utilities)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}
