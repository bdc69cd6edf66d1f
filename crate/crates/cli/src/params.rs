//! `key=value` parameters on the command line.
//!
//! A value is read as JSON when it parses (`n=7`, `parts=[4,4]`,
//! `mode="two_sided"`), `@path` reads a JSON file, `a,b;c,d` is a list of
//! lists, `a,b` a list, and anything else a string.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{Map, Value};

fn scalar(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.to_string()))
}

fn list(text: &str) -> Value {
    Value::Array(text.split(',').filter(|s| !s.is_empty()).map(scalar).collect())
}

pub fn parse_value(text: &str) -> Result<Value> {
    if let Some(path) = text.strip_prefix('@') {
        let body = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return serde_json::from_str(&body).with_context(|| format!("parsing {path}"));
    }
    if let Ok(v) = serde_json::from_str(text) {
        return Ok(v);
    }
    if text.contains(';') {
        return Ok(Value::Array(text.split(';').map(list).collect()));
    }
    if text.contains(',') {
        return Ok(list(text));
    }
    Ok(Value::String(text.to_string()))
}

pub fn parse_pairs(pairs: &[String]) -> Result<Map<String, Value>> {
    let mut out = Map::new();
    for p in pairs {
        let (k, v) = p.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {p:?}"))?;
        if k.is_empty() {
            bail!("empty parameter name in {p:?}");
        }
        out.insert(k.to_string(), parse_value(v)?);
    }
    Ok(out)
}

pub fn usize_param(p: &Map<String, Value>, key: &str) -> Result<usize> {
    let v = p.get(key).ok_or_else(|| anyhow!("missing parameter {key}"))?;
    v.as_u64().map(|x| x as usize).ok_or_else(|| anyhow!("parameter {key} must be a non-negative integer, got {v}"))
}

/// Rejects parameters a command does not know about.
pub fn only(p: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    for k in p.keys() {
        if !allowed.contains(&k.as_str()) {
            bail!("unknown parameter {k} (expected one of: {})", allowed.join(", "));
        }
    }
    Ok(())
}
