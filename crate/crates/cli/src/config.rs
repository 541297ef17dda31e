//! Flat key-value run configuration: a TOML table from `--config`, overridden
//! key by key from the command line, checked against a per-subcommand schema.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Float,
    Int,
    FloatList,
    IntList,
    Bool,
    Choice(&'static [&'static str]),
    Path,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Float => write!(f, "a number"),
            Kind::Int => write!(f, "a non-negative integer"),
            Kind::FloatList => write!(f, "a list of numbers"),
            Kind::IntList => write!(f, "a list of non-negative integers"),
            Kind::Bool => write!(f, "true or false"),
            Kind::Choice(c) => write!(f, "one of {}", c.join(", ")),
            Kind::Path => write!(f, "a path"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    FloatList(Vec<f64>),
    IntList(Vec<u64>),
    Bool(bool),
    Text(String),
}

/// One schema entry. `default: None` marks the key as required.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    /// Optional keys without a default; absent unless given.
    pub optional: bool,
}

pub const fn required(name: &'static str, kind: Kind) -> Key {
    Key {
        name,
        kind,
        default: None,
        optional: false,
    }
}

pub const fn with_default(name: &'static str, kind: Kind, default: &'static str) -> Key {
    Key {
        name,
        kind,
        default: Some(default),
        optional: false,
    }
}

pub const fn optional(name: &'static str, kind: Kind) -> Key {
    Key {
        name,
        kind,
        default: None,
        optional: true,
    }
}

/// Validated parameters of one run.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<&'static str, Value>,
}

impl Params {
    pub fn float(&self, key: &str) -> f64 {
        match self.values.get(key) {
            Some(Value::Float(v)) => *v,
            other => panic!("schema bug: {key} is {other:?}"),
        }
    }

    pub fn int(&self, key: &str) -> u64 {
        match self.values.get(key) {
            Some(Value::Int(v)) => *v,
            other => panic!("schema bug: {key} is {other:?}"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        self.int(key) as usize
    }

    pub fn floats(&self, key: &str) -> Option<Vec<f64>> {
        match self.values.get(key) {
            Some(Value::FloatList(v)) => Some(v.clone()),
            None => None,
            other => panic!("schema bug: {key} is {other:?}"),
        }
    }

    pub fn ints(&self, key: &str) -> Option<Vec<usize>> {
        match self.values.get(key) {
            Some(Value::IntList(v)) => Some(v.iter().map(|&x| x as usize).collect()),
            None => None,
            other => panic!("schema bug: {key} is {other:?}"),
        }
    }

    pub fn opt_float(&self, key: &str) -> Option<f64> {
        self.values.contains_key(key).then(|| self.float(key))
    }

    pub fn opt_int(&self, key: &str) -> Option<u64> {
        self.values.contains_key(key).then(|| self.int(key))
    }

    pub fn flag(&self, key: &str) -> bool {
        match self.values.get(key) {
            Some(Value::Bool(v)) => *v,
            other => panic!("schema bug: {key} is {other:?}"),
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.values.get(key) {
            Some(Value::Text(v)) => Some(v),
            None => None,
            other => panic!("schema bug: {key} is {other:?}"),
        }
    }

    /// All values, for echoing into reports.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.values {
            let j = match v {
                Value::Float(x) => serde_json::json!(x),
                Value::Int(x) => serde_json::json!(x),
                Value::FloatList(x) => serde_json::json!(x),
                Value::IntList(x) => serde_json::json!(x),
                Value::Bool(x) => serde_json::json!(x),
                Value::Text(x) => serde_json::json!(x),
            };
            map.insert((*k).to_string(), j);
        }
        serde_json::Value::Object(map)
    }
}

/// A raw value before typing: either from TOML or a command-line string.
#[derive(Debug, Clone)]
pub enum Raw {
    Toml(toml::Value),
    Flag(String),
}

fn parse_float(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|p| item(p.trim())).collect()
}

fn toml_float(v: &toml::Value) -> Option<f64> {
    match v {
        toml::Value::Float(x) if x.is_finite() => Some(*x),
        toml::Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn toml_int(v: &toml::Value) -> Option<u64> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Some(*i as u64),
        _ => None,
    }
}

fn convert(kind: Kind, raw: &Raw) -> Option<Value> {
    match (kind, raw) {
        (Kind::Float, Raw::Flag(s)) => parse_float(s).map(Value::Float),
        (Kind::Float, Raw::Toml(v)) => toml_float(v).map(Value::Float),
        (Kind::Int, Raw::Flag(s)) => s.trim().parse().ok().map(Value::Int),
        (Kind::Int, Raw::Toml(v)) => toml_int(v).map(Value::Int),
        (Kind::FloatList, Raw::Flag(s)) => parse_list(s, parse_float).map(Value::FloatList),
        (Kind::FloatList, Raw::Toml(toml::Value::Array(a))) => a
            .iter()
            .map(toml_float)
            .collect::<Option<_>>()
            .map(Value::FloatList),
        (Kind::IntList, Raw::Flag(s)) => parse_list(s, |p| p.parse().ok()).map(Value::IntList),
        (Kind::IntList, Raw::Toml(toml::Value::Array(a))) => a
            .iter()
            .map(toml_int)
            .collect::<Option<_>>()
            .map(Value::IntList),
        (Kind::Bool, Raw::Flag(s)) => s.trim().parse().ok().map(Value::Bool),
        (Kind::Bool, Raw::Toml(toml::Value::Boolean(b))) => Some(Value::Bool(*b)),
        (Kind::Choice(choices), raw) => {
            let s = match raw {
                Raw::Flag(s) => s.trim().to_string(),
                Raw::Toml(toml::Value::String(s)) => s.clone(),
                _ => return None,
            };
            choices.contains(&s.as_str()).then_some(Value::Text(s))
        }
        (Kind::Path, Raw::Flag(s)) => Some(Value::Text(s.clone())),
        (Kind::Path, Raw::Toml(toml::Value::String(s))) => Some(Value::Text(s.clone())),
        _ => None,
    }
}

/// Every problem found while building [`Params`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join("; "))
    }
}

/// Reads a flat TOML table.
pub fn read_file(path: &Path) -> Result<BTreeMap<String, Raw>, ConfigErrors> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigErrors(vec![format!("cannot read config {}: {e}", path.display())]))?;
    let table: toml::Table = text.parse().map_err(|e| {
        ConfigErrors(vec![format!(
            "config {} is not valid TOML: {e}",
            path.display()
        )])
    })?;
    let mut out = BTreeMap::new();
    let mut errors = Vec::new();
    for (k, v) in table {
        if matches!(v, toml::Value::Table(_)) {
            errors.push(format!("key '{k}': nested tables are not supported"));
        } else {
            out.insert(k, Raw::Toml(v));
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(ConfigErrors(errors))
    }
}

/// Types `file` values overridden by `flags` against `schema`.
pub fn resolve(
    subcommand: &str,
    schema: &[Key],
    file: BTreeMap<String, Raw>,
    flags: BTreeMap<String, Raw>,
) -> Result<Params, ConfigErrors> {
    let mut merged = file;
    merged.extend(flags);
    let mut errors = Vec::new();
    for k in merged.keys() {
        if !schema.iter().any(|s| s.name == k) {
            errors.push(format!("unknown key '{k}' for {subcommand}"));
        }
    }
    let mut params = Params::default();
    for key in schema {
        let raw = match (merged.get(key.name), key.default) {
            (Some(r), _) => r.clone(),
            (None, Some(d)) => Raw::Flag(d.to_string()),
            (None, None) if key.optional => continue,
            (None, None) => {
                errors.push(format!("missing required key '{}'", key.name));
                continue;
            }
        };
        match convert(key.kind, &raw) {
            Some(v) => {
                params.values.insert(key.name, v);
            }
            None => errors.push(format!("key '{}' must be {}", key.name, key.kind)),
        }
    }
    if errors.is_empty() {
        Ok(params)
    } else {
        Err(ConfigErrors(errors))
    }
}
