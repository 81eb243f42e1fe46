//! Command parameters: an optional JSON document overlaid with `--key value`
//! pairs from the command line.

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::error::{param, Result};

/// Short spellings accepted on the command line.
const ALIASES: [(&str, &str); 3] = [("vnorm", "v_norm"), ("v12", "v12_norm"), ("delta", "delta_a")];

fn canonical_key(raw: &str) -> String {
    let key = raw.replace('-', "_");
    ALIASES.iter().find(|(a, _)| *a == key).map_or(key, |(_, k)| k.to_string())
}

/// A JSON literal when the text parses as one, a list for comma-separated
/// numbers, and a string otherwise.
pub fn parse_value(text: &str) -> Value {
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        return v;
    }
    if text.contains(',') {
        let nums: Option<Vec<Value>> = text
            .split(',')
            .map(|s| serde_json::from_str::<serde_json::Number>(s.trim()).ok().map(Value::Number))
            .collect();
        if let Some(nums) = nums {
            return Value::Array(nums);
        }
    }
    Value::String(text.to_string())
}

fn insert_path(map: &mut Map<String, Value>, path: &str, value: Value) -> Result<()> {
    let mut parts = path.split('.').map(canonical_key).peekable();
    let mut cur = map;
    while let Some(part) = parts.next() {
        if part.is_empty() {
            return Err(param(format!("malformed key --{path}")));
        }
        if parts.peek().is_none() {
            cur.insert(part, value);
            return Ok(());
        }
        let slot = cur.entry(part.clone()).or_insert_with(|| Value::Object(Map::new()));
        cur = slot
            .as_object_mut()
            .ok_or_else(|| param(format!("--{path}: {part} is not an object")))?;
    }
    Ok(())
}

/// Turns `--key value` words into an object. A key followed by another key,
/// or by nothing, is the flag `true`. Dotted keys build nested objects.
pub fn parse_pairs(words: &[String]) -> Result<Map<String, Value>> {
    let mut map = Map::new();
    let mut i = 0;
    while i < words.len() {
        let Some(key) = words[i].strip_prefix("--") else {
            return Err(param(format!("expected --key, found {:?}", words[i])));
        };
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k, parse_value(v)),
            None => match words.get(i + 1).filter(|w| !w.starts_with("--")) {
                Some(v) => {
                    i += 1;
                    (key, parse_value(v))
                }
                None => (key, Value::Bool(true)),
            },
        };
        insert_path(&mut map, key, value)?;
        i += 1;
    }
    Ok(map)
}

fn merge(base: &mut Map<String, Value>, over: Map<String, Value>) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Object(b)), Value::Object(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Flags take precedence over the document.
pub fn combine(document: Option<Value>, flags: Map<String, Value>) -> Result<Map<String, Value>> {
    let mut base = match document {
        None => Map::new(),
        Some(Value::Object(m)) => m,
        Some(other) => return Err(param(format!("the JSON document must be an object, got {other}"))),
    };
    merge(&mut base, flags);
    Ok(base)
}

/// Deserializes `map`, rejecting keys outside `allowed`.
pub fn strict<T: DeserializeOwned>(map: &Map<String, Value>, allowed: &[&str]) -> Result<T> {
    if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(param(format!("unknown parameter {k:?}; expected one of {}", allowed.join(", "))));
    }
    serde_json::from_value(Value::Object(map.clone())).map_err(|e| param(e.to_string()))
}

/// Deserializes `map` into a type that rejects unknown fields itself.
pub fn typed<T: DeserializeOwned>(map: &Map<String, Value>) -> Result<T> {
    serde_json::from_value(Value::Object(map.clone())).map_err(|e| param(e.to_string()))
}
