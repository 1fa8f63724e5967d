use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::json::split_pointer;
use crate::model::Datasheet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathToken {
    Key(String),
    /// Every element of a list.
    Wildcard,
}

/// A JSON Pointer in which a bare `*` token expands over list positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathExpr {
    raw: String,
    tokens: Vec<PathToken>,
}

impl PathExpr {
    /// `None` unless `raw` is empty or a well-formed pointer.
    pub fn parse(raw: &str) -> Option<Self> {
        let tokens = split_pointer(raw)?
            .into_iter()
            .map(|t| if t == "*" { PathToken::Wildcard } else { PathToken::Key(t) })
            .collect();
        Some(Self {
            raw: raw.to_string(),
            tokens,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn tokens(&self) -> &[PathToken] {
        &self.tokens
    }

    pub fn has_wildcard(&self) -> bool {
        self.tokens.contains(&PathToken::Wildcard)
    }
}

impl std::fmt::Display for PathExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.raw)
    }
}

impl Serialize for PathExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

/// Array index token: decimal digits without leading zeros.
fn index_of(token: &str) -> Option<usize> {
    let canonical = token == "0" || (!token.starts_with('0') && token.bytes().all(|b| b.is_ascii_digit()));
    if canonical && !token.is_empty() {
        token.parse().ok()
    } else {
        None
    }
}

fn walk<'a>(value: &'a Value, tokens: &[PathToken], out: &mut Vec<&'a Value>) {
    let Some((head, rest)) = tokens.split_first() else {
        out.push(value);
        return;
    };
    match (head, value) {
        (PathToken::Wildcard, Value::Array(items)) => {
            for item in items {
                walk(item, rest, out);
            }
        }
        (PathToken::Key(key), Value::Object(map)) => {
            if let Some(child) = map.get(key) {
                walk(child, rest, out);
            }
        }
        (PathToken::Key(key), Value::Array(items)) => {
            if let Some(child) = index_of(key).and_then(|i| items.get(i)) {
                walk(child, rest, out);
            }
        }
        _ => {}
    }
}

/// Values addressed by `path` in document order. Missing segments yield nothing.
pub fn resolve_value<'a>(doc: &'a Value, path: &PathExpr) -> Vec<&'a Value> {
    let mut out = Vec::new();
    walk(doc, &path.tokens, &mut out);
    out
}

/// Resolves against the datasheet's canonical JSON form.
pub fn resolve_path(d: &Datasheet, path: &PathExpr) -> Vec<Value> {
    let doc = serde_json::to_value(d).expect("datasheets serialize to JSON");
    resolve_value(&doc, path).into_iter().cloned().collect()
}
