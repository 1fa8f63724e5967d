//! Declarative screening rules and accept/review/reject verdicts.
//!
//! A rule addresses values with a pointer expression, applies one check from a
//! closed set and names the action taken when the check fails.

mod eval;
mod path;

use std::collections::HashSet;
use std::fmt;

use regex::Regex;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::PolicyError;
use crate::json::{join, parse_strict, str_enum, wrong_kind, FromJson, Record};
use crate::model::{is_slug, to_canonical_json};

pub use eval::{evaluate_policy, evaluate_value, Decision, RuleAction, RuleResult, Verdict};
pub use path::{resolve_path, resolve_value, PathExpr, PathToken};

str_enum! {
    pub enum Quantifier {
        Any => "any",
        All => "all",
    }
}

impl Default for Quantifier {
    fn default() -> Self {
        Quantifier::Any
    }
}

str_enum! {
    pub enum OnFail {
        Reject => "reject",
        Review => "review",
    }
}

/// A compiled regular expression that compares and prints as its source.
#[derive(Debug, Clone)]
pub struct Pattern {
    source: String,
    regex: Regex,
}

impl Pattern {
    pub fn new(source: &str) -> Result<Self, regex::Error> {
        Ok(Self {
            source: source.to_string(),
            regex: Regex::new(source)?,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    /// Unanchored search.
    pub fn is_match(&self, text: &str) -> bool {
        self.regex.is_match(text)
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    Exists,
    NotExists,
    Equals(Value),
    OneOf(Vec<Value>),
    NotOneOf(Vec<Value>),
    Matches(Pattern),
    MinCount(u64),
}

impl Check {
    pub const NAMES: [&'static str; 7] =
        ["exists", "not-exists", "equals", "one-of", "not-one-of", "matches", "min-count"];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Exists => "exists",
            Check::NotExists => "not-exists",
            Check::Equals(_) => "equals",
            Check::OneOf(_) => "one-of",
            Check::NotOneOf(_) => "not-one-of",
            Check::Matches(_) => "matches",
            Check::MinCount(_) => "min-count",
        }
    }

    /// Checks applied to each resolved value and combined by the quantifier.
    pub fn is_per_value(&self) -> bool {
        matches!(self, Check::Equals(_) | Check::OneOf(_) | Check::NotOneOf(_) | Check::Matches(_))
    }

    fn from_json(value: Value, pointer: &str) -> Result<Self, PolicyError> {
        let unknown = |name: &str| PolicyError::UnknownCheck {
            pointer: pointer.to_string(),
            name: name.to_string(),
        };
        match value {
            Value::String(name) => match name.as_str() {
                "exists" => Ok(Check::Exists),
                "not-exists" => Ok(Check::NotExists),
                _ => Err(unknown(&name)),
            },
            Value::Object(map) if map.len() == 1 => {
                let (name, arg) = map.into_iter().next().unwrap();
                let arg_ptr = join(pointer, &name);
                match name.as_str() {
                    "equals" => Ok(Check::Equals(arg)),
                    "one-of" => Ok(Check::OneOf(Vec::from_json(arg, &arg_ptr)?)),
                    "not-one-of" => Ok(Check::NotOneOf(Vec::from_json(arg, &arg_ptr)?)),
                    "min-count" => Ok(Check::MinCount(u64::from_json(arg, &arg_ptr)?)),
                    "matches" => {
                        let source = String::from_json(arg, &arg_ptr)?;
                        Pattern::new(&source).map(Check::Matches).map_err(|e| PolicyError::BadRegex {
                            pointer: arg_ptr,
                            message: e.to_string(),
                        })
                    }
                    _ => Err(unknown(&name)),
                }
            }
            other => Err(wrong_kind(pointer, "check name or single-key check object", &other).into()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Exists | Check::NotExists => f.write_str(self.name()),
            Check::Equals(v) => write!(f, "equals {v}"),
            Check::OneOf(vs) => write!(f, "one-of {}", Value::Array(vs.clone())),
            Check::NotOneOf(vs) => write!(f, "not-one-of {}", Value::Array(vs.clone())),
            Check::Matches(p) => write!(f, "matches /{}/", p.as_str()),
            Check::MinCount(n) => write!(f, "min-count {n}"),
        }
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let arg = match self {
            Check::Exists | Check::NotExists => return serializer.serialize_str(self.name()),
            Check::Equals(v) => v.clone(),
            Check::OneOf(vs) | Check::NotOneOf(vs) => Value::Array(vs.clone()),
            Check::Matches(p) => Value::String(p.as_str().to_string()),
            Check::MinCount(n) => Value::from(*n),
        };
        let mut map = serializer.serialize_map(Some(1))?;
        map.serialize_entry(self.name(), &arg)?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Rule {
    pub id: String,
    pub description: String,
    pub path: PathExpr,
    pub check: Check,
    pub quantifier: Quantifier,
    pub on_fail: OnFail,
    pub message: String,
}

impl Rule {
    fn from_json(value: Value, pointer: &str) -> Result<Self, PolicyError> {
        let mut r = Record::new(value, pointer)?;
        let id: String = r.required("id")?;
        if !is_slug(&id) {
            return Err(PolicyError::BadRuleId {
                pointer: join(pointer, "id"),
                id,
            });
        }
        let description = r.or_default("description")?;
        let raw_path: String = r.required("path")?;
        let path = PathExpr::parse(&raw_path).ok_or_else(|| PolicyError::BadPath {
            pointer: join(pointer, "path"),
            path: raw_path.clone(),
        })?;
        let check_value: Value = r.required("check")?;
        let check = Check::from_json(check_value, &join(pointer, "check"))?;
        let rule = Rule {
            id,
            description,
            path,
            check,
            quantifier: r.or_default("quantifier")?,
            on_fail: r.required("onFail")?,
            message: r.or_default("message")?,
        };
        r.deny_unknown()?;
        Ok(rule)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    pub name: String,
    pub version: String,
    pub rules: Vec<Rule>,
}

impl Policy {
    pub fn from_value(value: Value) -> Result<Self, PolicyError> {
        let mut r = Record::new(value, "")?;
        let name = r.required("name")?;
        let version = r.or_default("version")?;
        let rule_values: Vec<Value> = r.or_default("rules")?;
        r.deny_unknown()?;

        let mut rules = Vec::with_capacity(rule_values.len());
        let mut ids = HashSet::new();
        for (i, v) in rule_values.into_iter().enumerate() {
            let rule = Rule::from_json(v, &join("/rules", i))?;
            if !ids.insert(rule.id.clone()) {
                return Err(PolicyError::DuplicateRuleId(rule.id));
            }
            rules.push(rule);
        }
        Ok(Policy { name, version, rules })
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

pub fn parse_policy(text: &str) -> Result<Policy, PolicyError> {
    Policy::from_value(parse_strict(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::JsonError;

    #[test]
    fn empty_policy() {
        let p = parse_policy(r#"{"name":"p","version":"1","rules":[]}"#).unwrap();
        assert_eq!(p.name, "p");
        assert!(p.rules.is_empty());
    }

    #[test]
    fn unknown_check() {
        let err = parse_policy(
            r#"{"name":"p","rules":[{"id":"r","path":"/name","check":"frobnicate","onFail":"review"}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, PolicyError::UnknownCheck { ref name, ref pointer } if name == "frobnicate" && pointer == "/rules/0/check"));
        let err = parse_policy(
            r#"{"name":"p","rules":[{"id":"r","path":"/name","check":{"frobnicate":1},"onFail":"review"}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, PolicyError::UnknownCheck { .. }));
    }

    #[test]
    fn bad_regex_and_duplicates() {
        let err = parse_policy(
            r#"{"name":"p","rules":[{"id":"r","path":"/name","check":{"matches":"("},"onFail":"review"}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, PolicyError::BadRegex { ref pointer, .. } if pointer == "/rules/0/check/matches"));
        let rule = r#"{"id":"r","path":"/name","check":"exists","onFail":"review"}"#;
        let err = parse_policy(&format!(r#"{{"name":"p","rules":[{rule},{rule}]}}"#)).unwrap_err();
        assert_eq!(err, PolicyError::DuplicateRuleId("r".into()));
    }

    #[test]
    fn structural_errors() {
        let err = parse_policy(
            r#"{"name":"p","rules":[{"id":"r","path":"name","check":"exists","onFail":"review"}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, PolicyError::BadPath { .. }));
        let err = parse_policy(
            r#"{"name":"p","rules":[{"id":"r","path":"/n","check":{"min-count":-1},"onFail":"review"}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, PolicyError::Json(JsonError::WrongKind { .. })));
        let err = parse_policy(
            r#"{"name":"p","rules":[{"id":"r","path":"/n","check":"exists","onFail":"review","when":1}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, PolicyError::Json(JsonError::UnknownKey { .. })));
        let err = parse_policy(r#"{"name":"p","rules":[{"id":"R","path":"/n","check":"exists","onFail":"review"}]}"#)
            .unwrap_err();
        assert!(matches!(err, PolicyError::BadRuleId { .. }));
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"rules":[{"message":"m","onFail":"reject","check":{"one-of":["a",1]},
            "path":"/resources/*/format","id":"fmt","quantifier":"all"},
            {"id":"re","path":"/name","check":{"matches":"^a"},"onFail":"review"},
            {"id":"mc","path":"/keywords","check":{"min-count":2},"onFail":"review"},
            {"id":"ex","path":"/title","check":"not-exists","onFail":"review"}],
            "version":"2","name":"p"}"#;
        let p = parse_policy(text).unwrap();
        let canonical = p.to_json();
        assert!(canonical.starts_with("{\n  \"name\": \"p\",\n  \"version\": \"2\",\n  \"rules\""));
        let rule0 = canonical.find("\"fmt\"").unwrap();
        let order: Vec<usize> = ["\"description\"", "\"path\"", "\"check\"", "\"quantifier\"", "\"onFail\"", "\"message\""]
            .iter()
            .map(|k| rule0 + canonical[rule0..].find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(parse_policy(&canonical).unwrap(), p);
    }
}
