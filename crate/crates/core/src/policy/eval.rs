use serde::Serialize;
use serde_json::Value;

use super::path::resolve_value;
use super::{Check, OnFail, Policy, Quantifier, Rule};
use crate::json::str_enum;
use crate::model::Datasheet;

str_enum! {
    /// Ordered by severity.
    pub enum Decision {
        Accept => "accept",
        Review => "review",
        Reject => "reject",
    }
}

str_enum! {
    pub enum RuleAction {
        None => "none",
        Review => "review",
        Reject => "reject",
    }
}

impl From<OnFail> for RuleAction {
    fn from(on_fail: OnFail) -> Self {
        match on_fail {
            OnFail::Review => RuleAction::Review,
            OnFail::Reject => RuleAction::Reject,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleResult {
    pub id: String,
    pub passed: bool,
    pub action: RuleAction,
    pub matched_values: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub decision: Decision,
    pub rule_results: Vec<RuleResult>,
}

impl Verdict {
    fn from_results(rule_results: Vec<RuleResult>) -> Self {
        let decision = rule_results
            .iter()
            .map(|r| match r.action {
                RuleAction::None => Decision::Accept,
                RuleAction::Review => Decision::Review,
                RuleAction::Reject => Decision::Reject,
            })
            .max()
            .unwrap_or(Decision::Accept);
        Verdict { decision, rule_results }
    }
}

/// Scalar text used by `matches`; containers never match.
fn match_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

fn display_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A list value counts its elements, anything else counts once.
fn count(values: &[&Value]) -> u64 {
    values
        .iter()
        .map(|v| match v {
            Value::Array(items) => items.len() as u64,
            _ => 1,
        })
        .sum()
}

fn satisfies(check: &Check, v: &Value) -> bool {
    match check {
        Check::Equals(x) => v == x,
        Check::OneOf(xs) => xs.contains(v),
        Check::NotOneOf(xs) => !xs.contains(v),
        Check::Matches(p) => match_text(v).is_some_and(|t| p.is_match(&t)),
        Check::Exists | Check::NotExists | Check::MinCount(_) => unreachable!("not a per-value check"),
    }
}

fn evaluate_rule(doc: &Value, rule: &Rule) -> RuleResult {
    let values = resolve_value(doc, &rule.path);
    // Without a wildcard at most one value resolves and `any` applies.
    let quantifier = if rule.path.has_wildcard() { rule.quantifier } else { Quantifier::Any };
    let passed = match &rule.check {
        Check::Exists => !values.is_empty(),
        Check::NotExists => values.is_empty(),
        Check::MinCount(n) => count(&values) >= *n,
        check => match quantifier {
            Quantifier::Any => values.iter().any(|v| satisfies(check, v)),
            Quantifier::All => values.iter().all(|v| satisfies(check, v)),
        },
    };
    let message = if passed {
        String::new()
    } else if !rule.message.is_empty() {
        rule.message.clone()
    } else {
        format!("{} failed {} ({} value(s) found)", rule.path, rule.check, values.len())
    };
    RuleResult {
        id: rule.id.clone(),
        passed,
        action: if passed { RuleAction::None } else { rule.on_fail.into() },
        matched_values: values.iter().map(|v| display_value(v)).collect(),
        message,
    }
}

/// Evaluates every rule independently against a JSON document.
pub fn evaluate_value(doc: &Value, policy: &Policy) -> Verdict {
    Verdict::from_results(policy.rules.iter().map(|r| evaluate_rule(doc, r)).collect())
}

pub fn evaluate_policy(d: &Datasheet, policy: &Policy) -> Verdict {
    let doc = serde_json::to_value(d).expect("datasheets serialize to JSON");
    evaluate_value(&doc, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::parse_policy;
    use serde_json::json;

    fn verdict(doc: Value, rules: Value) -> Verdict {
        let p = parse_policy(&json!({"name": "p", "rules": rules}).to_string()).unwrap();
        evaluate_value(&doc, &p)
    }

    fn rule(id: &str, path: &str, check: Value, on_fail: &str) -> Value {
        json!({"id": id, "path": path, "check": check, "onFail": on_fail})
    }

    #[test]
    fn empty_policy_accepts() {
        assert_eq!(verdict(json!({}), json!([])).decision, Decision::Accept);
    }

    #[test]
    fn missing_consent_needs_review() {
        let doc = json!({"procedures": {"collection": [{"description": "x", "consent": []}]}});
        let v = verdict(doc, json!([rule("consent", "/procedures/collection/*/consent", json!({"min-count": 1}), "review")]));
        assert_eq!(v.decision, Decision::Review);
        assert_eq!(v.rule_results[0].action, RuleAction::Review);
        assert_eq!(v.rule_results[0].matched_values, ["[]"]);
    }

    #[test]
    fn reject_dominates_review() {
        let v = verdict(
            json!({"name": "a"}),
            json!([rule("r1", "/title", json!("exists"), "review"), rule("r2", "/name", json!({"equals": "b"}), "reject")]),
        );
        assert_eq!(v.decision, Decision::Reject);
        assert!(v.rule_results.iter().all(|r| !r.passed));
    }

    #[test]
    fn quantifiers_on_empty_and_full_sets() {
        let doc = json!({"xs": [], "ys": ["a", "b"]});
        let any = |path: &str| json!({"id": "q", "path": path, "check": {"matches": "a"}, "onFail": "reject"});
        let all = |path: &str| json!({"id": "q", "path": path, "check": {"matches": "a"}, "quantifier": "all", "onFail": "reject"});
        assert_eq!(verdict(doc.clone(), json!([any("/xs/*")])).decision, Decision::Reject);
        assert_eq!(verdict(doc.clone(), json!([all("/xs/*")])).decision, Decision::Accept);
        assert_eq!(verdict(doc.clone(), json!([any("/ys/*")])).decision, Decision::Accept);
        assert_eq!(verdict(doc.clone(), json!([all("/ys/*")])).decision, Decision::Reject);
        // "all" without a wildcard behaves as "any".
        assert_eq!(verdict(doc, json!([all("/missing")])).decision, Decision::Reject);
    }

    #[test]
    fn matches_scalars_only() {
        let doc = json!({"n": 42, "b": true, "o": {"k": "42"}});
        let m = |path: &str, re: &str| verdict(doc.clone(), json!([rule("m", path, json!({"matches": re}), "review")])).decision;
        assert_eq!(m("/n", "^4"), Decision::Accept);
        assert_eq!(m("/b", "ru"), Decision::Accept);
        assert_eq!(m("/o", "42"), Decision::Review);
    }

    #[test]
    fn verdict_json_starts_with_decision() {
        let v = verdict(json!({}), json!([]));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"decision":"accept","ruleResults":[]}"#);
    }
}
