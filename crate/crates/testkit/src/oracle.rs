//! Reference implementations written from the format rules, sharing no code
//! with the library: regular expressions instead of hand-written scanners,
//! an explicit join table instead of match arms, and raw JSON walks instead
//! of the typed model.

use std::sync::OnceLock;

use regex::Regex;
use serde_json::Value;

pub const CELL_TYPES: [&str; 8] = ["missing", "boolean", "integer", "number", "date", "datetime", "time", "string"];

/// `JOIN[i][j]` is the join of `CELL_TYPES[i]` and `CELL_TYPES[j]`, written out in full.
pub const JOIN: [[&str; 8]; 8] = [
    ["missing", "boolean", "integer", "number", "date", "datetime", "time", "string"],
    ["boolean", "boolean", "string", "string", "string", "string", "string", "string"],
    ["integer", "string", "integer", "number", "string", "string", "string", "string"],
    ["number", "string", "number", "number", "string", "string", "string", "string"],
    ["date", "string", "string", "string", "date", "string", "string", "string"],
    ["datetime", "string", "string", "string", "string", "datetime", "string", "string"],
    ["time", "string", "string", "string", "string", "string", "time", "string"],
    ["string", "string", "string", "string", "string", "string", "string", "string"],
];

pub fn join(a: &str, b: &str) -> &'static str {
    let index = |t: &str| CELL_TYPES.iter().position(|c| *c == t).unwrap_or_else(|| panic!("unknown type {t}"));
    JOIN[index(a)][index(b)]
}

struct Patterns {
    boolean: Regex,
    integer: Regex,
    number: Regex,
    date: Regex,
    datetime: Regex,
    time: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        boolean: Regex::new(r"^(?:[Tt][Rr][Uu][Ee]|[Ff][Aa][Ll][Ss][Ee])$").unwrap(),
        integer: Regex::new(r"^(?:[+-]?[1-9][0-9]*|-?0)$").unwrap(),
        number: Regex::new(r"^[+-]?(?:(?:[0-9]+\.[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?|[0-9]+[eE][+-]?[0-9]+)$").unwrap(),
        date: Regex::new(r"^([0-9]{4})-([0-9]{2})-([0-9]{2})$").unwrap(),
        datetime: Regex::new(
            r"^([0-9]{4}-[0-9]{2}-[0-9]{2})[Tt ]([0-9]{2}):([0-9]{2}):([0-9]{2})(?:\.[0-9]+)?(?:[Zz]|[+-]([0-9]{2}):([0-9]{2}))$",
        )
        .unwrap(),
        time: Regex::new(r"^([0-9]{2}):([0-9]{2})(?::([0-9]{2}))?$").unwrap(),
    })
}

fn is_leap(year: u32) -> bool {
    year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)
}

fn valid_date(s: &str) -> bool {
    let Some(c) = patterns().date.captures(s) else { return false };
    let year: u32 = c[1].parse().unwrap();
    let month: u32 = c[2].parse().unwrap();
    let day: u32 = c[3].parse().unwrap();
    let days = match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => return false,
    };
    (1..=days).contains(&day)
}

fn in_range(text: Option<regex::Match<'_>>, max: u32) -> bool {
    text.map_or(true, |m| m.as_str().parse::<u32>().unwrap() <= max)
}

pub fn classify(cell: &str, missing_values: &[String]) -> &'static str {
    let p = patterns();
    let t = cell.trim();
    if missing_values.iter().any(|m| m == t) {
        "missing"
    } else if p.boolean.is_match(t) {
        "boolean"
    } else if p.integer.is_match(t) {
        "integer"
    } else if p.number.is_match(t) {
        "number"
    } else if valid_date(t) {
        "date"
    } else if p.datetime.captures(t).is_some_and(|c| {
        valid_date(&c[1])
            && in_range(c.get(2), 23)
            && in_range(c.get(3), 59)
            && in_range(c.get(4), 59)
            && in_range(c.get(5), 23)
            && in_range(c.get(6), 59)
    }) {
        "datetime"
    } else if p.time.captures(t).is_some_and(|c| in_range(c.get(1), 23) && in_range(c.get(2), 59) && in_range(c.get(3), 59)) {
        "time"
    } else {
        "string"
    }
}

/// Schema type name for a column of raw cells.
pub fn column_type(cells: &[&str], missing_values: &[String]) -> &'static str {
    let folded = cells.iter().fold("missing", |acc, c| join(acc, classify(c, missing_values)));
    if folded == "missing" { "any" } else { folded }
}

pub fn default_missing_values() -> Vec<String> {
    ["", "NA", "N/A", "n/a", "null", "NULL", "-"].iter().map(|s| s.to_string()).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hmac_sha256::Hash::hash(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

// ---- policy evaluation ----

fn expand<'a>(doc: &'a Value, path: &str) -> Vec<&'a Value> {
    if path.is_empty() {
        return vec![doc];
    }
    let index = Regex::new(r"^(?:0|[1-9][0-9]*)$").unwrap();
    let mut current = vec![doc];
    for raw in path[1..].split('/') {
        let token = raw.replace("~1", "/").replace("~0", "~");
        let mut next = Vec::new();
        for v in current {
            match v {
                Value::Array(items) if token == "*" => next.extend(items.iter()),
                Value::Array(items) if index.is_match(&token) => next.extend(token.parse::<usize>().ok().and_then(|i| items.get(i))),
                Value::Object(map) if token != "*" => next.extend(map.get(&token)),
                _ => {}
            }
        }
        current = next;
    }
    current
}

fn check_value(check: &Value, v: &Value) -> bool {
    let (name, arg) = check.as_object().unwrap().iter().next().unwrap();
    match name.as_str() {
        "equals" => v == arg,
        "one-of" => arg.as_array().unwrap().iter().any(|x| x == v),
        "not-one-of" => !arg.as_array().unwrap().iter().any(|x| x == v),
        "matches" => {
            let re = Regex::new(arg.as_str().unwrap()).unwrap();
            match v {
                Value::String(s) => re.is_match(s),
                Value::Number(n) => re.is_match(&n.to_string()),
                Value::Bool(b) => re.is_match(&b.to_string()),
                _ => false,
            }
        }
        other => panic!("not a per-value check: {other}"),
    }
}

/// Whether one rule (raw policy JSON) passes on `doc`.
pub fn rule_passes(doc: &Value, rule: &Value) -> bool {
    let path = rule["path"].as_str().unwrap();
    let values = expand(doc, path);
    let check = &rule["check"];
    match check.as_str() {
        Some("exists") => return !values.is_empty(),
        Some("not-exists") => return values.is_empty(),
        _ => {}
    }
    if let Some(n) = check.get("min-count") {
        let total: u64 = values.iter().map(|v| v.as_array().map_or(1, |a| a.len() as u64)).sum();
        return total >= n.as_u64().unwrap();
    }
    let wildcard = path.split('/').any(|t| t == "*");
    let all = wildcard && rule.get("quantifier").and_then(Value::as_str) == Some("all");
    if all {
        values.iter().all(|v| check_value(check, v))
    } else {
        values.iter().any(|v| check_value(check, v))
    }
}

/// Decision string for a raw policy document.
pub fn decision(doc: &Value, policy: &Value) -> &'static str {
    let failed: Vec<&str> = policy["rules"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| !rule_passes(doc, r))
        .map(|r| r["onFail"].as_str().unwrap())
        .collect();
    if failed.contains(&"reject") {
        "reject"
    } else if failed.contains(&"review") {
        "review"
    } else {
        "accept"
    }
}

// ---- completeness ----

fn nonblank(v: Option<&Value>) -> bool {
    v.and_then(Value::as_str).is_some_and(|s| !s.trim().is_empty())
}

fn nonempty_list(v: Option<&Value>) -> bool {
    v.and_then(Value::as_array).is_some_and(|a| !a.is_empty())
}

fn items<'a>(doc: &'a Value, path: &str) -> &'a [Value] {
    doc.pointer(path).and_then(Value::as_array).map_or(&[], Vec::as_slice)
}

fn any_entry(list: &[Value], test: impl Fn(&Value) -> bool) -> bool {
    list.iter().any(test)
}

/// `(section, populated, total)` for every scored section, counted on raw JSON.
pub fn section_counts(doc: &Value) -> Vec<(&'static str, usize, usize)> {
    let count = |flags: &[bool]| flags.iter().filter(|f| **f).count();
    let privacy = items(doc, "/privacy");
    let collection = items(doc, "/procedures/collection");
    let processing = items(doc, "/procedures/processing");
    let use_cases = items(doc, "/useCases");

    let privacy_flags = [
        any_entry(privacy, |e| nonblank(e.pointer("/sensitivity/description"))),
        any_entry(privacy, |e| nonempty_list(e.pointer("/sensitivity/types"))),
        any_entry(privacy, |e| nonblank(e.pointer("/confidentiality/description"))),
        any_entry(privacy, |e| nonblank(e.pointer("/confidentiality/path"))),
    ];
    let terms_flags = [nonblank(doc.pointer("/useTerms/description")), nonempty_list(doc.pointer("/useTerms/restrictions"))];
    let access_flags = [
        nonblank(doc.pointer("/dataAccess/description")),
        doc.pointer("/dataAccess/anonymousAccess").is_some_and(Value::is_boolean),
        doc.pointer("/dataAccess/registrationRequired").is_some_and(Value::is_boolean),
    ];
    let collection_flags = [
        any_entry(collection, |e| nonblank(e.get("description"))),
        any_entry(collection, |e| nonempty_list(e.get("methods"))),
        any_entry(collection, |e| nonempty_list(e.get("consent"))),
        any_entry(collection, |e| nonempty_list(e.get("contributors"))),
    ];
    let processing_flags = [
        any_entry(processing, |e| nonblank(e.get("description"))),
        any_entry(processing, |e| nonempty_list(e.get("methods"))),
        any_entry(processing, |e| nonempty_list(e.get("contributors"))),
    ];
    let is_updated = doc.pointer("/procedures/update/isUpdated");
    let mut update_flags = vec![is_updated.is_some_and(Value::is_boolean)];
    if is_updated == Some(&Value::Bool(true)) {
        update_flags.push(nonblank(doc.pointer("/procedures/update/periodicity")));
        update_flags.push(doc.pointer("/procedures/update/method").is_some());
        update_flags.push(nonblank(doc.pointer("/procedures/update/versioning")));
    }
    let use_case_flags = [
        any_entry(use_cases, |u| u["kind"] == "permitted"),
        any_entry(use_cases, |u| u["kind"] == "prohibited"),
    ];

    vec![
        ("privacy", count(&privacy_flags), privacy_flags.len()),
        ("useTerms", count(&terms_flags), terms_flags.len()),
        ("dataAccess", count(&access_flags), access_flags.len()),
        ("collection", count(&collection_flags), collection_flags.len()),
        ("processing", count(&processing_flags), processing_flags.len()),
        ("update", count(&update_flags), update_flags.len()),
        ("useCases", count(&use_case_flags), use_case_flags.len()),
    ]
}

/// JSON locations whose removal unpopulates exactly one recommended field of
/// a document built by [`crate::gen::complete_datasheet`], with its section.
/// `isUpdated` is left out: removing it also shrinks the update denominator.
pub const RECOMMENDED_LOCATIONS: [(&str, &str); 21] = [
    ("privacy", "/privacy/0/sensitivity/description"),
    ("privacy", "/privacy/0/sensitivity/types"),
    ("privacy", "/privacy/0/confidentiality/description"),
    ("privacy", "/privacy/0/confidentiality/path"),
    ("useTerms", "/useTerms/description"),
    ("useTerms", "/useTerms/restrictions"),
    ("dataAccess", "/dataAccess/description"),
    ("dataAccess", "/dataAccess/anonymousAccess"),
    ("dataAccess", "/dataAccess/registrationRequired"),
    ("collection", "/procedures/collection/0/description"),
    ("collection", "/procedures/collection/0/methods"),
    ("collection", "/procedures/collection/0/consent"),
    ("collection", "/procedures/collection/0/contributors"),
    ("processing", "/procedures/processing/0/description"),
    ("processing", "/procedures/processing/0/methods"),
    ("processing", "/procedures/processing/0/contributors"),
    ("update", "/procedures/update/periodicity"),
    ("update", "/procedures/update/method"),
    ("update", "/procedures/update/versioning"),
    ("useCases", "/useCases/0"),
    ("useCases", "/useCases/1"),
];

/// Removes the value at `pointer` (object member or array element).
pub fn remove_at(doc: &mut Value, pointer: &str) -> Option<Value> {
    let (parent, last) = pointer.rsplit_once('/')?;
    match doc.pointer_mut(parent)? {
        Value::Object(map) => map.remove(last),
        Value::Array(items) => {
            let i: usize = last.parse().ok()?;
            (i < items.len()).then(|| items.remove(i))
        }
        _ => None,
    }
}
