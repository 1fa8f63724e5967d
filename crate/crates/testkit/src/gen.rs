//! Seeded generators. Every function is a pure function of the RNG state.

use opendatasheets::model::{
    CollectionProcedure, Confidentiality, Consent, Contributor, DataAccess, Datasheet, Field, FieldType,
    License, Method, PrivacyEntry, Procedures, ProcessingProcedure, Resource, ResourceFormat, Role,
    Sensitivity, SensitivityType, Source, TableSchema, UpdateMethod, UpdateProcedure, UseCase, UseCaseKind,
    UseTerms,
};
use opendatasheets::json::{Extra, StrEnum};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::TestRng;

const WORDS: &[&str] = &[
    "alpha", "river", "census", "Ünïcode", "naïve café", "quote \" inside", "back\\slash", "tab\tchar",
    "line\nbreak", "emoji 🚀", "  padded  ", "political opinions", "focus group", "health", "数据", "a/b~c",
];

const SLUG_PARTS: &[&str] = &["air", "city", "survey", "2024", "v1", "data", "open", "set", "x", "q.9", "a_b"];

const SENSITIVITY_NAMES: &[&str] = &["political opinions", "health", "religion", "location", "biometrics"];

const SAMPLE_CELLS: &[&str] = &["1", "2.5", "true", "2024-01-31", "abc", "12:30", "x y"];

fn pick<'a, T: ?Sized>(rng: &mut TestRng, items: &'a [&'a T]) -> &'a T {
    items.choose(rng).unwrap()
}

fn chance(rng: &mut TestRng, p: f64) -> bool {
    rng.gen_bool(p)
}

fn text(rng: &mut TestRng) -> String {
    let n = rng.gen_range(0..4);
    (0..n).map(|_| pick(rng, WORDS)).collect::<Vec<_>>().join(" ")
}

fn nonempty_text(rng: &mut TestRng) -> String {
    let n = rng.gen_range(1..4);
    (0..n).map(|_| pick(rng, WORDS).trim()).filter(|w| !w.is_empty()).collect::<Vec<_>>().join(" ") + "."
}

fn opt_text(rng: &mut TestRng) -> Option<String> {
    chance(rng, 0.5).then(|| text(rng))
}

pub fn slug(rng: &mut TestRng) -> String {
    let n = rng.gen_range(1..4);
    (0..n).map(|_| pick(rng, SLUG_PARTS)).collect::<Vec<_>>().join("-")
}

fn variant<E: StrEnum>(rng: &mut TestRng) -> E {
    *E::VARIANTS.choose(rng).unwrap()
}

fn list<T>(rng: &mut TestRng, max: usize, mut item: impl FnMut(&mut TestRng) -> T) -> Vec<T> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| item(rng)).collect()
}

pub fn json_value(rng: &mut TestRng, depth: u32) -> Value {
    let top = if depth == 0 { 4 } else { 6 };
    match rng.gen_range(0..top) {
        0 => Value::Null,
        1 => Value::Bool(rng.gen()),
        2 => json!(rng.gen_range(-1000i64..1000)),
        3 => Value::String(text(rng)),
        4 => Value::Array(list(rng, 3, |r| json_value(r, depth - 1))),
        _ => {
            let mut map = Map::new();
            for _ in 0..rng.gen_range(0..3) {
                map.insert(pick(rng, WORDS).to_string(), json_value(rng, depth - 1));
            }
            Value::Object(map)
        }
    }
}

/// Unknown keys; `x-` keeps them clear of every known key.
fn extra(rng: &mut TestRng) -> Extra {
    let mut out = Extra::new();
    if chance(rng, 0.2) {
        for _ in 0..rng.gen_range(1..3) {
            out.insert(format!("x-{}", slug(rng)), json_value(rng, 2));
        }
    }
    out
}

fn date(rng: &mut TestRng) -> String {
    format!("{:04}-{:02}-{:02}", rng.gen_range(1990..2030), rng.gen_range(1..=12), rng.gen_range(1..=28))
}

fn hash(rng: &mut TestRng) -> String {
    let hex: String = (0..64).map(|_| *b"0123456789abcdef".choose(rng).unwrap() as char).collect();
    format!("sha256:{hex}")
}

fn contributor(rng: &mut TestRng) -> Contributor {
    Contributor {
        name: nonempty_text(rng),
        role: variant(rng),
        organization: opt_text(rng),
        email: chance(rng, 0.3).then(|| "someone@example.org".to_string()),
        path: chance(rng, 0.3).then(|| "https://example.org/people".to_string()),
        extra: extra(rng),
    }
}

fn method(rng: &mut TestRng) -> Method {
    Method {
        name: pick(rng, &["survey", "focus group", "scraping", "anonymization", "labeling"]).to_string(),
        description: text(rng),
        path: opt_text(rng),
        extra: extra(rng),
    }
}

fn consent(rng: &mut TestRng) -> Consent {
    Consent {
        title: nonempty_text(rng),
        description: text(rng),
        path: opt_text(rng),
        extra: extra(rng),
    }
}

fn field(rng: &mut TestRng, index: usize) -> Field {
    let mut samples: Vec<String> = SAMPLE_CELLS.iter().map(|s| s.to_string()).collect();
    samples.shuffle(rng);
    samples.truncate(rng.gen_range(0..=5));
    Field {
        name: format!("{}_{index}", pick(rng, SLUG_PARTS)),
        field_type: variant::<FieldType>(rng),
        description: opt_text(rng),
        sample_values: samples,
        extra: extra(rng),
    }
}

fn resource(rng: &mut TestRng, index: usize) -> Resource {
    let format: ResourceFormat = variant(rng);
    Resource {
        name: format!("{}-{index}", slug(rng)),
        path: format!("data/file-{index}.{format}"),
        format,
        mediatype: chance(rng, 0.7).then(|| "text/csv".to_string()),
        encoding: chance(rng, 0.7).then(|| "utf-8".to_string()),
        bytes: chance(rng, 0.7).then(|| rng.gen_range(0..10_000_000)),
        hash: chance(rng, 0.5).then(|| hash(rng)),
        schema: chance(rng, 0.6).then(|| TableSchema {
            fields: (0..rng.gen_range(1..5)).map(|i| field(rng, i)).collect(),
            missing_values: vec!["".into(), "NA".into()],
            extra: extra(rng),
        }),
        extra: extra(rng),
    }
}

fn privacy_entry(rng: &mut TestRng) -> PrivacyEntry {
    PrivacyEntry {
        sensitivity: Sensitivity {
            description: text(rng),
            types: list(rng, 2, |r| SensitivityType {
                name: pick(r, SENSITIVITY_NAMES).to_string(),
                description: text(r),
                extra: extra(r),
            }),
            extra: extra(rng),
        },
        confidentiality: Confidentiality {
            path: opt_text(rng),
            description: text(rng),
            extra: extra(rng),
        },
        extra: extra(rng),
    }
}

fn update(rng: &mut TestRng) -> UpdateProcedure {
    let is_updated = [None, Some(false), Some(true)].choose(rng).copied().unwrap();
    let scheduled = is_updated != Some(false);
    UpdateProcedure {
        is_updated,
        periodicity: (scheduled && chance(rng, 0.6)).then(|| pick(rng, &["daily", "monthly", "yearly"]).to_string()),
        method: (scheduled && chance(rng, 0.6)).then(|| variant::<UpdateMethod>(rng)),
        method_description: opt_text(rng),
        versioning: (scheduled && chance(rng, 0.6)).then(|| text(rng)),
        contributors: list(rng, 2, contributor),
        extra: extra(rng),
    }
}

fn procedures(rng: &mut TestRng) -> Procedures {
    Procedures {
        collection: list(rng, 2, |r| CollectionProcedure {
            description: nonempty_text(r),
            path: opt_text(r),
            contributors: list(r, 2, contributor),
            methods: list(r, 2, method),
            consent: list(r, 2, consent),
            extra: extra(r),
        }),
        processing: list(rng, 2, |r| ProcessingProcedure {
            description: nonempty_text(r),
            methods: list(r, 2, method),
            contributors: list(r, 2, contributor),
            extra: extra(r),
        }),
        update: chance(rng, 0.7).then(|| update(rng)),
        extra: extra(rng),
    }
}

fn data_access(rng: &mut TestRng) -> DataAccess {
    let anonymous_access = [None, Some(false), Some(true)].choose(rng).copied().unwrap();
    let registration_required = match anonymous_access {
        Some(true) => [None, Some(false)].choose(rng).copied().unwrap(),
        _ => [None, Some(false), Some(true)].choose(rng).copied().unwrap(),
    };
    DataAccess {
        anonymous_access,
        registration_required,
        description: text(rng),
        path: opt_text(rng),
        extra: extra(rng),
    }
}

/// A datasheet satisfying every model invariant, with randomly sparse
/// responsible-AI content and unknown keys scattered through it.
pub fn datasheet(rng: &mut TestRng) -> Datasheet {
    Datasheet {
        name: slug(rng),
        title: text(rng),
        description: text(rng),
        version: pick(rng, &["", "0.1.0", "2.0", "draft"]).to_string(),
        created: chance(rng, 0.7).then(|| date(rng)),
        homepage: chance(rng, 0.3).then(|| "https://example.org".to_string()),
        keywords: list(rng, 3, text),
        licenses: list(rng, 2, |r| License {
            name: Some(pick(r, &["CC-BY-4.0", "MIT", "ODbL-1.0"]).to_string()),
            title: opt_text(r),
            path: opt_text(r),
            extra: extra(r),
        }),
        contributors: list(rng, 3, contributor),
        sources: list(rng, 2, |r| Source {
            title: nonempty_text(r),
            path: opt_text(r),
            description: opt_text(r),
            extra: extra(r),
        }),
        resources: (0..rng.gen_range(1..4)).map(|i| resource(rng, i)).collect(),
        privacy: list(rng, 2, privacy_entry),
        use_terms: chance(rng, 0.6).then(|| UseTerms {
            description: nonempty_text(rng),
            path: opt_text(rng),
            restrictions: list(rng, 2, text),
            extra: extra(rng),
        }),
        data_access: chance(rng, 0.6).then(|| data_access(rng)),
        procedures: chance(rng, 0.8).then(|| procedures(rng)),
        use_cases: list(rng, 3, |r| UseCase {
            title: nonempty_text(r),
            description: text(r),
            kind: variant::<UseCaseKind>(r),
            extra: extra(r),
        }),
        extra: extra(rng),
    }
}

/// A valid datasheet in which every recommended responsible-AI field is
/// populated by exactly one record, so removing any one of them is visible.
pub fn complete_datasheet(rng: &mut TestRng) -> Datasheet {
    let mut d = datasheet(rng);
    d.privacy = vec![PrivacyEntry {
        sensitivity: Sensitivity {
            description: nonempty_text(rng),
            types: vec![SensitivityType {
                name: pick(rng, SENSITIVITY_NAMES).to_string(),
                description: text(rng),
                extra: Extra::new(),
            }],
            extra: Extra::new(),
        },
        confidentiality: Confidentiality {
            path: Some("https://example.org/confidentiality".into()),
            description: nonempty_text(rng),
            extra: Extra::new(),
        },
        extra: Extra::new(),
    }];
    d.use_terms = Some(UseTerms {
        description: nonempty_text(rng),
        path: None,
        restrictions: vec![nonempty_text(rng)],
        extra: Extra::new(),
    });
    d.data_access = Some(DataAccess {
        anonymous_access: Some(false),
        registration_required: Some(rng.gen()),
        description: nonempty_text(rng),
        path: None,
        extra: Extra::new(),
    });
    d.procedures = Some(Procedures {
        collection: vec![CollectionProcedure {
            description: nonempty_text(rng),
            path: None,
            contributors: vec![contributor(rng)],
            methods: vec![method(rng)],
            consent: vec![consent(rng)],
            extra: Extra::new(),
        }],
        processing: vec![ProcessingProcedure {
            description: nonempty_text(rng),
            methods: vec![method(rng)],
            contributors: vec![contributor(rng)],
            extra: Extra::new(),
        }],
        update: Some(UpdateProcedure {
            is_updated: Some(true),
            periodicity: Some("monthly".into()),
            method: Some(variant(rng)),
            method_description: None,
            versioning: Some(nonempty_text(rng)),
            contributors: vec![],
            extra: Extra::new(),
        }),
        extra: Extra::new(),
    });
    d.use_cases = vec![
        UseCase { title: nonempty_text(rng), description: text(rng), kind: UseCaseKind::Permitted, extra: Extra::new() },
        UseCase { title: nonempty_text(rng), description: text(rng), kind: UseCaseKind::Prohibited, extra: Extra::new() },
    ];
    d
}

/// Contributor roles that become JSON-LD creators.
pub fn is_creator_role(role: Role) -> bool {
    matches!(role, Role::Author | Role::Publisher)
}

// ---- delimited tables ----

pub const DELIMITERS: [char; 4] = [',', ';', '\t', '|'];
const MISSING_CELLS: &[&str] = &["", "NA", "null", "N/A", "-"];
const TEXT_CELLS: &[&str] = &[
    "apple", "Berlin", "zeta", "x1", "hello world", "007", "1e", "TRUE-ish", "12:3", "2023-13-01", "2023-02-29",
    " 42 ", "+0", "0x1F", "1.2.3", "yes", "NaN", "2023-05-01T10:00:00", "--",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    Boolean,
    Integer,
    Number,
    Date,
    Datetime,
    Time,
    Text,
    Mixed,
}

const KINDS: [ColumnKind; 8] = [
    ColumnKind::Boolean,
    ColumnKind::Integer,
    ColumnKind::Number,
    ColumnKind::Date,
    ColumnKind::Datetime,
    ColumnKind::Time,
    ColumnKind::Text,
    ColumnKind::Mixed,
];

fn cell(rng: &mut TestRng, kind: ColumnKind) -> String {
    match kind {
        ColumnKind::Boolean => pick(rng, &["true", "false", "TRUE", "False"]).to_string(),
        ColumnKind::Integer => rng.gen_range(-5000i64..5000).to_string(),
        ColumnKind::Number => match rng.gen_range(0..3) {
            0 => format!("{:.2}", rng.gen_range(-100.0..100.0)),
            1 => format!("{}e{}", rng.gen_range(1..9), rng.gen_range(-3..4)),
            _ => format!(".{}", rng.gen_range(1..99)),
        },
        ColumnKind::Date => format!("{:04}-{:02}-{:02}", rng.gen_range(1900..2100), rng.gen_range(1..=12), rng.gen_range(1..=31)),
        ColumnKind::Datetime => format!(
            "{}T{:02}:{:02}:{:02}{}",
            date(rng),
            rng.gen_range(0..24),
            rng.gen_range(0..60),
            rng.gen_range(0..60),
            pick(rng, &["Z", "+02:00", "-05:30", ".5Z"])
        ),
        ColumnKind::Time => format!("{:02}:{:02}", rng.gen_range(0..26), rng.gen_range(0..60)),
        ColumnKind::Text => pick(rng, TEXT_CELLS).to_string(),
        ColumnKind::Mixed => {
            let k = *KINDS[..7].choose(rng).unwrap();
            cell(rng, k)
        }
    }
}

/// A delimited table together with the ground truth it was built from.
#[derive(Debug, Clone)]
pub struct GeneratedTable {
    pub text: String,
    pub delimiter: char,
    pub quoted: bool,
    pub has_header: bool,
    pub header: Vec<String>,
    /// Cell values as they appear after unquoting.
    pub rows: Vec<Vec<String>>,
}

impl GeneratedTable {
    pub fn column(&self, i: usize) -> Vec<&str> {
        self.rows.iter().map(|r| r[i].as_str()).collect()
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn file_name(&self) -> &'static str {
        if self.delimiter == '\t' { "table.tsv" } else { "table.csv" }
    }
}

fn render_cell(value: &str, quoted: bool) -> String {
    if quoted {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

/// Builds a table with at least two columns. Unquoted tables contain no
/// candidate delimiter inside cells; quoted tables quote every cell and
/// embed the active delimiter in some of them. Headerless tables start with
/// an integer cell so the first row cannot pass as a header.
pub fn table(rng: &mut TestRng, delimiter: char, quoted: bool, has_header: bool) -> GeneratedTable {
    let width = rng.gen_range(2..7);
    let height = rng.gen_range(3..30);
    let kinds: Vec<ColumnKind> = (0..width).map(|_| *KINDS.choose(rng).unwrap()).collect();
    let missing_rate = rng.gen_range(0.0..0.3);

    let mut rows: Vec<Vec<String>> = (0..height)
        .map(|_| {
            kinds
                .iter()
                .map(|&k| {
                    if chance(rng, missing_rate) {
                        pick(rng, MISSING_CELLS).to_string()
                    } else if quoted && k == ColumnKind::Text && chance(rng, 0.3) {
                        format!("left{delimiter}right")
                    } else {
                        cell(rng, k)
                    }
                })
                .collect()
        })
        .collect();
    if !has_header {
        rows[0][0] = rng.gen_range(1..1000).to_string();
    }
    let header: Vec<String> = if has_header {
        (0..width).map(|i| format!("{}_{i}", pick(rng, &["name", "value", "city", "Score", "when"]))).collect()
    } else {
        Vec::new()
    };

    let newline = if chance(rng, 0.2) { "\r\n" } else { "\n" };
    let mut text = String::new();
    for row in std::iter::once(&header).filter(|_| has_header).chain(&rows) {
        let line: Vec<String> = row.iter().map(|c| render_cell(c, quoted)).collect();
        text.push_str(&line.join(&delimiter.to_string()));
        text.push_str(newline);
    }
    GeneratedTable { text, delimiter, quoted, has_header, header, rows }
}

pub fn random_table(rng: &mut TestRng) -> GeneratedTable {
    let delimiter = *DELIMITERS.choose(rng).unwrap();
    let quoted = rng.gen();
    let has_header = rng.gen();
    table(rng, delimiter, quoted, has_header)
}

/// One file per combination of delimiter, quoting and header presence,
/// cycled until `count` files exist.
pub fn dialect_corpus(seed: u64, count: usize) -> Vec<GeneratedTable> {
    (0..count)
        .map(|i| {
            let combo = i % 16;
            let mut rng = crate::rng(seed + i as u64);
            table(&mut rng, DELIMITERS[combo % 4], (combo / 4) % 2 == 1, combo / 8 == 1)
        })
        .collect()
}

/// A comma-separated file of at least `target_bytes` bytes.
pub fn large_csv(rng: &mut TestRng, target_bytes: usize) -> String {
    let mut text = String::with_capacity(target_bytes + 128);
    text.push_str("id,station,reading,observed,flag\n");
    let mut id = 0u64;
    while text.len() < target_bytes {
        id += 1;
        let reading = if chance(rng, 0.05) { "NA".to_string() } else { format!("{:.3}", rng.gen_range(0.0..500.0)) };
        text.push_str(&format!(
            "{id},{},{reading},{},{}\n",
            pick(rng, &["north", "south", "harbor", "airport"]),
            date(rng),
            rng.gen::<bool>()
        ));
    }
    text
}

// ---- policies ----

const POLICY_PATHS: &[&str] = &[
    "/name",
    "/title",
    "/version",
    "/keywords",
    "/keywords/*",
    "/licenses/*/name",
    "/contributors/*/role",
    "/resources/*/format",
    "/resources/0/name",
    "/resources/*/schema/fields/*/type",
    "/privacy/*/sensitivity/types/*/name",
    "/procedures/collection/*/consent",
    "/procedures/collection/*/methods/*/name",
    "/procedures/update/isUpdated",
    "/dataAccess/anonymousAccess",
    "/dataAccess/registrationRequired",
    "/useCases/*/kind",
    "/useTerms/restrictions",
    "/nonexistent/key",
    "/privacy/*",
];

const POLICY_VALUES: &[&str] = &[
    "\"csv\"", "\"json\"", "\"author\"", "\"publisher\"", "\"permitted\"", "\"prohibited\"", "\"political opinions\"",
    "\"health\"", "\"focus group\"", "\"MIT\"", "\"integer\"", "\"0.1.0\"", "true", "false", "1", "null", "[]",
];

const POLICY_PATTERNS: &[&str] = &["^a", "o", "^[a-z0-9.-]+$", "\\d", "csv|json", "^$", "(?i)POLITICAL", "^p"];

fn policy_value(rng: &mut TestRng) -> Value {
    serde_json::from_str(pick(rng, POLICY_VALUES)).unwrap()
}

fn check(rng: &mut TestRng) -> Value {
    match rng.gen_range(0..7) {
        0 => json!("exists"),
        1 => json!("not-exists"),
        2 => json!({ "equals": policy_value(rng) }),
        3 => json!({ "one-of": list(rng, 3, policy_value) }),
        4 => json!({ "not-one-of": list(rng, 3, policy_value) }),
        5 => json!({ "matches": pick(rng, POLICY_PATTERNS) }),
        _ => json!({ "min-count": rng.gen_range(0..4) }),
    }
}

/// Policy JSON with up to six rules over paths that exist in generated datasheets.
pub fn policy(rng: &mut TestRng) -> Value {
    let rules: Vec<Value> = (0..rng.gen_range(0..7))
        .map(|i| {
            let mut rule = json!({
                "id": format!("rule-{i}"),
                "path": pick(rng, POLICY_PATHS),
                "check": check(rng),
                "onFail": pick(rng, &["review", "reject"]),
            });
            if let Some(q) = [None, Some("any"), Some("all")].choose(rng).copied().unwrap() {
                rule["quantifier"] = json!(q);
            }
            rule
        })
        .collect();
    json!({ "name": "generated", "version": "1", "rules": rules })
}
