//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with the
//! measured runtime against its pinned limit. Exits non-zero on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ods_testkit::fixtures::{read_fixture, VALID_DATASHEETS};
use ods_testkit::oracle::{self, CELL_TYPES};
use ods_testkit::{gen, rng};
use opendatasheets::inference::{infer_resource, join_types, sniff_dialect, CellType, InferenceConfig};
use opendatasheets::jsonld::{extract_rai, to_jsonld};
use opendatasheets::model::{parse_datasheet, serialize_datasheet, to_canonical_json, FieldType};
use opendatasheets::policy::{evaluate_policy, parse_policy, Decision, Policy};
use opendatasheets::validation::validate_datasheet;
use rand::seq::SliceRandom;
use serde_json::Value;

type Check = Result<String, String>;
/// Name, outcome, elapsed time and optional limit.
type Row = (&'static str, Check, Duration, Option<Duration>);
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SAMPLES_LIMIT: Duration = Duration::from_secs(1);
const ROUNDTRIP_LIMIT: Duration = Duration::from_secs(10);
const INFERENCE_LIMIT: Duration = Duration::from_secs(30);
const LATTICE_LIMIT: Duration = Duration::from_secs(1);
const DIALECT_LIMIT: Duration = Duration::from_secs(5);
const POLICY_LIMIT: Duration = Duration::from_secs(10);
const JSONLD_LIMIT: Duration = Duration::from_secs(5);
const PIPELINE_LIMIT: Duration = Duration::from_secs(5);

const ROUNDTRIP_COUNT: u64 = 200;
const TABLE_COUNT: u64 = 60;
const DIALECT_FILES: usize = 40;
const POLICY_PAIRS: u64 = 100;
const LARGE_CSV_BYTES: usize = 10 * 1024 * 1024;

fn samples() -> Check {
    let one = parse_datasheet(&read_fixture("package-sample.json")).map_err(|e| format!("package sample: {e}"))?;
    ensure!(!one.resources.is_empty(), "package sample lost its resource list");
    let two = parse_datasheet(&read_fixture("rai-sample.json")).map_err(|e| format!("rai sample: {e}"))?;
    let sensitivity = two.privacy.first().and_then(|p| p.sensitivity.types.first()).map(|t| t.name.as_str());
    ensure!(sensitivity == Some("political opinions"), "sensitivity type {sensitivity:?}");
    let method = two
        .procedures
        .as_ref()
        .and_then(|p| p.collection.first())
        .and_then(|c| c.methods.first())
        .map(|m| m.name.as_str());
    ensure!(method == Some("focus group"), "collection method {method:?}");
    Ok("both samples parse".into())
}

fn roundtrip() -> Check {
    for seed in 0..ROUNDTRIP_COUNT {
        let d = gen::datasheet(&mut rng(seed));
        let text = serialize_datasheet(&d);
        ensure!(text == serialize_datasheet(&d), "seed {seed}: serialization not deterministic");
        let back = parse_datasheet(&text).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(back == d, "seed {seed}: parse(serialize(d)) differs from d");
        ensure!(serialize_datasheet(&back) == text, "seed {seed}: second serialization differs");
    }
    Ok(format!("{ROUNDTRIP_COUNT} datasheets"))
}

fn type_name(t: CellType) -> &'static str {
    CELL_TYPES[CellType::ALL.iter().position(|c| *c == t).unwrap()]
}

fn inference_oracle() -> Check {
    let cfg = InferenceConfig::default();
    let missing = oracle::default_missing_values();
    let mut columns = 0;
    for seed in 0..TABLE_COUNT {
        let table = gen::random_table(&mut rng(10_000 + seed));
        let inferred = infer_resource(table.file_name(), table.text.as_bytes(), &cfg)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let resource = inferred.resource;
        let schema = resource.schema.ok_or(format!("seed {seed}: no schema"))?;
        ensure!(schema.fields.len() == table.width(), "seed {seed}: {} fields", schema.fields.len());
        for (i, field) in schema.fields.iter().enumerate() {
            let expected = oracle::column_type(&table.column(i), &missing);
            ensure!(field.field_type.as_str() == expected, "seed {seed} column {i}: {} vs {expected}", field.field_type);
            columns += 1;
        }
        ensure!(resource.bytes == Some(table.text.len() as u64), "seed {seed}: bytes {:?}", resource.bytes);
        let hash = format!("sha256:{}", oracle::sha256_hex(table.text.as_bytes()));
        ensure!(resource.hash.as_deref() == Some(hash.as_str()), "seed {seed}: hash mismatch");
    }
    Ok(format!("{TABLE_COUNT} tables, {columns} columns"))
}

fn lattice_laws() -> Check {
    let all = CellType::ALL;
    for a in all {
        ensure!(join_types(a, a) == a, "idempotence fails for {a:?}");
        ensure!(join_types(CellType::Missing, a) == a, "missing is not an identity for {a:?}");
        ensure!(join_types(CellType::String, a) == CellType::String, "string does not absorb {a:?}");
        for b in all {
            ensure!(join_types(a, b) == join_types(b, a), "commutativity fails for {a:?} {b:?}");
            ensure!(
                type_name(join_types(a, b)) == oracle::join(type_name(a), type_name(b)),
                "join {a:?} {b:?} disagrees with the reference table"
            );
            for c in all {
                ensure!(
                    join_types(join_types(a, b), c) == join_types(a, join_types(b, c)),
                    "associativity fails for {a:?} {b:?} {c:?}"
                );
            }
        }
    }
    Ok("8 types, 512 triples".into())
}

fn dialect_sniffing() -> Check {
    let cfg = InferenceConfig::default();
    let corpus = gen::dialect_corpus(7_000, DIALECT_FILES);
    let mut combos = std::collections::HashSet::new();
    for (i, file) in corpus.iter().enumerate() {
        let d = sniff_dialect(&file.text, &cfg).map_err(|e| format!("file {i}: {e}"))?;
        ensure!(d.delimiter == file.delimiter, "file {i}: delimiter {:?} vs {:?}", d.delimiter, file.delimiter);
        ensure!(d.has_header == file.has_header, "file {i}: header {} vs {}", d.has_header, file.has_header);
        combos.insert((file.delimiter, file.quoted, file.has_header));
    }
    ensure!(combos.len() == 16, "corpus covers {} of 16 variants", combos.len());
    Ok(format!("{DIALECT_FILES} files, 16 variants"))
}

fn policy_engine() -> Check {
    let empty = Policy { name: "empty".into(), version: String::new(), rules: Vec::new() };
    for seed in 0..POLICY_PAIRS {
        let mut r = rng(20_000 + seed);
        let d = gen::datasheet(&mut r);
        let raw = gen::policy(&mut r);
        let policy = parse_policy(&raw.to_string()).map_err(|e| format!("seed {seed}: {e}"))?;
        let doc = serde_json::to_value(&d).unwrap();
        let verdict = evaluate_policy(&d, &policy);
        let expected = oracle::decision(&doc, &raw);
        ensure!(verdict.decision.as_str() == expected, "seed {seed}: {} vs oracle {expected}", verdict.decision);

        let mut shuffled = policy.clone();
        shuffled.rules.shuffle(&mut r);
        ensure!(evaluate_policy(&d, &shuffled).decision == verdict.decision, "seed {seed}: order changes decision");

        let extra = parse_policy(&gen::policy(&mut r).to_string()).unwrap();
        let mut grown = policy.clone();
        grown.rules.extend(extra.rules.into_iter().enumerate().map(|(i, mut rule)| {
            rule.id = format!("extra-{i}");
            rule
        }));
        ensure!(evaluate_policy(&d, &grown).decision >= verdict.decision, "seed {seed}: added rules lowered severity");

        ensure!(evaluate_policy(&d, &empty).decision == Decision::Accept, "seed {seed}: empty policy did not accept");
    }
    Ok(format!("{POLICY_PAIRS} pairs"))
}

fn jsonld() -> Check {
    let mut converted = 0;
    let generated = (0..50).map(|seed| serialize_datasheet(&gen::complete_datasheet(&mut rng(30_000 + seed))));
    let fixtures = VALID_DATASHEETS.iter().map(|name| read_fixture(name));
    for (i, text) in fixtures.chain(generated).enumerate() {
        let d = parse_datasheet(&text).map_err(|e| format!("document {i}: {e}"))?;
        ensure!(validate_datasheet(&d).valid, "document {i} is not valid");
        let doc: Value = serde_json::from_str(&to_jsonld(&d).to_json()).map_err(|e| e.to_string())?;
        ensure!(doc.get("@context").is_some(), "document {i}: no @context");
        ensure!(doc["@type"] == "Dataset", "document {i}: @type {}", doc["@type"]);
        let block = serde_json::to_value(d.rai_block()).unwrap();
        ensure!(
            to_canonical_json(&extract_rai(&doc)) == to_canonical_json(&block),
            "document {i}: ods subtrees differ from the responsible-AI block"
        );
        converted += 1;
    }
    Ok(format!("{converted} documents"))
}

fn ods(dir: &Path, args: &[&str]) -> Result<i32, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ods"))
        .args(args)
        .current_dir(dir)
        .env_remove("ODS_POLICY")
        .env("RUST_LOG", "off")
        .output()
        .map_err(|e| e.to_string())?;
    out.status.code().ok_or_else(|| format!("ods {} was killed", args.join(" ")))
}

fn expect_exit(dir: &Path, args: &[&str], want: i32) -> Result<(), String> {
    let got = ods(dir, args)?;
    ensure!(got == want, "ods {} exited {got}, expected {want}", args.join(" "));
    Ok(())
}

/// Returns the elapsed pipeline time; data generation is not counted.
fn pipeline() -> Result<(String, Duration), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = dir.path();
    let csv = gen::large_csv(&mut rng(40_000), LARGE_CSV_BYTES);
    std::fs::write(p.join("readings.csv"), &csv).map_err(|e| e.to_string())?;
    std::fs::write(p.join("consent.policy.json"), read_fixture("require-consent.policy.json")).unwrap();

    let start = Instant::now();
    expect_exit(p, &["init", "station-readings", "--title", "Station readings", "-o", "ds.json"], 0)?;
    expect_exit(p, &["infer", "readings.csv", "--merge", "ds.json", "-o", "ds.json"], 0)?;
    expect_exit(p, &["validate", "ds.json"], 0)?;
    expect_exit(p, &["evaluate", "ds.json", "--policy", "consent.policy.json"], 3)?;
    expect_exit(p, &["convert", "ds.json", "--to", "jsonld", "-o", "ds.jsonld"], 0)?;
    let elapsed = start.elapsed();

    let d = parse_datasheet(&std::fs::read_to_string(p.join("ds.json")).unwrap()).map_err(|e| e.to_string())?;
    let r = d.resource("readings").ok_or("no readings resource")?;
    ensure!(r.bytes == Some(csv.len() as u64), "bytes {:?} vs {}", r.bytes, csv.len());
    let types: Vec<FieldType> = r.schema.as_ref().ok_or("no schema")?.fields.iter().map(|f| f.field_type).collect();
    let expected = [FieldType::Integer, FieldType::String, FieldType::Number, FieldType::Date, FieldType::Boolean];
    ensure!(types == expected, "field types {types:?}");
    ensure!(p.join("ds.jsonld").is_file(), "no JSON-LD written");
    Ok((format!("{} MiB CSV", csv.len() / (1024 * 1024)), elapsed))
}

/// No member has a build script or a dependency outside the Rust toolchain,
/// and the service starts without wizard assets.
fn standalone() -> Check {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let crates = std::fs::read_dir(root.join("crates")).map_err(|e| e.to_string())?;
    let mut members = 0;
    for entry in crates {
        let dir = entry.map_err(|e| e.to_string())?.path();
        let manifest = std::fs::read_to_string(dir.join("Cargo.toml")).map_err(|e| format!("{}: {e}", dir.display()))?;
        ensure!(!dir.join("build.rs").exists() && !manifest.contains("build ="), "{} has a build step", dir.display());
        ensure!(!dir.join("package.json").exists(), "{} needs a JavaScript toolchain", dir.display());
        members += 1;
    }
    let config = ods_server::ServerConfig::default();
    ensure!(config.assets.is_none(), "service requires an assets directory");
    let _router = ods_server::router(config);
    Ok(format!("{members} Rust crates, service built without assets"))
}

fn timed(f: fn() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let result = f();
    (result, start.elapsed())
}

fn main() {
    let checks: [Criterion; 7] = [
        ("sample fidelity", samples, SAMPLES_LIMIT),
        ("roundtrip suite", roundtrip, ROUNDTRIP_LIMIT),
        ("inference oracle equivalence", inference_oracle, INFERENCE_LIMIT),
        ("type-lattice laws", lattice_laws, LATTICE_LIMIT),
        ("dialect sniffing", dialect_sniffing, DIALECT_LIMIT),
        ("policy engine", policy_engine, POLICY_LIMIT),
        ("JSON-LD export", jsonld, JSONLD_LIMIT),
    ];
    let mut rows: Vec<Row> = checks
        .into_iter()
        .map(|(name, f, limit)| {
            let (result, elapsed) = timed(f);
            (name, result, elapsed, Some(limit))
        })
        .collect();
    let (pipeline_result, pipeline_time) = match pipeline() {
        Ok((detail, elapsed)) => (Ok(detail), elapsed),
        Err(e) => (Err(e), Duration::ZERO),
    };
    rows.push(("end-to-end CLI", pipeline_result, pipeline_time, Some(PIPELINE_LIMIT)));
    let (result, elapsed) = timed(standalone);
    rows.push(("primary suite without secondary components", result, elapsed, None));

    let mut failures = 0;
    for (name, result, elapsed, limit) in rows {
        let over = limit.is_some_and(|l| elapsed >= l);
        let budget = limit.map(|l| format!(" / limit {:.0}s", l.as_secs_f64())).unwrap_or_default();
        let timing = format!("{:.3}s{budget}", elapsed.as_secs_f64());
        match result {
            Ok(detail) if !over => println!("PASS  {name}: {detail} ({timing})"),
            Ok(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}, over time limit ({timing})");
            }
            Err(reason) => {
                failures += 1;
                println!("FAIL  {name}: {reason} ({timing})");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
