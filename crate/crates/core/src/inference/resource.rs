use std::collections::HashMap;
use std::path::Path;

use std::fmt;

use serde::de::{Deserialize, Deserializer, MapAccess, Visitor};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::cell::{CellType, InferenceConfig};
use super::dialect::{read_records, sniff_dialect, sniff_header, Dialect};
use super::encoding::{decode, detect_encoding, looks_binary};
use super::table::{infer_table_schema, ColumnAccumulator};
use crate::error::InferenceError;
use crate::model::{slugify, FieldType, Resource, ResourceFormat, TableSchema};

#[derive(Debug, Clone, PartialEq)]
pub struct InferredResource {
    pub resource: Resource,
    /// Parsing parameters used for delimited formats.
    pub dialect: Option<Dialect>,
    pub warnings: Vec<String>,
}

pub fn format_for_extension(ext: &str) -> ResourceFormat {
    match ext.to_ascii_lowercase().as_str() {
        "csv" => ResourceFormat::Csv,
        "tsv" | "tab" => ResourceFormat::Tsv,
        "json" => ResourceFormat::Json,
        "jsonl" | "ndjson" => ResourceFormat::Jsonl,
        _ => ResourceFormat::Other,
    }
}

pub fn media_type(format: ResourceFormat) -> &'static str {
    match format {
        ResourceFormat::Csv => "text/csv",
        ResourceFormat::Tsv => "text/tab-separated-values",
        ResourceFormat::Json => "application/json",
        ResourceFormat::Jsonl => "application/jsonl",
        ResourceFormat::Other => "application/octet-stream",
    }
}

/// `sha256:<hex>` digest of raw bytes.
pub fn sha256_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(7 + 64);
    out.push_str("sha256:");
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Builds a resource record from a file's name and raw content.
pub fn infer_resource(
    file_name: &str,
    bytes: &[u8],
    cfg: &InferenceConfig,
) -> Result<InferredResource, InferenceError> {
    cfg.check()?;
    let size = bytes.len() as u64;
    if size > cfg.max_bytes {
        return Err(InferenceError::Oversize {
            size,
            limit: cfg.max_bytes,
        });
    }

    let path = Path::new(file_name);
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let format = path
        .extension()
        .map(|e| format_for_extension(&e.to_string_lossy()))
        .unwrap_or(ResourceFormat::Other);

    let detected = detect_encoding(bytes);
    let mut warnings: Vec<String> = detected.warning.iter().cloned().collect();
    let mut resource = Resource {
        name: slugify(&stem),
        path: file_name.to_string(),
        format,
        mediatype: Some(media_type(format).to_string()),
        encoding: Some(detected.name().to_string()),
        bytes: Some(size),
        hash: Some(sha256_digest(bytes)),
        ..Resource::default()
    };
    if format == ResourceFormat::Other {
        return Ok(InferredResource { resource, dialect: None, warnings });
    }

    let text = decode(bytes, &detected)?;
    if looks_binary(&text) {
        return Err(InferenceError::Undecodable("content contains binary control characters".into()));
    }

    let mut dialect = None;
    let schema = match format {
        ResourceFormat::Csv | ResourceFormat::Tsv => {
            let sniffed = if format == ResourceFormat::Tsv {
                sniff_header(&text, '\t', cfg)
            } else {
                sniff_dialect(&text, cfg)
            };
            sniffed.and_then(|d| {
                dialect = Some(d);
                let rows = read_records(&text, d.delimiter, None);
                let table = infer_table_schema(&rows, &d, cfg)?;
                warnings.extend(table.warnings);
                Ok(table.schema)
            })
            .map_err(|e| e.to_string())
        }
        ResourceFormat::Json => json_array_schema(&text, cfg),
        ResourceFormat::Jsonl => json_lines_schema(&text, cfg),
        ResourceFormat::Other => unreachable!(),
    };
    match schema {
        Ok(schema) => resource.schema = Some(schema),
        Err(reason) => warnings.push(format!("schema omitted: {reason}")),
    }
    Ok(InferredResource { resource, dialect, warnings })
}

/// A JSON object with its keys in document order.
struct OrderedObject(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for OrderedObject {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ObjectVisitor;

        impl<'de> Visitor<'de> for ObjectVisitor {
            type Value = OrderedObject;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON object")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<OrderedObject, A::Error> {
                let mut entries = Vec::new();
                while let Some(entry) = map.next_entry::<String, Value>()? {
                    entries.push(entry);
                }
                Ok(OrderedObject(entries))
            }
        }

        deserializer.deserialize_map(ObjectVisitor)
    }
}

fn json_array_schema(text: &str, cfg: &InferenceConfig) -> Result<TableSchema, String> {
    // Kind checks on a plain value first, for precise warnings.
    let value: Value = serde_json::from_str(text).map_err(|e| format!("not valid JSON: {e}"))?;
    let Value::Array(items) = value else {
        return Err("top-level JSON value is not an array of objects".into());
    };
    if let Some(i) = items.iter().position(|item| !item.is_object()) {
        return Err(format!("array element {i} is not an object"));
    }
    let objects: Vec<OrderedObject> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    object_schema(objects, cfg)
}

fn json_lines_schema(text: &str, cfg: &InferenceConfig) -> Result<TableSchema, String> {
    let objects = text
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| match serde_json::from_str::<Value>(line) {
            Ok(Value::Object(_)) => serde_json::from_str::<OrderedObject>(line).map_err(|e| e.to_string()),
            Ok(_) => Err(format!("line {} is not a JSON object", i + 1)),
            Err(e) => Err(format!("line {} is not valid JSON: {e}", i + 1)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    object_schema(objects, cfg)
}

struct JsonColumn {
    scalars: ColumnAccumulator,
    objects: bool,
    arrays: bool,
}

/// Fields are the union of keys in first-appearance order. Scalars are
/// stringified and run through the cell lattice; nested values make the
/// column `object` or `array`, or `any` when kinds are mixed.
fn object_schema(objects: Vec<OrderedObject>, cfg: &InferenceConfig) -> Result<TableSchema, String> {
    if objects.is_empty() {
        return Err("no records".into());
    }
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut columns: Vec<JsonColumn> = Vec::new();

    for OrderedObject(entries) in objects {
        for (key, value) in entries {
            let i = *index.entry(key.clone()).or_insert_with(|| {
                names.push(key);
                columns.push(JsonColumn {
                    scalars: ColumnAccumulator::new(cfg.max_sample_values),
                    objects: false,
                    arrays: false,
                });
                columns.len() - 1
            });
            let column = &mut columns[i];
            match value {
                Value::Null => {}
                Value::String(s) => column.scalars.push(&s, cfg),
                Value::Bool(b) => column.scalars.push(if b { "true" } else { "false" }, cfg),
                Value::Number(n) => column.scalars.push(&n.to_string(), cfg),
                nested @ Value::Object(_) => {
                    column.objects = true;
                    column.scalars.push_raw_sample(nested.to_string());
                }
                nested @ Value::Array(_) => {
                    column.arrays = true;
                    column.scalars.push_raw_sample(nested.to_string());
                }
            }
        }
    }
    if names.is_empty() {
        return Err("records have no keys".into());
    }

    let fields = names
        .into_iter()
        .zip(columns)
        .map(|(name, column)| {
            let has_scalars = column.scalars.cell_type != CellType::Missing;
            let nested_type = match (column.objects, column.arrays, has_scalars) {
                (true, false, false) => Some(FieldType::Object),
                (false, true, false) => Some(FieldType::Array),
                (false, false, _) => None,
                _ => Some(FieldType::Any),
            };
            let mut field = column.scalars.into_field(name);
            if let Some(t) = nested_type {
                field.field_type = t;
            }
            field
        })
        .collect();
    Ok(TableSchema {
        fields,
        missing_values: cfg.missing_values.clone(),
        ..TableSchema::default()
    })
}
