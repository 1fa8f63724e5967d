use std::collections::HashSet;

use chrono::NaiveDate;

use super::{Datasheet, Field, Procedures, Resource, TableSchema};
use crate::error::ModelError;

pub const TEMPLATE_VERSION: &str = "0.1.0";

/// `^[a-z0-9]([a-z0-9._-]*[a-z0-9])?$`
pub fn is_slug(s: &str) -> bool {
    let bytes = s.as_bytes();
    let edge = |b: &u8| b.is_ascii_lowercase() || b.is_ascii_digit();
    match (bytes.first(), bytes.last()) {
        (Some(first), Some(last)) => {
            edge(first)
                && edge(last)
                && bytes
                    .iter()
                    .all(|b| edge(b) || matches!(b, b'.' | b'_' | b'-'))
        }
        _ => false,
    }
}

/// Lowercases and replaces every character that cannot appear in a slug with
/// `-`, then trims separators from both ends. Falls back to `"resource"`.
pub fn slugify(s: &str) -> String {
    let replaced: String = s
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| match c {
            'a'..='z' | '0'..='9' | '.' | '_' | '-' => c,
            _ => '-',
        })
        .collect();
    let trimmed = replaced.trim_matches(|c: char| !c.is_ascii_alphanumeric());
    if trimmed.is_empty() {
        "resource".to_string()
    } else {
        trimmed.to_string()
    }
}

/// Calendar-valid `YYYY-MM-DD`.
pub fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter()
            .enumerate()
            .all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit())
        && NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
}

/// `^sha256:[0-9a-f]{64}$`
pub fn is_sha256_digest(s: &str) -> bool {
    s.strip_prefix("sha256:").is_some_and(|hex| {
        hex.len() == 64 && hex.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
    })
}

/// A draft datasheet dated today (UTC).
pub fn new_template(name: &str, title: &str) -> Result<Datasheet, ModelError> {
    new_template_on(name, title, chrono::Utc::now().date_naive())
}

/// A draft datasheet: no resources, every list-valued responsible-AI section
/// present and empty. `useTerms` and `dataAccess` are left out because an
/// empty record of either is not meaningful.
pub fn new_template_on(name: &str, title: &str, date: NaiveDate) -> Result<Datasheet, ModelError> {
    if !is_slug(name) {
        return Err(ModelError::InvalidSlug(name.to_string()));
    }
    Ok(Datasheet {
        name: name.to_string(),
        title: title.to_string(),
        version: TEMPLATE_VERSION.to_string(),
        created: Some(date.format("%Y-%m-%d").to_string()),
        procedures: Some(Procedures::default()),
        ..Datasheet::default()
    })
}

/// Folds freshly inferred resources into a datasheet.
///
/// A resource whose name already exists takes the inferred structural
/// metadata, but keeps its own unknown keys, and each field keeps its
/// human-written description and unknown keys. New names are appended in the
/// order given.
pub fn merge_inferred(d: &Datasheet, inferred: &[Resource]) -> Result<Datasheet, ModelError> {
    let mut seen = HashSet::new();
    for r in inferred {
        if !is_slug(&r.name) {
            return Err(ModelError::InvalidSlug(r.name.clone()));
        }
        if !seen.insert(r.name.as_str()) {
            return Err(ModelError::DuplicateResource(r.name.clone()));
        }
    }

    let mut out = d.clone();
    for fresh in inferred {
        match out.resources.iter_mut().find(|r| r.name == fresh.name) {
            Some(existing) => *existing = merge_resource(existing, fresh),
            None => out.resources.push(fresh.clone()),
        }
    }
    Ok(out)
}

fn merge_resource(existing: &Resource, fresh: &Resource) -> Resource {
    let mut merged = fresh.clone();
    let mut extra = existing.extra.clone();
    for (k, v) in &fresh.extra {
        extra.entry(k.clone()).or_insert_with(|| v.clone());
    }
    merged.extra = extra;
    merged.schema = match (&existing.schema, &fresh.schema) {
        (Some(old), Some(new)) => Some(merge_schema(old, new)),
        (_, new) => new.clone(),
    };
    merged
}

fn merge_schema(old: &TableSchema, new: &TableSchema) -> TableSchema {
    let fields = new
        .fields
        .iter()
        .map(|f| match old.fields.iter().find(|o| o.name == f.name) {
            Some(o) => Field {
                description: o.description.clone().or_else(|| f.description.clone()),
                extra: o.extra.clone(),
                ..f.clone()
            },
            None => f.clone(),
        })
        .collect();
    let mut extra = old.extra.clone();
    extra.extend(new.extra.iter().map(|(k, v)| (k.clone(), v.clone())));
    TableSchema {
        fields,
        missing_values: new.missing_values.clone(),
        extra,
    }
}
