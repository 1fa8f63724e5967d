//! Export to a schema.org `Dataset` JSON-LD document.
//!
//! Responsible-AI sections have no schema.org counterpart and are embedded
//! verbatim under the `ods:` namespace.

use serde::Serialize;
use serde_json::Value;

use crate::model::{
    to_canonical_json, DataAccess, Datasheet, PrivacyEntry, Procedures, Role, UseCase, UseTerms,
};

pub const SCHEMA_ORG: &str = "https://schema.org/";
pub const ODS_NAMESPACE: &str = "https://microsoft.github.io/opendatasheets/ns#";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Context {
    #[serde(rename = "@vocab")]
    pub vocab: &'static str,
    pub ods: &'static str,
}

impl Default for Context {
    fn default() -> Self {
        Self {
            vocab: SCHEMA_ORG,
            ods: ODS_NAMESPACE,
        }
    }
}

/// A `Person` or `Organization`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agent {
    #[serde(rename = "@type")]
    pub kind: &'static str,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DataDownload {
    #[serde(rename = "@type")]
    pub kind: &'static str,
    pub name: String,
    pub content_url: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoding_format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub content_size: Option<u64>,
}

/// Key order is the serialization order; `@context`, `@type` and
/// `identifier` always come first.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JsonLdDocument {
    #[serde(rename = "@context")]
    pub context: Context,
    #[serde(rename = "@type")]
    pub kind: &'static str,
    pub identifier: String,
    pub name: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub date_created: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub keywords: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub license: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub creator: Vec<Agent>,
    pub distribution: Vec<DataDownload>,
    #[serde(rename = "ods:privacy")]
    pub privacy: Vec<PrivacyEntry>,
    #[serde(rename = "ods:useTerms", skip_serializing_if = "Option::is_none")]
    pub use_terms: Option<UseTerms>,
    #[serde(rename = "ods:dataAccess", skip_serializing_if = "Option::is_none")]
    pub data_access: Option<DataAccess>,
    #[serde(rename = "ods:procedures", skip_serializing_if = "Option::is_none")]
    pub procedures: Option<Procedures>,
    #[serde(rename = "ods:useCases")]
    pub use_cases: Vec<UseCase>,
}

impl JsonLdDocument {
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("JSON-LD documents serialize to JSON")
    }

    /// Canonical text, formatted like datasheet files.
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

fn non_empty(s: &Option<String>) -> Option<String> {
    s.as_ref().filter(|s| !s.is_empty()).cloned()
}

pub fn to_jsonld(d: &Datasheet) -> JsonLdDocument {
    let creator = d
        .contributors
        .iter()
        .filter(|c| matches!(c.role, Role::Author | Role::Publisher))
        .map(|c| Agent {
            kind: if non_empty(&c.organization).is_some() { "Organization" } else { "Person" },
            name: c.name.clone(),
            email: c.email.clone(),
            url: c.path.clone(),
        })
        .collect();
    let distribution = d
        .resources
        .iter()
        .map(|r| DataDownload {
            kind: "DataDownload",
            name: r.name.clone(),
            content_url: r.path.clone(),
            encoding_format: r.mediatype.clone(),
            content_size: r.bytes,
        })
        .collect();
    JsonLdDocument {
        context: Context::default(),
        kind: "Dataset",
        identifier: d.name.clone(),
        name: if d.title.trim().is_empty() { d.name.clone() } else { d.title.clone() },
        description: d.description.clone(),
        version: d.version.clone(),
        date_created: d.created.clone(),
        keywords: d.keywords.clone(),
        license: d.licenses.iter().filter_map(|l| non_empty(&l.path).or_else(|| non_empty(&l.name))).collect(),
        creator,
        distribution,
        privacy: d.privacy.clone(),
        use_terms: d.use_terms.clone(),
        data_access: d.data_access.clone(),
        procedures: d.procedures.clone(),
        use_cases: d.use_cases.clone(),
    }
}

/// Rebuilds the responsible-AI block from the `ods:` keys of an exported document.
pub fn extract_rai(doc: &Value) -> Value {
    let mut out = serde_json::Map::new();
    if let Value::Object(map) = doc {
        for (key, value) in map {
            if let Some(local) = key.strip_prefix("ods:") {
                out.insert(local.to_string(), value.clone());
            }
        }
    }
    Value::Object(out)
}
