//! The datasheet document model and its canonical JSON form.
//!
//! Foundational metadata follows the Datapackage layout (name, title,
//! licenses, sources, resources). The responsible-AI block (`privacy`,
//! `useTerms`, `dataAccess`, `procedures`, `useCases`) sits next to it at the
//! top level of the same document.
//!
//! Every record keeps the keys it does not know in an `extra` map, emitted
//! after its known keys in sorted order. Parsing only rejects values of the
//! wrong JSON kind; content invariants (slug names, unique resource names,
//! ...) are reported by [`crate::validation`].

mod ops;

use serde::Serialize;
use serde_json::Value;

use crate::error::{JsonError, ModelError};
use crate::json::{self, str_enum, Extra, FromJson, Record};

pub use ops::{
    is_iso_date, is_sha256_digest, is_slug, merge_inferred, new_template, new_template_on,
    slugify, TEMPLATE_VERSION,
};

str_enum! {
    /// Contributor roles, as in Datapackage.
    pub enum Role {
        Author => "author",
        Maintainer => "maintainer",
        Publisher => "publisher",
        Wrangler => "wrangler",
        Contributor => "contributor",
    }
}

impl Default for Role {
    fn default() -> Self {
        Role::Contributor
    }
}

str_enum! {
    pub enum ResourceFormat {
        Csv => "csv",
        Tsv => "tsv",
        Json => "json",
        Jsonl => "jsonl",
        Other => "other",
    }
}

impl Default for ResourceFormat {
    fn default() -> Self {
        ResourceFormat::Other
    }
}

str_enum! {
    pub enum FieldType {
        String => "string",
        Integer => "integer",
        Number => "number",
        Boolean => "boolean",
        Date => "date",
        Datetime => "datetime",
        Time => "time",
        Object => "object",
        Array => "array",
        Any => "any",
    }
}

impl Default for FieldType {
    fn default() -> Self {
        FieldType::Any
    }
}

str_enum! {
    pub enum UpdateMethod {
        Incremental => "incremental",
        FullRefresh => "full-refresh",
        Other => "other",
    }
}

str_enum! {
    pub enum UseCaseKind {
        Permitted => "permitted",
        Prohibited => "prohibited",
    }
}

/// Root document.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Datasheet {
    pub name: String,
    pub title: String,
    pub description: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homepage: Option<String>,
    pub keywords: Vec<String>,
    pub licenses: Vec<License>,
    pub contributors: Vec<Contributor>,
    pub sources: Vec<Source>,
    pub resources: Vec<Resource>,
    pub privacy: Vec<PrivacyEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub use_terms: Option<UseTerms>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_access: Option<DataAccess>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub procedures: Option<Procedures>,
    pub use_cases: Vec<UseCase>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct License {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Contributor {
    pub name: String,
    pub role: Role,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub organization: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub email: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Source {
    pub title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

/// One data file of the package.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Resource {
    pub name: String,
    pub path: String,
    pub format: ResourceFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mediatype: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoding: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bytes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<TableSchema>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TableSchema {
    pub fields: Vec<Field>,
    pub missing_values: Vec<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Field {
    pub name: String,
    #[serde(rename = "type")]
    pub field_type: FieldType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub sample_values: Vec<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PrivacyEntry {
    pub sensitivity: Sensitivity,
    pub confidentiality: Confidentiality,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Sensitivity {
    pub description: String,
    pub types: Vec<SensitivityType>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SensitivityType {
    pub name: String,
    pub description: String,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Confidentiality {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub description: String,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct UseTerms {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub restrictions: Vec<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

/// How the data can be obtained. The two flags are optional so that an
/// unanswered question stays distinguishable from an explicit `false`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DataAccess {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anonymous_access: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub registration_required: Option<bool>,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Procedures {
    pub collection: Vec<CollectionProcedure>,
    pub processing: Vec<ProcessingProcedure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub update: Option<UpdateProcedure>,
    #[serde(flatten)]
    pub extra: Extra,
}

/// A collection or processing method (survey, focus group, anonymization, ...).
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Method {
    pub name: String,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Consent {
    pub title: String,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct CollectionProcedure {
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub contributors: Vec<Contributor>,
    pub methods: Vec<Method>,
    pub consent: Vec<Consent>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ProcessingProcedure {
    pub description: String,
    pub methods: Vec<Method>,
    pub contributors: Vec<Contributor>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UpdateProcedure {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_updated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodicity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<UpdateMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method_description: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub versioning: Option<String>,
    pub contributors: Vec<Contributor>,
    #[serde(flatten)]
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UseCase {
    pub title: String,
    pub description: String,
    pub kind: UseCaseKind,
    #[serde(flatten)]
    pub extra: Extra,
}

/// Borrowed view of the responsible-AI keys of a datasheet, serialized with
/// the same key names and order they have in the full document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RaiBlock<'a> {
    pub privacy: &'a [PrivacyEntry],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub use_terms: Option<&'a UseTerms>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_access: Option<&'a DataAccess>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub procedures: Option<&'a Procedures>,
    pub use_cases: &'a [UseCase],
}

impl Datasheet {
    pub fn from_value(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            name: r.required("name")?,
            title: r.or_default("title")?,
            description: r.or_default("description")?,
            version: r.or_default("version")?,
            created: r.optional("created")?,
            homepage: r.optional("homepage")?,
            keywords: r.or_default("keywords")?,
            licenses: r.or_default("licenses")?,
            contributors: r.or_default("contributors")?,
            sources: r.or_default("sources")?,
            resources: r.or_default("resources")?,
            privacy: r.or_default("privacy")?,
            use_terms: r.optional("useTerms")?,
            data_access: r.optional("dataAccess")?,
            procedures: r.optional("procedures")?,
            use_cases: r.or_default("useCases")?,
            extra: r.finish(),
        })
    }

    pub fn rai_block(&self) -> RaiBlock<'_> {
        RaiBlock {
            privacy: &self.privacy,
            use_terms: self.use_terms.as_ref(),
            data_access: self.data_access.as_ref(),
            procedures: self.procedures.as_ref(),
            use_cases: &self.use_cases,
        }
    }

    pub fn resource(&self, name: &str) -> Option<&Resource> {
        self.resources.iter().find(|r| r.name == name)
    }
}

impl FromJson for Datasheet {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        Self::from_value(value, pointer)
    }
}

impl FromJson for License {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            name: r.optional("name")?,
            title: r.optional("title")?,
            path: r.optional("path")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Contributor {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            name: r.or_default("name")?,
            role: r.or_default("role")?,
            organization: r.optional("organization")?,
            email: r.optional("email")?,
            path: r.optional("path")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Source {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            title: r.or_default("title")?,
            path: r.optional("path")?,
            description: r.optional("description")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Resource {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            name: r.or_default("name")?,
            path: r.or_default("path")?,
            format: r.or_default("format")?,
            mediatype: r.optional("mediatype")?,
            encoding: r.optional("encoding")?,
            bytes: r.optional("bytes")?,
            hash: r.optional("hash")?,
            schema: r.optional("schema")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for TableSchema {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            fields: r.or_default("fields")?,
            missing_values: r.or_default("missingValues")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Field {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            name: r.or_default("name")?,
            field_type: r.or_default("type")?,
            description: r.optional("description")?,
            sample_values: r.or_default("sampleValues")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for PrivacyEntry {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            sensitivity: r.or_default("sensitivity")?,
            confidentiality: r.or_default("confidentiality")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Sensitivity {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            description: r.or_default("description")?,
            types: r.or_default("types")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for SensitivityType {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            name: r.or_default("name")?,
            description: r.or_default("description")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Confidentiality {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            path: r.optional("path")?,
            description: r.or_default("description")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for UseTerms {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            description: r.or_default("description")?,
            path: r.optional("path")?,
            restrictions: r.or_default("restrictions")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for DataAccess {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            anonymous_access: r.optional("anonymousAccess")?,
            registration_required: r.optional("registrationRequired")?,
            description: r.or_default("description")?,
            path: r.optional("path")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Procedures {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            collection: r.or_default("collection")?,
            processing: r.or_default("processing")?,
            update: r.optional("update")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Method {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            name: r.or_default("name")?,
            description: r.or_default("description")?,
            path: r.optional("path")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for Consent {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            title: r.or_default("title")?,
            description: r.or_default("description")?,
            path: r.optional("path")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for CollectionProcedure {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            description: r.or_default("description")?,
            path: r.optional("path")?,
            contributors: r.or_default("contributors")?,
            methods: r.or_default("methods")?,
            consent: r.or_default("consent")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for ProcessingProcedure {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            description: r.or_default("description")?,
            methods: r.or_default("methods")?,
            contributors: r.or_default("contributors")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for UpdateProcedure {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            is_updated: r.optional("isUpdated")?,
            periodicity: r.optional("periodicity")?,
            method: r.optional("method")?,
            method_description: r.optional("methodDescription")?,
            versioning: r.optional("versioning")?,
            contributors: r.or_default("contributors")?,
            extra: r.finish(),
        })
    }
}

impl FromJson for UseCase {
    fn from_json(value: Value, pointer: &str) -> Result<Self, JsonError> {
        let mut r = Record::new(value, pointer)?;
        Ok(Self {
            title: r.or_default("title")?,
            description: r.or_default("description")?,
            kind: r.required("kind")?,
            extra: r.finish(),
        })
    }
}

/// Reads a datasheet from JSON text.
pub fn parse_datasheet(text: &str) -> Result<Datasheet, ModelError> {
    let value = json::parse_strict(text)?;
    Ok(Datasheet::from_value(value, "")?)
}

/// Canonical text of any model value: two-space indent, LF, trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("model values always serialize");
    out.push('\n');
    out
}

/// Canonical serialization of a datasheet.
pub fn serialize_datasheet(d: &Datasheet) -> String {
    to_canonical_json(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_missing_name() {
        let err = parse_datasheet("{}").unwrap_err();
        assert_eq!(err.to_string(), "required key \"name\" missing at pointer \"\"");
    }

    #[test]
    fn wrong_kind_cites_pointer() {
        let err = parse_datasheet(r#"{"name": "x", "resources": [{"name": 3}]}"#).unwrap_err();
        match err {
            ModelError::Json(JsonError::WrongKind { pointer, expected, found }) => {
                assert_eq!(pointer, "/resources/0/name");
                assert_eq!(expected, "string");
                assert_eq!(found, "number");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_bytes_rejected() {
        let err = parse_datasheet(r#"{"name": "x", "resources": [{"bytes": -1}]}"#).unwrap_err();
        assert!(err.to_string().contains("/resources/0/bytes"));
    }

    #[test]
    fn enum_outside_closed_set_rejected() {
        let err = parse_datasheet(r#"{"name": "x", "contributors": [{"name": "a", "role": "boss"}]}"#)
            .unwrap_err();
        assert!(matches!(
            err,
            ModelError::Json(JsonError::InvalidEnum { ref pointer, .. }) if pointer == "/contributors/0/role"
        ));
    }

    #[test]
    fn null_is_not_an_absent_optional() {
        assert!(parse_datasheet(r#"{"name": "x", "homepage": null}"#).is_err());
    }

    #[test]
    fn duplicate_top_level_key_rejected() {
        let err = parse_datasheet(r#"{"name": "x", "name": "y"}"#).unwrap_err();
        assert!(matches!(err, ModelError::Json(JsonError::DuplicateKey { .. })));
    }

    #[test]
    fn unknown_keys_survive_reserialization() {
        let text = r#"{"zeta": 1, "name": "x", "alpha": {"q": [1, 2]},
            "resources": [{"name": "r", "path": "r.csv", "format": "csv", "custom": true}]}"#;
        let d = parse_datasheet(text).unwrap();
        assert_eq!(d.extra.len(), 2);
        let out = serialize_datasheet(&d);
        for key in ["\"zeta\"", "\"alpha\"", "\"q\"", "\"custom\""] {
            assert!(out.contains(key), "{key} lost");
        }
        assert_eq!(parse_datasheet(&out).unwrap(), d);
    }

    #[test]
    fn known_keys_come_first_in_schema_order() {
        let d = parse_datasheet(
            r#"{"useCases": [], "aaa": 1, "title": "T", "name": "n", "privacy": []}"#,
        )
        .unwrap();
        let out = serialize_datasheet(&d);
        let pos = |k: &str| out.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("name") < pos("title"));
        assert!(pos("title") < pos("privacy"));
        assert!(pos("privacy") < pos("useCases"));
        assert!(pos("useCases") < pos("aaa"));
        assert!(out.ends_with("}\n"));
        assert!(!out.contains('\r'));
    }

    #[test]
    fn extra_insertion_order_does_not_matter() {
        let mut a = Datasheet { name: "n".into(), ..Default::default() };
        let mut b = a.clone();
        a.extra.insert("b".into(), Value::from(1));
        a.extra.insert("a".into(), serde_json::json!({"y": 1, "x": 2}));
        b.extra.insert("a".into(), serde_json::json!({"x": 2, "y": 1}));
        b.extra.insert("b".into(), Value::from(1));
        assert_eq!(serialize_datasheet(&a), serialize_datasheet(&b));
    }

    #[test]
    fn rai_block_uses_document_key_names() {
        let d = parse_datasheet(r#"{"name": "n", "dataAccess": {"description": "d"}}"#).unwrap();
        let block = serde_json::to_value(d.rai_block()).unwrap();
        assert_eq!(
            block,
            serde_json::json!({"privacy": [], "dataAccess": {"description": "d"}, "useCases": []})
        );
    }
}
