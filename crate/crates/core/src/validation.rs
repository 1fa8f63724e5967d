//! Structural checks and responsible-AI completeness scoring.
//!
//! Broken invariants are errors. Missing responsible-AI content only produces
//! warnings: how much to document is left to the publisher, and a datasheet
//! with empty sections is still valid.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::JsonError;
use crate::json::{join, split_pointer, str_enum};
use crate::model::{
    is_iso_date, is_sha256_digest, is_slug, Contributor, Datasheet, UseCaseKind,
};

str_enum! {
    pub enum Severity {
        Error => "error",
        Warning => "warning",
        Info => "info",
    }
}

str_enum! {
    /// Registered issue codes.
    pub enum IssueCode {
        NameNotSlug => "name-not-slug",
        InvalidDate => "invalid-date",
        EmptyResources => "empty-resources",
        DuplicateResourceName => "duplicate-resource-name",
        ResourceNameNotSlug => "resource-name-not-slug",
        InvalidHash => "invalid-hash",
        LicenseMissingIdentity => "license-missing-identity",
        EmptyContributorName => "empty-contributor-name",
        EmptySourceTitle => "empty-source-title",
        EmptySchema => "empty-schema",
        DuplicateFieldName => "duplicate-field-name",
        TooManySampleValues => "too-many-sample-values",
        SampleIsMissingValue => "sample-is-missing-value",
        EmptySensitivityTypeName => "empty-sensitivity-type-name",
        EmptyUseTermsDescription => "empty-use-terms-description",
        AccessContradiction => "access-contradiction",
        EmptyProcedureDescription => "empty-procedure-description",
        StaticUpdateHasSchedule => "static-update-has-schedule",
        EmptyUseCaseTitle => "empty-use-case-title",
        EmptyRaiSection => "empty-rai-section",
        SectionIncomplete => "section-incomplete",
        MalformedJson => "malformed-json",
        DuplicateKey => "duplicate-key",
        MissingKey => "missing-key",
        WrongKind => "wrong-kind",
        InvalidEnum => "invalid-enum",
        UnknownKey => "unknown-key",
    }
}

impl IssueCode {
    pub fn severity(self) -> Severity {
        match self {
            IssueCode::EmptyRaiSection => Severity::Warning,
            IssueCode::SectionIncomplete => Severity::Info,
            _ => Severity::Error,
        }
    }
}

pub const MAX_SAMPLE_VALUES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub pointer: String,
    pub severity: Severity,
    pub code: IssueCode,
    pub message: String,
}

impl Issue {
    /// The single error issue describing why a document did not parse.
    pub fn from_json_error(e: &JsonError) -> Self {
        let code = match e {
            JsonError::Syntax { .. } => IssueCode::MalformedJson,
            JsonError::DuplicateKey { .. } => IssueCode::DuplicateKey,
            JsonError::MissingKey { .. } => IssueCode::MissingKey,
            JsonError::WrongKind { .. } => IssueCode::WrongKind,
            JsonError::InvalidEnum { .. } => IssueCode::InvalidEnum,
            JsonError::UnknownKey { .. } => IssueCode::UnknownKey,
        };
        Issue::new(e.pointer(), code, e.to_string())
    }

    pub fn new(pointer: impl Into<String>, code: IssueCode, message: impl Into<String>) -> Self {
        Self {
            pointer: pointer.into(),
            severity: code.severity(),
            code,
            message: message.into(),
        }
    }
}

str_enum! {
    /// Responsible-AI sections that receive a completeness score.
    pub enum Section {
        Privacy => "privacy",
        UseTerms => "useTerms",
        DataAccess => "dataAccess",
        Collection => "collection",
        Processing => "processing",
        Update => "update",
        UseCases => "useCases",
    }
}

impl Section {
    pub const ALL: [Section; 7] = [
        Section::Privacy,
        Section::UseTerms,
        Section::DataAccess,
        Section::Collection,
        Section::Processing,
        Section::Update,
        Section::UseCases,
    ];

    pub fn pointer(self) -> &'static str {
        match self {
            Section::Privacy => "/privacy",
            Section::UseTerms => "/useTerms",
            Section::DataAccess => "/dataAccess",
            Section::Collection => "/procedures/collection",
            Section::Processing => "/procedures/processing",
            Section::Update => "/procedures/update",
            Section::UseCases => "/useCases",
        }
    }

    fn index(self) -> usize {
        Section::ALL.iter().position(|s| *s == self).unwrap()
    }
}

/// Per-section completeness fractions, serialized as a map in section order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Completeness([f64; 7]);

impl Completeness {
    pub fn get(&self, section: Section) -> f64 {
        self.0[section.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Section, f64)> + '_ {
        Section::ALL.iter().map(|s| (*s, self.get(*s)))
    }

    pub fn overall(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }
}

impl Serialize for Completeness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (section, score) in self.iter() {
            map.serialize_entry(section.as_str(), &score)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub overall: f64,
    pub completeness: Completeness,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }
}

fn filled(s: &str) -> bool {
    !s.trim().is_empty()
}

fn filled_opt(s: &Option<String>) -> bool {
    s.as_deref().is_some_and(filled)
}

/// The recommended fields of one section and whether each is populated.
pub fn section_fields(d: &Datasheet, section: Section) -> Vec<(&'static str, bool)> {
    let procedures = d.procedures.as_ref();
    match section {
        Section::Privacy => {
            let p = &d.privacy;
            vec![
                ("sensitivity.description", p.iter().any(|e| filled(&e.sensitivity.description))),
                ("sensitivity.types", p.iter().any(|e| !e.sensitivity.types.is_empty())),
                ("confidentiality.description", p.iter().any(|e| filled(&e.confidentiality.description))),
                ("confidentiality.path", p.iter().any(|e| filled_opt(&e.confidentiality.path))),
            ]
        }
        Section::UseTerms => {
            let t = d.use_terms.as_ref();
            vec![
                ("description", t.is_some_and(|t| filled(&t.description))),
                ("restrictions", t.is_some_and(|t| !t.restrictions.is_empty())),
            ]
        }
        Section::DataAccess => {
            let a = d.data_access.as_ref();
            vec![
                ("description", a.is_some_and(|a| filled(&a.description))),
                ("anonymousAccess", a.is_some_and(|a| a.anonymous_access.is_some())),
                ("registrationRequired", a.is_some_and(|a| a.registration_required.is_some())),
            ]
        }
        Section::Collection => {
            let c = procedures.map(|p| p.collection.as_slice()).unwrap_or_default();
            vec![
                ("description", c.iter().any(|p| filled(&p.description))),
                ("methods", c.iter().any(|p| !p.methods.is_empty())),
                ("consent", c.iter().any(|p| !p.consent.is_empty())),
                ("contributors", c.iter().any(|p| !p.contributors.is_empty())),
            ]
        }
        Section::Processing => {
            let c = procedures.map(|p| p.processing.as_slice()).unwrap_or_default();
            vec![
                ("description", c.iter().any(|p| filled(&p.description))),
                ("methods", c.iter().any(|p| !p.methods.is_empty())),
                ("contributors", c.iter().any(|p| !p.contributors.is_empty())),
            ]
        }
        Section::Update => {
            let u = procedures.and_then(|p| p.update.as_ref());
            let is_updated = u.and_then(|u| u.is_updated);
            let mut fields = vec![("isUpdated", is_updated.is_some())];
            // Schedule fields only count for datasets that are actually updated.
            if let (Some(u), Some(true)) = (u, is_updated) {
                fields.push(("periodicity", filled_opt(&u.periodicity)));
                fields.push(("method", u.method.is_some()));
                fields.push(("versioning", filled_opt(&u.versioning)));
            }
            fields
        }
        Section::UseCases => vec![
            ("permitted", d.use_cases.iter().any(|u| u.kind == UseCaseKind::Permitted)),
            ("prohibited", d.use_cases.iter().any(|u| u.kind == UseCaseKind::Prohibited)),
        ],
    }
}

pub fn completeness_score(d: &Datasheet) -> Completeness {
    let mut scores = [0.0; 7];
    for (slot, section) in scores.iter_mut().zip(Section::ALL) {
        let fields = section_fields(d, section);
        let populated = fields.iter().filter(|(_, ok)| *ok).count();
        *slot = populated as f64 / fields.len() as f64;
    }
    Completeness(scores)
}

/// Orders pointers token by token, numeric tokens numerically.
fn compare_pointers(a: &str, b: &str) -> Ordering {
    let tokens = |p: &str| split_pointer(p).unwrap_or_else(|| vec![p.to_string()]);
    let (ta, tb) = (tokens(a), tokens(b));
    for (x, y) in ta.iter().zip(&tb) {
        let ord = match (x.parse::<u64>(), y.parse::<u64>()) {
            (Ok(m), Ok(n)) => m.cmp(&n),
            _ => x.cmp(y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ta.len().cmp(&tb.len())
}

struct Checker {
    issues: Vec<Issue>,
}

impl Checker {
    fn push(&mut self, pointer: impl Into<String>, code: IssueCode, message: impl Into<String>) {
        self.issues.push(Issue::new(pointer, code, message));
    }

    fn contributors(&mut self, base: &str, list: &[Contributor]) {
        for (i, c) in list.iter().enumerate() {
            if !filled(&c.name) {
                self.push(join(&join(base, i), "name"), IssueCode::EmptyContributorName, "contributor name is empty");
            }
        }
    }

    fn package(&mut self, d: &Datasheet) {
        if !is_slug(&d.name) {
            self.push(
                "/name",
                IssueCode::NameNotSlug,
                format!("\"{}\" is not a lowercase slug (letters, digits, '.', '_', '-')", d.name),
            );
        }
        if let Some(created) = &d.created {
            if !is_iso_date(created) {
                self.push("/created", IssueCode::InvalidDate, format!("\"{created}\" is not a YYYY-MM-DD calendar date"));
            }
        }
        for (i, l) in d.licenses.iter().enumerate() {
            if !filled_opt(&l.name) && !filled_opt(&l.path) {
                self.push(join("/licenses", i), IssueCode::LicenseMissingIdentity, "license needs a name or a path");
            }
        }
        self.contributors("/contributors", &d.contributors);
        for (i, s) in d.sources.iter().enumerate() {
            if !filled(&s.title) {
                self.push(join(&join("/sources", i), "title"), IssueCode::EmptySourceTitle, "source title is empty");
            }
        }
    }

    fn resources(&mut self, d: &Datasheet) {
        if d.resources.is_empty() {
            self.push("/resources", IssueCode::EmptyResources, "a datasheet needs at least one resource");
        }
        let mut names = HashSet::new();
        for (i, r) in d.resources.iter().enumerate() {
            let base = join("/resources", i);
            if !is_slug(&r.name) {
                self.push(join(&base, "name"), IssueCode::ResourceNameNotSlug, format!("resource name \"{}\" is not a lowercase slug", r.name));
            }
            if !names.insert(r.name.as_str()) {
                self.push(join(&base, "name"), IssueCode::DuplicateResourceName, format!("resource name \"{}\" is already used", r.name));
            }
            if let Some(hash) = &r.hash {
                if !is_sha256_digest(hash) {
                    self.push(join(&base, "hash"), IssueCode::InvalidHash, "hash must look like sha256:<64 lowercase hex digits>");
                }
            }
            let Some(schema) = &r.schema else { continue };
            let schema_ptr = join(&base, "schema");
            if schema.fields.is_empty() {
                self.push(join(&schema_ptr, "fields"), IssueCode::EmptySchema, "schema has no fields");
            }
            let mut field_names = HashSet::new();
            for (j, f) in schema.fields.iter().enumerate() {
                let field_ptr = join(&join(&schema_ptr, "fields"), j);
                if !field_names.insert(f.name.as_str()) {
                    self.push(join(&field_ptr, "name"), IssueCode::DuplicateFieldName, format!("field name \"{}\" is already used", f.name));
                }
                if f.sample_values.len() > MAX_SAMPLE_VALUES {
                    self.push(
                        join(&field_ptr, "sampleValues"),
                        IssueCode::TooManySampleValues,
                        format!("{} sample values, at most {MAX_SAMPLE_VALUES} allowed", f.sample_values.len()),
                    );
                }
                for (k, v) in f.sample_values.iter().enumerate() {
                    if schema.missing_values.contains(v) {
                        self.push(
                            join(&join(&field_ptr, "sampleValues"), k),
                            IssueCode::SampleIsMissingValue,
                            format!("sample value \"{v}\" is declared as a missing value"),
                        );
                    }
                }
            }
        }
    }

    fn rai(&mut self, d: &Datasheet) {
        for (i, p) in d.privacy.iter().enumerate() {
            for (j, t) in p.sensitivity.types.iter().enumerate() {
                if !filled(&t.name) {
                    let ptr = format!("/privacy/{i}/sensitivity/types/{j}/name");
                    self.push(ptr, IssueCode::EmptySensitivityTypeName, "sensitivity type name is empty");
                }
            }
        }
        if let Some(t) = &d.use_terms {
            if !filled(&t.description) {
                self.push("/useTerms/description", IssueCode::EmptyUseTermsDescription, "use terms need a description");
            }
        }
        if let Some(a) = &d.data_access {
            if a.anonymous_access == Some(true) && a.registration_required == Some(true) {
                self.push(
                    "/dataAccess",
                    IssueCode::AccessContradiction,
                    "data cannot be both anonymously accessible and registration-only",
                );
            }
        }
        if let Some(p) = &d.procedures {
            for (i, c) in p.collection.iter().enumerate() {
                let base = join("/procedures/collection", i);
                if !filled(&c.description) {
                    self.push(join(&base, "description"), IssueCode::EmptyProcedureDescription, "collection procedure needs a description");
                }
                self.contributors(&join(&base, "contributors"), &c.contributors);
            }
            for (i, c) in p.processing.iter().enumerate() {
                let base = join("/procedures/processing", i);
                if !filled(&c.description) {
                    self.push(join(&base, "description"), IssueCode::EmptyProcedureDescription, "processing procedure needs a description");
                }
                self.contributors(&join(&base, "contributors"), &c.contributors);
            }
            if let Some(u) = &p.update {
                if u.is_updated == Some(false) && (u.periodicity.is_some() || u.method.is_some() || u.versioning.is_some()) {
                    self.push(
                        "/procedures/update",
                        IssueCode::StaticUpdateHasSchedule,
                        "a static dataset (isUpdated false) cannot declare periodicity, method or versioning",
                    );
                }
                self.contributors("/procedures/update/contributors", &u.contributors);
            }
        }
        for (i, u) in d.use_cases.iter().enumerate() {
            if !filled(&u.title) {
                self.push(join(&join("/useCases", i), "title"), IssueCode::EmptyUseCaseTitle, "use case title is empty");
            }
        }
    }

    fn coverage(&mut self, d: &Datasheet) {
        for section in Section::ALL {
            let fields = section_fields(d, section);
            let missing: Vec<&str> = fields.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
            if missing.len() == fields.len() {
                self.push(section.pointer(), IssueCode::EmptyRaiSection, format!("{section} is not documented"));
            } else if !missing.is_empty() {
                self.push(
                    section.pointer(),
                    IssueCode::SectionIncomplete,
                    format!("{section} is missing: {}", missing.join(", ")),
                );
            }
        }
    }
}

pub fn validate_datasheet(d: &Datasheet) -> ValidationReport {
    let mut checker = Checker { issues: Vec::new() };
    checker.package(d);
    checker.resources(d);
    checker.rai(d);
    checker.coverage(d);

    let mut issues = checker.issues;
    issues.sort_by(|a, b| {
        compare_pointers(&a.pointer, &b.pointer).then_with(|| a.code.as_str().cmp(b.code.as_str()))
    });
    let completeness = completeness_score(d);
    ValidationReport {
        valid: !issues.iter().any(|i| i.severity == Severity::Error),
        overall: completeness.overall(),
        completeness,
        issues,
    }
}
