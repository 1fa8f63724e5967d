//! Open datasheets: machine-readable documentation for open datasets.
//!
//! The crate covers the whole document life cycle:
//!
//! * [`model`]: the datasheet document and its canonical JSON form
//! * [`inference`]: structural metadata extracted from data files
//! * [`validation`]: invariant checks and responsible-AI completeness scores
//! * [`policy`]: declarative screening rules and accept/review/reject verdicts
//! * [`jsonld`]: export to schema.org `Dataset` JSON-LD

pub mod error;
pub mod inference;
pub mod json;
pub mod jsonld;
pub mod model;
pub mod policy;
pub mod validation;

pub use error::{InferenceError, JsonError, ModelError, PolicyError};
pub use model::{parse_datasheet, serialize_datasheet, Datasheet};
