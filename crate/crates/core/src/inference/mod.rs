//! Structural metadata extraction from raw data files: encoding, dialect,
//! field names and types, sample values, size and digest.

mod cell;
mod dialect;
mod encoding;
mod resource;
mod table;

pub use cell::{classify_cell, join_types, CellType, InferenceConfig, DEFAULT_MISSING_VALUES};
pub use dialect::{looks_like_header, read_records, sniff_dialect, sniff_header, Dialect, DELIMITERS, QUOTE_CHAR};
pub use encoding::{decode, detect_encoding, DetectedEncoding, TextEncoding};
pub use resource::{format_for_extension, infer_resource, media_type, sha256_digest, InferredResource};
pub use table::{infer_table_schema, InferredTable};
