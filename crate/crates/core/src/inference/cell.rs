//! Cell classification and the column type lattice.

use crate::error::InferenceError;
use crate::model::{is_iso_date, FieldType};

pub const DEFAULT_MISSING_VALUES: [&str; 7] = ["", "NA", "N/A", "n/a", "null", "NULL", "-"];

/// Knobs for schema inference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceConfig {
    pub max_sample_values: usize,
    pub sniff_lines: usize,
    pub missing_values: Vec<String>,
    pub max_bytes: u64,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        Self {
            max_sample_values: 5,
            sniff_lines: 64,
            missing_values: DEFAULT_MISSING_VALUES.iter().map(|s| s.to_string()).collect(),
            max_bytes: 100 * 1024 * 1024,
        }
    }
}

impl InferenceConfig {
    pub fn check(&self) -> Result<(), InferenceError> {
        if self.max_sample_values < 1 {
            return Err(InferenceError::InvalidConfig("maxSampleValues must be at least 1".into()));
        }
        if self.sniff_lines < 2 {
            return Err(InferenceError::InvalidConfig("sniffLines must be at least 2".into()));
        }
        Ok(())
    }

    pub fn is_missing(&self, cell: &str) -> bool {
        let t = cell.trim();
        self.missing_values.iter().any(|m| m == t)
    }
}

/// Type of a single cell. `Missing` never reaches a schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellType {
    Missing,
    Boolean,
    Integer,
    Number,
    Date,
    Datetime,
    Time,
    String,
}

impl CellType {
    pub const ALL: [CellType; 8] = [
        CellType::Missing,
        CellType::Boolean,
        CellType::Integer,
        CellType::Number,
        CellType::Date,
        CellType::Datetime,
        CellType::Time,
        CellType::String,
    ];

    /// Schema type of a column whose cells fold to `self`.
    pub fn field_type(self) -> FieldType {
        match self {
            CellType::Missing => FieldType::Any,
            CellType::Boolean => FieldType::Boolean,
            CellType::Integer => FieldType::Integer,
            CellType::Number => FieldType::Number,
            CellType::Date => FieldType::Date,
            CellType::Datetime => FieldType::Datetime,
            CellType::Time => FieldType::Time,
            CellType::String => FieldType::String,
        }
    }
}

/// Least upper bound in the column lattice: `Missing` is the bottom,
/// integers widen to numbers, every other disagreement becomes `String`.
pub fn join_types(a: CellType, b: CellType) -> CellType {
    use CellType::*;
    match (a, b) {
        _ if a == b => a,
        (Missing, t) | (t, Missing) => t,
        (Integer, Number) | (Number, Integer) => Number,
        _ => String,
    }
}

pub fn classify_cell(cell: &str, cfg: &InferenceConfig) -> CellType {
    let t = cell.trim();
    if cfg.missing_values.iter().any(|m| m == t) {
        CellType::Missing
    } else if t.eq_ignore_ascii_case("true") || t.eq_ignore_ascii_case("false") {
        CellType::Boolean
    } else if is_integer(t) {
        CellType::Integer
    } else if is_number(t) {
        CellType::Number
    } else if is_iso_date(t) {
        CellType::Date
    } else if is_rfc3339_datetime(t) {
        CellType::Datetime
    } else if is_time(t) {
        CellType::Time
    } else {
        CellType::String
    }
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn is_integer(s: &str) -> bool {
    let digits = strip_sign(s);
    if !all_digits(digits) {
        return false;
    }
    !digits.starts_with('0') || s == "0" || s == "-0"
}

/// Decimal point and/or exponent required; plain digit strings are integers.
fn is_number(s: &str) -> bool {
    let body = strip_sign(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let mantissa_ok = match mantissa.split_once('.') {
        Some((int, frac)) => {
            (int.is_empty() || all_digits(int))
                && (frac.is_empty() || all_digits(frac))
                && !(int.is_empty() && frac.is_empty())
        }
        None => all_digits(mantissa) && exponent.is_some(),
    };
    let exponent_ok = exponent.map_or(true, |e| all_digits(strip_sign(e)));
    mantissa_ok && exponent_ok
}

fn two_digits(s: &str, max: u32) -> bool {
    s.len() == 2 && all_digits(s) && s.parse::<u32>().is_ok_and(|v| v <= max)
}

fn is_hms(s: &str) -> bool {
    let parts: Vec<&str> = s.split(':').collect();
    parts.len() == 3 && two_digits(parts[0], 23) && two_digits(parts[1], 59) && two_digits(parts[2], 59)
}

/// `HH:MM` or `HH:MM:SS`.
fn is_time(s: &str) -> bool {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [h, m] => two_digits(h, 23) && two_digits(m, 59),
        [h, m, sec] => two_digits(h, 23) && two_digits(m, 59) && two_digits(sec, 59),
        _ => false,
    }
}

/// RFC 3339 `date-time`: full date, `T` (or `t`, or a space), time with
/// optional fraction, and a mandatory `Z` or `±HH:MM` offset.
fn is_rfc3339_datetime(s: &str) -> bool {
    if s.len() < 20 || !s.is_char_boundary(10) || !s.is_char_boundary(11) {
        return false;
    }
    let (date, rest) = s.split_at(10);
    if !is_iso_date(date) || !matches!(rest.as_bytes()[0], b'T' | b't' | b' ') {
        return false;
    }
    let rest = &rest[1..];
    let (time, offset) = if let Some(stripped) = rest.strip_suffix(['Z', 'z']) {
        (stripped, None)
    } else if rest.len() > 6 && rest.is_char_boundary(rest.len() - 6) {
        let (time, offset) = rest.split_at(rest.len() - 6);
        (time, Some(offset))
    } else {
        return false;
    };
    if let Some(offset) = offset {
        let (sign, hm) = offset.split_at(1);
        if !matches!(sign, "+" | "-") {
            return false;
        }
        match hm.split_once(':') {
            Some((h, m)) if two_digits(h, 23) && two_digits(m, 59) => {}
            _ => return false,
        }
    }
    let (hms, frac) = match time.split_once('.') {
        Some((hms, frac)) => (hms, Some(frac)),
        None => (time, None),
    };
    is_hms(hms) && frac.map_or(true, all_digits)
}
