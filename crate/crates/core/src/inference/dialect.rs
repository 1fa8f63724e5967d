//! Delimiter and header detection for delimited text.

use std::collections::{BTreeMap, HashSet};

use super::cell::{classify_cell, CellType, InferenceConfig};
use crate::error::InferenceError;

/// Candidate delimiters in tie-break order.
pub const DELIMITERS: [char; 4] = [',', ';', '\t', '|'];
pub const QUOTE_CHAR: char = '"';

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dialect {
    pub delimiter: char,
    pub quote_char: char,
    pub has_header: bool,
}

impl Dialect {
    pub fn new(delimiter: char, has_header: bool) -> Self {
        Self {
            delimiter,
            quote_char: QUOTE_CHAR,
            has_header,
        }
    }
}

/// Splits `text` into records, honouring `"` quoting. Blank lines are
/// skipped. At most `limit` records are returned.
pub fn read_records(text: &str, delimiter: char, limit: Option<usize>) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter as u8)
        .quote(QUOTE_CHAR as u8)
        .from_reader(text.as_bytes());
    let records = reader
        .records()
        .map_while(Result::ok)
        .map(|r| r.iter().map(str::to_owned).collect());
    match limit {
        Some(n) => records.take(n).collect(),
        None => records.collect(),
    }
}

struct Score {
    consistent: usize,
    rows: usize,
    modal_columns: usize,
}

impl Score {
    /// Fraction comparison without floating point.
    fn beats(&self, other: &Score) -> bool {
        let lhs = self.consistent * other.rows;
        let rhs = other.consistent * self.rows;
        lhs > rhs || (lhs == rhs && self.modal_columns > other.modal_columns)
    }
}

fn score(rows: &[Vec<String>]) -> Score {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for row in rows {
        *counts.entry(row.len()).or_default() += 1;
    }
    // Highest frequency, larger column count on ties.
    let (modal_columns, consistent) = counts
        .into_iter()
        .max_by_key(|&(cols, freq)| (freq, cols))
        .unwrap_or((0, 0));
    Score {
        consistent,
        rows: rows.len(),
        modal_columns,
    }
}

/// True when every cell of `row` is a string and no two cells are equal.
pub fn looks_like_header(row: &[String], cfg: &InferenceConfig) -> bool {
    let mut seen = HashSet::new();
    !row.is_empty()
        && row
            .iter()
            .all(|cell| classify_cell(cell, cfg) == CellType::String && seen.insert(cell.trim()))
}

pub fn sniff_dialect(sample: &str, cfg: &InferenceConfig) -> Result<Dialect, InferenceError> {
    let mut best: Option<(char, Score, Vec<Vec<String>>)> = None;
    for delimiter in DELIMITERS {
        let rows = read_records(sample, delimiter, Some(cfg.sniff_lines));
        if rows.is_empty() {
            return Err(InferenceError::NoData);
        }
        let s = score(&rows);
        if best.as_ref().map_or(true, |(_, b, _)| s.beats(b)) {
            best = Some((delimiter, s, rows));
        }
    }
    let (delimiter, _, rows) = best.ok_or(InferenceError::NoData)?;
    Ok(Dialect::new(delimiter, looks_like_header(&rows[0], cfg)))
}

/// Header detection for a fixed delimiter (TSV files skip delimiter sniffing).
pub fn sniff_header(sample: &str, delimiter: char, cfg: &InferenceConfig) -> Result<Dialect, InferenceError> {
    let rows = read_records(sample, delimiter, Some(1));
    let first = rows.first().ok_or(InferenceError::NoData)?;
    Ok(Dialect::new(delimiter, looks_like_header(first, cfg)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sniff(s: &str) -> Result<Dialect, InferenceError> {
        sniff_dialect(s, &InferenceConfig::default())
    }

    #[test]
    fn comma_with_header() {
        assert_eq!(sniff("a,b\n1,2\n3,4").unwrap(), Dialect::new(',', true));
    }

    #[test]
    fn tab_delimited() {
        assert_eq!(sniff("x\ty\n1\t2").unwrap().delimiter, '\t');
    }

    #[test]
    fn no_delimiter_defaults_to_comma() {
        let d = sniff("word\nother\n").unwrap();
        assert_eq!(d, Dialect::new(',', true));
    }

    #[test]
    fn empty_sample_is_no_data() {
        assert_eq!(sniff(""), Err(InferenceError::NoData));
        assert_eq!(sniff("\n\n"), Err(InferenceError::NoData));
    }

    #[test]
    fn quoted_delimiters_are_not_separators() {
        let text = "name;note\n\"a;b;c\";1\n\"d;e\";2\n";
        let d = sniff(text).unwrap();
        assert_eq!(d.delimiter, ';');
        assert!(d.has_header);
    }

    #[test]
    fn numeric_first_row_is_not_header() {
        assert!(!sniff("1|x\n2|y\n").unwrap().has_header);
    }

    #[test]
    fn repeated_header_cells_are_not_header() {
        assert!(!sniff("a,a\nb,c\n").unwrap().has_header);
    }

    #[test]
    fn majority_consistency_wins_over_width() {
        // ';' gives 3 columns on one line only; ',' is consistent on all.
        let text = "a,b\nc;d;e,f\ng,h\ni,j\n";
        assert_eq!(sniff(text).unwrap().delimiter, ',');
    }

    #[test]
    fn only_sniff_lines_are_considered() {
        let mut text = String::from("a;b\n");
        for _ in 0..10 {
            text.push_str("1;2\n");
        }
        for _ in 0..100 {
            text.push_str("1,2,3\n");
        }
        let cfg = InferenceConfig { sniff_lines: 8, ..Default::default() };
        assert_eq!(sniff_dialect(&text, &cfg).unwrap().delimiter, ';');
    }
}
