use std::collections::{HashMap, HashSet};

use super::cell::{classify_cell, join_types, CellType, InferenceConfig};
use super::dialect::Dialect;
use crate::error::InferenceError;
use crate::model::{Field, TableSchema};

const MAX_RAGGED_WARNINGS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct InferredTable {
    pub schema: TableSchema,
    pub warnings: Vec<String>,
}

/// Incremental per-column state: running type join plus distinct samples.
#[derive(Debug, Clone)]
pub(crate) struct ColumnAccumulator {
    pub cell_type: CellType,
    samples: Vec<String>,
    seen: HashSet<String>,
    limit: usize,
}

impl ColumnAccumulator {
    pub fn new(limit: usize) -> Self {
        Self {
            cell_type: CellType::Missing,
            samples: Vec::new(),
            seen: HashSet::new(),
            limit,
        }
    }

    pub fn push(&mut self, raw: &str, cfg: &InferenceConfig) {
        let t = classify_cell(raw, cfg);
        self.cell_type = join_types(self.cell_type, t);
        if t != CellType::Missing && self.samples.len() < self.limit && self.seen.insert(raw.to_owned()) {
            self.samples.push(raw.to_owned());
        }
    }

    pub fn push_raw_sample(&mut self, raw: String) {
        if self.samples.len() < self.limit && self.seen.insert(raw.clone()) {
            self.samples.push(raw);
        }
    }

    pub fn into_field(self, name: String) -> Field {
        Field {
            name,
            field_type: self.cell_type.field_type(),
            sample_values: self.samples,
            ..Field::default()
        }
    }
}

fn modal_width(rows: &[Vec<String>]) -> usize {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for row in rows {
        *counts.entry(row.len()).or_default() += 1;
    }
    counts.into_iter().max_by_key(|&(cols, freq)| (freq, cols)).map_or(0, |(cols, _)| cols)
}

fn column_names(header: Option<&[String]>, width: usize) -> Vec<String> {
    let mut taken = HashSet::new();
    (0..width)
        .map(|i| {
            let mut name = header
                .and_then(|h| h.get(i))
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .unwrap_or_else(|| format!("field_{}", i + 1));
            while !taken.insert(name.clone()) {
                name.push('_');
            }
            name
        })
        .collect()
}

/// Infers a table schema from already split rows.
pub fn infer_table_schema(
    rows: &[Vec<String>],
    dialect: &Dialect,
    cfg: &InferenceConfig,
) -> Result<InferredTable, InferenceError> {
    let (header, data) = match rows.split_first() {
        Some((first, rest)) if dialect.has_header => (Some(first.as_slice()), rest),
        _ => (None, rows),
    };
    if data.is_empty() {
        return Err(InferenceError::NoRows);
    }

    let width = data
        .iter()
        .map(Vec::len)
        .chain(header.map(<[String]>::len))
        .max()
        .unwrap_or(0);
    let expected = header.map(<[String]>::len).unwrap_or_else(|| modal_width(data));
    let first_data_line = usize::from(header.is_some()) + 1;

    let mut warnings = Vec::new();
    let mut ragged = 0usize;
    let mut columns = vec![ColumnAccumulator::new(cfg.max_sample_values); width];
    for (idx, row) in data.iter().enumerate() {
        if row.len() != expected {
            ragged += 1;
            if ragged <= MAX_RAGGED_WARNINGS {
                warnings.push(format!(
                    "record {} has {} cells, expected {expected}; missing cells treated as absent",
                    first_data_line + idx,
                    row.len()
                ));
            }
        }
        for (column, cell) in columns.iter_mut().zip(row) {
            column.push(cell, cfg);
        }
    }
    if ragged > MAX_RAGGED_WARNINGS {
        warnings.push(format!("{} more ragged records", ragged - MAX_RAGGED_WARNINGS));
    }

    let fields = column_names(header, width)
        .into_iter()
        .zip(columns)
        .map(|(name, column)| column.into_field(name))
        .collect();
    Ok(InferredTable {
        schema: TableSchema {
            fields,
            missing_values: cfg.missing_values.clone(),
            ..TableSchema::default()
        },
        warnings,
    })
}
