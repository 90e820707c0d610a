//! Parsers for the whitespace-separated KNN tables.
//!
//! Training tables carry four columns (day, hour, event, class with class
//! written `+` or `-`); feature tables carry the first three. Blank lines
//! and `#` comments are skipped; errors name the file and line.

use std::path::Path;

use prodline_core::turn::{FeatureVector, TrainingInstance, TurnClass};

use crate::error::CliError;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

fn parse_feature_fields(
    path: &Path,
    line_no: usize,
    fields: &[&str],
) -> Result<FeatureVector, CliError> {
    let mut values = [0u8; 3];
    for (slot, (value, name)) in values
        .iter_mut()
        .zip(fields.iter().zip(["day", "hour", "event"]))
    {
        *slot = value.parse().map_err(|_| {
            CliError::config(format!(
                "{}:{line_no}: {name} column {value:?} is not a small integer",
                path.display()
            ))
        })?;
    }
    FeatureVector::new(values[0], values[1], values[2])
        .map_err(|e| CliError::config(format!("{}:{line_no}: {e}", path.display())))
}

/// Read a four-column training table.
pub fn read_training_table(path: &Path) -> Result<Vec<TrainingInstance>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (line_no, line) in data_lines(&text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(CliError::config(format!(
                "{}:{line_no}: expected 4 columns (day hour event class), got {}",
                path.display(),
                fields.len()
            )));
        }
        let features = parse_feature_fields(path, line_no, &fields[..3])?;
        let class = TurnClass::from_symbol(fields[3]).ok_or_else(|| {
            CliError::config(format!(
                "{}:{line_no}: class column must be + or -, got {:?}",
                path.display(),
                fields[3]
            ))
        })?;
        rows.push(TrainingInstance::new(features, class));
    }
    Ok(rows)
}

/// Read a three-column feature table.
pub fn read_feature_rows(path: &Path) -> Result<Vec<FeatureVector>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (line_no, line) in data_lines(&text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(CliError::config(format!(
                "{}:{line_no}: expected 3 columns (day hour event), got {}",
                path.display(),
                fields.len()
            )));
        }
        rows.push(parse_feature_fields(path, line_no, &fields)?);
    }
    Ok(rows)
}
