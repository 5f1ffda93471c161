use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CensusError, CensusRecord};

/// Volume statistics of one group of records (same boundary and cell
/// summary), with volumes rounded to 1e-6 before grouping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub boundary: String,
    pub cells: String,
    pub count: usize,
    pub min_volume: f64,
    pub max_volume: f64,
    pub distinct_volumes: usize,
    pub max_multiplicity: usize,
}

fn micro(v: f64) -> i64 {
    (v * 1e6).round() as i64
}

pub fn statistics(records: &[CensusRecord]) -> Vec<GroupStats> {
    let mut groups: BTreeMap<(String, String), BTreeMap<i64, usize>> = BTreeMap::new();
    for r in records {
        *groups
            .entry((r.boundary.clone(), r.cell_summary()))
            .or_default()
            .entry(micro(r.volume))
            .or_insert(0) += 1;
    }
    groups
        .into_iter()
        .map(|((boundary, cells), volumes)| GroupStats {
            boundary,
            cells,
            count: volumes.values().sum(),
            min_volume: *volumes.keys().next().unwrap() as f64 / 1e6,
            max_volume: *volumes.keys().last().unwrap() as f64 / 1e6,
            distinct_volumes: volumes.len(),
            max_multiplicity: volumes.values().copied().max().unwrap(),
        })
        .collect()
}

#[derive(Serialize)]
struct CsvRow<'a> {
    signature: &'a str,
    volume: String,
    boundary: &'a str,
    cells: String,
    provenance_count: usize,
}

/// Columns: signature, volume (9 decimals), boundary, cells, provenance_count.
pub fn write_csv(records: &[CensusRecord], path: &Path) -> Result<(), CensusError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(CsvRow {
            signature: &r.signature,
            volume: format!("{:.9}", r.volume),
            boundary: &r.boundary,
            cells: r.cell_summary(),
            provenance_count: r.provenance.len(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), CensusError> {
    let file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(file, value)?;
    Ok(())
}
