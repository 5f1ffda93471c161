//! Census of hyperbolic manifolds with geodesic boundary of given
//! complexity: enumerate candidate pairings, geometrize, canonize and
//! deduplicate by canonical signature.

mod output;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::sync::mpsc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geosolve::{solve, solve_mgk_ansatz, CuspMarks, GeometricSolution};
use crate::kojima::{canonize_with, CanonizeConfig, Certification};
use crate::specfun::regular_ideal_octahedron_volume;
use crate::tetshape::{volume, DihedralAngles};
use crate::tricomb::{
    boundary_pattern, build_relative_handlebody, enumerate_pairings, FilterSet, Pairing, TriError,
    MAX_ENUMERATION_SIZE,
};

pub use output::{statistics, write_csv, write_json, GroupStats};

/// Volumes closer than this are the same value.
pub const VOLUME_MERGE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("census of complexity {n} is not supported (max {max}; 3 needs the extended flag)")]
    UnsupportedSize { n: usize, max: usize },
    #[error("records with signature {signature} disagree on volume: {a} vs {b}")]
    VolumeMismatchOnMerge { signature: String, a: f64, b: f64 },
    #[error(transparent)]
    Combinatorics(#[from] TriError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CensusConfig {
    pub canonize: CanonizeConfig,
    pub filters: FilterSet,
    /// Allows complexity 3.
    pub extended: bool,
    /// Directory for the resumable result log; no log when unset.
    pub log_dir: Option<PathBuf>,
    /// Worker threads; rayon's default when unset.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub signature: String,
    pub volume: f64,
    pub boundary: String,
    /// Number of canonical cells by tag.
    pub cells: BTreeMap<String, usize>,
    pub complexity: usize,
    /// How the structure was found: `newton`, `ansatz` or `octahedral`.
    pub solver: String,
    pub certification: String,
    /// Signatures of the candidate pairings that led to this record.
    pub provenance: Vec<String>,
}

impl CensusRecord {
    pub fn cell_summary(&self) -> String {
        self.cells
            .iter()
            .map(|(k, v)| format!("{v}{k}"))
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusFailure {
    pub pairing: String,
    pub stage: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Outcome {
    Record(CensusRecord),
    Failure(CensusFailure),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct LogEntry {
    pairing: String,
    outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusOutput {
    pub n: usize,
    pub candidates: usize,
    pub records: Vec<CensusRecord>,
    /// Candidates that could not be geometrized or canonized. This is not a
    /// proof that they are not hyperbolic.
    pub failures: Vec<CensusFailure>,
    /// Canonical signatures dropped because they already occur at lower
    /// complexity.
    pub lower_complexity: Vec<String>,
}

/// Recomputes the volume of a structure from its cells.
pub fn cell_volume_sum(sol: &GeometricSolution) -> f64 {
    sol.assignment
        .angles
        .iter()
        .map(|a| {
            if a.iter().all(|&x| x == 0.0) {
                regular_ideal_octahedron_volume()
            } else {
                DihedralAngles::new(*a)
                    .and_then(|t| volume(&t))
                    .unwrap_or(f64::NAN)
            }
        })
        .sum()
}

fn process(sig: &str, p: &Pairing, n: usize, config: &CanonizeConfig) -> Outcome {
    let fail = |stage: &str, reason: String| {
        Outcome::Failure(CensusFailure {
            pairing: sig.to_string(),
            stage: stage.to_string(),
            reason,
        })
    };
    let pattern = match boundary_pattern(p) {
        Ok(b) => b,
        Err(e) => return fail("topology", e.to_string()),
    };
    let (sol, solver) = if pattern.toric > 0 {
        match solve_mgk_ansatz(p, &config.solver) {
            Ok(s) => (s, "ansatz"),
            Err(e) => return fail("solve", e.to_string()),
        }
    } else {
        match solve(p, &CuspMarks::none(), &config.solver) {
            Ok(s) => (s, "newton"),
            Err(e) => return fail("solve", e.to_string()),
        }
    };
    let canonical = match canonize_with(&sol, config) {
        Ok(c) => c,
        Err(e) => return fail("canonize", e.to_string()),
    };
    let mut cells = BTreeMap::new();
    for c in &canonical.cells {
        *cells.entry(c.tag().to_string()).or_insert(0) += 1;
    }
    Outcome::Record(CensusRecord {
        signature: canonical.signature,
        volume: cell_volume_sum(&canonical.solution),
        boundary: pattern.label(),
        cells,
        complexity: n,
        solver: solver.to_string(),
        certification: match canonical.certification {
            Certification::Tilts => "tilts".into(),
            Certification::CuspedAssumed => "cusped-assumed".into(),
        },
        provenance: vec![sig.to_string()],
    })
}

fn read_log(path: &PathBuf) -> Result<Vec<LogEntry>, CensusError> {
    let Ok(file) = File::open(path) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        // a torn last line from an interrupted run is skipped and redone
        if let Ok(entry) = serde_json::from_str(&line) {
            out.push(entry);
        }
    }
    Ok(out)
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads.and_then(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

pub fn run_census(n: usize, config: &CensusConfig) -> Result<CensusOutput, CensusError> {
    let max = if config.extended {
        MAX_ENUMERATION_SIZE
    } else {
        2
    };
    if n == 0 || n > max {
        return Err(CensusError::UnsupportedSize { n, max });
    }
    let candidates = enumerate_pairings(n, &config.filters)?;
    let log_path = config
        .log_dir
        .as_ref()
        .map(|d| d.join(format!("census-{n}.jsonl")));

    let mut done: BTreeMap<String, Outcome> = BTreeMap::new();
    if let Some(path) = &log_path {
        for entry in read_log(path)? {
            done.insert(entry.pairing, entry.outcome);
        }
        let wanted: HashSet<&str> = candidates.iter().map(|(s, _)| s.as_str()).collect();
        done.retain(|s, _| wanted.contains(s.as_str()));
    }
    let todo: Vec<&(String, Pairing)> = candidates
        .iter()
        .filter(|(s, _)| !done.contains_key(s))
        .collect();

    let fresh: Vec<(String, Outcome)> = match &log_path {
        Some(path) => {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            if std::fs::read(path)?.last().is_some_and(|&b| b != b'\n') {
                // close a torn line so the next entry starts clean
                writeln!(file)?;
            }
            let (tx, rx) = mpsc::channel::<String>();
            let writer = std::thread::spawn(move || -> std::io::Result<()> {
                for line in rx {
                    writeln!(file, "{line}")?;
                    file.flush()?;
                }
                Ok(())
            });
            let out = in_pool(config.threads, || {
                todo.par_iter()
                    .map_with(tx, |tx, (sig, p)| {
                        let outcome = process(sig, p, n, &config.canonize);
                        let entry = LogEntry {
                            pairing: sig.clone(),
                            outcome: outcome.clone(),
                        };
                        // a closed channel means the writer failed; its error
                        // is reported below
                        let _ =
                            tx.send(serde_json::to_string(&entry).expect("log entries serialize"));
                        (sig.clone(), outcome)
                    })
                    .collect()
            });
            writer.join().expect("log writer panicked")?;
            out
        }
        None => in_pool(config.threads, || {
            todo.par_iter()
                .map(|(sig, p)| (sig.clone(), process(sig, p, n, &config.canonize)))
                .collect()
        }),
    };
    done.extend(fresh);

    let lower: HashSet<String> = if n > 1 {
        run_census(n - 1, config)?
            .records
            .into_iter()
            .map(|r| r.signature)
            .collect()
    } else {
        HashSet::new()
    };

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut lower_complexity = BTreeSet::new();
    for (_, outcome) in done {
        match outcome {
            Outcome::Record(r) if lower.contains(&r.signature) => {
                lower_complexity.insert(r.signature);
            }
            Outcome::Record(r) => records.push(r),
            Outcome::Failure(f) => failures.push(f),
        }
    }
    Ok(CensusOutput {
        n,
        candidates: candidates.len(),
        records: dedup(records)?,
        failures,
        lower_complexity: lower_complexity.into_iter().collect(),
    })
}

/// Merges records with equal signatures, uniting their provenance. The
/// output is ordered by volume, then signature.
pub fn dedup(records: Vec<CensusRecord>) -> Result<Vec<CensusRecord>, CensusError> {
    let mut merged: BTreeMap<String, CensusRecord> = BTreeMap::new();
    for r in records {
        match merged.get_mut(&r.signature) {
            Some(m) => {
                if (m.volume - r.volume).abs() > VOLUME_MERGE_TOLERANCE {
                    return Err(CensusError::VolumeMismatchOnMerge {
                        signature: r.signature,
                        a: m.volume,
                        b: r.volume,
                    });
                }
                m.provenance.extend(r.provenance);
                m.provenance.sort();
                m.provenance.dedup();
            }
            None => {
                merged.insert(r.signature.clone(), r);
            }
        }
    }
    let mut out: Vec<CensusRecord> = merged.into_values().collect();
    out.sort_by(|a, b| {
        a.volume
            .total_cmp(&b.volume)
            .then_with(|| a.signature.cmp(&b.signature))
    });
    Ok(out)
}

/// One record per connected pairing of `n` tetrahedra: the relative
/// handlebody built from regular ideal octahedra.
pub fn run_octahedral_census(n: usize) -> Result<Vec<CensusRecord>, CensusError> {
    if n == 0 || n > MAX_ENUMERATION_SIZE {
        return Err(CensusError::UnsupportedSize {
            n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    let pairings = enumerate_pairings(n, &FilterSet::none())?;
    pairings
        .iter()
        .map(|(sig, p)| {
            let y = build_relative_handlebody(p)?;
            Ok(CensusRecord {
                signature: format!("{} | {sig}", vec!["O"; n].join(" ")),
                volume: y.volume,
                boundary: format!("H{}+{}a", y.genus, y.loops),
                cells: BTreeMap::from([("O".to_string(), n)]),
                complexity: y.complexity,
                solver: "octahedral".into(),
                certification: "octahedral".into(),
                provenance: vec![sig.clone()],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(sig: &str, volume: f64, from: &str) -> CensusRecord {
        CensusRecord {
            signature: sig.into(),
            volume,
            boundary: "S2".into(),
            cells: BTreeMap::from([("T".into(), 2)]),
            complexity: 2,
            solver: "newton".into(),
            certification: "tilts".into(),
            provenance: vec![from.into()],
        }
    }

    #[test]
    fn dedup_merges_and_checks_volume() {
        let rs = vec![
            record("a", 1.0, "x"),
            record("a", 1.0 + 1e-9, "y"),
            record("b", 2.0, "z"),
        ];
        let d = dedup(rs).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].provenance, vec!["x".to_string(), "y".to_string()]);
        assert_eq!(dedup(d.clone()).unwrap(), d);
        let bad = vec![record("a", 1.0, "x"), record("a", 1.1, "y")];
        assert!(matches!(
            dedup(bad),
            Err(CensusError::VolumeMismatchOnMerge { .. })
        ));
    }

    #[test]
    fn sizes() {
        assert!(run_census(3, &CensusConfig::default()).is_err());
        assert!(run_census(0, &CensusConfig::default()).is_err());
        assert!(run_census(1, &CensusConfig::default())
            .unwrap()
            .records
            .is_empty());
    }
}
