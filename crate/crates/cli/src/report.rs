use std::collections::BTreeSet;
use std::fmt::Write as _;

use hyperbound::census::{statistics, CensusOutput, CensusRecord};
use hyperbound::geosolve::GeometricSolution;
use hyperbound::kojima::{CanonicalDecomposition, Certification};
use hyperbound::tricomb::{boundary_pattern, isomorphism_signature};

fn plural(k: usize, word: &str) -> String {
    format!("{k} {word}{}", if k == 1 { "" } else { "s" })
}

pub fn solution(s: &GeometricSolution) -> String {
    let mut out = String::new();
    let sig = isomorphism_signature(&s.pairing).unwrap_or_default();
    let boundary = boundary_pattern(&s.pairing)
        .map(|b| b.label())
        .unwrap_or_default();
    let _ = writeln!(out, "pairing: {sig}");
    let _ = writeln!(out, "boundary: {boundary}");
    let _ = writeln!(out, "volume: {:.9}", s.volume);
    let _ = writeln!(out, "residual: {:.3e}", s.residual_norm);
    let _ = writeln!(out, "iterations: {}", s.iterations);
    for (t, a) in s.assignment.angles.iter().enumerate() {
        let angles: Vec<String> = a.iter().map(|x| format!("{x:.9}")).collect();
        let _ = writeln!(out, "tet {t}: {}", angles.join(" "));
    }
    let lengths: Vec<String> = s
        .edge_lengths
        .iter()
        .map(|l| {
            if l.is_finite() {
                format!("{l:.9}")
            } else {
                "inf".into()
            }
        })
        .collect();
    let _ = writeln!(out, "edge lengths: {}", lengths.join(" "));
    out
}

pub fn decomposition(d: &CanonicalDecomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "signature: {}", d.signature);
    let _ = writeln!(out, "volume: {:.9}", d.solution.volume);
    let _ = writeln!(out, "moves: {}", d.moves);
    let certification = match d.certification {
        Certification::Tilts => "tilts",
        Certification::CuspedAssumed => "cusped (assumed)",
    };
    let _ = writeln!(out, "certification: {certification}");
    if let Some(r) = &d.report {
        let _ = writeln!(out, "largest tilt sum: {:.9}", r.max_sum());
    }
    out
}

fn volume_values(records: &[CensusRecord]) -> usize {
    records
        .iter()
        .map(|r| (r.volume * 1e6).round() as i64)
        .collect::<BTreeSet<_>>()
        .len()
}

/// Per boundary and cell type: count, volume range, number of distinct
/// volumes and the largest multiplicity of one volume.
pub fn records(records: &[CensusRecord]) -> String {
    let mut out = String::new();
    if records.is_empty() {
        out.push_str("0 manifolds\n");
        return out;
    }
    let _ = writeln!(
        out,
        "{:<10} {:<8} {:>6} {:>12} {:>12} {:>8} {:>6}",
        "boundary", "cells", "count", "min vol", "max vol", "values", "mult"
    );
    for g in statistics(records) {
        let _ = writeln!(
            out,
            "{:<10} {:<8} {:>6} {:>12.6} {:>12.6} {:>8} {:>6}",
            g.boundary,
            g.cells,
            g.count,
            g.min_volume,
            g.max_volume,
            g.distinct_volumes,
            g.max_multiplicity
        );
    }
    let _ = writeln!(
        out,
        "{}, {}",
        plural(records.len(), "manifold"),
        plural(volume_values(records), "volume value")
    );
    out
}

pub fn census(out: &CensusOutput) -> String {
    let mut s = format!(
        "complexity {}: {}\n",
        out.n,
        plural(out.candidates, "candidate")
    );
    s.push_str(&records(&out.records));
    if !out.lower_complexity.is_empty() {
        let _ = writeln!(
            s,
            "{} found at lower complexity",
            plural(out.lower_complexity.len(), "signature")
        );
    }
    if !out.failures.is_empty() {
        let _ = writeln!(
            s,
            "{} without a certified structure:",
            plural(out.failures.len(), "candidate")
        );
        for f in &out.failures {
            let _ = writeln!(
                s,
                "  {} [{}] {}",
                f.pairing,
                f.stage,
                f.reason.replace('\n', " ")
            );
        }
    }
    s
}
