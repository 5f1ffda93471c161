use std::path::Path;
use std::process::{Command, Output};

fn hyperbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperbound"))
        .args(args)
        .env_remove("HYPERBOUND_LOG_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn volume_examples() {
    let o = hyperbound(&["volume", "pi/3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1.014941606\n");
    let o = hyperbound(&[
        "volume", "π/6", "π/6", "π/6", "π/6", "π/6", "π/6", "--method", "integral",
    ]);
    assert!(stdout(&o).starts_with("3.225995"));
    let dilog = hyperbound(&["volume", "pi/6", "--method", "dilog"]);
    assert_eq!(stdout(&dilog), stdout(&o));
}

#[test]
fn diagnostics() {
    let o = hyperbound(&["volume", "pi/6", "--diagnostics"]);
    let out = stdout(&o);
    assert!(out.contains("UltraIdeal"));
    for key in ["k1 =", "k2 =", "k3 =", "k4 =", "z1 =", "z2 ="] {
        assert!(out.contains(key), "{key}");
    }
}

#[test]
fn invalid_angles_exit_2() {
    let o = hyperbound(&["volume", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(
        err.contains("degenerate") && err.contains("octcensus"),
        "{err}"
    );
    assert!(stdout(&o).is_empty());

    let o = hyperbound(&["volume", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("outside [0, pi)"));

    let o = hyperbound(&["volume", "pi/x"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn census_summaries_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = hyperbound(&["census", "2", "--out-dir", d]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("8 manifolds, 1 volume value\n"));
    assert!(stdout(&o).contains("6.451990"));
    let csv = std::fs::read_to_string(dir.path().join("census-2.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert!(csv.starts_with("signature,volume,boundary,cells,provenance_count\n"));
    assert!(dir.path().join("census-2.json").exists());

    let o = hyperbound(&["census", "1", "--out-dir", d]);
    assert!(stdout(&o).contains("0 manifolds"));
}

#[test]
fn octcensus_volumes() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperbound(&["octcensus", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("11 manifolds, 1 volume value"));
    let csv = std::fs::read_to_string(dir.path().join("octcensus-1.csv")).unwrap();
    for line in csv.lines().skip(1) {
        assert!(
            line.split(',').nth(1).unwrap().starts_with("3.66386"),
            "{line}"
        );
    }
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |d: &Path| {
        hyperbound(&[
            "census",
            "2",
            "--out-dir",
            d.to_str().unwrap(),
            "--threads",
            "3",
        ])
    };
    let (x, y) = (run(a.path()), run(b.path()));
    assert_eq!(x.stdout, y.stdout);
    for f in ["census-2.csv", "census-2.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap()
        );
    }
    let sig = "3.090i10202129002d111a1i00";
    assert_eq!(
        hyperbound(&["canonize", sig]).stdout,
        hyperbound(&["canonize", sig]).stdout
    );
}

#[test]
fn solve_and_canonize() {
    let o = hyperbound(&["solve", "3.090i10202129002d111a1i00"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("boundary: S2+1c"));
    assert!(out.contains("volume: 7.79763"));
    assert!(out.contains("inf"));

    let o = hyperbound(&["canonize", "3.090i1013200400231014292i"]);
    assert!(stdout(&o).contains("signature: T T T | 3.090i1013200400231014292i"));
    assert!(stdout(&o).contains("certification: tilts"));

    let o = hyperbound(&[
        "canonize",
        "3.090i1013200400231014292i",
        "--marks",
        "octahedral",
    ]);
    assert!(stdout(&o).contains("signature: O O O |"), "{}", stdout(&o));
}

#[test]
fn pairing_from_text_file() {
    let dir = tempfile::tempdir().unwrap();
    let sig = "3.090i1013200400231014292i";
    let p = hyperbound::tricomb::Pairing::from_signature(sig).unwrap();
    let path = dir.path().join("m.txt");
    std::fs::write(&path, p.to_text()).unwrap();
    let o = hyperbound(&["solve", path.to_str().unwrap()]);
    assert!(stdout(&o).contains("volume: 10.42860"));
}

#[test]
fn stage_failures_exit_3() {
    // no strict angle structure exists on this triangulation
    let o = hyperbound(&["solve", "3.090i10202122002511151200"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error: solve:"));
    assert_eq!(stderr(&o).lines().count(), 1);

    // a file where the log directory should be
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("log");
    std::fs::write(&blocker, "").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hyperbound"))
        .args(["census", "2", "--out-dir", dir.path().to_str().unwrap()])
        .env("HYPERBOUND_LOG_DIR", &blocker)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("partial log"));
}

#[test]
fn log_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let logs = dir.path().join("logs");
    let o = Command::new(env!("CARGO_BIN_EXE_hyperbound"))
        .args(["census", "2", "--out-dir", dir.path().to_str().unwrap()])
        .env("HYPERBOUND_LOG_DIR", &logs)
        .output()
        .unwrap();
    assert!(o.status.success());
    let log = std::fs::read_to_string(logs.join("census-2.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 8);
}

#[test]
fn bad_input_exit_2() {
    assert_eq!(hyperbound(&["census", "3"]).status.code(), Some(2));
    assert_eq!(hyperbound(&["solve", "nonsense"]).status.code(), Some(2));
    assert_eq!(hyperbound(&[]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[solver]\ntolerance = \"tight\"\n").unwrap();
    let o = hyperbound(&["--config", cfg.to_str().unwrap(), "volume", "pi/3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn config_file_applies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    // dropping the compact-boundary filter admits candidates that are then
    // rejected by the solver, so the census still has the same 8 records
    std::fs::write(
        &cfg,
        "[filters]\ncompact_geodesic_boundary = false\n[canonize]\nmoves_per_tet = 5\n",
    )
    .unwrap();
    let o = hyperbound(&[
        "--config",
        cfg.to_str().unwrap(),
        "census",
        "2",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("complexity 2: 15 candidates"), "{out}");
    assert!(out.contains("8 manifolds, 1 volume value"));
    assert!(out.contains("7 candidates without a certified structure"));
}
