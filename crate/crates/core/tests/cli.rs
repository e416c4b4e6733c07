use hilbert_core::cli::{run_with, AutRecord, InvariantsRecord, SeriesRecord, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use hilbert_core::decision::{Outcome, Verdict};
use hilbert_core::scanner::{ScanKind, ScanReport};
use hilbert_core::SurfaceInvariants;
use num_bigint::BigInt;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("hilbert").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn structured(args: &[&str]) -> String {
    let mut full = vec!["--output-format", "structured"];
    full.extend_from_slice(args);
    let (code, out, err) = run(&full);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn invariants_record_round_trips() {
    let out = structured(&["invariants", "--surface", "k3", "--partition", "2", "--show", "betti,euler,hodge_p0,hodge_full,closed"]);
    let rec: InvariantsRecord = serde_json::from_str(&out).unwrap();
    assert_eq!(rec.betti.as_deref(), Some(&ints(&[1, 0, 23, 0, 276, 0, 23, 0, 1])[..]));
    assert_eq!(rec.euler, Some(BigInt::from(324)));
    assert_eq!(rec.hodge_p0.as_deref(), Some(&ints(&[1, 0, 1, 0, 1])[..]));
    assert_eq!(rec.hodge_full.as_ref().unwrap()[&2].get(1, 1), BigInt::from(21));
    assert_eq!(serde_json::from_str::<InvariantsRecord>(&serde_json::to_string(&rec).unwrap()).unwrap(), rec);
}

#[test]
fn decide_verdict_round_trips() {
    let out = structured(&["decide", "--surface", "bielliptic", "--a", "1,4,5", "--b", "2,2,6"]);
    let v = Verdict::from_json(&out).unwrap();
    assert_eq!(v.outcome, Outcome::NonIsomorphic);
    let w = v.witness.unwrap();
    assert_eq!((w.value_a, w.value_b), (BigInt::from(22), BigInt::from(24)));
}

#[test]
fn series_and_aut_records_parse() {
    let s: SeriesRecord = serde_json::from_str(&structured(&["series", "--surface", "k3", "--truncation", "2"])).unwrap();
    assert_eq!(s.variables, ["t", "z"]);
    let t2z4 = s.terms.iter().find(|t| t.exponent == [2, 4]).unwrap();
    assert_eq!(t2z4.coeff, BigInt::from(276));
    let e: SeriesRecord = serde_json::from_str(&structured(&["series", "--surface", "k3", "--kind", "euler", "--truncation", "2"])).unwrap();
    assert_eq!(e.terms.iter().find(|t| t.exponent == [2]).unwrap().coeff, BigInt::from(324));
    let a: AutRecord = serde_json::from_str(&structured(&["aut", "--partition", "1,1,2,3,3,3"])).unwrap();
    assert_eq!(a.rendered, "Aut(S^[1])^2 ⋊ S_2 × Aut(S^[2]) × Aut(S^[3])^3 ⋊ S_3");
}

#[test]
fn catalog_rows_parse_as_surfaces() {
    let s: SurfaceInvariants = serde_json::from_str(&structured(&["catalog", "--name", "ruled", "--param", "g=2"])).unwrap();
    assert_eq!((s.b1, s.chi), (4, -4));
    let (code, out, _) = run(&["catalog"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("enriques"));
}

#[test]
fn scan_writes_reports_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let (jsonl, csv) = (dir.path().join("r.jsonl"), dir.path().join("r.csv"));
    let args = [
        "--output-format", "structured", "--output", jsonl.to_str().unwrap(),
        "scan", "--kind", "lemma-same-length", "--n-max", "11", "--p-max", "2",
        "--csv", csv.to_str().unwrap(), "--omit-timing", "--threads", "2",
    ];
    let (code, out, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&jsonl).unwrap();
    let report = ScanReport::from_jsonl(&text).unwrap();
    assert_eq!(report.scan_kind, ScanKind::LemmaSameLength);
    assert!(report.wall_time_ms.is_none());
    assert!(!report.violations.is_empty());
    assert_eq!(report.to_jsonl(), text);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), report.violations.len() + 1);

    // A second run with a different thread count is byte-identical.
    let (code, _, _) = run(&[&args[..args.len() - 1], &["1"]].concat());
    assert_eq!(code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&jsonl).unwrap(), text);
}

#[test]
fn custom_surface_files_and_catalogs() {
    let dir = tempfile::tempdir().unwrap();
    let surface = dir.path().join("s.toml");
    std::fs::write(&surface, SurfaceInvariants::synthetic(1, 0, 3).with_hodge(0, 0).to_toml()).unwrap();
    let rec: InvariantsRecord = serde_json::from_str(&structured(&[
        "invariants", "--surface-file", surface.to_str().unwrap(), "--partition", "1",
    ]))
    .unwrap();
    assert_eq!(rec.betti.as_deref(), Some(&ints(&[1, 0, 3, 0, 1])[..]));

    let catalog = dir.path().join("c.toml");
    std::fs::write(
        &catalog,
        "schema_version = 1\n[[surface]]\nname = \"toy\"\nb0 = 1\nb1 = 0\nb2 = 1\nchi = 3\n",
    )
    .unwrap();
    let out = structured(&["--catalog", catalog.to_str().unwrap(), "invariants", "--surface", "toy", "--partition", "1", "--show", "euler"]);
    let rec: InvariantsRecord = serde_json::from_str(&out).unwrap();
    assert_eq!(rec.euler, Some(BigInt::from(3)));
}

#[test]
fn catalog_env_variable_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = dir.path().join("c.toml");
    std::fs::write(&catalog, "schema_version = 1\n[[surface]]\nname = \"toy\"\nb0 = 1\nb1 = 0\nb2 = 1\nchi = 3\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hilbert"))
        .args(["catalog"])
        .env("HILBERT_CATALOG", &catalog)
        .output()
        .unwrap();
    assert!(out.status.success());
    let listing = String::from_utf8(out.stdout).unwrap();
    assert!(listing.contains("toy"));
    assert!(!listing.contains("enriques"));
}

#[test]
fn reordered_partitions_are_reported() {
    let (code, _, err) = run(&["invariants", "--surface", "k3", "--partition", "3,1,3"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("reordered to (1,3,3)"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["decide", "--surface", "k3", "--a", "1,2", "--b", "4"]).0, EXIT_USAGE);
    assert_eq!(run(&["decide", "--surface", "k3", "--a", "0,2", "--b", "2"]).0, EXIT_USAGE);
    assert_eq!(run(&["invariants"]).0, EXIT_USAGE);
    assert_eq!(run(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(run(&["decide", "--surface", "nope", "--a", "1,2", "--b", "3"]).0, EXIT_DATA);
    let (code, out, _) = run(&[
        "--output-format", "structured", "invariants", "--surface", "ruled", "--param", "g=2",
        "--partition", "2", "--show", "hodge_p0",
    ]);
    assert_eq!(code, EXIT_OK);
    let rec: InvariantsRecord = serde_json::from_str(&out).unwrap();
    assert!(rec.hodge_p0.is_none());
    assert!(rec.notes.iter().any(|n| n.contains("hodge_p0 not available")));
    let (code, _, _) = run(&["invariants", "--surface", "abelian", "--kummer", "--partition", "2"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn kummer_decisions_cite_the_structural_rule() {
    let v = Verdict::from_json(&structured(&["decide", "--surface", "abelian", "--kummer", "--a", "1,3", "--b", "2,2"])).unwrap();
    assert_eq!(v.outcome, Outcome::NonIsomorphic);
    assert_eq!(v.rules_fired[0].id, "kummer-structural");
}

#[test]
fn human_output_is_readable() {
    let (code, out, _) = run(&["decide", "--surface", "enriques", "--a", "1,3", "--b", "2,2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("non_isomorphic"), "{out}");
    assert!(out.contains("majorization-euler"), "{out}");
}
