use mwt::harness::{self, Catalog, Config, Status, SCHEMA};
use mwt::transfers::Mutation;

fn only(ids: &[&str]) -> Option<Vec<String>> {
    Some(ids.iter().map(|s| s.to_string()).collect())
}

#[test]
fn default_run_passes_and_is_deterministic() {
    let cfg = Config::default();
    let a = harness::run(&cfg).unwrap();
    assert_eq!(a.results.len(), harness::check_ids().count());
    for r in &a.results {
        assert_eq!(r.status, Status::Pass, "{}: {:?}", r.id, r.witness);
        assert!(!r.anchor.is_empty());
    }
    assert!(a.passed());
    assert_eq!(a.exit_code(), 0);
    let b = harness::run(&cfg).unwrap();
    assert_eq!(a.to_json_lines(), b.to_json_lines());
}

#[test]
fn json_lines_follow_the_schema() {
    let cfg = Config {
        only: only(&["transfer.unicity", "corr.graph_transfer"]),
        ..Config::default()
    };
    let report = harness::run(&cfg).unwrap();
    let lines = report.to_json_lines();
    let records: Vec<serde_json::Value> = lines.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["id"], "corr.graph_transfer");
    for r in &records {
        assert_eq!(r["schema"], SCHEMA);
        assert_eq!(r["status"], "pass");
        assert!(r["witness"].is_null());
        assert_eq!(r["millis"], 0);
        assert!(r["anchor"].is_string());
    }
}

#[test]
fn empty_sample_count_gives_an_empty_passing_report() {
    let cfg = Config {
        samples: 0,
        ..Config::default()
    };
    let report = harness::run(&cfg).unwrap();
    assert!(report.results.is_empty());
    assert!(report.passed());
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn unknown_checks_and_catalog_entries_are_rejected() {
    let cfg = Config {
        only: only(&["no.such.check"]),
        ..Config::default()
    };
    assert!(harness::run(&cfg).is_err());
    assert!(Catalog::parse(&["GF(4)"]).is_err());
    assert!(Catalog::parse(&[]).is_err());
}

#[test]
fn sign_flip_at_infinity_fails_unicity_with_a_witness() {
    let cfg = Config {
        only: only(&["transfer.unicity"]),
        mutation: Some(Mutation::FlipInfinitySign),
        ..Config::default()
    };
    let report = harness::run(&cfg).unwrap();
    let r = report.get("transfer.unicity").unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(r.witness.as_deref().is_some_and(|w| !w.is_empty()));
    assert_eq!(report.exit_code(), 2);
}

#[test]
fn dropping_length_weights_fails_base_change() {
    let cfg = Config {
        only: only(&["transfer.base_change.catalog"]),
        mutation: Some(Mutation::DropEpsilon),
        ..Config::default()
    };
    let report = harness::run(&cfg).unwrap();
    assert_eq!(report.get("transfer.base_change.catalog").unwrap().status, Status::Fail);
}

#[test]
fn seeds_change_samples_but_not_verdicts() {
    for seed in [1, 2] {
        let cfg = Config {
            seed,
            only: only(&["residue.split_exact", "transfer.projection.base", "rs.pushforward_commutes"]),
            ..Config::default()
        };
        assert!(harness::run(&cfg).unwrap().passed(), "seed {seed}");
    }
}
