mod common;

use std::fs;

use trialbandit::runner::{run_experiment, DatasetSource, ExperimentConfig};
use trialbandit::{load_csv, ArmId, ContextIndex, Error, MissingPolicy, Outcome, OutcomeModel, PolicyKind};

use common::*;

fn fixture_text() -> String {
    fs::read_to_string(fixture_dir().join("ist_fixture.csv")).unwrap()
}

#[test]
fn blank_outcome_is_dropped_and_counted() {
    let text = fixture_text();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    // Blank the ID14 cell (last column) of the 6th data row.
    let row = &mut lines[6];
    let cut = row.rfind(',').unwrap();
    row.truncate(cut + 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blank.csv");
    fs::write(&path, lines.join("\n")).unwrap();

    let ds = load_csv(&path, &ist_mapping(), MissingPolicy::Drop).unwrap();
    assert_eq!(ds.records.len(), 39);
    assert_eq!(ds.excluded, 1);
    assert!(ds.records.iter().enumerate().all(|(i, r)| r.sequence == i as u64));

    match load_csv(&path, &ist_mapping(), MissingPolicy::Error) {
        Err(Error::MissingField { column, row }) => {
            assert_eq!(column, "ID14");
            assert_eq!(row, 7);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn nonexistent_column_is_schema_error() {
    let mut mapping = ist_mapping();
    let map = mapping.values.remove("ID14").unwrap();
    mapping.values.insert("DEATH14".into(), map);
    mapping.outcome_col = "DEATH14".into();
    let err = load_csv(fixture_dir().join("ist_fixture.csv"), &mapping, MissingPolicy::Drop).unwrap_err();
    assert!(matches!(err, Error::Schema { ref column } if column == "DEATH14"), "{err}");
}

#[test]
fn yes_no_outcome_column() {
    // DDEAD carries the same information as ID14 in Y/N form.
    let mut mapping = ist_mapping();
    mapping.values.remove("ID14");
    mapping
        .values
        .insert("DDEAD".into(), [("Y".to_string(), 1), ("N".to_string(), 0)].into_iter().collect());
    mapping.outcome_col = "DDEAD".into();
    let by_yn = load_csv(fixture_dir().join("ist_fixture.csv"), &mapping, MissingPolicy::Drop).unwrap();
    let by_num = load_csv(fixture_dir().join("ist_fixture.csv"), &ist_mapping(), MissingPolicy::Drop).unwrap();
    assert_eq!(by_yn.records, by_num.records);

    let text = fixture_text();
    let first_dead = text.lines().skip(1).position(|l| l.ends_with("\"Y\",1")).unwrap();
    assert_eq!(by_yn.records[first_dead].outcome, Outcome::Failure);
}

#[test]
fn fixture_has_every_cell() {
    let ds = load_csv(fixture_dir().join("ist_fixture.csv"), &ist_mapping(), MissingPolicy::Drop).unwrap();
    let model = OutcomeModel::estimate(&ds.records, ds.k, false).unwrap();
    for m in 0..2 {
        let total: u64 = (0..4)
            .map(|u| model.counts(ContextIndex(m), ArmId(u)).unwrap().1)
            .sum();
        assert!(total > 0);
    }
    assert_eq!(model.contexts().len(), 2);
}

#[test]
fn replay_fixture_end_to_end() {
    let mut cfg = ExperimentConfig::synthetic(trialbandit::SyntheticSpec {
        d: 0,
        k: 1,
        n: 1,
        theta: vec![vec![0.5]],
        context_freq: None,
    });
    cfg.synthetic = None;
    cfg.dataset = Some(DatasetSource {
        path: fixture_dir().join("ist_fixture.csv"),
        missing: MissingPolicy::Drop,
        mapping: ist_mapping(),
    });
    cfg.runs = 5;
    cfg.contextual = true;
    cfg.policies = PolicyKind::ALL.to_vec();
    let res = run_experiment(&cfg).unwrap();
    assert_eq!(res.horizon, 40);
    assert_eq!(res.runs.len(), 20);
    for run in &res.runs {
        let steps = run.steps.as_ref().unwrap();
        // Replay keeps the recorded contexts in admission order.
        let ds = load_csv(fixture_dir().join("ist_fixture.csv"), &ist_mapping(), MissingPolicy::Drop).unwrap();
        let recorded: Vec<_> = ds.records.iter().map(|r| r.context.index()).collect();
        let replayed: Vec<_> = steps.iter().map(|s| s.context).collect();
        assert_eq!(recorded, replayed);
        assert!(steps.iter().all(|s| s.theta_opt >= s.theta_chosen));
    }
}
