//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p trialbandit-core --test acceptance -- --nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use trialbandit::rng::seeded;
use trialbandit::runner::{run_experiment, write_bundle, ExperimentConfig};
use trialbandit::{
    load_csv, select_thompson, select_ucb, ArmId, BernoulliBandit, Context, ContextualBandit,
    MissingPolicy, Outcome, OutcomeModel, PolicyKind,
};

use common::*;

fn report(id: u32, name: &str, ok: bool, detail: String, elapsed: Duration, limit: Option<Duration>) {
    let in_time = limit.is_none_or(|l| elapsed < l);
    let pass = ok && in_time;
    let limit = limit.map(|l| format!(" / limit {:.0} s", l.as_secs_f64())).unwrap_or_default();
    println!(
        "[{}] C{id} {name}: {detail} ({:.2} s{limit})",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
    assert!(in_time, "criterion {id} ({name}) exceeded its time limit");
}

fn mean_final_suboptimal(cfg: &ExperimentConfig, policy: PolicyKind) -> f64 {
    run_experiment(cfg)
        .unwrap()
        .aggregate_of(policy)
        .unwrap()
        .final_suboptimal
        .mean
}

#[test]
fn c01_contextual_degeneracy() {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for policy in PolicyKind::ALL {
        let mut cfg = four_arm(2_000, 3, &[policy]);
        cfg.write_steps = true;
        let flat = tempfile::tempdir().unwrap();
        let ctx = tempfile::tempdir().unwrap();
        cfg.contextual = false;
        write_bundle(&run_experiment(&cfg).unwrap(), flat.path()).unwrap();
        cfg.contextual = true;
        write_bundle(&run_experiment(&cfg).unwrap(), ctx.path()).unwrap();
        let a = read_dir_bytes(flat.path());
        let b = read_dir_bytes(ctx.path());
        let steps: Vec<_> = a.keys().filter(|k| k.starts_with("steps_")).collect();
        assert_eq!(steps.len(), 3);
        for name in steps {
            if a[name] != b[name] {
                mismatches.push(name.clone());
            }
        }
    }
    report(
        1,
        "contextual degeneracy (D=0)",
        mismatches.is_empty(),
        format!("{} step logs differ across 4 policies", mismatches.len()),
        start.elapsed(),
        Some(Duration::from_secs(5)),
    );
}

#[test]
fn c02_ucb_round_robin() {
    let start = Instant::now();
    let mut ok = true;
    for pattern in 0u32..16 {
        let mut b = BernoulliBandit::new(4).unwrap();
        let mut cb = ContextualBandit::new(1, 4).unwrap();
        let x = Context::new(vec![1]).unwrap();
        let mut rng = seeded(0);
        for u in 0..4 {
            let outcome = Outcome::from_success(pattern >> u & 1 == 1);
            let arm = select_ucb(&b);
            let carm = cb.select(&x, PolicyKind::Ucb, &mut rng).unwrap();
            ok &= arm == ArmId(u) && carm == ArmId(u);
            b.update(arm, outcome).unwrap();
            cb.observe(&x, carm, outcome).unwrap();
        }
    }
    report(2, "UCB round-robin", ok, "first 4 picks = 0,1,2,3 for all 16 outcome patterns".into(), start.elapsed(), None);
}

#[test]
fn c03_thompson_symmetry() {
    let start = Instant::now();
    let b = BernoulliBandit::new(4).unwrap();
    let mut rng = seeded(303);
    let n = 100_000;
    let mut counts = [0usize; 4];
    for _ in 0..n {
        counts[select_thompson(&b, &mut rng).0] += 1;
    }
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let ok = freq.iter().all(|f| (f - 0.25).abs() <= 0.01);
    report(3, "Thompson symmetry", ok, format!("frequencies {freq:.4?}"), start.elapsed(), Some(Duration::from_secs(10)));
}

#[test]
fn c04_posterior_convergence() {
    let start = Instant::now();
    let truth = OutcomeModel::from_table(0, &[vec![0.65]]).unwrap();
    let mut b = BernoulliBandit::new(1).unwrap();
    let mut rng = seeded(404);
    for _ in 0..10_000 {
        let o = truth.draw_outcome(&Context::empty(), ArmId(0), &mut rng).unwrap();
        b.update(ArmId(0), o).unwrap();
    }
    let mean = b.arms()[0].mean();
    report(
        4,
        "posterior convergence",
        (mean - 0.65).abs() < 0.02,
        format!("posterior mean {mean:.4} after 10^4 updates"),
        start.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn c05_synthetic_ist_scale() {
    let start = Instant::now();
    let cfg = four_arm(19_435, 20, &[PolicyKind::Random, PolicyKind::Thompson, PolicyKind::Ucb]);
    let res = run_experiment(&cfg).unwrap();
    let ratios = |p| {
        let a = res.aggregate_of(p).unwrap();
        (a.regret_ratio.unwrap().mean, a.suboptimal_ratio.unwrap().mean)
    };
    let (ts_r, ts_s) = ratios(PolicyKind::Thompson);
    let (ucb_r, ucb_s) = ratios(PolicyKind::Ucb);
    let ok = ts_r < 30.0 && ucb_r < 60.0 && ts_s < 50.0 && ucb_s < 85.0;
    report(
        5,
        "synthetic IST-scale comparison",
        ok,
        format!(
            "regret % of random: thompson {ts_r:.2} (<30), ucb {ucb_r:.2} (<60); suboptimal %: thompson {ts_s:.2} (<50), ucb {ucb_s:.2} (<85)"
        ),
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn c06_contextual_advantage() {
    let start = Instant::now();
    let mut cfg = opposite_contexts(19_435, 20, &[PolicyKind::Thompson]);
    cfg.contextual = true;
    let contextual = mean_final_suboptimal(&cfg, PolicyKind::Thompson);
    cfg.contextual = false;
    let flat = mean_final_suboptimal(&cfg, PolicyKind::Thompson);
    let ratio = contextual / flat;
    report(
        6,
        "contextual advantage",
        ratio < 0.6,
        format!("mean suboptimal draws contextual {contextual:.1} vs context-free {flat:.1} (ratio {ratio:.3} < 0.6)"),
        start.elapsed(),
        Some(Duration::from_secs(90)),
    );
}

#[test]
fn c07_sublinear_regret() {
    let start = Instant::now();
    let cfg = four_arm(20_000, 20, &[PolicyKind::Random, PolicyKind::Thompson]);
    let res = run_experiment(&cfg).unwrap();
    let growth = |p| {
        let mean = &res.aggregate_of(p).unwrap().regret.mean;
        mean[19_999] / mean[9_999]
    };
    let ts = growth(PolicyKind::Thompson);
    let rnd = growth(PolicyKind::Random);
    report(
        7,
        "sublinearity shape",
        ts < 1.7 && (1.95..=2.05).contains(&rnd),
        format!("R(20000)/R(10000): thompson {ts:.3} (<1.7), random {rnd:.3} (in [1.95, 2.05])"),
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn c08_random_suboptimal_fraction() {
    let start = Instant::now();
    let cfg = four_arm(19_435, 20, &[PolicyKind::Random]);
    let fraction = mean_final_suboptimal(&cfg, PolicyKind::Random) / 19_435.0;
    report(
        8,
        "random suboptimal fraction",
        (0.73..=0.77).contains(&fraction),
        format!("mean S/N = {fraction:.4} (analytic 0.75)"),
        start.elapsed(),
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn c09_determinism() {
    let start = Instant::now();
    let mut configs = vec![
        four_arm(19_435, 20, &[PolicyKind::Random, PolicyKind::Thompson, PolicyKind::Ucb]),
        opposite_contexts(19_435, 20, &[PolicyKind::Thompson]),
    ];
    configs[1].contextual = true;
    let mut identical = 0;
    let mut total = 0;
    for mut cfg in configs {
        cfg.write_steps = true;
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        write_bundle(&run_experiment(&cfg).unwrap(), a.path()).unwrap();
        cfg.workers = 1;
        write_bundle(&run_experiment(&cfg).unwrap(), b.path()).unwrap();
        let (fa, fb) = (read_dir_bytes(a.path()), read_dir_bytes(b.path()));
        total += fa.len().max(fb.len());
        identical += fa.iter().filter(|(k, v)| fb.get(*k) == Some(*v)).count();
    }
    report(
        9,
        "determinism",
        identical == total,
        format!("{identical}/{total} output files byte-identical on rerun"),
        start.elapsed(),
        None,
    );
}

#[test]
fn c10_ingestion_fixture() {
    let start = Instant::now();
    let ds = load_csv(fixture_dir().join("ist_fixture.csv"), &ist_mapping(), MissingPolicy::Drop).unwrap();
    let expected = std::fs::read_to_string(fixture_dir().join("ist_fixture.expected.csv")).unwrap();
    let expected: Vec<(usize, u32, u8)> = expected
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect();
    let got: Vec<(usize, u32, u8)> = ds
        .records
        .iter()
        .map(|r| (r.arm.0, r.context.index().0, r.outcome.value()))
        .collect();
    let ok = ds.records.len() == 40 && ds.excluded == 0 && got == expected;
    report(
        10,
        "ingestion fixture",
        ok,
        format!("{} records, {} excluded, audit match = {}", ds.records.len(), ds.excluded, got == expected),
        start.elapsed(),
        None,
    );
}

/// Needs the real IST CSV: set `TRIALBANDIT_IST_CSV` to its path.
#[test]
fn c11_ist_table_bands() {
    let Some(path) = std::env::var_os("TRIALBANDIT_IST_CSV") else {
        println!("[SKIP] C11 IST table bands: TRIALBANDIT_IST_CSV not set");
        return;
    };
    let start = Instant::now();
    let config_path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/ist.toml");
    let mut cfg = ExperimentConfig::from_file(config_path).unwrap();
    cfg.dataset.as_mut().unwrap().path = path.into();
    cfg.write_steps = false;
    cfg.runs = 20;

    cfg.contextual = false;
    let flat = run_experiment(&cfg).unwrap();
    cfg.contextual = true;
    let ctx = run_experiment(&cfg).unwrap();
    let regret = |r: &trialbandit::ExperimentResults, p| r.aggregate_of(p).unwrap().regret_ratio.unwrap().mean;
    let subopt = |r: &trialbandit::ExperimentResults, p| r.aggregate_of(p).unwrap().suboptimal_ratio.unwrap().mean;
    let checks = [
        ("context-free thompson regret", regret(&flat, PolicyKind::Thompson), 11.18, 5.0),
        ("context-free ucb regret", regret(&flat, PolicyKind::Ucb), 29.57, 7.0),
        ("contextual thompson suboptimal", subopt(&ctx, PolicyKind::Thompson), 27.37, 2.0),
        ("contextual ucb suboptimal", subopt(&ctx, PolicyKind::Ucb), 44.78, 3.0),
    ];
    let detail = checks
        .iter()
        .map(|(n, v, c, w)| format!("{n} {v:.2} in {c}±{w}"))
        .collect::<Vec<_>>()
        .join("; ");
    let ok = checks.iter().all(|(_, v, c, w)| (v - c).abs() <= *w);
    report(11, "IST table bands", ok, detail, start.elapsed(), None);
}
