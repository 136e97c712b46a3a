//! Result files.
//!
//! | file                          | format                                   |
//! |-------------------------------|------------------------------------------|
//! | `steps_<policy>_<run>.csv`    | one row per participant                  |
//! | `summary_<policy>.csv`        | one row per run                          |
//! | `aggregate.txt`               | TOML, one table per policy               |
//! | `plot_<policy>_<metric>.dat`  | `step mean band_low band_high`, spaces   |
//!
//! Real numbers are written with 9 significant digits (C's `%.9g`).

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::{AggregateSummary, BandedCurve, RegretMode};

use super::config::Evaluation;
use super::experiment::ExperimentResults;

/// Paths of the files written for one experiment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultsBundle {
    pub dir: PathBuf,
    pub steps: Vec<PathBuf>,
    pub summaries: Vec<PathBuf>,
    pub aggregate: PathBuf,
    pub plots: Vec<PathBuf>,
}

impl ResultsBundle {
    pub fn all_files(&self) -> Vec<&Path> {
        self.steps
            .iter()
            .chain(&self.summaries)
            .chain(std::iter::once(&self.aggregate))
            .chain(&self.plots)
            .map(PathBuf::as_path)
            .collect()
    }
}

/// `%.9g`: 9 significant digits, trailing zeros removed, exponent form
/// outside `1e-4 <= |x| < 1e9`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct Out {
    path: PathBuf,
    w: BufWriter<File>,
}

impl Out {
    fn create(path: PathBuf) -> Result<Self> {
        let f = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(Out {
            w: BufWriter::new(f),
            path,
        })
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.w, "{s}").map_err(|e| Error::io(&self.path, e))
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.w.flush().map_err(|e| Error::io(&self.path, e))?;
        Ok(self.path)
    }
}

/// Writes every result file into `dir`, creating it if needed.
pub fn write_bundle(results: &ExperimentResults, dir: impl AsRef<Path>) -> Result<ResultsBundle> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut bundle = ResultsBundle {
        dir: dir.to_path_buf(),
        ..Default::default()
    };

    for run in &results.runs {
        let Some(steps) = &run.steps else { continue };
        let s = &run.summary;
        let mut out = Out::create(dir.join(format!("steps_{}_{}.csv", s.policy, s.run)))?;
        out.line("step,context,arm,outcome,optimal_arm,theta_opt,theta_chosen,regret,cum_regret,cum_suboptimal")?;
        for (i, st) in steps.iter().enumerate() {
            out.line(&format!(
                "{},{},{},{},{},{},{},{},{},{}",
                st.step,
                st.context,
                st.arm,
                st.outcome.value(),
                st.optimal_arm,
                format_number(st.theta_opt),
                format_number(st.theta_chosen),
                format_number(st.regret),
                format_number(s.regret_curve[i]),
                s.suboptimal_curve[i],
            ))?;
        }
        bundle.steps.push(out.finish()?);
    }

    for agg in &results.aggregates {
        let mut out = Out::create(dir.join(format!("summary_{}.csv", agg.policy)))?;
        out.line("run,seed,steps,final_regret,final_suboptimal,suboptimal_fraction")?;
        for run in results.runs_of(agg.policy) {
            let s = &run.summary;
            let n = s.len();
            let fraction = if n == 0 {
                0.0
            } else {
                s.final_suboptimal() as f64 / n as f64
            };
            out.line(&format!(
                "{},{},{},{},{},{}",
                s.run,
                s.seed,
                n,
                format_number(s.final_regret()),
                s.final_suboptimal(),
                format_number(fraction),
            ))?;
        }
        bundle.summaries.push(out.finish()?);
    }

    bundle.aggregate = write_aggregate(results, dir)?;
    bundle.plots = emit_plot_data(&results.aggregates, dir)?;
    Ok(bundle)
}

fn write_aggregate(results: &ExperimentResults, dir: &Path) -> Result<PathBuf> {
    let cfg = &results.config;
    let mode = if cfg.contextual { "contextual" } else { "context-free" };
    let source = if cfg.dataset.is_some() { "dataset" } else { "synthetic" };
    let evaluation = if cfg.evaluates_per_context() { "per_context" } else { "pooled" };
    let regret_mode = match cfg.regret_mode {
        RegretMode::Pseudo => "pseudo",
        RegretMode::Realized => "realized",
    };
    let mut out = Out::create(dir.join("aggregate.txt"))?;
    out.line(&format!("source = \"{source}\""))?;
    out.line(&format!("mode = \"{mode}\""))?;
    out.line(&format!("evaluation = \"{evaluation}\""))?;
    if cfg.evaluation != Evaluation::Auto {
        out.line("evaluation_override = true")?;
    }
    out.line(&format!("regret_mode = \"{regret_mode}\""))?;
    out.line(&format!("seed = {}", cfg.seed))?;
    out.line(&format!("runs = {}", cfg.runs))?;
    out.line(&format!("steps = {}", results.horizon))?;
    out.line(&format!("excluded_rows = {}", results.excluded))?;
    out.line(&format!("band_low = {}", format_number(cfg.band.low)))?;
    out.line(&format!("band_high = {}", format_number(cfg.band.high)))?;
    for agg in &results.aggregates {
        out.line("")?;
        out.line(&format!("[{}]", agg.policy))?;
        out.line(&format!("policy = \"{}\"", agg.policy))?;
        out.line(&format!("mode = \"{mode}\""))?;
        let kv = |key: &str, v: f64| format!("{key} = {}", format_number(v));
        out.line(&kv("mean_final_regret", agg.final_regret.mean))?;
        out.line(&kv("std", agg.final_regret.std))?;
        out.line(&kv("mean_final_suboptimal", agg.final_suboptimal.mean))?;
        out.line(&kv("std_final_suboptimal", agg.final_suboptimal.std))?;
        if let (Some(r), Some(s)) = (agg.regret_ratio, agg.suboptimal_ratio) {
            out.line(&kv("ratio_vs_random_pct", r.mean))?;
            out.line(&kv("ratio_vs_random_std_pct", r.std))?;
            out.line(&kv("suboptimal_ratio_vs_random_pct", s.mean))?;
            out.line(&kv("suboptimal_ratio_vs_random_std_pct", s.std))?;
        }
    }
    out.finish()
}

/// One whitespace-delimited file per (policy, metric) with columns
/// `step mean band_low band_high`.
pub fn emit_plot_data(aggregates: &[AggregateSummary], dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for agg in aggregates {
        for (metric, curve) in [("regret", &agg.regret), ("suboptimal", &agg.suboptimal)] {
            paths.push(write_curve(dir.join(format!("plot_{}_{metric}.dat", agg.policy)), curve)?);
        }
    }
    Ok(paths)
}

fn write_curve(path: PathBuf, curve: &BandedCurve) -> Result<PathBuf> {
    let mut out = Out::create(path)?;
    out.line("step mean band_low band_high")?;
    for i in 0..curve.mean.len() {
        out.line(&format!(
            "{} {} {} {}",
            i + 1,
            format_number(curve.mean[i]),
            format_number(curve.low[i]),
            format_number(curve.high[i]),
        ))?;
    }
    out.finish()
}
