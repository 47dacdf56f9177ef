//! Benchmark harness over the built-in synthetic datasets (plus an input
//! file when given): TI fractions, workload counts, wall times and
//! accuracy metrics per (dataset, epsilon). Timings are reported, never
//! asserted.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use persifold::grid::GridDims;
use persifold::synth;

use crate::run::{execute_file, execute_typed, RunConfig};

pub struct BenchConfig {
    pub seed: u64,
    pub baseline: bool,
    pub input: Option<(PathBuf, PathBuf)>,
    pub out_csv: Option<PathBuf>,
}

struct BenchRow {
    dataset: String,
    epsilon_percent: f64,
    ti_percent: f64,
    needs_criticality: usize,
    wall_ms: f64,
    w_inf: f64,
    w2: f64,
    field_l2: f64,
    field_l_inf: f64,
    stair_w2: Option<f64>,
    stair_l2: Option<f64>,
}

const EPSILONS: [f64; 4] = [0.0, 1.0, 5.0, 10.0];

fn synthetic_datasets(seed: u64) -> Vec<(String, GridDims, Vec<f64>)> {
    let d2 = GridDims::new(&[33, 33]).unwrap();
    let d3 = GridDims::new(&[17, 17, 17]).unwrap();
    vec![
        ("ramp-33x33".into(), d2, synth::ramp(d2)),
        ("multi-bump-33x33".into(), d2, synth::multi_bump(d2)),
        (
            "uniform-noise-33x33".into(),
            d2,
            synth::uniform_noise(d2, seed),
        ),
        (
            "bump-noise-33x33".into(),
            d2,
            synth::bump_noise(d2, seed, 0.05),
        ),
        (
            "bump-noise-17x17x17".into(),
            d3,
            synth::bump_noise(d3, seed, 0.05),
        ),
    ]
}

fn bench_one(
    dataset: &str,
    epsilon: f64,
    baseline: bool,
    mut run: impl FnMut(&RunConfig) -> Result<crate::run::PipelineOutput>,
) -> Result<BenchRow> {
    // the staircase baseline needs a positive step
    let with_baseline = baseline && epsilon > 0.0;
    let cfg = RunConfig::analysis_only(epsilon, true, with_baseline);
    let output = run(&cfg)?;
    let report = output.report()?;
    let stair = match output.stair_report() {
        Some(r) => Some(r?),
        None => None,
    };
    Ok(BenchRow {
        dataset: dataset.to_string(),
        epsilon_percent: epsilon,
        ti_percent: output.ti.percent,
        needs_criticality: output.needs_criticality,
        wall_ms: output.wall.as_secs_f64() * 1e3,
        w_inf: report.w_inf,
        w2: report.w2,
        field_l2: report.field_l2,
        field_l_inf: report.field_l_inf,
        stair_w2: stair.as_ref().map(|r| r.w2),
        stair_l2: stair.as_ref().map(|r| r.field_l2),
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<()> {
    let mut rows: Vec<BenchRow> = Vec::new();
    for (name, dims, values) in synthetic_datasets(cfg.seed) {
        for epsilon in EPSILONS {
            rows.push(bench_one(&name, epsilon, cfg.baseline, |rc| {
                execute_typed(values.clone(), dims, rc)
            })?);
        }
    }
    if let Some((input, header)) = &cfg.input {
        let name = input
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into());
        for epsilon in EPSILONS {
            rows.push(bench_one(&name, epsilon, cfg.baseline, |rc| {
                execute_file(input, header, rc).map(|(o, _)| o)
            })?);
        }
    }

    println!(
        "{:<22} {:>5} {:>7} {:>10} {:>9} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "dataset",
        "eps%",
        "ti%",
        "needsCrit",
        "wall ms",
        "W_inf",
        "W2",
        "L2",
        "Linf",
        "stair W2",
        "stair L2"
    );
    for r in &rows {
        println!(
            "{:<22} {:>5} {:>7.2} {:>10} {:>9.2} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10} {:>10}",
            r.dataset,
            r.epsilon_percent,
            r.ti_percent,
            r.needs_criticality,
            r.wall_ms,
            r.w_inf,
            r.w2,
            r.field_l2,
            r.field_l_inf,
            opt(r.stair_w2),
            opt(r.stair_l2),
        );
    }

    if let Some(path) = &cfg.out_csv {
        write_csv(&rows, path)?;
        println!("benchmark csv: {}", path.display());
    }
    Ok(())
}

fn write_csv(rows: &[BenchRow], path: &Path) -> Result<()> {
    let mut out = String::from(
        "dataset,epsilonPercent,tiPercent,needsCriticality,wallMs,wInf,w2,fieldL2,fieldLInf,stairW2,stairL2\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.dataset,
            r.epsilon_percent,
            r.ti_percent,
            r.needs_criticality,
            r.wall_ms,
            r.w_inf,
            r.w2,
            r.field_l2,
            r.field_l_inf,
            r.stair_w2.map_or_else(|| "".into(), |v| v.to_string()),
            r.stair_l2.map_or_else(|| "".into(), |v| v.to_string()),
        ));
    }
    std::fs::write(path, out).with_context(|| format!("writing benchmark csv {}", path.display()))
}
