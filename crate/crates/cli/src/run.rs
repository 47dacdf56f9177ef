//! Pipeline orchestration: ingest, sweep, classify, pair, export, compare.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};

use persifold::baseline::{exact_sweep_diagram, staircase};
use persifold::critical::extract_critical_points;
use persifold::grid::{build_hierarchy, GridDims};
use persifold::metrics::{self, DiagramMetricReport};
use persifold::pairing::compute_diagram;
use persifold::traversal::{sweep, ti_statistics, FoldingPolicy, TiStatistics};
use persifold::{FieldState, PairSelector, PairType, PersistenceDiagram, Scalar};

use crate::header::VolumeHeader;
use crate::io;
use crate::svg;

pub const DEFAULT_MAX_LEVELS: u32 = 32;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub epsilon_percent: f64,
    pub epsilon_abs: Option<f64>,
    pub pairs: PairSelector,
    pub compare: bool,
    pub baseline: bool,
    pub out_diagram: Option<PathBuf>,
    pub out_field: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
}

impl RunConfig {
    pub fn analysis_only(epsilon_percent: f64, compare: bool, baseline: bool) -> RunConfig {
        RunConfig {
            epsilon_percent,
            epsilon_abs: None,
            pairs: PairSelector::Both,
            compare,
            baseline,
            out_diagram: None,
            out_field: None,
            out_svg: None,
        }
    }
}

pub struct PipelineOutput {
    pub diagram: PersistenceDiagram,
    pub exact: Option<PersistenceDiagram>,
    pub stair: Option<PersistenceDiagram>,
    pub ti: TiStatistics,
    pub needs_criticality: usize,
    pub folded: usize,
    pub epsilon_abs: f64,
    pub original_f64: Vec<f64>,
    pub approx_f64: Vec<f64>,
    pub stair_field: Option<Vec<f64>>,
    pub approx_payload: Vec<u8>,
    pub wall: Duration,
}

impl PipelineOutput {
    pub fn report(&self) -> Result<DiagramMetricReport> {
        let exact = self
            .exact
            .as_ref()
            .context("run with --compare to get a report")?;
        Ok(metrics::report(
            &self.diagram,
            exact,
            &self.approx_f64,
            &self.original_f64,
        )?)
    }

    pub fn stair_report(&self) -> Option<Result<DiagramMetricReport>> {
        let exact = self.exact.as_ref()?;
        let stair = self.stair.as_ref()?;
        let field = self.stair_field.as_ref()?;
        Some(metrics::report(stair, exact, field, &self.original_f64).map_err(Into::into))
    }
}

/// Keeps only the pair families the selector asked for; the global pair
/// always stays. Used to restrict the reference diagrams so comparisons
/// stay like-for-like.
fn restrict(mut diagram: PersistenceDiagram, selector: PairSelector) -> PersistenceDiagram {
    diagram.pairs.retain(|p| match p.pair_type {
        PairType::MinSaddle => matches!(selector, PairSelector::MinSaddle | PairSelector::Both),
        PairType::SaddleMax => matches!(selector, PairSelector::SaddleMax | PairSelector::Both),
        PairType::Global => true,
    });
    diagram
}

pub fn execute_typed<S: Scalar>(
    values: Vec<S>,
    dims: GridDims,
    cfg: &RunConfig,
) -> Result<PipelineOutput> {
    let hier = build_hierarchy(dims, DEFAULT_MAX_LEVELS);
    let mut field = FieldState::new(values)?;
    let policy = match cfg.epsilon_abs {
        Some(eps) => FoldingPolicy::from_absolute(eps)?,
        None => FoldingPolicy::from_percent(cfg.epsilon_percent, field.range())?,
    };

    let start = Instant::now();
    let state = sweep(&hier, &mut field, &policy)?;
    let crits = extract_critical_points(&hier, &field, &state);
    let diagram = compute_diagram(&hier, &field, &crits, policy.epsilon_abs(), cfg.pairs);
    let wall = start.elapsed();

    let exact = if cfg.compare || cfg.baseline {
        Some(restrict(
            exact_sweep_diagram(field.original_values(), &hier)?,
            cfg.pairs,
        ))
    } else {
        None
    };
    let (stair, stair_field) = if cfg.baseline {
        let quantized = staircase(field.original_values(), policy.epsilon_abs())?;
        let d = restrict(exact_sweep_diagram(&quantized, &hier)?, cfg.pairs);
        (Some(d), Some(quantized))
    } else {
        (None, None)
    };

    Ok(PipelineOutput {
        exact,
        stair,
        ti: ti_statistics(&state),
        needs_criticality: state.needs_criticality_count(),
        folded: field.folded_count(),
        epsilon_abs: policy.epsilon_abs(),
        original_f64: field.original_values().iter().map(|v| v.to_f64()).collect(),
        approx_f64: field.approx_values().iter().map(|v| v.to_f64()).collect(),
        stair_field,
        approx_payload: io::encode_values(field.approx_values()),
        diagram,
        wall,
    })
}

/// Loads a payload + header pair and runs the typed pipeline.
pub fn execute_file(
    input: &std::path::Path,
    header_path: &std::path::Path,
    cfg: &RunConfig,
) -> Result<(PipelineOutput, VolumeHeader)> {
    let header = VolumeHeader::load(header_path)?;
    let payload =
        std::fs::read(input).with_context(|| format!("reading payload {}", input.display()))?;
    let dims =
        GridDims::new(&header.dims).with_context(|| format!("invalid dims {:?}", header.dims))?;
    let scalar_type = header.scalar_type()?;

    macro_rules! dispatch {
        ($($tag:ident => $ty:ty),+ $(,)?) => {
            match scalar_type {
                $(persifold::ScalarType::$tag => {
                    let values = io::decode_values::<$ty>(&payload, &header)?;
                    execute_typed::<$ty>(values, dims, cfg)?
                })+
            }
        };
    }
    let output = dispatch!(
        F32 => f32, F64 => f64,
        I8 => i8, I16 => i16, I32 => i32, I64 => i64,
        U8 => u8, U16 => u16, U32 => u32, U64 => u64,
    );
    Ok((output, header))
}

/// Writes the requested artifacts and prints the run summary.
pub fn emit_artifacts(
    output: &PipelineOutput,
    header: &VolumeHeader,
    cfg: &RunConfig,
) -> Result<()> {
    if let Some(path) = &cfg.out_diagram {
        io::write_diagram_csv(&output.diagram, path)?;
        println!("diagram: {}", path.display());
    }
    if let Some(path) = &cfg.out_svg {
        svg::render_svg(&output.diagram, path)?;
        println!("svg: {}", path.display());
    }
    if let Some(path) = &cfg.out_field {
        std::fs::write(path, &output.approx_payload)
            .with_context(|| format!("writing field {}", path.display()))?;
        let mut approx_header = header.clone();
        approx_header.name = Some(match &header.name {
            Some(n) => format!("{n}-approx"),
            None => "approx".to_string(),
        });
        let header_path = sidecar_path(path);
        approx_header.save(&header_path)?;
        println!("field: {} (+ {})", path.display(), header_path.display());
    }
    Ok(())
}

/// Header sidecar convention: `<payload-path>.json`.
pub fn sidecar_path(payload: &std::path::Path) -> PathBuf {
    let mut s = payload.as_os_str().to_os_string();
    s.push(".json");
    PathBuf::from(s)
}

pub fn print_summary(output: &PipelineOutput) {
    let (certain, uncertain) = persifold::pairing::classify_certainty(&output.diagram);
    println!(
        "epsilon_abs {:.6}  folded {}  ti {:.1}%  needs-criticality {}  pairs {} ({} certain, {} uncertain)  wall {:.1} ms",
        output.epsilon_abs,
        output.folded,
        output.ti.percent,
        output.needs_criticality,
        output.diagram.pairs.len(),
        certain,
        uncertain,
        output.wall.as_secs_f64() * 1e3,
    );
}

pub fn print_report(output: &PipelineOutput) -> Result<()> {
    let ours = output.report()?;
    println!();
    println!(
        "{:<12} {:>12} {:>12} {:>12} {:>12} {:>18}",
        "", "W_inf", "W2", "field L2", "field Linf", "pairs (uncertain)"
    );
    let row = |name: &str, r: &DiagramMetricReport| {
        println!(
            "{:<12} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12} ({})",
            name,
            r.w_inf,
            r.w2,
            r.field_l2,
            r.field_l_inf,
            r.pair_counts.approx_total,
            r.pair_counts.approx_uncertain
        );
    };
    row("ours", &ours);
    if let Some(stair) = output.stair_report() {
        row("staircase", &stair?);
    }
    println!(
        "exact pairs: {}   bound: W_inf <= epsilon_abs = {:.6}",
        ours.pair_counts.exact_total, output.epsilon_abs
    );
    if ours.w_inf > output.epsilon_abs + 1e-9 {
        bail!(
            "bottleneck {} exceeds the guaranteed bound {}",
            ours.w_inf,
            output.epsilon_abs
        );
    }
    Ok(())
}
