use std::path::PathBuf;

use clap::Args;
use polyembed::geometry::{SampleSpec, ShapeDescriptor};
use polyembed::maps::{build_main_lemma_map, snake_embedding, strip_lift, strip_separation_region, PeriodicDiffeo1D};
use polyembed::verify::{check_aperiodicity, check_phi_properties, PhiCheckConfig};
use polyembed::{MapNode, VerificationReport};
use serde::{Deserialize, Serialize};

use super::verify::run_checks;
use crate::config::{Format, RunConfig};
use crate::output::write_atomic;
use crate::CliError;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Render a saved JSON report document instead of running the suite.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Samples per check [default: config, else 100000].
    #[arg(long = "N")]
    n: Option<usize>,
}

/// The machine-readable document written for every run.
#[derive(Debug, Serialize, Deserialize)]
pub struct ReportDocument {
    pub config: RunConfig,
    pub report: VerificationReport,
}

/// Writes `<out>/reports/<stem>.txt` and `.json`, prints the requested format,
/// and maps the verdict to the exit status.
pub fn emit(cfg: &RunConfig, stem: &str, report: &VerificationReport) -> Result<(), CliError> {
    let text = format!("{}{}", cfg.header(), report.to_key_value());
    let doc = ReportDocument { config: cfg.clone(), report: report.clone() };
    let json = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))? + "\n";
    let dir = cfg.out_dir().join("reports");
    write_atomic(&dir.join(format!("{stem}.txt")), text.as_bytes())?;
    write_atomic(&dir.join(format!("{stem}.json")), json.as_bytes())?;
    match cfg.format {
        Format::Json => print!("{json}"),
        Format::Text | Format::Csv => print!("{text}"),
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} verdict: {}", report.check, report.verdict.as_str())))
    }
}

fn suite(samples: usize, seed: u64) -> Result<VerificationReport, CliError> {
    let spec = SampleSpec::uniform(samples, seed);
    let all = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();

    let phi = PeriodicDiffeo1D::new(1.0)?;
    let cfg = PhiCheckConfig {
        grid: samples,
        disk_samples: samples,
        disks: (samples / 1000).clamp(10, 1000),
        pairs_per_disk: 1000,
        seed,
    };
    let phi_report = check_phi_properties(&phi, &cfg);

    let ml = build_main_lemma_map(1.0)?;
    let ball = ShapeDescriptor::ball(4, 1.0)?;
    let mut ml_children = run_checks(&ml.node, &all(&["symplectic", "injective", "containment"]), &ball, &ml.node.target, &spec, None);
    ml_children.push(check_aperiodicity(&ml, 200, 200, seed, 0.2));
    let ml_report = VerificationReport::bundle("main_lemma_R1", ml_children);

    let lift = strip_lift(0.1, 0.2)?;
    let node = MapNode::strip_lift(lift)?;
    let strip_report = VerificationReport::bundle(
        "strip_lift_w0.1",
        run_checks(&node, &all(&["symplectic", "containment"]), &lift.domain(), &strip_separation_region(0.1)?, &spec, None),
    );

    let snake = snake_embedding([1.0, 40.0], [2.0, 20.0])?;
    let node = MapNode::snake(snake)?;
    let grid = SampleSpec::grid(samples);
    let snake_report = VerificationReport::bundle(
        "snake_X1_40_Xp2_20",
        run_checks(&node, &all(&["expanding", "containment", "injective"]), &snake.domain(), &snake.target_box(), &grid, None),
    );
    Ok(VerificationReport::bundle("suite", vec![phi_report, ml_report, strip_report, snake_report]))
}

pub fn run(cfg: &mut RunConfig, args: ReportArgs) -> Result<(), CliError> {
    if let Some(path) = args.input {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let doc: ReportDocument =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{} is not a report document: {e}", path.display())))?;
        print!("{}{}", doc.config.header(), doc.report.to_key_value());
        return if doc.report.passed() {
            Ok(())
        } else {
            Err(CliError::Failed(format!("{} verdict: {}", doc.report.check, doc.report.verdict.as_str())))
        };
    }
    if let Some(n) = args.n {
        cfg.samples = n;
    }
    let report = suite(cfg.samples, cfg.seed)?;
    emit(cfg, "suite", &report)
}
