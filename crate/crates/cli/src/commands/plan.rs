use std::path::PathBuf;

use clap::Args;
use polyembed::certify::{parse_certificate, plan_theorem1, validate_chain, write_certificate};
use polyembed::{Factor, ShapeDescriptor};

use super::report::emit;
use crate::config::{Format, RunConfig};
use crate::output::write_atomic;
use crate::CliError;

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Source radii, comma-separated.
    #[arg(long = "P", value_delimiter = ',', num_args = 1, required_unless_present = "check")]
    p: Vec<f64>,
    /// Target radii, comma-separated; `inf` stands for a full plane.
    #[arg(long = "Pp", value_delimiter = ',', num_args = 1, required_unless_present = "check")]
    pp: Vec<f64>,
    /// Validate an existing certificate instead of planning.
    #[arg(long, conflicts_with_all = ["p", "pp"])]
    check: Option<PathBuf>,
    /// Certificate file name under <out>/plans [default: plan].
    #[arg(long)]
    name: Option<String>,
}

fn polydisk(radii: &[f64], flag: &str) -> Result<ShapeDescriptor, CliError> {
    if radii.iter().any(|r| r.is_nan() || *r <= 0.0) {
        return Err(CliError::Usage(format!("{flag}: radii must be positive")));
    }
    let mut r = radii.to_vec();
    r.sort_by(f64::total_cmp);
    let factors = r
        .into_iter()
        .map(|radius| if radius.is_finite() { Factor::Disk2 { radius } } else { Factor::FullPlane })
        .collect();
    Ok(ShapeDescriptor::new(factors)?)
}

pub fn run(cfg: &RunConfig, args: PlanArgs) -> Result<(), CliError> {
    if let Some(path) = args.check {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let claims = parse_certificate(&text)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("certificate");
        return emit(cfg, &format!("check_{stem}"), &validate_chain(&claims));
    }
    let (p, q) = (polydisk(&args.p, "--P")?, polydisk(&args.pp, "--Pp")?);
    if p.dim() != q.dim() {
        return Err(CliError::Usage(format!("--P has {} radii but --Pp has {}", p.n(), q.n())));
    }
    let plan = plan_theorem1(&p, &q).map_err(|e| CliError::Failed(format!("no chain: {e}")))?;
    let report = validate_chain(std::slice::from_ref(&plan.claim));
    let cert = write_certificate(std::slice::from_ref(&plan.claim));
    let path = cfg.out_dir().join("plans").join(format!("{}.cert", args.name.as_deref().unwrap_or("plan")));
    write_atomic(&path, cert.as_bytes())?;
    match cfg.format {
        Format::Json => {
            let doc = serde_json::json!({ "config": cfg, "constant": plan.constant, "plan": plan });
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?);
        }
        Format::Text | Format::Csv => {
            print!("{}", cfg.header());
            println!("# {} ↪ {}", plan.source, plan.target);
            println!("# constant C({}) = {}", p.n(), plan.constant);
            for (k, s) in plan.steps.iter().enumerate() {
                println!("# step {k} {:?} lambda={} {} -> {}", s.phase, s.lambda, s.claim.source, s.claim.target);
            }
            print!("{cert}");
        }
    }
    eprintln!("wrote {}", path.display());
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("planned chain failed validation: {}", report.to_key_value())))
    }
}
