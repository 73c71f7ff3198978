use clap::Args;
use polyembed::geometry::{Factor, SampleSpec};
use polyembed::verify::{
    check_containment, check_expanding, check_injective, check_symplectic, check_symplectic_with,
    check_volume_preserved, LatticeQuotient,
};
use polyembed::{parse_shape, MapNode, ShapeDescriptor, VerificationReport};

use super::resolve_map;
use super::report::emit;
use crate::config::RunConfig;
use crate::CliError;

pub const CHECKS: [&str; 5] = ["symplectic", "injective", "containment", "volume", "expanding"];

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Descriptor path, or a name under <out>/maps.
    #[arg(long)]
    map: String,
    /// Comma-separated subset of symplectic, injective, containment, volume, expanding.
    #[arg(long, value_delimiter = ',', default_value = "symplectic,injective,containment")]
    checks: Vec<String>,
    /// Sample count [default: config, else 100000].
    #[arg(long = "N")]
    n: Option<usize>,
    /// Domain shape literal [default: the map's domain].
    #[arg(long)]
    domain: Option<String>,
    /// Target shape literal [default: the map's target].
    #[arg(long)]
    target: Option<String>,
    /// Override the symplectic residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Sample on a grid instead of uniformly.
    #[arg(long)]
    grid: bool,
}

fn shape_arg(cfg: &RunConfig, flag: Option<&str>, key: &str, fallback: &ShapeDescriptor) -> Result<ShapeDescriptor, CliError> {
    if let Some(text) = flag {
        return parse_shape(text).map_err(|e| CliError::Usage(format!("--{key}: {e}")));
    }
    Ok(cfg.shape(key)?.unwrap_or_else(|| fallback.clone()))
}

pub fn run_checks(
    node: &MapNode,
    checks: &[String],
    domain: &ShapeDescriptor,
    target: &ShapeDescriptor,
    spec: &SampleSpec,
    tol: Option<f64>,
) -> Vec<VerificationReport> {
    let lattice = matches!(target.factors().first(), Some(Factor::Surface { .. })).then(LatticeQuotient::first_pair);
    checks
        .iter()
        .map(|c| match c.as_str() {
            "symplectic" => match tol {
                Some(t) => check_symplectic_with(node, domain, spec, t),
                None => check_symplectic(node, domain, spec),
            },
            "injective" => check_injective(node, domain, spec, lattice),
            "containment" => check_containment(node, domain, target, spec),
            "volume" => check_volume_preserved(node, domain, spec),
            "expanding" => check_expanding(node, domain, spec),
            _ => unreachable!("checks are validated before running"),
        })
        .collect()
}

pub fn run(cfg: &mut RunConfig, args: VerifyArgs) -> Result<(), CliError> {
    if let Some(bad) = args.checks.iter().find(|c| !CHECKS.contains(&c.as_str())) {
        return Err(CliError::Usage(format!("unknown check `{bad}`; expected one of {}", CHECKS.join(", "))));
    }
    let (name, node) = resolve_map(cfg, &args.map)?;
    if let Some(n) = args.n {
        cfg.samples = n;
    }
    if let Some(t) = args.tol {
        cfg.tolerance.symplectic = Some(t);
    }
    let domain = shape_arg(cfg, args.domain.as_deref(), "domain", &node.domain)?;
    let target = shape_arg(cfg, args.target.as_deref(), "target", &node.target)?;
    let spec = if args.grid { SampleSpec::grid(cfg.samples) } else { SampleSpec::uniform(cfg.samples, cfg.seed) };
    let children = run_checks(&node, &args.checks, &domain, &target, &spec, cfg.tolerance.symplectic);
    let report = VerificationReport::bundle(format!("verify/{name}"), children);
    emit(cfg, &format!("verify_{name}"), &report)
}
