use clap::{Args, Subcommand};
use polyembed::maps::{
    build_main_lemma_map, build_polterovich_linear, cotangent_lift, psi_node, snake_embedding, strip_lift,
    DiskRectangleMap, PeriodicDiffeo1D,
};
use polyembed::{MapNode, ShapeDescriptor};

use crate::config::RunConfig;
use crate::output::write_atomic;
use crate::CliError;

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Descriptor name [default: derived from the parameters].
    #[arg(long, global = true)]
    name: Option<String>,
    #[command(subcommand)]
    kind: BuildKind,
}

#[derive(Debug, Subcommand)]
enum BuildKind {
    /// `Q ∘ Ψ̃ ∘ L` on the 4-ball of radius R >= 1/3.
    MainLemma {
        #[arg(long = "R")]
        r: f64,
    },
    /// Expanding snake from X = L1 x L2 into 5X′; `--lift r` builds its cotangent lift.
    Snake {
        #[arg(long = "X", value_delimiter = ',', num_args = 1)]
        x: Vec<f64>,
        #[arg(long = "Xp", value_delimiter = ',', num_args = 1)]
        xp: Vec<f64>,
        #[arg(long)]
        lift: Option<f64>,
    },
    /// Lemma 3.1 strip lift at time t [default: 2w].
    StripLift {
        #[arg(long)]
        w: f64,
        #[arg(long)]
        t: Option<f64>,
    },
    /// The lattice-avoiding shear Ψ on the disk of radius ρ.
    Psi {
        #[arg(long)]
        rho: f64,
    },
    /// The linear squeeze L alone.
    Polterovich {
        #[arg(long = "R")]
        r: f64,
    },
    /// Area-preserving disk-to-rectangle transport (or its inverse).
    DiskRect {
        #[arg(long = "R")]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        aspect: f64,
        #[arg(long)]
        inverse: bool,
    },
}

fn pair(v: &[f64], flag: &str) -> Result<[f64; 2], CliError> {
    match v {
        [a, b] => Ok([*a, *b]),
        _ => Err(CliError::Usage(format!("{flag} needs two comma-separated lengths"))),
    }
}

fn build(kind: &BuildKind) -> Result<(String, MapNode), CliError> {
    Ok(match kind {
        BuildKind::MainLemma { r } => {
            if !(*r >= 1.0 / 3.0) {
                return Err(CliError::Usage(format!("R below 1/3: R = {r}")));
            }
            (format!("main_lemma_R{r}"), build_main_lemma_map(*r)?.node)
        }
        BuildKind::Snake { x, xp, lift } => {
            let (x, xp) = (pair(x, "--X")?, pair(xp, "--Xp")?);
            let node = MapNode::snake(snake_embedding(x, xp)?)?;
            let name = format!("snake_X{}_{}_Xp{}_{}", x[0], x[1], xp[0], xp[1]);
            match lift {
                Some(r) => (format!("{name}_lift{r}"), cotangent_lift(node, *r)?),
                None => (name, node),
            }
        }
        BuildKind::StripLift { w, t } => {
            (format!("strip_lift_w{w}"), MapNode::strip_lift(strip_lift(*w, t.unwrap_or(2.0 * w))?)?)
        }
        BuildKind::Psi { rho } => (format!("psi_rho{rho}"), psi_node(&PeriodicDiffeo1D::new(*rho)?)?),
        BuildKind::Polterovich { r } => {
            let pl = build_polterovich_linear(*r)?;
            let target = ShapeDescriptor::new(vec![
                polyembed::Factor::Disk2 { radius: pl.block_radius * (1.0 + 1e-9) },
                polyembed::Factor::Disk2 { radius: pl.projection_radius * (1.0 + 1e-9) },
            ])?;
            let node = MapNode::linear(pl.map.as_linear().clone(), ShapeDescriptor::ball(4, *r)?, target)?;
            (format!("polterovich_R{r}"), node)
        }
        BuildKind::DiskRect { r, aspect, inverse } => {
            let m = DiskRectangleMap::new(*r, *aspect)?;
            if *inverse {
                (format!("rect_disk_R{r}"), MapNode::rectangle_disk(m)?)
            } else {
                (format!("disk_rect_R{r}"), MapNode::disk_rectangle(m)?)
            }
        }
    })
}

pub fn run(cfg: &RunConfig, args: BuildArgs) -> Result<(), CliError> {
    let (default_name, node) = build(&args.kind)?;
    let name = args.name.unwrap_or(default_name);
    let path = cfg.out_dir().join("maps").join(format!("{name}.json"));
    let mut text = node.to_descriptor()?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    println!("wrote {} ({}: {} -> {})", path.display(), node.kind_name(), node.domain, node.target);
    Ok(())
}
