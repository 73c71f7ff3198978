use clap::{Args, Subcommand};
use polyembed::geometry::{sample, SampleSpec};
use polyembed::maps::{build_polterovich_linear, psi_eval, snake_embedding, PeriodicDiffeo1D, StripImmersionModel};
use polyembed::ShapeDescriptor;

use crate::config::RunConfig;
use crate::output::{csv_bytes, svg_scatter, write_atomic};
use crate::CliError;

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Point count [default: 20000].
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    /// Also write an SVG scatter of the (x1, y1) columns.
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    kind: FigureKind,
}

#[derive(Debug, Subcommand)]
enum FigureKind {
    /// Image of a disk under Ψ.
    Psi {
        #[arg(long)]
        rho: f64,
        /// Radius of the sampled disk [default: ρ].
        #[arg(long)]
        ball: Option<f64>,
    },
    /// Image of X under the snake.
    Snake {
        #[arg(long = "X", value_delimiter = ',', num_args = 1)]
        x: Vec<f64>,
        #[arg(long = "Xp", value_delimiter = ',', num_args = 1)]
        xp: Vec<f64>,
    },
    /// Strip layout of the immersed surface: points of the two strips with their preimage count.
    Strips {
        #[arg(long)]
        w: f64,
    },
    /// Image of the 4-ball under the linear squeeze.
    Polterovich {
        #[arg(long = "R")]
        r: f64,
    },
}

const DEFAULT_POINTS: usize = 20_000;

fn names(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

fn pair(v: &[f64], flag: &str) -> Result<[f64; 2], CliError> {
    match v {
        [a, b] => Ok([*a, *b]),
        _ => Err(CliError::Usage(format!("{flag} needs two comma-separated lengths"))),
    }
}

pub fn run(cfg: &mut RunConfig, args: FigureArgs) -> Result<(), CliError> {
    let n = args.n.unwrap_or(DEFAULT_POINTS);
    cfg.samples = n;
    let seed = cfg.seed;
    let (stem, header, rows): (&str, Vec<String>, Vec<Vec<f64>>) = match &args.kind {
        FigureKind::Psi { rho, ball } => {
            let phi = PeriodicDiffeo1D::new(*rho)?;
            let disk = ShapeDescriptor::disk(ball.unwrap_or(*rho))?;
            let rows = sample(&disk, &SampleSpec::uniform(n, seed))?
                .iter()
                .map(|p| psi_eval(&phi, [p.coords()[0], p.coords()[1]]).to_vec())
                .collect();
            ("psi", names(&["x1", "y1"]), rows)
        }
        FigureKind::Snake { x, xp } => {
            let snake = snake_embedding(pair(x, "--X")?, pair(xp, "--Xp")?)?;
            let rows = sample(&snake.domain(), &SampleSpec::grid(n))?
                .iter()
                .map(|p| snake.apply([p.coords()[0], p.coords()[1]]).to_vec())
                .collect();
            ("snake", names(&["x1", "y1"]), rows)
        }
        FigureKind::Strips { w } => {
            let model = StripImmersionModel::new(*w)?;
            let square = ShapeDescriptor::rectangle_at(&[1.0, 1.0], &[-0.5, -0.5])?;
            let rows = sample(&square, &SampleSpec::uniform(n, seed))?
                .iter()
                .map(|p| (p.coords()[0], p.coords()[1]))
                .filter(|&(x, y)| model.in_horizontal(x, y) || model.in_vertical(x, y))
                .map(|(x, y)| vec![x, y, model.preimage_count(x, y) as f64])
                .collect();
            ("strips", names(&["x1", "y1", "preimages"]), rows)
        }
        FigureKind::Polterovich { r } => {
            let pl = build_polterovich_linear(*r)?;
            let ball = ShapeDescriptor::ball(4, *r)?;
            let rows = sample(&ball, &SampleSpec::boundary_biased(n, seed))?
                .iter()
                .map(|p| pl.map.apply(p.coords()))
                .collect();
            ("polterovich", names(&["x1", "x2", "y1", "y2"]), rows)
        }
    };
    let dir = cfg.out_dir().join("figures");
    let csv = write_atomic(&dir.join(format!("{stem}.csv")), &csv_bytes(&header, &rows)?)?;
    println!("wrote {} ({} points)", csv.display(), rows.len());
    if args.svg && !rows.is_empty() {
        let y = header.iter().position(|h| h == "y1").expect("every figure has y1");
        let svg = svg_scatter(&rows, 0, y, stem);
        println!("wrote {}", write_atomic(&dir.join(format!("{stem}.svg")), svg.as_bytes())?.display());
    }
    Ok(())
}
