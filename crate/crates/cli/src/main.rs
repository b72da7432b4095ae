mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Context};

#[derive(Parser, Debug)]
#[command(name = "treemb", version, about = "Caterpillar embeddings of weighted trees into ℓ_p")]
struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random choice; echoed into report headers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for pair scans (1 runs sequentially).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Relative tolerance for bound checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a tree or graph family as JSON.
    Gen(GenArgs),
    /// Caterpillar number of a tree.
    Kappa {
        tree: PathBuf,
    },
    /// Optimal caterpillar coloring (or the all-distinct coloring).
    Color {
        tree: PathBuf,
        #[arg(long)]
        all_distinct: bool,
    },
    /// Embed a tree into ℓ_p; one JSON line per vertex.
    Embed {
        tree: PathBuf,
        #[arg(long)]
        p: f64,
        /// Coloring file from `color`; defaults to the optimal coloring.
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// Override the κ used in the coordinate formula.
        #[arg(long)]
        kappa: Option<usize>,
        /// Also write per-pair distance ratios as CSV.
        #[arg(long)]
        ratios: Option<PathBuf>,
    },
    /// Lipschitz constants and distortion of a map between finite spaces.
    Distort {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// JSON file `{"assign": [...]}` giving the image of every source point.
        #[arg(long)]
        map: PathBuf,
        /// Treat the map as a quotient and report coLip and codist instead.
        #[arg(long)]
        quotient: bool,
    },
    /// Strongness statistics of a coloring, optionally checking a δ.
    Strong {
        tree: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Lift a quotient map onto a tree back into its source space.
    Lift {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Lower and upper distortion bounds per height, as CSV.
    Bounds(BoundsArgs),
    /// Coloring, embedding and distortion of a tree in one report.
    Pipeline {
        tree: PathBuf,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Tree,
    Umbel,
    Parasol,
    Geometric,
    Random,
}

#[derive(Args, Debug)]
struct GenArgs {
    family: Family,
    /// Branching factor.
    #[arg(long, default_value_t = 2)]
    b: usize,
    /// Height.
    #[arg(long, default_value_t = 1)]
    h: usize,
    /// Parasol level.
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Vertex count of a random tree.
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 1e-3)]
    wlow: f64,
    #[arg(long, default_value_t = 1e3)]
    whigh: f64,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 2)]
    b: usize,
    /// Comma-separated heights.
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 4, 8, 16])]
    h_grid: Vec<u64>,
    /// Skip measuring distortion for trees with more vertices than this.
    #[arg(long, default_value_t = 4096)]
    max_vertices: usize,
    /// Report parasol lower bounds at these levels instead of the tree gap report.
    #[arg(long, value_delimiter = ',')]
    parasol_levels: Option<Vec<u64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("treemb: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be a nonnegative number, got {}", cli.tol)));
    }
    let ctx = Context::new(cli.out, cli.seed, cli.workers, cli.tol)?;
    ctx.install(|ctx| match cli.command {
        Command::Gen(a) => {
            let family = match a.family {
                Family::Tree => commands::GenFamily::Tree { b: a.b, h: a.h },
                Family::Umbel => commands::GenFamily::Umbel { b: a.b },
                Family::Parasol => commands::GenFamily::Parasol { b: a.b, l: a.l },
                Family::Geometric => commands::GenFamily::Geometric { h: a.h },
                Family::Random => commands::GenFamily::Random { n: a.n, low: a.wlow, high: a.whigh },
            };
            commands::gen(ctx, family)
        }
        Command::Kappa { tree } => commands::kappa(ctx, &tree),
        Command::Color { tree, all_distinct } => commands::color(ctx, &tree, all_distinct),
        Command::Embed { tree, p, coloring, kappa, ratios } => {
            commands::embed(ctx, &tree, p, coloring.as_deref(), kappa, ratios.as_deref())
        }
        Command::Distort { source, target, map, quotient } => {
            commands::distort(ctx, &source, &target, &map, quotient)
        }
        Command::Strong { tree, coloring, delta } => commands::strong(ctx, &tree, coloring.as_deref(), delta),
        Command::Lift { space, tree, map } => commands::lift(ctx, &space, &tree, &map),
        Command::Bounds(a) => commands::bounds(
            ctx,
            commands::BoundsRequest {
                p: a.p,
                gamma: a.gamma,
                b: a.b,
                heights: a.h_grid,
                max_vertices: a.max_vertices,
                parasol_levels: a.parasol_levels,
            },
        ),
        Command::Pipeline { tree, p } => commands::pipeline(ctx, &tree, p),
    })
}
