use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use treemb::beta_bounds::{self, BetaModulus, Family, GapConfig};
use treemb::coloring::{brute_force_kappa, caterpillar_number, optimal_caterpillar_coloring, BRUTE_FORCE_MAX_EDGES};
use treemb::distortion::{codistortion_with, distortion_with, lift_check};
use treemb::embedding::{embed_tree, embed_tree_with_kappa};
use treemb::graphs::{
    make_complete_tree, make_geometric_binary, make_parasol, make_random_tree, make_umbel, parse_space, AnyGraph,
};
use treemb::pipeline::run_pipeline_with;
use treemb::{EdgeColoring, Error, Execution, StrongCheck, WeightedRootedTree};

/// A failure with its exit code: 2 usage, 3 parse, 4 invariant violation, 5 I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Invariant(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Parse(m) => ("parse", m),
            CliError::Invariant(m) => ("invariant", m),
            CliError::Io(m) => ("io", m),
        };
        // diagnostics stay on one line
        write!(f, "{kind} error: {}", msg.replace('\n', " "))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Parse(inner) => CliError::Parse(inner),
            Error::Argument(_) | Error::Size(_) | Error::Domain { .. } => CliError::Usage(msg),
            _ => CliError::Invariant(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

type CmdResult = Result<ExitCode, CliError>;

/// Global settings shared by every command.
pub struct Context {
    out: Option<PathBuf>,
    seed: u64,
    tol: f64,
    exec: Execution,
    pool: Option<rayon::ThreadPool>,
}

impl Context {
    pub fn new(out: Option<PathBuf>, seed: u64, workers: Option<usize>, tol: f64) -> Result<Self, CliError> {
        let (exec, pool) = match workers {
            None => (Execution::default(), None),
            Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
            Some(1) => (Execution::Sequential, None),
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| CliError::Io(format!("cannot start {k} workers: {e}")))?;
                (Execution::Parallel, Some(pool))
            }
        };
        Ok(Self { out, seed, tol, exec, pool })
    }

    /// Runs `f` inside the configured worker pool.
    pub fn install<R: Send>(&self, f: impl FnOnce(&Self) -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(|| f(self)),
            None => f(self),
        }
    }

    fn emit(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.out {
            Some(path) => write_file(path, bytes),
            None => std::io::stdout()
                .lock()
                .write_all(bytes)
                .map_err(|e| CliError::Io(format!("stdout: {e}"))),
        }
    }

    fn emit_json(&self, mut value: Value) -> Result<(), CliError> {
        if let Value::Object(map) = &mut value {
            map.insert("seed".into(), json!(self.seed));
        }
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        self.emit(text.as_bytes())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_tree(path: &Path) -> Result<WeightedRootedTree, CliError> {
    Ok(AnyGraph::from_json(&read(path)?)?.into_tree()?)
}

/// The on-disk form of an edge coloring: one entry per vertex, `null` at
/// the root, otherwise the color of the edge to the parent.
#[derive(Serialize, Deserialize)]
struct ColoringDoc {
    kind: String,
    kappa: usize,
    classes: usize,
    colors: Vec<Option<usize>>,
}

fn read_coloring<'t>(path: &Path, tree: &'t WeightedRootedTree) -> Result<EdgeColoring<'t>, CliError> {
    let doc: ColoringDoc = serde_json::from_str(&read(path)?)?;
    if doc.kind != "coloring" {
        return Err(CliError::Parse(format!("expected kind \"coloring\", found \"{}\"", doc.kind)));
    }
    Ok(EdgeColoring::new(tree, doc.colors)?)
}

fn coloring_or_optimal<'t>(path: Option<&Path>, tree: &'t WeightedRootedTree) -> Result<EdgeColoring<'t>, CliError> {
    match path {
        Some(p) => read_coloring(p, tree),
        None => Ok(optimal_caterpillar_coloring(tree)),
    }
}

#[derive(Deserialize)]
struct MapDoc {
    assign: Vec<usize>,
}

fn read_map(path: &Path) -> Result<Vec<usize>, CliError> {
    Ok(serde_json::from_str::<MapDoc>(&read(path)?)?.assign)
}

fn check_exponent(p: f64) -> Result<(), CliError> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--p must be a finite number >= 1, got {p}")))
    }
}

pub enum GenFamily {
    Tree { b: usize, h: usize },
    Umbel { b: usize },
    Parasol { b: usize, l: usize },
    Geometric { h: usize },
    Random { n: usize, low: f64, high: f64 },
}

pub fn gen(ctx: &Context, family: GenFamily) -> CmdResult {
    let graph = match family {
        GenFamily::Tree { b, h } => {
            if b == 0 {
                return Err(CliError::Usage("--b must be at least 1".into()));
            }
            AnyGraph::Tree(make_complete_tree(b, h)?)
        }
        GenFamily::Umbel { b } => {
            if b == 0 {
                return Err(CliError::Usage("--b must be at least 1".into()));
            }
            AnyGraph::Tree(make_umbel(b))
        }
        GenFamily::Parasol { b, l } => AnyGraph::Graph(make_parasol(b, l)?),
        GenFamily::Geometric { h } => AnyGraph::Tree(make_geometric_binary(h)?),
        GenFamily::Random { n, low, high } => {
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            AnyGraph::Tree(make_random_tree(n, low, high, ctx.seed)?)
        }
    };
    let mut doc = graph.to_doc();
    doc.seed = Some(ctx.seed);
    let mut text = serde_json::to_string(&doc)?;
    text.push('\n');
    ctx.emit(text.as_bytes())?;
    let counts = format!("vertices={} edges={}", graph.len(), graph.edge_count());
    if ctx.out.is_some() {
        println!("{counts}");
    } else {
        eprintln!("{counts}");
    }
    Ok(ExitCode::SUCCESS)
}

pub fn kappa(ctx: &Context, tree: &Path) -> CmdResult {
    let t = read_tree(tree)?;
    let kappa = caterpillar_number(&t);
    let brute = if t.edge_count() <= BRUTE_FORCE_MAX_EDGES { Some(brute_force_kappa(&t)?) } else { None };
    ctx.emit_json(json!({
        "kappa": kappa,
        "brute_force_kappa": brute,
        "vertices": t.len(),
        "edges": t.edge_count(),
    }))?;
    if brute.is_some_and(|b| b != kappa) {
        return Err(CliError::Invariant(format!("dynamic program gave {kappa}, enumeration {}", brute.unwrap())));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn color(ctx: &Context, tree: &Path, all_distinct: bool) -> CmdResult {
    let t = read_tree(tree)?;
    let c = if all_distinct { EdgeColoring::all_distinct(&t) } else { optimal_caterpillar_coloring(&t) };
    let doc = ColoringDoc {
        kind: "coloring".into(),
        kappa: c.kappa_achieved(),
        classes: c.class_count(),
        colors: c.colors().to_vec(),
    };
    ctx.emit_json(serde_json::to_value(doc)?)?;
    Ok(ExitCode::SUCCESS)
}

pub fn embed(
    ctx: &Context,
    tree: &Path,
    p: f64,
    coloring: Option<&Path>,
    kappa: Option<usize>,
    ratios: Option<&Path>,
) -> CmdResult {
    check_exponent(p)?;
    let t = read_tree(tree)?;
    let c = coloring_or_optimal(coloring, &t)?;
    let points = match kappa {
        Some(k) => embed_tree_with_kappa(&c, p, k)?,
        None => embed_tree(&c, p)?,
    };
    ctx.emit(points.to_jsonl().as_bytes())?;
    if let Some(path) = ratios {
        let mut buf = Vec::new();
        points.write_ratio_csv(&t, &mut buf)?;
        write_file(path, &buf)?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn distort(ctx: &Context, source: &Path, target: &Path, map: &Path, quotient: bool) -> CmdResult {
    let src = parse_space(&read(source)?)?;
    let dst = parse_space(&read(target)?)?;
    let assign = read_map(map)?;
    let value = if quotient {
        serde_json::to_value(codistortion_with(&src, &dst, &assign, ctx.exec)?)?
    } else {
        serde_json::to_value(distortion_with(&src, &dst, &assign, ctx.exec)?)?
    };
    ctx.emit_json(value)?;
    Ok(ExitCode::SUCCESS)
}

pub fn strong(ctx: &Context, tree: &Path, coloring: Option<&Path>, delta: Option<f64>) -> CmdResult {
    let t = read_tree(tree)?;
    let c = coloring_or_optimal(coloring, &t)?;
    let best = c.best_delta_with(ctx.exec).ok();
    let mut report = json!({
        "kappa": c.kappa_achieved(),
        "classes": c.class_count(),
        "delta_best": best.map(|b| b.delta),
        "delta_best_pair": best.map(|b| b.pair),
    });
    if let Some(d) = delta {
        if !(d > 0.0 && d <= 1.0) {
            return Err(CliError::Usage(format!("--delta must lie in (0, 1], got {d}")));
        }
        let check = c.verify_strong_with(d, ctx.exec);
        let counterexample = match check {
            StrongCheck::Pass => None,
            StrongCheck::Counterexample(x, y) => Some((x, y)),
        };
        report["check"] = json!({ "delta": d, "pass": check.passed(), "counterexample": counterexample });
    }
    ctx.emit_json(report)?;
    Ok(ExitCode::SUCCESS)
}

pub fn lift(ctx: &Context, space: &Path, tree: &Path, map: &Path) -> CmdResult {
    let z = parse_space(&read(space)?)?;
    let t = read_tree(tree)?;
    let assign = read_map(map)?;
    let (lifted, check) = lift_check(&z, &t, &assign)?;
    let holds = check.dist_lift <= check.codist * (1.0 + ctx.tol);
    ctx.emit_json(json!({
        "points": lifted.points,
        "codist": check.codist,
        "dist_lift": check.dist_lift,
        "holds": holds,
    }))?;
    if !holds {
        return Err(CliError::Invariant(format!(
            "lift distortion {} exceeds quotient codistortion {}",
            check.dist_lift, check.codist
        )));
    }
    Ok(ExitCode::SUCCESS)
}

pub struct BoundsRequest {
    pub p: f64,
    pub gamma: f64,
    pub b: usize,
    pub heights: Vec<u64>,
    pub max_vertices: usize,
    pub parasol_levels: Option<Vec<u64>>,
}

pub fn bounds(ctx: &Context, req: BoundsRequest) -> CmdResult {
    let modulus = BetaModulus::new(req.gamma, req.p)?;
    let text = match req.parasol_levels {
        Some(levels) => {
            let curve = beta_bounds::lower_bound_curve(Family::Parasol, &levels, &modulus)?;
            beta_bounds::lower_bound_curve_csv(&curve, &modulus, ctx.seed)
        }
        None => {
            let config = GapConfig {
                max_vertices: req.max_vertices,
                exec: ctx.exec,
                ..GapConfig::new(req.heights, req.p, req.gamma, req.b)
            };
            let rows = beta_bounds::gap_report(&config)?;
            beta_bounds::gap_report_csv(&config, &rows, ctx.seed)
        }
    };
    ctx.emit(text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}

pub fn pipeline(ctx: &Context, tree: &Path, p: f64) -> CmdResult {
    check_exponent(p)?;
    let t = read_tree(tree)?;
    let report = run_pipeline_with(&t, p, ctx.tol, ctx.exec)?;
    ctx.emit_json(serde_json::to_value(report)?)?;
    if !report.within_bounds {
        return Err(CliError::Invariant(format!(
            "distortion bounds violated: lip {} (bound {}), lip_inv {} (bound {})",
            report.lip, report.bound_lip, report.lip_inv, report.bound_lip_inv
        )));
    }
    Ok(ExitCode::SUCCESS)
}
