//! Command-line front end for `symiso`. [`run`] takes the argument list and
//! the two output streams and returns the exit code.

mod output;
mod verify;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symiso::dynsys::{self, ComponentKind};
use symiso::graphsym::{self, Graph};
use symiso::io::{parse_graph, parse_matrix, GraphFormat};
use symiso::isotropy::{self, BlockOrthogonal, IsotropyElement};
use symiso::procrustes::{self, Order};
use symiso::rng::{rng_from_seed, subtask_seed};
use symiso::spectral::{self, SpectralDecomposition, SymMatrix, DEFAULT_SYMTOL};
use symiso::stencil::{self, HessianContext};
use symiso::Matrix;

pub use output::Format;
use output::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_FIXTURES: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "symiso", version, about = "Orthogonal isotropy groups of symmetric matrices", arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Root seed; every random subtask derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Eigenvalue clustering tolerance (default 1e-8·max(1, max|λ|)).
    #[arg(long, global = true, value_name = "X")]
    cluster_tol: Option<f64>,

    /// Membership / comparison tolerance where a command uses one.
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigendecomposition and eigenvalue clusters of a symmetric matrix.
    Eig(InputArgs),
    /// Isotropy group elements.
    #[command(subcommand, arg_required_else_help = true)]
    Isotropy(IsotropyCmd),
    /// Two-sided orthogonal Procrustes problem.
    #[command(subcommand, arg_required_else_help = true)]
    Procrustes(ProcrustesCmd),
    /// Graph spectra, automorphisms and hidden symmetries.
    #[command(subcommand, arg_required_else_help = true)]
    Graph(GraphCmd),
    /// Fourth-order Taylor probes built from Hessian symmetries.
    #[command(subcommand, arg_required_else_help = true)]
    Stencil(StencilCmd),
    /// Equilibria of ẋ = A(μ)x − ‖x‖²x.
    #[command(subcommand, arg_required_else_help = true)]
    Dynsys(DynsysCmd),
    /// Bundled reference data.
    #[command(subcommand, arg_required_else_help = true)]
    Fixtures(FixturesCmd),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Matrix file, or `-` for standard input.
    #[arg(long, value_name = "PATH")]
    input: String,
}

#[derive(Debug, Subcommand)]
enum IsotropyCmd {
    /// All 2ⁿ elements of the sign subgroup.
    Gamma2(InputArgs),
    /// Haar samples from the full group.
    Sample {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Tests whether a matrix belongs to the group.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Candidate element.
        #[arg(long, value_name = "PATH")]
        gamma: String,
    },
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long, value_name = "PATH")]
    a: String,
    #[arg(long, value_name = "PATH")]
    b: String,
}

#[derive(Debug, Subcommand)]
enum ProcrustesCmd {
    /// Canonical optimum.
    Solve {
        #[command(flatten)]
        pair: PairArgs,
        /// Match eigenvalues in descending order.
        #[arg(long)]
        descending: bool,
    },
    /// Random members of the optimal family.
    Family {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormatArg {
    Auto,
    Edges,
    Matrix,
}

#[derive(Debug, Args)]
struct GraphInput {
    /// Edge list or adjacency matrix, or `-` for standard input.
    #[arg(long, value_name = "PATH")]
    input: String,
    #[arg(long = "graph-format", value_enum, default_value_t = GraphFormatArg::Auto)]
    graph_format: GraphFormatArg,
}

#[derive(Debug, Subcommand)]
enum GraphCmd {
    Spectrum(GraphInput),
    /// Automorphism group as permutation arrays.
    Aut {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Isomorphism witness between two graphs.
    Iso {
        #[arg(long, value_name = "PATH")]
        a: String,
        #[arg(long, value_name = "PATH")]
        b: String,
        #[arg(long = "graph-format", value_enum, default_value_t = GraphFormatArg::Auto)]
        graph_format: GraphFormatArg,
    },
    /// Haar samples from the adjacency isotropy group.
    Hidden {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Debug, Args)]
struct ProbeArgs {
    /// Built-in function name.
    #[arg(long, default_value = "taylor-demo")]
    function: String,
    /// Base point, comma separated.
    #[arg(long, value_name = "X,Y,Z", default_value = "1,1,1")]
    x: String,
    /// Displacement, comma separated; sampled from the seed when omitted.
    #[arg(long, value_name = "X,Y,Z")]
    h: Option<String>,
    /// γ₁ from a file (default identity).
    #[arg(long, value_name = "PATH")]
    gamma1: Option<String>,
    /// γ₂ from a file (default: reflection across Hessian eigenvector `--flip`).
    #[arg(long, value_name = "PATH")]
    gamma2: Option<String>,
    /// Index of the Hessian eigenvector (ascending eigenvalues) flipped by γ₂.
    #[arg(long, default_value_t = 0)]
    flip: usize,
    /// Halvings used for the order fit.
    #[arg(long, default_value_t = 6)]
    levels: usize,
}

#[derive(Debug, Subcommand)]
enum StencilCmd {
    /// Probe value at h plus the fitted order.
    Probe(ProbeArgs),
    /// Probe values over successive halvings of h and the fitted order.
    Order(ProbeArgs),
}

#[derive(Debug, Subcommand)]
enum DynsysCmd {
    Equilibria {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
    },
    Sweep {
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    Integrate {
        /// Initial point, comma separated.
        #[arg(long, value_name = "X,Y,Z", allow_negative_numbers = true)]
        x0: String,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, default_value_t = dynsys::DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = dynsys::DEFAULT_STEPS)]
        steps: usize,
    },
}

#[derive(Debug, Subcommand)]
enum FixturesCmd {
    /// Checks every bundled reference value and prints a pass/fail table.
    Verify,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(symiso::Error),
    Fixtures(Report),
}

impl From<symiso::Error> for Failure {
    fn from(e: symiso::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<Report, Failure>;

struct Ctx {
    seed: u64,
    cluster_tol: Option<f64>,
    tol: Option<f64>,
}

/// Runs one command; returns the process exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    if let Some(t) = cli.cluster_tol.into_iter().chain(cli.tol).find(|t| !(t.is_finite() && *t > 0.0)) {
        let _ = writeln!(err, "error: tolerances must be positive and finite, got {t}");
        return EXIT_USAGE;
    }
    let ctx = Ctx { seed: cli.seed, cluster_tol: cli.cluster_tol, tol: cli.tol };
    let (report, code) = match dispatch(&cli.command, &ctx) {
        Ok(r) => (r, EXIT_OK),
        Err(Failure::Fixtures(r)) => (r, EXIT_FIXTURES),
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            return if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE };
        }
    };
    let text = match report.render(cli.format) {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    code
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Outcome {
    match cmd {
        Command::Eig(args) => eig(ctx, args),
        Command::Isotropy(c) => isotropy_cmd(ctx, c),
        Command::Procrustes(c) => procrustes_cmd(ctx, c),
        Command::Graph(c) => graph_cmd(ctx, c),
        Command::Stencil(c) => stencil_cmd(ctx, c),
        Command::Dynsys(c) => dynsys_cmd(c),
        Command::Fixtures(FixturesCmd::Verify) => {
            let (report, ok) = verify::run();
            if ok {
                Ok(report)
            } else {
                Err(Failure::Fixtures(report))
            }
        }
    }
}

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))
}

fn read_matrix(path: &str) -> Result<Matrix<f64>, Failure> {
    parse_matrix(&read_text(path)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn read_symmetric(path: &str) -> Result<SymMatrix<f64>, Failure> {
    SymMatrix::new(read_matrix(path)?, DEFAULT_SYMTOL).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn read_graph(path: &str, format: GraphFormatArg) -> Result<Graph, Failure> {
    let format = match format {
        GraphFormatArg::Auto => GraphFormat::Auto,
        GraphFormatArg::Edges => GraphFormat::Edges,
        GraphFormatArg::Matrix => GraphFormat::Matrix,
    };
    parse_graph(&read_text(path)?, format).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn parse_vector(text: &str, name: &str, dim: usize) -> Result<Vec<f64>, Failure> {
    let v = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Usage(format!("--{name}: expected {dim} comma-separated numbers, got '{text}'")))?;
    if v.len() != dim || v.iter().any(|x| !x.is_finite()) {
        return Err(Failure::Usage(format!("--{name}: expected {dim} finite numbers, got '{text}'")));
    }
    Ok(v)
}

fn decompose(ctx: &Ctx, a: &SymMatrix<f64>) -> Result<SpectralDecomposition<f64>, Failure> {
    Ok(spectral::eig_sym_with(a, ctx.cluster_tol)?)
}

fn rows(m: &Matrix<f64>) -> Value {
    json!(m.to_rows())
}

fn clusters_json(dec: &SpectralDecomposition<f64>) -> Value {
    dec.clusters()
        .iter()
        .map(|c| json!({"value": c.value, "multiplicity": c.multiplicity, "start": c.start}))
        .collect()
}

fn element_json(e: &IsotropyElement<f64>) -> Value {
    let source = match &e.source {
        isotropy::GroupSource::Signs(s) => json!({"signs": s.signs(), "code": s.code()}),
        isotropy::GroupSource::Blocks(b) => json!({"blocks": b.blocks().iter().map(rows).collect::<Vec<_>>()}),
    };
    json!({"gamma": rows(&e.gamma), "source": source})
}

fn eig(ctx: &Ctx, args: &InputArgs) -> Outcome {
    let dec = decompose(ctx, &read_symmetric(&args.input)?)?;
    let body = json!({
        "n": dec.n(),
        "lambdas": dec.values(),
        "multiplicities": dec.multiplicities(),
        "clusters": clusters_json(&dec),
        "cluster_tol": dec.cluster_tol(),
        "borderline": dec.is_borderline(),
        "vectors": rows(dec.vectors()),
    });
    let mut csv = vec!["index,lambda,cluster,multiplicity".to_string()];
    for (k, c) in dec.clusters().iter().enumerate() {
        for i in c.start..c.start + c.multiplicity {
            csv.push(format!("{i},{},{k},{}", dec.values()[i], c.multiplicity));
        }
    }
    Ok(Report::new(body).with_csv(csv))
}

fn isotropy_cmd(ctx: &Ctx, cmd: &IsotropyCmd) -> Outcome {
    match cmd {
        IsotropyCmd::Gamma2(args) => {
            let dec = decompose(ctx, &read_symmetric(&args.input)?)?;
            let els = isotropy::gamma2_elements(&dec)?;
            Ok(Report::new(json!({
                "multiplicities": dec.multiplicities(),
                "finite": isotropy::is_finite(&dec),
                "elements": els.iter().map(element_json).collect::<Vec<_>>(),
            })))
        }
        IsotropyCmd::Sample { input, count } => {
            let dec = decompose(ctx, &read_symmetric(&input.input)?)?;
            let els: Vec<Value> = (0..*count as u64)
                .map(|k| {
                    let e = isotropy::sample_gamma(&dec, subtask_seed(ctx.seed, k));
                    let mut v = element_json(&e);
                    v["commutator_residual"] = json!(isotropy::commutator_residual(dec.matrix(), &e.gamma).ok());
                    v
                })
                .collect();
            Ok(Report::new(json!({"multiplicities": dec.multiplicities(), "seed": ctx.seed, "elements": els})))
        }
        IsotropyCmd::Check { input, gamma } => {
            let dec = decompose(ctx, &read_symmetric(&input.input)?)?;
            let g = read_matrix(gamma)?;
            let tol = ctx.tol.unwrap_or(1e-8);
            let member = isotropy::is_member(&dec, &g, tol)?;
            let mut body = json!({
                "member": member,
                "tol": tol,
                "commutator_residual": isotropy::commutator_residual(dec.matrix(), &g)?,
                "orthogonality_defect": g.orthogonality_defect(),
            });
            if member {
                let sigma = &(dec.vectors() * &g) * &dec.vectors().transpose();
                if let Ok(b) = BlockOrthogonal::from_dense(&dec.multiplicities(), &sigma, tol.max(1e-8)) {
                    body["sigma_blocks"] = json!(b.blocks().iter().map(rows).collect::<Vec<_>>());
                }
            }
            Ok(Report::new(body))
        }
    }
}

fn procrustes_cmd(ctx: &Ctx, cmd: &ProcrustesCmd) -> Outcome {
    let solution = |s: &procrustes::ProcrustesSolution<f64>| {
        json!({
            "p": rows(&s.p),
            "cost": s.cost,
            "lower_bound": s.lower_bound,
            "sigma_a": s.sigma_a.blocks().iter().map(rows).collect::<Vec<_>>(),
            "sigma_b": s.sigma_b.blocks().iter().map(rows).collect::<Vec<_>>(),
        })
    };
    match cmd {
        ProcrustesCmd::Solve { pair, descending } => {
            let (a, b) = (read_symmetric(&pair.a)?, read_symmetric(&pair.b)?);
            let order = if *descending { Order::Descending } else { Order::Ascending };
            Ok(Report::new(solution(&procrustes::solve(&a, &b, order)?)))
        }
        ProcrustesCmd::Family { pair, count } => {
            let (a, b) = (read_symmetric(&pair.a)?, read_symmetric(&pair.b)?);
            let family = procrustes::family_sample(&a, &b, subtask_seed(ctx.seed, 0), *count)?;
            Ok(Report::new(json!({"seed": ctx.seed, "solutions": family.iter().map(solution).collect::<Vec<_>>()})))
        }
    }
}

fn graph_cmd(ctx: &Ctx, cmd: &GraphCmd) -> Outcome {
    match cmd {
        GraphCmd::Spectrum(input) => {
            let g = read_graph(&input.input, input.graph_format)?;
            let dec = decompose(ctx, &g.adjacency())?;
            let body = json!({
                "n": g.n(),
                "edges": g.edges().len(),
                "spectrum": dec.clusters().iter().map(|c| c.value).collect::<Vec<_>>(),
                "multiplicities": dec.multiplicities(),
                "eigenvalues": dec.values(),
            });
            let mut csv = vec!["value,multiplicity".to_string()];
            csv.extend(dec.clusters().iter().map(|c| format!("{},{}", c.value, c.multiplicity)));
            Ok(Report::new(body).with_csv(csv))
        }
        GraphCmd::Aut { input, limit } => {
            let g = read_graph(&input.input, input.graph_format)?;
            let aut = graphsym::automorphisms(&g, *limit)?;
            Ok(Report::new(json!({
                "n": g.n(),
                "order": aut.len(),
                "automorphisms": aut.iter().map(|p| p.map().to_vec()).collect::<Vec<_>>(),
            })))
        }
        GraphCmd::Iso { a, b, graph_format } => {
            let (ga, gb) = (read_graph(a, *graph_format)?, read_graph(b, *graph_format)?);
            let witness = graphsym::find_isomorphism(&ga, &gb)?;
            Ok(Report::new(json!({
                "isomorphic": witness.is_some(),
                "permutation": witness.map(|p| p.map().to_vec()),
            })))
        }
        GraphCmd::Hidden { input, count } => {
            let g = read_graph(&input.input, input.graph_format)?;
            let dec = decompose(ctx, &g.adjacency())?;
            let tol = ctx.tol.unwrap_or(graphsym::DEFAULT_PERMUTATION_TOL);
            let els: Vec<Value> = (0..*count as u64)
                .map(|k| {
                    let e = isotropy::sample_gamma(&dec, subtask_seed(ctx.seed, k));
                    let perm = graphsym::is_permutation(&e.gamma, tol);
                    json!({
                        "gamma": rows(&e.gamma),
                        "permutation": perm.as_ref().map(|p| p.map().to_vec()),
                        "hidden": perm.is_none(),
                    })
                })
                .collect();
            Ok(Report::new(json!({"multiplicities": dec.multiplicities(), "seed": ctx.seed, "samples": els})))
        }
    }
}

fn stencil_cmd(ctx: &Ctx, cmd: &StencilCmd) -> Outcome {
    let (args, table) = match cmd {
        StencilCmd::Probe(a) => (a, false),
        StencilCmd::Order(a) => (a, true),
    };
    let f = stencil::builtin(&args.function).ok_or_else(|| {
        Failure::Usage(format!("unknown function '{}'; available: {}", args.function, stencil::BUILTIN_NAMES.join(", ")))
    })?;
    let dim = f.dim();
    let x = parse_vector(&args.x, "x", dim)?;
    let h = match &args.h {
        Some(text) => parse_vector(text, "h", dim)?,
        None => {
            use rand_distr::{Distribution, StandardNormal};
            let mut rng = rng_from_seed(subtask_seed(ctx.seed, 0));
            (0..dim).map(|_| 0.1 * Distribution::<f64>::sample(&StandardNormal, &mut rng)).collect()
        }
    };
    let ctx_h = HessianContext::new(f.as_ref(), &x)?;
    if args.flip >= dim {
        return Err(Failure::Usage(format!("--flip {} out of range for dimension {dim}", args.flip)));
    }
    let g1 = match &args.gamma1 {
        Some(p) => read_matrix(p)?,
        None => Matrix::identity(dim),
    };
    let g2 = match &args.gamma2 {
        Some(p) => read_matrix(p)?,
        None => stencil::reflection(ctx_h.decomposition.eigenvector(args.flip)),
    };
    let probe = ctx_h.probe(f.as_ref(), &g1, &g2, &h)?;
    let slope = ctx_h.order_fit(f.as_ref(), &g1, &g2, &h, args.levels);
    let warnings: Vec<String> = probe.warnings.iter().map(|w| format!("{w:?}")).collect();
    let mut body = json!({
        "function": args.function,
        "x": x,
        "h": h,
        "value": probe.value,
        "slope": slope.as_ref().ok(),
        "gammas": [rows(&g1), rows(&g2)],
        "hessian_eigenvalues": ctx_h.decomposition.values(),
        "warnings": warnings,
    });
    if let Err(e) = &slope {
        body["slope_error"] = json!(e.to_string());
    }
    let mut csv = Vec::new();
    if table {
        let mut levels = Vec::new();
        let mut hk = h.clone();
        csv.push("level,h_norm,value".to_string());
        for level in 0..args.levels {
            let s = ctx_h.probe(f.as_ref(), &g1, &g2, &hk)?.value;
            let hn = symiso::matrix::norm(&hk);
            csv.push(format!("{level},{hn},{s}"));
            levels.push(json!({"level": level, "h_norm": hn, "value": s}));
            hk.iter_mut().for_each(|v| *v *= 0.5);
        }
        body["levels"] = json!(levels);
        if let Err(e) = slope {
            return Err(Failure::Core(e));
        }
    }
    Ok(Report::new(body).with_csv(csv))
}

fn dynsys_cmd(cmd: &DynsysCmd) -> Outcome {
    let component_json = |c: &dynsys::Component<f64>| {
        json!({
            "kind": c.kind().as_str(),
            "radius": c.radius(),
            "eigenvalue": c.eigenvalue(),
            "basis": c.basis(),
        })
    };
    match cmd {
        DynsysCmd::Equilibria { mu } => {
            let set = dynsys::equilibria(*mu)?;
            let mut csv = vec!["mu,kind,radius,eigenvalue".to_string()];
            for c in &set.components {
                let ev = c.eigenvalue().map(|v| v.to_string()).unwrap_or_default();
                csv.push(format!("{mu},{},{},{ev}", c.kind().as_str(), c.radius()));
            }
            Ok(Report::new(json!({
                "mu": mu,
                "eigenvalues": set.eigenvalues,
                "multiplicities": set.multiplicities,
                "components": set.components.iter().map(component_json).collect::<Vec<_>>(),
            }))
            .with_csv(csv))
        }
        DynsysCmd::Sweep { from, to, samples } => {
            let rows = dynsys::sweep(*from, *to, *samples)?;
            let mut csv = vec!["mu,kind,radius,transition".to_string()];
            for r in &rows {
                for (kind, radius) in &r.components {
                    csv.push(format!("{},{},{radius},{}", r.mu, kind.as_str(), r.transition));
                }
            }
            let body: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "mu": r.mu,
                        "eigenvalues": r.eigenvalues,
                        "components": r.components.iter().map(|(k, rad)| json!({"kind": k.as_str(), "radius": rad})).collect::<Vec<_>>(),
                        "transition": r.transition,
                    })
                })
                .collect();
            Ok(Report::new(json!({"rows": body})).with_csv(csv))
        }
        DynsysCmd::Integrate { x0, mu, dt, steps } => {
            let v = parse_vector(x0, "x0", 3)?;
            let traj = dynsys::integrate([v[0], v[1], v[2]], *mu, *dt, *steps)?;
            let set = dynsys::equilibria(*mu)?;
            let end = *traj.last().expect("non-empty trajectory");
            let nearest = set
                .components
                .iter()
                .map(|c| (c.kind(), c.distance(&end)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((ComponentKind::Origin, f64::NAN));
            let mut csv = vec!["step,t,x1,x2,x3".to_string()];
            csv.extend(traj.iter().enumerate().map(|(i, p)| format!("{i},{},{},{},{}", i as f64 * dt, p[0], p[1], p[2])));
            Ok(Report::new(json!({
                "mu": mu,
                "dt": dt,
                "steps": steps,
                "final": end,
                "nearest_component": {"kind": nearest.0.as_str(), "distance": nearest.1},
                "trajectory": traj,
            }))
            .with_csv(csv))
        }
    }
}
