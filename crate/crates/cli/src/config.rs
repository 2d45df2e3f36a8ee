//! Run configuration from flags and an optional TOML file; flags win.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use thiserror::Error;
use uptail_core::estimate::{Method, EXACT_MAX_VERTICES};
use uptail_core::families::FamilySpec;
use uptail_core::Hypergraph;

use crate::format::read_hypergraph;
use crate::output::Format;

/// Bad flags or config contents. Maps to exit status 2.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

macro_rules! usage {
    ($($arg:tt)*) => {
        return Err(UsageError(format!($($arg)*)).into())
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Ap,
    Schur,
    #[value(name = "ell_sum", alias = "ell-sum")]
    EllSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Exact,
    Mc,
    Planted,
    Conditioned,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::Mc => Method::Mc,
            MethodArg::Planted => Method::Planted,
            MethodArg::Conditioned => Method::Conditioned,
        }
    }
}

/// Accepts `1000000` as well as `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
        Ok(x as u64)
    } else {
        Err(format!("not a nonnegative integer: {s:?}"))
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(untagged)]
enum CountValue {
    #[default]
    Missing,
    Int(u64),
    Text(String),
}

/// Flags shared by the grid subcommands. Lists are comma separated.
#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    /// TOML file with any of these settings (flags override it).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Ground-set sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Progression length for `ap`.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Read the hypergraph from a file instead of building a family.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Additive deviations: threshold μ + t.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    /// Relative deviations: threshold (1 + ε)μ.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Star sizes for `decompose`.
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long, value_parser = parse_count)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, env = "UPTAIL_WORKERS")]
    pub workers: Option<usize>,
    /// Vertex-count boost ε' for `conditioned`: condition on |V_p| >= ⌈(1+ε')Np⌉.
    #[arg(long)]
    pub cond_eps: Option<f64>,
    /// Plant ⌈min{λt, μ+t}⌉ edges with λ = 4/(1-(1-α)^k) instead of μ+t.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Constant C in the Chernoff-type bounds.
    #[arg(long)]
    pub c: Option<f64>,
    /// Constant b in c(ε) = b·min{ε³, √ε}.
    #[arg(long)]
    pub b: Option<f64>,
    /// Constant B in C(ε) = B·max{1, ε²}.
    #[arg(long)]
    pub big_b: Option<f64>,
    /// Cascade β (default 1/(32k)).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Cascade γ (default 1/8).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Exact enumeration is refused above this many vertices.
    #[arg(long)]
    pub exact_max_vertices: Option<usize>,
    /// Contested-edge cap for exact X_r.
    #[arg(long)]
    pub xr_budget: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub out: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    family: Option<FamilyKind>,
    #[serde(default)]
    n: Vec<usize>,
    k: Option<usize>,
    ell: Option<usize>,
    input: Option<PathBuf>,
    #[serde(default)]
    p: Vec<f64>,
    #[serde(default)]
    t: Vec<f64>,
    #[serde(default)]
    eps: Vec<f64>,
    #[serde(default)]
    r: Vec<f64>,
    method: Option<MethodArg>,
    #[serde(default)]
    samples: CountValue,
    seed: Option<u64>,
    workers: Option<usize>,
    cond_eps: Option<f64>,
    alpha: Option<f64>,
    c: Option<f64>,
    b: Option<f64>,
    big_b: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    exact_max_vertices: Option<usize>,
    xr_budget: Option<usize>,
    output: Option<PathBuf>,
    out: Option<Format>,
}

fn pick_vec<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

impl RunArgs {
    /// Fills unset flags from the `--config` file.
    pub fn merged(mut self) -> anyhow::Result<RunArgs> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let f: FileConfig = toml::from_str(&text)
            .map_err(|e| UsageError(format!("bad config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let samples = match f.samples {
            CountValue::Missing => None,
            CountValue::Int(n) => Some(n),
            CountValue::Text(s) => Some(parse_count(&s).map_err(UsageError)?),
        };
        self.family = self.family.or(f.family);
        self.n = pick_vec(self.n, f.n);
        self.k = self.k.or(f.k);
        self.ell = self.ell.or(f.ell);
        self.input = self.input.or(f.input.map(|p| base.join(p)));
        self.p = pick_vec(self.p, f.p);
        self.t = pick_vec(self.t, f.t);
        self.eps = pick_vec(self.eps, f.eps);
        self.r = pick_vec(self.r, f.r);
        self.method = self.method.or(f.method);
        self.samples = self.samples.or(samples);
        self.seed = self.seed.or(f.seed);
        self.workers = self.workers.or(f.workers);
        self.cond_eps = self.cond_eps.or(f.cond_eps);
        self.alpha = self.alpha.or(f.alpha);
        self.c = self.c.or(f.c);
        self.b = self.b.or(f.b);
        self.big_b = self.big_b.or(f.big_b);
        self.beta = self.beta.or(f.beta);
        self.gamma = self.gamma.or(f.gamma);
        self.exact_max_vertices = self.exact_max_vertices.or(f.exact_max_vertices);
        self.xr_budget = self.xr_budget.or(f.xr_budget);
        self.output = self.output.or(f.output);
        self.out = self.out.or(f.out);
        Ok(self)
    }
}

/// Where the hypergraphs come from.
#[derive(Clone, Debug)]
pub enum Source {
    Family(Vec<FamilySpec>),
    File { path: PathBuf, graph: Hypergraph },
}

/// A labelled hypergraph instance.
pub struct Instance {
    pub family: String,
    pub spec: Option<FamilySpec>,
    pub graph: Hypergraph,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.graph.num_vertices()
    }
}

/// How thresholds are derived from the mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Deviation {
    Additive(f64),
    Relative(f64),
}

impl Deviation {
    pub fn threshold(self, mu: f64) -> f64 {
        match self {
            Deviation::Additive(t) => mu + t,
            Deviation::Relative(e) => (1.0 + e) * mu,
        }
    }

    pub fn t(self, mu: f64) -> f64 {
        match self {
            Deviation::Additive(t) => t,
            Deviation::Relative(e) => e * mu,
        }
    }
}

/// Validated settings for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: Source,
    pub p: Vec<f64>,
    pub deviations: Vec<Deviation>,
    pub r: Vec<f64>,
    pub method: Method,
    pub samples: u64,
    pub seed: Option<u64>,
    pub workers: usize,
    pub cond_eps: f64,
    pub alpha: Option<f64>,
    pub c: f64,
    pub b: f64,
    pub big_b: f64,
    pub beta: Option<f64>,
    pub gamma: f64,
    pub exact_max_vertices: usize,
    pub xr_budget: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Which grids a subcommand needs.
#[derive(Clone, Copy, Debug, Default)]
pub struct Needs {
    pub p: bool,
    pub deviation: bool,
    pub r: bool,
    /// Sampling happens even for the exact method.
    pub always_random: bool,
}

fn check_probability(p: f64) -> Result<(), UsageError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(UsageError(format!("p = {p} outside [0,1]")))
    }
}

impl RunConfig {
    pub fn resolve(args: RunArgs, needs: Needs) -> anyhow::Result<Self> {
        let args = args.merged()?;
        let source = match (&args.input, args.family) {
            (Some(_), Some(_)) => usage!("--input and --family are exclusive"),
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
                let graph = read_hypergraph(&text)
                    .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                Source::File {
                    path: path.clone(),
                    graph,
                }
            }
            (None, Some(kind)) => {
                if args.n.is_empty() {
                    usage!("--n is required with --family");
                }
                let specs = args
                    .n
                    .iter()
                    .map(|&n| {
                        let spec = match kind {
                            FamilyKind::Ap => FamilySpec::Ap {
                                n,
                                k: args.k.unwrap_or(3),
                            },
                            FamilyKind::Schur => FamilySpec::Schur { n },
                            FamilyKind::EllSum => FamilySpec::EllSum {
                                n,
                                ell: args.ell.ok_or_else(|| {
                                    UsageError("--ell is required for ell_sum".into())
                                })?,
                            },
                        };
                        spec.validate().map_err(|e| UsageError(e.to_string()))?;
                        Ok(spec)
                    })
                    .collect::<Result<Vec<_>, UsageError>>()?;
                Source::Family(specs)
            }
            (None, None) => usage!("one of --family or --input is required"),
        };

        for &p in &args.p {
            check_probability(p)?;
        }
        if needs.p && args.p.is_empty() {
            usage!("--p needs at least one value");
        }
        let deviations: Vec<Deviation> = match (args.t.is_empty(), args.eps.is_empty()) {
            (false, false) => usage!("--t and --eps are exclusive"),
            (false, true) => args.t.iter().map(|&t| Deviation::Additive(t)).collect(),
            (true, false) => args.eps.iter().map(|&e| Deviation::Relative(e)).collect(),
            (true, true) => Vec::new(),
        };
        if needs.deviation && deviations.is_empty() {
            usage!("one of --t or --eps is required");
        }
        if deviations
            .iter()
            .any(|d| matches!(d, Deviation::Additive(t) | Deviation::Relative(t) if !t.is_finite()))
        {
            usage!("deviations must be finite");
        }
        if needs.r && args.r.is_empty() {
            usage!("--r needs at least one value");
        }
        if args.r.iter().any(|&r| !(r > 0.0)) {
            usage!("--r values must be positive");
        }
        let method: Method = args.method.unwrap_or(MethodArg::Exact).into();
        let random = needs.always_random || method != Method::Exact;
        if random && args.seed.is_none() {
            usage!("--seed is required for sampling runs");
        }
        let samples = args.samples.unwrap_or(100_000);
        if random && samples == 0 {
            usage!("--samples must be positive");
        }
        let workers = match args.workers {
            Some(0) => usage!("--workers must be positive"),
            Some(w) => w,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let exact_max_vertices = args.exact_max_vertices.unwrap_or(EXACT_MAX_VERTICES);
        if exact_max_vertices > EXACT_MAX_VERTICES {
            usage!("--exact-max-vertices cannot exceed {EXACT_MAX_VERTICES}");
        }
        let gamma = args.gamma.unwrap_or(0.125);
        if !(gamma > 0.0 && gamma <= 0.125) {
            usage!("--gamma must lie in (0, 1/8]");
        }
        if let Some(beta) = args.beta {
            if !(beta > 0.0 && beta <= 1.0) {
                usage!("--beta must lie in (0, 1]");
            }
        }
        let cond_eps = args.cond_eps.unwrap_or(0.0);
        if !(cond_eps >= 0.0) {
            usage!("--cond-eps must be nonnegative");
        }
        if let Some(a) = args.alpha {
            if !(a > 0.0 && a <= 1.0) {
                usage!("--alpha must lie in (0, 1]");
            }
        }
        Ok(Self {
            source,
            p: args.p,
            deviations,
            r: args.r,
            method,
            samples,
            seed: args.seed,
            workers,
            cond_eps,
            alpha: args.alpha,
            c: args.c.unwrap_or(1.0),
            b: args.b.unwrap_or(1.0),
            big_b: args.big_b.unwrap_or(1.0),
            beta: args.beta,
            gamma,
            exact_max_vertices,
            xr_budget: args
                .xr_budget
                .unwrap_or(uptail_core::decompose::XR_EDGE_BUDGET),
            output: args.output,
            format: args.out.unwrap_or(Format::Csv),
        })
    }

    pub fn instances(&self) -> anyhow::Result<Vec<Instance>> {
        match &self.source {
            Source::Family(specs) => specs
                .iter()
                .map(|spec| {
                    Ok(Instance {
                        family: spec.kind().to_owned(),
                        spec: Some(*spec),
                        graph: spec.build()?,
                    })
                })
                .collect(),
            Source::File { graph, .. } => Ok(vec![Instance {
                family: "file".into(),
                spec: None,
                graph: graph.clone(),
            }]),
        }
    }
}
