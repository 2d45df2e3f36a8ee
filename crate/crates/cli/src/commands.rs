//! The row-producing subcommands.

use std::collections::HashSet;

use anyhow::Result;
use rayon::prelude::*;
use uptail_core::bounds::{
    binomial_point_lower, et_bound, exact_mean, exact_variance, exponent_ap, exponent_appp,
    exponent_apt, exponent_hg, exponent_hg_lower, exponent_hgp_lower, exponent_hgp_upper, lambda,
    lb_cluster_bound, paley_zygmund_lower, theorem_c_bound, BoundReport,
};
use uptail_core::decompose::{
    check_cascade_event, degree_prune, greedy_star_matching, max_degree_of, mr_exact,
    xr_exact_with_budget, CascadeParams, Verdict,
};
use uptail_core::estimate::{planted_edge_target, Method, TailEstimate};
use uptail_core::families::{greedy_witness, interval_witness, FamilySpec, Witness};
use uptail_core::rng::stream;
use uptail_core::{Error, Hypergraph};

use crate::config::{Deviation, Instance, RunConfig};
use crate::output::{fmt_float, read_rows, Cell, Row, Sink};
use crate::runner;

fn ell_of(spec: Option<FamilySpec>) -> Option<usize> {
    match spec {
        Some(FamilySpec::EllSum { ell, .. }) => Some(ell),
        _ => None,
    }
}

fn open(cfg: &RunConfig, header: &[&'static str]) -> Result<Sink> {
    Sink::open(header, cfg.format, cfg.output.as_deref(), false)
}

pub const FAMILY_HEADER: &[&str] = &[
    "family",
    "n",
    "k",
    "ell",
    "vertices",
    "edges",
    "max_degree",
    "codegree",
];

pub fn family(cfg: &RunConfig) -> Result<()> {
    let mut sink = open(cfg, FAMILY_HEADER)?;
    for inst in cfg.instances()? {
        let h = &inst.graph;
        let codegree = if h.k() >= 2 {
            Some(h.delta_j(2)?)
        } else {
            None
        };
        sink.write(&[
            inst.family.as_str().into(),
            inst.n().into(),
            h.k().into(),
            ell_of(inst.spec).into(),
            h.num_vertices().into(),
            h.num_edges().into(),
            h.max_degree().into(),
            codegree.into(),
        ])?;
    }
    sink.finish()
}

pub const BOUNDS_HEADER: &[&str] = &[
    "family",
    "n",
    "k",
    "p",
    "t",
    "threshold",
    "mu",
    "var",
    "lambda",
    "tag",
    "log_value",
    "value",
    "inputs",
];

fn witness_for(inst: &Instance, x: f64) -> uptail_core::Result<Option<Witness>> {
    match &inst.spec {
        Some(spec) => interval_witness(spec, x),
        None => greedy_witness(&inst.graph, x),
    }
}

fn render_inputs(inputs: &[(&'static str, f64)]) -> String {
    inputs
        .iter()
        .map(|(k, v)| format!("{k}={}", fmt_float(*v)))
        .collect::<Vec<_>>()
        .join(";")
}

/// Every closed-form bound that applies at `(μ, t)`. Inapplicable ones
/// (for instance ratios at μ = 0) are left out.
fn bound_reports(
    cfg: &RunConfig,
    inst: &Instance,
    p: f64,
    mu: f64,
    var: f64,
    lam: f64,
    t: f64,
) -> Vec<BoundReport> {
    let h = &inst.graph;
    let mut out = Vec::new();
    if let Ok(r) = theorem_c_bound(mu, cfg.c, t) {
        out.extend(r);
    }
    let x = ((mu + t) / cfg.c).ceil().max(1.0) as u64;
    if let Ok(r) = et_bound(mu, cfg.c, x) {
        out.extend(r);
    }
    let eps = if mu > 0.0 { t / mu } else { f64::NAN };
    let exponents: [(&'static str, uptail_core::Result<f64>); 8] = [
        ("exponent_hg", exponent_hg(mu, lam, p, t, false)),
        ("exponent_hg_remark", exponent_hg(mu, lam, p, t, true)),
        ("exponent_hg_lower", exponent_hg_lower(mu, lam, p, t, false)),
        ("exponent_hgp_upper", exponent_hgp_upper(mu, p, eps, cfg.b)),
        (
            "exponent_hgp_lower",
            exponent_hgp_lower(mu, p, eps, cfg.big_b),
        ),
        ("exponent_ap", exponent_ap(mu, var, p, eps)),
        ("exponent_apt", exponent_apt(var, p, t)),
        ("exponent_appp", exponent_appp(mu, p)),
    ];
    for (tag, e) in exponents {
        if let Ok(e) = e {
            out.push(BoundReport::new(
                tag,
                -e,
                &[("mu", mu), ("Lambda", lam), ("p", p), ("t", t)],
            ));
        }
    }
    if mu + t >= 1.0 {
        if let Ok(Some(w)) = witness_for(inst, mu + t) {
            if let Ok(r) = lb_cluster_bound(w.d_used(), mu, t, p) {
                out.push(r);
            }
        }
    }
    let q = p.powi(h.k() as i32);
    let m = (mu + t).ceil();
    if m >= 0.0 && m <= h.num_edges() as f64 {
        if let Ok(r) = binomial_point_lower(h.num_edges() as u64, q, m as u64, 0.0) {
            out.extend(r);
        }
    }
    if let Ok(pz) = paley_zygmund_lower(var, t) {
        out.push(BoundReport::new(
            "paley_zygmund",
            pz.ln(),
            &[("var", var), ("t", t)],
        ));
    }
    out
}

pub fn bounds(cfg: &RunConfig) -> Result<()> {
    let mut sink = open(cfg, BOUNDS_HEADER)?;
    for inst in cfg.instances()? {
        let h = &inst.graph;
        for &p in &cfg.p {
            let mu = exact_mean(h, p)?;
            let var = exact_variance(h, p)?;
            let lam = lambda(mu, inst.n(), p, h.k());
            for &dev in &cfg.deviations {
                let t = dev.t(mu);
                for r in bound_reports(cfg, &inst, p, mu, var, lam, t) {
                    sink.write(&[
                        inst.family.as_str().into(),
                        inst.n().into(),
                        h.k().into(),
                        p.into(),
                        t.into(),
                        dev.threshold(mu).into(),
                        mu.into(),
                        var.into(),
                        lam.into(),
                        r.tag.into(),
                        r.log_value.into(),
                        r.value().into(),
                        render_inputs(&r.inputs).into(),
                    ])?;
                }
            }
        }
    }
    sink.finish()
}

/// Per-instance state shared across the p and deviation grids.
struct Estimator<'a> {
    cfg: &'a RunConfig,
    pool: rayon::ThreadPool,
    exact: Option<(usize, uptail_core::estimate::ExactDistribution)>,
}

impl<'a> Estimator<'a> {
    fn new(cfg: &'a RunConfig) -> Self {
        Self {
            cfg,
            pool: runner::pool(cfg.workers),
            exact: None,
        }
    }

    /// `Ok(None)` when the planted method finds no witness.
    fn estimate(
        &mut self,
        key: usize,
        inst: &Instance,
        p: f64,
        dev: Deviation,
    ) -> uptail_core::Result<Option<TailEstimate>> {
        let cfg = self.cfg;
        let h: &Hypergraph = &inst.graph;
        let mu = exact_mean(h, p)?;
        let threshold = dev.threshold(mu);
        let seed = cfg.seed.unwrap_or(0);
        Ok(Some(match cfg.method {
            Method::Exact => {
                if h.num_vertices() > cfg.exact_max_vertices {
                    return Err(Error::Capacity {
                        what: "exact enumeration vertices",
                        limit: cfg.exact_max_vertices as u64,
                        got: h.num_vertices() as u64,
                    });
                }
                if self.exact.as_ref().is_none_or(|(k, _)| *k != key) {
                    self.exact = Some((key, runner::exact_distribution(&self.pool, h)?));
                }
                let (_, dist) = self.exact.as_ref().expect("just filled");
                uptail_core::estimate::exact_estimate(dist, p, threshold)
            }
            Method::Mc => runner::mc_tail(&self.pool, h, p, threshold, cfg.samples, seed)?,
            Method::Planted => {
                let t = dev.t(mu);
                let target = match cfg.alpha {
                    Some(a) => planted_edge_target(mu, t, a, h.k()),
                    None => threshold.ceil(),
                }
                .max(0.0);
                let Some(w) = witness_for(inst, target)? else {
                    return Ok(None);
                };
                runner::planted_tail(&self.pool, h, p, threshold, &w, cfg.samples, seed)?
            }
            Method::Conditioned => runner::conditioned_tail(
                &self.pool,
                h,
                p,
                threshold,
                cfg.cond_eps,
                cfg.samples,
                seed,
            )?,
        }))
    }
}

pub const TAIL_HEADER: &[&str] = &[
    "family",
    "n",
    "k",
    "p",
    "threshold",
    "method",
    "p_hat",
    "ci_low",
    "ci_high",
    "samples",
    "seed",
];

fn estimate_cells(est: Option<&TailEstimate>) -> [Cell; 4] {
    match est {
        Some(e) => [
            e.p_hat.into(),
            e.ci_low.into(),
            e.ci_high.into(),
            e.samples.into(),
        ],
        None => [Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
    }
}

pub fn tail(cfg: &RunConfig) -> Result<()> {
    let mut sink = open(cfg, TAIL_HEADER)?;
    let mut est = Estimator::new(cfg);
    for (key, inst) in cfg.instances()?.iter().enumerate() {
        let h = &inst.graph;
        for &p in &cfg.p {
            let mu = exact_mean(h, p)?;
            for &dev in &cfg.deviations {
                let e = est.estimate(key, inst, p, dev)?;
                let [p_hat, lo, hi, samples] = estimate_cells(e.as_ref());
                sink.write(&[
                    inst.family.as_str().into(),
                    inst.n().into(),
                    h.k().into(),
                    p.into(),
                    dev.threshold(mu).into(),
                    cfg.method.name().into(),
                    p_hat,
                    lo,
                    hi,
                    samples,
                    cfg.seed.into(),
                ])?;
            }
        }
    }
    sink.finish()
}

pub const SWEEP_HEADER: &[&str] = &[
    "family",
    "n",
    "k",
    "p",
    "t",
    "eps",
    "threshold",
    "method",
    "p_hat",
    "ci_low",
    "ci_high",
    "samples",
    "seed",
    "status",
];
/// Columns identifying a sweep point, for resuming.
const SWEEP_KEY: &[&str] = &["family", "n", "k", "p", "t", "eps", "method", "seed"];

/// Cross product of the grids, one row per point. Points already present in
/// the output file are skipped and new rows are appended.
pub fn sweep(cfg: &RunConfig) -> Result<()> {
    let existing = match &cfg.output {
        Some(path) => read_rows(path, cfg.format)?,
        None => Vec::new(),
    };
    let done: HashSet<Vec<String>> = existing
        .iter()
        .map(|row| {
            SWEEP_KEY
                .iter()
                .map(|k| {
                    row.iter()
                        .find(|(c, _)| c == k)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_default()
                })
                .collect()
        })
        .collect();
    let append = cfg
        .output
        .as_ref()
        .is_some_and(|p| p.exists() && !existing.is_empty());
    let mut sink = Sink::open(SWEEP_HEADER, cfg.format, cfg.output.as_deref(), append)?;
    let mut est = Estimator::new(cfg);
    for (key, inst) in cfg.instances()?.iter().enumerate() {
        let h = &inst.graph;
        for &p in &cfg.p {
            let mu = exact_mean(h, p)?;
            for &dev in &cfg.deviations {
                let (t, eps) = match dev {
                    Deviation::Additive(t) => (Cell::Float(t), Cell::Empty),
                    Deviation::Relative(e) => (Cell::Empty, Cell::Float(e)),
                };
                let mut row: Row = vec![
                    inst.family.as_str().into(),
                    inst.n().into(),
                    h.k().into(),
                    p.into(),
                    t,
                    eps,
                    dev.threshold(mu).into(),
                    cfg.method.name().into(),
                ];
                let id: Vec<String> = [0, 1, 2, 3, 4, 5, 7]
                    .iter()
                    .map(|&i| row[i].render())
                    .chain(std::iter::once(Cell::from(cfg.seed).render()))
                    .collect();
                if done.contains(&id) {
                    continue;
                }
                let (e, status) = match est.estimate(key, inst, p, dev) {
                    Ok(Some(e)) => (Some(e), "ok"),
                    Ok(None) => (None, "no_witness"),
                    Err(Error::Capacity { .. }) => (None, "budget"),
                    Err(e) => return Err(e.into()),
                };
                row.extend(estimate_cells(e.as_ref()));
                row.push(cfg.seed.into());
                row.push(status.into());
                sink.write(&row)?;
            }
        }
    }
    sink.finish()
}

pub const DECOMPOSE_HEADER: &[&str] = &[
    "family",
    "n",
    "k",
    "p",
    "r",
    "sample",
    "x",
    "delta1",
    "greedy",
    "mr",
    "xr",
    "pruned",
    "t",
    "cascade_verdict",
];

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Indeterminate => "indeterminate",
    }
}

/// One row per sampled `V_p`: `X`, `Δ_1`, greedy and exact star
/// matchings, exact `X_r`, the degree-pruned edge count and, with a
/// deviation grid, the cascade event verdict. Over-budget exact values are
/// left empty.
pub fn decompose(cfg: &RunConfig) -> Result<()> {
    let mut sink = open(cfg, DECOMPOSE_HEADER)?;
    let pool = runner::pool(cfg.workers);
    let seed = cfg.seed.expect("validated");
    let devs: Vec<Option<Deviation>> = if cfg.deviations.is_empty() {
        vec![None]
    } else {
        cfg.deviations.iter().copied().map(Some).collect()
    };
    for inst in cfg.instances()? {
        let h = &inst.graph;
        let k = h.k();
        for &p in &cfg.p {
            let mu = exact_mean(h, p)?;
            for &r in &cfg.r {
                for &dev in &devs {
                    let rows: Vec<Row> = pool.install(|| {
                        (0..cfg.samples)
                            .into_par_iter()
                            .map(|i| -> Result<Row> {
                                let s = h.sample_vp(p, &mut stream(seed, i))?;
                                let induced = h.induced_edges(&s)?;
                                let greedy = greedy_star_matching(h, &s, r)?.len();
                                let mr = mr_exact(h, &s, r).ok();
                                let xr = xr_exact_with_budget(h, &s, r, cfg.xr_budget).ok();
                                let (kept, _) = degree_prune(h, &s, r)?;
                                let (t, verdict) = match dev {
                                    Some(d) => {
                                        let t = d.t(mu);
                                        let beta = cfg.beta.unwrap_or(1.0 / (32.0 * k as f64));
                                        let v = CascadeParams::new(beta, cfg.gamma, r, t, p)
                                            .and_then(|params| check_cascade_event(h, &s, &params))
                                            .map(|c| verdict_name(c.verdict));
                                        (Cell::Float(t), Cell::from(v.ok()))
                                    }
                                    None => (Cell::Empty, Cell::Empty),
                                };
                                Ok(vec![
                                    inst.family.as_str().into(),
                                    inst.n().into(),
                                    k.into(),
                                    p.into(),
                                    r.into(),
                                    i.into(),
                                    induced.len().into(),
                                    max_degree_of(h, &induced).into(),
                                    greedy.into(),
                                    mr.into(),
                                    xr.into(),
                                    kept.len().into(),
                                    t,
                                    verdict,
                                ])
                            })
                            .collect::<Result<_>>()
                    })?;
                    for row in rows {
                        sink.write(&row)?;
                    }
                }
            }
        }
    }
    sink.finish()
}
