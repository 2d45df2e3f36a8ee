//! Named property suites behind `uptail verify`. Each suite counts checks
//! and collects failure messages instead of panicking.

use std::f64::consts::E;

use rand::Rng;
use uptail_core::bounds::{exact_mean, exact_variance, lb_cluster_bound, phi};
use uptail_core::decompose::{
    check_cascade_event, degree_prune, greedy_star_matching, max_degree_of, star_size, xr_exact,
    CascadeParams, Verdict,
};
use uptail_core::disjointness::{box_product, EventTable};
use uptail_core::estimate::{
    clean_config_point_lower, conditioned_tail, planted_tail, ExactDistribution,
};
use uptail_core::families::{build_ap, build_schur, interval_witness, FamilySpec};
use uptail_core::rng::stream;

pub const SUITES: &[&str] = &[
    "phi",
    "variance",
    "sandwich",
    "bk",
    "cascade",
    "lowerbounds",
];

#[derive(Debug, Default)]
pub struct Report {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
    /// Instances skipped because an exact computation was over budget.
    pub skipped: u64,
}

impl Report {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run(name: &str, seed: u64) -> Option<Report> {
    Some(match name {
        "phi" => phi_suite(),
        "variance" => variance_suite(),
        "sandwich" => sandwich_suite(seed),
        "bk" => bk_suite(seed),
        "cascade" => cascade_suite(seed),
        "lowerbounds" => lower_bound_suite(seed),
        _ => return None,
    })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()) + 1e-300
}

/// The rate function's standard comparisons on a log grid over `[1e-8, 1e4]`.
fn phi_suite() -> Report {
    let mut rep = Report::new("phi");
    let points = 10_000;
    for i in 0..points {
        let x = 10f64.powf(-8.0 + 12.0 * i as f64 / (points - 1) as f64);
        let f = phi(x).expect("x >= 0");
        let slack = 1.0 - 1e-12;
        rep.check(f >= x * x / (2.0 + 2.0 * x / 3.0) * slack, || {
            format!("φ({x}) below Bernstein form")
        });
        rep.check(phi(x / 2.0).unwrap() >= f / 4.0 * slack, || {
            format!("φ({x}/2) < φ({x})/4")
        });
        rep.check(f <= x * x, || format!("φ({x}) > x²"));
        rep.check(f >= x.min(x * x) / 3.0, || format!("φ({x}) < min(x,x²)/3"));
        if x >= E * E {
            rep.check(f >= x / 2.0 * x.ln(), || format!("φ({x}) < x ln(x)/2"));
        }
    }
    rep
}

/// Pair-counting mean and variance against full enumeration.
fn variance_suite() -> Report {
    let mut rep = Report::new("variance");
    let graphs = [
        ("AP(10,3)", build_ap(10, 3).unwrap()),
        ("AP(13,3)", build_ap(13, 3).unwrap()),
        ("AP(12,4)", build_ap(12, 4).unwrap()),
        ("Schur(12)", build_schur(12).unwrap()),
    ];
    for (name, h) in &graphs {
        let dist = ExactDistribution::enumerate(h).unwrap();
        for i in 0..=10 {
            let p = 0.05 + 0.09 * i as f64;
            let (mean, var) = dist.moments(p);
            let formula_mean = exact_mean(h, p).unwrap();
            let formula_var = exact_variance(h, p).unwrap();
            rep.check(rel_close(mean, formula_mean, 1e-10), || {
                format!("{name} p={p}: mean {mean} vs {formula_mean}")
            });
            rep.check(rel_close(var, formula_var, 1e-10), || {
                format!("{name} p={p}: var {var} vs {formula_var}")
            });
        }
    }
    rep
}

/// `X_r <= X <= X_r + k⌈r⌉·M·Δ_1` with the greedy matching size `M`,
/// whenever `Δ_1 > r`; and the degree-pruned edges fit under `X_r`.
fn sandwich_suite(seed: u64) -> Report {
    let mut rep = Report::new("sandwich");
    let mut rng = stream(seed, u64::MAX);
    for i in 0..2000 {
        let n = rng.gen_range(6..=40);
        let h = build_ap(n, 3).unwrap();
        let p = rng.gen_range(0.1..0.7);
        let r = [1.0, 2.0, 3.0, 5.0][i % 4];
        let s = h.sample_vp(p, &mut stream(seed, i as u64)).unwrap();
        let x = h.induced_edge_count(&s).unwrap();
        let delta = max_degree_of(&h, &h.induced_edges(&s).unwrap());
        let m = greedy_star_matching(&h, &s, r).unwrap().len();
        let (kept, _) = degree_prune(&h, &s, r).unwrap();
        let Ok(xr) = xr_exact(&h, &s, r) else {
            rep.skipped += 1;
            continue;
        };
        let slack = if delta as f64 > r {
            h.k() * star_size(r) * m * delta
        } else {
            0
        };
        rep.check(xr <= x && x <= xr + slack, || {
            format!("AP({n},3) p={p} r={r}: X={x} X_r={xr} M={m} Δ={delta}")
        });
        rep.check(kept.len() <= xr, || {
            format!("AP({n},3) r={r}: pruned {} > X_r {xr}", kept.len())
        });
    }
    rep
}

fn random_event(m: usize, rng: &mut impl Rng) -> EventTable {
    let density: f64 = rng.gen_range(0.1..0.9);
    EventTable::from_fn(m, |_| rng.gen::<f64>() < density).unwrap()
}

fn increasing_event(m: usize, rng: &mut impl Rng) -> EventTable {
    let gens: Vec<u32> = (0..rng.gen_range(1..4))
        .map(|_| rng.gen_range(0..1u32 << m))
        .collect();
    EventTable::from_fn(m, |w| gens.iter().any(|&g| g & !w == 0)).unwrap()
}

/// `Pr(A □ B) <= Pr(A)·Pr(B)` on random events in `{0,1}^8`, plus the
/// identities `A □ Ω = A` and `A □ A = ∅` for a single coordinate.
fn bk_suite(seed: u64) -> Report {
    let mut rep = Report::new("bk");
    let m = 8;
    let mut rng = stream(seed, u64::MAX - 1);
    let measures: [Vec<f64>; 3] = [
        vec![0.5; m],
        vec![0.1, 0.9, 0.3, 0.7, 0.2, 0.5, 0.6, 0.05],
        (0..m).map(|_| rng.gen::<f64>()).collect(),
    ];
    let omega = EventTable::full(m).unwrap();
    for i in 0..200 {
        let (a, b) = if i % 2 == 0 {
            (random_event(m, &mut rng), random_event(m, &mut rng))
        } else {
            (increasing_event(m, &mut rng), increasing_event(m, &mut rng))
        };
        let ab = box_product(&a, &b).unwrap();
        rep.check(ab.is_subset(&a.intersection(&b)), || {
            format!("pair {i}: A□B not inside A∩B")
        });
        for probs in &measures {
            let lhs = ab.probability(probs).unwrap();
            let rhs = a.probability(probs).unwrap() * b.probability(probs).unwrap();
            rep.check(lhs <= rhs + 1e-12, || format!("pair {i}: {lhs} > {rhs}"));
        }
        rep.check(box_product(&a, &omega).unwrap() == a, || {
            format!("pair {i}: A□Ω != A")
        });
    }
    for c in 0..m {
        let a = EventTable::coordinate(m, c).unwrap();
        rep.check(box_product(&a, &a).unwrap().count() == 0, || {
            format!("coordinate {c}: A□A nonempty")
        });
    }
    rep
}

/// Whenever the cascade event holds with `β = 1/(32k)` and `r >= 1`,
/// `X <= X_r + t/2`.
fn cascade_suite(seed: u64) -> Report {
    let mut rep = Report::new("cascade");
    let mut rng = stream(seed, u64::MAX - 2);
    let mut held = 0;
    for i in 0..1500 {
        let n = rng.gen_range(8..=30);
        let h = build_ap(n, 3).unwrap();
        let p = rng.gen_range(0.1..0.8);
        let r = [1.0, 1.5, 2.0, 3.0][i % 4];
        let t = rng.gen_range(1.0..30.0);
        let params = CascadeParams::new(1.0 / 96.0, 0.125, r, t, p).unwrap();
        let s = h.sample_vp(p, &mut stream(seed, i as u64)).unwrap();
        if check_cascade_event(&h, &s, &params).unwrap().verdict != Verdict::True {
            continue;
        }
        let Ok(xr) = xr_exact(&h, &s, r) else {
            rep.skipped += 1;
            continue;
        };
        held += 1;
        let x = h.induced_edge_count(&s).unwrap();
        rep.check(x as f64 <= xr as f64 + t / 2.0, || {
            format!("AP({n},3) p={p} r={r} t={t}: X={x} X_r={xr}")
        });
    }
    rep.check(held >= 100, || {
        format!("cascade event held on only {held} samples")
    });
    rep
}

/// Planted, conditioned, cluster and clean-configuration lower bounds never
/// exceed the exact probabilities they bound.
fn lower_bound_suite(seed: u64) -> Report {
    let mut rep = Report::new("lowerbounds");
    for n in [10usize, 12, 14] {
        let spec = FamilySpec::Ap { n, k: 3 };
        let h = spec.build().unwrap();
        let dist = ExactDistribution::enumerate(&h).unwrap();
        for p in [0.1, 0.3, 0.5] {
            let mu = exact_mean(&h, p).unwrap();
            for t in [0.5, 2.0, 4.0] {
                let theta = mu + t;
                let exact = dist.tail(p, theta);
                if let Some(w) = interval_witness(&spec, theta.ceil()).unwrap() {
                    let pl = planted_tail(&h, p, theta, &w, 2000, seed).unwrap();
                    rep.check(pl.p_hat <= exact + 1e-12, || {
                        format!("planted n={n} p={p} t={t}")
                    });
                    if theta >= 1.0 {
                        let d = w.d_used();
                        let lb = lb_cluster_bound(d, mu, t, p).unwrap().value();
                        rep.check(lb <= exact * (1.0 + 1e-12), || {
                            format!("cluster n={n} p={p} t={t}")
                        });
                    }
                }
                if let Ok(c) = conditioned_tail(&h, p, theta, 0.2, 2000, seed) {
                    rep.check(c.p_hat <= exact + 1e-12, || {
                        format!("conditioned n={n} p={p} t={t}")
                    });
                }
            }
            for m in 0..=3 {
                let exact = dist.pmf(p, m);
                for disjoint in [false, true] {
                    let lb = clean_config_point_lower(&h, p, m, disjoint).unwrap();
                    rep.check(lb <= exact * (1.0 + 1e-12), || {
                        format!("clean n={n} p={p} m={m}")
                    });
                }
            }
        }
    }
    rep
}
