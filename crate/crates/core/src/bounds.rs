//! Closed-form tail bounds and exponents, evaluated in natural-log space.
//!
//! Every probability bound is returned as a [`BoundReport`] whose
//! `log_value` may be `-inf`. Exponent evaluators return the positive
//! quantity `E` in `exp(-c·E)`; the existential constants are left to the
//! caller.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::ensure;
use crate::numeric::{ln_binomial, ln_factorial, one_minus_pow, powu, xlny, Neumaier};
use crate::{Hypergraph, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub tag: &'static str,
    pub log_value: f64,
    pub inputs: Vec<(&'static str, f64)>,
}

impl BoundReport {
    pub fn new(tag: &'static str, log_value: f64, inputs: &[(&'static str, f64)]) -> Self {
        Self {
            tag,
            log_value,
            inputs: inputs.to_vec(),
        }
    }

    pub fn value(&self) -> f64 {
        libm::exp(self.log_value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentReport {
    pub mu: f64,
    pub var: f64,
    pub lambda: f64,
}

#[inline]
fn ln_inv(p: f64) -> f64 {
    if p >= 1.0 {
        0.0
    } else {
        -libm::log(p)
    }
}

pub(crate) fn phi_unchecked(x: f64) -> f64 {
    if x < 0.1 {
        // Σ_{m≥0} (-1)^m x^{m+2} / ((m+1)(m+2)); 20 terms reach 1e-22 at x=0.1.
        let mut s = 0.0;
        let mut pow = x * x;
        for m in 0..20 {
            let term = pow / ((m + 1) * (m + 2)) as f64;
            s += if m % 2 == 0 { term } else { -term };
            pow *= x;
        }
        s
    } else {
        (1.0 + x) * libm::log1p(x) - x
    }
}

/// `φ(x) = (1+x)ln(1+x) - x`.
pub fn phi(x: f64) -> Result<f64> {
    ensure!(x >= 0.0, "phi needs x >= 0, got {x}");
    Ok(phi_unchecked(x))
}

pub fn exact_mean(h: &Hypergraph, p: f64) -> Result<f64> {
    ensure!((0.0..=1.0).contains(&p), "probability {p} outside [0,1]");
    Ok(h.num_edges() as f64 * powu(p, h.k()))
}

/// Counts ordered pairs of intersecting edges by union size:
/// `profile[u - k]` is the number of pairs `(e, f)` with `|e ∪ f| = u`,
/// for `u` in `k..2k`. Pairs with `e = f` land in `profile[0]`.
///
/// Each edge's neighbours are reached through the incidence lists of its
/// vertices; a stamp array makes every pair count once.
pub fn intersection_profile(h: &Hypergraph) -> Vec<u64> {
    let k = h.k();
    let mut profile = vec![0u64; k];
    let mut stamp = vec![u32::MAX; h.num_edges()];
    for (ei, e) in h.edges().enumerate() {
        for &v in e {
            for &fi in h.incident(v as usize) {
                if stamp[fi as usize] == ei as u32 {
                    continue;
                }
                stamp[fi as usize] = ei as u32;
                let shared = sorted_overlap(e, h.edge(fi as usize));
                profile[k - shared] += 1;
            }
        }
    }
    profile
}

fn sorted_overlap(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// `Var X = Σ p^u (1 - p^{2k-u})` over intersecting ordered pairs.
pub fn variance_from_profile(profile: &[u64], k: usize, p: f64) -> f64 {
    let mut s = Neumaier::new();
    for (i, &count) in profile.iter().enumerate() {
        let u = k + i;
        s.add(count as f64 * powu(p, u) * one_minus_pow(p, 2 * k - u));
    }
    s.value()
}

pub fn exact_variance(h: &Hypergraph, p: f64) -> Result<f64> {
    ensure!((0.0..=1.0).contains(&p), "probability {p} outside [0,1]");
    Ok(variance_from_profile(&intersection_profile(h), h.k(), p))
}

/// `Λ = μ(1 + n p^{k-1})` with the family's ground-set size `n`.
pub fn lambda(mu: f64, n: usize, p: f64, k: usize) -> f64 {
    mu * (1.0 + n as f64 * powu(p, k - 1))
}

pub fn moments(h: &Hypergraph, n: usize, p: f64) -> Result<MomentReport> {
    let mu = exact_mean(h, p)?;
    Ok(MomentReport {
        mu,
        var: exact_variance(h, p)?,
        lambda: lambda(mu, n, p, h.k()),
    })
}

/// The three Chernoff-type forms for `Pr(Z_C >= μ + t)`, strongest first:
/// `chernoff_phi` (`-φ(t/μ)μ/C`), `chernoff_bernstein`
/// (`-t²/(2C(μ+t/3))`) and `chernoff_log` (`-(t/2C)·ln(1+t/2μ)`).
pub fn theorem_c_bound(mu: f64, c: f64, t: f64) -> Result<[BoundReport; 3]> {
    ensure!(c > 0.0, "C must be positive, got {c}");
    ensure!(t > 0.0, "t must be positive, got {t}");
    ensure!(mu >= 0.0, "mu must be nonnegative, got {mu}");
    let inputs = [("mu", mu), ("C", c), ("t", t)];
    let first = if mu == 0.0 {
        f64::NEG_INFINITY
    } else {
        -phi_unchecked(t / mu) * mu / c
    };
    let second = -t * t / (2.0 * c * (mu + t / 3.0));
    let third = if mu == 0.0 {
        f64::NEG_INFINITY
    } else {
        -(t / (2.0 * c)) * libm::log1p(t / (2.0 * mu))
    };
    let below = |a: f64, b: f64| a <= b || a <= b + 1e-9 * b.abs().max(1.0);
    assert!(
        below(first, second) && below(first, third),
        "Chernoff chain broken at mu={mu} C={c} t={t}: {first} {second} {third}"
    );
    Ok([
        BoundReport::new("chernoff_phi", first, &inputs),
        BoundReport::new("chernoff_bernstein", second, &inputs),
        BoundReport::new("chernoff_log", third, &inputs),
    ])
}

/// `Pr(Z_C >= xC) <= (μ/C)^x / x!` (`disjoint_factorial`) and its Stirling
/// relaxation `x·ln(eμ/(xC)) - ½ln(2πx)` (`disjoint_stirling`).
pub fn et_bound(mu: f64, c: f64, x: u64) -> Result<[BoundReport; 2]> {
    ensure!(c > 0.0, "C must be positive, got {c}");
    ensure!(x >= 1, "x must be a positive integer");
    ensure!(mu >= 0.0, "mu must be nonnegative, got {mu}");
    let xf = x as f64;
    let inputs = [("mu", mu), ("C", c), ("x", xf)];
    let exact = xf * libm::log(mu / c) - ln_factorial(xf);
    let stirling =
        xf * (1.0 + libm::log(mu / (xf * c))) - 0.5 * libm::log(2.0 * core::f64::consts::PI * xf);
    Ok([
        BoundReport::new("disjoint_factorial", exact, &inputs),
        BoundReport::new("disjoint_stirling", stirling, &inputs),
    ])
}

fn check_p(p: f64) -> Result<()> {
    ensure!(p > 0.0 && p <= 1.0, "probability {p} outside (0,1]");
    Ok(())
}

/// `min{μ, √μ·ln(1/p)}`.
pub fn exponent_appp(mu: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    ensure!(mu >= 0.0, "mu must be nonnegative, got {mu}");
    Ok(mu.min(libm::sqrt(mu) * ln_inv(p)))
}

/// `min{φ(ε)μ²/Var, √(εμ)·ln(1/p)}`.
pub fn exponent_ap(mu: f64, var: f64, p: f64, eps: f64) -> Result<f64> {
    check_p(p)?;
    ensure!(var > 0.0, "variance must be positive, got {var}");
    ensure!(eps > 0.0, "eps must be positive, got {eps}");
    Ok((phi_unchecked(eps) * mu * mu / var).min(libm::sqrt(eps * mu) * ln_inv(p)))
}

/// `min{t²/Var, √t·ln(1/p)}`.
pub fn exponent_apt(var: f64, p: f64, t: f64) -> Result<f64> {
    check_p(p)?;
    ensure!(var > 0.0, "variance must be positive, got {var}");
    ensure!(t > 0.0, "t must be positive, got {t}");
    Ok((t * t / var).min(libm::sqrt(t) * ln_inv(p)))
}

fn hg_first_term(mu: f64, lambda: f64, t: f64, use_remark: bool) -> f64 {
    if use_remark {
        t * t / lambda
    } else {
        phi_unchecked(t / mu) * mu * mu / lambda
    }
}

/// Upper-tail exponent `min{φ(t/μ)μ²/Λ, √t·ln(e/p)}`; with `use_remark`
/// the first term is `t²/Λ`.
pub fn exponent_hg(mu: f64, lambda: f64, p: f64, t: f64, use_remark: bool) -> Result<f64> {
    check_p(p)?;
    ensure!(lambda > 0.0 && mu > 0.0, "mu and Lambda must be positive");
    ensure!(t > 0.0, "t must be positive, got {t}");
    Ok(hg_first_term(mu, lambda, t, use_remark).min(libm::sqrt(t) * (1.0 + ln_inv(p))))
}

/// The lower-tail counterpart of [`exponent_hg`], with `ln(1/p)`.
pub fn exponent_hg_lower(mu: f64, lambda: f64, p: f64, t: f64, use_remark: bool) -> Result<f64> {
    check_p(p)?;
    ensure!(lambda > 0.0 && mu > 0.0, "mu and Lambda must be positive");
    ensure!(t > 0.0, "t must be positive, got {t}");
    Ok(hg_first_term(mu, lambda, t, use_remark).min(libm::sqrt(t) * ln_inv(p)))
}

/// `b·min{ε³, √ε}`.
pub fn c_eps(eps: f64, b: f64) -> f64 {
    b * (eps * eps * eps).min(libm::sqrt(eps))
}

/// `B·max{1, ε²}`.
pub fn big_c_eps(eps: f64, big_b: f64) -> f64 {
    big_b * (eps * eps).max(1.0)
}

/// Relative-deviation upper exponent `c(ε)·min{μ, √μ·ln(e/p)}`.
pub fn exponent_hgp_upper(mu: f64, p: f64, eps: f64, b: f64) -> Result<f64> {
    check_p(p)?;
    ensure!(mu >= 0.0 && eps > 0.0, "need mu >= 0 and eps > 0");
    Ok(c_eps(eps, b) * mu.min(libm::sqrt(mu) * (1.0 + ln_inv(p))))
}

/// Relative-deviation lower exponent `C(ε)·min{μ, √μ·ln(1/p)}`.
pub fn exponent_hgp_lower(mu: f64, p: f64, eps: f64, big_b: f64) -> Result<f64> {
    check_p(p)?;
    ensure!(mu >= 0.0 && eps > 0.0, "need mu >= 0 and eps > 0");
    Ok(big_c_eps(eps, big_b) * mu.min(libm::sqrt(mu) * ln_inv(p)))
}

/// `Pr(X >= μ+t) >= exp(-D√(μ+t)·ln(1/p))` (`cluster_lower`).
pub fn lb_cluster_bound(d: f64, mu: f64, t: f64, p: f64) -> Result<BoundReport> {
    check_p(p)?;
    ensure!(t >= 0.0, "t must be nonnegative, got {t}");
    ensure!(mu + t >= 1.0, "need mu + t >= 1, got {}", mu + t);
    ensure!(d >= 0.0, "D must be nonnegative, got {d}");
    Ok(BoundReport::new(
        "cluster_lower",
        -d * libm::sqrt(mu + t) * ln_inv(p),
        &[("D", d), ("mu", mu), ("t", t), ("p", p)],
    ))
}

/// `e^{-b}·C(N,m) q^m (1-q)^{N-m}` (`binomial_point`), plus the Stirling
/// lower form `binomial_point_stirling` when `Nq <= m` and `1 <= m < N`.
pub fn binomial_point_lower(n: u64, q: f64, m: u64, b: f64) -> Result<Vec<BoundReport>> {
    ensure!(q > 0.0 && q < 1.0, "q must lie in (0,1), got {q}");
    ensure!(m <= n, "m = {m} exceeds N = {n}");
    ensure!(b >= 0.0, "b must be nonnegative, got {b}");
    let inputs = [("N", n as f64), ("q", q), ("m", m as f64), ("b", b)];
    let exact = -b + ln_binomial(n, m) + xlny(m as f64, q) + (n - m) as f64 * libm::log1p(-q);
    let mut out = vec![BoundReport::new("binomial_point", exact, &inputs)];
    let mu = n as f64 * q;
    let mf = m as f64;
    if m >= 1 && m < n && mf >= mu {
        let j = mf - mu;
        let stirling = -b
            - 1.0 / 6.0
            - phi_unchecked(j / mu) * mu
            - j * j / ((1.0 - q) * n as f64)
            - 0.5 * libm::log(2.0 * core::f64::consts::PI * mf);
        out.push(BoundReport::new(
            "binomial_point_stirling",
            stirling,
            &inputs,
        ));
    }
    Ok(out)
}

/// `Pr(Y >= EY - t) >= t²/(Var Y + t²)`.
pub fn paley_zygmund_lower(var: f64, t: f64) -> Result<f64> {
    ensure!(t > 0.0, "t must be positive, got {t}");
    ensure!(var >= 0.0, "variance must be nonnegative, got {var}");
    Ok(t * t / (var + t * t))
}

/// `E_m X = e(H)·Π_{i<k} (m-i)/(N-i)` under the uniform m-subset model.
pub fn hypergeom_conditional_mean(h: &Hypergraph, m: usize) -> Result<f64> {
    let n = h.num_vertices();
    ensure!(m <= n, "subset size {m} exceeds vertex count {n}");
    let k = h.k();
    if m < k {
        return Ok(0.0);
    }
    let ratio: f64 = (0..k).map(|i| (m - i) as f64 / (n - i) as f64).product();
    Ok(h.num_edges() as f64 * ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_ap;
    use crate::numeric::binomial_ln_pmf;
    use crate::VertexSet;
    use proptest::prelude::*;

    const LN2: f64 = core::f64::consts::LN_2;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0).unwrap(), 0.0);
        assert!(close(phi(1.0).unwrap(), 2.0 * LN2 - 1.0, 1e-15));
        assert!(close(phi(1e-8).unwrap(), 0.5e-16, 1e-6));
        assert!(phi(-0.1).is_err());
        // The series and the closed form meet at the switch point.
        let x = 0.1f64;
        assert!(close(
            phi_unchecked(x),
            (1.0 + x) * libm::log1p(x) - x,
            1e-13
        ));
    }

    fn log_grid(points: usize) -> impl Iterator<Item = f64> {
        (0..points).map(move |i| libm::pow(10.0, -8.0 + 12.0 * i as f64 / (points - 1) as f64))
    }

    #[test]
    fn phi_inequalities_on_grid() {
        for x in log_grid(10_000) {
            let f = phi_unchecked(x);
            assert!(
                f >= x * x / (2.0 + 2.0 * x / 3.0) * (1.0 - 1e-12),
                "x1 at {x}"
            );
            assert!(
                phi_unchecked(x / 2.0) >= f / 4.0 * (1.0 - 1e-12),
                "x2 at {x}"
            );
            assert!(f <= x * x, "x3 at {x}");
            assert!(f >= x.min(x * x) / 3.0, "x4 at {x}");
            if x >= core::f64::consts::E * core::f64::consts::E {
                assert!(f >= x / 2.0 * libm::log(x), "large-x at {x}");
            }
        }
    }

    #[test]
    fn mean_examples() {
        let single = Hypergraph::new(3, 4, [[0, 1, 2]]).unwrap();
        let ap5 = build_ap(5, 3).unwrap();
        assert_eq!(exact_mean(&ap5, 0.5).unwrap(), 0.5);
        assert_eq!(exact_mean(&ap5, 1.0).unwrap(), 4.0);
        assert_eq!(exact_mean(&ap5, 0.0).unwrap(), 0.0);
        assert!(exact_mean(&single, 1.2).is_err());
    }

    #[test]
    fn variance_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        assert!(close(exact_variance(&ap4, 0.5).unwrap(), 5.0 / 16.0, 1e-15));
        assert_eq!(exact_variance(&ap4, 0.0).unwrap(), 0.0);
        assert_eq!(exact_variance(&ap4, 1.0).unwrap(), 0.0);
        let single = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert!(close(
            exact_variance(&single, 0.5).unwrap(),
            7.0 / 64.0,
            1e-15
        ));
    }

    /// Mean and variance of X from all 2^N subsets, independent of the
    /// pair-counting formula.
    fn enumerated_moments(h: &Hypergraph, p: f64) -> (f64, f64) {
        let n = h.num_vertices();
        let (mut m1, mut m2) = (0.0, 0.0);
        for mask in 0u64..1 << n {
            let s = VertexSet::from_mask(n, mask);
            let x = h.induced_edge_count(&s).unwrap() as f64;
            let c = mask.count_ones() as usize;
            let w = powu(p, c) * powu(1.0 - p, n - c);
            m1 += w * x;
            m2 += w * x * x;
        }
        (m1, m2 - m1 * m1)
    }

    #[test]
    fn variance_matches_enumeration() {
        for h in [
            build_ap(9, 3).unwrap(),
            build_ap(10, 4).unwrap(),
            crate::families::build_schur(11).unwrap(),
        ] {
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                let (mean, var) = enumerated_moments(&h, p);
                assert!(close(exact_mean(&h, p).unwrap(), mean, 1e-10));
                let v = exact_variance(&h, p).unwrap();
                assert!(
                    (v - var).abs() <= 1e-10 * var.abs().max(1e-12),
                    "p={p}: {v} vs {var}"
                );
            }
        }
    }

    #[test]
    fn chernoff_examples() {
        let [first, _, _] = theorem_c_bound(1.0, 1.0, 1.0).unwrap();
        assert!(close(first.log_value, -(2.0 * LN2 - 1.0), 1e-14));
        assert_eq!(first.tag, "chernoff_phi");
        assert_eq!(
            theorem_c_bound(0.0, 1.0, 1.0).unwrap()[0].log_value,
            f64::NEG_INFINITY
        );
        let [a, b, c] = theorem_c_bound(1.0, 1.0, 3.0).unwrap();
        assert!(close(a.log_value, -phi_unchecked(3.0), 1e-14));
        assert!(close(b.log_value, -9.0 / 4.0, 1e-14));
        assert!(close(c.log_value, -1.5 * libm::log(2.5), 1e-14));
        assert!(a.log_value <= b.log_value && a.log_value <= c.log_value);
        assert!(theorem_c_bound(1.0, 0.0, 1.0).is_err());
        assert!(theorem_c_bound(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn et_examples() {
        assert_eq!(et_bound(2.0, 2.0, 1).unwrap()[0].log_value, 0.0);
        assert!(close(
            et_bound(1.0, 1.0, 3).unwrap()[0].log_value,
            -libm::log(6.0),
            1e-14
        ));
        let [f, s] = et_bound(2.0, 1.0, 4).unwrap();
        assert!(close(f.log_value, libm::log(16.0 / 24.0), 1e-13));
        assert!(s.log_value >= f.log_value);
        assert!(et_bound(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn exponent_examples() {
        let e1 = libm::exp(-1.0);
        assert!(close(exponent_appp(100.0, e1).unwrap(), 10.0, 1e-14));
        assert_eq!(exponent_appp(100.0, 1.0).unwrap(), 0.0);
        assert_eq!(exponent_appp(1.0, libm::exp(-2.0)).unwrap(), 1.0);

        // φ(1)·4/2 = 2φ(1) < √2·1.
        assert!(close(
            exponent_ap(2.0, 2.0, e1, 1.0).unwrap(),
            2.0 * phi_unchecked(1.0),
            1e-14
        ));
        assert_eq!(exponent_ap(2.0, 2.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(close(
            exponent_ap(100.0, 1.0, e1, 1.0).unwrap(),
            10.0,
            1e-14
        ));

        assert_eq!(exponent_apt(1.0, e1, 4.0).unwrap(), 2.0);
        assert_eq!(exponent_apt(100.0, e1, 4.0).unwrap(), 0.16);
        assert_eq!(exponent_apt(1.0, 1.0, 4.0).unwrap(), 0.0);
        assert!(exponent_apt(0.0, 0.5, 1.0).is_err());

        // ln(e/p) = 2 at p = 1/e.
        assert!(close(
            exponent_hg(1.0, 1.0, e1, 100.0, true).unwrap(),
            20.0,
            1e-14
        ));
        assert!(close(
            exponent_hg_lower(1.0, 1.0, e1, 100.0, true).unwrap(),
            10.0,
            1e-14
        ));
        assert!(close(
            exponent_hg(1.0, 2.0, 1.0, 1.0, false).unwrap(),
            phi_unchecked(1.0) / 2.0,
            1e-14
        ));
        assert_eq!(exponent_hg(1.0, 2.0, 1.0, 4.0, true).unwrap(), 2.0);
    }

    #[test]
    fn hg_remark_term_dominates() {
        for mu in log_grid(60) {
            for t in log_grid(60) {
                let lam = mu * 1.7;
                let a = exponent_hg(mu * 1e4, lam, 0.5, t, false).unwrap();
                let b = exponent_hg(mu * 1e4, lam, 0.5, t, true).unwrap();
                assert!(a <= b * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn cluster_and_pz_examples() {
        assert_eq!(lb_cluster_bound(3.0, 4.0, 5.0, 1.0).unwrap().log_value, 0.0);
        assert!(close(
            lb_cluster_bound(1.0, 0.5, 0.5, libm::exp(-1.0))
                .unwrap()
                .log_value,
            -1.0,
            1e-15
        ));
        assert!(close(
            lb_cluster_bound(2.0, 3.0, 6.0, 0.5).unwrap().log_value,
            -6.0 * LN2,
            1e-14
        ));
        assert!(lb_cluster_bound(1.0, 0.2, 0.2, 0.5).is_err());
        assert_eq!(paley_zygmund_lower(0.0, 2.0).unwrap(), 1.0);
        assert_eq!(paley_zygmund_lower(4.0, 2.0).unwrap(), 0.5);
        assert_eq!(paley_zygmund_lower(12.0, 2.0).unwrap(), 0.25);
    }

    #[test]
    fn binomial_point_examples() {
        let r = binomial_point_lower(7, 0.3, 0, 0.0).unwrap();
        assert!(close(r[0].log_value, 7.0 * libm::log(0.7), 1e-14));
        let r = binomial_point_lower(2, 0.5, 1, 0.0).unwrap();
        assert!(close(r[0].log_value, -LN2, 1e-14));
        let r = binomial_point_lower(100, 0.1, 20, 0.0).unwrap();
        let exact = binomial_ln_pmf(100, 20, 0.1);
        assert!(close(r[0].log_value, exact, 1e-12));
        assert!(r[1].log_value <= exact);
        let r = binomial_point_lower(100, 0.1, 20, 1.5).unwrap();
        assert!(close(r[0].log_value, exact - 1.5, 1e-12));
    }

    #[test]
    fn stirling_binomial_form_is_a_lower_bound() {
        for n in [5u64, 20, 100, 1000] {
            for q in [0.01, 0.1, 0.3, 0.5, 0.9] {
                for m in 1..n {
                    if let Some(s) = binomial_point_lower(n, q, m, 0.0).unwrap().get(1) {
                        assert!(
                            s.log_value <= binomial_ln_pmf(n, m, q) + 1e-12,
                            "n={n} q={q} m={m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hypergeom_examples() {
        let ap4 = build_ap(4, 3).unwrap();
        assert_eq!(hypergeom_conditional_mean(&ap4, 4).unwrap(), 2.0);
        assert_eq!(hypergeom_conditional_mean(&ap4, 2).unwrap(), 0.0);
        assert!(close(
            hypergeom_conditional_mean(&ap4, 3).unwrap(),
            0.5,
            1e-15
        ));
        assert!(hypergeom_conditional_mean(&ap4, 5).is_err());
    }

    proptest! {
        #[test]
        fn chernoff_chain_holds(mu in 1e-6f64..1e4, c in 0.01f64..100.0, t in 1e-6f64..1e5) {
            let [a, b, d] = theorem_c_bound(mu, c, t).unwrap();
            prop_assert!(a.log_value <= b.log_value + 1e-9 * b.log_value.abs().max(1.0));
            prop_assert!(a.log_value <= d.log_value + 1e-9 * d.log_value.abs().max(1.0));
            prop_assert!(a.log_value <= 0.0);
        }

        #[test]
        fn et_stirling_is_weaker(mu in 1e-3f64..1e3, c in 0.1f64..10.0, x in 1u64..500) {
            let [f, s] = et_bound(mu, c, x).unwrap();
            prop_assert!(f.log_value <= s.log_value + 1e-9);
        }

        #[test]
        fn phi_is_quadratically_bounded(x in 0.0f64..1e4) {
            let f = phi(x).unwrap();
            prop_assert!(f >= 0.0 && f <= x * x);
        }
    }
}
