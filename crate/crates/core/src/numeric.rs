//! Log-space helpers shared by the bound evaluators and estimators.

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `ln n!`.
pub fn ln_factorial(n: f64) -> f64 {
    libm::lgamma(n + 1.0)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n as f64) - ln_factorial(k as f64) - ln_factorial((n - k) as f64)
}

/// `m·ln x` with the convention `0·ln 0 = 0`.
#[inline]
pub fn xlny(m: f64, x: f64) -> f64 {
    if m == 0.0 {
        0.0
    } else {
        m * libm::log(x)
    }
}

/// `p^m` for integer `m`, exact at the endpoints.
#[inline]
pub fn powu(p: f64, m: usize) -> f64 {
    libm::pow(p, m as f64)
}

/// `1 - p^m`, accurate when `p^m` is close to 1.
#[inline]
pub fn one_minus_pow(p: f64, m: usize) -> f64 {
    if m == 0 {
        0.0
    } else if p == 0.0 {
        1.0
    } else {
        -libm::expm1(m as f64 * libm::log(p))
    }
}

/// `ln Pr(Bin(n, q) = k)`.
pub fn binomial_ln_pmf(n: u64, k: u64, q: f64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let fails = if n == k {
        0.0
    } else {
        (n - k) as f64 * libm::log1p(-q)
    };
    ln_binomial(n, k) + xlny(k as f64, q) + fails
}

/// `Pr(Bin(n, q) >= m)`.
pub fn binomial_upper_tail(n: u64, m: u64, q: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    if m > n {
        return 0.0;
    }
    let s: Neumaier = (m..=n)
        .map(|i| libm::exp(binomial_ln_pmf(n, i, q)))
        .collect();
    s.value().min(1.0)
}

/// Smallest integer `>= x`, clamped below at 0.
#[inline]
pub fn ceil_nonneg(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        libm::ceil(x) as u64
    }
}
