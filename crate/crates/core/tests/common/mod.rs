//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the library's numerics; each oracle follows a
//! different route (quadrature, direct series, classical closed forms).

#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [−1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre quadrature of `f` over [a, b].
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        for (x, w) in rule {
            total += w * 0.5 * h * f(mid + 0.5 * h * x);
        }
    }
    total
}

/// J₀(x) = (1/π) ∫₀^π cos(x sin θ) dθ by the trapezoid rule, which is
/// spectrally accurate for this periodic integrand.
pub fn j0_integral(x: f64) -> f64 {
    let n = 4000;
    let h = PI / n as f64;
    let mut s = 0.5 * (1.0 + (x * PI.sin()).cos());
    for k in 1..n {
        s += (x * (h * k as f64).sin()).cos();
    }
    s * h / PI
}

/// J₀ from 60 terms of Σ (−x²/4)^k / (k!)².
pub fn j0_series60(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 0..60 {
        if k > 0 {
            term *= -(x * x / 4.0) / ((k * k) as f64);
        }
        sum += term;
    }
    sum
}

/// E₁(x) = ∫₀¹ e^{−x/u}/u du by composite Gauss–Legendre on a graded mesh.
pub fn e1_quadrature(x: f64) -> f64 {
    let rule = gauss_legendre(40);
    let f = |u: f64| if u <= 0.0 { 0.0 } else { (-x / u).exp() / u };
    let mut total = 0.0;
    let mut hi = 1.0;
    for _ in 0..60 {
        let lo = hi * 0.5;
        total += integrate(f, lo, hi, 1, &rule);
        hi = lo;
    }
    total
}

/// Γ(a, x) = ∫_x^∞ t^{a−1} e^{−t} dt by quadrature over [x, x + 200].
pub fn upper_gamma_quadrature(a: u32, x: f64) -> f64 {
    let rule = gauss_legendre(40);
    integrate(|t| t.powi(a as i32 - 1) * (-t).exp(), x, x + 200.0, 40, &rule)
}

/// Density of Exp(mean) at y.
pub fn exp_density(mean: f64, y: f64) -> f64 {
    if y < 0.0 {
        0.0
    } else {
        (-y / mean).exp() / mean
    }
}

/// Density of a sum of independent exponentials by nested numerical
/// convolution, f_{k}(y) = ∫₀^y f_{k−1}(u) e_k(y − u) du.
pub fn convolved_density(means: &[f64], y: f64) -> f64 {
    let rule = gauss_legendre(24);
    fn go(means: &[f64], y: f64, rule: &[(f64, f64)]) -> f64 {
        match means {
            [m] => exp_density(*m, y),
            [rest @ .., last] => {
                if y <= 0.0 {
                    return 0.0;
                }
                integrate(|u| go(rest, u, rule) * exp_density(*last, y - u), 0.0, y, 4, rule)
            }
            [] => 0.0,
        }
    }
    go(means, y, &rule)
}

/// Hypoexponential density for pairwise distinct means (classical product
/// formula).
pub fn hypoexponential_density(means: &[f64], y: f64) -> f64 {
    let mut total = 0.0;
    for (i, mi) in means.iter().enumerate() {
        let mut w = 1.0;
        for (j, mj) in means.iter().enumerate() {
            if i != j {
                w *= mi / (mi - mj);
            }
        }
        total += w * exp_density(*mi, y);
    }
    total
}

/// Erlang(k, scale) CDF 1 − e^{−z} Σ_{m<k} z^m/m!, z = x/scale.
pub fn erlang_cdf(k: usize, scale: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let z = x / scale;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..k {
        term *= z / m as f64;
        sum += term;
    }
    1.0 - (-z).exp() * sum
}

/// P(X/(Y + noise) ≤ γ) with X ~ c·Gamma(dof + 1) and Y a sum of exponentials
/// with pairwise distinct means, by quadrature over the density of Y.
pub fn snr_cdf_quadrature(gamma: f64, c: f64, dof: usize, means: &[f64], noise: f64) -> f64 {
    let rule = gauss_legendre(32);
    let top = means.iter().cloned().fold(0.0, f64::max) * 80.0;
    let f = |y: f64| hypoexponential_density(means, y) * erlang_cdf(dof + 1, c, gamma * (y + noise));
    integrate(f, 0.0, top, 200, &rule)
}

/// Second-stage CDF: the fixed-noise CDF with noise n_hat0/β averaged over
/// β uniform in dB on [−L, L].
pub fn snr_cdf_uncertain_quadrature(gamma: f64, c: f64, dof: usize, means: &[f64], n_hat0: f64, l_db: f64) -> f64 {
    let rule = gauss_legendre(16);
    let f = |db: f64| snr_cdf_quadrature(gamma, c, dof, means, n_hat0 / 10f64.powf(db / 10.0));
    integrate(f, -l_db, l_db, 4, &rule) / (2.0 * l_db)
}

/// Central second difference of `f` at x with step h.
pub fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Bisection root of a monotone function on [lo, hi].
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Kolmogorov distance between two sample sets.
pub fn ks_distance(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
