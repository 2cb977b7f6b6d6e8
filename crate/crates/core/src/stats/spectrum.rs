//! Partial-fraction ("characteristic") coefficients of a sum of independent
//! exponential variables with possibly repeated means.
//!
//! For distinct means λ_1 > … > λ_ρ with multiplicities τ_v, the moment
//! generating function factors as
//!
//! ```text
//! ∏_w (1 − λ_w s)^{−τ_w} = Σ_v Σ_{j=1}^{τ_v} X_{v,j} (1 − λ_v s)^{−j}
//! ```
//!
//! so the density of the sum is a mixture of Erlang densities weighted by
//! X_{v,j}.

use crate::error::{Error, Result};
use crate::numerics::factorial;

/// Default relative tolerance for merging nearly equal residual variances.
pub const COALESCE_TOLERANCE: f64 = 1e-9;

/// Poles closer than this (relative) cannot be expanded reliably.
const POLE_SEPARATION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSpectrum {
    /// Distinct means, strictly descending.
    pub distinct: Vec<f64>,
    pub multiplicity: Vec<usize>,
    /// `char_coeff[v][j - 1]` = X_{v,j}.
    pub char_coeff: Vec<Vec<f64>>,
}

impl ResidualSpectrum {
    /// Number of distinct means ρ.
    pub fn rho(&self) -> usize {
        self.distinct.len()
    }

    /// Number of exponential components Σ τ_v.
    pub fn dimension(&self) -> usize {
        self.multiplicity.iter().sum()
    }

    pub fn coefficient(&self, v: usize, j: usize) -> f64 {
        self.char_coeff[v][j - 1]
    }

    /// Density of the sum of exponentials at `y` (mixture of Erlang terms).
    pub fn density(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        let mut total = 0.0;
        for (v, lam) in self.distinct.iter().enumerate() {
            for j in 1..=self.multiplicity[v] {
                let x = self.coefficient(v, j);
                let jf = j as i32;
                total += x * y.powi(jf - 1) * (-y / lam).exp() / (factorial(j as u32 - 1) * lam.powi(jf));
            }
        }
        total
    }

    /// Σ_v Σ_j X_{v,j}; equals one for a valid expansion.
    pub fn coefficient_sum(&self) -> f64 {
        self.char_coeff.iter().flatten().sum()
    }
}

/// Groups `values` into distinct means with multiplicities and expands them.
///
/// Values within relative distance `coalesce_tol` of a group's first member
/// merge into it (the group keeps the mean of its members). Exact zeros are
/// point masses at the origin and drop out of the sum; if every value is zero
/// the interference term vanishes and `DegenerateSpectrum` is returned.
pub fn residual_spectrum(values: &[f64], coalesce_tol: f64) -> Result<ResidualSpectrum> {
    if values.is_empty() {
        return Err(Error::domain("residual spectrum needs at least one value"));
    }
    if !(coalesce_tol >= 0.0) {
        return Err(Error::domain("coalescing tolerance must be nonnegative"));
    }
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!("residual variance {v} must be finite and nonnegative")));
    }
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| *v > 0.0).collect();
    if sorted.is_empty() {
        return Err(Error::DegenerateSpectrum);
    }
    sorted.sort_by(|a, b| b.total_cmp(a));

    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some((anchor, members)) if (*anchor - v).abs() <= coalesce_tol * anchor.abs() => {
                members.push(v)
            }
            _ => groups.push((v, vec![v])),
        }
    }
    let distinct: Vec<f64> = groups
        .iter()
        .map(|(_, m)| m.iter().sum::<f64>() / m.len() as f64)
        .collect();
    let multiplicity: Vec<usize> = groups.iter().map(|(_, m)| m.len()).collect();
    let char_coeff = characteristic_coefficients(&distinct, &multiplicity)?;
    Ok(ResidualSpectrum { distinct, multiplicity, char_coeff })
}

/// Partial-fraction coefficients X_{v,j} via the residue formula
///
/// ```text
/// X_{v,j} = (−λ_v)^{−(τ_v−j)} / (τ_v−j)! · g_v^{(τ_v−j)}(1/λ_v),
/// g_v(s) = ∏_{w≠v} (1 − λ_w s)^{−τ_w}.
/// ```
///
/// Derivatives of g_v come from g' = g·h with h = (ln g)' =
/// Σ_{w≠v} τ_w λ_w / (1 − λ_w s), whose k-th derivative is
/// k! Σ τ_w λ_w^{k+1} / (1 − λ_w s)^{k+1}.
pub fn characteristic_coefficients(distinct: &[f64], multiplicity: &[usize]) -> Result<Vec<Vec<f64>>> {
    if distinct.len() != multiplicity.len() || distinct.is_empty() {
        return Err(Error::domain("distinct values and multiplicities must align"));
    }
    if multiplicity.iter().any(|t| *t == 0) {
        return Err(Error::domain("multiplicities must be positive"));
    }
    if distinct.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
        return Err(Error::domain("spectrum values must be positive and finite"));
    }
    for (a, rest) in distinct.iter().enumerate() {
        for b in &distinct[a + 1..] {
            if (rest - b).abs() < POLE_SEPARATION * rest.abs().max(b.abs()) {
                return Err(Error::IllConditioned { first: *rest, second: *b });
            }
        }
    }

    let mut table = Vec::with_capacity(distinct.len());
    for (v, &lam_v) in distinct.iter().enumerate() {
        let tau_v = multiplicity[v];
        // 1 − λ_w/λ_v is formed as (λ_v − λ_w)/λ_v: the difference of close
        // poles is exact, the quotient would lose digits.
        let others = || {
            distinct
                .iter()
                .zip(multiplicity)
                .enumerate()
                .filter(move |(w, _)| *w != v)
                .map(|(_, (l, t))| (*l, *t))
        };

        // h^{(k)}(1/λ_v) for k < τ_v − 1
        let mut h = Vec::with_capacity(tau_v);
        for k in 0..tau_v.saturating_sub(1) {
            let kf = factorial(k as u32);
            let hk: f64 = others()
                .map(|(l, t)| t as f64 * (l * lam_v / (lam_v - l)).powi(k as i32 + 1))
                .sum();
            h.push(kf * hk);
        }

        // g^{(m)}(1/λ_v), m = 0..τ_v−1, by Leibniz on g' = g h.
        let mut g = Vec::with_capacity(tau_v);
        g.push(others().map(|(l, t)| ((lam_v - l) / lam_v).powi(-(t as i32))).product::<f64>());
        for m in 1..tau_v {
            let mut acc = 0.0;
            let mut binom = 1.0;
            for k in 0..m {
                acc += binom * g[m - 1 - k] * h[k];
                binom *= (m - 1 - k) as f64 / (k + 1) as f64;
            }
            g.push(acc);
        }

        let row: Vec<f64> = (1..=tau_v)
            .map(|j| {
                let order = tau_v - j;
                (-lam_v).powi(-(order as i32)) / factorial(order as u32) * g[order]
            })
            .collect();
        table.push(row);
    }
    Ok(table)
}
