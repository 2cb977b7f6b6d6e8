//! Scenario files, curve tables and the subcommand drivers behind the
//! `cogmimo` binary.
//!
//! Scenario files hold one `key = value` per line; `#` starts a comment.
//! Decibel values are converted to linear units here and nowhere else.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{aging_coefficient, build_profile, ScenarioConfig, Service};
use crate::error::{Error, Result};
use crate::montecarlo::FrameSet;
use crate::numerics::db_to_linear;
use crate::outage::{report_at, OutageReport};
use crate::planner::{coherence_time_iid, scan_m2, CoherenceStatus};
use crate::stats::{cdf_stage1, cdf_stage2, NoiseUncertainty};

const KEYS: [&str; 14] = [
    "n_rx",
    "m1",
    "m2",
    "pt_over_n0_db",
    "distances_km",
    "pathloss_exponents",
    "alpha",
    "fd_ts",
    "noise_uncertainty_db",
    "gamma_th_db",
    "gamma_t_db",
    "trials",
    "seed",
    "massive_limit",
];

/// Reads and validates a scenario file.
pub fn parse_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    parse_scenario_str(&std::fs::read_to_string(path)?)
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| parse_error(line, format!("{key}: cannot parse '{v}'")))
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_num(line, key, x.trim())).collect()
}

/// Parses scenario text. Omitted keys take the macro-cell defaults; `n_rx`,
/// `m1`, `m2` and `distances_km` are required.
pub fn parse_scenario_str(text: &str) -> Result<ScenarioConfig> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| parse_error(line, format!("expected 'key = value', got '{content}'")))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(parse_error(line, format!("unknown key '{k}'")));
        }
        if entries.iter().any(|(_, seen, _)| seen == k) {
            return Err(parse_error(line, format!("duplicate key '{k}'")));
        }
        entries.push((line, k.to_string(), v.to_string()));
    }
    let find = |k: &str| entries.iter().find(|(_, key, _)| key == k).map(|(l, _, v)| (*l, v.as_str()));
    let required = |k: &str| find(k).ok_or_else(|| Error::config(format!("{k} required")));

    let (l, v) = required("n_rx")?;
    let n_rx: usize = parse_num(l, "n_rx", v)?;
    let (l, v) = required("m1")?;
    let m1: usize = parse_num(l, "m1", v)?;
    let (l, v) = required("m2")?;
    let m2: usize = parse_num(l, "m2", v)?;
    let (l, v) = required("distances_km")?;
    let distances = parse_list(l, "distances_km", v)?;
    if distances.len() != m1 + m2 {
        return Err(parse_error(l, format!("{} distances for {} streams", distances.len(), m1 + m2)));
    }
    let mut cfg = ScenarioConfig::new(n_rx, m1, m2, distances);

    if let Some((l, v)) = find("pt_over_n0_db") {
        cfg = cfg.with_tx_snr_db(parse_num(l, "pt_over_n0_db", v)?);
    }
    if let Some((l, v)) = find("pathloss_exponents") {
        let w = parse_list(l, "pathloss_exponents", v)?;
        cfg.pathloss_exponents = match w.len() {
            1 => vec![w[0]; m1 + m2],
            n if n == m1 + m2 => w,
            n => return Err(parse_error(l, format!("{n} path-loss exponents for {} streams", m1 + m2))),
        };
    }
    match (find("alpha"), find("fd_ts")) {
        (Some(_), Some((l, _))) => return Err(parse_error(l, "alpha and fd_ts are mutually exclusive")),
        (Some((l, v)), None) => cfg.alpha = parse_num(l, "alpha", v)?,
        (None, Some((l, v))) => {
            cfg.alpha = aging_coefficient(parse_num(l, "fd_ts", v)?).map_err(|e| parse_error(l, e.to_string()))?
        }
        (None, None) => {}
    }
    if let Some((l, v)) = find("noise_uncertainty_db") {
        cfg.noise_uncertainty_db = parse_num(l, "noise_uncertainty_db", v)?;
    }
    if let Some((l, v)) = find("gamma_th_db") {
        cfg.gamma_th = db_to_linear(parse_num(l, "gamma_th_db", v)?);
    }
    if let Some((l, v)) = find("gamma_t_db") {
        cfg.gamma_t = db_to_linear(parse_num(l, "gamma_t_db", v)?);
    }
    if let Some((l, v)) = find("trials") {
        cfg.trials = parse_num(l, "trials", v)?;
    }
    if let Some((l, v)) = find("seed") {
        cfg.seed = parse_num(l, "seed", v)?;
    }
    if let Some((l, v)) = find("massive_limit") {
        cfg.massive_limit = parse_num(l, "massive_limit", v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Equally spaced grid of `points` values from `min_db` to `max_db`.
pub fn db_grid(min_db: f64, max_db: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !min_db.is_finite() || !max_db.is_finite() || max_db < min_db {
        return Err(Error::domain("grid needs points >= 1 and min <= max"));
    }
    if points == 1 {
        return Ok(vec![min_db]);
    }
    let step = (max_db - min_db) / (points - 1) as f64;
    Ok((0..points).map(|k| min_db + step * k as f64).collect())
}

/// Rectangular numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    #[serde(rename = "columns")]
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl CurveTable {
    pub fn new(headers: Vec<String>) -> Self {
        Self { headers, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::domain(format!("row of {} values for {} columns", row.len(), self.headers.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| parse_error(1, "empty table"))?;
        let mut table = Self::new(header.split(',').map(str::to_string).collect());
        for (idx, line) in lines {
            let row = line
                .split(',')
                .map(|c| parse_num(idx + 1, "cell", c))
                .collect::<Result<Vec<f64>>>()?;
            table.push(row).map_err(|e| parse_error(idx + 1, e.to_string()))?;
        }
        Ok(table)
    }

    /// `{"columns": [...], "rows": [[...], ...]}`; non-finite values become null.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }
}

fn curve_headers(config: &ScenarioConfig) -> Vec<String> {
    let mut h = vec!["gamma_db".to_string()];
    for i in 1..=config.total_streams() {
        h.push(format!("stage1_cdf_{i}"));
        h.push(format!("stage2_cdf_{i}"));
    }
    for k in 1..=config.m1 {
        h.push(format!("outage_s1_{k}"));
    }
    for k in 1..=config.m2 {
        h.push(format!("outage_s2_{k}"));
    }
    if config.m1 > 0 {
        h.push("outage_total_s1".into());
    }
    if config.m2 > 0 {
        h.push("outage_total_s2".into());
    }
    h.push("switch_prob".into());
    h
}

fn outage_cells(row: &mut Vec<f64>, config: &ScenarioConfig, r: &OutageReport) {
    row.extend(&r.per_stream_service1);
    row.extend(&r.per_stream_service2);
    if config.m1 > 0 {
        row.push(r.total_service1);
    }
    if config.m2 > 0 {
        row.push(r.total_service2);
    }
    row.push(r.switch_probability);
}

/// Closed-form curves over a threshold grid in dB. Outage columns sweep
/// γ_th with the configured γ_T.
pub fn cmd_analyze(config: &ScenarioConfig, grid_db: &[f64]) -> Result<CurveTable> {
    let profile = build_profile(config)?;
    let nu = NoiseUncertainty::from_config(config)?;
    let rows = grid_db
        .par_iter()
        .map(|db| {
            let g = db_to_linear(*db);
            let mut row = vec![*db];
            for i in 0..config.total_streams() {
                row.push(cdf_stage1(g, i, &profile, config)?);
                row.push(cdf_stage2(g, i, &profile, config, &nu)?);
            }
            outage_cells(&mut row, config, &report_at(g, config.gamma_t, &profile, config, &nu)?);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveTable { headers: curve_headers(config), rows })
}

/// Monte Carlo counterpart of [`cmd_analyze`] with a trailing trial count.
pub fn cmd_simulate(config: &ScenarioConfig, grid_db: &[f64]) -> Result<CurveTable> {
    let profile = build_profile(config)?;
    let nu = NoiseUncertainty::from_config(config)?;
    let set = FrameSet::simulate(&profile, config, &nu, config.trials, config.seed)?;
    let linear: Vec<f64> = grid_db.iter().map(|d| db_to_linear(*d)).collect();
    if linear.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("threshold grid must be ascending"));
    }
    let cdf = set.empirical_cdf(&linear)?;
    let mut headers = curve_headers(config);
    headers.push("trial_count".into());
    let rows = grid_db
        .par_iter()
        .enumerate()
        .map(|(g, db)| {
            let mut row = vec![*db];
            for i in 0..config.total_streams() {
                row.push(cdf.stage1[i][g]);
                row.push(cdf.stage2[i][g]);
            }
            outage_cells(&mut row, config, &set.outage_at(linear[g], config.gamma_t));
            row.push(set.len() as f64);
            row
        })
        .collect();
    Ok(CurveTable { headers, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDiscrepancy {
    pub curve: String,
    pub sup_norm: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub curves: Vec<CurveDiscrepancy>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("curve,sup_norm,tolerance,pass\n");
        for c in &self.curves {
            let _ = writeln!(out, "{},{},{},{}", c.curve, format_value(c.sup_norm), format_value(self.tolerance), c.passed as u8);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn worst(&self) -> Option<&CurveDiscrepancy> {
        self.curves.iter().max_by(|a, b| a.sup_norm.total_cmp(&b.sup_norm))
    }
}

/// Sup-norm distance between the two engines, curve by curve.
pub fn cmd_validate(config: &ScenarioConfig, grid_db: &[f64], tolerance: f64) -> Result<ValidationReport> {
    cmd_validate_pair(config, config, grid_db, tolerance)
}

/// As [`cmd_validate`], but the simulation runs `simulated`; the two
/// configurations must have the same stream layout.
pub fn cmd_validate_pair(
    analyzed: &ScenarioConfig,
    simulated: &ScenarioConfig,
    grid_db: &[f64],
    tolerance: f64,
) -> Result<ValidationReport> {
    if !(tolerance >= 0.0) {
        return Err(Error::domain("tolerance must be nonnegative"));
    }
    if analyzed.m1 != simulated.m1 || analyzed.m2 != simulated.m2 {
        return Err(Error::domain("engines need the same stream layout"));
    }
    let a = cmd_analyze(analyzed, grid_db)?;
    let s = cmd_simulate(simulated, grid_db)?;
    let curves: Vec<CurveDiscrepancy> = a
        .headers
        .iter()
        .enumerate()
        .skip(1)
        .map(|(c, name)| {
            let sup = a.rows.iter().zip(&s.rows).map(|(x, y)| (x[c] - y[c]).abs()).fold(0.0, f64::max);
            CurveDiscrepancy { curve: name.clone(), sup_norm: sup, passed: sup <= tolerance }
        })
        .collect();
    Ok(ValidationReport { tolerance, passed: curves.iter().all(|c| c.passed), curves })
}

/// Optimal secondary admission for each (N, α), α outer, with M₁ fixed and
/// p̂ = p. Rows: n, alpha, m2_star, lambda, objective, iterations; λ is NaN
/// when nothing is admitted.
pub fn cmd_plan(n_list: &[usize], m1: usize, alpha_list: &[f64]) -> Result<CurveTable> {
    let headers = ["n", "alpha", "m2_star", "lambda", "objective", "iterations"];
    let mut table = CurveTable::new(headers.iter().map(|h| h.to_string()).collect());
    for &alpha in alpha_list {
        for &n in n_list {
            let r = scan_m2(n, m1, alpha, 1.0, |_| Ok(1.0), 1.0)?;
            table.push(vec![
                n as f64,
                alpha,
                r.m2_star as f64,
                r.lambda_diag.unwrap_or(f64::NAN),
                r.objective,
                r.iterations as f64,
            ])?;
        }
    }
    Ok(table)
}

/// One coherence-time query with identical links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceCase {
    pub m: usize,
    pub n: usize,
    pub a: f64,
    pub gamma_th: f64,
}

impl CoherenceCase {
    /// Cartesian product, M outermost then N then a.
    pub fn grid(m_list: &[usize], n_list: &[usize], a_list: &[f64], gamma_th: f64) -> Vec<Self> {
        let mut out = Vec::new();
        for &m in m_list {
            for &n in n_list {
                for &a in a_list {
                    out.push(Self { m, n, a, gamma_th });
                }
            }
        }
        out
    }
}

/// T_max per case. Unlimited cases report `inf`.
pub fn cmd_coherence(cases: &[CoherenceCase]) -> Result<CurveTable> {
    let headers = ["m", "n", "a", "gamma_th", "t_max", "pre_floor", "snr_at_tmax"];
    let mut table = CurveTable::new(headers.iter().map(|h| h.to_string()).collect());
    for c in cases {
        let r = coherence_time_iid(c.m, c.n, c.a, c.gamma_th)?;
        let t = if r.status == CoherenceStatus::Unlimited { f64::INFINITY } else { r.t_max as f64 };
        table.push(vec![c.m as f64, c.n as f64, c.a, c.gamma_th, t, r.pre_floor, r.snr_at_tmax])?;
    }
    Ok(table)
}

/// Names of the per-stream outage columns of a service.
pub fn outage_columns(config: &ScenarioConfig, service: Service) -> Vec<String> {
    let tag = match service {
        Service::Primary => "s1",
        Service::Secondary => "s2",
    };
    (1..=config.group_size(service)).map(|k| format!("outage_{tag}_{k}")).collect()
}
