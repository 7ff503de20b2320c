//! Partial sums of `L(1, ψ_D)` against their linear main terms, and the
//! truncated level-`N` coefficient series.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::{require_half_plane, scan::chunked_prefix_sums, SeriesEval};
use crate::arith::{exact_sqrt, sigma_real};
use crate::coeffs::{c_n, Level};
use crate::counting::r;
use crate::error::{Error, Result};
use crate::quadfields::l1_value;
use crate::special::{gamma_r, zeta, zeta_n_star, zeta_star};

/// `15ζ(3)/(4π)`.
pub const THM3_CONSTANT: f64 = 1.434_849_735_116_888_8;

pub const MAX_SCAN: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub x: u64,
    pub sum: f64,
    pub main: f64,
    pub rel_dev: f64,
}

impl ScanRow {
    fn new(x: u64, sum: f64, main: f64) -> Self {
        Self { x, sum, main, rel_dev: (sum - main).abs() / main }
    }
}

/// `(π/2)ζ*(2)ζ*(3)/ζ*(4)` and `15ζ(3)/(4π)`.
pub fn thm3_constant_identity() -> Result<(f64, f64)> {
    let zs = |x: f64| zeta_star(C::new(x, 0.0)).map(|z| z.re);
    let lhs = PI / 2.0 * zs(2.0)? * zs(3.0)? / zs(4.0)?;
    let rhs = 15.0 * zeta(C::new(3.0, 0.0))?.re / (4.0 * PI);
    Ok((lhs, rhs))
}

fn check_scan(x: u64) -> Result<()> {
    if x == 0 || x > MAX_SCAN {
        return Err(Error::OutOfRange(format!("scan length {x} must lie in [1, {MAX_SCAN}]")));
    }
    Ok(())
}

/// Roughly ten checkpoints per decade up to `x`, always ending at `x`.
pub fn log_checkpoints(x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut decade = 10u64;
    while decade <= x {
        for k in 1..10 {
            let c = k * decade;
            if c <= x && out.last() != Some(&c) {
                out.push(c);
            }
        }
        decade *= 10;
    }
    if out.last() != Some(&x) {
        out.push(x);
    }
    out
}

fn thm3_term(big_d: u64) -> Result<f64> {
    if matches!(big_d % 4, 2 | 3) || exact_sqrt(big_d as i64).is_some() {
        return Ok(0.0);
    }
    let count = r(big_d)?;
    if count == 0 {
        return Ok(0.0);
    }
    Ok(l1_value(big_d as i64)? * count as f64)
}

/// `Σ_{0<D≤X, √D∉ℤ} L(1, ψ_D) r(D)` at each checkpoint.
pub fn thm3_scan(x: u64, checkpoints: &[u64]) -> Result<Vec<ScanRow>> {
    check_scan(x)?;
    let sums = chunked_prefix_sums(x, checkpoints, thm3_term)?;
    Ok(checkpoints.iter().zip(sums).map(|(&c, s)| ScanRow::new(c, s, THM3_CONSTANT * c as f64)).collect())
}

/// `(sum, main term)` for the `r(D)`-weighted class-number sum.
pub fn thm3_partial_sum(x: u64) -> Result<(f64, f64)> {
    let row = thm3_scan(x, &[x])?[0];
    Ok((row.sum, row.main))
}

/// `Σ_{t≤X, t²+4n non-square} L(1, ψ_{t²+4n})` at each checkpoint, against `σ_{−1}(n)X`.
pub fn remark_scan(n: u64, x: u64, checkpoints: &[u64]) -> Result<Vec<ScanRow>> {
    check_scan(x)?;
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let rate = sigma_real(-1.0, n);
    let sums = chunked_prefix_sums(x, checkpoints, |t| {
        let big_d = (t * t + 4 * n) as i64;
        if exact_sqrt(big_d).is_some() {
            return Ok(0.0);
        }
        l1_value(big_d)
    })?;
    Ok(checkpoints.iter().zip(sums).map(|(&c, s)| ScanRow::new(c, s, rate * c as f64)).collect())
}

pub fn remark_partial_sum(n: u64, x: u64) -> Result<(f64, f64)> {
    let row = remark_scan(n, x, &[x])?[0];
    Ok((row.sum, row.main))
}

/// `F_N(s) ≈ ζ_N*(4s) Γ_R(2s) Σ_{n≤T} c_N(n) r(n) n^{−s}`.
pub fn f_n_truncated(level: Level, s: C, t_max: u64) -> Result<SeriesEval> {
    require_half_plane("F_N", s, 1.0)?;
    let mut acc = C::new(0.0, 0.0);
    for n in 1..=t_max {
        if matches!(n % 4, 2 | 3) {
            continue;
        }
        let w = c_n(level, n as i64)? * r(n)? as f64;
        if w != 0.0 {
            acc += (-s * (n as f64).ln()).exp() * w;
        }
    }
    let pre = zeta_n_star(level.get(), s * 4.0)? * gamma_r(s * 2.0)?;
    let t = t_max.max(1) as f64;
    let spread = 2f64.powi(level.primes().len() as i32);
    let env = spread * (2.0 + t.ln()) * (2.0 + 2.0 * t.ln());
    Ok(SeriesEval {
        value: pre * acc,
        truncation: t_max,
        tail_estimate: pre.norm() * env * t.powf(1.0 - s.re) / (s.re - 1.0),
        tail_is_heuristic: true,
    })
}
