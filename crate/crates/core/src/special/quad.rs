//! Quadrature for complex-valued integrands: adaptive Gauss–Kronrod,
//! double-exponential rules, and vertical-line panel marching.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    TanhSinh,
    GaussKronrodAdaptive,
    TrapezoidUniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub rel_tol: f64,
    pub max_nodes: usize,
    /// Cap on `|y|` for integrals over the real line or a vertical line.
    pub trunc_height: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::GaussKronrodAdaptive,
            rel_tol: 1e-12,
            max_nodes: 2_000_000,
            trunc_height: 200.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_scheme(scheme: Scheme) -> Self {
        Self { scheme, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1e-14..=1e-4).contains(&self.rel_tol) {
            return Err(Error::OutOfRange(format!("rel_tol {} not in [1e-14, 1e-4]", self.rel_tol)));
        }
        if self.max_nodes == 0 || self.max_nodes > 10_000_000 {
            return Err(Error::OutOfRange(format!("max_nodes {} not in [1, 1e7]", self.max_nodes)));
        }
        if !(self.trunc_height > 0.0) {
            return Err(Error::OutOfRange(format!("trunc_height {} must be positive", self.trunc_height)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: C,
    pub est_error: f64,
    pub nodes: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Result<C>>(f: &F, a: f64, b: f64) -> Result<(C, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut vals = [C::new(0.0, 0.0); 15];
    vals[14] = fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x)?;
        let f2 = f(c + x)?;
        vals[2 * j] = f1;
        vals[2 * j + 1] = f2;
        k += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            g += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = k * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        asc += WGK[j] * ((vals[2 * j] - mean).norm() + (vals[2 * j + 1] - mean).norm());
    }
    let asc = asc * h.abs();
    let diff = ((k - g) * h).norm();
    let mut err = diff;
    if asc != 0.0 && diff != 0.0 {
        err = asc * (200.0 * diff / asc).powf(1.5).min(1.0);
    }
    Ok((k * h, err))
}

/// Globally adaptive G7/K15 on `[a, b]`; stops at `max(rel_tol·|I|, abs_tol)`.
pub fn gauss_kronrod<F: Fn(f64) -> Result<C>>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_nodes: usize,
) -> Result<QuadResult> {
    let (v, e) = gk15(f, a, b)?;
    let mut segs = vec![(a, b, v, e)];
    let mut nodes = 15;
    loop {
        let total: C = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= (rel_tol * total.norm()).max(abs_tol) {
            return Ok(QuadResult { value: total, est_error: err, nodes });
        }
        if nodes + 30 > max_nodes {
            return Err(Error::NonConvergence {
                what: "gauss_kronrod",
                detail: format!("node budget {max_nodes} exhausted, error estimate {err:e}"),
            });
        }
        let (i, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (sa, sb, _, _) = segs.swap_remove(i);
        let m = 0.5 * (sa + sb);
        let (v1, e1) = gk15(f, sa, m)?;
        let (v2, e2) = gk15(f, m, sb)?;
        segs.push((sa, m, v1, e1));
        segs.push((m, sb, v2, e2));
        nodes += 30;
    }
}

/// Double-exponential rule: `nodes(t)` returns `(x, dx/dt)` or `None` when the
/// node falls outside floating-point resolution.
fn double_exponential<F, M>(f: &F, map: M, t_lo: f64, t_hi: f64, rel_tol: f64, max_nodes: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<C>,
    M: Fn(f64) -> Option<(f64, f64)>,
{
    let eval = |t: f64| -> Result<C> {
        match map(t) {
            Some((x, w)) if w != 0.0 && w.is_finite() => {
                let v = f(x)? * w;
                Ok(if v.re.is_finite() && v.im.is_finite() { v } else { C::new(0.0, 0.0) })
            }
            _ => Ok(C::new(0.0, 0.0)),
        }
    };
    let mut h = 0.5;
    let mut sum = C::new(0.0, 0.0);
    let mut nodes = 0;
    let mut k = (t_lo / h).ceil() as i64;
    while (k as f64) * h <= t_hi {
        sum += eval(k as f64 * h)?;
        nodes += 1;
        k += 1;
    }
    let mut prev = sum * h;
    for level in 1..=12 {
        h *= 0.5;
        let mut k = ((t_lo / h).ceil() as i64) | 1;
        while (k as f64) * h <= t_hi {
            sum += eval(k as f64 * h)?;
            nodes += 1;
            k += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).norm();
        if level >= 3 && diff <= rel_tol * cur.norm() {
            return Ok(QuadResult { value: cur, est_error: diff, nodes });
        }
        if nodes > max_nodes {
            break;
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "double_exponential",
        detail: format!("no convergence to {rel_tol:e} within {nodes} nodes"),
    })
}

/// tanh-sinh on `[a, b]`; endpoint distances are formed without cancellation.
pub fn tanh_sinh<F: Fn(f64) -> Result<C>>(f: &F, a: f64, b: f64, rel_tol: f64, max_nodes: usize) -> Result<QuadResult> {
    let half = 0.5 * (b - a);
    let map = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        let dist = 2.0 * half * e / (1.0 + e);
        let x = if u < 0.0 { a + dist } else { b - dist };
        let ch = u.cosh();
        let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        (x > a && x < b).then_some((x, w))
    };
    double_exponential(f, map, -3.5, 3.5, rel_tol, max_nodes)
}

/// exp-sinh on `[a, ∞)`.
pub fn exp_sinh<F: Fn(f64) -> Result<C>>(f: &F, a: f64, rel_tol: f64, max_nodes: usize) -> Result<QuadResult> {
    let map = |t: f64| {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = a + e;
        (x > a && x.is_finite()).then_some((x, FRAC_PI_2 * t.cosh() * e))
    };
    double_exponential(f, map, -4.5, 4.0, rel_tol, max_nodes)
}

/// `∫_a^∞ f`, by the scheme in `spec`.
pub fn integrate_half_line<F: Fn(f64) -> Result<C>>(f: &F, a: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    match spec.scheme {
        Scheme::GaussKronrodAdaptive => {
            // y = a + tan θ
            let g = |th: f64| -> Result<C> {
                let c = th.cos();
                Ok(f(a + th.tan())? / (c * c))
            };
            gauss_kronrod(&g, 0.0, FRAC_PI_2, spec.rel_tol, 0.0, spec.max_nodes)
        }
        Scheme::TanhSinh | Scheme::TrapezoidUniform => exp_sinh(f, a, spec.rel_tol, spec.max_nodes),
    }
}

/// `∫_ℝ f(y) dy` by unit panels marched outward from `0`, stopping after three
/// consecutive panels below `rel_tol·|accumulated|`, capped at `trunc_height`.
pub fn integrate_line<F: Fn(f64) -> Result<C>>(f: &F, spec: &QuadratureSpec, panel: f64) -> Result<QuadResult> {
    spec.validate()?;
    if spec.scheme == Scheme::TrapezoidUniform {
        return trapezoid_line(f, spec);
    }
    let mut acc = C::new(0.0, 0.0);
    let mut est_error = 0.0;
    let mut nodes = 0;
    for side in [1.0, -1.0] {
        let mut quiet = 0;
        let mut k = 0;
        loop {
            let (lo, hi) = (k as f64 * panel, (k + 1) as f64 * panel);
            if lo >= spec.trunc_height {
                return Err(Error::NonConvergence {
                    what: "line integral",
                    detail: format!("integrand not negligible at height {}", spec.trunc_height),
                });
            }
            let abs_tol = 0.1 * spec.rel_tol * acc.norm();
            let r = gauss_kronrod(f, side * lo, side * hi, spec.rel_tol, abs_tol, spec.max_nodes.saturating_sub(nodes))?;
            let piece = r.value * side;
            acc += piece;
            est_error += r.est_error;
            nodes += r.nodes;
            if piece.norm() < spec.rel_tol * acc.norm() {
                quiet += 1;
                if quiet == 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            k += 1;
        }
    }
    Ok(QuadResult { value: acc, est_error, nodes })
}

fn trapezoid_line<F: Fn(f64) -> Result<C>>(f: &F, spec: &QuadratureSpec) -> Result<QuadResult> {
    let hmax = spec.trunc_height;
    let mut h = 0.25;
    let mut n = (hmax / h).ceil() as i64;
    let mut sum = f(0.0)?;
    for k in 1..=n {
        let y = k as f64 * h;
        sum += f(y)? + f(-y)?;
    }
    let mut nodes = 2 * n as usize + 1;
    let mut prev = sum * h;
    loop {
        h *= 0.5;
        n *= 2;
        for k in (1..=n).step_by(2) {
            let y = k as f64 * h;
            sum += f(y)? + f(-y)?;
        }
        nodes += n as usize;
        let cur = sum * h;
        let diff = (cur - prev).norm();
        if diff <= spec.rel_tol * cur.norm() {
            return Ok(QuadResult { value: cur, est_error: diff, nodes });
        }
        if nodes > spec.max_nodes {
            return Err(Error::NonConvergence {
                what: "trapezoid",
                detail: format!("no convergence within {} nodes", spec.max_nodes),
            });
        }
        prev = cur;
    }
}
