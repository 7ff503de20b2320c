//! Series over `D = t² ± 4n`: the level-1 series, its quadratic twists, the
//! two sides of the specialized trace formulas, and residue extraction.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::{require_half_plane, SeriesEval};
use crate::arith::{self, exact_sqrt, gcd, kronecker, sigma_real};
use crate::coeffs::{c_n_circ, Level};
use crate::error::{Error, Result};
use crate::quadfields::l1_value;
use crate::series::scan::Neumaier;
use crate::special::{digamma, hurwitz_zeta, ln_gamma, phi_kernel, psi_kernel, QuadratureSpec, EULER_GAMMA};

fn cpow(x: f64, s: C) -> C {
    (s * x.ln()).exp()
}

/// `Σ_{m|ℓ} Λ(m)(1 − 1/m)`.
pub fn lambda_weight(ell: u64) -> f64 {
    let f = arith::factorize(ell).expect("ell >= 1");
    let mut acc = 0.0;
    for &(p, e) in &f.factors {
        let lp = (p as f64).ln();
        let mut pk = 1.0;
        for _ in 0..e {
            pk *= p as f64;
            acc += lp * (1.0 - 1.0 / pk);
        }
    }
    acc
}

/// `½(ψ(s + ½) − ψ(s))`.
fn half_digamma_gap(s: C) -> Result<C> {
    Ok((digamma(s + 0.5)? - digamma(s)?) * 0.5)
}

/// Envelope `L(1, ψ_D) ≤ 2 + log D` (unproven in general; the tails that use
/// it are flagged heuristic).
fn envelope(d: f64) -> f64 {
    2.0 + d.max(1.0).ln()
}

/// `Σ_{|t|>T} coeff·env·t^{−2σ} ≤ 2·coeff·env·T^{1−2σ}/(2σ − 1)`.
fn heuristic_tail(t_max: u64, n: u64, sigma: f64, coeff: f64) -> f64 {
    let t = (t_max.max(1)) as f64;
    let d = t * t + 4.0 * n as f64;
    2.0 * coeff * envelope(d) * t.powf(1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0)
}

fn check_n(n: u64, t_max: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let big = (t_max as u128).pow(2) + 4 * n as u128;
    if big > (1u128 << 62) {
        return Err(Error::OutOfRange(format!("t² + 4n overflows at T = {t_max}, n = {n}")));
    }
    Ok(())
}

/// Multiplicity of `t` in a sum over `t ∈ [−T, T]`.
fn mult(t: u64) -> f64 {
    if t == 0 {
        1.0
    } else {
        2.0
    }
}

/// The non-square terms `L(1, ψ_{t²+4n})`, `0 ≤ t ≤ T`, computed once and
/// reused across `s`.
#[derive(Debug, Clone)]
pub struct Level1Terms {
    pub n: u64,
    pub t_max: u64,
    /// `(t, L(1, ψ_{t²+4n}))` with `t²+4n` non-square.
    pub values: Vec<(u64, f64)>,
}

impl Level1Terms {
    pub fn new(n: u64, t_max: u64) -> Result<Self> {
        check_n(n, t_max)?;
        let mut values = Vec::with_capacity(t_max as usize + 1);
        for t in 0..=t_max {
            let d = (t * t + 4 * n) as i64;
            if exact_sqrt(d).is_none() {
                values.push((t, l1_value(d)?));
            }
        }
        Ok(Self { n, t_max, values })
    }

    fn disc(&self, t: u64) -> f64 {
        (t * t + 4 * self.n) as f64
    }

    fn partial(&self, s: C) -> C {
        let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
        for &(t, l) in &self.values {
            let v = cpow(self.disc(t), -s) * (l * mult(t));
            re.add(v.re);
            im.add(v.im);
        }
        C::new(re.total(), im.total())
    }

    /// `Σ_{|t|≤T} L(1, ψ_D) D^{−s}` with the envelope tail; `Re s > 0.6`.
    pub fn series(&self, s: C) -> Result<SeriesEval> {
        require_half_plane("level1_series", s, 0.5)?;
        Ok(SeriesEval {
            value: self.partial(s),
            truncation: self.t_max,
            tail_estimate: heuristic_tail(self.t_max, self.n, s.re, 1.0),
            tail_is_heuristic: true,
        })
    }

    /// Mean of `L(1, ψ_{t²+4n})` over `lo < t ≤ hi`.
    fn window_mean(&self, lo: u64, hi: u64) -> f64 {
        let (mut sum, mut count) = (Neumaier::default(), 0usize);
        for &(t, l) in &self.values {
            if t > lo && t <= hi {
                sum.add(l);
                count += 1;
            }
        }
        sum.total() / count.max(1) as f64
    }

    /// Partial sum plus the tail `2μ̂ Σ_{t>T} (t² + 4n)^{−s}`, where `μ̂` is the
    /// mean of the last half-window of `L`-values.  Valid for `Re s > ½`.
    pub fn accelerated(&self, s: C) -> Result<SeriesEval> {
        if s.re <= 0.5 {
            return Err(Error::Domain(format!("accelerated level-1 series needs Re s > 1/2, got {s}")));
        }
        if self.t_max < 64 {
            return Err(Error::Domain("accelerated level-1 series needs T >= 64".into()));
        }
        let t = self.t_max;
        let mu = self.window_mean(t / 2, t);
        let spread = (self.window_mean(t / 2, 3 * t / 4) - self.window_mean(3 * t / 4, t)).abs();
        let tail = shifted_power_tail(self.n, t, s)? * 2.0;
        Ok(SeriesEval {
            value: self.partial(s) + tail * mu,
            truncation: t,
            tail_estimate: tail.norm() * spread,
            tail_is_heuristic: true,
        })
    }
}

/// `Σ_{t>T} (t² + 4n)^{−s} = Σ_k binom(−s, k)(4n)^k ζ(2s + 2k, T + 1)`.
fn shifted_power_tail(n: u64, t_max: u64, s: C) -> Result<C> {
    let a = (t_max + 1) as f64;
    let x = 4.0 * n as f64;
    if x >= a * a {
        return Err(Error::Domain("tail expansion needs 4n < (T+1)²".into()));
    }
    let mut coef = C::new(1.0, 0.0);
    let mut xk = 1.0;
    let mut acc = C::new(0.0, 0.0);
    for k in 0..60 {
        let term = coef * xk * hurwitz_zeta(s * 2.0 + 2.0 * k as f64, a)?;
        acc += term;
        if term.norm() < 1e-17 * acc.norm() {
            return Ok(acc);
        }
        coef *= -(s + k as f64) / (k as f64 + 1.0);
        xk *= x;
    }
    Err(Error::NonConvergence { what: "shifted power tail", detail: format!("n = {n}, T = {t_max}") })
}

/// `Σ_{t∈[−T,T], √(t²+4n)∉ℤ} L(1, ψ_{t²+4n})/(t²+4n)^s`.
pub fn level1_series(n: u64, s: C, t_max: u64) -> Result<SeriesEval> {
    require_half_plane("level1_series", s, 0.5)?;
    Level1Terms::new(n, t_max)?.series(s)
}

/// The level-1 series twisted by `((t² + 4n)/N)`, for prime `N` with `(−4n/N) = −1`.
pub fn quad_twist_series(level: Level, n: u64, s: C, t_max: u64) -> Result<SeriesEval> {
    let nn = level.get();
    if !level.is_prime() || kronecker(-4 * n as i64, nn as i64) != -1 {
        return Err(Error::Precondition(format!("(-4n/N) must be -1 for prime N (n = {n}, N = {nn})")));
    }
    require_half_plane("quad_twist_series", s, 0.5)?;
    check_n(n, t_max)?;
    let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
    for t in 0..=t_max {
        let d = (t * t + 4 * n) as i64;
        if exact_sqrt(d).is_some() {
            continue;
        }
        let w = l1_value(d)? * kronecker(d, nn as i64) as f64 * mult(t);
        let v = cpow(d as f64, -s) * w;
        re.add(v.re);
        im.add(v.im);
    }
    Ok(SeriesEval {
        value: C::new(re.total(), im.total()),
        truncation: t_max,
        tail_estimate: heuristic_tail(t_max, n, s.re, 1.0),
        tail_is_heuristic: true,
    })
}

/// `F₃(s) = −Σ_{t²+4n=ℓ²} [Σ_{m|ℓ} Λ(m)(1−m⁻¹) + ½(ψ(s+½) − ψ(s))]/ℓ^{2s}`.
pub fn f3_term(n: u64, s: C) -> Result<C> {
    check_n(n, 2 * n)?;
    let gap = half_digamma_gap(s)?;
    let mut acc = C::new(0.0, 0.0);
    // ℓ² − t² = 4n forces t < n + 1
    for t in 0..=n {
        if let Some(ell) = exact_sqrt((t * t + 4 * n) as i64) {
            acc -= (gap + lambda_weight(ell)) * cpow(ell as f64, -s * 2.0) * mult(t);
        }
    }
    Ok(acc)
}

/// Right side of the level-1 `T_{−n}` formula:
/// `Σ_t (n/D)^s {L(1, ψ_D) | Σ_{m|√D} Λ(m)(1−m⁻¹) + ½(ψ(s+½) − ψ(s))}`.
pub fn level1_minus_rhs(n: u64, s: C, t_max: u64) -> Result<SeriesEval> {
    require_half_plane("level1_minus_rhs", s, 0.5)?;
    check_n(n, t_max)?;
    let gap = half_digamma_gap(s)?;
    let mut acc = C::new(0.0, 0.0);
    for t in 0..=t_max {
        let d = t * t + 4 * n;
        let w: C = match exact_sqrt(d as i64) {
            None => C::new(l1_value(d as i64)?, 0.0),
            Some(ell) => gap + lambda_weight(ell),
        };
        acc += w * cpow(n as f64 / d as f64, s) * mult(t);
    }
    Ok(SeriesEval {
        value: acc,
        truncation: t_max,
        tail_estimate: heuristic_tail(t_max, n, s.re, (n as f64).powf(s.re)),
        tail_is_heuristic: true,
    })
}

/// `½(ψ(s) + γ + log n) + ⅙√(π/n) Γ(s+½)/Γ(s)`.
fn level1_zero_branch(n: u64, s: C) -> Result<C> {
    let gratio = (ln_gamma(s + 0.5)? - ln_gamma(s)?).exp();
    Ok((digamma(s)? + EULER_GAMMA + (n as f64).ln()) * 0.5
        + gratio * ((std::f64::consts::PI / n as f64).sqrt() / 6.0))
}

/// Right side of the level-1 `T_n` formula, `4^{−s} Σ_t` over `D = t² − 4n`.
pub fn level1_plus_rhs(n: u64, s: C, t_max: u64, quad: &QuadratureSpec) -> Result<SeriesEval> {
    require_half_plane("level1_plus_rhs", s, 0.5)?;
    check_n(n, t_max)?;
    let mut acc = C::new(0.0, 0.0);
    for t in 0..=t_max {
        let d = (t * t) as i64 - 4 * n as i64;
        let x = (t * t) as f64 / (4 * n) as f64;
        let term = if d == 0 {
            level1_zero_branch(n, s)?
        } else if let Some(ell) = exact_sqrt(d) {
            phi_kernel(x, s)? * lambda_weight(ell) + psi_kernel(x, s, quad)?
        } else {
            phi_kernel(x, s)? * l1_value(d)?
        };
        acc += term * mult(t);
    }
    let four_s = cpow(4.0, -s);
    Ok(SeriesEval {
        value: acc * four_s,
        truncation: t_max,
        tail_estimate: heuristic_tail(t_max, n, s.re, (n as f64).powf(s.re)),
        tail_is_heuristic: true,
    })
}

fn check_coprime(level: Level, n: u64) -> Result<()> {
    if gcd(n, level.get()) != 1 {
        return Err(Error::Precondition(format!("need gcd(n, N) = 1 (n = {n}, N = {})", level.get())));
    }
    Ok(())
}

fn level_envelope(level: Level) -> f64 {
    (1u64 << level.primes().len()) as f64
}

/// `n^s Σ_t c_N°(t² + 4n)/(t² + 4n)^s`.
pub fn level_n_minus_rhs(level: Level, n: u64, s: C, t_max: u64) -> Result<SeriesEval> {
    require_half_plane("levelN_minus_rhs", s, 0.5)?;
    check_n(n, t_max)?;
    check_coprime(level, n)?;
    let mut acc = C::new(0.0, 0.0);
    for t in 0..=t_max {
        let d = t * t + 4 * n;
        acc += cpow(n as f64 / d as f64, s) * (c_n_circ(level, d as i64)? * mult(t));
    }
    Ok(SeriesEval {
        value: acc,
        truncation: t_max,
        tail_estimate: heuristic_tail(t_max, n, s.re, level_envelope(level) * (n as f64).powf(s.re)),
        tail_is_heuristic: true,
    })
}

/// `4^{−s} Σ_t c_N°(D){Φ(t²/4n, s) | ½√(π/n)Γ(s+½)/Γ(s) at D = 0}`, `D = t² − 4n`.
pub fn level_n_plus_rhs(level: Level, n: u64, s: C, t_max: u64) -> Result<SeriesEval> {
    require_half_plane("levelN_plus_rhs", s, 0.5)?;
    check_n(n, t_max)?;
    check_coprime(level, n)?;
    let mut acc = C::new(0.0, 0.0);
    for t in 0..=t_max {
        let d = (t * t) as i64 - 4 * n as i64;
        let c = c_n_circ(level, d)?;
        if c == 0.0 {
            continue;
        }
        let k = if d == 0 {
            (ln_gamma(s + 0.5)? - ln_gamma(s)?).exp() * (0.5 * (std::f64::consts::PI / n as f64).sqrt())
        } else {
            phi_kernel((t * t) as f64 / (4 * n) as f64, s)?
        };
        acc += k * (c * mult(t));
    }
    Ok(SeriesEval {
        value: acc * cpow(4.0, -s),
        truncation: t_max,
        tail_estimate: heuristic_tail(t_max, n, s.re, level_envelope(level) * (n as f64).powf(s.re)),
        tail_is_heuristic: true,
    })
}

/// Richardson extrapolation of `ε·series(½ + ε)` to `ε → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueEstimate {
    pub value: f64,
    /// `ε·series(½ + ε)` at `ε = 0.1, 0.05, 0.025`.
    pub samples: [f64; 3],
    pub first_order: [f64; 2],
    pub tail_is_heuristic: bool,
}

pub const RESIDUE_EPS: [f64; 3] = [0.1, 0.05, 0.025];
pub const RESIDUE_AGREEMENT: f64 = 0.05;

pub fn residue_at_half<F: Fn(C) -> Result<SeriesEval>>(series: F) -> Result<ResidueEstimate> {
    let mut samples = [0.0; 3];
    let mut heuristic = false;
    for (slot, eps) in samples.iter_mut().zip(RESIDUE_EPS) {
        let e = series(C::new(0.5 + eps, 0.0))?;
        heuristic |= e.tail_is_heuristic;
        *slot = eps * e.value.re;
    }
    let r1a = 2.0 * samples[1] - samples[0];
    let r1b = 2.0 * samples[2] - samples[1];
    let r2 = (4.0 * r1b - r1a) / 3.0;
    if !((r1b - r2).abs() <= RESIDUE_AGREEMENT * r2.abs()) {
        return Err(Error::NonConvergence {
            what: "residue extrapolation",
            detail: format!("first-order {r1b} vs second-order {r2}"),
        });
    }
    Ok(ResidueEstimate { value: r2, samples, first_order: [r1a, r1b], tail_is_heuristic: heuristic })
}

/// Residue of the level-1 series at `s = ½` from the accelerated evaluator.
pub fn level1_residue(n: u64, t_max: u64) -> Result<ResidueEstimate> {
    let terms = Level1Terms::new(n, t_max)?;
    residue_at_half(|s| terms.accelerated(s))
}

/// `σ_{−1}(n)`, the predicted residue.
pub fn residue_target(n: u64) -> f64 {
    sigma_real(-1.0, n)
}
