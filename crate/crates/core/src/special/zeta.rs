//! Riemann and Hurwitz zeta by Euler–Maclaurin, carried with first
//! derivatives so that `ζ′/ζ` needs no numerical differencing.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use num_complex::Complex64 as C;

use super::gamma::{digamma, ln_gamma_r, BERNOULLI};
use crate::error::{Error, Result};

const POLE_GUARD: f64 = 1e-10;
pub const MAX_IM: f64 = 500.0;

/// Value and `d/ds`.
#[derive(Debug, Clone, Copy)]
struct Jet {
    v: C,
    d: C,
}

impl Jet {
    fn var(s: C) -> Self {
        Jet { v: s, d: C::new(1.0, 0.0) }
    }
    /// `b^{−s}` for real `b > 0`.
    fn pow_neg(s: C, ln_b: f64) -> Self {
        let v = (-s * ln_b).exp();
        Jet { v, d: -v * ln_b }
    }
    fn scale(self, k: f64) -> Self {
        Jet { v: self.v * k, d: self.d * k }
    }
    fn recip(self) -> Self {
        let inv = self.v.inv();
        Jet { v: inv, d: -self.d * inv * inv }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d: self.d + o.d }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}

/// `Σ_{n≥0} (n + a)^{−s}` with its `s`-derivative.
fn euler_maclaurin(s: C, a: f64) -> Jet {
    let n_terms = (1.3 * s.im.abs()).ceil() as usize + 25;
    let mut acc = Jet { v: C::new(0.0, 0.0), d: C::new(0.0, 0.0) };
    for k in 0..n_terms {
        acc = acc + Jet::pow_neg(s, (k as f64 + a).ln());
    }
    let big_n = n_terms as f64 + a;
    let ln_n = big_n.ln();
    let n_neg_s = Jet::pow_neg(s, ln_n);
    let sm1 = Jet::var(s) + Jet { v: C::new(-1.0, 0.0), d: C::new(0.0, 0.0) };
    acc = acc + n_neg_s.scale(big_n) * sm1.recip() + n_neg_s.scale(0.5);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut poly = Jet::var(s);
    let mut npow = n_neg_s.scale(1.0 / big_n);
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k + 1;
        acc = acc + (poly * npow).scale(b / fact);
        let j = 2 * k as i32 - 1;
        poly = poly * Jet::var(s + j as f64) * Jet::var(s + (j + 1) as f64);
        npow = npow.scale(1.0 / (big_n * big_n));
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    acc
}

fn check(s: C) -> Result<()> {
    if s.im.abs() > MAX_IM {
        return Err(Error::OutOfRange(format!("zeta: |Im s| = {} > {MAX_IM}", s.im.abs())));
    }
    let dist = (s - 1.0).norm();
    if dist < POLE_GUARD {
        return Err(Error::PoleProximity { what: "zeta", distance: dist });
    }
    Ok(())
}

pub fn zeta(s: C) -> Result<C> {
    check(s)?;
    if s.re >= 0.5 || s.norm() < 0.25 {
        return Ok(euler_maclaurin(s, 1.0).v);
    }
    let n = (-s.re / 2.0).round();
    if n >= 1.0 && (s + 2.0 * n).norm() < 1e-12 {
        return Ok(C::new(0.0, 0.0));
    }
    let one = C::new(1.0, 0.0);
    Ok(euler_maclaurin(one - s, 1.0).v * (ln_gamma_r(one - s)? - ln_gamma_r(s)?).exp())
}

/// `ζ(s)` and `ζ′(s)` for `Re s ≥ 1/2`.
pub fn zeta_and_derivative(s: C) -> Result<(C, C)> {
    check(s)?;
    if s.re < 0.5 {
        return Err(Error::Domain(format!("zeta_and_derivative needs Re s >= 1/2, got {s}")));
    }
    let j = euler_maclaurin(s, 1.0);
    Ok((j.v, j.d))
}

/// Hurwitz `ζ(s, a)` for `Re s > 1`-ish use and `a > 0`.
pub fn hurwitz_zeta(s: C, a: f64) -> Result<C> {
    check(s)?;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("hurwitz_zeta: a = {a} must be positive")));
    }
    Ok(euler_maclaurin(s, a).v)
}

/// `L(w, ψ_{−4}) = 4^{−w}(ζ(w, 1/4) − ζ(w, 3/4))`.
pub fn dirichlet_beta(w: C) -> Result<C> {
    let q = (-w * 4f64.ln()).exp();
    Ok(q * (hurwitz_zeta(w, 0.25)? - hurwitz_zeta(w, 0.75)?))
}

fn check_star(s: C) -> Result<()> {
    check(s)?;
    let d0 = s.norm();
    if d0 < POLE_GUARD {
        return Err(Error::PoleProximity { what: "zeta_star", distance: d0 });
    }
    Ok(())
}

/// `ζ*(s) = Γ_R(s)ζ(s)`, using `ζ*(s) = ζ*(1 − s)` on `Re s < 1/2`.
pub fn zeta_star(s: C) -> Result<C> {
    check_star(s)?;
    let s = if s.re < 0.5 { C::new(1.0, 0.0) - s } else { s };
    Ok(ln_gamma_r(s)?.exp() * euler_maclaurin(s, 1.0).v)
}

/// `ζ*′/ζ*(s) = −½ log π + ½ψ(s/2) + ζ′/ζ(s)`, odd about `s = 1/2`.
pub fn zeta_star_logderiv(s: C) -> Result<C> {
    check_star(s)?;
    if s.re < 0.5 {
        return Ok(-zeta_star_logderiv(C::new(1.0, 0.0) - s)?);
    }
    let j = euler_maclaurin(s, 1.0);
    Ok(-0.5 * PI.ln() + digamma(s * 0.5)? * 0.5 + j.d / j.v)
}
