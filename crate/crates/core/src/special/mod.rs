//! Complex special functions and the kernels `Φ`, `Ψ` of the hyperbolic and
//! parabolic terms.

pub mod gamma;
pub mod incbeta;
pub mod quad;
pub mod zeta;

use std::f64::consts::PI;

use num_complex::Complex64 as C;

pub use gamma::{beta, digamma, gamma, gamma_r, ln_beta, ln_gamma, ln_gamma_r, EULER_GAMMA};
pub use incbeta::inc_beta_reg;
pub use quad::{QuadResult, QuadratureSpec, Scheme};
pub use zeta::{dirichlet_beta, hurwitz_zeta, zeta, zeta_and_derivative, zeta_star, zeta_star_logderiv};

use crate::arith;
use crate::error::{Error, Result};

/// `Φ(x, s)`: `1/(sB(s,½))` at `0`, `x^{−s} I_x(s,½)` on `(0,1)`, `x^{−s}` beyond.
pub fn phi_kernel(x: f64, s: C) -> Result<C> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!("Phi needs Re s > 0, got {s}")));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("Phi needs x >= 0, got {x}")));
    }
    let half = C::new(0.5, 0.0);
    if x == 0.0 {
        Ok((s * beta(s, half)?).inv())
    } else if x < 1.0 {
        Ok((-s * x.ln()).exp() * inc_beta_reg(x, s, 0.5)?)
    } else {
        Ok((-s * x.ln()).exp())
    }
}

/// `Ψ(x, s) = ∫_{√(x−1)}^∞ (y²+1)^{−s}/(y+√(x−1)) dy` for `x > 1`.
pub fn psi_kernel(x: f64, s: C, quad: &QuadratureSpec) -> Result<C> {
    if !(s.re > 0.5) {
        return Err(Error::Domain(format!("Psi needs Re s > 1/2, got {s}")));
    }
    if x == 1.0 {
        return Err(Error::EndpointSingularity(
            "Psi(1, s): integrand ~ 1/y at the lower endpoint y = 0".into(),
        ));
    }
    if !(x > 1.0) {
        return Err(Error::Domain(format!("Psi needs x >= 1, got {x}")));
    }
    let a = (x - 1.0).sqrt();
    let f = |y: f64| Ok((-s * (y * y + 1.0).ln()).exp() / (y + a));
    Ok(quad::integrate_half_line(&f, a, quad)?.value)
}

/// `∫_ℝ (2cosh(u/2))^{−2s} e^{iru} du` by quadrature; equals `B(s+ir, s−ir)`.
pub fn cosh_fourier(s: C, r: f64, quad: &QuadratureSpec) -> Result<C> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!("cosh_fourier needs Re s > 0, got {s}")));
    }
    let f = |u: f64| {
        let h = 0.5 * u.abs();
        // log(2cosh h) without overflow
        let log2cosh = h + (-2.0 * h).exp().ln_1p();
        Ok((-s * 2.0 * log2cosh + C::new(0.0, r * u)).exp())
    };
    Ok(quad::integrate_line(&f, quad, 2.0)?.value)
}

fn logderiv_pair(w: C) -> Result<C> {
    let one = C::new(1.0, 0.0);
    Ok(zeta_star_logderiv(one + w)? + zeta_star_logderiv(one - w)?)
}

/// `φ′/φ(½ + ir) = −2[ζ*′/ζ*(1 − 2ir) + ζ*′/ζ*(1 + 2ir)]`.
pub fn scattering_logderiv(r: f64) -> Result<f64> {
    if r.abs() > 500.0 {
        return Err(Error::OutOfRange(format!("scattering_logderiv: |r| = {} > 500", r.abs())));
    }
    let w0 = C::new(0.0, 2.0 * r);
    if r.abs() >= 1e-3 {
        return Ok(-2.0 * logderiv_pair(w0)?.re);
    }
    // The pair is analytic at w = 0 (the poles cancel); take its mean over a
    // circle, which for 16 nodes of radius 0.1 is exact to rounding.
    const NODES: usize = 16;
    let mut acc = C::new(0.0, 0.0);
    for k in 0..NODES {
        let th = 2.0 * PI * (k as f64 + 0.5) / NODES as f64;
        acc += logderiv_pair(w0 + C::from_polar(0.1, th))?;
    }
    Ok(-2.0 * (acc / NODES as f64).re)
}

fn squarefree_level(n: u64) -> Result<arith::Factorization> {
    let f = arith::factorize(n)?;
    if n < 2 || !f.is_squarefree() {
        return Err(Error::Domain(format!("level N = {n} must be squarefree and > 1")));
    }
    Ok(f)
}

/// `E_N(s) = ∏_{p|N}(1 − p^{−s})`.
pub fn e_n(n: u64, s: C) -> Result<C> {
    let f = squarefree_level(n)?;
    Ok(f.primes().map(|p| C::new(1.0, 0.0) - (-s * (p as f64).ln()).exp()).product())
}

/// `E_N*(s) = N^{s/2} ∏_{p|N}(1 − p^{−s})`.
pub fn e_n_star(n: u64, s: C) -> Result<C> {
    Ok((s * 0.5 * (n as f64).ln()).exp() * e_n(n, s)?)
}

/// `ζ_N*(s) = E_N*(s) ζ*(s)`.
pub fn zeta_n_star(n: u64, s: C) -> Result<C> {
    Ok(e_n_star(n, s)? * zeta_star(s)?)
}
