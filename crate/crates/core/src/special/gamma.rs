//! Complex Γ, digamma and Beta by shifted Stirling series with reflection.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};

/// `B_{2k}` for `k = 1..=15`.
pub(crate) const BERNOULLI: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

const POLE_GUARD: f64 = 1e-8;
const SHIFT_TO: f64 = 15.0;
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check_pole(z: C, what: &'static str) -> Result<()> {
    if z.re < 0.5 {
        let n = z.re.round();
        if n <= 0.0 {
            let dist = (z - n).norm();
            if dist < POLE_GUARD {
                return Err(Error::PoleProximity { what, distance: dist });
            }
        }
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("{what}: non-finite argument {z}")));
    }
    Ok(())
}

/// `log sin(πz)`, stable for large `|Im z|` (any branch; callers exponentiate).
pub(crate) fn ln_sin_pi(z: C) -> C {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    let i = C::i();
    let e = (i * 2.0 * PI * z).exp();
    C::new(0.5, 0.0).ln() + i * (PI / 2.0) - i * PI * z + (C::new(1.0, 0.0) - e).ln()
}

/// `π cot(πz)`, stable for large `|Im z|`.
pub(crate) fn pi_cot_pi(z: C) -> C {
    let i = C::i();
    let w = z * PI;
    if w.im >= 0.0 {
        let e = (i * 2.0 * w).exp();
        i * (e + 1.0) / (e - 1.0) * PI
    } else {
        let e = (-i * 2.0 * w).exp();
        i * (e + 1.0) / (1.0 - e) * PI
    }
}

fn stirling(z: C) -> C {
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    let z2 = (z * z).inv();
    let mut zp = z.inv();
    for (k, b) in BERNOULLI.iter().enumerate().take(10) {
        let k = (k + 1) as f64;
        s += zp * (b / (2.0 * k * (2.0 * k - 1.0)));
        zp *= z2;
    }
    s
}

pub fn ln_gamma(z: C) -> Result<C> {
    check_pole(z, "gamma")?;
    Ok(ln_gamma_unchecked(z))
}

fn ln_gamma_unchecked(z: C) -> C {
    if z.re < 0.5 {
        return C::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_unchecked(C::new(1.0, 0.0) - z);
    }
    let mut z = z;
    let mut shift = C::new(0.0, 0.0);
    while z.re < SHIFT_TO {
        shift += z.ln();
        z += 1.0;
    }
    stirling(z) - shift
}

pub fn gamma(z: C) -> Result<C> {
    Ok(ln_gamma(z)?.exp())
}

/// `log Γ_R(s) = −(s/2) log π + log Γ(s/2)`.
pub fn ln_gamma_r(s: C) -> Result<C> {
    Ok(-s * 0.5 * PI.ln() + ln_gamma(s * 0.5)?)
}

/// `Γ_R(s) = π^{−s/2} Γ(s/2)`.
pub fn gamma_r(s: C) -> Result<C> {
    Ok(ln_gamma_r(s)?.exp())
}

pub fn digamma(z: C) -> Result<C> {
    check_pole(z, "digamma")?;
    Ok(digamma_unchecked(z))
}

fn digamma_unchecked(z: C) -> C {
    if z.re < 0.5 {
        return digamma_unchecked(C::new(1.0, 0.0) - z) - pi_cot_pi(z);
    }
    let mut z = z;
    let mut shift = C::new(0.0, 0.0);
    while z.re < SHIFT_TO {
        shift += z.inv();
        z += 1.0;
    }
    let z2 = (z * z).inv();
    let mut zp = z2;
    let mut s = z.ln() - z.inv() * 0.5;
    for (k, b) in BERNOULLI.iter().enumerate().take(10) {
        let k = (k + 1) as f64;
        s -= zp * (b / (2.0 * k));
        zp *= z2;
    }
    s - shift
}

pub fn ln_beta(a: C, b: C) -> Result<C> {
    check_pole(a + b, "beta")?;
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// `B(a, b) = Γ(a)Γ(b)/Γ(a + b)`.
pub fn beta(a: C, b: C) -> Result<C> {
    Ok(ln_beta(a, b)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rel(a: C, b: C) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_values() {
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * PI.sqrt(), 0.0)) < 1e-14);
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for y in [0.3, 2.0, 10.0, 60.0] {
            let g = gamma(c(0.5, y)).unwrap();
            assert!((g.norm_sqr() / (PI / (PI * y).cosh()) - 1.0).abs() < 1e-12, "y={y}");
        }
        // Γ(1 + i) = 0.49801566811835604 − 0.15494982830181069 i
        assert!(rel(gamma(c(1.0, 1.0)).unwrap(), c(0.498_015_668_118_356, -0.154_949_828_301_810_7)) < 1e-13);
        assert!(gamma(c(-2.0, 0.0)).is_err());
        assert!(gamma(c(0.0, 1e-9)).is_err());
    }

    #[test]
    fn gamma_r_and_beta_examples() {
        assert!(rel(gamma_r(c(2.0, 0.0)).unwrap(), c(1.0 / PI, 0.0)) < 1e-14);
        assert!(rel(beta(c(1.0, 0.0), c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(beta(c(1.0, 0.0), c(0.5, 0.0)).unwrap(), c(2.0, 0.0)) < 1e-14);
        let (a, b) = (c(0.7, 1.3), c(2.1, -0.4));
        assert!(rel(beta(a, b).unwrap(), beta(b, a).unwrap()) < 1e-14);
    }

    #[test]
    fn digamma_values() {
        let want = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert!((digamma(c(0.5, 0.0)).unwrap().re - want).abs() < 1e-14);
        assert!((digamma(c(1.0, 0.0)).unwrap().re + EULER_GAMMA).abs() < 1e-14);
        let d = digamma(c(1.5, 0.0)).unwrap() - digamma(c(1.0, 0.0)).unwrap();
        assert!((d.re - (2.0 - 2.0 * 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn digamma_recurrence_grid() {
        for i in -8..8 {
            for j in -8..8 {
                let z = c(0.37 + 0.9 * i as f64, 1.7 * j as f64 + 0.11);
                let lhs = digamma(z + 1.0).unwrap();
                let rhs = digamma(z).unwrap() + z.inv();
                assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()), "z={z}");
            }
        }
    }

    #[test]
    fn digamma_is_derivative_of_ln_gamma() {
        for z in [c(0.3, 0.2), c(2.5, -3.0), c(-1.3, 0.7), c(7.0, 40.0)] {
            let h = 1e-5;
            let fd = (ln_gamma(z + h).unwrap() - ln_gamma(z - h).unwrap()) / (2.0 * h);
            assert!((fd - digamma(z).unwrap()).norm() < 1e-8, "z={z}");
        }
    }
}
