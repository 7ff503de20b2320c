//! Brute-force references. Nothing here calls into `arith`, `quadfields`
//! or `special`, so agreement with the main paths is a genuine cross-check.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_REP_DISC: u64 = 100_000_000;
pub const MAX_CONVOLUTION: usize = 1_000_000;

/// An oracle value next to the main-path value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub oracle_value: C,
    pub main_value: C,
    pub abs_diff: f64,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, oracle_value: C, main_value: C) -> Self {
        Self { quantity: quantity.into(), oracle_value, main_value, abs_diff: (oracle_value - main_value).norm() }
    }

    pub fn real(quantity: impl Into<String>, oracle_value: f64, main_value: f64) -> Self {
        Self::new(quantity, C::new(oracle_value, 0.0), C::new(main_value, 0.0))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Kronecker symbol `(a/n)` by quadratic reciprocity.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return (a == 1 || a == -1) as i32;
    }
    let mut sign = 1;
    let mut n = n as i128;
    let mut a = a as i128;
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -1;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        if matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Twice `r^(M)(D)`, so half-integral counts stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfCount(pub u64);

impl HalfCount {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

fn is_square(n: u64) -> Option<u64> {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    (x * x == n).then_some(x)
}

/// `½#{(x, y): x² + 4y² = D, (y, M) = 1}` by looping over all `y`.
pub fn naive_rep_count(big_d: u64, modulus: u64) -> Result<HalfCount> {
    if big_d > MAX_REP_DISC || modulus == 0 {
        return Err(Error::OutOfRange(format!("naive_rep_count({big_d}, {modulus})")));
    }
    let mut pairs = 0;
    let mut y = 0u64;
    while 4 * y * y <= big_d {
        if gcd(y, modulus) == 1 {
            if let Some(x) = is_square(big_d - 4 * y * y) {
                pairs += if x == 0 { 1 } else { 2 } * if y == 0 { 1 } else { 2 };
            }
        }
        y += 1;
    }
    Ok(HalfCount(pairs))
}

fn fundamental_part(big_d: i64) -> Result<(i64, u64)> {
    if big_d == 0 || !matches!(big_d.rem_euclid(4), 0 | 1) {
        return Err(Error::NotDiscriminant(big_d));
    }
    let mut core = big_d.signum();
    let mut rest = big_d.unsigned_abs();
    let mut ell = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        while rest.is_multiple_of(p * p) {
            rest /= p * p;
            ell *= p;
        }
        if rest.is_multiple_of(p) {
            rest /= p;
            core *= p as i64;
        }
        p += 1;
    }
    core *= rest as i64;
    if core.rem_euclid(4) != 1 {
        core *= 4;
        ell /= 2;
    }
    Ok((core, ell))
}

/// `Σ_{n≤Z'} ψ_D(n)/n` with `Z'` the first multiple of `|D|` at or beyond `Z`,
/// and the error bound `4√|D| log|D| / Z`.
pub fn naive_l1(big_d: i64, cutoff: u64) -> Result<(f64, f64)> {
    let (d, ell) = fundamental_part(big_d)?;
    if d == 1 {
        return Err(Error::SquareDiscriminant(big_d));
    }
    let ad = big_d.unsigned_abs() as f64;
    let need = 100.0 * ad.sqrt() * (1.0 + ad.ln());
    if (cutoff as f64) < need {
        return Err(Error::Precondition(format!("cutoff {cutoff} below 100·√|D|·(1 + log|D|) = {need:.0}")));
    }
    let period = big_d.unsigned_abs();
    let z = cutoff.div_ceil(period) * period;
    let mut acc = 0.0;
    let mut comp = 0.0;
    for n in (1..=z).rev() {
        let m = n / gcd(n, ell);
        let chi = kronecker(d, m as i64);
        if chi != 0 {
            let term = chi as f64 / n as f64;
            let t = acc + term;
            comp += if acc.abs() >= term.abs() { (acc - t) + term } else { (term - t) + acc };
            acc = t;
        }
    }
    Ok((acc + comp, 4.0 * ad.sqrt() * ad.ln() / cutoff as f64))
}

/// Coefficients `a(0..=T)` of `(1 − 2^{−s} + 2^{1−2s}) ζ(s) L(s, ψ_{−4})`; `a(0) = 0`.
pub fn naive_convolution(t_max: usize) -> Result<Vec<i64>> {
    if t_max > MAX_CONVOLUTION {
        return Err(Error::OutOfRange(format!("naive_convolution({t_max})")));
    }
    let mut b = vec![0i64; t_max + 1];
    for d in (1..=t_max).step_by(2) {
        let chi = if d % 4 == 1 { 1 } else { -1 };
        for m in (d..=t_max).step_by(d) {
            b[m] += chi;
        }
    }
    let mut a = vec![0i64; t_max + 1];
    for n in 1..=t_max {
        a[n] = b[n];
        if n % 2 == 0 {
            a[n] -= b[n / 2];
        }
        if n % 4 == 0 {
            a[n] += 2 * b[n / 4];
        }
    }
    Ok(a)
}

/// Behaviour at the left endpoint of a finite interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Smooth,
    /// `f(x) ~ (x − a)^{−1/2}`; removed by `x = a + u²`.
    InverseSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Interval { a: f64, b: f64, left: Endpoint },
    /// `[a, ∞)` with `|f(x)| ≲ x^{−decay}`, `decay > 1`; compactified by
    /// `x = a + (t/(1 − t))^k` with `k` large enough to flatten `t = 1`.
    HalfLine { a: f64, decay: f64 },
}

const ROMBERG_LEVELS: usize = 22;

fn romberg<G: Fn(f64) -> C>(g: G, rel_tol: f64) -> Result<C> {
    let mut prev: Vec<C> = vec![(g(0.0) + g(1.0)) * 0.5];
    for k in 1..ROMBERG_LEVELS {
        let n = 1usize << (k - 1);
        let h = 1.0 / (2 * n) as f64;
        let mids: C = (0..n).map(|i| g((2 * i + 1) as f64 * h)).sum();
        let mut row = vec![prev[0] * 0.5 + mids * h];
        let mut pow = 1.0;
        for j in 1..=k {
            pow *= 4.0;
            row.push(row[j - 1] + (row[j - 1] - prev[j - 1]) / (pow - 1.0));
        }
        let diff = (row[k] - prev[k - 1]).norm();
        if k >= 5 && diff <= rel_tol * row[k].norm().max(1e-300) {
            return Ok(row[k]);
        }
        prev = row;
    }
    Err(Error::NonConvergence {
        what: "reference_integrate",
        detail: format!("Romberg tableau unsettled after {ROMBERG_LEVELS} levels"),
    })
}

/// Romberg integration on `[0, 1]` after mapping the domain there.
pub fn reference_integrate<F: Fn(f64) -> C>(f: F, domain: Domain, rel_tol: f64) -> Result<C> {
    if !(rel_tol > 0.0) {
        return Err(Error::Domain("rel_tol must be positive".into()));
    }
    let zero = C::new(0.0, 0.0);
    match domain {
        Domain::Interval { a, b, left: Endpoint::Smooth } => romberg(|t| f(a + (b - a) * t) * (b - a), rel_tol),
        Domain::Interval { a, b, left: Endpoint::InverseSqrt } => {
            let w = (b - a).sqrt();
            romberg(|t| if t == 0.0 {
                // 2u·f(a + u²) stays bounded; its limit is read off one step in
                let u = 1e-8 * w;
                f(a + u * u) * (2.0 * u * w)
            } else {
                let u = w * t;
                f(a + u * u) * (2.0 * u * w)
            }, rel_tol)
        }
        Domain::HalfLine { a, decay } => {
            if !(decay > 1.0) {
                return Err(Error::Domain(format!("half-line decay {decay} must exceed 1")));
            }
            let k = (8.0 / (decay - 1.0)).ceil().max(1.0);
            romberg(
                |t| {
                    if t <= 0.0 || t >= 1.0 {
                        return if t <= 0.0 && k == 1.0 { f(a) } else { zero };
                    }
                    let s = 1.0 - t;
                    let q = t / s;
                    f(a + q.powf(k)) * (k * q.powf(k - 1.0) / (s * s))
                },
                rel_tol,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronecker_table() {
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(12, 6), 0);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(1, 0), 1);
    }

    #[test]
    fn rep_count_examples() {
        assert_eq!(naive_rep_count(25, 2).unwrap(), HalfCount(0));
        assert_eq!(naive_rep_count(20, 1).unwrap().value(), 4.0);
        assert_eq!(naive_rep_count(0, 1).unwrap().value(), 0.5);
    }

    #[test]
    fn l1_examples() {
        let (v, err) = naive_l1(-4, 1_000_000).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-4 && err < 1e-4);
        let (v5, _) = naive_l1(5, 100_000).unwrap();
        let want = 2.0 / 5f64.sqrt() * ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((v5 - want).abs() < 1e-6);
        // ψ_45(n) = (5/(n/(n,3))), so L(1, ψ_45) = L(1, ψ_5)(1 + 2/3)
        let (v45, _) = naive_l1(45, 200_000).unwrap();
        assert!((v45 - want * 5.0 / 3.0).abs() < 1e-5);
        assert!(naive_l1(5, 10).is_err());
        assert!(naive_l1(9, 10_000).is_err());
    }

    #[test]
    fn fundamental_parts() {
        assert_eq!(fundamental_part(45).unwrap(), (5, 3));
        assert_eq!(fundamental_part(-16).unwrap(), (-4, 2));
        assert_eq!(fundamental_part(12).unwrap(), (12, 1));
        assert_eq!(fundamental_part(32).unwrap(), (8, 2));
        assert!(fundamental_part(7).is_err());
    }

    #[test]
    fn convolution_examples() {
        let a = naive_convolution(100).unwrap();
        assert_eq!((a[1], a[2], a[4], a[5], a[25]), (1, 0, 2, 2, 3));
    }

    #[test]
    fn reference_quadrature() {
        let v = reference_integrate(|y| C::new((y * y + 1.0).powi(-2), 0.0), Domain::HalfLine { a: 0.0, decay: 4.0 }, 1e-12)
            .unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-10);
        let inv = Domain::Interval { a: 0.0, b: 1.0, left: Endpoint::InverseSqrt };
        let v = reference_integrate(|t| C::new(t.powf(-0.5), 0.0), inv, 1e-12).unwrap();
        assert!((v.re - 2.0).abs() < 1e-10);
        let psi21 = reference_integrate(
            |y| C::new(1.0 / ((y * y + 1.0) * (y + 1.0)), 0.0),
            Domain::HalfLine { a: 1.0, decay: 3.0 },
            1e-12,
        )
        .unwrap();
        assert!((psi21.re - (PI / 8.0 - 2f64.ln() / 4.0)).abs() < 1e-10);
    }
}
