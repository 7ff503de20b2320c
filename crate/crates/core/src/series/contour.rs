//! Vertical-line and real-line integrals: the scattering term and its
//! continuation, the oldform integral, `𝓘_N`, and the `A(s)` identity.

use num_complex::Complex64 as C;

use super::{real_line_integral, require_half_plane, ContourSpec, SeriesEval};
use crate::arith::{self, gcd, sigma};
use crate::coeffs::Level;
use crate::counting::r;
use crate::error::{Error, Result};
use crate::special::{
    beta, dirichlet_beta, e_n_star, ln_gamma, scattering_logderiv, zeta, zeta_n_star, zeta_star,
    zeta_star_logderiv, QuadratureSpec,
};

const CONTOUR_POLE_GAP: f64 = 1e-3;

fn cpow(x: f64, s: C) -> C {
    (s * x.ln()).exp()
}

fn one() -> C {
    C::new(1.0, 0.0)
}

/// `σ_{2ir}(n)/n^{ir} = Σ_{d|n} (d²/n)^{ir}`.
fn divisor_phase(divisors: &[u64], n: u64, r: f64) -> C {
    divisors
        .iter()
        .map(|&d| C::from_polar(1.0, r * ((d * d) as f64 / n as f64).ln()))
        .sum()
}

fn divisors_of(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    Ok(arith::factorize(n)?.divisors())
}

fn check_scattering_s(s: C) -> Result<()> {
    if s.im.abs() > 20.0 {
        return Err(Error::OutOfRange(format!("|Im s| = {} > 20", s.im.abs())));
    }
    Ok(())
}

/// `F₂(s) = −(1/4π)∫ B(s−ir, s+ir) σ_{2ir}(n)n^{−ir} (φ′/φ)(½+ir) dr − (σ₀(n)/4) B(s, s)`
/// for `Re s > ½`.
pub fn scattering_term(n: u64, s: C, quad: &QuadratureSpec) -> Result<C> {
    if s.re <= 0.5 {
        return Err(Error::Domain(format!("scattering_term needs Re s > 1/2, got {s}")));
    }
    check_scattering_s(s)?;
    let divs = divisors_of(n)?;
    let f = |r: f64| {
        let ir = C::new(0.0, r);
        Ok(beta(s - ir, s + ir)? * divisor_phase(&divs, n, r) * scattering_logderiv(r)?)
    };
    let integral = real_line_integral(f, quad)?;
    Ok(-integral / (4.0 * std::f64::consts::PI) - beta(s, s)? * (divs.len() as f64 / 4.0))
}

/// `F₂` continued past `Re s = ½`: with `L = ζ*′/ζ*`,
/// `F₂ = 2K + ¼σ₀(n)B(s, s)`, where
/// `K = Σ_{m<M} (−1)^m/m! (2s)_m σ_{2s+2m}(n) n^{−s−m} L(1+2s+2m)
///    + (1/2πi)∫_{Re v = M−½} B(−v, 2s+v) σ_{2s+2v}(n) n^{−s−v} L(1+2s+2v) dv`.
/// Valid for `Re s > ¼ − M/2` away from `|s| ≤ ½`, `Re s ≥ 0`.
pub fn scattering_term_continued(n: u64, s: C, m_terms: u32, contour: &ContourSpec) -> Result<C> {
    check_scattering_s(s)?;
    if s.re <= 0.25 - m_terms as f64 / 2.0 {
        return Err(Error::Domain(format!("M = {m_terms} continues only to Re s > {}", 0.25 - m_terms as f64 / 2.0)));
    }
    if s.re >= 0.0 && s.norm() <= 0.5 + CONTOUR_POLE_GAP {
        return Err(Error::Domain(format!("s = {s} lies inside the indentation |u| <= 1/2")));
    }
    let divs = divisors_of(n)?;
    let nf = n as f64;
    let sig = |k: C| sigma(k, n);
    let mut k_sum = C::new(0.0, 0.0);
    let mut poch = one();
    let mut fact = 1.0;
    for m in 0..m_terms {
        let mf = m as f64;
        let w = s * 2.0 + 2.0 * mf;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        k_sum += poch / fact * sign * sig(w) * cpow(nf, -(s + mf)) * zeta_star_logderiv(one() + w)?;
        poch *= s * 2.0 + mf;
        fact *= mf + 1.0;
    }
    let line = ContourSpec { abscissa: m_terms as f64 - 0.5, ..*contour };
    let lg2s = ln_gamma(s * 2.0)?;
    let integral = line.integrate(|v| {
        let b = (ln_gamma(-v)? + ln_gamma(s * 2.0 + v)? - lg2s).exp();
        Ok(b * sig((s + v) * 2.0) * cpow(nf, -(s + v)) * zeta_star_logderiv(one() + (s + v) * 2.0)?)
    })?;
    k_sum += integral;
    Ok(k_sum * 2.0 + beta(s, s)? * (divs.len() as f64 / 4.0))
}

/// `(1/2π)∫ B(s−ir, s+ir) σ_{−2ir}(n) n^{ir} (1 − N^{−1−2ir})^{−1} dr`.
pub fn oldform_integral(level: Level, n: u64, s: C, quad: &QuadratureSpec) -> Result<C> {
    if s.re <= 0.5 {
        return Err(Error::Domain(format!("oldform_integral needs Re s > 1/2, got {s}")));
    }
    let nn = level.get();
    if gcd(n, nn) != 1 {
        return Err(Error::Precondition(format!("need gcd(n, N) = 1 (n = {n}, N = {nn})")));
    }
    let divs = divisors_of(n)?;
    let ln_n = (nn as f64).ln();
    let f = |r: f64| {
        let ir = C::new(0.0, r);
        // σ_{−2ir}(n) n^{ir} is the conjugate of σ_{2ir}(n) n^{−ir}
        let phase = divisor_phase(&divs, n, r).conj();
        let old = (one() - (-(one() + ir * 2.0) * ln_n).exp()).inv();
        Ok(beta(s - ir, s + ir)? * phase * old)
    };
    Ok(real_line_integral(f, quad)? / (2.0 * std::f64::consts::PI))
}

/// `E_N*(2u)/E_N*(u) = N^{u/2} ∏_{p|N} (1 + p^{−u})`, entire in `u`.
fn e_star_doubling(level: Level, u: C) -> C {
    let mut v = cpow(level.get() as f64, u * 0.5);
    for p in level.primes() {
        v *= one() + cpow(p as f64, -u);
    }
    v
}

/// `E*(S)E*(1−S)/(E*(u)E*(1−u)) · E*(2u)`.
fn i_n_weight(level: Level, big_s: C, u: C) -> Result<C> {
    let n = level.get();
    let num = e_n_star(n, big_s)? * e_n_star(n, one() - big_s)?;
    Ok(num * e_star_doubling(level, u) / e_n_star(n, one() - u)?)
}

fn i_n_poles(big_s: C) -> [C; 4] {
    [big_s, big_s - 1.0, -big_s, one() - big_s]
}

/// `𝓘_N(S; σ) = (1/2πi)∫_{Re u = −σ} [E*(S)E*(1−S)/(E*(u)E*(1−u))] E*(2u) ζ*(S−u) ζ*(S+u) du`.
pub fn i_n_contour(level: Level, big_s: C, sigma_line: f64, contour: &ContourSpec) -> Result<C> {
    let c = -sigma_line;
    for p in i_n_poles(big_s).into_iter().chain([one()]) {
        let gap = (p.re - c).abs();
        if gap <= CONTOUR_POLE_GAP {
            return Err(Error::PoleProximity { what: "I_N contour", distance: gap });
        }
    }
    let line = ContourSpec { abscissa: c, ..*contour };
    line.integrate(|u| Ok(i_n_weight(level, big_s, u)? * zeta_star(big_s - u)? * zeta_star(big_s + u)?))
}

/// `𝓘_N(S; σ_small) − 𝓘_N(S; σ_large)`: the residues at the poles
/// `u ∈ {S, S−1, −S, 1−S}` with `−σ_large < Re u < −σ_small`.
pub fn i_n_residues(level: Level, big_s: C, sigma_small: f64, sigma_large: f64) -> Result<C> {
    if sigma_small >= sigma_large {
        return Err(Error::Domain("need sigma_small < sigma_large".into()));
    }
    let (lo, hi) = (-sigma_large, -sigma_small);
    if lo < 1.0 && 1.0 < hi {
        return Err(Error::Domain("the band crosses the zeros of E_N*(1 − u) on Re u = 1".into()));
    }
    let n = level.get();
    let inside = |u: C| lo < u.re && u.re < hi;
    let mut acc = C::new(0.0, 0.0);
    let [p_s, p_s1, p_ms, p_1ms] = i_n_poles(big_s);
    if inside(p_s) {
        acc += zeta_n_star(n, big_s * 2.0)?;
    }
    if inside(p_s1) {
        acc -= i_n_weight(level, big_s, p_s1)? * zeta_star(big_s * 2.0 - 1.0)?;
    }
    if inside(p_ms) {
        acc -= i_n_weight(level, big_s, p_ms)? * zeta_star(big_s * 2.0)?;
    }
    if inside(p_1ms) {
        acc += zeta_n_star(n, one() * 2.0 - big_s * 2.0)?;
    }
    Ok(acc)
}

/// `A(s) = (1/2πi)∫_{Re u = 0} ζ*(2s+2u) ζ*(2s−2u) du`.
pub fn a_integral(s: C, contour: &ContourSpec) -> Result<C> {
    let c = contour.abscissa;
    for w in [s * 2.0 + 2.0 * c, s * 2.0 - 2.0 * c] {
        for pole in [0.0, 1.0] {
            let gap = (w.re - pole).abs();
            if gap <= CONTOUR_POLE_GAP {
                return Err(Error::PoleProximity { what: "A(s) contour", distance: gap });
            }
        }
    }
    if (s.re * 2.0 - 2.0 * c.abs()) <= 1.0 {
        return Err(Error::Domain(format!("A(s) needs Re(2s ± 2u) > 1 on the line, got s = {s}, c = {c}")));
    }
    contour.integrate(|u| Ok(zeta_star(s * 2.0 + u * 2.0)? * zeta_star(s * 2.0 - u * 2.0)?))
}

/// `Σ_ℓ r(ℓ²) ℓ^{−2s} = ζ(2s)² L(2s, ψ_{−4}) / ζ(4s)` for `Re 2s > 1`.
pub fn r_square_dirichlet(s: C) -> Result<C> {
    require_half_plane("r_square_dirichlet", s * 2.0, 1.0)?;
    let w = s * 2.0;
    let z = zeta(w)?;
    Ok(z * z * dirichlet_beta(w)? / zeta(w * 2.0)?)
}

/// `Σ_{ℓ≤T} r(ℓ²) ℓ^{−2s}`; the tail uses `r(ℓ²) ≤ 2 + 2 log ℓ` on average.
pub fn r_square_dirichlet_truncated(s: C, t_max: u64) -> Result<SeriesEval> {
    require_half_plane("r_square_dirichlet", s * 2.0, 1.0)?;
    let mut acc = C::new(0.0, 0.0);
    for ell in 1..=t_max {
        acc += cpow(ell as f64, -s * 2.0) * r(ell * ell)? as f64;
    }
    let t = t_max.max(1) as f64;
    let sig = 2.0 * s.re;
    Ok(SeriesEval {
        value: acc,
        truncation: t_max,
        tail_estimate: (2.0 + 2.0 * t.ln()) * t.powf(1.0 - sig) / (sig - 1.0),
        tail_is_heuristic: true,
    })
}

/// `ζ*(2s)(√N ζ_N*(2s−1) ζ_N*(−2s) − (NΛ(N)/(N+1))[ζ_N*(4s) + ζ_N*(2−4s) + 𝓘_N(2s; σ)])`
/// for `σ > 2`, `Re 2s ∈ (2, σ)`.
pub fn eisenstein_correction(level: Level, s: C, sigma_line: f64, contour: &ContourSpec) -> Result<C> {
    let re2s = 2.0 * s.re;
    if !(sigma_line > 2.0 && re2s > 2.0 && re2s < sigma_line) {
        return Err(Error::Precondition(format!(
            "need sigma > 2 and Re 2s in (2, sigma) (sigma = {sigma_line}, s = {s})"
        )));
    }
    let n = level.get();
    let nf = n as f64;
    let s2 = s * 2.0;
    let mut bracket = zeta_n_star(n, s2 - 1.0)? * zeta_n_star(n, -s2)? * nf.sqrt();
    let lambda = level.lambda();
    if lambda != 0.0 {
        let inner = zeta_n_star(n, s2 * 2.0)?
            + zeta_n_star(n, one() * 2.0 - s2 * 2.0)?
            + i_n_contour(level, s2, sigma_line, contour)?;
        bracket -= inner * (nf * lambda / (nf + 1.0));
    }
    Ok(zeta_star(s2)? * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn lv(n: u64) -> Level {
        Level::new(n).unwrap()
    }

    #[test]
    fn scattering_real_and_stable() {
        let q = QuadratureSpec::default();
        let a = scattering_term(1, c(1.0, 0.0), &q).unwrap();
        assert!(a.im.abs() <= 1e-9 * a.norm());
        let q2 = QuadratureSpec { trunc_height: 400.0, ..q };
        let b = scattering_term(1, c(1.0, 0.0), &q2).unwrap();
        assert!((a - b).norm() < 1e-9);
        assert!(scattering_term(1, c(0.75, 0.0), &q).unwrap().re.is_finite());
        let v = scattering_term(6, c(0.9, 0.0), &q).unwrap();
        assert!(v.im.abs() <= 1e-9 * v.norm());
    }

    #[test]
    fn continuation_matches_direct() {
        let q = QuadratureSpec::default();
        let ctr = ContourSpec::default();
        for (n, s) in [(1u64, c(1.0, 0.0)), (1, c(0.75, 0.0)), (2, c(0.8, 0.5)), (6, c(1.2, -1.0))] {
            let direct = scattering_term(n, s, &q).unwrap();
            for m in [0u32, 1, 2, 3] {
                let cont = scattering_term_continued(n, s, m, &ctr).unwrap();
                assert!((cont - direct).norm() < 1e-9 * (1.0 + direct.norm()), "n={n} s={s} M={m}: {cont} vs {direct}");
            }
        }
    }

    #[test]
    fn continuation_is_m_independent() {
        let ctr = ContourSpec::default();
        for s in [c(0.3, 0.6), c(-0.3, 1.0), c(-0.6, 0.2)] {
            let base = scattering_term_continued(2, s, 3, &ctr).unwrap();
            let more = scattering_term_continued(2, s, 4, &ctr).unwrap();
            assert!((base - more).norm() < 1e-9 * (1.0 + base.norm()), "s={s}");
        }
        assert!(scattering_term_continued(1, c(0.2, 0.1), 2, &ctr).is_err());
        assert!(scattering_term_continued(1, c(-0.6, 1.0), 1, &ctr).is_err());
    }

    #[test]
    fn oldform_examples() {
        let q = QuadratureSpec::default();
        let a = oldform_integral(lv(2), 1, c(1.0, 0.0), &q).unwrap();
        let b = oldform_integral(lv(3), 1, c(1.0, 0.0), &q).unwrap();
        assert!(a.im.abs() < 1e-9 * a.norm());
        assert!((a - b).norm() > 1e-3);
        let q2 = QuadratureSpec { rel_tol: 1e-13, ..q };
        assert!((oldform_integral(lv(2), 1, c(1.0, 0.0), &q2).unwrap() - a).norm() < 1e-10);
        assert!(oldform_integral(lv(2), 4, c(1.0, 0.0), &q).is_err());
    }

    #[test]
    fn i_n_shift_identity() {
        let ctr = ContourSpec::default();
        for (n, s, hi, lo) in [
            (2u64, c(2.2, 0.0), 2.5, 0.5),
            (3, c(2.4, 0.0), 2.8, 0.6),
            (5, c(2.2, 0.5), 2.6, 0.4),
            (6, c(2.2, 0.0), 2.5, 0.5),
        ] {
            let a = i_n_contour(lv(n), s, lo, &ctr).unwrap();
            let b = i_n_contour(lv(n), s, hi, &ctr).unwrap();
            let res = i_n_residues(lv(n), s, lo, hi).unwrap();
            assert!((a - b - res).norm() < 1e-8 * (1.0 + res.norm()), "N={n}: {} vs {res}", a - b);
        }
    }

    #[test]
    fn i_n_residue_closed_form_at_prime_level() {
        // Res_{u=−S} = E_N(S−1)/(N E_N(S+1)) ζ_N*(2S) for prime N
        let s = c(2.2, 0.3);
        let en = |x: C| one() - cpow(2.0, -x);
        let res = i_n_residues(lv(2), s, 2.0, 2.5).unwrap();
        let want = en(s - 1.0) / (en(s + 1.0) * 2.0) * zeta_n_star(2, s * 2.0).unwrap();
        assert!((res - want).norm() < 1e-12 * want.norm());
        let res = i_n_residues(lv(2), s, 1.0, 1.5).unwrap();
        assert!((res - zeta_n_star(2, one() * 2.0 - s * 2.0).unwrap()).norm() < 1e-12 * res.norm());
        assert!(matches!(
            i_n_contour(lv(2), c(2.2, 0.0), 2.2, &ContourSpec::default()),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn a_lemma() {
        let ctr = ContourSpec::default();
        for s in [0.8, 0.9, 1.1] {
            let s = c(s, 0.0);
            let lhs = zeta_star(s * 4.0).unwrap() * r_square_dirichlet(s).unwrap();
            let rhs = zeta(s * 2.0).unwrap() * (a_integral(s, &ctr).unwrap() + zeta_star(s * 4.0).unwrap());
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm(), "s={s}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn r_square_series_agrees() {
        let s = c(1.5, 0.0);
        let closed = r_square_dirichlet(s).unwrap();
        let trunc = r_square_dirichlet_truncated(s, 20_000).unwrap();
        assert!((closed - trunc.value).norm() < trunc.tail_estimate);
        assert_eq!(r(1).unwrap(), 1);
        assert_eq!(r(4).unwrap(), 2);
        assert_eq!(r(25).unwrap(), 3);
    }

    #[test]
    fn eisenstein_examples() {
        let ctr = ContourSpec::default();
        let s = c(1.1, 0.0);
        let a = eisenstein_correction(lv(2), s, 2.5, &ctr).unwrap();
        let b = eisenstein_correction(lv(2), s, 3.0, &ctr).unwrap();
        assert!((a - b).norm() < 1e-7 * (1.0 + a.norm()));
        let six = eisenstein_correction(lv(6), s, 2.5, &ctr).unwrap();
        let want = zeta_star(s * 2.0).unwrap()
            * zeta_n_star(6, s * 2.0 - 1.0).unwrap()
            * zeta_n_star(6, -s * 2.0).unwrap()
            * 6f64.sqrt();
        assert!((six - want).norm() < 1e-14 * want.norm());
        assert!(eisenstein_correction(lv(2), c(1.1, 0.2), 2.5, &ctr).unwrap().norm().is_finite());
        assert!(eisenstein_correction(lv(2), c(0.9, 0.0), 2.5, &ctr).is_err());
    }
}
