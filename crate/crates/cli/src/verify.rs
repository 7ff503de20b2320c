//! Identity suites. Each row records one identity over one range.

use num_complex::Complex64 as C;

use quadseries::arith::{self, kronecker};
use quadseries::coeffs::{c_n_circ, Level};
use quadseries::counting::{check_corollary, check_lemma_rnell2, check_lemma_telescope, r, COROLLARY_TOLERANCE};
use quadseries::oracles;
use quadseries::quadfields::{class_data, l1_finite_sum, l1_from_class_data, l1_fundamental, l1_general};
use quadseries::series::{self, ContourSpec};
use quadseries::special::{self, QuadratureSpec};
use quadseries::Result;

use crate::{CliError, CliResult, ResultRow, RunConfig};

const SUITES: [&str; 5] = ["lemmas", "lvalues", "twist", "special", "contour"];
const MAX_VERIFY_D: u64 = 50_000;

struct Ctx {
    max_d: u64,
    tol: Option<f64>,
}

impl Ctx {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn run(config: &RunConfig) -> CliResult<Vec<ResultRow>> {
    let suite: String = config.get("suite")?.unwrap_or_else(|| "all".into());
    let max_d: u64 = config.get("max-D")?.unwrap_or(5000);
    if max_d == 0 || max_d > MAX_VERIFY_D {
        return Err(CliError::Config(format!("--max-D must lie in [1, {MAX_VERIFY_D}]")));
    }
    let ctx = Ctx { max_d, tol: config.get("tol")? };
    let chosen: Vec<&str> = match suite.as_str() {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => return Err(CliError::Config(format!("unknown --suite {other:?}"))),
    };
    let mut rows = Vec::new();
    for s in chosen {
        match s {
            "lemmas" => lemmas(&ctx, &mut rows),
            "lvalues" => lvalues(&ctx, &mut rows),
            "twist" => twist(&ctx, &mut rows),
            "special" => special_suite(&ctx, &mut rows),
            _ => contour(&ctx, &mut rows),
        }
    }
    Ok(rows)
}

/// Runs `f`, turning an error into a failed row.
fn push(rows: &mut Vec<ResultRow>, id: &str, tag: &str, f: impl FnOnce() -> Result<ResultRow>) {
    rows.push(f().unwrap_or_else(|e| ResultRow::failed(id, tag, &e)));
}

fn count_row(id: &str, tag: &str, mismatches: u64, range: String) -> ResultRow {
    ResultRow::check(id, tag, mismatches as f64, 0.0, 0.0).with_note(range)
}

fn lemmas(ctx: &Ctx, rows: &mut Vec<ResultRow>) {
    let top = ctx.max_d;
    push(rows, "r.closed_form", "r(n) series identity", || {
        let conv = oracles::naive_convolution(top as usize)?;
        let mut bad = 0;
        for n in 1..=top {
            let v = r(n)?;
            bad += (v as i64 != conv[n as usize] || 2 * v != oracles::naive_rep_count(n, 1)?.0) as u64;
        }
        Ok(count_row("r.closed_form", "r(n) series identity", bad, format!("n <= {top}")))
    });
    for m in [1u64, 2, 3, 5, 6, 30] {
        let id = format!("lemma.rnell2(M={m})");
        push(rows, &id, "r^(M)(l^2) divisor pairs", || {
            let mut bad = 0;
            for ell in 1..=500 {
                bad += !check_lemma_rnell2(m, ell)? as u64;
            }
            Ok(count_row(&id, "r^(M)(l^2) divisor pairs", bad, "l <= 500".into()))
        });
    }
    for (m, p) in [(2u64, 2u64), (3, 3), (6, 2), (6, 3), (10, 5)] {
        let id = format!("lemma.telescope(M={m},p={p})");
        push(rows, &id, "telescoping lemma", || {
            let mut bad = 0;
            for d in 1..=top {
                bad += !check_lemma_telescope(m, p, d)? as u64;
            }
            Ok(count_row(&id, "telescoping lemma", bad, format!("D <= {top}")))
        });
    }
    for n in [2u64, 3, 5, 6, 7, 10] {
        let id = format!("corollary(N={n})");
        push(rows, &id, "telescoped r^(N) sum", || {
            let level = Level::new(n)?;
            let mut bad = 0;
            for d in 1..=top {
                bad += !check_corollary(level, d)? as u64;
            }
            Ok(count_row(&id, "telescoped r^(N) sum", bad, format!("D <= {top}, tol {COROLLARY_TOLERANCE:e}")))
        });
    }
}

fn lvalues(ctx: &Ctx, rows: &mut Vec<ResultRow>) {
    let top = ctx.max_d.min(10_000) as i64;
    let tol = ctx.tol(1e-9);
    push(rows, "L1.factorization", "L(1, psi_D) from L(1, psi_d)", || {
        let mut worst = 0.0f64;
        for big_d in -top..=top {
            if !arith::is_discriminant(big_d) || arith::exact_sqrt(big_d).is_some() {
                continue;
            }
            let disc = arith::decompose(big_d)?;
            let base = l1_fundamental(disc.d)?.value;
            let mut lhs = 0.0;
            for c in arith::factorize(disc.ell)?.divisors() {
                let local: f64 = arith::factorize(c)?
                    .primes()
                    .map(|p| 1.0 - kronecker(disc.d, p as i64) as f64 / p as f64)
                    .product();
                lhs += base * c as f64 / disc.ell as f64 * local;
            }
            worst = worst.max((lhs - l1_general(big_d)?.value).abs());
        }
        Ok(ResultRow::check("L1.factorization", "L(1, psi_D) from L(1, psi_d)", worst, 0.0, tol)
            .with_note(format!("|D| <= {top}")))
    });
    push(rows, "L1.dual_route", "class number vs finite sum", || {
        let mut worst = 0.0f64;
        for d in -top..=top {
            if d == 1 || !arith::is_fundamental(d) {
                continue;
            }
            let (finite, _) = l1_finite_sum(d)?;
            worst = worst.max((finite - l1_from_class_data(&class_data(d)?)).abs());
        }
        Ok(ResultRow::check("L1.dual_route", "class number vs finite sum", worst, 0.0, tol)
            .with_note(format!("fundamental |d| <= {top}")))
    });
    push(rows, "L1.naive", "character sum oracle", || {
        let mut misses = 0u64;
        let mut checked = 0;
        for d in (-top..=top).filter(|&d| d != 1 && arith::is_fundamental(d)).step_by(61).take(50) {
            let ad = d.unsigned_abs() as f64;
            let cutoff = (100.0 * ad.sqrt() * (1.0 + ad.ln())).ceil().max(200_000.0) as u64;
            let (naive, err) = oracles::naive_l1(d, cutoff)?;
            misses += ((naive - l1_fundamental(d)?.value).abs() > err) as u64;
            checked += 1;
        }
        Ok(count_row("L1.naive", "character sum oracle", misses, format!("{checked} sampled d")))
    });
}

fn twist(ctx: &Ctx, rows: &mut Vec<ResultRow>) {
    let tol = ctx.tol(1e-10);
    for (nn, n) in [(3u64, 1u64), (7, 1), (3, 2), (5, 2), (7, 2)] {
        let id = format!("twist(N={nn},n={n})");
        let tag = "c_N° + L = L·(D/N)";
        if kronecker(-4 * n as i64, nn as i64) != -1 {
            rows.push(ResultRow::skipped(&id, tag, "precondition (-4n/N) = -1 not met"));
            continue;
        }
        push(rows, &id, tag, || {
            let level = Level::new(nn)?;
            let mut worst = 0.0f64;
            for t in 0..=200i64 {
                let big_d = t * t + 4 * n as i64;
                if arith::exact_sqrt(big_d).is_some() {
                    continue;
                }
                let l = l1_general(big_d)?.value;
                worst = worst.max((c_n_circ(level, big_d)? + l - l * kronecker(big_d, nn as i64) as f64).abs());
            }
            Ok(ResultRow::check(&id, tag, worst, 0.0, tol).with_note("t <= 200"))
        });
    }
}

fn special_suite(ctx: &Ctx, rows: &mut Vec<ResultRow>) {
    let q = QuadratureSpec::default();
    for (re, im, r) in [(1.0, 0.0, 0.0), (1.0, 0.0, 1.0), (0.8, 0.3, 2.5)] {
        let id = format!("fourier(s={re}{im:+}i,r={r})");
        push(rows, &id, "Fourier pair", || {
            let s = C::new(re, im);
            let ir = C::new(0.0, r);
            Ok(ResultRow::check(&id, "Fourier pair", special::cosh_fourier(s, r, &q)?, special::beta(s + ir, s - ir)?, ctx.tol(1e-8)))
        });
    }
    for (re, im) in [(0.75, 0.0), (1.0, 0.0), (1.3, 0.4)] {
        let id = format!("phi.continuity(s={re}{im:+}i)");
        push(rows, &id, "Phi at x = 1", || {
            let s = C::new(re, im);
            let left = special::phi_kernel(1.0 - 1e-6, s)?;
            Ok(ResultRow::check(&id, "Phi at x = 1", left, special::phi_kernel(1.0, s)?, ctx.tol(1e-4))
                .with_note("left limit closes like sqrt(1 - x)"))
        });
    }
}

fn contour(ctx: &Ctx, rows: &mut Vec<ResultRow>) {
    let ctr = ContourSpec::default();
    let tol = ctx.tol(1e-6);
    for (n, re, im, hi, lo) in [(2u64, 2.2, 0.0, 2.5, 0.5), (3, 2.4, 0.0, 2.8, 0.6), (5, 2.2, 0.5, 2.6, 0.4)] {
        let id = format!("i_n.shift(N={n},S={re}{im:+}i)");
        push(rows, &id, "I_N contour shift", || {
            let level = Level::new(n)?;
            let s = C::new(re, im);
            let moved = series::i_n_contour(level, s, lo, &ctr)? - series::i_n_contour(level, s, hi, &ctr)?;
            Ok(ResultRow::check(&id, "I_N contour shift", moved, series::i_n_residues(level, s, lo, hi)?, tol)
                .with_note(format!("lines Re u = -{lo}, -{hi}")))
        });
    }
    for s in [0.8, 0.9, 1.1] {
        let id = format!("a_lemma(s={s})");
        push(rows, &id, "A(s) lemma", || {
            let s = C::new(s, 0.0);
            let lhs = special::zeta_star(s * 4.0)? * series::r_square_dirichlet(s)?;
            let rhs = special::zeta(s * 2.0)? * (series::a_integral(s, &ctr)? + special::zeta_star(s * 4.0)?);
            Ok(ResultRow::check(&id, "A(s) lemma", lhs, rhs, tol))
        });
    }
    push(rows, "eisenstein.sigma", "Eisenstein correction", || {
        let two = Level::new(2)?;
        let s = C::new(1.1, 0.0);
        let a = series::eisenstein_correction(two, s, 2.5, &ctr)?;
        let b = series::eisenstein_correction(two, s, 3.0, &ctr)?;
        Ok(ResultRow::check("eisenstein.sigma", "Eisenstein correction", a, b, ctx.tol(1e-7))
            .with_note("sigma = 2.5 vs 3"))
    });
}
