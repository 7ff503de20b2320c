use num_complex::Complex64 as C;

use quadseries::arith::sigma_real;
use quadseries::coeffs::{c_n_circ_detailed, c_n_detailed, c_plus, Level};
use quadseries::quadfields::l1_general;
use quadseries::series::level::level1_residue;
use quadseries::series::sums::{log_checkpoints, MAX_SCAN};
use quadseries::series::{self, ContourSpec, SeriesEval};
use quadseries::special::{self, QuadratureSpec};

use crate::{CliError, CliResult, ResultRow, RunConfig, DEFAULT_SCAN_LIMIT};

pub const DEFAULT_SERIES_TRUNC: u64 = 1000;
pub const DEFAULT_RESIDUE_TRUNC: u64 = 10_000;
pub const RESIDUE_TOLERANCE: f64 = 0.01;

fn series_row(id: &str, tag: &str, e: SeriesEval) -> ResultRow {
    ResultRow {
        heuristic_tail: e.tail_is_heuristic,
        truncation: Some(e.truncation),
        tail_estimate: Some(e.tail_estimate),
        ..ResultRow::value(id, tag, e.value)
    }
}

fn level(config: &RunConfig) -> CliResult<Level> {
    Ok(Level::new(config.require("N")?)?)
}

pub fn eval(config: &RunConfig) -> CliResult<Vec<ResultRow>> {
    let name: String = config.require("fn")?;
    let s = config.complex("s", C::new(1.0, 0.0))?;
    let t = config.get("trunc")?.unwrap_or(DEFAULT_SERIES_TRUNC);
    let quad = QuadratureSpec::default();
    let contour = ContourSpec::default();
    let n = || config.require::<u64>("n");
    let id = name.as_str();
    let row = match id {
        "l1" => {
            let v = l1_general(config.require("D")?)?;
            ResultRow::value(id, "L(1, psi_D)", v.value).with_note(format!("{:?} route", v.route))
        }
        "phi" => ResultRow::value(id, "Phi kernel", special::phi_kernel(config.require("x")?, s)?),
        "psi" => ResultRow::value(id, "Psi kernel", special::psi_kernel(config.require("x")?, s, &quad)?),
        "zeta-star" => ResultRow::value(id, "completed zeta", special::zeta_star(s)?),
        "cosh-fourier" => {
            let r: f64 = config.get("r")?.unwrap_or(0.0);
            let ir = C::new(0.0, r);
            let target = special::beta(s + ir, s - ir)?;
            ResultRow::check(id, "Fourier pair", special::cosh_fourier(s, r, &quad)?, target, 1e-8)
        }
        "level1" => series_row(id, "level-1 series", series::level1_series(n()?, s, t)?),
        "level1-minus" => series_row(id, "level-1 series, D = t^2 + 4n", series::level1_minus_rhs(n()?, s, t)?),
        "level1-plus" => series_row(id, "level-1 series, D = t^2 - 4n", series::level1_plus_rhs(n()?, s, t, &quad)?),
        "levelN-minus" => {
            series_row(id, "level-N series, D = t^2 + 4n", series::level_n_minus_rhs(level(config)?, n()?, s, t)?)
        }
        "levelN-plus" => {
            series_row(id, "level-N series, D = t^2 - 4n", series::level_n_plus_rhs(level(config)?, n()?, s, t)?)
        }
        "twist" => series_row(id, "twisted level-1 series", series::quad_twist_series(level(config)?, n()?, s, t)?),
        "F_N" => series_row(id, "level-N coefficient series", series::f_n_truncated(level(config)?, s, t)?),
        "scattering" => match config.get::<u32>("M")? {
            None => ResultRow::value(id, "scattering term", series::scattering_term(n()?, s, &quad)?),
            Some(m) => ResultRow::value(id, "scattering term, continued", series::scattering_term_continued(n()?, s, m, &contour)?),
        },
        "oldform" => ResultRow::value(id, "oldform integral", series::oldform_integral(level(config)?, n()?, s, &quad)?),
        "i-n" => {
            let sigma: f64 = config.require("sigma")?;
            ResultRow::value(id, "I_N contour integral", series::i_n_contour(level(config)?, s, sigma, &contour)?)
        }
        "a" => ResultRow::value(id, "A(s) integral", series::a_integral(s, &contour)?),
        "r-square" => ResultRow::value(id, "sum r(l^2) l^-2s", series::r_square_dirichlet(s)?),
        "eisenstein" => {
            let sigma: f64 = config.require("sigma")?;
            ResultRow::value(id, "Eisenstein correction", series::eisenstein_correction(level(config)?, s, sigma, &contour)?)
        }
        other => return Err(CliError::Config(format!("unknown --fn {other:?}"))),
    };
    Ok(vec![row])
}

pub fn residue(config: &RunConfig) -> CliResult<Vec<ResultRow>> {
    let n: u64 = config.require("n")?;
    let t = config.get("trunc")?.unwrap_or(DEFAULT_RESIDUE_TRUNC);
    let tol = config.get("tol")?.unwrap_or(RESIDUE_TOLERANCE);
    let est = level1_residue(n, t)?;
    let target = sigma_real(-1.0, n);
    let rel = (est.value - target).abs() / target;
    let note = format!(
        "rel_err {rel:.3e}; samples {:?}; first-order {:?}",
        est.samples, est.first_order
    );
    Ok(vec![ResultRow {
        target: Some(target.into()),
        tolerance: Some(tol),
        pass: Some(rel <= tol),
        heuristic_tail: est.tail_is_heuristic,
        truncation: Some(t),
        ..ResultRow::value(format!("residue(n={n})"), "residue at s = 1/2", est.value)
    }
    .with_note(note)])
}

pub fn scan(config: &RunConfig) -> CliResult<Vec<ResultRow>> {
    let x: u64 = config.require("X")?;
    if x > MAX_SCAN {
        return Err(CliError::Config(format!("--X {x} exceeds {MAX_SCAN}")));
    }
    if x > DEFAULT_SCAN_LIMIT && !config.long_run {
        return Err(CliError::Config(format!("--X {x} > {DEFAULT_SCAN_LIMIT} requires --long-run")));
    }
    let marks = log_checkpoints(x);
    let (rows, id, tag) = match (config.flag("thm3"), config.flag("remark")) {
        (true, false) => (series::thm3_scan(x, &marks)?, "thm3".to_string(), "r(D)-weighted L(1) sum"),
        (false, true) => {
            let n: u64 = config.get("n")?.unwrap_or(1);
            (series::remark_scan(n, x, &marks)?, format!("remark(n={n})"), "L(1) along t^2 + 4n")
        }
        _ => return Err(CliError::Config("scan needs exactly one of --thm3, --remark".into())),
    };
    Ok(rows
        .into_iter()
        .map(|r| ResultRow {
            target: Some(r.main.into()),
            truncation: Some(r.x),
            ..ResultRow::value(format!("{id}@{}", r.x), tag, r.sum).with_note(format!("rel_dev {:e}", r.rel_dev))
        })
        .collect())
}

pub fn coeff(config: &RunConfig) -> CliResult<Vec<ResultRow>> {
    let kind: String = config.get("kind")?.unwrap_or_else(|| "c".into());
    let row = match kind.as_str() {
        "c" | "circ" => {
            let lvl = level(config)?;
            let d: i64 = config.require("D")?;
            let v = if kind == "c" { c_n_detailed(lvl, d)? } else { c_n_circ_detailed(lvl, d)? };
            let tag = if kind == "c" { "c_N(D)" } else { "c_N°(D)" };
            ResultRow::value(format!("{kind}(N={},D={d})", lvl.get()), tag, v.value).with_note(format!("{:?}", v.branch))
        }
        "plus" => {
            let n: u64 = config.require("n")?;
            ResultRow::value(format!("plus(n={n})"), "c+(n)", c_plus(n)?)
        }
        other => return Err(CliError::Config(format!("unknown --kind {other:?}"))),
    };
    Ok(vec![row])
}
