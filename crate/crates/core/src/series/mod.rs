//! Dirichlet series over `D = t² ± 4n`, the contour integrals around them,
//! and desk-scale partial-sum scans.

pub mod contour;
pub mod level;
pub mod scan;
pub mod sums;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::quad::{self, QuadratureSpec, Scheme};

pub use contour::{
    a_integral, eisenstein_correction, i_n_contour, i_n_residues, oldform_integral, r_square_dirichlet,
    r_square_dirichlet_truncated, scattering_term, scattering_term_continued,
};
pub use level::{
    f3_term, level1_minus_rhs, level1_plus_rhs, level1_series, level_n_minus_rhs, level_n_plus_rhs,
    quad_twist_series, residue_at_half, Level1Terms, ResidueEstimate,
};
pub use sums::{
    f_n_truncated, remark_partial_sum, remark_scan, thm3_constant_identity, thm3_partial_sum, thm3_scan, ScanRow,
    THM3_CONSTANT,
};

/// Margin above the abscissa of absolute convergence required by the
/// truncated evaluators.
pub const CONVERGENCE_MARGIN: f64 = 0.1;

/// A truncated series or integral with its remainder estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval {
    pub value: C,
    pub truncation: u64,
    pub tail_estimate: f64,
    pub tail_is_heuristic: bool,
}

/// A vertical line `Re(u) = abscissa`, integrated up to `|Im u| ≤ trunc_height`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub trunc_height: f64,
    /// Node budget for the whole line.
    pub step_nodes: usize,
    pub rel_tol: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { abscissa: 0.0, trunc_height: 200.0, step_nodes: 2_000_000, rel_tol: 1e-12 }
    }
}

impl ContourSpec {
    pub fn at(abscissa: f64) -> Self {
        Self { abscissa, ..Self::default() }
    }

    fn quadrature(&self) -> Result<QuadratureSpec> {
        if !(self.trunc_height > 0.0) {
            return Err(Error::OutOfRange(format!("trunc_height {} must be positive", self.trunc_height)));
        }
        let q = QuadratureSpec {
            scheme: Scheme::GaussKronrodAdaptive,
            rel_tol: self.rel_tol,
            max_nodes: self.step_nodes,
            trunc_height: self.trunc_height,
        };
        q.validate()?;
        Ok(q)
    }

    /// `(1/2πi) ∫_{Re u = c} g(u) du = (1/2π) ∫ g(c + iy) dy`.
    pub fn integrate<G: Fn(C) -> Result<C>>(&self, g: G) -> Result<C> {
        let q = self.quadrature()?;
        let c = self.abscissa;
        let f = |y: f64| g(C::new(c, y));
        Ok(quad::integrate_line(&f, &q, 1.0)?.value / (2.0 * std::f64::consts::PI))
    }
}

/// `Re s ≥ abscissa + margin`.
fn require_half_plane(what: &str, s: C, abscissa: f64) -> Result<()> {
    if s.re < abscissa + CONVERGENCE_MARGIN {
        return Err(Error::Domain(format!(
            "{what}: Re s = {} too close to the abscissa {abscissa} (margin {CONVERGENCE_MARGIN})",
            s.re
        )));
    }
    Ok(())
}

/// `B(s+ir, s−ir) ≪ e^{−π|r|}`, so integrals over `r` run on panels of this width.
const R_PANEL: f64 = 2.0;

fn real_line_integral<F: Fn(f64) -> Result<C>>(f: F, quad: &QuadratureSpec) -> Result<C> {
    Ok(quad::integrate_line(&f, quad, R_PANEL)?.value)
}
