//! Vertical-line trapezoid quadrature: grids, contour selection, refinement.
//!
//! All integrands here are products of gamma functions along vertical lines,
//! which are analytic in a strip around the contour and decay like
//! `exp(-c|t|)`, so the trapezoid rule converges spectrally. Accuracy is
//! controlled by the step (discretization) and the truncation height (tail),
//! and both are estimated per pass: the step error by comparing against the
//! every-other-point subsum, the tail by the endpoint magnitudes.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Margins attempted, in order, when searching for an admissible contour.
pub const MARGIN_LADDER: [f64; 6] = [0.3, 0.25, 0.2, 0.15, 0.1, 0.05];

/// Minimum pole separation accepted for caller-specified contours.
pub const EXPLICIT_CONTOUR_MIN_SEP: f64 = 1e-3;

/// Contour placement and resolution for the Mellin–Barnes quadratures.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureConfig {
    /// Real parts of the integration lines, one per integration variable.
    /// Empty means: choose automatically by the feasibility search.
    pub contour_re: Vec<f64>,
    /// Truncation height `H`: integration runs over `|Im z_j| <= H`.
    pub height: f64,
    /// Grid step `h` along each line.
    pub step: f64,
    /// Target relative error.
    pub rel_tol: f64,
    /// Refinement budget (each refinement halves `h` and stretches `H`).
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            contour_re: Vec::new(),
            height: 40.0,
            step: 0.05,
            rel_tol: 1e-6,
            max_refinements: 3,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.height > 0.0) || !(self.step > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature config requires H > 0, h > 0, rel_tol > 0".into(),
            ));
        }
        Ok(())
    }

    /// Coarse settings for cross-validation runs (the fully recursive
    /// three-fold transform path).
    pub fn coarse() -> Self {
        QuadratureConfig {
            contour_re: Vec::new(),
            height: 14.0,
            step: 0.1,
            rel_tol: 1e-4,
            max_refinements: 0,
        }
    }

    /// Copy with the automatic contour search re-enabled.
    pub fn auto_contour(&self) -> Self {
        let mut c = self.clone();
        c.contour_re.clear();
        c
    }
}

/// A quadrature value with its per-pass error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub est_rel_error: f64,
    pub refinements: u32,
}

impl QuadResult {
    pub fn exact(value: Complex64) -> Self {
        QuadResult {
            value,
            est_rel_error: 1e-15,
            refinements: 0,
        }
    }
}

/// Symmetric grid `-mh, ..., -h, 0, h, ..., mh` covering `[-H, H]`.
pub fn sym_grid(height: f64, step: f64) -> Vec<f64> {
    let m = (height / step).ceil() as i64;
    (-m..=m).map(|j| j as f64 * step).collect()
}

/// Unit-step trapezoid sum (caller multiplies by the step).
pub fn trap_sum(vals: &[Complex64]) -> Complex64 {
    let n = vals.len();
    let mut s = Complex64::new(0.0, 0.0);
    for v in vals {
        s += v;
    }
    s - 0.5 * (vals[0] + vals[n - 1])
}

/// Trapezoid sum over every other point (step doubles; grid length is odd so
/// the endpoints stay on the subgrid).
pub fn trap_sum_alt(vals: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    let mut last = Complex64::new(0.0, 0.0);
    for (i, v) in vals.iter().enumerate() {
        if i % 2 == 0 {
            s += v;
            last = *v;
        }
    }
    s - 0.5 * (vals[0] + last)
}

/// Relative size of the endpoint values — the tail-truncation indicator.
pub fn endpoint_ratio(vals: &[Complex64]) -> f64 {
    let peak = vals.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    (vals[0].norm() + vals[vals.len() - 1].norm()) / peak
}

/// Pick one `Re z_j` per variable so that every lower constraint clears by a
/// margin and every upper constraint clears by the same margin, trying the
/// margin ladder from widest to narrowest. Returns the contours and the
/// margin that worked.
pub fn choose_contours(lowers: &[Vec<f64>], uppers: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
    assert_eq!(lowers.len(), uppers.len());
    for &margin in MARGIN_LADDER.iter() {
        let mut cs = Vec::with_capacity(lowers.len());
        let mut ok = true;
        for (lo, hi) in lowers.iter().zip(uppers) {
            let lo = lo.iter().copied().fold(f64::NEG_INFINITY, f64::max) + margin;
            let hi = hi.iter().copied().fold(f64::INFINITY, f64::min) - margin;
            if lo > hi {
                ok = false;
                break;
            }
            cs.push(if hi.is_finite() { 0.5 * (lo + hi) } else { lo });
        }
        if ok {
            return Ok((cs, margin));
        }
    }
    Err(Error::Contour(format!(
        "pole separation infeasible: lower bounds {lowers:?}, upper bounds {uppers:?}"
    )))
}

/// Validate a caller-specified contour against the same constraint lists.
pub fn check_explicit_contours(
    contour_re: &[f64],
    lowers: &[Vec<f64>],
    uppers: &[Vec<f64>],
) -> Result<()> {
    if contour_re.len() != lowers.len() {
        return Err(Error::InvalidParameter(format!(
            "contour_re must have {} entries, got {}",
            lowers.len(),
            contour_re.len()
        )));
    }
    for ((&c, lo), hi) in contour_re.iter().zip(lowers).zip(uppers) {
        let lo = lo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let hi = hi.iter().copied().fold(f64::INFINITY, f64::min);
        if c - lo < EXPLICIT_CONTOUR_MIN_SEP || hi - c < EXPLICIT_CONTOUR_MIN_SEP {
            return Err(Error::Contour(format!(
                "explicit contour Re z = {c} does not separate poles ({lo}, {hi})"
            )));
        }
    }
    Ok(())
}

/// One-dimensional vertical-line integral `(1/2pi i) ∫ f(c+it) dz` with
/// step/tail error estimation and refinement. `build` fills the integrand on
/// the supplied grid.
pub fn line_integral<F>(cfg: &QuadratureConfig, mut build: F) -> Result<QuadResult>
where
    F: FnMut(&[f64]) -> Result<Vec<Complex64>>,
{
    cfg.validate()?;
    let mut height = cfg.height;
    let mut step = cfg.step;
    let mut refinements = 0;
    loop {
        let ts = sym_grid(height, step);
        let vals = build(&ts)?;
        let scale = step / (2.0 * std::f64::consts::PI);
        let s_h = trap_sum(&vals) * scale;
        let s_2h = trap_sum_alt(&vals) * 2.0 * scale;
        let denom = s_h.norm().max(f64::MIN_POSITIVE);
        let est = (s_h - s_2h).norm() / denom + endpoint_ratio(&vals) + 1e-15;
        if est <= cfg.rel_tol || refinements >= cfg.max_refinements {
            if est > cfg.rel_tol {
                return Err(Error::NonConvergence(format!(
                    "line integral estimate {est:.3e} above rel_tol {:.3e} \
                     after {refinements} refinements",
                    cfg.rel_tol
                )));
            }
            return Ok(QuadResult {
                value: s_h,
                est_rel_error: est,
                refinements,
            });
        }
        step *= 0.5;
        height *= 1.25;
        refinements += 1;
    }
}
