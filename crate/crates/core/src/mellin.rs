//! Numerical evaluation of the Whittaker-function Mellin transform
//! `T_{n,a}(s)` for `n = 2, 3, 4` by recursive Mellin–Barnes quadrature,
//! plus the modified-Bessel cross-checks that validate the quadrature
//! machinery against an independent real-axis representation.
//!
//! The base case is the closed form `T_2(s) = Γ(s_1+a_1)Γ(s_1-a_1)`. One
//! level up, a single Barnes-lemma application collapses the `n = 3`
//! integral to a gamma quotient; after that closed form is pinned against
//! direct quadrature it serves as the inner integrand of the `n = 4`
//! two-fold integral. The fully recursive three-fold path stays available
//! for cross-validation at coarse resolution.

use crate::error::{Error, Result};
use crate::gamma::{gamma_product, log_gamma};
use crate::quad::{
    check_explicit_contours, choose_contours, endpoint_ratio, line_integral, sym_grid, trap_sum,
    trap_sum_alt, QuadResult, QuadratureConfig, MARGIN_LADDER,
};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// The spectral parameter `a = (a_1, ..., a_n)` with `Σ a_k = 0`, enforced at
/// construction by deriving the last entry from the first `n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParams {
    a: Vec<Complex64>,
}

impl SpectralParams {
    /// Accepts either the free entries `a_1..a_{n-1}` or all `n` entries; in
    /// the latter case the stated sum must already vanish (tolerance 1e-9).
    pub fn new(n: usize, entries: &[Complex64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("dimension must be >= 2".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite spectral entry".into()));
        }
        let free: Vec<Complex64> = if entries.len() == n - 1 {
            entries.to_vec()
        } else if entries.len() == n {
            let sum: Complex64 = entries.iter().sum();
            if sum.norm() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "spectral parameter must sum to zero (sum = {sum})"
                )));
            }
            entries[..n - 1].to_vec()
        } else {
            return Err(Error::InvalidParameter(format!(
                "expected {} or {} spectral entries, got {}",
                n - 1,
                n,
                entries.len()
            )));
        };
        let last = -free.iter().sum::<Complex64>();
        let mut a = free;
        a.push(last);
        Ok(SpectralParams { a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    /// Entries reordered by `perm` (a permutation of `0..n`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        Ok(SpectralParams {
            a: perm.iter().map(|&p| self.a[p]).collect(),
        })
    }

    pub fn negated(&self) -> Self {
        SpectralParams {
            a: self.a.iter().map(|z| -z).collect(),
        }
    }

    /// The lowered parameter `b_j = a_{j+1} + a_1/(n-1)`, a valid spectral
    /// parameter one dimension down.
    pub fn lowered(&self) -> Self {
        let n = self.n();
        let shift = self.a[0] / (n as f64 - 1.0);
        SpectralParams {
            a: self.a[1..].iter().map(|&z| z + shift).collect(),
        }
    }
}

/// The transform argument `s = (s_1, ..., s_{n-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct MellinPoint {
    s: Vec<Complex64>,
}

impl MellinPoint {
    pub fn new(s: Vec<Complex64>) -> Result<Self> {
        if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Mellin entry".into()));
        }
        Ok(MellinPoint { s })
    }

    pub fn s(&self) -> &[Complex64] {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut s = self.s.clone();
        s.reverse();
        MellinPoint { s }
    }
}

fn expect_dims(a: &SpectralParams, s: &MellinPoint) -> Result<()> {
    if s.len() + 1 != a.n() {
        return Err(Error::InvalidParameter(format!(
            "dimension mismatch: n = {}, |s| = {}",
            a.n(),
            s.len()
        )));
    }
    Ok(())
}

/// `T_2(s) = Γ(s_1+a_1)Γ(s_1-a_1)` — the zero-fold integral.
pub fn t2(a: &SpectralParams, s: &MellinPoint) -> Result<Complex64> {
    expect_dims(a, s)?;
    let s1 = s.s()[0];
    let a1 = a.a()[0];
    gamma_product(&[s1 + a1, s1 - a1])
}

/// Barnes-lemma closed form for `n = 3`:
/// `Π_k Γ(s_1+a_k) Γ(s_2-a_k) / Γ(s_1+s_2)`.
///
/// The overall constant (expected 1) is pinned against quadrature by the
/// acceptance suite before any use as an inner integrand.
pub fn t3_closed(a: &SpectralParams, s: &MellinPoint) -> Result<Complex64> {
    expect_dims(a, s)?;
    let (s1, s2) = (s.s()[0], s.s()[1]);
    let mut num = Complex64::new(0.0, 0.0);
    for &ak in a.a() {
        num += log_gamma(s1 + ak)? + log_gamma(s2 - ak)?;
    }
    let v = (num - log_gamma(s1 + s2)?).exp();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::NonFinite("t3_closed overflowed".into()));
    }
    Ok(v)
}

/// Contour constraint lists (lower bounds on `Re z_j`, upper bounds) for the
/// quadrature representation of `T_n` at `(a, s)`.
fn contour_bounds(a: &SpectralParams, s: &MellinPoint) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let av = a.a();
    let sv = s.s();
    let a1 = av[0];
    match a.n() {
        3 => (
            vec![vec![-sv[0].re, -(sv[1] + a1).re]],
            vec![vec![av[1].re, av[2].re]],
        ),
        4 => (
            vec![
                vec![-sv[0].re, -(sv[1] + a1).re],
                vec![-sv[1].re, -(sv[2] + a1).re],
            ],
            vec![
                vec![av[1].re, av[2].re, av[3].re],
                vec![-(a1 + av[1]).re, -(a1 + av[2]).re, -(a1 + av[3]).re],
            ],
        ),
        _ => (vec![], vec![]),
    }
}

/// Whether `(a, s)` lies inside the region where the quadrature
/// representation applies with the given contour margin. This is the
/// interior predicate used by the continuation engine.
pub fn contour_feasible(a: &SpectralParams, s: &MellinPoint, margin: f64) -> bool {
    if expect_dims(a, s).is_err() {
        return false;
    }
    if a.n() == 2 {
        let s1 = s.s()[0];
        let a1 = a.a()[0];
        return (s1 + a1).re >= margin && (s1 - a1).re >= margin;
    }
    let (lowers, uppers) = contour_bounds(a, s);
    lowers.iter().zip(&uppers).all(|(lo, hi)| {
        let lo = lo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let hi = hi.iter().copied().fold(f64::INFINITY, f64::min);
        lo + 2.0 * margin <= hi
    })
}

/// The widest ladder margin that makes `(a, s)` interior, if any.
pub fn feasible_margin(a: &SpectralParams, s: &MellinPoint) -> Option<f64> {
    MARGIN_LADDER
        .iter()
        .copied()
        .find(|&m| contour_feasible(a, s, m))
}

fn resolve_contours(
    a: &SpectralParams,
    s: &MellinPoint,
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>> {
    let (lowers, uppers) = contour_bounds(a, s);
    if cfg.contour_re.is_empty() {
        let (cs, _margin) = choose_contours(&lowers, &uppers)?;
        Ok(cs)
    } else {
        check_explicit_contours(&cfg.contour_re, &lowers, &uppers)?;
        Ok(cfg.contour_re.clone())
    }
}

/// Gamma-product ladder along the vertical line `Re z = c`:
/// `Π Γ(z + plus_i) · Π Γ(minus_i - z)` at each grid point, in parallel.
fn product_ladder(
    c: f64,
    ts: &[f64],
    plus: &[Complex64],
    minus: &[Complex64],
) -> Result<Vec<Complex64>> {
    ts.par_iter()
        .map(|&t| {
            let z = Complex64::new(c, t);
            let mut args: Vec<Complex64> = plus.iter().map(|&p| z + p).collect();
            args.extend(minus.iter().map(|&m| m - z));
            gamma_product(&args)
        })
        .collect::<Result<_>>()
}

/// Fold trapezoid endpoint weights into a ladder.
fn halve_endpoints(vals: &mut [Complex64]) {
    let n = vals.len();
    vals[0] *= 0.5;
    vals[n - 1] *= 0.5;
}

/// `T_3` by direct one-fold quadrature of the recursive formula.
fn eval_t3_quad(a: &SpectralParams, s: &MellinPoint, cfg: &QuadratureConfig) -> Result<QuadResult> {
    let av = a.a();
    let sv = s.s();
    let a1 = av[0];
    let c = resolve_contours(a, s, cfg)?[0];
    let pref = gamma_product(&[sv[0] + a1, sv[1] - a1])?;
    // integrand: Γ(z+s1) Γ(z+s2+a1) Γ(a2-z) Γ(a3-z)
    let r = line_integral(cfg, |ts| {
        product_ladder(c, ts, &[sv[0], sv[1] + a1], &[av[1], av[2]])
    })?;
    Ok(QuadResult {
        value: pref * r.value,
        est_rel_error: r.est_rel_error,
        refinements: r.refinements,
    })
}

/// `T_4` as a two-fold integral with the Barnes-collapsed `T_3` closed form
/// as inner integrand. The double sum couples the two lines only through
/// `1/Γ(-z_1-z_2-a_1)`, which lives on the difference grid, so each gamma
/// ladder is precomputed once per pass.
fn eval_t4_barnes(
    a: &SpectralParams,
    s: &MellinPoint,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    let av = a.a();
    let sv = s.s();
    let a1 = av[0];
    let cs = resolve_contours(a, s, cfg)?;
    let (c1, c2) = (cs[0], cs[1]);
    let pref = gamma_product(&[sv[0] + a1, sv[2] - a1])?;

    let mut height = cfg.height;
    let mut step = cfg.step;
    let mut refinements = 0u32;
    loop {
        let ts = sym_grid(height, step);
        let n = ts.len();
        // A(z1) = Γ(z1+s1) Γ(z1+s2+a1) Π_k Γ(a_k - z1), k = 2..4
        let mut a_vals = product_ladder(c1, &ts, &[sv[0], sv[1] + a1], &[av[1], av[2], av[3]])?;
        // B(z2) = Γ(z2+s2) Γ(z2+s3+a1) Π_k Γ(-a1-a_k - z2)
        let mut b_vals = product_ladder(
            c2,
            &ts,
            &[sv[1], sv[2] + a1],
            &[-(a1 + av[1]), -(a1 + av[2]), -(a1 + av[3])],
        )?;
        halve_endpoints(&mut a_vals);
        halve_endpoints(&mut b_vals);
        // C(j+k) = 1/Γ(-z1-z2-a1) on the difference grid
        let base = Complex64::new(-c1 - c2, 0.0) - a1;
        let c_vals: Vec<Complex64> = (0..2 * n - 1)
            .into_par_iter()
            .map(|i| {
                let t = (i as f64 - (n as f64 - 1.0)) * step;
                let z = base - Complex64::new(0.0, t);
                match log_gamma(z) {
                    Ok(lg) => Ok((-lg).exp()),
                    Err(Error::Pole { .. }) => Ok(Complex64::new(0.0, 0.0)),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;

        // row sums in parallel, reduced in index order for determinism
        let row = |j: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += b_vals[k] * c_vals[j + k];
            }
            a_vals[j] * acc
        };
        let rows: Vec<Complex64> = (0..n).into_par_iter().map(row).collect();
        let total: Complex64 = rows.iter().sum();

        // every-other-point subsum for the step-error estimate
        let row_sub = |j: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut k = 0;
            while k < n {
                acc += b_vals[k] * c_vals[j + k];
                k += 2;
            }
            a_vals[j] * acc
        };
        let rows_sub: Vec<Complex64> = (0..n)
            .into_par_iter()
            .step_by(2)
            .map(row_sub)
            .collect();
        let total_sub: Complex64 = rows_sub.iter().sum();

        let scale = step / (2.0 * PI);
        let s_h = pref * total * scale * scale;
        let s_2h = pref * total_sub * (2.0 * scale) * (2.0 * scale);
        let denom = s_h.norm().max(f64::MIN_POSITIVE);
        let tail = endpoint_ratio(&a_vals) + endpoint_ratio(&b_vals);
        let est = (s_h - s_2h).norm() / denom + tail + 1e-14;
        if est <= cfg.rel_tol {
            return Ok(QuadResult {
                value: s_h,
                est_rel_error: est,
                refinements,
            });
        }
        if refinements >= cfg.max_refinements {
            return Err(Error::NonConvergence(format!(
                "T4 estimate {est:.3e} above rel_tol {:.3e} after {refinements} refinements",
                cfg.rel_tol
            )));
        }
        step *= 0.5;
        height *= 1.25;
        refinements += 1;
    }
}

/// `T_4` by the fully recursive three-fold integral (coarse cross-validation
/// path; quadratic-plus cost in the grid size).
pub fn eval_t4_recursive(
    a: &SpectralParams,
    s: &MellinPoint,
    cfg: &QuadratureConfig,
) -> Result<QuadResult> {
    expect_dims(a, s)?;
    cfg.validate()?;
    let av = a.a();
    let sv = s.s();
    let a1 = av[0];
    let b = a.lowered();
    let bv = b.a();

    // contour search: outer lines leftmost in their windows to widen the
    // inner window, inner line at the midpoint
    let lo1 = (-sv[0].re).max(-(sv[1] + a1).re);
    let lo2 = (-sv[1].re).max(-(sv[2] + a1).re);
    let mut chosen: Option<(f64, f64, f64, f64)> = None;
    for &m in MARGIN_LADDER.iter() {
        let c1 = lo1 + m;
        let c2 = lo2 + m;
        if c1 > av[1].re - m || c2 > -(a1 + av[1]).re - m {
            continue;
        }
        let lo_u = (m + c1 + (a1 / 3.0).re).max(m + c2 - (av[1] - a1 / 3.0).re);
        let hi_u = bv[1].re.min(bv[2].re) - m;
        if lo_u <= hi_u {
            chosen = Some((c1, c2, 0.5 * (lo_u + hi_u), m));
            break;
        }
    }
    let Some((c1, c2, cu, _m)) = chosen else {
        return Err(Error::Contour(
            "recursive T4 path: no admissible contour triple".into(),
        ));
    };

    let pref = gamma_product(&[sv[0] + a1, sv[2] - a1])?;
    let ts = sym_grid(cfg.height, cfg.step);
    let n = ts.len();
    let h = cfg.step;

    // outer ladders, inner-prefactor gammas folded in
    let mut p_vals = product_ladder(c1, &ts, &[sv[0], sv[1] + a1], &[av[1]])?;
    let mut q_vals = product_ladder(c2, &ts, &[sv[1], sv[2] + a1], &[-(a1 + av[1])])?;
    // inner ladder: Γ(b2-u) Γ(b3-u)
    let mut e_vals = product_ladder(cu, &ts, &[], &[bv[1], bv[2]])?;
    halve_endpoints(&mut p_vals);
    halve_endpoints(&mut q_vals);
    halve_endpoints(&mut e_vals);
    // difference ladders: Γ(u + w1) and Γ(u + w2 + b1) depend only on l-j, l-k
    let base1 = Complex64::new(cu - c1, 0.0) - a1 / 3.0;
    let base2 = Complex64::new(cu - c2, 0.0) + av[1] - a1 / 3.0;
    let diff_ladder = |base: Complex64| -> Result<Vec<Complex64>> {
        (0..2 * n - 1)
            .into_par_iter()
            .map(|i| {
                let t = (i as f64 - (n as f64 - 1.0)) * h;
                gamma_product(&[base + Complex64::new(0.0, t)])
            })
            .collect()
    };
    let d1 = diff_ladder(base1)?;
    let d2 = diff_ladder(base2)?;

    // T4 = pref (h/2pi)^3 Σ_{j,k} P_j Q_k Σ_l D1[l-j] D2[l-k] E_l
    let off = n - 1;
    let rows: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc_j = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    acc += d1[l + off - j] * d2[l + off - k] * e_vals[l];
                }
                acc_j += q_vals[k] * acc;
            }
            p_vals[j] * acc_j
        })
        .collect();
    let total: Complex64 = rows.iter().sum();
    let scale = h / (2.0 * PI);
    let value = pref * total * scale * scale * scale;
    Ok(QuadResult {
        value,
        est_rel_error: cfg.rel_tol,
        refinements: 0,
    })
}

/// Evaluate `T_{n,a}(s)` for `n = 2, 3, 4` inside the convergence region.
///
/// Errors: [`Error::Contour`] when no admissible contour exists,
/// [`Error::NonConvergence`] when the refinement budget runs out.
pub fn eval_t(a: &SpectralParams, s: &MellinPoint, cfg: &QuadratureConfig) -> Result<QuadResult> {
    expect_dims(a, s)?;
    cfg.validate()?;
    match a.n() {
        2 => Ok(QuadResult::exact(t2(a, s)?)),
        3 => eval_t3_quad(a, s, cfg),
        4 => eval_t4_barnes(a, s, cfg),
        n => Err(Error::InvalidParameter(format!(
            "quadrature implemented for n in 2..=4, got {n}"
        ))),
    }
}

/// `K_ν(y)` through the Mellin–Barnes representation
/// `(1/4)(1/2πi) ∫ Γ((s+ν)/2) Γ((s-ν)/2) (y/2)^{-s} ds` on a line right of
/// the poles.
pub fn bessel_k_mb(nu: Complex64, y: f64, cfg: &QuadratureConfig) -> Result<QuadResult> {
    if !(y > 0.0) {
        return Err(Error::InvalidParameter("bessel_k_mb needs y > 0".into()));
    }
    let c = if cfg.contour_re.is_empty() {
        nu.re.abs() + 1.0
    } else {
        let c = cfg.contour_re[0];
        if (c - nu.re) / 2.0 < 0.05 || (c + nu.re) / 2.0 < 0.05 {
            return Err(Error::Contour(format!(
                "line Re s = {c} does not stay right of the poles of Γ((s±ν)/2)"
            )));
        }
        c
    };
    let log_half_y = (y / 2.0f64).ln();
    let r = line_integral(cfg, |ts| {
        ts.par_iter()
            .map(|&t| {
                let z = Complex64::new(c, t);
                let g = gamma_product(&[(z + nu) / 2.0, (z - nu) / 2.0])?;
                Ok(g * (-z * log_half_y).exp())
            })
            .collect::<Result<_>>()
    })?;
    Ok(QuadResult {
        value: r.value * 0.25,
        est_rel_error: r.est_rel_error,
        refinements: r.refinements,
    })
}

/// `K_ν(y)` through the exponential-integral representation
/// `(1/2) ∫_0^∞ e^{-y(t+1/t)/2} t^ν dt/t = ∫_0^∞ e^{-y cosh u} cosh(ν u) du`,
/// by adaptive trapezoid refinement to relative 1e-10. Symmetric in `ν ↔ -ν`
/// by construction.
pub fn bessel_k_exp(nu: Complex64, y: f64) -> Result<Complex64> {
    if !(y > 0.0) {
        return Err(Error::InvalidParameter("bessel_k_exp needs y > 0".into()));
    }
    // truncation: e^{-y(cosh U - 1)} e^{|Re ν| U} < e^{-46} relative to e^{-y}
    let mut upper = 1.0f64;
    while y * (upper.cosh() - 1.0) - nu.re.abs() * upper < 46.0 {
        upper *= 1.5;
        if upper > 700.0 {
            break;
        }
    }
    let f = |u: f64| -> Complex64 {
        let w = nu * u;
        // cosh(νu) for complex ν
        let e = w.exp();
        0.5 * (e + 1.0 / e) * (-y * u.cosh()).exp()
    };
    let mut h = 0.1f64;
    let mut prev = Complex64::new(f64::NAN, 0.0);
    for _ in 0..14 {
        let m = (upper / h).ceil() as usize;
        let mut s = 0.5 * f(0.0) + 0.5 * f(m as f64 * h);
        for i in 1..m {
            s += f(i as f64 * h);
        }
        let cur = s * h;
        if prev.re.is_finite() && (cur - prev).norm() <= 1e-13 * cur.norm() {
            return Ok(cur);
        }
        prev = cur;
        h *= 0.5;
    }
    Ok(prev)
}

/// Both sides of the `GL(2)` Whittaker identity: the Bessel closed form
/// `2√y K_{2a_1}(2πy)` against the inverse Mellin transform
/// `√y (1/2πi) ∫ T_2(s)(πy)^{-2s} ds`.
pub fn w2_check(
    a1: Complex64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, Complex64)> {
    if !(y > 0.0) {
        return Err(Error::InvalidParameter("w2_check needs y > 0".into()));
    }
    let lhs = 2.0 * y.sqrt() * bessel_k_exp(2.0 * a1, 2.0 * PI * y)?;
    let c = a1.re.abs() + 1.0;
    let log_pi_y = (PI * y).ln();
    let r = line_integral(cfg, |ts| {
        ts.par_iter()
            .map(|&t| {
                let z = Complex64::new(c, t);
                let g = gamma_product(&[z + a1, z - a1])?;
                Ok(g * (-2.0 * z * log_pi_y).exp())
            })
            .collect::<Result<_>>()
    })?;
    Ok((lhs, y.sqrt() * r.value))
}
