//! The residue polynomial `p_δ(b,c,d; e,f,g)` and its three structural
//! properties: the depth recurrence, the constrained three-term recurrence,
//! and the divisibility under pinned nonpositive-integer arguments.
//!
//! Exact rational arithmetic is the primary verification path here; the
//! floating-point twin exists for the numeric residue formulas. All three
//! properties are polynomial identities, so the rational checks carry no
//! tolerance at all.

use crate::error::{Error, Result};
use crate::gamma::pochhammer_in;
use crate::scalar::{int, Scalar};
use num_complex::Complex64;

/// Implementation cap on the depth parameter.
pub const DELTA_CAP: u32 = 64;

/// Arguments of `p_δ`.
#[derive(Debug, Clone)]
pub struct PDeltaArgs<T> {
    pub delta: u32,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
    pub g: T,
}

impl<T: Scalar> PDeltaArgs<T> {
    pub fn new(delta: u32, b: T, c: T, d: T, e: T, f: T, g: T) -> Result<Self> {
        if delta > DELTA_CAP {
            return Err(Error::InvalidParameter(format!(
                "delta {delta} exceeds implementation cap {DELTA_CAP}"
            )));
        }
        Ok(PDeltaArgs {
            delta,
            b,
            c,
            d,
            e,
            f,
            g,
        })
    }

    fn with(&self, delta: u32, db: i64, dc: i64, dd: i64, de: i64, df: i64, dg: i64) -> Self {
        PDeltaArgs {
            delta,
            b: self.b.clone() + int::<T>(db),
            c: self.c.clone() + int::<T>(dc),
            d: self.d.clone() + int::<T>(dd),
            e: self.e.clone() + int::<T>(de),
            f: self.f.clone() + int::<T>(df),
            g: self.g.clone() + int::<T>(dg),
        }
    }
}

/// `p_δ(b,c,d;e,f,g) = Σ_{κ=0}^{δ} (-1)^κ (b)_κ(c)_κ(d)_κ
/// (e+κ)_{δ-κ}(f+κ)_{δ-κ}(g+κ)_{δ-κ} / (κ! (δ-κ)!)`,
/// a polynomial of total degree ≤ 3δ.
pub fn p_delta<T: Scalar>(args: &PDeltaArgs<T>) -> T {
    let delta = args.delta;
    let mut sum = T::zero();
    let mut kappa_fact = T::one();
    for kappa in 0..=delta {
        if kappa > 0 {
            kappa_fact = kappa_fact * int::<T>(kappa as i64);
        }
        let kt = int::<T>(kappa as i64);
        let rest = delta - kappa;
        let mut rest_fact = T::one();
        for j in 2..=rest as i64 {
            rest_fact = rest_fact * int::<T>(j);
        }
        let num = pochhammer_in(&args.b, kappa)
            * pochhammer_in(&args.c, kappa)
            * pochhammer_in(&args.d, kappa)
            * pochhammer_in(&(args.e.clone() + kt.clone()), rest)
            * pochhammer_in(&(args.f.clone() + kt.clone()), rest)
            * pochhammer_in(&(args.g.clone() + kt.clone()), rest);
        let term = num / (kappa_fact.clone() * rest_fact);
        sum = if kappa % 2 == 0 { sum + term } else { sum - term };
    }
    sum
}

/// Log-space evaluation over `Complex64` for depths where the direct
/// products would overflow.
pub fn p_delta_stable(args: &PDeltaArgs<Complex64>) -> Complex64 {
    if args.delta <= 24 {
        return p_delta(args);
    }
    let delta = args.delta;
    let mut sum = Complex64::new(0.0, 0.0);
    for kappa in 0..=delta {
        let kt = Complex64::new(kappa as f64, 0.0);
        let rest = delta - kappa;
        let mut log_mag = 0.0f64;
        let mut phase = Complex64::new(1.0, 0.0);
        let mut zero = false;
        let mut push = |x: Complex64, times: u32, start: Complex64| {
            let _ = x;
            for j in 0..times {
                let v = start + j as f64;
                if v.norm() == 0.0 {
                    zero = true;
                    return;
                }
                log_mag += v.norm().ln();
                phase *= v / v.norm();
            }
        };
        push(args.b, kappa, args.b);
        push(args.c, kappa, args.c);
        push(args.d, kappa, args.d);
        push(args.e, rest, args.e + kt);
        push(args.f, rest, args.f + kt);
        push(args.g, rest, args.g + kt);
        if zero {
            continue;
        }
        for j in 2..=kappa {
            log_mag -= (j as f64).ln();
        }
        for j in 2..=rest {
            log_mag -= (j as f64).ln();
        }
        let term = phase * log_mag.exp();
        sum += if kappa % 2 == 0 { term } else { -term };
    }
    sum
}

/// Residual of the depth recurrence:
/// `(e+δ)(f+δ)(g-1) p_δ[b,c,d;e,f,g] - bcd p_δ[b+1,c+1,d+1;e+1,f+1,g+1]
///  - (δ+1) p_{δ+1}[b,c,d;e,f,g-1]`,
/// identically zero.
pub fn check_recur_a<T: Scalar>(args: &PDeltaArgs<T>) -> T {
    let d64 = args.delta as i64;
    let lhs1 = (args.e.clone() + int::<T>(d64))
        * (args.f.clone() + int::<T>(d64))
        * (args.g.clone() - T::one())
        * p_delta(args);
    let lhs2 = args.b.clone()
        * args.c.clone()
        * args.d.clone()
        * p_delta(&args.with(args.delta, 1, 1, 1, 1, 1, 1));
    let rhs = int::<T>(d64 + 1) * p_delta(&args.with(args.delta + 1, 0, 0, 0, 0, 0, -1));
    lhs1 - lhs2 - rhs
}

/// Scale of the recurrence terms, for relative float checks.
pub fn recur_a_scale(args: &PDeltaArgs<Complex64>) -> f64 {
    let d64 = args.delta as f64;
    let lhs1 = ((args.e + d64) * (args.f + d64) * (args.g - 1.0) * p_delta(args)).norm();
    let lhs2 = (args.b * args.c * args.d * p_delta(&args.with(args.delta, 1, 1, 1, 1, 1, 1)))
        .norm();
    let rhs = ((d64 + 1.0) * p_delta(&args.with(args.delta + 1, 0, 0, 0, 0, 0, -1))).norm();
    lhs1.max(lhs2).max(rhs).max(1.0)
}

/// The `g` value forced by the constraint `e+f+g+δ-b-c-d = 1`.
pub fn constrained_g<T: Scalar>(delta: u32, b: &T, c: &T, d: &T, e: &T, f: &T) -> T {
    T::one() + b.clone() + c.clone() + d.clone()
        - e.clone()
        - f.clone()
        - int::<T>(delta as i64)
}

/// Residual of the constrained three-term recurrence (Lemma part (b)):
/// requires `e+f+g+δ-b-c-d = 1` and errors otherwise.
pub fn check_recur_b<T: Scalar>(args: &PDeltaArgs<T>) -> Result<T> {
    let constraint = args.e.clone() + args.f.clone() + args.g.clone()
        + int::<T>(args.delta as i64)
        - args.b.clone()
        - args.c.clone()
        - args.d.clone();
    if !(constraint - T::one()).is_small(1e-12) {
        return Err(Error::ConstraintViolation(
            "check_recur_b requires e+f+g+delta-b-c-d = 1".into(),
        ));
    }
    let dp1 = int::<T>(args.delta as i64 + 1);
    let t1 = args.b.clone()
        * (args.f.clone() - args.c.clone())
        * (args.f.clone() - args.d.clone())
        * (args.c.clone() - args.e.clone() - dp1.clone())
        * p_delta(&args.with(args.delta, 1, 0, 0, 0, 1, 0));
    let bracket = (args.e.clone() - args.b.clone() + int::<T>(args.delta as i64))
        * (args.e.clone() - args.c.clone())
        * (args.f.clone() - T::one())
        - args.b.clone() * (args.f.clone() - args.c.clone()) * dp1.clone();
    let t2 = (args.g.clone() - args.b.clone() - T::one()) * bracket * p_delta(args);
    let rhs = dp1
        * (args.e.clone() - args.c.clone())
        * p_delta(&args.with(args.delta + 1, 0, -1, 0, 0, -1, -1));
    Ok(t1 + t2 - rhs)
}

/// Lemma part (c): when one of `b, c, d` equals `-γ` with `0 ≤ γ ≤ δ`,
/// `p_δ` factors as `(e+γ)_{δ-γ}(f+γ)_{δ-γ}(g+γ)_{δ-γ}` times the truncated
/// sum. Verifies the factorization exactly and reports whether it holds.
pub fn check_divisibility<T: Scalar>(args: &PDeltaArgs<T>, gamma_idx: u32) -> Result<bool> {
    if gamma_idx > args.delta {
        return Err(Error::PreconditionViolation(
            "gamma must satisfy 0 <= gamma <= delta".into(),
        ));
    }
    let pin = -int::<T>(gamma_idx as i64);
    if args.b != pin && args.c != pin && args.d != pin {
        return Err(Error::PreconditionViolation(format!(
            "one of b, c, d must equal -{gamma_idx} exactly"
        )));
    }
    let delta = args.delta;
    let gt = int::<T>(gamma_idx as i64);
    let cofactor = pochhammer_in(&(args.e.clone() + gt.clone()), delta - gamma_idx)
        * pochhammer_in(&(args.f.clone() + gt.clone()), delta - gamma_idx)
        * pochhammer_in(&(args.g.clone() + gt.clone()), delta - gamma_idx);
    // truncated sum: κ runs only to γ, pochhammers shortened to (·)_{γ-κ},
    // factorials keep (δ-κ)!
    let mut short = T::zero();
    let mut kappa_fact = T::one();
    for kappa in 0..=gamma_idx {
        if kappa > 0 {
            kappa_fact = kappa_fact * int::<T>(kappa as i64);
        }
        let kt = int::<T>(kappa as i64);
        let mut rest_fact = T::one();
        for j in 2..=(delta - kappa) as i64 {
            rest_fact = rest_fact * int::<T>(j);
        }
        let num = pochhammer_in(&args.b, kappa)
            * pochhammer_in(&args.c, kappa)
            * pochhammer_in(&args.d, kappa)
            * pochhammer_in(&(args.e.clone() + kt.clone()), gamma_idx - kappa)
            * pochhammer_in(&(args.f.clone() + kt.clone()), gamma_idx - kappa)
            * pochhammer_in(&(args.g.clone() + kt.clone()), gamma_idx - kappa);
        let term = num / (kappa_fact.clone() * rest_fact);
        short = if kappa % 2 == 0 { short + term } else { short - term };
    }
    let lhs = p_delta(args);
    let rhs = cofactor * short;
    Ok((lhs - rhs).is_small(1e-12))
}
