//! Peano-kernel representation of the n-th order Taylor-type quadrature
//! remainder, in its point, midpoint and trapezoid forms.
//!
//! For `x` in `[a, b]`:
//!
//! ```text
//! ∫_a^b f = Σ_{k<n} [(b-x)^{k+1} + (-1)^k (x-a)^{k+1}] / (k+1)! · f^(k)(x)
//!           + (-1)^n ∫_a^b K_n(x,t) f^(n)(t) dt
//! ```
//!
//! with `K_n(x,t) = (t-a)^n/n!` on `[a,x]` and `(t-b)^n/n!` on `(x,b]`.
//! Averaging the `x = a` and `x = b` cases gives the trapezoid form with
//! kernel `T_n(t) = [(b-t)^n + (-1)^n (t-a)^n] / (2 n!)`, entering with a
//! plus sign.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{factorial, ExprFunction};
use crate::quadrature::{try_integrate_with, Interval, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", content = "x", rename_all = "lowercase")]
pub enum RuleForm {
    #[serde(rename = "point")]
    PointX(f64),
    Midpoint,
    Trapezoid,
}

impl RuleForm {
    pub fn validate(&self, iv: &Interval) -> Result<()> {
        match self {
            RuleForm::PointX(x) => iv.check_point(*x),
            _ => Ok(()),
        }
    }

    /// The rule point, if the form has a single one.
    pub fn point(&self, iv: &Interval) -> Option<f64> {
        match self {
            RuleForm::PointX(x) => Some(*x),
            RuleForm::Midpoint => Some(iv.midpoint()),
            RuleForm::Trapezoid => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RuleForm::PointX(_) => "point",
            RuleForm::Midpoint => "midpoint",
            RuleForm::Trapezoid => "trapezoid",
        }
    }
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ParamOutOfDomain("order n must be at least 1".into()));
    }
    Ok(())
}

/// `K_n(x, t)`; `t = x` belongs to the left branch.
pub fn kernel_k(n: usize, iv: &Interval, x: f64, t: f64) -> Result<f64> {
    check_order(n)?;
    iv.check_point(x)?;
    iv.check_point(t)?;
    let base = if t <= x { t - iv.a() } else { t - iv.b() };
    Ok(base.powi(n as i32) / factorial(n))
}

/// `M_n(t) = K_n((a+b)/2, t)`.
pub fn kernel_m(n: usize, iv: &Interval, t: f64) -> Result<f64> {
    kernel_k(n, iv, iv.midpoint(), t)
}

/// `T_n(t) = [(b-t)^n + (-1)^n (t-a)^n] / (2 n!)`.
pub fn kernel_t(n: usize, iv: &Interval, t: f64) -> Result<f64> {
    check_order(n)?;
    iv.check_point(t)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let num = (iv.b() - t).powi(n as i32) + sign * (t - iv.a()).powi(n as i32);
    Ok(num / (2.0 * factorial(n)))
}

/// Sum and sum of absolute terms, the latter sizing the rounding error.
pub(crate) fn taylor_sum_parts(
    f: &ExprFunction,
    n: usize,
    iv: &Interval,
    form: RuleForm,
) -> Result<(f64, f64)> {
    check_order(n)?;
    form.validate(iv)?;
    let (a, b) = (iv.a(), iv.b());
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    match form {
        RuleForm::PointX(_) | RuleForm::Midpoint => {
            let x = form.point(iv).expect("point forms carry a point");
            let jet = f.taylor(x, n - 1)?;
            for (k, c) in jet.coefficients.iter().enumerate() {
                let e = k as i32 + 1;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                // (b-x)^{k+1}/(k+1)! · f^(k)(x) = (b-x)^{k+1}/(k+1) · c_k
                let weight = ((b - x).powi(e) + sign * (x - a).powi(e)) / e as f64;
                let term = weight * c;
                sum += term;
                abs_sum += term.abs();
            }
        }
        RuleForm::Trapezoid => {
            let ja = f.taylor(a, n - 1)?;
            let jb = f.taylor(b, n - 1)?;
            let h = b - a;
            for k in 0..n {
                let e = k as i32 + 1;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let term =
                    h.powi(e) / e as f64 * 0.5 * (ja.coefficients[k] + sign * jb.coefficients[k]);
                sum += term;
                abs_sum += term.abs();
            }
        }
    }
    Ok((sum, abs_sum))
}

/// The finite Taylor-type sum of the chosen rule form.
pub fn taylor_sum(f: &ExprFunction, n: usize, iv: &Interval, form: RuleForm) -> Result<f64> {
    Ok(taylor_sum_parts(f, n, iv, form)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub integral: f64,
    pub taylor_sum: f64,
    /// `∫ K_n f^(n)` (point forms) or `∫ T_n f^(n)` (trapezoid).
    pub remainder_integral: f64,
    pub residual: f64,
    /// Sum of the quadrature error estimates of both integrals.
    pub quad_error: f64,
    pub tol: f64,
    pub holds: bool,
}

/// Kernel-weighted remainder integral; the point-form kernel is split at `x`.
pub fn remainder_integral(
    f: &ExprFunction,
    n: usize,
    iv: &Interval,
    form: RuleForm,
    cfg: &QuadConfig,
) -> Result<(f64, f64)> {
    check_order(n)?;
    form.validate(iv)?;
    let nf = factorial(n);
    let ni = n as i32;
    let fnth = |t: f64| f.deriv(t, n);
    match form.point(iv) {
        Some(x) => {
            let (a, b) = (iv.a(), iv.b());
            let mut value = 0.0;
            let mut err = 0.0;
            if x > a {
                let left = Interval::new(a, x)?;
                let r = try_integrate_with(|t| Ok((t - a).powi(ni) / nf * fnth(t)?), left, cfg)?;
                value += r.value;
                err += r.err_estimate;
            }
            if x < b {
                let right = Interval::new(x, b)?;
                let r = try_integrate_with(|t| Ok((t - b).powi(ni) / nf * fnth(t)?), right, cfg)?;
                value += r.value;
                err += r.err_estimate;
            }
            Ok((value, err))
        }
        None => {
            let r = try_integrate_with(|t| Ok(kernel_t(n, iv, t)? * fnth(t)?), *iv, cfg)?;
            Ok((r.value, r.err_estimate))
        }
    }
}

/// Check the kernel identity with the quadrature oracle on both sides.
pub fn verify_identity(
    f: &ExprFunction,
    n: usize,
    iv: &Interval,
    form: RuleForm,
    tol: f64,
) -> Result<IdentityReport> {
    verify_identity_with(f, n, iv, form, tol, &QuadConfig::default())
}

pub fn verify_identity_with(
    f: &ExprFunction,
    n: usize,
    iv: &Interval,
    form: RuleForm,
    tol: f64,
    cfg: &QuadConfig,
) -> Result<IdentityReport> {
    let sum = taylor_sum(f, n, iv, form)?;
    let integral = try_integrate_with(|t| f.eval(t), *iv, cfg)?;
    let (rem, rem_err) = remainder_integral(f, n, iv, form, cfg)?;
    let signed = match form {
        RuleForm::Trapezoid => rem,
        _ if n.is_multiple_of(2) => rem,
        _ => -rem,
    };
    let residual = (integral.value - sum - signed).abs();
    let quad_error = integral.err_estimate + rem_err;
    Ok(IdentityReport {
        integral: integral.value,
        taylor_sum: sum,
        remainder_integral: rem,
        residual,
        quad_error,
        tol,
        holds: residual <= tol + quad_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn kernel_k_examples() {
        let iv = unit();
        assert_eq!(kernel_k(1, &iv, 0.5, 0.25).unwrap(), 0.25);
        for n in 1..6 {
            assert_eq!(kernel_k(n, &iv, 0.5, 0.0).unwrap(), 0.0);
        }
        assert_eq!(kernel_k(2, &iv, 0.5, 0.75).unwrap(), 0.03125);
        // t = x takes the left branch
        assert_eq!(kernel_k(1, &iv, 0.5, 0.5).unwrap(), 0.5);
        assert!(kernel_k(0, &iv, 0.5, 0.5).is_err());
        assert!(kernel_k(1, &iv, 1.5, 0.5).is_err());
    }

    #[test]
    fn kernel_at_right_endpoint_is_single_branch() {
        let iv = Interval::new(-1.0, 2.0).unwrap();
        for n in 1..5 {
            for t in iv.grid(17) {
                let want = (t + 1.0).powi(n as i32) / factorial(n);
                assert_eq!(kernel_k(n, &iv, 2.0, t).unwrap(), want);
            }
        }
    }

    #[test]
    fn kernel_t_examples() {
        let iv = unit();
        assert_eq!(kernel_t(1, &iv, 0.5).unwrap(), 0.0);
        assert_eq!(kernel_t(2, &iv, 0.0).unwrap(), 0.25);
        assert_eq!(kernel_t(2, &iv, 1.0).unwrap(), 0.25);
    }

    #[test]
    fn taylor_sum_examples() {
        let f = parse("t^2").unwrap();
        let iv = unit();
        assert_eq!(taylor_sum(&f, 2, &iv, RuleForm::PointX(0.5)).unwrap(), 0.25);
        assert_eq!(taylor_sum(&f, 2, &iv, RuleForm::Trapezoid).unwrap(), 0.0);
        let c = parse("3.5").unwrap();
        let iv2 = Interval::new(-1.0, 3.0).unwrap();
        for n in 1..5 {
            for form in [
                RuleForm::PointX(0.2),
                RuleForm::Midpoint,
                RuleForm::Trapezoid,
            ] {
                assert_eq!(taylor_sum(&c, n, &iv2, form).unwrap(), 14.0);
            }
        }
    }

    #[test]
    fn midpoint_is_point_form_at_center() {
        let f = parse("exp(t) * sin(t)").unwrap();
        let iv = Interval::new(-0.3, 1.7).unwrap();
        for n in 1..7 {
            assert_eq!(
                taylor_sum(&f, n, &iv, RuleForm::Midpoint).unwrap(),
                taylor_sum(&f, n, &iv, RuleForm::PointX(iv.midpoint())).unwrap()
            );
        }
    }

    #[test]
    fn identity_examples() {
        let iv = unit();
        let e = parse("exp(t)").unwrap();
        let r = verify_identity(&e, 3, &iv, RuleForm::PointX(0.3), 1e-9).unwrap();
        assert!(r.holds && r.residual <= 1e-9, "{r:?}");

        let f = parse("t^2").unwrap();
        let r = verify_identity(&f, 2, &iv, RuleForm::PointX(0.5), 1e-11).unwrap();
        assert!((r.integral - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(r.taylor_sum, 0.25);
        assert!((r.remainder_integral - 1.0 / 12.0).abs() < 1e-14);
        assert!(r.residual <= 1e-11);

        // degree n-1 polynomial: remainder vanishes
        let p = parse("1 + 2*t - t*t").unwrap();
        let r = verify_identity(&p, 3, &iv, RuleForm::PointX(0.7), 1e-12).unwrap();
        assert_eq!(r.remainder_integral, 0.0);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn trapezoid_remainder_enters_with_plus_sign() {
        let f = parse("t^2").unwrap();
        let r = verify_identity(&f, 2, &unit(), RuleForm::Trapezoid, 1e-11).unwrap();
        assert!((r.remainder_integral - 1.0 / 3.0).abs() < 1e-14);
        assert!(r.holds);
        // odd n: the trapezoid remainder keeps its sign while the point form flips
        let g = parse("exp(t)").unwrap();
        let r = verify_identity(&g, 1, &unit(), RuleForm::Trapezoid, 1e-10).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.remainder_integral < 0.0);
    }
}
