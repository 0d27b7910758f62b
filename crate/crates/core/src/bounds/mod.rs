//! Right-hand sides of the Ostrowski-type bound families and their
//! evaluation against the quadrature oracle.
//!
//! Every family bounds `|∫_a^b f - S_n(x)|`, where `S_n` is the Taylor-type
//! sum from [`crate::identity`], in terms of `|f^(n)(a)|` and `|f^(n)(b)|`
//! under a convexity hypothesis on `|f^(n)|` (or `|f^(n)|^q`). The classic
//! first-order Ostrowski bound is included as a baseline.
//!
//! The printed Hölder-type formulas do not agree with the steps of their own
//! derivation, so those families come in two variants: [`Variant::Corrected`]
//! (derivation carried through, the default) and [`Variant::PaperStated`]
//! (the formulas as printed, kept to document the discrepancy).

pub mod formulas;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

pub use formulas::{Corollary, Exponents};

use crate::error::{Error, Result};
use crate::expr::ExprFunction;
use crate::identity::{check_order, taylor_sum_parts, RuleForm};
use crate::quadrature::{
    convexity_of_samples, try_integrate_with, ConvexityVerdict, Interval, QuadConfig, QuadResult,
    CONVEXITY_GRID,
};

/// Absolute slack allowed on top of the oracle's error estimate.
pub const NUMERIC_TOL: f64 = 1e-10;

/// Bound families, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "classic")]
    ClassicOstrowski,
    #[serde(rename = "convex-direct")]
    ConvexDirect,
    #[serde(rename = "holder")]
    Holder,
    #[serde(rename = "alt-holder")]
    AltHolder,
    #[serde(rename = "power-mean")]
    PowerMean,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::ClassicOstrowski,
        Family::ConvexDirect,
        Family::Holder,
        Family::AltHolder,
        Family::PowerMean,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Family::ClassicOstrowski => "classic",
            Family::ConvexDirect => "convex-direct",
            Family::Holder => "holder",
            Family::AltHolder => "alt-holder",
            Family::PowerMean => "power-mean",
        }
    }

    /// Whether the family has distinct corrected and printed variants.
    pub fn has_variants(&self) -> bool {
        matches!(self, Family::Holder | Family::AltHolder)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "classic" | "classic-ostrowski" => Family::ClassicOstrowski,
            "convex-direct" | "convex" => Family::ConvexDirect,
            "holder" => Family::Holder,
            "alt-holder" => Family::AltHolder,
            "power-mean" => Family::PowerMean,
            other => return Err(Error::ParamOutOfDomain(format!("unknown family '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub enum Variant {
    #[default]
    #[serde(rename = "corrected")]
    Corrected,
    #[serde(rename = "paper")]
    PaperStated,
}

impl Variant {
    pub fn label(&self) -> &'static str {
        match self {
            Variant::Corrected => "corrected",
            Variant::PaperStated => "paper",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(Variant::Corrected),
            "paper" | "paper-stated" => Ok(Variant::PaperStated),
            other => Err(Error::ParamOutOfDomain(format!(
                "unknown variant '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRequest {
    pub family: Family,
    pub n: usize,
    pub form: RuleForm,
    /// Hölder exponent, `p > 1` (Holder and AltHolder).
    pub p: Option<f64>,
    /// Power-mean exponent, `q >= 1` (PowerMean).
    pub q: Option<f64>,
    pub variant: Variant,
}

impl BoundRequest {
    pub fn classic(form: RuleForm) -> Self {
        Self::plain(Family::ClassicOstrowski, 1, form)
    }

    pub fn convex_direct(n: usize, form: RuleForm) -> Self {
        Self::plain(Family::ConvexDirect, n, form)
    }

    pub fn holder(n: usize, form: RuleForm, p: f64, variant: Variant) -> Self {
        Self {
            p: Some(p),
            variant,
            ..Self::plain(Family::Holder, n, form)
        }
    }

    pub fn alt_holder(n: usize, form: RuleForm, p: f64, variant: Variant) -> Self {
        Self {
            p: Some(p),
            variant,
            ..Self::plain(Family::AltHolder, n, form)
        }
    }

    pub fn power_mean(n: usize, form: RuleForm, q: f64) -> Self {
        Self {
            q: Some(q),
            ..Self::plain(Family::PowerMean, n, form)
        }
    }

    fn plain(family: Family, n: usize, form: RuleForm) -> Self {
        Self {
            family,
            n,
            form,
            p: None,
            q: None,
            variant: Variant::Corrected,
        }
    }

    /// Check the family's parameter constraints and resolve `(p, q)`.
    pub fn exponents(&self) -> Result<Exponents> {
        check_order(self.n)?;
        match self.family {
            Family::ClassicOstrowski => {
                if self.n != 1 {
                    return Err(Error::ParamOutOfDomain(format!(
                        "the classic Ostrowski bound is first order; n = {} given",
                        self.n
                    )));
                }
                Ok(Exponents::none())
            }
            Family::ConvexDirect => Ok(Exponents::none()),
            Family::PowerMean => {
                let q = self
                    .q
                    .ok_or_else(|| Error::ParamOutOfDomain("power-mean needs q".into()))?;
                check_power_mean_q(q)?;
                Ok(Exponents::power_mean(q))
            }
            Family::Holder => {
                let p = self
                    .p
                    .ok_or_else(|| Error::ParamOutOfDomain("holder needs p".into()))?;
                check_holder_p(p)?;
                Ok(Exponents::holder(p))
            }
            Family::AltHolder => {
                let p = self
                    .p
                    .ok_or_else(|| Error::ParamOutOfDomain("alt-holder needs p".into()))?;
                check_alt_holder_p(self.n, p)?;
                Ok(Exponents::holder(p))
            }
        }
    }
}

fn check_holder_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::ParamOutOfDomain(format!("need p > 1, got p = {p}")));
    }
    Ok(())
}

fn check_power_mean_q(q: f64) -> Result<()> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::ParamOutOfDomain(format!("need q >= 1, got q = {q}")));
    }
    Ok(())
}

/// Upper end of the admissible `p` range of the alternative Hölder bound.
pub fn alt_holder_p_limit(n: usize) -> f64 {
    let m = n as f64 + 1.0;
    0.5 * (m + (m * m + 4.0).sqrt())
}

fn check_alt_holder_p(n: usize, p: f64) -> Result<()> {
    check_holder_p(p)?;
    let q = p / (p - 1.0);
    let nf = n as f64;
    let margin = nf * q + q - p - 1.0;
    if margin.is_nan() || margin <= 0.0 {
        return Err(Error::ParamOutOfDomain(format!(
            "alt-holder needs nq + q - p - 1 > 0 (p < {:.6} for n = {n}), got p = {p}",
            alt_holder_p_limit(n)
        )));
    }
    Ok(())
}

fn end_values(f: &ExprFunction, n: usize, iv: &Interval) -> Result<(f64, f64)> {
    Ok((f.deriv(iv.a(), n)?.abs(), f.deriv(iv.b(), n)?.abs()))
}

fn grid_sup_abs_derivative(f: &ExprFunction, iv: &Interval) -> Result<f64> {
    iv.grid(CONVEXITY_GRID)
        .into_iter()
        .try_fold(0.0f64, |m, t| Ok(m.max(f.deriv(t, 1)?.abs())))
}

/// Classic Ostrowski bound on `|f(x) - mean(f)|`, with `sup|f'|` taken as
/// the maximum over a 513-point grid (not rigorous in general).
pub fn bound_classic(f: &ExprFunction, iv: &Interval, x: f64) -> Result<f64> {
    iv.check_point(x)?;
    let m = grid_sup_abs_derivative(f, iv)?;
    Ok(formulas::classic(iv, x, m))
}

pub fn bound_convex_direct(f: &ExprFunction, n: usize, iv: &Interval, x: f64) -> Result<f64> {
    check_order(n)?;
    iv.check_point(x)?;
    let (ea, eb) = end_values(f, n, iv)?;
    Ok(formulas::convex_direct(n, iv, x, ea, eb))
}

pub fn bound_holder(
    f: &ExprFunction,
    n: usize,
    iv: &Interval,
    x: f64,
    p: f64,
    variant: Variant,
) -> Result<f64> {
    check_order(n)?;
    check_holder_p(p)?;
    iv.check_point(x)?;
    let (ea, eb) = end_values(f, n, iv)?;
    Ok(match variant {
        Variant::Corrected => formulas::holder_corrected(n, iv, x, p, ea, eb),
        Variant::PaperStated => formulas::holder_paper(n, iv, x, p, ea, eb),
    })
}

pub fn bound_alt_holder(
    f: &ExprFunction,
    n: usize,
    iv: &Interval,
    x: f64,
    p: f64,
    variant: Variant,
) -> Result<f64> {
    check_order(n)?;
    check_alt_holder_p(n, p)?;
    iv.check_point(x)?;
    let (ea, eb) = end_values(f, n, iv)?;
    Ok(match variant {
        Variant::Corrected => formulas::alt_holder_corrected(n, iv, x, p, ea, eb),
        Variant::PaperStated => formulas::alt_holder_paper(n, iv, x, p, ea, eb),
    })
}

pub fn bound_power_mean(f: &ExprFunction, n: usize, iv: &Interval, x: f64, q: f64) -> Result<f64> {
    check_order(n)?;
    check_power_mean_q(q)?;
    iv.check_point(x)?;
    let (ea, eb) = end_values(f, n, iv)?;
    Ok(formulas::power_mean(n, iv, x, q, ea, eb))
}

/// Corollary closed form of a family at the left, right, midpoint or
/// trapezoid rule. `req.form` is ignored; `req.family`, `req.n`, `req.p`,
/// `req.q` and `req.variant` select the formula.
pub fn corollary_closed_form(
    f: &ExprFunction,
    req: &BoundRequest,
    iv: &Interval,
    which: Corollary,
) -> Result<f64> {
    let ex = req.exponents()?;
    let (ea, eb) = match req.family {
        Family::ClassicOstrowski => {
            let m = grid_sup_abs_derivative(f, iv)?;
            (m, m)
        }
        _ => end_values(f, req.n, iv)?,
    };
    Ok(formulas::corollary(
        req.family,
        req.variant,
        req.n,
        iv,
        which,
        ex,
        ea,
        eb,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    /// `|∫f - S_n|` from the oracle.
    pub lhs: f64,
    /// Oracle error estimate plus a rounding allowance for `S_n`.
    pub lhs_err: f64,
    pub rhs: f64,
    pub slack: f64,
    pub convexity: ConvexityVerdict,
    pub valid: bool,
}

impl BoundReport {
    pub fn bound_holds(&self) -> bool {
        self.slack >= -(self.lhs_err + NUMERIC_TOL)
    }
}

/// Evaluates bound requests for one function on one interval, caching the
/// integral and the derivative samples used by the convexity gate.
///
/// All caches are write-once, so a shared `&Evaluator` can serve requests
/// from several threads and every answer is independent of call order.
pub struct Evaluator<'f> {
    f: &'f ExprFunction,
    iv: Interval,
    quad: QuadConfig,
    integral: OnceLock<Result<QuadResult>>,
    sup_abs_d1: OnceLock<Result<f64>>,
    samples: Vec<OnceLock<Result<Vec<f64>>>>,
}

impl<'f> Evaluator<'f> {
    pub fn new(f: &'f ExprFunction, iv: Interval) -> Self {
        Self::with_quadrature(f, iv, QuadConfig::default())
    }

    pub fn with_quadrature(f: &'f ExprFunction, iv: Interval, quad: QuadConfig) -> Self {
        let samples = (0..=f.order_cap()).map(|_| OnceLock::new()).collect();
        Self {
            f,
            iv,
            quad,
            integral: OnceLock::new(),
            sup_abs_d1: OnceLock::new(),
            samples,
        }
    }

    pub fn function(&self) -> &ExprFunction {
        self.f
    }

    pub fn interval(&self) -> Interval {
        self.iv
    }

    pub fn integral(&self) -> Result<QuadResult> {
        self.integral
            .get_or_init(|| try_integrate_with(|t| self.f.eval(t), self.iv, &self.quad))
            .clone()
    }

    /// `|f^(n)|` on the convexity grid.
    fn abs_derivative_samples(&self, n: usize) -> Result<&Vec<f64>> {
        let cell = self.samples.get(n).ok_or(Error::OrderOverflow {
            requested: n,
            cap: self.f.order_cap(),
        })?;
        cell.get_or_init(|| {
            self.iv
                .grid(CONVEXITY_GRID)
                .into_iter()
                .map(|t| Ok(self.f.deriv(t, n)?.abs()))
                .collect()
        })
        .as_ref()
        .map_err(Clone::clone)
    }

    fn sup_abs_first_derivative(&self) -> Result<f64> {
        self.sup_abs_d1
            .get_or_init(|| {
                Ok(self
                    .abs_derivative_samples(1)?
                    .iter()
                    .fold(0.0f64, |m, v| m.max(*v)))
            })
            .clone()
    }

    /// Convexity of `|f^(n)|^q` on the 513-point grid.
    pub fn convexity(&self, n: usize, q: f64) -> Result<ConvexityVerdict> {
        let samples = self.abs_derivative_samples(n)?;
        Ok(if q == 1.0 {
            convexity_of_samples(samples)
        } else {
            let powered: Vec<f64> = samples.iter().map(|v| v.powf(q)).collect();
            convexity_of_samples(&powered)
        })
    }

    /// Right-hand side for `req` (classic: on the `|∫f - (b-a)f(x)|` scale).
    pub fn rhs(&self, req: &BoundRequest) -> Result<f64> {
        let ex = req.exponents()?;
        req.form.validate(&self.iv)?;
        let iv = &self.iv;
        let (ea, eb) = match req.family {
            Family::ClassicOstrowski => {
                let m = self.sup_abs_first_derivative()?;
                (m, m)
            }
            _ => end_values(self.f, req.n, iv)?,
        };
        let at = |x: f64| formulas::general(req.family, req.variant, req.n, iv, x, ex, ea, eb);
        let rhs = match req.form.point(iv) {
            Some(x) => at(x),
            None => match req.variant {
                Variant::PaperStated if req.family.has_variants() => formulas::corollary(
                    req.family,
                    req.variant,
                    req.n,
                    iv,
                    Corollary::Trapezoid,
                    ex,
                    ea,
                    eb,
                ),
                _ => 0.5 * (at(iv.a()) + at(iv.b())),
            },
        };
        Ok(match req.family {
            Family::ClassicOstrowski => rhs * iv.length(),
            _ => rhs,
        })
    }

    pub fn evaluate(&self, req: &BoundRequest) -> Result<BoundReport> {
        let ex = req.exponents()?;
        req.form.validate(&self.iv)?;
        let integral = self.integral()?;
        let (sum, abs_sum) = taylor_sum_parts(self.f, req.n, &self.iv, req.form)?;
        let lhs = (integral.value - sum).abs();
        let lhs_err = integral.err_estimate + 8.0 * f64::EPSILON * (integral.value.abs() + abs_sum);
        let rhs = self.rhs(req)?;
        let convexity = match req.family {
            Family::ClassicOstrowski => ConvexityVerdict::not_required(),
            Family::ConvexDirect => self.convexity(req.n, 1.0)?,
            _ => self.convexity(req.n, ex.q)?,
        };
        let slack = rhs - lhs;
        let valid = convexity.convex && slack >= -(lhs_err + NUMERIC_TOL);
        Ok(BoundReport {
            lhs,
            lhs_err,
            rhs,
            slack,
            convexity,
            valid,
        })
    }
}

/// One-shot evaluation of a single request.
pub fn evaluate(req: &BoundRequest, f: &ExprFunction, iv: &Interval) -> Result<BoundReport> {
    check_order(req.n)?;
    Evaluator::new(f, *iv).evaluate(req)
}
