//! Two-argument means and the mean inequalities obtained by feeding
//! `f(t) = t^n` into the first-order bounds.
//!
//! `L_n^n(a, b)` is the average of `t^n` over `[a, b]`. The two inequality
//! right-hand sides are evaluated exactly as written, so any disagreement
//! with the exact means shows up in [`check_propositions`] rather than being
//! patched here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{check_convexity, ConvexityVerdict, Interval};

/// Two distinct positive reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanPair {
    alpha: f64,
    beta: f64,
}

impl MeanPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0) {
            return Err(Error::Domain(format!(
                "means need positive finite arguments, got ({alpha}, {beta})"
            )));
        }
        if alpha == beta {
            return Err(Error::EqualArguments);
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The pair as an ordered interval `[min, max]`.
    pub fn interval(&self) -> Interval {
        Interval::new(self.alpha.min(self.beta), self.alpha.max(self.beta))
            .expect("distinct finite endpoints")
    }
}

pub fn arithmetic_mean(pair: &MeanPair) -> f64 {
    0.5 * (pair.alpha + pair.beta)
}

pub fn logarithmic_mean(pair: &MeanPair) -> Result<f64> {
    let (a, b) = (pair.alpha, pair.beta);
    let d = a.ln() - b.ln();
    if d == 0.0 {
        return Err(Error::EqualArguments);
    }
    Ok((a - b) / d)
}

/// `L_n^n(a, b) = (b^(n+1) - a^(n+1)) / ((n+1)(b-a))`, the mean of `t^n`.
pub fn generalized_log_mean_pow(pair: &MeanPair, n: i32) -> Result<f64> {
    check_exponent(n)?;
    let iv = pair.interval();
    let (a, b) = (iv.a(), iv.b());
    let m = n + 1;
    Ok((b.powi(m) - a.powi(m)) / (m as f64 * (b - a)))
}

fn check_exponent(n: i32) -> Result<()> {
    // n = -1 is the logarithmic mean; n = 0 is excluded by |n| >= 1
    if n == -1 || n == 0 {
        return Err(Error::UnsupportedOrder(n));
    }
    Ok(())
}

fn check_rule_point(iv: &Interval, x: f64) -> Result<()> {
    iv.check_point(x)
}

/// Right-hand side of the convex-derivative mean inequality for `|L_n^n - x^n|`.
pub fn proposition1_bound(pair: &MeanPair, n: i32, x: f64) -> Result<f64> {
    check_exponent(n)?;
    let iv = pair.interval();
    check_rule_point(&iv, x)?;
    let (a, b) = (iv.a(), iv.b());
    let (u, v) = (x - a, b - x);
    let left = (u * u * (3.0 * b - a - 2.0 * x) + 2.0 * v.powi(3)) * a.powi(n - 1) / 6.0;
    let right = (v * v * (b - 3.0 * a + 2.0 * x) + 2.0 * u.powi(3)) * b.powi(n - 1) / 6.0;
    Ok(n.unsigned_abs() as f64 / (b - a).powi(2) * (left + right))
}

/// Right-hand side of the power-mean inequality for `|L_n^n - x^n|`, `q >= 1`.
pub fn proposition2_bound(pair: &MeanPair, n: i32, x: f64, q: f64) -> Result<f64> {
    check_exponent(n)?;
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::ParamOutOfDomain(format!("need q >= 1, got q = {q}")));
    }
    let iv = pair.interval();
    check_rule_point(&iv, x)?;
    let (a, b) = (iv.a(), iv.b());
    let (u, v) = (x - a, b - x);
    let fa = a.powi(n - 1).powf(q);
    let fb = b.powi(n - 1).powf(q);
    let inner_left = ((3.0 * b - 2.0 * x - a) * fa + 2.0 * u * fb) / 3.0;
    let inner_right = (2.0 * v * fa + (b + 2.0 * x - 3.0 * a) * fb) / 3.0;
    let root = |w: f64| if w == 0.0 { 0.0 } else { w.powf(1.0 / q) };
    let braces = u * u * root(inner_left) + v * v * root(inner_right);
    Ok(n.unsigned_abs() as f64 / (2.0 * (b - a).powf(1.0 / q)) * braces)
}

/// Which mean inequality a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Proposition {
    ConvexDerivative,
    PowerMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropositionCheck {
    pub proposition: Proposition,
    pub n: i32,
    pub x: f64,
    /// Power-mean exponent; `None` for the convex-derivative inequality.
    pub q: Option<f64>,
    /// `|L_n^n(a, b) - x^n|`.
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Convexity of `|d/dt t^n| = |n| t^(n-1)` on the pair's interval.
pub fn power_derivative_convexity(pair: &MeanPair, n: i32) -> Result<ConvexityVerdict> {
    check_exponent(n)?;
    let k = n.unsigned_abs() as f64;
    check_convexity(|t: f64| k * t.powi(n - 1), pair.interval())
}

/// Evaluates both inequalities at `x_count` equispaced points (power-mean
/// form once per entry of `q_values`). A check `holds` when
/// `rhs >= lhs - tol * (1 + lhs)`.
pub fn check_propositions(
    pair: &MeanPair,
    n: i32,
    q_values: &[f64],
    x_count: usize,
    tol: f64,
) -> Result<Vec<PropositionCheck>> {
    let mean = generalized_log_mean_pow(pair, n)?;
    let iv = pair.interval();
    let mut out = Vec::with_capacity(x_count * (1 + q_values.len()));
    for x in iv.grid(x_count) {
        let lhs = (mean - x.powi(n)).abs();
        let slackness = tol * (1.0 + lhs);
        let rhs = proposition1_bound(pair, n, x)?;
        out.push(PropositionCheck {
            proposition: Proposition::ConvexDerivative,
            n,
            x,
            q: None,
            lhs,
            rhs,
            holds: rhs >= lhs - slackness,
        });
        for &q in q_values {
            let rhs = proposition2_bound(pair, n, x, q)?;
            out.push(PropositionCheck {
                proposition: Proposition::PowerMean,
                n,
                x,
                q: Some(q),
                lhs,
                rhs,
                holds: rhs >= lhs - slackness,
            });
        }
    }
    Ok(out)
}
