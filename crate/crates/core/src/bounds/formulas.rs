//! Closed-form right-hand sides, written in terms of the endpoint values
//! `ea = |f^(n)(a)|` and `eb = |f^(n)(b)|` only.
//!
//! Notation used throughout: `len = b - a`, `u = x - a`, `v = b - x`,
//! `fa = ea^q`, `fb = eb^q`.
//!
//! Zero bases are mapped to an exact zero before any fractional power
//! ([`pow0`]), so `x = a` and `x = b` never go through `0^0` or `0 * inf`.

use crate::expr::factorial;
use crate::quadrature::Interval;

use super::{Family, Variant};

/// `base^e` with `0^e = 0` for every exponent.
pub(crate) fn pow0(base: f64, e: f64) -> f64 {
    if base == 0.0 {
        0.0
    } else {
        base.powf(e)
    }
}

fn powi(base: f64, e: usize) -> f64 {
    base.powi(e as i32)
}

/// Which corollary of a bound family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Corollary {
    Midpoint,
    Left,
    Right,
    Trapezoid,
}

/// Exponent parameters after validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    /// Hölder exponent (Hölder families only, otherwise NaN).
    pub p: f64,
    /// Conjugate / power-mean exponent; 1 for families without one.
    pub q: f64,
}

impl Exponents {
    pub fn none() -> Self {
        Self {
            p: f64::NAN,
            q: 1.0,
        }
    }

    pub fn holder(p: f64) -> Self {
        Self {
            p,
            q: p / (p - 1.0),
        }
    }

    pub fn power_mean(q: f64) -> Self {
        Self { p: f64::NAN, q }
    }

    fn inv_q(&self) -> f64 {
        1.0 / self.q
    }
}

struct Geom {
    len: f64,
    u: f64,
    v: f64,
}

impl Geom {
    fn new(iv: &Interval, x: f64) -> Self {
        Self {
            len: iv.length(),
            u: x - iv.a(),
            v: iv.b() - x,
        }
    }
}

/// Classic first-order bound on `|f(x) - mean(f)|` with `sup|f'| <= m`.
pub fn classic(iv: &Interval, x: f64, m: f64) -> f64 {
    let len = iv.length();
    let d = x - iv.midpoint();
    len * m * (0.25 + d * d / (len * len))
}

pub fn convex_direct(n: usize, iv: &Interval, x: f64, ea: f64, eb: f64) -> f64 {
    let Geom { len, u, v } = Geom::new(iv, x);
    let n1 = n as f64 + 1.0;
    let n2 = n as f64 + 2.0;
    let coef_a = powi(u, n + 1) * (n2 * v + u) / (n1 * n2) + powi(v, n + 2) / n2;
    let coef_b = powi(v, n + 1) * (n2 * u + v) / (n1 * n2) + powi(u, n + 2) / n2;
    (ea * coef_a + eb * coef_b) / (factorial(n) * len)
}

/// Hölder bound completed from the proof's own intermediate steps.
pub fn holder_corrected(n: usize, iv: &Interval, x: f64, p: f64, ea: f64, eb: f64) -> f64 {
    let ex = Exponents::holder(p);
    let (q, iq) = (ex.q, ex.inv_q());
    let Geom { len, u, v } = Geom::new(iv, x);
    let (a, b) = (iv.a(), iv.b());
    let (fa, fb) = (ea.powf(q), eb.powf(q));
    let np1 = n as f64 * p + 1.0;
    let left = pow0(pow0(u, np1) / np1, 1.0 / p)
        * pow0(
            u * (2.0 * b - a - x) / (2.0 * len) * fa + u * u / (2.0 * len) * fb,
            iq,
        );
    let right = pow0(pow0(v, np1) / np1, 1.0 / p)
        * pow0(
            v * v / (2.0 * len) * fa + v * (b + x - 2.0 * a) / (2.0 * len) * fb,
            iq,
        );
    (left + right) / factorial(n)
}

/// Hölder bound exactly as printed (exponent `np+1+1/q`, divisor `np+1`).
pub fn holder_paper(n: usize, iv: &Interval, x: f64, p: f64, ea: f64, eb: f64) -> f64 {
    let ex = Exponents::holder(p);
    let (q, iq) = (ex.q, ex.inv_q());
    let Geom { len, u, v } = Geom::new(iv, x);
    let (a, b) = (iv.a(), iv.b());
    let (fa, fb) = (ea.powf(q), eb.powf(q));
    let np1 = n as f64 * p + 1.0;
    let left = pow0(u, np1 + iq) / np1 * pow0((2.0 * b - a - x) / 2.0 * fa + u / 2.0 * fb, iq);
    let right = pow0(v, np1 + iq) / np1 * pow0(v / 2.0 * fa + (b + x - 2.0 * a) / 2.0 * fb, iq);
    (left + right) / (factorial(n) * len.powf(iq))
}

/// `((q-1)/(nq+q-p-1))^(1-1/q)`.
fn alt_holder_constant(n: usize, p: f64, q: f64) -> f64 {
    ((q - 1.0) / (n as f64 * q + q - p - 1.0)).powf(1.0 - 1.0 / q)
}

pub fn alt_holder_corrected(n: usize, iv: &Interval, x: f64, p: f64, ea: f64, eb: f64) -> f64 {
    let ex = Exponents::holder(p);
    let (q, iq) = (ex.q, ex.inv_q());
    let Geom { len, u, v } = Geom::new(iv, x);
    let (fa, fb) = (ea.powf(q), eb.powf(q));
    let left = powi(u, n + 1) * pow0(((p + 2.0) * v + u) / (p + 1.0) * fa + u * fb, iq);
    let right = powi(v, n + 1) * pow0(v * fa + ((p + 2.0) * u + v) / (p + 1.0) * fb, iq);
    alt_holder_constant(n, p, q) * (left + right) / (factorial(n) * ((p + 2.0) * len).powf(iq))
}

/// Alternative Hölder bound as printed, with `(x-a)^(p+1)` bracket powers.
pub fn alt_holder_paper(n: usize, iv: &Interval, x: f64, p: f64, ea: f64, eb: f64) -> f64 {
    let ex = Exponents::holder(p);
    let (q, iq) = (ex.q, ex.inv_q());
    let Geom { len, u, v } = Geom::new(iv, x);
    let (fa, fb) = (ea.powf(q), eb.powf(q));
    let left = powi(u, n + 1)
        * pow0(
            ((p + 2.0) * v + u) / (p + 1.0) * fa + pow0(u, p + 1.0) * fb,
            iq,
        );
    let right = powi(v, n + 1)
        * pow0(
            pow0(v, p + 1.0) * fa + ((p + 2.0) * u + v) / (p + 1.0) * fb,
            iq,
        );
    alt_holder_constant(n, p, q) * (left + right)
        / (factorial(n) * len.powf(iq) * (p + 2.0).powf(iq))
}

pub fn power_mean(n: usize, iv: &Interval, x: f64, q: f64, ea: f64, eb: f64) -> f64 {
    let iq = 1.0 / q;
    let Geom { len, u, v } = Geom::new(iv, x);
    let (fa, fb) = (ea.powf(q), eb.powf(q));
    let n1 = n as f64 + 1.0;
    let n2 = n as f64 + 2.0;
    let left = powi(u, n + 1) * pow0((n2 * v + u) * fa + n1 * u * fb, iq);
    let right = powi(v, n + 1) * pow0(n1 * v * fa + (n2 * u + v) * fb, iq);
    (left + right) / (factorial(n + 1) * len.powf(iq) * n2.powf(iq))
}

/// General right-hand side at rule point `x`.
///
/// Families without a variant split ignore `variant`; `m` is only read by
/// the classic bound.
#[allow(clippy::too_many_arguments)]
pub fn general(
    family: Family,
    variant: Variant,
    n: usize,
    iv: &Interval,
    x: f64,
    ex: Exponents,
    ea: f64,
    eb: f64,
) -> f64 {
    match (family, variant) {
        // classic uses ea as sup|f'|
        (Family::ClassicOstrowski, _) => classic(iv, x, ea),
        (Family::ConvexDirect, _) => convex_direct(n, iv, x, ea, eb),
        (Family::Holder, Variant::Corrected) => holder_corrected(n, iv, x, ex.p, ea, eb),
        (Family::Holder, Variant::PaperStated) => holder_paper(n, iv, x, ex.p, ea, eb),
        (Family::AltHolder, Variant::Corrected) => alt_holder_corrected(n, iv, x, ex.p, ea, eb),
        (Family::AltHolder, Variant::PaperStated) => alt_holder_paper(n, iv, x, ex.p, ea, eb),
        (Family::PowerMean, _) => power_mean(n, iv, x, ex.q, ea, eb),
    }
}

/// Corollary closed forms.
///
/// Printed forms are returned for the families whose printed corollaries
/// are consistent with their general formula, and for `PaperStated`
/// Hölder-type requests. `Corrected` Hölder-type corollaries are the
/// corrected general formula specialized by hand; the corrected trapezoid
/// form is the average of the left and right forms.
#[allow(clippy::too_many_arguments)]
pub fn corollary(
    family: Family,
    variant: Variant,
    n: usize,
    iv: &Interval,
    which: Corollary,
    ex: Exponents,
    ea: f64,
    eb: f64,
) -> f64 {
    let len = iv.length();
    let (p, q) = (ex.p, ex.q);
    let iq = 1.0 / q;
    let nf = factorial(n);
    let n_f = n as f64;
    let (fa, fb) = (ea.powf(q), eb.powf(q));
    match family {
        Family::ClassicOstrowski => match which {
            Corollary::Midpoint => len * ea / 4.0,
            _ => len * ea / 2.0,
        },
        Family::ConvexDirect => match which {
            Corollary::Midpoint => {
                powi(len, n + 1) / (2f64.powi(n as i32) * factorial(n + 1)) * (ea + eb) / 2.0
            }
            Corollary::Left => powi(len, n + 1) / factorial(n + 2) * ((n_f + 1.0) * ea + eb),
            Corollary::Right => powi(len, n + 1) / factorial(n + 2) * (ea + (n_f + 1.0) * eb),
            Corollary::Trapezoid => powi(len, n + 1) / factorial(n + 1) * (ea + eb) / 2.0,
        },
        Family::PowerMean => {
            let n1 = n_f + 1.0;
            let n2 = n_f + 2.0;
            let end = powi(len, n + 1) / (factorial(n + 1) * n2.powf(iq));
            match which {
                Corollary::Midpoint => {
                    powi(len, n + 1) / (factorial(n + 1) * 2f64.powf(n1 + iq) * n2.powf(iq))
                        * (pow0((n_f + 3.0) * fa + n1 * fb, iq)
                            + pow0(n1 * fa + (n_f + 3.0) * fb, iq))
                }
                Corollary::Left => end * pow0(n1 * fa + fb, iq),
                Corollary::Right => end * pow0(fa + n1 * fb, iq),
                Corollary::Trapezoid => {
                    end / 2.0 * (pow0(n1 * fa + fb, iq) + pow0(fa + n1 * fb, iq))
                }
            }
        }
        Family::Holder => {
            let np1 = n_f * p + 1.0;
            let mid_brackets = pow0((3.0 * fa + fb) / 4.0, iq) + pow0((fa + 3.0 * fb) / 4.0, iq);
            let end_bracket = pow0((fa + fb) / 2.0, iq);
            match variant {
                Variant::Corrected => {
                    let k = np1.powf(1.0 / p) * nf;
                    match which {
                        Corollary::Midpoint => powi(len / 2.0, n + 1) / k * mid_brackets,
                        // left, right and their average coincide
                        _ => powi(len, n + 1) / k * end_bracket,
                    }
                }
                Variant::PaperStated => match which {
                    Corollary::Midpoint => (len / 2.0).powf(np1 + iq) / (np1 * nf) * mid_brackets,
                    Corollary::Left | Corollary::Right => {
                        len.powf(np1 + iq) / (np1 * nf) * end_bracket
                    }
                    // printed without q and identical to the convex-direct form
                    Corollary::Trapezoid => powi(len, n + 1) / factorial(n + 1) * (ea + eb) / 2.0,
                },
            }
        }
        Family::AltHolder => {
            let c = alt_holder_constant(n, p, q);
            let r = (p + 3.0) / (p + 1.0);
            let pre_mid =
                powi(len, n + 1) / (nf * 2f64.powf(n_f + 1.0 + iq) * (p + 2.0).powf(iq)) * c;
            let pre_end = powi(len, n + 1) / (nf * (p + 2.0).powf(iq)) * c;
            match variant {
                Variant::Corrected => {
                    let left = pre_end * pow0(fa + fb / (p + 1.0), iq);
                    let right = pre_end * pow0(fa / (p + 1.0) + fb, iq);
                    match which {
                        Corollary::Midpoint => {
                            pre_mid * (pow0(r * fa + fb, iq) + pow0(fa + r * fb, iq))
                        }
                        Corollary::Left => left,
                        Corollary::Right => right,
                        Corollary::Trapezoid => 0.5 * (left + right),
                    }
                }
                Variant::PaperStated => {
                    let lp = len.powf(p);
                    let hp = (len / 2.0).powf(p);
                    let left = pre_end * pow0(lp * fa + fb / (p + 1.0), iq);
                    let right = pre_end * pow0(fa / (p + 1.0) + lp * fb, iq);
                    match which {
                        Corollary::Midpoint => {
                            pre_mid * (pow0(r * fa + hp * fb, iq) + pow0(hp * fa + r * fb, iq))
                        }
                        Corollary::Left => left,
                        Corollary::Right => right,
                        // printed as the plain sum, without the 1/2
                        Corollary::Trapezoid => left + right,
                    }
                }
            }
        }
    }
}
