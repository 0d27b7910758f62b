//! Truncated Taylor-series arithmetic.
//!
//! A jet of order `m` stores `c_0..=c_m` with `c_k = g^(k)(t0) / k!`.
//! All recurrences below are the standard ones for univariate Taylor-mode
//! differentiation; each output coefficient `k` only depends on input
//! coefficients `0..=k`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Normalized Taylor coefficients of a function about `center`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorJet {
    pub center: f64,
    pub coefficients: Vec<f64>,
}

impl TaylorJet {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `k`-th derivative, `k! * c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coefficients[k] * factorial(k)
    }

    pub fn value(&self) -> f64 {
        self.coefficients[0]
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

pub(crate) fn constant(v: f64, order: usize) -> Vec<f64> {
    let mut c = vec![0.0; order + 1];
    c[0] = v;
    c
}

pub(crate) fn variable(t0: f64, order: usize) -> Vec<f64> {
    let mut c = constant(t0, order);
    if order >= 1 {
        c[1] = 1.0;
    }
    c
}

pub(crate) fn add(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub(crate) fn sub(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub(crate) fn neg(u: &[f64]) -> Vec<f64> {
    u.iter().map(|a| -a).collect()
}

pub(crate) fn mul(u: &[f64], v: &[f64]) -> Vec<f64> {
    let m = u.len();
    (0..m)
        .map(|k| (0..=k).map(|j| u[j] * v[k - j]).sum())
        .collect()
}

pub(crate) fn div(u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    if v[0] == 0.0 {
        return Err(Error::Domain("division by zero".into()));
    }
    let m = u.len();
    let mut w = vec![0.0; m];
    for k in 0..m {
        let acc: f64 = (0..k).map(|j| w[j] * v[k - j]).sum();
        w[k] = (u[k] - acc) / v[0];
    }
    Ok(w)
}

pub(crate) fn exp(u: &[f64]) -> Vec<f64> {
    let m = u.len();
    let mut e = vec![0.0; m];
    e[0] = u[0].exp();
    for k in 1..m {
        let acc: f64 = (1..=k).map(|j| j as f64 * u[j] * e[k - j]).sum();
        e[k] = acc / k as f64;
    }
    e
}

pub(crate) fn ln(u: &[f64]) -> Result<Vec<f64>> {
    if u[0] <= 0.0 {
        return Err(Error::Domain(format!("ln of non-positive value {}", u[0])));
    }
    let m = u.len();
    let mut l = vec![0.0; m];
    l[0] = u[0].ln();
    for k in 1..m {
        let acc: f64 = (1..k).map(|j| j as f64 * l[j] * u[k - j]).sum();
        l[k] = (u[k] - acc / k as f64) / u[0];
    }
    Ok(l)
}

/// Returns `(sin u, cos u)`.
pub(crate) fn sin_cos(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = u.len();
    let mut s = vec![0.0; m];
    let mut c = vec![0.0; m];
    s[0] = u[0].sin();
    c[0] = u[0].cos();
    for k in 1..m {
        let mut acc_s = 0.0;
        let mut acc_c = 0.0;
        for j in 1..=k {
            let w = j as f64 * u[j];
            acc_s += w * c[k - j];
            acc_c += w * s[k - j];
        }
        s[k] = acc_s / k as f64;
        c[k] = -acc_c / k as f64;
    }
    (s, c)
}

/// Returns `(sinh u, cosh u)`.
pub(crate) fn sinh_cosh(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = u.len();
    let mut s = vec![0.0; m];
    let mut c = vec![0.0; m];
    s[0] = u[0].sinh();
    c[0] = u[0].cosh();
    for k in 1..m {
        let mut acc_s = 0.0;
        let mut acc_c = 0.0;
        for j in 1..=k {
            let w = j as f64 * u[j];
            acc_s += w * c[k - j];
            acc_c += w * s[k - j];
        }
        s[k] = acc_s / k as f64;
        c[k] = acc_c / k as f64;
    }
    (s, c)
}

const MAX_INTEGER_POWER: f64 = 1024.0;

pub(crate) fn powf(u: &[f64], r: f64) -> Result<Vec<f64>> {
    let m = u.len();
    if r == 0.0 {
        return Ok(constant(1.0, m - 1));
    }
    if r.fract() == 0.0 && r.abs() <= MAX_INTEGER_POWER {
        // Integer exponents go through repeated products so that bases
        // vanishing at the center (t^3 at t = 0) stay well defined.
        let positive = powi(u, r.abs() as u32);
        if r > 0.0 {
            return Ok(positive);
        }
        if positive[0] == 0.0 {
            return Err(Error::Domain("negative power of zero".into()));
        }
        return div(&constant(1.0, m - 1), &positive);
    }
    if u[0] < 0.0 {
        return Err(Error::Domain(format!(
            "non-integer power {r} of negative value {}",
            u[0]
        )));
    }
    if u[0] == 0.0 {
        if m == 1 && r > 0.0 {
            return Ok(vec![0.0]);
        }
        return Err(Error::Domain(format!(
            "power {r} is not differentiable at zero"
        )));
    }
    let mut p = vec![0.0; m];
    p[0] = u[0].powf(r);
    for k in 1..m {
        let acc: f64 = (1..=k)
            .map(|j| ((r + 1.0) * j as f64 - k as f64) * u[j] * p[k - j])
            .sum();
        p[k] = acc / (k as f64 * u[0]);
    }
    Ok(p)
}

fn powi(u: &[f64], mut e: u32) -> Vec<f64> {
    let mut result = constant(1.0, u.len() - 1);
    let mut base = u.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    result
}

pub(crate) fn sqrt(u: &[f64]) -> Result<Vec<f64>> {
    if u[0] < 0.0 {
        return Err(Error::Domain(format!("sqrt of negative value {}", u[0])));
    }
    powf(u, 0.5)
}
