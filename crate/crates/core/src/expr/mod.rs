//! One-variable expressions with exact derivatives to any requested order.
//!
//! Expressions are parsed once into a tree and then evaluated as truncated
//! Taylor series ([`TaylorJet`]), so `f^(k)(t0)` comes out of a single
//! forward pass with no finite differencing and no symbolic blow-up.

mod jet;
mod parser;

use std::fmt;
use std::str::FromStr;

pub(crate) use jet::factorial;
pub use jet::TaylorJet;

use crate::error::{Error, Result};

/// Highest derivative order served by default.
pub const DEFAULT_ORDER_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Node {
    Const(f64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, f64),
    Call(Func, Box<Node>),
}

impl Node {
    fn jet(&self, t0: f64, order: usize) -> Result<Vec<f64>> {
        Ok(match self {
            Node::Const(v) => jet::constant(*v, order),
            Node::Var => jet::variable(t0, order),
            Node::Neg(u) => jet::neg(&u.jet(t0, order)?),
            Node::Add(u, v) => jet::add(&u.jet(t0, order)?, &v.jet(t0, order)?),
            Node::Sub(u, v) => jet::sub(&u.jet(t0, order)?, &v.jet(t0, order)?),
            Node::Mul(u, v) => jet::mul(&u.jet(t0, order)?, &v.jet(t0, order)?),
            Node::Div(u, v) => jet::div(&u.jet(t0, order)?, &v.jet(t0, order)?)?,
            Node::Pow(u, r) => jet::powf(&u.jet(t0, order)?, *r)?,
            Node::Call(f, u) => {
                let u = u.jet(t0, order)?;
                match f {
                    Func::Exp => jet::exp(&u),
                    Func::Ln => jet::ln(&u)?,
                    Func::Sin => jet::sin_cos(&u).0,
                    Func::Cos => jet::sin_cos(&u).1,
                    Func::Sinh => jet::sinh_cosh(&u).0,
                    Func::Cosh => jet::sinh_cosh(&u).1,
                    Func::Sqrt => jet::sqrt(&u)?,
                }
            }
        })
    }
}

/// A parsed expression in the variable `t`.
#[derive(Debug, Clone)]
pub struct ExprFunction {
    ast: Node,
    source: String,
    order_cap: usize,
}

impl PartialEq for ExprFunction {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.order_cap == other.order_cap
    }
}

impl ExprFunction {
    pub fn parse(text: &str) -> Result<Self> {
        let ast = parser::parse_tree(text)?;
        Ok(Self {
            ast,
            source: text.to_string(),
            order_cap: DEFAULT_ORDER_CAP,
        })
    }

    pub fn with_order_cap(mut self, cap: usize) -> Self {
        self.order_cap = cap;
        self
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn order_cap(&self) -> usize {
        self.order_cap
    }

    /// Taylor coefficients `c_k = f^(k)(t0)/k!` for `k = 0..=order`.
    pub fn taylor(&self, t0: f64, order: usize) -> Result<TaylorJet> {
        if order > self.order_cap {
            return Err(Error::OrderOverflow {
                requested: order,
                cap: self.order_cap,
            });
        }
        if !t0.is_finite() {
            return Err(Error::Domain(format!("non-finite evaluation point {t0}")));
        }
        let coefficients = self.ast.jet(t0, order).map_err(|e| match e {
            Error::Domain(msg) => Error::Domain(format!("{msg} (t = {t0})")),
            other => other,
        })?;
        if let Some(bad) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite Taylor coefficient {bad} at t = {t0}"
            )));
        }
        Ok(TaylorJet {
            center: t0,
            coefficients,
        })
    }

    /// `f^(k)(t0)`.
    pub fn deriv(&self, t0: f64, k: usize) -> Result<f64> {
        Ok(self.taylor(t0, k)?.derivative(k))
    }

    pub fn eval(&self, t0: f64) -> Result<f64> {
        Ok(self.taylor(t0, 0)?.value())
    }
}

impl FromStr for ExprFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExprFunction::parse(s)
    }
}

impl fmt::Display for ExprFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Shorthand for [`ExprFunction::parse`].
pub fn parse(text: &str) -> Result<ExprFunction> {
    ExprFunction::parse(text)
}
