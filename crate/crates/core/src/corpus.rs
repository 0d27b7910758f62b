//! Reference functions, with and without convex `|f^(n)|^q`.
//!
//! Every built-in entry records its convexity status on the `(n, q)` test
//! grid. Entries loaded from a file are classified by the grid checker at
//! load time.

use std::path::Path;

use serde::Serialize;

use crate::bounds::Evaluator;
use crate::error::{Error, Result};
use crate::expr::ExprFunction;
use crate::quadrature::Interval;

/// Exponents `q` on which convexity of `|f^(n)|^q` is recorded.
pub const TEST_Q_GRID: [f64; 5] = [1.0, 4.0 / 3.0, 1.5, 2.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatusCell {
    pub n: usize,
    pub q: f64,
    pub convex: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub expression: String,
    pub interval: Interval,
    pub max_n: usize,
    /// One cell per `n in 1..=max_n` and `q` in [`TEST_Q_GRID`].
    pub convexity: Vec<StatusCell>,
    pub integral: Option<f64>,
}

impl CorpusEntry {
    pub fn function(&self) -> Result<ExprFunction> {
        ExprFunction::parse(&self.expression)
    }

    pub fn convexity_status(&self, n: usize, q: f64) -> Option<bool> {
        self.convexity
            .iter()
            .find(|c| c.n == n && c.q == q)
            .map(|c| c.convex)
    }

    /// Member of the hypothesis class for every recorded `(n, q)`.
    pub fn is_positive(&self) -> bool {
        self.convexity.iter().all(|c| c.convex)
    }

    /// Runs the grid checker on every `(n, q)` cell.
    pub fn measure_convexity(&self) -> Result<Vec<StatusCell>> {
        let f = self.function()?;
        measure(&f, self.interval, self.max_n)
    }
}

fn measure(f: &ExprFunction, iv: Interval, max_n: usize) -> Result<Vec<StatusCell>> {
    let ev = Evaluator::new(f, iv);
    let mut cells = Vec::with_capacity(max_n * TEST_Q_GRID.len());
    for n in 1..=max_n {
        for q in TEST_Q_GRID {
            cells.push(StatusCell {
                n,
                q,
                convex: ev.convexity(n, q)?.convex,
            });
        }
    }
    Ok(cells)
}

fn all_convex(max_n: usize) -> Vec<StatusCell> {
    cells_where(max_n, |_, _| true)
}

fn cells_where(max_n: usize, convex: impl Fn(usize, f64) -> bool) -> Vec<StatusCell> {
    (1..=max_n)
        .flat_map(|n| TEST_Q_GRID.map(|q| (n, q)))
        .map(|(n, q)| StatusCell {
            n,
            q,
            convex: convex(n, q),
        })
        .collect()
}

fn entry(
    name: &str,
    expression: &str,
    a: f64,
    b: f64,
    integral: f64,
    convexity: Vec<StatusCell>,
) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        expression: expression.to_string(),
        interval: Interval::new(a, b).expect("static corpus interval"),
        max_n: convexity.iter().map(|c| c.n).max().unwrap_or(0),
        convexity,
        integral: Some(integral),
    }
}

const MAX_N: usize = 5;

/// The built-in corpus: hypothesis-class members first, then the two
/// negative controls.
pub fn corpus() -> Vec<CorpusEntry> {
    let e = std::f64::consts::E;
    let ln2 = std::f64::consts::LN_2;
    let mut out = vec![
        entry("exp[0,1]", "exp(t)", 0.0, 1.0, e - 1.0, all_convex(MAX_N)),
        entry(
            "exp[-1,2]",
            "exp(t)",
            -1.0,
            2.0,
            e * e - 1.0 / e,
            all_convex(MAX_N),
        ),
    ];
    for m in 2..=5i32 {
        let mf = f64::from(m);
        out.push(entry(
            &format!("t^{m}[0,1]"),
            &format!("t^{m}"),
            0.0,
            1.0,
            1.0 / (mf + 1.0),
            all_convex(MAX_N),
        ));
        out.push(entry(
            &format!("t^{m}[1,2]"),
            &format!("t^{m}"),
            1.0,
            2.0,
            (2f64.powi(m + 1) - 1.0) / (mf + 1.0),
            all_convex(MAX_N),
        ));
    }
    out.extend([
        entry(
            "cosh[-1,1]",
            "cosh(t)",
            -1.0,
            1.0,
            2.0 * 1f64.sinh(),
            all_convex(MAX_N),
        ),
        entry("t^(-2)[1,2]", "t^(-2)", 1.0, 2.0, 0.5, all_convex(MAX_N)),
        entry("1/(1+t)[0,1]", "1/(1+t)", 0.0, 1.0, ln2, all_convex(MAX_N)),
        // |sin| and |cos| are both non-convex on [0,3]
        entry(
            "sin[0,3]",
            "sin(t)",
            0.0,
            3.0,
            1.0 - 3f64.cos(),
            cells_where(MAX_N, |_, _| false),
        ),
        // |f'|^q = (1 + ln t)^q is convex on [0.5,2] only when q - 1 >= 1 + ln 2
        entry(
            "t*ln(t)[0.5,2]",
            "t*ln(t)",
            0.5,
            2.0,
            2.125 * ln2 - 0.9375,
            cells_where(MAX_N, |n, q| n >= 2 || q >= 3.0),
        ),
    ]);
    out
}

pub fn positive_entries() -> Vec<CorpusEntry> {
    corpus().into_iter().filter(|e| e.is_positive()).collect()
}

pub fn find(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

/// Parses `name; expression; a; b; max_n` lines. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::CorpusParse { line, message };
        let fields: Vec<&str> = trimmed.split(';').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let num = |s: &str, what: &str| {
            s.parse::<f64>()
                .map_err(|e| err(format!("bad {what} {s:?}: {e}")))
        };
        let a = num(fields[2], "a")?;
        let b = num(fields[3], "b")?;
        let max_n: usize = fields[4]
            .parse()
            .map_err(|e| err(format!("bad max_n {:?}: {e}", fields[4])))?;
        if max_n == 0 {
            return Err(err("max_n must be at least 1".into()));
        }
        if fields[0].is_empty() {
            return Err(err("empty name".into()));
        }
        let interval = Interval::new(a, b).map_err(|e| err(e.to_string()))?;
        let f = ExprFunction::parse(fields[1]).map_err(|e| err(e.to_string()))?;
        let convexity = measure(&f, interval, max_n).map_err(|e| err(e.to_string()))?;
        out.push(CorpusEntry {
            name: fields[0].to_string(),
            expression: fields[1].to_string(),
            interval,
            max_n,
            convexity,
            integral: None,
        });
    }
    Ok(out)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}
