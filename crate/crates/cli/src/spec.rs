//! Sweep descriptions: a `key = value` file and/or inline flags.
//!
//! Keys: `name`, `fn`, `a`, `b`, `corpus` (entry names, `positive` or
//! `all`), `n`, `x`, `x-count`, `trapezoid`, `families`, `q`, `p`,
//! `variants`. List values are comma separated, except `corpus`, whose
//! names contain commas and are separated by `;`.

use std::str::FromStr;

use ineq_core::analysis::{SweepSpec, XGrid};
use ineq_core::corpus::{corpus, CorpusEntry};
use ineq_core::{Error, ExprFunction, Family, Interval, Variant};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Plan {
    pub name: Option<String>,
    pub function: Option<String>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub corpus: Option<Vec<String>>,
    pub n: Option<Vec<usize>>,
    pub x: Option<Vec<f64>>,
    pub x_count: Option<usize>,
    pub trapezoid: Option<bool>,
    pub families: Option<Vec<Family>>,
    pub q: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub variants: Option<Vec<Variant>>,
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| format!("{key}: bad value {s:?}: {e}"))
        })
        .collect()
}

fn one<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| format!("{key}: bad value {value:?}: {e}"))
}

impl Plan {
    pub fn parse_file(text: &str) -> Result<Plan, String> {
        let mut plan = Plan::default();
        for (idx, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| format!("spec line {}: expected key = value", idx + 1))?;
            plan.set(&key.trim().replace('_', "-"), value.trim())
                .map_err(|m| format!("spec line {}: {m}", idx + 1))?;
        }
        Ok(plan)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "name" => self.name = Some(value.to_string()),
            "fn" => self.function = Some(value.to_string()),
            "a" => self.a = Some(one(key, value)?),
            "b" => self.b = Some(one(key, value)?),
            "corpus" => {
                self.corpus = Some(
                    value
                        .split(';')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(String::from)
                        .collect(),
                )
            }
            "n" => self.n = Some(list(key, value)?),
            "x" => self.x = Some(list(key, value)?),
            "x-count" => self.x_count = Some(one(key, value)?),
            "trapezoid" => self.trapezoid = Some(one(key, value)?),
            "families" => self.families = Some(list(key, value)?),
            "q" => self.q = Some(list(key, value)?),
            "p" => self.p = Some(list(key, value)?),
            "variants" => self.variants = Some(list(key, value)?),
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overridden_by(self, other: Plan) -> Plan {
        Plan {
            name: other.name.or(self.name),
            function: other.function.or(self.function),
            a: other.a.or(self.a),
            b: other.b.or(self.b),
            corpus: other.corpus.or(self.corpus),
            n: other.n.or(self.n),
            x: other.x.or(self.x),
            x_count: other.x_count.or(self.x_count),
            trapezoid: other.trapezoid.or(self.trapezoid),
            families: other.families.or(self.families),
            q: other.q.or(self.q),
            p: other.p.or(self.p),
            variants: other.variants.or(self.variants),
        }
    }

    fn entries(&self) -> Result<Vec<CorpusEntry>, String> {
        let all = corpus();
        let names = match &self.corpus {
            None => return Ok(all.into_iter().filter(|e| e.is_positive()).collect()),
            Some(n) => n,
        };
        let mut out = Vec::new();
        for name in names {
            match name.as_str() {
                "all" => out.extend(all.iter().cloned()),
                "positive" => out.extend(all.iter().filter(|e| e.is_positive()).cloned()),
                _ => out.push(
                    all.iter()
                        .find(|e| e.name == *name)
                        .cloned()
                        .ok_or_else(|| format!("unknown corpus entry {name:?}"))?,
                ),
            }
        }
        Ok(out)
    }

    /// One sweep per function. Without `fn`, the corpus selection is used
    /// (hypothesis-class members by default).
    pub fn build(&self) -> Result<Vec<SweepSpec>, Error> {
        let usage = |m: String| Error::ParamOutOfDomain(m);
        let targets: Vec<(String, ExprFunction, Interval)> = match &self.function {
            Some(text) => {
                if self.corpus.is_some() {
                    return Err(usage("give either fn or corpus, not both".into()));
                }
                let (a, b) = match (self.a, self.b) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(usage("fn needs both a and b".into())),
                };
                let f = ExprFunction::parse(text)?;
                let name = self.name.clone().unwrap_or_else(|| text.clone());
                vec![(name, f, Interval::new(a, b)?)]
            }
            None => {
                if self.a.is_some() || self.b.is_some() {
                    return Err(usage("a and b need fn".into()));
                }
                self.entries()
                    .map_err(usage)?
                    .into_iter()
                    .map(|e| Ok((e.name.clone(), e.function()?, e.interval)))
                    .collect::<Result<_, Error>>()?
            }
        };
        if self.x.is_some() && self.x_count.is_some() {
            return Err(usage("give either x or x-count, not both".into()));
        }
        let x_grid = match (&self.x, self.x_count) {
            (Some(points), _) => XGrid::Points(points.clone()),
            (None, Some(k)) => XGrid::Count(k),
            (None, None) => XGrid::Count(9),
        };
        Ok(targets
            .into_iter()
            .map(|(name, f, iv)| SweepSpec {
                n_values: self.n.clone().unwrap_or_else(|| (1..=4).collect()),
                x_grid: x_grid.clone(),
                trapezoid: self.trapezoid.unwrap_or(false),
                families: self
                    .families
                    .clone()
                    .unwrap_or_else(|| Family::ALL.to_vec()),
                q_values: self.q.clone().unwrap_or_else(|| vec![1.0, 1.5, 2.0, 3.0]),
                p_values: self.p.clone().unwrap_or_else(|| vec![1.5, 2.0, 4.0]),
                variants: self
                    .variants
                    .clone()
                    .unwrap_or_else(|| vec![Variant::Corrected]),
                ..SweepSpec::new(name, f, iv)
            })
            .collect())
    }
}
