//! Parameter sweeps over bound requests, best-bound selection, printed
//! versus corrected comparisons, and CSV / JSON emission.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundReport, BoundRequest, Evaluator, Family, Variant, NUMERIC_TOL};
use crate::corpus;
use crate::error::{Error, Result};
use crate::expr::ExprFunction;
use crate::identity::RuleForm;
use crate::quadrature::Interval;

/// Relative gap under which two right-hand sides count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum XGrid {
    /// Equispaced points including both endpoints.
    Count(usize),
    Points(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub name: String,
    pub function: ExprFunction,
    pub interval: Interval,
    pub n_values: Vec<usize>,
    pub x_grid: XGrid,
    /// Also evaluate the trapezoid form once per `n`.
    pub trapezoid: bool,
    pub families: Vec<Family>,
    pub q_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub variants: Vec<Variant>,
}

impl SweepSpec {
    pub fn new(name: impl Into<String>, function: ExprFunction, interval: Interval) -> Self {
        Self {
            name: name.into(),
            function,
            interval,
            n_values: vec![1],
            x_grid: XGrid::Count(9),
            trapezoid: false,
            families: Family::ALL.to_vec(),
            q_values: vec![1.0],
            p_values: vec![2.0],
            variants: vec![Variant::Corrected],
        }
    }

    fn forms(&self) -> Vec<RuleForm> {
        let points = match &self.x_grid {
            XGrid::Count(k) => self.interval.grid(*k),
            XGrid::Points(p) => p.clone(),
        };
        let mut forms: Vec<RuleForm> = points.into_iter().map(RuleForm::PointX).collect();
        if self.trapezoid {
            forms.push(RuleForm::Trapezoid);
        }
        forms
    }

    /// Every request in sweep order: `n`, then rule form, then family,
    /// then `q` or `p`, then variant. Families without a parameter
    /// contribute one slot; families without variants use `Corrected` only.
    pub fn requests(&self) -> Vec<BoundRequest> {
        let forms = self.forms();
        let mut out = Vec::new();
        for &n in &self.n_values {
            for &form in &forms {
                for &family in &self.families {
                    match family {
                        Family::ClassicOstrowski => out.push(BoundRequest {
                            n,
                            ..BoundRequest::classic(form)
                        }),
                        Family::ConvexDirect => out.push(BoundRequest::convex_direct(n, form)),
                        Family::PowerMean => out.extend(
                            self.q_values
                                .iter()
                                .map(|&q| BoundRequest::power_mean(n, form, q)),
                        ),
                        Family::Holder | Family::AltHolder => {
                            for &p in &self.p_values {
                                for &variant in &self.variants {
                                    out.push(BoundRequest {
                                        family,
                                        p: Some(p),
                                        variant,
                                        ..BoundRequest::convex_direct(n, form)
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Size of the parameter product enumerated by [`SweepSpec::requests`].
    pub fn combination_count(&self) -> usize {
        self.requests().len()
    }
}

/// One evaluated request, flattened for CSV and JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(rename = "fn")]
    pub function: String,
    pub expression: String,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub form: &'static str,
    pub x: Option<f64>,
    pub family: &'static str,
    pub variant: &'static str,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub lhs: Option<f64>,
    pub lhs_err: Option<f64>,
    pub rhs: Option<f64>,
    pub slack: Option<f64>,
    pub convex: Option<bool>,
    pub worst_violation: Option<f64>,
    pub valid: bool,
    pub error: Option<String>,
}

impl SweepRecord {
    fn base(spec: &SweepSpec, req: &BoundRequest) -> Self {
        let ex = req.exponents().ok();
        let (p, q) = match req.family {
            Family::Holder | Family::AltHolder => (req.p, ex.map(|e| e.q)),
            Family::PowerMean => (None, req.q),
            _ => (None, None),
        };
        Self {
            function: spec.name.clone(),
            expression: spec.function.source().to_string(),
            a: spec.interval.a(),
            b: spec.interval.b(),
            n: req.n,
            form: req.form.label(),
            x: req.form.point(&spec.interval),
            family: req.family.label(),
            variant: req.variant.label(),
            p,
            q,
            lhs: None,
            lhs_err: None,
            rhs: None,
            slack: None,
            convex: None,
            worst_violation: None,
            valid: false,
            error: None,
        }
    }

    fn with_report(mut self, r: &BoundReport) -> Self {
        self.lhs = Some(r.lhs);
        self.lhs_err = Some(r.lhs_err);
        self.rhs = Some(r.rhs);
        self.slack = Some(r.slack);
        self.convex = Some(r.convexity.convex);
        self.worst_violation = Some(r.convexity.worst_violation);
        self.valid = r.valid;
        self
    }

    fn holds(&self) -> Option<bool> {
        Some(self.slack? >= -(self.lhs_err? + NUMERIC_TOL))
    }
}

/// A parameter combination that was not evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkipRecord {
    #[serde(rename = "fn")]
    pub function: String,
    pub n: usize,
    pub form: &'static str,
    pub x: Option<f64>,
    pub family: &'static str,
    pub variant: &'static str,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub skips: Vec<SkipRecord>,
}

impl SweepOutput {
    pub fn all_valid(&self) -> bool {
        self.records.iter().all(|r| r.valid)
    }

    fn extend(&mut self, other: SweepOutput) {
        self.records.extend(other.records);
        self.skips.extend(other.skips);
    }
}

enum Outcome {
    Record(SweepRecord),
    Skip(SkipRecord),
}

fn is_skip(e: &Error) -> bool {
    matches!(
        e,
        Error::ParamOutOfDomain(_) | Error::PointOutsideInterval { .. }
    )
}

fn run_one(spec: &SweepSpec, ev: &Evaluator<'_>, req: &BoundRequest) -> Outcome {
    let base = SweepRecord::base(spec, req);
    let checked = req
        .exponents()
        .and_then(|_| req.form.validate(&spec.interval));
    let result = checked.and_then(|_| ev.evaluate(req));
    match result {
        Ok(report) => Outcome::Record(base.with_report(&report)),
        Err(e) if is_skip(&e) => Outcome::Skip(SkipRecord {
            function: base.function,
            n: base.n,
            form: base.form,
            x: match req.form {
                RuleForm::PointX(x) => Some(x),
                _ => base.x,
            },
            family: base.family,
            variant: base.variant,
            p: base.p.or(req.p),
            q: base.q.or(req.q),
            reason: e.to_string(),
        }),
        Err(e) => Outcome::Record(SweepRecord {
            error: Some(e.to_string()),
            ..base
        }),
    }
}

/// Evaluates every combination of `spec`. Evaluation runs in parallel;
/// output order is the order of [`SweepSpec::requests`].
pub fn sweep(spec: &SweepSpec) -> SweepOutput {
    let ev = Evaluator::new(&spec.function, spec.interval);
    let outcomes: Vec<Outcome> = spec
        .requests()
        .par_iter()
        .map(|req| run_one(spec, &ev, req))
        .collect();
    let mut out = SweepOutput::default();
    for o in outcomes {
        match o {
            Outcome::Record(r) => out.records.push(r),
            Outcome::Skip(s) => out.skips.push(s),
        }
    }
    out
}

pub fn sweep_all(specs: &[SweepSpec]) -> SweepOutput {
    let mut out = SweepOutput::default();
    for s in specs {
        out.extend(sweep(s));
    }
    out
}

/// Corpus-wide default: every hypothesis-class entry, `n = 1..4`, 9 rule
/// points, all families, corrected variants.
pub fn default_specs() -> Vec<SweepSpec> {
    corpus::positive_entries()
        .into_iter()
        .map(|e| {
            let f = e.function().expect("corpus expressions parse");
            SweepSpec {
                n_values: (1..=4).collect(),
                x_grid: XGrid::Count(9),
                q_values: vec![1.0, 1.5, 2.0, 3.0],
                p_values: vec![1.5, 2.0, 4.0],
                ..SweepSpec::new(e.name, f, e.interval)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupKey {
    #[serde(rename = "fn")]
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub form: &'static str,
    pub x: Option<f64>,
}

impl GroupKey {
    fn of(r: &SweepRecord) -> Self {
        Self {
            function: r.function.clone(),
            a: r.a,
            b: r.b,
            n: r.n,
            form: r.form,
            x: r.x,
        }
    }

    fn sort_key(&self) -> (String, u64, u64, usize, &'static str, u64) {
        let bits = |v: f64| v.to_bits();
        (
            self.function.clone(),
            bits(self.a),
            bits(self.b),
            self.n,
            self.form,
            self.x.map_or(0, bits),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestBound {
    pub group: GroupKey,
    pub winner: SweepRecord,
}

fn family_rank(label: &str) -> usize {
    Family::ALL
        .iter()
        .position(|f| f.label() == label)
        .unwrap_or(usize::MAX)
}

/// `true` when `a` should beat `b` in best-bound selection.
fn beats(a: &SweepRecord, b: &SweepRecord) -> bool {
    let (ra, rb) = (
        a.rhs.unwrap_or(f64::INFINITY),
        b.rhs.unwrap_or(f64::INFINITY),
    );
    if (ra - rb).abs() > TIE_TOLERANCE * ra.abs().max(rb.abs()) {
        return ra < rb;
    }
    let key = |r: &SweepRecord| {
        (
            family_rank(r.family),
            r.q.unwrap_or(f64::NEG_INFINITY),
            r.p.unwrap_or(f64::NEG_INFINITY),
        )
    };
    let (ka, kb) = (key(a), key(b));
    ka.0 < kb.0 || (ka.0 == kb.0 && (ka.1, ka.2) < (kb.1, kb.2))
}

/// Per `(fn, interval, n, rule point)` group, the valid corrected record
/// with the smallest rhs. Ties within [`TIE_TOLERANCE`] go to the earlier
/// family, then the smaller `q`, then the smaller `p`.
pub fn best_bound(records: &[SweepRecord]) -> Result<Vec<BestBound>> {
    let mut groups: BTreeMap<_, (GroupKey, Option<&SweepRecord>)> = BTreeMap::new();
    for r in records {
        let key = GroupKey::of(r);
        let slot = groups.entry(key.sort_key()).or_insert_with(|| (key, None));
        let eligible = r.valid && r.variant == Variant::Corrected.label() && r.rhs.is_some();
        if eligible && slot.1.is_none_or(|cur| beats(r, cur)) {
            slot.1 = Some(r);
        }
    }
    groups
        .into_values()
        .map(|(group, winner)| match winner {
            Some(w) => Ok(BestBound {
                winner: w.clone(),
                group,
            }),
            None => Err(Error::EmptyGroup(format!(
                "{} on [{}, {}], n = {}, {} {:?}",
                group.function, group.a, group.b, group.n, group.form, group.x
            ))),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrataInput {
    #[serde(rename = "fn")]
    pub function: String,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub form: &'static str,
    pub x: Option<f64>,
    pub family: &'static str,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariantPair<T> {
    pub corrected: T,
    pub paper: T,
}

/// Printed versus corrected right-hand side on one input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrataFinding {
    pub input: ErrataInput,
    pub variant_values: VariantPair<f64>,
    /// Whether each rhs dominates the oracle lhs.
    pub valid_flags: VariantPair<bool>,
    /// Printed rhs divided by corrected rhs.
    pub ratio: f64,
}

/// Pairs up corrected and printed records that share every other
/// parameter. Records without a printed counterpart produce nothing.
pub fn errata_report(records: &[SweepRecord]) -> Vec<ErrataFinding> {
    let input = |r: &SweepRecord| ErrataInput {
        function: r.function.clone(),
        a: r.a,
        b: r.b,
        n: r.n,
        form: r.form,
        x: r.x,
        family: r.family,
        p: r.p,
    };
    let corrected: Vec<&SweepRecord> = records
        .iter()
        .filter(|r| r.variant == Variant::Corrected.label() && r.rhs.is_some())
        .collect();
    let mut out = Vec::new();
    for paper in records
        .iter()
        .filter(|r| r.variant == Variant::PaperStated.label() && r.rhs.is_some())
    {
        let key = input(paper);
        let Some(corr) = corrected.iter().find(|c| input(c) == key) else {
            continue;
        };
        let (rc, rp) = (corr.rhs.unwrap(), paper.rhs.unwrap());
        out.push(ErrataFinding {
            input: key,
            variant_values: VariantPair {
                corrected: rc,
                paper: rp,
            },
            valid_flags: VariantPair {
                corrected: corr.holds().unwrap_or(false),
                paper: paper.holds().unwrap_or(false),
            },
            ratio: rp / rc,
        });
    }
    out
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    w.flush()?;
    Ok(())
}

/// Column names of [`write_csv`].
pub const CSV_HEADER: [&str; 19] = [
    "fn",
    "expression",
    "a",
    "b",
    "n",
    "form",
    "x",
    "family",
    "variant",
    "p",
    "q",
    "lhs",
    "lhs_err",
    "rhs",
    "slack",
    "convex",
    "worst_violation",
    "valid",
    "error",
];

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn square_spec() -> SweepSpec {
        SweepSpec::new(
            "sq",
            parse("t^2").unwrap(),
            Interval::new(0.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn cardinality() {
        let spec = SweepSpec {
            x_grid: XGrid::Count(11),
            families: vec![Family::ConvexDirect],
            n_values: vec![2],
            ..square_spec()
        };
        let out = sweep(&spec);
        assert_eq!(out.records.len(), 11);
        assert!(out.skips.is_empty());
    }

    #[test]
    fn equality_witness_minimizes_slack() {
        let spec = SweepSpec {
            x_grid: XGrid::Count(9),
            families: vec![Family::ConvexDirect],
            n_values: vec![2],
            ..square_spec()
        };
        let out = sweep(&spec);
        let min = out
            .records
            .iter()
            .map(|r| r.slack.unwrap())
            .fold(f64::INFINITY, f64::min);
        // constant |f''| and a sign-definite kernel: attained at every x
        let mid = out.records.iter().find(|r| r.x == Some(0.5)).unwrap();
        assert!(mid.slack.unwrap() <= min + 1e-12);
        assert!(mid.slack.unwrap().abs() < 1e-12);
    }

    #[test]
    fn out_of_domain_is_skipped() {
        let spec = SweepSpec {
            families: vec![Family::AltHolder],
            p_values: vec![2.0, 4.0],
            x_grid: XGrid::Points(vec![0.5]),
            ..square_spec()
        };
        let out = sweep(&spec);
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.skips.len(), 1);
        assert_eq!(out.skips[0].p, Some(4.0));
        assert!(out.skips[0].reason.contains("nq + q - p - 1"));
        assert_eq!(
            out.records.len() + out.skips.len(),
            spec.combination_count()
        );
    }

    #[test]
    fn classic_is_first_order_only() {
        let spec = SweepSpec {
            families: vec![Family::ClassicOstrowski],
            n_values: vec![1, 2],
            x_grid: XGrid::Count(3),
            ..square_spec()
        };
        let out = sweep(&spec);
        assert_eq!(out.records.len(), 3);
        assert_eq!(out.skips.len(), 3);
        assert!(out.skips.iter().all(|s| s.n == 2));
    }

    #[test]
    fn domain_errors_stay_in_the_record() {
        let spec = SweepSpec {
            families: vec![Family::ConvexDirect],
            x_grid: XGrid::Points(vec![0.5]),
            ..SweepSpec::new(
                "inv",
                parse("1/t").unwrap(),
                Interval::new(0.0, 1.0).unwrap(),
            )
        };
        let out = sweep(&spec);
        assert_eq!(out.records.len(), 1);
        let r = &out.records[0];
        assert!(r.error.is_some());
        assert!(!r.valid);
        assert_eq!(r.rhs, None);
    }

    #[test]
    fn best_bound_prefers_convex_direct_on_ties() {
        let spec = SweepSpec {
            n_values: vec![2],
            x_grid: XGrid::Points(vec![0.5]),
            q_values: vec![1.0, 2.0, 3.0],
            p_values: vec![2.0],
            ..square_spec()
        };
        let out = sweep(&spec);
        let best = best_bound(&out.records).unwrap();
        assert_eq!(best.len(), 1);
        assert_eq!(best[0].winner.family, "convex-direct");
        assert!((best[0].winner.rhs.unwrap() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn best_bound_single_and_empty_groups() {
        let spec = SweepSpec {
            families: vec![Family::ConvexDirect],
            n_values: vec![2],
            x_grid: XGrid::Points(vec![0.25]),
            ..square_spec()
        };
        let out = sweep(&spec);
        let best = best_bound(&out.records).unwrap();
        assert_eq!(best[0].winner, out.records[0]);

        let bad = SweepSpec {
            families: vec![Family::ConvexDirect],
            x_grid: XGrid::Points(vec![1.0]),
            ..SweepSpec::new(
                "sin",
                parse("sin(t)").unwrap(),
                Interval::new(0.0, 3.0).unwrap(),
            )
        };
        let out = sweep(&bad);
        assert!(!out.records[0].valid);
        assert!(matches!(
            best_bound(&out.records),
            Err(Error::EmptyGroup(_))
        ));
    }

    #[test]
    fn errata_pairs_variants() {
        let spec = SweepSpec {
            families: vec![Family::Holder],
            x_grid: XGrid::Points(vec![5.0]),
            variants: vec![Variant::Corrected, Variant::PaperStated],
            ..SweepSpec::new(
                "sq",
                parse("t^2").unwrap(),
                Interval::new(0.0, 10.0).unwrap(),
            )
        };
        let out = sweep(&spec);
        let findings = errata_report(&out.records);
        assert_eq!(findings.len(), 1);
        let f = &findings[0];
        assert!((f.ratio - f.variant_values.paper / f.variant_values.corrected).abs() < 1e-15);
        assert!(f.ratio > 1.0);

        let corrected_only: Vec<_> = out
            .records
            .iter()
            .filter(|r| r.variant == "corrected")
            .cloned()
            .collect();
        assert!(errata_report(&corrected_only).is_empty());
    }

    #[test]
    fn csv_has_stable_header() {
        let out = sweep(&SweepSpec {
            families: vec![Family::ConvexDirect],
            x_grid: XGrid::Count(2),
            ..square_spec()
        });
        let mut buf = Vec::new();
        write_csv(&out.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(text.lines().count(), 3);

        let mut empty = Vec::new();
        write_csv(&[], &mut empty).unwrap();
        assert_eq!(
            String::from_utf8(empty).unwrap().trim_end(),
            CSV_HEADER.join(",")
        );
    }
}
