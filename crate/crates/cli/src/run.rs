//! Evaluating scenarios: single points, sweeps, and the text report.

use std::fmt::Write as _;

use rayon::prelude::*;
use skewbound_core::bounds::{
    evaluate_product, evaluate_sum, permutation_search, PermutationSearch, ProductReport, Strategy, SumBoundReport,
    CHECK_TOL,
};
use skewbound_core::loo::Gauge;
use skewbound_core::{Error as CoreError, MetricSpec, Observable};

use crate::csvout::Row;
use crate::expr::Vars;
use crate::scenario::{Scenario, Task};
use crate::CliError;

/// Evaluation choices that can be overridden from the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub metric: MetricSpec,
    pub gauge: Gauge,
    pub strategy: Strategy,
}

impl Settings {
    pub fn for_scenario(s: &Scenario, metric: Option<MetricSpec>, strategy: Strategy) -> Self {
        Self {
            metric: metric.unwrap_or(s.metric),
            gauge: s.gauge.into(),
            strategy,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProductPart {
    pub report: ProductReport,
    pub with_chain: bool,
    pub permuted: Option<PermutationSearch>,
}

/// Everything computed at one parameter point.
#[derive(Clone, Debug)]
pub struct PointReport {
    pub dim: usize,
    pub product: Option<ProductPart>,
    pub sum: Option<SumBoundReport>,
}

fn invariant(e: CoreError) -> CliError {
    match e {
        CoreError::Inconsistent(message) => CliError::Invariant {
            context: String::new(),
            message,
        },
        other => CliError::Core(other),
    }
}

fn check_permuted(report: &ProductReport, search: &PermutationSearch) -> Result<(), CliError> {
    let product = report.chain.product;
    let fixed = report.chain.ik.iter().copied().chain(report.chain.spq.values());
    let best = search.ik.iter().chain(&search.spq);
    for (pb, plain) in best.zip(fixed) {
        // The identity pair is always a candidate, so a maximum can't fall below it.
        if pb.value > product + CHECK_TOL || pb.value < plain - CHECK_TOL {
            return Err(CliError::Invariant {
                context: String::new(),
                message: format!(
                    "permuted {} = {} outside [{plain}, {product}]",
                    pb.index, pb.value
                ),
            });
        }
    }
    Ok(())
}

pub fn evaluate_point(s: &Scenario, settings: &Settings, vars: &Vars) -> Result<PointReport, CliError> {
    let rho = s.state.build(vars)?;
    let mut point = PointReport {
        dim: rho.dim(),
        product: None,
        sum: None,
    };
    for task in &s.tasks {
        match task {
            Task::Product { a, b } | Task::Chain { a, b, .. } => {
                let (oa, ob) = (s.observable(a, vars)?, s.observable(b, vars)?);
                let report =
                    evaluate_product(&rho, &oa, &ob, &settings.metric, settings.gauge).map_err(invariant)?;
                report.chain.check(CHECK_TOL).map_err(invariant)?;
                let (with_chain, permuted) = match task {
                    Task::Chain { permuted: true, .. } => {
                        let search =
                            permutation_search(report.x.as_slice(), report.y.as_slice(), settings.strategy)?;
                        check_permuted(&report, &search)?;
                        (true, Some(search))
                    }
                    Task::Chain { .. } => (true, None),
                    _ => (false, None),
                };
                point.product = Some(ProductPart {
                    report,
                    with_chain,
                    permuted,
                });
            }
            Task::Sum { observables } => {
                let ens = observables
                    .iter()
                    .map(|n| s.observable(n, vars))
                    .collect::<Result<Vec<Observable>, _>>()?;
                let report =
                    evaluate_sum(&rho, &ens, &settings.metric, settings.gauge, settings.strategy).map_err(invariant)?;
                report.check(CHECK_TOL).map_err(invariant)?;
                point.sum = Some(report);
            }
            Task::Sweep { .. } => {}
        }
    }
    Ok(point)
}

impl PointReport {
    /// Named values in CSV column order.
    pub fn columns(&self) -> Vec<(String, f64)> {
        let mut cols = Vec::new();
        if let Some(p) = &self.product {
            let chain = &p.report.chain;
            cols.push(("product".into(), chain.product));
            cols.push(("cauchy".into(), chain.cauchy));
            if p.with_chain {
                for (k, v) in chain.ik.iter().enumerate() {
                    cols.push((format!("I_{}", k + 1), *v));
                }
                for e in &chain.spq.entries()[1..] {
                    cols.push((format!("S_{}_{}", e.p, e.q), e.value));
                }
            }
            if let Some(search) = &p.permuted {
                for b in &search.ik {
                    cols.push((format!("P{}", b.index), b.value));
                }
                for b in &search.spq[1..] {
                    cols.push((format!("P{}", b.index), b.value));
                }
            }
        }
        if let Some(s) = &self.sum {
            cols.push(("sum".into(), s.sum));
            cols.push(("LB_thm3".into(), s.theorem3.value));
            cols.push(("LB_norm".into(), s.norm_bound.value));
        }
        cols
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        if let Some(p) = &self.product {
            if name == "S_1_0" {
                return Some(p.report.chain.spq.entries()[0].value);
            }
        }
        self.columns().into_iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }
}

/// Grid of `steps` points spanning `[lo, hi]`, both ends included.
pub fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

pub struct SweepOutput {
    pub param: String,
    pub rows: Vec<Row>,
}

/// Evaluates every grid point (in parallel) and returns rows in grid order.
pub fn run_sweep(s: &Scenario, settings: &Settings) -> Result<SweepOutput, CliError> {
    let (param, range, steps) = s
        .sweep()
        .ok_or_else(|| CliError::Validation("scenario has no sweep task".into()))?;
    let base = s.vars()?;
    let points = grid(range[0].eval(&base)?, range[1].eval(&base)?, steps);
    let results: Vec<Result<Row, CliError>> = points
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let tag = |e: CliError| match e {
                CliError::Invariant { message, .. } => CliError::Invariant {
                    context: format!(" in row {} ({param} = {t})", k + 1),
                    message,
                },
                other => other,
            };
            let point = evaluate_point(s, settings, &base.with(param, t)).map_err(tag)?;
            Ok(Row {
                sweep: Some(t),
                columns: point.columns(),
            })
        })
        .collect();
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(SweepOutput {
        param: param.to_owned(),
        rows,
    })
}

/// One expectation compared against a computed point.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub quantity: String,
    pub expected: f64,
    pub computed: Option<f64>,
    pub tolerance: f64,
    pub required: bool,
}

impl Comparison {
    pub fn matches(&self) -> bool {
        matches!(self.computed, Some(c) if (c - self.expected).abs() <= self.tolerance)
    }
}

pub fn compare(s: &Scenario, point: &PointReport) -> Vec<Comparison> {
    s.expect
        .iter()
        .map(|e| Comparison {
            quantity: e.quantity.clone(),
            expected: e.value,
            computed: point.value(&e.quantity),
            tolerance: e.tolerance,
            required: e.required,
        })
        .collect()
}

fn strategy_label(search: &PermutationSearch) -> &'static str {
    if search.exhaustive {
        "exhaustive"
    } else {
        "sampled"
    }
}

/// Human-readable summary for a single point.
pub fn render_report(settings: &Settings, point: &PointReport, comparisons: &[Comparison]) -> String {
    let mut out = String::new();
    let gauge = match settings.gauge {
        Gauge::HermitianSqrt => "sqrt",
        Gauge::Cholesky => "cholesky",
    };
    let _ = writeln!(out, "metric {}, gauge {gauge}, d = {}", settings.metric, point.dim);
    if let Some(p) = &point.product {
        let chain = &p.report.chain;
        let _ = writeln!(out, "product = {:.3}  cauchy = {:.3}", chain.product, chain.cauchy);
        let _ = writeln!(out, "I(A) = {:.6}  I(B) = {:.6}", p.report.skew_a, p.report.skew_b);
        if p.with_chain {
            let ik: Vec<String> = chain.ik.iter().enumerate().map(|(k, v)| format!("I_{} = {v:.3}", k + 1)).collect();
            let _ = writeln!(out, "{}", ik.join("  "));
            let spq: Vec<String> = chain
                .spq
                .entries()
                .iter()
                .map(|e| format!("S_{}_{} = {:.3}", e.p, e.q, e.value))
                .collect();
            for line in spq.chunks(6) {
                let _ = writeln!(out, "{}", line.join("  "));
            }
        }
        if let Some(search) = &p.permuted {
            let _ = writeln!(
                out,
                "permutation search: {} over {} pairs",
                strategy_label(search),
                search.evaluated
            );
            for which in [skewbound_core::bounds::ChainKind::Ik, skewbound_core::bounds::ChainKind::Spq] {
                let best = search.best(which);
                let _ = writeln!(
                    out,
                    "  best permuted {} = {:.6} (pi_A = {}, pi_B = {})",
                    best.index, best.value, best.witness.0, best.witness.1
                );
            }
        }
    }
    if let Some(s) = &point.sum {
        let _ = writeln!(out, "sum = {:.6}  LB_thm3 = {:.6}  LB_norm = {:.6}", s.sum, s.theorem3.value, s.norm_bound.value);
        let perms: Vec<String> = s.witness_perms().iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "  LB_thm3 witness {} ({}, {} candidates); LB_norm at x = {}",
            perms.join(" "),
            if s.theorem3.exhaustive { "exhaustive" } else { "sampled" },
            s.theorem3.candidates.len(),
            s.norm_bound.sign
        );
    }
    for c in comparisons {
        let verdict = if c.matches() { "match" } else { "mismatch" };
        let computed = c.computed.map_or("n/a".to_owned(), |v| format!("{v:.6}"));
        let _ = writeln!(
            out,
            "{} = {computed} vs reference {} (tol {}): {verdict}{}",
            c.quantity,
            c.expected,
            c.tolerance,
            if c.required { "" } else { " [informational]" }
        );
    }
    out
}

/// Point evaluation at the scenario's parameter values (sweep start if swept).
pub fn run_compute(s: &Scenario, settings: &Settings) -> Result<(PointReport, Vec<Comparison>), CliError> {
    let mut vars = s.vars()?;
    if let Some((param, range, _)) = s.sweep() {
        if !vars.0.contains_key(param) {
            vars = vars.with(param, range[0].eval(&vars)?);
        }
    }
    let point = evaluate_point(s, settings, &vars)?;
    let comparisons = compare(s, &point);
    Ok((point, comparisons))
}

/// Fails if any required comparison is off.
pub fn enforce(comparisons: &[Comparison]) -> Result<(), CliError> {
    match comparisons.iter().find(|c| c.required && !c.matches()) {
        Some(c) => Err(CliError::Invariant {
            context: String::new(),
            message: format!(
                "{} = {:?} does not match the required value {} ± {}",
                c.quantity, c.computed, c.expected, c.tolerance
            ),
        }),
        None => Ok(()),
    }
}
