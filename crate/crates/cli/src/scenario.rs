//! TOML scenario files: a state, named observables, a metric and a task list.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use skewbound_core::loo::Gauge;
use skewbound_core::{ComplexMatrix, DensityMatrix, MetricSpec, Observable, C64};

use crate::expr::{self, Vars};
use crate::CliError;

/// A number written either literally or as an expression string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Value(f64),
    Expr(String),
}

impl Num {
    pub fn eval(&self, vars: &Vars) -> Result<f64, CliError> {
        match self {
            Num::Value(v) if v.is_finite() => Ok(*v),
            Num::Value(v) => Err(CliError::Validation(format!("non-finite number {v}"))),
            Num::Expr(s) => expr::eval(s, vars),
        }
    }

    fn mentions(&self, name: &str) -> Result<bool, CliError> {
        match self {
            Num::Value(_) => Ok(false),
            Num::Expr(s) => expr::mentions(s, name),
        }
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num::Value(v)
    }
}

impl From<&str> for Num {
    fn from(s: &str) -> Self {
        Num::Expr(s.to_owned())
    }
}

/// `[re, im]`.
pub type ComplexEntry = [Num; 2];

fn eval_complex(z: &ComplexEntry, vars: &Vars) -> Result<C64, CliError> {
    Ok(C64::new(z[0].eval(vars)?, z[1].eval(vars)?))
}

fn eval_matrix(rows: &[Vec<ComplexEntry>], vars: &Vars) -> Result<ComplexMatrix, CliError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|z| eval_complex(z, vars)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComplexMatrix::from_rows(&rows)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    /// Qubit state `(I + r·σ)/2`.
    Bloch { r: [Num; 3] },
    /// State vector; renormalized if within 1e-6 of unit norm.
    Pure { amplitudes: Vec<ComplexEntry> },
    Density { matrix: Vec<Vec<ComplexEntry>> },
}

impl StateSpec {
    pub fn build(&self, vars: &Vars) -> Result<DensityMatrix, CliError> {
        Ok(match self {
            StateSpec::Bloch { r } => DensityMatrix::from_bloch([r[0].eval(vars)?, r[1].eval(vars)?, r[2].eval(vars)?])?,
            StateSpec::Pure { amplitudes } => {
                let psi = amplitudes.iter().map(|z| eval_complex(z, vars)).collect::<Result<Vec<_>, _>>()?;
                DensityMatrix::from_pure(&psi)?
            }
            StateSpec::Density { matrix } => DensityMatrix::new(eval_matrix(matrix, vars)?)?,
        })
    }

    fn numbers(&self) -> Vec<&Num> {
        match self {
            StateSpec::Bloch { r } => r.iter().collect(),
            StateSpec::Pure { amplitudes } => amplitudes.iter().flatten().collect(),
            StateSpec::Density { matrix } => matrix.iter().flatten().flatten().collect(),
        }
    }

    pub fn mentions(&self, name: &str) -> Result<bool, CliError> {
        for n in self.numbers() {
            if n.mentions(name)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub name: String,
    pub matrix: Vec<Vec<ComplexEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Task {
    /// `I(A)·I(B)` and `|Corr(A, B)|²`.
    Product { a: String, b: String },
    /// Product plus the `I_k` chain and `S_pq` table, optionally permutation-maximized.
    Chain {
        a: String,
        b: String,
        #[serde(default)]
        permuted: bool,
    },
    /// `Σ I(A_i)` with both sum lower bounds.
    Sum { observables: Vec<String> },
    /// Grid over `param`; `steps` points including both ends of `range`.
    Sweep { param: String, range: [Num; 2], steps: usize },
}

/// A value the report compares against, by CSV column name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub quantity: String,
    pub value: f64,
    pub tolerance: f64,
    /// A required mismatch is an invariant failure; others are only reported.
    #[serde(default)]
    pub required: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaugeName {
    #[default]
    Sqrt,
    Cholesky,
}

impl From<GaugeName> for Gauge {
    fn from(g: GaugeName) -> Self {
        match g {
            GaugeName::Sqrt => Gauge::HermitianSqrt,
            GaugeName::Cholesky => Gauge::Cholesky,
        }
    }
}

mod metric_str {
    use super::MetricSpec;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &MetricSpec, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(m)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<MetricSpec, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Field order matters: TOML needs plain values ahead of tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(with = "metric_str")]
    pub metric: MetricSpec,
    #[serde(default)]
    pub gauge: GaugeName,
    /// Free parameters; expressions here may use `pi` and `e` only.
    #[serde(default)]
    pub params: BTreeMap<String, Num>,
    pub state: StateSpec,
    pub observables: Vec<ObservableSpec>,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Expectation>,
}

impl Scenario {
    /// Parameter values from `[params]`.
    pub fn vars(&self) -> Result<Vars, CliError> {
        let mut vars = Vars::default();
        for (k, v) in &self.params {
            let value = v.eval(&Vars::default())?;
            vars.0.insert(k.clone(), value);
        }
        Ok(vars)
    }

    pub fn observable(&self, name: &str, vars: &Vars) -> Result<Observable, CliError> {
        let spec = self
            .observables
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| CliError::Validation(format!("unknown observable `{name}`")))?;
        Observable::new(eval_matrix(&spec.matrix, vars)?)
            .map_err(|e| CliError::Validation(format!("observable `{name}`: {e}")))
    }

    pub fn sweep(&self) -> Option<(&str, &[Num; 2], usize)> {
        self.tasks.iter().find_map(|t| match t {
            Task::Sweep { param, range, steps } => Some((param.as_str(), range, *steps)),
            _ => None,
        })
    }

    /// Everything that can be checked without evaluating bounds.
    pub fn validate(&self) -> Result<(), CliError> {
        let vars = self.vars()?;
        let sweep = self.sweep();
        let vars = match sweep {
            Some((param, range, _)) => vars.with(param, range[0].eval(&vars)?),
            None => vars,
        };
        let rho = self.state.build(&vars)?;
        let mut names = std::collections::BTreeSet::new();
        for o in &self.observables {
            if !names.insert(o.name.as_str()) {
                return Err(CliError::Validation(format!("duplicate observable `{}`", o.name)));
            }
            let obs = self.observable(&o.name, &vars)?;
            if obs.dim() != rho.dim() {
                return Err(CliError::Validation(format!(
                    "observable `{}` is {}x{} but the state is {}x{}",
                    o.name,
                    obs.dim(),
                    obs.dim(),
                    rho.dim(),
                    rho.dim()
                )));
            }
        }
        let mut products = 0;
        let mut sums = 0;
        let mut sweeps = 0;
        for t in &self.tasks {
            match t {
                Task::Product { a, b } | Task::Chain { a, b, .. } => {
                    products += 1;
                    for n in [a, b] {
                        if !names.contains(n.as_str()) {
                            return Err(CliError::Validation(format!("unknown observable `{n}`")));
                        }
                    }
                }
                Task::Sum { observables } => {
                    sums += 1;
                    if observables.len() < 2 {
                        return Err(CliError::Validation("a sum task needs at least two observables".into()));
                    }
                    if let Some(n) = observables.iter().find(|n| !names.contains(n.as_str())) {
                        return Err(CliError::Validation(format!("unknown observable `{n}`")));
                    }
                }
                Task::Sweep { param, steps, range } => {
                    sweeps += 1;
                    if *steps == 0 {
                        return Err(CliError::Validation("sweep needs at least one step".into()));
                    }
                    range[1].eval(&vars)?;
                    if !self.state.mentions(param)? {
                        return Err(CliError::Validation(format!(
                            "sweep parameter `{param}` does not appear in the state"
                        )));
                    }
                }
            }
        }
        if products > 1 || sums > 1 || sweeps > 1 {
            return Err(CliError::Validation(
                "at most one product/chain task, one sum task and one sweep per scenario".into(),
            ));
        }
        if products + sums == 0 {
            return Err(CliError::Validation("scenario has nothing to compute".into()));
        }
        Ok(())
    }
}

pub fn parse_str(text: &str) -> Result<Scenario, CliError> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_scenario(s: &Scenario) -> Result<String, CliError> {
    toml::to_string_pretty(s).map_err(|e| CliError::Validation(format!("cannot encode scenario: {e}")))
}
