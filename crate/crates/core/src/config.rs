//! JSON run configurations: a named scenario or a full model description,
//! plus solver settings and command parameters.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_path_to_error::Segment;

use crate::error::{Error, Result};
use crate::friction::{FrictionLaw, MonotoneGraph, Perturbation, TailBounds};
use crate::models::{Cell, ContinuousCrawler, DiscreteCrawler};
use crate::scenarios::{self, Model, ScenarioId, ScenarioParams};
use crate::signals::{parse_signal, PeriodicSignal};
use crate::solver::SolverConfig;

/// A signal in JSON: a number, an expression, or a table of `[t, value]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalSpec {
    Constant(f64),
    Expr(String),
    Table {
        table: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lipschitz: Option<f64>,
    },
}

impl SignalSpec {
    fn build(&self, period: f64, bindings: &HashMap<String, f64>, pointer: &str) -> Result<PeriodicSignal> {
        let built = match self {
            SignalSpec::Constant(c) => Ok(PeriodicSignal::constant(period, *c)),
            SignalSpec::Expr(text) => parse_signal(text, period, bindings),
            SignalSpec::Table { table, lipschitz } => PeriodicSignal::table(period, table.clone())
                .map(|s| match lipschitz {
                    Some(l) => s.with_lipschitz(*l),
                    None => s,
                }),
        };
        built.map_err(|e| Error::config(pointer, e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawType {
    Dry,
    Viscous,
    Bingham,
    Stribeck,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum PsiSpec {
    Stribeck {
        amplitude: f64,
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<SignalSpec>,
    },
    Table {
        knots: Vec<(f64, f64)>,
        lipschitz: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<SignalSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub lower: SignalSpec,
    pub upper: SignalSpec,
    pub threshold: f64,
}

/// A friction law in JSON. `mu` sets both dry coefficients at once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    #[serde(rename = "type")]
    pub kind: LawType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<SignalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_plus: Option<SignalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_minus: Option<SignalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_v: Option<SignalSpec>,
    /// Knots `[u, value]` of a nondecreasing graph added to the monotone part.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bounds: Option<TailSpec>,
}

impl LawSpec {
    pub fn build(&self, period: f64, bindings: &HashMap<String, f64>, pointer: &str) -> Result<FrictionLaw> {
        let sig = |s: &SignalSpec, field: &str| s.build(period, bindings, &format!("{pointer}/{field}"));
        let dry = || -> Result<Option<(PeriodicSignal, PeriodicSignal)>> {
            let plus = self.mu_plus.as_ref().or(self.mu.as_ref());
            let minus = self.mu_minus.as_ref().or(self.mu.as_ref());
            match (plus, minus) {
                (Some(p), Some(m)) => Ok(Some((sig(p, "mu_plus")?, sig(m, "mu_minus")?))),
                (None, None) => Ok(None),
                _ => Err(Error::config(pointer, "give both mu_plus and mu_minus, or mu")),
            }
        };
        let need_dry = || dry()?.ok_or_else(|| Error::config(pointer, "dry coefficients are required"));
        let need_mu_v = || match &self.mu_v {
            Some(s) => sig(s, "mu_v"),
            None => Err(Error::config(format!("{pointer}/mu_v"), "mu_v is required")),
        };
        let psi = || -> Result<Option<Perturbation>> {
            let Some(spec) = &self.psi else { return Ok(None) };
            let at = format!("{pointer}/psi");
            let (p, scale) = match spec {
                PsiSpec::Stribeck { amplitude, width, scale } => (Perturbation::stribeck(*amplitude, *width), scale),
                PsiSpec::Table { knots, lipschitz, scale } => (Perturbation::table(knots.clone(), *lipschitz), scale),
            };
            let mut p = p.map_err(|e| Error::config(&at, e.to_string()))?;
            if let Some(s) = scale {
                p = p.with_scale(s.build(period, bindings, &format!("{at}/scale"))?);
            }
            Ok(Some(p))
        };
        let forbid = |present: bool, field: &str| {
            if present {
                Err(Error::config(format!("{pointer}/{field}"), format!("not allowed for a {:?} law", self.kind)))
            } else {
                Ok(())
            }
        };
        let law = match self.kind {
            LawType::Dry | LawType::Viscous | LawType::Bingham | LawType::Stribeck => {
                forbid(self.extra.is_some(), "extra")?;
                forbid(self.tail_bounds.is_some(), "tail_bounds")?;
                if self.kind != LawType::Stribeck {
                    forbid(self.psi.is_some(), "psi")?;
                }
                if matches!(self.kind, LawType::Dry | LawType::Stribeck) {
                    forbid(self.mu_v.is_some(), "mu_v")?;
                }
                match self.kind {
                    LawType::Dry => {
                        let (p, m) = need_dry()?;
                        FrictionLaw::dry(p, m)
                    }
                    LawType::Viscous => {
                        forbid(self.mu.is_some() || self.mu_plus.is_some() || self.mu_minus.is_some(), "mu")?;
                        FrictionLaw::viscous(need_mu_v()?)
                    }
                    LawType::Bingham => {
                        let (p, m) = need_dry()?;
                        FrictionLaw::bingham(need_mu_v()?, p, m)
                    }
                    _ => {
                        let (p, m) = need_dry()?;
                        let psi = psi()?.ok_or_else(|| Error::config(format!("{pointer}/psi"), "psi is required"))?;
                        FrictionLaw::stribeck(p, m, psi)
                    }
                }
            }
            LawType::Custom => {
                let extra = match &self.extra {
                    Some(k) => Some(
                        MonotoneGraph::new(k.clone()).map_err(|e| Error::config(format!("{pointer}/extra"), e.to_string()))?,
                    ),
                    None => None,
                };
                let tails = match &self.tail_bounds {
                    Some(t) => Some(TailBounds {
                        lower: sig(&t.lower, "tail_bounds/lower")?,
                        upper: sig(&t.upper, "tail_bounds/upper")?,
                        threshold: t.threshold,
                    }),
                    None => None,
                };
                let mu_v = self.mu_v.as_ref().map(|s| sig(s, "mu_v")).transpose()?;
                FrictionLaw::custom(mu_v, dry()?, extra, psi()?, tails)
            }
        };
        law.map_err(|e| match e {
            Error::Config { .. } => e,
            other => Error::config(pointer, other.to_string()),
        })
    }
}

fn default_nodes() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscreteSpec {
    #[serde(rename = "T")]
    pub period: f64,
    pub masses: Vec<f64>,
    pub w: Vec<SignalSpec>,
    pub laws: Vec<LawSpec>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub load: Option<SignalSpec>,
    /// Names usable in signal expressions.
    #[serde(default, skip_serializing_if = "HashMap::is_empty")]
    pub params: HashMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuousSpec {
    #[serde(rename = "T")]
    pub period: f64,
    pub omega: (f64, f64),
    /// Cell boundaries from `omega.0` to `omega.1`; uniform cells when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<f64>>,
    pub rho: Vec<f64>,
    pub phidot: Vec<SignalSpec>,
    /// `φ(0)` per cell; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi0: Option<Vec<f64>>,
    pub law_field: Vec<LawSpec>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub load: Option<SignalSpec>,
    #[serde(default = "default_nodes")]
    pub nodes_per_cell: usize,
    #[serde(default, skip_serializing_if = "HashMap::is_empty")]
    pub params: HashMap<String, f64>,
}

/// A model in JSON, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelSpec {
    Discrete(DiscreteSpec),
    Continuous(ContinuousSpec),
}

/// Deserializes `value` reporting errors as JSON pointers below `prefix`.
fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = pointer_of(e.path());
        let pointer = if inner == "/" { prefix.to_string() } else { format!("{prefix}{inner}") };
        Error::config(if pointer.is_empty() { "/".to_string() } else { pointer }, e.into_inner().to_string())
    })
}

impl ModelSpec {
    fn from_json_value(mut value: serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::config("/model", "expected an object"))?;
        let kind = obj
            .remove("type")
            .ok_or_else(|| Error::config("/model/type", "missing field `type`"))?;
        match kind.as_str() {
            Some("discrete") => Ok(ModelSpec::Discrete(from_value(value, "/model")?)),
            Some("continuous") => Ok(ModelSpec::Continuous(from_value(value, "/model")?)),
            _ => Err(Error::config("/model/type", format!("expected \"discrete\" or \"continuous\", got {kind}"))),
        }
    }
}

fn wrap_model(e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => Error::config("/model", other.to_string()),
    }
}

impl ModelSpec {
    pub fn build(&self) -> Result<Model> {
        match self {
            ModelSpec::Discrete(DiscreteSpec {
                period,
                masses,
                w,
                laws,
                load,
                params,
            }) => {
                let period = *period;
                let w = w
                    .iter()
                    .enumerate()
                    .map(|(i, s)| s.build(period, params, &format!("/model/w/{i}")))
                    .collect::<Result<Vec<_>>>()?;
                let laws = laws
                    .iter()
                    .enumerate()
                    .map(|(i, l)| l.build(period, params, &format!("/model/laws/{i}")))
                    .collect::<Result<Vec<_>>>()?;
                let load = match load {
                    Some(s) => s.build(period, params, "/model/B")?,
                    None => PeriodicSignal::constant(period, 0.0),
                };
                DiscreteCrawler::new(period, masses.clone(), w, laws, load)
                    .map(Model::Discrete)
                    .map_err(wrap_model)
            }
            ModelSpec::Continuous(ContinuousSpec {
                period,
                omega,
                partition,
                rho,
                phidot,
                phi0,
                law_field,
                load,
                nodes_per_cell,
                params,
            }) => {
                let period = *period;
                let n = rho.len();
                if phidot.len() != n || law_field.len() != n {
                    return Err(Error::config(
                        "/model",
                        format!("{n} densities but {} phidot and {} laws", phidot.len(), law_field.len()),
                    ));
                }
                let cuts = match partition {
                    Some(p) => {
                        if p.len() != n + 1 || p[0] != omega.0 || p[n] != omega.1 {
                            return Err(Error::config(
                                "/model/partition",
                                "partition must list n + 1 boundaries from omega[0] to omega[1]",
                            ));
                        }
                        p.clone()
                    }
                    None => (0..=n).map(|k| omega.0 + (omega.1 - omega.0) * k as f64 / n as f64).collect(),
                };
                if let Some(p) = phi0 {
                    if p.len() != n {
                        return Err(Error::config("/model/phi0", format!("expected {n} values")));
                    }
                }
                let cells = (0..n)
                    .map(|c| {
                        Ok(Cell {
                            start: cuts[c],
                            end: cuts[c + 1],
                            density: rho[c],
                            phidot: phidot[c].build(period, params, &format!("/model/phidot/{c}"))?,
                            phi0: phi0.as_ref().map_or(1.0, |p| p[c]),
                            law: law_field[c].build(period, params, &format!("/model/law_field/{c}"))?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let load = match load {
                    Some(s) => s.build(period, params, "/model/B")?,
                    None => PeriodicSignal::constant(period, 0.0),
                };
                ContinuousCrawler::new(period, cells, load, *nodes_per_cell)
                    .map(Model::Continuous)
                    .map_err(wrap_model)
            }
        }
    }
}

/// Parameter swept by the `sweep` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "T")]
    Period,
    #[serde(rename = "load")]
    Load,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "v0")]
    V0,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Command run for every value, e.g. `"attractor"`.
    pub command: String,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Everything a command needs. Exactly one of `scenario` and `model` is set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<usize>,
    /// Bracket and fixed-point tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodicity_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

impl RunConfig {
    pub fn scenario(id: ScenarioId) -> Self {
        Self {
            scenario: Some(id),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::config("/", e.to_string()))?;
        let model = value.as_object_mut().and_then(|o| o.remove("model"));
        let mut cfg: RunConfig = from_value(value, "")?;
        cfg.model = model.map(ModelSpec::from_json_value).transpose()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn params(&self) -> ScenarioParams {
        ScenarioParams {
            alpha: self.alpha,
            period: self.period,
            load: self.load,
            theta: self.theta,
        }
    }

    /// Checks the invariants and that the model builds.
    pub fn validate(&self) -> Result<()> {
        match (&self.scenario, &self.model) {
            (Some(_), Some(_)) => return Err(Error::config("/", "give either `scenario` or `model`, not both")),
            (None, None) => return Err(Error::config("/", "one of `scenario` or `model` is required")),
            (None, Some(_)) => {
                for (name, given) in [
                    ("alpha", self.alpha.is_some()),
                    ("T", self.period.is_some()),
                    ("load", self.load.is_some()),
                    ("theta", self.theta.is_some()),
                ] {
                    if given {
                        return Err(Error::config(format!("/{name}"), "only scenarios take overrides"));
                    }
                }
            }
            _ => {}
        }
        self.solver.validate()?;
        for (name, v) in [("tol", self.tol), ("periodicity_tol", self.periodicity_tol)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(Error::config(format!("/{name}"), "must be positive"));
                }
            }
        }
        if self.periods == Some(0) {
            return Err(Error::config("/periods", "must be at least 1"));
        }
        if let Some(v0) = self.v0 {
            if !v0.is_finite() {
                return Err(Error::config("/v0", "must be finite"));
            }
        }
        self.build_model()?.reduce()?;
        Ok(())
    }

    pub fn build_model(&self) -> Result<Model> {
        match (&self.scenario, &self.model) {
            (Some(id), _) => scenarios::build(*id, &self.params()),
            (None, Some(m)) => m.build(),
            (None, None) => Err(Error::config("/", "one of `scenario` or `model` is required")),
        }
    }
}
