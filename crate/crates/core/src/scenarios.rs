//! Built-in models from the classic crawler examples.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::friction::{FrictionLaw, Perturbation};
use crate::models::{
    reduce_continuous, reduce_discrete, Cell, ContinuousCrawler, DiscreteCrawler, ReducedDynamics,
};
use crate::signals::{parse_signal, PeriodicSignal};

/// Standard gravity used by the `theta` override.
pub const GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioId {
    /// Two masses, isotropic dry friction, square-wave actuation: a whole
    /// interval of constant periodic velocities.
    ExDry,
    /// As `ExDry` with doubled friction on the first mass: a family of
    /// triangular periodic orbits.
    ExDrystar,
    /// As `ExDry` with a Stribeck dip: three isolated periodic solutions.
    ExStrib,
    /// Constant isotropic viscous friction: zero net displacement.
    ExIncomp,
    /// Time-modulated viscous friction: net displacement `π/2` per cycle.
    ExComp,
    /// A continuous body that reproduces `ExDry`.
    ContDry,
    /// Dry friction with smooth actuation: a unique periodic solution.
    SmoothDry,
    /// `ExDry` on an incline with constant load.
    SlopeDry,
}

pub const ALL_SCENARIOS: [ScenarioId; 8] = [
    ScenarioId::ExDry,
    ScenarioId::ExDrystar,
    ScenarioId::ExStrib,
    ScenarioId::ExIncomp,
    ScenarioId::ExComp,
    ScenarioId::ContDry,
    ScenarioId::SmoothDry,
    ScenarioId::SlopeDry,
];

impl ScenarioId {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::ExDry => "ex-dry",
            ScenarioId::ExDrystar => "ex-drystar",
            ScenarioId::ExStrib => "ex-strib",
            ScenarioId::ExIncomp => "ex-incomp",
            ScenarioId::ExComp => "ex-comp",
            ScenarioId::ContDry => "cont-dry",
            ScenarioId::SmoothDry => "smooth-dry",
            ScenarioId::SlopeDry => "slope-dry",
        }
    }

    /// Overrides this scenario accepts.
    pub fn accepted_overrides(self) -> &'static [&'static str] {
        match self {
            ScenarioId::ExDry | ScenarioId::ExDrystar | ScenarioId::ExStrib | ScenarioId::ContDry => &["alpha", "T"],
            ScenarioId::SmoothDry => &["alpha"],
            ScenarioId::ExIncomp | ScenarioId::ExComp => &[],
            ScenarioId::SlopeDry => &["alpha", "T", "load", "theta"],
        }
    }

    pub fn default_period(self) -> f64 {
        match self {
            ScenarioId::ExDrystar => 2.0,
            ScenarioId::ExIncomp | ScenarioId::ExComp | ScenarioId::SmoothDry => 2.0 * PI,
            _ => 1.0,
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_SCENARIOS
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::config("/scenario", format!("unknown scenario `{s}`")))
    }
}

/// Optional parameter overrides of a scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    /// Constant load `B`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub load: Option<f64>,
    /// Incline angle; sets `B = -M g sin(theta)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl ScenarioParams {
    fn given(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.alpha.is_some() {
            out.push("alpha");
        }
        if self.period.is_some() {
            out.push("T");
        }
        if self.load.is_some() {
            out.push("load");
        }
        if self.theta.is_some() {
            out.push("theta");
        }
        out
    }
}

/// A crawler model of either kind.
#[derive(Debug, Clone)]
pub enum Model {
    Discrete(DiscreteCrawler),
    Continuous(ContinuousCrawler),
}

impl Model {
    pub fn reduce(&self) -> Result<ReducedDynamics> {
        match self {
            Model::Discrete(c) => reduce_discrete(c),
            Model::Continuous(c) => reduce_continuous(c),
        }
    }

    pub fn period(&self) -> f64 {
        match self {
            Model::Discrete(c) => c.period(),
            Model::Continuous(c) => c.period(),
        }
    }
}

fn sig(text: &str, period: f64, alpha: f64) -> Result<PeriodicSignal> {
    parse_signal(text, period, &HashMap::from([("alpha".to_string(), alpha)]))
}

fn square_pair(period: f64, alpha: f64) -> Result<Vec<PeriodicSignal>> {
    Ok(vec![
        sig("-1*square(t;T,alpha)", period, alpha)?,
        sig("square(t;T,alpha)", period, alpha)?,
    ])
}

/// Builds the model of a scenario with the given overrides.
pub fn build(id: ScenarioId, params: &ScenarioParams) -> Result<Model> {
    for name in params.given() {
        if !id.accepted_overrides().contains(&name) {
            return Err(Error::config(format!("/{name}"), format!("scenario {id} does not accept `{name}`")));
        }
    }
    let alpha = params.alpha.unwrap_or(1.0);
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::config("/alpha", "alpha must be positive"));
    }
    let period = params.period.unwrap_or(id.default_period());
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::config("/T", "T must be positive"));
    }
    let zero = PeriodicSignal::constant(period, 0.0);
    let coulomb = |mu: f64| FrictionLaw::coulomb(period, mu);
    let model = match id {
        ScenarioId::ExDry => Model::Discrete(DiscreteCrawler::new(
            period,
            vec![0.5, 0.5],
            square_pair(period, alpha)?,
            vec![coulomb(1.0)?, coulomb(1.0)?],
            zero,
        )?),
        ScenarioId::SlopeDry => {
            let load = match (params.load, params.theta) {
                (Some(_), Some(_)) => {
                    return Err(Error::config("/theta", "give either `load` or `theta`, not both"));
                }
                (Some(b), None) => b,
                (None, Some(theta)) => -GRAVITY * theta.sin(),
                (None, None) => -1.0,
            };
            Model::Discrete(DiscreteCrawler::new(
                period,
                vec![0.5, 0.5],
                square_pair(period, alpha)?,
                vec![coulomb(1.0)?, coulomb(1.0)?],
                PeriodicSignal::constant(period, load),
            )?)
        }
        ScenarioId::ExDrystar => Model::Discrete(DiscreteCrawler::new(
            period,
            vec![0.5, 0.5],
            square_pair(period, alpha)?,
            vec![coulomb(2.0)?, coulomb(1.0)?],
            zero,
        )?),
        ScenarioId::ExStrib => {
            let law = || {
                FrictionLaw::stribeck(
                    PeriodicSignal::constant(period, 1.0),
                    PeriodicSignal::constant(period, 1.0),
                    Perturbation::stribeck(0.5, alpha)?,
                )
            };
            Model::Discrete(DiscreteCrawler::new(
                period,
                vec![0.5, 0.5],
                square_pair(period, alpha)?,
                vec![law()?, law()?],
                zero,
            )?)
        }
        ScenarioId::ExIncomp => Model::Discrete(DiscreteCrawler::new(
            period,
            vec![1.0, 1.0],
            vec![sig("cos(t)", period, alpha)?, sig("-cos(t)", period, alpha)?],
            vec![
                FrictionLaw::viscous(PeriodicSignal::constant(period, 1.0))?,
                FrictionLaw::viscous(PeriodicSignal::constant(period, 2.0))?,
            ],
            zero,
        )?),
        ScenarioId::ExComp => Model::Discrete(DiscreteCrawler::new(
            period,
            vec![1.0, 1.0],
            vec![sig("-sin(t)", period, alpha)?, sig("sin(t)", period, alpha)?],
            vec![
                FrictionLaw::viscous(sig("2+sin(t)", period, alpha)?)?,
                FrictionLaw::viscous(sig("2-sin(t)", period, alpha)?)?,
            ],
            zero,
        )?),
        ScenarioId::SmoothDry => Model::Discrete(DiscreteCrawler::new(
            period,
            vec![0.5, 0.5],
            vec![sig("alpha*cos(t)", period, alpha)?, sig("-alpha*cos(t)", period, alpha)?],
            vec![coulomb(1.0)?, coulomb(1.0)?],
            zero,
        )?),
        ScenarioId::ContDry => {
            let twice_w2 = sig("2*square(t;T,alpha)", period, alpha)?;
            let cell = |start: f64, phidot: PeriodicSignal, mu: f64| -> Result<Cell> {
                Ok(Cell {
                    start,
                    end: start + 1.0,
                    density: 1.0 / 3.0,
                    phidot,
                    phi0: 1.0,
                    law: coulomb(mu)?,
                })
            };
            Model::Continuous(ContinuousCrawler::new(
                period,
                vec![
                    cell(0.0, PeriodicSignal::constant(period, 0.0), 1.0)?,
                    cell(1.0, twice_w2, 0.0)?,
                    cell(2.0, PeriodicSignal::constant(period, 0.0), 1.0)?,
                ],
                zero,
                8,
            )?)
        }
    };
    Ok(model)
}

/// Reduced dynamics of a scenario.
pub fn dynamics(id: ScenarioId, params: &ScenarioParams) -> Result<ReducedDynamics> {
    build(id, params)?.reduce()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in ALL_SCENARIOS {
            assert_eq!(id.name().parse::<ScenarioId>().unwrap(), id);
        }
        assert!("ex-nope".parse::<ScenarioId>().is_err());
    }

    #[test]
    fn overrides_are_checked() {
        let p = ScenarioParams {
            alpha: Some(2.0),
            ..Default::default()
        };
        assert!(build(ScenarioId::ExComp, &p).is_err());
        assert!(build(ScenarioId::ExDry, &p).is_ok());
    }

    #[test]
    fn every_scenario_builds() {
        for id in ALL_SCENARIOS {
            dynamics(id, &ScenarioParams::default()).unwrap();
        }
    }
}
