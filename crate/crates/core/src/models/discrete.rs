use log::warn;

use super::{Contact, ModelKind, ReducedDynamics};
use crate::error::{Error, Result};
use crate::friction::FrictionLaw;
use crate::signals::PeriodicSignal;

/// `n` point masses with prescribed shape velocities `w_i = z_i'` relative
/// to the barycentre, each subject to its own friction law.
#[derive(Debug, Clone)]
pub struct DiscreteCrawler {
    period: f64,
    masses: Vec<f64>,
    shape_velocities: Vec<PeriodicSignal>,
    laws: Vec<FrictionLaw>,
    load: PeriodicSignal,
    warnings: Vec<String>,
}

fn same_period(name: &str, s: &PeriodicSignal, period: f64) -> Result<()> {
    if (s.period() - period).abs() > 1e-12 * period {
        return Err(Error::InvalidModel(format!(
            "{name} has period {} but the model period is {period}",
            s.period()
        )));
    }
    Ok(())
}

impl DiscreteCrawler {
    pub fn new(
        period: f64,
        masses: Vec<f64>,
        shape_velocities: Vec<PeriodicSignal>,
        laws: Vec<FrictionLaw>,
        load: PeriodicSignal,
    ) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::NonPositivePeriod(period));
        }
        let n = masses.len();
        if n == 0 {
            return Err(Error::InvalidModel("a crawler needs at least one mass".into()));
        }
        if shape_velocities.len() != n || laws.len() != n {
            return Err(Error::InvalidModel(format!(
                "{n} masses but {} shape velocities and {} laws",
                shape_velocities.len(),
                laws.len()
            )));
        }
        if masses.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
            return Err(Error::InvalidModel("masses must be finite and nonnegative".into()));
        }
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidModel("total mass must be positive".into()));
        }
        same_period("B", &load, period)?;
        for (i, w) in shape_velocities.iter().enumerate() {
            same_period(&format!("w[{i}]"), w, period)?;
            let mean = w.mean_over_period();
            if mean.abs() > 1e-8 {
                return Err(Error::InvalidModel(format!(
                    "w[{i}] has mean {mean:e}; shape velocities must integrate to zero over a period"
                )));
            }
        }
        for (i, law) in laws.iter().enumerate() {
            for s in law.signals() {
                same_period(&format!("law[{i}] coefficient"), s, period)?;
            }
        }
        let mut warnings = Vec::new();
        let grid = 1000;
        let wmax = shape_velocities
            .iter()
            .map(|w| {
                let (lo, hi) = w.range();
                lo.abs().max(hi.abs())
            })
            .fold(0.0, f64::max);
        let worst = (0..grid)
            .map(|j| {
                let t = period * j as f64 / grid as f64;
                masses
                    .iter()
                    .zip(&shape_velocities)
                    .map(|(m, w)| m * w.eval(t))
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max);
        if worst > 1e-8 * total * wmax {
            let msg = format!(
                "shape velocities are not barycentric: |Σ m_i w_i| reaches {worst:e}"
            );
            warn!("{msg}");
            warnings.push(msg);
        }
        Ok(Self {
            period,
            masses,
            shape_velocities,
            laws,
            load,
            warnings,
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn shape_velocities(&self) -> &[PeriodicSignal] {
        &self.shape_velocities
    }

    pub fn laws(&self) -> &[FrictionLaw] {
        &self.laws
    }

    pub fn load(&self) -> &PeriodicSignal {
        &self.load
    }

    /// Non-fatal findings of validation, such as a non-barycentric shape.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Relative position `z_i(t) = ∫_0^t w_i` (taking `z_i(0) = 0`).
    pub fn relative_position(&self, i: usize, t: f64) -> f64 {
        self.shape_velocities[i].integral(0.0, t)
    }
}

/// `G(t, v) = (B(t) + Σ_i F_i(t, v + w_i(t))) / M`.
pub fn reduce_discrete(crawler: &DiscreteCrawler) -> Result<ReducedDynamics> {
    let contacts = (0..crawler.masses.len())
        .map(|i| Contact {
            weight: 1.0,
            law: i,
            shift: vec![(i, 1.0)],
        })
        .collect();
    ReducedDynamics::assemble(
        crawler.period,
        crawler.total_mass(),
        crawler.load.clone(),
        crawler.shape_velocities.clone(),
        crawler.laws.clone(),
        contacts,
        ModelKind::Discrete,
    )
}
