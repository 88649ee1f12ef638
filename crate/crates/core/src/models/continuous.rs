use super::{Contact, ModelKind, ReducedDynamics};
use crate::error::{Error, Result};
use crate::friction::FrictionLaw;
use crate::quad::GAUSS2;
use crate::signals::PeriodicSignal;

/// A piece `[start, end]` of the reference body on which density, the
/// deformation rate and the friction density law are constant in `ξ`.
#[derive(Debug, Clone)]
pub struct Cell {
    pub start: f64,
    pub end: f64,
    pub density: f64,
    /// `φ̇(t)` on this cell.
    pub phidot: PeriodicSignal,
    /// `φ(0)` on this cell.
    pub phi0: f64,
    /// Friction force per unit reference length.
    pub law: FrictionLaw,
}

impl Cell {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }
}

/// A one-dimensional body `Ω = [ξ_a, ξ_b]` with prescribed deformation
/// gradient, split into cells.
#[derive(Debug, Clone)]
pub struct ContinuousCrawler {
    period: f64,
    cells: Vec<Cell>,
    load: PeriodicSignal,
    nodes_per_cell: usize,
    mass: f64,
    /// `m_c` in `ż(t, ξ) = Σ_c (overlap_c(ξ) - m_c) φ̇_c(t)`.
    mean_offsets: Vec<f64>,
    phi_range: (f64, f64),
}

impl ContinuousCrawler {
    pub fn new(period: f64, cells: Vec<Cell>, load: PeriodicSignal, nodes_per_cell: usize) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::NonPositivePeriod(period));
        }
        if cells.is_empty() {
            return Err(Error::InvalidModel("a continuous body needs at least one cell".into()));
        }
        if nodes_per_cell < 2 || nodes_per_cell % 2 != 0 {
            return Err(Error::InvalidModel(format!(
                "nodes_per_cell must be a positive even number, got {nodes_per_cell}"
            )));
        }
        for (k, c) in cells.iter().enumerate() {
            if !(c.end > c.start) {
                return Err(Error::InvalidModel(format!("cell {k} is empty or reversed")));
            }
            if k > 0 && (c.start - cells[k - 1].end).abs() > 1e-12 * (1.0 + c.start.abs()) {
                return Err(Error::InvalidModel(format!("cell {k} does not start where cell {} ends", k - 1)));
            }
            if !(c.density >= 0.0) || !c.density.is_finite() {
                return Err(Error::InvalidModel(format!("cell {k} has negative density")));
            }
            for s in std::iter::once(&c.phidot).chain(c.law.signals()) {
                if (s.period() - period).abs() > 1e-12 * period {
                    return Err(Error::InvalidModel(format!("cell {k} has a signal of period {}", s.period())));
                }
            }
            let mean = c.phidot.mean_over_period();
            if mean.abs() > 1e-8 {
                return Err(Error::InvalidModel(format!(
                    "deformation rate of cell {k} has mean {mean:e}; φ must be T-periodic"
                )));
            }
        }
        if (load.period() - period).abs() > 1e-12 * period {
            return Err(Error::InvalidModel("B has a different period".into()));
        }
        let mass: f64 = cells.iter().map(|c| c.density * c.len()).sum();
        if !(mass > 0.0) {
            return Err(Error::InvalidModel("total mass must be positive".into()));
        }
        let mean_offsets = (0..cells.len())
            .map(|c| {
                let len_c = cells[c].len();
                let own = cells[c].density * len_c * len_c / 2.0;
                let later: f64 = cells[c + 1..].iter().map(|d| d.density * d.len() * len_c).sum();
                (own + later) / mass
            })
            .collect();
        // φ(t) = φ(0) + ∫_0^t φ̇ on a time grid.
        let grid = 512;
        let mut phi_min = f64::INFINITY;
        let mut phi_max = f64::NEG_INFINITY;
        for c in &cells {
            for j in 0..=grid {
                let t = period * j as f64 / grid as f64;
                let phi = c.phi0 + c.phidot.integral(0.0, t);
                phi_min = phi_min.min(phi);
                phi_max = phi_max.max(phi);
            }
        }
        if !(phi_min > 0.0) {
            return Err(Error::InvalidModel(format!(
                "deformation gradient φ reaches {phi_min}, must stay positive"
            )));
        }
        Ok(Self {
            period,
            cells,
            load,
            nodes_per_cell,
            mass,
            mean_offsets,
            phi_range: (phi_min, phi_max),
        })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn load(&self) -> &PeriodicSignal {
        &self.load
    }

    pub fn nodes_per_cell(&self) -> usize {
        self.nodes_per_cell
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.cells[0].start, self.cells[self.cells.len() - 1].end)
    }

    /// Sampled `(φ_min, φ_max)` of the deformation gradient.
    pub fn phi_range(&self) -> (f64, f64) {
        self.phi_range
    }

    /// Coefficients `κ_c(ξ)` with `ż(t, ξ) = Σ_c κ_c(ξ) φ̇_c(t)`.
    pub fn shift_coefficients(&self, xi: f64) -> Result<Vec<f64>> {
        let (a, b) = self.domain();
        if !(xi >= a && xi <= b) {
            return Err(Error::OutsideDomain { xi, a, b });
        }
        Ok(self
            .cells
            .iter()
            .zip(&self.mean_offsets)
            .map(|(c, m)| (xi - c.start).clamp(0.0, c.len()) - m)
            .collect())
    }

    /// `ż(t, ξ)`, the velocity of material point `ξ` relative to the barycentre.
    pub fn relative_velocity(&self, t: f64, xi: f64) -> Result<f64> {
        let k = self.shift_coefficients(xi)?;
        Ok(self.cells.iter().zip(k).map(|(c, k)| k * c.phidot.eval(t)).sum())
    }

    /// Quadrature nodes `(ξ, weight, cell)`: composite two-point Gauss.
    pub fn nodes(&self) -> Vec<(f64, f64, usize)> {
        let panels = self.nodes_per_cell / 2;
        let mut out = Vec::with_capacity(self.cells.len() * self.nodes_per_cell);
        for (ci, c) in self.cells.iter().enumerate() {
            let h = c.len() / panels as f64;
            for p in 0..panels {
                let mid = c.start + (p as f64 + 0.5) * h;
                for g in GAUSS2 {
                    out.push((mid + 0.5 * h * g, 0.5 * h, ci));
                }
            }
        }
        out
    }

    /// `(ζ-(t), ζ+(t))`: min and max of `-ż(t, ·)` over the body. `ż` is
    /// piecewise linear in `ξ`, so cell ends suffice.
    pub fn zeta(&self, t: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in &self.cells {
            for xi in [c.start, c.end] {
                let z = -self.relative_velocity(t, xi).unwrap_or(0.0);
                lo = lo.min(z);
                hi = hi.max(z);
            }
        }
        (lo, hi)
    }
}

/// `G(t, v) = (B(t) + ∫_Ω f(t, ξ, v + ż(t, ξ)) dξ) / M` by composite
/// quadrature on each cell.
pub fn reduce_continuous(crawler: &ContinuousCrawler) -> Result<ReducedDynamics> {
    let mut contacts = Vec::new();
    for (xi, weight, cell) in crawler.nodes() {
        let kappa = crawler.shift_coefficients(xi)?;
        contacts.push(Contact {
            weight,
            law: cell,
            shift: kappa
                .into_iter()
                .enumerate()
                .filter(|&(c, k)| k != 0.0 && crawler.cells[c].phidot.as_constant() != Some(0.0))
                .collect(),
        });
    }
    ReducedDynamics::assemble(
        crawler.period,
        crawler.mass,
        crawler.load.clone(),
        crawler.cells.iter().map(|c| c.phidot.clone()).collect(),
        crawler.cells.iter().map(|c| c.law.clone()).collect(),
        contacts,
        ModelKind::Continuous,
    )
}
