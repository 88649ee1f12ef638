//! Forward integration of `v' ∈ G(t, v)`.
//!
//! Each step solves the implicit-explicit inclusion
//!
//! ```text
//! v' + dt 𝒜(t + dt, v') ∋ v + dt p(t + dt, v)
//! ```
//!
//! with the monotone part `𝒜` implicit and the Lipschitz part `p` explicit.
//! Time signals are evaluated at the end of the step on the piece active at
//! its midpoint, so a step ending on a jump sees the left limit. Inside a
//! period, [`Integrator`] also splits a step where the velocity would pass
//! a kink or jump of `G` in `v`, which removes the first-order error such a
//! crossing otherwise costs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::friction::DEFAULT_RESOLVENT_TOL;
use crate::models::{ReducedDynamics, Snapshot};

/// Sliding speeds below this are reported as stuck.
pub const STICK_EPS: f64 = 1e-9;

/// Substeps per step in oracle mode.
pub const ORACLE_REFINEMENT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub steps_per_period: usize,
    pub resolvent_tol: f64,
    /// Put grid points on every time breakpoint of the model.
    pub event_align: bool,
    /// Replace the proximal step by explicit micro-steps with clamping at
    /// stiction abscissae. Slow; meant for cross-validation.
    pub oracle_mode: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            steps_per_period: 4096,
            resolvent_tol: DEFAULT_RESOLVENT_TOL,
            event_align: true,
            oracle_mode: false,
        }
    }
}

impl SolverConfig {
    pub fn with_steps(steps_per_period: usize) -> Self {
        Self {
            steps_per_period,
            ..Self::default()
        }
    }

    pub fn oracle(self) -> Self {
        Self {
            oracle_mode: true,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 16 {
            return Err(Error::config(
                "/solver/steps_per_period",
                format!("must be at least 16, got {}", self.steps_per_period),
            ));
        }
        if !(self.resolvent_tol > 0.0) {
            return Err(Error::config("/solver/resolvent_tol", "must be positive"));
        }
        Ok(())
    }
}

/// A sampled solution with the accumulated barycentre displacement.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    /// `x̄(t) - x̄(t_0)` by the trapezoid rule on `v`.
    pub x: Vec<f64>,
    /// Contacts (masses or quadrature nodes) sliding slower than [`STICK_EPS`].
    pub stick: Vec<Vec<usize>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn final_v(&self) -> f64 {
        *self.v.last().expect("empty trajectory")
    }

    pub fn displacement(&self) -> f64 {
        self.x.last().copied().unwrap_or(0.0)
    }

    fn push(&mut self, t: f64, v: f64, stick: Vec<usize>) {
        let x = match (self.t.last(), self.v.last(), self.x.last()) {
            (Some(&t0), Some(&v0), Some(&x0)) => x0 + 0.5 * (t - t0) * (v + v0),
            _ => 0.0,
        };
        self.t.push(t);
        self.v.push(v);
        self.x.push(x);
        self.stick.push(stick);
    }

    /// CSV with header `t,v,x,stick`; `stick` joins indices with `;`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,v,x,stick")?;
        for k in 0..self.len() {
            let stick: Vec<String> = self.stick[k].iter().map(usize::to_string).collect();
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{}",
                self.t[k],
                self.v[k],
                self.x[k],
                stick.join(";")
            )?;
        }
        Ok(())
    }
}

struct PlannedStep {
    /// Local start and end within `[0, T]`.
    a: f64,
    b: f64,
    snaps: Vec<Snapshot>,
}

/// Integrator bound to one model, with the per-period step plan cached.
pub struct Integrator<'a> {
    dynamics: &'a ReducedDynamics,
    cfg: SolverConfig,
    steps: Vec<PlannedStep>,
    lipschitz: f64,
}

fn substeps_for(dt: f64, lipschitz: f64) -> usize {
    ((dt * lipschitz / 0.5).ceil() as usize).max(1)
}

impl<'a> Integrator<'a> {
    pub fn new(dynamics: &'a ReducedDynamics, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let period = dynamics.period();
        let n = cfg.steps_per_period;
        let mut grid: Vec<f64> = (0..=n).map(|j| period * j as f64 / n as f64).collect();
        if cfg.event_align {
            grid.extend(dynamics.breakpoints().times());
            grid.sort_by(f64::total_cmp);
            let merge = 1e-12 * period;
            let mut merged: Vec<f64> = Vec::with_capacity(grid.len());
            for t in grid {
                match merged.last() {
                    Some(&last) if t - last <= merge => {}
                    _ => merged.push(t),
                }
            }
            *merged.last_mut().unwrap() = period;
            grid = merged;
        }
        let lipschitz = dynamics.perturbation_lipschitz();
        let mut integrator = Self {
            dynamics,
            cfg,
            steps: Vec::with_capacity(grid.len()),
            lipschitz,
        };
        integrator.steps = grid
            .windows(2)
            .map(|w| PlannedStep {
                a: w[0],
                b: w[1],
                snaps: if cfg.oracle_mode {
                    Vec::new()
                } else {
                    integrator.snapshots(w[0], w[1])
                },
            })
            .collect();
        Ok(integrator)
    }

    pub fn dynamics(&self) -> &ReducedDynamics {
        self.dynamics
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Local grid times of one period, `0` through `T`.
    pub fn grid(&self) -> Vec<f64> {
        let mut g: Vec<f64> = self.steps.iter().map(|s| s.a).collect();
        g.push(self.dynamics.period());
        g
    }

    fn snapshots(&self, a: f64, b: f64) -> Vec<Snapshot> {
        let n = substeps_for(b - a, self.lipschitz);
        let h = (b - a) / n as f64;
        (0..n)
            .map(|s| {
                let end = if s + 1 == n { b } else { a + (s + 1) as f64 * h };
                self.dynamics.snapshot(end, a + (s as f64 + 0.5) * h)
            })
            .collect()
    }

    fn implicit(&self, snap: &Snapshot, dt: f64, v: f64, t_end: f64) -> Result<f64> {
        let rhs = v + dt * self.dynamics.perturbation_at(snap, v);
        self.dynamics
            .resolve(snap, dt, rhs, self.cfg.resolvent_tol)
            .map_err(|e| match e {
                Error::NumericalFailure { message, .. } => Error::NumericalFailure { t: t_end, v, message },
                other => other,
            })
    }

    /// Implicit step that stops where the velocity first meets a kink or
    /// jump of `G` in `v`, and spends the rest of the step from there.
    /// The crossing fraction comes from the implicit increment on the affine
    /// piece of `𝒜` the velocity starts on, so the split agrees with the
    /// plain implicit step when that one just reaches the abscissa.
    fn proximal(&self, snap: &Snapshot, dt: f64, v: f64, t_end: f64) -> Result<f64> {
        let mut v = v;
        let mut rest = dt;
        for _ in 0..8 {
            let next = self.implicit(snap, rest, v, t_end)?;
            if next == v {
                return Ok(next);
            }
            let delta = self.piece_increment(snap, rest, v, next > v);
            let ahead = |a: f64| if delta > 0.0 { a > v && a < v + delta } else { a < v && a > v + delta };
            let Some(a) = snap
                .abscissae
                .iter()
                .copied()
                .filter(|&a| ahead(a))
                .min_by(|x, y| (x - v).abs().total_cmp(&(y - v).abs()))
            else {
                return Ok(next);
            };
            rest *= 1.0 - (a - v) / delta;
            v = a;
        }
        self.implicit(snap, rest, v, t_end)
    }

    /// Implicit increment over `dt` from `v` with `𝒜` replaced by the affine
    /// extension of its piece on the side `up` (right) or left of `v`.
    fn piece_increment(&self, snap: &Snapshot, dt: f64, v: f64, up: bool) -> f64 {
        let d = self.dynamics;
        let here = d.monotone_at(snap, v);
        let a0 = if up { here.hi } else { here.lo };
        let gap = snap
            .abscissae
            .iter()
            .map(|&a| if up { a - v } else { v - a })
            .filter(|&g| g > 0.0)
            .fold(2.0, f64::min);
        let h = 0.5 * gap;
        let probe = d.monotone_at(snap, if up { v + h } else { v - h });
        let sigma = if up { (probe.lo - a0) / h } else { (a0 - probe.hi) / h };
        dt * (d.perturbation_at(snap, v) - a0) / (1.0 + dt * sigma.max(0.0))
    }

    /// Explicit micro-steps on `[a, b]` (local times). A micro-step that
    /// crosses an abscissa where `G` jumps stops there if `G` on the far side
    /// points back, and otherwise spends the rest of the micro-step at the
    /// far-side rate.
    fn oracle(&self, a: f64, b: f64, mut v: f64) -> f64 {
        let k = ORACLE_REFINEMENT * substeps_for(b - a, self.lipschitz);
        let h = (b - a) / k as f64;
        for s in 0..k {
            let start = a + s as f64 * h;
            let snap = self.dynamics.snapshot(start, start + 0.5 * h);
            let g = self.dynamics.g_at(&snap, v).min_norm();
            let next = v + h * g;
            let crossed = snap
                .jumps
                .iter()
                .copied()
                .filter(|&j| (v - j) * (next - j) < 0.0)
                .min_by(|x, y| (x - v).abs().total_cmp(&(y - v).abs()));
            v = match crossed {
                None => next,
                Some(j) => {
                    let at = self.dynamics.g_at(&snap, j);
                    let far = if next > v { at.lo } else { at.hi };
                    if (far > 0.0) == (next > v) && far != 0.0 {
                        j + (1.0 - (j - v) / (next - v)) * h * far
                    } else {
                        j
                    }
                }
            };
        }
        v
    }

    /// Advances `v` over the local window `[a, b]` of one period.
    fn advance(&self, step: Option<&PlannedStep>, a: f64, b: f64, v: f64, t_offset: f64) -> Result<f64> {
        if self.cfg.oracle_mode {
            return Ok(self.oracle(a, b, v));
        }
        let fresh;
        let snaps = match step {
            Some(s) => &s.snaps,
            None => {
                fresh = self.snapshots(a, b);
                &fresh
            }
        };
        let h = (b - a) / snaps.len() as f64;
        let mut v = v;
        for snap in snaps {
            v = self.proximal(snap, h, v, t_offset + b)?;
        }
        Ok(v)
    }

    fn stuck(&self, t: f64, anchor: f64, v: f64) -> Vec<usize> {
        let d = self.dynamics;
        (0..d.contacts().len())
            .filter(|&q| d.contacts()[q].weight > 0.0 && (v + d.shift_within(q, t, anchor)).abs() < STICK_EPS)
            .collect()
    }

    /// Solution on `[t0, t1]` sampled on the aligned grid.
    pub fn integrate(&self, v0: f64, t0: f64, t1: f64) -> Result<Trajectory> {
        let mut traj = Trajectory::default();
        traj.push(t0, v0, self.stuck(t0, t0, v0));
        self.run(v0, t0, t1, &mut |t, anchor, v| {
            traj.push(t, v, self.stuck(t, anchor, v));
        })?;
        Ok(traj)
    }

    /// Value at `t1` of the solution from `(t0, v0)`.
    pub fn solve_to(&self, v0: f64, t0: f64, t1: f64) -> Result<f64> {
        self.run(v0, t0, t1, &mut |_, _, _| {})
    }

    fn run(&self, v0: f64, t0: f64, t1: f64, record: &mut dyn FnMut(f64, f64, f64)) -> Result<f64> {
        if !(t1 > t0) {
            return Err(Error::InvalidStep(t1 - t0));
        }
        if !v0.is_finite() {
            return Err(Error::NumericalFailure {
                t: t0,
                v: v0,
                message: "non-finite initial value".into(),
            });
        }
        let period = self.dynamics.period();
        let snap_tol = 1e-12 * period;
        let k0 = (t0 / period).floor() as i64;
        let k1 = (t1 / period).ceil() as i64;
        let mut v = v0;
        for k in k0..k1 {
            let offset = k as f64 * period;
            let mut lo = t0 - offset;
            let mut hi = t1 - offset;
            if lo.abs() < snap_tol || lo < 0.0 {
                lo = 0.0;
            }
            if (hi - period).abs() < snap_tol || hi > period {
                hi = period;
            }
            if hi <= lo + snap_tol {
                continue;
            }
            let first = self.steps.partition_point(|s| s.b <= lo + snap_tol);
            for step in &self.steps[first..] {
                if step.a >= hi - snap_tol {
                    break;
                }
                let a = step.a.max(lo);
                let b = step.b.min(hi);
                let whole = (a - step.a).abs() <= snap_tol && (b - step.b).abs() <= snap_tol;
                v = if whole {
                    self.advance(Some(step), step.a, step.b, v, offset)?
                } else {
                    self.advance(None, a, b, v, offset)?
                };
                if !v.is_finite() {
                    return Err(Error::NumericalFailure {
                        t: offset + b,
                        v,
                        message: "solution left the reals".into(),
                    });
                }
                let end = if whole { step.b } else { b };
                record(offset + end, offset + 0.5 * (a + b), v);
            }
        }
        Ok(v)
    }

    /// `Φ_T(v0)`: value at `T` of the solution from `(0, v0)`.
    pub fn poincare(&self, v0: f64) -> Result<f64> {
        self.solve_to(v0, 0.0, self.dynamics.period())
    }

    /// `[Φ_T(v0), Φ_T²(v0), …, Φ_Tᵏ(v0)]`.
    pub fn iterates(&self, v0: f64, k: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(k);
        let mut v = v0;
        for _ in 0..k {
            v = self.poincare(v)?;
            out.push(v);
        }
        Ok(out)
    }
}

/// One step of size `dt` from `(t, v)`.
pub fn step(dynamics: &ReducedDynamics, t: f64, v: f64, dt: f64, cfg: &SolverConfig) -> Result<f64> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidStep(dt));
    }
    let product = dt * dynamics.perturbation_lipschitz();
    if product > 0.5 {
        return Err(Error::StepTooLarge { dt, product });
    }
    let snap = dynamics.snapshot(t + dt, t + 0.5 * dt);
    let rhs = v + dt * dynamics.perturbation_at(&snap, v);
    dynamics
        .resolve(&snap, dt, rhs, cfg.resolvent_tol)
        .map_err(|e| match e {
            Error::NumericalFailure { message, .. } => Error::NumericalFailure { t: t + dt, v, message },
            other => other,
        })
}

pub fn integrate(dynamics: &ReducedDynamics, v0: f64, t0: f64, t1: f64, cfg: &SolverConfig) -> Result<Trajectory> {
    Integrator::new(dynamics, *cfg)?.integrate(v0, t0, t1)
}

pub fn poincare(dynamics: &ReducedDynamics, v0: f64, cfg: &SolverConfig) -> Result<f64> {
    Integrator::new(dynamics, *cfg)?.poincare(v0)
}

pub fn poincare_iterates(dynamics: &ReducedDynamics, v0: f64, k: usize, cfg: &SolverConfig) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::Invariant("need at least one iterate".into()));
    }
    Integrator::new(dynamics, *cfg)?.iterates(v0, k)
}
