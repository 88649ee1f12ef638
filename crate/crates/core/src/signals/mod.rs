//! T-periodic scalar signals of time: shape velocities, loads and friction
//! coefficients.
//!
//! Signals come from a small expression grammar (see [`parse_signal`]) or from
//! sampled tables. Every signal knows its jump and kink times per period, so
//! integrators can put grid points exactly on them and quadrature can split
//! there.

mod expr;
mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BreakpointKind {
    /// The signal itself jumps.
    Jump,
    /// The signal is continuous but its derivative jumps.
    Kink,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub time: f64,
    pub kind: BreakpointKind,
}

/// Sorted, strictly increasing breakpoint times in `[0, T)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BreakpointSet {
    points: Vec<Breakpoint>,
}

impl BreakpointSet {
    pub fn new(period: f64, raw: impl IntoIterator<Item = Breakpoint>) -> Self {
        let merge_tol = 1e-12 * period;
        let mut pts: Vec<Breakpoint> = raw
            .into_iter()
            .map(|mut b| {
                b.time = b.time.rem_euclid(period);
                if period - b.time <= merge_tol {
                    b.time = 0.0;
                }
                b
            })
            .collect();
        pts.sort_by(|a, b| a.time.total_cmp(&b.time));
        let mut points: Vec<Breakpoint> = Vec::with_capacity(pts.len());
        for b in pts {
            match points.last_mut() {
                Some(last) if b.time - last.time <= merge_tol => {
                    if b.kind == BreakpointKind::Jump {
                        last.kind = BreakpointKind::Jump;
                    }
                }
                _ => points.push(b),
            }
        }
        Self { points }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|b| b.time)
    }

    pub fn points(&self) -> &[Breakpoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn has_jumps(&self) -> bool {
        self.points.iter().any(|b| b.kind == BreakpointKind::Jump)
    }

    pub fn union(&self, other: &BreakpointSet, period: f64) -> BreakpointSet {
        BreakpointSet::new(period, self.points.iter().chain(&other.points).copied())
    }

    /// Breakpoint times shifted into `[a, b]`, over as many periods as needed.
    pub fn cuts_in(&self, period: f64, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if self.points.is_empty() {
            return out;
        }
        let k0 = (a / period).floor() as i64;
        let k1 = (b / period).ceil() as i64;
        for k in k0..=k1 {
            for p in &self.points {
                let t = k as f64 * period + p.time;
                if t > a && t < b {
                    out.push(t);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Expr(Expr),
    /// Knots `(t, value)` with strictly increasing `t` in `[0, T)`, linearly
    /// interpolated and wrapped periodically.
    Table(Vec<(f64, f64)>),
}

/// A T-periodic scalar function of time with known breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSignal {
    period: f64,
    repr: Repr,
    declared_lipschitz: Option<f64>,
    breakpoints: BreakpointSet,
    source: String,
}

/// Parses `text` as a signal of period `period`, substituting `bindings`.
///
/// Besides bound names, `t`, `pi` and `T` (the period) are predefined.
pub fn parse_signal(text: &str, period: f64, bindings: &HashMap<String, f64>) -> Result<PeriodicSignal> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::NonPositivePeriod(period));
    }
    let expr = parse::parse_expr(text, period, bindings)?;
    if expr.wave_count(period) > 100_000 {
        return Err(Error::InvalidSignal(format!(
            "`{text}` switches too often per period"
        )));
    }
    // Piecewise terms are periodic by construction; everything else must be
    // checked on the raw time argument.
    let mut deviation: f64 = 0.0;
    for j in 0..1000 {
        let t = period * (j as f64 + 0.5) / 1000.0;
        let a = expr.eval(t, t, period);
        let b = expr.eval(t + period, t + period, period);
        let d = (a - b).abs() / (1.0 + a.abs());
        if !d.is_finite() {
            return Err(Error::InvalidSignal(format!("`{text}` is not finite at t = {t}")));
        }
        deviation = deviation.max(d);
    }
    if deviation > 1e-9 {
        return Err(Error::NotPeriodic {
            source_text: text.to_string(),
            period,
            deviation,
        });
    }
    let breakpoints = BreakpointSet::new(period, expr.breakpoints(period));
    Ok(PeriodicSignal {
        period,
        repr: Repr::Expr(expr),
        declared_lipschitz: None,
        breakpoints,
        source: text.to_string(),
    })
}

impl PeriodicSignal {
    pub fn constant(period: f64, value: f64) -> Self {
        assert!(period > 0.0, "period must be positive");
        Self {
            period,
            repr: Repr::Expr(Expr::Const(value)),
            declared_lipschitz: Some(0.0),
            breakpoints: BreakpointSet::default(),
            source: format!("{value}"),
        }
    }

    /// Convenience wrapper around [`parse_signal`] without bindings.
    pub fn parse(text: &str, period: f64) -> Result<Self> {
        parse_signal(text, period, &HashMap::new())
    }

    /// Periodic piecewise-linear interpolation of `(t, value)` samples.
    pub fn table(period: f64, knots: Vec<(f64, f64)>) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::NonPositivePeriod(period));
        }
        if knots.is_empty() {
            return Err(Error::InvalidSignal("empty table".into()));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidSignal("table times must be strictly increasing".into()));
            }
        }
        if knots[0].0 < 0.0 || knots.last().unwrap().0 >= period {
            return Err(Error::InvalidSignal("table times must lie in [0, T)".into()));
        }
        if knots.iter().any(|k| !k.1.is_finite()) {
            return Err(Error::InvalidSignal("table values must be finite".into()));
        }
        let breakpoints = if knots.len() > 1 {
            BreakpointSet::new(
                period,
                knots.iter().map(|k| Breakpoint {
                    time: k.0,
                    kind: BreakpointKind::Kink,
                }),
            )
        } else {
            BreakpointSet::default()
        };
        Ok(Self {
            period,
            source: format!("table[{}]", knots.len()),
            repr: Repr::Table(knots),
            declared_lipschitz: None,
            breakpoints,
        })
    }

    pub fn with_lipschitz(mut self, lipschitz: f64) -> Self {
        self.declared_lipschitz = Some(lipschitz);
        self
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn table_knots(&self) -> Option<&[(f64, f64)]> {
        match &self.repr {
            Repr::Table(k) => Some(k),
            Repr::Expr(_) => None,
        }
    }

    pub fn declared_lipschitz(&self) -> Option<f64> {
        self.declared_lipschitz
    }

    /// Right-continuous value at `t` (reduced modulo the period).
    pub fn eval(&self, t: f64) -> f64 {
        self.eval_within(t, t)
    }

    /// Value at `t` of the piece that is active at `anchor`.
    ///
    /// Integrators pass the midpoint of a step as `anchor` and its end as
    /// `t`, which yields the left limit at the end of the step even when the
    /// end sits exactly on a jump.
    pub fn eval_within(&self, t: f64, anchor: f64) -> f64 {
        let k = (anchor / self.period).floor();
        let local_anchor = anchor - k * self.period;
        let local_t = t - k * self.period;
        match &self.repr {
            Repr::Expr(e) => e.eval(local_t, local_anchor, self.period),
            Repr::Table(knots) => table_eval(knots, self.period, local_t),
        }
    }

    pub fn breakpoints(&self) -> &BreakpointSet {
        &self.breakpoints
    }

    pub fn is_continuous(&self) -> bool {
        !self.breakpoints.has_jumps()
    }

    pub fn as_constant(&self) -> Option<f64> {
        match &self.repr {
            Repr::Expr(e) if !e.depends_on_time() => Some(e.eval(0.0, 0.0, self.period)),
            Repr::Table(k) if k.iter().all(|x| x.1 == k[0].1) => Some(k[0].1),
            _ => None,
        }
    }

    /// `∫_a^b s(t) dt`, split at every breakpoint in the range.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.integral(b, a);
        }
        let cuts = self.breakpoints.cuts_in(self.period, a, b);
        quad::split(a, b, &cuts, |t| self.eval(t))
    }

    /// `(1/T) ∫_0^T s(t) dt`.
    pub fn mean_over_period(&self) -> f64 {
        self.integral(0.0, self.period) / self.period
    }

    /// Same as [`mean_over_period`](Self::mean_over_period) with a fixed
    /// number of panels per smooth piece.
    pub fn mean_with_panels(&self, panels: usize) -> f64 {
        let mut cuts: Vec<f64> = vec![0.0];
        cuts.extend(self.breakpoints.times().filter(|&t| t > 0.0));
        cuts.push(self.period);
        let total: f64 = cuts
            .windows(2)
            .map(|w| quad::panels(w[0], w[1], panels, |t| self.eval(t)))
            .sum();
        total / self.period
    }

    /// Sample grid used for sup/inf estimates: uniform points plus breakpoints
    /// (both sides of each jump).
    pub fn sample_times(&self, n: usize) -> Vec<f64> {
        let mut ts: Vec<f64> = (0..n).map(|j| self.period * j as f64 / n as f64).collect();
        for b in self.breakpoints.points() {
            ts.push(b.time);
            if b.kind == BreakpointKind::Jump {
                let left = if b.time > 0.0 { b.time } else { self.period };
                ts.push(left - 1e-12 * self.period);
            }
        }
        ts.sort_by(f64::total_cmp);
        ts
    }

    /// Sampled `(min, max)` over one period.
    pub fn range(&self) -> (f64, f64) {
        self.sample_times(4096)
            .into_iter()
            .map(|t| self.eval(t))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    /// Declared Lipschitz constant, or an estimate from 10⁴ divided
    /// differences that skips intervals containing a jump.
    pub fn lipschitz(&self) -> f64 {
        if let Some(l) = self.declared_lipschitz {
            return l;
        }
        let n = 10_000;
        let h = self.period / n as f64;
        let jumps: Vec<f64> = self
            .breakpoints
            .points()
            .iter()
            .filter(|b| b.kind == BreakpointKind::Jump)
            .map(|b| b.time)
            .collect();
        let mut prev = self.eval(0.0);
        let mut best: f64 = 0.0;
        for j in 1..=n {
            let t0 = (j - 1) as f64 * h;
            let t1 = j as f64 * h;
            // Evaluate the right end as a left limit so the final interval
            // does not wrap onto the next period's first piece.
            let v = self.eval_within(t1, 0.5 * (t0 + t1));
            let crosses = jumps.iter().any(|&b| (b > t0 && b <= t1) || (b == 0.0 && j == n));
            if !crosses {
                best = best.max((v - prev).abs() / h);
            }
            prev = self.eval(t1);
        }
        best
    }
}

impl fmt::Display for PeriodicSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (T = {})", self.source, self.period)
    }
}

fn table_eval(knots: &[(f64, f64)], period: f64, t: f64) -> f64 {
    if knots.len() == 1 {
        return knots[0].1;
    }
    let tau = t.rem_euclid(period);
    let idx = knots.partition_point(|k| k.0 <= tau);
    let (a, b) = if idx == 0 {
        let last = knots[knots.len() - 1];
        ((last.0 - period, last.1), knots[0])
    } else if idx == knots.len() {
        (knots[idx - 1], (knots[0].0 + period, knots[0].1))
    } else {
        (knots[idx - 1], knots[idx])
    };
    let w = (tau - a.0) / (b.0 - a.0);
    a.1 + w * (b.1 - a.1)
}
