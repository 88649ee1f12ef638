//! Long-time behaviour of the period map `Φ_T`: the attractor bracket,
//! fixed points and their stability, limit cycles and the geometric phase.

use std::fmt;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{DynamicsClass, ModelKind, ReducedDynamics, VelocityBounds};
use crate::signals::PeriodicSignal;
use crate::solver::{Integrator, SolverConfig, Trajectory};

pub const DEFAULT_BRACKET_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
pub const DEFAULT_FIXED_POINT_GRID: usize = 512;
pub const DEFAULT_PERIODICITY_TOL: f64 = 1e-6;
pub const DEFAULT_GAMMA_GRID: usize = 10_000;

/// Allowed backwards drift of the iterate sequences before they are
/// reported as broken.
const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorReport {
    pub alpha: f64,
    pub beta: f64,
    /// `Φ_T^k(v-)` for `k = 0, 1, …`.
    pub iterates_lo: Vec<f64>,
    /// `Φ_T^k(v+)` for `k = 0, 1, …`.
    pub iterates_hi: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub bracket_width: f64,
}

/// Iterates `Φ_T` from both ends of the absorbing box until both sequences
/// settle to within `tol`.
pub fn attractor_bracket(dynamics: &ReducedDynamics, cfg: &SolverConfig, tol: f64, kmax: usize) -> Result<AttractorReport> {
    if !(tol > 0.0) {
        return Err(Error::config("/tol", "tolerance must be positive"));
    }
    let bounds = dynamics.velocity_bounds()?;
    if !bounds.dissipative {
        return Err(Error::Dissipativity {
            i_plus: bounds.i_plus,
            i_minus: bounds.i_minus,
        });
    }
    let integrator = Integrator::new(dynamics, *cfg)?;
    let mut lo = vec![bounds.v_minus];
    let mut hi = vec![bounds.v_plus];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < kmax {
        iterations += 1;
        let (a, b) = (*lo.last().unwrap(), *hi.last().unwrap());
        let (na, nb) = rayon::join(|| integrator.poincare(a), || integrator.poincare(b));
        let (na, nb) = (na?, nb?);
        if na < a - MONOTONE_SLACK {
            return Err(Error::NonMonotoneIterates { step: iterations, previous: a, next: na });
        }
        if nb > b + MONOTONE_SLACK {
            return Err(Error::NonMonotoneIterates { step: iterations, previous: b, next: nb });
        }
        lo.push(na);
        hi.push(nb);
        if (na - a).abs() < tol && (nb - b).abs() < tol {
            converged = true;
            break;
        }
    }
    let alpha = *lo.last().unwrap();
    let beta = *hi.last().unwrap();
    if alpha > beta + MONOTONE_SLACK {
        return Err(Error::Invariant(format!("bracket is reversed: alpha = {alpha} > beta = {beta}")));
    }
    Ok(AttractorReport {
        alpha,
        beta,
        iterates_lo: lo,
        iterates_hi: hi,
        converged,
        iterations,
        bracket_width: (beta - alpha).max(0.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    /// Attracting from both sides.
    Stable,
    /// Attracting from the left, repelling to the right.
    SemistableLeft,
    /// Repelling to the left, attracting from the right.
    SemistableRight,
    Unstable,
}

impl Stability {
    /// From the signs of `Φ_T(v) - v` just left and just right of a fixed point.
    pub fn from_signs(left: f64, right: f64) -> Self {
        match (left > 0.0, right > 0.0) {
            (true, false) => Stability::Stable,
            (true, true) => Stability::SemistableLeft,
            (false, false) => Stability::SemistableRight,
            (false, true) => Stability::Unstable,
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::SemistableLeft => "semistable-left",
            Stability::SemistableRight => "semistable-right",
            Stability::Unstable => "unstable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub v: f64,
    pub class: Stability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointReport {
    pub points: Vec<FixedPoint>,
    /// Intervals on which `|Φ_T(v) - v| <= tol`, wider than the resolution.
    pub plateaus: Vec<(f64, f64)>,
    /// Spacing of the scan grid.
    pub grid_resolution: f64,
    pub tol: f64,
}

struct Scan<'a> {
    integrator: &'a Integrator<'a>,
    lo: f64,
    hi: f64,
    tol: f64,
    spacing: f64,
}

impl Scan<'_> {
    fn g(&self, v: f64) -> Result<f64> {
        Ok(self.integrator.poincare(v)? - v)
    }

    /// Bisection between `outside` (`|g| > tol`) and `inside` (`|g| <= tol`).
    fn edge(&self, mut outside: f64, mut inside: f64) -> Result<f64> {
        while (outside - inside).abs() > 1e-3 * self.tol {
            let m = 0.5 * (outside + inside);
            if self.g(m)?.abs() <= self.tol {
                inside = m;
            } else {
                outside = m;
            }
        }
        Ok(inside)
    }

    /// Root of `g` between points of opposite sign.
    fn root(&self, mut a: f64, mut b: f64) -> Result<f64> {
        let sa = self.g(a)?.signum();
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            let gm = self.g(m)?;
            if gm == 0.0 {
                return Ok(m);
            }
            if gm.signum() == sa {
                a = m;
            } else {
                b = m;
            }
            if (b - a).abs() < 1e-12 * (1.0 + a.abs()) {
                break;
            }
        }
        Ok(0.5 * (a + b))
    }

    /// Minimizer of `|g|` on `[a, b]` by golden-section search.
    fn argmin(&self, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let mut fc = self.g(c)?.abs();
        let mut fd = self.g(d)?.abs();
        while (b - a).abs() > 1e-3 * self.tol {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = self.g(c)?.abs();
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = self.g(d)?.abs();
            }
        }
        let v = 0.5 * (a + b);
        Ok((v, self.g(v)?.abs()))
    }

    /// Sign of `g` at distance just beyond `v` in direction `dir`. Outside
    /// the scanned range the bracket attracts: `+` on the left, `-` on the right.
    fn side(&self, v: f64, dir: f64) -> Result<f64> {
        let mut delta = (4.0 * self.tol).max(0.25 * self.spacing);
        for _ in 0..8 {
            let p = v + dir * delta;
            if p < self.lo || p > self.hi {
                break;
            }
            let g = self.g(p)?;
            if g.abs() > self.tol {
                return Ok(g.signum());
            }
            delta *= 2.0;
        }
        Ok(-dir)
    }

    fn point(&self, v: f64) -> Result<FixedPoint> {
        let class = Stability::from_signs(self.side(v, -1.0)?, self.side(v, 1.0)?);
        Ok(FixedPoint { v, class })
    }
}

/// Fixed points of `Φ_T` in the bracket, classified by the sign of
/// `Φ_T(v) - v` on either side, and plateaus of fixed points.
///
/// A zero run of `|Φ_T(v) - v| <= tol` counts as a plateau when it is wider
/// than both the grid spacing and `4 tol`; a transversal zero produces a run
/// of width about `2 tol / |slope|`, so near-tangent isolated points may be
/// reported as plateaus.
pub fn fixed_points(
    dynamics: &ReducedDynamics,
    report: &AttractorReport,
    grid_n: usize,
    tol: f64,
    cfg: &SolverConfig,
) -> Result<FixedPointReport> {
    if !report.converged {
        return Err(Error::Invariant("attractor bracket has not converged".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::config("/tol", "tolerance must be positive"));
    }
    let n = grid_n.max(3);
    let integrator = Integrator::new(dynamics, *cfg)?;
    let lo = report.alpha - tol;
    let hi = report.beta + tol;
    let spacing = (hi - lo) / (n - 1) as f64;
    let scan = Scan {
        integrator: &integrator,
        lo,
        hi,
        tol,
        spacing,
    };
    let vs: Vec<f64> = (0..n).map(|k| if k + 1 == n { hi } else { lo + k as f64 * spacing }).collect();
    let gs: Vec<f64> = vs.par_iter().map(|&v| scan.g(v)).collect::<Result<_>>()?;
    let zero = |k: usize| gs[k].abs() <= tol;

    let mut points: Vec<FixedPoint> = Vec::new();
    let mut plateaus = Vec::new();
    let mut k = 0;
    while k < n {
        if zero(k) {
            let start = k;
            while k + 1 < n && zero(k + 1) {
                k += 1;
            }
            let a = if start > 0 { scan.edge(vs[start - 1], vs[start])? } else { lo };
            let b = if k + 1 < n { scan.edge(vs[k + 1], vs[k])? } else { hi };
            if b - a >= spacing.max(4.0 * tol) {
                plateaus.push((a, b));
            } else {
                let wa = if start > 0 { vs[start - 1] } else { lo };
                let wb = if k + 1 < n { vs[k + 1] } else { hi };
                let (v, _) = scan.argmin(wa.max(a - spacing), wb.min(b + spacing))?;
                points.push(scan.point(v)?);
            }
        } else if k + 1 < n && !zero(k + 1) && gs[k].signum() != gs[k + 1].signum() {
            let v = scan.root(vs[k], vs[k + 1])?;
            points.push(scan.point(v)?);
        } else if !zero(k) {
            // A zero touched without a sign change shows up as a local
            // minimum of |g| between non-zero neighbours.
            let left = if k > 0 { gs[k - 1].abs() } else { f64::INFINITY };
            let right = if k + 1 < n { gs[k + 1].abs() } else { f64::INFINITY };
            let near_run = (k > 0 && zero(k - 1)) || (k + 1 < n && zero(k + 1));
            let crossing = |j: usize| j + 1 < n && gs[j].signum() != gs[j + 1].signum();
            if !near_run && gs[k].abs() < left && gs[k].abs() <= right && !crossing(k) && !(k > 0 && crossing(k - 1)) {
                let a = if k > 0 { vs[k - 1] } else { lo };
                let b = if k + 1 < n { vs[k + 1] } else { hi };
                let (v, m) = scan.argmin(a, b)?;
                if m <= tol {
                    points.push(scan.point(v)?);
                }
            }
        }
        k += 1;
    }
    points.sort_by(|a, b| a.v.total_cmp(&b.v));
    points.dedup_by(|b, a| (b.v - a.v).abs() <= 2.0 * tol);
    Ok(FixedPointReport {
        points,
        plateaus,
        grid_resolution: spacing,
        tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCycle {
    pub orbit: Trajectory,
    /// Net barycentre displacement over one period.
    pub gamma: f64,
    pub average_velocity: f64,
    /// `|v(T) - v(0)|` of the orbit.
    pub residual: f64,
}

/// The periodic orbit through `v_star`, which must be a fixed point of
/// `Φ_T` within `periodicity_tol`.
pub fn limit_cycle(dynamics: &ReducedDynamics, v_star: f64, cfg: &SolverConfig, periodicity_tol: f64) -> Result<LimitCycle> {
    let period = dynamics.period();
    let orbit = Integrator::new(dynamics, *cfg)?.integrate(v_star, 0.0, period)?;
    let residual = (orbit.final_v() - v_star).abs();
    if !(residual <= periodicity_tol) {
        return Err(Error::NotFixedPoint {
            v: v_star,
            residual,
            tol: periodicity_tol,
        });
    }
    let gamma = orbit.displacement();
    Ok(LimitCycle {
        orbit,
        gamma,
        average_velocity: gamma / period,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaDiagnostics {
    /// Sample times; a jump of some input appears twice, left limit first.
    pub times: Vec<f64>,
    /// `gammas[k][j]` is the `(j+1)`-th smallest of `-w_i` at `times[k]`.
    pub gammas: Vec<Vec<f64>>,
    /// Smallest `Γ_{j+1} - Γ_j` over the samples, one per adjacent pair.
    pub min_gap: Vec<f64>,
    /// Whether each input is continuous.
    pub continuous: Vec<bool>,
    pub warnings: Vec<String>,
}

/// Order statistics `Γ_1 <= … <= Γ_n` of `{-w_i(t)}` on a uniform grid,
/// with both one-sided limits sampled at every breakpoint.
pub fn gamma_order_stats(w: &[PeriodicSignal], grid_n: usize) -> Result<GammaDiagnostics> {
    let Some(first) = w.first() else {
        return Err(Error::InvalidSignal("no inputs".into()));
    };
    let period = first.period();
    if w.iter().any(|s| (s.period() - period).abs() > 1e-12 * period) {
        return Err(Error::InvalidSignal("inputs have different periods".into()));
    }
    let mut warnings = Vec::new();
    for (i, s) in w.iter().enumerate() {
        let mean = s.mean_over_period();
        if mean.abs() > 1e-8 {
            let msg = format!("input {i} has mean {mean:e}, not zero");
            warn!("{msg}");
            warnings.push(msg);
        }
    }
    let eps = 1e-9 * period;
    // (time, anchor) pairs
    let mut samples: Vec<(f64, f64)> = (0..grid_n.max(1))
        .map(|k| {
            let t = period * k as f64 / grid_n.max(1) as f64;
            (t, t)
        })
        .collect();
    let mut cuts = w[0].breakpoints().clone();
    for s in &w[1..] {
        cuts = cuts.union(s.breakpoints(), period);
    }
    for b in cuts.times() {
        samples.retain(|&(t, _)| t != b);
        samples.push((b, b - eps));
        samples.push((b, b + eps));
    }
    samples.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let n = w.len();
    let mut min_gap = vec![f64::INFINITY; n.saturating_sub(1)];
    let mut gammas = Vec::with_capacity(samples.len());
    for &(t, anchor) in &samples {
        let mut g: Vec<f64> = w.iter().map(|s| -s.eval_within(t, anchor)).collect();
        g.sort_by(f64::total_cmp);
        for j in 0..n.saturating_sub(1) {
            min_gap[j] = min_gap[j].min(g[j + 1] - g[j]);
        }
        gammas.push(g);
    }
    Ok(GammaDiagnostics {
        times: samples.into_iter().map(|s| s.0).collect(),
        gammas,
        min_gap,
        continuous: w.iter().map(PeriodicSignal::is_continuous).collect(),
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipativityReport {
    pub pass: bool,
    #[serde(rename = "I_plus")]
    pub i_plus: f64,
    #[serde(rename = "I_minus")]
    pub i_minus: f64,
}

impl From<&VelocityBounds> for DissipativityReport {
    fn from(b: &VelocityBounds) -> Self {
        Self {
            pass: b.dissipative,
            i_plus: b.i_plus,
            i_minus: b.i_minus,
        }
    }
}

/// `∫(B + Σ l+)` and `∫(B - Σ l-)` over one period; passes iff the first is
/// negative and the second positive.
pub fn dissipativity_check(dynamics: &ReducedDynamics) -> Result<DissipativityReport> {
    Ok((&dynamics.velocity_bounds()?).into())
}

/// Which structural result about periodic solutions covers a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Dissipative with a Lipschitz perturbation: a global attractor exists
    /// and every solution is asymptotically periodic.
    GeneralAttractor,
    /// Monotone: the periodic solutions form a one-parameter family of
    /// translates `v* + c`, `c` in an interval.
    MonotoneFamily,
    /// Some contact is strictly monotone: exactly one periodic solution.
    StrictUniqueness,
    /// Dry friction with continuous positive coefficients and continuous
    /// shape velocities: exactly one periodic solution.
    SmoothDryUniqueness,
    ContinuousGeneral,
    ContinuousMonotone,
    ContinuousStrict,
    /// Continuous body with positive dry friction everywhere.
    ContinuousDryUniqueness,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::GeneralAttractor => "general-attractor",
            Theorem::MonotoneFamily => "monotone-family",
            Theorem::StrictUniqueness => "strict-uniqueness",
            Theorem::SmoothDryUniqueness => "smooth-dry-uniqueness",
            Theorem::ContinuousGeneral => "continuous-general",
            Theorem::ContinuousMonotone => "continuous-monotone",
            Theorem::ContinuousStrict => "continuous-strict",
            Theorem::ContinuousDryUniqueness => "continuous-dry-uniqueness",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub theorem: Theorem,
    pub uniqueness_predicted: bool,
    pub reasons: Vec<String>,
    /// Whether `G(t, ·)` was seen to have a single zero at every sampled
    /// time. A numerical observation, never used for the prediction.
    pub advisory: Option<String>,
}

/// Picks the applicable result from the law classes and input smoothness.
pub fn classify_dynamics(dynamics: &ReducedDynamics) -> Classification {
    let mut reasons = Vec::new();
    let continuous = dynamics.kind() == ModelKind::Continuous;
    let class = dynamics.class();
    let active_laws = || {
        dynamics
            .contacts()
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| &dynamics.laws()[c.law])
    };
    let theorem = match class {
        DynamicsClass::NonMonotone => {
            reasons.push("a friction law carries a non-monotone perturbation".into());
            if continuous {
                Theorem::ContinuousGeneral
            } else {
                Theorem::GeneralAttractor
            }
        }
        DynamicsClass::StrictlyMonotone => {
            reasons.push("a contact has a strictly increasing friction part".into());
            if continuous {
                Theorem::ContinuousStrict
            } else {
                Theorem::StrictUniqueness
            }
        }
        DynamicsClass::SmoothDry => {
            reasons.push("dry friction only, coefficients continuous and positive".into());
            reasons.push("shape velocities and load are continuous".into());
            Theorem::SmoothDryUniqueness
        }
        DynamicsClass::Monotone => {
            let no_extra_at_rest = active_laws().all(|l| l.extra().map_or(true, |e| e.eval(0.0).contains(0.0)));
            if continuous && dynamics.positive_friction() && no_extra_at_rest {
                reasons.push("dry friction coefficients have a positive sum everywhere on the body".into());
                Theorem::ContinuousDryUniqueness
            } else {
                reasons.push("all friction laws are monotone".into());
                if continuous {
                    if !dynamics.positive_friction() {
                        reasons.push("some part of the body has no dry friction".into());
                    }
                    Theorem::ContinuousMonotone
                } else {
                    if dynamics.drivers().iter().any(|w| !w.is_continuous()) {
                        reasons.push("a shape velocity jumps".into());
                    }
                    if !dynamics.load().is_continuous() {
                        reasons.push("the load jumps".into());
                    }
                    if active_laws().any(|l| l.kind() != crate::friction::LawKind::Dry) {
                        reasons.push("a law is not pure dry friction".into());
                    }
                    let rough = active_laws().any(|l| {
                        [l.mu_plus(), l.mu_minus()]
                            .into_iter()
                            .flatten()
                            .any(|s| !s.is_continuous() || s.range().0 <= 0.0)
                    });
                    if rough {
                        reasons.push("a dry coefficient jumps or vanishes".into());
                    }
                    Theorem::MonotoneFamily
                }
            }
        }
    };
    let uniqueness_predicted = matches!(
        theorem,
        Theorem::StrictUniqueness
            | Theorem::SmoothDryUniqueness
            | Theorem::ContinuousStrict
            | Theorem::ContinuousDryUniqueness
    );
    Classification {
        theorem,
        uniqueness_predicted,
        reasons,
        advisory: single_zero_advisory(dynamics),
    }
}

fn single_zero_advisory(dynamics: &ReducedDynamics) -> Option<String> {
    if !dynamics.class().is_monotone() {
        return None;
    }
    let bounds = dynamics.velocity_bounds().ok().filter(|b| b.dissipative)?;
    let n = 64;
    let single = (0..n).all(|j| {
        let t = dynamics.period() * (j as f64 + 0.5) / n as f64;
        let z = dynamics.zero_set_in(t, bounds.v_minus, bounds.v_plus, 2);
        z.len() == 1 && z[0].width() <= 1e-9 * (1.0 + z[0].lo.abs())
    });
    Some(if single {
        format!("G(t, .) has a single zero at all {n} sampled times")
    } else {
        format!("G(t, .) has no zero or a zero interval at some of {n} sampled times")
    })
}

/// Summary written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub fixed_points: Vec<FixedPoint>,
    pub plateaus: Vec<[f64; 2]>,
    pub gamma: Option<f64>,
    pub avg_velocity: Option<f64>,
    pub theorem: Theorem,
    pub dissipativity: DissipativityReport,
}

impl Report {
    pub fn new(dynamics: &ReducedDynamics) -> Result<Self> {
        Ok(Self {
            alpha: None,
            beta: None,
            fixed_points: Vec::new(),
            plateaus: Vec::new(),
            gamma: None,
            avg_velocity: None,
            theorem: classify_dynamics(dynamics).theorem,
            dissipativity: dissipativity_check(dynamics)?,
        })
    }

    pub fn with_attractor(mut self, a: &AttractorReport) -> Self {
        self.alpha = Some(a.alpha);
        self.beta = Some(a.beta);
        self
    }

    pub fn with_fixed_points(mut self, f: &FixedPointReport) -> Self {
        self.fixed_points = f.points.clone();
        self.plateaus = f.plateaus.iter().map(|&(a, b)| [a, b]).collect();
        self
    }

    pub fn with_cycle(mut self, c: &LimitCycle) -> Self {
        self.gamma = Some(c.gamma);
        self.avg_velocity = Some(c.average_velocity);
        self
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::scenarios::{dynamics, ScenarioId, ScenarioParams};

    fn scenario(id: ScenarioId) -> ReducedDynamics {
        dynamics(id, &ScenarioParams::default()).unwrap()
    }

    fn bracket(id: ScenarioId) -> AttractorReport {
        attractor_bracket(&scenario(id), &SolverConfig::default(), DEFAULT_BRACKET_TOL, DEFAULT_MAX_ITERATIONS).unwrap()
    }

    #[test]
    fn brackets_of_examples() {
        let dry = bracket(ScenarioId::ExDry);
        assert!(dry.converged);
        assert!((dry.alpha + 1.0).abs() < 1e-6 && (dry.beta - 1.0).abs() < 1e-6);
        let strib = bracket(ScenarioId::ExStrib);
        assert!((strib.alpha + 1.0).abs() < 1e-6 && (strib.beta - 1.0).abs() < 1e-6);
        let comp = bracket(ScenarioId::ExComp);
        assert!((comp.alpha - 0.125).abs() < 1e-4 && (comp.beta - 0.125).abs() < 1e-4);
        assert!(comp.bracket_width < 1e-5);
    }

    #[test]
    fn bracket_refuses_non_dissipative() {
        let p = ScenarioParams {
            load: Some(-3.0),
            ..Default::default()
        };
        let d = dynamics(ScenarioId::SlopeDry, &p).unwrap();
        let r = attractor_bracket(&d, &SolverConfig::default(), 1e-6, 10);
        assert!(matches!(r, Err(Error::Dissipativity { .. })));
    }

    #[test]
    fn stribeck_has_three_fixed_points() {
        let d = scenario(ScenarioId::ExStrib);
        let b = bracket(ScenarioId::ExStrib);
        let f = fixed_points(&d, &b, DEFAULT_FIXED_POINT_GRID, 1e-4, &SolverConfig::default()).unwrap();
        assert!(f.plateaus.is_empty(), "{:?}", f.plateaus);
        let got: Vec<(f64, Stability)> = f.points.iter().map(|p| (p.v, p.class)).collect();
        assert_eq!(got.len(), 3, "{got:?}");
        let want = [(-1.0, Stability::SemistableLeft), (0.0, Stability::Stable), (1.0, Stability::SemistableRight)];
        for ((v, c), (wv, wc)) in got.iter().zip(want) {
            assert!((v - wv).abs() < 1e-3, "{v} vs {wv}");
            assert_eq!(*c, wc);
        }
    }

    #[test]
    fn dry_plateaus() {
        for (id, a, b) in [(ScenarioId::ExDry, -1.0, 1.0), (ScenarioId::ExDrystar, -1.0, 0.0)] {
            let d = scenario(id);
            let r = bracket(id);
            let f = fixed_points(&d, &r, DEFAULT_FIXED_POINT_GRID, 1e-4, &SolverConfig::default()).unwrap();
            assert_eq!(f.plateaus.len(), 1, "{id}: {f:?}");
            assert!(f.points.is_empty());
            let (lo, hi) = f.plateaus[0];
            assert!((lo - a).abs() < 1e-3 && (hi - b).abs() < 1e-3, "{id}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn cycles_of_examples() {
        let cfg = SolverConfig::default();
        let comp = limit_cycle(&scenario(ScenarioId::ExComp), 0.125, &cfg, DEFAULT_PERIODICITY_TOL).unwrap();
        assert!((comp.gamma - PI / 2.0).abs() < 1e-3);
        assert_eq!(comp.gamma, comp.orbit.displacement());
        let incomp = scenario(ScenarioId::ExIncomp);
        let b = attractor_bracket(&incomp, &cfg, 1e-10, 1000).unwrap();
        let c = limit_cycle(&incomp, b.alpha, &cfg, DEFAULT_PERIODICITY_TOL).unwrap();
        assert!(c.gamma.abs() < 1e-6, "{}", c.gamma);
        let star = limit_cycle(&scenario(ScenarioId::ExDrystar), -1.0, &cfg, DEFAULT_PERIODICITY_TOL).unwrap();
        assert!((star.average_velocity + 0.5).abs() < 1e-9);
        assert!(matches!(
            limit_cycle(&scenario(ScenarioId::ExDry), 3.0, &cfg, DEFAULT_PERIODICITY_TOL),
            Err(Error::NotFixedPoint { .. })
        ));
    }

    #[test]
    fn order_statistics() {
        let sq = |s: &str| crate::signals::PeriodicSignal::parse(s, 1.0).unwrap();
        let g = gamma_order_stats(&[sq("-1*square(t;T,1)"), sq("square(t;T,1)")], 1000).unwrap();
        assert_eq!(g.min_gap, vec![2.0]);
        assert!(g.gammas.iter().all(|x| x == &vec![-1.0, 1.0]));
        assert_eq!(g.continuous, vec![false, false]);

        let tp = 2.0 * PI;
        let cs = |s: &str| crate::signals::PeriodicSignal::parse(s, tp).unwrap();
        let g = gamma_order_stats(&[cs("cos(t)"), cs("-cos(t)")], DEFAULT_GAMMA_GRID).unwrap();
        assert!(g.min_gap[0] <= 1e-3);
        let one = gamma_order_stats(&[cs("sin(t)")], 100).unwrap();
        assert!(one.min_gap.is_empty());
        for (t, x) in one.times.iter().zip(&one.gammas) {
            assert_eq!(x[0], -t.sin());
        }
    }

    #[test]
    fn dissipativity_integrals() {
        let r = dissipativity_check(&scenario(ScenarioId::ExDry)).unwrap();
        assert!(r.pass);
        assert!((r.i_plus + 2.0).abs() < 1e-9 && (r.i_minus - 2.0).abs() < 1e-9);
    }

    #[test]
    fn theorem_tags() {
        let c = classify_dynamics(&scenario(ScenarioId::ExStrib));
        assert_eq!((c.theorem, c.uniqueness_predicted), (Theorem::GeneralAttractor, false));
        let c = classify_dynamics(&scenario(ScenarioId::ExComp));
        assert_eq!((c.theorem, c.uniqueness_predicted), (Theorem::StrictUniqueness, true));
        let c = classify_dynamics(&scenario(ScenarioId::ExDry));
        assert_eq!((c.theorem, c.uniqueness_predicted), (Theorem::MonotoneFamily, false));
        assert!(c.reasons.iter().any(|r| r.contains("jumps")));
        let c = classify_dynamics(&scenario(ScenarioId::SmoothDry));
        assert_eq!((c.theorem, c.uniqueness_predicted), (Theorem::SmoothDryUniqueness, true));
        let c = classify_dynamics(&scenario(ScenarioId::ContDry));
        assert_eq!((c.theorem, c.uniqueness_predicted), (Theorem::ContinuousMonotone, false));
    }

    #[test]
    fn report_json_shape() {
        let d = scenario(ScenarioId::ExDry);
        let r = Report::new(&d).unwrap().with_attractor(&bracket(ScenarioId::ExDry));
        let v = serde_json::to_value(&r).unwrap();
        for key in ["alpha", "beta", "fixed_points", "plateaus", "gamma", "avg_velocity", "theorem", "dissipativity"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["theorem"], "monotone-family");
        assert_eq!(v["dissipativity"]["pass"], true);
        assert!(v["dissipativity"]["I_plus"].is_number());
    }
}
