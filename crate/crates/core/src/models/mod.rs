//! Reduced barycentre dynamics `v' ∈ G(t, v)` and the crawler models that
//! produce it.

mod continuous;
mod discrete;

pub use continuous::{reduce_continuous, Cell, ContinuousCrawler};
pub use discrete::{reduce_discrete, DiscreteCrawler};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::friction::{solve_resolvent, FrictionLaw, IncreasingGraph, LawClass, LawCoefs};
use crate::interval::ValueInterval;
use crate::quad;
use crate::signals::{BreakpointSet, PeriodicSignal};

/// Default additive margin on `R` beyond the largest stiction abscissa.
pub const DEFAULT_EPSILON_R: f64 = 1e-6;

/// Which structural family `G` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynamicsClass {
    /// A Lipschitz perturbation may break monotonicity in `v`.
    NonMonotone,
    Monotone,
    StrictlyMonotone,
    /// Discrete model, dry friction only with continuous positive
    /// coefficients and continuous shape velocities.
    SmoothDry,
}

impl DynamicsClass {
    pub fn is_monotone(self) -> bool {
        self != DynamicsClass::NonMonotone
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Discrete,
    Continuous,
}

/// One friction contact: `weight * F_law(t, v + shift(t))`, with the shift a
/// linear combination of driver signals.
#[derive(Debug, Clone, PartialEq)]
pub struct Contact {
    pub weight: f64,
    pub law: usize,
    pub shift: Vec<(usize, f64)>,
}

/// The right-hand side `G(t, v) = (B(t) + Σ_q weight_q F_q(t, v + s_q(t))) / M`.
#[derive(Debug, Clone)]
pub struct ReducedDynamics {
    period: f64,
    mass: f64,
    load: PeriodicSignal,
    drivers: Vec<PeriodicSignal>,
    laws: Vec<FrictionLaw>,
    contacts: Vec<Contact>,
    kind: ModelKind,
    class: DynamicsClass,
    positive_friction: bool,
    breakpoints: BreakpointSet,
    epsilon_r: f64,
}

/// Everything time-dependent in `G`, frozen at one instant.
#[derive(Debug, Clone)]
pub(crate) struct Snapshot {
    pub load: f64,
    pub coefs: Vec<LawCoefs>,
    pub shifts: Vec<f64>,
    /// Sorted `v` abscissae where the monotone part is not affine.
    pub abscissae: Vec<f64>,
    /// Sorted `v` abscissae where the monotone part jumps.
    pub jumps: Vec<f64>,
}

/// The monotone part of `-G` at a snapshot, as a graph in `v`.
pub(crate) struct SnapshotGraph<'a> {
    pub dynamics: &'a ReducedDynamics,
    pub snap: &'a Snapshot,
}

impl IncreasingGraph for SnapshotGraph<'_> {
    fn at(&self, v: f64) -> ValueInterval {
        self.dynamics.monotone_at(self.snap, v)
    }
    fn slope(&self, v: f64) -> f64 {
        self.dynamics.monotone_slope_at(self.snap, v)
    }
    fn abscissae(&self) -> &[f64] {
        &self.snap.abscissae
    }
}

/// Outcome of the dissipativity test together with the velocity box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityBounds {
    pub r: f64,
    /// `R - sup |shift|`: contacts slide at least this fast once `|v| >= R`.
    pub margin: f64,
    pub sup_shift: f64,
    /// `∫ (B + Σ l+)` over one period.
    pub i_plus: f64,
    /// `∫ (B - Σ l-)` over one period.
    pub i_minus: f64,
    pub dissipative: bool,
    pub ell_plus_l1: f64,
    pub ell_minus_l1: f64,
    pub v_minus: f64,
    pub v_plus: f64,
}

#[allow(clippy::too_many_arguments)]
impl ReducedDynamics {
    pub(crate) fn assemble(
        period: f64,
        mass: f64,
        load: PeriodicSignal,
        drivers: Vec<PeriodicSignal>,
        laws: Vec<FrictionLaw>,
        contacts: Vec<Contact>,
        kind: ModelKind,
    ) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidModel("total mass must be positive".into()));
        }
        for (i, law) in laws.iter().enumerate() {
            if law.kind() == crate::friction::LawKind::Custom && law.tail_bounds().is_none() {
                return Err(Error::MissingTailBounds(i));
            }
        }
        let mut breakpoints = load.breakpoints().clone();
        for s in &drivers {
            breakpoints = breakpoints.union(s.breakpoints(), period);
        }
        for law in &laws {
            breakpoints = breakpoints.union(&law.breakpoints(period), period);
        }
        let active = |c: &&Contact| c.weight > 0.0;
        let classes: Vec<LawClass> = contacts.iter().filter(active).map(|c| laws[c.law].class()).collect();
        let positive_friction = contacts.iter().filter(active).all(|c| {
            let law = &laws[c.law];
            match (law.mu_plus(), law.mu_minus()) {
                (Some(p), Some(m)) => {
                    let n = 2048;
                    (0..n).all(|j| {
                        let t = period * j as f64 / n as f64;
                        p.eval(t) + m.eval(t) > 0.0
                    })
                }
                _ => false,
            }
        });
        let class = if classes.iter().any(|&c| c == LawClass::NonMonotone) {
            DynamicsClass::NonMonotone
        } else if classes.iter().any(|&c| c == LawClass::StrictlyMonotone) {
            DynamicsClass::StrictlyMonotone
        } else if kind == ModelKind::Discrete
            && classes.iter().all(|&c| c == LawClass::DryOnly)
            && contacts.iter().filter(active).all(|c| {
                let law = &laws[c.law];
                [law.mu_plus(), law.mu_minus()]
                    .into_iter()
                    .all(|s| s.is_some_and(|s| s.is_continuous() && s.range().0 > 0.0))
            })
            && drivers.iter().all(PeriodicSignal::is_continuous)
            && load.is_continuous()
        {
            DynamicsClass::SmoothDry
        } else {
            DynamicsClass::Monotone
        };
        Ok(Self {
            period,
            mass,
            load,
            drivers,
            laws,
            contacts,
            kind,
            class,
            positive_friction,
            breakpoints,
            epsilon_r: DEFAULT_EPSILON_R,
        })
    }

    pub fn with_epsilon_r(mut self, epsilon_r: f64) -> Self {
        self.epsilon_r = epsilon_r;
        self
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn load(&self) -> &PeriodicSignal {
        &self.load
    }

    pub fn drivers(&self) -> &[PeriodicSignal] {
        &self.drivers
    }

    pub fn laws(&self) -> &[FrictionLaw] {
        &self.laws
    }

    pub fn contacts(&self) -> &[Contact] {
        &self.contacts
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn class(&self) -> DynamicsClass {
        self.class
    }

    /// `mu+ + mu- > 0` on every active contact at every sampled time.
    pub fn positive_friction(&self) -> bool {
        self.positive_friction
    }

    pub fn epsilon_r(&self) -> f64 {
        self.epsilon_r
    }

    /// Union of all time breakpoints of the model's signals in `[0, T)`.
    pub fn breakpoints(&self) -> &BreakpointSet {
        &self.breakpoints
    }

    /// Lipschitz constant in `v` of the explicit part `p`.
    pub fn perturbation_lipschitz(&self) -> f64 {
        self.contacts
            .iter()
            .map(|c| c.weight * self.laws[c.law].psi_lipschitz())
            .sum::<f64>()
            / self.mass
    }

    /// Shift `s_q(t)` of contact `q` with the piece selected at `anchor`.
    pub fn shift_within(&self, q: usize, t: f64, anchor: f64) -> f64 {
        self.contacts[q]
            .shift
            .iter()
            .map(|&(d, k)| k * self.drivers[d].eval_within(t, anchor))
            .sum()
    }

    pub(crate) fn snapshot(&self, t: f64, anchor: f64) -> Snapshot {
        let driver_values: Vec<f64> = self.drivers.iter().map(|s| s.eval_within(t, anchor)).collect();
        let coefs: Vec<LawCoefs> = self.laws.iter().map(|l| l.coefs_within(t, anchor)).collect();
        let shifts: Vec<f64> = self
            .contacts
            .iter()
            .map(|c| c.shift.iter().map(|&(d, k)| k * driver_values[d]).sum())
            .collect();
        let mut abscissae = Vec::new();
        let mut jumps = Vec::new();
        let mut buf = Vec::new();
        for (c, &s) in self.contacts.iter().zip(&shifts) {
            if c.weight == 0.0 {
                continue;
            }
            let law = &self.laws[c.law];
            buf.clear();
            law.abscissae_with(&coefs[c.law], &mut buf);
            abscissae.extend(buf.iter().map(|u| u - s));
            buf.clear();
            law.jumps_with(&coefs[c.law], &mut buf);
            jumps.extend(buf.iter().map(|u| u - s));
        }
        for v in [&mut abscissae, &mut jumps] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        Snapshot {
            load: self.load.eval_within(t, anchor),
            coefs,
            shifts,
            abscissae,
            jumps,
        }
    }

    /// `𝒜(v)`: minus the monotone part of `G` (an increasing graph).
    pub(crate) fn monotone_at(&self, snap: &Snapshot, v: f64) -> ValueInterval {
        let mut acc = ValueInterval::ZERO;
        for (c, &s) in self.contacts.iter().zip(&snap.shifts) {
            if c.weight == 0.0 {
                continue;
            }
            let law = &self.laws[c.law];
            acc += law.monotone_with(&snap.coefs[c.law], v + s).scale(c.weight);
        }
        acc.scale(1.0 / self.mass)
    }

    pub(crate) fn monotone_slope_at(&self, snap: &Snapshot, v: f64) -> f64 {
        self.contacts
            .iter()
            .zip(&snap.shifts)
            .map(|(c, &s)| c.weight * self.laws[c.law].monotone_slope_with(&snap.coefs[c.law], v + s))
            .sum::<f64>()
            / self.mass
    }

    /// `p(v)`: load plus perturbations, divided by the mass.
    pub(crate) fn perturbation_at(&self, snap: &Snapshot, v: f64) -> f64 {
        let mut acc = snap.load;
        for (c, &s) in self.contacts.iter().zip(&snap.shifts) {
            if c.weight != 0.0 {
                acc += c.weight * self.laws[c.law].psi_with(&snap.coefs[c.law], v + s);
            }
        }
        acc / self.mass
    }

    pub(crate) fn g_at(&self, snap: &Snapshot, v: f64) -> ValueInterval {
        (-self.monotone_at(snap, v)).shift(self.perturbation_at(snap, v))
    }

    /// `G(t, v)`, right-continuous in `t`.
    pub fn g(&self, t: f64, v: f64) -> ValueInterval {
        self.g_within(t, t, v)
    }

    /// `G(t, v)` with every time signal on the piece active at `anchor`.
    pub fn g_within(&self, t: f64, anchor: f64, v: f64) -> ValueInterval {
        self.g_at(&self.snapshot(t, anchor), v)
    }

    /// Solves `v' + dt 𝒜(t, v') ∋ rhs` at the given snapshot.
    pub(crate) fn resolve(&self, snap: &Snapshot, dt: f64, rhs: f64, tol_rel: f64) -> Result<f64> {
        let graph = SnapshotGraph { dynamics: self, snap };
        solve_resolvent(&graph, dt, rhs, tol_rel)
    }

    /// Sorted `v` abscissae `{-s_q(t)}` of all active contacts.
    pub fn v_breakpoints(&self, t: f64) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.contacts.len())
            .filter(|&q| self.contacts[q].weight > 0.0)
            .map(|q| -self.shift_within(q, t, t))
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Sampled `sup_t max_q |s_q(t)|` with a Lipschitz correction for the
    /// gaps between samples.
    pub fn sup_shift(&self) -> f64 {
        let n = 4096;
        let h = self.period / n as f64;
        let mut times: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
        for b in self.breakpoints.times() {
            times.push(b);
            let left = if b > 0.0 { b } else { self.period };
            times.push(left - 1e-12 * self.period);
        }
        let mut sup: f64 = 0.0;
        for &t in &times {
            for q in 0..self.contacts.len() {
                if self.contacts[q].weight > 0.0 {
                    sup = sup.max(self.shift_within(q, t, t).abs());
                }
            }
        }
        let lip = self
            .contacts
            .iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| c.shift.iter().map(|&(d, k)| k.abs() * self.drivers[d].lipschitz()).sum::<f64>())
            .fold(0.0, f64::max);
        sup + lip * h / 2.0
    }

    /// `(l_d-(t), l_d+(t))` for contacts sliding at least `margin` fast.
    pub fn ell_d(&self, t: f64, margin: f64) -> Result<(f64, f64)> {
        let b = self.load.eval(t);
        let (mut lower, mut upper) = (-b, b);
        for (c_idx, c) in self.contacts.iter().enumerate() {
            if c.weight == 0.0 {
                continue;
            }
            let (l, u) = self.laws[c.law].tail_at(t, margin).map_err(|e| match e {
                Error::MissingTailBounds(_) => Error::MissingTailBounds(self.contacts[c_idx].law),
                other => other,
            })?;
            lower += c.weight * l;
            upper += c.weight * u;
        }
        Ok((lower / self.mass, upper / self.mass))
    }

    fn tail_cuts(&self) -> Vec<f64> {
        let mut set = self.breakpoints.clone();
        for law in &self.laws {
            if let Some(tb) = law.tail_bounds() {
                set = set.union(tb.lower.breakpoints(), self.period);
                set = set.union(tb.upper.breakpoints(), self.period);
            }
        }
        set.times().collect()
    }

    fn bounds_with_margin(&self, margin: f64, sup_shift: f64) -> Result<VelocityBounds> {
        let cuts = self.tail_cuts();
        let integrate = |f: &dyn Fn(f64) -> f64| quad::split(0.0, self.period, &cuts, f);
        // Fail early on missing tail bounds.
        self.ell_d(0.0, margin)?;
        let lp = |t: f64| self.ell_d(t, margin).map(|x| x.1).unwrap_or(f64::NAN);
        let lm = |t: f64| self.ell_d(t, margin).map(|x| x.0).unwrap_or(f64::NAN);
        let int_plus = integrate(&lp);
        let int_minus = integrate(&lm);
        let i_plus = int_plus * self.mass;
        let i_minus = -int_minus * self.mass;
        let ell_plus_l1 = integrate(&|t| lp(t).abs());
        let ell_minus_l1 = integrate(&|t| lm(t).abs());
        let r = sup_shift + margin;
        Ok(VelocityBounds {
            r,
            margin,
            sup_shift,
            i_plus,
            i_minus,
            dissipative: i_plus < 0.0 && 0.0 < i_minus,
            ell_plus_l1,
            ell_minus_l1,
            v_minus: -(r + ell_minus_l1),
            v_plus: r + ell_plus_l1,
        })
    }

    /// The threshold `R`, tail bounds and the absorbing box `[v-, v+]`.
    ///
    /// `R = sup |s| + margin` with `margin = max(epsilon_R, R_law)`. When the
    /// test fails and some law grows without bound, the margin is doubled
    /// until the viscous tails win (at most 200 times).
    pub fn velocity_bounds(&self) -> Result<VelocityBounds> {
        let sup_shift = self.sup_shift();
        let mut margin = self
            .laws
            .iter()
            .filter_map(|l| l.tail_bounds().map(|tb| tb.threshold))
            .fold(self.epsilon_r, f64::max);
        let mut bounds = self.bounds_with_margin(margin, sup_shift)?;
        let growing = self
            .contacts
            .iter()
            .any(|c| c.weight > 0.0 && self.laws[c.law].has_growing_tail());
        if growing {
            for _ in 0..200 {
                if bounds.dissipative {
                    break;
                }
                margin *= 2.0;
                bounds = self.bounds_with_margin(margin, sup_shift)?;
            }
        }
        Ok(bounds)
    }

    /// `{v : 0 ∈ G(t, v)} ∩ [lo, hi]`.
    ///
    /// For monotone dynamics the set is one interval found by bisection; for
    /// non-monotone dynamics it is scanned on `grid_n` points and each sign
    /// change or zero run is refined.
    pub fn zero_set_in(&self, t: f64, lo: f64, hi: f64, grid_n: usize) -> Vec<ValueInterval> {
        let snap = self.snapshot(t, t);
        let g = |v: f64| self.g_at(&snap, v);
        if self.class.is_monotone() {
            // lo(G) and hi(G) are nonincreasing in v.
            let a = first_true(lo, hi, |v| g(v).lo <= 0.0, &snap.abscissae);
            let b = last_true(lo, hi, |v| g(v).hi >= 0.0, &snap.abscissae);
            return match (a, b) {
                (Some(a), Some(b)) if a <= b => vec![ValueInterval::new(a, b)],
                (Some(a), Some(b)) if a - b <= 1e-12 * (1.0 + a.abs()) => {
                    vec![ValueInterval::point(0.5 * (a + b))]
                }
                _ => Vec::new(),
            };
        }
        let n = grid_n.max(2);
        let h = (hi - lo) / (n - 1) as f64;
        let vs: Vec<f64> = (0..n).map(|k| lo + k as f64 * h).collect();
        let gs: Vec<ValueInterval> = vs.iter().map(|&v| g(v)).collect();
        let sign = |x: &ValueInterval| {
            if x.contains_zero() {
                0
            } else if x.lo > 0.0 {
                1
            } else {
                -1
            }
        };
        let mut out: Vec<ValueInterval> = Vec::new();
        let mut k = 0;
        while k < n {
            let s = sign(&gs[k]);
            if s == 0 {
                let start = k;
                while k + 1 < n && sign(&gs[k + 1]) == 0 {
                    k += 1;
                }
                let a = if start > 0 {
                    bisect_edge(vs[start - 1], vs[start], |v| sign(&g(v)) == 0)
                } else {
                    vs[start]
                };
                let b = if k + 1 < n {
                    bisect_edge(vs[k + 1], vs[k], |v| sign(&g(v)) == 0)
                } else {
                    vs[k]
                };
                out.push(ValueInterval::new(a, b));
            } else if k + 1 < n && sign(&gs[k + 1]) == -s {
                let z = bisect_edge(vs[k], vs[k + 1], |v| sign(&g(v)) != s);
                out.push(ValueInterval::point(z));
            }
            k += 1;
        }
        out
    }

    /// [`zero_set_in`](Self::zero_set_in) over the absorbing box with
    /// 10⁴ grid points.
    pub fn zero_set(&self, t: f64) -> Result<Vec<ValueInterval>> {
        let b = self.velocity_bounds()?;
        Ok(self.zero_set_in(t, b.v_minus, b.v_plus, 10_000))
    }
}

/// First `v` in `[lo, hi]` where the monotone predicate `pred` turns true,
/// snapped to an abscissa when one lies within the final bracket.
fn first_true(lo: f64, hi: f64, pred: impl Fn(f64) -> bool, abscissae: &[f64]) -> Option<f64> {
    if pred(lo) {
        return Some(lo);
    }
    if !pred(hi) {
        return None;
    }
    let b = bisect_edge(lo, hi, &pred);
    let a = b - 1e-12 * (1.0 + b.abs());
    Some(
        abscissae
            .iter()
            .copied()
            .find(|&x| x >= a && x <= b && pred(x))
            .unwrap_or(b),
    )
}

/// Last `v` in `[lo, hi]` where the predicate (true, then false) holds.
fn last_true(lo: f64, hi: f64, pred: impl Fn(f64) -> bool, abscissae: &[f64]) -> Option<f64> {
    if pred(hi) {
        return Some(hi);
    }
    if !pred(lo) {
        return None;
    }
    let a = bisect_edge(hi, lo, &pred);
    let b = a + 1e-12 * (1.0 + a.abs());
    Some(
        abscissae
            .iter()
            .rev()
            .copied()
            .find(|&x| x >= a && x <= b && pred(x))
            .unwrap_or(a),
    )
}

/// Point between `outside` (predicate false) and `inside` (predicate true)
/// where the predicate switches, returned on the `inside` side.
fn bisect_edge(outside: f64, inside: f64, pred: impl Fn(f64) -> bool) -> f64 {
    let (mut o, mut i) = (outside, inside);
    for _ in 0..200 {
        let m = 0.5 * (o + i);
        if m == o || m == i {
            break;
        }
        if pred(m) {
            i = m;
        } else {
            o = m;
        }
    }
    i
}
