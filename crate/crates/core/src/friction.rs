//! Time-periodic set-valued friction laws in split form.
//!
//! A law is evaluated as
//!
//! ```text
//! F(t, u) = -mu_v(t) u - dry(t, u) - extra(u) + psi(t, u)
//! ```
//!
//! where `dry(t, u)` is `{mu+}` for `u > 0`, `{-mu-}` for `u < 0` and
//! `[-mu-, mu+]` at `u = 0`. The first three terms form a maximal monotone
//! decreasing graph; `psi` is a bounded Lipschitz perturbation.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::interval::ValueInterval;
use crate::signals::{BreakpointSet, PeriodicSignal};

/// Time-constant nondecreasing graph given by knots `(u, a)`.
///
/// Consecutive knots with equal `u` form a vertical segment (a jump of the
/// graph). Beyond the first and last knot the graph continues with the
/// slope of the adjacent segment, or flat when that segment is vertical.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneGraph {
    knots: Vec<(f64, f64)>,
    slope_below: f64,
    slope_above: f64,
}

impl MonotoneGraph {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidLaw("monotone graph needs at least one knot".into()));
        }
        if knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite()) {
            return Err(Error::InvalidLaw("monotone graph knots must be finite".into()));
        }
        for w in knots.windows(2) {
            if w[1].0 < w[0].0 || w[1].1 < w[0].1 {
                return Err(Error::InvalidLaw(
                    "monotone graph knots must be nondecreasing in both coordinates".into(),
                ));
            }
            if w[1] == w[0] {
                return Err(Error::InvalidLaw("repeated monotone graph knot".into()));
            }
        }
        let seg_slope = |a: (f64, f64), b: (f64, f64)| {
            if b.0 > a.0 {
                (b.1 - a.1) / (b.0 - a.0)
            } else {
                0.0
            }
        };
        let n = knots.len();
        let (slope_below, slope_above) = if n == 1 {
            (0.0, 0.0)
        } else {
            (seg_slope(knots[0], knots[1]), seg_slope(knots[n - 2], knots[n - 1]))
        };
        Ok(Self {
            knots,
            slope_below,
            slope_above,
        })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, u: f64) -> ValueInterval {
        let k = &self.knots;
        let first = k[0];
        let last = k[k.len() - 1];
        if u < first.0 {
            return ValueInterval::point(first.1 + self.slope_below * (u - first.0));
        }
        if u > last.0 {
            return ValueInterval::point(last.1 + self.slope_above * (u - last.0));
        }
        let lo_idx = k.partition_point(|p| p.0 < u);
        let hi_idx = k.partition_point(|p| p.0 <= u);
        if hi_idx > lo_idx {
            // u coincides with one or more knots
            return ValueInterval::new(k[lo_idx].1, k[hi_idx - 1].1);
        }
        let (a, b) = (k[lo_idx - 1], k[lo_idx]);
        let w = (u - a.0) / (b.0 - a.0);
        ValueInterval::point(a.1 + w * (b.1 - a.1))
    }

    /// Slope away from knots.
    pub fn slope(&self, u: f64) -> f64 {
        let k = &self.knots;
        if u <= k[0].0 {
            return self.slope_below;
        }
        if u >= k[k.len() - 1].0 {
            return self.slope_above;
        }
        let i = k.partition_point(|p| p.0 <= u);
        let (a, b) = (k[i - 1], k[i]);
        if b.0 > a.0 {
            (b.1 - a.1) / (b.0 - a.0)
        } else {
            0.0
        }
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.knots.len() > 1
            && self.slope_below > 0.0
            && self.slope_above > 0.0
            && self.knots.windows(2).all(|w| w[1].0 == w[0].0 || w[1].1 > w[0].1)
    }

    pub fn has_jumps(&self) -> bool {
        self.knots.windows(2).any(|w| w[1].0 == w[0].0)
    }

    /// Abscissae where the graph is not affine, deduplicated.
    pub fn abscissae(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.knots.iter().map(|k| k.0).collect();
        xs.dedup();
        xs
    }
}

/// Shape of a Lipschitz perturbation in the sliding velocity.
#[derive(Debug, Clone, PartialEq)]
pub enum PerturbationShape {
    /// `amplitude * sin(pi u / width)` for `|u| < width`, zero elsewhere.
    Stribeck { amplitude: f64, width: f64 },
    /// Linear interpolation between `(u, value)` knots, constant beyond them.
    Table(Vec<(f64, f64)>),
}

/// Single-valued perturbation `psi(t, u) = scale(t) * shape(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    shape: PerturbationShape,
    lipschitz: f64,
    scale: Option<PeriodicSignal>,
}

impl Perturbation {
    pub fn stribeck(amplitude: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) || !amplitude.is_finite() {
            return Err(Error::InvalidLaw(format!(
                "Stribeck perturbation needs finite amplitude and positive width, got ({amplitude}, {width})"
            )));
        }
        Ok(Self {
            shape: PerturbationShape::Stribeck { amplitude, width },
            lipschitz: amplitude.abs() * std::f64::consts::PI / width,
            scale: None,
        })
    }

    /// Tabulated perturbation; `lipschitz` must bound every segment slope.
    pub fn table(knots: Vec<(f64, f64)>, lipschitz: f64) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidLaw("perturbation table is empty".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidLaw("perturbation table abscissae must increase".into()));
        }
        let steepest = knots
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max);
        if !(lipschitz >= steepest * (1.0 - 1e-12)) {
            return Err(Error::InvalidLaw(format!(
                "declared Lipschitz constant {lipschitz} is below the table slope {steepest}"
            )));
        }
        Ok(Self {
            shape: PerturbationShape::Table(knots),
            lipschitz,
            scale: None,
        })
    }

    pub fn with_scale(mut self, scale: PeriodicSignal) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn shape(&self) -> &PerturbationShape {
        &self.shape
    }

    pub fn scale(&self) -> Option<&PeriodicSignal> {
        self.scale.as_ref()
    }

    /// Lipschitz constant of the shape in `u` (before time scaling).
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn shape_at(&self, u: f64) -> f64 {
        match &self.shape {
            PerturbationShape::Stribeck { amplitude, width } => {
                if u.abs() < *width {
                    amplitude * (std::f64::consts::PI * u / width).sin()
                } else {
                    0.0
                }
            }
            PerturbationShape::Table(k) => {
                let n = k.len();
                if u <= k[0].0 {
                    return k[0].1;
                }
                if u >= k[n - 1].0 {
                    return k[n - 1].1;
                }
                let i = k.partition_point(|p| p.0 <= u);
                let (a, b) = (k[i - 1], k[i]);
                a.1 + (u - a.0) / (b.0 - a.0) * (b.1 - a.1)
            }
        }
    }

    /// `(inf, sup)` of the shape over `u >= r` (`above`) or `u <= -r`.
    fn shape_range_beyond(&self, r: f64, above: bool) -> (f64, f64) {
        match &self.shape {
            PerturbationShape::Stribeck { amplitude, width } => {
                if r >= *width {
                    (0.0, 0.0)
                } else {
                    (-amplitude.abs(), amplitude.abs())
                }
            }
            PerturbationShape::Table(k) => {
                let edge = if above { r } else { -r };
                let mut lo = self.shape_at(edge);
                let mut hi = lo;
                for p in k.iter().filter(|p| if above { p.0 > r } else { p.0 < -r }) {
                    lo = lo.min(p.1);
                    hi = hi.max(p.1);
                }
                (lo, hi)
            }
        }
    }
}

/// Declared tail bounds of a custom law: for `u >= threshold`,
/// `F(t, u) <= upper(t)`, and for `u <= -threshold`, `F(t, u) >= -lower(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailBounds {
    pub lower: PeriodicSignal,
    pub upper: PeriodicSignal,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Dry,
    Viscous,
    Bingham,
    Stribeck,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawClass {
    /// Pure dry friction, possibly identically zero.
    DryOnly,
    Monotone,
    StrictlyMonotone,
    NonMonotone,
}

/// Coefficients of a law frozen at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct LawCoefs {
    pub mu_v: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub psi_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrictionLaw {
    kind: LawKind,
    mu_v: Option<PeriodicSignal>,
    mu_plus: Option<PeriodicSignal>,
    mu_minus: Option<PeriodicSignal>,
    extra: Option<MonotoneGraph>,
    psi: Option<Perturbation>,
    tail_bounds: Option<TailBounds>,
}

fn check_nonnegative(name: &str, s: &PeriodicSignal) -> Result<()> {
    let (lo, _) = s.range();
    if lo < 0.0 {
        return Err(Error::InvalidLaw(format!("{name} = `{}` takes negative values (min {lo})", s.source())));
    }
    Ok(())
}

impl FrictionLaw {
    fn empty(kind: LawKind) -> Self {
        Self {
            kind,
            mu_v: None,
            mu_plus: None,
            mu_minus: None,
            extra: None,
            psi: None,
            tail_bounds: None,
        }
    }

    /// Dry friction with possibly anisotropic, time-dependent coefficients.
    pub fn dry(mu_plus: PeriodicSignal, mu_minus: PeriodicSignal) -> Result<Self> {
        check_nonnegative("mu_plus", &mu_plus)?;
        check_nonnegative("mu_minus", &mu_minus)?;
        Ok(Self {
            mu_plus: Some(mu_plus),
            mu_minus: Some(mu_minus),
            ..Self::empty(LawKind::Dry)
        })
    }

    /// Isotropic constant dry friction `-mu * d|u|`.
    pub fn coulomb(period: f64, mu: f64) -> Result<Self> {
        Self::dry(PeriodicSignal::constant(period, mu), PeriodicSignal::constant(period, mu))
    }

    pub fn viscous(mu_v: PeriodicSignal) -> Result<Self> {
        check_nonnegative("mu_v", &mu_v)?;
        Ok(Self {
            mu_v: Some(mu_v),
            ..Self::empty(LawKind::Viscous)
        })
    }

    /// Viscous plus dry friction: `-mu_v u - mu * d|u|`.
    pub fn bingham(mu_v: PeriodicSignal, mu_plus: PeriodicSignal, mu_minus: PeriodicSignal) -> Result<Self> {
        let mut law = Self::dry(mu_plus, mu_minus)?;
        check_nonnegative("mu_v", &mu_v)?;
        law.kind = LawKind::Bingham;
        law.mu_v = Some(mu_v);
        Ok(law)
    }

    /// Dry friction with a Stribeck dip of the given amplitude and width.
    pub fn stribeck(mu_plus: PeriodicSignal, mu_minus: PeriodicSignal, psi: Perturbation) -> Result<Self> {
        let mut law = Self::dry(mu_plus, mu_minus)?;
        law.kind = LawKind::Stribeck;
        law.psi = Some(psi);
        Ok(law)
    }

    /// A law assembled from optional parts. Tail bounds are required by
    /// the reduction step, not here.
    pub fn custom(
        mu_v: Option<PeriodicSignal>,
        dry: Option<(PeriodicSignal, PeriodicSignal)>,
        extra: Option<MonotoneGraph>,
        psi: Option<Perturbation>,
        tail_bounds: Option<TailBounds>,
    ) -> Result<Self> {
        if let Some(m) = &mu_v {
            check_nonnegative("mu_v", m)?;
        }
        let (mu_plus, mu_minus) = match dry {
            Some((p, m)) => {
                check_nonnegative("mu_plus", &p)?;
                check_nonnegative("mu_minus", &m)?;
                (Some(p), Some(m))
            }
            None => (None, None),
        };
        if let Some(tb) = &tail_bounds {
            if !(tb.threshold >= 0.0) {
                return Err(Error::InvalidLaw("tail bound threshold must be nonnegative".into()));
            }
        }
        Ok(Self {
            kind: LawKind::Custom,
            mu_v,
            mu_plus,
            mu_minus,
            extra,
            psi,
            tail_bounds,
        })
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn mu_v(&self) -> Option<&PeriodicSignal> {
        self.mu_v.as_ref()
    }

    pub fn mu_plus(&self) -> Option<&PeriodicSignal> {
        self.mu_plus.as_ref()
    }

    pub fn mu_minus(&self) -> Option<&PeriodicSignal> {
        self.mu_minus.as_ref()
    }

    pub fn extra(&self) -> Option<&MonotoneGraph> {
        self.extra.as_ref()
    }

    pub fn psi(&self) -> Option<&Perturbation> {
        self.psi.as_ref()
    }

    pub fn tail_bounds(&self) -> Option<&TailBounds> {
        self.tail_bounds.as_ref()
    }

    pub fn has_dry(&self) -> bool {
        self.mu_plus.is_some()
    }

    /// Whether the monotone part grows without bound (viscous or extra graph).
    pub fn has_growing_tail(&self) -> bool {
        self.mu_v.as_ref().is_some_and(|m| m.range().0 > 0.0)
            || self
                .extra
                .as_ref()
                .is_some_and(|g| g.slope_below > 0.0 || g.slope_above > 0.0)
    }

    pub fn class(&self) -> LawClass {
        if self.psi.is_some() {
            return LawClass::NonMonotone;
        }
        let strict_viscous = self.mu_v.as_ref().is_some_and(|m| m.range().0 > 0.0);
        let strict_extra = self.extra.as_ref().is_some_and(|g| g.is_strictly_increasing());
        if strict_viscous || strict_extra {
            return LawClass::StrictlyMonotone;
        }
        let viscous_zero = self.mu_v.as_ref().map_or(true, |m| m.as_constant() == Some(0.0));
        if viscous_zero && self.extra.is_none() {
            LawClass::DryOnly
        } else {
            LawClass::Monotone
        }
    }

    /// Every time signal the law depends on.
    pub fn signals(&self) -> impl Iterator<Item = &PeriodicSignal> {
        [
            self.mu_v.as_ref(),
            self.mu_plus.as_ref(),
            self.mu_minus.as_ref(),
            self.psi.as_ref().and_then(|p| p.scale.as_ref()),
        ]
        .into_iter()
        .flatten()
    }

    pub fn breakpoints(&self, period: f64) -> BreakpointSet {
        self.signals()
            .fold(BreakpointSet::default(), |acc, s| acc.union(s.breakpoints(), period))
    }

    /// Aggregate Lipschitz constant of the perturbation in `u`.
    pub fn psi_lipschitz(&self) -> f64 {
        match &self.psi {
            None => 0.0,
            Some(p) => {
                let scale = p.scale.as_ref().map_or(1.0, |s| {
                    let (lo, hi) = s.range();
                    lo.abs().max(hi.abs())
                });
                p.lipschitz * scale
            }
        }
    }

    pub(crate) fn coefs_within(&self, t: f64, anchor: f64) -> LawCoefs {
        let at = |s: &Option<PeriodicSignal>| s.as_ref().map_or(0.0, |s| s.eval_within(t, anchor));
        LawCoefs {
            mu_v: at(&self.mu_v),
            mu_plus: at(&self.mu_plus),
            mu_minus: at(&self.mu_minus),
            psi_scale: match &self.psi {
                None => 0.0,
                Some(p) => p.scale.as_ref().map_or(1.0, |s| s.eval_within(t, anchor)),
            },
        }
    }

    /// The increasing graph `A(t, u) = mu_v u + dry(u) + extra(u)`, i.e. minus
    /// the monotone part of `F`.
    pub(crate) fn monotone_with(&self, c: &LawCoefs, u: f64) -> ValueInterval {
        let dry = if u > 0.0 {
            ValueInterval::point(c.mu_plus)
        } else if u < 0.0 {
            ValueInterval::point(-c.mu_minus)
        } else {
            ValueInterval::new(-c.mu_minus, c.mu_plus)
        };
        let mut a = dry.shift(c.mu_v * u);
        if let Some(g) = &self.extra {
            a += g.eval(u);
        }
        a
    }

    /// Derivative of the monotone graph away from its abscissae.
    pub(crate) fn monotone_slope_with(&self, c: &LawCoefs, u: f64) -> f64 {
        c.mu_v + self.extra.as_ref().map_or(0.0, |g| g.slope(u))
    }

    pub(crate) fn psi_with(&self, c: &LawCoefs, u: f64) -> f64 {
        match &self.psi {
            None => 0.0,
            Some(p) => c.psi_scale * p.shape_at(u),
        }
    }

    /// Abscissae (in `u`) where the monotone graph is not affine at an
    /// instant with coefficients `c`.
    pub(crate) fn abscissae_with(&self, c: &LawCoefs, out: &mut Vec<f64>) {
        if c.mu_plus + c.mu_minus > 0.0 {
            out.push(0.0);
        }
        if let Some(g) = &self.extra {
            out.extend(g.abscissae());
        }
    }

    /// Abscissae where the graph jumps (set-valued points).
    pub(crate) fn jumps_with(&self, c: &LawCoefs, out: &mut Vec<f64>) {
        if c.mu_plus + c.mu_minus > 0.0 {
            out.push(0.0);
        }
        if let Some(g) = &self.extra {
            out.extend(g.knots.windows(2).filter(|w| w[1].0 == w[0].0).map(|w| w[0].0));
        }
    }

    /// `F(t, u)` as a closed interval.
    pub fn eval(&self, t: f64, u: f64) -> ValueInterval {
        let c = self.coefs_within(t, t);
        (-self.monotone_with(&c, u)).shift(self.psi_with(&c, u))
    }

    /// `(l-(t), l+(t))` such that `F(t, u) <= l+` for `u >= r` and
    /// `F(t, u) >= -l-` for `u <= -r`.
    ///
    /// Custom laws report their declared bounds, which hold only for
    /// `r >= threshold`; other laws are bounded analytically.
    pub fn tail_at(&self, t: f64, r: f64) -> Result<(f64, f64)> {
        if self.kind == LawKind::Custom {
            let tb = self.tail_bounds.as_ref().ok_or(Error::MissingTailBounds(usize::MAX))?;
            return Ok((tb.lower.eval(t), tb.upper.eval(t)));
        }
        let c = self.coefs_within(t, t);
        let mut lower = -c.mu_minus - c.mu_v * r;
        let mut upper = -c.mu_plus - c.mu_v * r;
        if let Some(g) = &self.extra {
            lower += g.eval(-r).hi;
            upper -= g.eval(r).lo;
        }
        if let Some(p) = &self.psi {
            let (a_lo, a_hi) = p.shape_range_beyond(r, true);
            let (b_lo, b_hi) = p.shape_range_beyond(r, false);
            let s = c.psi_scale;
            upper += (s * a_lo).max(s * a_hi);
            lower += (-s * b_lo).max(-s * b_hi);
        }
        Ok((lower, upper))
    }
}

/// `F(t, u)` for a law.
pub fn eval_law(law: &FrictionLaw, t: f64, u: f64) -> ValueInterval {
    law.eval(t, u)
}

/// Default relative tolerance of resolvent solves.
pub const DEFAULT_RESOLVENT_TOL: f64 = 1e-12;

/// A nondecreasing, piecewise-affine, interval-valued map of `v` that the
/// resolvent solver can query.
pub(crate) trait IncreasingGraph {
    fn at(&self, v: f64) -> ValueInterval;
    /// Derivative on the open affine piece containing `v`.
    fn slope(&self, v: f64) -> f64;
    /// Sorted abscissae separating the affine pieces.
    fn abscissae(&self) -> &[f64];
}

/// Solves `rhs ∈ v + lambda * A(v)` for `v`.
///
/// The solve brackets the root with `[rhs - lambda M, rhs + lambda M]`,
/// `M = max |A(rhs)|`, bisects over the abscissae inside the bracket with an
/// interval membership test, and finishes with the affine solve on the piece
/// that contains the root. A plain bisection down to `tol` is the fallback
/// whenever the affine solve fails the membership test.
pub(crate) fn solve_resolvent<G: IncreasingGraph>(graph: &G, lambda: f64, rhs: f64, tol_rel: f64) -> Result<f64> {
    let fail = |message: String| Error::NumericalFailure { t: f64::NAN, v: rhs, message };
    if !rhs.is_finite() {
        return Err(fail("non-finite right-hand side".into()));
    }
    let tol = tol_rel * (1.0 + rhs.abs());
    let cmp = |v: f64| {
        let h = graph.at(v).scale(lambda).shift(v);
        if h.hi < rhs {
            Ordering::Less
        } else if h.lo > rhs {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    };
    let a0 = graph.at(rhs);
    if a0.contains_zero() {
        return Ok(rhs);
    }
    let m = a0.lo.abs().max(a0.hi.abs());
    let mut half = lambda * m;
    let mut widenings = 0;
    let (mut lo, mut hi) = loop {
        let (lo, hi) = (rhs - half, rhs + half);
        if cmp(lo) != Ordering::Greater && cmp(hi) != Ordering::Less {
            break (lo, hi);
        }
        widenings += 1;
        if widenings > 10 || !half.is_finite() {
            return Err(fail(format!("no bracket after {widenings} widenings (half-width {half:e})")));
        }
        half *= 2.0;
    };
    match cmp(lo) {
        Ordering::Equal => return Ok(lo),
        _ => {}
    }
    if cmp(hi) == Ordering::Equal {
        return Ok(hi);
    }
    // Narrow to a single affine piece.
    let xs = graph.abscissae();
    let start = xs.partition_point(|&x| x <= lo);
    let end = xs.partition_point(|&x| x < hi);
    let inner = &xs[start..end];
    let mut a = 0;
    let mut b = inner.len();
    while a < b {
        let mid = (a + b) / 2;
        match cmp(inner[mid]) {
            Ordering::Equal => return Ok(inner[mid]),
            Ordering::Less => a = mid + 1,
            Ordering::Greater => b = mid,
        }
    }
    if a > 0 {
        lo = inner[a - 1];
    }
    if a < inner.len() {
        hi = inner[a];
    }
    let mid = 0.5 * (lo + hi);
    let k = graph.slope(mid);
    let am = graph.at(mid).midpoint();
    let guess = (mid + (rhs - mid - lambda * am) / (1.0 + lambda * k)).clamp(lo, hi);
    let h = graph.at(guess).scale(lambda).shift(guess);
    if h.lo - tol <= rhs && rhs <= h.hi + tol {
        return Ok(guess);
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let m = 0.5 * (lo + hi);
        match cmp(m) {
            Ordering::Equal => return Ok(m),
            Ordering::Less => lo = m,
            Ordering::Greater => hi = m,
        }
    }
    Ok(0.5 * (lo + hi))
}

struct LawGraph<'a> {
    law: &'a FrictionLaw,
    coefs: LawCoefs,
    abscissae: Vec<f64>,
}

impl IncreasingGraph for LawGraph<'_> {
    fn at(&self, v: f64) -> ValueInterval {
        self.law.monotone_with(&self.coefs, v)
    }
    fn slope(&self, v: f64) -> f64 {
        self.law.monotone_slope_with(&self.coefs, v)
    }
    fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }
}

/// The unique `u` with `rhs ∈ u + lambda * A(t, u)`, where `A` is minus the
/// monotone part of the law (the perturbation is ignored).
pub fn resolvent_monotone(law: &FrictionLaw, t: f64, lambda: f64, rhs: f64) -> Result<f64> {
    resolvent_monotone_tol(law, t, lambda, rhs, DEFAULT_RESOLVENT_TOL)
}

pub fn resolvent_monotone_tol(law: &FrictionLaw, t: f64, lambda: f64, rhs: f64, tol_rel: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidStep(lambda));
    }
    let coefs = law.coefs_within(t, t);
    let mut abscissae = Vec::new();
    law.abscissae_with(&coefs, &mut abscissae);
    abscissae.sort_by(f64::total_cmp);
    abscissae.dedup();
    let graph = LawGraph { law, coefs, abscissae };
    solve_resolvent(&graph, lambda, rhs, tol_rel).map_err(|e| match e {
        Error::NumericalFailure { v, message, .. } => Error::NumericalFailure { t, v, message },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> PeriodicSignal {
        PeriodicSignal::constant(1.0, x)
    }

    #[test]
    fn dry_law_values() {
        let law = FrictionLaw::coulomb(1.0, 1.0).unwrap();
        assert_eq!(eval_law(&law, 0.3, 0.0), ValueInterval::new(-1.0, 1.0));
        assert_eq!(eval_law(&law, 0.3, 0.5), ValueInterval::point(-1.0));
        assert_eq!(eval_law(&law, 0.3, -0.5), ValueInterval::point(1.0));
        assert_eq!(law.class(), LawClass::DryOnly);
    }

    #[test]
    fn bingham_value() {
        let law = FrictionLaw::bingham(c(1.0), c(1.0), c(1.0)).unwrap();
        assert_eq!(eval_law(&law, 0.0, 2.0), ValueInterval::point(-3.0));
        assert_eq!(law.class(), LawClass::StrictlyMonotone);
    }

    #[test]
    fn stribeck_value() {
        let law = FrictionLaw::stribeck(c(1.0), c(1.0), Perturbation::stribeck(0.5, 1.0).unwrap()).unwrap();
        let f = eval_law(&law, 0.0, 0.5);
        assert!(f.is_single());
        assert!((f.lo + 0.5).abs() < 1e-15);
        assert_eq!(law.class(), LawClass::NonMonotone);
        assert!((law.psi_lipschitz() - 0.5 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn resolvent_examples() {
        let dry = FrictionLaw::coulomb(1.0, 1.0).unwrap();
        assert_eq!(resolvent_monotone(&dry, 0.0, 0.1, 0.05).unwrap(), 0.0);
        assert!((resolvent_monotone(&dry, 0.0, 0.1, 0.5).unwrap() - 0.4).abs() < 1e-12);
        let visc = FrictionLaw::viscous(c(2.0)).unwrap();
        assert!((resolvent_monotone(&visc, 0.0, 0.5, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(
            resolvent_monotone(&dry, 0.0, 0.0, 1.0),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn extra_graph_with_jump() {
        let g = MonotoneGraph::new(vec![(-1.0, -1.0), (0.0, 0.0), (0.0, 2.0), (1.0, 3.0)]).unwrap();
        assert_eq!(g.eval(0.0), ValueInterval::new(0.0, 2.0));
        assert_eq!(g.eval(2.0), ValueInterval::point(4.0));
        assert_eq!(g.eval(-3.0), ValueInterval::point(-3.0));
        assert!(g.has_jumps());
        assert!(g.is_strictly_increasing());
        let law = FrictionLaw::custom(None, None, Some(g), None, None).unwrap();
        // u + A(u) = 1 lands in the jump at 0.
        assert_eq!(resolvent_monotone(&law, 0.0, 1.0, 1.0).unwrap(), 0.0);
        // u + u + 2 = 4 on the upper branch.
        assert!((resolvent_monotone(&law, 0.0, 1.0, 4.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(MonotoneGraph::new(vec![(0.0, 1.0), (1.0, 0.0)]).is_err());
    }

    #[test]
    fn tail_bounds_of_builtin_laws() {
        let law = FrictionLaw::bingham(c(2.0), c(1.0), c(0.5)).unwrap();
        let (lower, upper) = law.tail_at(0.0, 0.25).unwrap();
        assert_eq!(upper, -1.0 - 0.5);
        assert_eq!(lower, -0.5 - 0.5);
        let custom = FrictionLaw::custom(Some(c(1.0)), None, None, None, None).unwrap();
        assert!(matches!(custom.tail_at(0.0, 1.0), Err(Error::MissingTailBounds(_))));
    }

    #[test]
    fn table_perturbation_needs_honest_lipschitz() {
        assert!(Perturbation::table(vec![(0.0, 0.0), (1.0, 2.0)], 1.0).is_err());
        let p = Perturbation::table(vec![(0.0, 0.0), (1.0, 2.0)], 2.0).unwrap();
        assert_eq!(p.shape_at(0.5), 1.0);
        assert_eq!(p.shape_at(5.0), 2.0);
    }
}
