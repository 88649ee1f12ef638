use super::{Breakpoint, BreakpointKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum WaveShape {
    Square,
    Triangle,
}

/// Expression tree of a periodic signal. `Time` is the raw time argument;
/// only `Piecewise` reduces time modulo the signal period on its own.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Expr {
    Const(f64),
    Time,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// `shape` wave of the affine argument `slope * t + offset`.
    Wave {
        shape: WaveShape,
        slope: f64,
        offset: f64,
        period: f64,
        amplitude: f64,
    },
    /// `pieces[k]` is active on `[starts[k], starts[k + 1])` of each period.
    Piecewise {
        starts: Vec<f64>,
        pieces: Vec<Expr>,
    },
}

impl Expr {
    /// Value at time `t` of the smooth piece active at `anchor`.
    ///
    /// With `anchor == t` this is the right-continuous representative.
    /// Jump primitives select their branch from `anchor`; everything
    /// continuous is evaluated at `t`.
    pub(crate) fn eval(&self, t: f64, anchor: f64, period: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Time => t,
            Expr::Add(a, b) => a.eval(t, anchor, period) + b.eval(t, anchor, period),
            Expr::Sub(a, b) => a.eval(t, anchor, period) - b.eval(t, anchor, period),
            Expr::Mul(a, b) => a.eval(t, anchor, period) * b.eval(t, anchor, period),
            Expr::Div(a, b) => a.eval(t, anchor, period) / b.eval(t, anchor, period),
            Expr::Neg(a) => -a.eval(t, anchor, period),
            Expr::Sin(a) => a.eval(t, anchor, period).sin(),
            Expr::Cos(a) => a.eval(t, anchor, period).cos(),
            Expr::Wave {
                shape,
                slope,
                offset,
                period: p,
                amplitude,
            } => match shape {
                WaveShape::Square => {
                    let phase = ((slope * anchor + offset) / p).rem_euclid(1.0);
                    if phase < 0.5 {
                        *amplitude
                    } else {
                        -*amplitude
                    }
                }
                WaveShape::Triangle => {
                    let phase = ((slope * t + offset) / p).rem_euclid(1.0);
                    triangle_profile(phase, *amplitude)
                }
            },
            Expr::Piecewise { starts, pieces } => {
                let k = (anchor / period).floor();
                let local_anchor = (anchor - k * period).clamp(0.0, period);
                let local_t = t - k * period;
                let idx = starts.partition_point(|&s| s <= local_anchor).saturating_sub(1);
                pieces[idx].eval(local_t, local_anchor, period)
            }
        }
    }

    pub(crate) fn depends_on_time(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Time | Expr::Wave { .. } | Expr::Piecewise { .. } => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_time() || b.depends_on_time()
            }
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) => a.depends_on_time(),
        }
    }

    /// `(slope, offset)` when the expression is affine in time.
    pub(crate) fn affine(&self) -> Option<(f64, f64)> {
        match self {
            Expr::Const(c) => Some((0.0, *c)),
            Expr::Time => Some((1.0, 0.0)),
            Expr::Add(a, b) => {
                let (a1, b1) = a.affine()?;
                let (a2, b2) = b.affine()?;
                Some((a1 + a2, b1 + b2))
            }
            Expr::Sub(a, b) => {
                let (a1, b1) = a.affine()?;
                let (a2, b2) = b.affine()?;
                Some((a1 - a2, b1 - b2))
            }
            Expr::Neg(a) => a.affine().map(|(s, o)| (-s, -o)),
            Expr::Mul(a, b) => {
                let (a1, b1) = a.affine()?;
                let (a2, b2) = b.affine()?;
                if a1 == 0.0 {
                    Some((b1 * a2, b1 * b2))
                } else if a2 == 0.0 {
                    Some((a1 * b2, b1 * b2))
                } else {
                    None
                }
            }
            Expr::Div(a, b) => {
                let (a1, b1) = a.affine()?;
                let (a2, b2) = b.affine()?;
                (a2 == 0.0).then(|| (a1 / b2, b1 / b2))
            }
            _ => None,
        }
    }

    /// Jump and kink times over one period `[0, period)`, unsorted.
    pub(crate) fn breakpoints(&self, period: f64) -> Vec<Breakpoint> {
        let mut out = Vec::new();
        self.collect_breakpoints(period, &mut out);
        out
    }

    fn collect_breakpoints(&self, period: f64, out: &mut Vec<Breakpoint>) {
        match self {
            Expr::Const(_) | Expr::Time => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_breakpoints(period, out);
                b.collect_breakpoints(period, out);
            }
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) => a.collect_breakpoints(period, out),
            Expr::Wave {
                shape,
                slope,
                offset,
                period: p,
                ..
            } => {
                let kind = match shape {
                    WaveShape::Square => BreakpointKind::Jump,
                    WaveShape::Triangle => BreakpointKind::Kink,
                };
                // Switches where slope * t + offset is a multiple of p / 2.
                let half = 0.5 * p;
                let k_lo = (offset / half).floor() as i64 - 1;
                let k_hi = ((slope * period + offset) / half).ceil() as i64 + 1;
                for k in k_lo..=k_hi {
                    let t = (k as f64 * half - offset) / slope;
                    if (0.0..period).contains(&t) {
                        out.push(Breakpoint { time: t, kind });
                    }
                }
            }
            Expr::Piecewise { starts, pieces } => {
                for (k, piece) in pieces.iter().enumerate() {
                    out.push(Breakpoint {
                        time: starts[k],
                        kind: BreakpointKind::Jump,
                    });
                    let end = starts.get(k + 1).copied().unwrap_or(period);
                    let mut inner = Vec::new();
                    piece.collect_breakpoints(period, &mut inner);
                    out.extend(inner.into_iter().filter(|b| b.time > starts[k] && b.time < end));
                }
            }
        }
    }

    pub(crate) fn wave_count(&self, period: f64) -> usize {
        match self {
            Expr::Wave { slope, period: p, .. } => (2.0 * slope * period / p).abs().ceil() as usize,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.wave_count(period) + b.wave_count(period)
            }
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) => a.wave_count(period),
            Expr::Piecewise { pieces, .. } => pieces.iter().map(|p| p.wave_count(period)).sum(),
            _ => 0,
        }
    }
}

/// Rises from `-amp` to `amp` on the first half period, falls back on the second.
fn triangle_profile(phase: f64, amp: f64) -> f64 {
    if phase < 0.5 {
        -amp + 4.0 * amp * phase
    } else {
        amp - 4.0 * amp * (phase - 0.5)
    }
}
