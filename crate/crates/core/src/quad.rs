//! Composite Gauss–Legendre quadrature over piecewise-smooth integrands.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

const ORDER: usize = 16;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(ORDER).unwrap()))
}

/// Two-point Gauss nodes on `[-1, 1]` (weights are 1).
pub(crate) const GAUSS2: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

/// Integral over `[a, b]` using `panels` equal panels of a 16-point rule.
pub(crate) fn panels<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == panels { b } else { lo + h };
            rule().integrate(lo, hi, &mut f)
        })
        .sum()
}

/// Adaptive in the panel count: doubles until two successive estimates agree.
pub(crate) fn smooth<F: FnMut(f64) -> f64>(a: f64, b: f64, mut f: F) -> f64 {
    let mut n = 4;
    let mut prev = panels(a, b, n, &mut f);
    while n < 2048 {
        n *= 2;
        let next = panels(a, b, n, &mut f);
        if (next - prev).abs() <= 1e-14 * (1.0 + next.abs()) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Integral over `[a, b]` split at the interior points of `cuts` (sorted).
pub(crate) fn split<F: FnMut(f64) -> f64>(a: f64, b: f64, cuts: &[f64], mut f: F) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    for &c in cuts.iter().filter(|&&c| c > a && c < b) {
        total += smooth(lo, c, &mut f);
        lo = c;
    }
    total + smooth(lo, b, &mut f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = panels(0.0, 2.0, 1, |x| x.powi(7));
        assert!((v - 32.0).abs() < 1e-12);
    }

    #[test]
    fn discontinuity_is_resolved_by_cuts() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { -2.0 };
        let v = split(0.0, 1.0, &[0.3], step);
        assert!((v - (0.3 - 1.4)).abs() < 1e-14);
    }
}
