use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A closed, bounded subset `[lo, hi]` of the real line.
///
/// Set-valued forces and right-hand sides are always convex and compact, so
/// a pair of endpoints is enough. Arithmetic is Minkowski arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ValueInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub const ZERO: ValueInterval = ValueInterval { lo: 0.0, hi: 0.0 };

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_single(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Element of minimal absolute value.
    pub fn min_norm(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else if self.lo > 0.0 {
            self.lo
        } else {
            self.hi
        }
    }

    pub fn scale(self, k: f64) -> Self {
        if k >= 0.0 {
            Self::new(k * self.lo, k * self.hi)
        } else {
            Self::new(k * self.hi, k * self.lo)
        }
    }

    pub fn shift(self, x: f64) -> Self {
        Self {
            lo: self.lo + x,
            hi: self.hi + x,
        }
    }
}

impl fmt::Display for ValueInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_single() {
            write!(f, "{{{}}}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl Add for ValueInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl AddAssign for ValueInterval {
    fn add_assign(&mut self, rhs: Self) {
        self.lo += rhs.lo;
        self.hi += rhs.hi;
    }
}

impl Sub for ValueInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Neg for ValueInterval {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul<f64> for ValueInterval {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.scale(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minkowski_ops() {
        let a = ValueInterval::new(-1.0, 1.0);
        let b = ValueInterval::point(2.0);
        assert_eq!(a + b, ValueInterval::new(1.0, 3.0));
        assert_eq!(b - a, ValueInterval::new(1.0, 3.0));
        assert_eq!(a.scale(-2.0), ValueInterval::new(-2.0, 2.0));
        assert_eq!(-ValueInterval::new(1.0, 2.0), ValueInterval::new(-2.0, -1.0));
    }

    #[test]
    fn min_norm_selection() {
        assert_eq!(ValueInterval::new(-1.0, 2.0).min_norm(), 0.0);
        assert_eq!(ValueInterval::new(0.5, 2.0).min_norm(), 0.5);
        assert_eq!(ValueInterval::new(-3.0, -2.0).min_norm(), -2.0);
    }
}
