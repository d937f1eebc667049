//! Edge weights and extended distances.
//!
//! The algorithms only add, subtract, negate and compare weights, so any
//! totally ordered additive type works. `i64` gives exact arithmetic for
//! integer inputs; `f64` is the general real-valued binding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

pub trait Weight:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + fmt::Debug
    + fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;

    /// Rejects values that break the total order (NaN) or are not finite.
    fn is_admissible(self) -> bool;

    /// Canonical text form used by the graph file format and CLI output.
    fn to_text(self) -> String;

    fn parse_text(s: &str) -> Option<Self>;

    fn to_f64(self) -> f64;

    #[inline]
    fn total_cmp_w(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    #[inline]
    fn is_negative(self) -> bool {
        self < Self::ZERO
    }
}

impl Weight for i64 {
    const ZERO: Self = 0;

    fn is_admissible(self) -> bool {
        // Leave headroom so sums along simple paths cannot overflow.
        self.unsigned_abs() < (1u64 << 40)
    }

    fn to_text(self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Option<Self> {
        s.parse().ok()
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Weight for f64 {
    const ZERO: Self = 0.0;

    fn is_admissible(self) -> bool {
        self.is_finite()
    }

    fn to_text(self) -> String {
        // 17 significant digits round-trip every f64.
        let s = format!("{:.16e}", self);
        match s.parse::<f64>() {
            Ok(v) if v == self && self.fract() == 0.0 && self.abs() < 1e15 => format!("{}", self),
            _ => s,
        }
    }

    fn parse_text(s: &str) -> Option<Self> {
        s.parse().ok()
    }

    fn to_f64(self) -> f64 {
        self
    }
}

/// A distance: either a finite weight or +infinity (unreachable).
///
/// Variant order gives `Finite(_) < Inf` under the derived ordering.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Dist<W> {
    Finite(W),
    Inf,
}

impl<W: Weight> Dist<W> {
    pub const ZERO: Self = Dist::Finite(W::ZERO);

    #[inline]
    pub fn finite(self) -> Option<W> {
        match self {
            Dist::Finite(w) => Some(w),
            Dist::Inf => None,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        matches!(self, Dist::Finite(w) if w < W::ZERO)
    }

    #[inline]
    pub fn plus(self, w: W) -> Self {
        match self {
            Dist::Finite(d) => Dist::Finite(d + w),
            Dist::Inf => Dist::Inf,
        }
    }

    /// `self + other` where either side may be infinite.
    #[inline]
    pub fn add_dist(self, other: Self) -> Self {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Inf,
        }
    }

    #[inline]
    pub fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    #[inline]
    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl<W: Weight> fmt::Display for Dist<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(w) => f.write_str(&w.to_text()),
            Dist::Inf => f.write_str("inf"),
        }
    }
}
