//! Closed rational intervals and probability annotations.
//!
//! Intervals are ordered by the pointwise truth order: `[a1,a2] <= [b1,b2]`
//! iff `a1 <= b1` and `a2 <= b2`. The order is partial, so comparisons return
//! `Option<Ordering>`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

/// A closed interval `[lo, hi]` of rationals with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval bounds out of order: [{0}, {1}]")]
    Inverted(Rational, Rational),
    #[error("probability annotation [{0}, {1}] is not inside [0, 1]")]
    OutOfUnit(Rational, Rational),
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::Inverted(lo, hi));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(value: Rational) -> Self {
        Interval { lo: value.clone(), hi: value }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Pointwise truth order `self <= other`.
    pub fn truth_leq(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi <= other.hi
    }

    /// Comparison under the pointwise order; `None` when incomparable.
    pub fn truth_cmp(&self, other: &Interval) -> Option<Ordering> {
        match (self.truth_leq(other), other.truth_leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// Strict pointwise order: `<=` and not equal.
    pub fn truth_lt(&self, other: &Interval) -> bool {
        self.truth_leq(other) && self != other
    }

    /// Endpoint-wise sum.
    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A probability annotation: a closed subinterval of `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Annotation(Interval);

impl Annotation {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, IntervalError> {
        if !lo.is_probability() || !hi.is_probability() {
            return Err(IntervalError::OutOfUnit(lo, hi));
        }
        Interval::new(lo, hi).map(Annotation)
    }

    pub fn point(p: Rational) -> Result<Self, IntervalError> {
        Annotation::new(p.clone(), p)
    }

    /// `[1, 1]`, the annotation of an unannotated literal.
    pub fn certain() -> Self {
        Annotation(Interval::point(Rational::one()))
    }

    pub fn lo(&self) -> &Rational {
        self.0.lo()
    }

    pub fn hi(&self) -> &Rational {
        self.0.hi()
    }

    pub fn interval(&self) -> &Interval {
        &self.0
    }

    pub fn is_certain(&self) -> bool {
        let one = Rational::one();
        self.0.lo == one && self.0.hi == one
    }

    pub fn truth_leq(&self, other: &Annotation) -> bool {
        self.0.truth_leq(&other.0)
    }

    pub fn truth_cmp(&self, other: &Annotation) -> Option<Ordering> {
        self.0.truth_cmp(&other.0)
    }

    pub fn truth_lt(&self, other: &Annotation) -> bool {
        self.0.truth_lt(&other.0)
    }

    /// Builds an annotation from bounds already known to be in range.
    pub(crate) fn from_bounds_unchecked(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo.is_probability() && hi.is_probability() && lo <= hi);
        Annotation(Interval { lo, hi })
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<Annotation> for Interval {
    fn from(a: Annotation) -> Interval {
        a.0
    }
}

pub fn truth_leq(a: &Annotation, b: &Annotation) -> bool {
    a.truth_leq(b)
}

/// Pointwise product `[a.lo * b.lo, a.hi * b.hi]`, neutral element `[1,1]`.
pub fn interval_product(a: &Annotation, b: &Annotation) -> Annotation {
    Annotation::from_bounds_unchecked(a.lo() * b.lo(), a.hi() * b.hi())
}

/// Scales an annotation by a scalar, swapping the endpoints for negative
/// factors so the result stays ordered.
pub fn interval_scale(x: &Rational, a: &Annotation) -> Interval {
    let lo = x * a.lo();
    let hi = x * a.hi();
    if x.is_negative() {
        Interval { lo: hi, hi: lo }
    } else {
        Interval { lo, hi }
    }
}
