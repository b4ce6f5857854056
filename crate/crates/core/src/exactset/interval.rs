use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A bounded interval with exactly tracked endpoint closedness.
///
/// Raw intervals may be empty (`(a,a)`) or degenerate (`[a,a]`); a
/// normalized [`RealSet`](super::RealSet) never stores either.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo: Box::new(lo),
                hi: Box::new(hi),
            });
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    /// `[lo, hi]`. Panics if `lo > hi`; intended for literals.
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, true, true).expect("closed interval with lo > hi")
    }

    /// `(lo, hi)`. Panics if `lo > hi`.
    pub fn open(lo: Rational, hi: Rational) -> Self {
        Self::new(lo, hi, false, false).expect("open interval with lo > hi")
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && !(self.lo_closed && self.hi_closed)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi && self.lo_closed && self.hi_closed
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        above
            && match x.cmp(&self.hi) {
                Ordering::Less => true,
                Ordering::Equal => self.hi_closed,
                Ordering::Greater => false,
            }
    }

    /// Strict interior membership.
    pub fn contains_interior(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// First moment `(hi^2 - lo^2) / 2`.
    pub fn moment(&self) -> Rational {
        (&self.hi * &self.hi - &self.lo * &self.lo) / rational::int(2)
    }

    pub fn closure(&self) -> Interval {
        Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn interior(&self) -> Interval {
        Interval {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && self.hi_closed
    }

    /// Image under `x -> alpha * x + beta`, `alpha != 0`.
    pub fn affine(&self, alpha: &Rational, beta: &Rational) -> Interval {
        let a = alpha * &self.lo + beta;
        let b = alpha * &self.hi + beta;
        if alpha > &rational::zero() {
            Interval {
                lo: a,
                hi: b,
                lo_closed: self.lo_closed,
                hi_closed: self.hi_closed,
            }
        } else {
            Interval {
                lo: b,
                hi: a,
                lo_closed: self.hi_closed,
                hi_closed: self.lo_closed,
            }
        }
    }

    /// Intersection with another interval, `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        if lo > hi {
            return None;
        }
        let iv = Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        };
        (!iv.is_empty()).then_some(iv)
    }

    /// `self` minus `other`: up to two pieces, possibly empty or degenerate.
    pub fn minus(&self, other: &Interval) -> Vec<Interval> {
        if self.intersect(other).is_none() {
            return vec![self.clone()];
        }
        let mut out = Vec::with_capacity(2);
        // left remainder: [self.lo, other.lo) with complementary closedness
        if self.lo < other.lo || (self.lo == other.lo && self.lo_closed && !other.lo_closed) {
            out.push(Interval {
                lo: self.lo.clone(),
                hi: other.lo.clone(),
                lo_closed: self.lo_closed,
                hi_closed: !other.lo_closed,
            });
        }
        if other.hi < self.hi || (self.hi == other.hi && self.hi_closed && !other.hi_closed) {
            out.push(Interval {
                lo: other.hi.clone(),
                hi: self.hi.clone(),
                lo_closed: !other.hi_closed,
                hi_closed: self.hi_closed,
            });
        }
        out.retain(|i| !i.is_empty());
        out
    }

    /// True when the union with `other` (which must start no earlier) is a
    /// single interval.
    pub(crate) fn joins(&self, next: &Interval) -> bool {
        match next.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Greater => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            rational::fmt(&self.lo),
            rational::fmt(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}
