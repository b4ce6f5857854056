use std::cmp::Ordering;
use std::fmt;

use super::func::MonotoneFunc;
use crate::enclosure::Enclosure;
use crate::rational::{self, Rational};

/// Default tolerance for comparisons that cannot be decided exactly: `2^-40`.
pub fn default_tolerance() -> Rational {
    rational::pow2_neg(40)
}

/// Value of a mean: an exact rational, the exact preimage `f⁻¹(image)`
/// of a rational under a polynomial transform, or a certified enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeanValue {
    Exact(Rational),
    Preimage { func: MonotoneFunc, image: Rational },
    Approx(Enclosure),
}

impl MeanValue {
    /// `f⁻¹(image)`, collapsed to a rational when the inverse is rational.
    pub fn preimage(func: MonotoneFunc, image: Rational) -> MeanValue {
        match func.inverse_exact(&image) {
            Some(x) => MeanValue::Exact(x),
            None if func.is_polynomial() => MeanValue::Preimage { func, image },
            None => match func.inverse(&Enclosure::exact(image)) {
                Ok(e) => MeanValue::Approx(e),
                Err(_) => unreachable!("image lies in the range of the transform"),
            },
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            MeanValue::Exact(x) => Some(x),
            _ => None,
        }
    }

    /// Exact rational or symbolic preimage.
    pub fn is_exact(&self) -> bool {
        !matches!(self, MeanValue::Approx(_))
    }

    pub fn enclosure(&self) -> Enclosure {
        match self {
            MeanValue::Exact(x) => Enclosure::exact(x.clone()),
            MeanValue::Preimage { func, image } => func
                .inverse(&Enclosure::exact(image.clone()))
                .expect("image lies in the range"),
            MeanValue::Approx(e) => e.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            MeanValue::Exact(x) => rational::to_f64(x),
            _ => self.enclosure().to_f64(),
        }
    }

    /// Exact comparison against a rational when decidable.
    pub fn cmp_rational(&self, r: &Rational) -> Option<Ordering> {
        match self {
            MeanValue::Exact(x) => Some(x.cmp(r)),
            MeanValue::Preimage { func, image } => {
                let fr = func.apply_exact(r)?;
                let o = image.cmp(&fr);
                Some(if func.is_increasing() { o } else { o.reverse() })
            }
            MeanValue::Approx(e) => {
                if &e.hi < r {
                    Some(Ordering::Less)
                } else if &e.lo > r {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }

    /// Exact comparison when both sides allow it, otherwise by enclosures.
    pub fn compare(&self, other: &MeanValue) -> Option<Ordering> {
        match (self, other) {
            (_, MeanValue::Exact(y)) => self.cmp_rational(y),
            (MeanValue::Exact(x), _) => other.cmp_rational(x).map(Ordering::reverse),
            (
                MeanValue::Preimage { func: f, image: a },
                MeanValue::Preimage { func: g, image: b },
            ) if f == g => {
                let o = a.cmp(b);
                Some(if f.is_increasing() { o } else { o.reverse() })
            }
            _ => {
                let (a, b) = (self.enclosure(), other.enclosure());
                if a.hi < b.lo {
                    Some(Ordering::Less)
                } else if a.lo > b.hi {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }

    /// Equality: exact when decidable, otherwise within `tol`.
    pub fn equals(&self, other: &MeanValue, tol: &Rational) -> bool {
        match self.compare(other) {
            Some(o) if self.decidable_with(other) => o == Ordering::Equal,
            _ => self.distance(other) <= *tol,
        }
    }

    fn decidable_with(&self, other: &MeanValue) -> bool {
        match (self, other) {
            (MeanValue::Exact(_), MeanValue::Exact(_)) => true,
            (MeanValue::Exact(_), MeanValue::Preimage { .. })
            | (MeanValue::Preimage { .. }, MeanValue::Exact(_)) => true,
            (MeanValue::Preimage { func: f, .. }, MeanValue::Preimage { func: g, .. }) => f == g,
            _ => false,
        }
    }

    /// Upper bound on `|self - other|`.
    pub fn distance(&self, other: &MeanValue) -> Rational {
        if let (MeanValue::Exact(a), MeanValue::Exact(b)) = (self, other) {
            return rational::abs(&(a - b));
        }
        let (a, b) = (self.enclosure(), other.enclosure());
        rational::max(&(&a.hi - &b.lo), &(&b.hi - &a.lo))
    }

    /// Exact midpoint-free rational approximation.
    pub fn approx_rational(&self) -> Rational {
        match self {
            MeanValue::Exact(x) => x.clone(),
            _ => self.enclosure().mid(),
        }
    }
}

impl From<Rational> for MeanValue {
    fn from(x: Rational) -> MeanValue {
        MeanValue::Exact(x)
    }
}

impl fmt::Display for MeanValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanValue::Exact(x) => write!(f, "{}", rational::fmt(x)),
            MeanValue::Preimage { func, image } => write!(f, "{func}^-1({})", rational::fmt(image)),
            MeanValue::Approx(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn preimage_collapses_when_rational() {
        assert_eq!(
            MeanValue::preimage(MonotoneFunc::Square, rat(9, 4)),
            MeanValue::Exact(rat(3, 2))
        );
        let v = MeanValue::preimage(MonotoneFunc::Square, rat(1, 2));
        assert!(matches!(v, MeanValue::Preimage { .. }));
        assert!((v.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exact_comparisons_through_preimages() {
        let v = MeanValue::preimage(MonotoneFunc::Square, int(2));
        assert_eq!(v.cmp_rational(&rat(141, 100)), Some(Ordering::Greater));
        assert_eq!(v.cmp_rational(&rat(142, 100)), Some(Ordering::Less));
        let w = MeanValue::preimage(MonotoneFunc::Square, int(3));
        assert_eq!(v.compare(&w), Some(Ordering::Less));
        assert!(v.equals(&v.clone(), &default_tolerance()));
        assert!(!v.equals(&w, &default_tolerance()));
    }
}
