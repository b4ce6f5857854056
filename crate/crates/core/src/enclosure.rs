//! Certified rational enclosures of real numbers.
//!
//! Bounds are rounded outward to dyadic rationals so the operands stay
//! small while the true value is always contained.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Working precision, in bits after the binary point.
pub const PRECISION: u32 = 224;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

fn round_down(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(rational::floor_int(&scaled), scale)
}

fn round_up(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(rational::ceil_int(&scaled), scale)
}

impl Enclosure {
    pub fn exact(x: Rational) -> Enclosure {
        Enclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn new(lo: Rational, hi: Rational) -> Enclosure {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    fn rounded(lo: Rational, hi: Rational) -> Enclosure {
        Enclosure {
            lo: round_down(&lo, PRECISION),
            hi: round_up(&hi, PRECISION),
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / rational::int(2)
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.mid())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure::rounded(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure::rounded(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Enclosure::rounded(lo, hi)
    }

    /// Quotient; `None` when the divisor straddles zero.
    pub fn div(&self, o: &Enclosure) -> Option<Enclosure> {
        if !o.lo.is_positive() && !o.hi.is_negative() {
            return None;
        }
        let inv = Enclosure {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        };
        Some(self.mul(&inv))
    }

    pub fn scale(&self, r: &Rational) -> Enclosure {
        self.mul(&Enclosure::exact(r.clone()))
    }

    /// Certified `exp`.
    pub fn exp(&self) -> Enclosure {
        Enclosure {
            lo: exp_bounds(&self.lo).0,
            hi: exp_bounds(&self.hi).1,
        }
    }

    /// Certified natural logarithm; `None` unless strictly positive.
    pub fn ln(&self) -> Option<Enclosure> {
        if !self.lo.is_positive() {
            return None;
        }
        Some(Enclosure {
            lo: ln_bounds(&self.lo).0,
            hi: ln_bounds(&self.hi).1,
        })
    }

    /// Certified `n`-th root (odd `n` for negative values).
    pub fn root(&self, n: u32) -> Option<Enclosure> {
        Some(Enclosure {
            lo: root_bounds(&self.lo, n)?.0,
            hi: root_bounds(&self.hi, n)?.1,
        })
    }

    pub fn pow(&self, n: u32) -> Enclosure {
        if n % 2 == 1 || !self.lo.is_negative() {
            let p = |x: &Rational| num_traits::pow(x.clone(), n as usize);
            return Enclosure::rounded(p(&self.lo), p(&self.hi));
        }
        let a = num_traits::pow(self.lo.abs(), n as usize);
        let b = num_traits::pow(self.hi.abs(), n as usize);
        let hi = rational::max(&a, &b);
        let lo = if self.hi.is_negative() {
            rational::min(&a, &b)
        } else {
            rational::zero()
        };
        Enclosure::rounded(lo, hi)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {:.3e}",
            self.to_f64(),
            rational::to_f64(&self.width()) / 2.0
        )
    }
}

/// Taylor bounds of `exp(y)` for `|y| <= 1/2`.
fn exp_small(y: &Rational) -> (Rational, Rational) {
    let mut sum = rational::one();
    let mut term = rational::one();
    let mut k = 1u64;
    // each truncated term is off by at most 2^-(P+40); errors shrink by
    // |y|/k <= 1/2 per step, so 2^-(P+20) covers them all
    let slack = rational::pow2_neg(PRECISION + 20);
    let tol = rational::pow2_neg(PRECISION + 8);
    loop {
        term = round_down(&(term * y / rational::uint(k)), PRECISION + 40);
        sum += &term;
        k += 1;
        // remainder <= 2 |term| |y| / k
        let rem = term.abs() * y.abs() * rational::int(2) / rational::uint(k);
        if rem < tol {
            return (&sum - &rem - &slack, sum + rem + slack);
        }
    }
}

fn exp_bounds(x: &Rational) -> (Rational, Rational) {
    if x.is_zero() {
        return (rational::one(), rational::one());
    }
    let mut s = 0u32;
    let mut y = x.clone();
    let half = rational::half();
    while y.abs() > half {
        y /= rational::int(2);
        s += 1;
    }
    let (mut lo, mut hi) = exp_small(&y);
    let bits = PRECISION + 16 + s;
    for _ in 0..s {
        lo = round_down(&(&lo * &lo), bits);
        hi = round_up(&(&hi * &hi), bits);
    }
    (round_down(&lo, PRECISION), round_up(&hi, PRECISION))
}

/// Bounds of `2 atanh(z) = ln((1+z)/(1-z))` for `0 <= z <= 1/3`.
fn atanh2(z: &Rational) -> (Rational, Rational) {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = rational::zero();
    let mut k = 0u64;
    let tol = rational::pow2_neg(PRECISION + 8);
    loop {
        sum += &power / rational::uint(2 * k + 1);
        power = round_down(&(&power * &z2), PRECISION + 40);
        k += 1;
        let rem = &power / (rational::uint(2 * k + 1) * (rational::one() - &z2));
        if rem < tol {
            let two = rational::int(2);
            let lo = (&sum - &tol) * &two;
            let hi = (&sum + &rem + &tol) * &two;
            return (round_down(&lo, PRECISION + 8), round_up(&hi, PRECISION + 8));
        }
    }
}

fn ln2_bounds() -> (Rational, Rational) {
    atanh2(&rational::rat(1, 3))
}

fn ln_bounds(x: &Rational) -> (Rational, Rational) {
    debug_assert!(x.is_positive());
    if x == &rational::one() {
        return (rational::zero(), rational::zero());
    }
    // x = 2^e * m with m in [1, 2)
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = |e: i64| {
        if e >= 0 {
            x / Rational::from_integer(BigInt::one() << e as usize)
        } else {
            x * Rational::from_integer(BigInt::one() << (-e) as usize)
        }
    };
    let mut m = shift(e);
    while m >= rational::int(2) {
        e += 1;
        m = shift(e);
    }
    while m < rational::one() {
        e -= 1;
        m = shift(e);
    }
    let z = (&m - rational::one()) / (&m + rational::one());
    let (ml, mh) = atanh2(&z);
    let (l2l, l2h) = ln2_bounds();
    let ef = rational::int(e);
    let (el, eh) = if e >= 0 {
        (&ef * &l2l, &ef * &l2h)
    } else {
        (&ef * &l2h, &ef * &l2l)
    };
    (
        round_down(&(el + ml), PRECISION),
        round_up(&(eh + mh), PRECISION),
    )
}

fn iroot(n: &BigInt, k: u32) -> BigInt {
    // floor of the k-th root of a nonnegative integer, by bisection on bits
    if n.is_zero() {
        return BigInt::zero();
    }
    let bits = n.bits() / k as u64 + 1;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() << (bits as usize + 1);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if num_traits::pow(mid.clone(), k as usize) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Exact rational `k`-th root when it exists.
pub fn exact_root(x: &Rational, k: u32) -> Option<Rational> {
    if x.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-x, k).map(|r| -r);
    }
    let n = iroot(x.numer(), k);
    let d = iroot(x.denom(), k);
    let cand = Rational::new(n, d);
    (num_traits::pow(cand.clone(), k as usize) == *x).then_some(cand)
}

fn root_bounds(x: &Rational, k: u32) -> Option<(Rational, Rational)> {
    if x.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        let (lo, hi) = root_bounds(&-x, k)?;
        return Some((-hi, -lo));
    }
    if let Some(r) = exact_root(x, k) {
        return Some((r.clone(), r));
    }
    let scale_bits = PRECISION as usize * k as usize;
    let scaled = x * Rational::from_integer(BigInt::one() << scale_bits);
    let base = iroot(&rational::floor_int(&scaled), k);
    let den = BigInt::one() << PRECISION as usize;
    Some((
        Rational::new(base.clone(), den.clone()),
        Rational::new(base + 1, den),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn tight(e: &Enclosure) -> bool {
        e.width() < rational::pow2_neg(180)
    }

    #[test]
    fn exp_contains_known_values() {
        let e1 = Enclosure::exact(int(1)).exp();
        assert!(tight(&e1));
        assert!((e1.to_f64() - std::f64::consts::E).abs() < 1e-15);
        let em = Enclosure::exact(rat(-7, 2)).exp();
        assert!((em.to_f64() - (-3.5f64).exp()).abs() < 1e-16);
        assert!(tight(&em));
    }

    #[test]
    fn ln_inverts_exp() {
        let x = Enclosure::exact(rat(13, 5));
        let back = x.ln().unwrap().exp();
        assert!(back.contains(&rat(13, 5)));
        assert!(back.width() < rational::pow2_neg(170));
        let l = Enclosure::exact(rat(1, 1000)).ln().unwrap();
        assert!((l.to_f64() - (0.001f64).ln()).abs() < 1e-13);
        assert!(Enclosure::exact(int(0)).ln().is_none());
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&rat(9, 4), 2), Some(rat(3, 2)));
        assert_eq!(exact_root(&int(-27), 3), Some(int(-3)));
        assert_eq!(exact_root(&int(2), 2), None);
        let r = Enclosure::exact(rat(1, 2)).root(2).unwrap();
        assert!((r.to_f64() - 0.5f64.sqrt()).abs() < 1e-16);
        let sq = r.pow(2);
        assert!(sq.contains(&rat(1, 2)));
    }

    #[test]
    fn division_rejects_zero() {
        let z = Enclosure::new(int(-1), int(1));
        assert!(Enclosure::exact(int(1)).div(&z).is_none());
        let q = Enclosure::exact(int(1))
            .div(&Enclosure::exact(int(3)))
            .unwrap();
        assert!(q.contains(&rat(1, 3)));
    }
}
