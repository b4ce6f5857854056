use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::enclosure::{self, Enclosure};
use crate::error::{Error, Result};
use crate::exactset::{Interval, RealSet};
use crate::rational::{self, Rational};

/// A strictly monotone continuous function with an evaluable inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneFunc {
    Affine {
        alpha: Rational,
        beta: Rational,
    },
    OddPower(u32),
    /// `x ↦ x²` on `[0, ∞)`.
    Square,
    /// `x ↦ b^x`.
    ExpBase(Rational),
    /// `x ↦ log_b x` on `(0, ∞)`.
    LogBase(Rational),
    /// Applies the parts left to right.
    Compose(Vec<MonotoneFunc>),
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    fn identity() -> Poly {
        Poly(vec![rational::zero(), rational::one()])
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(rational::zero(), |acc, c| acc * x + c)
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly(vec![rational::zero()]);
        for c in self.0.iter().rev() {
            acc = acc.mul(inner);
            acc.0[0] += c;
        }
        acc
    }

    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![rational::zero()];
        for (i, c) in self.0.iter().enumerate() {
            out.push(c / rational::uint(i as u64 + 1));
        }
        Poly(out)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }
}

fn ln_of(b: &Rational) -> Enclosure {
    Enclosure::exact(b.clone()).ln().expect("positive base")
}

impl MonotoneFunc {
    pub fn identity() -> MonotoneFunc {
        MonotoneFunc::Affine {
            alpha: rational::one(),
            beta: rational::zero(),
        }
    }

    pub fn affine(alpha: Rational, beta: Rational) -> Result<MonotoneFunc> {
        MonotoneFunc::Affine { alpha, beta }.validated()
    }

    pub fn odd_power(n: u32) -> Result<MonotoneFunc> {
        MonotoneFunc::OddPower(n).validated()
    }

    pub fn exp_base(b: Rational) -> Result<MonotoneFunc> {
        MonotoneFunc::ExpBase(b).validated()
    }

    pub fn log_base(b: Rational) -> Result<MonotoneFunc> {
        MonotoneFunc::LogBase(b).validated()
    }

    pub fn compose(parts: Vec<MonotoneFunc>) -> Result<MonotoneFunc> {
        MonotoneFunc::Compose(parts).validated()
    }

    pub fn validated(self) -> Result<MonotoneFunc> {
        let ok = match &self {
            MonotoneFunc::Affine { alpha, .. } => !alpha.is_zero(),
            MonotoneFunc::OddPower(n) => n % 2 == 1,
            MonotoneFunc::Square => true,
            MonotoneFunc::ExpBase(b) | MonotoneFunc::LogBase(b) => b.is_positive() && !b.is_one(),
            MonotoneFunc::Compose(parts) => {
                for p in parts {
                    p.clone().validated()?;
                }
                !parts.is_empty()
            }
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::BadParameters(format!(
                "not a strictly monotone function: {self}"
            )))
        }
    }

    pub fn is_increasing(&self) -> bool {
        match self {
            MonotoneFunc::Affine { alpha, .. } => alpha.is_positive(),
            MonotoneFunc::OddPower(_) | MonotoneFunc::Square => true,
            MonotoneFunc::ExpBase(b) | MonotoneFunc::LogBase(b) => b > &rational::one(),
            MonotoneFunc::Compose(parts) => {
                parts.iter().filter(|p| !p.is_increasing()).count() % 2 == 0
            }
        }
    }

    /// The function as a polynomial, when it is one.
    pub fn polynomial(&self) -> Option<Poly> {
        match self {
            MonotoneFunc::Affine { alpha, beta } => Some(Poly(vec![beta.clone(), alpha.clone()])),
            MonotoneFunc::OddPower(n) => {
                let mut c = vec![rational::zero(); *n as usize + 1];
                c[*n as usize] = rational::one();
                Some(Poly(c))
            }
            MonotoneFunc::Square => Some(Poly(vec![
                rational::zero(),
                rational::zero(),
                rational::one(),
            ])),
            MonotoneFunc::ExpBase(_) | MonotoneFunc::LogBase(_) => None,
            MonotoneFunc::Compose(parts) => {
                let mut acc = Poly::identity();
                for p in parts {
                    acc = p.polynomial()?.compose(&acc);
                }
                Some(acc)
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial().is_some()
    }

    /// Domain test on the infimum of the argument. Logarithms need sets
    /// bounded away from 0 so that images stay bounded.
    fn in_own_domain(&self, inf: &Enclosure) -> bool {
        match self {
            MonotoneFunc::Square => !inf.lo.is_negative(),
            MonotoneFunc::LogBase(_) => inf.lo.is_positive(),
            _ => true,
        }
    }

    /// Whether `h` lies in the domain (every stage of a composition included).
    pub fn contains_set(&self, h: &RealSet) -> bool {
        let Ok((inf, sup)) = h.bounds() else {
            return true;
        };
        self.maps_range(Enclosure::exact(inf), Enclosure::exact(sup))
            .is_some()
    }

    /// Pushes the hull of a set through the function, checking the domain
    /// at each stage.
    fn maps_range(&self, lo: Enclosure, hi: Enclosure) -> Option<(Enclosure, Enclosure)> {
        match self {
            MonotoneFunc::Compose(parts) => parts
                .iter()
                .try_fold((lo, hi), |(lo, hi), p| p.maps_range(lo, hi)),
            f => {
                if !f.in_own_domain(&lo) {
                    return None;
                }
                let (a, b) = (f.apply(&lo), f.apply(&hi));
                Some(if f.is_increasing() { (a, b) } else { (b, a) })
            }
        }
    }

    pub fn apply_exact(&self, x: &Rational) -> Option<Rational> {
        self.polynomial().map(|p| p.eval(x))
    }

    /// Certified forward image of an enclosure.
    pub fn apply(&self, x: &Enclosure) -> Enclosure {
        match self {
            MonotoneFunc::Affine { alpha, beta } => {
                x.scale(alpha).add(&Enclosure::exact(beta.clone()))
            }
            MonotoneFunc::OddPower(n) => x.pow(*n),
            MonotoneFunc::Square => x.pow(2),
            MonotoneFunc::ExpBase(b) => x.mul(&ln_of(b)).exp(),
            MonotoneFunc::LogBase(b) => {
                let lx = x.ln().expect("log of a positive value");
                lx.div(&ln_of(b)).expect("base differs from 1")
            }
            MonotoneFunc::Compose(parts) => parts.iter().fold(x.clone(), |acc, p| p.apply(&acc)),
        }
    }

    /// Exact inverse when it is rational.
    pub fn inverse_exact(&self, y: &Rational) -> Option<Rational> {
        match self {
            MonotoneFunc::Affine { alpha, beta } => Some((y - beta) / alpha),
            MonotoneFunc::OddPower(n) => enclosure::exact_root(y, *n),
            MonotoneFunc::Square => {
                if y.is_negative() {
                    None
                } else {
                    enclosure::exact_root(y, 2)
                }
            }
            MonotoneFunc::ExpBase(_) | MonotoneFunc::LogBase(_) => None,
            MonotoneFunc::Compose(parts) => {
                let mut cur = y.clone();
                for p in parts.iter().rev() {
                    cur = p.inverse_exact(&cur)?;
                }
                Some(cur)
            }
        }
    }

    /// Certified inverse image of an enclosure.
    pub fn inverse(&self, y: &Enclosure) -> Result<Enclosure> {
        let out = match self {
            MonotoneFunc::Affine { alpha, beta } => {
                let shifted = y.sub(&Enclosure::exact(beta.clone()));
                shifted.scale(&alpha.recip())
            }
            MonotoneFunc::OddPower(n) => y.root(*n).expect("odd root"),
            MonotoneFunc::Square => {
                if y.hi.is_negative() {
                    return Err(Error::DomainViolation(
                        "square root of a negative value".into(),
                    ));
                }
                let clipped = Enclosure::new(rational::max(&y.lo, &rational::zero()), y.hi.clone());
                clipped.root(2).expect("nonnegative")
            }
            MonotoneFunc::ExpBase(b) => {
                let ly = y.ln().ok_or_else(|| {
                    Error::DomainViolation("logarithm of a nonpositive value".into())
                })?;
                ly.div(&ln_of(b)).expect("base differs from 1")
            }
            MonotoneFunc::LogBase(b) => y.mul(&ln_of(b)).exp(),
            MonotoneFunc::Compose(parts) => {
                let mut cur = y.clone();
                for p in parts.iter().rev() {
                    cur = p.inverse(&cur)?;
                }
                cur
            }
        };
        Ok(out)
    }

    /// Exact image of a set under a polynomial function.
    pub fn image(&self, h: &RealSet) -> Result<RealSet> {
        let poly = self.polynomial().ok_or_else(|| {
            Error::UnrepresentableResult(format!("image under {self} has irrational endpoints"))
        })?;
        if !self.contains_set(h) {
            return Err(Error::DomainViolation(format!(
                "set is outside the domain of {self}"
            )));
        }
        if poly.degree() == 1 {
            return h.affine(&poly.0[1], &poly.0[0]);
        }
        if !h.clusters().is_empty() {
            return Err(Error::UnrepresentableResult(
                "nonlinear image of a convergent sequence".into(),
            ));
        }
        let inc = self.is_increasing();
        let intervals = h
            .intervals()
            .iter()
            .map(|iv| {
                let (a, b) = (poly.eval(&iv.lo), poly.eval(&iv.hi));
                if inc {
                    Interval {
                        lo: a,
                        hi: b,
                        lo_closed: iv.lo_closed,
                        hi_closed: iv.hi_closed,
                    }
                } else {
                    Interval {
                        lo: b,
                        hi: a,
                        lo_closed: iv.hi_closed,
                        hi_closed: iv.lo_closed,
                    }
                }
            })
            .collect();
        let points = h.isolated_points().iter().map(|p| poly.eval(p)).collect();
        Ok(RealSet::build(intervals, points, Vec::new()))
    }

    /// Certified `∫_lo^hi f dλ` for the closed-form kinds.
    pub fn integral(&self, lo: &Rational, hi: &Rational) -> Result<Enclosure> {
        if let Some(p) = self.polynomial() {
            let a = p.antiderivative();
            return Ok(Enclosure::exact(a.eval(hi) - a.eval(lo)));
        }
        match self {
            MonotoneFunc::ExpBase(b) => {
                let f = |x: &Rational| self.apply(&Enclosure::exact(x.clone()));
                Ok(f(hi)
                    .sub(&f(lo))
                    .div(&ln_of(b))
                    .expect("base differs from 1"))
            }
            MonotoneFunc::LogBase(b) => {
                // ∫ ln x = x ln x - x, with 0 ln 0 = 0
                let prim = |x: &Rational| {
                    if x.is_zero() {
                        return Enclosure::exact(rational::zero());
                    }
                    let ex = Enclosure::exact(x.clone());
                    ex.mul(&ex.ln().expect("positive")).sub(&ex)
                };
                Ok(prim(hi)
                    .sub(&prim(lo))
                    .div(&ln_of(b))
                    .expect("base differs from 1"))
            }
            _ => Err(Error::UnsupportedMean(format!(
                "no closed-form integral for {self}"
            ))),
        }
    }
}

impl fmt::Display for MonotoneFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotoneFunc::Affine { alpha, beta } => write!(
                f,
                "affine({},{})",
                rational::fmt(alpha),
                rational::fmt(beta)
            ),
            MonotoneFunc::OddPower(n) => write!(f, "odd_power({n})"),
            MonotoneFunc::Square => write!(f, "square"),
            MonotoneFunc::ExpBase(b) => write!(f, "exp({})", rational::fmt(b)),
            MonotoneFunc::LogBase(b) => write!(f, "log({})", rational::fmt(b)),
            MonotoneFunc::Compose(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "compose({})", inner.join(";"))
            }
        }
    }
}

fn split_args(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut last = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(s[last..i].trim());
                last = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[last..].trim());
    out
}

impl FromStr for MonotoneFunc {
    type Err = Error;

    fn from_str(s: &str) -> Result<MonotoneFunc> {
        let s = s.trim();
        let bad = || Error::BadParameters(format!("unknown function `{s}`"));
        let num = |t: &str| rational::parse(t.trim()).ok_or_else(bad);
        match s {
            "square" | "square_on_nonneg" => return Ok(MonotoneFunc::Square),
            "cube" => return Ok(MonotoneFunc::OddPower(3)),
            "identity" => return Ok(MonotoneFunc::identity()),
            "exp" => return MonotoneFunc::exp_base(rational::int(2)),
            _ => {}
        }
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let (name, body) = (&s[..open], &s[open + 1..s.len() - 1]);
        match name {
            "affine" => {
                let a = split_args(body, ',');
                if a.len() != 2 {
                    return Err(bad());
                }
                MonotoneFunc::affine(num(a[0])?, num(a[1])?)
            }
            "odd_power" => MonotoneFunc::odd_power(body.trim().parse().map_err(|_| bad())?),
            "exp" | "exp_base" => MonotoneFunc::exp_base(num(body)?),
            "log" | "log_base" => MonotoneFunc::log_base(num(body)?),
            "compose" => {
                let parts = split_args(body, ';')
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<Vec<_>>>()?;
                MonotoneFunc::compose(parts)
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn parse_round_trip() {
        for text in [
            "square",
            "affine(2,-1/3)",
            "odd_power(5)",
            "exp(3)",
            "log(1/2)",
            "compose(affine(1,1);square)",
        ] {
            let f: MonotoneFunc = text.parse().unwrap();
            assert_eq!(f.to_string().parse::<MonotoneFunc>().unwrap(), f);
        }
        assert!("odd_power(2)".parse::<MonotoneFunc>().is_err());
        assert!("affine(0,1)".parse::<MonotoneFunc>().is_err());
    }

    #[test]
    fn composed_polynomial() {
        let f: MonotoneFunc = "compose(affine(1,1);square)".parse().unwrap();
        assert_eq!(f.apply_exact(&int(2)), Some(int(9)));
        assert_eq!(f.inverse_exact(&int(9)), Some(int(2)));
        assert_eq!(f.polynomial().unwrap().degree(), 2);
    }

    #[test]
    fn square_image_of_intervals() {
        let h = RealSet::closed(int(0), int(1)).union(&RealSet::closed(int(2), int(3)));
        let img = MonotoneFunc::Square.image(&h).unwrap();
        assert_eq!(
            img,
            RealSet::closed(int(0), int(1)).union(&RealSet::closed(int(4), int(9)))
        );
        assert!(MonotoneFunc::Square
            .image(&RealSet::closed(int(-1), int(1)))
            .is_err());
    }

    #[test]
    fn decreasing_affine_flips() {
        let f = MonotoneFunc::affine(int(-1), int(0)).unwrap();
        assert!(!f.is_increasing());
        let h = RealSet::interval(Interval::new(int(0), int(1), true, false).unwrap());
        let img = f.image(&h).unwrap();
        assert_eq!(
            img,
            RealSet::interval(Interval::new(int(-1), int(0), false, true).unwrap())
        );
    }

    #[test]
    fn transcendental_integrals() {
        let e = MonotoneFunc::exp_base(int(2)).unwrap();
        // ∫_0^1 2^x dx = 1 / ln 2
        let v = e.integral(&int(0), &int(1)).unwrap();
        assert!((v.to_f64() - 1.0 / std::f64::consts::LN_2).abs() < 1e-15);
        let l = MonotoneFunc::log_base(int(2)).unwrap();
        let w = l.integral(&int(1), &int(2)).unwrap();
        let expected = (2.0 * 2f64.ln() - 1.0) / 2f64.ln();
        assert!((w.to_f64() - expected).abs() < 1e-14);
        let back = e.inverse(&e.apply(&Enclosure::exact(rat(3, 7)))).unwrap();
        assert!(back.contains(&rat(3, 7)));
    }
}
