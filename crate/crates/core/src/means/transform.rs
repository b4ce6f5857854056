//! Conjugated means `𝒦^f` and quasi-arithmetic integral means `Avg_f`.

use num_traits::Zero;

use super::func::MonotoneFunc;
use super::value::MeanValue;
use super::Mean;
use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::exactset::RealSet;
use crate::measure;
use crate::rational;

fn check_domain(f: &MonotoneFunc, h: &RealSet) -> Result<()> {
    if f.contains_set(h) {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!(
            "set is outside the domain of {f}"
        )))
    }
}

/// `𝒦^f(H) = f⁻¹(𝒦(f(H)))`.
pub fn eval_transform(k: &Mean, f: &MonotoneFunc, h: &RealSet) -> Result<MeanValue> {
    check_domain(f, h)?;
    if f.is_polynomial() {
        let image = f.image(h)?;
        return Ok(match k.evaluate(&image)? {
            MeanValue::Exact(y) => MeanValue::preimage(f.clone(), y),
            MeanValue::Preimage { func, image } => {
                MeanValue::preimage(MonotoneFunc::Compose(vec![f.clone(), func]), image)
            }
            MeanValue::Approx(e) => MeanValue::Approx(f.inverse(&e)?),
        });
    }
    let inner = match k {
        Mean::Avg1 => transcendental_avg1(f, h)?,
        Mean::Amean => {
            let pts = h.finite_points()?;
            if pts.is_empty() {
                return Err(Error::EmptySet);
            }
            let n = rational::uint(pts.len() as u64);
            let total = pts
                .into_iter()
                .map(|x| f.apply(&Enclosure::exact(x)))
                .fold(Enclosure::exact(rational::zero()), |acc, y| acc.add(&y));
            total.scale(&n.recip())
        }
        other => {
            return Err(Error::UnsupportedMean(format!(
                "{} composed with the transcendental function {f}",
                other.id()
            )))
        }
    };
    Ok(MeanValue::Approx(f.inverse(&inner)?))
}

/// `Avg¹(f(H))` when the endpoints of `f(H)` are irrational.
fn transcendental_avg1(f: &MonotoneFunc, h: &RealSet) -> Result<Enclosure> {
    if h.intervals().is_empty() {
        return Err(Error::NullSet);
    }
    let zero = Enclosure::exact(rational::zero());
    let (mut mass, mut mom) = (zero.clone(), zero);
    for iv in h.intervals() {
        let a = f.apply(&Enclosure::exact(iv.lo.clone()));
        let b = f.apply(&Enclosure::exact(iv.hi.clone()));
        let (a, b) = if f.is_increasing() { (a, b) } else { (b, a) };
        mass = mass.add(&b.sub(&a));
        mom = mom.add(&b.pow(2).sub(&a.pow(2)).scale(&rational::half()));
    }
    mom.div(&mass).ok_or(Error::NullSet)
}

/// `Avg_f(H) = f⁻¹(∫_H f dλ / λ(H))`.
pub fn avg_f(f: &MonotoneFunc, h: &RealSet) -> Result<MeanValue> {
    let l = measure::lebesgue(h);
    if l.is_zero() {
        return Err(Error::NullSet);
    }
    check_domain(f, h)?;
    if let Some(p) = f.polynomial() {
        let a = p.antiderivative();
        let total: rational::Rational = h
            .intervals()
            .iter()
            .map(|iv| a.eval(&iv.hi) - a.eval(&iv.lo))
            .sum();
        return Ok(MeanValue::preimage(f.clone(), total / l));
    }
    let mut total = Enclosure::exact(rational::zero());
    for iv in h.intervals() {
        total = total.add(&f.integral(&iv.lo, &iv.hi)?);
    }
    Ok(MeanValue::Approx(f.inverse(&total.scale(&l.recip()))?))
}
