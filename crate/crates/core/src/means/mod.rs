//! The mean catalogue.

mod func;
mod limit;
mod transform;
mod underlying;
mod value;

use std::fmt;

pub use func::{MonotoneFunc, Poly};
pub use limit::{
    aitken, extrapolate, lavg, lavg_exact, m_eds, m_iso, Acceleration, LimitEstimate,
    LimitSchedule, TraceRow,
};
pub use transform::{avg_f, eval_transform};
pub use underlying::{
    amean, avg1, avg_fat, eds_cells, eds_n, iso_n, iso_n_fast, iso_retained, m_acc, m_mu, EdsGrid,
};
pub use value::{default_tolerance, MeanValue};

use crate::enclosure::Enclosure;
use crate::error::Result;
use crate::exactset::RealSet;
use crate::measure::DensityMeasure;
use crate::rational::{self, Rational};

/// A catalogue entry: a generalized mean with its domain and evaluator.
#[derive(Clone, Debug, PartialEq)]
pub enum Mean {
    Avg1,
    Amean,
    MAcc,
    Iso(u64),
    Eds(u64),
    AvgFat(Rational),
    LAvg(LimitSchedule),
    MEds(LimitSchedule),
    MIso(LimitSchedule),
    MMu(DensityMeasure),
    /// `𝒦^f`.
    Transform(Box<Mean>, MonotoneFunc),
    /// `Avg_f`.
    AvgF(MonotoneFunc),
}

/// `𝒦^f` as a catalogue entry.
pub fn transform_kf(k: Mean, f: MonotoneFunc) -> Mean {
    Mean::Transform(Box::new(k), f)
}

impl Mean {
    pub fn id(&self) -> String {
        match self {
            Mean::Avg1 => "avg1".into(),
            Mean::Amean => "amean".into(),
            Mean::MAcc => "macc".into(),
            Mean::Iso(n) => format!("iso({n})"),
            Mean::Eds(n) => format!("eds({n})"),
            Mean::AvgFat(d) => format!("avgfat({})", rational::fmt(d)),
            Mean::LAvg(_) => "lavg".into(),
            Mean::MEds(_) => "meds".into(),
            Mean::MIso(_) => "miso".into(),
            Mean::MMu(_) => "mmu".into(),
            Mean::Transform(k, f) => format!("{}^{f}", k.id()),
            Mean::AvgF(f) => format!("avgf({f})"),
        }
    }

    /// Whether values are exact (rational or exact preimages).
    pub fn is_exact(&self) -> bool {
        match self {
            Mean::LAvg(_) | Mean::MEds(_) | Mean::MIso(_) => false,
            Mean::Transform(k, f) => k.is_exact() && f.is_polynomial(),
            Mean::AvgF(f) => f.is_polynomial(),
            _ => true,
        }
    }

    pub fn evaluate(&self, h: &RealSet) -> Result<MeanValue> {
        let exact = |r: Result<Rational>| r.map(MeanValue::Exact);
        let limit = |r: Result<LimitEstimate>| -> Result<MeanValue> {
            let e = r?.into_result()?;
            Ok(MeanValue::Approx(Enclosure::new(
                &e.estimate - &e.error_bound,
                &e.estimate + &e.error_bound,
            )))
        };
        match self {
            Mean::Avg1 => exact(avg1(h)),
            Mean::Amean => exact(amean(h)),
            Mean::MAcc => exact(m_acc(h)),
            Mean::Iso(n) => exact(iso_n(h, *n)),
            Mean::Eds(n) => exact(eds_n(h, *n)),
            Mean::AvgFat(d) => exact(avg_fat(h, d)),
            Mean::LAvg(s) => match lavg_exact(h) {
                Some(x) => Ok(MeanValue::Exact(x)),
                None => limit(lavg(h, s)),
            },
            Mean::MEds(s) => limit(m_eds(h, s)),
            Mean::MIso(s) => limit(m_iso(h, s)),
            Mean::MMu(m) => exact(m_mu(m, h)),
            Mean::Transform(k, f) => eval_transform(k, f, h),
            Mean::AvgF(f) => avg_f(f, h),
        }
    }

    /// Exact rational value, for means that always produce one.
    pub fn evaluate_rational(&self, h: &RealSet) -> Result<Rational> {
        match self.evaluate(h)? {
            MeanValue::Exact(x) => Ok(x),
            other => Ok(other.approx_rational()),
        }
    }

    pub fn in_domain(&self, h: &RealSet) -> bool {
        self.evaluate(h).is_ok()
    }
}

impl fmt::Display for Mean {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}
