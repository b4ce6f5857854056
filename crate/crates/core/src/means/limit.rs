use serde::Serialize;

use super::underlying;
use crate::error::{Error, Result};
use crate::exactset::RealSet;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Acceleration {
    None,
    Aitken,
}

/// Evaluation schedule for limit means: `n_j = 2^j` for `j` in
/// `first..=last`, optionally accelerated, converged once `agree`
/// consecutive (accelerated) values lie within `tolerance`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitSchedule {
    pub first: u32,
    pub last: u32,
    pub acceleration: Acceleration,
    pub tolerance: Rational,
    pub agree: usize,
}

impl Default for LimitSchedule {
    fn default() -> Self {
        LimitSchedule {
            first: 4,
            last: 20,
            acceleration: Acceleration::Aitken,
            tolerance: rational::rat(1, 1_000_000_000),
            agree: 3,
        }
    }
}

impl LimitSchedule {
    pub fn with_tolerance(mut self, tol: Rational) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_last(mut self, last: u32) -> Self {
        self.last = last;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.first > self.last || self.last > 62 {
            return Err(Error::BadParameters(
                "schedule exponents must satisfy first <= last <= 62".into(),
            ));
        }
        if self.tolerance <= rational::zero() {
            return Err(Error::BadParameters(
                "schedule tolerance must be positive".into(),
            ));
        }
        if self.agree < 2 {
            return Err(Error::BadParameters(
                "at least two values must agree".into(),
            ));
        }
        Ok(())
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> {
        (self.first..=self.last).map(|j| 1u64 << j)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub n: u64,
    pub value: f64,
    pub accelerated: Option<f64>,
}

/// Outcome of running a schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate {
    pub estimate: Rational,
    pub error_bound: Rational,
    pub converged: bool,
    pub trace: Vec<TraceRow>,
}

impl LimitEstimate {
    pub fn into_result(self) -> Result<LimitEstimate> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                estimate: rational::to_f64(&self.estimate),
                spread: rational::to_f64(&self.error_bound),
            })
        }
    }
}

/// Aitken's Δ² transform of three consecutive terms.
pub fn aitken(x0: &Rational, x1: &Rational, x2: &Rational) -> Rational {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let denom = &d2 - &d1;
    if denom == rational::zero() {
        return x2.clone();
    }
    x2 - &d2 * &d2 / denom
}

fn last_aitken(xs: &[Rational]) -> Rational {
    let k = xs.len();
    aitken(&xs[k - 3], &xs[k - 2], &xs[k - 1])
}

/// Runs `term(n_j)` along the schedule, applying Δ² to the raw terms and
/// again to the once-accelerated terms. Stops at the first stage where
/// the last `agree` (accelerated) values are within tolerance.
pub fn extrapolate(
    schedule: &LimitSchedule,
    mut term: impl FnMut(u64) -> Result<Rational>,
) -> Result<LimitEstimate> {
    schedule.validate()?;
    let mut raw: Vec<Rational> = Vec::new();
    let mut once: Vec<Rational> = Vec::new();
    let mut acc: Vec<Rational> = Vec::new();
    let mut trace = Vec::new();
    for n in schedule.indices() {
        let v = term(n)?;
        raw.push(v.clone());
        let a = match schedule.acceleration {
            Acceleration::None => Some(v.clone()),
            Acceleration::Aitken if raw.len() >= 3 => {
                once.push(last_aitken(&raw));
                Some(if once.len() >= 3 {
                    last_aitken(&once)
                } else {
                    once.last().expect("pushed").clone()
                })
            }
            Acceleration::Aitken => None,
        };
        trace.push(TraceRow {
            n,
            value: rational::to_f64(&v),
            accelerated: a.as_ref().map(rational::to_f64),
        });
        if let Some(a) = a {
            acc.push(a);
        }
        if acc.len() >= schedule.agree {
            let tail = &acc[acc.len() - schedule.agree..];
            let spread = spread(tail);
            if spread <= schedule.tolerance {
                return Ok(LimitEstimate {
                    estimate: acc.last().expect("nonempty").clone(),
                    error_bound: spread,
                    converged: true,
                    trace,
                });
            }
        }
    }
    let series = if acc.is_empty() { &raw } else { &acc };
    let k = series.len().min(schedule.agree);
    Ok(LimitEstimate {
        estimate: series.last().cloned().unwrap_or_else(rational::zero),
        error_bound: spread(&series[series.len() - k..]),
        converged: false,
        trace,
    })
}

fn spread(xs: &[Rational]) -> Rational {
    let hi = xs.iter().max().cloned().unwrap_or_else(rational::zero);
    let lo = xs.iter().min().cloned().unwrap_or_else(rational::zero);
    hi - lo
}

/// `LAvg(H) = lim Avg¹(S(H, 1/n))`.
pub fn lavg(h: &RealSet, schedule: &LimitSchedule) -> Result<LimitEstimate> {
    extrapolate(schedule, |n| {
        underlying::avg_fat(h, &(rational::one() / rational::uint(n)))
    })
}

/// Exact `LAvg` for sets without clusters. Once `2δ` is below every gap the
/// fattened components stay disjoint and `Avg¹(S(H,δ))` is a ratio of
/// polynomials in `δ`, whose value at 0 is `Avg¹(H)` (or `𝒜(H)` for null `H`).
pub fn lavg_exact(h: &RealSet) -> Option<Rational> {
    if !h.clusters().is_empty() || h.is_empty() {
        return None;
    }
    if h.intervals().is_empty() {
        underlying::amean(h).ok()
    } else {
        underlying::avg1(h).ok()
    }
}

/// `M^eds(H) = lim eds_n(H)`.
pub fn m_eds(h: &RealSet, schedule: &LimitSchedule) -> Result<LimitEstimate> {
    extrapolate(schedule, |n| underlying::eds_n(h, n))
}

/// `M^iso(H) = lim 𝒜(H − S(H′, 1/n))`.
pub fn m_iso(h: &RealSet, schedule: &LimitSchedule) -> Result<LimitEstimate> {
    extrapolate(schedule, |n| underlying::iso_n_fast(h, n))
}
