//! Constructions relative to a mean: mean-liminf/limsup, accumulation points
//! by a mean, derivative quotients, extremal bounds and limits of means.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::enclosure::Enclosure;
use crate::error::{Error, Result};
use crate::exactset::{Interval, RealSet};
use crate::means::{
    self, default_tolerance, extrapolate, Acceleration, LimitEstimate, LimitSchedule, Mean,
    MeanValue,
};
use crate::measure;
use crate::par::Execution;
use crate::rational::{self, Rational};

/// Largest family index tried by [`uniformity_witness`].
pub const MEMBER_CAP: u64 = 1 << 14;

fn base_value(k: &Mean, h: &RealSet) -> Result<MeanValue> {
    k.evaluate(h)
        .map_err(|e| Error::DomainViolation(format!("{} is undefined on the set: {e}", k.id())))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Lower,
    Upper,
}

/// `liminf_𝒦 H = sup{x : 𝒦(H^{x+}) = 𝒦(H)}`.
pub fn liminf_by_mean(k: &Mean, h: &RealSet) -> Result<MeanValue> {
    if *k == Mean::Avg1 {
        base_value(k, h)?;
        return Ok(MeanValue::Exact(measure::essential_bounds(h)?.0));
    }
    bisect(k, h, End::Lower)
}

/// `limsup_𝒦 H = inf{x : 𝒦(H^{x−}) = 𝒦(H)}`.
pub fn limsup_by_mean(k: &Mean, h: &RealSet) -> Result<MeanValue> {
    if *k == Mean::Avg1 {
        base_value(k, h)?;
        return Ok(MeanValue::Exact(measure::essential_bounds(h)?.1));
    }
    bisect(k, h, End::Upper)
}

/// Mean-liminf by bisection on the slice predicate, for any catalogue entry.
pub fn liminf_bisect(k: &Mean, h: &RealSet) -> Result<MeanValue> {
    bisect(k, h, End::Lower)
}

/// Mean-limsup by bisection on the slice predicate.
pub fn limsup_bisect(k: &Mean, h: &RealSet) -> Result<MeanValue> {
    bisect(k, h, End::Upper)
}

/// Brackets the boundary of `{x : 𝒦(slice_x H) = 𝒦(H)}` inside `[inf H, sup H]`.
/// Exact means are bisected to width `2^-40`; others get 40 steps.
fn bisect(k: &Mean, h: &RealSet, end: End) -> Result<MeanValue> {
    let base = base_value(k, h)?;
    let tol = default_tolerance();
    let (inf, sup) = h.bounds()?;
    let keeps = |x: &Rational| {
        let part = match end {
            End::Lower => h.slice_ge(x),
            End::Upper => h.slice_le(x),
        };
        k.evaluate(&part)
            .map(|v| v.equals(&base, &tol))
            .unwrap_or(false)
    };
    let (mut good, mut bad) = match end {
        End::Lower => (inf, sup),
        End::Upper => (sup, inf),
    };
    if keeps(&bad) {
        return Ok(MeanValue::Exact(bad));
    }
    let exact = k.is_exact();
    for step in 0.. {
        let width = rational::abs(&(&bad - &good));
        if (exact && width <= tol) || (!exact && step >= 40) || step >= 256 {
            break;
        }
        let mid = (&good + &bad) * rational::half();
        if keeps(&mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    let (lo, hi) = if good <= bad {
        (good, bad)
    } else {
        (bad, good)
    };
    Ok(MeanValue::Approx(Enclosure::new(lo, hi)))
}

/// `𝒦(H) = 𝒦(H ∩ [liminf_𝒦 H, limsup_𝒦 H])`.
pub fn core_restriction_check(k: &Mean, h: &RealSet) -> Result<bool> {
    let base = base_value(k, h)?;
    let lo = liminf_by_mean(k, h)?.enclosure().lo;
    let hi = limsup_by_mean(k, h)?.enclosure().hi;
    let core = match Interval::new(lo.clone(), hi.clone(), true, true) {
        Ok(iv) => h.intersect_interval(&iv),
        Err(_) => return Ok(false),
    };
    Ok(k.evaluate(&core)
        .is_ok_and(|v| v.equals(&base, &default_tolerance())))
}

/// `liminf_𝒦 H ≤ 𝒦(H) ≤ limsup_𝒦 H`, strictly when the bounds differ.
pub fn strict_strong_internal(k: &Mean, h: &RealSet) -> Result<bool> {
    let v = base_value(k, h)?;
    let lo = liminf_by_mean(k, h)?;
    let hi = limsup_by_mean(k, h)?;
    if lo.compare(&hi) == Some(Ordering::Equal) {
        return Ok(v.compare(&lo) == Some(Ordering::Equal));
    }
    Ok(lo.compare(&v) == Some(Ordering::Less) && v.compare(&hi) == Some(Ordering::Less))
}

/// `H^{'𝒦}`, the accumulation points of `H` by `𝒦`, for `Avg¹`, `𝒜` and `M^acc`.
pub fn acc_points_by_mean(k: &Mean, h: &RealSet) -> Result<RealSet> {
    match k {
        Mean::Avg1 => {
            if measure::lebesgue(h).is_zero() {
                return Err(Error::NullSet);
            }
            Ok(measure::support(h))
        }
        Mean::Amean => removable_complement(h),
        Mean::MAcc => removable_complement(&h.derived_iter(h.level()?)?),
        other => Err(Error::UnsupportedMean(format!(
            "accumulation points by {}",
            other.id()
        ))),
    }
}

/// `T − {𝒜(T)}` for a finite `T` with at least two points; a singleton is
/// kept whole because removing its neighbourhood leaves the domain.
fn removable_complement(top: &RealSet) -> Result<RealSet> {
    let pts = top.finite_points()?;
    match pts.len() {
        0 => Err(Error::EmptySet),
        1 => Ok(top.clone()),
        _ => top.diff(&RealSet::point(means::amean(top)?)),
    }
}

/// `H^{'𝒦} ⊆ H`.
pub fn is_k_closed(k: &Mean, h: &RealSet) -> Result<bool> {
    acc_points_by_mean(k, h)?.is_subset(h)
}

/// `𝒦(H^{'𝒦}) = 𝒦(H)`.
pub fn self_accumulated_at(k: &Mean, h: &RealSet) -> Result<bool> {
    let acc = acc_points_by_mean(k, h)?;
    Ok(k.evaluate(&acc)
        .is_ok_and(|v| v.equals(&base_value(k, h).expect("checked"), &default_tolerance())))
}

/// Difference quotients `(𝒦(S(x,δ) ∩ H) − x)/δ` along `δ_j = 2^-j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeEstimate {
    pub lower: Rational,
    pub upper: Rational,
    pub exact_hint: Option<Rational>,
    pub trace: Vec<(Rational, Rational)>,
}

/// Lower and upper symmetry derivative of `𝒦` at `x`. The bounds are the
/// min and max of the last `agree` quotients of the schedule.
pub fn d_mean(
    k: &Mean,
    h: &RealSet,
    x: &Rational,
    schedule: &LimitSchedule,
) -> Result<DerivativeEstimate> {
    schedule.validate()?;
    let mut trace = Vec::new();
    for j in schedule.first..=schedule.last {
        let delta = rational::pow2_neg(j);
        let near = h.intersect_interval(&Interval::open(x - &delta, x + &delta));
        let v = k
            .evaluate(&near)
            .map_err(|_| Error::DomainExit(Box::new(delta.clone())))?;
        let q = (v.approx_rational() - x) / &delta;
        trace.push((delta, q));
    }
    let tail = &trace[trace.len().saturating_sub(schedule.agree)..];
    let lower = tail
        .iter()
        .map(|t| &t.1)
        .min()
        .expect("nonempty schedule")
        .clone();
    let upper = tail
        .iter()
        .map(|t| &t.1)
        .max()
        .expect("nonempty schedule")
        .clone();
    let exact_hint = if *k == Mean::Avg1 {
        avg1_symmetry(h, x)
    } else {
        None
    };
    Ok(DerivativeEstimate {
        lower,
        upper,
        exact_hint,
        trace,
    })
}

/// Limit of the `Avg¹` quotient at `x` on an interval union: `1/2` at a
/// left endpoint, `−1/2` at a right endpoint, `0` inside or between two
/// intervals sharing the endpoint.
fn avg1_symmetry(h: &RealSet, x: &Rational) -> Option<Rational> {
    let ivs = h.intervals();
    if ivs.iter().any(|iv| &iv.lo < x && x < &iv.hi) {
        return Some(rational::zero());
    }
    let starts = ivs.iter().any(|iv| &iv.lo == x);
    let ends = ivs.iter().any(|iv| &iv.hi == x);
    match (starts, ends) {
        (true, true) => Some(rational::zero()),
        (true, false) => Some(rational::half()),
        (false, true) => Some(-rational::half()),
        (false, false) => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeSide {
    SupAppend,
    InfAppend,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeEstimate {
    pub limit: LimitEstimate,
    pub exact_hint: Option<Rational>,
}

/// `lim (𝒦(H ∪ [m, m+ε]) − 𝒦(H))/ε` with `m = sup H` (or the mirrored
/// construction at `inf H`), along `ε = 1/n_j`.
pub fn d_probe(
    k: &Mean,
    h: &RealSet,
    side: ProbeSide,
    schedule: &LimitSchedule,
) -> Result<ProbeEstimate> {
    if !h.is_closed() {
        return Err(Error::NotCompact);
    }
    let (inf, sup) = h.bounds()?;
    let base = base_value(k, h)?.approx_rational();
    let limit = extrapolate(schedule, |n| {
        let eps = rational::one() / rational::uint(n);
        let piece = match side {
            ProbeSide::SupAppend => Interval::closed(sup.clone(), &sup + &eps),
            ProbeSide::InfAppend => Interval::closed(&inf - &eps, inf.clone()),
        };
        let v = k.evaluate(&h.union(&RealSet::interval(piece)))?;
        Ok((v.approx_rational() - &base) / eps)
    })?;
    let exact_hint = if *k == Mean::Avg1 {
        Some(avg1_probe(h, side)?)
    } else {
        None
    };
    Ok(ProbeEstimate { limit, exact_hint })
}

/// `(m − Avg¹(H))/λ(H)` with `m` the appended end.
pub fn avg1_probe(h: &RealSet, side: ProbeSide) -> Result<Rational> {
    let l = measure::lebesgue(h);
    let a = means::avg1(h)?;
    let (inf, sup) = h.bounds()?;
    let m = match side {
        ProbeSide::SupAppend => sup,
        ProbeSide::InfAppend => inf,
    };
    Ok((m - a) / l)
}

/// Extreme values of `Avg¹` over `H ⊆ [a,b]` with `λ(H) = h`.
pub fn extremal_avg(a: &Rational, b: &Rational, h: &Rational) -> Result<(Rational, Rational)> {
    if a >= b || !h.is_positive() || *h >= b - a {
        return Err(Error::BadParameters("need a < b and 0 < h < b − a".into()));
    }
    let half = h * rational::half();
    Ok((a + &half, b - &half))
}

/// `sup H ≥ Avg¹(H) + λ(H)/2` and `inf H ≤ Avg¹(H) − λ(H)/2`.
pub fn sup_bound_check(h: &RealSet) -> Result<bool> {
    let a = means::avg1(h)?;
    let half = measure::lebesgue(h) * rational::half();
    let (inf, sup) = h.bounds()?;
    Ok(sup >= &a + &half && inf <= a - half)
}

/// A sequence of underlying means indexed by `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanSequence {
    /// `Avg¹(S(H, 1/n))`.
    AvgFat,
    /// `eds_n`.
    Eds,
    /// `𝒜(H − S(H′, 1/n))`.
    Iso,
}

impl MeanSequence {
    pub fn term(self, n: u64) -> Mean {
        match self {
            MeanSequence::AvgFat => Mean::AvgFat(rational::one() / rational::uint(n)),
            MeanSequence::Eds => Mean::Eds(n),
            MeanSequence::Iso => Mean::Iso(n),
        }
    }

    pub fn value(self, n: u64, h: &RealSet) -> Result<Rational> {
        match self {
            MeanSequence::AvgFat => means::avg_fat(h, &(rational::one() / rational::uint(n))),
            MeanSequence::Eds => means::eds_n(h, n),
            MeanSequence::Iso => means::iso_n_fast(h, n),
        }
    }

    /// The limit mean of the sequence.
    pub fn limit_mean(self, schedule: LimitSchedule) -> Mean {
        match self {
            MeanSequence::AvgFat => Mean::LAvg(schedule),
            MeanSequence::Eds => Mean::MEds(schedule),
            MeanSequence::Iso => Mean::MIso(schedule),
        }
    }
}

/// Accelerated limit of `𝒦_n(H)`.
pub fn pointwise_limit(
    seq: MeanSequence,
    h: &RealSet,
    schedule: &LimitSchedule,
) -> Result<LimitEstimate> {
    extrapolate(schedule, |n| seq.value(n, h))?.into_result()
}

/// A member `H*` of a family with `|𝒦_n(H*) − 𝒦(H*)| ≥ ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformityWitness {
    pub n: u64,
    pub member: u64,
    pub set: RealSet,
    pub term_value: Rational,
    pub limit_value: MeanValue,
    /// Certified lower bound on the gap.
    pub gap: Rational,
}

/// `[1,2] ∪ {k/m : 0 ≤ k ≤ m}`, converging to `[0,2]` in the Hausdorff metric.
pub fn grid_family(m: u64) -> RealSet {
    let pts = (0..=m).map(|k| rational::uint(k) / rational::uint(m.max(1)));
    RealSet::closed(rational::int(1), rational::int(2)).union(&RealSet::points(pts))
}

fn gap_lower_bound(t: &Rational, v: &MeanValue) -> Rational {
    match v {
        MeanValue::Exact(x) => rational::abs(&(t - x)),
        _ => {
            let e = v.enclosure();
            rational::max(
                &rational::max(&(&e.lo - t), &(t - &e.hi)),
                &rational::zero(),
            )
        }
    }
}

fn member_ladder() -> impl Iterator<Item = u64> {
    (0..).map(|i| 1u64 << i).take_while(|m| *m <= MEMBER_CAP)
}

fn search_members(
    seq: MeanSequence,
    family: &(dyn Fn(u64) -> RealSet + Sync),
    eps: &Rational,
    n: u64,
    limit_of: &dyn Fn(u64, &RealSet) -> Result<MeanValue>,
) -> Result<Option<UniformityWitness>> {
    for m in member_ladder() {
        let set = family(m);
        let term_value = seq.value(n, &set)?;
        let limit_value = limit_of(m, &set)?;
        let gap = gap_lower_bound(&term_value, &limit_value);
        if gap >= *eps {
            return Ok(Some(UniformityWitness {
                n,
                member: m,
                set,
                term_value,
                limit_value,
                gap,
            }));
        }
    }
    Ok(None)
}

/// Searches family members `m = 1, 2, 4, …` for evidence against uniform
/// convergence of `𝒦_n` to `k_limit` at index `n`.
pub fn uniformity_witness(
    seq: MeanSequence,
    k_limit: &Mean,
    family: &(dyn Fn(u64) -> RealSet + Sync),
    eps: &Rational,
    n: u64,
) -> Result<Option<UniformityWitness>> {
    search_members(seq, family, eps, n, &|_, set| k_limit.evaluate(set))
}

/// [`uniformity_witness`] for every `n` in `1..=n_max`, with limit values
/// shared across indices.
pub fn uniformity_scan(
    seq: MeanSequence,
    k_limit: &Mean,
    family: &(dyn Fn(u64) -> RealSet + Sync),
    eps: &Rational,
    n_max: u64,
    exec: Execution,
) -> Result<Vec<Option<UniformityWitness>>> {
    let members: Vec<u64> = member_ladder().collect();
    let limits: Vec<Result<MeanValue>> = exec.map(&members, |m| k_limit.evaluate(&family(*m)));
    let limit_of = |m: u64, _: &RealSet| -> Result<MeanValue> {
        let i = m.trailing_zeros() as usize;
        limits[i].clone()
    };
    exec.map_range(1..n_max + 1, |n| {
        search_members(seq, family, eps, n, &limit_of)
    })
    .into_iter()
    .collect()
}

/// One stage of a dilution sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct DilutionRow {
    pub n: u64,
    /// `|L_n| / |H_n|`.
    pub ratio: Rational,
    /// `|𝒜(H_n − L_n) − a|`.
    pub gap: Rational,
}

/// Tracks `𝒜(H_n − L_n)` against the limit `a` of `𝒜(H_n)` along the
/// schedule indices.
pub fn dilution_check(
    pair: impl Fn(u64) -> Result<(RealSet, RealSet)>,
    a: &Rational,
    schedule: &LimitSchedule,
) -> Result<Vec<DilutionRow>> {
    schedule.validate()?;
    let mut rows = Vec::new();
    for n in schedule.indices() {
        let (h, l) = pair(n)?;
        if !l.is_subset(&h)? {
            return Err(Error::BadParameters(
                "removed set must lie inside the set".into(),
            ));
        }
        let hn = h.finite_points()?.len() as u64;
        let ln = l.finite_points()?.len() as u64;
        let rest = h.diff(&l)?;
        let gap = rational::abs(&(means::amean(&rest)? - a));
        rows.push(DilutionRow {
            n,
            ratio: rational::uint(ln) / rational::uint(hn),
            gap,
        });
    }
    Ok(rows)
}

/// Schedule suited to derivative quotients, which need not be accelerable.
pub fn derivative_schedule() -> LimitSchedule {
    LimitSchedule {
        acceleration: Acceleration::None,
        ..LimitSchedule::default()
    }
}
