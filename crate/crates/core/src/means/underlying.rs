//! Means with exact rational values.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactset::{Cluster, Piece, RealSet, Rule, Side};
use crate::measure::{self, DensityMeasure};
use crate::rational::{self, Rational};

/// `Avg¹(H) = ∫_H x dλ / λ(H)`.
pub fn avg1(h: &RealSet) -> Result<Rational> {
    let l = measure::lebesgue(h);
    if l.is_zero() {
        return Err(Error::NullSet);
    }
    Ok(measure::moment(h) / l)
}

/// Arithmetic mean of a finite nonempty set.
pub fn amean(h: &RealSet) -> Result<Rational> {
    let pts = h.finite_points()?;
    if pts.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = rational::uint(pts.len() as u64);
    Ok(rational::sum(&pts) / n)
}

/// `M^acc(H) = 𝒜(H^(lev H))`.
pub fn m_acc(h: &RealSet) -> Result<Rational> {
    let level = h.level()?;
    amean(&h.derived_iter(level)?)
}

/// The finite set `H − S(H′, 1/n)`.
pub fn iso_retained(h: &RealSet, n: u64) -> Result<RealSet> {
    if n == 0 {
        return Err(Error::BadParameters("n must be positive".into()));
    }
    if !h.intervals().is_empty() {
        return Err(Error::DomainViolation(
            "cl(H − H′) = H fails: the set contains an interval".into(),
        ));
    }
    if h.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = h.derived();
    if d.is_empty() {
        return Ok(h.clone());
    }
    let ball = measure::fatten(&d, &(rational::one() / rational::uint(n)))?;
    h.diff(&ball)
}

/// `𝒜(H − S(H′, 1/n))`.
pub fn iso_n(h: &RealSet, n: u64) -> Result<Rational> {
    let kept = iso_retained(h, n)?;
    if kept.is_empty() {
        return Err(Error::EmptySlice);
    }
    amean(&kept)
}

/// Same value as [`iso_n`], summed in floating point when the retained
/// set is large. Used along limit schedules.
pub fn iso_n_fast(h: &RealSet, n: u64) -> Result<Rational> {
    const EXACT_LIMIT: u64 = 1 << 12;
    let kept = iso_retained(h, n)?;
    if kept.is_empty() {
        return Err(Error::EmptySlice);
    }
    if !kept.is_finite() {
        return Err(Error::NotFinite);
    }
    let count: u64 =
        kept.isolated_points().len() as u64 + kept.clusters().iter().map(finite_count).sum::<u64>();
    if count <= EXACT_LIMIT {
        return amean(&kept);
    }
    let mut sum = KahanSum::default();
    for p in kept.isolated_points() {
        sum.add(rational::to_f64(p));
    }
    for c in kept.clusters() {
        add_cluster_terms(c, &mut sum);
    }
    rational::from_f64(sum.total() / count as f64).ok_or(Error::NotFinite)
}

fn finite_count(c: &Cluster) -> u64 {
    let per = c.child.as_ref().map_or(1, |t| finite_count(t));
    (c.end.expect("finite cluster") - c.start + 1) * per
}

fn add_cluster_terms(c: &Cluster, sum: &mut KahanSum) {
    let end = c.end.expect("finite cluster");
    for k in c.start..=end {
        if c.child.is_none() {
            if let Rule::Harmonic { c: coef } = &c.rule {
                let off = rational::to_f64(coef) / k as f64;
                let l = rational::to_f64(&c.limit);
                sum.add(match c.side {
                    Side::Above => l + off,
                    Side::Below => l - off,
                });
                continue;
            }
        }
        match c.instance(k) {
            Piece::Point(x) => sum.add(rational::to_f64(&x)),
            Piece::Cluster(sub) => add_cluster_terms(&sub, sum),
        }
    }
}

#[derive(Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum
    }
}

/// Sorted disjoint inclusive ranges of occupied cell indices.
fn add_range(ranges: &mut Vec<(i64, i64)>, lo: i64, hi: i64) {
    if lo <= hi {
        ranges.push((lo, hi));
    }
}

fn merge_ranges(mut ranges: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    ranges.sort_unstable();
    let mut out: Vec<(i64, i64)> = Vec::new();
    for (a, b) in ranges {
        if let Some(last) = out.last_mut() {
            if a <= last.1 + 1 {
                last.1 = last.1.max(b);
                continue;
            }
        }
        out.push((a, b));
    }
    out
}

/// Cells `[a + i w, a + (i+1) w)` over ℤ.
struct Grid {
    a: Rational,
    w: Rational,
}

impl Grid {
    fn pos(&self, x: &Rational) -> Rational {
        (x - &self.a) / &self.w
    }

    /// Cell containing `x`.
    fn cell(&self, x: &Rational) -> i64 {
        to_i64(rational::floor_int(&self.pos(x)))
    }

    /// Cell containing points just below `x`.
    fn cell_below(&self, x: &Rational) -> i64 {
        to_i64(rational::ceil_int(&self.pos(x))) - 1
    }
}

fn to_i64(x: num_bigint::BigInt) -> i64 {
    i64::try_from(x).expect("cell index fits in i64")
}

/// Grid origin, cell width and the occupied cell index ranges.
pub type EdsGrid = (Rational, Rational, Vec<(i64, i64)>);

/// Occupied cells of the `n`-grid over `[inf H, sup H]`.
pub fn eds_cells(h: &RealSet, n: u64) -> Result<EdsGrid> {
    if n == 0 {
        return Err(Error::BadParameters("n must be positive".into()));
    }
    let (a, b) = h.bounds()?;
    if a == b {
        return Err(Error::DegenerateSet);
    }
    let depth = h.depth();
    if depth > 1 {
        return Err(Error::UnsupportedDepth(depth));
    }
    let w = (&b - &a) / rational::uint(n);
    let grid = Grid {
        a: a.clone(),
        w: w.clone(),
    };
    let mut ranges = Vec::new();
    for iv in h.intervals() {
        let lo = grid.cell(&iv.lo);
        let hi = if iv.hi_closed {
            grid.cell(&iv.hi)
        } else {
            grid.cell_below(&iv.hi)
        };
        add_range(&mut ranges, lo, hi);
    }
    for p in h.isolated_points() {
        let c = grid.cell(p);
        add_range(&mut ranges, c, c);
    }
    for c in h.clusters() {
        // from index `k` on, consecutive terms cannot skip a cell
        let k = c
            .rule
            .first_gap_below(&w, c.start)
            .ok_or(Error::Unresolved)?;
        let head_end = c.end.map_or(k, |e| k.min(e + 1));
        for i in c.start..head_end {
            let t = grid.cell(&c.term(i));
            add_range(&mut ranges, t, t);
        }
        if c.end.is_some_and(|e| e < k) {
            continue;
        }
        let near = grid.cell(&c.term(k));
        let far = match (c.end, c.side) {
            (Some(e), _) => grid.cell(&c.term(e)),
            (None, Side::Above) => grid.cell(&c.limit),
            (None, Side::Below) => grid.cell_below(&c.limit),
        };
        add_range(&mut ranges, near.min(far), near.max(far));
        if c.include_limit && c.end.is_none() {
            let l = grid.cell(&c.limit);
            add_range(&mut ranges, l, l);
        }
    }
    Ok((a, w, merge_ranges(ranges)))
}

/// `𝒜{a + (i/n)(b − a) : H ∩ cell_i ≠ ∅}`.
pub fn eds_n(h: &RealSet, n: u64) -> Result<Rational> {
    let (a, w, ranges) = eds_cells(h, n)?;
    let mut count = 0i128;
    let mut index_sum = 0i128;
    for (lo, hi) in ranges {
        let (lo, hi) = (lo as i128, hi as i128);
        count += hi - lo + 1;
        index_sum += (lo + hi) * (hi - lo + 1) / 2;
    }
    let mean_index = Rational::new(index_sum.into(), count.into());
    Ok(a + w * mean_index)
}

/// `Avg¹(S(H, δ))`.
pub fn avg_fat(h: &RealSet, delta: &Rational) -> Result<Rational> {
    avg1(&measure::fatten(h, delta)?)
}

/// `M^μ(H) = ∫_H x dμ / μ(H)`.
pub fn m_mu(m: &DensityMeasure, h: &RealSet) -> Result<Rational> {
    let mass = m.measure(h)?;
    if !mass.is_positive() {
        return Err(Error::NullSet);
    }
    Ok(m.moment(h)? / mass)
}
