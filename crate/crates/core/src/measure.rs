//! Lebesgue measure, first moments, density measures, fattening and the
//! Hausdorff distance on representable sets.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactset::{Cluster, Interval, RealSet, Side};
use crate::rational::{self, Rational};

/// Largest number of cluster terms enumerated by a distance computation.
const DISTANCE_BUDGET: u64 = 1 << 18;

pub fn lebesgue(h: &RealSet) -> Rational {
    h.intervals().iter().map(Interval::len).sum()
}

/// `∫_H x dλ`.
pub fn moment(h: &RealSet) -> Rational {
    h.intervals().iter().map(Interval::moment).sum()
}

/// A measure with piecewise constant density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityMeasure {
    pieces: Vec<(Interval, Rational)>,
}

impl DensityMeasure {
    pub fn new(mut pieces: Vec<(Interval, Rational)>) -> Result<DensityMeasure> {
        pieces.retain(|(iv, _)| !iv.is_empty());
        pieces.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
        for (iv, d) in &pieces {
            if d.is_negative() {
                return Err(Error::BadParameters(format!("negative density on {iv}")));
            }
        }
        for w in pieces.windows(2) {
            if w[0].0.intersect(&w[1].0).is_some_and(|i| !i.is_empty()) {
                return Err(Error::BadParameters("density pieces overlap".into()));
            }
        }
        Ok(DensityMeasure { pieces })
    }

    /// Lebesgue measure restricted to `[lo, hi]`.
    pub fn lebesgue_on(lo: Rational, hi: Rational) -> DensityMeasure {
        DensityMeasure {
            pieces: vec![(Interval::closed(lo, hi), rational::one())],
        }
    }

    pub fn pieces(&self) -> &[(Interval, Rational)] {
        &self.pieces
    }

    fn integrate(&self, h: &RealSet, f: impl Fn(&Interval) -> Rational) -> Result<Rational> {
        let mut total = rational::zero();
        for iv in h.intervals() {
            let mut covered = rational::zero();
            for (piece, density) in &self.pieces {
                if let Some(part) = iv.intersect(piece) {
                    covered += part.len();
                    total += density * f(&part);
                }
            }
            if covered != iv.len() {
                return Err(Error::OutsideSupport);
            }
        }
        Ok(total)
    }

    /// `μ(H)`.
    pub fn measure(&self, h: &RealSet) -> Result<Rational> {
        self.integrate(h, Interval::len)
    }

    /// `∫_H x dμ`.
    pub fn moment(&self, h: &RealSet) -> Result<Rational> {
        self.integrate(h, Interval::moment)
    }
}

/// `S(H, δ)`, the union of open δ-balls around the points of `H`.
pub fn fatten(h: &RealSet, delta: &Rational) -> Result<RealSet> {
    if !delta.is_positive() {
        return Err(Error::BadParameters(
            "fattening radius must be positive".into(),
        ));
    }
    let depth = h.depth();
    if depth > 1 {
        return Err(Error::UnsupportedDepth(depth));
    }
    let ball = |x: &Rational| Interval::open(x - delta, x + delta);
    let mut out: Vec<Interval> = h
        .intervals()
        .iter()
        .map(|i| Interval::open(&i.lo - delta, &i.hi + delta))
        .collect();
    out.extend(h.isolated_points().iter().map(ball));
    for c in h.clusters() {
        let two_delta = delta * rational::int(2);
        // from index `merge` on, consecutive balls overlap
        let merge = c
            .rule
            .first_gap_below(&two_delta, c.start)
            .ok_or(Error::Unresolved)?;
        let head_end = c.end.map_or(merge, |e| merge.min(e + 1));
        out.extend((c.start..head_end).map(|k| ball(&c.term(k))));
        let last = match c.end {
            None => None,
            Some(e) if e < merge => continue,
            Some(e) => Some(c.term(e)),
        };
        let near = c.term(merge);
        let far = last.unwrap_or_else(|| c.limit.clone());
        let (lo, hi) = match c.side {
            Side::Above => (far, near),
            Side::Below => (near, far),
        };
        out.push(Interval::open(lo - delta, hi + delta));
    }
    Ok(RealSet::build(out, Vec::new(), Vec::new()))
}

/// Closure of the positive-measure part: `{x : λ(H ∩ S(x,δ)) > 0 for all δ > 0}`.
pub fn support(h: &RealSet) -> RealSet {
    RealSet::build(
        h.intervals().iter().map(Interval::closure).collect(),
        Vec::new(),
        Vec::new(),
    )
}

/// Infimum and supremum of the support.
pub fn essential_bounds(h: &RealSet) -> Result<(Rational, Rational)> {
    let ivs = h.intervals();
    match (ivs.first(), ivs.last()) {
        (Some(a), Some(b)) => Ok((a.lo.clone(), b.hi.clone())),
        _ => Err(Error::NullSet),
    }
}

/// Exact Hausdorff distance between compact sets.
pub fn hausdorff_distance(a: &RealSet, b: &RealSet) -> Result<Rational> {
    for s in [a, b] {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if !s.is_closed() {
            return Err(Error::NotCompact);
        }
        if s.depth() > 1 {
            return Err(Error::UnsupportedDepth(s.depth()));
        }
    }
    let ab = directed(a, b)?;
    let ba = directed(b, a)?;
    Ok(rational::max(&ab, &ba))
}

/// Distance from `x` to a compact depth-one cluster.
fn cluster_distance(c: &Cluster, x: &Rational) -> Rational {
    let mut idx = vec![c.start];
    if let Some(e) = c.end {
        idx.push(e);
    }
    let d = match c.side {
        Side::Above => x - &c.limit,
        Side::Below => &c.limit - x,
    };
    if d.is_positive() {
        if let Some(k) = c.rule.first_offset_below(&d, false, c.start) {
            idx.push(k);
            if k > c.start {
                idx.push(k - 1);
            }
        }
    }
    let mut best: Option<Rational> = if c.end.is_none() {
        Some((x - &c.limit).abs())
    } else {
        None
    };
    for k in idx {
        if c.contains_index(k) {
            let v = (x - c.term(k)).abs();
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
        }
    }
    best.expect("cluster has a term")
}

fn point_distance(s: &RealSet, x: &Rational) -> Rational {
    let mut best: Option<Rational> = None;
    let mut offer = |v: Rational| {
        if best.as_ref().is_none_or(|b| &v < b) {
            best = Some(v);
        }
    };
    for iv in s.intervals() {
        offer(if x < &iv.lo {
            &iv.lo - x
        } else if x > &iv.hi {
            x - &iv.hi
        } else {
            rational::zero()
        });
    }
    for p in s.isolated_points() {
        offer((x - p).abs());
    }
    for c in s.clusters() {
        offer(cluster_distance(c, x));
    }
    best.expect("nonempty set")
}

/// Closed atoms `[u, v]` approximating `s` from above: every cluster tail
/// beyond offset `tau` is replaced by its hull. Returns the atoms and the
/// largest half-gap hidden inside a hull.
fn atoms(s: &RealSet, tau: &Rational) -> Result<(Vec<(Rational, Rational)>, Rational)> {
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    let mut hidden = rational::zero();
    for iv in s.intervals() {
        out.push((iv.lo.clone(), iv.hi.clone()));
    }
    for p in s.isolated_points() {
        out.push((p.clone(), p.clone()));
    }
    for c in s.clusters() {
        let k = c
            .rule
            .first_gap_below(tau, c.start)
            .ok_or(Error::Unresolved)?;
        let stop = c.end.map_or(k, |e| k.min(e + 1));
        if stop - c.start > DISTANCE_BUDGET {
            return Err(Error::Unresolved);
        }
        for i in c.start..stop {
            let t = c.term(i);
            out.push((t.clone(), t));
        }
        let tail_end = match c.end {
            Some(e) if e < stop => continue,
            Some(e) => c.term(e),
            None => c.limit.clone(),
        };
        let near = c.term(stop);
        hidden = rational::max(&hidden, &(c.rule.gap(stop) / rational::int(2)));
        out.push(if near < tail_end {
            (near, tail_end)
        } else {
            (tail_end, near)
        });
    }
    out.sort();
    let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(out.len());
    for (u, v) in out {
        if let Some(last) = merged.last_mut() {
            if u <= last.1 {
                if v > last.1 {
                    last.1 = v;
                }
                continue;
            }
        }
        merged.push((u, v));
    }
    Ok((merged, hidden))
}

fn atom_distance(atoms: &[(Rational, Rational)], x: &Rational) -> Rational {
    let i = atoms.partition_point(|(u, _)| u <= x);
    let mut best: Option<Rational> = None;
    if i > 0 {
        let (_, v) = &atoms[i - 1];
        best = Some(if x <= v { rational::zero() } else { x - v });
    }
    if i < atoms.len() {
        let d = &atoms[i].0 - x;
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    }
    best.expect("nonempty atoms")
}

/// `sup_{x ∈ [lo, hi]} dist(x, atoms)`.
fn sup_over(atoms: &[(Rational, Rational)], lo: &Rational, hi: &Rational) -> Rational {
    let mut best = rational::max(&atom_distance(atoms, lo), &atom_distance(atoms, hi));
    for w in atoms.windows(2) {
        let mid = (&w[0].1 + &w[1].0) / rational::int(2);
        if &mid > lo && &mid < hi {
            best = rational::max(&best, &(&w[1].0 - &mid));
        }
    }
    best
}

/// `sup_{x ∈ A} dist(x, B)` for compact depth-one sets.
fn directed(a: &RealSet, b: &RealSet) -> Result<Rational> {
    if a.diff(b).is_ok_and(|d| d.is_empty()) {
        return Ok(rational::zero());
    }
    let (lo_a, hi_a) = a.bounds()?;
    let (lo_b, hi_b) = b.bounds()?;
    let span = rational::max(&hi_a, &hi_b) - rational::min(&lo_a, &lo_b);
    let mut tau = if span.is_zero() {
        rational::one()
    } else {
        span / rational::int(8)
    };
    for _ in 0..64 {
        let (b_atoms, hidden) = atoms(b, &tau)?;
        let mut lower = rational::zero();
        let mut upper = hidden.clone();
        for p in a.isolated_points() {
            lower = rational::max(&lower, &point_distance(b, p));
        }
        for iv in a.intervals() {
            lower = rational::max(&lower, &sup_over(&b_atoms, &iv.lo, &iv.hi));
        }
        for c in a.clusters() {
            let k = c
                .rule
                .first_offset_below(&tau, false, c.start)
                .ok_or(Error::Unresolved)?;
            let stop = c.end.map_or(k, |e| k.min(e + 1));
            if stop - c.start > DISTANCE_BUDGET {
                return Err(Error::Unresolved);
            }
            for i in c.start..stop {
                lower = rational::max(&lower, &point_distance(b, &c.term(i)));
            }
            if c.end.is_none() {
                lower = rational::max(&lower, &point_distance(b, &c.limit));
            }
            let tail_end = match c.end {
                Some(e) if e < stop => continue,
                Some(e) => c.term(e),
                None => c.limit.clone(),
            };
            let near = c.term(stop);
            let (u, v) = if near < tail_end {
                (near, tail_end)
            } else {
                (tail_end, near)
            };
            upper = rational::max(&upper, &sup_over(&b_atoms, &u, &v));
        }
        if lower >= upper {
            return Ok(lower);
        }
        tau /= rational::int(4);
    }
    Err(Error::Unresolved)
}
