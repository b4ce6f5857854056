use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use super::cluster::{piece_bounds, Piece};
use super::{Cluster, Interval};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Upper bound on explicitly enumerated points when cutting clusters
/// against each other.
const ENUMERATION_CAP: usize = 1 << 20;

/// A normalized finite union of intervals, isolated points and clusters.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RealSet {
    intervals: Vec<Interval>,
    points: Vec<Rational>,
    clusters: Vec<Cluster>,
}

fn cmp_interval(a: &Interval, b: &Interval) -> Ordering {
    a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed))
}

impl RealSet {
    pub fn empty() -> RealSet {
        RealSet::default()
    }

    pub fn interval(iv: Interval) -> RealSet {
        RealSet::build(vec![iv], Vec::new(), Vec::new())
    }

    pub fn closed(lo: Rational, hi: Rational) -> RealSet {
        RealSet::interval(Interval::closed(lo, hi))
    }

    pub fn point(x: Rational) -> RealSet {
        RealSet::build(Vec::new(), vec![x], Vec::new())
    }

    pub fn points(xs: impl IntoIterator<Item = Rational>) -> RealSet {
        RealSet::build(Vec::new(), xs.into_iter().collect(), Vec::new())
    }

    pub fn cluster(c: Cluster) -> RealSet {
        RealSet::build(Vec::new(), Vec::new(), vec![c])
    }

    /// Canonical form of a raw collection of components.
    pub fn normalize(
        intervals: Vec<Interval>,
        points: Vec<Rational>,
        clusters: Vec<Cluster>,
    ) -> Result<RealSet> {
        for iv in &intervals {
            if iv.lo > iv.hi {
                return Err(Error::InvalidInterval {
                    lo: Box::new(iv.lo.clone()),
                    hi: Box::new(iv.hi.clone()),
                });
            }
        }
        for c in &clusters {
            Cluster::new(
                c.limit.clone(),
                c.side,
                c.rule.clone(),
                c.start,
                c.include_limit,
            )?;
            if let Some(e) = c.end {
                c.clone().with_end(e)?;
            }
            if let Some(t) = &c.child {
                let mut bare = c.clone();
                bare.child = None;
                bare.with_child((**t).clone())?;
            }
        }
        Ok(RealSet::build(intervals, points, clusters))
    }

    /// Normalization for components already known to be valid.
    pub(crate) fn build(
        intervals: Vec<Interval>,
        points: Vec<Rational>,
        clusters: Vec<Cluster>,
    ) -> RealSet {
        let mut ivs = Vec::new();
        let mut pts: BTreeSet<Rational> = points.into_iter().collect();
        for iv in intervals {
            if iv.is_empty() {
                continue;
            }
            if iv.is_degenerate() {
                pts.insert(iv.lo);
            } else {
                ivs.push(iv);
            }
        }
        if ivs.is_empty() && clusters.is_empty() {
            return RealSet {
                intervals: ivs,
                points: pts.into_iter().collect(),
                clusters: Vec::new(),
            };
        }
        let mut cls = Vec::new();
        for c in clusters {
            push_piece(Piece::Cluster(c), &mut pts, &mut cls);
        }
        let mut state = (ivs, pts, cls);
        loop {
            let next = normalize_pass(state.clone());
            if next == state {
                break;
            }
            state = next;
        }
        let (intervals, mut points, mut clusters) = state;
        settle_shared_terms(&intervals, &mut points, &mut clusters);
        RealSet {
            intervals,
            points: points.into_iter().collect(),
            clusters,
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn isolated_points(&self) -> &[Rational] {
        &self.points
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty() && self.clusters.is_empty()
    }

    /// Whether the set has finitely many points.
    pub fn is_finite(&self) -> bool {
        self.intervals.is_empty() && self.clusters.iter().all(|c| c.is_finite())
    }

    /// Every point of a finite set, sorted and distinct.
    pub fn finite_points(&self) -> Result<Vec<Rational>> {
        if !self.is_finite() {
            return Err(Error::NotFinite);
        }
        if self.clusters.is_empty() {
            return Ok(self.points.clone());
        }
        let mut all: BTreeSet<Rational> = self.points.iter().cloned().collect();
        for c in &self.clusters {
            all.extend(c.finite_points()?);
        }
        Ok(all.into_iter().collect())
    }

    /// Deepest cluster nesting, 0 when there are no clusters.
    pub fn depth(&self) -> usize {
        self.clusters.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn is_closed(&self) -> bool {
        self.intervals.iter().all(|i| i.is_closed())
            && self.clusters.iter().all(|c| {
                c.is_closed()
                    || (c.closure().is_closed() && c.end.is_none() && self.member(&c.limit))
            })
    }

    pub fn member(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
            || self.points.binary_search(x).is_ok()
            || self.clusters.iter().any(|c| c.member(x))
    }

    /// Exact infimum and supremum.
    pub fn bounds(&self) -> Result<(Rational, Rational)> {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        let mut take = |a: Rational, b: Rational| {
            if lo.as_ref().is_none_or(|l| &a < l) {
                lo = Some(a);
            }
            if hi.as_ref().is_none_or(|h| &b > h) {
                hi = Some(b);
            }
        };
        for iv in &self.intervals {
            take(iv.lo.clone(), iv.hi.clone());
        }
        for p in &self.points {
            take(p.clone(), p.clone());
        }
        for c in &self.clusters {
            let (a, b) = c.bounds();
            take(a, b);
        }
        match (lo, hi) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::EmptySet),
        }
    }

    /// `liminf H = inf H'` and `limsup H = sup H'`.
    pub fn acc_bounds(&self) -> Result<(Rational, Rational)> {
        let d = self.derived();
        if d.is_empty() {
            return Err(Error::EmptyDerivedSet);
        }
        d.bounds()
    }

    pub fn union(&self, other: &RealSet) -> RealSet {
        RealSet::build(
            self.intervals
                .iter()
                .chain(&other.intervals)
                .cloned()
                .collect(),
            self.points.iter().chain(&other.points).cloned().collect(),
            self.clusters
                .iter()
                .chain(&other.clusters)
                .cloned()
                .collect(),
        )
    }

    /// `H ∩ iv`, always representable.
    pub fn intersect_interval(&self, iv: &Interval) -> RealSet {
        let intervals = self
            .intervals
            .iter()
            .filter_map(|i| i.intersect(iv))
            .collect();
        let points = self
            .points
            .iter()
            .filter(|p| iv.contains(p))
            .cloned()
            .collect();
        let mut pts = Vec::new();
        let mut cls = Vec::new();
        for c in &self.clusters {
            for piece in c.split(iv).0 {
                match piece {
                    Piece::Point(p) => pts.push(p),
                    Piece::Cluster(c) => cls.push(c),
                }
            }
        }
        let mut set = RealSet::build(intervals, points, cls);
        if !pts.is_empty() {
            set = set.union(&RealSet::points(pts));
        }
        set
    }

    pub fn intersect(&self, other: &RealSet) -> Result<RealSet> {
        let mut intervals = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(i) = a.intersect(b) {
                    intervals.push(i);
                }
            }
        }
        let mut points: Vec<Rational> = self
            .points
            .iter()
            .filter(|p| other.member(p))
            .cloned()
            .collect();
        points.extend(other.points.iter().filter(|p| self.member(p)).cloned());
        let mut clusters = Vec::new();
        for (x, y) in [(self, other), (other, self)] {
            for c in &x.clusters {
                for iv in &y.intervals {
                    for piece in c.split(iv).0 {
                        match piece {
                            Piece::Point(p) => points.push(p),
                            Piece::Cluster(c) => clusters.push(c),
                        }
                    }
                }
            }
        }
        for a in &self.clusters {
            for b in &other.clusters {
                let (pts, cls) = cluster_intersection(a, b)?;
                points.extend(pts);
                clusters.extend(cls);
            }
        }
        Ok(RealSet::build(intervals, points, clusters))
    }

    /// `self − other`.
    pub fn diff(&self, other: &RealSet) -> Result<RealSet> {
        // intervals
        let mut intervals = self.intervals.clone();
        for b in &other.intervals {
            intervals = intervals.iter().flat_map(|a| a.minus(b)).collect();
        }
        let mut cut: BTreeSet<Rational> = BTreeSet::new();
        if !intervals.is_empty() {
            cut.extend(other.points.iter().cloned());
        }
        for c in &other.clusters {
            for iv in &intervals {
                for piece in c.split(iv).0 {
                    match piece {
                        Piece::Point(p) => {
                            cut.insert(p);
                        }
                        Piece::Cluster(sub) => {
                            if !sub.is_finite() {
                                return Err(Error::UnrepresentableResult(
                                    "removing infinitely many points from an interval".into(),
                                ));
                            }
                            cut.extend(sub.finite_points()?);
                        }
                    }
                }
            }
        }
        let intervals: Vec<Interval> = intervals
            .into_iter()
            .flat_map(|iv| puncture(iv, &cut))
            .collect();

        let points = self
            .points
            .iter()
            .filter(|p| !other.member(p))
            .cloned()
            .collect();

        let mut kept_points = Vec::new();
        let mut kept = Vec::new();
        for c in &self.clusters {
            let mut work = vec![Piece::Cluster(c.clone())];
            for iv in &other.intervals {
                work = work
                    .into_iter()
                    .flat_map(|p| match p {
                        Piece::Cluster(c) => c.split(iv).1,
                        pt => {
                            if piece_point_in(&pt, iv) {
                                Vec::new()
                            } else {
                                vec![pt]
                            }
                        }
                    })
                    .collect();
            }
            for x in &other.points {
                work = work.into_iter().flat_map(|p| remove_point(p, x)).collect();
            }
            for b in &other.clusters {
                let mut next = Vec::new();
                for p in work {
                    match p {
                        Piece::Point(x) => {
                            if !b.member(&x) {
                                next.push(Piece::Point(x));
                            }
                        }
                        Piece::Cluster(a) => next.extend(cluster_difference(&a, b)?),
                    }
                }
                work = next;
            }
            for p in work {
                match p {
                    Piece::Point(x) => kept_points.push(x),
                    Piece::Cluster(c) => kept.push(c),
                }
            }
        }
        let mut all_points: Vec<Rational> = points;
        all_points.extend(kept_points);
        Ok(RealSet::build(intervals, all_points, kept))
    }

    /// `H^{y-} = H ∩ (-∞, y]`.
    pub fn slice_le(&self, y: &Rational) -> RealSet {
        match self.bounds() {
            Ok((lo, _)) if &lo <= y => self.intersect_interval(&Interval::closed(lo, y.clone())),
            _ => RealSet::empty(),
        }
    }

    /// `H^{y+} = H ∩ [y, ∞)`.
    pub fn slice_ge(&self, y: &Rational) -> RealSet {
        match self.bounds() {
            Ok((_, hi)) if &hi >= y => self.intersect_interval(&Interval::closed(y.clone(), hi)),
            _ => RealSet::empty(),
        }
    }

    /// Image under `x -> alpha * x + beta`.
    pub fn affine(&self, alpha: &Rational, beta: &Rational) -> Result<RealSet> {
        if alpha.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(RealSet::build(
            self.intervals
                .iter()
                .map(|i| i.affine(alpha, beta))
                .collect(),
            self.points.iter().map(|p| alpha * p + beta).collect(),
            self.clusters
                .iter()
                .map(|c| c.affine(alpha, beta))
                .collect(),
        ))
    }

    pub fn translate(&self, x: &Rational) -> RealSet {
        self.affine(&rational::one(), x).expect("unit scale")
    }

    pub fn scale(&self, alpha: &Rational) -> Result<RealSet> {
        self.affine(alpha, &rational::zero())
    }

    /// `T_s(H) = {2s - x : x ∈ H}`.
    pub fn reflect(&self, s: &Rational) -> RealSet {
        self.affine(&-rational::one(), &(s * rational::int(2)))
            .expect("nonzero scale")
    }

    pub fn closure(&self) -> RealSet {
        RealSet::build(
            self.intervals.iter().map(|i| i.closure()).collect(),
            self.points.clone(),
            self.clusters.iter().map(|c| c.closure()).collect(),
        )
    }

    pub fn interior(&self) -> RealSet {
        RealSet::build(
            self.intervals.iter().map(|i| i.interior()).collect(),
            Vec::new(),
            Vec::new(),
        )
    }

    /// Set of accumulation points `H'`.
    pub fn derived(&self) -> RealSet {
        let mut points = Vec::new();
        let mut clusters = Vec::new();
        for c in &self.clusters {
            for piece in c.derived() {
                match piece {
                    Piece::Point(p) => points.push(p),
                    Piece::Cluster(c) => clusters.push(c),
                }
            }
        }
        RealSet::build(
            self.intervals.iter().map(|i| i.closure()).collect(),
            points,
            clusters,
        )
    }

    /// `H^(n)`.
    pub fn derived_iter(&self, n: usize) -> Result<RealSet> {
        if !self.intervals.is_empty() {
            return Err(Error::InfiniteLevel);
        }
        let mut h = self.clone();
        for _ in 0..n {
            if h.is_empty() {
                break;
            }
            h = h.derived();
        }
        Ok(h)
    }

    /// Largest `n` with `H^(n)` nonempty.
    pub fn level(&self) -> Result<usize> {
        if !self.intervals.is_empty() {
            return Err(Error::InfiniteLevel);
        }
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut n = 0;
        let mut h = self.derived();
        while !h.is_empty() {
            n += 1;
            h = h.derived();
        }
        Ok(n)
    }

    /// Whether `H ∩ [lo, hi)` (or `[lo, hi]`) is nonempty.
    pub fn intersects_interval(&self, lo: &Rational, hi: &Rational, half_open: bool) -> bool {
        if lo > hi || (lo == hi && half_open) {
            return false;
        }
        let iv = Interval {
            lo: lo.clone(),
            hi: hi.clone(),
            lo_closed: true,
            hi_closed: !half_open,
        };
        !self.intersect_interval(&iv).is_empty()
    }

    pub fn is_subset(&self, other: &RealSet) -> Result<bool> {
        Ok(self.diff(other)?.is_empty())
    }
}

fn piece_point_in(p: &Piece, iv: &Interval) -> bool {
    matches!(p, Piece::Point(x) if iv.contains(x))
}

fn remove_point(p: Piece, x: &Rational) -> Vec<Piece> {
    match p {
        Piece::Point(y) if &y == x => Vec::new(),
        Piece::Point(y) => vec![Piece::Point(y)],
        Piece::Cluster(c) => c.remove_point(x),
    }
}

/// Removes a finite point set from an interval.
fn puncture(iv: Interval, cut: &BTreeSet<Rational>) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut rest = Some(iv);
    for x in cut {
        let Some(cur) = rest.take() else { break };
        if !cur.contains(x) {
            rest = Some(cur);
            continue;
        }
        let left = Interval {
            lo: cur.lo.clone(),
            hi: x.clone(),
            lo_closed: cur.lo_closed,
            hi_closed: false,
        };
        let right = Interval {
            lo: x.clone(),
            hi: cur.hi.clone(),
            lo_closed: false,
            hi_closed: cur.hi_closed,
        };
        if !left.is_empty() {
            out.push(left);
        }
        if !right.is_empty() {
            rest = Some(right);
        }
    }
    out.extend(rest);
    out
}

/// Finitely many points of `a` outside the ball of radius `eps` around its limit.
fn head_points(a: &Cluster, eps: &Rational) -> Result<Vec<Rational>> {
    if a.depth() > 1 {
        return Err(Error::UnrepresentableResult(
            "nested clusters with distinct limits".into(),
        ));
    }
    let stop = match a.rule.first_offset_below(eps, true, a.start) {
        Some(k) => k,
        None => {
            return Err(Error::UnrepresentableResult(
                "cluster head too long to enumerate".into(),
            ))
        }
    };
    let stop = a.end.map_or(stop, |e| stop.min(e + 1));
    if (stop - a.start) as usize > ENUMERATION_CAP {
        return Err(Error::UnrepresentableResult(
            "cluster head too long to enumerate".into(),
        ));
    }
    Ok((a.start..stop).map(|k| a.term(k)).collect())
}

fn index_range(c: &Cluster) -> (u64, Option<u64>) {
    (c.start, c.end)
}

fn cluster_intersection(a: &Cluster, b: &Cluster) -> Result<(Vec<Rational>, Vec<Cluster>)> {
    let mut points = Vec::new();
    let mut clusters = Vec::new();
    if a.same_family(b) {
        let (a0, a1) = index_range(a);
        let (b0, b1) = index_range(b);
        let lo = a0.max(b0);
        let hi = match (a1, b1) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(x.min(y)),
        };
        if hi.is_none_or(|h| h >= lo) {
            let mut c = Cluster {
                start: lo,
                end: hi,
                include_limit: false,
                ..a.clone()
            };
            if hi.is_none() && a.include_limit && b.include_limit {
                c.include_limit = true;
            }
            clusters.push(c);
        } else if a.include_limit && b.include_limit && a.end.is_none() && b.end.is_none() {
            points.push(a.limit.clone());
        }
        return Ok((points, clusters));
    }
    if a.limit == b.limit {
        if a.side != b.side && a.depth() == 1 && b.depth() == 1 {
            // opposite sides only share the limit
            if a.include_limit && b.include_limit && a.end.is_none() && b.end.is_none() {
                points.push(a.limit.clone());
            }
            return Ok((points, clusters));
        }
        return Err(Error::UnrepresentableResult(
            "intersection of distinct clusters with a common limit".into(),
        ));
    }
    let eps = (&a.limit - &b.limit).abs() / rational::int(2);
    for x in head_points(a, &eps)? {
        if b.member(&x) {
            points.push(x);
        }
    }
    for x in head_points(b, &eps)? {
        if a.member(&x) {
            points.push(x);
        }
    }
    for (x, y) in [(a, b), (b, a)] {
        if x.include_limit && x.end.is_none() && y.member(&x.limit) {
            points.push(x.limit.clone());
        }
    }
    Ok((points, clusters))
}

fn cluster_difference(a: &Cluster, b: &Cluster) -> Result<Vec<Piece>> {
    if a.same_family(b) {
        let mut out = Vec::new();
        let (a0, a1) = index_range(a);
        let (b0, b1) = index_range(b);
        // indices of a below b's range
        let below_hi = match a1 {
            Some(e) => e.min(b0.saturating_sub(1)),
            None => b0.saturating_sub(1),
        };
        if below_hi >= a0 {
            out.extend(a.range_pieces(a0, Some(below_hi)));
        }
        if let Some(b_end) = b1 {
            let lo = a0.max(b_end + 1);
            if a1.is_none_or(|e| e >= lo) {
                out.extend(a.range_pieces(lo, a1));
            }
        }
        let limit_kept =
            a.include_limit && a.end.is_none() && !(b.include_limit && b.end.is_none());
        if limit_kept {
            out.push(Piece::Point(a.limit.clone()));
        }
        return Ok(out);
    }
    if a.limit == b.limit {
        if a.side != b.side && a.depth() == 1 && b.depth() == 1 {
            return Ok(a.remove_point_if(b.include_limit && b.end.is_none()));
        }
        return Err(Error::UnrepresentableResult(
            "difference of distinct clusters with a common limit".into(),
        ));
    }
    let eps = (&a.limit - &b.limit).abs() / rational::int(2);
    let mut doomed: BTreeSet<Rational> = BTreeSet::new();
    for x in head_points(a, &eps)? {
        if b.member(&x) {
            doomed.insert(x);
        }
    }
    for x in head_points(b, &eps)? {
        if a.member(&x) {
            doomed.insert(x);
        }
    }
    if b.include_limit && b.end.is_none() && a.member(&b.limit) {
        doomed.insert(b.limit.clone());
    }
    let mut work = vec![Piece::Cluster(a.clone())];
    for x in &doomed {
        work = work.into_iter().flat_map(|p| remove_point(p, x)).collect();
    }
    Ok(work)
}

impl Cluster {
    fn remove_point_if(&self, drop_limit: bool) -> Vec<Piece> {
        if drop_limit && self.include_limit {
            self.remove_point(&self.limit.clone())
        } else {
            vec![Piece::Cluster(self.clone())]
        }
    }
}

/// Adds a piece to the working state, splitting ranged clusters and
/// detaching included limits into the point set.
fn push_piece(p: Piece, points: &mut BTreeSet<Rational>, clusters: &mut Vec<Cluster>) {
    match p {
        Piece::Point(x) => {
            points.insert(x);
        }
        Piece::Cluster(mut c) => {
            if c.include_limit {
                if c.end.is_none() {
                    points.insert(c.limit.clone());
                }
                c.include_limit = false;
            }
            match c.end {
                Some(e) => {
                    for piece in c.range_pieces(c.start, Some(e)) {
                        match piece {
                            Piece::Cluster(r) if r.end == c.end && r.start == c.start => {
                                clusters.push(r)
                            }
                            other => push_piece(other, points, clusters),
                        }
                    }
                }
                None => clusters.push(c),
            }
        }
    }
}

type State = (Vec<Interval>, BTreeSet<Rational>, Vec<Cluster>);

fn merge_intervals(mut ivs: Vec<Interval>) -> Vec<Interval> {
    ivs.sort_by(cmp_interval);
    let mut out: Vec<Interval> = Vec::with_capacity(ivs.len());
    for iv in ivs {
        if let Some(last) = out.last_mut() {
            if last.joins(&iv) {
                match iv.hi.cmp(&last.hi) {
                    Ordering::Greater => {
                        last.hi = iv.hi;
                        last.hi_closed = iv.hi_closed;
                    }
                    Ordering::Equal => last.hi_closed |= iv.hi_closed,
                    Ordering::Less => {}
                }
                if iv.lo == last.lo {
                    last.lo_closed |= iv.lo_closed;
                }
                continue;
            }
        }
        out.push(iv);
    }
    out
}

fn normalize_pass(state: State) -> State {
    let (ivs, mut points, clusters) = state;
    let mut ivs = merge_intervals(ivs);
    for iv in ivs.iter_mut() {
        if !iv.lo_closed && clusters.iter().any(|c| c.member(&iv.lo)) {
            iv.lo_closed = true;
        }
        if !iv.hi_closed && clusters.iter().any(|c| c.member(&iv.hi)) {
            iv.hi_closed = true;
        }
    }

    // points absorbed by intervals, closing open endpoints they touch
    let mut loose = BTreeSet::new();
    for p in points {
        let mut absorbed = false;
        for iv in ivs.iter_mut() {
            if iv.contains(&p) {
                absorbed = true;
            } else if iv.lo == p {
                iv.lo_closed = true;
                absorbed = true;
            } else if iv.hi == p {
                iv.hi_closed = true;
                absorbed = true;
            }
            if absorbed {
                break;
            }
        }
        if !absorbed {
            loose.insert(p);
        }
    }
    points = loose;
    let ivs = merge_intervals(ivs);

    // detach limits, cut clusters by intervals
    let mut work: Vec<Cluster> = Vec::new();
    for c in clusters {
        push_piece(Piece::Cluster(c), &mut points, &mut work);
    }
    let mut cut = Vec::new();
    for c in work {
        let mut pieces = vec![Piece::Cluster(c)];
        for iv in &ivs {
            pieces = pieces
                .into_iter()
                .flat_map(|p| match p {
                    Piece::Cluster(c) if hull_meets(&c, iv) => c.split(iv).1,
                    Piece::Point(x) if iv.contains(&x) => Vec::new(),
                    other => vec![other],
                })
                .collect();
        }
        for p in pieces {
            push_piece(p, &mut points, &mut cut);
        }
    }

    // merge clusters of the same family
    cut.sort();
    let mut merged: Vec<Cluster> = Vec::new();
    for c in cut {
        if let Some(last) = merged.last_mut() {
            if last.same_family(&c) {
                let reach = last.end.map(|e| e + 1);
                if reach.is_none_or(|r| c.start <= r) {
                    last.end = match (last.end, c.end) {
                        (None, _) | (_, None) => None,
                        (Some(x), Some(y)) => Some(x.max(y)),
                    };
                    continue;
                }
            }
        }
        merged.push(c);
    }

    points.retain(|p| !merged.iter().any(|c| c.member(p)));

    // absorb neighbouring instances given as loose points or clusters
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..merged.len() {
            let c = merged[i].clone();
            if c.start > 1 {
                if let Some(j) = find_instance(&c.instance(c.start - 1), &points, &merged, i) {
                    take_instance(j, &c.instance(c.start - 1), &mut points, &mut merged);
                    let idx = if matches!(j, Found::Cluster(k) if k < i) {
                        i - 1
                    } else {
                        i
                    };
                    merged[idx].start -= 1;
                    changed = true;
                    break;
                }
            }
            if let Some(e) = c.end {
                if let Some(j) = find_instance(&c.instance(e + 1), &points, &merged, i) {
                    take_instance(j, &c.instance(e + 1), &mut points, &mut merged);
                    let idx = if matches!(j, Found::Cluster(k) if k < i) {
                        i - 1
                    } else {
                        i
                    };
                    merged[idx].end = Some(e + 1);
                    changed = true;
                    break;
                }
            }
        }
    }

    // drop points that are cluster members
    points.retain(|p| !merged.iter().any(|c| c.member(p)));

    // reattach limits
    merged.sort();
    for c in merged.iter_mut() {
        if c.end.is_none() && points.remove(&c.limit) {
            c.include_limit = true;
        }
    }
    (ivs, points, merged)
}

/// Terms shared by clusters of different limits. Every cluster is first
/// extended over preceding terms present elsewhere in the set; then a head
/// term shared with another cluster is left to that cluster, and when two
/// heads coincide the larger limit keeps it.
fn settle_shared_terms(
    intervals: &[Interval],
    points: &mut BTreeSet<Rational>,
    clusters: &mut [Cluster],
) {
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..clusters.len() {
            let c = &clusters[i];
            if c.depth() != 1 || c.start <= 1 {
                continue;
            }
            let t = c.term(c.start - 1);
            if intervals.iter().any(|iv| iv.contains(&t)) {
                continue;
            }
            let elsewhere = clusters
                .iter()
                .enumerate()
                .any(|(j, d)| j != i && d.member(&t));
            if elsewhere || points.remove(&t) {
                clusters[i].start -= 1;
                changed = true;
            }
        }
    }
    points.retain(|p| !clusters.iter().any(|c| c.member(p)));
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..clusters.len() {
            let c = &clusters[i];
            if c.depth() != 1 || c.end.is_some_and(|e| e <= c.start) {
                continue;
            }
            let head = c.term(c.start);
            let owner = clusters.iter().enumerate().any(|(j, d)| {
                j != i
                    && d.limit != c.limit
                    && d.member(&head)
                    && (d.term(d.start) != head || d.limit > c.limit)
            });
            if owner {
                clusters[i].start += 1;
                changed = true;
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Found {
    Point,
    Cluster(usize),
}

fn find_instance(
    inst: &Piece,
    points: &BTreeSet<Rational>,
    clusters: &[Cluster],
    skip: usize,
) -> Option<Found> {
    match inst {
        Piece::Point(x) => points.contains(x).then_some(Found::Point),
        Piece::Cluster(c) => {
            let mut bare = c.clone();
            let limit_needed = bare.include_limit && bare.end.is_none();
            bare.include_limit = false;
            if limit_needed && !points.contains(&bare.limit) {
                return None;
            }
            clusters
                .iter()
                .enumerate()
                .position(|(i, d)| i != skip && d == &bare)
                .map(Found::Cluster)
        }
    }
}

fn take_instance(
    found: Found,
    inst: &Piece,
    points: &mut BTreeSet<Rational>,
    clusters: &mut Vec<Cluster>,
) {
    match (found, inst) {
        (Found::Point, Piece::Point(x)) => {
            points.remove(x);
        }
        (Found::Cluster(i), Piece::Cluster(c)) => {
            clusters.remove(i);
            if c.include_limit && c.end.is_none() {
                points.remove(&c.limit);
            }
        }
        _ => unreachable!("instance kind mismatch"),
    }
}

fn hull_meets(c: &Cluster, iv: &Interval) -> bool {
    let (lo, hi) = c.bounds();
    lo <= iv.hi && hi >= iv.lo
}

impl fmt::Display for RealSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let mut parts: Vec<(Rational, String)> = Vec::new();
        for iv in &self.intervals {
            parts.push((iv.lo.clone(), iv.to_string()));
        }
        for c in &self.clusters {
            parts.push((piece_bounds(&Piece::Cluster(c.clone())).0, c.to_string()));
        }
        parts.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<String> = Vec::new();
        if !self.points.is_empty() {
            let list: Vec<String> = self.points.iter().map(rational::fmt).collect();
            out.push(format!("{{{}}}", list.join(", ")));
        }
        out.extend(parts.into_iter().map(|p| p.1));
        write!(f, "{}", out.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactset::Side;
    use crate::rational::{int, rat};

    fn inv_k() -> Cluster {
        Cluster::harmonic(int(0), int(1), 1).unwrap()
    }

    fn set(ivs: Vec<Interval>, pts: Vec<Rational>, cls: Vec<Cluster>) -> RealSet {
        RealSet::normalize(ivs, pts, cls).unwrap()
    }

    #[test]
    fn touching_intervals_merge() {
        let s = set(
            vec![
                Interval::closed(int(0), int(1)),
                Interval::closed(int(1), int(2)),
            ],
            vec![],
            vec![],
        );
        assert_eq!(s, RealSet::closed(int(0), int(2)));
    }

    #[test]
    fn interior_point_is_absorbed() {
        let s = set(
            vec![
                Interval::open(int(0), int(1)),
                Interval::open(int(1), int(2)),
            ],
            vec![int(1)],
            vec![],
        );
        assert_eq!(s, RealSet::interval(Interval::open(int(0), int(2))));
        let t = set(
            vec![Interval::closed(int(0), int(1))],
            vec![rat(1, 2)],
            vec![],
        );
        assert!(t.isolated_points().is_empty());
    }

    #[test]
    fn limit_point_and_with_limit_agree() {
        let a = set(vec![], vec![int(0)], vec![inv_k()]);
        let b = set(
            vec![],
            vec![],
            vec![Cluster::new(int(0), Side::Above, inv_k().rule, 1, true).unwrap()],
        );
        assert_eq!(a, b);
        assert!(a.member(&int(0)));
    }

    #[test]
    fn leading_term_absorbed_into_cluster() {
        let tail = Cluster::harmonic(int(0), int(1), 2).unwrap();
        assert_eq!(
            set(vec![], vec![int(1)], vec![tail]),
            RealSet::cluster(inv_k())
        );
    }

    #[test]
    fn diff_removes_harmonic_head() {
        let d = RealSet::cluster(inv_k())
            .diff(&RealSet::closed(rat(1, 2), int(1)))
            .unwrap();
        assert_eq!(
            d,
            RealSet::cluster(Cluster::harmonic(int(0), int(1), 3).unwrap())
        );
    }

    #[test]
    fn slices() {
        let two = RealSet::closed(int(0), int(1)).union(&RealSet::closed(int(2), int(3)));
        assert_eq!(two.slice_ge(&rat(3, 2)), RealSet::closed(int(2), int(3)));
        assert_eq!(
            RealSet::closed(int(0), int(2)).slice_le(&int(1)),
            RealSet::closed(int(0), int(1))
        );
        let h = RealSet::cluster(inv_k()).union(&RealSet::point(int(0)));
        let s = h.slice_le(&rat(1, 3));
        assert_eq!(
            s,
            set(
                vec![],
                vec![int(0)],
                vec![Cluster::harmonic(int(0), int(1), 3).unwrap()]
            )
        );
    }

    #[test]
    fn interval_minus_cluster_tail_is_unrepresentable() {
        let r = RealSet::closed(int(0), int(1)).diff(&RealSet::cluster(inv_k()));
        assert!(matches!(r, Err(Error::UnrepresentableResult(_))));
    }

    #[test]
    fn interval_minus_finite_points() {
        let r = RealSet::closed(int(0), int(2))
            .diff(&RealSet::points([int(1), int(2)]))
            .unwrap();
        let expected = set(
            vec![
                Interval::new(int(0), int(1), true, false).unwrap(),
                Interval::open(int(1), int(2)),
            ],
            vec![],
            vec![],
        );
        assert_eq!(r, expected);
    }

    #[test]
    fn derived_and_level() {
        let h = RealSet::cluster(inv_k()).union(&RealSet::points([int(0), int(2)]));
        assert_eq!(h.derived(), RealSet::point(int(0)));
        assert_eq!(h.level().unwrap(), 1);
        assert_eq!(
            RealSet::closed(int(0), int(1)).level(),
            Err(Error::InfiniteLevel)
        );
        let deep = inv_k()
            .with_child(Cluster::harmonic(int(0), rat(1, 2), 1).unwrap())
            .unwrap();
        assert_eq!(RealSet::cluster(deep).level().unwrap(), 2);
    }

    #[test]
    fn acc_bounds_of_two_sided_set() {
        let a = Cluster::new(int(0), Side::Below, inv_k().rule, 1, false).unwrap();
        let b = Cluster::harmonic(int(1), int(1), 1).unwrap();
        let h = set(vec![], vec![], vec![a, b]);
        assert_eq!(h.acc_bounds().unwrap(), (int(0), int(1)));
        assert_eq!(
            RealSet::points([int(1)]).acc_bounds(),
            Err(Error::EmptyDerivedSet)
        );
    }

    #[test]
    fn half_open_cells() {
        let h = set(
            vec![Interval::open(int(1), int(2))],
            vec![int(0), int(3)],
            vec![],
        );
        assert!(!h.intersects_interval(&int(2), &int(3), true));
        assert!(h.intersects_interval(&int(2), &int(3), false));
        assert!(RealSet::cluster(inv_k()).intersects_interval(&int(0), &rat(1, 100), true));
    }

    #[test]
    fn reflection_involution_on_cluster() {
        let h = RealSet::cluster(inv_k()).union(&RealSet::closed(int(2), int(3)));
        assert_eq!(h.reflect(&rat(1, 3)).reflect(&rat(1, 3)), h);
        assert_eq!(
            RealSet::closed(int(0), int(1)).reflect(&int(0)),
            RealSet::closed(int(-1), int(0))
        );
    }

    #[test]
    fn same_family_difference() {
        let a = RealSet::cluster(inv_k());
        let b = RealSet::cluster(Cluster::harmonic(int(0), int(1), 40).unwrap());
        let d = a.diff(&b).unwrap();
        assert!(d.is_finite());
        assert_eq!(d.finite_points().unwrap().len(), 39);
    }

    #[test]
    fn display_is_readable() {
        let h = set(
            vec![Interval::open(int(1), int(2))],
            vec![int(0), int(3)],
            vec![],
        );
        assert_eq!(h.to_string(), "{0, 3} u (1,2)");
    }
}
