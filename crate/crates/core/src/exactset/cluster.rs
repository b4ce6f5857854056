use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::Interval;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Instances of a finite index range up to this count are expanded into
/// explicit pieces instead of staying a ranged cluster.
const EXPAND_LIMIT: u64 = 16;

/// Which side of its limit a cluster approaches from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn sign(self) -> Rational {
        match self {
            Side::Above => rational::one(),
            Side::Below => -rational::one(),
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
        }
    }
}

/// Offset rule of a cluster: `offset(k) = c / k` or `offset(k) = c * q^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Harmonic { c: Rational },
    Geometric { c: Rational, q: Rational },
}

impl Rule {
    pub fn harmonic(c: Rational) -> Rule {
        Rule::Harmonic { c }
    }

    pub fn geometric(c: Rational, q: Rational) -> Rule {
        Rule::Geometric { c, q }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Rule::Harmonic { c } if c.is_positive() => Ok(()),
            Rule::Geometric { c, q }
                if c.is_positive() && q.is_positive() && q < &rational::one() =>
            {
                Ok(())
            }
            _ => Err(Error::BadParameters(format!("invalid cluster rule {self}"))),
        }
    }

    pub fn offset(&self, k: u64) -> Rational {
        match self {
            Rule::Harmonic { c } => c / rational::uint(k),
            Rule::Geometric { c, q } => c * pow(q, k),
        }
    }

    /// `offset(k) - offset(k + 1)`, strictly decreasing in `k`.
    pub fn gap(&self, k: u64) -> Rational {
        self.offset(k) - self.offset(k + 1)
    }

    /// Window radius around term `k`: a third of the gap to the next term.
    pub fn window(&self, k: u64) -> Rational {
        self.gap(k) / rational::int(3)
    }

    pub fn scaled(&self, factor: &Rational) -> Rule {
        match self {
            Rule::Harmonic { c } => Rule::Harmonic { c: c * factor },
            Rule::Geometric { c, q } => Rule::Geometric {
                c: c * factor,
                q: q.clone(),
            },
        }
    }

    /// Least `k >= from` with `offset(k) <= p` (or `< p` when `strict`).
    pub fn first_offset_below(&self, p: &Rational, strict: bool, from: u64) -> Option<u64> {
        if !p.is_positive() {
            return None;
        }
        if let Rule::Harmonic { c } = self {
            // c/k <= p  <=>  k >= c/p ;  c/k < p  <=>  k > c/p
            let bound = c / p;
            let k = if strict {
                rational::floor_int(&bound) + 1
            } else {
                rational::ceil_int(&bound)
            };
            return Some(k.to_u64()?.max(from));
        }
        search_first(from, |k| {
            let o = self.offset(k);
            if strict {
                &o < p
            } else {
                &o <= p
            }
        })
    }

    /// Least `k >= from` with `gap(k) < r`.
    pub fn first_gap_below(&self, r: &Rational, from: u64) -> Option<u64> {
        search_first(from, |k| &self.gap(k) < r)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Harmonic { c } => write!(f, "harmonic({})", rational::fmt(c)),
            Rule::Geometric { c, q } => {
                write!(f, "geometric({},{})", rational::fmt(c), rational::fmt(q))
            }
        }
    }
}

fn pow(q: &Rational, k: u64) -> Rational {
    let e = usize::try_from(k).expect("exponent fits usize");
    Rational::new(q.numer().pow(e as u32), q.denom().pow(e as u32))
}

/// Least `k >= from` satisfying a monotone (false then true) predicate.
pub(crate) fn search_first(from: u64, pred: impl Fn(u64) -> bool) -> Option<u64> {
    const CAP: u64 = 1 << 62;
    if pred(from) {
        return Some(from);
    }
    let mut lo = from; // pred(lo) false
    let mut step = 1u64;
    let hi = loop {
        let probe = from.checked_add(step)?;
        if probe > CAP {
            return None;
        }
        if pred(probe) {
            break probe;
        }
        lo = probe;
        step = step.checked_mul(2)?;
    };
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// One component produced when a cluster is cut: an isolated point or a
/// (possibly ranged) sub-cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Point(Rational),
    Cluster(Cluster),
}

/// A convergent-sequence structure: terms `limit + sign * offset(k)` for
/// `k` in `start..=end` (or `start..` when `end` is `None`).
///
/// With a `child`, every term is replaced by a scaled copy of the child
/// template (whose limit is `0`) placed in the window of radius
/// `window(k)` around the term, so the term becomes an accumulation point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cluster {
    pub limit: Rational,
    pub side: Side,
    pub rule: Rule,
    pub start: u64,
    pub end: Option<u64>,
    pub include_limit: bool,
    pub child: Option<Box<Cluster>>,
}

impl Cluster {
    pub fn new(
        limit: Rational,
        side: Side,
        rule: Rule,
        start: u64,
        include_limit: bool,
    ) -> Result<Cluster> {
        let c = Cluster {
            limit,
            side,
            rule,
            start,
            end: None,
            include_limit,
            child: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_end(mut self, end: u64) -> Result<Cluster> {
        self.end = Some(end);
        self.validate()?;
        Ok(self)
    }

    /// Nest a template (limit 0) around every term.
    pub fn with_child(mut self, template: Cluster) -> Result<Cluster> {
        self.child = Some(Box::new(template));
        self.validate()?;
        Ok(self)
    }

    pub fn harmonic(limit: Rational, c: Rational, start: u64) -> Result<Cluster> {
        Cluster::new(limit, Side::Above, Rule::harmonic(c), start, false)
    }

    fn validate(&self) -> Result<()> {
        self.rule.validate()?;
        if self.start == 0 {
            return Err(Error::BadParameters(
                "cluster start index must be positive".into(),
            ));
        }
        if matches!(self.end, Some(e) if e < self.start) {
            return Err(Error::BadParameters("cluster end precedes start".into()));
        }
        if let Some(t) = &self.child {
            t.validate()?;
            if !t.limit.is_zero() || t.reach() >= rational::one() {
                return Err(Error::OverlappingClusterWindows);
            }
        }
        Ok(())
    }

    /// Upper bound on `|x - limit|` over the cluster's points.
    pub fn reach(&self) -> Rational {
        let head = self.rule.offset(self.start);
        match &self.child {
            None => head,
            Some(t) => head + self.rule.window(self.start) * t.reach(),
        }
    }

    pub fn sign(&self) -> Rational {
        self.side.sign()
    }

    pub fn offset(&self, k: u64) -> Rational {
        self.rule.offset(k)
    }

    pub fn term(&self, k: u64) -> Rational {
        match self.side {
            Side::Above => &self.limit + self.rule.offset(k),
            Side::Below => &self.limit - self.rule.offset(k),
        }
    }

    pub fn window(&self, k: u64) -> Rational {
        self.rule.window(k)
    }

    pub fn is_infinite_range(&self) -> bool {
        self.end.is_none()
    }

    /// Whether the cluster holds finitely many points.
    pub fn is_finite(&self) -> bool {
        self.end.is_some() && self.child.as_ref().is_none_or(|c| c.is_finite())
    }

    /// Nesting depth: 1 for a plain convergent sequence.
    pub fn depth(&self) -> usize {
        1 + self.child.as_ref().map_or(0, |c| c.depth())
    }

    pub fn contains_index(&self, k: u64) -> bool {
        k >= self.start && self.end.is_none_or(|e| k <= e)
    }

    /// The content of window `k`: the term itself, or the placed child.
    pub fn instance(&self, k: u64) -> Piece {
        let t = self.term(k);
        match &self.child {
            None => Piece::Point(t),
            Some(tpl) => Piece::Cluster(tpl.affine(&self.window(k), &t)),
        }
    }

    /// Image under `x -> alpha * x + beta`, `alpha != 0`.
    pub fn affine(&self, alpha: &Rational, beta: &Rational) -> Cluster {
        let scale = alpha.abs();
        let negative = alpha.is_negative();
        Cluster {
            limit: alpha * &self.limit + beta,
            side: if negative {
                self.side.flip()
            } else {
                self.side
            },
            rule: self.rule.scaled(&scale),
            start: self.start,
            end: self.end,
            include_limit: self.include_limit,
            child: self.child.as_ref().map(|t| {
                Box::new(if negative {
                    t.affine(&-rational::one(), &rational::zero())
                } else {
                    (**t).clone()
                })
            }),
        }
    }

    /// Distance from the limit in the direction of approach.
    fn along(&self, x: &Rational) -> Rational {
        match self.side {
            Side::Above => x - &self.limit,
            Side::Below => &self.limit - x,
        }
    }

    /// Indices whose window could contain a point at directed offset `d > 0`.
    fn candidates(&self, d: &Rational) -> Vec<u64> {
        let mut out = Vec::with_capacity(2);
        if let Some(k) = self.rule.first_offset_below(d, false, self.start) {
            if k > self.start {
                out.push(k - 1);
            }
            out.push(k);
        }
        out.retain(|&k| self.contains_index(k));
        out
    }

    pub fn member(&self, x: &Rational) -> bool {
        let d = self.along(x);
        if d.is_zero() {
            return self.include_limit && self.end.is_none();
        }
        if d.is_negative() {
            return false;
        }
        self.candidates(&d)
            .into_iter()
            .any(|k| match self.instance(k) {
                Piece::Point(t) => &t == x,
                Piece::Cluster(c) => {
                    let off = self.offset(k);
                    (&d - &off).abs() < self.window(k) && c.member(x)
                }
            })
    }

    /// Exact infimum and supremum.
    pub fn bounds(&self) -> (Rational, Rational) {
        let near = self.start;
        let (far_lo, far_hi) = piece_bounds(&self.instance(near));
        match self.end {
            None => match self.side {
                Side::Above => (self.limit.clone(), far_hi),
                Side::Below => (far_lo, self.limit.clone()),
            },
            Some(e) => {
                let (last_lo, last_hi) = piece_bounds(&self.instance(e));
                match self.side {
                    Side::Above => (last_lo, far_hi),
                    Side::Below => (far_lo, last_hi),
                }
            }
        }
    }

    /// Closed hull `[inf, sup]`.
    pub fn hull(&self) -> Interval {
        let (lo, hi) = self.bounds();
        Interval::closed(lo, hi)
    }

    pub fn closure(&self) -> Cluster {
        Cluster {
            include_limit: self.end.is_none(),
            child: self.child.as_ref().map(|t| Box::new(t.closure())),
            ..self.clone()
        }
    }

    pub fn is_closed(&self) -> bool {
        (self.end.is_some() || self.include_limit)
            && self.child.as_ref().is_none_or(|t| t.is_closed())
    }

    /// Structural derived set.
    pub fn derived(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        let anchors = match self.child.as_ref().map(|t| t.derived_template()) {
            None | Some(TemplateDerived::Empty) => None,
            Some(TemplateDerived::Origin) => Some(None),
            Some(TemplateDerived::Cluster(t)) => Some(Some(t)),
        };
        match anchors {
            Some(child) => out.push(Piece::Cluster(Cluster {
                include_limit: self.end.is_none(),
                child,
                ..self.clone()
            })),
            None => {
                if self.end.is_none() {
                    out.push(Piece::Point(self.limit.clone()));
                }
            }
        }
        out
    }

    fn derived_template(&self) -> TemplateDerived {
        let mut pieces = self.derived();
        match pieces.len() {
            0 => TemplateDerived::Empty,
            _ => match pieces.remove(0) {
                Piece::Point(_) => TemplateDerived::Origin,
                Piece::Cluster(c) => TemplateDerived::Cluster(Box::new(c)),
            },
        }
    }

    /// All pieces of the index range `lo..=hi` (or `lo..` when `hi` is
    /// `None`), expanded when small, otherwise kept as a ranged cluster.
    /// The limit is never included.
    pub(crate) fn range_pieces(&self, lo: u64, hi: Option<u64>) -> Vec<Piece> {
        match hi {
            Some(h) if h < lo => Vec::new(),
            Some(h) if h - lo < EXPAND_LIMIT => (lo..=h).map(|k| self.instance(k)).collect(),
            _ => vec![Piece::Cluster(Cluster {
                start: lo,
                end: hi,
                include_limit: false,
                ..self.clone()
            })],
        }
    }

    /// Enumerates every point of a finite cluster.
    pub fn finite_points(&self) -> Result<Vec<Rational>> {
        let Some(end) = self.end else {
            return Err(Error::NotFinite);
        };
        let mut out = Vec::new();
        for k in self.start..=end {
            match self.instance(k) {
                Piece::Point(p) => out.push(p),
                Piece::Cluster(c) => out.extend(c.finite_points()?),
            }
        }
        Ok(out)
    }

    /// Cuts the cluster by an interval into the pieces inside and outside it.
    pub fn split(&self, iv: &Interval) -> (Vec<Piece>, Vec<Piece>) {
        let mut inside = Vec::new();
        let mut outside = Vec::new();

        // The interval in directed-offset coordinates.
        let (d_lo, d_hi) = match self.side {
            Side::Above => (self.along(&iv.lo), self.along(&iv.hi)),
            Side::Below => (self.along(&iv.hi), self.along(&iv.lo)),
        };
        let mut special: Vec<u64> = Vec::new();
        for p in [&d_lo, &d_hi] {
            if p.is_positive() {
                special.extend(self.candidates(p));
            }
        }
        special.sort_unstable();
        special.dedup();

        let contains_offset = |k: u64| iv.contains(&self.term(k));
        let push_range =
            |lo: u64, hi: Option<u64>, inside: &mut Vec<Piece>, outside: &mut Vec<Piece>| {
                if matches!(hi, Some(h) if h < lo) {
                    return;
                }
                let target = if contains_offset(lo) { inside } else { outside };
                target.extend(self.range_pieces(lo, hi));
            };

        let mut cursor = self.start;
        for &k in &special {
            if k > cursor {
                push_range(cursor, Some(k - 1), &mut inside, &mut outside);
            }
            match self.instance(k) {
                Piece::Point(p) => {
                    if iv.contains(&p) {
                        inside.push(Piece::Point(p));
                    } else {
                        outside.push(Piece::Point(p));
                    }
                }
                Piece::Cluster(c) => {
                    let (i, o) = c.split(iv);
                    inside.extend(i);
                    outside.extend(o);
                }
            }
            cursor = k + 1;
        }
        match self.end {
            Some(e) => push_range(cursor, Some(e), &mut inside, &mut outside),
            None => push_range(cursor, None, &mut inside, &mut outside),
        }

        if self.include_limit && self.end.is_none() {
            let lim = Piece::Point(self.limit.clone());
            if iv.contains(&self.limit) {
                inside.push(lim);
            } else {
                outside.push(lim);
            }
        }
        (inside, outside)
    }

    /// Removes a single point.
    pub fn remove_point(&self, x: &Rational) -> Vec<Piece> {
        if !self.member(x) {
            return vec![Piece::Cluster(self.clone())];
        }
        let (inside, outside) = self.split(&Interval::closed(x.clone(), x.clone()));
        let mut out = outside;
        for piece in inside {
            match piece {
                Piece::Point(_) => {}
                // a child instance that contained the point
                Piece::Cluster(c) => out.extend(c.remove_point(x)),
            }
        }
        out
    }

    /// Whether two clusters enumerate the same terms per index.
    pub(crate) fn same_family(&self, other: &Cluster) -> bool {
        self.limit == other.limit
            && self.side == other.side
            && self.rule == other.rule
            && self.child == other.child
    }
}

enum TemplateDerived {
    Empty,
    Origin,
    Cluster(Box<Cluster>),
}

pub(crate) fn piece_bounds(p: &Piece) -> (Rational, Rational) {
    match p {
        Piece::Point(x) => (x.clone(), x.clone()),
        Piece::Cluster(c) => c.bounds(),
    }
}

impl fmt::Display for Cluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seq(limit={}, rule={}, from={}",
            rational::fmt(&self.limit),
            self.rule,
            self.start
        )?;
        if let Some(e) = self.end {
            write!(f, ", to={e}")?;
        }
        if self.side == Side::Below {
            write!(f, ", side=below")?;
        }
        if self.include_limit {
            write!(f, ", with_limit")?;
        }
        if let Some(t) = &self.child {
            write!(f, ", child={t}")?;
        }
        write!(f, ")")
    }
}
