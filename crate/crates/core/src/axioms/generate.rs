//! Seeded generators of sets, pairs, chains and Hausdorff-convergent families.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactset::{Cluster, Interval, RealSet, Rule, Side};
use crate::means::{self, Mean};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub max_intervals: usize,
    pub max_points: usize,
    pub max_clusters: usize,
    /// Coordinates are drawn from `[-range, range]`.
    pub range: i64,
    pub max_den: i64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            max_intervals: 3,
            max_points: 3,
            max_clusters: 2,
            range: 10,
            max_den: 8,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_intervals == 0 || self.max_points == 0 || self.max_clusters == 0 {
            return Err(Error::BadConfig("component counts must be positive".into()));
        }
        if self.range <= 0 || self.max_den <= 0 {
            return Err(Error::BadConfig(
                "range and denominator bound must be positive".into(),
            ));
        }
        if self.max_intervals > 64 || self.max_points > 256 || self.max_clusters > 8 {
            return Err(Error::BadConfig("component counts are too large".into()));
        }
        Ok(())
    }
}

/// Shape of the sets a mean accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    /// Positive Lebesgue measure.
    Measure,
    /// Finite sets.
    Finite,
    /// Finite sets and sets with accumulation points but no intervals.
    Accumulating,
    /// `cl(H − H′) = H`: points and clusters.
    Isolated,
    /// Interval unions with points and clusters.
    Bounded,
    /// Interval unions with points, no clusters.
    Plain,
}

impl Class {
    pub fn of(k: &Mean) -> Class {
        match k {
            Mean::Avg1 | Mean::MMu(_) | Mean::AvgF(_) => Class::Measure,
            Mean::Amean => Class::Finite,
            Mean::MAcc => Class::Accumulating,
            Mean::Iso(_) | Mean::MIso(_) => Class::Isolated,
            Mean::Eds(_) | Mean::AvgFat(_) => Class::Bounded,
            Mean::LAvg(_) | Mean::MEds(_) => Class::Plain,
            Mean::Transform(inner, _) => Class::of(inner),
        }
    }
}

/// Random source for one trial. Streams are independent per trial index.
pub struct Sampler {
    rng: ChaCha8Rng,
    cfg: GeneratorConfig,
    lo: Rational,
    hi: Rational,
}

impl Sampler {
    pub fn new(cfg: &GeneratorConfig, seed: u64, stream: u64) -> Result<Sampler> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let r = rational::int(cfg.range);
        Ok(Sampler {
            rng,
            cfg: cfg.clone(),
            lo: -r.clone(),
            hi: r,
        })
    }

    /// Restricts coordinates to the domain of `k` (transforms such as
    /// `square` or `log` need positive inputs).
    pub fn for_mean(mut self, k: &Mean) -> Sampler {
        if let Mean::MMu(m) = k {
            if let (Some(first), Some(last)) = (m.pieces().first(), m.pieces().last()) {
                self.lo = first.0.lo.clone();
                self.hi = last.0.hi.clone();
            }
            return self;
        }
        if let Some(f) = transform_of(k) {
            let zero = RealSet::point(rational::zero());
            let span = &self.hi - &self.lo;
            let floor = if f.contains_set(&zero) {
                rational::zero()
            } else {
                rational::one()
            };
            self.lo = floor.clone();
            self.hi = floor + span;
        }
        self
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n.max(1))
    }

    /// Uniform rational in `[lo, hi]` with denominator at most `max_den`.
    pub fn rational_in(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let den = self.rng.gen_range(1..=self.cfg.max_den);
        let d = rational::int(den);
        let a = rational::ceil_int(&(lo * &d));
        let b = rational::floor_int(&(hi * &d));
        if a > b {
            return (lo + hi) * rational::half();
        }
        let span: i64 = (&b - &a).try_into().unwrap_or(i64::MAX);
        let off = self.rng.gen_range(0..=span);
        Rational::new(a + off, den.into())
    }

    pub fn positive(&mut self, max: &Rational) -> Rational {
        loop {
            let x = self.rational_in(&rational::zero(), max);
            if x.is_positive() {
                return x;
            }
        }
    }

    fn distinct_sorted(&mut self, n: usize) -> Vec<Rational> {
        let (lo, hi) = (self.lo.clone(), self.hi.clone());
        let mut xs: Vec<Rational> = Vec::with_capacity(n);
        while xs.len() < n {
            let x = self.rational_in(&lo, &hi);
            if !xs.contains(&x) {
                xs.push(x);
            }
        }
        xs.sort();
        xs
    }

    /// Union of up to `max_intervals` intervals with random endpoint types.
    pub fn interval_union(&mut self) -> RealSet {
        let k = 1 + self.below(self.cfg.max_intervals);
        let ends = self.distinct_sorted(2 * k);
        let ivs = ends
            .chunks(2)
            .map(|w| {
                let (a, b) = (self.coin(), self.coin());
                Interval::new(w[0].clone(), w[1].clone(), a, b).expect("distinct sorted endpoints")
            })
            .collect::<Vec<_>>();
        RealSet::build(ivs, Vec::new(), Vec::new())
    }

    /// Closed interval union.
    pub fn closed_union(&mut self) -> RealSet {
        self.interval_union().closure()
    }

    pub fn finite_set(&mut self, min: usize) -> RealSet {
        let n = min + self.below(self.cfg.max_points + 1);
        RealSet::points(self.distinct_sorted(n.max(1)))
    }

    /// Adds a few isolated points, some outside the hull.
    pub fn with_satellites(&mut self, h: &RealSet) -> RealSet {
        let n = self.below(self.cfg.max_points + 1);
        let (lo, hi) = (&self.lo - rational::int(2), &self.hi + rational::int(2));
        let pts: Vec<Rational> = (0..n).map(|_| self.rational_in(&lo, &hi)).collect();
        h.union(&RealSet::points(pts))
    }

    /// A harmonic or geometric cluster around a random limit.
    pub fn cluster(&mut self) -> Cluster {
        let margin = rational::one();
        let (lo, hi) = (&self.lo + &margin, &self.hi - &margin);
        let limit = self.rational_in(&lo, &hi);
        let side = if self.coin() {
            Side::Above
        } else {
            Side::Below
        };
        let c = self.positive(&rational::one());
        let rule = if self.coin() {
            Rule::harmonic(c)
        } else {
            let q = rational::rat(1 + self.below(3) as i64, 4);
            Rule::geometric(c, q)
        };
        let start = 1 + self.below(3) as u64;
        let with_limit = self.coin();
        Cluster::new(limit, side, rule, start, with_limit).expect("valid cluster parameters")
    }

    /// Points and clusters, level one.
    pub fn level1_set(&mut self) -> RealSet {
        let k = 1 + self.below(self.cfg.max_clusters);
        let mut h = RealSet::empty();
        for _ in 0..k {
            h = h.union(&RealSet::cluster(self.cluster()));
        }
        if self.coin() {
            h = h.union(&self.finite_set(1));
        }
        h
    }

    pub fn set_for(&mut self, class: Class) -> RealSet {
        match class {
            Class::Measure => {
                let h = self.interval_union();
                match self.below(4) {
                    0 => h,
                    1 => {
                        let c = RealSet::cluster(self.cluster());
                        h.union(&c)
                    }
                    _ => self.with_satellites(&h),
                }
            }
            Class::Finite => self.finite_set(1),
            Class::Accumulating => {
                if self.below(4) == 0 {
                    self.finite_set(2)
                } else {
                    self.level1_set()
                }
            }
            Class::Isolated => self.level1_set(),
            Class::Bounded => match self.below(4) {
                0 => self.finite_set(2),
                1 => self.level1_set(),
                _ => {
                    let h = self.interval_union();
                    self.with_satellites(&h)
                }
            },
            Class::Plain => {
                if self.below(4) == 0 {
                    self.finite_set(2)
                } else {
                    let h = self.interval_union();
                    self.with_satellites(&h)
                }
            }
        }
    }

    /// Maps `h` affinely onto `[lo, hi]` (by its bounds).
    pub fn place(&mut self, h: &RealSet, lo: &Rational, hi: &Rational) -> RealSet {
        let Ok((a, b)) = h.bounds() else {
            return h.clone();
        };
        if a == b {
            return RealSet::point((lo + hi) * rational::half());
        }
        let alpha = (hi - lo) / (&b - &a);
        let beta = lo - &alpha * &a;
        h.affine(&alpha, &beta).expect("positive scale")
    }

    /// A second set disjoint from `h` of the same class.
    pub fn disjoint_from(&mut self, h: &RealSet, class: Class) -> RealSet {
        let other = self.set_for(class);
        match other.diff(h) {
            Ok(d) if fits(&d, class) => d,
            _ => {
                let lo = self.right_of(h);
                let hi = &lo + rational::int(1 + self.cfg.range);
                self.place(&other, &lo, &hi)
            }
        }
    }

    /// `H₂` disjoint from `H₁` with `Avg¹(H₂) = Avg¹(H₁)`, solved exactly:
    /// either two intervals placed symmetrically about the mean outside the
    /// hull, or a left interval and a right interval whose position solves
    /// the moment equation.
    pub fn equal_mean_partner(&mut self, h1: &RealSet) -> Result<RealSet> {
        let a = means::avg1(h1)?;
        let (inf, sup) = h1.bounds()?;
        let reach = rational::max(&(&a - &inf), &(&sup - &a));
        let one = rational::one();
        if self.coin() {
            let r1 = &reach + self.positive(&one);
            let r2 = &r1 + self.positive(&one);
            let left = Interval::new(&a - &r2, &a - &r1, self.coin(), self.coin())?;
            let right = Interval::new(&a + &r1, &a + &r2, self.coin(), self.coin())?;
            return Ok(RealSet::interval(left).union(&RealSet::interval(right)));
        }
        let w1 = self.positive(&one);
        let w2 = self.positive(&one);
        let mut p = &inf - &w1 - self.positive(&one);
        loop {
            // w1 (p + w1/2) + w2 (q + w2/2) = a (w1 + w2)
            let q = (&a * (&w1 + &w2) - &w1 * (&p + &w1 * rational::half())) / &w2
                - &w2 * rational::half();
            if q > sup {
                let left = Interval::closed(p.clone(), &p + &w1);
                let right = Interval::closed(q.clone(), &q + &w2);
                return Ok(RealSet::interval(left).union(&RealSet::interval(right)));
            }
            p -= &reach + &one;
        }
    }

    /// Finite `H₂` disjoint from finite `H₁` with `𝒜(H₂) = 𝒜(H₁)`.
    pub fn equal_amean_partner(&mut self, h1: &RealSet) -> Result<RealSet> {
        let a = means::amean(h1)?;
        let (inf, sup) = h1.bounds()?;
        let reach = rational::max(&(&a - &inf), &(&sup - &a));
        let n = 1 + self.below(3);
        let mut pts = Vec::new();
        for _ in 0..n {
            let r = &reach + self.positive(&rational::int(3));
            pts.push(&a - &r);
            pts.push(&a + &r);
        }
        Ok(RealSet::points(pts))
    }

    /// A point of interest of `h`: an endpoint, a point, a cluster limit or
    /// a random rational in the hull.
    pub fn probe_point(&mut self, h: &RealSet) -> Rational {
        let mut xs: Vec<Rational> = h.isolated_points().to_vec();
        for iv in h.intervals() {
            xs.push(iv.lo.clone());
            xs.push(iv.hi.clone());
        }
        xs.extend(h.clusters().iter().map(|c| c.limit.clone()));
        match h.bounds() {
            Ok((lo, hi)) if xs.is_empty() || self.coin() => self.rational_in(&lo, &hi),
            _ if xs.is_empty() => rational::zero(),
            _ => {
                let i = self.below(xs.len());
                xs.swap_remove(i)
            }
        }
    }

    /// A point strictly to the right of `h`.
    pub fn right_of(&mut self, h: &RealSet) -> Rational {
        let sup = h.bounds().map(|b| b.1).unwrap_or_else(|_| rational::zero());
        sup + self.positive(&rational::int(2))
    }
}

fn transform_of(k: &Mean) -> Option<&means::MonotoneFunc> {
    match k {
        Mean::AvgF(f) | Mean::Transform(_, f) => Some(f),
        _ => None,
    }
}

/// Decreasing chain `H_j = A ∪ P_j` where `P_j` is `[c, c + 2^-j]`,
/// `(c, c + 2^-j)`, or (for point sets) the geometric tail
/// `{c + 2^-k : k ≥ j}` with or without `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedChain {
    pub base: RealSet,
    pub anchor: Rational,
    pub compact: bool,
    pub tail: bool,
}

impl NestedChain {
    pub fn member(&self, j: u32) -> RealSet {
        let c = &self.anchor;
        let piece = if self.tail {
            let rule = Rule::geometric(rational::one(), rational::half());
            let cl = Cluster::new(c.clone(), Side::Above, rule, j.max(1) as u64, self.compact)
                .expect("valid tail");
            RealSet::cluster(cl)
        } else {
            let top = c + rational::pow2_neg(j);
            RealSet::interval(if self.compact {
                Interval::closed(c.clone(), top)
            } else {
                Interval::open(c.clone(), top)
            })
        };
        self.base.union(&piece)
    }

    pub fn intersection(&self) -> RealSet {
        if self.compact {
            self.base.union(&RealSet::point(self.anchor.clone()))
        } else {
            self.base.clone()
        }
    }
}

/// Pairwise disjoint pieces `H_i` to the right of `A`: the intervals
/// `[c + 2^-i, c + 2^-(i-1))` (union `(c, c + 1)`) or the points
/// `c + 1/i` (union the harmonic cluster at `c`).
#[derive(Clone, Debug, PartialEq)]
pub struct DisjointSequence {
    pub base: RealSet,
    pub anchor: Rational,
    pub points: bool,
}

impl DisjointSequence {
    pub fn piece(&self, i: u32) -> RealSet {
        let c = &self.anchor;
        if self.points {
            RealSet::point(c + rational::one() / rational::uint(i as u64))
        } else {
            let lo = c + rational::pow2_neg(i);
            let hi = c + rational::pow2_neg(i - 1);
            RealSet::interval(Interval::new(lo, hi, true, false).expect("ordered"))
        }
    }

    /// `⋃_{i ≤ n} H_i`.
    pub fn partial(&self, n: u32) -> RealSet {
        let c = &self.anchor;
        if self.points {
            let cl = Cluster::harmonic(c.clone(), rational::one(), 1)
                .and_then(|cl| cl.with_end(n as u64));
            RealSet::cluster(cl.expect("valid cluster"))
        } else {
            let lo = c + rational::pow2_neg(n);
            RealSet::interval(Interval::new(lo, c + rational::one(), true, false).expect("ordered"))
        }
    }

    /// `⋃ H_i`.
    pub fn full(&self) -> RealSet {
        let c = &self.anchor;
        if self.points {
            RealSet::cluster(
                Cluster::harmonic(c.clone(), rational::one(), 1).expect("valid cluster"),
            )
        } else {
            RealSet::interval(Interval::open(c.clone(), c + rational::one()))
        }
    }
}

/// `H_m → H` in the Hausdorff metric: `H + 1/m`, or (with `grid`) the part
/// `[lo, cut]` of the interval number `slot` of `H` replaced by its grid
/// of `m + 1` points.
#[derive(Clone, Debug, PartialEq)]
pub struct HausdorffFamily {
    pub limit: RealSet,
    pub grid: Option<(usize, Rational)>,
}

impl HausdorffFamily {
    pub fn member(&self, m: u64) -> Result<RealSet> {
        let step = rational::one() / rational::uint(m);
        match &self.grid {
            None => Ok(self.limit.translate(&step)),
            Some((slot, cut)) => {
                let iv =
                    self.limit.intervals().get(*slot).ok_or_else(|| {
                        Error::BadParameters(format!("no interval number {slot}"))
                    })?;
                if cut <= &iv.lo || cut > &iv.hi {
                    return Err(Error::BadParameters("grid cut outside its interval".into()));
                }
                let rest = self
                    .limit
                    .diff(&RealSet::closed(iv.lo.clone(), cut.clone()))?;
                let w = (cut - &iv.lo) * &step;
                let grid = (0..=m).map(|k| &iv.lo + &w * rational::uint(k));
                Ok(rest.union(&RealSet::points(grid)))
            }
        }
    }
}

/// Deterministic stream of random sets of one class.
pub fn generators(
    cfg: &GeneratorConfig,
    class: Class,
    seed: u64,
) -> Result<impl Iterator<Item = RealSet>> {
    cfg.validate()?;
    let cfg = cfg.clone();
    Ok((0u64..).map(move |t| {
        Sampler::new(&cfg, seed, t)
            .expect("validated")
            .set_for(class)
    }))
}

/// Whether `h` has the shape its class requires.
pub fn fits(h: &RealSet, class: Class) -> bool {
    match class {
        Class::Measure => means::avg1(h).is_ok(),
        Class::Finite => h.is_finite() && !h.is_empty(),
        Class::Accumulating | Class::Isolated => h.intervals().is_empty() && !h.is_empty(),
        Class::Bounded => !h.is_empty(),
        Class::Plain => h.clusters().is_empty() && !h.is_empty(),
    }
}
