use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::generate::{Class, DisjointSequence, HausdorffFamily, NestedChain, Sampler};
use super::PropertyId;
use crate::analysis;
use crate::error::{Error, Result};
use crate::exactset::{Interval, RealSet};
use crate::means::{default_tolerance, Mean, MeanValue};
use crate::rational::{self, Rational};

/// Named inputs of one check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Case {
    pub sets: Vec<(String, RealSet)>,
    pub scalars: Vec<(String, Rational)>,
}

impl Case {
    pub fn new() -> Case {
        Case::default()
    }

    pub fn set(mut self, name: &str, h: RealSet) -> Case {
        self.sets.push((name.into(), h));
        self
    }

    pub fn scalar(mut self, name: &str, x: Rational) -> Case {
        self.scalars.push((name.into(), x));
        self
    }

    pub fn flag(self, name: &str, b: bool) -> Case {
        self.scalar(name, if b { rational::one() } else { rational::zero() })
    }

    pub fn get(&self, name: &str) -> Result<&RealSet> {
        self.sets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, h)| h)
            .ok_or_else(|| Error::BadParameters(format!("case has no set {name}")))
    }

    pub fn num(&self, name: &str) -> Result<&Rational> {
        self.scalars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, x)| x)
            .ok_or_else(|| Error::BadParameters(format!("case has no scalar {name}")))
    }

    fn is(&self, name: &str) -> Result<bool> {
        Ok(!self.num(name)?.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Holds,
    /// The premise did not apply.
    Vacuous,
    Fails {
        values: Vec<(String, MeanValue)>,
        detail: String,
    },
}

const NEAR: u32 = 20;
const FAR: u32 = 40;

fn eta() -> Rational {
    rational::pow2_neg(40)
}

fn jump_threshold() -> Rational {
    rational::pow2_neg(20)
}

/// Evaluations recorded under readable names.
struct Recorder<'a> {
    k: &'a Mean,
    values: Vec<(String, MeanValue)>,
}

impl<'a> Recorder<'a> {
    fn new(k: &'a Mean) -> Self {
        Recorder {
            k,
            values: Vec::new(),
        }
    }

    fn eval(&mut self, name: &str, h: &RealSet) -> Result<MeanValue> {
        let v = self.k.evaluate(h)?;
        self.values.push((format!("K({name})"), v.clone()));
        Ok(v)
    }

    fn fail(self, detail: impl Into<String>) -> Outcome {
        Outcome::Fails {
            values: self.values,
            detail: detail.into(),
        }
    }
}

fn both_decidable(a: &MeanValue, b: &MeanValue) -> bool {
    match (a, b) {
        (MeanValue::Approx(_), _) | (_, MeanValue::Approx(_)) => false,
        (MeanValue::Preimage { func: f, .. }, MeanValue::Preimage { func: g, .. }) => f == g,
        _ => true,
    }
}

/// Exact order when decidable. Otherwise `Less`/`Greater` need enclosures
/// separated by more than the tolerance and `Equal` means within it.
fn order(a: &MeanValue, b: &MeanValue) -> Option<Ordering> {
    if both_decidable(a, b) {
        return a.compare(b);
    }
    let tol = default_tolerance();
    let (x, y) = (a.enclosure(), b.enclosure());
    if &x.hi + &tol < y.lo {
        Some(Ordering::Less)
    } else if &y.hi + &tol < x.lo {
        Some(Ordering::Greater)
    } else if a.distance(b) <= tol {
        Some(Ordering::Equal)
    } else {
        None
    }
}

fn le(a: &MeanValue, b: &MeanValue) -> Option<bool> {
    order(a, b).map(|o| o != Ordering::Greater)
}

fn same(a: &MeanValue, b: &MeanValue) -> Option<bool> {
    order(a, b).map(|o| o == Ordering::Equal)
}

/// Decidably `v < r`.
fn below(v: &MeanValue, r: &Rational) -> bool {
    if v.is_exact() {
        v.cmp_rational(r) == Some(Ordering::Less)
    } else {
        v.enclosure().hi + default_tolerance() < *r
    }
}

/// Decidably `v > r`.
fn above(v: &MeanValue, r: &Rational) -> bool {
    if v.is_exact() {
        v.cmp_rational(r) == Some(Ordering::Greater)
    } else {
        v.enclosure().lo - default_tolerance() > *r
    }
}

/// Bounds on `|a − b|`, exact when both are rational.
fn abs_gap(a: &MeanValue, b: &MeanValue) -> (Rational, Rational) {
    if let (MeanValue::Exact(x), MeanValue::Exact(y)) = (a, b) {
        let d = rational::abs(&(x - y));
        return (d.clone(), d);
    }
    let (x, y) = (a.enclosure(), b.enclosure());
    let lo = rational::max(
        &rational::max(&(&x.lo - &y.hi), &(&y.lo - &x.hi)),
        &rational::zero(),
    );
    let hi = rational::max(&(&x.hi - &y.lo), &(&y.hi - &x.lo));
    (lo, hi)
}

/// Bounds on `α·v + β`.
fn affine_bounds(v: &MeanValue, alpha: &Rational, beta: &Rational) -> MeanValue {
    match v {
        MeanValue::Exact(x) => MeanValue::Exact(alpha * x + beta),
        _ => {
            let e = v.enclosure();
            let (p, q) = (alpha * &e.lo + beta, alpha * &e.hi + beta);
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            MeanValue::Approx(crate::enclosure::Enclosure::new(lo, hi))
        }
    }
}

fn disjoint(a: &RealSet, b: &RealSet) -> Result<bool> {
    Ok(a.intersect(b)?.is_empty())
}

/// Draws a random case for `prop` in the domain shape of `k`.
pub fn sample(prop: PropertyId, k: &Mean, s: &mut Sampler) -> Result<Case> {
    use PropertyId::*;
    let class = Class::of(k);
    let case = match prop {
        Internal | StrictInternal | Closed | Accumulated | SelfAccumulated => {
            Case::new().set("H", s.set_for(class))
        }
        Monotone => {
            let (a, b) = (s.set_for(class), s.set_for(class));
            let (lo, hi) = (s.lo().clone(), s.hi().clone());
            let m = s.rational_in(&(&lo + rational::one()), &(&hi - rational::one()));
            let gap = if s.coin() {
                rational::zero()
            } else {
                s.positive(&rational::half())
            };
            let h1 = s.place(&a, &lo, &(&m - &gap));
            let h2 = s.place(&b, &m, &hi);
            Case::new().set("H1", h1).set("H2", h2)
        }
        DisjointMonotone => {
            let h1 = s.set_for(class);
            let h2 = s.disjoint_from(&h1, class);
            Case::new().set("H1", h1).set("H2", h2)
        }
        UnionMonotone => {
            let a = s.set_for(class);
            let b = s.set_for(class);
            let c = s.disjoint_from(&b, class);
            Case::new().set("A", a).set("B", b).set("C", c)
        }
        MeanMonotone => {
            let h = s.set_for(class);
            let v = k.evaluate(&h)?.enclosure();
            let r = rational::int(s.below(4) as i64 + 1);
            let (a, b) = (s.set_for(class), s.set_for(class));
            let k1 = s.place(&a, &(&v.lo - &r), &v.lo);
            let k2 = s.place(&b, &v.hi, &(&v.hi + &r));
            Case::new().set("H", h).set("K1", k1).set("K2", k2)
        }
        EquiMonotone => {
            let h1 = s.set_for(class);
            let h2 = match class {
                Class::Measure => s.equal_mean_partner(&h1)?,
                Class::Finite => s.equal_amean_partner(&h1)?,
                _ => s.disjoint_from(&h1, class),
            };
            Case::new().set("H1", h1).set("H2", h2)
        }
        SliceContinuous | PointContinuous => {
            let h = s.set_for(class);
            let x = s.probe_point(&h);
            Case::new().set("H", h).scalar("x", x)
        }
        CantorContinuous | CantorContinuousCompact => {
            let compact = prop == CantorContinuousCompact || s.coin();
            let a = s.set_for(class);
            let a = if compact { a.closure() } else { a };
            let tail = match class {
                Class::Isolated | Class::Accumulating => true,
                Class::Bounded => s.coin(),
                _ => false,
            };
            let c = s.right_of(&a);
            Case::new()
                .set("A", a)
                .scalar("c", c)
                .flag("compact", compact)
                .flag("tail", tail)
        }
        UCantorContinuous | UBoundedInfinite => {
            let a = s.set_for(class);
            let points = match class {
                Class::Isolated | Class::Accumulating => true,
                Class::Bounded => s.coin(),
                _ => false,
            };
            let c = s.right_of(&a);
            Case::new()
                .set("H", a)
                .scalar("c", c)
                .flag("points", points)
        }
        UBounded => {
            let h = s.set_for(class);
            let h1 = s.set_for(class);
            let h2 = s.disjoint_from(&h1, class);
            Case::new().set("H", h).set("H1", h1).set("H2", h2)
        }
        UBoundedOverlap => {
            let h = s.set_for(class);
            let h1 = s.set_for(class);
            let x = s.probe_point(&h1);
            let r = s.positive(&rational::one());
            let shared = h1.intersect_interval(&Interval::closed(&x - &r, &x + &r));
            let h2 = s.set_for(class).union(&shared);
            Case::new().set("H", h).set("H1", h1).set("H2", h2)
        }
        UBoundedNFold => {
            let n = 2 + s.below(5);
            let mut case = Case::new().set("H", s.set_for(class));
            let mut used = RealSet::empty();
            for i in 1..=n {
                let hi = if i == 1 {
                    s.set_for(class)
                } else {
                    s.disjoint_from(&used, class)
                };
                used = used.union(&hi);
                case = case.set(&format!("H{i}"), hi);
            }
            case
        }
        HausdorffContinuous => {
            let h = s.set_for(class).closure();
            let grid = if !h.intervals().is_empty() && s.coin() {
                Some(s.below(h.intervals().len()))
            } else {
                None
            };
            let slot = grid.map_or(-1, |g| g as i64);
            let cut = grid.map_or_else(rational::zero, |g| h.intervals()[g].hi.clone());
            Case::new()
                .set("H", h)
                .scalar("grid", rational::int(slot))
                .scalar("cut", cut)
        }
        FiniteIndependent => {
            let h = s.set_for(class);
            let mut pts: Vec<Rational> = Vec::new();
            for _ in 0..1 + s.below(2) {
                pts.push(s.probe_point(&h));
            }
            Case::new().set("H", h).set("V", RealSet::points(pts))
        }
        Convex => {
            let h = s.set_for(class);
            let other = s.set_for(class);
            let (lo, hi) = (s.lo().clone(), s.hi().clone());
            let a = s.rational_in(&lo, &hi);
            let b = s.rational_in(&lo, &hi);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let l = s.place(&other, &a, &(&b + rational::one()));
            Case::new().set("H", h).set("L", l)
        }
        TranslationInvariant => {
            let h = s.set_for(class);
            let r = rational::int(4);
            let t = s.rational_in(&-r.clone(), &r);
            Case::new().set("H", h).scalar("t", t)
        }
        ReflectionInvariant => {
            let h = s.set_for(class);
            let x = s.probe_point(&h);
            Case::new().set("H", h).scalar("s", x)
        }
        Homogeneous => {
            let h = s.set_for(class);
            let alpha = s.positive(&rational::int(3));
            Case::new().set("H", h).scalar("alpha", alpha)
        }
    };
    Ok(case)
}

/// Decides one case. Errors mean a value was undefined; callers count
/// them as vacuous.
pub fn judge(prop: PropertyId, k: &Mean, case: &Case) -> Result<Outcome> {
    use PropertyId::*;
    let mut r = Recorder::new(k);
    match prop {
        Internal => {
            let h = case.get("H")?;
            let v = r.eval("H", h)?;
            let (lo, hi) = h.bounds()?;
            if below(&v, &lo) || above(&v, &hi) {
                return Ok(r.fail(format!(
                    "value outside [inf H, sup H] = [{}, {}]",
                    rational::fmt(&lo),
                    rational::fmt(&hi)
                )));
            }
            Ok(Outcome::Holds)
        }
        StrictInternal => {
            let h = case.get("H")?;
            let Ok((lo, hi)) = h.acc_bounds() else {
                return Ok(Outcome::Vacuous);
            };
            let v = r.eval("H", h)?;
            if below(&v, &lo) || above(&v, &hi) {
                return Ok(r.fail(format!(
                    "value outside [inf H′, sup H′] = [{}, {}]",
                    rational::fmt(&lo),
                    rational::fmt(&hi)
                )));
            }
            Ok(Outcome::Holds)
        }
        Monotone => {
            let (h1, h2) = (case.get("H1")?, case.get("H2")?);
            if h1.bounds()?.1 > h2.bounds()?.0 {
                return Ok(Outcome::Vacuous);
            }
            ordered_union(r, h1, h2)
        }
        DisjointMonotone => {
            let (h1, h2) = (case.get("H1")?, case.get("H2")?);
            if !disjoint(h1, h2)? {
                return Ok(Outcome::Vacuous);
            }
            let a = k.evaluate(h1)?;
            let b = k.evaluate(h2)?;
            match le(&a, &b) {
                Some(true) => ordered_union(r, h1, h2),
                Some(false) => ordered_union(r, h2, h1),
                None => Ok(Outcome::Vacuous),
            }
        }
        UnionMonotone => {
            let (a, b, c) = (case.get("A")?, case.get("B")?, case.get("C")?);
            if !disjoint(b, c)? {
                return Ok(Outcome::Vacuous);
            }
            let va = r.eval("A", a)?;
            let vab = r.eval("A∪B", &a.union(b))?;
            let vac = r.eval("A∪C", &a.union(c))?;
            let vabc = r.eval("A∪B∪C", &a.union(b).union(c))?;
            if le(&va, &vab) == Some(true)
                && le(&va, &vac) == Some(true)
                && le(&va, &vabc) == Some(false)
            {
                return Ok(r.fail("K(A) ≤ K(A∪B), K(A∪C) but K(A) > K(A∪B∪C)"));
            }
            if le(&vab, &va) == Some(true)
                && le(&vac, &va) == Some(true)
                && le(&vabc, &va) == Some(false)
            {
                return Ok(r.fail("K(A) ≥ K(A∪B), K(A∪C) but K(A) < K(A∪B∪C)"));
            }
            Ok(Outcome::Holds)
        }
        MeanMonotone => {
            let (h, k1, k2) = (case.get("H")?, case.get("K1")?, case.get("K2")?);
            let v = r.eval("H", h)?;
            let sup1 = k1.bounds()?.1;
            let inf2 = k2.bounds()?.0;
            let e = v.enclosure();
            if e.lo < sup1 || e.hi > inf2 {
                return Ok(Outcome::Vacuous);
            }
            let v1 = r.eval("H∪K1", &h.union(k1))?;
            let v2 = r.eval("H∪K2", &h.union(k2))?;
            if le(&v1, &v) == Some(false) || le(&v, &v2) == Some(false) {
                return Ok(r.fail("sup K1 ≤ K(H) ≤ inf K2 but K(H∪K1) ≤ K(H) ≤ K(H∪K2) fails"));
            }
            Ok(Outcome::Holds)
        }
        EquiMonotone => {
            let (h1, h2) = (case.get("H1")?, case.get("H2")?);
            if !disjoint(h1, h2)? {
                return Ok(Outcome::Vacuous);
            }
            let a = r.eval("H1", h1)?;
            let b = r.eval("H2", h2)?;
            let u = r.eval("H1∪H2", &h1.union(h2))?;
            if same(&u, &a) != Some(true) {
                return Ok(Outcome::Vacuous);
            }
            if same(&a, &b) == Some(false) {
                return Ok(r.fail("K(H1∪H2) = K(H1) but K(H1) ≠ K(H2)"));
            }
            Ok(Outcome::Holds)
        }
        SliceContinuous => {
            let (h, x) = (case.get("H")?, case.num("x")?);
            let e = eta();
            let xs = [x - &e, x.clone(), x + &e];
            let mut compared = false;
            for (side, slice) in [
                ("≤", RealSet::slice_le as fn(&RealSet, &Rational) -> RealSet),
                ("≥", RealSet::slice_ge),
            ] {
                let vals: Vec<Option<MeanValue>> =
                    xs.iter().map(|y| k.evaluate(&slice(h, y)).ok()).collect();
                for i in 0..2 {
                    if let (Some(a), Some(b)) = (&vals[i], &vals[i + 1]) {
                        compared = true;
                        if abs_gap(a, b).0 > jump_threshold() {
                            let names = ["x−η", "x", "x+η"];
                            r.values
                                .push((format!("K(H ∩ {{t {side} {}}})", names[i]), a.clone()));
                            r.values
                                .push((format!("K(H ∩ {{t {side} {}}})", names[i + 1]), b.clone()));
                            return Ok(
                                r.fail(format!("slice value jumps at x (η = 2^-40, side {side})"))
                            );
                        }
                    }
                }
            }
            Ok(if compared {
                Outcome::Holds
            } else {
                Outcome::Vacuous
            })
        }
        PointContinuous => {
            let (h, x) = (case.get("H")?, case.num("x")?);
            let v = r.eval("H", h)?;
            let hole = RealSet::interval(Interval::open(x - eta(), x + eta()));
            let w = r.eval("H − S(x,η)", &h.diff(&hole)?)?;
            if abs_gap(&v, &w).0 > jump_threshold() {
                return Ok(r.fail("removing S(x, 2^-40) moves the value by more than 2^-20"));
            }
            Ok(Outcome::Holds)
        }
        CantorContinuous | CantorContinuousCompact => {
            let chain = NestedChain {
                base: case.get("A")?.clone(),
                anchor: case.num("c")?.clone(),
                compact: case.is("compact")?,
                tail: case.is("tail")?,
            };
            if prop == CantorContinuousCompact && !(chain.compact && chain.base.is_closed()) {
                return Ok(Outcome::Vacuous);
            }
            let limit = r.eval("⋂H_j", &chain.intersection())?;
            let near = r.eval(&format!("H_{NEAR}"), &chain.member(NEAR))?;
            let far = r.eval(&format!("H_{FAR}"), &chain.member(FAR))?;
            not_converging(r, &limit, &near, &far, rational::pow2_neg(10))
        }
        UCantorContinuous => {
            let seq = DisjointSequence {
                base: case.get("H")?.clone(),
                anchor: case.num("c")?.clone(),
                points: case.is("points")?,
            };
            let (n1, n2) = if seq.points { (64, 4096) } else { (NEAR, FAR) };
            let limit = r.eval("⋃H_i", &seq.base.union(&seq.full()))?;
            let near = r.eval(
                &format!("⋃_{{i≤{n1}}} H_i"),
                &seq.base.union(&seq.partial(n1)),
            )?;
            let far = r.eval(
                &format!("⋃_{{i≤{n2}}} H_i"),
                &seq.base.union(&seq.partial(n2)),
            )?;
            not_converging(r, &limit, &near, &far, rational::pow2_neg(10))
        }
        UBounded | UBoundedOverlap => {
            let (h, h1, h2) = (case.get("H")?, case.get("H1")?, case.get("H2")?);
            if prop == UBounded && !disjoint(h1, h2)? {
                return Ok(Outcome::Vacuous);
            }
            u_bound(r, h, &[h1.clone(), h2.clone()])
        }
        UBoundedNFold => {
            let h = case.get("H")?;
            let parts: Vec<RealSet> = case
                .sets
                .iter()
                .filter(|(n, _)| n != "H")
                .map(|(_, s)| s.clone())
                .collect();
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    if !disjoint(&parts[i], &parts[j])? {
                        return Ok(Outcome::Vacuous);
                    }
                }
            }
            match u_bound(Recorder::new(k), h, &parts)? {
                Outcome::Fails { values, detail } => {
                    let step = first_failing_step(k, h, &parts);
                    let note = match step {
                        Some(m) => format!("{detail}; pairwise step {m} (union of H1..H{} against H{m}) also fails", m - 1),
                        None => format!("{detail}; no pairwise step fails"),
                    };
                    Ok(Outcome::Fails {
                        values,
                        detail: note,
                    })
                }
                other => Ok(other),
            }
        }
        UBoundedInfinite => {
            let seq = DisjointSequence {
                base: case.get("H")?.clone(),
                anchor: case.num("c")?.clone(),
                points: case.is("points")?,
            };
            let h = &seq.base;
            let base = r.eval("H", h)?;
            let whole = r.eval("H∪⋃H_i", &h.union(&seq.full()))?;
            let lhs = abs_gap(&base, &whole);
            let mut total = (rational::zero(), rational::zero());
            let mut zero_tail = true;
            const PIECES: u32 = 64;
            for i in 1..=PIECES {
                let v = k.evaluate(&h.union(&seq.piece(i)))?;
                let g = abs_gap(&base, &v);
                if i > PIECES - 16 && !(g.1.is_zero() && base.is_exact() && v.is_exact()) {
                    zero_tail = false;
                }
                total.0 += &g.0;
                total.1 += &g.1;
            }
            r.values.push((
                format!("Σ_{{i≤{PIECES}}} |K(H)−K(H∪H_i)| (upper)"),
                MeanValue::Exact(total.1.clone()),
            ));
            if zero_tail && lhs.0 > total.1 {
                return Ok(
                    r.fail("|K(H)−K(H∪⋃H_i)| exceeds the series, whose last 16 terms vanish")
                );
            }
            Ok(Outcome::Holds)
        }
        HausdorffContinuous => {
            let h = case.get("H")?;
            let slot = case.num("grid")?;
            let grid = if slot.is_negative() {
                None
            } else {
                Some((
                    rational::floor_int(slot).try_into().unwrap_or(usize::MAX),
                    case.num("cut")?.clone(),
                ))
            };
            if !h.is_closed() {
                return Ok(Outcome::Vacuous);
            }
            let fam = HausdorffFamily {
                limit: h.clone(),
                grid,
            };
            let big: u64 = 1 << 12;
            let limit = r.eval("H", h)?;
            let near = r.eval(&format!("H_{}", big / 64), &fam.member(big / 64)?)?;
            let far = r.eval(&format!("H_{big}"), &fam.member(big)?)?;
            not_converging(r, &limit, &near, &far, rational::pow2_neg(8))
        }
        FiniteIndependent => {
            let (h, v) = (case.get("H")?, case.get("V")?);
            let base = r.eval("H", h)?;
            let mut compared = false;
            for (name, other) in [("H−V", h.diff(v)), ("H∪V", Ok(h.union(v)))] {
                let Ok(other) = other else { continue };
                if other == *h {
                    continue;
                }
                let Ok(w) = r.eval(name, &other) else {
                    continue;
                };
                compared = true;
                if same(&base, &w) == Some(false) {
                    return Ok(r.fail(format!("K({name}) ≠ K(H) for finite V")));
                }
            }
            Ok(if compared {
                Outcome::Holds
            } else {
                Outcome::Vacuous
            })
        }
        Closed => invariant_under(r, case, "cl H", |h| Ok(h.closure())),
        Accumulated => invariant_under(r, case, "H′", |h| Ok(h.derived())),
        SelfAccumulated => {
            invariant_under(r, case, "H^{'K}", |h| analysis::acc_points_by_mean(k, h))
        }
        Convex => {
            let (h, l) = (case.get("H")?, case.get("L")?);
            let v = r.eval("H", h)?.enclosure();
            let (llo, lhi) = l.bounds()?;
            let (lo, hi) = (rational::min(&llo, &v.lo), rational::max(&lhi, &v.hi));
            let w = r.eval("H∪L", &h.union(l))?;
            if below(&w, &lo) || above(&w, &hi) {
                return Ok(r.fail(format!(
                    "K(H∪L) leaves I = [{}, {}]",
                    rational::to_decimal(&lo, 12),
                    rational::to_decimal(&hi, 12)
                )));
            }
            Ok(Outcome::Holds)
        }
        TranslationInvariant => {
            let t = case.num("t")?.clone();
            equivariant(
                r,
                case,
                "H+t",
                |h| Ok(h.translate(&t)),
                &rational::one(),
                &t,
            )
        }
        ReflectionInvariant => {
            let s = case.num("s")?.clone();
            let two_s = &s * rational::int(2);
            equivariant(
                r,
                case,
                "2s−H",
                |h| Ok(h.reflect(&s)),
                &-rational::one(),
                &two_s,
            )
        }
        Homogeneous => {
            let a = case.num("alpha")?.clone();
            if !a.is_positive() {
                return Ok(Outcome::Vacuous);
            }
            equivariant(r, case, "αH", |h| h.scale(&a), &a, &rational::zero())
        }
    }
}

/// `K(H₁) ≤ K(H₁∪H₂) ≤ K(H₂)`.
fn ordered_union(mut r: Recorder, h1: &RealSet, h2: &RealSet) -> Result<Outcome> {
    let a = r.eval("H1", h1)?;
    let u = r.eval("H1∪H2", &h1.union(h2))?;
    let b = r.eval("H2", h2)?;
    if le(&a, &u) == Some(false) {
        return Ok(r.fail("K(H1) > K(H1∪H2)"));
    }
    if le(&u, &b) == Some(false) {
        return Ok(r.fail("K(H1∪H2) > K(H2)"));
    }
    Ok(Outcome::Holds)
}

/// Counterexample when the far gap exceeds `threshold` and is at least
/// half the near gap.
fn not_converging(
    r: Recorder,
    limit: &MeanValue,
    near: &MeanValue,
    far: &MeanValue,
    threshold: Rational,
) -> Result<Outcome> {
    let g_near = abs_gap(limit, near);
    let g_far = abs_gap(limit, far);
    if g_far.0 > threshold && g_far.0 * rational::int(2) >= g_near.1 {
        return Ok(r.fail(format!(
            "gap to the limit value stays near {}",
            rational::to_decimal(&abs_gap(limit, far).0, 12)
        )));
    }
    Ok(Outcome::Holds)
}

/// `|K(H) − K(H ∪ ⋃Hᵢ)| ≤ Σ |K(H) − K(H ∪ Hᵢ)|`.
fn u_bound(mut r: Recorder, h: &RealSet, parts: &[RealSet]) -> Result<Outcome> {
    let base = r.eval("H", h)?;
    let mut union = h.clone();
    for p in parts {
        union = union.union(p);
    }
    let all = r.eval("H∪⋃H_i", &union)?;
    let lhs = abs_gap(&base, &all);
    let mut rhs = (rational::zero(), rational::zero());
    let mut exact = base.is_exact() && all.is_exact();
    for (i, p) in parts.iter().enumerate() {
        let v = r.eval(&format!("H∪H{}", i + 1), &h.union(p))?;
        exact &= matches!((&base, &v), (MeanValue::Exact(_), MeanValue::Exact(_)));
        let g = abs_gap(&base, &v);
        rhs.0 += g.0;
        rhs.1 += g.1;
    }
    let exact = exact && matches!((&base, &all), (MeanValue::Exact(_), MeanValue::Exact(_)));
    let violated = if exact {
        lhs.0 > rhs.1
    } else {
        lhs.0 > &rhs.1 + default_tolerance()
    };
    if violated {
        let detail = if exact {
            format!(
                "left side {} exceeds right side {}",
                rational::fmt(&lhs.0),
                rational::fmt(&rhs.1)
            )
        } else {
            format!(
                "left side ≥ {} exceeds right side ≤ {}",
                rational::to_decimal(&lhs.0, 12),
                rational::to_decimal(&rhs.1, 12)
            )
        };
        return Ok(r.fail(detail));
    }
    Ok(Outcome::Holds)
}

/// The first `m` for which the pairwise inequality with `H₁ ∪ … ∪ H_{m−1}`
/// and `H_m` fails.
fn first_failing_step(k: &Mean, h: &RealSet, parts: &[RealSet]) -> Option<usize> {
    let mut acc = parts.first()?.clone();
    for (i, p) in parts.iter().enumerate().skip(1) {
        if let Ok(Outcome::Fails { .. }) = u_bound(Recorder::new(k), h, &[acc.clone(), p.clone()]) {
            return Some(i + 1);
        }
        acc = acc.union(p);
    }
    None
}

fn invariant_under(
    mut r: Recorder,
    case: &Case,
    name: &str,
    op: impl Fn(&RealSet) -> Result<RealSet>,
) -> Result<Outcome> {
    let h = case.get("H")?;
    let image = op(h)?;
    let v = r.eval("H", h)?;
    let w = r.eval(name, &image)?;
    if same(&v, &w) == Some(false) {
        return Ok(r.fail(format!("K({name}) ≠ K(H)")));
    }
    Ok(Outcome::Holds)
}

fn equivariant(
    mut r: Recorder,
    case: &Case,
    name: &str,
    op: impl Fn(&RealSet) -> Result<RealSet>,
    alpha: &Rational,
    beta: &Rational,
) -> Result<Outcome> {
    let h = case.get("H")?;
    let v = r.eval("H", h)?;
    let w = r.eval(name, &op(h)?)?;
    let expected = affine_bounds(&v, alpha, beta);
    if same(&w, &expected) == Some(false) {
        return Ok(r.fail(format!("K({name}) differs from the transformed K(H)")));
    }
    Ok(Outcome::Holds)
}
