use meanlab_core::measure::{fatten, hausdorff_distance, lebesgue};
use meanlab_core::rational::{int, rat};
use meanlab_core::{Cluster, Error, Interval, Rational, RealSet, Rule, Side};
use proptest::prelude::*;

fn grid() -> impl Strategy<Value = Rational> {
    (-64i64..=64).prop_map(|k| rat(k, 8))
}

fn interval() -> impl Strategy<Value = Interval> {
    (grid(), 1i64..=32, any::<bool>(), any::<bool>())
        .prop_map(|(lo, w, a, b)| Interval::new(lo.clone(), lo + rat(w, 8), a, b).unwrap())
}

fn cluster() -> impl Strategy<Value = Cluster> {
    (
        grid(),
        any::<bool>(),
        1i64..=8,
        prop::bool::ANY,
        1u64..=4,
        any::<bool>(),
    )
        .prop_map(|(limit, above, c, harmonic, start, with_limit)| {
            let side = if above { Side::Above } else { Side::Below };
            let rule = if harmonic {
                Rule::harmonic(rat(c, 8))
            } else {
                Rule::geometric(rat(c, 8), rat(1, 2))
            };
            Cluster::new(limit, side, rule, start, with_limit).unwrap()
        })
}

/// Clusters whose limit determines the rule family, with hulls in disjoint slots.
fn slotted_cluster() -> impl Strategy<Value = Cluster> {
    (
        -2i64..=2,
        1u64..=5,
        prop::option::of(5u64..=12),
        any::<bool>(),
    )
        .prop_map(|(slot, start, end, with_limit)| {
            let (side, rule) = if slot % 2 == 0 {
                (Side::Above, Rule::harmonic(rat(1, 2)))
            } else {
                (Side::Below, Rule::geometric(rat(1, 2), rat(1, 2)))
            };
            let c = Cluster::new(int(3 * slot), side, rule, start, with_limit).unwrap();
            match end {
                Some(e) => c.with_end(e).unwrap(),
                None => c,
            }
        })
}

#[derive(Clone, Debug)]
struct Raw {
    intervals: Vec<Interval>,
    points: Vec<Rational>,
    clusters: Vec<Cluster>,
}

impl Raw {
    fn set(&self) -> RealSet {
        RealSet::normalize(
            self.intervals.clone(),
            self.points.clone(),
            self.clusters.clone(),
        )
        .unwrap()
    }

    fn member(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
            || self.points.contains(x)
            || self.clusters.iter().any(|c| c.member(x))
    }

    /// Grid points plus a few cluster terms and limits.
    fn probes(&self) -> Vec<Rational> {
        let mut xs: Vec<Rational> = (-80..=80).map(|k| rat(k, 16)).collect();
        for c in &self.clusters {
            xs.push(c.limit.clone());
            for k in [1, 2, 3, 7, 50] {
                xs.push(c.term(k));
            }
        }
        xs
    }
}

fn raw(max_intervals: usize, max_points: usize, max_clusters: usize) -> impl Strategy<Value = Raw> {
    (
        prop::collection::vec(interval(), 0..=max_intervals),
        prop::collection::vec(grid(), 0..=max_points),
        prop::collection::vec(cluster(), 0..=max_clusters),
    )
        .prop_map(|(intervals, points, clusters)| Raw {
            intervals,
            points,
            clusters,
        })
}

fn any_raw() -> impl Strategy<Value = Raw> {
    raw(3, 4, 2)
}

fn slotted_raw() -> impl Strategy<Value = Raw> {
    (
        prop::collection::vec(interval(), 0..=3),
        prop::collection::vec(grid(), 0..=4),
        prop::collection::vec(slotted_cluster(), 0..=3),
    )
        .prop_map(|(intervals, points, clusters)| Raw {
            intervals,
            points,
            clusters,
        })
}

fn union_raw(a: &Raw, b: &Raw) -> Raw {
    Raw {
        intervals: [a.intervals.clone(), b.intervals.clone()].concat(),
        points: [a.points.clone(), b.points.clone()].concat(),
        clusters: [a.clusters.clone(), b.clusters.clone()].concat(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalize_is_idempotent(r in any_raw()) {
        let h = r.set();
        let again = RealSet::normalize(h.intervals().to_vec(), h.isolated_points().to_vec(), h.clusters().to_vec()).unwrap();
        prop_assert_eq!(again, h);
    }

    #[test]
    fn membership_matches_components(r in any_raw()) {
        let h = r.set();
        for x in r.probes() {
            prop_assert_eq!(h.member(&x), r.member(&x), "x = {}", x);
        }
    }

    #[test]
    fn union_is_pointwise_or(a in any_raw(), b in any_raw()) {
        let u = a.set().union(&b.set());
        prop_assert_eq!(&u, &b.set().union(&a.set()));
        prop_assert_eq!(&u, &union_raw(&a, &b).set());
        for x in a.probes().into_iter().chain(b.probes()) {
            prop_assert_eq!(u.member(&x), a.member(&x) || b.member(&x));
        }
    }

    #[test]
    fn union_is_associative_and_idempotent(a in any_raw(), b in any_raw(), c in any_raw()) {
        let (a, b, c) = (a.set(), b.set(), c.set());
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.union(&a), a);
    }

    #[test]
    fn intersection_and_difference_are_pointwise(a in slotted_raw(), b in slotted_raw()) {
        let (ha, hb) = (a.set(), b.set());
        let both = ha.intersect(&hb).unwrap();
        // an interval minus an infinite tail is outside the representation
        let minus = ha.diff(&hb);
        prop_assume!(!matches!(minus, Err(Error::UnrepresentableResult(_))));
        let minus = minus.unwrap();
        for x in a.probes().into_iter().chain(b.probes()) {
            prop_assert_eq!(both.member(&x), a.member(&x) && b.member(&x), "x = {}", x);
            prop_assert_eq!(minus.member(&x), a.member(&x) && !b.member(&x), "x = {}", x);
        }
        prop_assert!(ha.diff(&ha).unwrap().is_empty());
    }

    #[test]
    fn reflection_is_an_involution(r in any_raw(), s in grid()) {
        let h = r.set();
        prop_assert_eq!(h.reflect(&s).reflect(&s), h.clone());
        prop_assert_eq!(h.translate(&s).translate(&-s.clone()), h.clone());
        for x in r.probes() {
            prop_assert_eq!(h.reflect(&s).member(&(int(2) * &s - &x)), h.member(&x));
        }
    }

    #[test]
    fn scaling_round_trips(r in any_raw(), k in 1i64..=8) {
        let h = r.set();
        let alpha = rat(k, 3);
        let there = h.scale(&alpha).unwrap();
        prop_assert_eq!(there.scale(&(int(1) / alpha)).unwrap(), h);
    }

    #[test]
    fn closure_contains_and_is_idempotent(r in slotted_raw()) {
        let h = r.set();
        let c = h.closure();
        prop_assert!(h.is_subset(&c).unwrap());
        prop_assert_eq!(c.closure(), c.clone());
        prop_assert!(c.is_closed());
        prop_assert!(h.interior().is_subset(&h).unwrap());
    }

    #[test]
    fn level_of_a_union_is_the_larger_level(a in raw(0, 4, 2), b in raw(0, 4, 2)) {
        let (ha, hb) = (a.set(), b.set());
        prop_assume!(!ha.is_empty() && !hb.is_empty());
        let la = ha.level().unwrap();
        let lb = hb.level().unwrap();
        prop_assert_eq!(ha.union(&hb).level().unwrap(), la.max(lb));
        prop_assert_eq!(ha.level().unwrap(), usize::from(!ha.clusters().is_empty()));
    }

    #[test]
    fn lebesgue_measure_is_modular(a in raw(3, 2, 0), b in raw(3, 2, 0)) {
        let (ha, hb) = (a.set(), b.set());
        let both = ha.intersect(&hb).unwrap();
        prop_assert_eq!(lebesgue(&ha.union(&hb)) + lebesgue(&both), lebesgue(&ha) + lebesgue(&hb));
        let raw_sum: Rational = a.intervals.iter().map(Interval::len).sum();
        prop_assert!(lebesgue(&ha) <= raw_sum);
    }

    #[test]
    fn fattening_is_a_semigroup(r in any_raw(), e in 1i64..=8, d in 1i64..=8) {
        let h = r.set();
        prop_assume!(!h.is_empty());
        let (eps, delta) = (rat(e, 16), rat(d, 16));
        let twice = fatten(&fatten(&h, &eps).unwrap(), &delta).unwrap();
        prop_assert_eq!(twice, fatten(&h, &(eps + delta)).unwrap());
    }

    #[test]
    fn hausdorff_distance_is_a_metric(a in slotted_raw(), b in slotted_raw(), c in slotted_raw()) {
        let (a, b, c) = (a.set().closure(), b.set().closure(), c.set().closure());
        prop_assume!(!a.is_empty() && !b.is_empty() && !c.is_empty());
        let d = |x: &RealSet, y: &RealSet| hausdorff_distance(x, y);
        let (ab, bc, ac) = (d(&a, &b), d(&b, &c), d(&a, &c));
        prop_assume!(ab.is_ok() && bc.is_ok() && ac.is_ok());
        let (ab, bc, ac) = (ab.unwrap(), bc.unwrap(), ac.unwrap());
        prop_assert_eq!(d(&a, &a).unwrap(), int(0));
        prop_assert_eq!(d(&b, &a).unwrap(), ab.clone());
        prop_assert!(ac <= ab + bc);
    }
}
