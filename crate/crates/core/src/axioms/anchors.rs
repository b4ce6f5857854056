//! Fixed cases judged before random trials: the known witnesses for a
//! property and mean, plus families where the property is known to hold.

use super::cases::Case;
use super::PropertyId;
use crate::exactset::{Cluster, Interval, RealSet, Side};
use crate::means::Mean;
use crate::rational::{int, rat, uint, Rational};

fn harmonic(limit: Rational, start: u64, with_limit: bool) -> RealSet {
    let c = Cluster::new(
        limit,
        Side::Above,
        crate::exactset::Rule::harmonic(int(1)),
        start,
        with_limit,
    )
    .expect("valid cluster");
    RealSet::cluster(c)
}

fn ball(x: Rational, r: &Rational) -> RealSet {
    RealSet::closed(&x - r, &x + r)
}

/// `H₁ ∪ H₂` of the non-monotonicity example for `iso_n`.
pub fn iso_pair(n: u64) -> (RealSet, RealSet) {
    let top = int(2) * (uint(n) + int(3));
    let h1 = RealSet::points([int(0), top.clone(), &top - rat(1, 2) / uint(n)]).union(&harmonic(
        int(0),
        n,
        true,
    ));
    let h2 = RealSet::point(top.clone()).union(&harmonic(top, n, true));
    (h1, h2)
}

pub fn cases(prop: PropertyId, k: &Mean) -> Vec<Case> {
    use PropertyId::*;
    let mut out = Vec::new();
    match (prop, k) {
        (EquiMonotone, Mean::MAcc) => {
            out.push(
                Case::new()
                    .set("H1", harmonic(int(0), 1, false))
                    .set("H2", RealSet::point(int(2))),
            );
        }
        (EquiMonotone, Mean::Avg1) => {
            let h2 =
                RealSet::closed(int(-1), rat(-1, 2)).union(&RealSet::closed(rat(3, 2), int(2)));
            out.push(
                Case::new()
                    .set("H1", RealSet::closed(int(0), int(1)))
                    .set("H2", h2),
            );
        }
        (UBoundedOverlap, Mean::Amean) => {
            out.push(
                Case::new()
                    .set("H", RealSet::point(int(0)))
                    .set("H1", RealSet::points([int(1), int(-1)]))
                    .set("H2", RealSet::points([int(-1), int(2)])),
            );
        }
        (UBoundedOverlap, Mean::Avg1) => {
            let e = rat(1, 100);
            out.push(
                Case::new()
                    .set("H", ball(int(0), &e))
                    .set("H1", ball(int(1), &e).union(&ball(int(-1), &e)))
                    .set("H2", ball(int(-1), &e).union(&ball(int(2), &e))),
            );
        }
        (HausdorffContinuous, Mean::Avg1 | Mean::LAvg(_) | Mean::AvgFat(_)) => {
            out.push(
                Case::new()
                    .set("H", RealSet::closed(int(0), int(2)))
                    .scalar("grid", int(0))
                    .scalar("cut", int(1)),
            );
        }
        (StrictInternal, Mean::AvgFat(d)) => {
            let h = RealSet::point(int(0)).union(&RealSet::closed(d * int(2), d * int(3)));
            out.push(Case::new().set("H", h));
        }
        (FiniteIndependent, Mean::AvgFat(d)) => {
            let h = RealSet::point(int(0)).union(&RealSet::closed(d * int(2), d * int(3)));
            out.push(Case::new().set("H", h).set("V", RealSet::point(int(0))));
        }
        (CantorContinuous, Mean::AvgFat(d)) => {
            let a = RealSet::point(int(1) + d * int(2));
            out.push(
                Case::new()
                    .set("A", a)
                    .scalar("c", int(0))
                    .flag("compact", false)
                    .flag("tail", false),
            );
        }
        (CantorContinuousCompact, Mean::AvgFat(_)) => {
            let a = RealSet::closed(int(0), int(1)).union(&RealSet::point(int(3)));
            out.push(
                Case::new()
                    .set("A", a)
                    .scalar("c", int(2))
                    .flag("compact", true)
                    .flag("tail", false),
            );
        }
        (Monotone, Mean::Iso(n)) => {
            let (h1, h2) = iso_pair(*n);
            out.push(Case::new().set("H1", h1).set("H2", h2));
        }
        (Closed, Mean::Eds(_)) => {
            let h = RealSet::points([int(0), int(3)])
                .union(&RealSet::interval(Interval::open(int(1), int(2))));
            out.push(Case::new().set("H", h));
        }
        (SliceContinuous, Mean::Eds(_)) => {
            out.push(
                Case::new()
                    .set("H", RealSet::points([int(0), int(1), int(2), int(3)]))
                    .scalar("x", int(3)),
            );
        }
        (FiniteIndependent, Mean::Eds(_)) => {
            let l = RealSet::points([int(0), int(1), int(2), int(3)]);
            out.push(Case::new().set("H", l).set("V", RealSet::point(int(0))));
        }
        (StrictInternal, Mean::Eds(_)) => {
            out.push(Case::new().set("H", harmonic(int(0), 1, false)));
        }
        (SelfAccumulated, Mean::MAcc) => {
            let h = harmonic(int(0), 2, true)
                .union(&harmonic(int(1), 2, false))
                .union(&harmonic(int(2), 2, true));
            out.push(Case::new().set("H", h));
        }
        _ => {}
    }
    out
}
