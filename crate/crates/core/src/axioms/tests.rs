use super::*;
use crate::rational::{int, rat};

fn cfg() -> GeneratorConfig {
    GeneratorConfig::default()
}

#[test]
fn property_ids_round_trip() {
    for p in PropertyId::ALL {
        assert_eq!(p.id().parse::<PropertyId>().unwrap(), *p);
    }
    assert_eq!(
        "u_bounded_n_fold".parse::<PropertyId>().unwrap(),
        PropertyId::UBoundedNFold
    );
    assert!("bogus".parse::<PropertyId>().is_err());
}

fn run(p: PropertyId, k: &Mean, trials: u64) -> PropertyReport {
    let r = check(p, k, &cfg(), trials, 7).unwrap();
    assert!(r.replay(k).unwrap(), "{p} {k}");
    r
}

fn exact(w: &Witness, name: &str) -> Rational {
    w.value(name)
        .and_then(|v| v.exact().cloned())
        .unwrap_or_else(|| panic!("no exact value {name}"))
}

use crate::rational::Rational;

#[test]
fn equi_monotone_split() {
    let r = run(PropertyId::EquiMonotone, &Mean::Avg1, 100);
    assert_eq!(r.verdict, Verdict::HoldsOnSample);
    assert_eq!(r.holds, 101);
    let r = run(PropertyId::EquiMonotone, &Mean::MAcc, 20);
    assert_eq!(r.verdict, Verdict::Counterexample);
    let w = r.witness.unwrap();
    assert_eq!(w.source, Source::Anchor);
    assert_eq!(exact(&w, "K(H1)"), int(0));
    assert_eq!(exact(&w, "K(H2)"), int(2));
}

#[test]
fn u_bounded_needs_disjointness() {
    let r = run(PropertyId::UBoundedOverlap, &Mean::Amean, 10);
    let w = r.witness.unwrap();
    assert_eq!(exact(&w, "K(H∪⋃H_i)"), rat(1, 2));
    assert_eq!(exact(&w, "K(H∪H1)"), int(0));
    assert_eq!(exact(&w, "K(H∪H2)"), rat(1, 3));
    let r = run(PropertyId::UBoundedOverlap, &Mean::Avg1, 10);
    assert_eq!(r.verdict, Verdict::Counterexample);
    for k in [Mean::Avg1, Mean::Amean] {
        assert_eq!(
            run(PropertyId::UBounded, &k, 100).verdict,
            Verdict::HoldsOnSample,
            "{k}"
        );
        assert_eq!(
            run(PropertyId::UBoundedNFold, &k, 50).verdict,
            Verdict::HoldsOnSample,
            "{k}"
        );
    }
}

#[test]
fn density_means_are_u_bounded() {
    let m = crate::measure::DensityMeasure::new(vec![
        (crate::Interval::closed(int(-10), int(0)), int(3)),
        (
            crate::Interval::new(int(0), int(10), false, true).unwrap(),
            rat(1, 2),
        ),
    ])
    .unwrap();
    let r = run(PropertyId::UBounded, &Mean::MMu(m), 100);
    assert_eq!(r.verdict, Verdict::HoldsOnSample);
    assert!(r.holds > 50);
}

#[test]
fn hausdorff_continuity_split() {
    let r = run(PropertyId::HausdorffContinuous, &Mean::Avg1, 10);
    let w = r.witness.unwrap();
    assert_eq!(exact(&w, "K(H)"), int(1));
    assert_eq!(exact(&w, "K(H_4096)"), rat(3, 2));
    let r = run(
        PropertyId::HausdorffContinuous,
        &Mean::AvgFat(rat(1, 4)),
        20,
    );
    assert_eq!(r.verdict, Verdict::HoldsOnSample);
    assert!(r.holds > 10);
}

#[test]
fn fattened_average_counterexamples() {
    let k = Mean::AvgFat(int(1));
    let r = run(PropertyId::StrictInternal, &k, 5);
    assert_eq!(exact(r.witness.as_ref().unwrap(), "K(H)"), rat(3, 2));
    assert_eq!(
        run(PropertyId::FiniteIndependent, &k, 5).verdict,
        Verdict::Counterexample
    );
    assert_eq!(
        run(PropertyId::CantorContinuous, &k, 5).verdict,
        Verdict::Counterexample
    );
    let r = run(
        PropertyId::CantorContinuousCompact,
        &Mean::AvgFat(rat(1, 4)),
        30,
    );
    assert_eq!(r.verdict, Verdict::HoldsOnSample);
    assert_eq!(
        run(PropertyId::Monotone, &k, 30).verdict,
        Verdict::HoldsOnSample
    );
}

#[test]
fn iso_is_not_monotone() {
    for n in [1u64, 4] {
        let r = run(PropertyId::Monotone, &Mean::Iso(n), 3);
        let w = r.witness.unwrap();
        let nn = crate::rational::uint(n);
        assert_eq!(
            exact(&w, "K(H1)"),
            int(4) * (&nn + int(3)) / int(3) + rat(1, 6) / &nn
        );
        assert_eq!(exact(&w, "K(H1∪H2)"), &nn + int(3) + int(1) / &nn);
    }
}

#[test]
fn eds_counterexamples() {
    let k = Mean::Eds(3);
    let w = run(PropertyId::Closed, &k, 3).witness.unwrap();
    assert_eq!(exact(&w, "K(H)"), rat(4, 3));
    assert_eq!(exact(&w, "K(cl H)"), rat(3, 2));
    let w = run(PropertyId::SliceContinuous, &k, 3).witness.unwrap();
    let vals: Vec<Rational> = w
        .values
        .iter()
        .filter_map(|(_, v)| v.exact().cloned())
        .collect();
    assert_eq!(vals, vec![rat(8, 9), rat(3, 2)]);
    assert_eq!(
        run(PropertyId::FiniteIndependent, &k, 3).verdict,
        Verdict::Counterexample
    );
    assert_eq!(
        run(PropertyId::StrictInternal, &k, 3).verdict,
        Verdict::Counterexample
    );
}

#[test]
fn avg1_basic_laws_hold() {
    use PropertyId::*;
    for p in [
        Internal,
        StrictInternal,
        Monotone,
        DisjointMonotone,
        MeanMonotone,
        Closed,
        Accumulated,
        SelfAccumulated,
        Convex,
        TranslationInvariant,
        ReflectionInvariant,
        Homogeneous,
        PointContinuous,
        SliceContinuous,
        CantorContinuous,
        UCantorContinuous,
        FiniteIndependent,
    ] {
        let r = run(p, &Mean::Avg1, 40);
        assert_eq!(r.verdict, Verdict::HoldsOnSample, "{p}: {:?}", r.witness);
    }
}

#[test]
fn macc_is_self_accumulated() {
    let r = run(PropertyId::SelfAccumulated, &Mean::MAcc, 40);
    assert_eq!(r.verdict, Verdict::HoldsOnSample, "{:?}", r.witness);
    assert!(r.holds > 20);
}

#[test]
fn not_applicable_and_bad_input() {
    let r = check(PropertyId::HausdorffContinuous, &Mean::Amean, &cfg(), 5, 1).unwrap();
    assert_eq!(r.verdict, Verdict::NotApplicable);
    assert_eq!(
        check(PropertyId::SelfAccumulated, &Mean::Eds(2), &cfg(), 5, 1)
            .unwrap()
            .verdict,
        Verdict::NotApplicable
    );
    assert!(check(PropertyId::Internal, &Mean::Avg1, &cfg(), 0, 1).is_err());
}

#[test]
fn reports_are_deterministic_across_execution_modes() {
    for p in [PropertyId::UnionMonotone, PropertyId::Convex] {
        let a = check_with(p, &Mean::Amean, &cfg(), 60, 3, Execution::Parallel).unwrap();
        let b = check_with(p, &Mean::Amean, &cfg(), 60, 3, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }
}

#[test]
fn every_property_runs_for_the_catalogue() {
    use crate::means::{transform_kf, MonotoneFunc};
    let means = [
        Mean::Avg1,
        Mean::Amean,
        Mean::MAcc,
        Mean::Iso(4),
        Mean::Eds(4),
        Mean::AvgFat(rat(1, 4)),
        Mean::AvgF(MonotoneFunc::Square),
        transform_kf(Mean::Avg1, MonotoneFunc::Square),
        transform_kf(Mean::Amean, MonotoneFunc::odd_power(3).unwrap()),
    ];
    for k in &means {
        for r in check_all(k, &cfg(), 4, 11, Execution::Parallel).unwrap() {
            if r.verdict == Verdict::Counterexample {
                assert!(r.replay(k).unwrap());
            }
            eprintln!(
                "{:<28} {:<26} {:<16} holds={} vacuous={}",
                k.id(),
                r.property.id(),
                r.verdict.id(),
                r.holds,
                r.vacuous
            );
        }
    }
}
