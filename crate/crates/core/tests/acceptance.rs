//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::Instant;

use meanlab_core::analysis::{self, MeanSequence, ProbeSide};
use meanlab_core::axioms::{self, GeneratorConfig, PropertyId, Sampler, Verdict};
use meanlab_core::means::{self, LimitSchedule, MonotoneFunc};
use meanlab_core::measure::{self, DensityMeasure};
use meanlab_core::rational::{self, int, pow2_neg, rat, uint};
use meanlab_core::{Cluster, Execution, Interval, Mean, MeanValue, Rational, RealSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Between 1 and `max` disjoint closed intervals with endpoints on the grid `lo + i/8`.
fn endpoints(r: &mut ChaCha8Rng, max: usize, lo: i64, hi: i64) -> Vec<(Rational, Rational)> {
    let k = r.gen_range(1..=max);
    let slots = ((hi - lo) * 8) as usize;
    let mut picks: Vec<usize> = Vec::new();
    while picks.len() < 2 * k {
        let p = r.gen_range(0..=slots);
        if !picks.contains(&p) {
            picks.push(p);
        }
    }
    picks.sort_unstable();
    let at = |p: usize| int(lo) + rat(p as i64, 8);
    picks.chunks(2).map(|c| (at(c[0]), at(c[1]))).collect()
}

fn closed_union(ivs: &[(Rational, Rational)]) -> RealSet {
    ivs.iter().fold(RealSet::empty(), |acc, (a, b)| {
        acc.union(&RealSet::closed(a.clone(), b.clone()))
    })
}

fn oracle_length(ivs: &[(Rational, Rational)]) -> Rational {
    ivs.iter().map(|(a, b)| b - a).sum()
}

fn oracle_avg1(ivs: &[(Rational, Rational)]) -> Rational {
    let moment: Rational = ivs.iter().map(|(a, b)| (b * b - a * a) / int(2)).sum();
    moment / oracle_length(ivs)
}

fn random_rational(r: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    rat(r.gen_range(lo * den..=hi * den), den)
}

fn squared(v: &MeanValue) -> Option<Rational> {
    match v {
        MeanValue::Exact(x) => Some(x * x),
        MeanValue::Preimage {
            func: MonotoneFunc::Square,
            image,
        } => Some(image.clone()),
        _ => None,
    }
}

fn c1_closed_form_transforms() -> Check {
    let mut r = rng(1);
    let kf = means::transform_kf(Mean::Avg1, MonotoneFunc::Square);
    for _ in 0..20 {
        let a = random_rational(&mut r, 0, 8, 7);
        let b = &a + random_rational(&mut r, 0, 8, 5) + rat(1, 9);
        let h = RealSet::closed(a.clone(), b.clone());
        let fa = ok(means::avg_f(&MonotoneFunc::Square, &h))?;
        let want = (&a * &a + &a * &b + &b * &b) / int(3);
        ensure(squared(&fa) == Some(want.clone()), || {
            format!("avg_f on {h}: {fa:?}, want square {want}")
        })?;
        let t = ok(kf.evaluate(&h))?;
        let want = (&a * &a + &b * &b) / int(2);
        ensure(squared(&t) == Some(want.clone()), || {
            format!("avg1^square on {h}: {t:?}, want square {want}")
        })?;
    }
    Ok("20 pairs exact".into())
}

fn c2_transform_witness() -> Check {
    let h1 = RealSet::closed(int(0), int(1)).union(&RealSet::closed(int(2), int(3)));
    let h2 = RealSet::interval(Interval::open(int(1), int(2)));
    let f = MonotoneFunc::Square;
    let whole = ok(means::avg1(&ok(f.image(&h1.union(&h2)))?))?;
    let part = ok(means::avg1(&ok(f.image(&h2))?))?;
    ensure(whole == rat(9, 2) && part == rat(5, 2), || {
        format!("got {whole} and {part}")
    })?;
    let kf = means::transform_kf(Mean::Avg1, f);
    let tw = ok(kf.evaluate(&h1.union(&h2)))?;
    let tp = ok(kf.evaluate(&h2))?;
    ensure(
        squared(&tw) == Some(rat(9, 2)) && squared(&tp) == Some(rat(5, 2)),
        || format!("transform {tw:?} {tp:?}"),
    )?;
    Ok("K(f(H1∪H2)) = 9/2, K(f(H2)) = 5/2".into())
}

fn c3_extremal_lemma() -> Check {
    let (lo, hi) = ok(analysis::extremal_avg(&int(0), &int(1), &rat(1, 2)))?;
    ensure(lo == rat(1, 4) && hi == rat(3, 4), || {
        format!("extremal_avg(0,1,1/2) = ({lo}, {hi})")
    })?;
    let mut r = rng(3);
    for _ in 0..500 {
        let a = random_rational(&mut r, -5, 4, 4);
        let span = r.gen_range(1..=5);
        let b = &a + int(span);
        let ivs: Vec<(Rational, Rational)> = endpoints(&mut r, 3, 0, span)
            .into_iter()
            .map(|(x, y)| (&a + x, &a + y))
            .collect();
        let h = closed_union(&ivs);
        let len = oracle_length(&ivs);
        if len >= &b - &a {
            continue;
        }
        let (lo, hi) = ok(analysis::extremal_avg(&a, &b, &len))?;
        let v = ok(means::avg1(&h))?;
        ensure(lo <= v && v <= hi, || {
            format!("avg1({h}) = {v} outside [{lo}, {hi}]")
        })?;
        let left = ok(means::avg1(&RealSet::closed(a.clone(), &a + &len)))?;
        let right = ok(means::avg1(&RealSet::closed(&b - &len, b.clone())))?;
        ensure(left == lo && right == hi, || {
            format!("bounds not attained on [{a}, {b}] with h = {len}")
        })?;
    }
    Ok("500 sets within bounds, bounds attained".into())
}

fn c4_derivative_probes() -> Check {
    let mut r = rng(4);
    let s = LimitSchedule::default();
    let mut at_half = 0;
    for _ in 0..100 {
        let ivs = endpoints(&mut r, 4, -6, 6);
        let h = closed_union(&ivs);
        let sup = ivs.last().unwrap().1.clone();
        let want = (sup - oracle_avg1(&ivs)) / oracle_length(&ivs);
        let p = ok(analysis::d_probe(&Mean::Avg1, &h, ProbeSide::SupAppend, &s))?;
        ensure(p.exact_hint.as_ref() == Some(&want), || {
            format!("probe on {h}: {:?}, want {want}", p.exact_hint)
        })?;
        let err = rational::abs(&(&p.limit.estimate - &want));
        ensure(err <= &p.limit.error_bound + rat(1, 1_000_000), || {
            format!("extrapolated probe on {h} off by {err}")
        })?;
        ensure(want >= rat(1, 2), || {
            format!("probe {want} below 1/2 on {h}")
        })?;
        ensure((want == rat(1, 2)) == (ivs.len() == 1), || {
            format!("probe {want} on {h}")
        })?;
        at_half += usize::from(want == rat(1, 2));
    }
    let h = RealSet::closed(int(0), int(1)).union(&RealSet::closed(int(7), int(8)));
    let v = ok(analysis::avg1_probe(&h, ProbeSide::SupAppend))?;
    let (a, b) = (int(1), int(7));
    ensure(v == int(2) && v == (&a + &b) / (int(4) * &a), || {
        format!("probe on {h} = {v}")
    })?;
    Ok(format!(
        "100 unions exact ({at_half} single intervals at 1/2), [0,1]∪[7,8] gives 2"
    ))
}

fn c5_pointwise_derivative() -> Check {
    let s = analysis::derivative_schedule();
    let unit = RealSet::closed(int(0), int(1));
    for (x, want) in [
        (int(0), rat(1, 2)),
        (int(1), rat(-1, 2)),
        (rat(1, 2), int(0)),
    ] {
        let d = ok(analysis::d_mean(&Mean::Avg1, &unit, &x, &s))?;
        ensure(d.lower == want && d.upper == want, || {
            format!("at {x}: [{}, {}]", d.lower, d.upper)
        })?;
    }
    let mut r = rng(5);
    let tol = rat(1, 1_000_000_000);
    let bound = rat(1, 2) + &tol;
    for _ in 0..50 {
        let ivs = endpoints(&mut r, 4, -6, 6);
        let h = closed_union(&ivs);
        let (a, b) = &ivs[r.gen_range(0..ivs.len())];
        let x = match r.gen_range(0..3) {
            0 => a.clone(),
            1 => b.clone(),
            _ => a + (b - a) * rat(r.gen_range(1..8), 8),
        };
        let d = ok(analysis::d_mean(&Mean::Avg1, &h, &x, &s))?;
        ensure(d.lower >= -bound.clone() && d.upper <= bound, || {
            format!("d at {x} on {h}: [{}, {}]", d.lower, d.upper)
        })?;
    }
    Ok("interval values exact, 50 unions within [-1/2, 1/2]".into())
}

fn c6_hausdorff_split() -> Check {
    let whole = RealSet::closed(int(0), int(2));
    let base = ok(means::avg1(&whole))?;
    let mut ms: Vec<u64> = (1..=32).collect();
    ms.extend((6..=14).map(|e| 1u64 << e));
    for &m in &ms {
        let v = ok(means::avg1(&analysis::grid_family(m)))?;
        ensure(rational::abs(&(&v - &base)) == rat(1, 2), || {
            format!("m = {m}: avg1 = {v}")
        })?;
    }
    let delta = rat(1, 4);
    let fat_base = ok(means::avg_fat(&whole, &delta))?;
    for e in 12..=14 {
        let v = ok(means::avg_fat(&analysis::grid_family(1 << e), &delta))?;
        let gap = rational::abs(&(&v - &fat_base));
        ensure(gap <= rat(1, 1000), || {
            format!("m = 2^{e}: fattened gap {gap}")
        })?;
    }
    let lavg = MeanSequence::AvgFat.limit_mean(LimitSchedule::default());
    let scan = ok(analysis::uniformity_scan(
        MeanSequence::AvgFat,
        &lavg,
        &analysis::grid_family,
        &rat(1, 4),
        1 << 10,
        Execution::Parallel,
    ))?;
    let missing: Vec<usize> = scan
        .iter()
        .enumerate()
        .filter(|(_, w)| w.is_none())
        .map(|(i, _)| i + 1)
        .collect();
    ensure(missing.is_empty(), || {
        format!("no witness for n in {missing:?}")
    })?;
    Ok(format!(
        "avg1 gap 1/2 on {} members, fattened gap ≤ 1e-3, witnesses for n ≤ 1024",
        ms.len()
    ))
}

fn c7_eds_counterexample() -> Check {
    let h =
        RealSet::points([int(0), int(3)]).union(&RealSet::interval(Interval::open(int(1), int(2))));
    let v = ok(means::eds_n(&h, 3))?;
    let c = ok(means::eds_n(&h.closure(), 3))?;
    ensure(v == rat(4, 3) && c == rat(3, 2), || {
        format!("eds_3 = {v}, on closure {c}")
    })?;
    Ok("eds_3 = 4/3, on closure 3/2".into())
}

fn c8_iso_non_monotone() -> Check {
    for n in 1..=10u64 {
        let top = int(2) * (uint(n) + int(3));
        let tail = |limit: Rational| RealSet::cluster(Cluster::harmonic(limit, int(1), n).unwrap());
        let h1 =
            RealSet::points([int(0), top.clone(), &top - rat(1, 2) / uint(n)]).union(&tail(int(0)));
        let h2 = RealSet::point(top.clone()).union(&tail(top.clone()));
        let a = ok(means::iso_n(&h1, n))?;
        let b = ok(means::iso_n(&h1.union(&h2), n))?;
        let want_a = int(4) * (uint(n) + int(3)) / int(3) + rat(1, 6) / uint(n);
        let want_b = uint(n) + int(3) + int(1) / uint(n);
        ensure(a == want_a && b == want_b && a > b, || {
            format!("n = {n}: {a} and {b}")
        })?;
    }
    Ok("n = 1..10 exact, iso(H1) > iso(H1∪H2)".into())
}

fn density_measures() -> Vec<Mean> {
    let piece = |a: i64, b: i64| Interval::new(int(a), int(b), true, false).unwrap();
    let d1 = DensityMeasure::new(vec![
        (piece(-10, 0), int(1)),
        (Interval::closed(int(0), int(10)), int(3)),
    ])
    .unwrap();
    let d2 = DensityMeasure::new(vec![
        (piece(-10, -2), int(2)),
        (piece(-2, 5), rat(1, 2)),
        (Interval::closed(int(5), int(10)), int(5)),
    ])
    .unwrap();
    vec![Mean::MMu(d1), Mean::MMu(d2)]
}

fn c9_u_boundedness() -> Check {
    let all = RealSet::points([int(0), int(1), int(-1), int(2)]);
    let with1 = RealSet::points([int(0), int(1), int(-1)]);
    let with2 = RealSet::points([int(0), int(-1), int(2)]);
    let base = int(0);
    let lhs = rational::abs(&(ok(means::amean(&all))? - &base));
    let g1 = rational::abs(&(ok(means::amean(&with1))? - &base));
    let g2 = rational::abs(&(ok(means::amean(&with2))? - &base));
    ensure(
        lhs == rat(1, 2) && g1 == int(0) && g2 == rat(1, 3) && lhs > &g1 + &g2,
        || format!("{lhs} vs {g1} + {g2}"),
    )?;
    let cfg = GeneratorConfig::default();
    let mut counts = Vec::new();
    let mut means_checked = vec![Mean::Avg1];
    means_checked.extend(density_measures());
    for k in &means_checked {
        for prop in [PropertyId::UBounded, PropertyId::UBoundedNFold] {
            let rep = ok(axioms::check(prop, k, &cfg, 500, 9))?;
            ensure(rep.verdict == Verdict::HoldsOnSample, || {
                format!("{prop} for {k}: {:?}", rep.witness)
            })?;
            ensure(rep.holds >= 200, || {
                format!("{prop} for {k}: only {} informative trials", rep.holds)
            })?;
            counts.push(rep.holds);
        }
    }
    Ok(format!(
        "1/2 > 0 + 1/3; holds on {counts:?} trials (avg1, two densities; triples and n-fold)"
    ))
}

fn with_satellites(r: &mut ChaCha8Rng, ivs: &[(Rational, Rational)]) -> RealSet {
    let h = closed_union(ivs);
    let lo = ivs[0].0.clone();
    let hi = ivs.last().unwrap().1.clone();
    let mut pts = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let x = match r.gen_range(0..3) {
            0 => &lo - random_rational(r, 1, 4, 3),
            1 => &hi + random_rational(r, 1, 4, 3),
            _ => random_rational(r, -6, 6, 16),
        };
        pts.push(x);
    }
    h.union(&RealSet::points(pts))
}

fn c10_mean_bounds() -> Check {
    let mut r = rng(10);
    let tol = pow2_neg(40);
    let mut strict = 0;
    for _ in 0..200 {
        let ivs = endpoints(&mut r, 3, -6, 6);
        let h = with_satellites(&mut r, &ivs);
        let (ess_lo, ess_hi) = (ivs[0].0.clone(), ivs.last().unwrap().1.clone());
        let lo = ok(analysis::liminf_by_mean(&Mean::Avg1, &h))?;
        let hi = ok(analysis::limsup_by_mean(&Mean::Avg1, &h))?;
        ensure(
            lo == MeanValue::Exact(ess_lo.clone()) && hi == MeanValue::Exact(ess_hi.clone()),
            || format!("bounds on {h}: {lo:?}, {hi:?}"),
        )?;
        for (b, want) in [
            (ok(analysis::liminf_bisect(&Mean::Avg1, &h))?, &ess_lo),
            (ok(analysis::limsup_bisect(&Mean::Avg1, &h))?, &ess_hi),
        ] {
            let e = b.enclosure();
            let off = rational::max(
                &rational::abs(&(&e.lo - want)),
                &rational::abs(&(&e.hi - want)),
            );
            ensure(off <= tol, || {
                format!("bisection on {h} is {off} from {want}")
            })?;
        }
        if ess_lo != ess_hi {
            ensure(
                ok(analysis::strict_strong_internal(&Mean::Avg1, &h))?,
                || format!("not strictly internal: {h}"),
            )?;
            strict += 1;
        }
        ensure(
            ok(analysis::core_restriction_check(&Mean::Avg1, &h))?,
            || format!("core restriction fails on {h}"),
        )?;
    }
    Ok(format!(
        "200 sets, bisection within 2^-40, {strict} strict internality checks"
    ))
}

fn harmonic_tail(limit: Rational, from: u64) -> RealSet {
    RealSet::cluster(Cluster::harmonic(limit, int(1), from).unwrap())
}

fn c11_accumulation_laws() -> Check {
    let mut r = rng(11);
    for _ in 0..500 {
        let a = endpoints(&mut r, 3, -6, 6);
        let b = endpoints(&mut r, 3, -6, 6);
        let (h1, h2) = (with_satellites(&mut r, &a), with_satellites(&mut r, &b));
        let u = ok(analysis::acc_points_by_mean(&Mean::Avg1, &h1.union(&h2)))?;
        let parts = ok(analysis::acc_points_by_mean(&Mean::Avg1, &h1))?
            .union(&ok(analysis::acc_points_by_mean(&Mean::Avg1, &h2))?);
        let support = closed_union(&a).union(&closed_union(&b));
        ensure(u == parts && u == support, || {
            format!("union law fails for {h1} and {h2}: {u} vs {parts}")
        })?;
    }
    let h1 = harmonic_tail(int(0), 2)
        .union(&harmonic_tail(int(1), 2))
        .union(&harmonic_tail(int(2), 2))
        .union(&RealSet::points([int(0), int(2)]));
    let h2 = harmonic_tail(int(3), 2).union(&RealSet::point(int(3)));
    let k = Mean::MAcc;
    ensure(
        ok(analysis::is_k_closed(&k, &h1))? && ok(analysis::is_k_closed(&k, &h2))?,
        || "parts not closed".into(),
    )?;
    let u = h1.union(&h2);
    let acc = ok(analysis::acc_points_by_mean(&k, &u))?;
    ensure(acc.member(&int(1)) && !u.member(&int(1)), || {
        format!("(H1∪H2)' = {acc}")
    })?;
    let cfg = GeneratorConfig::default();
    let mut seen = 0;
    let mut stream = 0;
    while seen < 100 {
        let mut s = ok(Sampler::new(&cfg, 11, stream))?;
        stream += 1;
        let h = s.level1_set();
        if ok(h.level())? != 1 || ok(h.derived().finite_points())?.len() < 2 {
            continue;
        }
        let top = ok(h.derived().finite_points())?;
        let want = rational::sum(&top) / uint(top.len() as u64);
        let acc = ok(analysis::acc_points_by_mean(&k, &h))?;
        ensure(
            ok(means::m_acc(&h))? == want && ok(means::amean(&acc))? == want,
            || format!("not self-accumulated: {h}"),
        )?;
        ensure(ok(analysis::self_accumulated_at(&k, &h))?, || {
            format!("not self-accumulated: {h}")
        })?;
        seen += 1;
    }
    Ok(format!("500 unions exact, 1 ∈ (H1∪H2)^K \\ (H1∪H2), 100 level-1 sets self-accumulated ({stream} drawn)"))
}

fn c12_equi_monotone() -> Check {
    let cfg = GeneratorConfig::default();
    let avg = ok(axioms::check(
        PropertyId::EquiMonotone,
        &Mean::Avg1,
        &cfg,
        1000,
        12,
    ))?;
    ensure(
        avg.verdict == Verdict::HoldsOnSample && avg.holds >= 1000,
        || format!("avg1: {:?}, {} holds", avg.verdict, avg.holds),
    )?;
    let rep = ok(axioms::check(
        PropertyId::EquiMonotone,
        &Mean::MAcc,
        &cfg,
        100,
        12,
    ))?;
    let w = rep.witness.as_ref().ok_or("no macc witness")?;
    let got = (w.value("K(H1)"), w.value("K(H2)"));
    ensure(
        got == (
            Some(&MeanValue::Exact(int(0))),
            Some(&MeanValue::Exact(int(2))),
        ),
        || format!("macc witness {got:?}"),
    )?;
    Ok(format!(
        "avg1 holds on {} pairs, macc witness (0, 2)",
        avg.holds
    ))
}

fn c13_limit_sanity() -> Check {
    let mut r = rng(13);
    let s = LimitSchedule::default();
    let tol = rat(1, 1_000_000_000);
    for _ in 0..100 {
        let ivs = endpoints(&mut r, 4, -6, 6);
        let h = closed_union(&ivs);
        let e = ok(ok(means::lavg(&h, &s))?.into_result())?;
        let gap = rational::abs(&(&e.estimate - oracle_avg1(&ivs)));
        ensure(gap <= tol, || {
            format!("lavg on {h} off by {}", rational::to_f64(&gap))
        })?;
    }
    let h = RealSet::point(int(0)).union(&RealSet::closed(int(2), int(3)));
    let e = ok(ok(means::lavg(&h, &s))?.into_result())?;
    let gap = rational::abs(&(&e.estimate - rat(5, 2)));
    ensure(gap <= rat(1, 1_000_000), || {
        format!("lavg({h}) = {}", rational::to_f64(&e.estimate))
    })?;
    for _ in 0..200 {
        let ivs = endpoints(&mut r, 3, -6, 6);
        let h = with_satellites(&mut r, &ivs);
        let eps = rat(r.gen_range(1..=8), r.gen_range(1..=8));
        let delta = rat(r.gen_range(1..=8), r.gen_range(1..=8));
        let twice = ok(measure::fatten(&ok(measure::fatten(&h, &eps))?, &delta))?;
        let once = ok(measure::fatten(&h, &(&eps + &delta)))?;
        ensure(twice == once, || {
            format!("S(S({h}, {eps}), {delta}) = {twice}, S(H, ε+δ) = {once}")
        })?;
    }
    Ok("100 unions within 1e-9, lavg({0}∪[2,3]) = 5/2, 200 semigroup cases exact".into())
}

/// Blocks `(c, s, w)`: a grid of `w·n + 1` points on `[c, c+s]`.
fn dilution_sequence(r: &mut ChaCha8Rng) -> (Vec<(Rational, Rational, u64)>, Rational) {
    let mut blocks = Vec::new();
    let mut at = random_rational(r, -8, 0, 4);
    for _ in 0..r.gen_range(1..=3) {
        let s = random_rational(r, 1, 2, 4);
        blocks.push((at.clone(), s.clone(), r.gen_range(1..=2)));
        at = at + s + rat(r.gen_range(1..=4), 4);
    }
    let weight: u64 = blocks.iter().map(|b| b.2).sum();
    let a: Rational = blocks
        .iter()
        .map(|(c, s, w)| uint(*w) * (c + s / int(2)))
        .sum::<Rational>()
        / uint(weight);
    (blocks, a)
}

fn c14_dilution() -> Check {
    let schedule = LimitSchedule::default().with_last(13);
    let run = |seq: u64| -> Result<Rational, String> {
        let (blocks, a) = dilution_sequence(&mut rng(1400 + seq));
        let pair = |n: u64| {
            let pts: Vec<Rational> = blocks
                .iter()
                .flat_map(|(c, s, w)| {
                    let m = w * n;
                    (0..=m).map(move |i| c + s * uint(i) / uint(m))
                })
                .collect();
            let mut pick = rng(seq << 32 | n);
            let k = 64 - n.leading_zeros() as usize;
            let removed: Vec<Rational> = rand::seq::index::sample(&mut pick, pts.len(), k)
                .into_iter()
                .map(|i| pts[i].clone())
                .collect();
            Ok((RealSet::points(pts), RealSet::points(removed)))
        };
        let rows = ok(analysis::dilution_check(pair, &a, &schedule))?;
        let last = rows.last().ok_or("empty schedule")?;
        ensure(last.gap <= rat(1, 1000), || {
            format!(
                "sequence {seq}: gap {} at n = {}",
                rational::to_f64(&last.gap),
                last.n
            )
        })?;
        ensure(rows.windows(2).all(|w| w[1].ratio < w[0].ratio), || {
            format!("sequence {seq}: ratio does not decrease")
        })?;
        Ok(last.gap.clone())
    };
    let gaps: Vec<Rational> = Execution::Parallel
        .map_range(0..50, run)
        .into_iter()
        .collect::<Result<_, _>>()?;
    let worst = gaps.iter().max().cloned().unwrap_or_default();
    Ok(format!(
        "50 sequences, worst final gap {:.2e}",
        rational::to_f64(&worst)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("closed-form transforms", c1_closed_form_transforms),
        ("transform failure witness", c2_transform_witness),
        ("extremal lemma", c3_extremal_lemma),
        ("derivative probes", c4_derivative_probes),
        ("pointwise derivative", c5_pointwise_derivative),
        ("hausdorff-continuity split", c6_hausdorff_split),
        ("eds underlying counterexample", c7_eds_counterexample),
        ("iso underlying non-monotonicity", c8_iso_non_monotone),
        ("u-boundedness", c9_u_boundedness),
        ("mean bounds", c10_mean_bounds),
        ("accumulation-point laws", c11_accumulation_laws),
        ("equi-monotonicity", c12_equi_monotone),
        ("limit sanity", c13_limit_sanity),
        ("dilution", c14_dilution),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
