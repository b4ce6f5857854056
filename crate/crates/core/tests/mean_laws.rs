use meanlab_core::means::{
    amean, avg1, avg_f, iso_n, lavg_exact, m_acc, transform_kf, MonotoneFunc,
};
use meanlab_core::rational::{int, rat};
use meanlab_core::{Cluster, Interval, Mean, MeanValue, Rational, RealSet};
use proptest::prelude::*;

/// Disjoint closed intervals from sorted distinct grid cuts.
fn blocks() -> impl Strategy<Value = Vec<(Rational, Rational)>> {
    prop::collection::btree_set(-40i64..=40, 2..=8).prop_map(|cuts| {
        let cuts: Vec<i64> = cuts.into_iter().collect();
        cuts.chunks_exact(2)
            .map(|p| (rat(p[0], 4), rat(p[1], 4)))
            .collect()
    })
}

fn union_of(bs: &[(Rational, Rational)]) -> RealSet {
    RealSet::normalize(
        bs.iter()
            .map(|(a, b)| Interval::closed(a.clone(), b.clone()))
            .collect(),
        vec![],
        vec![],
    )
    .unwrap()
}

fn length(bs: &[(Rational, Rational)]) -> Rational {
    bs.iter().map(|(a, b)| b - a).sum()
}

fn moment(bs: &[(Rational, Rational)], p: u32) -> Rational {
    let q = int(i64::from(p) + 1);
    bs.iter()
        .map(|(a, b)| {
            (num_traits::pow(b.clone(), p as usize + 1)
                - num_traits::pow(a.clone(), p as usize + 1))
                / &q
        })
        .sum()
}

fn affine() -> impl Strategy<Value = (Rational, Rational)> {
    ((-6i64..=6).prop_filter("nonzero", |a| *a != 0), -20i64..=20)
        .prop_map(|(a, b)| (rat(a, 2), rat(b, 3)))
}

fn finite() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set(-100i64..=100, 1..=12)
        .prop_map(|s| s.into_iter().map(|k| rat(k, 5)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn avg1_matches_moment_ratio_and_is_internal(bs in blocks()) {
        let h = union_of(&bs);
        let v = avg1(&h).unwrap();
        prop_assert_eq!(&v, &(moment(&bs, 1) / length(&bs)));
        let (lo, hi) = h.bounds().unwrap();
        prop_assert!(lo <= v && v <= hi);
        prop_assert_eq!(lavg_exact(&h), Some(v));
    }

    #[test]
    fn avg1_is_affine_equivariant(bs in blocks(), (a, b) in affine()) {
        let h = union_of(&bs);
        let image = h.affine(&a, &b).unwrap();
        prop_assert_eq!(avg1(&image).unwrap(), &a * avg1(&h).unwrap() + &b);
    }

    #[test]
    fn amean_is_affine_equivariant(xs in finite(), (a, b) in affine()) {
        let h = RealSet::points(xs.clone());
        let oracle: Rational = xs.iter().sum::<Rational>() / int(xs.len() as i64);
        prop_assert_eq!(amean(&h).unwrap(), oracle.clone());
        prop_assert_eq!(amean(&h.affine(&a, &b).unwrap()).unwrap(), &a * &oracle + &b);
        prop_assert_eq!(iso_n(&h, 1).unwrap(), oracle.clone());
        prop_assert_eq!(lavg_exact(&h), Some(oracle));
    }

    #[test]
    fn affine_transform_leaves_avg1_unchanged(bs in blocks(), (a, b) in affine()) {
        let h = union_of(&bs);
        let f = MonotoneFunc::affine(a, b).unwrap();
        let v = transform_kf(Mean::Avg1, f.clone()).evaluate(&h).unwrap();
        prop_assert_eq!(&v, &MeanValue::Exact(avg1(&h).unwrap()));
        prop_assert_eq!(avg_f(&f, &h).unwrap(), v);
    }

    #[test]
    fn cubic_avg_f_is_the_cube_root_of_the_third_moment(bs in blocks()) {
        let image = moment(&bs, 3) / length(&bs);
        match avg_f(&MonotoneFunc::odd_power(3).unwrap(), &union_of(&bs)).unwrap() {
            MeanValue::Exact(x) => prop_assert_eq!(num_traits::pow(x, 3), image),
            MeanValue::Preimage { image: y, .. } => prop_assert_eq!(y, image),
            MeanValue::Approx(_) => prop_assert!(false, "polynomial transform gave an enclosure"),
        }
    }

    #[test]
    fn avg1_of_disjoint_union_is_the_length_weighted_mean(a in blocks(), b in blocks()) {
        let shift = int(25);
        let moved: Vec<_> = b.iter().map(|(x, y)| (x + &shift, y + &shift)).collect();
        let (ha, hb) = (union_of(&a), union_of(&moved));
        let (la, lb) = (length(&a), length(&moved));
        let expected = (&la * avg1(&ha).unwrap() + &lb * avg1(&hb).unwrap()) / (la + lb);
        prop_assert_eq!(avg1(&ha.union(&hb)).unwrap(), expected);
    }

    #[test]
    fn macc_of_a_level_one_set_is_the_mean_of_its_limits(
        slots in prop::collection::btree_set(-5i64..=5, 1..=4),
        xs in prop::collection::vec(-60i64..=60, 0..=5),
    ) {
        let limits: Vec<Rational> = slots.iter().map(|s| int(4 * s)).collect();
        let clusters: Vec<Cluster> = limits.iter().map(|l| Cluster::harmonic(l.clone(), rat(1, 2), 1).unwrap()).collect();
        let points: Vec<Rational> = xs.iter().map(|k| rat(*k, 3)).collect();
        let h = RealSet::normalize(vec![], points, clusters).unwrap();
        prop_assert_eq!(h.level().unwrap(), 1);
        let oracle: Rational = limits.iter().sum::<Rational>() / int(limits.len() as i64);
        prop_assert_eq!(m_acc(&h).unwrap(), oracle);
    }
}
