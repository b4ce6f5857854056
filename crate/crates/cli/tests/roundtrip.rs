use meanlab_cli::dsl::{parse, BinOp, Expr, Func, Pos, RuleExpr, SeqExpr};
use meanlab_core::rational::{rat, Rational};
use proptest::prelude::*;

fn num() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=20, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn seq(depth: u32) -> BoxedStrategy<SeqExpr> {
    let rule = prop_oneof![
        positive().prop_map(RuleExpr::Harmonic),
        (positive(), 1i64..=7).prop_map(|(c, k)| RuleExpr::Geometric(c, rat(k, 8))),
    ];
    let child = if depth == 0 {
        Just(None).boxed()
    } else {
        prop::option::of(seq(depth - 1).prop_map(Box::new)).boxed()
    };
    (
        num(),
        rule,
        1u64..=9,
        prop::option::of(10u64..=40),
        any::<bool>(),
        any::<bool>(),
        child,
    )
        .prop_map(
            |(limit, rule, from, to, below, with_limit, child)| SeqExpr {
                limit,
                rule,
                from,
                to,
                below,
                with_limit,
                child,
                pos: Pos::default(),
            },
        )
        .boxed()
}

fn leaf() -> impl Strategy<Value = Expr> {
    let pos = Pos::default();
    prop_oneof![
        (num(), positive(), any::<bool>(), any::<bool>()).prop_map(move |(lo, w, a, b)| {
            Expr::Interval {
                hi: &lo + w,
                lo,
                lo_closed: a,
                hi_closed: b,
                pos,
            }
        }),
        prop::collection::vec(num(), 0..5).prop_map(move |xs| Expr::Points { xs, pos }),
        seq(1).prop_map(Expr::Seq),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let pos = Pos::default();
    leaf().prop_recursive(4, 24, 3, move |inner| {
        prop_oneof![
            (
                inner.clone(),
                inner.clone(),
                prop_oneof![
                    Just(BinOp::Union),
                    Just(BinOp::Diff),
                    Just(BinOp::Intersect)
                ]
            )
                .prop_map(move |(l, r, op)| Expr::Binary {
                    op,
                    lhs: Box::new(l),
                    rhs: Box::new(r),
                    pos
                }),
            (inner, prop::sample::select(Func::ALL.to_vec()), num()).prop_map(
                move |(arg, func, p)| Expr::Call {
                    func,
                    arg: Box::new(arg),
                    param: func.takes_param().then_some(p),
                    pos
                }
            ),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_expressions_reparse_to_the_same_tree(e in expr()) {
        let text = e.to_string();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn set_display_parses_back_to_the_set(e in expr()) {
        if let Ok(h) = e.eval() {
            let again = parse(&h.to_string()).unwrap().eval().unwrap();
            prop_assert_eq!(again, h);
        }
    }
}

#[test]
fn reference_sets_parse() {
    for text in [
        "[0,1] u (2,3]",
        "{0,3} u (1,2)",
        "seq(limit=0, rule=harmonic(1), from=1)",
        "[0,1] u [2,3] \\ (1,2)",
        "seq(limit=0, rule=harmonic(1), from=2) u seq(limit=1, rule=harmonic(1), from=2) u {0, 2}",
        "seq(limit=0, rule=geometric(1,1/2), from=1, side=below, with_limit, child=seq(limit=0, rule=harmonic(1/8), from=1))",
        "fatten(seq(limit=0, rule=harmonic(1), from=1), 1/10)",
    ] {
        let e = parse(text).unwrap();
        assert_eq!(parse(&e.to_string()).unwrap(), e, "{text}");
        e.eval().unwrap();
    }
}
