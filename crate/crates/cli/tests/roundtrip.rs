use aspec_cli::document::{AlgebraBlock, ModuleBlock};
use aspec_cli::{parse, serialize, InputDocument};
use aspec_core::Field;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = aspec_core::Scalar> {
    (-9i64..10, 1i64..5).prop_map(|(n, d)| Field::Rational.frac(n, d).unwrap())
}

fn document() -> impl Strategy<Value = InputDocument> {
    let rel = proptest::collection::vec((scalar(), prop::sample::select(vec!["x*x", "x*y", "y*x", "y", "1"])), 1..4)
        .prop_map(|t| t.into_iter().filter(|(c, _)| !c.is_zero()).map(|(c, w)| (c, w.to_string())).collect::<Vec<_>>())
        .prop_filter("nonempty", |t| !t.is_empty());
    let action = || proptest::collection::vec(proptest::collection::vec(scalar(), 2), 2);
    (proptest::collection::vec(rel, 0..3), action(), action(), proptest::option::of(1usize..6)).prop_map(
        |(relations, ax, ay, order)| InputDocument {
            field: Field::Rational,
            algebra: AlgebraBlock::Poly { vars: vec!["x".into(), "y".into()], relations },
            modules: vec![ModuleBlock { name: "M".into(), dim: 2, actions: vec![("x".into(), ax), ("y".into(), ay)] }],
            points: vec![("P".into(), "M".into())],
            order,
            elems: vec!["x + 1/2 y".into()],
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn serialize_then_parse_is_identity(d in document()) {
        let text = serialize(&d);
        prop_assert_eq!(parse(&text).unwrap(), d);
    }
}
