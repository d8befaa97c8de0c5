use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::{Map, Value};
use thinlab::json;
use thinlab::report::{self, Report};
use thinlab::svg::{render_svg, SvgOptions};
use thinlab_core::{catalog, GeneratorSet, IntMatrix};

fn big_int() -> impl Strategy<Value = BigInt> {
    // small, near the 2^53 boundary, and far past it
    prop_oneof![
        (-1000i64..=1000).prop_map(BigInt::from),
        (-4i64..=4).prop_map(|d| BigInt::from((1i64 << 53) + d)),
        (-4i64..=4).prop_map(|d| -BigInt::from((1i64 << 53) + d)),
        (any::<i64>(), any::<i64>()).prop_map(|(a, b)| BigInt::from(a) * BigInt::from(b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn integers_round_trip_and_stay_exact(x in big_int()) {
        let v = json::int(&x);
        let text = serde_json::to_string(&v).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(json::parse_int(&back).unwrap(), x.clone());
        // a double holds every integer emitted as a number
        if let Some(f) = back.as_f64() {
            prop_assert_eq!(BigInt::from(f as i128), x);
        }
    }

    #[test]
    fn generator_sets_round_trip(words in prop::collection::vec(prop::collection::vec(-1_000_000_000i64..=1_000_000_000, 1..5), 1..4)) {
        // T^a S T^b S … has entries well past 2^53
        let gens: Vec<IntMatrix> = words
            .iter()
            .map(|exps| {
                exps.iter().fold(IntMatrix::identity(2), |m, &e| {
                    let t = IntMatrix::from_rows(&[[1, e], [0, 1]]).unwrap();
                    let s = IntMatrix::from_rows(&[[0, 1], [-1, 0]]).unwrap();
                    m.mul(&t).unwrap().mul(&s).unwrap()
                })
            })
            .collect();
        let g = GeneratorSet::new("random", gens).unwrap();
        let v = json::generator_set(&g);
        let back = json::parse_generator_set(&serde_json::from_str(&v.to_string()).unwrap()).unwrap();
        prop_assert_eq!(back.generators(), g.generators());
    }

    #[test]
    fn reports_with_exact_values_validate(xs in prop::collection::vec(big_int(), 0..6)) {
        let mut r = Report::new();
        r.generators = Some(json::generator_set(&catalog::generators("ex5").unwrap()));
        r.insert("values", Value::Array(xs.iter().map(json::int).collect()));
        r.artifact("packing.svg", "out/packing.svg");
        let parsed: Value = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert!(report::validate(&parsed).is_ok());
        let keys: Vec<&String> = parsed.as_object().unwrap().keys().collect();
        prop_assert_eq!(keys, ["schema", "version", "generators", "results", "artifacts"]);
    }
}

#[test]
fn empty_report_validates() {
    report::validate(&report::emit_report(Map::new())).unwrap();
}

#[test]
fn svg_of_an_empty_orbit_is_well_formed() {
    let g = catalog::generators("ex10").unwrap();
    let mut orbit = thinlab::pipeline::pack(&g, 1).unwrap();
    orbit.circles.clear();
    let svg = render_svg(&orbit, SvgOptions { labels: true, ..SvgOptions::default() });
    assert!(svg.starts_with("<?xml"));
    assert!(svg.ends_with("</svg>\n"));
    assert!(svg.contains("<g id=\"orbit\">\n</g>"));
    assert_eq!(svg.matches("data-depth=").count(), 0);
    assert!(!svg.contains("NaN") && !svg.contains("inf"));
}

#[test]
fn svg_is_deterministic_without_timestamp() {
    let g = catalog::generators("ex10").unwrap();
    let orbit = thinlab::pipeline::pack(&g, 4).unwrap();
    let opts = SvgOptions { labels: true, timestamp: false, mirrors: true };
    assert_eq!(render_svg(&orbit, opts), render_svg(&orbit, opts));
    assert!(!render_svg(&orbit, opts).contains("generated at"));
}
