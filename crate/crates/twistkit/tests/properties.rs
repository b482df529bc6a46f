//! Invariants over random curves, words and chains.

use std::sync::OnceLock;

use proptest::prelude::*;

use twistkit::chains::{alexander_chain, chain_isomorphism, verify_isomorphism, Chain, Isomorphism};
use twistkit::curves::{intersection, same_curve};
use twistkit::homo::HomomorphismTable;
use twistkit::suite::{run_suite, SuiteConfig};
use twistkit::twists::apply;
use twistkit::window::{annulus_oracle, annulus_twist, Window};
use twistkit::{Atlas, Curve, MappingClass};

const STAGE: usize = 3;

fn atlas() -> &'static Atlas {
    static A: OnceLock<Atlas> = OnceLock::new();
    A.get_or_init(|| Atlas::from_spec("binary", STAGE).unwrap())
}

fn ids() -> &'static [String] {
    static IDS: OnceLock<Vec<String>> = OnceLock::new();
    IDS.get_or_init(|| atlas().chain(2).unwrap())
}

fn chain_curve() -> impl Strategy<Value = String> {
    (0..ids().len()).prop_map(|i| ids()[i].clone())
}

fn word() -> impl Strategy<Value = MappingClass> {
    prop::collection::vec((chain_curve(), prop_oneof![Just(-1), Just(1), Just(2)]), 0..4)
        .prop_map(|ls| MappingClass::new(ls.into_iter().map(|(c, k)| (Curve::named(c), k)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_is_symmetric(a in chain_curve(), b in chain_curve()) {
        let at = atlas();
        prop_assert_eq!(
            intersection(at, &Curve::named(&a), &Curve::named(&b)).unwrap(),
            intersection(at, &Curve::named(&b), &Curve::named(&a)).unwrap()
        );
    }

    #[test]
    fn mapping_classes_preserve_intersection(f in word(), a in chain_curve(), b in chain_curve()) {
        let at = atlas();
        let (ca, cb) = (Curve::named(&a), Curve::named(&b));
        let before = intersection(at, &ca, &cb).unwrap();
        let (fa, fb) = (apply(at, &f, &ca).unwrap(), apply(at, &f, &cb).unwrap());
        prop_assert_eq!(intersection(at, &fa, &fb).unwrap(), before);
    }

    #[test]
    fn inverse_undoes(f in word(), c in chain_curve()) {
        let at = atlas();
        let c = Curve::named(c);
        let back = apply(at, &f.inverse(), &apply(at, &f, &c).unwrap()).unwrap();
        prop_assert!(same_curve(at, &back, &c).unwrap());
    }

    #[test]
    fn twist_inequality(a in chain_curve(), b in chain_curve(), c in chain_curve(), k in -3i32..=3) {
        let at = atlas();
        let i = |x: &Curve, y: &Curve| intersection(at, x, y).unwrap() as i64;
        let (ca, cb, cc) = (Curve::named(&a), Curve::named(&b), Curve::named(&c));
        let moved = apply(at, &MappingClass::twist(a.clone(), k), &cc).unwrap();
        prop_assert!(i(&moved, &cb) >= i64::from(k.abs()) * i(&ca, &cc) * i(&ca, &cb) - i(&cc, &cb));
    }

    #[test]
    fn annulus_rule_matches_routing(m in 0u32..12, t in -30i64..30, k in -6i64..6) {
        let t = if m == 0 { t.abs() } else { t };
        prop_assert_eq!(annulus_twist(m, t, k), annulus_oracle(m, t, k));
    }

    #[test]
    fn window_twists_preserve_intersection(p in -6i64..6, q in -6i64..6, k in -3i64..3) {
        prop_assume!(twistkit::window::gcd(p, q) == 1);
        let a = (1, 0);
        for w in [Window::OneHoledTorus, Window::FourHoledSphere] {
            let moved = w.twist(a, k, (p, q));
            prop_assert_eq!(w.intersection(a, moved), w.intersection(a, (p, q)));
        }
    }

    #[test]
    fn coords_json_round_trip(entries in prop::collection::btree_map("v[0-9]\\.blue[0-2]", (1u32..9, -50i64..50), 0..4)) {
        let c = Curve::Coords(entries);
        let s = serde_json::to_string(&c).unwrap();
        prop_assert_eq!(serde_json::from_str::<Curve>(&s).unwrap(), c);
    }

    #[test]
    fn word_json_round_trip(f in word()) {
        let s = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<MappingClass>(&s).unwrap(), f);
    }

    #[test]
    fn suites_are_deterministic(seed in 0u64..1000) {
        let mut cfg = SuiteConfig::new("conjugation");
        cfg.seed = seed;
        cfg.stages = Some(2);
        prop_assert_eq!(run_suite(&cfg).unwrap(), run_suite(&cfg).unwrap());
    }
}

fn alexander(fam: &str, n: usize) -> Chain {
    alexander_chain(&Atlas::from_spec(fam, n).unwrap()).unwrap()
}

#[test]
fn chain_isomorphism_is_reflexive_and_symmetric() {
    for fam in ["ray", "binary", "2-rays"] {
        for n in 0..=4 {
            let c = alexander(fam, n);
            let Isomorphism::Bijection(pairs) = chain_isomorphism(&c, &c, n).unwrap() else {
                panic!("{fam} stage {n} is not isomorphic to itself");
            };
            assert!(verify_isomorphism(&c, &c, &pairs.into_iter().collect()));
        }
    }
    for n in 0..=4 {
        for (x, y) in [("ray", "binary"), ("binary", "2-rays"), ("ray", "2-rays")] {
            let (cx, cy) = (alexander(x, n), alexander(y, n));
            let there = matches!(chain_isomorphism(&cx, &cy, n).unwrap(), Isomorphism::Bijection(_));
            let back = matches!(chain_isomorphism(&cy, &cx, n).unwrap(), Isomorphism::Bijection(_));
            assert_eq!(there, back, "{x}/{y} at stage {n}");
        }
    }
}

#[test]
fn entity_json_round_trips() {
    let at = Atlas::from_spec("2-rays", 3).unwrap();
    let ex = serde_json::to_string(at.exhaustion()).unwrap();
    assert_eq!(&serde_json::from_str::<twistkit::surface::Exhaustion>(&ex).unwrap(), at.exhaustion());
    let c = alexander_chain(&at).unwrap();
    assert_eq!(serde_json::from_str::<Chain>(&serde_json::to_string(&c).unwrap()).unwrap(), c);
    let tab = HomomorphismTable::identity(&at);
    let back = HomomorphismTable::from_json("identity", &tab.to_json().unwrap()).unwrap();
    assert_eq!(back.to_json().unwrap(), tab.to_json().unwrap());
}
