//! Property-based invariants: lattice laws on intervals, literal round-trips,
//! and order properties of the clearing operator on random EN instances.

use proptest::prelude::*;

use clearnet_core::lattice::{distance, LatticeValue, MetricSpec, PaymentSpace};
use clearnet_core::value::{format_ext_real, parse_ext_real, Backend, ExtReal};
use clearnet_core::{eisenberg_noe, phi, EisenbergNoeInstance, InstitutionState};

fn rational(n: i64, d: i64) -> ExtReal {
    ExtReal::from_ratio(n, d, Backend::Rational)
}

prop_compose! {
    fn arb_value()(num in 0i64..10_000, den in 1i64..100) -> ExtReal {
        rational(num, den)
    }
}

fn lv(v: ExtReal) -> LatticeValue {
    LatticeValue::ExtReal(v)
}

proptest! {
    #[test]
    fn interval_lattice_laws(a in arb_value(), b in arb_value(), c in arb_value()) {
        let s = PaymentSpace::unbounded(Backend::Rational);
        let (a, b, c) = (lv(a), lv(b), lv(c));
        // Commutativity and associativity of join.
        prop_assert_eq!(s.join(&a, &b).unwrap(), s.join(&b, &a).unwrap());
        prop_assert_eq!(
            s.join(&s.join(&a, &b).unwrap(), &c).unwrap(),
            s.join(&a, &s.join(&b, &c).unwrap()).unwrap()
        );
        // Absorption both ways.
        prop_assert_eq!(s.meet(&a, &s.join(&a, &b).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(s.join(&a, &s.meet(&a, &b).unwrap()).unwrap(), a.clone());
        // Order compatibility: a <= b iff join is b.
        prop_assert_eq!(s.leq(&a, &b).unwrap(), s.join(&a, &b).unwrap() == b);
    }

    #[test]
    fn literal_round_trip(v in arb_value()) {
        let text = format_ext_real(&v);
        let parsed = parse_ext_real(&text, Backend::Rational).unwrap();
        prop_assert_eq!(parsed, v);
    }

    #[test]
    fn l1_metric_axioms(a in arb_value(), b in arb_value(), c in arb_value()) {
        let s = PaymentSpace::unbounded(Backend::Rational);
        let (a, b, c) = (lv(a), lv(b), lv(c));
        let d = |x: &LatticeValue, y: &LatticeValue| {
            distance(MetricSpec::L1Abs, &s, x, y).unwrap()
        };
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &a).is_zero());
        prop_assert!(d(&a, &c).leq(&d(&a, &b).add(&d(&b, &c))));
    }

    #[test]
    fn en_phi_is_monotone_and_bounded(
        assets in proptest::collection::vec(0i64..30, 3),
        liabilities in proptest::collection::vec(1i64..20, 6),
        x_raw in proptest::collection::vec(0i64..50, 3),
        bump in proptest::collection::vec(0i64..10, 3),
    ) {
        let ids = ["a", "b", "c"];
        let asset_strs: Vec<String> = assets.iter().map(|a| a.to_string()).collect();
        let vertices: Vec<(&str, &str)> = ids
            .iter()
            .zip(&asset_strs)
            .map(|(id, a)| (*id, a.as_str()))
            .collect();
        let liab_strs: Vec<String> = liabilities.iter().map(|l| l.to_string()).collect();
        let pairs = [("a","b"), ("b","a"), ("a","c"), ("c","a"), ("b","c"), ("c","b")];
        let edges: Vec<(&str, &str, &str)> = pairs
            .iter()
            .zip(&liab_strs)
            .map(|((f, t), l)| (*f, *t, l.as_str()))
            .collect();
        let inst = EisenbergNoeInstance::from_parts(&vertices, &edges).unwrap();
        let net = eisenberg_noe(&inst, Backend::Rational).unwrap();

        let x = InstitutionState(
            net.vertices
                .iter()
                .zip(&x_raw)
                .map(|(v, n)| (v.clone(), lv(ExtReal::from_int(*n, Backend::Rational))))
                .collect(),
        );
        let y = InstitutionState(
            net.vertices
                .iter()
                .zip(x_raw.iter().zip(&bump))
                .map(|(v, (n, d))| {
                    (v.clone(), lv(ExtReal::from_int(n + d, Backend::Rational)))
                })
                .collect(),
        );
        prop_assert!(x.leq(&net, &y).unwrap());
        prop_assert!(phi(&net, &x).leq(&net, &phi(&net, &y)).unwrap());

        // Every aggregate stays below the institution's total liabilities.
        let fx = phi(&net, &x);
        for v in &net.vertices {
            let bar = net.outgoing(v).iter().fold(
                ExtReal::from_int(0, Backend::Rational),
                |acc, e| acc.add(net.liability[&e.id].as_ext_real().unwrap()),
            );
            prop_assert!(fx.0[v].as_ext_real().unwrap().leq(&bar));
        }
    }
}
