//! Randomized algebraic properties over small universes of varying size.

use multirel::closures::{closure, ClosureKind};
use multirel::finsets::{ObjType, Universe};
use multirel::mrcore::{
    co_compose, inner_complement, inner_intersection, inner_union, peleg_compose,
};
use multirel::relcore::{is_subset, Relation};
use proptest::prelude::*;

fn universe(xc: usize, yc: usize) -> Universe {
    Universe::declare(&[("X", xc), ("Y", yc)]).unwrap()
}

fn mrel(u: &Universe, src: &str, inner: &str, code: u64) -> Relation {
    let src = ObjType::base(src);
    let tgt = ObjType::pow(ObjType::base(inner));
    let bits = u.card(&src).unwrap() * u.card(&tgt).unwrap();
    Relation::from_encoding(u, src, tgt, (code & ((1 << bits) - 1)) as u128).unwrap()
}

proptest! {
    #[test]
    fn inner_de_morgan(xc in 1..=2usize, yc in 1..=3usize, rc: u64, sc: u64) {
        let u = universe(xc, yc);
        let r = mrel(&u, "X", "Y", rc);
        let s = mrel(&u, "X", "Y", sc);
        prop_assert_eq!(
            inner_complement(&inner_union(&r, &s).unwrap()).unwrap(),
            inner_intersection(&inner_complement(&r).unwrap(), &inner_complement(&s).unwrap())
                .unwrap()
        );
        prop_assert_eq!(inner_complement(&inner_complement(&r).unwrap()).unwrap(), r);
    }

    #[test]
    fn closures_are_closure_operators(xc in 1..=2usize, yc in 1..=3usize, rc: u64, sc: u64) {
        let u = universe(xc, yc);
        let r = mrel(&u, "X", "Y", rc);
        let s = mrel(&u, "X", "Y", sc);
        for kind in [ClosureKind::Up, ClosureKind::Down, ClosureKind::Convex] {
            let cr = closure(&u, kind, &r).unwrap();
            prop_assert!(is_subset(&r, &cr).unwrap());
            prop_assert_eq!(closure(&u, kind, &cr).unwrap(), cr.clone());
            if is_subset(&r, &s).unwrap() {
                prop_assert!(is_subset(&cr, &closure(&u, kind, &s).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn peleg_weak_associativity(xc in 1..=2usize, rc: u64, sc: u64, tc: u64) {
        let u = universe(xc, xc);
        let r = mrel(&u, "X", "X", rc);
        let s = mrel(&u, "X", "X", sc);
        let t = mrel(&u, "X", "X", tc);
        let lhs = peleg_compose(&u, &peleg_compose(&u, &r, &s).unwrap(), &t).unwrap();
        let rhs = peleg_compose(&u, &r, &peleg_compose(&u, &s, &t).unwrap()).unwrap();
        prop_assert!(is_subset(&lhs, &rhs).unwrap());
    }

    #[test]
    fn co_composition_conjugate(xc in 1..=2usize, yc in 1..=2usize, rc: u64, sc: u64) {
        let u = universe(xc, yc);
        let r = mrel(&u, "X", "Y", rc);
        let s = mrel(&u, "Y", "Y", sc);
        prop_assert_eq!(
            peleg_compose(&u, &r, &s).unwrap(),
            inner_complement(&co_compose(&u, &r, &inner_complement(&s).unwrap()).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn json_round_trip(xc in 1..=2usize, yc in 1..=3usize, rc: u64) {
        let u = universe(xc, yc);
        let r = mrel(&u, "X", "Y", rc);
        let back = Relation::from_json(&u, &r.to_json(&u).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
