mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::arb_lts;
use lts_refine::{hide, label, par, rename, state_op, ActionLabel, InterfaceSpec, RenamingMap, RuleKey, RuleOutput};

fn labels(names: &[&str]) -> BTreeSet<ActionLabel> {
    names.iter().map(|n| label(n)).collect()
}

fn subset(mask: u8) -> BTreeSet<ActionLabel> {
    ["a", "b", "c"]
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, n)| label(n))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn par_is_commutative(p in arb_lts(4, 3), q in arb_lts(4, 3), mask in 0u8..8) {
        let sync = subset(mask);
        let (pq, qp) = (par(&p, &sync, &q).unwrap(), par(&q, &sync, &p).unwrap());
        let (a, b) = (pq.enumerate_bounded(4), qp.enumerate_bounded(4));
        prop_assert_eq!(a.ptr, b.ptr);
        prop_assert_eq!(a.deadlocks, b.deadlocks);
        prop_assert_eq!(a.divergences, b.divergences);
    }

    #[test]
    fn hiding_twice_hides_the_union(p in arb_lts(6, 3), i in 0u8..8, j in 0u8..8) {
        let (i, j) = (subset(i), subset(j));
        let twice = hide(&hide(&p, &i).unwrap(), &j).unwrap();
        let once = hide(&p, &i.union(&j).cloned().collect()).unwrap();
        let (a, b) = (twice.enumerate_bounded(4), once.enumerate_bounded(4));
        prop_assert_eq!(a.ptr, b.ptr);
        prop_assert_eq!(a.deadlocks, b.deadlocks);
        prop_assert_eq!(a.divergences, b.divergences);
    }

    #[test]
    fn singleton_state_operator_is_a_renaming(p in arb_lts(6, 3), targets in prop::collection::vec(0usize..4, 3)) {
        let names = ["a", "b", "c", "d"];
        let mut m = InterfaceSpec::new(vec!["only".into()]).unwrap();
        let mut pairs = Vec::new();
        for (from, &t) in names.iter().zip(&targets) {
            m.add_rule(
                RuleKey { state: Some(0), label: Some(label(from)) },
                RuleOutput { action: Some(label(names[t])), effect: None },
            ).unwrap();
            pairs.push((label(from), label(names[t])));
        }
        let r = RenamingMap::new(p.alphabet(), &pairs).unwrap();
        let (a, b) = (state_op(&m, 0, &p).unwrap(), rename(&r, &p).unwrap());
        prop_assert_eq!(a.alphabet(), b.alphabet());
        let (a, b) = (a.enumerate_bounded(4), b.enumerate_bounded(4));
        prop_assert_eq!(a.ptr, b.ptr);
        prop_assert_eq!(a.deadlocks, b.deadlocks);
        prop_assert_eq!(a.divergences, b.divergences);
    }
}

#[test]
fn hiding_a_visible_loop_creates_divergence() {
    let p = lts_refine::Lts::builder(1).visible(0, "a", 0).build().unwrap();
    let h = hide(&p, &labels(&["a"])).unwrap();
    assert!(h.enumerate_bounded(2).divergences.contains(&lts_refine::Word::empty()));
}
