mod common;

use proptest::prelude::*;

use common::arb_lts;
use lts_refine::formats::{parse_interface, parse_lts, write_interface, write_lts};
use lts_refine::{label, InterfaceSpec, RuleKey, RuleOutput};

fn arb_interface() -> impl Strategy<Value = InterfaceSpec> {
    let rule = (prop::option::of(0usize..3), prop::option::of(0usize..3), prop::option::of(0usize..4), prop::option::of(0usize..3));
    prop::collection::vec(rule, 0..8).prop_map(|rules| {
        let names = ["a", "b", "c", "d"];
        let mut m = InterfaceSpec::new(vec!["s0".into(), "s1".into(), "s2".into()]).unwrap();
        for (state, l, action, effect) in rules {
            // conflicting duplicates are rejected; keep the first
            let _ = m.add_rule(
                RuleKey { state, label: l.map(|i| label(names[i])) },
                RuleOutput { action: action.map(|i| label(names[i])), effect },
            );
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lts_files_round_trip(p in arb_lts(7, 3)) {
        prop_assert_eq!(parse_lts(&write_lts(&p)).unwrap(), p);
    }

    #[test]
    fn interface_files_round_trip(m in arb_interface()) {
        prop_assert_eq!(parse_interface(&write_interface(&m)).unwrap(), m);
    }
}
