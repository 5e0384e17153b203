mod common;

use proptest::prelude::*;

use common::{alphabet, arb_lts};
use lts_refine::{denote, Failure, FloodMode, Word};

fn refusal(mask: u8) -> Vec<lts_refine::ActionLabel> {
    alphabet(3).iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, l)| l.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn deadlocks_are_full_refusals(p in arb_lts(6, 3)) {
        let d = denote(&p, FloodMode::None);
        let full: Vec<_> = p.alphabet().iter().cloned().collect();
        let sem = p.enumerate_bounded(4);
        for w in &sem.ptr {
            let refuses_all = d.query_failure(&Failure::new(w.clone(), full.clone())).unwrap();
            prop_assert_eq!(refuses_all, sem.deadlocks.contains(w), "{}", w);
        }
    }

    #[test]
    fn partial_traces_are_divergences_or_stable(p in arb_lts(6, 3)) {
        let d = denote(&p, FloodMode::None);
        let sem = p.enumerate_bounded(4);
        for w in &sem.ptr {
            let stable = d.query_failure(&Failure::new(w.clone(), [])).unwrap();
            prop_assert!(stable || d.is_divergence(w).unwrap(), "{}", w);
            prop_assert_eq!(d.is_divergence(w).unwrap(), sem.divergences.contains(w), "{}", w);
        }
    }

    #[test]
    fn flooding_modes_are_monotone(p in arb_lts(6, 3), masks in prop::collection::vec(0u8..8, 4)) {
        let none = denote(&p, FloodMode::None);
        let d = denote(&p, FloodMode::D);
        let bot = denote(&p, FloodMode::Bot);
        let sem = p.enumerate_bounded(3);
        // extend the probe set past the partial traces
        let mut words: Vec<Word> = sem.ptr.iter().cloned().collect();
        for w in sem.ptr.iter() {
            for l in p.alphabet().iter() {
                words.push(w.extended(l.clone()));
            }
        }
        for w in &words {
            prop_assert!(!none.is_trace(w).unwrap() || d.is_trace(w).unwrap());
            prop_assert!(!d.is_trace(w).unwrap() || bot.is_trace(w).unwrap());
            prop_assert!(!none.is_divergence(w).unwrap() || d.is_divergence(w).unwrap());
            prop_assert!(!d.is_divergence(w).unwrap() || bot.is_divergence(w).unwrap());
            for &m in &masks {
                let f = Failure::new(w.clone(), refusal(m));
                let (a, b, c) = (none.query_failure(&f).unwrap(), d.query_failure(&f).unwrap(), bot.query_failure(&f).unwrap());
                prop_assert!(!a || b, "{}", f);
                prop_assert!(!b || c, "{}", f);
            }
        }
    }
}
