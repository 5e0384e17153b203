mod common;

use proptest::prelude::*;

use common::{arb_lts, permuted};
use lts_refine::{refines, PreorderKind, Witness};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn preorders_are_reflexive(p in arb_lts(6, 3)) {
        for kind in PreorderKind::ALL {
            prop_assert!(refines(&p, &p, kind).unwrap().holds, "{}", kind);
        }
    }

    #[test]
    fn preorders_form_a_chain(p in arb_lts(5, 2), q in arb_lts(5, 2)) {
        let lt = refines(&p, &q, PreorderKind::Lt).unwrap().holds;
        let cond = refines(&p, &q, PreorderKind::CondLiveness).unwrap().holds;
        let live = refines(&p, &q, PreorderKind::Liveness).unwrap().holds;
        prop_assert!(!lt || cond);
        prop_assert!(!cond || live);
    }

    #[test]
    fn preorders_are_transitive(p in arb_lts(4, 2), q in arb_lts(4, 2), r in arb_lts(4, 2)) {
        for kind in PreorderKind::ALL {
            let pq = refines(&p, &q, kind).unwrap().holds;
            let qr = refines(&q, &r, kind).unwrap().holds;
            if pq && qr {
                prop_assert!(refines(&p, &r, kind).unwrap().holds, "{}", kind);
            }
        }
    }

    #[test]
    fn safety_is_reverse_trace_inclusion(p in arb_lts(5, 2), q in arb_lts(5, 2)) {
        let v = refines(&p, &q, PreorderKind::Safety).unwrap();
        let (sp, sq) = (p.enumerate_bounded(5), q.enumerate_bounded(5));
        if v.holds {
            prop_assert!(sq.ptr.is_subset(&sp.ptr));
        } else {
            let Some(Witness::Trace(w)) = &v.witness else { panic!("{:?}", v.witness) };
            let (sp, sq) = (p.enumerate_bounded(w.len()), q.enumerate_bounded(w.len()));
            prop_assert!(sq.ptr.contains(w) && !sp.ptr.contains(w), "{}", w);
        }
    }

    #[test]
    fn verdicts_ignore_state_numbering(
        p in arb_lts(5, 2),
        q in arb_lts(5, 2),
        seed in any::<u64>(),
    ) {
        let shuffle = |n: usize, salt: u64| {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by_key(|&i| (i as u64 + 1).wrapping_mul(seed ^ salt).rotate_left(17));
            perm
        };
        let p2 = permuted(&p, &shuffle(p.num_states(), 1));
        let q2 = permuted(&q, &shuffle(q.num_states(), 2));
        for kind in PreorderKind::ALL {
            let (a, b) = (refines(&p, &q, kind).unwrap(), refines(&p2, &q2, kind).unwrap());
            prop_assert_eq!(a.holds, b.holds, "{}", kind);
            prop_assert_eq!(a.witness, b.witness, "{}", kind);
        }
    }
}
