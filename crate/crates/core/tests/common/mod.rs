#![allow(dead_code)]

use proptest::prelude::*;

use lts_refine::{Action, ActionLabel, Alphabet, Lts, Transition, Word};

pub const NAMES: [&str; 3] = ["a", "b", "c"];

pub fn alphabet(k: usize) -> Alphabet {
    Alphabet::from_names(&NAMES[..k]).unwrap()
}

/// LTSs with up to `max_states` states over the first `k` names, with
/// roughly one silent edge in four.
pub fn arb_lts(max_states: usize, k: usize) -> impl Strategy<Value = Lts> {
    (1..=max_states).prop_flat_map(move |n| {
        let edge = (0..n, 0..=k * 3, 0..n);
        (Just(n), 0..n, prop::collection::vec(edge, 0..=2 * n + 2))
    })
    .prop_map(move |(n, initial, edges)| {
        let labels = alphabet(k);
        let transitions: Vec<Transition> = edges
            .into_iter()
            .map(|(source, l, target)| Transition {
                source,
                action: if l < k { Action::Silent } else { Action::Visible(labels.label(l % k).clone()) },
                target,
            })
            .collect();
        Lts::new(n, initial, labels, transitions).unwrap()
    })
}

pub fn arb_word(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k, 0..=max_len)
        .prop_map(move |ids| Word::new(ids.into_iter().map(|i| ActionLabel::new(NAMES[i]).unwrap()).collect()))
}

/// The same LTS with states renumbered by `perm`.
pub fn permuted(p: &Lts, perm: &[usize]) -> Lts {
    let transitions: Vec<Transition> = p
        .transitions()
        .map(|t| Transition {
            source: perm[t.source],
            action: t.action,
            target: perm[t.target],
        })
        .collect();
    Lts::new(p.num_states(), perm[p.initial()], p.alphabet().clone(), transitions).unwrap()
}

/// Whether `s` can take `len` consecutive silent steps.
pub fn silent_path_of_length(p: &Lts, s: usize, len: usize) -> bool {
    let n = p.num_states();
    let mut can = vec![true; n];
    for _ in 0..len {
        let mut next = vec![false; n];
        for t in p.transitions() {
            if t.action == Action::Silent && can[t.target] {
                next[t.source] = true;
            }
        }
        can = next;
    }
    can[s]
}
