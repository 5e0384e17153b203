//! Seeded random instances.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lts_refine::{Action, ActionLabel, Alphabet, InterfaceSpec, Lts, RuleKey, RuleOutput, Transition};

/// Visible label pool. Fresh labels used by testers and history operators
/// (`c`, `g`, `bad`, ...) are deliberately absent.
pub const LABEL_POOL: [&str; 4] = ["a", "b", "d", "e"];

/// Shape of a random LTS.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    /// Number of states is drawn uniformly from `1..=max_states`.
    pub max_states: usize,
    pub alphabet_size: usize,
    /// Expected number of outgoing transitions per state.
    pub density: f64,
    /// Fraction of transitions that are silent.
    pub silent_probability: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(max_states: usize, alphabet_size: usize, seed: u64) -> Self {
        assert!(max_states > 0 && (1..=LABEL_POOL.len()).contains(&alphabet_size));
        GenConfig {
            max_states,
            alphabet_size,
            density: 1.6,
            silent_probability: 0.25,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        GenConfig { seed, ..self }
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::from_names(&LABEL_POOL[..self.alphabet_size]).expect("pool labels are valid")
    }
}

/// Per-sample seed derived from a suite seed; distinct samples never share a
/// stream.
pub fn sample_seed(suite_seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = suite_seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A reproducible LTS with initial state 0.
pub fn gen_lts(cfg: &GenConfig) -> Lts {
    gen_lts_with(cfg, &mut rng(cfg.seed))
}

pub fn gen_lts_with(cfg: &GenConfig, r: &mut impl Rng) -> Lts {
    let alphabet = cfg.alphabet();
    let n = r.random_range(1..=cfg.max_states);
    let k = alphabet.len();
    let mut transitions = BTreeSet::new();
    let per_target = cfg.density / n as f64;
    for s in 0..n {
        for t in 0..n {
            if r.random_bool((per_target * cfg.silent_probability).clamp(0.0, 1.0)) {
                transitions.insert(Transition {
                    source: s,
                    action: Action::Silent,
                    target: t,
                });
            }
            for l in alphabet.iter() {
                let p = per_target * (1.0 - cfg.silent_probability) / k as f64;
                if r.random_bool(p.clamp(0.0, 1.0)) {
                    transitions.insert(Transition {
                        source: s,
                        action: Action::Visible(l.clone()),
                        target: t,
                    });
                }
            }
        }
    }
    Lts::new(n, 0, alphabet, transitions).expect("generated indices are in range")
}

/// Adds a silent cycle through a random state so that it diverges.
pub fn with_silent_cycle(p: &Lts, r: &mut impl Rng) -> Lts {
    let n = p.num_states();
    let s = r.random_range(0..n);
    let t = r.random_range(0..n);
    let mut transitions: BTreeSet<Transition> = p.transitions().collect();
    for (source, target) in [(s, t), (t, s)] {
        transitions.insert(Transition {
            source,
            action: Action::Silent,
            target,
        });
    }
    Lts::new(n, p.initial(), p.alphabet().clone(), transitions).expect("same state space")
}

/// Sample `index` of a divergence-sensitive suite: every fourth instance is
/// forced to contain a silent cycle.
pub fn gen_sample(cfg: &GenConfig, index: u64) -> Lts {
    let mut r = rng(sample_seed(cfg.seed, index));
    let p = gen_lts_with(cfg, &mut r);
    if index.is_multiple_of(4) {
        with_silent_cycle(&p, &mut r)
    } else {
        p
    }
}

/// `τ.left + τ.right`: a process that refines to both summands under every
/// preorder.
pub fn internal_choice(left: &Lts, right: &Lts) -> Lts {
    let offset = 1 + left.num_states();
    let n = offset + right.num_states();
    let shift = |t: Transition, by: usize| Transition {
        source: t.source + by,
        action: t.action,
        target: t.target + by,
    };
    let transitions: BTreeSet<Transition> = [
        Transition {
            source: 0,
            action: Action::Silent,
            target: 1 + left.initial(),
        },
        Transition {
            source: 0,
            action: Action::Silent,
            target: offset + right.initial(),
        },
    ]
    .into_iter()
    .chain(left.transitions().map(|t| shift(t, 1)))
    .chain(right.transitions().map(|t| shift(t, offset)))
    .collect();
    let alphabet = left.alphabet().union(right.alphabet());
    Lts::new(n, 0, alphabet, transitions).expect("disjoint union of valid systems")
}

/// `p` with one transition dropped and, sometimes, one added.
pub fn mutate(p: &Lts, r: &mut impl Rng) -> Lts {
    let mut transitions: Vec<Transition> = p.transitions().collect();
    if !transitions.is_empty() {
        let i = r.random_range(0..transitions.len());
        transitions.swap_remove(i);
    }
    if r.random_bool(0.5) {
        let n = p.num_states();
        let action = match p.alphabet().labels().choose(r) {
            Some(l) if r.random_bool(0.8) => Action::Visible(l.clone()),
            _ => Action::Silent,
        };
        transitions.push(Transition {
            source: r.random_range(0..n),
            action,
            target: r.random_range(0..n),
        });
    }
    Lts::new(p.num_states(), p.initial(), p.alphabet().clone(), transitions).expect("same state space")
}

/// Pair `index` of a suite: independent samples, an internal choice and one
/// of its summands, or a process and a mutation of it, in either order.
/// Every fourth pair has a diverging component.
pub fn gen_pair(cfg: &GenConfig, index: u64) -> (Lts, Lts) {
    let mut r = rng(sample_seed(cfg.seed, index));
    let draw = |r: &mut ChaCha8Rng| gen_lts_with(cfg, r);
    let mut p = draw(&mut r);
    if index.is_multiple_of(4) {
        p = with_silent_cycle(&p, &mut r);
    }
    let (p, q) = match index % 3 {
        0 => {
            let q = draw(&mut r);
            (p, q)
        }
        1 => {
            let q = draw(&mut r);
            (internal_choice(&p, &q), p)
        }
        _ => {
            let q = mutate(&p, &mut r);
            (p, q)
        }
    };
    if r.random_bool(0.5) {
        (q, p)
    } else {
        (p, q)
    }
}

/// A random subset of the labels.
pub fn gen_label_set(alphabet: &Alphabet, r: &mut impl Rng) -> BTreeSet<ActionLabel> {
    alphabet.iter().filter(|_| r.random_bool(0.5)).cloned().collect()
}

/// A random interface with one to three internal states whose actions map
/// into `outputs`. Some rules use wildcards.
pub fn gen_interface(inputs: &Alphabet, outputs: &[ActionLabel], r: &mut impl Rng) -> InterfaceSpec {
    let states = r.random_range(1..=3usize);
    let mut m = InterfaceSpec::new((0..states).map(|i| format!("s{i}")).collect()).expect("distinct names");
    if r.random_bool(0.3) {
        let out = RuleOutput {
            action: outputs.choose(r).cloned(),
            effect: Some(r.random_range(0..states)),
        };
        m.add_rule(RuleKey { state: None, label: None }, out).expect("first rule");
    }
    for s in 0..states {
        for a in inputs.iter() {
            if r.random_bool(0.7) {
                let out = RuleOutput {
                    action: if r.random_bool(0.8) { outputs.choose(r).cloned() } else { None },
                    effect: if r.random_bool(0.8) { Some(r.random_range(0..states)) } else { None },
                };
                m.add_rule(
                    RuleKey {
                        state: Some(s),
                        label: Some(a.clone()),
                    },
                    out,
                )
                .expect("one rule per pair");
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let cfg = GenConfig::new(6, 3, 42);
        assert_eq!(gen_lts(&cfg), gen_lts(&cfg));
        assert_eq!(gen_sample(&cfg, 9), gen_sample(&cfg, 9));
        let distinct: BTreeSet<Vec<Transition>> = (0..20).map(|i| gen_sample(&cfg, i).transitions().collect()).collect();
        assert!(distinct.len() > 10);
    }

    #[test]
    fn zero_density_is_edgeless() {
        let cfg = GenConfig {
            density: 0.0,
            ..GenConfig::new(5, 2, 7)
        };
        for i in 0..20 {
            let p = gen_lts(&cfg.with_seed(i));
            assert_eq!(p.num_transitions(), 0);
            assert_eq!(p.initial(), 0);
        }
    }

    #[test]
    fn invariant_sweep() {
        let cfg = GenConfig::new(6, 3, 1);
        for i in 0..1000 {
            let p = gen_sample(&cfg, i);
            assert!((1..=6).contains(&p.num_states()));
            assert_eq!(p.initial(), 0);
            assert_eq!(p.alphabet(), &cfg.alphabet());
            for t in p.transitions() {
                assert!(t.source < p.num_states() && t.target < p.num_states());
            }
            if i % 4 == 0 {
                assert!((0..p.num_states()).any(|s| p.diverges(s)));
            }
        }
    }

    #[test]
    fn interfaces_are_total() {
        let mut r = rng(3);
        let inputs = Alphabet::from_names(&["a", "b"]).unwrap();
        let outputs = [lts_refine::label("a"), lts_refine::label("x")];
        for _ in 0..100 {
            let m = gen_interface(&inputs, &outputs, &mut r);
            for s in 0..m.num_states() {
                for a in inputs.iter() {
                    assert!(m.effect(s, a) < m.num_states());
                }
            }
        }
    }
}
