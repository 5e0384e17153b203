//! Reproducer bundles rebuild the instance they describe.

use lts_refine::formats::{eval_expr, parse_expr, parse_interface, parse_lts, MapEnvironment};
use lts_refine_harness::equations::{Instance, Operator};

fn rebuild(instance: &Instance) -> lts_refine::Lts {
    let repro = instance.reproducer(4);
    let mut env = MapEnvironment::new();
    for (file, text) in &repro.files {
        let (name, ext) = file.split_once('.').unwrap();
        match ext {
            "aut" => env = env.with_process(name, parse_lts(text).unwrap()),
            "iface" => env = env.with_interface(name, parse_interface(text).unwrap()),
            other => panic!("unexpected file kind {other}"),
        }
    }
    let quoted = repro.command.split('\'').nth(1).expect("quoted expression");
    eval_expr(&parse_expr(quoted).unwrap(), &env).unwrap()
}

#[test]
fn equation_reproducers_replay_the_composition() {
    for op in Operator::ALL {
        for i in 0..30 {
            let instance = Instance::generate(op, 99, i);
            let composed = instance.composed();
            let rebuilt = rebuild(&instance);
            // expression evaluation lifts operands to a common alphabet first
            let composed = composed.with_alphabet(rebuilt.alphabet()).unwrap();
            assert!(
                lts_refine::refines(&composed, &rebuilt, lts_refine::PreorderKind::Lt).unwrap().holds,
                "{op:?} sample {i}"
            );
            assert!(lts_refine::refines(&rebuilt, &composed, lts_refine::PreorderKind::Lt).unwrap().holds);
            assert_eq!(rebuilt.num_states(), instance.composed().num_states());
        }
    }
}
