//! Random instances and brute-force oracles for validating `lts-refine`.

pub mod equations;
pub mod gen;
pub mod oracle;
mod pool;
pub mod reproducer;
pub mod theorems;

pub use equations::{check_compositional_equations, check_operator_equations, EquationConfig, EquationReport, Operator};
pub use gen::{gen_lts, GenConfig};
pub use reproducer::Reproducer;
pub use theorems::{check_theorem_suite, SuiteReport, TheoremReport};
