//! Convergence analysis for upper transition operators of finite-state
//! imprecise Markov chains.
//!
//! An operator is given either as a finite family of pmfs per state
//! ([`CredalFamily`]) or as a closed-form implementation of
//! [`UpperOperator`]. The pipeline builds the upper accessibility graph,
//! splits the state space into maximal classes and transient states,
//! restricts to the transient states from which the maximal ones are not
//! lower reachable, and repeats. If every level's maximal classes are
//! regular the operator is convergent; for finitely generated operators
//! the converse holds too. An independent orbit engine iterates `T̄ⁿf`
//! numerically and checks every verdict.
//!
//! ```
//! use std::sync::Arc;
//! use imc::{analyze, builtin, Convergence, OrbitParams};
//!
//! let op: imc::OperatorHandle = Arc::new(builtin::running_example());
//! let analysis = analyze(&op, &OrbitParams::default()).unwrap();
//! assert_eq!(analysis.decomposition.depth(), 2);
//! assert_eq!(analysis.verdict.convergent, Convergence::Yes);
//! assert!(!analysis.verdict.ergodic);
//! ```

pub mod builtin;
pub mod decomposition;
pub mod error;
pub mod family;
pub mod graph;
pub mod operator;
pub mod orbit;
pub mod random;
pub mod rational;
pub mod reachability;
pub mod report;
pub mod restriction;
pub mod state;

pub use builtin::{builtin, load_operator, Counterexample};
pub use decomposition::{
    decide_convergence, decide_convergence_on_xm, decide_convergence_recursive, decide_convergence_with,
    decide_ergodicity, decompose, single_class_equivalence_report, Convergence, Decomposition, Level, Verdict,
};
pub use error::{Error, Result, ValidationError};
pub use family::{validate_family, CredalFamily, ModelFile, Pmf};
pub use graph::{
    build_graph, closed_classes, communication_classes, cyclicity, is_closed, regularity_oracle, to_dot,
    AccessGraph, ClassInfo, Cyclicity,
};
pub use operator::{
    apply_indicator_upper, apply_lower, apply_lower_exact, apply_upper, apply_upper_exact, OperatorHandle,
    UpperOperator,
};
pub use orbit::{default_suite, iterate_orbit, oracle_compare, orbit_limit_on_regular_class, OrbitParams, OrbitResult};
pub use rational::Rational;
pub use reachability::{is_absorbing, lower_reach_set, partition_states, StatePartition};
pub use report::{analyze, Analysis, AnalysisReport};
pub use restriction::{
    nested_restriction_check, restrict, restrict_family, restrict_to_maximal, restrict_to_nonabs,
    RestrictedOperator,
};
pub use state::{StateSet, StateSpace};
