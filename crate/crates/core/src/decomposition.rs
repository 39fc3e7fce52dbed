//! Recursive decomposition of the state space by repeated restriction to
//! the unreached transient states, and the convergence and ergodicity
//! verdicts drawn from it.


use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, communication_classes, cyclic_subclasses, ClassInfo, Cyclicity};
use crate::operator::OperatorHandle;
use crate::orbit::{iterate_orbit, orbit_limit_on_regular_class, OrbitParams};
use crate::reachability::{partition_states, StatePartition};
use crate::restriction::{restrict, restrict_to_nonabs, RestrictedOperator};
use crate::state::{indicator, StateSet};

/// One level: the operator restricted to the states left unreached by the
/// previous level, and its partition. All state sets use indices of the
/// original operator.
#[derive(Debug, Clone)]
pub struct Level {
    /// 1-based.
    pub index: usize,
    pub operator: RestrictedOperator,
    pub domain: StateSet,
    pub partition: StatePartition,
}

impl Level {
    pub fn maximal_classes(&self) -> impl Iterator<Item = &ClassInfo> {
        self.partition.maximal_class_infos()
    }

    pub fn all_regular(&self) -> bool {
        self.maximal_classes().all(ClassInfo::is_regular)
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub levels: Vec<Level>,
}

impl Decomposition {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Every level's maximal classes and lower-reached transients, which
    /// together partition the state space.
    pub fn pieces(&self) -> Vec<StateSet> {
        let mut out = Vec::new();
        for l in &self.levels {
            out.extend(l.partition.maximal_classes.iter().cloned());
            if !l.partition.x_t_abs.is_empty() {
                out.push(l.partition.x_t_abs.clone());
            }
        }
        out
    }
}

fn to_parent_partition(r: &RestrictedOperator, p: StatePartition) -> StatePartition {
    let map = |s: &StateSet| r.to_parent(s);
    StatePartition {
        classes: p
            .classes
            .iter()
            .map(|c| ClassInfo { members: map(&c.members), ..c.clone() })
            .collect(),
        maximal_classes: p.maximal_classes.iter().map(map).collect(),
        x_m: map(&p.x_m),
        x_t_abs: map(&p.x_t_abs),
        x_t_non: map(&p.x_t_non),
        reach_sequence: p.reach_sequence.iter().map(map).collect(),
    }
}

/// Partitions, then restricts the original operator to what is left, until
/// nothing is left. Each level restricts the original operator once.
pub fn decompose(op: &OperatorHandle) -> Result<Decomposition> {
    let mut levels: Vec<Level> = Vec::new();
    let mut domain = op.states().all();
    loop {
        let index = levels.len() + 1;
        let stage = restrict(op, &domain).and_then(|r| {
            let local = partition_states(r.operator.as_ref())?;
            Ok((r, local))
        });
        let (restricted, local) = match stage {
            Ok(v) => v,
            Err(e) => {
                let e = match e {
                    Error::NotWellDefined { state } => {
                        Error::Internal(format!("unreached transients not restrictable at `{state}`"))
                    }
                    other => other,
                };
                return Err(Error::IncompleteDecomposition {
                    completed: levels.len(),
                    reason: format!("level {index}: {e}"),
                    levels,
                });
            }
        };
        let partition = to_parent_partition(&restricted, local);
        log::debug!(
            "level {index}: {} maximal class(es), {} unreached transient state(s)",
            partition.maximal_classes.len(),
            partition.x_t_non.len()
        );
        let remaining = partition.x_t_non.clone();
        levels.push(Level { index, operator: restricted, domain, partition });
        if remaining.is_empty() {
            break;
        }
        if levels.len() > op.len() {
            return Err(Error::Internal("decomposition deeper than the state count".into()));
        }
        domain = remaining;
    }
    Ok(Decomposition { levels })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convergence {
    Yes,
    No,
    Inconclusive,
}

impl Convergence {
    pub fn as_str(self) -> &'static str {
        match self {
            Convergence::Yes => "yes",
            Convergence::No => "no",
            Convergence::Inconclusive => "inconclusive",
        }
    }

    /// CLI exit code: 0 yes, 2 no, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Convergence::Yes => 0,
            Convergence::No => 2,
            Convergence::Inconclusive => 3,
        }
    }
}

/// A level whose maximal class is not regular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub level: usize,
    pub class: StateSet,
    pub cyclicity: Cyclicity,
}

/// A start function whose orbit was seen to cycle with period ≥ 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessOrbit {
    pub function: String,
    pub values: Vec<f64>,
    pub period: usize,
}

pub mod basis {
    pub const LEVELS_REGULAR: &str = "all-level-classes-regular";
    pub const FINITELY_GENERATED: &str = "finitely-generated-characterization";
    pub const NOT_FINITELY_GENERATED: &str = "sufficient-condition-fails-not-finitely-generated";
    pub const ERGODICITY: &str = "single-absorbing-regular-maximal-class";
    pub const MAXIMAL_REGULAR: &str = "maximal-classes-regular";
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub convergent: Convergence,
    pub ergodic: bool,
    pub convergent_on_xm: bool,
    pub convergent_basis: &'static str,
    pub ergodic_basis: &'static str,
    pub convergent_on_xm_basis: &'static str,
    pub witnesses: Vec<Witness>,
    pub witness_orbit: Option<WitnessOrbit>,
    pub finitely_generated: bool,
    pub notes: Vec<String>,
}

/// Exactly one maximal class, absorbing (nothing left unreached) and
/// regular.
pub fn decide_ergodicity(partition: &StatePartition) -> bool {
    let maximal: Vec<&ClassInfo> = partition.maximal_class_infos().collect();
    maximal.len() == 1 && partition.x_t_non.is_empty() && maximal[0].is_regular()
}

pub fn decide_convergence_on_xm(classes: &[ClassInfo]) -> bool {
    classes.iter().filter(|c| c.is_maximal).all(|c| c.cyclicity == Cyclicity::Period(1))
}

pub fn decide_convergence(op: &OperatorHandle, dec: &Decomposition) -> Verdict {
    decide_convergence_with(op, dec, &OrbitParams::default())
}

pub fn decide_convergence_with(op: &OperatorHandle, dec: &Decomposition, params: &OrbitParams) -> Verdict {
    let first = &dec.levels[0].partition;
    let finitely_generated = op.is_finitely_generated();
    let witnesses: Vec<Witness> = dec
        .levels
        .iter()
        .flat_map(|l| {
            l.maximal_classes().filter(|c| !c.is_regular()).map(move |c| Witness {
                level: l.index,
                class: c.members.clone(),
                cyclicity: c.cyclicity,
            })
        })
        .collect();

    let mut notes = Vec::new();
    let (convergent, convergent_basis) = if witnesses.is_empty() {
        (Convergence::Yes, basis::LEVELS_REGULAR)
    } else if finitely_generated {
        (Convergence::No, basis::FINITELY_GENERATED)
    } else {
        notes.push(
            "a level class is not regular, but the operator is not finitely generated: \
             the level condition is then only sufficient, so no verdict is drawn"
                .to_string(),
        );
        (Convergence::Inconclusive, basis::NOT_FINITELY_GENERATED)
    };
    if convergent == Convergence::No {
        notes.push(
            "the characterization is applied only to finitely generated operators; \
             finiteness of the sets at unreached transient states alone is not exploited"
                .to_string(),
        );
    }

    let witness_orbit = if convergent == Convergence::No {
        find_witness_orbit(op, dec, &witnesses, params)
    } else {
        None
    };
    if convergent == Convergence::No && witness_orbit.is_none() {
        notes.push("no period ≥ 2 orbit was found among the witness indicators".to_string());
    }

    Verdict {
        convergent,
        ergodic: decide_ergodicity(first),
        convergent_on_xm: decide_convergence_on_xm(&first.classes),
        convergent_basis,
        ergodic_basis: basis::ERGODICITY,
        convergent_on_xm_basis: basis::MAXIMAL_REGULAR,
        witnesses,
        witness_orbit,
        finitely_generated,
        notes,
    }
}

/// Best effort: orbits of indicators of single witness states, then of
/// whole cyclic subclasses.
fn find_witness_orbit(
    op: &OperatorHandle,
    dec: &Decomposition,
    witnesses: &[Witness],
    params: &OrbitParams,
) -> Option<WitnessOrbit> {
    let n = op.len();
    let st = op.states();
    let mut candidates: Vec<(String, StateSet)> = Vec::new();
    for w in witnesses {
        for &x in &w.class {
            candidates.push((format!("1_{}", st.label(x)), StateSet::from([x])));
        }
        let level = &dec.levels[w.level - 1];
        let r = &level.operator;
        if let Ok(g) = build_graph(r.operator.as_ref()) {
            if let Ok(parts) = cyclic_subclasses(&g, &r.to_local(&w.class)) {
                for part in parts.iter().map(|p| r.to_parent(p)) {
                    let name = format!("1_{{{}}}", st.labels_of(&part).join(","));
                    candidates.push((name, part));
                }
            }
        }
    }
    candidates.into_iter().find_map(|(function, set)| {
        let values = indicator(n, &set);
        let orbit = iterate_orbit(op.as_ref(), &values, params).ok()?;
        match orbit.detected_period {
            Some(p) if p >= 2 => Some(WitnessOrbit { function, values, period: p }),
            _ => None,
        }
    })
}

/// Checks the second characterization: maximal classes regular and the
/// restriction to unreached transients convergent, recursively.
pub fn decide_convergence_recursive(op: &OperatorHandle) -> Result<bool> {
    let partition = partition_states(op.as_ref())?;
    if !decide_convergence_on_xm(&partition.classes) {
        return Ok(false);
    }
    if partition.x_t_non.is_empty() {
        return Ok(true);
    }
    let next = restrict_to_nonabs(op, &partition)?;
    decide_convergence_recursive(&next.operator)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleClassReport {
    pub cyclicity: Cyclicity,
    pub regular: bool,
    pub convergent: bool,
    pub ergodic: bool,
}

impl SingleClassReport {
    /// Numerically confirms that the orbit of `f` tends to a constant no
    /// smaller than `min f`, strictly larger unless `f` is constant.
    pub fn check_limit_bound(&self, op: &OperatorHandle, f: &[f64], params: &OrbitParams) -> Result<f64> {
        if !self.regular {
            return Err(Error::Precondition("limit bound needs a regular class".into()));
        }
        orbit_limit_on_regular_class(op.as_ref(), &op.states().all(), f, params)
    }
}

/// For an operator with a single communication class, convergence,
/// ergodicity and regularity coincide.
pub fn single_class_equivalence_report(op: &OperatorHandle) -> Result<SingleClassReport> {
    let classes = communication_classes(&build_graph(op.as_ref())?);
    if classes.len() != 1 {
        return Err(Error::Precondition(format!("{} communication classes, expected one", classes.len())));
    }
    let class = &classes[0];
    let regular = class.is_regular();
    Ok(SingleClassReport { cyclicity: class.cyclicity, regular, convergent: regular, ergodic: regular })
}

#[cfg(test)]
pub(crate) fn handle<T: crate::operator::UpperOperator + 'static>(op: T) -> OperatorHandle {
    std::sync::Arc::new(op)
}
