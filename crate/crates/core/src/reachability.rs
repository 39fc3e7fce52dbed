//! Lower reachability of closed classes and the split of the state space
//! into maximal states, transient states from which the maximal states are
//! lower reachable, and the rest.

use crate::error::{Error, Result};
use crate::graph::{build_graph, communication_classes, is_closed, ClassInfo};
use crate::operator::{no_exact, UpperOperator};
use crate::state::StateSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerReach {
    /// States from which the target is lower reachable.
    pub set: StateSet,
    /// `C_0 ⊊ C_1 ⊊ … ⊊ C_k`, ending at the fixpoint.
    pub sequence: Vec<StateSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePartition {
    pub classes: Vec<ClassInfo>,
    pub maximal_classes: Vec<StateSet>,
    pub x_m: StateSet,
    /// Transient states from which `x_m` is lower reachable.
    pub x_t_abs: StateSet,
    /// Transient states from which it is not.
    pub x_t_non: StateSet,
    pub reach_sequence: Vec<StateSet>,
}

impl StatePartition {
    pub fn maximal_class_infos(&self) -> impl Iterator<Item = &ClassInfo> {
        self.classes.iter().filter(|c| c.is_maximal)
    }
}

/// Iterates `C_{n+1} = C_n ∪ {x ∉ C_n : T̲𝟙_{C_n}(x) > 0}` to its fixpoint.
pub fn lower_reach_set(op: &dyn UpperOperator, target: &StateSet) -> Result<LowerReach> {
    if !is_closed(op, target)? {
        return Err(Error::Precondition(format!(
            "{:?} is not closed",
            op.states().labels_of(target)
        )));
    }
    let n = op.len();
    let mut current = target.clone();
    let mut sequence = vec![current.clone()];
    loop {
        let mut next = current.clone();
        for x in (0..n).filter(|x| !current.contains(x)) {
            if op.lower_step_positive(x, &current).ok_or_else(|| no_exact(op))? {
                next.insert(x);
            }
        }
        if next == current {
            break;
        }
        sequence.push(next.clone());
        current = next;
    }
    Ok(LowerReach { set: current, sequence })
}

pub fn is_absorbing(op: &dyn UpperOperator, target: &StateSet) -> Result<bool> {
    Ok(lower_reach_set(op, target)?.set.len() == op.len())
}

pub fn partition_states(op: &dyn UpperOperator) -> Result<StatePartition> {
    let graph = build_graph(op)?;
    let classes = communication_classes(&graph);
    let maximal_classes: Vec<StateSet> =
        classes.iter().filter(|c| c.is_maximal).map(|c| c.members.clone()).collect();
    let x_m: StateSet = maximal_classes.iter().flatten().copied().collect();
    let reach = lower_reach_set(op, &x_m)?;
    let x_t_abs: StateSet = reach.set.difference(&x_m).copied().collect();
    let x_t_non: StateSet = (0..op.len()).filter(|x| !reach.set.contains(x)).collect();
    Ok(StatePartition { classes, maximal_classes, x_m, x_t_abs, x_t_non, reach_sequence: reach.sequence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{counterexample, running_example, two_cycle};
    use crate::family::{CredalFamily, Pmf};
    use crate::rational::from_ints;
    use crate::state::StateSpace;

    fn set(xs: &[usize]) -> StateSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn running_example_reach() {
        let fam = running_example();
        let r = lower_reach_set(&fam, &set(&[0, 1])).unwrap();
        assert_eq!(r.sequence, vec![set(&[0, 1]), set(&[0, 1, 2])]);
        assert_eq!(r.set, set(&[0, 1, 2]));
        assert!(!is_absorbing(&fam, &set(&[0, 1])).unwrap());
    }

    #[test]
    fn whole_space_in_zero_steps() {
        let fam = running_example();
        let all = fam.states().all();
        let r = lower_reach_set(&fam, &all).unwrap();
        assert_eq!(r.sequence.len(), 1);
        assert!(is_absorbing(&fam, &all).unwrap());
    }

    #[test]
    fn not_closed_is_refused() {
        assert!(matches!(
            lower_reach_set(&running_example(), &set(&[2, 3, 4])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn running_example_partition() {
        let p = partition_states(&running_example()).unwrap();
        assert_eq!(p.x_m, set(&[0, 1]));
        assert_eq!(p.x_t_abs, set(&[2]));
        assert_eq!(p.x_t_non, set(&[3, 4]));
    }

    #[test]
    fn counterexample_partition() {
        let op = counterexample();
        assert_eq!(lower_reach_set(&op, &set(&[0])).unwrap().set, set(&[0]));
        let p = partition_states(&op).unwrap();
        assert_eq!(p.x_m, set(&[0]));
        assert!(p.x_t_abs.is_empty());
        assert_eq!(p.x_t_non, set(&[1, 2]));
    }

    #[test]
    fn precise_chain_has_no_unreached_transients() {
        let h = from_ints(1, 2);
        let z = from_ints(0, 1);
        let states = StateSpace::numbered(3);
        let fam = CredalFamily::new(
            states,
            vec![
                vec![Pmf::dirac(3, 0)],
                vec![Pmf::new(vec![h.clone(), z.clone(), h.clone()]).unwrap()],
                vec![Pmf::new(vec![z, h.clone(), h]).unwrap()],
            ],
        )
        .unwrap();
        let p = partition_states(&fam).unwrap();
        assert!(p.x_t_non.is_empty());
        assert_eq!(p.x_t_abs, set(&[1, 2]));
    }

    #[test]
    fn two_cycle_partition() {
        let p = partition_states(&two_cycle()).unwrap();
        // {b,c} is closed, so it is a second maximal class.
        assert_eq!(p.maximal_classes, vec![set(&[0]), set(&[1, 2])]);
        assert_eq!(p.x_m, set(&[0, 1, 2]));
        assert!(p.x_t_abs.is_empty() && p.x_t_non.is_empty());
    }
}
