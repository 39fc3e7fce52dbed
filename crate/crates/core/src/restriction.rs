//! Restriction of functions, families and operators to a class.
//!
//! For a class `C`, the restricted set at `x ∈ C` keeps the pmfs of `P_x`
//! that put no mass outside `C`, seen as pmfs on `C`. The restriction is
//! well defined iff none of these sets is empty.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::family::CredalFamily;
use crate::graph::{build_graph, communication_classes};
use crate::operator::OperatorHandle;
use crate::reachability::StatePartition;
use crate::state::StateSet;

#[derive(Debug, Clone)]
pub struct RestrictedOperator {
    pub parent: OperatorHandle,
    /// The class, in parent indices.
    pub class: StateSet,
    /// `index_map[i]` is the parent index of local state `i`.
    pub index_map: Vec<usize>,
    pub operator: OperatorHandle,
}

impl RestrictedOperator {
    pub fn local_index(&self, parent_index: usize) -> Option<usize> {
        self.index_map.binary_search(&parent_index).ok()
    }

    pub fn to_parent(&self, local: &StateSet) -> StateSet {
        local.iter().map(|&i| self.index_map[i]).collect()
    }

    pub fn to_local(&self, parent: &StateSet) -> StateSet {
        parent.iter().filter_map(|&x| self.local_index(x)).collect()
    }

    /// `f|_C`.
    pub fn restrict_fn<T: Clone>(&self, f: &[T]) -> Vec<T> {
        self.index_map.iter().map(|&x| f[x].clone()).collect()
    }

    pub fn family(&self) -> Option<&CredalFamily> {
        self.operator.family()
    }
}

/// Restricts any operator that registers a restriction rule. The full
/// space restricts to the operator itself.
pub fn restrict(op: &OperatorHandle, class: &StateSet) -> Result<RestrictedOperator> {
    if class.is_empty() {
        return Err(Error::Precondition("restriction to an empty class".into()));
    }
    if let Some(&bad) = class.iter().find(|&&x| x >= op.len()) {
        op.states().check_index(bad)?;
    }
    let operator = if class.len() == op.len() { Arc::clone(op) } else { op.restrict(class)? };
    Ok(RestrictedOperator {
        parent: Arc::clone(op),
        class: class.clone(),
        index_map: class.iter().copied().collect(),
        operator,
    })
}

pub fn restrict_family(family: &CredalFamily, class: &StateSet) -> Result<RestrictedOperator> {
    let parent: OperatorHandle = Arc::new(family.clone());
    restrict(&parent, class)
}

pub fn restrict_to_maximal(op: &OperatorHandle, class: &StateSet) -> Result<RestrictedOperator> {
    let classes = communication_classes(&build_graph(op.as_ref())?);
    if !classes.iter().any(|c| c.is_maximal && c.members == *class) {
        return Err(Error::Precondition(format!(
            "{:?} is not a maximal communication class",
            op.states().labels_of(class)
        )));
    }
    restrict(op, class).map_err(|e| match e {
        Error::NotWellDefined { state } => {
            Error::Internal(format!("maximal class restriction undefined at `{state}`"))
        }
        other => other,
    })
}

/// Restriction to the transient states from which the maximal states are
/// not lower reachable. That restriction always exists, so an empty
/// restricted set means a bug.
pub fn restrict_to_nonabs(op: &OperatorHandle, partition: &StatePartition) -> Result<RestrictedOperator> {
    if partition.x_t_non.is_empty() {
        return Err(Error::Precondition("no transient states outside lower reach".into()));
    }
    restrict(op, &partition.x_t_non).map_err(|e| match e {
        Error::NotWellDefined { state } => {
            Error::Internal(format!("restriction to unreached transients undefined at `{state}`"))
        }
        other => other,
    })
}

/// Whether restricting to `outer` and then to `inner` gives the same family
/// as restricting to `inner` directly.
pub fn nested_restriction_check(family: &CredalFamily, outer: &StateSet, inner: &StateSet) -> Result<bool> {
    if !inner.is_subset(outer) {
        return Err(Error::Precondition("inner class is not a subset of the outer class".into()));
    }
    let first = restrict_family(family, outer)?;
    let local_inner = first.to_local(inner);
    let two_step = first.family().expect("finite").restrict(&local_inner)?;
    let one_step = family.restrict(inner)?;
    Ok(two_step == one_step)
}

pub fn is_well_defined(family: &CredalFamily, class: &StateSet) -> bool {
    family.restrict(class).is_ok()
}
