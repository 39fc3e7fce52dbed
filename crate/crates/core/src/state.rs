use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};
use crate::rational::{one, zero, Rational};

/// A set of state indices.
pub type StateSet = BTreeSet<usize>;

/// The finite, ordered set of states. Indices are stable for its lifetime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct StateSpace {
    labels: Arc<[String]>,
    #[serde(skip)]
    index: Arc<HashMap<String, usize>>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Validation(vec![ValidationError::EmptyStateSpace]));
        }
        let mut index = HashMap::with_capacity(labels.len());
        let mut dups = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                dups.push(ValidationError::DuplicateState { label: l.clone() });
            }
        }
        if !dups.is_empty() {
            return Err(Error::Validation(dups));
        }
        Ok(Self { labels: labels.into(), index: Arc::new(index) })
    }

    /// States labelled `s0`, `s1`, ...
    pub fn numbered(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("s{i}"))).expect("n must be positive")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::InvalidState(format!("`{label}`")))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!("index {i} (state space has {})", self.len())))
        }
    }

    pub fn all(&self) -> StateSet {
        (0..self.len()).collect()
    }

    pub fn set_of(&self, labels: &[&str]) -> Result<StateSet> {
        labels.iter().map(|l| self.require(l)).collect()
    }

    pub fn labels_of(&self, set: &StateSet) -> Vec<String> {
        set.iter().map(|&i| self.labels[i].clone()).collect()
    }

    /// The sub-space spanned by `set`, in increasing index order.
    pub fn subspace(&self, set: &StateSet) -> Self {
        Self::new(set.iter().map(|&i| self.labels[i].clone())).expect("non-empty subset")
    }

    pub fn check_len(&self, got: usize) -> Result<()> {
        if got == self.len() {
            Ok(())
        } else {
            Err(Error::Dimension { expected: self.len(), got })
        }
    }
}

impl TryFrom<Vec<String>> for StateSpace {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Self::new(labels)
    }
}

impl From<StateSpace> for Vec<String> {
    fn from(s: StateSpace) -> Self {
        s.labels.to_vec()
    }
}

pub fn complement(n: usize, set: &StateSet) -> StateSet {
    (0..n).filter(|i| !set.contains(i)).collect()
}

pub fn indicator_exact(n: usize, set: &StateSet) -> Vec<Rational> {
    (0..n).map(|i| if set.contains(&i) { one() } else { zero() }).collect()
}

pub fn indicator(n: usize, set: &StateSet) -> Vec<f64> {
    (0..n).map(|i| if set.contains(&i) { 1.0 } else { 0.0 }).collect()
}

/// All non-empty subsets of `0..n`, as bitmask order. Only for small `n`.
pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = StateSet> {
    assert!(n < 24, "subset enumeration over {n} states");
    (1u32..(1u32 << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(StateSpace::new(["a", "b", "a"]).is_err());
        assert!(StateSpace::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn lookups() {
        let s = StateSpace::new(["a", "b", "c"]).unwrap();
        assert_eq!(s.index_of("c"), Some(2));
        assert!(s.require("z").is_err());
        let sub = s.subspace(&[0, 2].into_iter().collect());
        assert_eq!(sub.labels(), ["a", "c"]);
        assert_eq!(nonempty_subsets(3).count(), 7);
    }

    #[test]
    fn serde_as_label_list() {
        let s = StateSpace::new(["x", "y"]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"["x","y"]"#);
        let back: StateSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back.index_of("y"), Some(1));
    }
}
