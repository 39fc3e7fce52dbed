//! The upper transition operator contract and its conjugate.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::family::CredalFamily;
use crate::rational::{one, Rational};
use crate::state::{complement, indicator_exact, StateSet, StateSpace};

/// Shared, immutable handle to an operator.
pub type OperatorHandle = Arc<dyn UpperOperator>;

/// An upper transition operator on a finite state space.
///
/// Implementations must be subadditive, positively homogeneous and
/// dominated by `max f`. The float path `upper` is mandatory. Graph and
/// reachability analysis need the exact path `upper_exact`; operators that
/// cannot evaluate rationals exactly are refused there rather than
/// thresholded.
#[allow(clippy::len_without_is_empty)]
pub trait UpperOperator: fmt::Debug + Send + Sync {
    fn states(&self) -> &StateSpace;

    /// `T̄f` in double precision. `f.len()` equals the state count.
    fn upper(&self, f: &[f64]) -> Vec<f64>;

    /// `T̄f` in exact arithmetic, when the operator supports it.
    fn upper_exact(&self, _f: &[Rational]) -> Option<Vec<Rational>> {
        None
    }

    /// The finite family behind the operator, if it is finitely generated.
    fn family(&self) -> Option<&CredalFamily> {
        None
    }

    fn is_finitely_generated(&self) -> bool {
        self.family().is_some()
    }

    /// The restricted operator on `class` (indices of this operator), over
    /// the sub-space of `class` in increasing index order.
    fn restrict(&self, _class: &StateSet) -> Result<OperatorHandle> {
        Err(Error::Unsupported(format!("{} has no restriction rule", self.name())))
    }

    fn name(&self) -> String;

    fn len(&self) -> usize {
        self.states().len()
    }

    fn has_exact_predicates(&self) -> bool {
        let n = self.len();
        self.upper_exact(&vec![Rational::zero(); n]).is_some()
    }

    /// `T̄𝟙_A`, exactly.
    fn upper_indicator(&self, set: &StateSet) -> Option<Vec<Rational>> {
        self.upper_exact(&indicator_exact(self.len(), set))
    }

    /// `[T̄𝟙_y(x) > 0]`.
    fn edge_positive(&self, x: usize, y: usize) -> Option<bool> {
        let col = self.upper_indicator(&StateSet::from([y]))?;
        Some(col[x] > Rational::zero())
    }

    /// `[T̲𝟙_A(x) > 0]`, evaluated as `1 − T̄𝟙_{𝒳∖A}(x) > 0`.
    fn lower_step_positive(&self, x: usize, target: &StateSet) -> Option<bool> {
        let rest = complement(self.len(), target);
        let up = self.upper_indicator(&rest)?;
        Some(one() - &up[x] > Rational::zero())
    }
}

impl UpperOperator for CredalFamily {
    fn states(&self) -> &StateSpace {
        CredalFamily::states(self)
    }

    fn upper(&self, f: &[f64]) -> Vec<f64> {
        self.upper_f64_unchecked(f)
    }

    fn upper_exact(&self, f: &[Rational]) -> Option<Vec<Rational>> {
        CredalFamily::upper_exact(self, f).ok()
    }

    fn family(&self) -> Option<&CredalFamily> {
        Some(self)
    }

    fn restrict(&self, class: &StateSet) -> Result<OperatorHandle> {
        Ok(Arc::new(CredalFamily::restrict(self, class)?))
    }

    fn name(&self) -> String {
        format!("finite family on {} states", self.len())
    }
}

pub fn apply_upper(op: &dyn UpperOperator, f: &[f64]) -> Result<Vec<f64>> {
    op.states().check_len(f.len())?;
    Ok(op.upper(f))
}

pub fn apply_upper_exact(op: &dyn UpperOperator, f: &[Rational]) -> Result<Vec<Rational>> {
    op.states().check_len(f.len())?;
    op.upper_exact(f).ok_or_else(|| no_exact(op))
}

/// `T̲f = −T̄(−f)`.
pub fn apply_lower(op: &dyn UpperOperator, f: &[f64]) -> Result<Vec<f64>> {
    let neg: Vec<f64> = f.iter().map(|v| -v).collect();
    Ok(apply_upper(op, &neg)?.into_iter().map(|v| -v).collect())
}

pub fn apply_lower_exact(op: &dyn UpperOperator, f: &[Rational]) -> Result<Vec<Rational>> {
    let neg: Vec<Rational> = f.iter().map(|v| -v).collect();
    Ok(apply_upper_exact(op, &neg)?.into_iter().map(|v| -v).collect())
}

/// `T̄𝟙_y`, exactly.
pub fn apply_indicator_upper(op: &dyn UpperOperator, y: usize) -> Result<Vec<Rational>> {
    op.states().check_index(y)?;
    op.upper_indicator(&StateSet::from([y])).ok_or_else(|| no_exact(op))
}

/// `T̄ⁿf` in exact arithmetic.
pub fn apply_upper_exact_n(op: &dyn UpperOperator, f: &[Rational], steps: usize) -> Result<Vec<Rational>> {
    let mut g = f.to_vec();
    for _ in 0..steps {
        g = apply_upper_exact(op, &g)?;
    }
    Ok(g)
}

pub fn apply_lower_exact_n(op: &dyn UpperOperator, f: &[Rational], steps: usize) -> Result<Vec<Rational>> {
    let mut g = f.to_vec();
    for _ in 0..steps {
        g = apply_lower_exact(op, &g)?;
    }
    Ok(g)
}

pub(crate) fn no_exact(op: &dyn UpperOperator) -> Error {
    Error::Unsupported(format!("{} provides no exact evaluation", op.name()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::running_example;
    use crate::rational::from_ints;

    fn r(n: i64, d: i64) -> Rational {
        from_ints(n, d)
    }

    #[test]
    fn running_example_upper_of_ab() {
        let fam = running_example();
        let ab = fam.states().set_of(&["a", "b"]).unwrap();
        let out = apply_upper_exact(&fam, &indicator_exact(5, &ab)).unwrap();
        assert_eq!(out, vec![r(1, 1), r(1, 1), r(1, 2), r(0, 1), r(0, 1)]);
    }

    #[test]
    fn running_example_lower_of_a() {
        let fam = running_example();
        let a = StateSet::from([0]);
        let out = apply_lower_exact(&fam, &indicator_exact(5, &a)).unwrap();
        assert_eq!(out[2], r(1, 4));
    }

    #[test]
    fn running_example_indicator_of_c() {
        let fam = running_example();
        let out = apply_indicator_upper(&fam, 2).unwrap();
        assert_eq!(out, vec![r(0, 1), r(0, 1), r(0, 1), r(1, 1), r(1, 1)]);
        assert!(apply_indicator_upper(&fam, 5).is_err());
    }

    #[test]
    fn identity_family_is_identity() {
        let fam = CredalFamily::identity(StateSpace::numbered(4));
        let f = [0.3, -2.0, 7.5, 1.0];
        assert_eq!(apply_upper(&fam, &f).unwrap(), f);
        assert_eq!(apply_lower(&fam, &f).unwrap(), f);
        for y in 0..4 {
            assert_eq!(apply_indicator_upper(&fam, y).unwrap(), indicator_exact(4, &StateSet::from([y])));
        }
    }

    #[test]
    fn constants_are_preserved() {
        let fam = running_example();
        assert_eq!(apply_upper(&fam, &[2.5; 5]).unwrap(), vec![2.5; 5]);
        let c = vec![r(-7, 3); 5];
        assert_eq!(apply_upper_exact(&fam, &c).unwrap(), c);
    }

    #[test]
    fn dimension_mismatch() {
        let fam = running_example();
        assert!(matches!(apply_upper(&fam, &[1.0]), Err(Error::Dimension { expected: 5, got: 1 })));
        assert!(apply_lower_exact(&fam, &[]).is_err());
    }
}
