//! Named operators: the five-state running example, the closed-form
//! counterexample that is convergent without meeting the level-regularity
//! condition, and a pure two-cycle.

use std::fs;
use std::sync::Arc;

use num_traits::Num;

use crate::error::{Error, Result};
use crate::family::{CredalFamily, Pmf};
use crate::operator::{OperatorHandle, UpperOperator};
use crate::rational::{from_ints, Rational};
use crate::state::{StateSet, StateSpace};

pub const BUILTIN_PREFIX: &str = "builtin:";

/// Registered builtin names. The first column is canonical.
pub const BUILTINS: &[(&str, &[&str])] = &[
    ("counterexample", &["counterexample-5.1"]),
    ("running-example", &[]),
    ("two-cycle", &[]),
];

fn dirac(n: usize, at: usize) -> Pmf {
    Pmf::dirac(n, at)
}

/// States `a..e` with `P_a={𝟙_a}`, `P_b={𝟙_b}`, `P_c={¼(𝟙_a+𝟙_b+𝟙_d+𝟙_e)}`,
/// `P_d=P_e={𝟙_c,𝟙_d,𝟙_e}`.
pub fn running_example() -> CredalFamily {
    let states = StateSpace::new(["a", "b", "c", "d", "e"]).unwrap();
    let q = from_ints(1, 4);
    let z = from_ints(0, 1);
    let spread = Pmf::new(vec![q.clone(), q.clone(), z, q.clone(), q]).unwrap();
    let mixed = || vec![dirac(5, 2), dirac(5, 3), dirac(5, 4)];
    CredalFamily::new(
        states,
        vec![vec![dirac(5, 0)], vec![dirac(5, 1)], vec![spread], mixed(), mixed()],
    )
    .unwrap()
}

/// `a` absorbing, `b` and `c` swapping deterministically.
pub fn two_cycle() -> CredalFamily {
    let states = StateSpace::new(["a", "b", "c"]).unwrap();
    CredalFamily::new(states, vec![vec![dirac(3, 0)], vec![dirac(3, 2)], vec![dirac(3, 1)]]).unwrap()
}

/// The three-state operator with `P_a={𝟙_a}`, `P_c={𝟙_a,𝟙_b}` and
/// `P_b={𝟙_a} ∪ {p_ε : ε∈[0,½]}` where `p_ε = ε²𝟙_a + ε𝟙_b + (1−ε−ε²)𝟙_c`.
///
/// Not finitely generated. Both evaluation paths use the closed form of
/// the maximum of a quadratic over an interval, so the exact path is exact.
#[derive(Debug, Clone)]
pub struct Counterexample {
    states: StateSpace,
}

impl Default for Counterexample {
    fn default() -> Self {
        Self { states: StateSpace::new(["a", "b", "c"]).unwrap() }
    }
}

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// `max_{ε∈[0,½]} ε²fa + εfb + (1−ε−ε²)fc`.
fn curve_max<T: Num + PartialOrd + Clone>(fa: &T, fb: &T, fc: &T) -> T {
    let two = T::one() + T::one();
    let half = T::one() / two.clone();
    let quad = fa.clone() - fc.clone();
    let lin = fb.clone() - fc.clone();
    let at = |e: &T| fc.clone() + e.clone() * lin.clone() + e.clone() * e.clone() * quad.clone();
    let mut best = at(&T::zero());
    let end = at(&half);
    if end > best {
        best = end;
    }
    if quad < T::zero() {
        let vertex = T::zero() - lin.clone() / (two * quad.clone());
        if vertex > T::zero() && vertex < half {
            let v = at(&vertex);
            if v > best {
                best = v;
            }
        }
    }
    best
}

fn max_of<T: PartialOrd + Clone>(a: &T, b: &T) -> T {
    if b > a {
        b.clone()
    } else {
        a.clone()
    }
}

impl Counterexample {
    fn eval<T: Num + PartialOrd + Clone>(f: &[T]) -> Vec<T> {
        let (fa, fb, fc) = (&f[A], &f[B], &f[C]);
        vec![fa.clone(), max_of(fa, &curve_max(fa, fb, fc)), max_of(fa, fb)]
    }
}

impl UpperOperator for Counterexample {
    fn states(&self) -> &StateSpace {
        &self.states
    }

    fn upper(&self, f: &[f64]) -> Vec<f64> {
        Self::eval(f)
    }

    fn upper_exact(&self, f: &[Rational]) -> Option<Vec<Rational>> {
        Some(Self::eval(f))
    }

    /// A proper class keeps only the pmfs with support inside it: `𝟙_a`,
    /// `𝟙_b`, and `p_0 = 𝟙_c`. Every `p_ε` with `ε>0` charges all three
    /// states, so it survives only the trivial restriction.
    fn restrict(&self, class: &StateSet) -> Result<OperatorHandle> {
        if class.iter().any(|&x| x > C) || class.is_empty() {
            return Err(Error::Precondition(format!("bad class {class:?} for the counterexample")));
        }
        if class.len() == 3 {
            return Ok(Arc::new(self.clone()));
        }
        let keep = |targets: &[usize]| -> Vec<usize> {
            targets.iter().copied().filter(|t| class.contains(t)).collect()
        };
        let n = class.len();
        let local = |y: usize| class.iter().position(|&c| c == y).unwrap();
        let mut sets = Vec::with_capacity(n);
        for &x in class {
            let targets = match x {
                A => keep(&[A]),
                B => keep(&[A, C]),
                _ => keep(&[A, B]),
            };
            if targets.is_empty() {
                return Err(Error::NotWellDefined { state: self.states.label(x).to_string() });
            }
            sets.push(targets.into_iter().map(|y| Pmf::dirac(n, local(y))).collect());
        }
        Ok(Arc::new(CredalFamily::new(self.states.subspace(class), sets)?))
    }

    fn name(&self) -> String {
        "builtin:counterexample".into()
    }

    fn has_exact_predicates(&self) -> bool {
        true
    }

    fn edge_positive(&self, x: usize, y: usize) -> Option<bool> {
        Some(matches!((x, y), (A, A) | (B, _) | (C, A) | (C, B)))
    }
}

pub fn counterexample() -> Counterexample {
    Counterexample::default()
}

pub fn counterexample_operator() -> OperatorHandle {
    Arc::new(counterexample())
}

pub fn builtin(name: &str) -> Result<OperatorHandle> {
    let name = name.strip_prefix(BUILTIN_PREFIX).unwrap_or(name);
    let canonical = BUILTINS
        .iter()
        .find(|(n, aliases)| *n == name || aliases.contains(&name))
        .map(|(n, _)| *n)
        .ok_or_else(|| Error::Unsupported(format!("no builtin operator named `{name}`")))?;
    Ok(match canonical {
        "counterexample" => Arc::new(counterexample()),
        "running-example" => Arc::new(running_example()),
        "two-cycle" => Arc::new(two_cycle()),
        _ => unreachable!(),
    })
}

/// Loads `builtin:<name>` or a JSON model file.
pub fn load_operator(source: &str) -> Result<OperatorHandle> {
    if source.starts_with(BUILTIN_PREFIX) {
        return builtin(source);
    }
    let text = fs::read_to_string(source)?;
    Ok(Arc::new(CredalFamily::from_json(&text)?))
}
