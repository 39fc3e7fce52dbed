//! A closed-form operator plugged into the pipeline: a precise chain
//! contaminated towards the worst case, `T̄f = (1 − ε)·Pf + ε·max f`.

use std::sync::Arc;

use imc::rational::{from_ints, Rational};
use imc::{analyze, OperatorHandle, OrbitParams, StateSpace, UpperOperator};

#[derive(Debug)]
struct Contaminated {
    states: StateSpace,
    /// Successor of each state under the precise chain.
    next: Vec<usize>,
    eps: Rational,
}

impl Contaminated {
    fn eval<T>(&self, f: &[T], eps: T, one: T) -> Vec<T>
    where
        T: Clone + PartialOrd + std::ops::Mul<Output = T> + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
    {
        let max = f.iter().skip(1).fold(f[0].clone(), |m, v| if *v > m { v.clone() } else { m });
        self.next.iter().map(|&y| (one.clone() - eps.clone()) * f[y].clone() + eps.clone() * max.clone()).collect()
    }
}

impl UpperOperator for Contaminated {
    fn states(&self) -> &StateSpace {
        &self.states
    }

    fn upper(&self, f: &[f64]) -> Vec<f64> {
        self.eval(f, imc::rational::to_f64(&self.eps), 1.0)
    }

    fn upper_exact(&self, f: &[Rational]) -> Option<Vec<Rational>> {
        Some(self.eval(f, self.eps.clone(), from_ints(1, 1)))
    }

    fn name(&self) -> String {
        "contaminated".into()
    }

    fn has_exact_predicates(&self) -> bool {
        true
    }
}

fn main() -> imc::Result<()> {
    // Without a pmf list the operator is not known to be finitely generated,
    // so the unperturbed 3-cycle comes out inconclusive rather than "no".
    for eps in [from_ints(0, 1), from_ints(1, 10)] {
        let op: OperatorHandle = Arc::new(Contaminated {
            states: StateSpace::new(["x", "y", "z"])?,
            next: vec![1, 2, 0],
            eps: eps.clone(),
        });
        let a = analyze(&op, &OrbitParams::default())?;
        println!(
            "eps = {eps}: classes {}, convergent {}, ergodic {}",
            a.classes.len(),
            a.verdict.convergent.as_str(),
            a.verdict.ergodic
        );
    }
    Ok(())
}
