//! Cross-checks the graph verdict against numeric orbits on random
//! operators and prints any disagreement.

use std::sync::Arc;

use imc::random::{random_family, FamilyShape};
use imc::{analyze, default_suite, oracle_compare, Convergence, OperatorHandle, OrbitParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> imc::Result<()> {
    let params = OrbitParams::default();
    let (mut yes, mut no, mut witnessed) = (0, 0, 0);
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op: OperatorHandle = Arc::new(random_family(&mut rng, &FamilyShape::default()));
        let a = analyze(&op, &params)?;
        let report = oracle_compare(op.as_ref(), &a.verdict, &default_suite(op.states(), 10, seed), &params)?;
        match a.verdict.convergent {
            Convergence::Yes => yes += 1,
            Convergence::No => {
                no += 1;
                witnessed += usize::from(report.has_cycle());
            }
            Convergence::Inconclusive => {}
        }
        for d in &report.discrepancies {
            println!("seed {seed}: {:?} {}", d.kind, d.detail);
        }
    }
    println!("{yes} convergent, {no} not convergent ({witnessed} with a cycling suite orbit)");
    Ok(())
}
