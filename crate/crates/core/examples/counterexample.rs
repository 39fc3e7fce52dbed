//! An operator with infinitely many pmfs at `b`: the level condition fails,
//! yet every orbit converges. The tool answers "inconclusive", and the
//! orbit shows why a numeric check cannot settle it quickly either.

use imc::orbit::{iterate_orbit, sup_distance};
use imc::{analyze, builtin, OrbitParams};

fn main() -> imc::Result<()> {
    let op = builtin::builtin("counterexample")?;
    let analysis = analyze(&op, &OrbitParams::default())?;
    print!("{}", analysis.report("builtin:counterexample", None).render_text());

    let f = [0.0, 1.0, 0.0];
    let limit = [0.0, 1.0, 1.0];
    println!("\norbit of f = {f:?}, limit {limit:?}:");
    for n in [10, 100, 1000, 10000] {
        let params = OrbitParams { max_iters: n, ..Default::default() };
        let r = iterate_orbit(op.as_ref(), &f, &params)?;
        let last = r.iterates_kept.last().expect("non-empty");
        println!("  n = {n:>5}: distance to limit {:.3e}", sup_distance(last, &limit));
    }
    Ok(())
}
