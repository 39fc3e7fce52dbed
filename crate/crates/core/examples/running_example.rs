//! The five-state running example: classes, partition, decomposition and
//! verdicts, printed as the text report.

use std::sync::Arc;

use imc::{analyze, builtin, OperatorHandle, OrbitParams};

fn main() -> imc::Result<()> {
    let op: OperatorHandle = Arc::new(builtin::running_example());
    let analysis = analyze(&op, &OrbitParams::default())?;
    print!("{}", analysis.report("builtin:running-example", None).render_text());

    let partition = analysis.partition();
    println!("lower reachability of X_m:");
    for (k, c) in partition.reach_sequence.iter().enumerate() {
        println!("  C_{k} = {:?}", op.states().labels_of(c));
    }
    Ok(())
}
