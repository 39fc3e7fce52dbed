//! Graphviz export of the upper accessibility graph. Pipe into `dot -Tsvg`.

use imc::{build_graph, builtin, communication_classes, to_dot};

fn main() -> imc::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "running-example".into());
    let op = builtin::builtin(&name)?;
    let g = build_graph(op.as_ref())?;
    print!("{}", to_dot(&g, &communication_classes(&g)));
    Ok(())
}
