//! Recursive decomposition of random finitely generated operators, with the
//! verdict each one gets.

use std::sync::Arc;

use imc::random::{family_from_graph, random_digraph, FamilyShape};
use imc::{decide_convergence, decompose, OperatorHandle};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> imc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut shown = 0;
    while shown < 4 {
        let adj = random_digraph(&mut rng, 6, 0.25);
        let op: OperatorHandle = Arc::new(family_from_graph(&mut rng, &adj, &FamilyShape::default()));
        let dec = decompose(&op)?;
        if dec.depth() < 2 {
            continue;
        }
        shown += 1;
        let st = op.states();
        println!("operator {shown}: depth {}", dec.depth());
        for level in &dec.levels {
            let maximal: Vec<Vec<String>> = level.partition.maximal_classes.iter().map(|c| st.labels_of(c)).collect();
            println!(
                "  level {}: maximal {:?}, lower-reached {:?}, unreached {:?}",
                level.index,
                maximal,
                st.labels_of(&level.partition.x_t_abs),
                st.labels_of(&level.partition.x_t_non)
            );
        }
        println!("  convergent: {}", decide_convergence(&op, &dec).convergent.as_str());
    }
    Ok(())
}
