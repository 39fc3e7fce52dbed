//! Random generators for operators and graphs, used by tests, the
//! acceptance suite and examples.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::family::{CredalFamily, Pmf};
use crate::rational::{from_ints, Rational};
use crate::state::{StateSet, StateSpace};

/// Shape of randomly generated credal families.
#[derive(Debug, Clone, Copy)]
pub struct FamilyShape {
    pub min_states: usize,
    pub max_states: usize,
    pub max_pmfs: usize,
    pub max_denominator: i64,
    /// Probability that a given target is in a pmf's support.
    pub density: f64,
}

impl Default for FamilyShape {
    fn default() -> Self {
        Self { min_states: 2, max_states: 5, max_pmfs: 3, max_denominator: 8, density: 0.4 }
    }
}

/// A pmf with support inside `support` (non-empty) and masses with a common
/// denominator of at most `max_den`.
pub fn random_pmf<R: Rng + ?Sized>(rng: &mut R, n: usize, support: &[usize], max_den: i64) -> Pmf {
    let den = rng.gen_range(support.len() as i64..=max_den.max(support.len() as i64));
    // Split `den` units over the support, each getting at least one.
    let mut cuts: Vec<i64> = (1..den).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<i64> = cuts.into_iter().take(support.len() - 1).collect();
    cuts.sort_unstable();
    let mut mass = vec![Rational::zero(); n];
    let mut prev = 0;
    for (k, &y) in support.iter().enumerate() {
        let next = if k + 1 == support.len() { den } else { cuts[k] };
        mass[y] = from_ints(next - prev, den);
        prev = next;
    }
    Pmf::new(mass).expect("masses sum to one")
}

fn random_support<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
    if s.is_empty() {
        s.push(rng.gen_range(0..n));
    }
    s
}

pub fn random_family<R: Rng + ?Sized>(rng: &mut R, shape: &FamilyShape) -> CredalFamily {
    let n = rng.gen_range(shape.min_states..=shape.max_states);
    random_family_on(rng, n, shape)
}

pub fn random_family_on<R: Rng + ?Sized>(rng: &mut R, n: usize, shape: &FamilyShape) -> CredalFamily {
    let per_state = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=shape.max_pmfs);
            (0..k)
                .map(|_| {
                    let s = random_support(rng, n, shape.density);
                    random_pmf(rng, n, &s, shape.max_denominator)
                })
                .collect()
        })
        .collect();
    CredalFamily::new(StateSpace::numbered(n), per_state).expect("non-empty sets")
}

/// A family built from a prescribed accessibility graph: every edge
/// `x → y` is carried by some pmf at `x`, and no pmf puts mass off the
/// successor set. `adjacency[x]` must be non-empty for every `x`.
pub fn family_from_graph<R: Rng + ?Sized>(rng: &mut R, adjacency: &[Vec<usize>], shape: &FamilyShape) -> CredalFamily {
    let n = adjacency.len();
    let per_state = adjacency
        .iter()
        .map(|succ| {
            assert!(!succ.is_empty(), "every state needs a successor");
            let k = rng.gen_range(1..=shape.max_pmfs.max(1));
            let mut pmfs: Vec<Pmf> = Vec::new();
            let mut covered: StateSet = StateSet::new();
            for i in 0..k {
                let mut s: Vec<usize> = succ.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
                if i + 1 == k {
                    s.extend(succ.iter().copied().filter(|y| !covered.contains(y)));
                    s.sort_unstable();
                    s.dedup();
                }
                if s.is_empty() {
                    s.push(*succ.choose(rng).unwrap());
                }
                covered.extend(s.iter().copied());
                pmfs.push(random_pmf(rng, n, &s, shape.max_denominator.max(s.len() as i64)));
            }
            pmfs
        })
        .collect();
    CredalFamily::new(StateSpace::numbered(n), per_state).expect("non-empty sets")
}

/// A random strongly connected digraph on `n` states: a Hamiltonian cycle
/// through a random permutation plus extra random edges.
pub fn random_strongly_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut adj = vec![Vec::new(); n];
    for k in 0..n {
        adj[order[k]].push(order[(k + 1) % n]);
    }
    for row in adj.iter_mut() {
        for y in 0..n {
            if !row.contains(&y) && rng.gen_bool(extra) {
                row.push(y);
            }
        }
        row.sort_unstable();
    }
    adj
}

/// A random digraph in which every state has at least one successor.
pub fn random_digraph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Vec<Vec<usize>> {
    (0..n)
        .map(|_| {
            let mut row: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
            if row.is_empty() {
                row.push(rng.gen_range(0..n));
            }
            row
        })
        .collect()
}

pub fn random_function<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

/// Small exact rationals in `[-2, 2]` with denominators up to 8.
pub fn random_rational_function<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let d = rng.gen_range(1..=8);
            from_ints(rng.gen_range(-2 * d..=2 * d), d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, communication_classes};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn graph_families_have_the_prescribed_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..6);
            let adj = random_digraph(&mut rng, n, 0.4);
            let fam = family_from_graph(&mut rng, &adj, &FamilyShape::default());
            let g = build_graph(&fam).unwrap();
            for (x, row) in adj.iter().enumerate() {
                assert_eq!(g.successors(x).collect::<Vec<_>>(), *row);
            }
        }
    }

    #[test]
    fn strongly_connected_is_one_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.gen_range(1..7);
            let adj = random_strongly_connected(&mut rng, n, 0.2);
            let fam = family_from_graph(&mut rng, &adj, &FamilyShape::default());
            assert_eq!(communication_classes(&build_graph(&fam).unwrap()).len(), 1);
        }
    }
}
