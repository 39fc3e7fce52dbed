//! The upper accessibility graph: communication classes, maximality,
//! closedness and cyclicity.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{no_exact, UpperOperator};
use crate::state::{complement, nonempty_subsets, StateSet, StateSpace};

/// Edge `x → y` iff `T̄𝟙_y(x) > 0`, decided exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessGraph {
    states: StateSpace,
    adjacency: Vec<Vec<bool>>,
}

/// Period of a strongly connected class. A singleton without a self-loop
/// has no closed paths at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cyclicity {
    Period(usize),
    Acyclic,
}

impl Cyclicity {
    pub fn period(self) -> Option<usize> {
        match self {
            Cyclicity::Period(p) => Some(p),
            Cyclicity::Acyclic => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassInfo {
    pub members: StateSet,
    pub is_maximal: bool,
    pub is_closed: bool,
    pub cyclicity: Cyclicity,
}

impl ClassInfo {
    /// Regularity is only defined for maximal classes.
    pub fn is_regular(&self) -> bool {
        self.is_maximal && self.cyclicity == Cyclicity::Period(1)
    }
}

impl AccessGraph {
    pub fn from_adjacency(states: StateSpace, adjacency: Vec<Vec<bool>>) -> Result<Self> {
        states.check_len(adjacency.len())?;
        for row in &adjacency {
            states.check_len(row.len())?;
        }
        Ok(Self { states, adjacency })
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x][y]
    }

    pub fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[x].iter().enumerate().filter(|(_, &e)| e).map(|(y, _)| y)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|x| self.successors(x).map(move |y| (x, y))).collect()
    }

    /// States reachable from `start` by paths staying inside `within`.
    fn reach_within(&self, start: usize, within: &StateSet, reverse: bool) -> StateSet {
        let mut seen = StateSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in within.iter().copied() {
                let edge = if reverse { self.adjacency[v][u] } else { self.adjacency[u][v] };
                if edge && seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Whether no edge leaves `set`.
    pub fn is_closed_set(&self, set: &StateSet) -> bool {
        set.iter().all(|&x| self.successors(x).all(|y| set.contains(&y)))
    }
}

pub fn build_graph(op: &dyn UpperOperator) -> Result<AccessGraph> {
    let n = op.len();
    let mut adjacency = vec![vec![false; n]; n];
    for (x, row) in adjacency.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = op.edge_positive(x, y).ok_or_else(|| no_exact(op))?;
        }
    }
    AccessGraph::from_adjacency(op.states().clone(), adjacency)
}

/// Strongly connected components (Tarjan), each sorted, in no particular
/// order.
fn tarjan(g: &AccessGraph) -> Vec<Vec<usize>> {
    struct Walk<'a> {
        g: &'a AccessGraph,
        counter: usize,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        out: Vec<Vec<usize>>,
    }

    fn visit(w: &mut Walk<'_>, v: usize) {
        w.index[v] = Some(w.counter);
        w.low[v] = w.counter;
        w.counter += 1;
        w.stack.push(v);
        w.on_stack[v] = true;
        let succ: Vec<usize> = w.g.successors(v).collect();
        for u in succ {
            match w.index[u] {
                None => {
                    visit(w, u);
                    w.low[v] = w.low[v].min(w.low[u]);
                }
                Some(iu) if w.on_stack[u] => w.low[v] = w.low[v].min(iu),
                _ => {}
            }
        }
        if Some(w.low[v]) == w.index[v] {
            let mut comp = Vec::new();
            loop {
                let u = w.stack.pop().expect("tarjan stack");
                w.on_stack[u] = false;
                comp.push(u);
                if u == v {
                    break;
                }
            }
            comp.sort_unstable();
            w.out.push(comp);
        }
    }

    let n = g.len();
    let mut w = Walk {
        g,
        counter: 0,
        index: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        out: Vec::new(),
    };
    for v in 0..n {
        if w.index[v].is_none() {
            visit(&mut w, v);
        }
    }
    w.out
}

/// Communication classes sorted by smallest member, with maximality taken
/// from the condensation DAG (no edge to another class).
pub fn communication_classes(g: &AccessGraph) -> Vec<ClassInfo> {
    let mut comps = tarjan(g);
    comps.sort_unstable_by_key(|c| c[0]);
    let mut class_of = vec![0; g.len()];
    for (k, c) in comps.iter().enumerate() {
        for &x in c {
            class_of[x] = k;
        }
    }
    let mut has_successor_class = vec![false; comps.len()];
    for (x, y) in g.edges() {
        if class_of[x] != class_of[y] {
            has_successor_class[class_of[x]] = true;
        }
    }
    comps
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let members: StateSet = c.into_iter().collect();
            let cyclicity = cyclicity(g, &members).expect("components are strongly connected");
            ClassInfo {
                is_closed: g.is_closed_set(&members),
                is_maximal: !has_successor_class[k],
                cyclicity,
                members,
            }
        })
        .collect()
}

/// gcd of closed-path lengths inside `class`, via BFS levels: the gcd over
/// internal edges `u → v` of `level(u) + 1 − level(v)`.
pub fn cyclicity(g: &AccessGraph, class: &StateSet) -> Result<Cyclicity> {
    let Some(&root) = class.iter().next() else {
        return Err(Error::Precondition("cyclicity of an empty class".into()));
    };
    if let Some(&bad) = class.iter().find(|&&x| x >= g.len()) {
        g.states().check_index(bad)?;
    }
    if g.reach_within(root, class, false) != *class || g.reach_within(root, class, true) != *class {
        return Err(Error::Precondition(format!(
            "{:?} is not strongly connected",
            g.states().labels_of(class)
        )));
    }

    let mut level = vec![usize::MAX; g.len()];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for v in g.successors(u).filter(|v| class.contains(v)) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }

    let mut period = 0usize;
    for &u in class {
        for v in g.successors(u).filter(|v| class.contains(v)) {
            let diff = (level[u] + 1).abs_diff(level[v]);
            period = gcd(period, diff);
        }
    }
    // A strongly connected class with at least one internal edge has a cycle,
    // and every cycle length is a multiple of the gcd, so `period` > 0 then.
    Ok(if period == 0 { Cyclicity::Acyclic } else { Cyclicity::Period(period) })
}

/// Splits a class of period `p` into its `p` cyclic subclasses; every
/// internal edge goes from subclass `i` to subclass `i + 1 (mod p)`.
pub fn cyclic_subclasses(g: &AccessGraph, class: &StateSet) -> Result<Vec<StateSet>> {
    let Cyclicity::Period(p) = cyclicity(g, class)? else {
        return Ok(vec![class.clone()]);
    };
    let root = *class.iter().next().expect("non-empty");
    let mut level = vec![usize::MAX; g.len()];
    level[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut parts = vec![StateSet::new(); p];
    while let Some(u) = queue.pop_front() {
        parts[level[u] % p].insert(u);
        for v in g.successors(u).filter(|v| class.contains(v)) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    Ok(parts)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact closedness: `T̄𝟙_{𝒳∖C}(x) = 0` for every `x ∈ C`.
pub fn is_closed(op: &dyn UpperOperator, class: &StateSet) -> Result<bool> {
    if class.is_empty() {
        return Err(Error::Precondition("closedness of an empty class".into()));
    }
    let rest = complement(op.len(), class);
    if rest.is_empty() {
        return Ok(true);
    }
    let up = op.upper_indicator(&rest).ok_or_else(|| no_exact(op))?;
    Ok(class.iter().all(|&x| up[x].is_zero()))
}

/// Every closed class, by enumerating subsets. Intended for small spaces.
pub fn closed_classes(op: &dyn UpperOperator) -> Result<Vec<StateSet>> {
    if op.len() > 16 {
        return Err(Error::Precondition("closed-class enumeration needs at most 16 states".into()));
    }
    let mut out = Vec::new();
    for set in nonempty_subsets(op.len()) {
        if is_closed(op, &set)? {
            out.push(set);
        }
    }
    Ok(out)
}

/// Regularity by boolean matrix powers of the class-internal adjacency:
/// true iff some power `k ≤ m²` (`m` the class size) is all-true and the
/// next power is too. Independent of [`cyclicity`].
pub fn regularity_oracle(g: &AccessGraph, class: &StateSet) -> bool {
    let idx: Vec<usize> = class.iter().copied().collect();
    let m = idx.len();
    if m == 0 {
        return false;
    }
    let block: Vec<Vec<bool>> =
        idx.iter().map(|&u| idx.iter().map(|&v| g.has_edge(u, v)).collect()).collect();
    let mul = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..m).map(|i| (0..m).map(|j| (0..m).any(|k| a[i][k] && b[k][j])).collect()).collect()
    };
    let full = |a: &Vec<Vec<bool>>| a.iter().all(|row| row.iter().all(|&e| e));
    let mut power = block.clone();
    for _ in 1..=m * m {
        if full(&power) {
            return full(&mul(&power, &block));
        }
        power = mul(&power, &block);
    }
    false
}

/// Graphviz DOT text: each communication class is a cluster, maximal
/// classes are filled. Nodes, clusters and edges are ordered by label so
/// the output is byte-stable.
pub fn to_dot(g: &AccessGraph, classes: &[ClassInfo]) -> String {
    let st = g.states();
    let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let sorted_labels = |set: &StateSet| {
        let mut v: Vec<&str> = set.iter().map(|&i| st.label(i)).collect();
        v.sort_unstable();
        v
    };
    let mut ordered: Vec<&ClassInfo> = classes.iter().collect();
    ordered.sort_by_key(|c| sorted_labels(&c.members));

    let mut out = String::from("digraph upper_accessibility {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (k, class) in ordered.iter().enumerate() {
        let period = match class.cyclicity {
            Cyclicity::Period(p) => format!("period {p}"),
            Cyclicity::Acyclic => "acyclic".to_string(),
        };
        let kind = if class.is_maximal { "maximal" } else { "transient" };
        let _ = writeln!(out, "  subgraph cluster_{k} {{");
        let _ = writeln!(out, "    label={};", quote(&format!("{kind}, {period}")));
        if class.is_maximal {
            let _ = writeln!(out, "    style=filled; color=\"#2a9d8f\"; fillcolor=\"#e9f5f3\";");
        } else {
            let _ = writeln!(out, "    style=dashed; color=\"#888888\";");
        }
        for l in sorted_labels(&class.members) {
            let _ = writeln!(out, "    {};", quote(l));
        }
        out.push_str("  }\n");
    }
    let mut edges: Vec<(&str, &str)> =
        g.edges().into_iter().map(|(x, y)| (st.label(x), st.label(y))).collect();
    edges.sort_unstable();
    for (x, y) in edges {
        let _ = writeln!(out, "  {} -> {};", quote(x), quote(y));
    }
    out.push_str("}\n");
    out
}
