// Seeded corpus builders and brute-force oracles shared by the
// integration tests. Oracles re-derive their answers from adjacency
// alone so they cannot inherit a bug from the code under test.
#![allow(dead_code)]

use majc::FiniteGraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> FiniteGraph {
    let names = names(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    FiniteGraph::from_parts(names, edges, true).unwrap()
}

pub fn connected(g: &FiniteGraph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in g.neighbours(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// A set is closed when every vertex outside it keeps a neighbour
/// outside it.
pub fn closed_by_definition(g: &FiniteGraph, s: &BTreeSet<usize>) -> bool {
    (0..g.vertex_count())
        .filter(|v| !s.contains(v))
        .all(|v| g.neighbours(v).iter().any(|w| !s.contains(w)))
}

/// Minimal closed superset by exhaustive enumeration: closed sets are
/// intersection-closed, so the minimal one is the intersection of all
/// closed supersets (the full vertex set always qualifies).
pub fn minimal_closed_superset_by_enumeration(
    g: &FiniteGraph,
    a: &BTreeSet<String>,
) -> BTreeSet<String> {
    let n = g.vertex_count();
    let fixed: BTreeSet<usize> = a.iter().map(|v| g.index(v).unwrap()).collect();
    let rest: Vec<usize> = (0..n).filter(|i| !fixed.contains(i)).collect();
    let mut meet: Option<BTreeSet<usize>> = None;
    for mask in 0u32..1 << rest.len() {
        let mut s = fixed.clone();
        for (k, &i) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                s.insert(i);
            }
        }
        if closed_by_definition(g, &s) {
            meet = Some(match meet {
                None => s,
                Some(m) => m.intersection(&s).copied().collect(),
            });
        }
    }
    meet.expect("the full vertex set is closed")
        .into_iter()
        .map(|i| g.name(i).to_string())
        .collect()
}

/// Random nonempty vertex subset, each vertex kept with probability `p`.
pub fn random_subset(rng: &mut ChaCha8Rng, g: &FiniteGraph, p: f64) -> BTreeSet<String> {
    let mut s: BTreeSet<String> =
        g.names().iter().filter(|_| rng.gen_bool(p)).cloned().collect();
    if s.is_empty() {
        let i = rng.gen_range(0..g.vertex_count());
        s.insert(g.name(i).to_string());
    }
    s
}

/// Random 2-element subset of {1, 2, 3}.
pub fn random_pair(rng: &mut ChaCha8Rng) -> Vec<u32> {
    let drop = rng.gen_range(1..=3u32);
    (1..=3).filter(|&c| c != drop).collect()
}
