use crate::colouring::{cross_edge_count, Colour, ListSystem, PartialColouring};
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

const ASSIGNMENT_GUARD: u128 = 1 << 24;

/// One vertex that must avoid one colour in the solved colouring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinnedVertex {
    pub vertex: String,
    pub banned: Colour,
}

/// A finite colouring problem: some vertices frozen to fixed colours, the
/// rest free with lists of allowed colours, optionally one pinned free
/// vertex whose banned colour is struck from its list up front.
#[derive(Debug, Clone)]
pub struct SolveInstance {
    graph: FiniteGraph,
    frozen: PartialColouring,
    lists: ListSystem,
    pinned: Option<PinnedVertex>,
    free: Vec<usize>,
}

impl SolveInstance {
    /// Validates and normalizes an instance.
    ///
    /// Every vertex must be frozen or carry a list; free lists need at
    /// least two colours (after striking the pinned vertex's banned
    /// colour), so that a cross-edge local optimum leaves every free
    /// vertex happy. A list on a frozen vertex is allowed but must
    /// contain its frozen colour.
    pub fn new(
        graph: FiniteGraph,
        frozen: PartialColouring,
        lists: ListSystem,
        pinned: Option<PinnedVertex>,
    ) -> Result<Self> {
        let mut lists = lists;
        for v in frozen.domain() {
            if !graph.contains(v) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        for (v, _) in lists.iter() {
            if !graph.contains(v) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        if let Some(pin) = &pinned {
            if frozen.contains(&pin.vertex) {
                return Err(Error::InvalidInstance(format!(
                    "pinned vertex {} is frozen",
                    pin.vertex
                )));
            }
            let list = lists
                .get(&pin.vertex)
                .ok_or_else(|| Error::UnknownVertex(pin.vertex.clone()))?;
            if list.contains(&pin.banned) {
                let stripped: Vec<Colour> =
                    list.iter().copied().filter(|&c| c != pin.banned).collect();
                if stripped.is_empty() {
                    return Err(Error::EmptyList(pin.vertex.clone()));
                }
                lists.insert(&pin.vertex, stripped)?;
            }
        }
        let mut free = Vec::new();
        for (i, name) in graph.names().iter().enumerate() {
            if let Some(c) = frozen.get(name) {
                if let Some(list) = lists.get(name) {
                    if !list.contains(&c) {
                        return Err(Error::ColourNotInList(name.clone(), c));
                    }
                }
            } else {
                let list = lists
                    .get(name)
                    .ok_or_else(|| Error::InvalidInstance(format!(
                        "vertex {name} is neither frozen nor listed"
                    )))?;
                if list.len() < 2 {
                    return Err(Error::BadListSize(name.clone(), list.len()));
                }
                free.push(i);
            }
        }
        Ok(SolveInstance { graph, frozen, lists, pinned, free })
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn frozen(&self) -> &PartialColouring {
        &self.frozen
    }

    /// Lists after normalization (the pinned vertex's banned colour struck).
    pub fn lists(&self) -> &ListSystem {
        &self.lists
    }

    pub fn pinned(&self) -> Option<&PinnedVertex> {
        self.pinned.as_ref()
    }

    /// Free vertices as graph indices, ascending.
    pub fn free_indices(&self) -> &[usize] {
        &self.free
    }

    pub fn free_names(&self) -> impl Iterator<Item = &str> {
        self.free.iter().map(|&i| self.graph.name(i))
    }

    fn list_of(&self, idx: usize) -> &[Colour] {
        self.lists.get(self.graph.name(idx)).expect("free vertex has a list")
    }
}

/// What a solve run certifies about its output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptimalityCertificate {
    /// Single-vertex recolourings scanned after the run.
    pub moves_scanned: usize,
    /// How many of them would still gain cross edges — zero for every
    /// returned result.
    pub improving_moves: usize,
    /// Free vertices confirmed happy in the verification pass.
    pub happy_free_vertices: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    /// Total colouring of the graph, extending the frozen part.
    pub colouring: PartialColouring,
    /// Cross edges under that colouring.
    pub cross_edges: usize,
    /// Local search: applied moves. Exhaustive search: assignments
    /// enumerated.
    pub iterations: usize,
    pub certificate: OptimalityCertificate,
}

fn mono_count(graph: &FiniteGraph, colour: &[Colour], v: usize, c: Colour) -> usize {
    graph.neighbours(v).iter().filter(|&&u| colour[u] == c).count()
}

/// Recolouring `v` from its current colour to `c` changes the cross-edge
/// total by `mono(current) - mono(c)`; a move improves iff that is
/// positive.
fn finish(instance: &SolveInstance, colour: Vec<Colour>, iterations: usize) -> Result<SolveResult> {
    let g = &instance.graph;
    let colouring = PartialColouring::from_pairs(
        g.names().iter().enumerate().map(|(i, n)| (n.as_str(), colour[i])),
    );
    let cross_edges = cross_edge_count(g, &colouring)?;

    let mut moves_scanned = 0usize;
    let mut improving_moves = 0usize;
    for &v in &instance.free {
        let cur = mono_count(g, &colour, v, colour[v]);
        for &c in instance.list_of(v) {
            if c == colour[v] {
                continue;
            }
            moves_scanned += 1;
            if mono_count(g, &colour, v, c) < cur {
                improving_moves += 1;
            }
        }
    }
    assert_eq!(improving_moves, 0, "returned colouring admits an improving recolouring");

    let mut happy_free_vertices = 0usize;
    for &v in &instance.free {
        let own = colour[v];
        let mono = mono_count(g, &colour, v, own);
        let diff = g.degree(v) - mono;
        assert!(mono <= diff, "free vertex {} is unhappy at a local optimum", g.name(v));
        happy_free_vertices += 1;
    }

    if let Some(pin) = &instance.pinned {
        let idx = g.index(&pin.vertex).expect("validated");
        assert_ne!(colour[idx], pin.banned, "pinned vertex received its banned colour");
    }

    Ok(SolveResult {
        colouring,
        cross_edges,
        iterations,
        certificate: OptimalityCertificate { moves_scanned, improving_moves, happy_free_vertices },
    })
}

/// Local search for a cross-edge-maximal list-colouring.
///
/// Starts from the lowest colour in every free list, then repeatedly
/// applies the first cross-edge-improving single-vertex recolouring
/// (vertices in id order, colours ascending, rescanning from the top
/// after every move). The objective is bounded by the edge count, so the
/// loop terminates; at the local optimum each free vertex's colour
/// minimizes its monochromatic degree over its list, which caps it at
/// half the degree — every free vertex ends up happy.
pub fn solve_finite(instance: &SolveInstance) -> Result<SolveResult> {
    let g = &instance.graph;
    let mut colour: Vec<Colour> = vec![0; g.vertex_count()];
    for (name, c) in instance.frozen.iter() {
        colour[g.index(name).expect("validated")] = c;
    }
    for &v in &instance.free {
        colour[v] = instance.list_of(v)[0];
    }

    let mut iterations = 0usize;
    'scan: loop {
        for &v in &instance.free {
            let cur = mono_count(g, &colour, v, colour[v]);
            for &c in instance.list_of(v) {
                if c != colour[v] && mono_count(g, &colour, v, c) < cur {
                    colour[v] = c;
                    iterations += 1;
                    continue 'scan;
                }
            }
        }
        break;
    }

    finish(instance, colour, iterations)
}

/// Exhaustive maximization of cross edges over all list-respecting
/// assignments of the free vertices. Enumeration is lexicographic by
/// vertex id then colour, and only strict improvements replace the
/// incumbent, so ties resolve to the lexicographically first optimum.
pub fn exhaustive_max_cross(instance: &SolveInstance) -> Result<SolveResult> {
    let g = &instance.graph;
    let free = &instance.free;
    let choices: Vec<&[Colour]> = free.iter().map(|&v| instance.list_of(v)).collect();
    let space: u128 = choices.iter().map(|l| l.len() as u128).product();
    if space > ASSIGNMENT_GUARD {
        return Err(Error::GuardExceeded(space, ASSIGNMENT_GUARD));
    }

    let mut colour: Vec<Colour> = vec![0; g.vertex_count()];
    let mut assigned: Vec<bool> = vec![false; g.vertex_count()];
    for (name, c) in instance.frozen.iter() {
        let i = g.index(name).expect("validated");
        colour[i] = c;
        assigned[i] = true;
    }
    // Cross edges inside the frozen part never change.
    let base: usize = g
        .edge_pairs()
        .filter(|&(u, v)| assigned[u] && assigned[v] && colour[u] != colour[v])
        .count();

    if free.is_empty() {
        return finish(instance, colour, 1);
    }

    // Depth-first odometer; gain[k] is the cross-edge contribution of the
    // current colour at depth k against already-assigned neighbours.
    let mut cursor = vec![0usize; free.len()];
    let mut gain = vec![0usize; free.len()];
    let mut partial = base;
    let mut best: Option<(usize, Vec<Colour>)> = None;
    let mut leaves = 0usize;
    let mut depth = 0usize;

    loop {
        if cursor[depth] == choices[depth].len() {
            // Exhausted this level; retreat.
            assigned[free[depth]] = false;
            if depth == 0 {
                break;
            }
            depth -= 1;
            partial -= gain[depth];
            cursor[depth] += 1;
            continue;
        }
        let v = free[depth];
        let c = choices[depth][cursor[depth]];
        colour[v] = c;
        assigned[v] = true;
        gain[depth] = g
            .neighbours(v)
            .iter()
            .filter(|&&u| assigned[u] && u != v && colour[u] != c)
            .count();
        partial += gain[depth];
        if depth + 1 == free.len() {
            leaves += 1;
            if best.as_ref().is_none_or(|(b, _)| partial > *b) {
                best = Some((partial, colour.clone()));
            }
            partial -= gain[depth];
            cursor[depth] += 1;
        } else {
            depth += 1;
            cursor[depth] = 0;
        }
    }

    let (_, best_colour) = best.expect("at least one assignment enumerated");
    finish(instance, best_colour, leaves)
}

/// Exhaustive search for a total list-colouring making every vertex
/// happy. Returns the lexicographically first witness (vertex id order,
/// colours ascending) or `None` once the whole space is refuted.
///
/// A vertex's verdict is fixed as soon as it and all its neighbours are
/// coloured, so refuted branches are pruned at the deepest such vertex.
pub fn exists_majority_list_colouring(
    graph: &FiniteGraph,
    lists: &ListSystem,
) -> Result<Option<PartialColouring>> {
    lists.covers(graph)?;
    let n = graph.vertex_count();
    let choices: Vec<&[Colour]> =
        (0..n).map(|v| lists.get(graph.name(v)).expect("covers checked")).collect();
    let space: u128 = choices.iter().map(|l| l.len() as u128).product();
    if space > ASSIGNMENT_GUARD {
        return Err(Error::GuardExceeded(space, ASSIGNMENT_GUARD));
    }
    if n == 0 {
        return Ok(Some(PartialColouring::new()));
    }

    // settles[k]: vertices whose happiness is decided once 0..=k are
    // coloured (their own index and all neighbour indices are <= k).
    let mut settles: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let last = graph.neighbours(v).iter().copied().chain([v]).max().unwrap();
        settles[last].push(v);
    }
    let happy = |colour: &[Colour], v: usize| {
        let mono = mono_count(graph, colour, v, colour[v]);
        2 * mono <= graph.degree(v)
    };

    let mut colour: Vec<Colour> = vec![0; n];
    let mut cursor = vec![0usize; n];
    let mut depth = 0usize;
    loop {
        if cursor[depth] == choices[depth].len() {
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
            cursor[depth] += 1;
            continue;
        }
        colour[depth] = choices[depth][cursor[depth]];
        if settles[depth].iter().all(|&v| happy(&colour, v)) {
            if depth + 1 == n {
                let witness = PartialColouring::from_pairs(
                    graph.names().iter().enumerate().map(|(i, nm)| (nm.as_str(), colour[i])),
                );
                return Ok(Some(witness));
            }
            depth += 1;
            cursor[depth] = 0;
        } else {
            cursor[depth] += 1;
        }
    }
}

/// How the choosability oracle explores list systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum OracleMode {
    /// All list systems over the palette, up to colour renaming.
    Exhaustive,
    /// Independently seeded random list systems.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ChoosabilityReport {
    pub choosable: bool,
    pub ell: usize,
    pub palette: usize,
    /// Distinct list systems whose solvability was decided.
    pub systems_checked: usize,
    /// The first enumerated (or sampled) system with no happy colouring.
    pub failing_system: Option<ListSystem>,
}

/// Decides whether every size-`ell` list system from a palette of
/// `palette` colours admits a majority list-colouring of the graph.
///
/// Exhaustive mode quotients the system space by colour renaming:
/// candidates are generated in restricted-growth form (a vertex may reuse
/// earlier colours or take the next unused ones) and deduplicated by the
/// sorted multiset of colour-incidence vectors, which is a complete
/// renaming invariant. Work splits into independent per-system units
/// across `threads` workers; the reported witness is always the first
/// failing system in enumeration order.
pub fn majority_choosable_oracle(
    graph: &FiniteGraph,
    ell: usize,
    palette: usize,
    mode: OracleMode,
    threads: usize,
) -> Result<ChoosabilityReport> {
    if ell < 1 || palette < ell {
        return Err(Error::InvalidInstance(format!(
            "need 1 <= list size <= palette, got list size {ell}, palette {palette}"
        )));
    }
    let n = graph.vertex_count();
    let systems: Vec<Vec<Vec<Colour>>> = match mode {
        OracleMode::Exhaustive => {
            if n > 4 {
                return Err(Error::TooLargeForExhaustive(n, 4));
            }
            canonical_systems(n, ell, palette)
        }
        OracleMode::Sampled { samples, seed } => {
            if n > 10 {
                return Err(Error::TooLargeForSampled(n, 10));
            }
            sample_systems(n, ell, palette, samples, seed)
        }
    };

    let check = |system: &Vec<Vec<Colour>>| -> Result<bool> {
        let lists = ListSystem::new(
            graph
                .names()
                .iter()
                .cloned()
                .zip(system.iter().cloned())
                .collect(),
        )?;
        Ok(exists_majority_list_colouring(graph, &lists)?.is_some())
    };

    let first_failure: Option<usize> = if threads <= 1 || systems.len() < 2 {
        let mut found = None;
        for (i, s) in systems.iter().enumerate() {
            if !check(s)? {
                found = Some(i);
                break;
            }
        }
        found
    } else {
        let workers = threads.min(systems.len());
        let chunk = systems.len().div_ceil(workers);
        let results: Vec<Result<Option<usize>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = systems
                .chunks(chunk)
                .enumerate()
                .map(|(w, part)| {
                    let check = &check;
                    scope.spawn(move || {
                        for (off, s) in part.iter().enumerate() {
                            if !check(s)? {
                                return Ok(Some(w * chunk + off));
                            }
                        }
                        Ok(None)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut found = None;
        for r in results {
            if let Some(i) = r? {
                found = Some(found.map_or(i, |f: usize| f.min(i)));
            }
        }
        found
    };

    let (choosable, systems_checked, failing_system) = match first_failure {
        Some(i) => {
            let lists = ListSystem::new(
                graph.names().iter().cloned().zip(systems[i].iter().cloned()).collect(),
            )?;
            (false, i + 1, Some(lists))
        }
        None => (true, systems.len(), None),
    };

    Ok(ChoosabilityReport { choosable, ell, palette, systems_checked, failing_system })
}

/// All size-`ell` list systems on `n` vertices over `1..=palette`, one
/// representative per colour-renaming class.
fn canonical_systems(n: usize, ell: usize, palette: usize) -> Vec<Vec<Vec<Colour>>> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut stack: Vec<Vec<Colour>> = Vec::new();
    grow(n, ell, palette, 0, &mut stack, &mut seen, &mut out);
    out
}

fn grow(
    n: usize,
    ell: usize,
    palette: usize,
    max_used: usize,
    stack: &mut Vec<Vec<Colour>>,
    seen: &mut BTreeSet<Vec<u32>>,
    out: &mut Vec<Vec<Vec<Colour>>>,
) {
    if stack.len() == n {
        if seen.insert(signature(stack, max_used)) {
            out.push(stack.clone());
        }
        return;
    }
    // Reuse any old colours, then take the lowest unused ones; every
    // system is colour-renamable into this form.
    for list in vertex_candidates(ell, max_used, palette) {
        let new_max = list.iter().map(|&c| c as usize).max().unwrap().max(max_used);
        stack.push(list);
        grow(n, ell, palette, new_max, stack, seen, out);
        stack.pop();
    }
}

/// Candidate lists for one vertex in restricted-growth order: each choice
/// keeps `j` previously used colours and appends the next `ell - j` fresh
/// ones, emitted in lexicographic order.
fn vertex_candidates(ell: usize, max_used: usize, palette: usize) -> Vec<Vec<Colour>> {
    let mut lists = Vec::new();
    for j in (0..=ell.min(max_used)).rev() {
        let fresh = ell - j;
        if max_used + fresh > palette {
            continue;
        }
        for old in subsets(max_used, j) {
            let mut list: Vec<Colour> = old.iter().map(|&c| c as Colour).collect();
            list.extend((1..=fresh).map(|t| (max_used + t) as Colour));
            lists.push(list);
        }
    }
    lists.sort();
    lists
}

/// All `k`-subsets of `1..=m`, lexicographic.
fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for x in start..=m {
            current.push(x);
            rec(x + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(1, m, k, &mut current, &mut out);
    out
}

/// Complete renaming invariant: the sorted multiset of per-colour vertex
/// incidence bitmasks.
fn signature(system: &[Vec<Colour>], max_used: usize) -> Vec<u32> {
    let mut masks = vec![0u32; max_used];
    for (v, list) in system.iter().enumerate() {
        for &c in list {
            masks[c as usize - 1] |= 1 << v;
        }
    }
    masks.sort_unstable();
    masks
}

fn sample_systems(
    n: usize,
    ell: usize,
    palette: usize,
    samples: usize,
    seed: u64,
) -> Vec<Vec<Vec<Colour>>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let mut list: Vec<Colour> = rand::seq::index::sample(&mut rng, palette, ell)
                        .into_iter()
                        .map(|i| (i + 1) as Colour)
                        .collect();
                    list.sort_unstable();
                    list
                })
                .collect()
        })
        .collect()
}
