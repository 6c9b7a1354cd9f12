use crate::card::Card;
use crate::error::{Error, Result};
use crate::lazy::GraphView;
use serde::Serialize;
use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// Vertices all of whose neighbours lie in `set`. Isolated vertices of a
/// finite graph qualify for every `set`.
///
/// On a lazy graph, members of `set` must have finite degree (their full
/// neighbourhoods seed the candidate pool) and candidates are found among
/// `set` and its neighbours; infinite-degree candidates are excluded since
/// their neighbourhood can never fit inside a finite set.
pub fn nbly(view: &GraphView, set: &BTreeSet<String>) -> Result<BTreeSet<String>> {
    for v in set {
        if !view.contains(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    match view {
        GraphView::Finite(g) => {
            let inside: BTreeSet<usize> = set.iter().filter_map(|v| g.index(v)).collect();
            let mut out = BTreeSet::new();
            for idx in 0..g.vertex_count() {
                if g.neighbours(idx).iter().all(|w| inside.contains(w)) {
                    out.insert(g.name(idx).to_string());
                }
            }
            Ok(out)
        }
        GraphView::Lazy(_) => {
            let mut candidates = set.clone();
            for a in set {
                match view.degree(a)? {
                    Card::Finite(d) => {
                        candidates.extend(view.neighbour_stream(a)?.take(d));
                    }
                    Card::Aleph0 => return Err(Error::InfiniteDegreeInSet(a.clone())),
                }
            }
            let mut out = BTreeSet::new();
            for v in candidates {
                if let Card::Finite(d) = view.degree(&v)? {
                    if view.neighbour_stream(&v)?.take(d).all(|w| set.contains(&w)) {
                        out.insert(v);
                    }
                }
            }
            Ok(out)
        }
    }
}

/// Verdict of the closed-set predicate: every vertex outside the set keeps
/// at least one neighbour outside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedCheck {
    pub closed: bool,
    /// Some vertex outside the set with its whole neighbourhood inside.
    pub witness: Option<String>,
}

pub fn is_closed(view: &GraphView, set: &BTreeSet<String>) -> Result<ClosedCheck> {
    let witness = nbly(view, set)?.into_iter().find(|v| !set.contains(v));
    Ok(ClosedCheck { closed: witness.is_none(), witness })
}

/// Stage-by-stage record of a closure computation.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureTrace {
    /// Cumulative sets: `stages[0]` is the seed, each later entry adds the
    /// vertices absorbed at that stage, and the last entry is the result.
    pub stages: Vec<BTreeSet<String>>,
    /// Stage index at which each member first appeared (seed members: 0).
    pub absorbed_at: BTreeMap<String, usize>,
    /// False when a materialization budget cut the computation short.
    pub complete: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureOutcome {
    pub closed_set: BTreeSet<String>,
    pub trace: ClosureTrace,
}

impl ClosureOutcome {
    pub fn seed(&self) -> &BTreeSet<String> {
        &self.trace.stages[0]
    }

    /// Members of the closed set outside the seed.
    pub fn boundary(&self) -> BTreeSet<String> {
        self.closed_set.difference(self.seed()).cloned().collect()
    }
}

/// Smallest closed superset of `set`, grown stage by stage: each stage
/// absorbs every vertex whose whole neighbourhood already lies inside.
///
/// Finite graphs always run to the fixpoint and ignore `budget`. Lazy
/// graphs require a budget bounding the number of distinct vertex names
/// materialized from the oracle; when it is exhausted the partial result
/// is returned with `trace.complete == false`. Lazy candidates are
/// discovered through neighbourhoods, so oracle graphs are assumed to have
/// no isolated vertices.
pub fn closure(
    view: &GraphView,
    set: &BTreeSet<String>,
    budget: Option<usize>,
) -> Result<ClosureOutcome> {
    for v in set {
        if !view.contains(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    match view {
        GraphView::Finite(g) => {
            let mut current: BTreeSet<usize> = set.iter().filter_map(|v| g.index(v)).collect();
            let mut stages = vec![set.clone()];
            let mut absorbed_at: BTreeMap<String, usize> =
                set.iter().map(|v| (v.clone(), 0)).collect();
            loop {
                let added: Vec<usize> = (0..g.vertex_count())
                    .filter(|idx| !current.contains(idx))
                    .filter(|&idx| g.neighbours(idx).iter().all(|w| current.contains(w)))
                    .collect();
                if added.is_empty() {
                    break;
                }
                let stage = stages.len();
                current.extend(added.iter().copied());
                for idx in added {
                    absorbed_at.insert(g.name(idx).to_string(), stage);
                }
                stages.push(current.iter().map(|&i| g.name(i).to_string()).collect());
            }
            let closed_set = stages.last().expect("seed stage").clone();
            Ok(ClosureOutcome {
                closed_set,
                trace: ClosureTrace { stages, absorbed_at, complete: true },
            })
        }
        GraphView::Lazy(_) => {
            let budget = budget.ok_or(Error::BudgetRequired)?;
            closure_lazy(view, set, budget)
        }
    }
}

fn closure_lazy(
    view: &GraphView,
    set: &BTreeSet<String>,
    budget: usize,
) -> Result<ClosureOutcome> {
    let mut touched: BTreeSet<String> = set.clone();
    let mut current = set.clone();
    let mut stages = vec![set.clone()];
    let mut absorbed_at: BTreeMap<String, usize> = set.iter().map(|v| (v.clone(), 0)).collect();
    let mut candidates: BTreeSet<String> = BTreeSet::new();
    let mut frontier: Vec<String> = set.iter().cloned().collect();
    let mut complete = true;

    // Pulls a name out of a neighbour stream, charging the budget for
    // first sightings. Returns false once the budget is spent.
    fn touch(touched: &mut BTreeSet<String>, budget: usize, name: &str) -> bool {
        if touched.contains(name) {
            return true;
        }
        if touched.len() >= budget {
            return false;
        }
        touched.insert(name.to_string());
        true
    }

    'stages: loop {
        // Ingest the neighbourhoods of the newest members.
        for a in &frontier {
            match view.degree(a)? {
                Card::Finite(d) => {
                    for w in view.neighbour_stream(a)?.take(d) {
                        if !touch(&mut touched, budget, &w) {
                            complete = false;
                            break;
                        }
                        candidates.insert(w);
                    }
                }
                Card::Aleph0 => {
                    // Streams are assumed duplicate-free; the pull cap only
                    // guards against oracles that repeat names forever.
                    let cap = budget.saturating_mul(4).max(64);
                    let mut stream_done = false;
                    for (pulls, w) in view.neighbour_stream(a)?.enumerate() {
                        if pulls >= cap || !touch(&mut touched, budget, &w) {
                            complete = false;
                            stream_done = true;
                            break;
                        }
                        candidates.insert(w);
                    }
                    if !stream_done {
                        complete = false; // infinite stream never finishes
                    }
                }
            }
        }

        // Absorb, simultaneously, every candidate whose whole neighbourhood
        // lies in the current set.
        let mut added: Vec<String> = Vec::new();
        let pool: Vec<String> =
            candidates.iter().filter(|v| !current.contains(*v)).cloned().collect();
        for v in pool {
            let d = match view.degree(&v)? {
                Card::Finite(d) => d,
                Card::Aleph0 => continue,
            };
            let mut all_inside = true;
            for w in view.neighbour_stream(&v)?.take(d) {
                if !touch(&mut touched, budget, &w) {
                    complete = false;
                    all_inside = false;
                    break;
                }
                if !current.contains(&w) {
                    all_inside = false;
                    break;
                }
            }
            if all_inside {
                added.push(v);
            }
        }
        if added.is_empty() {
            break 'stages;
        }
        let stage = stages.len();
        for v in &added {
            current.insert(v.clone());
            absorbed_at.insert(v.clone(), stage);
        }
        stages.push(current.clone());
        frontier = added;
        if !complete {
            break 'stages;
        }
    }
    Ok(ClosureOutcome {
        closed_set: current,
        trace: ClosureTrace { stages, absorbed_at, complete },
    })
}

/// A replayable ordering of the boundary: every vertex's neighbourhood is
/// contained in the seed plus the vertices listed before it.
#[derive(Debug, Clone, Serialize)]
pub struct EliminationOrder {
    pub order: Vec<String>,
    /// The closure stage that absorbed each ordered vertex.
    pub stage_of: BTreeMap<String, usize>,
    pub complete: bool,
}

/// Orders the boundary of a computed closure by (absorption stage,
/// vertex id), ids taken from the graph's own enumeration.
pub fn elimination_order(view: &GraphView, outcome: &ClosureOutcome) -> Result<EliminationOrder> {
    let seed = outcome.seed();
    let mut keyed: Vec<(usize, usize, String)> = Vec::new();
    for v in outcome.closed_set.difference(seed) {
        let stage = *outcome.trace.absorbed_at.get(v).ok_or(Error::IncompleteOrder)?;
        let id = match view {
            GraphView::Finite(g) => g.index(v),
            GraphView::Lazy(g) => g.vertex_index(v),
        }
        .ok_or_else(|| Error::UnknownVertex(v.clone()))?;
        keyed.push((stage, id, v.clone()));
    }
    keyed.sort();
    let order: Vec<String> = keyed.iter().map(|(_, _, v)| v.clone()).collect();
    let stage_of = keyed.into_iter().map(|(stage, _, v)| (v, stage)).collect();
    Ok(EliminationOrder { order, stage_of, complete: outcome.trace.complete })
}

/// Checks the ordering invariant directly against adjacency: for each
/// position i, every neighbour of `order[i]` lies in `base` or among the
/// earlier entries. Returns the first violating vertex.
pub fn verify_elimination(
    view: &GraphView,
    base: &BTreeSet<String>,
    order: &[String],
) -> Result<Option<String>> {
    let mut allowed: BTreeSet<&str> = base.iter().map(|s| s.as_str()).collect();
    for v in order {
        let d = match view.degree(v)? {
            Card::Finite(d) => d,
            Card::Aleph0 => return Err(Error::InfiniteBoundaryVertex(v.clone())),
        };
        let ok = view.neighbour_stream(v)?.take(d).all(|w| allowed.contains(w.as_str()));
        if !ok {
            return Ok(Some(v.clone()));
        }
        allowed.insert(v.as_str());
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryRow {
    pub vertex: String,
    pub degree: usize,
    pub inside: usize,
    pub pass: bool,
}

/// Per-vertex confirmation that boundary vertices have no neighbours
/// outside the closure.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub rows: Vec<BoundaryRow>,
    pub all_pass: bool,
    pub complete: bool,
}

pub fn boundary_degree_check(view: &GraphView, outcome: &ClosureOutcome) -> Result<BoundaryReport> {
    let mut rows = Vec::new();
    let mut all_pass = true;
    for v in outcome.boundary() {
        let d = match view.degree(&v)? {
            Card::Finite(d) => d,
            Card::Aleph0 => return Err(Error::InfiniteBoundaryVertex(v.clone())),
        };
        let inside = view
            .neighbour_stream(&v)?
            .take(d)
            .filter(|w| outcome.closed_set.contains(w))
            .count();
        let pass = inside == d;
        all_pass &= pass;
        rows.push(BoundaryRow { vertex: v, degree: d, inside, pass });
    }
    Ok(BoundaryReport { rows, all_pass, complete: outcome.trace.complete })
}
