use crate::card::Card;
use crate::colouring::{Colour, ListSystem, PartialColouring};
use crate::error::{Error, Result};
use crate::lazy::GraphView;
use crate::streams::{DisjointRefinement, LazySetFamily, SetStream};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurplusVerdict {
    /// Strictly more boundary neighbours than inside neighbours.
    Included,
    Excluded,
    /// Undecided adjacencies straddle the comparison at this horizon.
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurplusRow {
    pub vertex: String,
    /// Confirmed neighbours on the boundary / inside the base set, plus
    /// pairs the view could not decide within the horizon.
    pub boundary_nbrs: usize,
    pub boundary_undecided: usize,
    pub inside_nbrs: usize,
    pub inside_undecided: usize,
    pub verdict: SurplusVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurplusReport {
    /// Members with certified boundary surplus, sorted.
    pub included: Vec<String>,
    pub rows: Vec<SurplusRow>,
    pub all_decided: bool,
}

/// Selects the members of `b_star` with strictly more neighbours on the
/// boundary than inside `a ∪ b_star`.
///
/// Counts come from adjacency queries against the two finite sets, so
/// they are exact whenever the view can decide each pair; undecided pairs
/// widen the comparison into an interval, and a vertex whose interval
/// straddles the cut is flagged `Unknown` rather than guessed.
pub fn boundary_surplus(
    view: &GraphView,
    a: &BTreeSet<String>,
    b_star: &BTreeSet<String>,
    boundary: &BTreeSet<String>,
    horizon: Option<usize>,
) -> Result<SurplusReport> {
    let mut rows = Vec::new();
    let mut included = Vec::new();
    let mut all_decided = true;
    let inside: BTreeSet<&String> = a.union(b_star).collect();
    for b in b_star {
        let count = |set: &[&String]| -> Result<(usize, usize)> {
            let (mut sure, mut undecided) = (0usize, 0usize);
            for z in set {
                if *z == b {
                    continue;
                }
                match view.adjacent(b, z, horizon)? {
                    Some(true) => sure += 1,
                    Some(false) => {}
                    None => undecided += 1,
                }
            }
            Ok((sure, undecided))
        };
        let (boundary_nbrs, boundary_undecided) =
            count(&boundary.iter().collect::<Vec<_>>())?;
        let (inside_nbrs, inside_undecided) =
            count(&inside.iter().copied().collect::<Vec<_>>())?;
        let verdict = if boundary_nbrs > inside_nbrs + inside_undecided {
            SurplusVerdict::Included
        } else if boundary_nbrs + boundary_undecided <= inside_nbrs {
            SurplusVerdict::Excluded
        } else {
            SurplusVerdict::Unknown
        };
        if verdict == SurplusVerdict::Included {
            included.push(b.clone());
        }
        if verdict == SurplusVerdict::Unknown {
            all_decided = false;
        }
        rows.push(SurplusRow {
            vertex: b.clone(),
            boundary_nbrs,
            boundary_undecided,
            inside_nbrs,
            inside_undecided,
            verdict,
        });
    }
    Ok(SurplusReport { included, rows, all_decided })
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessPoolRow {
    pub vertex: String,
    /// Boundary neighbours available to this member.
    pub pool_size: usize,
    /// Witnesses actually secured.
    pub achieved: usize,
    pub full: bool,
    /// When starved, the members holding the rest of this pool.
    pub starved_by: Vec<String>,
}

/// A pairwise disjoint family of boundary-witness sets, one per member.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessFamily {
    pub sets: BTreeMap<String, BTreeSet<String>>,
    pub rows: Vec<WitnessPoolRow>,
    pub min_achieved: usize,
    /// Whether every member received its entire pool.
    pub perfect: bool,
}

/// Builds disjoint witness sets F ⊆ N(member) ∩ boundary for each member.
///
/// With disjoint pools every member keeps its whole pool. Overlapping
/// pools cannot all be kept disjointly at finite scale, so the builder
/// greedily grows the currently smallest set first (ties by name),
/// maximizing the minimum size, and reports per-member shortfalls with
/// the members that absorbed the contested witnesses.
pub fn build_witness_family(
    view: &GraphView,
    members: &[String],
    boundary: &BTreeSet<String>,
    horizon: Option<usize>,
) -> Result<WitnessFamily> {
    {
        let mut seen = BTreeSet::new();
        for m in members {
            if !seen.insert(m) {
                return Err(Error::InvalidInstance(format!("duplicate member `{m}`")));
            }
        }
    }
    let mut pools: BTreeMap<&String, Vec<&String>> = BTreeMap::new();
    for m in members {
        let mut pool = Vec::new();
        for z in boundary {
            if z == m {
                continue;
            }
            match view.adjacent(m, z, horizon)? {
                Some(true) => pool.push(z),
                Some(false) => {}
                None => return Err(Error::AdjacencyUndecidable(m.clone(), z.clone())),
            }
        }
        pools.insert(m, pool);
    }

    let mut sets: BTreeMap<String, BTreeSet<String>> =
        members.iter().map(|m| (m.clone(), BTreeSet::new())).collect();
    let mut used: BTreeMap<&String, &String> = BTreeMap::new();
    loop {
        // The smallest extendable set goes first.
        let next = members
            .iter()
            .filter(|m| pools[*m].iter().any(|z| !used.contains_key(*z)))
            .min_by_key(|m| (sets[*m].len(), (*m).clone()));
        let Some(m) = next else { break };
        let z = pools[m]
            .iter()
            .find(|z| !used.contains_key(**z))
            .expect("extendable member has a free witness");
        used.insert(z, m);
        sets.get_mut(m).unwrap().insert((*z).clone());
    }

    let mut rows = Vec::new();
    for m in members {
        let pool = &pools[m];
        let achieved = sets[m].len();
        let starved_by: Vec<String> = if achieved == pool.len() {
            Vec::new()
        } else {
            pool.iter()
                .filter_map(|z| used.get(*z))
                .filter(|owner| **owner != m)
                .map(|owner| (*owner).clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        };
        rows.push(WitnessPoolRow {
            vertex: m.clone(),
            pool_size: pool.len(),
            achieved,
            full: achieved == pool.len(),
            starved_by,
        });
    }
    let min_achieved = rows.iter().map(|r| r.achieved).min().unwrap_or(0);
    let perfect = rows.iter().all(|r| r.full);
    Ok(WitnessFamily { sets, rows, min_achieved, perfect })
}

/// Witness selection at countable scale: each member's infinite
/// boundary-neighbour stream is refined into pairwise disjoint infinite
/// sub-streams, so every member keeps a witness set as large as its pool.
pub struct WitnessStreams {
    names: Vec<String>,
    refinement: DisjointRefinement<String>,
}

impl WitnessStreams {
    pub fn new(members: Vec<(String, SetStream<String>)>, schedule_seed: u64) -> Result<Self> {
        let mut names = Vec::with_capacity(members.len());
        let mut streams = Vec::with_capacity(members.len());
        for (name, stream) in members {
            if names.contains(&name) {
                return Err(Error::InvalidInstance(format!("duplicate member `{name}`")));
            }
            names.push(name);
            streams.push(stream);
        }
        let refinement = DisjointRefinement::new(LazySetFamily::new(streams), schedule_seed)?;
        Ok(WitnessStreams { names, refinement })
    }

    pub fn members(&self) -> &[String] {
        &self.names
    }

    /// First `k` witnesses reserved for `member`, growing the shared
    /// schedule as needed.
    pub fn prefix(&mut self, member: &str, k: usize) -> Result<Vec<String>> {
        let i = self
            .names
            .iter()
            .position(|n| n == member)
            .ok_or_else(|| Error::UnknownVertex(member.to_string()))?;
        self.refinement.prefix(i, k)
    }
}

/// Everything the boundary extension consumes: the already-coloured base,
/// the elimination order of the boundary, disjoint witness sets pointing
/// back at members that need opposite-coloured witnesses, and 3-colour
/// lists for the boundary vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionPlan {
    pub base: PartialColouring,
    pub order: Vec<String>,
    pub witness_sets: BTreeMap<String, BTreeSet<String>>,
    pub lists: ListSystem,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepAudit {
    pub index: usize,
    pub vertex: String,
    pub coloured_neighbours: usize,
    /// List colours that keep the vertex happy if chosen now.
    pub safe: Vec<Colour>,
    /// The owner's colour this vertex had to avoid, if it is a witness.
    pub avoided: Option<Colour>,
    pub chosen: Colour,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberAuditRow {
    pub vertex: String,
    /// Witnesses assigned / boundary neighbours in total.
    pub witnesses: usize,
    pub boundary_nbrs: usize,
    /// Coloured neighbours inside the base domain.
    pub inside_nbrs: usize,
    /// Witnesses that ended up opposite-coloured (all of them, by the
    /// avoidance rule).
    pub witnesses_opposite: usize,
    /// The finite-scale guarantee: the witness set covers the member's
    /// whole boundary pool and is at least as large as its inside count.
    pub guaranteed: bool,
    /// Exact happiness over the coloured domain, when decidable.
    pub happy: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionOutcome {
    /// The base colouring extended over the whole boundary.
    pub colouring: PartialColouring,
    pub steps: Vec<StepAudit>,
    /// Boundary vertices confirmed happy (always all of them).
    pub boundary_happy: usize,
    pub member_audit: Vec<MemberAuditRow>,
}

/// Colours the boundary in elimination order, keeping every boundary
/// vertex happy and steering witnesses away from their owner's colour.
///
/// At each step all neighbours are already coloured, so at most one list
/// colour can sit on a strict majority of them; of the ≥ 2 remaining safe
/// colours, a witness discards its owner's colour and the lowest survivor
/// wins. Later steps never touch an earlier vertex's neighbourhood, so
/// happiness established at choice time is final.
pub fn extend_over_boundary(
    view: &GraphView,
    plan: &ExtensionPlan,
    horizon: Option<usize>,
) -> Result<ExtensionOutcome> {
    let mut in_order = BTreeSet::new();
    for z in &plan.order {
        if !view.contains(z) {
            return Err(Error::UnknownVertex(z.clone()));
        }
        if plan.base.contains(z) {
            return Err(Error::InvalidInstance(format!(
                "boundary vertex `{z}` is already coloured"
            )));
        }
        if !in_order.insert(z.as_str()) {
            return Err(Error::InvalidInstance(format!("vertex `{z}` repeats in the order")));
        }
        match plan.lists.get(z) {
            Some(list) if list.len() == 3 => {}
            Some(list) => return Err(Error::BadListSize(z.clone(), list.len())),
            None => return Err(Error::NotInDomain(z.clone())),
        }
    }

    // Witness → owner, rejecting overlaps and witnesses outside the order.
    let mut owner_of: BTreeMap<&str, &str> = BTreeMap::new();
    for (owner, set) in &plan.witness_sets {
        if !plan.base.contains(owner) {
            return Err(Error::NotInDomain(owner.clone()));
        }
        for z in set {
            if !in_order.contains(z.as_str()) {
                return Err(Error::InvalidInstance(format!(
                    "witness `{z}` of `{owner}` is not in the extension order"
                )));
            }
            match view.adjacent(owner, z, horizon)? {
                Some(true) => {}
                Some(false) => {
                    return Err(Error::InvalidInstance(format!(
                        "witness `{z}` is not a neighbour of `{owner}`"
                    )))
                }
                None => return Err(Error::AdjacencyUndecidable(owner.clone(), z.clone())),
            }
            if owner_of.insert(z.as_str(), owner.as_str()).is_some() {
                return Err(Error::OverlappingWitnessSets(z.clone()));
            }
        }
    }

    let mut g = plan.base.clone();
    let mut steps = Vec::with_capacity(plan.order.len());
    for (index, z) in plan.order.iter().enumerate() {
        let degree = match view.degree(z)? {
            Card::Finite(d) => d,
            Card::Aleph0 => return Err(Error::InfiniteBoundaryVertex(z.clone())),
        };
        let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
        for w in view.neighbour_stream(z)?.take(degree) {
            let c = g
                .get(&w)
                .ok_or_else(|| Error::UncolouredNeighbour(z.clone(), w.clone()))?;
            *counts.entry(c).or_insert(0) += 1;
        }
        let list = plan.lists.get(z).expect("validated above");
        let safe: Vec<Colour> = list
            .iter()
            .copied()
            .filter(|c| 2 * counts.get(c).copied().unwrap_or(0) <= degree)
            .collect();
        if safe.len() < 2 {
            return Err(Error::SafeSetAssertion(z.clone(), safe.len()));
        }
        let avoided = owner_of.get(z.as_str()).map(|owner| g.get(owner).expect("owner coloured"));
        let chosen = *safe
            .iter()
            .find(|c| Some(**c) != avoided)
            .expect("two safe colours leave one after avoidance");
        g.set(z, chosen);
        steps.push(StepAudit {
            index,
            vertex: z.clone(),
            coloured_neighbours: degree,
            safe,
            avoided,
            chosen,
        });
    }

    // Happiness of each boundary vertex is final: verify it exactly.
    let mut boundary_happy = 0usize;
    for z in &plan.order {
        let own = g.get(z).expect("just coloured");
        let degree = match view.degree(z)? {
            Card::Finite(d) => d,
            Card::Aleph0 => unreachable!("rejected above"),
        };
        let mono = view
            .neighbour_stream(z)?
            .take(degree)
            .filter(|w| g.get(w) == Some(own))
            .count();
        assert!(2 * mono <= degree, "boundary vertex {z} lost its safety after extension");
        boundary_happy += 1;
    }

    let mut member_audit = Vec::new();
    for (owner, set) in &plan.witness_sets {
        let own = g.get(owner).expect("validated");
        let witnesses_opposite = set.iter().filter(|z| g.get(z) != Some(own)).count();
        assert_eq!(witnesses_opposite, set.len(), "a witness kept its owner's colour");
        let mut boundary_nbrs = 0usize;
        let mut inside_nbrs = 0usize;
        let (mut mono, mut diff) = (0usize, 0usize);
        let mut exact = true;
        for (w, c) in g.iter() {
            if w == owner {
                continue;
            }
            match view.adjacent(owner, w, horizon)? {
                Some(true) => {
                    if in_order.contains(w) {
                        boundary_nbrs += 1;
                    } else {
                        inside_nbrs += 1;
                    }
                    if c == own {
                        mono += 1;
                    } else {
                        diff += 1;
                    }
                }
                Some(false) => {}
                None => exact = false,
            }
        }
        let guaranteed = set.len() == boundary_nbrs && set.len() >= inside_nbrs;
        let happy = if exact {
            Some(mono <= diff)
        } else if mono <= diff {
            // Undecided pairs could still raise mono.
            None
        } else {
            Some(false)
        };
        if guaranteed && exact {
            assert_eq!(happy, Some(true), "full witness cover must force happiness");
        }
        member_audit.push(MemberAuditRow {
            vertex: owner.clone(),
            witnesses: set.len(),
            boundary_nbrs,
            inside_nbrs,
            witnesses_opposite,
            guaranteed,
            happy,
        });
    }

    Ok(ExtensionOutcome { colouring: g, steps, boundary_happy, member_audit })
}
