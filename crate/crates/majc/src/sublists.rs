use crate::card::Card;
use crate::colouring::{Colour, ListSystem};
use crate::error::{Error, Result};
use crate::streams::SetStream;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A named infinite vertex set fed to the sublist engine.
pub struct TrackedSet {
    pub label: String,
    pub stream: SetStream<String>,
}

/// Where the engine finds each vertex's base list.
pub enum ListOracle<'a> {
    /// Every vertex carries the same list.
    Uniform(&'a [Colour]),
    /// Explicit per-vertex lists; touching a missing vertex is an error.
    Explicit(&'a ListSystem),
}

impl ListOracle<'_> {
    fn get(&self, vertex: &str) -> Result<Vec<Colour>> {
        match self {
            ListOracle::Uniform(list) => Ok(list.to_vec()),
            ListOracle::Explicit(system) => system
                .get(vertex)
                .map(|l| l.to_vec())
                .ok_or_else(|| Error::NotInDomain(vertex.to_string())),
        }
    }

    fn universe(&self) -> Vec<Colour> {
        match self {
            ListOracle::Uniform(list) => {
                let mut c: Vec<Colour> = list.to_vec();
                c.sort_unstable();
                c.dedup();
                c
            }
            ListOracle::Explicit(system) => system.universe().into_iter().collect(),
        }
    }
}

/// The deterministic fallback sublist: drop the largest colour.
pub fn default_sublist(list: &[Colour]) -> Vec<Colour> {
    let mut out = list.to_vec();
    out.sort_unstable();
    out.pop();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SublistLogEntry {
    pub step: usize,
    pub set_label: String,
    pub colour: Colour,
    pub n: usize,
    pub chosen: String,
    /// Whether the colour was present in the chosen vertex's list.
    pub struck: bool,
}

/// Horizon-stamped result of the sublist engine: which vertices were
/// processed, in what order, and the sublists they received. Vertices
/// never chosen within the horizon implicitly carry the default sublist.
#[derive(Debug, Clone, Serialize)]
pub struct SublistTable {
    pub ell: usize,
    pub horizon: usize,
    pub x: String,
    pub c_x: Colour,
    pub colours: Vec<Colour>,
    pub log: Vec<SublistLogEntry>,
    /// Sublists of the chosen vertices.
    pub sublists: BTreeMap<String, Vec<Colour>>,
    /// (set label, colour) → number of logged vertices known to lie in
    /// the set whose sublist misses the colour.
    pub coverage: BTreeMap<String, BTreeMap<Colour, usize>>,
}

impl SublistTable {
    /// The sublist in force for any vertex: the logged one if the vertex
    /// was chosen, otherwise the deterministic default.
    pub fn effective_sublist(&self, vertex: &str, lists: &ListOracle) -> Result<Vec<Colour>> {
        if let Some(l) = self.sublists.get(vertex) {
            return Ok(l.clone());
        }
        Ok(default_sublist(&lists.get(vertex)?))
    }
}

/// Number of logged vertices in the labelled set whose sublist misses
/// the colour. Monotone non-decreasing in the table's horizon.
pub fn coverage_counter(table: &SublistTable, label: &str, colour: Colour) -> Result<usize> {
    table
        .coverage
        .get(label)
        .and_then(|row| row.get(&colour))
        .copied()
        .ok_or_else(|| Error::UnknownCoveragePair(label.to_string(), colour))
}

pub struct SublistRequest<'a> {
    /// Enumeration of all vertices; `x` must be its first element. Also
    /// serves as the universal tracked set.
    pub vertex_enum: SetStream<String>,
    /// Further tracked sets; labels must be distinct and not "V".
    pub tracked: Vec<TrackedSet>,
    pub lists: ListOracle<'a>,
    pub x: String,
    pub c_x: Colour,
    pub ell: usize,
    pub horizon: usize,
}

pub const UNIVERSE_LABEL: &str = "V";

/// Runs the sublist engine for the first `horizon` triples of a fair
/// enumeration of (tracked set, colour, round) with (V, c_x, 1) forced
/// first.
///
/// Each triple chooses the earliest not-yet-chosen vertex of its set (in
/// the set's own stream order) and strikes the triple's colour from that
/// vertex's list when present; an absent colour falls back to the default
/// sublist. The first triple therefore pins the distinguished vertex's
/// sublist to its list minus `c_x`.
pub fn select_sublists(req: SublistRequest) -> Result<SublistTable> {
    if req.horizon < 1 {
        return Err(Error::BadHorizon);
    }
    if req.vertex_enum.get(0).as_deref() != Some(req.x.as_str()) {
        return Err(Error::XNotFirst(req.x.clone()));
    }
    if req.vertex_enum.declared() != Card::Aleph0 {
        return Err(Error::FiniteFamilyMember(0));
    }
    for (i, t) in req.tracked.iter().enumerate() {
        if t.stream.declared() != Card::Aleph0 {
            return Err(Error::FiniteFamilyMember(i + 1));
        }
        if t.label == UNIVERSE_LABEL {
            return Err(Error::Usage(format!(
                "tracked-set label `{UNIVERSE_LABEL}` is reserved for the vertex enumeration"
            )));
        }
    }
    {
        let mut labels = BTreeSet::new();
        for t in &req.tracked {
            if !labels.insert(t.label.as_str()) {
                return Err(Error::Usage(format!("duplicate tracked-set label `{}`", t.label)));
            }
        }
    }
    let colours = req.lists.universe();
    let x_list = req.lists.get(&req.x)?;
    if x_list.len() != req.ell + 1 {
        return Err(Error::BadListSize(req.x.clone(), x_list.len()));
    }
    if !x_list.contains(&req.c_x) {
        return Err(Error::ColourNotInList(req.x.clone(), req.c_x));
    }

    // Tracked sets, universal enumeration first.
    let mut sets: Vec<(&str, &SetStream<String>)> = vec![(UNIVERSE_LABEL, &req.vertex_enum)];
    for t in &req.tracked {
        sets.push((t.label.as_str(), &t.stream));
    }
    let cx_index = colours.iter().position(|&c| c == req.c_x).expect("c_x in universe");

    let mut cursors = vec![0usize; sets.len()];
    let mut seen: Vec<BTreeSet<String>> = vec![BTreeSet::new(); sets.len()];
    let mut chosen: BTreeSet<String> = BTreeSet::new();
    let mut log: Vec<SublistLogEntry> = Vec::new();
    let mut sublists: BTreeMap<String, Vec<Colour>> = BTreeMap::new();

    for (step, (j, m, n)) in
        TripleEnum::new(sets.len(), colours.len(), cx_index).take(req.horizon).enumerate()
    {
        let colour = colours[m];
        // Choose the earliest unchosen vertex of set j.
        let mut allowance = chosen.len() + 1;
        let vertex = loop {
            let pos = cursors[j];
            cursors[j] += 1;
            let v = sets[j].1.get(pos).ok_or(Error::StreamEnded(j))?;
            seen[j].insert(v.clone());
            if !chosen.contains(&v) {
                break v;
            }
            allowance -= 1;
            if allowance == 0 {
                return Err(Error::StalledStream(j));
            }
        };
        chosen.insert(vertex.clone());
        let base = req.lists.get(&vertex)?;
        if base.len() != req.ell + 1 {
            return Err(Error::BadListSize(vertex.clone(), base.len()));
        }
        let struck = base.contains(&colour);
        let sub = if struck {
            base.iter().copied().filter(|&c| c != colour).collect()
        } else {
            default_sublist(&base)
        };
        sublists.insert(vertex.clone(), sub);
        log.push(SublistLogEntry {
            step,
            set_label: sets[j].0.to_string(),
            colour,
            n,
            chosen: vertex,
            struck,
        });
    }

    // Coverage: logged vertices known to lie in each set, whose sublist
    // misses the colour. Membership in the universal set is structural;
    // for other sets it is certified by the scanned prefix.
    let mut coverage: BTreeMap<String, BTreeMap<Colour, usize>> = BTreeMap::new();
    for (j, (label, _)) in sets.iter().enumerate() {
        let mut row = BTreeMap::new();
        for &c in &colours {
            let count = log
                .iter()
                .filter(|e| j == 0 || seen[j].contains(&e.chosen))
                .filter(|e| !sublists[&e.chosen].contains(&c))
                .count();
            row.insert(c, count);
        }
        coverage.insert((*label).to_string(), row);
    }

    Ok(SublistTable {
        ell: req.ell,
        horizon: req.horizon,
        x: req.x,
        c_x: req.c_x,
        colours,
        log,
        sublists,
        coverage,
    })
}

/// Fair enumeration of (set index, colour index, round) triples: the
/// forced first triple, then all others by ascending total weight.
struct TripleEnum {
    sets: usize,
    colours: usize,
    forced: (usize, usize, usize),
    queue: VecDeque<(usize, usize, usize)>,
    weight: usize,
    emitted_forced: bool,
}

impl TripleEnum {
    fn new(sets: usize, colours: usize, cx_index: usize) -> Self {
        TripleEnum {
            sets,
            colours,
            forced: (0, cx_index, 1),
            queue: VecDeque::new(),
            weight: 0,
            emitted_forced: false,
        }
    }
}

impl Iterator for TripleEnum {
    type Item = (usize, usize, usize);

    fn next(&mut self) -> Option<(usize, usize, usize)> {
        if !self.emitted_forced {
            self.emitted_forced = true;
            return Some(self.forced);
        }
        loop {
            if let Some(t) = self.queue.pop_front() {
                if t != self.forced {
                    return Some(t);
                }
                continue;
            }
            let w = self.weight;
            self.weight += 1;
            for j in 0..=w.min(self.sets - 1) {
                for m in 0..=(w - j).min(self.colours - 1) {
                    self.queue.push_back((j, m, w - j - m));
                }
            }
        }
    }
}
