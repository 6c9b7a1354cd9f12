use crate::card::Card;
use crate::error::{Error, Result};
use crate::generators::{instantiate_generator, GeneratorSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::Arc;

/// A position-indexed set enumeration: `get(i)` returns the i-th element,
/// or `None` past the end of a finite set. Backed by a pure function, so
/// replays are identical and no state is shared.
pub struct SetStream<T> {
    declared: Card,
    f: Box<dyn Fn(usize) -> Option<T> + Send + Sync>,
}

impl<T> SetStream<T> {
    pub fn from_fn(
        declared: Card,
        f: impl Fn(usize) -> Option<T> + Send + Sync + 'static,
    ) -> Self {
        SetStream { declared, f: Box::new(f) }
    }

    pub fn declared(&self) -> Card {
        self.declared
    }

    pub fn get(&self, i: usize) -> Option<T> {
        (self.f)(i)
    }

    pub fn prefix(&self, k: usize) -> Vec<T> {
        (0..k).map_while(|i| self.get(i)).collect()
    }
}

/// The vertex enumeration of a lazy graph as a stream of names.
pub fn enumeration_stream(graph: Arc<dyn crate::lazy::LazyGraph>) -> SetStream<String> {
    SetStream::from_fn(Card::Aleph0, move |i| Some(graph.vertex_name(i)))
}

/// One vertex's neighbour list as a stream, declared at its degree.
pub fn neighbour_set_stream(
    graph: Arc<dyn crate::lazy::LazyGraph>,
    vertex: &str,
) -> Result<SetStream<String>> {
    if graph.vertex_index(vertex).is_none() {
        return Err(Error::UnknownVertex(vertex.to_string()));
    }
    let declared = graph.degree(vertex);
    let vertex = vertex.to_string();
    Ok(SetStream::from_fn(declared, move |i| graph.neighbour(&vertex, i)))
}

/// Serializable description of a string stream, for files and the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StreamSpec {
    /// "0", "1", "2", ...
    Naturals,
    /// start, start+step, start+2·step, ... (step ≥ 1)
    Arithmetic { start: u64, step: u64 },
    /// Vertex names of a generated graph, in enumeration order.
    Enumeration { generator: GeneratorSpec },
    /// Neighbour names of one vertex of a generated graph.
    Neighbours { generator: GeneratorSpec, vertex: String },
}

impl StreamSpec {
    pub fn instantiate(&self) -> Result<SetStream<String>> {
        match self {
            StreamSpec::Naturals => {
                Ok(SetStream::from_fn(Card::Aleph0, |i| Some(i.to_string())))
            }
            StreamSpec::Arithmetic { start, step } => {
                if *step == 0 {
                    return Err(Error::BadGeneratorParams("arithmetic step must be >= 1".into()));
                }
                let (start, step) = (*start, *step);
                Ok(SetStream::from_fn(Card::Aleph0, move |i| {
                    Some((start + step * i as u64).to_string())
                }))
            }
            StreamSpec::Enumeration { generator } => {
                Ok(enumeration_stream(instantiate_generator(generator)?))
            }
            StreamSpec::Neighbours { generator, vertex } => {
                neighbour_set_stream(instantiate_generator(generator)?, vertex)
            }
        }
    }
}

/// An indexed family of set streams.
pub struct LazySetFamily<T> {
    pub members: Vec<SetStream<T>>,
}

impl<T> LazySetFamily<T> {
    pub fn new(members: Vec<SetStream<T>>) -> Self {
        LazySetFamily { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Refines a family of infinite sets into pairwise disjoint infinite
/// sub-streams, one per member.
///
/// A fair round-robin schedule (rotated by `schedule_seed`) visits the
/// members; each visit emits the first element of that member's stream
/// not yet used anywhere. Cursors never move backwards, so total source
/// inspections stay linear in the emitted volume.
pub struct DisjointRefinement<T: Ord + Clone> {
    members: Vec<SetStream<T>>,
    start: usize,
    emitted: Vec<Vec<T>>,
    cursors: Vec<usize>,
    used: BTreeSet<T>,
    /// Global emissions so far (one per schedule step).
    pub steps: usize,
    /// Source positions inspected so far.
    pub scan_work: usize,
}

impl<T: Ord + Clone> DisjointRefinement<T> {
    pub fn new(family: LazySetFamily<T>, schedule_seed: u64) -> Result<Self> {
        for (i, member) in family.members.iter().enumerate() {
            if member.declared() != Card::Aleph0 {
                return Err(Error::FiniteFamilyMember(i));
            }
        }
        let n = family.members.len().max(1);
        Ok(DisjointRefinement {
            start: (schedule_seed % n as u64) as usize,
            emitted: vec![Vec::new(); family.members.len()],
            cursors: vec![0; family.members.len()],
            members: family.members,
            used: BTreeSet::new(),
            steps: 0,
            scan_work: 0,
        })
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// Runs the schedule until member `i` has `k` elements, then returns
    /// its prefix. Other members grow along the way — that is the point
    /// of the dovetailing.
    pub fn prefix(&mut self, i: usize, k: usize) -> Result<Vec<T>> {
        assert!(i < self.members.len(), "member index {i} out of range");
        while self.emitted[i].len() < k {
            self.step()?;
        }
        Ok(self.emitted[i][..k].to_vec())
    }

    /// Emits one element for the next scheduled member.
    fn step(&mut self) -> Result<()> {
        let n = self.members.len();
        let i = (self.start + self.steps) % n;
        // Among any used+1 fresh positions of an injective infinite
        // stream, at least one element is unused; more skips certify a
        // broken source.
        let mut allowance = self.used.len() + 1;
        loop {
            let pos = self.cursors[i];
            self.cursors[i] += 1;
            self.scan_work += 1;
            let x = self.members[i].get(pos).ok_or(Error::StreamEnded(i))?;
            if self.used.insert(x.clone()) {
                self.emitted[i].push(x);
                break;
            }
            allowance -= 1;
            if allowance == 0 {
                return Err(Error::StalledStream(i));
            }
        }
        self.steps += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn naturals() -> SetStream<String> {
        SetStream::from_fn(Card::Aleph0, |i| Some(i.to_string()))
    }

    fn arithmetic(start: u64, step: u64) -> SetStream<String> {
        SetStream::from_fn(Card::Aleph0, move |i| Some((start + step * i as u64).to_string()))
    }

    #[test]
    fn three_copies_of_naturals_refine_disjointly() {
        let family = LazySetFamily::new(vec![naturals(), naturals(), naturals()]);
        let mut refine = DisjointRefinement::new(family, 0).unwrap();
        let p0 = refine.prefix(0, 100).unwrap();
        let p1 = refine.prefix(1, 100).unwrap();
        let p2 = refine.prefix(2, 100).unwrap();
        let s0: BTreeSet<_> = p0.iter().collect();
        let s1: BTreeSet<_> = p1.iter().collect();
        let s2: BTreeSet<_> = p2.iter().collect();
        assert_eq!(s0.len(), 100);
        assert!(s0.is_disjoint(&s1));
        assert!(s0.is_disjoint(&s2));
        assert!(s1.is_disjoint(&s2));
        // Round-robin from member 0 over identical sources.
        assert_eq!(p0[0], "0");
        assert_eq!(p1[0], "1");
        assert_eq!(p2[0], "2");
        assert_eq!(p0[1], "3");
    }

    #[test]
    fn disjoint_sources_pass_through() {
        let family = LazySetFamily::new(vec![arithmetic(0, 2), arithmetic(1, 2)]);
        let mut refine = DisjointRefinement::new(family, 0).unwrap();
        let evens = refine.prefix(0, 50).unwrap();
        let odds = refine.prefix(1, 50).unwrap();
        for (i, x) in evens.iter().enumerate() {
            assert_eq!(x, &(2 * i as u64).to_string());
        }
        for (i, x) in odds.iter().enumerate() {
            assert_eq!(x, &(2 * i as u64 + 1).to_string());
        }
    }

    #[test]
    fn single_member_keeps_its_whole_stream() {
        let family = LazySetFamily::new(vec![naturals()]);
        let mut refine = DisjointRefinement::new(family, 7).unwrap();
        let p = refine.prefix(0, 30).unwrap();
        assert_eq!(p, (0..30).map(|i| i.to_string()).collect::<Vec<_>>());
    }

    #[test]
    fn schedule_seed_rotates_the_start_deterministically() {
        let run = |seed: u64| {
            let family = LazySetFamily::new(vec![naturals(), naturals()]);
            let mut refine = DisjointRefinement::new(family, seed).unwrap();
            (refine.prefix(0, 20).unwrap(), refine.prefix(1, 20).unwrap())
        };
        assert_eq!(run(3), run(3));
        let (a0, _) = run(0);
        let (b0, _) = run(1);
        assert_eq!(a0[0], "0");
        assert_eq!(b0[0], "1");
    }

    #[test]
    fn productivity_within_linear_step_budget() {
        let family = LazySetFamily::new(vec![naturals(), naturals(), naturals()]);
        let mut refine = DisjointRefinement::new(family, 0).unwrap();
        refine.prefix(2, 50).unwrap();
        assert!(refine.steps <= 3 * 50);
        // Monotone cursors: each member inspects at most its own emissions
        // plus one skip per globally used value, so total inspections stay
        // within (members + 1) × steps.
        assert!(refine.scan_work <= 4 * refine.steps + 3);
    }

    #[test]
    fn finite_declared_member_is_rejected() {
        let finite = SetStream::from_fn(Card::Finite(3), |i| (i < 3).then(|| i.to_string()));
        let family = LazySetFamily::new(vec![naturals(), finite]);
        assert!(matches!(
            DisjointRefinement::new(family, 0),
            Err(Error::FiniteFamilyMember(1))
        ));
    }

    #[test]
    fn lying_streams_are_caught() {
        let ends = SetStream::from_fn(Card::Aleph0, |i| (i < 5).then(|| i.to_string()));
        let family = LazySetFamily::new(vec![ends]);
        let mut refine = DisjointRefinement::new(family, 0).unwrap();
        assert!(matches!(refine.prefix(0, 10), Err(Error::StreamEnded(0))));

        let constant = SetStream::from_fn(Card::Aleph0, |_| Some("0".to_string()));
        let family = LazySetFamily::new(vec![naturals(), constant]);
        let mut refine = DisjointRefinement::new(family, 0).unwrap();
        assert!(matches!(refine.prefix(1, 5), Err(Error::StalledStream(1))));
    }

    #[test]
    fn stream_specs_round_trip_and_instantiate() {
        let specs = vec![
            StreamSpec::Naturals,
            StreamSpec::Arithmetic { start: 1, step: 2 },
            StreamSpec::Enumeration { generator: GeneratorSpec::grid() },
            StreamSpec::Neighbours { generator: GeneratorSpec::star(), vertex: "c".into() },
        ];
        for spec in &specs {
            let json = serde_json::to_string(spec).unwrap();
            let back: StreamSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(&back, spec);
            let stream = back.instantiate().unwrap();
            assert_eq!(stream.prefix(5).len(), 5);
        }
        let leaf_nbrs = StreamSpec::Neighbours {
            generator: GeneratorSpec::star(),
            vertex: "l3".into(),
        }
        .instantiate()
        .unwrap();
        assert_eq!(leaf_nbrs.declared(), Card::Finite(1));
        assert_eq!(leaf_nbrs.prefix(5), vec!["c".to_string()]);
    }
}
