use crate::card::Card;
use crate::error::{Error, Result};
use crate::lazy::LazyGraph;
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Validated generator descriptor for the built-in lazy graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// One-way infinite path v0 - v1 - v2 - ...
    Path,
    /// Quarter-plane grid with vertices g{i}x{j}.
    Grid,
    /// Infinite tree in which every vertex has degree `degree`.
    RegularTree { degree: usize },
    /// One centre adjacent to infinitely many leaves.
    StarAleph0,
    /// Path backbone plus seeded pseudo-random chords, degree-capped.
    SeededLocallyFinite { max_degree: usize, seed: u64 },
    /// A hub adjacent to every vertex of an inner family.
    DominatingVertexPlus { inner: Box<GeneratorSpec> },
}

impl GeneratorSpec {
    pub fn path() -> Self {
        GeneratorSpec::Path
    }

    pub fn grid() -> Self {
        GeneratorSpec::Grid
    }

    pub fn regular_tree(degree: usize) -> Self {
        GeneratorSpec::RegularTree { degree }
    }

    pub fn star() -> Self {
        GeneratorSpec::StarAleph0
    }

    pub fn seeded(max_degree: usize, seed: u64) -> Self {
        GeneratorSpec::SeededLocallyFinite { max_degree, seed }
    }

    pub fn dominating(inner: GeneratorSpec) -> Self {
        GeneratorSpec::DominatingVertexPlus { inner: Box::new(inner) }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GeneratorSpec::Path => "path",
            GeneratorSpec::Grid => "grid",
            GeneratorSpec::RegularTree { .. } => "regular-tree",
            GeneratorSpec::StarAleph0 => "star-aleph0",
            GeneratorSpec::SeededLocallyFinite { .. } => "seeded-locally-finite",
            GeneratorSpec::DominatingVertexPlus { .. } => "dominating-vertex-plus-family",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Descriptor {
    family: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    params: serde_json::Value,
    #[serde(default, skip_serializing_if = "is_zero")]
    seed: u64,
}

fn is_zero(seed: &u64) -> bool {
    *seed == 0
}

fn param_usize(params: &serde_json::Value, key: &str) -> Result<usize> {
    params
        .get(key)
        .and_then(|v| v.as_u64())
        .map(|v| v as usize)
        .ok_or_else(|| Error::BadGeneratorParams(format!("missing or non-integer `{key}`")))
}

impl GeneratorSpec {
    pub fn from_descriptor_value(value: &serde_json::Value) -> Result<Self> {
        let d: Descriptor = serde_json::from_value(value.clone())?;
        GeneratorSpec::from_descriptor(&d)
    }

    fn from_descriptor(d: &Descriptor) -> Result<Self> {
        match d.family.as_str() {
            "path" => Ok(GeneratorSpec::Path),
            "grid" => Ok(GeneratorSpec::Grid),
            "regular-tree" | "tree" => {
                let degree = param_usize(&d.params, "degree")?;
                if degree < 2 {
                    return Err(Error::BadGeneratorParams("tree degree must be >= 2".into()));
                }
                Ok(GeneratorSpec::RegularTree { degree })
            }
            "star-aleph0" | "star" => Ok(GeneratorSpec::StarAleph0),
            "seeded-locally-finite" | "seeded-random-locally-finite" => {
                let max_degree = param_usize(&d.params, "max_degree")?;
                if max_degree < 2 {
                    return Err(Error::BadGeneratorParams("max_degree must be >= 2".into()));
                }
                Ok(GeneratorSpec::SeededLocallyFinite { max_degree, seed: d.seed })
            }
            "dominating-vertex-plus-family" => {
                let inner_value = d
                    .params
                    .get("inner")
                    .ok_or_else(|| Error::BadGeneratorParams("missing `inner` descriptor".into()))?;
                let inner = GeneratorSpec::from_descriptor_value(inner_value)?;
                if matches!(inner, GeneratorSpec::DominatingVertexPlus { .. }) {
                    return Err(Error::BadGeneratorParams(
                        "nesting dominating-vertex families is not supported".into(),
                    ));
                }
                Ok(GeneratorSpec::DominatingVertexPlus { inner: Box::new(inner) })
            }
            other => Err(Error::UnknownFamily(other.into())),
        }
    }

    fn to_descriptor(&self) -> Descriptor {
        match self {
            GeneratorSpec::Path => Descriptor {
                family: "path".into(),
                params: serde_json::Value::Null,
                seed: 0,
            },
            GeneratorSpec::Grid => Descriptor {
                family: "grid".into(),
                params: serde_json::Value::Null,
                seed: 0,
            },
            GeneratorSpec::RegularTree { degree } => Descriptor {
                family: "regular-tree".into(),
                params: serde_json::json!({ "degree": degree }),
                seed: 0,
            },
            GeneratorSpec::StarAleph0 => Descriptor {
                family: "star-aleph0".into(),
                params: serde_json::Value::Null,
                seed: 0,
            },
            GeneratorSpec::SeededLocallyFinite { max_degree, seed } => Descriptor {
                family: "seeded-locally-finite".into(),
                params: serde_json::json!({ "max_degree": max_degree }),
                seed: *seed,
            },
            GeneratorSpec::DominatingVertexPlus { inner } => Descriptor {
                family: "dominating-vertex-plus-family".into(),
                params: serde_json::json!({
                    "inner": serde_json::to_value(inner.to_descriptor()).expect("descriptor")
                }),
                seed: 0,
            },
        }
    }
}

impl Serialize for GeneratorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = Descriptor::deserialize(d)?;
        GeneratorSpec::from_descriptor(&desc).map_err(serde::de::Error::custom)
    }
}

/// Builds the lazy graph described by `spec`.
pub fn instantiate_generator(spec: &GeneratorSpec) -> Result<Arc<dyn LazyGraph>> {
    match spec {
        GeneratorSpec::Path => Ok(Arc::new(PathGraph)),
        GeneratorSpec::Grid => Ok(Arc::new(GridGraph)),
        GeneratorSpec::RegularTree { degree } => {
            if *degree < 2 {
                return Err(Error::BadGeneratorParams("tree degree must be >= 2".into()));
            }
            Ok(Arc::new(RegularTree { degree: *degree }))
        }
        GeneratorSpec::StarAleph0 => Ok(Arc::new(StarGraph)),
        GeneratorSpec::SeededLocallyFinite { max_degree, seed } => {
            if *max_degree < 2 {
                return Err(Error::BadGeneratorParams("max_degree must be >= 2".into()));
            }
            Ok(Arc::new(SeededGraph { max_degree: *max_degree, seed: *seed }))
        }
        GeneratorSpec::DominatingVertexPlus { inner } => {
            if matches!(**inner, GeneratorSpec::DominatingVertexPlus { .. }) {
                return Err(Error::BadGeneratorParams(
                    "nesting dominating-vertex families is not supported".into(),
                ));
            }
            let inner = instantiate_generator(inner)?;
            Ok(Arc::new(DominatedGraph { inner }))
        }
    }
}

/// Strict decimal index: digits only, no leading zeros (except "0").
fn parse_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if s.len() > 1 && s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

struct PathGraph;

impl PathGraph {
    fn parse(name: &str) -> Option<usize> {
        parse_index(name.strip_prefix('v')?)
    }
}

impl LazyGraph for PathGraph {
    fn vertex_name(&self, index: usize) -> String {
        format!("v{index}")
    }

    fn vertex_index(&self, name: &str) -> Option<usize> {
        PathGraph::parse(name)
    }

    fn degree(&self, name: &str) -> Card {
        let i = PathGraph::parse(name).expect("member");
        Card::Finite(if i == 0 { 1 } else { 2 })
    }

    fn neighbour(&self, name: &str, i: usize) -> Option<String> {
        let n = PathGraph::parse(name).expect("member");
        match (n, i) {
            (0, 0) => Some("v1".into()),
            (0, _) => None,
            (n, 0) => Some(format!("v{}", n - 1)),
            (n, 1) => Some(format!("v{}", n + 1)),
            _ => None,
        }
    }

    fn adjacent(&self, u: &str, v: &str) -> Option<bool> {
        let (a, b) = (PathGraph::parse(u)?, PathGraph::parse(v)?);
        Some(a.abs_diff(b) == 1)
    }
}

struct GridGraph;

impl GridGraph {
    fn parse(name: &str) -> Option<(usize, usize)> {
        let rest = name.strip_prefix('g')?;
        let (i, j) = rest.split_once('x')?;
        Some((parse_index(i)?, parse_index(j)?))
    }

    fn name(i: usize, j: usize) -> String {
        format!("g{i}x{j}")
    }

    fn offsets(i: usize, j: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(4);
        if i > 0 {
            out.push((i - 1, j));
        }
        if j > 0 {
            out.push((i, j - 1));
        }
        out.push((i, j + 1));
        out.push((i + 1, j));
        out
    }
}

impl LazyGraph for GridGraph {
    fn vertex_name(&self, index: usize) -> String {
        // Anti-diagonal enumeration: (0,0), (0,1), (1,0), (0,2), (1,1), ...
        let mut d = 0usize;
        let mut start = 0usize;
        while start + d < index {
            start += d + 1;
            d += 1;
        }
        let i = index - start;
        GridGraph::name(i, d - i)
    }

    fn vertex_index(&self, name: &str) -> Option<usize> {
        let (i, j) = GridGraph::parse(name)?;
        let d = i + j;
        Some(d * (d + 1) / 2 + i)
    }

    fn degree(&self, name: &str) -> Card {
        let (i, j) = GridGraph::parse(name).expect("member");
        Card::Finite(2 + usize::from(i > 0) + usize::from(j > 0))
    }

    fn neighbour(&self, name: &str, idx: usize) -> Option<String> {
        let (i, j) = GridGraph::parse(name).expect("member");
        GridGraph::offsets(i, j).get(idx).map(|&(a, b)| GridGraph::name(a, b))
    }

    fn adjacent(&self, u: &str, v: &str) -> Option<bool> {
        let (a, b) = (GridGraph::parse(u)?, GridGraph::parse(v)?);
        Some(a.0.abs_diff(b.0) + a.1.abs_diff(b.1) == 1)
    }
}

/// Infinite tree where every vertex has the same degree: the root "t" has
/// `degree` children and every other vertex has one parent and
/// `degree - 1` children. Enumeration is breadth-first.
struct RegularTree {
    degree: usize,
}

impl RegularTree {
    fn parse(&self, name: &str) -> Option<Vec<usize>> {
        if name == "t" {
            return Some(Vec::new());
        }
        let rest = name.strip_prefix("t.")?;
        let mut path = Vec::new();
        for (pos, comp) in rest.split('.').enumerate() {
            let digit = parse_index(comp)?;
            let base = if pos == 0 { self.degree } else { self.degree - 1 };
            if digit >= base {
                return None;
            }
            path.push(digit);
        }
        Some(path)
    }

    fn name(path: &[usize]) -> String {
        if path.is_empty() {
            "t".to_string()
        } else {
            let mut s = String::from("t");
            for c in path {
                s.push('.');
                s.push_str(&c.to_string());
            }
            s
        }
    }

    fn level_size(&self, level: usize) -> usize {
        if level == 0 {
            1
        } else {
            self.degree * (self.degree - 1).pow((level - 1) as u32)
        }
    }
}

impl LazyGraph for RegularTree {
    fn vertex_name(&self, index: usize) -> String {
        if index == 0 {
            return "t".into();
        }
        let mut level = 1usize;
        let mut start = 1usize;
        while start + self.level_size(level) <= index {
            start += self.level_size(level);
            level += 1;
        }
        let mut pos = index - start;
        // Mixed radix: trailing digits base (degree - 1), leading base degree.
        let mut path = vec![0usize; level];
        for slot in (1..level).rev() {
            path[slot] = pos % (self.degree - 1);
            pos /= self.degree - 1;
        }
        path[0] = pos;
        RegularTree::name(&path)
    }

    fn vertex_index(&self, name: &str) -> Option<usize> {
        let path = self.parse(name)?;
        if path.is_empty() {
            return Some(0);
        }
        let mut start = 1usize;
        for level in 1..path.len() {
            start += self.level_size(level);
        }
        let mut pos = path[0];
        for &digit in &path[1..] {
            pos = pos * (self.degree - 1) + digit;
        }
        Some(start + pos)
    }

    fn degree(&self, name: &str) -> Card {
        debug_assert!(self.parse(name).is_some());
        Card::Finite(self.degree)
    }

    fn neighbour(&self, name: &str, i: usize) -> Option<String> {
        let path = self.parse(name).expect("member");
        if path.is_empty() {
            if i < self.degree {
                return Some(RegularTree::name(&[i]));
            }
            return None;
        }
        if i == 0 {
            return Some(RegularTree::name(&path[..path.len() - 1]));
        }
        if i < self.degree {
            let mut child = path.clone();
            child.push(i - 1);
            return Some(RegularTree::name(&child));
        }
        None
    }

    fn adjacent(&self, u: &str, v: &str) -> Option<bool> {
        let (a, b) = (self.parse(u)?, self.parse(v)?);
        let (short, long) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
        Some(long.len() == short.len() + 1 && long[..short.len()] == short[..])
    }
}

struct StarGraph;

impl StarGraph {
    fn leaf(name: &str) -> Option<usize> {
        parse_index(name.strip_prefix('l')?)
    }
}

impl LazyGraph for StarGraph {
    fn vertex_name(&self, index: usize) -> String {
        if index == 0 {
            "c".into()
        } else {
            format!("l{}", index - 1)
        }
    }

    fn vertex_index(&self, name: &str) -> Option<usize> {
        if name == "c" {
            Some(0)
        } else {
            StarGraph::leaf(name).map(|i| i + 1)
        }
    }

    fn degree(&self, name: &str) -> Card {
        if name == "c" {
            Card::Aleph0
        } else {
            debug_assert!(StarGraph::leaf(name).is_some());
            Card::Finite(1)
        }
    }

    fn neighbour(&self, name: &str, i: usize) -> Option<String> {
        if name == "c" {
            return Some(format!("l{i}"));
        }
        debug_assert!(StarGraph::leaf(name).is_some());
        if i == 0 {
            Some("c".into())
        } else {
            None
        }
    }

    fn adjacent(&self, u: &str, v: &str) -> Option<bool> {
        let centre_u = u == "c";
        let centre_v = v == "c";
        if !centre_u && StarGraph::leaf(u).is_none() {
            return None;
        }
        if !centre_v && StarGraph::leaf(v).is_none() {
            return None;
        }
        Some(centre_u != centre_v)
    }
}

/// Path backbone v{i} - v{i+1} plus chords between vertices at distance
/// 2..=4 chosen by a seeded keyed generator. Each endpoint ranks its
/// passing chords by (distance, endpoint) and keeps at most
/// `max_degree - 2`; a chord survives only if both endpoints keep it, so
/// degrees never exceed `max_degree`.
struct SeededGraph {
    max_degree: usize,
    seed: u64,
}

const CHORD_WINDOW: usize = 4;

impl SeededGraph {
    fn parse(name: &str) -> Option<usize> {
        parse_index(name.strip_prefix('v')?)
    }

    fn chord_pass(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = (i.min(j) as u64, i.max(j) as u64);
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&lo.to_le_bytes());
        key[16..24].copy_from_slice(&hi.to_le_bytes());
        key[24..32].copy_from_slice(&0x63686f7264u64.to_le_bytes());
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.next_u32() < u32::MAX / 4
    }

    /// Passing chords at `i`, ranked by (distance, endpoint), truncated to
    /// the per-vertex chord allowance.
    fn kept_chords(&self, i: usize) -> Vec<usize> {
        let allowance = self.max_degree - 2;
        let mut kept = Vec::new();
        'outer: for dist in 2..=CHORD_WINDOW {
            let mut ends = Vec::new();
            if i >= dist {
                ends.push(i - dist);
            }
            ends.push(i + dist);
            for j in ends {
                if kept.len() == allowance {
                    break 'outer;
                }
                if self.chord_pass(i, j) {
                    kept.push(j);
                }
            }
        }
        kept
    }

    fn edge(&self, i: usize, j: usize) -> bool {
        let dist = i.abs_diff(j);
        if dist == 1 {
            return true;
        }
        if !(2..=CHORD_WINDOW).contains(&dist) {
            return false;
        }
        self.chord_pass(i, j)
            && self.kept_chords(i).contains(&j)
            && self.kept_chords(j).contains(&i)
    }

    fn neighbour_list(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if i > 0 {
            out.push(i - 1);
        }
        out.push(i + 1);
        for j in self.kept_chords(i) {
            if self.edge(i, j) {
                out.push(j);
            }
        }
        out.sort_unstable();
        out
    }
}

impl LazyGraph for SeededGraph {
    fn vertex_name(&self, index: usize) -> String {
        format!("v{index}")
    }

    fn vertex_index(&self, name: &str) -> Option<usize> {
        SeededGraph::parse(name)
    }

    fn degree(&self, name: &str) -> Card {
        let i = SeededGraph::parse(name).expect("member");
        Card::Finite(self.neighbour_list(i).len())
    }

    fn neighbour(&self, name: &str, idx: usize) -> Option<String> {
        let i = SeededGraph::parse(name).expect("member");
        self.neighbour_list(i).get(idx).map(|j| format!("v{j}"))
    }

    fn adjacent(&self, u: &str, v: &str) -> Option<bool> {
        let (a, b) = (SeededGraph::parse(u)?, SeededGraph::parse(v)?);
        if a == b {
            return Some(false);
        }
        Some(self.edge(a, b))
    }
}

/// A fresh vertex "hub" joined to every vertex of the inner family.
struct DominatedGraph {
    inner: Arc<dyn LazyGraph>,
}

const HUB: &str = "hub";

impl LazyGraph for DominatedGraph {
    fn vertex_name(&self, index: usize) -> String {
        if index == 0 {
            HUB.into()
        } else {
            self.inner.vertex_name(index - 1)
        }
    }

    fn vertex_index(&self, name: &str) -> Option<usize> {
        if name == HUB {
            Some(0)
        } else {
            self.inner.vertex_index(name).map(|i| i + 1)
        }
    }

    fn degree(&self, name: &str) -> Card {
        if name == HUB {
            Card::Aleph0
        } else {
            self.inner.degree(name) + Card::Finite(1)
        }
    }

    fn neighbour(&self, name: &str, i: usize) -> Option<String> {
        if name == HUB {
            return Some(self.inner.vertex_name(i));
        }
        if i == 0 {
            Some(HUB.into())
        } else {
            self.inner.neighbour(name, i - 1)
        }
    }

    fn adjacent(&self, u: &str, v: &str) -> Option<bool> {
        if u == HUB && v == HUB {
            return Some(false);
        }
        if u == HUB {
            return Some(self.inner.vertex_index(v).is_some());
        }
        if v == HUB {
            return Some(self.inner.vertex_index(u).is_some());
        }
        self.inner.adjacent(u, v)
    }
}
