//! Defining graphs and the purely graph-theoretic side of the toolkit:
//! links and stars, joins, induced four-cycles, the four-cycle graph and
//! rank of non-adjacent pairs.
//!
//! Vertices are stored in the graph's total order, so `Vertex` comparison
//! is the order used by normal forms.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count (vertex sets are 128-bit masks).
pub const MAX_VERTICES: usize = 128;

/// A vertex of a [`DefiningGraph`]; ordering is the graph's total order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(u8);

impl Vertex {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < MAX_VERTICES, "vertex index out of range");
        Vertex(index as u8)
    }
}

/// A set of vertices of one graph.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u128);

impl VertexSet {
    pub const fn empty() -> Self {
        VertexSet(0)
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(1 << v.0)
    }

    pub fn from_bits(bits: u128) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 >> v.0 & 1 == 1
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1 << v.0;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1 << v.0);
    }

    pub fn with(mut self, v: Vertex) -> Self {
        self.insert(v);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> Self {
        VertexSet(self.0 & !other.0)
    }

    /// Least vertex in the total order.
    pub fn first(self) -> Option<Vertex> {
        (self.0 != 0).then(|| Vertex(self.0.trailing_zeros() as u8))
    }

    pub fn iter(self) -> VertexSetIter {
        VertexSetIter(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut set = VertexSet::empty();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl IntoIterator for VertexSet {
    type Item = Vertex;
    type IntoIter = VertexSetIter;

    fn into_iter(self) -> VertexSetIter {
        self.iter()
    }
}

pub struct VertexSetIter(u128);

impl Iterator for VertexSetIter {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(Vertex(v as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexSetIter {}

/// Graph document: `{"vertices": [...], "edges": [[u, v], ...]}` with an
/// optional explicit `"order"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GraphInput {
    Wrapped { graph: GraphDoc },
    Plain(GraphDoc),
}

/// A finite simplicial graph; the presentation of a right-angled Coxeter
/// group.
#[derive(Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DefiningGraph")
            .field("vertices", &self.names)
            .field("edges", &self.edge_names())
            .finish()
    }
}

impl DefiningGraph {
    /// Builds a graph; vertex order is the order of `vertices`.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(vertices: &[S], edges: &[(T, T)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(vertices.len()));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        let mut names = Vec::with_capacity(vertices.len());
        for (i, name) in vertices.iter().enumerate() {
            let name = name.as_ref();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::BadVertexName(name.to_string()));
            }
            if index.insert(name.to_string(), Vertex::from_index(i)).is_some() {
                return Err(Error::DuplicateVertex(name.to_string()));
            }
            names.push(name.to_string());
        }
        let mut adj = vec![VertexSet::empty(); names.len()];
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let a = *index.get(u).ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
            let b = *index.get(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
            if a == b {
                return Err(Error::SelfLoop(u.to_string()));
            }
            adj[a.index()].insert(b);
            adj[b.index()].insert(a);
        }
        Ok(DefiningGraph { names, index, adj })
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self> {
        let edges: Vec<(&str, &str)> =
            doc.edges.iter().map(|[u, v]| (u.as_str(), v.as_str())).collect();
        let graph = DefiningGraph::new(&doc.vertices, &edges)?;
        match &doc.order {
            None => Ok(graph),
            Some(order) => {
                if order.len() != doc.vertices.len()
                    || order.iter().any(|n| !graph.index.contains_key(n))
                    || order.iter().collect::<std::collections::HashSet<_>>().len() != order.len()
                {
                    return Err(Error::BadOrder);
                }
                DefiningGraph::new(order, &edges)
            }
        }
    }

    /// Parses a JSON graph document. A subgroup or family document (an
    /// object with a `graph` field) is accepted too.
    pub fn load(text: &str) -> Result<Self> {
        let input: GraphInput =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match input {
            GraphInput::Wrapped { graph } | GraphInput::Plain(graph) => Self::from_doc(&graph),
        }
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.names.clone(),
            edges: self.edge_names().into_iter().map(|(u, v)| [u, v]).collect(),
            order: None,
        }
    }

    fn edge_names(&self) -> Vec<(String, String)> {
        self.edges()
            .map(|(u, v)| (self.name(u).to_string(), self.name(v).to_string()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.names.len()).map(Vertex::from_index)
    }

    pub fn all(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u.index()].iter().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex(&self, name: &str) -> Result<Vertex> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Parses a comma- or whitespace-separated list of vertex names.
    pub fn vertex_set(&self, names: &str) -> Result<VertexSet> {
        names
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|n| self.vertex(n))
            .collect()
    }

    pub fn set_names(&self, set: VertexSet) -> Vec<String> {
        set.iter().map(|v| self.name(v).to_string()).collect()
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u.index()].contains(v)
    }

    /// Neighbors of `v`.
    pub fn link(&self, v: Vertex) -> VertexSet {
        self.adj[v.index()]
    }

    /// `v` together with its link.
    pub fn star(&self, v: Vertex) -> VertexSet {
        self.adj[v.index()].with(v)
    }

    pub fn is_clique(&self, set: VertexSet) -> bool {
        set.iter().all(|v| set.difference(VertexSet::singleton(v)).is_subset(self.link(v)))
    }

    /// Connected components of the subgraph induced by `set`, ordered by
    /// least vertex.
    pub fn components(&self, set: VertexSet) -> Vec<VertexSet> {
        components_by(set, |v| self.link(v))
    }

    /// Components of the complement of the subgraph induced by `set`.
    pub fn complement_components(&self, set: VertexSet) -> Vec<VertexSet> {
        components_by(set, |v| set.difference(self.link(v)).difference(VertexSet::singleton(v)))
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.all()).len() == 1
    }

    /// Whether the whole graph decomposes as a join.
    pub fn is_join(&self) -> bool {
        self.complement_components(self.all()).len() > 1
    }

    /// Edge-count distance; `None` when `u` and `v` lie in different
    /// components.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let mut seen = VertexSet::singleton(u);
        let mut frontier = VertexSet::singleton(u);
        let mut d = 0;
        while !frontier.is_empty() {
            if frontier.contains(v) {
                return Some(d);
            }
            let mut next = VertexSet::empty();
            for x in frontier {
                next = next.union(self.link(x));
            }
            frontier = next.difference(seen);
            seen = seen.union(frontier);
            d += 1;
        }
        None
    }

    /// Canonical join splitting of the subgraph induced by `set`: the
    /// complement component holding the least vertex against the rest.
    pub fn join_decomposition(&self, set: VertexSet) -> Result<Option<(VertexSet, VertexSet)>> {
        if set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let comps = self.complement_components(set);
        Ok((comps.len() > 1).then(|| (comps[0], set.difference(comps[0]))))
    }

    /// Whether `set` lies inside some induced join subgraph.
    ///
    /// Any induced join `J1 * J2` containing `set` either meets both sides,
    /// making `set` itself a join, or misses one side entirely, in which
    /// case every vertex of that side cones off `set`.
    pub fn contained_in_join(&self, set: VertexSet) -> Result<Option<JoinWitness>> {
        if let Some((left, right)) = self.join_decomposition(set)? {
            return Ok(Some(JoinWitness::Split(left, right)));
        }
        Ok(self.vertices().find(|&v| set.is_subset(self.link(v))).map(JoinWitness::Cone))
    }

    /// A vertex whose star contains `set`, if any.
    pub fn contained_in_star(&self, set: VertexSet) -> Result<Option<Vertex>> {
        if set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        Ok(self.vertices().find(|&v| set.is_subset(self.star(v))))
    }

    /// All induced four-cycles, in canonical order.
    pub fn four_cycles(&self) -> Vec<FourCycle> {
        let mut cycles = Vec::new();
        // Enumerate by diagonal: (s, t) non-adjacent, then a non-adjacent pair
        // of common neighbors. Each cycle shows up once per diagonal; keep the
        // one whose first diagonal is the lesser.
        for s in self.vertices() {
            for t in self.vertices().filter(|&t| t > s && !self.adjacent(s, t)) {
                let common = self.link(s).intersection(self.link(t));
                for p in common {
                    for q in common.iter().filter(|&q| q > p && !self.adjacent(p, q)) {
                        if (s, t) < (p, q) {
                            cycles.push(FourCycle { diagonals: [(s, t), (p, q)] });
                        }
                    }
                }
            }
        }
        cycles.sort();
        cycles
    }

    pub fn four_cycle_graph(&self) -> FourCycleGraph {
        FourCycleGraph::new(self.four_cycles())
    }

    /// Some component of the four-cycle graph has full support.
    pub fn is_cfs(&self) -> bool {
        let all = self.all();
        self.four_cycle_graph().supports.contains(&all)
    }

    /// Whether the non-adjacent pair `(s, t)` is a diagonal of an induced
    /// four-cycle.
    pub fn in_four_cycle(&self, s: Vertex, t: Vertex) -> bool {
        let common = self.link(s).intersection(self.link(t));
        common.iter().any(|p| !common.difference(self.link(p)).difference(VertexSet::singleton(p)).is_empty())
    }

    /// Largest `n <= cap` for which `(s, t)` is a rank-`n` pair.
    pub fn rank_of_pair(&self, s: Vertex, t: Vertex, cap: usize) -> Result<PairRank> {
        if cap == 0 {
            return Err(Error::param("cap", "must be positive"));
        }
        if s == t || self.adjacent(s, t) {
            return Err(Error::RankUndefined(self.name(s).into(), self.name(t).into()));
        }
        let n = self.len();
        let idx = |a: Vertex, b: Vertex| a.index() * n + b.index();
        let pairs: Vec<(Vertex, Vertex)> = self
            .vertices()
            .flat_map(|a| self.vertices().filter(move |&b| a != b).map(move |b| (a, b)))
            .filter(|&(a, b)| !self.adjacent(a, b))
            .collect();
        let link_pairs: Vec<Vec<(Vertex, Vertex)>> = self
            .vertices()
            .map(|v| {
                let lk = self.link(v);
                lk.iter()
                    .flat_map(|a| lk.iter().filter(move |&b| b > a).map(move |b| (a, b)))
                    .filter(|&(a, b)| !self.adjacent(a, b))
                    .collect()
            })
            .collect();

        let mut level = vec![false; n * n];
        for &(a, b) in &pairs {
            level[idx(a, b)] = !self.in_four_cycle(a, b);
        }
        let mut rank = if level[idx(s, t)] { 1 } else { 0 };
        for k in 2..=cap {
            let mut next = vec![false; n * n];
            for &(a, b) in &pairs {
                let all_lower = |v: Vertex| link_pairs[v.index()].iter().all(|&(x, y)| level[idx(x, y)]);
                next[idx(a, b)] = all_lower(a) || all_lower(b);
            }
            level = next;
            if level[idx(s, t)] {
                rank = k;
            }
        }
        Ok(PairRank { rank, at_cap: rank == cap })
    }

    /// Induced subgraph on `set`, keeping the relative order.
    pub fn induced(&self, set: VertexSet) -> DefiningGraph {
        let names: Vec<&str> = set.iter().map(|v| self.name(v)).collect();
        let edges: Vec<(&str, &str)> = self
            .edges()
            .filter(|&(u, v)| set.contains(u) && set.contains(v))
            .map(|(u, v)| (self.name(u), self.name(v)))
            .collect();
        DefiningGraph::new(&names, &edges).expect("induced subgraph of a valid graph")
    }

    /// Graphviz rendering of the graph.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in self.vertices() {
            let _ = writeln!(out, "  \"{}\";", self.name(v));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  \"{}\" -- \"{}\";", self.name(u), self.name(v));
        }
        out.push_str("}\n");
        out
    }
}

fn components_by(set: VertexSet, neighbors: impl Fn(Vertex) -> VertexSet) -> Vec<VertexSet> {
    let mut remaining = set;
    let mut out = Vec::new();
    while let Some(start) = remaining.first() {
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::empty();
            for v in frontier {
                next = next.union(neighbors(v));
            }
            frontier = next.intersection(set).difference(comp);
            comp = comp.union(frontier);
        }
        remaining = remaining.difference(comp);
        out.push(comp);
    }
    out
}

/// Why a vertex set sits inside an induced join.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JoinWitness {
    /// The set itself splits as a join.
    Split(VertexSet, VertexSet),
    /// The set lies in the link of this vertex.
    Cone(Vertex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairRank {
    pub rank: usize,
    /// The pair is still rank `cap` at the cap, so the true maximum may be
    /// larger.
    pub at_cap: bool,
}

/// An induced four-cycle, stored by its two diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourCycle {
    pub diagonals: [(Vertex, Vertex); 2],
}

impl FourCycle {
    pub fn vertices(&self) -> VertexSet {
        let [(a, b), (c, d)] = self.diagonals;
        [a, b, c, d].into_iter().collect()
    }

    pub fn has_diagonal(&self, pair: (Vertex, Vertex)) -> bool {
        let pair = if pair.0 < pair.1 { pair } else { (pair.1, pair.0) };
        self.diagonals.contains(&pair)
    }

    /// The diagonal not containing `v`.
    pub fn opposite_diagonal(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        let [d0, d1] = self.diagonals;
        if d0.0 == v || d0.1 == v {
            Some(d1)
        } else if d1.0 == v || d1.1 == v {
            Some(d0)
        } else {
            None
        }
    }

    pub fn shared_diagonal(&self, other: &FourCycle) -> Option<(Vertex, Vertex)> {
        self.diagonals.iter().copied().find(|d| other.diagonals.contains(d))
    }
}

/// The four-cycle graph: induced four-cycles joined when they share a
/// diagonal.
#[derive(Clone, Debug)]
pub struct FourCycleGraph {
    pub cycles: Vec<FourCycle>,
    pub edges: Vec<(usize, usize)>,
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub supports: Vec<VertexSet>,
}

impl FourCycleGraph {
    fn new(cycles: Vec<FourCycle>) -> Self {
        let mut edges = Vec::new();
        let mut neighbors = vec![Vec::new(); cycles.len()];
        for i in 0..cycles.len() {
            for j in i + 1..cycles.len() {
                if cycles[i].shared_diagonal(&cycles[j]).is_some() {
                    edges.push((i, j));
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        let mut component_of = vec![usize::MAX; cycles.len()];
        let mut components = Vec::new();
        for start in 0..cycles.len() {
            if component_of[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            component_of[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &j in &neighbors[i] {
                    if component_of[j] == usize::MAX {
                        component_of[j] = id;
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        let supports = components
            .iter()
            .map(|c| c.iter().fold(VertexSet::empty(), |acc, &i| acc.union(cycles[i].vertices())))
            .collect();
        FourCycleGraph { cycles, edges, component_of, components, supports }
    }

    pub fn index_of(&self, cycle: &FourCycle) -> Option<usize> {
        self.cycles.binary_search(cycle).ok()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter_map(move |&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
    }

    /// Shortest walk of cycle indices from `from` to `to` (inclusive).
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.cycles.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            if i == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            let mut next: Vec<usize> = self.neighbors(i).collect();
            next.sort_unstable();
            for j in next {
                if prev[j] == usize::MAX {
                    prev[j] = i;
                    queue.push_back(j);
                }
            }
        }
        None
    }

    /// Graphviz rendering; each node carries its component's support.
    pub fn to_dot(&self, graph: &DefiningGraph) -> String {
        let label = |c: &FourCycle| {
            let [(a, b), (p, q)] = c.diagonals;
            format!("{} {} | {} {}", graph.name(a), graph.name(b), graph.name(p), graph.name(q))
        };
        let mut out = String::from("graph G4 {\n");
        for (i, c) in self.cycles.iter().enumerate() {
            let support = graph.set_names(self.supports[self.component_of[i]]).join(",");
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}\", component={}, support=\"{support}\"];",
                label(c),
                self.component_of[i]
            );
        }
        for &(i, j) in &self.edges {
            let _ = writeln!(out, "  n{i} -- n{j};");
        }
        out.push_str("}\n");
        out
    }
}
