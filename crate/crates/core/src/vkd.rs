//! Dual van Kampen diagrams as chord diagrams.
//!
//! The boundary is read from a basepoint; arcs pair up boundary positions.
//! Two arcs cross exactly when their endpoints interleave, and crossing
//! arcs must carry commuting labels.

use std::fmt::{self, Write as _};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, Vertex};
use crate::word::{NormalForm, Word};

/// Boundary letters plus a perfect matching of positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualVanKampenDiagram {
    boundary: Vec<Vertex>,
    /// `(i, j)` with `i < j`, sorted.
    arcs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Matching(String),
    Label { arc: (usize, usize) },
    CrossingAdjacency { first: (usize, usize), second: (usize, usize) },
    NotIdentity,
    StarProperty { arc: (usize, usize) },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Matching(_) => "matching",
            Violation::Label { .. } => "label",
            Violation::CrossingAdjacency { .. } => "crossing-adjacency",
            Violation::NotIdentity => "identity",
            Violation::StarProperty { .. } => "star-property",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Matching(m) => write!(f, "matching: {m}"),
            Violation::Label { arc } => write!(f, "label: arc {arc:?} joins different letters"),
            Violation::CrossingAdjacency { first, second } => {
                write!(f, "crossing-adjacency: arcs {first:?} and {second:?} cross with non-adjacent labels")
            }
            Violation::NotIdentity => f.write_str("identity: boundary word is not trivial"),
            Violation::StarProperty { arc } => {
                write!(f, "star-property: enclosed subword of arc {arc:?} leaves the star of its label")
            }
        }
    }
}

/// Whether chords `a` and `b` (each with `i < j`) interleave.
pub fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize| a.0 < x && x < a.1;
    inside(b.0) != inside(b.1)
}

impl DualVanKampenDiagram {
    /// Unchecked constructor; see [`Self::validate`].
    pub fn from_parts(boundary: Vec<Vertex>, arcs: Vec<(usize, usize)>) -> Self {
        let mut arcs: Vec<_> = arcs.into_iter().map(|(i, j)| (i.min(j), i.max(j))).collect();
        arcs.sort_unstable();
        DualVanKampenDiagram { boundary, arcs }
    }

    /// Matches letters by repeated Deletion pairs, innermost first: the
    /// smallest right end, then the largest left end.
    pub fn build(graph: &DefiningGraph, word: &Word) -> Result<Self> {
        let letters = word.letters();
        let mut alive: Vec<usize> = (0..letters.len()).collect();
        let mut arcs = Vec::with_capacity(letters.len() / 2);
        'search: while !alive.is_empty() {
            for jj in 1..alive.len() {
                let x = letters[alive[jj]];
                let lk = graph.link(x);
                for ii in (0..jj).rev() {
                    let y = letters[alive[ii]];
                    if y == x {
                        arcs.push((alive[ii], alive[jj]));
                        alive.remove(jj);
                        alive.remove(ii);
                        continue 'search;
                    }
                    if !lk.contains(y) {
                        break;
                    }
                }
            }
            let rest: Vec<Vertex> = alive.iter().map(|&p| letters[p]).collect();
            return Err(Error::NotIdentity { normal_form: graph.format(graph.normalize(&rest).letters()) });
        }
        Ok(Self::from_parts(letters.to_vec(), arcs))
    }

    pub fn boundary(&self) -> &[Vertex] {
        &self.boundary
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// The other endpoint at each boundary position.
    pub fn partners(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.boundary.len()];
        for &(i, j) in &self.arcs {
            out[i] = j;
            out[j] = i;
        }
        out
    }

    pub fn label(&self, arc: (usize, usize)) -> Vertex {
        self.boundary[arc.0]
    }

    pub fn crossing_pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for (k, &a) in self.arcs.iter().enumerate() {
            for &b in &self.arcs[k + 1..] {
                if crosses(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// First violated condition, if any.
    pub fn validate(&self, graph: &DefiningGraph) -> std::result::Result<(), Violation> {
        let n = self.boundary.len();
        let mut seen = vec![false; n];
        for &(i, j) in &self.arcs {
            if j >= n || i == j {
                return Err(Violation::Matching(format!("arc ({i}, {j}) is out of range")));
            }
            for p in [i, j] {
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Violation::Matching(format!("position {p} is used twice")));
                }
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Violation::Matching(format!("position {p} is unmatched")));
        }
        for &arc in &self.arcs {
            if self.boundary[arc.0] != self.boundary[arc.1] {
                return Err(Violation::Label { arc });
            }
        }
        for (a, b) in self.crossing_pairs() {
            if !graph.adjacent(self.label(a), self.label(b)) {
                return Err(Violation::CrossingAdjacency { first: a, second: b });
            }
        }
        if !graph.normalize(&self.boundary).is_identity() {
            return Err(Violation::NotIdentity);
        }
        for &arc in &self.arcs {
            let inner = graph.normalize(&self.boundary[arc.0 + 1..arc.1]);
            if !graph.special_membership(&inner, graph.star(self.label(arc))) {
                return Err(Violation::StarProperty { arc });
            }
        }
        Ok(())
    }

    fn check_range(&self, range: &Range<usize>) -> Result<()> {
        if range.start > range.end || range.end > self.boundary.len() {
            return Err(Error::BadRange { start: range.start, end: range.end, len: self.boundary.len() });
        }
        Ok(())
    }

    /// Whether no two arcs with an endpoint in `range` cross.
    pub fn is_combed(&self, range: Range<usize>) -> bool {
        let touching: Vec<_> =
            self.arcs.iter().copied().filter(|&(i, j)| range.contains(&i) || range.contains(&j)).collect();
        touching.iter().enumerate().all(|(k, &a)| touching[k + 1..].iter().all(|&b| !crosses(a, b)))
    }

    fn with_positions(&self, order: &[usize], range: &Range<usize>) -> Self {
        // order[k] is the old position now placed at range.start + k.
        let mut moved: Vec<usize> = (0..self.boundary.len()).collect();
        for (k, &old) in order.iter().enumerate() {
            moved[old] = range.start + k;
        }
        let mut boundary = self.boundary.clone();
        for (k, &old) in order.iter().enumerate() {
            boundary[range.start + k] = self.boundary[old];
        }
        let arcs = self.arcs.iter().map(|&(i, j)| (moved[i], moved[j])).collect();
        Self::from_parts(boundary, arcs)
    }

    /// Rearranges the letters of `range` so that no two arcs leaving it
    /// cross. Outside endpoints stay put.
    ///
    /// Adjacent crossing arcs are uncrossed by swaps first (their labels
    /// commute, so each swap is legal). If arcs with both ends in the range
    /// still block the result, the range is rebuilt directly: those arcs as
    /// adjacent pairs, then the outgoing arcs nested. Dropping crossings
    /// never invalidates a diagram, so either way the result is valid.
    pub fn comb(&self, range: Range<usize>) -> Result<Combed> {
        self.check_range(&range)?;
        let partner = self.partners();
        let inside = |p: usize| range.contains(&p);
        let mut order: Vec<usize> = range.clone().collect();
        let mut swaps = 0;
        loop {
            let mut changed = false;
            for k in 0..order.len().saturating_sub(1) {
                let (x, y) = (order[k], order[k + 1]);
                if partner[x] == y {
                    continue;
                }
                // Position of an endpoint under the current arrangement.
                let pos = |p: usize| order.iter().position(|&o| o == p).map_or(p, |q| range.start + q);
                let a = (pos(x).min(pos(partner[x])), pos(x).max(pos(partner[x])));
                let b = (pos(y).min(pos(partner[y])), pos(y).max(pos(partner[y])));
                if crosses(a, b) {
                    order.swap(k, k + 1);
                    swaps += 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut diagram = self.with_positions(&order, &range);
        let mut rebuilt = false;
        if !diagram.is_combed(range.clone()) {
            let n = self.boundary.len();
            let offset = |p: usize| (p + n - range.end) % n;
            let mut internal = Vec::new();
            let mut external = Vec::new();
            for p in range.clone() {
                if inside(partner[p]) {
                    if partner[p] > p {
                        internal.extend([p, partner[p]]);
                    }
                } else {
                    external.push(p);
                }
            }
            external.sort_by_key(|&p| std::cmp::Reverse(offset(partner[p])));
            order = internal.into_iter().chain(external).collect();
            diagram = self.with_positions(&order, &range);
            rebuilt = true;
        }
        let word = Word(diagram.boundary[range.clone()].to_vec());
        Ok(Combed { word, diagram, swaps, rebuilt })
    }

    /// Deletes arcs with both endpoints in `range`, returning the shortened
    /// range word and diagram.
    pub fn prune(&self, range: Range<usize>) -> Result<(Word, Self, Range<usize>)> {
        self.check_range(&range)?;
        let drop: Vec<bool> = {
            let mut d = vec![false; self.boundary.len()];
            for &(i, j) in &self.arcs {
                if range.contains(&i) && range.contains(&j) {
                    d[i] = true;
                    d[j] = true;
                }
            }
            d
        };
        let mut new_pos = vec![usize::MAX; self.boundary.len()];
        let mut boundary = Vec::new();
        for (p, &v) in self.boundary.iter().enumerate() {
            if !drop[p] {
                new_pos[p] = boundary.len();
                boundary.push(v);
            }
        }
        let arcs = self.arcs.iter().filter(|&&(i, _)| !drop[i]).map(|&(i, j)| (new_pos[i], new_pos[j])).collect();
        let removed_before = |q: usize| drop[..q].iter().filter(|&&d| d).count();
        let new_range = range.start - removed_before(range.start)..range.end - removed_before(range.end);
        let d = Self::from_parts(boundary, arcs);
        Ok((Word(d.boundary[new_range.clone()].to_vec()), d, new_range))
    }

    /// Labels of the arcs leaving `range`, ordered by their endpoint in it.
    pub fn label_read(&self, range: Range<usize>) -> Result<Word> {
        self.check_range(&range)?;
        let partner = self.partners();
        Ok(Word(
            range
                .clone()
                .filter(|&p| !range.contains(&partner[p]))
                .map(|p| self.boundary[p])
                .collect(),
        ))
    }

    pub fn to_json(&self, graph: &DefiningGraph) -> Value {
        json!({
            "boundary": self.boundary.iter().map(|&v| graph.name(v)).collect::<Vec<_>>(),
            "arcs": self.arcs.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        })
    }

    /// Chords drawn inside a circle of boundary nodes.
    pub fn to_dot(&self, graph: &DefiningGraph) -> String {
        let n = self.boundary.len().max(1) as f64;
        let mut out = String::from("graph Diagram {\n  layout=neato;\n  node [shape=circle];\n");
        for (p, &v) in self.boundary.iter().enumerate() {
            let angle = std::f64::consts::TAU * p as f64 / n;
            let _ = writeln!(
                out,
                "  p{p} [label=\"{}\", pos=\"{:.3},{:.3}!\"];",
                graph.name(v),
                3.0 * angle.cos(),
                3.0 * angle.sin()
            );
        }
        for p in 0..self.boundary.len() {
            let _ = writeln!(out, "  p{p} -- p{} [style=dotted];", (p + 1) % self.boundary.len());
        }
        for &(i, j) in &self.arcs {
            let _ = writeln!(out, "  p{i} -- p{j} [label=\"{}\", color=blue];", graph.name(self.boundary[i]));
        }
        out.push_str("}\n");
        out
    }
}

/// Output of [`DualVanKampenDiagram::comb`].
#[derive(Clone, Debug)]
pub struct Combed {
    pub word: Word,
    pub diagram: DualVanKampenDiagram,
    pub swaps: usize,
    pub rebuilt: bool,
}

/// `{"boundary": [...], "arcs": [[i, j], ...]}`; extra fields are ignored.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub boundary: Vec<String>,
    pub arcs: Vec<[usize; 2]>,
}

impl DiagramDoc {
    pub fn into_diagram(self, graph: &DefiningGraph) -> Result<DualVanKampenDiagram> {
        let boundary = self.boundary.iter().map(|n| graph.vertex(n)).collect::<Result<Vec<_>>>()?;
        Ok(DualVanKampenDiagram::from_parts(boundary, self.arcs.iter().map(|&[i, j]| (i, j)).collect()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcTag {
    Contributing,
    Noncontributing,
}

/// A diagram for `h · w̄` where `h` is a concatenation of words and `w`
/// the reduced form of their product.
#[derive(Clone, Debug)]
pub struct ReducingDiagram {
    pub diagram: DualVanKampenDiagram,
    pub h_len: usize,
    /// Parallel to `diagram.arcs()`.
    pub tags: Vec<ArcTag>,
}

impl ReducingDiagram {
    pub fn build(graph: &DefiningGraph, hs: &[Word], w: &NormalForm) -> Result<Self> {
        let h: Vec<Vertex> = hs.iter().flat_map(|x| x.letters().iter().copied()).collect();
        if graph.normalize(&h) != *w {
            return Err(Error::ProductMismatch);
        }
        let boundary = Word(h.iter().copied().chain(w.letters().iter().rev().copied()).collect());
        let diagram = DualVanKampenDiagram::build(graph, &boundary)?;
        let h_len = h.len();
        let tags = diagram
            .arcs()
            .iter()
            .map(|&(i, j)| {
                assert!(i < h_len, "arc inside the reduced subarc");
                if j < h_len {
                    ArcTag::Noncontributing
                } else {
                    ArcTag::Contributing
                }
            })
            .collect();
        Ok(ReducingDiagram { diagram, h_len, tags })
    }

    pub fn contributing(&self) -> usize {
        self.tags.iter().filter(|&&t| t == ArcTag::Contributing).count()
    }

    /// The `h` letters that survive, in order.
    pub fn contributing_letters(&self) -> Vec<Vertex> {
        let mut keep = vec![false; self.h_len];
        for (&(i, _), &t) in self.diagram.arcs().iter().zip(&self.tags) {
            if t == ArcTag::Contributing {
                keep[i] = true;
            }
        }
        (0..self.h_len).filter(|&p| keep[p]).map(|p| self.diagram.boundary()[p]).collect()
    }

    pub fn to_json(&self, graph: &DefiningGraph) -> Value {
        let mut v = self.diagram.to_json(graph);
        v["tags"] = json!({ "h_len": self.h_len, "arcs": self.tags });
        v
    }
}
