//! Finite pieces of the Davis complex 1-skeleton (the Cayley graph):
//! balls, subgroup distances, hyperplanes, avoidant distances and
//! divergence estimates, and the corner-path construction along the
//! four-cycle graph.
//!
//! Distances are measured between vertices only; `N_r(A)` is the open
//! neighborhood `{x : d(x, A) < r}` and its boundary is `{x : d(x, A) = r}`.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, FourCycle, FourCycleGraph, Vertex, VertexSet};
use crate::subgroup::{enumerate_subgroup, FinGenSubgroup, ParabolicSpec};
use crate::word::NormalForm;

/// The ball of radius `R` about the identity.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub radius: usize,
    elements: Vec<NormalForm>,
    index: HashMap<NormalForm, usize>,
    /// `(generator, neighbor index)` for every ball edge at each element.
    neighbors: Vec<Vec<(Vertex, usize)>>,
}

impl CayleyBall {
    /// Fails with [`Error::BallCap`] once more than `cap` elements appear.
    pub fn new(graph: &DefiningGraph, radius: usize, cap: Option<usize>) -> Result<Self> {
        let mut elements = vec![NormalForm::identity()];
        let mut index = HashMap::from([(NormalForm::identity(), 0)]);
        let mut layer = 0..1;
        for k in 1..=radius {
            let mut next = Vec::new();
            for i in layer.clone() {
                for s in graph.vertices() {
                    let y = graph.mul_letter(&elements[i], s);
                    if y.len() == k && !index.contains_key(&y) {
                        index.insert(y.clone(), usize::MAX);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            let start = elements.len();
            for y in next {
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
            if cap.is_some_and(|c| elements.len() > c) {
                return Err(Error::BallCap(cap.unwrap()));
            }
            layer = start..elements.len();
        }
        let neighbors = elements
            .iter()
            .map(|g| {
                graph
                    .vertices()
                    .filter_map(|s| index.get(&graph.mul_letter(g, s)).map(|&j| (s, j)))
                    .collect()
            })
            .collect();
        Ok(CayleyBall { radius, elements, index, neighbors })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// In (length, lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = &NormalForm> {
        self.elements.iter()
    }

    pub fn element(&self, i: usize) -> &NormalForm {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &NormalForm) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[(Vertex, usize)] {
        &self.neighbors[i]
    }

    /// Ball edges `(i, j, s)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Vertex)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&(_, j)| i < j).map(move |&(s, j)| (i, j, s)))
    }

    /// Breadth-first distances from `sources`, moving only through indices
    /// accepted by `allowed`. Unreached entries are `usize::MAX`.
    pub fn bfs(&self, sources: &[usize], allowed: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if allowed(s) && dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(i) = queue.pop_front() {
            for &(_, j) in &self.neighbors[i] {
                if dist[j] == usize::MAX && allowed(j) {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    /// Graphviz rendering; `highlight` nodes are filled.
    pub fn to_dot(&self, graph: &DefiningGraph, highlight: &[usize]) -> String {
        let label = |g: &NormalForm| if g.is_identity() { "e".to_string() } else { graph.format(g.letters()) };
        let mut out = String::from("graph Ball {\n");
        for (i, g) in self.elements.iter().enumerate() {
            let style = if highlight.contains(&i) { ", style=filled, fillcolor=orange" } else { "" };
            let _ = writeln!(out, "  n{i} [label=\"{}\"{style}];", label(g));
        }
        for (i, j, s) in self.edges() {
            let _ = writeln!(out, "  n{i} -- n{j} [label=\"{}\"];", graph.name(s));
        }
        out.push_str("}\n");
        out
    }
}

/// The subgroup a distance or divergence is measured against.
#[derive(Clone, Debug)]
pub enum SubgroupTarget {
    Parabolic(ParabolicSpec),
    /// Membership is tested against the T-ball of the given depth.
    FinGen { subgroup: FinGenSubgroup, depth: usize },
}

impl SubgroupTarget {
    fn special_set(&self) -> Option<VertexSet> {
        match self {
            SubgroupTarget::Parabolic(p) if p.conjugator.is_identity() => Some(p.lambda),
            SubgroupTarget::Parabolic(_) => None,
            SubgroupTarget::FinGen { subgroup, .. } => subgroup.as_special(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupDistance {
    /// `None` means beyond the bound.
    pub value: Option<usize>,
    /// False when only a finite piece of the subgroup was searched, making
    /// `value` an upper bound.
    pub exact: bool,
}

/// `d(x, G_Λ)`, the length of the shortest element of the coset `G_Λ x`.
pub fn distance_to_special(graph: &DefiningGraph, x: &NormalForm, lambda: VertexSet) -> usize {
    graph.min_double_coset(x, lambda, VertexSet::empty()).len()
}

pub fn distance_to_subgroup(
    graph: &DefiningGraph,
    x: &NormalForm,
    target: &SubgroupTarget,
    bound: usize,
) -> SubgroupDistance {
    let cut = |d: usize| (d <= bound).then_some(d);
    if let Some(lambda) = target.special_set() {
        return SubgroupDistance { value: cut(distance_to_special(graph, x, lambda)), exact: true };
    }
    match target {
        SubgroupTarget::Parabolic(p) => {
            // A nearest point k = g h g⁻¹ within the bound has |k| ≤ |x| + bound,
            // hence |h| ≤ |x| + bound + 2|g|.
            let g = &p.conjugator;
            let k = FinGenSubgroup::special(graph, p.lambda).expect("lambda is nonempty");
            let depth = x.len() + bound + 2 * g.len();
            let ball = enumerate_subgroup(graph, &k, depth, None);
            let best = ball
                .elements()
                .map(|(_, h)| {
                    let k = graph.conjugate(g, h);
                    graph.multiply(&graph.invert(&k), x).len()
                })
                .min()
                .unwrap();
            SubgroupDistance { value: cut(best), exact: true }
        }
        SubgroupTarget::FinGen { subgroup, depth } => {
            let ball = enumerate_subgroup(graph, subgroup, *depth, None);
            let best = ball
                .elements()
                .map(|(_, h)| graph.multiply(&graph.invert(h), x).len())
                .min()
                .unwrap();
            SubgroupDistance { value: cut(best), exact: ball.closed }
        }
    }
}

/// Distance from each ball element to the target. Exact for special
/// subgroups; otherwise measured inside the ball from the members found
/// there (an upper bound).
pub fn ball_distances(graph: &DefiningGraph, ball: &CayleyBall, target: &SubgroupTarget) -> (Vec<usize>, bool) {
    if let Some(lambda) = target.special_set() {
        return (ball.elements().map(|x| distance_to_special(graph, x, lambda)).collect(), true);
    }
    let members: Vec<usize> = match target {
        SubgroupTarget::Parabolic(p) => {
            let ginv = graph.invert(&p.conjugator);
            (0..ball.len())
                .filter(|&i| graph.conjugate(&ginv, ball.element(i)).support().is_subset(p.lambda))
                .collect()
        }
        SubgroupTarget::FinGen { subgroup, depth } => {
            let hball = enumerate_subgroup(graph, subgroup, *depth, None);
            hball.elements().filter_map(|(_, h)| ball.index_of(h)).collect()
        }
    };
    (ball.bfs(&members, |_| true), false)
}

/// A rational in `(0, 1]`, written `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub p: u64,
    pub q: u64,
}

impl Ratio {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p == 0 || p > q {
            return Err(Error::param("rho", format!("{p}/{q} is not in (0, 1]")));
        }
        Ok(Ratio { p, q })
    }

    pub fn one() -> Self {
        Ratio { p: 1, q: 1 }
    }

    /// `⌈(p/q)·r⌉`.
    pub fn ceil_mul(self, r: usize) -> usize {
        (self.p as usize * r).div_ceil(self.q as usize)
    }
}

impl FromStr for Ratio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::param("rho", format!("expected p/q, got {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        Ratio::new(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Length of a shortest ball path from `x` to `y` through elements at
/// distance at least `r` from the target; `None` if there is none.
pub fn avoidant_distance(
    graph: &DefiningGraph,
    ball: &CayleyBall,
    dist: &[usize],
    x: &NormalForm,
    y: &NormalForm,
    r: usize,
) -> Result<Option<usize>> {
    let find = |g: &NormalForm| {
        let i = ball.index_of(g).ok_or_else(|| Error::OutsideBall(graph.format(g.letters())))?;
        if dist[i] < r {
            return Err(Error::AvoidanceViolated(graph.format(g.letters())));
        }
        Ok(i)
    };
    let (i, j) = (find(x)?, find(y)?);
    let d = ball.bfs(&[i], |k| dist[k] >= r)[j];
    Ok((d != usize::MAX).then_some(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceEstimate {
    /// `None` for the group divergence.
    pub n: Option<usize>,
    pub rho: Ratio,
    pub r: usize,
    pub radius: usize,
    /// `None` when no admissible pair is connected inside the ball.
    pub value: Option<usize>,
    pub pair: Option<(NormalForm, NormalForm)>,
    /// The optimal pair's search touched the edge of the ball, or subgroup
    /// distances were themselves only bounded.
    pub truncated: bool,
    pub pairs_examined: usize,
}

impl DivergenceEstimate {
    pub const CSV_HEADER: &'static str = "r,n,rho,R,sigma,truncated,pair";

    pub fn csv_row(&self, graph: &DefiningGraph) -> String {
        let value = self.value.map_or("inf".to_string(), |v| v.to_string());
        let n = self.n.map_or(String::new(), |n| n.to_string());
        let pair = self.pair.as_ref().map_or(String::new(), |(a, b)| {
            format!("{} | {}", graph.format(a.letters()), graph.format(b.letters()))
        });
        format!("{},{},{},{},{},{},\"{}\"", self.r, n, self.rho, self.radius, value, self.truncated, pair)
    }

    pub fn to_json(&self, graph: &DefiningGraph) -> serde_json::Value {
        serde_json::json!({
            "r": self.r,
            "n": self.n,
            "rho": self.rho.to_string(),
            "R": self.radius,
            "value": self.value,
            "pair": self.pair.as_ref().map(|(a, b)| [graph.format(a.letters()), graph.format(b.letters())]),
            "truncated": self.truncated,
            "pairs_examined": self.pairs_examined,
            "caveat": "ball-restricted paths give upper bounds per pair; pairs beyond the ball are not examined",
        })
    }
}

struct PairSearch<'a> {
    ball: &'a CayleyBall,
    dist: &'a [usize],
    avoid: usize,
}

impl PairSearch<'_> {
    /// Avoidant distances from `i`, plus the BFS depth at which the ball's
    /// outer sphere was first reached.
    fn from(&self, i: usize) -> (Vec<usize>, usize) {
        let d = self.ball.bfs(&[i], |k| self.dist[k] >= self.avoid);
        let rim = (0..self.ball.len())
            .filter(|&k| d[k] != usize::MAX && self.ball.element(k).len() == self.ball.radius)
            .map(|k| d[k])
            .min()
            .unwrap_or(usize::MAX);
        (d, rim)
    }
}

fn check_common(r: usize, radius: usize, min_radius: usize) -> Result<()> {
    if r < 1 {
        return Err(Error::param("r", "must be at least 1"));
    }
    if radius < min_radius {
        return Err(Error::param("radius", format!("must be at least {min_radius}")));
    }
    Ok(())
}

/// `σⁿ_ρ(r)`: least avoidant distance, outside `N_{⌈ρr⌉}(H)`, between
/// points of `∂N_r(H)` at distance at least `n·r`.
pub fn subgroup_divergence(
    graph: &DefiningGraph,
    target: &SubgroupTarget,
    n: usize,
    rho: Ratio,
    r: usize,
    radius: usize,
) -> Result<DivergenceEstimate> {
    if n < 2 {
        return Err(Error::param("n", "must be at least 2"));
    }
    check_common(r, radius, (n + 2) * r)?;
    let ball = CayleyBall::new(graph, radius, None)?;
    let (dist, exact) = ball_distances(graph, &ball, target);
    let boundary: Vec<usize> = (0..ball.len()).filter(|&i| dist[i] == r).collect();
    let search = PairSearch { ball: &ball, dist: &dist, avoid: rho.ceil_mul(r) };
    let mut best: Option<(usize, usize, usize, bool)> = None;
    let mut examined = 0;
    for &i in &boundary {
        let (d, rim) = search.from(i);
        let xi = ball.element(i);
        let xinv = graph.invert(xi);
        for &j in &boundary {
            if graph.multiply(&xinv, ball.element(j)).len() < n * r {
                continue;
            }
            examined += 1;
            if d[j] == usize::MAX {
                continue;
            }
            if best.is_none_or(|(v, ..)| d[j] < v) {
                best = Some((d[j], i, j, rim < d[j]));
            }
        }
    }
    Ok(DivergenceEstimate {
        n: Some(n),
        rho,
        r,
        radius,
        value: best.map(|b| b.0),
        pair: best.map(|(_, i, j, _)| (ball.element(i).clone(), ball.element(j).clone())),
        truncated: best.is_some_and(|b| b.3) || !exact,
        pairs_examined: examined,
    })
}

/// `δ_ρ(r)`: greatest avoidant distance, outside the open ball of radius
/// `⌈ρr⌉`, between points of the sphere of radius `r`.
pub fn group_divergence(graph: &DefiningGraph, rho: Ratio, r: usize, radius: usize) -> Result<DivergenceEstimate> {
    check_common(r, radius, r + 1)?;
    let ball = CayleyBall::new(graph, radius, None)?;
    let dist: Vec<usize> = ball.elements().map(NormalForm::len).collect();
    let sphere: Vec<usize> = (0..ball.len()).filter(|&i| dist[i] == r).collect();
    let search = PairSearch { ball: &ball, dist: &dist, avoid: rho.ceil_mul(r) };
    let mut best: Option<(usize, usize, usize, bool)> = None;
    let mut examined = 0;
    let mut truncated = false;
    for &i in &sphere {
        let (d, rim) = search.from(i);
        for &j in &sphere {
            examined += 1;
            if d[j] == usize::MAX {
                continue;
            }
            // A shorter path leaving the ball would have to reach its rim first.
            truncated |= rim < d[j];
            if best.is_none_or(|(v, ..)| d[j] > v) {
                best = Some((d[j], i, j, false));
            }
        }
    }
    Ok(DivergenceEstimate {
        n: None,
        rho,
        r,
        radius,
        value: best.map(|b| b.0),
        pair: best.map(|(_, i, j, _)| (ball.element(i).clone(), ball.element(j).clone())),
        truncated,
        pairs_examined: examined,
    })
}

/// The wall `g · H_v`, with `g` shortest in its coset `g · G_{St(v)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub g: NormalForm,
    pub v: Vertex,
}

impl Hyperplane {
    pub fn new(graph: &DefiningGraph, g: &NormalForm, v: Vertex) -> Self {
        Hyperplane { g: graph.min_double_coset(g, VertexSet::empty(), graph.star(v)), v }
    }

    /// The wall crossed by the edge from `g` to `g·v`.
    pub fn dual_to_edge(graph: &DefiningGraph, g: &NormalForm, v: Vertex) -> Self {
        Self::new(graph, g, v)
    }
}

/// Distinct walls cross exactly when their types commute and
/// `g1⁻¹g2 ∈ G_{St(v)} G_{St(w)}`.
pub fn hyperplanes_intersect(graph: &DefiningGraph, h1: &Hyperplane, h2: &Hyperplane) -> bool {
    if !graph.adjacent(h1.v, h2.v) {
        return false;
    }
    let x = graph.multiply(&graph.invert(&h1.g), &h2.g);
    graph.product_membership(&x, &[graph.star(h1.v), graph.star(h2.v)]).unwrap()
}

/// Whether some wall of type `u ∈ St(v) ∩ St(w)` can cross both.
pub fn common_transversal_exists(graph: &DefiningGraph, h1: &Hyperplane, h2: &Hyperplane) -> bool {
    let x = graph.multiply(&graph.invert(&h1.g), &h2.g);
    let (sv, sw) = (graph.star(h1.v), graph.star(h2.v));
    sv.intersection(sw)
        .iter()
        .any(|u| graph.product_membership(&x, &[sv, graph.star(u), sw]).unwrap())
}

/// An edge path in the Cayley graph, given by its start and the generators
/// read along it.
#[derive(Clone, Debug)]
pub struct CornerPath {
    pub start: NormalForm,
    pub letters: Vec<Vertex>,
    /// Total number of four-cycle-graph edges walked.
    pub walk_length: usize,
    /// `2(k+1)(M+2)m`, counting each diagonal step as one unit.
    pub stated_bound: usize,
    /// `4m(M+k+1) + k`, plus two for each detour: every edge of the
    /// construction counted.
    pub edge_bound: usize,
}

impl CornerPath {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn vertices(&self, graph: &DefiningGraph) -> Vec<NormalForm> {
        let mut out = vec![self.start.clone()];
        for &s in &self.letters {
            out.push(graph.mul_letter(out.last().unwrap(), s));
        }
        out
    }

    pub fn end(&self, graph: &DefiningGraph) -> NormalForm {
        self.vertices(graph).pop().unwrap()
    }
}

fn power(graph: &DefiningGraph, pair: (Vertex, Vertex), m: usize) -> NormalForm {
    let letters: Vec<Vertex> = std::iter::repeat_n([pair.0, pair.1], m).flatten().collect();
    graph.normalize(&letters)
}

/// Builds a path from `u^m` to `h·u^m`, where `u = s t` for a diagonal
/// `(s, t)` of the base cycle `q0`, by sliding along diagonals of
/// four-cycles in `component` of the four-cycle graph.
///
/// A letter of `h` outside the component's support is crossed by a detour
/// through a vertex adjacent to it and to the current diagonal; without
/// one the letter is refused.
pub fn corner_path(
    graph: &DefiningGraph,
    g4: &FourCycleGraph,
    component: usize,
    q0: &FourCycle,
    diagonal: (Vertex, Vertex),
    m: usize,
    h: &NormalForm,
) -> Result<CornerPath> {
    if m < 1 {
        return Err(Error::param("m", "must be at least 1"));
    }
    let members = g4.components.get(component).ok_or(Error::BadBaseCycle)?;
    let base = g4.index_of(q0).filter(|i| members.contains(i)).ok_or(Error::BadBaseCycle)?;
    if !q0.has_diagonal(diagonal) {
        return Err(Error::BadBaseCycle);
    }
    let support = g4.supports[component];

    let mut letters = Vec::new();
    let mut walk_length = 0;
    // Moves along a shortest four-cycle walk from cycle `from` (current
    // diagonal `u_from`) to cycle `to`, ending on diagonal `u_to`.
    let mut slide = |letters: &mut Vec<Vertex>, from: usize, u_from: (Vertex, Vertex), to: usize, u_to: (Vertex, Vertex)| {
        let walk = g4.shortest_path(from, to).expect("cycles share a component");
        walk_length += walk.len() - 1;
        let mut diagonals = vec![u_from];
        for pair in walk.windows(2) {
            diagonals.push(g4.cycles[pair[0]].shared_diagonal(&g4.cycles[pair[1]]).unwrap());
        }
        diagonals.push(u_to);
        for step in diagonals.windows(2) {
            let (vj, vk) = (step[0], step[1]);
            if vj == vk {
                continue;
            }
            for _ in 0..m {
                letters.extend([vk.0, vk.1]);
            }
            for _ in 0..m {
                letters.extend([vj.1, vj.0]);
            }
        }
    };

    let (mut cur, mut u_cur) = (base, diagonal);
    let mut detours = 0;
    for &s in h.letters() {
        if !support.contains(s) {
            // Step aside along a letter p commuting with s and with the
            // current diagonal, drop the power, cross s, and climb back.
            let p = graph
                .link(s)
                .intersection(graph.link(u_cur.0))
                .intersection(graph.link(u_cur.1))
                .first()
                .ok_or_else(|| Error::UnsupportedLetter(graph.name(s).to_string()))?;
            letters.push(p);
            for _ in 0..m {
                letters.extend([u_cur.1, u_cur.0]);
            }
            letters.push(s);
            for _ in 0..m {
                letters.extend([u_cur.0, u_cur.1]);
            }
            letters.push(p);
            detours += 1;
            continue;
        }
        let q = if g4.cycles[cur].vertices().contains(s) {
            cur
        } else {
            *members.iter().find(|&&i| g4.cycles[i].vertices().contains(s)).unwrap()
        };
        let u_next = g4.cycles[q].opposite_diagonal(s).unwrap();
        slide(&mut letters, cur, u_cur, q, u_next);
        letters.push(s);
        cur = q;
        u_cur = u_next;
    }
    if !h.is_identity() {
        slide(&mut letters, cur, u_cur, base, diagonal);
    }

    let k = h.len();
    Ok(CornerPath {
        start: power(graph, diagonal, m),
        letters,
        walk_length,
        stated_bound: 2 * (k + 1) * (walk_length + 2) * m,
        edge_bound: 4 * m * (walk_length + k + 1) + k + 2 * detours,
    })
}
