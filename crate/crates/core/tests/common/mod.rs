//! Independent oracles shared by the integration and acceptance suites.
//! None of these call into the word engine's normal-form machinery except
//! where noted, so agreement is meaningful.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::Rng;
use racg_core::{DefiningGraph, NormalForm, Vertex, VertexSet};

pub fn square() -> DefiningGraph {
    DefiningGraph::new(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap()
}

pub fn cycle(n: usize) -> DefiningGraph {
    let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String)> = (0..n).map(|i| (names[i].clone(), names[(i + 1) % n].clone())).collect();
    DefiningGraph::new(&names, &edges).unwrap()
}

/// Graph on `n` vertices `v0..` from an edge bitmask over pairs `(i, j)`,
/// `i < j`, in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> DefiningGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((names[i].clone(), names[j].clone()));
            }
            bit += 1;
        }
    }
    DefiningGraph::new(&names, &edges).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> DefiningGraph {
    let pairs = n * (n - 1) / 2;
    let mut mask = 0u64;
    for b in 0..pairs {
        if rng.gen_bool(p) {
            mask |= 1 << b;
        }
    }
    graph_from_mask(n, mask)
}

pub fn random_connected_graph(rng: &mut impl Rng, max_n: usize) -> DefiningGraph {
    loop {
        let n = rng.gen_range(2..=max_n);
        let g = random_graph(rng, n, 0.45);
        if g.is_connected() {
            return g;
        }
    }
}

pub fn random_word(rng: &mut impl Rng, g: &DefiningGraph, len: usize) -> Vec<Vertex> {
    (0..len).map(|_| Vertex::from_index(rng.gen_range(0..g.len()))).collect()
}

/// Every graph on `n ≤ 6` vertices up to isomorphism, as edge masks.
pub fn graphs_up_to_iso(n: usize) -> Vec<DefiningGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let bit_of: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(b, &p)| (p, b)).collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0..(1u64 << pairs.len()) {
        let canon = perms
            .iter()
            .map(|p| {
                let mut m = 0u64;
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        let (x, y) = (p[i].min(p[j]), p[i].max(p[j]));
                        m |= 1 << bit_of[&(x, y)];
                    }
                }
                m
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(graph_from_mask(n, canon));
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// All subsets of the vertex set.
pub fn subsets(g: &DefiningGraph) -> impl Iterator<Item = VertexSet> {
    let n = g.len();
    (0u128..1 << n).map(VertexSet::from_bits)
}

// ---------------------------------------------------------------------------
// Tits representation: faithful, integral for right-angled groups.

pub type Mat = Vec<i64>;

pub fn identity_mat(n: usize) -> Mat {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

/// `M · σ_s`, where σ_s(e_t) = e_t + 2e_s for t not adjacent to s,
/// e_t for t adjacent, and −e_s for t = s.
pub fn right_mul_reflection(g: &DefiningGraph, m: &Mat, s: Vertex) -> Mat {
    let n = g.len();
    let si = s.index();
    let mut out = m.clone();
    // Column t of M·σ_s is M·σ_s(e_t).
    for t in 0..n {
        let tv = Vertex::from_index(t);
        for row in 0..n {
            out[row * n + t] = if t == si {
                -m[row * n + si]
            } else if g.adjacent(s, tv) {
                m[row * n + t]
            } else {
                m[row * n + t] + 2 * m[row * n + si]
            };
        }
    }
    out
}

pub fn word_matrix(g: &DefiningGraph, letters: &[Vertex]) -> Mat {
    letters.iter().fold(identity_mat(g.len()), |m, &s| right_mul_reflection(g, &m, s))
}

/// Breadth-first enumeration of the Cayley ball through the Tits
/// representation, tracking the lexicographically least geodesic word of
/// each element.
pub struct TitsBall {
    pub elements: Vec<(Mat, Vec<Vertex>)>,
    pub index: HashMap<Mat, usize>,
}

impl TitsBall {
    pub fn new(g: &DefiningGraph, radius: usize) -> Self {
        let mut elements = vec![(identity_mat(g.len()), Vec::new())];
        let mut index = HashMap::from([(elements[0].0.clone(), 0)]);
        let mut layer = 0..1;
        for _ in 0..radius {
            let mut next: BTreeMap<Mat, Vec<Vertex>> = BTreeMap::new();
            for i in layer.clone() {
                for s in g.vertices() {
                    let m = right_mul_reflection(g, &elements[i].0, s);
                    if index.contains_key(&m) {
                        continue;
                    }
                    let mut w = elements[i].1.clone();
                    w.push(s);
                    let slot = next.entry(m).or_insert_with(|| w.clone());
                    if w < *slot {
                        *slot = w;
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let start = elements.len();
            for (m, w) in next {
                index.insert(m.clone(), elements.len());
                elements.push((m, w));
            }
            layer = start..elements.len();
        }
        TitsBall { elements, index }
    }

    pub fn distance(&self, m: &Mat) -> Option<usize> {
        self.index.get(m).map(|&i| self.elements[i].1.len())
    }
}

// ---------------------------------------------------------------------------
// Words, independent of the incremental normal form.

/// Deletes Deletion-Condition pairs until none remain.
pub fn reduce_by_deletion(g: &DefiningGraph, letters: &[Vertex]) -> Vec<Vertex> {
    let mut w = letters.to_vec();
    'outer: loop {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] == w[j] && w[i + 1..j].iter().all(|&y| g.adjacent(w[i], y)) {
                    w.remove(j);
                    w.remove(i);
                    continue 'outer;
                }
            }
        }
        return w;
    }
}

/// Lexicographically least rearrangement of a reduced word by commuting
/// swaps: a greedy topological sort of its dependency order.
pub fn lex_least_spelling(g: &DefiningGraph, reduced: &[Vertex]) -> Vec<Vertex> {
    let n = reduced.len();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<usize> = None;
        for k in 0..n {
            if used[k] {
                continue;
            }
            let free = (0..k).all(|i| used[i] || g.adjacent(reduced[i], reduced[k]));
            if free && best.is_none_or(|b| reduced[k] < reduced[b]) {
                best = Some(k);
            }
        }
        let k = best.unwrap();
        used[k] = true;
        out.push(reduced[k]);
    }
    out
}

// ---------------------------------------------------------------------------
// Graph brute force.

/// Is `set` inside some induced join? Enumerates supersets and their
/// bipartitions.
pub fn brute_contained_in_join(g: &DefiningGraph, set: VertexSet) -> bool {
    let all = g.all();
    let rest = all.difference(set);
    let rest_bits: Vec<Vertex> = rest.iter().collect();
    for extra in 0u64..1 << rest_bits.len() {
        let j: VertexSet = set.union(
            rest_bits.iter().enumerate().filter(|(b, _)| extra >> b & 1 == 1).map(|(_, &v)| v).collect(),
        );
        let members: Vec<Vertex> = j.iter().collect();
        // Bipartitions with member 0 on the left.
        for side in 0u64..1 << (members.len() - 1) {
            let left: VertexSet = std::iter::once(members[0])
                .chain(members[1..].iter().enumerate().filter(|(b, _)| side >> b & 1 == 0).map(|(_, &v)| v))
                .collect();
            let right = j.difference(left);
            if right.is_empty() {
                continue;
            }
            if left.iter().all(|u| right.is_subset(g.link(u))) {
                return true;
            }
        }
    }
    false
}

pub fn brute_contained_in_star(g: &DefiningGraph, set: VertexSet) -> bool {
    g.vertices().any(|v| set.is_subset(g.star(v)))
}

/// Induced four-cycles as sorted vertex quadruples with their diagonals.
pub fn brute_four_cycles(g: &DefiningGraph) -> Vec<VertexSet> {
    let vs: Vec<Vertex> = g.vertices().collect();
    let mut out = Vec::new();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            for c in b + 1..vs.len() {
                for d in c + 1..vs.len() {
                    let q = [vs[a], vs[b], vs[c], vs[d]];
                    let edges = (0..4)
                        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                        .filter(|&(i, j)| g.adjacent(q[i], q[j]))
                        .count();
                    let degrees_two = (0..4).all(|i| (0..4).filter(|&j| j != i && g.adjacent(q[i], q[j])).count() == 2);
                    if edges == 4 && degrees_two {
                        out.push(q.into_iter().collect());
                    }
                }
            }
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Cayley-graph oracles.

/// Elements of `G_Λ` up to length `radius`, by breadth-first search over the
/// Λ-generators (multiplication through the word engine).
pub fn special_ball(g: &DefiningGraph, lambda: VertexSet, radius: usize) -> Vec<NormalForm> {
    let mut seen: HashSet<NormalForm> = HashSet::from([NormalForm::identity()]);
    let mut frontier = vec![NormalForm::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for s in lambda {
                let y = g.mul_letter(x, s);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

/// Union-find.
pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Walls inside a ball: the edges of the ball's squares are glued in
/// opposite pairs. Returns the ball, its edge list `(i, j, s)` and each
/// edge's class.
pub fn ball_walls(g: &DefiningGraph, radius: usize) -> (racg_core::CayleyBall, Vec<(usize, usize, Vertex)>, Vec<usize>) {
    let ball = racg_core::CayleyBall::new(g, radius, None).unwrap();
    let edges: Vec<(usize, usize, Vertex)> = ball.edges().collect();
    let edge_id: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(k, &(i, j, _))| ((i, j), k)).collect();
    let key = |i: usize, j: usize| edge_id[&(i.min(j), i.max(j))];
    let mut dsu = Dsu::new(edges.len());
    for x in 0..ball.len() {
        for &(s, xs) in ball.neighbors(x) {
            for &(t, xt) in ball.neighbors(x) {
                if s >= t || !g.adjacent(s, t) {
                    continue;
                }
                // Square x, xs, xst, xt.
                if let Some(&(_, xst)) = ball.neighbors(xs).iter().find(|&&(u, _)| u == t) {
                    dsu.union(key(x, xs), key(xt, xst));
                    dsu.union(key(x, xt), key(xs, xst));
                }
            }
        }
    }
    let class = (0..edges.len()).map(|k| dsu.find(k)).collect();
    (ball, edges, class)
}

/// Grid coordinates of an element of the square's group, `D∞ × D∞`:
/// the `{a, c}` letters give `x`, the `{b, d}` letters give `y`, positive
/// when the alternating word starts with `a` (resp. `b`).
pub fn grid_coords(g: &DefiningGraph, x: &NormalForm) -> (i64, i64) {
    let axis = |first: &str, other: &str| {
        let letters: Vec<&str> =
            x.letters().iter().map(|&v| g.name(v)).filter(|n| *n == first || *n == other).collect();
        let len = letters.len() as i64;
        if letters.first() == Some(&first) { len } else { -len }
    };
    (axis("a", "c"), axis("b", "d"))
}

fn grid_bfs(from: (i64, i64), radius: i64, allowed: impl Fn((i64, i64)) -> bool) -> HashMap<(i64, i64), usize> {
    let mut dist = HashMap::from([(from, 0usize)]);
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let q = (p.0 + d.0, p.1 + d.1);
            if q.0.abs() + q.1.abs() <= radius && allowed(q) && !dist.contains_key(&q) {
                dist.insert(q, dist[&p] + 1);
                queue.push_back(q);
            }
        }
    }
    dist
}

fn l1_ball(radius: i64) -> Vec<(i64, i64)> {
    (-radius..=radius)
        .flat_map(|x| (-radius..=radius).map(move |y| (x, y)))
        .filter(|p| p.0.abs() + p.1.abs() <= radius)
        .collect()
}

/// `σⁿ` for the line `x = 0` in the plane grid, by exhaustive search in
/// the L¹ ball of the given radius.
pub fn grid_sigma(n: usize, avoid: i64, r: i64, radius: i64) -> Option<usize> {
    let boundary: Vec<_> = l1_ball(radius).into_iter().filter(|p| p.0.abs() == r).collect();
    let mut best: Option<usize> = None;
    for &p in &boundary {
        let dist = grid_bfs(p, radius, |q| q.0.abs() >= avoid);
        for &q in &boundary {
            let sep = ((p.0 - q.0).abs() + (p.1 - q.1).abs()) as usize;
            if sep < n * r as usize {
                continue;
            }
            if let Some(&d) = dist.get(&q) {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
    }
    best
}

/// `δ` of the plane grid: the greatest avoidant distance between points
/// of the sphere of radius `r`.
pub fn grid_delta(avoid: i64, r: i64, radius: i64) -> Option<usize> {
    let sphere: Vec<_> = l1_ball(radius).into_iter().filter(|p| p.0.abs() + p.1.abs() == r).collect();
    let mut best: Option<usize> = None;
    for &p in &sphere {
        let dist = grid_bfs(p, radius, |q| q.0.abs() + q.1.abs() >= avoid);
        for q in &sphere {
            if let Some(&d) = dist.get(q) {
                best = Some(best.map_or(d, |b| b.max(d)));
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Diagram fuzzing.

/// `u · reverse(u)` with a few cancelling pairs spliced in, shuffled by
/// random commuting swaps.
pub fn random_identity_word(rng: &mut impl Rng, g: &DefiningGraph, max_len: usize) -> Vec<Vertex> {
    let half = rng.gen_range(0..=max_len / 2);
    let u = random_word(rng, g, half);
    let mut w: Vec<Vertex> = u.iter().chain(u.iter().rev()).copied().collect();
    while w.len() + 2 <= max_len && rng.gen_bool(0.3) {
        let s = Vertex::from_index(rng.gen_range(0..g.len()));
        let at = rng.gen_range(0..=w.len());
        w.splice(at..at, [s, s]);
    }
    for _ in 0..4 * w.len() {
        if w.len() < 2 {
            break;
        }
        let i = rng.gen_range(0..w.len() - 1);
        if g.adjacent(w[i], w[i + 1]) {
            w.swap(i, i + 1);
        }
    }
    w
}

/// Builds, validates and combs a diagram for an identity word, and checks
/// a reducing diagram for a random factorisation. Returns the first
/// failure.
pub fn check_identity_word(rng: &mut impl Rng, g: &DefiningGraph, w: &[Vertex]) -> Result<(), String> {
    use racg_core::{DualVanKampenDiagram, ReducingDiagram, Word};
    let d = DualVanKampenDiagram::build(g, &Word(w.to_vec())).map_err(|e| format!("build: {e}"))?;
    d.validate(g).map_err(|v| format!("validate: {v}"))?;
    if d.boundary() != w {
        return Err("boundary differs from the word".into());
    }
    let start = rng.gen_range(0..=w.len());
    let end = rng.gen_range(start..=w.len());
    let combed = d.comb(start..end).map_err(|e| format!("comb: {e}"))?;
    if !combed.diagram.is_combed(start..end) {
        return Err(format!("range {start}..{end} still has crossings"));
    }
    combed.diagram.validate(g).map_err(|v| format!("combed diagram: {v}"))?;
    if g.normalize(combed.word.letters()) != g.normalize(&w[start..end]) {
        return Err("combing changed the element".into());
    }
    let (pruned, pd, range) = combed.diagram.prune(start..end).map_err(|e| format!("prune: {e}"))?;
    pd.validate(g).map_err(|v| format!("pruned diagram: {v}"))?;
    let read = combed.diagram.label_read(start..end).map_err(|e| format!("label_read: {e}"))?;
    if pruned != read || pd.label_read(range).unwrap() != read {
        return Err("label_read disagrees with pruning".into());
    }
    // Reducing diagram for a split of a random word.
    let h = random_word(rng, g, w.len().min(12));
    let cut = rng.gen_range(0..=h.len());
    let hs = [Word(h[..cut].to_vec()), Word(h[cut..].to_vec())];
    let target = g.normalize(&h);
    let rd = ReducingDiagram::build(g, &hs, &target).map_err(|e| format!("reducing: {e}"))?;
    rd.diagram.validate(g).map_err(|v| format!("reducing diagram: {v}"))?;
    if rd.contributing() != target.len() {
        return Err(format!("{} contributing arcs for |w| = {}", rd.contributing(), target.len()));
    }
    if g.normalize(&rd.contributing_letters()) != target {
        return Err("contributing letters do not spell w".into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Walls.

/// Compares the algebraic crossing predicate with crossings seen in a
/// ball, over all walls `g·H_v` with `|g| ≤ 1`. Returns `(agreeing, total)`
/// and the first disagreement.
pub fn wall_agreement(g: &DefiningGraph, radius: usize) -> (usize, usize, Option<String>) {
    use racg_core::geometry::hyperplanes_intersect;
    use racg_core::Hyperplane;
    let (ball, edges, class) = ball_walls(g, radius);
    let edge_class: HashMap<(usize, usize), usize> =
        edges.iter().zip(&class).map(|(&(i, j, _), &c)| ((i, j), c)).collect();
    let class_of = |i: usize, j: usize| edge_class[&(i.min(j), i.max(j))];
    // Class pairs crossing in some square of the ball.
    let mut crossing: HashSet<(usize, usize)> = HashSet::new();
    for x in 0..ball.len() {
        for &(s, xs) in ball.neighbors(x) {
            for &(t, xt) in ball.neighbors(x) {
                if s < t && g.adjacent(s, t) && ball.neighbors(xs).iter().any(|&(u, _)| u == t) {
                    let (a, b) = (class_of(x, xs), class_of(x, xt));
                    crossing.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    let mut walls: Vec<(Hyperplane, usize)> = Vec::new();
    for x in (0..ball.len()).filter(|&i| ball.element(i).len() <= 1) {
        for &(v, xv) in ball.neighbors(x) {
            let h = Hyperplane::dual_to_edge(g, ball.element(x), v);
            if h.g.len() <= 1 && !walls.iter().any(|(w, _)| *w == h) {
                walls.push((h, class_of(x, xv)));
            }
        }
    }
    let (mut agree, mut total, mut first) = (0, 0, None);
    for (i, (h1, c1)) in walls.iter().enumerate() {
        for (h2, c2) in &walls[i + 1..] {
            total += 1;
            let algebraic = hyperplanes_intersect(g, h1, h2);
            let geometric = c1 != c2 && crossing.contains(&((*c1).min(*c2), (*c1).max(*c2)));
            if algebraic == geometric {
                agree += 1;
            } else if first.is_none() {
                first = Some(format!(
                    "{:?}: ({} | {}) vs ({} | {}): algebraic {algebraic}, ball {geometric}",
                    g.to_doc(),
                    g.format(h1.g.letters()),
                    g.name(h1.v),
                    g.format(h2.g.letters()),
                    g.name(h2.v)
                ));
            }
        }
    }
    (agree, total, first)
}
