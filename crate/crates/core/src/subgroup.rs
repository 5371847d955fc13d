//! Subgroups: exact graph-side classifiers for parabolic subgroups, and
//! bounded scans for finitely generated ones.
//!
//! Scans are semi-decisions. A witness certifies a negative answer; running
//! out of search space only says nothing was found up to the bound.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::CayleyBall;
use crate::graph::{DefiningGraph, GraphDoc, JoinWitness, VertexSet};
use crate::word::NormalForm;

/// `g · G_Λ · g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSpec {
    pub lambda: VertexSet,
    pub conjugator: NormalForm,
}

impl ParabolicSpec {
    pub fn special(lambda: VertexSet) -> Self {
        ParabolicSpec { lambda, conjugator: NormalForm::identity() }
    }
}

/// A subgroup given by nontrivial generators in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGenSubgroup {
    generators: Vec<NormalForm>,
}

impl FinGenSubgroup {
    pub fn new(generators: Vec<NormalForm>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        if let Some(i) = generators.iter().position(NormalForm::is_identity) {
            return Err(Error::TrivialGenerator(i));
        }
        Ok(FinGenSubgroup { generators })
    }

    pub fn from_words<S: AsRef<str>>(graph: &DefiningGraph, words: &[S]) -> Result<Self> {
        Self::new(words.iter().map(|w| graph.element(w.as_ref())).collect::<Result<_>>()?)
    }

    /// `G_Λ`, generated by the vertices of Λ.
    pub fn special(graph: &DefiningGraph, lambda: VertexSet) -> Result<Self> {
        Self::new(lambda.iter().map(|v| graph.normalize(&[v])).collect())
    }

    pub fn generators(&self) -> &[NormalForm] {
        &self.generators
    }

    /// Generators together with their inverses, without repeats.
    pub fn alphabet(&self, graph: &DefiningGraph) -> Vec<NormalForm> {
        let mut out: Vec<NormalForm> = Vec::new();
        for g in &self.generators {
            for x in [g.clone(), graph.invert(g)] {
                if !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Union of generator supports.
    pub fn support(&self) -> VertexSet {
        self.generators.iter().fold(VertexSet::empty(), |acc, g| acc.union(g.support()))
    }

    /// When every generator is a single letter the subgroup is special and
    /// membership is decided by support.
    pub fn as_special(&self) -> Option<VertexSet> {
        self.generators.iter().all(|g| g.len() == 1).then(|| self.support())
    }
}

/// `{"graph": ..., "generators": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDoc {
    pub graph: GraphDoc,
    pub generators: Vec<String>,
}

impl SubgroupDoc {
    pub fn load(text: &str) -> Result<(DefiningGraph, FinGenSubgroup)> {
        let doc: SubgroupDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let graph = DefiningGraph::from_doc(&doc.graph)?;
        let h = FinGenSubgroup::from_words(&graph, &doc.generators)?;
        Ok((graph, h))
    }

    pub fn new(graph: &DefiningGraph, h: &FinGenSubgroup) -> Self {
        SubgroupDoc {
            graph: graph.to_doc(),
            generators: h.generators().iter().map(|g| graph.format(g.letters())).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicFlags {
    pub finite: bool,
    /// `None` when the ambient graph is disconnected or a join.
    pub join_free: Option<bool>,
    pub star_free: Option<bool>,
    pub almost_malnormal: bool,
    pub strongly_quasiconvex_and_finite_height: bool,
}

/// Classifies `g G_Λ g⁻¹` from the graph alone; the conjugator plays no
/// part.
pub fn classify_parabolic(graph: &DefiningGraph, p: &ParabolicSpec) -> Result<ParabolicFlags> {
    let lambda = p.lambda;
    if lambda.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let pairs: Vec<_> = lambda
        .iter()
        .flat_map(|u| lambda.iter().filter(move |&v| v > u).map(move |v| (u, v)))
        .collect();
    let non_adjacent: Vec<_> = pairs.iter().copied().filter(|&(u, v)| !graph.adjacent(u, v)).collect();

    let join_free = (graph.is_connected() && !graph.is_join()).then(|| {
        !non_adjacent.is_empty() && pairs.iter().all(|&(u, v)| graph.distance(u, v) != Some(2))
    });
    let outside = graph.all().difference(lambda);
    let almost_malnormal = non_adjacent
        .iter()
        .all(|&(u, v)| graph.link(u).intersection(graph.link(v)).intersection(outside).is_empty());
    let sq = !graph.four_cycles().iter().any(|c| {
        c.diagonals.iter().any(|&(u, v)| lambda.contains(u) && lambda.contains(v))
            && !c.vertices().is_subset(lambda)
    });
    Ok(ParabolicFlags {
        finite: graph.is_clique(lambda),
        join_free,
        star_free: join_free,
        almost_malnormal,
        strongly_quasiconvex_and_finite_height: sq,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CollectionFlags {
    pub almost_malnormal_collection: bool,
    pub hyperbolically_embedded: bool,
}

pub fn classify_collection(graph: &DefiningGraph, ps: &[ParabolicSpec]) -> Result<CollectionFlags> {
    if ps.is_empty() {
        return Err(Error::param("lambda", "collection must be nonempty"));
    }
    let mut ok = true;
    for p in ps {
        ok &= classify_parabolic(graph, p)?.almost_malnormal;
    }
    for (i, p) in ps.iter().enumerate() {
        for q in &ps[i + 1..] {
            ok &= graph.is_clique(p.lambda.intersection(q.lambda));
        }
    }
    Ok(CollectionFlags { almost_malnormal_collection: ok, hyperbolically_embedded: ok })
}

/// Elements of `H` by minimal T-length, each layer sorted.
#[derive(Clone, Debug)]
pub struct SubgroupBall {
    pub layers: Vec<Vec<NormalForm>>,
    /// Every element of `H` has been found: `H` is finite.
    pub closed: bool,
    /// The element cap stopped enumeration early.
    pub truncated: bool,
    index: HashMap<NormalForm, usize>,
}

impl SubgroupBall {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn contains(&self, g: &NormalForm) -> bool {
        self.index.contains_key(g)
    }

    pub fn t_length(&self, g: &NormalForm) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// In (T-length, lexicographic) order.
    pub fn elements(&self) -> impl Iterator<Item = (usize, &NormalForm)> {
        self.layers.iter().enumerate().flat_map(|(k, layer)| layer.iter().map(move |g| (k, g)))
    }
}

/// The T-ball of radius `depth`.
pub fn enumerate_subgroup(
    graph: &DefiningGraph,
    h: &FinGenSubgroup,
    depth: usize,
    cap: Option<usize>,
) -> SubgroupBall {
    let alphabet = h.alphabet(graph);
    let mut index = HashMap::from([(NormalForm::identity(), 0)]);
    let mut layers = vec![vec![NormalForm::identity()]];
    let mut truncated = false;
    let mut closed = false;
    for k in 1..=depth {
        let mut next = Vec::new();
        'outer: for g in &layers[k - 1] {
            for x in &alphabet {
                let y = graph.multiply(g, x);
                if index.contains_key(&y) {
                    continue;
                }
                if cap.is_some_and(|c| index.len() >= c) {
                    truncated = true;
                    break 'outer;
                }
                index.insert(y.clone(), k);
                next.push(y);
            }
        }
        if next.is_empty() {
            closed = !truncated;
            break;
        }
        next.sort();
        layers.push(next);
        if truncated {
            break;
        }
    }
    if !closed && !truncated {
        // One more step decides whether the last layer was also the final one.
        let last = layers.last().unwrap();
        closed = last.iter().all(|g| alphabet.iter().all(|x| index.contains_key(&graph.multiply(g, x))));
    }
    SubgroupBall { layers, closed, truncated, index }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedNegative,
    NoViolationUpToBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub element: NormalForm,
    pub conjugator: Option<NormalForm>,
    pub explanation: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub bound: usize,
    pub truncated: bool,
    /// Candidates examined.
    pub examined: usize,
}

impl ScanReport {
    fn found(w: Witness, bound: usize, truncated: bool, examined: usize) -> Self {
        ScanReport { verdict: Verdict::CertifiedNegative, witness: Some(w), bound, truncated, examined }
    }

    fn clean(bound: usize, truncated: bool, examined: usize) -> Self {
        ScanReport { verdict: Verdict::NoViolationUpToBound, witness: None, bound, truncated, examined }
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::CertifiedNegative
    }

    pub fn to_json(&self, graph: &DefiningGraph) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "element": graph.format(w.element.letters()),
                "conjugator": w.conjugator.as_ref().map(|c| graph.format(c.letters())),
                "explanation": w.explanation,
            })
        });
        json!({
            "verdict": self.verdict,
            "witness": witness,
            "bound": self.bound,
            "truncated": self.truncated,
            "examined": self.examined,
        })
    }
}

fn describe_join(graph: &DefiningGraph, w: JoinWitness) -> String {
    match w {
        JoinWitness::Split(a, b) => format!(
            "induced subgraph on csupp is the join {{{}}} * {{{}}}",
            graph.set_names(a).join(","),
            graph.set_names(b).join(",")
        ),
        JoinWitness::Cone(v) => format!("csupp lies in the link of {}", graph.name(v)),
    }
}

fn scan_ball(
    graph: &DefiningGraph,
    h: &FinGenSubgroup,
    depth: usize,
    test: impl Fn(&NormalForm) -> Option<String>,
) -> ScanReport {
    let ball = enumerate_subgroup(graph, h, depth, None);
    let mut examined = 0;
    for (_, g) in ball.elements().filter(|(_, g)| !g.is_identity()) {
        examined += 1;
        if let Some(explanation) = test(g) {
            let w = Witness { element: g.clone(), conjugator: None, explanation };
            return ScanReport::found(w, depth, false, examined);
        }
    }
    ScanReport::clean(depth, false, examined)
}

/// Looks for an infinite-order element conjugate into a join subgroup.
pub fn join_free_scan(graph: &DefiningGraph, h: &FinGenSubgroup, depth: usize) -> ScanReport {
    scan_ball(graph, h, depth, |g| {
        if graph.is_finite_order(g) {
            return None;
        }
        let cs = graph.csupp(g);
        graph.contained_in_join(cs).ok().flatten().map(|w| {
            format!("infinite order and conjugate into a join subgroup: {}", describe_join(graph, w))
        })
    })
}

/// Looks for an infinite-order element conjugate into a star subgroup.
pub fn star_free_scan(graph: &DefiningGraph, h: &FinGenSubgroup, depth: usize) -> ScanReport {
    scan_ball(graph, h, depth, |g| {
        if graph.is_finite_order(g) {
            return None;
        }
        let cs = graph.csupp(g);
        graph.contained_in_star(cs).ok().flatten().map(|v| {
            format!("infinite order and conjugate into a star subgroup: csupp lies in St({})", graph.name(v))
        })
    })
}

/// Looks for a conjugate of a generator of the ambient group.
pub fn reflection_scan(graph: &DefiningGraph, h: &FinGenSubgroup, depth: usize) -> ScanReport {
    scan_ball(graph, h, depth, |g| {
        let cs = graph.csupp(g);
        (cs.len() == 1).then(|| {
            format!("conjugate of the generator {}", graph.name(cs.first().unwrap()))
        })
    })
}

#[derive(Clone, Debug)]
pub struct JoinBustingReport {
    pub estimate: usize,
    pub element: NormalForm,
    pub window_start: usize,
    pub depth: usize,
}

impl JoinBustingReport {
    pub const CAVEAT: &'static str =
        "only the canonical reduced spelling of each element is examined; other spellings may hold longer join subwords";

    pub fn to_json(&self, graph: &DefiningGraph) -> Value {
        json!({
            "estimate": self.estimate,
            "element": graph.format(self.element.letters()),
            "window": graph.format(&self.element.letters()[self.window_start..self.window_start + self.estimate]),
            "window_start": self.window_start,
            "depth": self.depth,
            "caveat": Self::CAVEAT,
        })
    }
}

/// Longest join subword over the canonical spellings of the T-ball.
pub fn join_busting_estimate(graph: &DefiningGraph, h: &FinGenSubgroup, depth: usize) -> Result<JoinBustingReport> {
    if depth < 1 {
        return Err(Error::param("depth", "must be at least 1"));
    }
    let ball = enumerate_subgroup(graph, h, depth, None);
    let mut best = JoinBustingReport { estimate: 0, element: NormalForm::identity(), window_start: 0, depth };
    for (_, g) in ball.elements() {
        let (len, start) = graph.max_join_subword(g);
        if len > best.estimate {
            best = JoinBustingReport { estimate: len, element: g.clone(), window_start: start, depth };
        }
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct PreconditionReport {
    pub connected_non_join: bool,
    pub reflections: ScanReport,
    pub join_free: ScanReport,
}

impl PreconditionReport {
    /// `CertifiedNegative` if some necessary condition fails; otherwise the
    /// outcome is inconclusive.
    pub fn verdict(&self) -> Verdict {
        if !self.connected_non_join || self.reflections.is_violation() || self.join_free.is_violation() {
            Verdict::CertifiedNegative
        } else {
            Verdict::NoViolationUpToBound
        }
    }

    pub fn to_json(&self, graph: &DefiningGraph) -> Value {
        let verdict = self.verdict();
        json!({
            "verdict": verdict,
            "conclusion": match verdict {
                Verdict::CertifiedNegative => "not an infinite proper malnormal subgroup",
                Verdict::NoViolationUpToBound => "inconclusive: necessary conditions hold up to the bound",
            },
            "connected_non_join": self.connected_non_join,
            "reflections": self.reflections.to_json(graph),
            "join_free": self.join_free.to_json(graph),
        })
    }
}

/// Necessary conditions for `H` to be an infinite proper malnormal
/// subgroup.
pub fn malnormal_preconditions(graph: &DefiningGraph, h: &FinGenSubgroup, depth: usize) -> PreconditionReport {
    PreconditionReport {
        connected_non_join: graph.is_connected() && !graph.is_join(),
        reflections: reflection_scan(graph, h, depth),
        join_free: join_free_scan(graph, h, depth),
    }
}

/// Searches for `g ∉ H` and `1 ≠ h ∈ H` with `g h g⁻¹ ∈ H`.
///
/// A conjugator is used only when `g ∉ H` is certain: membership is exact
/// for special subgroups and finite `H`, and otherwise `g` must use a letter
/// outside every generator's support. Other conjugators are skipped.
pub fn malnormality_scan(
    graph: &DefiningGraph,
    h: &FinGenSubgroup,
    lg: usize,
    lh: usize,
) -> Result<ScanReport> {
    if lg < 1 || lh < 1 {
        return Err(Error::param("depth", "both bounds must be at least 1"));
    }
    let hball = enumerate_subgroup(graph, h, lh, None);
    let special = h.as_special();
    let support = h.support();
    let in_h = |x: &NormalForm| match special {
        Some(lambda) => x.support().is_subset(lambda),
        None => hball.contains(x),
    };
    let certified_outside = |g: &NormalForm| match special {
        Some(lambda) => !g.support().is_subset(lambda),
        None => (hball.closed && !hball.contains(g)) || !g.support().is_subset(support),
    };
    let sball = CayleyBall::new(graph, lg, None)?;
    let mut examined = 0;
    for g in sball.elements() {
        if !certified_outside(g) {
            continue;
        }
        for (_, x) in hball.elements().filter(|(_, x)| !x.is_identity()) {
            examined += 1;
            let y = graph.conjugate(g, x);
            if in_h(&y) {
                let w = Witness {
                    element: x.clone(),
                    conjugator: Some(g.clone()),
                    explanation: format!("g h g^-1 = {} lies in H", graph.format(y.letters())),
                };
                return Ok(ScanReport::found(w, lg.max(lh), false, examined));
            }
        }
    }
    Ok(ScanReport::clean(lg.max(lh), false, examined))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeBasisFailure {
    Identity,
    LengthRatio,
}

#[derive(Clone, Debug)]
pub struct FreeBasisReport {
    pub checked: usize,
    /// First offending T-word as generator indices; negative entries are
    /// inverses (`-(i + 1)`).
    pub failure: Option<(Vec<isize>, FreeBasisFailure, NormalForm)>,
}

impl FreeBasisReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn spell_t_word(word: &[isize]) -> String {
        word.iter()
            .map(|&i| if i >= 0 { format!("x{}", i + 1) } else { format!("x{}^-1", -i) })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self, graph: &DefiningGraph) -> Value {
        json!({
            "passed": self.passed(),
            "checked": self.checked,
            "failure": self.failure.as_ref().map(|(w, kind, nf)| json!({
                "t_word": Self::spell_t_word(w),
                "kind": kind,
                "element": graph.format(nf.letters()),
            })),
        })
    }
}

/// Checks every freely reduced word of length `1..=max_len` in the
/// generators and their inverses: none may be trivial, and each must have
/// S-length exactly `ratio` times its T-length.
pub fn free_basis_check(
    graph: &DefiningGraph,
    h: &FinGenSubgroup,
    max_len: usize,
    ratio: usize,
) -> Result<FreeBasisReport> {
    if max_len < 1 {
        return Err(Error::param("depth", "must be at least 1"));
    }
    if ratio < 1 {
        return Err(Error::param("ratio", "must be positive"));
    }
    let k = h.generators().len() as isize;
    let letter = |i: isize| -> NormalForm {
        if i >= 0 {
            h.generators()[i as usize].clone()
        } else {
            graph.invert(&h.generators()[(-i - 1) as usize])
        }
    };
    let letters: Vec<isize> = (0..k).flat_map(|i| [i, -i - 1]).collect();
    let inverse = |i: isize| -i - 1;

    // Breadth-first by length so the reported failure is a shortest one.
    let mut frontier: Vec<(Vec<isize>, NormalForm)> = vec![(Vec::new(), NormalForm::identity())];
    let mut checked = 0;
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (word, elem) in &frontier {
            for &x in &letters {
                if word.last().is_some_and(|&y| y == inverse(x)) {
                    continue;
                }
                let mut w = word.clone();
                w.push(x);
                let e = graph.multiply(elem, &letter(x));
                checked += 1;
                let failure = if e.is_identity() {
                    Some(FreeBasisFailure::Identity)
                } else if e.len() != ratio * len {
                    Some(FreeBasisFailure::LengthRatio)
                } else {
                    None
                };
                if let Some(kind) = failure {
                    return Ok(FreeBasisReport { checked, failure: Some((w, kind, e)) });
                }
                next.push((w, e));
            }
        }
        frontier = next;
    }
    Ok(FreeBasisReport { checked, failure: None })
}
