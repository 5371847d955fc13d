//! Named example graphs and subgroups.
//!
//! * `figure1`: seven vertices with a free, join-free subgroup of rank two.
//! * `omega(d)`: a central square with two fans and an apex `c`, built so
//!   that pairs deep in a fan have high rank.
//! * `gamma(p)`: the right half of an `omega` graph.

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, VertexSet};
use crate::subgroup::FinGenSubgroup;
use crate::word::NormalForm;

pub const FIGURE1_X: &str = "a a1 d d1 a a1";
pub const FIGURE1_Y: &str = "d d1 a a1 d d1";

pub fn figure1() -> (DefiningGraph, FinGenSubgroup) {
    let graph = DefiningGraph::new(
        &["a", "b", "c", "d", "t", "d1", "a1"],
        &[
            ("a", "b"),
            ("b", "c"),
            ("c", "d"),
            ("d", "t"),
            ("t", "a"),
            ("a", "d1"),
            ("d1", "c"),
            ("b", "a1"),
            ("a1", "d"),
            ("b", "d1"),
            ("c", "a1"),
        ],
    )
    .expect("static graph");
    let h = FinGenSubgroup::from_words(&graph, &[FIGURE1_X, FIGURE1_Y]).expect("static words");
    (graph, h)
}

/// `Ω_d` for `d ≥ 3`; `4d − 2` vertices.
pub fn omega(d: usize) -> Result<DefiningGraph> {
    if d < 3 {
        return Err(Error::param("d", "must be at least 3"));
    }
    let mut vertices: Vec<String> = ["a_0", "a_1", "b_0", "b_1", "c"].map(String::from).to_vec();
    vertices.extend((2..=d).map(|j| format!("b_{j}")));
    vertices.extend((1..=d - 2).map(|i| format!("t_{i}")));
    vertices.extend((3..=d).map(|j| format!("a_{j}")));
    vertices.extend((1..=d - 2).map(|i| format!("s_{i}")));

    let mut edges: Vec<(String, String)> = Vec::new();
    let mut e = |u: String, v: String| edges.push((u, v));
    let s = |x: &str| x.to_string();
    // Central square and its neighbours.
    e(s("b_1"), s("a_0"));
    e(s("a_0"), s("a_1"));
    e(s("a_1"), s("b_0"));
    e(s("b_0"), s("b_1"));
    e(s("b_1"), s("b_2"));
    e(s("b_2"), s("a_1"));
    e(s("c"), s("b_1"));
    e(s("c"), s("a_1"));
    // Right fan.
    for i in 1..=d - 2 {
        e(s("a_0"), format!("t_{i}"));
        e(s("b_0"), format!("t_{i}"));
        e(format!("t_{i}"), format!("b_{}", i + 2));
    }
    for j in 2..d {
        e(format!("b_{j}"), format!("b_{}", j + 1));
    }
    // Left fan.
    for i in 1..=d - 2 {
        e(s("a_0"), format!("s_{i}"));
        e(s("b_0"), format!("s_{i}"));
        e(format!("s_{i}"), format!("a_{}", i + 2));
    }
    e(s("a_3"), s("b_2"));
    for j in 3..d {
        e(format!("a_{j}"), format!("a_{}", j + 1));
    }
    DefiningGraph::new(&vertices, &edges)
}

/// The right half of `Ω_{p+1}`: the central square, `b_2 … b_p` and
/// `t_1 … t_{p−1}`.
pub fn gamma(p: usize) -> Result<DefiningGraph> {
    if p < 2 {
        return Err(Error::param("p", "must be at least 2"));
    }
    let host = omega(p + 1)?;
    Ok(host.induced(gamma_vertices(&host, p)?))
}

/// Vertex set of the right-half subgraph `Γ_p` inside an `Ω_d`.
pub fn gamma_vertices(omega: &DefiningGraph, p: usize) -> Result<VertexSet> {
    let mut names: Vec<String> = ["a_0", "a_1", "b_0", "b_1"].map(String::from).to_vec();
    names.extend((2..=p).map(|j| format!("b_{j}")));
    names.extend((1..p).map(|i| format!("t_{i}")));
    names.iter().map(|n| omega.vertex(n)).collect()
}

/// `H_d^m`: generated by `c, a_m, b_m` for `m ≥ 3`, by `c, s_1, t_1` for
/// `m = 2`.
pub fn named_subgroup(omega: &DefiningGraph, d: usize, m: usize) -> Result<FinGenSubgroup> {
    if d < 3 {
        return Err(Error::param("d", "must be at least 3"));
    }
    if !(2..=d).contains(&m) {
        return Err(Error::param("m", format!("must lie in 2..={d}")));
    }
    let gens = if m == 2 {
        vec!["c".to_string(), "s_1".into(), "t_1".into()]
    } else {
        vec!["c".to_string(), format!("a_{m}"), format!("b_{m}")]
    };
    FinGenSubgroup::from_words(omega, &gens)
}

/// Kills every letter outside `keep`. A homomorphism because `keep`
/// spans an induced subgraph.
pub fn retraction(graph: &DefiningGraph, keep: VertexSet, letters: &[crate::graph::Vertex]) -> NormalForm {
    let kept: Vec<_> = letters.iter().copied().filter(|&v| keep.contains(v)).collect();
    graph.normalize(&kept)
}
