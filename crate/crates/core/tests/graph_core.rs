mod common;

use std::collections::HashMap;

use common::*;
use proptest::prelude::*;
use racg_core::families::{gamma, gamma_vertices, omega};
use racg_core::{DefiningGraph, JoinWitness, Vertex, VertexSet};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = DefiningGraph> {
    (1usize..=max_n, any::<u64>()).prop_map(|(n, mask)| graph_from_mask(n, mask & ((1u64 << (n * (n - 1) / 2)) - 1)))
}

fn brute_is_join(g: &DefiningGraph, set: VertexSet) -> bool {
    let members: Vec<Vertex> = set.iter().collect();
    if members.len() < 2 {
        return false;
    }
    (1u64..1 << members.len()).any(|m| {
        let left: VertexSet = members.iter().enumerate().filter(|(b, _)| m >> b & 1 == 1).map(|(_, &v)| v).collect();
        let right = set.difference(left);
        !right.is_empty() && left.iter().all(|u| right.is_subset(g.link(u)))
    })
}

/// Naive recursion on the rank definition.
fn brute_rank_at_least(g: &DefiningGraph, s: Vertex, t: Vertex, k: usize, memo: &mut HashMap<(Vertex, Vertex, usize), bool>) -> bool {
    if let Some(&r) = memo.get(&(s, t, k)) {
        return r;
    }
    let r = if k == 1 {
        let pair: VertexSet = [s, t].into_iter().collect();
        !brute_four_cycles(g).iter().any(|q| {
            pair.is_subset(*q) && {
                // s, t opposite in the cycle: not adjacent.
                !g.adjacent(s, t)
            }
        })
    } else {
        [s, t].into_iter().any(|v| {
            let lk: Vec<Vertex> = g.link(v).iter().collect();
            let mut ok = true;
            for (i, &x) in lk.iter().enumerate() {
                for &y in &lk[i + 1..] {
                    if !g.adjacent(x, y) && !brute_rank_at_least(g, x, y, k - 1, memo) {
                        ok = false;
                    }
                }
            }
            ok
        })
    };
    memo.insert((s, t, k), r);
    r
}

#[test]
fn contained_in_join_exhaustive_small_graphs() {
    for n in 1..=5 {
        for g in graphs_up_to_iso(n) {
            for set in subsets(&g).filter(|s| !s.is_empty()) {
                let got = g.contained_in_join(set).unwrap();
                assert_eq!(got.is_some(), brute_contained_in_join(&g, set), "{:?} {:?}", g.to_doc(), set);
                match got {
                    Some(JoinWitness::Split(a, b)) => {
                        assert!(set.is_subset(a.union(b)));
                        assert!(!a.is_empty() && !b.is_empty());
                        assert!(a.iter().all(|u| b.is_subset(g.link(u))));
                    }
                    Some(JoinWitness::Cone(v)) => assert!(set.is_subset(g.link(v))),
                    None => {}
                }
                let star = g.contained_in_star(set).unwrap();
                assert_eq!(star.is_some(), brute_contained_in_star(&g, set));
                if let Some(v) = star {
                    assert!(set.is_subset(g.star(v)));
                }
            }
        }
    }
}

#[test]
fn empty_sets_are_rejected() {
    let g = square();
    assert!(g.contained_in_join(VertexSet::empty()).is_err());
    assert!(g.contained_in_star(VertexSet::empty()).is_err());
}

#[test]
fn joins_exhaustive_small_graphs() {
    for n in 1..=5 {
        for g in graphs_up_to_iso(n) {
            assert_eq!(g.is_join(), brute_is_join(&g, g.all()));
            for set in subsets(&g).filter(|s| !s.is_empty()) {
                let d = g.join_decomposition(set).unwrap();
                assert_eq!(d.is_some(), brute_is_join(&g, set));
                if let Some((a, b)) = d {
                    assert_eq!(a.union(b), set);
                    assert!(a.iter().all(|u| b.is_subset(g.link(u))));
                }
            }
        }
    }
}

#[test]
fn omega_rank_lemma() {
    for d in 3..=5 {
        let g = omega(d).unwrap();
        assert_eq!(g.len(), 4 * d - 2);
        let v = |n: String| g.vertex(&n).unwrap();
        for m in 3..=d {
            for (s, t) in [
                (format!("a_{m}"), format!("b_{m}")),
                (format!("a_{m}"), "c".to_string()),
                (format!("b_{m}"), "c".to_string()),
            ] {
                let r = g.rank_of_pair(v(s.clone()), v(t.clone()), d + 2).unwrap();
                assert!(r.rank >= m - 1, "d={d} ({s},{t}) rank {}", r.rank);
            }
        }
    }
}

#[test]
fn gamma_embeds_in_every_larger_omega() {
    for p in 2..=4 {
        let small = gamma(p).unwrap();
        for d in p + 1..=p + 3 {
            let host = omega(d).unwrap();
            let induced = host.induced(gamma_vertices(&host, p).unwrap());
            assert_eq!(induced.to_doc().vertices, small.to_doc().vertices);
            assert_eq!(induced.to_doc().edges, small.to_doc().edges);
        }
    }
}

#[test]
fn rank_is_undefined_on_adjacent_pairs() {
    let g = square();
    let (a, b) = (g.vertex("a").unwrap(), g.vertex("b").unwrap());
    assert!(g.rank_of_pair(a, b, 3).is_err());
    assert!(g.rank_of_pair(a, a, 3).is_err());
    assert!(g.rank_of_pair(a, g.vertex("c").unwrap(), 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn four_cycles_match_brute_force(g in graph_strategy(7)) {
        let mut got: Vec<VertexSet> = g.four_cycles().iter().map(|c| c.vertices()).collect();
        got.sort();
        prop_assert_eq!(got, brute_four_cycles(&g));
        for c in g.four_cycles() {
            for (u, v) in c.diagonals {
                prop_assert!(u < v && !g.adjacent(u, v));
                prop_assert!(g.in_four_cycle(u, v));
            }
        }
    }

    #[test]
    fn four_cycle_graph_components(g in graph_strategy(7)) {
        let g4 = g.four_cycle_graph();
        for i in 0..g4.cycles.len() {
            for j in 0..g4.cycles.len() {
                if g4.cycles[i].shared_diagonal(&g4.cycles[j]).is_some() {
                    prop_assert_eq!(g4.component_of[i], g4.component_of[j]);
                }
            }
        }
        for (c, members) in g4.components.iter().enumerate() {
            let support = members.iter().fold(VertexSet::empty(), |acc, &i| acc.union(g4.cycles[i].vertices()));
            prop_assert_eq!(support, g4.supports[c]);
            for &i in members {
                let path = g4.shortest_path(members[0], i).unwrap();
                prop_assert_eq!(path[0], members[0]);
                prop_assert_eq!(*path.last().unwrap(), i);
                for w in path.windows(2) {
                    prop_assert!(g4.cycles[w[0]].shared_diagonal(&g4.cycles[w[1]]).is_some());
                }
            }
        }
        prop_assert_eq!(g.is_cfs(), g4.supports.iter().any(|&s| s == g.all()));
    }

    #[test]
    fn distances_match_floyd(g in graph_strategy(7)) {
        let n = g.len();
        let mut d = vec![vec![usize::MAX / 2; n]; n];
        for i in 0..n { d[i][i] = 0; }
        for (u, v) in g.edges() {
            d[u.index()][v.index()] = 1;
            d[v.index()][u.index()] = 1;
        }
        for k in 0..n { for i in 0..n { for j in 0..n {
            d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
        }}}
        for u in g.vertices() {
            for v in g.vertices() {
                let expected = (d[u.index()][v.index()] < usize::MAX / 2).then_some(d[u.index()][v.index()]);
                prop_assert_eq!(g.distance(u, v), expected);
            }
        }
        prop_assert_eq!(g.is_connected(), g.components(g.all()).len() == 1);
    }

    #[test]
    fn rank_matches_recursion_and_is_monotone_in_cap(g in graph_strategy(6)) {
        let mut memo = HashMap::new();
        for s in g.vertices() {
            for t in g.vertices() {
                if s >= t || g.adjacent(s, t) { continue; }
                let full = g.rank_of_pair(s, t, 5).unwrap();
                let expected = (1..=5).filter(|&k| brute_rank_at_least(&g, s, t, k, &mut memo)).max().unwrap_or(0);
                prop_assert_eq!(full.rank, expected);
                prop_assert_eq!(full.at_cap, full.rank == 5);
                let mut last = 0;
                for cap in 1..=5 {
                    let r = g.rank_of_pair(s, t, cap).unwrap().rank;
                    prop_assert!(r >= last && r <= cap);
                    last = r;
                }
                prop_assert_eq!(g.rank_of_pair(t, s, 5).unwrap().rank, full.rank);
            }
        }
    }

    #[test]
    fn documents_round_trip(g in graph_strategy(7)) {
        let text = serde_json::to_string(&g.to_doc()).unwrap();
        let back = DefiningGraph::load(&text).unwrap();
        prop_assert_eq!(back.to_doc(), g.to_doc());
    }
}
