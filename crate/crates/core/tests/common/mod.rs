//! Strategies and independent oracles shared by the integration tests.
#![allow(dead_code)]

use labelcast_core::graph::{build_graph, Graph, NodeId};
use proptest::prelude::*;
use proptest::sample::Index;

/// Random connected graph: a random tree plus extra random edges, with a
/// random source.
pub fn connected_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            proptest::collection::vec(any::<Index>(), n - 1),
            proptest::collection::vec((0..n, 0..n), 0..=max_extra),
            0..n,
        )
            .prop_map(move |(parents, extra, source)| {
                let mut edges: Vec<(NodeId, NodeId)> = parents
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (p.index(i + 1), i + 1))
                    .collect();
                edges.extend(extra.into_iter().filter(|(a, b)| a != b));
                build_graph(n, &edges, source).expect("tree edges keep it connected")
            })
    })
}

/// Random tree rooted at node 0.
pub fn tree(max_n: usize) -> impl Strategy<Value = Graph> {
    connected_graph(max_n, 0).prop_map(|g| g.with_source(0).unwrap())
}

/// Random tree plus extra edges that join nodes on equal or adjacent levels,
/// so levels are unchanged but nodes may gain parents.
pub fn layered_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = Graph> {
    (
        tree(max_n),
        proptest::collection::vec((any::<Index>(), any::<Index>()), 0..=max_extra),
    )
        .prop_map(|(g, extra)| {
            let n = g.node_count();
            let level = oracle_levels(&g);
            let mut edges = g.edges().to_vec();
            for (a, b) in extra {
                let (a, b) = (a.index(n), b.index(n));
                if a != b && level[a].abs_diff(level[b]) <= 1 {
                    edges.push((a, b));
                }
            }
            build_graph(n, &edges, g.source()).unwrap()
        })
}

/// Hop distances by repeated relaxation over the edge list (no queue).
pub fn oracle_levels(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut d = vec![usize::MAX; n];
    d[g.source()] = 0;
    loop {
        let mut changed = false;
        for &(a, b) in g.edges() {
            for (x, y) in [(a, b), (b, a)] {
                if d[x] != usize::MAX && d[x] + 1 < d[y] {
                    d[y] = d[x] + 1;
                    changed = true;
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

/// Direct evaluation of the level-separable condition for a given part
/// assignment (`true` = first part): every node at level >= 2 has exactly one
/// parent in the first part or exactly one in the second.
pub fn oracle_condition_holds(g: &Graph, in_first: &[bool]) -> bool {
    let level = oracle_levels(g);
    (0..g.node_count()).filter(|&u| level[u] >= 2).all(|u| {
        let parents = (0..g.node_count()).filter(|&p| level[p] + 1 == level[u] && g.has_edge(p, u));
        let (mut first, mut second) = (0, 0);
        for p in parents {
            if in_first[p] {
                first += 1;
            } else {
                second += 1;
            }
        }
        first == 1 || second == 1
    })
}

/// Existence of a separation by trying every colouring of all nodes.
pub fn oracle_separable(g: &Graph) -> bool {
    let n = g.node_count();
    assert!(n <= 16, "exhaustive oracle is for small graphs");
    (0u32..1 << n).any(|mask| {
        let in_first: Vec<bool> = (0..n).map(|u| mask >> u & 1 == 1).collect();
        oracle_condition_holds(g, &in_first)
    })
}

/// Truth of a formula's "exactly one literal per clause" by direct counting;
/// clauses use 1-based signed literals.
pub fn oracle_one_in_three(var_count: usize, clauses: &[[i32; 3]]) -> bool {
    (0u32..1 << var_count).any(|mask| {
        clauses.iter().all(|c| {
            c.iter()
                .filter(|&&lit| {
                    let v = (lit.unsigned_abs() - 1) as usize;
                    let value = mask >> v & 1 == 1;
                    if lit > 0 {
                        value
                    } else {
                        !value
                    }
                })
                .count()
                == 1
        })
    })
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build_graph(n, &edges, 0).unwrap()
}

pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    build_graph(leaves + 1, &edges, 0).unwrap()
}
