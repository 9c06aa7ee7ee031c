//! Undirected connected graphs with a designated broadcast source, and the
//! breadth-first level structure every other module is built on.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Dense node identifier in `0..node_count`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("a graph needs at least one node")]
    Empty,
    #[error("source {node} is out of range for {node_count} nodes")]
    SourceOutOfRange { node: NodeId, node_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{node_count}")]
    EndpointOutOfRange {
        u: NodeId,
        v: NodeId,
        node_count: usize,
    },
    #[error("graph is disconnected: {} node(s) unreachable from the source (first: {})", unreachable.len(), unreachable[0])]
    Disconnected { unreachable: Vec<NodeId> },
    #[error("node {node} is out of range for {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
}

/// A validated, connected, simple undirected graph with a broadcast source.
///
/// Adjacency lists are sorted ascending and edges are stored once with the
/// smaller endpoint first, so every iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
    source: NodeId,
}

impl Graph {
    pub fn new<I>(node_count: usize, edges: I, source: NodeId) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        if source >= node_count {
            return Err(GraphError::SourceOutOfRange {
                node: source,
                node_count,
            });
        }
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(GraphError::EndpointOutOfRange { u, v, node_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();

        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let graph = Graph {
            adjacency,
            edges: normalized,
            source,
        };
        let unreachable = graph.unreachable_from_source();
        if !unreachable.is_empty() {
            return Err(GraphError::Disconnected { unreachable });
        }
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    /// Edges with the smaller endpoint first, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn nodes(&self) -> core::ops::Range<NodeId> {
        0..self.node_count()
    }

    /// Neighbour set `d(u)`, sorted ascending.
    pub fn neighbors(&self, u: NodeId) -> Result<&[NodeId], GraphError> {
        self.adjacency
            .get(u)
            .map(Vec::as_slice)
            .ok_or(GraphError::NodeOutOfRange {
                node: u,
                node_count: self.node_count(),
            })
    }

    /// Unchecked variant of [`Graph::neighbors`]; panics if `u` is out of range.
    pub fn adjacent(&self, u: NodeId) -> &[NodeId] {
        &self.adjacency[u]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Same topology rooted at a different source.
    pub fn with_source(&self, source: NodeId) -> Result<Self, GraphError> {
        Graph::new(self.node_count(), self.edges.iter().copied(), source)
    }

    fn unreachable_from_source(&self) -> Vec<NodeId> {
        let dist = bfs_distances(&self.adjacency, self.source);
        dist.iter()
            .enumerate()
            .filter(|(_, d)| d.is_none())
            .map(|(u, _)| u)
            .collect()
    }
}

/// Validates and normalizes an edge list into a [`Graph`].
pub fn build_graph(
    node_count: usize,
    edges: &[(NodeId, NodeId)],
    source: NodeId,
) -> Result<Graph, GraphError> {
    Graph::new(node_count, edges.iter().copied(), source)
}

fn bfs_distances(adjacency: &[Vec<NodeId>], source: NodeId) -> Vec<Option<usize>> {
    let mut dist = vec![None; adjacency.len()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let next = dist[u].map(|d| d + 1);
        for &v in &adjacency[u] {
            if dist[v].is_none() {
                dist[v] = next;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Breadth-first level structure of a graph seen from its source.
///
/// `level(u)` is the hop distance from the source, `bucket(i)` the nodes at
/// level `i`, and parents/sons are neighbours exactly one level closer/further.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelView {
    source: NodeId,
    level: Vec<usize>,
    buckets: Vec<Vec<NodeId>>,
    parents: Vec<Vec<NodeId>>,
    sons: Vec<Vec<NodeId>>,
}

impl LevelView {
    pub fn node_count(&self) -> usize {
        self.level.len()
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn level(&self, u: NodeId) -> usize {
        self.level[u]
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    /// Eccentricity `D` of the source.
    pub fn eccentricity(&self) -> usize {
        self.buckets.len() - 1
    }

    /// Nodes at level `i`, ascending; empty past the eccentricity.
    pub fn bucket(&self, i: usize) -> &[NodeId] {
        self.buckets.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn buckets(&self) -> &[Vec<NodeId>] {
        &self.buckets
    }

    pub fn parents(&self, u: NodeId) -> &[NodeId] {
        &self.parents[u]
    }

    pub fn sons(&self, u: NodeId) -> &[NodeId] {
        &self.sons[u]
    }
}

pub fn compute_levels(g: &Graph) -> LevelView {
    let level: Vec<usize> = bfs_distances(&g.adjacency, g.source)
        .into_iter()
        .map(|d| d.expect("graphs are connected by construction"))
        .collect();
    let depth = level.iter().copied().max().unwrap_or(0);

    let mut buckets = vec![Vec::new(); depth + 1];
    let mut parents = vec![Vec::new(); g.node_count()];
    let mut sons = vec![Vec::new(); g.node_count()];
    for u in g.nodes() {
        buckets[level[u]].push(u);
        for &v in g.adjacent(u) {
            if level[v] == level[u] + 1 {
                sons[u].push(v);
                parents[v].push(u);
            }
        }
    }
    // parents[v] is filled in ascending u order already; sons follow adjacency order.
    LevelView {
        source: g.source,
        level,
        buckets,
        parents,
        sons,
    }
}
