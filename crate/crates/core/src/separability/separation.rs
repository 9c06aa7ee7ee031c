use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{LevelView, NodeId};

/// Default largest level the exhaustive search will enumerate (2^24 subsets).
pub const DEFAULT_LEVEL_CAP: usize = 24;
/// Subsets are enumerated as `u64` masks, so no cap can exceed this.
pub const MAX_LEVEL_CAP: usize = 63;

/// Which half of a level partition a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    First,
    Second,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::First => Part::Second,
            Part::Second => Part::First,
        }
    }

    /// 1 or 2, matching the usual `S_{i,1}` / `S_{i,2}` naming.
    pub fn index(self) -> u8 {
        match self {
            Part::First => 1,
            Part::Second => 2,
        }
    }
}

/// Partition `(first, second)` of one level's nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LevelPartition {
    pub first: Vec<NodeId>,
    pub second: Vec<NodeId>,
}

/// A candidate level separation: one partition per level `1..=D-1`.
///
/// Level 0 holds only the source and level `D` has no sons, so neither is
/// partitioned.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Separation {
    parts: Vec<LevelPartition>,
}

impl Separation {
    /// Builds a separation from per-level `(first, second)` pairs, index 0
    /// being level 1. Node lists are sorted.
    pub fn new(parts: Vec<(Vec<NodeId>, Vec<NodeId>)>) -> Self {
        let parts = parts
            .into_iter()
            .map(|(mut first, mut second)| {
                first.sort_unstable();
                second.sort_unstable();
                LevelPartition { first, second }
            })
            .collect();
        Separation { parts }
    }

    /// Every level entirely in the first part (valid for trees).
    pub fn all_first(lv: &LevelView) -> Self {
        Self::new(
            (1..lv.eccentricity())
                .map(|i| (lv.bucket(i).to_vec(), Vec::new()))
                .collect(),
        )
    }

    /// Number of partitioned levels (`D - 1` for a well-formed separation).
    pub fn level_count(&self) -> usize {
        self.parts.len()
    }

    /// Partition of level `i` (1-based).
    pub fn level(&self, i: usize) -> Option<&LevelPartition> {
        i.checked_sub(1).and_then(|k| self.parts.get(k))
    }

    /// `(level, partition)` pairs in ascending level order.
    pub fn levels(&self) -> impl Iterator<Item = (usize, &LevelPartition)> {
        self.parts.iter().enumerate().map(|(k, p)| (k + 1, p))
    }

    /// Part of every node, `None` for nodes not mentioned.
    pub fn part_map(&self, node_count: usize) -> Vec<Option<Part>> {
        let mut map = vec![None; node_count];
        for part in &self.parts {
            for &u in &part.first {
                if u < node_count {
                    map[u] = Some(Part::First);
                }
            }
            for &u in &part.second {
                if u < node_count {
                    map[u] = Some(Part::Second);
                }
            }
        }
        map
    }

    pub fn part_of(&self, u: NodeId) -> Option<Part> {
        self.parts.iter().find_map(|p| {
            if p.first.contains(&u) {
                Some(Part::First)
            } else if p.second.contains(&u) {
                Some(Part::Second)
            } else {
                None
            }
        })
    }
}

/// Outcome of checking a well-formed separation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    /// `node` (at `level`) has neither exactly one parent in the first part
    /// nor exactly one in the second.
    Reject {
        node: NodeId,
        level: usize,
    },
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparationError {
    #[error("separation covers {found} level(s) but the graph needs {expected}")]
    LevelCountMismatch { expected: usize, found: usize },
    #[error("node {node} is in both parts of level {level}")]
    Overlap { level: usize, node: NodeId },
    #[error("node {node} of level {level} is in neither part")]
    Missing { level: usize, node: NodeId },
    #[error("node {node} listed at level {level} does not belong to that level")]
    Foreign { level: usize, node: NodeId },
    #[error("level {level} has {size} nodes, above the search cap of {cap}")]
    SearchInfeasible {
        level: usize,
        size: usize,
        cap: usize,
    },
}

fn validate(lv: &LevelView, sep: &Separation) -> Result<Vec<Option<Part>>, SeparationError> {
    let expected = lv.eccentricity().saturating_sub(1);
    if sep.level_count() != expected {
        return Err(SeparationError::LevelCountMismatch {
            expected,
            found: sep.level_count(),
        });
    }
    let mut map = vec![None; lv.node_count()];
    for (level, part) in sep.levels() {
        let tagged = part
            .first
            .iter()
            .map(|&u| (u, Part::First))
            .chain(part.second.iter().map(|&u| (u, Part::Second)));
        for (u, side) in tagged {
            if u >= lv.node_count() || lv.level(u) != level {
                return Err(SeparationError::Foreign { level, node: u });
            }
            if map[u].is_some() {
                return Err(SeparationError::Overlap { level, node: u });
            }
            map[u] = Some(side);
        }
        if let Some(&u) = lv.bucket(level).iter().find(|&&u| map[u].is_none()) {
            return Err(SeparationError::Missing { level, node: u });
        }
    }
    Ok(map)
}

/// Checks a separation against the level-separable property.
///
/// Linear in the size of the graph: every parent list is scanned once.
/// Malformed partitions are reported as errors, distinct from a rejection.
pub fn check_separation(lv: &LevelView, sep: &Separation) -> Result<Verdict, SeparationError> {
    let map = validate(lv, sep)?;
    for level in 2..=lv.eccentricity() {
        for &u in lv.bucket(level) {
            let (mut first, mut second) = (0usize, 0usize);
            for &p in lv.parents(u) {
                match map[p] {
                    Some(Part::First) => first += 1,
                    Some(Part::Second) => second += 1,
                    None => unreachable!("validated partitions cover every level 1..D-1"),
                }
            }
            if first != 1 && second != 1 {
                return Ok(Verdict::Reject { node: u, level });
            }
        }
    }
    Ok(Verdict::Accept)
}

/// Exhaustive search with [`DEFAULT_LEVEL_CAP`].
pub fn find_separation(lv: &LevelView) -> Result<Option<Separation>, SeparationError> {
    find_separation_with_cap(lv, DEFAULT_LEVEL_CAP)
}

/// Searches every level independently for the first valid first-part subset.
///
/// Within a level, node `bucket[j]` is bit `j` and masks are tried in
/// ascending order, so the result is deterministic. Returns `Ok(None)` as soon
/// as any level provably has no valid partition, even if another level is over
/// the cap; returns [`SeparationError::SearchInfeasible`] only when no level is
/// refuted but some level could not be searched.
pub fn find_separation_with_cap(
    lv: &LevelView,
    cap: usize,
) -> Result<Option<Separation>, SeparationError> {
    let cap = cap.min(MAX_LEVEL_CAP);
    let mut parts = Vec::new();
    let mut infeasible = None;
    for level in 1..lv.eccentricity() {
        let bucket = lv.bucket(level);
        if bucket.len() > cap {
            infeasible.get_or_insert(SeparationError::SearchInfeasible {
                level,
                size: bucket.len(),
                cap,
            });
            parts.push((Vec::new(), Vec::new()));
            continue;
        }
        match search_level(lv, level) {
            Some(mask) => parts.push(split_by_mask(bucket, mask)),
            None => return Ok(None),
        }
    }
    match infeasible {
        Some(err) => Err(err),
        None => Ok(Some(Separation::new(parts))),
    }
}

/// First mask over `bucket(level)` under which every son has exactly one
/// parent in one of the two parts.
fn search_level(lv: &LevelView, level: usize) -> Option<u64> {
    let bucket = lv.bucket(level);
    // Parent sets of the next level as bitmasks over this level's positions.
    let mut constraints: Vec<u64> = lv
        .bucket(level + 1)
        .iter()
        .map(|&u| {
            lv.parents(u).iter().fold(0u64, |acc, p| {
                let pos = bucket.binary_search(p).expect("parents sit one level up");
                acc | (1 << pos)
            })
        })
        .collect();
    constraints.sort_unstable();
    constraints.dedup();

    let limit = 1u64 << bucket.len();
    (0..limit).find(|&mask| {
        constraints.iter().all(|&parents| {
            (parents & mask).count_ones() == 1 || (parents & !mask).count_ones() == 1
        })
    })
}

fn split_by_mask(bucket: &[NodeId], mask: u64) -> (Vec<NodeId>, Vec<NodeId>) {
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (j, &u) in bucket.iter().enumerate() {
        if mask & (1 << j) != 0 {
            first.push(u);
        } else {
            second.push(u);
        }
    }
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, compute_levels};

    // s=0, a=1, b=2, c=3
    fn diamond() -> LevelView {
        compute_levels(&build_graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0).unwrap())
    }

    fn p4() -> LevelView {
        compute_levels(&build_graph(4, &[(0, 1), (1, 2), (2, 3)], 0).unwrap())
    }

    #[test]
    fn tree_accepts_all_first() {
        let g = build_graph(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6)], 0).unwrap();
        let lv = compute_levels(&g);
        let sep = Separation::all_first(&lv);
        assert_eq!(check_separation(&lv, &sep), Ok(Verdict::Accept));
    }

    #[test]
    fn path_accepts_all_second() {
        let lv = p4();
        let sep = Separation::new(vec![(vec![], vec![1]), (vec![], vec![2])]);
        assert_eq!(check_separation(&lv, &sep), Ok(Verdict::Accept));
    }

    #[test]
    fn diamond_with_both_first_is_rejected_at_c() {
        let lv = diamond();
        let sep = Separation::new(vec![(vec![1, 2], vec![])]);
        assert_eq!(
            check_separation(&lv, &sep),
            Ok(Verdict::Reject { node: 3, level: 2 })
        );
    }

    #[test]
    fn malformed_partitions_are_errors() {
        let lv = diamond();
        assert_eq!(
            check_separation(&lv, &Separation::new(vec![(vec![1], vec![1, 2])])),
            Err(SeparationError::Overlap { level: 1, node: 1 })
        );
        assert_eq!(
            check_separation(&lv, &Separation::new(vec![(vec![1], vec![])])),
            Err(SeparationError::Missing { level: 1, node: 2 })
        );
        assert_eq!(
            check_separation(&lv, &Separation::new(vec![(vec![1, 2, 3], vec![])])),
            Err(SeparationError::Foreign { level: 1, node: 3 })
        );
        assert_eq!(
            check_separation(&lv, &Separation::new(vec![])),
            Err(SeparationError::LevelCountMismatch {
                expected: 1,
                found: 0
            })
        );
    }

    #[test]
    fn diamond_search_picks_a() {
        // Masks over {a, b}: 00 fails (c has two second-part parents), 01 = {a} works.
        let sep = find_separation(&diamond()).unwrap().unwrap();
        assert_eq!(sep.level(1).unwrap().first, vec![1]);
        assert_eq!(sep.level(1).unwrap().second, vec![2]);
    }

    #[test]
    fn shallow_graphs_need_no_partition() {
        let star = compute_levels(&build_graph(3, &[(0, 1), (0, 2)], 0).unwrap());
        let sep = find_separation(&star).unwrap().unwrap();
        assert_eq!(sep.level_count(), 0);
        assert_eq!(check_separation(&star, &sep), Ok(Verdict::Accept));
    }

    #[test]
    fn odd_cycle_of_shared_parents_is_not_separable() {
        // Level 1 = {1,2,3}; sons: 4<-{1,2,3}, 5<-{1,2}, 6<-{2,3}, 7<-{1,3}.
        let edges = [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 4),
            (2, 4),
            (3, 4),
            (1, 5),
            (2, 5),
            (2, 6),
            (3, 6),
            (1, 7),
            (3, 7),
        ];
        let lv = compute_levels(&build_graph(8, &edges, 0).unwrap());
        // Exhaustive reasoning: 5,6,7 force every pair {1,2},{2,3},{1,3} to be split,
        // impossible with two parts.
        assert_eq!(find_separation(&lv), Ok(None));
    }

    #[test]
    fn cap_is_reported_separately_from_non_separability() {
        let edges: Vec<_> = (1..=5).map(|i| (0, i)).chain([(1, 6)]).collect();
        let lv = compute_levels(&build_graph(7, &edges, 0).unwrap());
        assert_eq!(
            find_separation_with_cap(&lv, 4),
            Err(SeparationError::SearchInfeasible {
                level: 1,
                size: 5,
                cap: 4
            })
        );
        assert!(find_separation_with_cap(&lv, 5).unwrap().is_some());
    }
}
