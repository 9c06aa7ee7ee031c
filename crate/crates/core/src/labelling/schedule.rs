use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, NodeId};
use crate::Round;

/// Offline run of the frontier / dominating-set broadcast schedule.
///
/// Stage `j` transmits at round `2j`; the odd round in between carries the
/// Stay notifications that keep a dominator transmitting. Histories are indexed
/// by stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroadcastSchedule {
    /// Round at whose end each node first holds the message; `-1` for the source.
    pub informed_round: Vec<i64>,
    /// The unique transmitter a node first heard the message from.
    pub informer: Vec<Option<NodeId>>,
    /// Rounds in which each node transmits the message.
    pub transmit_rounds: Vec<Vec<Round>>,
    /// Uninformed nodes adjacent to informed ones, before each stage.
    pub frontier_history: Vec<Vec<NodeId>>,
    /// Transmitting set of each stage; it dominates that stage's frontier.
    pub dominator_history: Vec<Vec<NodeId>>,
    /// Nodes sending Stay in round `2j - 1` for stage `j` (empty for stage 0).
    pub stay_history: Vec<Vec<NodeId>>,
}

impl BroadcastSchedule {
    pub fn stage_count(&self) -> usize {
        self.dominator_history.len()
    }

    /// Latest first-receipt round over non-source nodes, `-1` if there are none.
    pub fn last_informed_round(&self) -> i64 {
        self.informed_round.iter().copied().max().unwrap_or(-1)
    }

    /// Nodes that transmit the message at least once, the source excluded.
    pub fn relays(&self, source: NodeId) -> Vec<NodeId> {
        (0..self.transmit_rounds.len())
            .filter(|&u| u != source && !self.transmit_rounds[u].is_empty())
            .collect()
    }

    pub fn stay_senders(&self) -> Vec<NodeId> {
        let mut all: Vec<NodeId> = self.stay_history.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

/// Greedy choice in ascending id (keep a candidate iff it covers a frontier
/// node nobody chosen so far covers), then one pruning pass dropping every
/// member whose frontier neighbours are all covered twice. The result is
/// minimal by inclusion, so every member has a private frontier neighbour.
fn minimal_dominators(g: &Graph, candidates: &[NodeId], frontier: &[NodeId]) -> Vec<NodeId> {
    let mut in_frontier = vec![false; g.node_count()];
    for &f in frontier {
        in_frontier[f] = true;
    }
    let mut cover = vec![0usize; g.node_count()];
    let frontier_nbrs = |c: NodeId| g.adjacent(c).iter().copied().filter(|&f| in_frontier[f]);

    let mut chosen = Vec::new();
    for &c in candidates {
        if frontier_nbrs(c).any(|f| cover[f] == 0) {
            for f in frontier_nbrs(c) {
                cover[f] += 1;
            }
            chosen.push(c);
        }
    }
    debug_assert!(
        frontier.iter().all(|&f| cover[f] > 0),
        "candidates dominate the frontier"
    );

    chosen.retain(|&c| {
        if frontier_nbrs(c).all(|f| cover[f] >= 2) {
            for f in frontier_nbrs(c) {
                cover[f] -= 1;
            }
            false
        } else {
            true
        }
    });
    chosen
}

pub fn compute_beta_schedule(g: &Graph) -> BroadcastSchedule {
    let n = g.node_count();
    let source = g.source();
    let mut informed_round: Vec<Option<i64>> = vec![None; n];
    let mut informer = vec![None; n];
    let mut transmit_rounds = vec![Vec::new(); n];
    let mut frontier_history = Vec::new();
    let mut dominator_history = Vec::new();
    let mut stay_history = Vec::new();
    informed_round[source] = Some(-1);

    let mut transmitters: Vec<NodeId> = Vec::new();
    let mut newly: Vec<NodeId> = vec![source];
    let mut stage: Round = 0;
    loop {
        let frontier: Vec<NodeId> = g
            .nodes()
            .filter(|&u| {
                informed_round[u].is_none()
                    && g.adjacent(u).iter().any(|&v| informed_round[v].is_some())
            })
            .collect();
        if frontier.is_empty() {
            break;
        }

        let mut candidates: Vec<NodeId> = newly.iter().chain(&transmitters).copied().collect();
        candidates.sort_unstable();
        candidates.dedup();
        let dominators = if stage == 0 {
            vec![source]
        } else {
            minimal_dominators(g, &candidates, &frontier)
        };

        let round = 2 * stage;
        let mut in_dominators = vec![false; n];
        for &d in &dominators {
            in_dominators[d] = true;
            transmit_rounds[d].push(round);
        }
        let mut reached = Vec::new();
        for &f in &frontier {
            let mut senders = g.adjacent(f).iter().filter(|&&v| in_dominators[v]);
            if let (Some(&only), None) = (senders.next(), senders.next()) {
                reached.push((f, only));
            }
        }
        for &(f, from) in &reached {
            informed_round[f] = Some(round as i64);
            informer[f] = Some(from);
        }

        // A dominator kept from the previous stage needs exactly one Stay: the
        // smallest son it informed last stage. Those sons hear no other
        // transmitter of that stage, so their Stay reaches only their informer.
        let stays: Vec<NodeId> = dominators
            .iter()
            .filter(|d| transmitters.contains(d))
            .filter_map(|&d| newly.iter().copied().find(|&v| informer[v] == Some(d)))
            .collect();
        debug_assert_eq!(
            stays.len(),
            dominators
                .iter()
                .filter(|d| transmitters.contains(d))
                .count(),
            "every retained dominator informed someone"
        );

        frontier_history.push(frontier);
        dominator_history.push(dominators.clone());
        stay_history.push(stays);

        transmitters = dominators;
        newly = reached.into_iter().map(|(f, _)| f).collect();
        stage += 1;
        if newly.is_empty() {
            debug_assert!(false, "a minimal dominating set always informs someone");
            break;
        }
    }

    BroadcastSchedule {
        informed_round: informed_round
            .into_iter()
            .map(|r| r.expect("connected graphs are fully informed"))
            .collect(),
        informer,
        transmit_rounds,
        frontier_history,
        dominator_history,
        stay_history,
    }
}
