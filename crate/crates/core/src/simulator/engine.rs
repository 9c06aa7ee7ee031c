use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, NodeId};
use crate::labelling::{LabelSet, Scheme};
use crate::protocols::{Message, MessageKind, NodeState, Protocol};
use crate::Round;

/// What one node experiences in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reception {
    /// The node transmitted and therefore heard nothing.
    Transmitting,
    /// No neighbour transmitted.
    Silence,
    /// Exactly one neighbour transmitted.
    Received { from: NodeId, message: Message },
    /// Two or more neighbours transmitted; nothing is heard.
    Collision { senders: Vec<NodeId> },
}

/// Collision-model delivery: each node hears a message iff it is silent and
/// exactly one neighbour transmits.
pub fn resolve_round_detailed(g: &Graph, outgoing: &[Option<Message>]) -> Vec<Reception> {
    g.nodes()
        .map(|u| {
            if outgoing[u].is_some() {
                return Reception::Transmitting;
            }
            let senders: Vec<NodeId> = g
                .adjacent(u)
                .iter()
                .copied()
                .filter(|&v| outgoing[v].is_some())
                .collect();
            match senders.as_slice() {
                [] => Reception::Silence,
                &[from] => Reception::Received {
                    from,
                    message: outgoing[from].clone().expect("sender transmits"),
                },
                _ => Reception::Collision { senders },
            }
        })
        .collect()
}

/// Messages heard in one round, indexed by node.
pub fn resolve_round(g: &Graph, outgoing: &[Option<Message>]) -> Vec<Option<Message>> {
    resolve_round_detailed(g, outgoing)
        .into_iter()
        .map(|r| match r {
            Reception::Received { message, .. } => Some(message),
            _ => None,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub max_rounds: Round,
    /// Silent rounds (with nothing scheduled) after which an informed network
    /// is considered finished.
    pub quiescence_window: Round,
}

impl SimConfig {
    /// Generous defaults for `g`: every protocol finishes well inside `4n + 16`.
    pub fn for_graph(g: &Graph) -> Self {
        SimConfig {
            max_rounds: 4 * g.node_count() as Round + 16,
            quiescence_window: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("protocol {protocol} expects {expected} labels, got {found}")]
    SchemeMismatch {
        protocol: Protocol,
        expected: Scheme,
        found: Scheme,
    },
    #[error("{labels} labels for {nodes} nodes")]
    LabelCount { labels: usize, nodes: usize },
    #[error("max_rounds {given} is below the minimum {minimum} (2n)")]
    TooFewRounds { given: Round, minimum: Round },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundEvent {
    pub round: Round,
    /// Who transmitted what, ascending by node.
    pub transmissions: Vec<(NodeId, MessageKind)>,
    /// Clean receptions: receiver, sender, kind.
    pub receptions: Vec<(NodeId, NodeId, MessageKind)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionEvent {
    pub round: Round,
    pub node: NodeId,
    pub senders: Vec<NodeId>,
    /// Whether the node already held the payload when the collision happened.
    pub receiver_informed: bool,
}

/// A Data message whose payload differs from the source's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayloadViolation {
    pub round: Round,
    pub node: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub protocol: Protocol,
    pub node_count: usize,
    pub source: NodeId,
    pub rounds: Vec<RoundEvent>,
    /// First round each node heard Data; `None` for the source and for nodes
    /// never informed.
    pub first_receipt: Vec<Option<Round>>,
    /// First round the source heard an Ack.
    pub ack_arrival: Option<Round>,
    /// Last round with any transmission.
    pub termination_round: Option<Round>,
    pub collisions: Vec<CollisionEvent>,
    pub payload_violations: Vec<PayloadViolation>,
    /// Every node ended up with the payload.
    pub completed: bool,
    /// Rounds actually simulated.
    pub rounds_run: Round,
}

impl Trace {
    pub fn informed(&self, u: NodeId) -> bool {
        u == self.source || self.first_receipt[u].is_some()
    }

    /// Whether `u` held the payload at the start of round `r`.
    pub fn informed_before(&self, u: NodeId, r: Round) -> bool {
        u == self.source || self.first_receipt[u].is_some_and(|t| t < r)
    }

    pub fn last_first_receipt(&self) -> Option<Round> {
        self.first_receipt.iter().flatten().copied().max()
    }

    pub fn transmissions_at(&self, r: Round) -> &[(NodeId, MessageKind)] {
        self.rounds
            .get(r as usize)
            .map(|e| e.transmissions.as_slice())
            .unwrap_or(&[])
    }
}

pub fn run_simulation(
    g: &Graph,
    labels: &LabelSet,
    protocol: Protocol,
    payload: &[u8],
    config: SimConfig,
) -> Result<Trace, SimError> {
    let n = g.node_count();
    if labels.scheme() != protocol.expected_scheme() {
        return Err(SimError::SchemeMismatch {
            protocol,
            expected: protocol.expected_scheme(),
            found: labels.scheme(),
        });
    }
    if labels.len() != n {
        return Err(SimError::LabelCount {
            labels: labels.len(),
            nodes: n,
        });
    }
    let minimum = 2 * n as Round;
    if config.max_rounds < minimum {
        return Err(SimError::TooFewRounds {
            given: config.max_rounds,
            minimum,
        });
    }

    let source = g.source();
    let mut states: Vec<NodeState> = g
        .nodes()
        .map(|u| {
            if u == source {
                NodeState::source(labels.get(u), payload)
            } else {
                NodeState::relay(labels.get(u))
            }
        })
        .collect();
    let mut inbox: Vec<Option<Message>> = vec![None; n];
    let mut trace = Trace {
        protocol,
        node_count: n,
        source,
        rounds: Vec::new(),
        first_receipt: vec![None; n],
        ack_arrival: None,
        termination_round: None,
        collisions: Vec::new(),
        payload_violations: Vec::new(),
        completed: false,
        rounds_run: 0,
    };
    let mut informed = 1usize;
    let mut silent_streak: Round = 0;

    for round in 0..config.max_rounds {
        let mut outgoing = Vec::with_capacity(n);
        let stepped: Vec<NodeState> = states
            .into_iter()
            .zip(&inbox)
            .map(|(st, msg)| {
                let (next, out) = protocol.step(st, round, msg.as_ref());
                outgoing.push(out.0);
                next
            })
            .collect();
        states = stepped;

        let mut event = RoundEvent {
            round,
            transmissions: outgoing
                .iter()
                .enumerate()
                .filter_map(|(u, m)| m.as_ref().map(|m| (u, m.kind)))
                .collect(),
            receptions: Vec::new(),
        };

        let receptions = resolve_round_detailed(g, &outgoing);
        for (u, rec) in receptions.into_iter().enumerate() {
            inbox[u] = match rec {
                Reception::Received { from, message } => {
                    event.receptions.push((u, from, message.kind));
                    if message.kind == MessageKind::Data {
                        if message.payload != payload {
                            trace
                                .payload_violations
                                .push(PayloadViolation { round, node: u });
                        }
                        if u != source && trace.first_receipt[u].is_none() {
                            trace.first_receipt[u] = Some(round);
                            informed += 1;
                        }
                    }
                    if message.kind == MessageKind::Ack
                        && u == source
                        && trace.ack_arrival.is_none()
                    {
                        trace.ack_arrival = Some(round);
                    }
                    Some(message)
                }
                Reception::Collision { senders } => {
                    trace.collisions.push(CollisionEvent {
                        round,
                        node: u,
                        senders,
                        receiver_informed: trace.informed_before(u, round),
                    });
                    None
                }
                Reception::Transmitting | Reception::Silence => None,
            };
        }

        if event.transmissions.is_empty() {
            silent_streak += 1;
        } else {
            silent_streak = 0;
            trace.termination_round = Some(round);
        }
        trace.rounds.push(event);
        trace.rounds_run = round + 1;

        let idle = !states.iter().any(NodeState::has_pending);
        if informed == n && idle && silent_streak >= config.quiescence_window {
            break;
        }
    }
    trace.completed = informed == n;
    Ok(trace)
}
