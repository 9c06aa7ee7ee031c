use alloc::vec::Vec;
use core::fmt;

use super::engine::Trace;
use crate::graph::{Graph, LevelView, NodeId};
use crate::protocols::{MessageKind, Protocol};
use crate::Round;

/// How strictly first receipts on level-separable graphs are checked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LevelTiming {
    /// Level-`i` nodes first hear the payload exactly in round `2i - 2`.
    #[default]
    Exact,
    /// Level-`i` nodes first hear it in round `2i - 3` or `2i - 2` (level 1 in round 0).
    Deadline,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Expectations {
    pub level_timing: LevelTiming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    AllInformed,
    PayloadIntact,
    /// Each first receipt comes from exactly one transmitting neighbour.
    FirstReceiptClean,
    /// No collision keeps an uninformed node from its deadline.
    NoHarmfulCollision,
    LevelTiming,
    /// Last Data transmission no later than `2D`.
    Termination,
    /// Every node informed by round `2n - 3`.
    InformBound,
    /// Ack reaches the source within `n` rounds of the last first receipt.
    AckBound,
    /// Ack reaches the source in exactly round `4 * floor(D/2)`, or never when
    /// the depth is too small for a chain.
    AckTiming,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::AllInformed => "all-informed",
            CheckKind::PayloadIntact => "payload-intact",
            CheckKind::FirstReceiptClean => "first-receipt-clean",
            CheckKind::NoHarmfulCollision => "no-harmful-collision",
            CheckKind::LevelTiming => "level-timing",
            CheckKind::Termination => "termination",
            CheckKind::InformBound => "inform-bound",
            CheckKind::AckBound => "ack-bound",
            CheckKind::AckTiming => "ack-timing",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Witness for a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Uninformed {
        node: NodeId,
    },
    PayloadMismatch {
        node: NodeId,
        round: Round,
    },
    UncleanReceipt {
        node: NodeId,
        round: Round,
        senders: usize,
    },
    HarmfulCollision {
        node: NodeId,
        round: Round,
    },
    FirstReceiptOffSchedule {
        node: NodeId,
        level: usize,
        round: Option<Round>,
        earliest: Round,
        latest: Round,
    },
    LateTransmission {
        round: Round,
        bound: Round,
    },
    LateInform {
        node: NodeId,
        round: Round,
        bound: Round,
    },
    AckMissing,
    AckOffSchedule {
        round: Round,
        expected: Round,
    },
    AckLate {
        round: Round,
        bound: Round,
    },
    UnexpectedAck {
        round: Round,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Uninformed { node } => write!(f, "node {node} never received the payload"),
            Violation::PayloadMismatch { node, round } => {
                write!(f, "node {node} heard a corrupted payload in round {round}")
            }
            Violation::UncleanReceipt { node, round, senders } => write!(
                f,
                "node {node} first receipt in round {round} had {senders} transmitting neighbours"
            ),
            Violation::HarmfulCollision { node, round } => {
                write!(f, "collision at uninformed node {node} in round {round} delayed it past its deadline")
            }
            Violation::FirstReceiptOffSchedule {
                node,
                level,
                round,
                earliest,
                latest,
            } => match round {
                Some(r) => write!(
                    f,
                    "node {node} at level {level} first received in round {r}, expected {earliest}..={latest}"
                ),
                None => write!(f, "node {node} at level {level} never received"),
            },
            Violation::LateTransmission { round, bound } => {
                write!(f, "Data transmitted in round {round}, bound {bound}")
            }
            Violation::LateInform { node, round, bound } => {
                write!(f, "node {node} informed in round {round}, bound {bound}")
            }
            Violation::AckMissing => f.write_str("no acknowledgement reached the source"),
            Violation::AckOffSchedule { round, expected } => {
                write!(f, "acknowledgement arrived in round {round}, expected {expected}")
            }
            Violation::AckLate { round, bound } => {
                write!(f, "acknowledgement arrived in round {round}, bound {bound}")
            }
            Violation::UnexpectedAck { round } => {
                write!(f, "acknowledgement arrived in round {round} although none was expected")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub kind: CheckKind,
    pub violation: Option<Violation>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Legal but noteworthy overlaps; never a failure on their own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anomaly {
    /// Data and Ack transmitted in the same round.
    DataAckOverlap { round: Round },
    /// Pack and Data collided at a node that was still uninformed.
    PackDataCollision { round: Round, node: NodeId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AckStatus {
    NotApplicable,
    Arrived(Round),
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub anomalies: Vec<Anomaly>,
    pub ack: AckStatus,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, kind: CheckKind) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.kind == kind)
    }
}

/// Round by which the one-bit schedule informs a level-`i` node.
fn level_window(level: usize, timing: LevelTiming) -> (Round, Round) {
    let latest = (2 * level).saturating_sub(2) as Round;
    match timing {
        LevelTiming::Exact => (latest, latest),
        LevelTiming::Deadline => (latest.saturating_sub(1), latest),
    }
}

/// Checks a trace against the guarantees of its protocol.
pub fn verify_trace(
    trace: &Trace,
    g: &Graph,
    lv: &LevelView,
    expectations: Expectations,
) -> VerificationReport {
    let n = g.node_count();
    let source = g.source();
    let depth = lv.eccentricity();
    let mut checks = Vec::new();
    let mut push = |kind, violation| checks.push(CheckResult { kind, violation });

    push(
        CheckKind::AllInformed,
        g.nodes()
            .find(|&u| !trace.informed(u))
            .map(|node| Violation::Uninformed { node }),
    );
    push(
        CheckKind::PayloadIntact,
        trace
            .payload_violations
            .first()
            .map(|p| Violation::PayloadMismatch {
                node: p.node,
                round: p.round,
            }),
    );

    // Recounted from the transmissions rather than trusted from the engine.
    let unclean = g.nodes().find_map(|u| {
        let r = trace.first_receipt[u]?;
        let tx = trace.transmissions_at(r);
        let senders: Vec<_> = tx.iter().filter(|(v, _)| g.has_edge(u, *v)).collect();
        let clean = senders.len() == 1
            && senders[0].1 == MessageKind::Data
            && !tx.iter().any(|(v, _)| *v == u);
        (!clean).then_some(Violation::UncleanReceipt {
            node: u,
            round: r,
            senders: senders.len(),
        })
    });
    push(CheckKind::FirstReceiptClean, unclean);

    let deadline = |u: NodeId| -> Round {
        match trace.protocol {
            Protocol::Oack => (2 * n).saturating_sub(3) as Round,
            Protocol::Ls | Protocol::LsAck => level_window(lv.level(u), LevelTiming::Deadline).1,
        }
    };
    let harmful = trace.collisions.iter().find(|c| {
        !c.receiver_informed && trace.first_receipt[c.node].is_none_or(|r| r > deadline(c.node))
    });
    push(
        CheckKind::NoHarmfulCollision,
        harmful.map(|c| Violation::HarmfulCollision {
            node: c.node,
            round: c.round,
        }),
    );

    let last_data = trace
        .rounds
        .iter()
        .rev()
        .find(|e| e.transmissions.iter().any(|(_, k)| *k == MessageKind::Data))
        .map(|e| e.round);

    let mut ack = match trace.ack_arrival {
        Some(r) => AckStatus::Arrived(r),
        None => AckStatus::Missing,
    };

    match trace.protocol {
        Protocol::Ls | Protocol::LsAck => {
            let off = g.nodes().filter(|&u| u != source).find_map(|u| {
                let level = lv.level(u);
                let (earliest, latest) = level_window(level, expectations.level_timing);
                let round = trace.first_receipt[u];
                let ok = round.is_some_and(|r| (earliest..=latest).contains(&r));
                (!ok).then_some(Violation::FirstReceiptOffSchedule {
                    node: u,
                    level,
                    round,
                    earliest,
                    latest,
                })
            });
            push(CheckKind::LevelTiming, off);

            let bound = (2 * depth) as Round;
            push(
                CheckKind::Termination,
                last_data
                    .filter(|&r| r > bound)
                    .map(|round| Violation::LateTransmission { round, bound }),
            );

            if trace.protocol == Protocol::LsAck {
                let chain_start = (depth / 2).saturating_sub(1);
                let violation = if chain_start >= 1 {
                    let expected = (4 * (depth / 2)) as Round;
                    match trace.ack_arrival {
                        Some(r) if r == expected => None,
                        Some(round) => Some(Violation::AckOffSchedule { round, expected }),
                        None => Some(Violation::AckMissing),
                    }
                } else {
                    ack = AckStatus::NotApplicable;
                    trace
                        .ack_arrival
                        .map(|round| Violation::UnexpectedAck { round })
                };
                push(CheckKind::AckTiming, violation);
            } else {
                ack = AckStatus::NotApplicable;
            }
        }
        Protocol::Oack => {
            let bound = (2 * n).saturating_sub(3) as Round;
            push(
                CheckKind::InformBound,
                g.nodes().find_map(|u| {
                    let r = trace.first_receipt[u]?;
                    (r > bound).then_some(Violation::LateInform {
                        node: u,
                        round: r,
                        bound,
                    })
                }),
            );
            let violation = if n < 2 {
                ack = AckStatus::NotApplicable;
                None
            } else {
                match (trace.ack_arrival, trace.last_first_receipt()) {
                    (None, _) => Some(Violation::AckMissing),
                    (Some(r), Some(last)) => {
                        let bound = last + n as Round;
                        (r > bound).then_some(Violation::AckLate { round: r, bound })
                    }
                    (Some(_), None) => None,
                }
            };
            push(CheckKind::AckBound, violation);
        }
    }

    let mut anomalies = Vec::new();
    match trace.protocol {
        Protocol::Oack => {
            for e in &trace.rounds {
                let has = |k| e.transmissions.iter().any(|(_, x)| *x == k);
                if has(MessageKind::Data) && has(MessageKind::Ack) {
                    anomalies.push(Anomaly::DataAckOverlap { round: e.round });
                }
            }
        }
        Protocol::LsAck => {
            for c in trace.collisions.iter().filter(|c| !c.receiver_informed) {
                let tx = trace.transmissions_at(c.round);
                let kind_of = |v: NodeId| tx.iter().find(|(w, _)| *w == v).map(|(_, k)| *k);
                let kinds: Vec<_> = c.senders.iter().filter_map(|&v| kind_of(v)).collect();
                if kinds.contains(&MessageKind::Pack) && kinds.contains(&MessageKind::Data) {
                    anomalies.push(Anomaly::PackDataCollision {
                        round: c.round,
                        node: c.node,
                    });
                }
            }
        }
        Protocol::Ls => {}
    }

    VerificationReport {
        checks,
        anomalies,
        ack,
    }
}
