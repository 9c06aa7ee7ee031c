use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::schedule::{compute_beta_schedule, BroadcastSchedule};
use crate::graph::{Graph, LevelView, NodeId};
use crate::separability::{check_separation, Part, Separation, SeparationError, Verdict};

/// Which labelling scheme a label set belongs to; fixes the label width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Three bits: relay, stay, acknowledgement path.
    Oack3,
    /// One bit: early/late relay slot.
    Ls1,
    /// Two bits: early/late relay slot, acknowledgement chain.
    LsAck2,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Oack3, Scheme::Ls1, Scheme::LsAck2];

    pub fn width(self) -> usize {
        match self {
            Scheme::Oack3 => 3,
            Scheme::Ls1 => 1,
            Scheme::LsAck2 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Oack3 => "OACK3",
            Scheme::Ls1 => "LS1",
            Scheme::LsAck2 => "LSACK2",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown labelling scheme {0:?} (expected OACK3, LS1 or LSACK2)")]
pub struct UnknownScheme(pub String);

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownScheme(s.into()))
    }
}

/// Up to three label bits. `x1` is the leftmost bit of the printed form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Label {
    x1: bool,
    x2: bool,
    x3: bool,
}

impl Label {
    pub const ZERO: Label = Label {
        x1: false,
        x2: false,
        x3: false,
    };

    pub fn new(x1: bool, x2: bool, x3: bool) -> Self {
        Label { x1, x2, x3 }
    }

    pub fn x1(self) -> bool {
        self.x1
    }

    pub fn x2(self) -> bool {
        self.x2
    }

    pub fn x3(self) -> bool {
        self.x3
    }

    /// Bit string of the first `width` bits, e.g. `"001"`.
    pub fn bits(self, width: usize) -> String {
        [self.x1, self.x2, self.x3]
            .iter()
            .take(width)
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Parses a bit string of length 1..=3.
    pub fn parse_bits(s: &str) -> Option<Label> {
        if s.is_empty() || s.len() > 3 {
            return None;
        }
        let mut bits = [false; 3];
        for (i, c) in s.chars().enumerate() {
            bits[i] = match c {
                '0' => false,
                '1' => true,
                _ => return None,
            };
        }
        Some(Label::new(bits[0], bits[1], bits[2]))
    }

    /// True if no bit beyond `width` is set.
    pub fn fits(self, width: usize) -> bool {
        [self.x1, self.x2, self.x3].iter().skip(width).all(|b| !b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelError {
    #[error("acknowledged broadcast needs at least two nodes")]
    TooFewNodes,
    #[error("node {node} at level {level} violates the separation")]
    InvalidSeparation { node: NodeId, level: usize },
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error("label of node {node} uses more than {width} bit(s)")]
    TooWide { node: NodeId, width: usize },
}

/// One label per node, all of the same scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    scheme: Scheme,
    labels: Vec<Label>,
}

impl LabelSet {
    pub fn new(scheme: Scheme, labels: Vec<Label>) -> Result<Self, LabelError> {
        if let Some(node) = labels.iter().position(|l| !l.fits(scheme.width())) {
            return Err(LabelError::TooWide {
                node,
                width: scheme.width(),
            });
        }
        Ok(LabelSet { scheme, labels })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, u: NodeId) -> Label {
        self.labels[u]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn bits(&self, u: NodeId) -> String {
        self.labels[u].bits(self.scheme.width())
    }
}

/// Relay chain that carries the acknowledgement back to the source, listed
/// from its far end toward level 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AckChain {
    Marked(Vec<NodeId>),
    /// Depth too small for the scheme to place a chain; no acknowledgement.
    DegenerateDepth {
        eccentricity: usize,
    },
}

impl AckChain {
    pub fn nodes(&self) -> &[NodeId] {
        match self {
            AckChain::Marked(c) => c,
            AckChain::DegenerateDepth { .. } => &[],
        }
    }
}

/// Node that starts the acknowledgement under the three-bit scheme: the
/// smallest id among the nodes informed last.
pub fn oack_ack_generator(g: &Graph, sched: &BroadcastSchedule) -> Option<NodeId> {
    if g.node_count() < 2 {
        return None;
    }
    let last = sched.last_informed_round();
    g.nodes()
        .find(|&u| u != g.source() && sched.informed_round[u] == last)
}

/// Back path from the generator to a neighbour of the source.
///
/// Starts from the informer chain and shortcuts it to an induced path: from
/// each node it jumps to the furthest chain node it is adjacent to. A chord in
/// the path would make one relay hear two acknowledgement copies at once.
pub fn oack_ack_path(g: &Graph, sched: &BroadcastSchedule) -> Vec<NodeId> {
    let Some(generator) = oack_ack_generator(g, sched) else {
        return Vec::new();
    };
    let mut chain = vec![generator];
    let mut u = generator;
    while let Some(p) = sched.informer[u] {
        if p == g.source() {
            break;
        }
        chain.push(p);
        u = p;
    }

    let mut path = vec![chain[0]];
    let mut i = 0;
    while i + 1 < chain.len() {
        let here = chain[i];
        let j = (i + 1..chain.len())
            .rev()
            .find(|&j| g.has_edge(here, chain[j]))
            .expect("consecutive chain nodes are adjacent");
        path.push(chain[j]);
        i = j;
    }
    // The last node must touch the source; an earlier node touching it would
    // mean a shorter route the informer chain skipped, so shortcut that too.
    if let Some(k) = path.iter().position(|&v| g.has_edge(v, g.source())) {
        path.truncate(k + 1);
    }
    path
}

/// Three-bit labels for acknowledged broadcast on any connected graph.
pub fn label_oack(g: &Graph) -> Result<LabelSet, LabelError> {
    if g.node_count() < 2 {
        return Err(LabelError::TooFewNodes);
    }
    let sched = compute_beta_schedule(g);
    Ok(label_oack_from_schedule(g, &sched))
}

pub fn label_oack_from_schedule(g: &Graph, sched: &BroadcastSchedule) -> LabelSet {
    let n = g.node_count();
    let mut labels = vec![Label::ZERO; n];
    for u in sched.relays(g.source()) {
        labels[u].x1 = true;
    }
    for u in sched.stay_senders() {
        labels[u].x2 = true;
    }
    for u in oack_ack_path(g, sched) {
        labels[u].x3 = true;
    }
    LabelSet {
        scheme: Scheme::Oack3,
        labels,
    }
}

fn first_part_bits(lv: &LevelView, sep: &Separation) -> Result<Vec<Label>, LabelError> {
    if let Verdict::Reject { node, level } = check_separation(lv, sep)? {
        return Err(LabelError::InvalidSeparation { node, level });
    }
    let parts = sep.part_map(lv.node_count());
    Ok(parts
        .iter()
        .map(|p| Label::new(*p == Some(Part::First), false, false))
        .collect())
}

/// One-bit labels: `x1` marks the first part of each level's split.
pub fn label_ls(lv: &LevelView, sep: &Separation) -> Result<LabelSet, LabelError> {
    Ok(LabelSet {
        scheme: Scheme::Ls1,
        labels: first_part_bits(lv, sep)?,
    })
}

/// Two-bit labels: the one-bit split plus a chain of smallest-id parents that
/// starts at the smallest node of level `floor(D/2) - 1`.
pub fn label_ls_ack(lv: &LevelView, sep: &Separation) -> Result<(LabelSet, AckChain), LabelError> {
    let mut labels = first_part_bits(lv, sep)?;
    let depth = lv.eccentricity();
    let chain = match (depth / 2).checked_sub(1) {
        Some(start_level) if start_level >= 1 => {
            let mut u = lv.bucket(start_level)[0];
            let mut chain = vec![u];
            while lv.level(u) > 1 {
                u = lv.parents(u)[0];
                chain.push(u);
            }
            for &v in &chain {
                labels[v].x2 = true;
            }
            AckChain::Marked(chain)
        }
        _ => AckChain::DegenerateDepth {
            eccentricity: depth,
        },
    };
    Ok((
        LabelSet {
            scheme: Scheme::LsAck2,
            labels,
        },
        chain,
    ))
}
