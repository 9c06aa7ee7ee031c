//! Per-node transition functions for the three labelled broadcast algorithms.
//!
//! Every node runs the same pure function `step(state, round, inbox)`: `inbox`
//! is what the node received in round `round - 1` (always `None` at round 0),
//! and the returned [`Outbox`] is what it transmits in `round`. A node only
//! sees its label, its own history and the messages it hears. State is a fixed
//! set of round stamps, independent of the network size.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::labelling::{Label, Scheme};
use crate::Round;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MessageKind {
    /// Carries the source payload.
    Data,
    /// Tells the last transmitter to transmit again two rounds later.
    Stay,
    /// End-of-broadcast acknowledgement headed for the source.
    Ack,
    /// Partial acknowledgement: "I relayed, someone below me will report".
    Pack,
}

impl MessageKind {
    pub fn name(self) -> &'static str {
        match self {
            MessageKind::Data => "data",
            MessageKind::Stay => "stay",
            MessageKind::Ack => "ack",
            MessageKind::Pack => "pack",
        }
    }
}

impl fmt::Display for MessageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub kind: MessageKind,
    /// Source payload for [`MessageKind::Data`], empty otherwise.
    pub payload: Vec<u8>,
}

impl Message {
    pub fn data(payload: &[u8]) -> Self {
        Message {
            kind: MessageKind::Data,
            payload: payload.into(),
        }
    }

    pub fn control(kind: MessageKind) -> Self {
        Message {
            kind,
            payload: Vec::new(),
        }
    }
}

/// What a node transmits in one round, if anything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outbox(pub Option<Message>);

impl Outbox {
    pub fn silent() -> Self {
        Outbox(None)
    }

    pub fn send(m: Message) -> Self {
        Outbox(Some(m))
    }

    pub fn message(&self) -> Option<&Message> {
        self.0.as_ref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    /// Acknowledged broadcast on arbitrary graphs, three-bit labels.
    Oack,
    /// Broadcast on level-separable graphs, one-bit labels.
    Ls,
    /// Acknowledged broadcast on level-separable graphs, two-bit labels.
    LsAck,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Oack, Protocol::Ls, Protocol::LsAck];

    pub fn expected_scheme(self) -> Scheme {
        match self {
            Protocol::Oack => Scheme::Oack3,
            Protocol::Ls => Scheme::Ls1,
            Protocol::LsAck => Scheme::LsAck2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Oack => "OACK",
            Protocol::Ls => "LS",
            Protocol::LsAck => "LSACK",
        }
    }

    pub fn step(
        self,
        state: NodeState,
        round: Round,
        inbox: Option<&Message>,
    ) -> (NodeState, Outbox) {
        match self {
            Protocol::Oack => step_oack(state, round, inbox),
            Protocol::Ls => step_ls(state, round, inbox),
            Protocol::LsAck => step_ls_ack(state, round, inbox),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown protocol {0:?} (expected OACK, LS or LSACK)")]
pub struct UnknownProtocol(pub alloc::string::String);

impl FromStr for Protocol {
    type Err = UnknownProtocol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownProtocol(s.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Source,
    Relay,
}

/// Local state of one node. Scheduled actions are absolute round stamps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    role: Role,
    label: Label,
    /// Payload once known; the source knows it from the start.
    sourcemsg: Option<Vec<u8>>,
    /// Round in which the payload was first received.
    first_data: Option<Round>,
    /// Last round this node transmitted Data.
    last_data_tx: Option<Round>,
    /// Set once the node has sent or scheduled its single acknowledgement.
    ack_done: bool,
    data_at: Option<Round>,
    pack_at: Option<Round>,
    ack_check_at: Option<Round>,
    ack_at: Option<Round>,
}

impl NodeState {
    pub fn source(label: Label, payload: &[u8]) -> Self {
        NodeState::with_role(Role::Source, label, Some(payload.into()))
    }

    pub fn relay(label: Label) -> Self {
        NodeState::with_role(Role::Relay, label, None)
    }

    fn with_role(role: Role, label: Label, sourcemsg: Option<Vec<u8>>) -> Self {
        NodeState {
            role,
            label,
            sourcemsg,
            first_data: None,
            last_data_tx: None,
            ack_done: false,
            data_at: None,
            pack_at: None,
            ack_check_at: None,
            ack_at: None,
        }
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn is_source(&self) -> bool {
        self.role == Role::Source
    }

    pub fn sourcemsg(&self) -> Option<&[u8]> {
        self.sourcemsg.as_deref()
    }

    pub fn first_data_round(&self) -> Option<Round> {
        self.first_data
    }

    /// True while some future transmission or check is scheduled.
    pub fn has_pending(&self) -> bool {
        self.data_at.is_some()
            || self.pack_at.is_some()
            || self.ack_check_at.is_some()
            || self.ack_at.is_some()
    }

    fn payload(&self) -> &[u8] {
        self.sourcemsg.as_deref().unwrap_or(&[])
    }

    fn send_data(&mut self, round: Round) -> Outbox {
        self.last_data_tx = Some(round);
        Outbox::send(Message::data(self.payload()))
    }

    /// Records a first Data receipt in round `at`; returns whether it was new.
    fn take_data(&mut self, inbox: Option<&Message>, at: Option<Round>) -> Option<Round> {
        match (inbox, at) {
            (Some(m), Some(at)) if m.kind == MessageKind::Data && self.first_data.is_none() => {
                self.sourcemsg = Some(m.payload.clone());
                self.first_data = Some(at);
                Some(at)
            }
            _ => None,
        }
    }
}

fn is_kind(inbox: Option<&Message>, kind: MessageKind) -> bool {
    inbox.is_some_and(|m| m.kind == kind)
}

/// Three-bit acknowledged broadcast.
///
/// A node first informed in round `t` relays Data at `t + 2` if `x1`. At
/// `t + 1` it sends Stay if `x2`, or starts the acknowledgement if its label
/// is exactly `001`. A Stay heard right after its own Data transmission makes
/// it transmit Data once more; an Ack heard by an `x3` node is relayed once.
pub fn step_oack(mut st: NodeState, round: Round, inbox: Option<&Message>) -> (NodeState, Outbox) {
    if st.is_source() {
        let out = if round == 0 {
            st.send_data(round)
        } else {
            Outbox::silent()
        };
        return (st, out);
    }
    let heard_at = round.checked_sub(1);
    st.take_data(inbox, heard_at);
    let label = st.label;
    let Some(first) = st.first_data else {
        return (st, Outbox::silent());
    };

    let out = if first + 2 == round {
        if label.x1() {
            st.send_data(round)
        } else {
            Outbox::silent()
        }
    } else if first + 1 == round {
        if label == Label::new(false, false, true) {
            st.ack_done = true;
            Outbox::send(Message::control(MessageKind::Ack))
        } else if label.x2() {
            Outbox::send(Message::control(MessageKind::Stay))
        } else {
            Outbox::silent()
        }
    } else if is_kind(inbox, MessageKind::Stay) {
        if st.last_data_tx.is_some_and(|t| t + 2 == round) {
            st.send_data(round)
        } else {
            Outbox::silent()
        }
    } else if is_kind(inbox, MessageKind::Ack) && label.x3() && !st.ack_done {
        st.ack_done = true;
        Outbox::send(Message::control(MessageKind::Ack))
    } else {
        Outbox::silent()
    };
    (st, out)
}

/// Relay delay after a first Data receipt in round `t`: level-`i` nodes end
/// up transmitting at `2i - 1` when `x1` and at `2i` otherwise.
fn ls_delay(t: Round, x1: bool) -> Round {
    match (t.is_multiple_of(2), x1) {
        (true, true) => 1,
        (true, false) => 2,
        (false, true) => 2,
        (false, false) => 3,
    }
}

/// One-bit broadcast on level-separable graphs.
pub fn step_ls(mut st: NodeState, round: Round, inbox: Option<&Message>) -> (NodeState, Outbox) {
    if st.is_source() {
        let out = if round == 0 {
            st.send_data(round)
        } else {
            Outbox::silent()
        };
        return (st, out);
    }
    if let Some(t) = st.take_data(inbox, round.checked_sub(1)) {
        st.data_at = Some(t + ls_delay(t, st.label.x1()));
    }
    let out = if st.data_at == Some(round) {
        st.data_at = None;
        st.send_data(round)
    } else {
        Outbox::silent()
    };
    (st, out)
}

/// Two-bit acknowledged broadcast on level-separable graphs.
///
/// On top of [`step_ls`], an `x2` node first informed in round `t` sends Pack
/// two rounds after its son slot (`t + 4` for odd `t`, `t + 3` for even `t`)
/// and listens two rounds later for a Pack from a chain son. If none is heard
/// it is the far end of the chain and emits Ack three rounds after that check.
/// An Ack heard by an `x2` node is relayed two rounds later, once.
pub fn step_ls_ack(
    mut st: NodeState,
    round: Round,
    inbox: Option<&Message>,
) -> (NodeState, Outbox) {
    if st.is_source() {
        let out = if round == 0 {
            st.send_data(round)
        } else {
            Outbox::silent()
        };
        return (st, out);
    }
    let heard_at = round.checked_sub(1);
    let x2 = st.label.x2();
    if let Some(t) = st.take_data(inbox, heard_at) {
        st.data_at = Some(t + ls_delay(t, st.label.x1()));
        if x2 {
            let odd = t % 2 == 1;
            st.pack_at = Some(t + if odd { 4 } else { 3 });
            st.ack_check_at = Some(t + if odd { 6 } else { 5 });
        }
    }
    if let Some(at) = heard_at {
        if x2 && !st.ack_done && is_kind(inbox, MessageKind::Ack) {
            st.ack_done = true;
            st.ack_check_at = None;
            st.ack_at = Some(at + 2);
        }
        if st.ack_check_at == Some(at) {
            st.ack_check_at = None;
            if !is_kind(inbox, MessageKind::Pack) && !st.ack_done {
                st.ack_done = true;
                st.ack_at = Some(at + 3);
            }
        }
    }

    let due = |slot: &mut Option<Round>| {
        if *slot == Some(round) {
            *slot = None;
            true
        } else {
            false
        }
    };
    let data = due(&mut st.data_at);
    let pack = due(&mut st.pack_at);
    let ack = due(&mut st.ack_at);
    let out = if data {
        st.send_data(round)
    } else if pack {
        Outbox::send(Message::control(MessageKind::Pack))
    } else if ack {
        Outbox::send(Message::control(MessageKind::Ack))
    } else {
        Outbox::silent()
    };
    (st, out)
}
