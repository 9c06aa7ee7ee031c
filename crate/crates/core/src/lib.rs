//! Labelled radio broadcast in collision-model networks.
//!
//! The crate is `no_std` (it only needs `alloc`) and covers four layers:
//!
//! * [`graph`]: validated undirected graphs with a broadcast source and their
//!   breadth-first level structure.
//! * [`separability`]: level separations (checking and exhaustive search) and
//!   the gadget reduction from 1-in-3-SAT used to show the search is hard.
//! * [`labelling`]: offline computation of the 3-bit, 1-bit and 2-bit
//!   labelling schemes.
//! * [`protocols`] and [`simulator`]: per-node transition functions for the
//!   three broadcast algorithms, a synchronous round engine with collision
//!   semantics, and trace verification against the round bounds.
#![no_std]

extern crate alloc;

pub mod graph;
pub mod labelling;
pub mod protocols;
pub mod separability;
pub mod simulator;

pub use graph::{build_graph, compute_levels, Graph, GraphError, LevelView, NodeId};
pub use labelling::{
    compute_beta_schedule, label_ls, label_ls_ack, label_oack, AckChain, BroadcastSchedule, Label,
    LabelError, LabelSet, Scheme,
};
pub use protocols::{
    step_ls, step_ls_ack, step_oack, Message, MessageKind, NodeState, Outbox, Protocol,
};
pub use separability::{
    brute_force_1in3, build_gadget, check_separation, extract_assignment, find_separation,
    verify_reduction, Formula, Gadget, GadgetRole, Literal, Part, ReductionError, ReductionReport,
    Separation, SeparationError, Verdict,
};
pub use simulator::{
    resolve_round, run_simulation, verify_trace, Expectations, LevelTiming, SimConfig, SimError,
    Trace, VerificationReport,
};

/// Synchronous round number. Round 0 is the source's first transmission.
pub type Round = u32;
