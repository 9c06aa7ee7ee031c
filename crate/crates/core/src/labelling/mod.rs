//! Node labels computed offline from the topology, one scheme per protocol.

mod labels;
mod schedule;

pub use labels::{
    label_ls, label_ls_ack, label_oack, label_oack_from_schedule, oack_ack_generator,
    oack_ack_path, AckChain, Label, LabelError, LabelSet, Scheme, UnknownScheme,
};
pub use schedule::{compute_beta_schedule, BroadcastSchedule};
