//! Synchronous round engine under collision semantics, and trace checks.

mod engine;
mod verify;

pub use engine::{
    resolve_round, resolve_round_detailed, run_simulation, CollisionEvent, PayloadViolation,
    Reception, RoundEvent, SimConfig, SimError, Trace,
};
pub use verify::{
    verify_trace, AckStatus, Anomaly, CheckKind, CheckResult, Expectations, LevelTiming,
    VerificationReport, Violation,
};
