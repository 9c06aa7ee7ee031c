//! Level separations and the hardness reduction.

mod reduction;
mod separation;

pub use reduction::{
    brute_force_1in3, brute_force_1in3_with_cap, build_gadget, extract_assignment,
    separation_from_assignment, verify_reduction, Formula, FormulaError, Gadget, GadgetRole,
    Literal, ReductionError, ReductionReport, DEFAULT_VARIABLE_CAP,
};
pub use separation::{
    check_separation, find_separation, find_separation_with_cap, LevelPartition, Part, Separation,
    SeparationError, Verdict, DEFAULT_LEVEL_CAP, MAX_LEVEL_CAP,
};
