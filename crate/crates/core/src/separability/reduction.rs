//! Reduction from 1-in-3-SAT to the level-separable property.
//!
//! A formula over `k` variables with `l` clauses becomes a depth-2 graph: the
//! source, a first level `{u_na, u_nb, u_y} ∪ {u_yi, u_ni}` and a second level
//! `{v_a, v_b} ∪ {v_xi} ∪ {v_cj}`. The graph has a level separation exactly
//! when the formula has an assignment making one literal per clause true.

use alloc::vec;
use alloc::vec::Vec;

use super::separation::{check_separation, find_separation, Separation, SeparationError, Verdict};
use crate::graph::{compute_levels, Graph, NodeId};

/// Largest variable count [`brute_force_1in3`] will enumerate.
pub const DEFAULT_VARIABLE_CAP: usize = 24;

/// A literal over a 0-based variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    /// DIMACS-style signed, 1-based literal. Zero has no meaning and yields `None`.
    pub fn from_signed(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = usize::try_from(value.unsigned_abs() - 1).ok()?;
        Some(Literal {
            var,
            positive: value > 0,
        })
    }

    pub fn to_signed(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("a formula needs at least one variable")]
    NoVariables,
    #[error("clause {clause} uses variable {var} but only {var_count} are declared")]
    VariableOutOfRange {
        clause: usize,
        var: usize,
        var_count: usize,
    },
    #[error("clause {clause} repeats a literal")]
    RepeatedLiteral { clause: usize },
}

/// A 1-in-3-SAT instance: every clause has exactly three distinct literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    var_count: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Formula {
    pub fn new(var_count: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, FormulaError> {
        if var_count == 0 {
            return Err(FormulaError::NoVariables);
        }
        for (j, clause) in clauses.iter().enumerate() {
            if let Some(lit) = clause.iter().find(|l| l.var >= var_count) {
                return Err(FormulaError::VariableOutOfRange {
                    clause: j,
                    var: lit.var,
                    var_count,
                });
            }
            if clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2] {
                return Err(FormulaError::RepeatedLiteral { clause: j });
            }
        }
        Ok(Formula { var_count, clauses })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// True iff every clause has exactly one true literal under `assignment`.
    pub fn exactly_one_satisfied(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.var_count
            && self
                .clauses
                .iter()
                .all(|c| c.iter().filter(|l| l.eval(assignment)).count() == 1)
    }
}

/// Role of each gadget node. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetRole {
    Source,
    NoA,
    NoB,
    Yes,
    VarYes(usize),
    VarNo(usize),
    SinkA,
    SinkB,
    VarSink(usize),
    ClauseSink(usize),
}

/// The reduction graph together with the role of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    graph: Graph,
    roles: Vec<GadgetRole>,
    var_count: usize,
    clause_count: usize,
}

impl Gadget {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn roles(&self) -> &[GadgetRole] {
        &self.roles
    }

    pub fn role(&self, u: NodeId) -> GadgetRole {
        self.roles[u]
    }

    /// Node carrying `role`. Panics on an index outside the formula.
    pub fn node(&self, role: GadgetRole) -> NodeId {
        let k = self.var_count;
        let second = 4 + 2 * k;
        match role {
            GadgetRole::Source => 0,
            GadgetRole::NoA => 1,
            GadgetRole::NoB => 2,
            GadgetRole::Yes => 3,
            GadgetRole::VarYes(i) if i < k => 4 + 2 * i,
            GadgetRole::VarNo(i) if i < k => 5 + 2 * i,
            GadgetRole::SinkA => second,
            GadgetRole::SinkB => second + 1,
            GadgetRole::VarSink(i) if i < k => second + 2 + i,
            GadgetRole::ClauseSink(j) if j < self.clause_count => second + 2 + k + j,
            other => panic!("role {other:?} is outside this gadget"),
        }
    }

    /// Node standing for a literal on the first level.
    pub fn literal_node(&self, lit: Literal) -> NodeId {
        if lit.positive {
            self.node(GadgetRole::VarYes(lit.var))
        } else {
            self.node(GadgetRole::VarNo(lit.var))
        }
    }

    pub fn first_level(&self) -> Vec<NodeId> {
        (1..4 + 2 * self.var_count).collect()
    }
}

pub fn build_gadget(f: &Formula) -> Gadget {
    let k = f.var_count();
    let l = f.clauses().len();
    let mut roles = vec![
        GadgetRole::Source,
        GadgetRole::NoA,
        GadgetRole::NoB,
        GadgetRole::Yes,
    ];
    for i in 0..k {
        roles.push(GadgetRole::VarYes(i));
        roles.push(GadgetRole::VarNo(i));
    }
    roles.extend([GadgetRole::SinkA, GadgetRole::SinkB]);
    roles.extend((0..k).map(GadgetRole::VarSink));
    roles.extend((0..l).map(GadgetRole::ClauseSink));

    // Node indices depend only on (k, l); a scratch gadget resolves them.
    let layout = Gadget {
        graph: Graph::new(1, [], 0).expect("single node"),
        roles: Vec::new(),
        var_count: k,
        clause_count: l,
    };
    let n = |r| layout.node(r);

    let mut edges = Vec::new();
    let source = n(GadgetRole::Source);
    edges.extend(layout.first_level().into_iter().map(|u| (source, u)));
    edges.push((n(GadgetRole::NoA), n(GadgetRole::SinkA)));
    edges.push((n(GadgetRole::NoB), n(GadgetRole::SinkB)));
    edges.push((n(GadgetRole::Yes), n(GadgetRole::SinkA)));
    edges.push((n(GadgetRole::Yes), n(GadgetRole::SinkB)));
    for i in 0..k {
        edges.push((n(GadgetRole::VarYes(i)), n(GadgetRole::VarSink(i))));
        edges.push((n(GadgetRole::VarNo(i)), n(GadgetRole::VarSink(i))));
    }
    for (j, clause) in f.clauses().iter().enumerate() {
        let sink = n(GadgetRole::ClauseSink(j));
        edges.extend(clause.iter().map(|&lit| (layout.literal_node(lit), sink)));
        edges.push((n(GadgetRole::NoA), sink));
        edges.push((n(GadgetRole::NoB), sink));
    }

    let graph = Graph::new(roles.len(), edges, source).expect("gadget graphs are connected");
    Gadget {
        graph,
        roles,
        var_count: k,
        clause_count: l,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("{var_count} variables exceed the brute-force cap of {cap}")]
    TooManyVariables { var_count: usize, cap: usize },
    #[error("separation is not valid on the gadget (node {node} at level {level} violates it)")]
    RejectedSeparation { node: NodeId, level: usize },
    #[error(transparent)]
    Separation(#[from] SeparationError),
}

/// Reads the assignment encoded by a valid separation of the gadget: the part
/// holding `u_y` means true, and `x_i` is true iff `u_yi` sits in that part.
pub fn extract_assignment(gm: &Gadget, sep: &Separation) -> Result<Vec<bool>, ReductionError> {
    let lv = compute_levels(gm.graph());
    if let Verdict::Reject { node, level } = check_separation(&lv, sep)? {
        return Err(ReductionError::RejectedSeparation { node, level });
    }
    let parts = sep.part_map(gm.graph().node_count());
    let yes = parts[gm.node(GadgetRole::Yes)];
    Ok((0..gm.var_count)
        .map(|i| parts[gm.node(GadgetRole::VarYes(i))] == yes)
        .collect())
}

/// Separation built from an assignment: `u_y` plus every true literal's node
/// in the first part, everything else of the first level in the second.
pub fn separation_from_assignment(gm: &Gadget, assignment: &[bool]) -> Separation {
    let mut first = vec![gm.node(GadgetRole::Yes)];
    for (i, &value) in assignment.iter().enumerate().take(gm.var_count) {
        first.push(gm.literal_node(Literal {
            var: i,
            positive: value,
        }));
    }
    let second = gm
        .first_level()
        .into_iter()
        .filter(|u| !first.contains(u))
        .collect();
    Separation::new(vec![(first, second)])
}

/// Exhaustive 1-in-3-SAT with [`DEFAULT_VARIABLE_CAP`].
pub fn brute_force_1in3(f: &Formula) -> Result<Option<Vec<bool>>, ReductionError> {
    brute_force_1in3_with_cap(f, DEFAULT_VARIABLE_CAP)
}

/// First satisfying assignment in ascending binary order, `x_1` being the
/// least-significant bit.
pub fn brute_force_1in3_with_cap(
    f: &Formula,
    cap: usize,
) -> Result<Option<Vec<bool>>, ReductionError> {
    let k = f.var_count();
    if k > cap.min(63) {
        return Err(ReductionError::TooManyVariables { var_count: k, cap });
    }
    let mut assignment = vec![false; k];
    for mask in 0..(1u64 << k) {
        for (i, slot) in assignment.iter_mut().enumerate() {
            *slot = mask & (1 << i) != 0;
        }
        if f.exactly_one_satisfied(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// Both sides of the reduction evaluated on one formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub assignment: Option<Vec<bool>>,
    pub separation: Option<Separation>,
    /// Satisfiability and separability verdicts coincide.
    pub agree: bool,
    /// The assignment, turned into a separation, passes the checker.
    /// `None` when the formula is unsatisfiable.
    pub forward_ok: Option<bool>,
    /// The separation, read back as an assignment, satisfies the formula.
    /// `None` when the gadget is not separable.
    pub backward_ok: Option<bool>,
}

impl ReductionReport {
    pub fn satisfiable(&self) -> bool {
        self.assignment.is_some()
    }

    pub fn separable(&self) -> bool {
        self.separation.is_some()
    }

    /// Agreement plus every applicable cross-construction.
    pub fn holds(&self) -> bool {
        self.agree && self.forward_ok != Some(false) && self.backward_ok != Some(false)
    }
}

pub fn verify_reduction(f: &Formula) -> Result<ReductionReport, ReductionError> {
    let assignment = brute_force_1in3(f)?;
    let gadget = build_gadget(f);
    let lv = compute_levels(gadget.graph());
    let separation = find_separation(&lv)?;

    let forward_ok = match &assignment {
        Some(a) => {
            let sep = separation_from_assignment(&gadget, a);
            Some(check_separation(&lv, &sep)?.is_accept())
        }
        None => None,
    };
    let backward_ok = match &separation {
        Some(sep) => Some(match extract_assignment(&gadget, sep) {
            Ok(a) => f.exactly_one_satisfied(&a),
            Err(ReductionError::RejectedSeparation { .. }) => false,
            Err(e) => return Err(e),
        }),
        None => None,
    };
    Ok(ReductionReport {
        agree: assignment.is_some() == separation.is_some(),
        assignment,
        separation,
        forward_ok,
        backward_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(a: i64, b: i64, c: i64) -> [Literal; 3] {
        [a, b, c].map(|v| Literal::from_signed(v).unwrap())
    }

    fn single() -> Formula {
        Formula::new(3, vec![clause(1, 2, 3)]).unwrap()
    }

    fn contradictory() -> Formula {
        Formula::new(3, vec![clause(1, 2, 3), clause(-1, -2, -3)]).unwrap()
    }

    #[test]
    fn formula_validation() {
        assert_eq!(Formula::new(0, vec![]), Err(FormulaError::NoVariables));
        assert!(matches!(
            Formula::new(2, vec![clause(1, 2, 3)]),
            Err(FormulaError::VariableOutOfRange {
                clause: 0,
                var: 2,
                ..
            })
        ));
        assert_eq!(
            Formula::new(3, vec![clause(1, 1, 2)]),
            Err(FormulaError::RepeatedLiteral { clause: 0 })
        );
        // A variable with both polarities is fine.
        assert!(Formula::new(2, vec![clause(1, -1, 2)]).is_ok());
    }

    #[test]
    fn gadget_sizes() {
        let g = build_gadget(&Formula::new(1, vec![]).unwrap());
        assert_eq!(g.graph().node_count(), 9);
        assert_eq!(compute_levels(g.graph()).eccentricity(), 2);

        let g = build_gadget(&single());
        let lv = compute_levels(g.graph());
        assert_eq!(g.graph().node_count(), 16);
        assert_eq!(lv.bucket(1).len(), 9);
        assert_eq!(lv.bucket(2).len(), 6);
        for u in lv.bucket(1) {
            assert!(matches!(
                g.role(*u),
                GadgetRole::NoA
                    | GadgetRole::NoB
                    | GadgetRole::Yes
                    | GadgetRole::VarYes(_)
                    | GadgetRole::VarNo(_)
            ));
        }
    }

    #[test]
    fn clause_sinks_have_five_parents() {
        let f = Formula::new(
            4,
            vec![clause(1, -2, 3), clause(-1, 2, 4), clause(2, -3, -4)],
        )
        .unwrap();
        let g = build_gadget(&f);
        let lv = compute_levels(g.graph());
        for j in 0..3 {
            let parents = lv.parents(g.node(GadgetRole::ClauseSink(j)));
            assert_eq!(parents.len(), 5);
            assert!(parents.contains(&g.node(GadgetRole::NoA)));
            assert!(parents.contains(&g.node(GadgetRole::NoB)));
        }
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_1in3(&single()),
            Ok(Some(vec![true, false, false]))
        );
        assert_eq!(brute_force_1in3(&contradictory()), Ok(None));
        let empty = Formula::new(2, vec![]).unwrap();
        assert_eq!(brute_force_1in3(&empty), Ok(Some(vec![false, false])));
        assert!(matches!(
            brute_force_1in3_with_cap(&single(), 2),
            Err(ReductionError::TooManyVariables { .. })
        ));
    }

    #[test]
    fn reduction_on_fixed_instances() {
        let r = verify_reduction(&single()).unwrap();
        assert!(r.satisfiable() && r.separable() && r.holds());
        assert_eq!(r.forward_ok, Some(true));
        assert_eq!(r.backward_ok, Some(true));

        let r = verify_reduction(&contradictory()).unwrap();
        assert!(!r.satisfiable() && !r.separable() && r.agree && r.holds());
    }

    #[test]
    fn extraction_follows_the_yes_node() {
        let f = Formula::new(1, vec![]).unwrap();
        let g = build_gadget(&f);
        let yes = g.node(GadgetRole::Yes);
        let y1 = g.node(GadgetRole::VarYes(0));
        let n1 = g.node(GadgetRole::VarNo(0));
        let na = g.node(GadgetRole::NoA);
        let nb = g.node(GadgetRole::NoB);

        let together = Separation::new(vec![(vec![yes, y1], vec![na, nb, n1])]);
        assert_eq!(extract_assignment(&g, &together), Ok(vec![true]));

        let apart = Separation::new(vec![(vec![na, nb, y1], vec![yes, n1])]);
        assert_eq!(extract_assignment(&g, &apart), Ok(vec![false]));

        let invalid = Separation::new(vec![(vec![yes, na, y1], vec![nb, n1])]);
        assert!(matches!(
            extract_assignment(&g, &invalid),
            Err(ReductionError::RejectedSeparation { .. })
        ));
    }

    #[test]
    fn signed_literal_round_trip() {
        for v in [-5i64, -1, 1, 7] {
            assert_eq!(Literal::from_signed(v).unwrap().to_signed(), v);
        }
        assert_eq!(Literal::from_signed(0), None);
    }
}
