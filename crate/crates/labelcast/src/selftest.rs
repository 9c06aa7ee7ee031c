//! Seeded instance generators and the end-to-end acceptance checks.
//!
//! Every check draws from its own ChaCha8 stream derived from one seed, so a
//! run is reproducible from `LABELCAST_SEED` alone.

use std::fmt::Write;

use labelcast_core::graph::{build_graph, compute_levels, Graph, LevelView, NodeId};
use labelcast_core::labelling::{label_ls, label_ls_ack, label_oack, LabelSet};
use labelcast_core::protocols::{MessageKind, Protocol};
use labelcast_core::separability::{
    brute_force_1in3, build_gadget, check_separation, find_separation, verify_reduction, Formula,
    Literal, Separation,
};
use labelcast_core::simulator::{
    run_simulation, verify_trace, AckStatus, CheckKind, Expectations, LevelTiming, SimConfig, Trace,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formats::write_labels;
use crate::ingestion::{bundled_table, derive_graph};

pub const SEED_ENV: &str = "LABELCAST_SEED";
pub const DEFAULT_SEED: u64 = 0x5EED_1AB3;

/// Parses a seed written in decimal or as `0x` hex.
pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => s.parse().ok(),
    }
}

/// Seed from `LABELCAST_SEED`, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> Result<u64, String> {
    match std::env::var(SEED_ENV) {
        Err(_) => Ok(DEFAULT_SEED),
        Ok(s) => {
            parse_seed(&s).ok_or_else(|| format!("{SEED_ENV}={s:?} is not an unsigned integer"))
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ id.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

// ---------------------------------------------------------------- generators

/// Uniform random recursive tree on `n` nodes with shuffled ids; the source
/// is the root.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let mut ids: Vec<NodeId> = (0..n).collect();
    ids.shuffle(rng);
    let edges: Vec<_> = (1..n)
        .map(|i| (ids[rng.random_range(0..i)], ids[i]))
        .collect();
    build_graph(n, &edges, ids[0]).expect("trees are connected")
}

/// A level-separable graph with its certifying separation.
#[derive(Debug, Clone)]
pub struct SeparableInstance {
    pub graph: Graph,
    pub separation: Separation,
    /// Nodes given a second parent by the augmentation.
    pub multi_parent_nodes: usize,
}

/// Random tree plus extra edges: cross edges between adjacent levels kept only
/// while a random fixed part assignment still separates every level, and
/// same-level edges (which never change parents). The result is re-checked.
pub fn augmented_separable<R: Rng>(rng: &mut R, n: usize) -> SeparableInstance {
    let tree = random_tree(rng, n);
    let lv = compute_levels(&tree);
    let in_first: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut parents: Vec<Vec<NodeId>> = (0..n).map(|u| lv.parents(u).to_vec()).collect();
    let mut edges = tree.edges().to_vec();
    let by_level = lv.buckets();

    let holds = |ps: &[NodeId]| {
        let first = ps.iter().filter(|&&p| in_first[p]).count();
        first == 1 || ps.len() - first == 1
    };
    let attempts = rng.random_range(1..=n.max(2));
    for _ in 0..attempts {
        let u = rng.random_range(0..n);
        let level = lv.level(u);
        if rng.random_bool(0.2) {
            let same = &by_level[level];
            let v = same[rng.random_range(0..same.len())];
            if v != u && level > 0 {
                edges.push((u, v));
            }
            continue;
        }
        if level < 2 {
            continue;
        }
        let above = &by_level[level - 1];
        let p = above[rng.random_range(0..above.len())];
        if parents[u].contains(&p) {
            continue;
        }
        parents[u].push(p);
        if holds(&parents[u]) {
            edges.push((p, u));
        } else {
            parents[u].pop();
        }
    }

    let graph = build_graph(n, &edges, tree.source()).expect("supergraph of a tree");
    let lv = compute_levels(&graph);
    let separation = separation_from_parts(&lv, &in_first);
    assert!(
        check_separation(&lv, &separation)
            .expect("well formed")
            .is_accept(),
        "augmentation keeps the assignment separating"
    );
    let multi_parent_nodes = graph.nodes().filter(|&u| lv.parents(u).len() > 1).count();
    SeparableInstance {
        graph,
        separation,
        multi_parent_nodes,
    }
}

pub fn separation_from_parts(lv: &LevelView, in_first: &[bool]) -> Separation {
    let depth = lv.eccentricity();
    Separation::new(
        (1..depth.max(1))
            .map(|i| lv.bucket(i).iter().partition(|&&u| in_first[u]))
            .collect(),
    )
}

/// Random connected graph: a random tree plus each other pair with
/// probability `density`; random source.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, density: f64) -> Graph {
    let tree = random_tree(rng, n);
    let mut edges = tree.edges().to_vec();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    let source = rng.random_range(0..n);
    build_graph(n, &edges, source).expect("supergraph of a tree")
}

/// Random formula with `var_count` variables and `clause_count` clauses of
/// three distinct literals. One variable cannot fill a clause, so it gets none.
pub fn random_formula<R: Rng>(rng: &mut R, var_count: usize, clause_count: usize) -> Formula {
    let clause_count = if var_count < 2 { 0 } else { clause_count };
    let clauses = (0..clause_count)
        .map(|_| loop {
            let lit = |rng: &mut R| Literal {
                var: rng.random_range(0..var_count),
                positive: rng.random_bool(0.5),
            };
            let (a, b, c) = (lit(rng), lit(rng), lit(rng));
            if a != b && a != c && b != c {
                break [a, b, c];
            }
        })
        .collect();
    Formula::new(var_count, clauses).expect("distinct in-range literals")
}

/// Layered graph with given level sizes (level 0 is the source alone): every
/// node picks at least one random parent one level up; some same-level edges.
pub fn random_layered<R: Rng>(rng: &mut R, sizes: &[usize]) -> (Graph, Vec<usize>) {
    let mut level_of = vec![0usize];
    let mut levels: Vec<Vec<NodeId>> = vec![vec![0]];
    let mut edges = Vec::new();
    for (i, &size) in sizes.iter().enumerate() {
        let mut here = Vec::new();
        for _ in 0..size {
            let u = level_of.len();
            level_of.push(i + 1);
            here.push(u);
            let above = &levels[i];
            let extra = rng.random_range(0..=above.len().min(3));
            let mut ps: Vec<NodeId> = above.clone();
            ps.shuffle(rng);
            for &p in ps.iter().take(1 + extra.min(above.len() - 1)) {
                edges.push((p, u));
            }
        }
        for _ in 0..rng.random_range(0..=size / 2) {
            let (a, b) = (
                here[rng.random_range(0..size)],
                here[rng.random_range(0..size)],
            );
            if a != b {
                edges.push((a, b));
            }
        }
        levels.push(here);
    }
    let g = build_graph(level_of.len(), &edges, 0).expect("each node has a parent");
    (g, level_of)
}

/// Direct evaluation of the separation condition from the generator's own
/// level assignment and raw edge list.
pub fn direct_condition(g: &Graph, level_of: &[usize], in_first: &[bool]) -> bool {
    (0..g.node_count()).filter(|&u| level_of[u] >= 2).all(|u| {
        let (mut first, mut second) = (0usize, 0usize);
        for &(a, b) in g.edges() {
            let p = if b == u {
                a
            } else if a == u {
                b
            } else {
                continue;
            };
            if level_of[p] + 1 == level_of[u] {
                if in_first[p] {
                    first += 1;
                } else {
                    second += 1;
                }
            }
        }
        first == 1 || second == 1
    })
}

// ------------------------------------------------------------------ criteria

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestConfig {
    pub seed: u64,
    pub trees: usize,
    pub augmented: usize,
    pub random_graphs: usize,
    pub formulas: usize,
    pub partitions: usize,
    pub label_graphs: usize,
}

impl SelftestConfig {
    pub fn with_seed(seed: u64) -> Self {
        SelftestConfig {
            seed,
            trees: 500,
            augmented: 500,
            random_graphs: 500,
            formulas: 200,
            partitions: 1000,
            label_graphs: 100,
        }
    }
}

/// Pass/fail of one part of a criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub name: String,
    pub passed: bool,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub parts: Vec<Part>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.parts.iter().all(|p| p.passed)
    }
}

fn part(name: &str, passed: bool, summary: String) -> Part {
    Part {
        name: name.into(),
        passed,
        summary,
    }
}

/// Tally of how many instances failed, with the first witness.
#[derive(Default)]
struct Tally {
    total: usize,
    failed: usize,
    witness: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn part(&self, name: &str, what: &str) -> Part {
        let mut summary = format!("{}/{} {what}", self.total - self.failed, self.total);
        if let Some(w) = &self.witness {
            write!(summary, "; first failure: {w}").unwrap();
        }
        part(name, self.total > 0 && self.failed == 0, summary)
    }
}

struct LsRun {
    family: &'static str,
    graph: Graph,
    lv: LevelView,
    ls: Trace,
    ls_ack: Trace,
    chain_depth: usize,
}

fn separable_family(cfg: &SelftestConfig) -> Vec<LsRun> {
    let mut rng = stream(cfg.seed, 1);
    let mut runs = Vec::new();
    let mut push = |family, graph: Graph, sep: Separation| {
        let lv = compute_levels(&graph);
        let ls_labels = label_ls(&lv, &sep).expect("certified separation");
        let (ack_labels, _) = label_ls_ack(&lv, &sep).expect("certified separation");
        let sim = |labels: &LabelSet, p| {
            run_simulation(&graph, labels, p, b"payload", SimConfig::for_graph(&graph))
                .expect("valid inputs")
        };
        let ls = sim(&ls_labels, Protocol::Ls);
        let ls_ack = sim(&ack_labels, Protocol::LsAck);
        let chain_depth = lv.eccentricity();
        runs.push(LsRun {
            family,
            graph,
            lv,
            ls,
            ls_ack,
            chain_depth,
        });
    };
    for _ in 0..cfg.trees {
        let n = rng.random_range(1..=50);
        let g = random_tree(&mut rng, n);
        let sep = find_separation(&compute_levels(&g))
            .expect("trees fit the cap")
            .expect("trees are separable");
        push("tree", g, sep);
    }
    for _ in 0..cfg.augmented {
        let n = rng.random_range(2..=50);
        let inst = augmented_separable(&mut rng, n);
        push("augmented", inst.graph, inst.separation);
    }
    runs
}

fn describe(run: &LsRun) -> String {
    format!(
        "{} graph n={} D={} source={}",
        run.family,
        run.graph.node_count(),
        run.lv.eccentricity(),
        run.graph.source()
    )
}

fn criterion_ls_timing(runs: &[LsRun]) -> CriterionReport {
    let mut exact = [Tally::default(), Tally::default()];
    let mut deadline = Tally::default();
    let mut termination = Tally::default();
    for run in runs {
        let idx = usize::from(run.family == "augmented");
        let rep = verify_trace(&run.ls, &run.graph, &run.lv, Expectations::default());
        let timing = rep.check(CheckKind::LevelTiming).expect("LS check");
        exact[idx].record(timing.passed(), || {
            format!("{}: {}", describe(run), timing.violation.as_ref().unwrap())
        });
        let relaxed = verify_trace(
            &run.ls,
            &run.graph,
            &run.lv,
            Expectations {
                level_timing: LevelTiming::Deadline,
            },
        );
        deadline.record(relaxed.passed(), || {
            let v: Vec<String> = relaxed
                .failures()
                .map(|f| f.violation.as_ref().unwrap().to_string())
                .collect();
            format!("{}: {}", describe(run), v.join("; "))
        });
        let term = rep.check(CheckKind::Termination).expect("LS check");
        termination.record(term.passed() && run.ls.completed, || describe(run));
    }
    CriterionReport {
        id: 1,
        title: "one-bit broadcast: first receipt exactly at 2*level-2, done by 2D",
        parts: vec![
            exact[0].part(
                "exact timing, trees",
                "instances with every first receipt at 2*level-2",
            ),
            exact[1].part(
                "exact timing, augmented",
                "instances with every first receipt at 2*level-2",
            ),
            termination.part(
                "termination by 2D",
                "instances completed with last Data by 2D",
            ),
            deadline.part(
                "window 2*level-3..=2*level-2 (informational)",
                "instances with every check passing",
            ),
        ],
    }
}

fn criterion_ls_clean(runs: &[LsRun]) -> CriterionReport {
    let mut clean = Tally::default();
    for run in runs {
        let t = &run.ls;
        for u in run.graph.nodes() {
            let Some(r) = t.first_receipt[u] else {
                continue;
            };
            let data_neighbours = t
                .transmissions_at(r)
                .iter()
                .filter(|(v, k)| *k == MessageKind::Data && run.graph.has_edge(u, *v))
                .count();
            clean.record(data_neighbours == 1, || {
                format!(
                    "{}: node {u} round {r} had {data_neighbours} Data neighbours",
                    describe(run)
                )
            });
        }
    }
    CriterionReport {
        id: 2,
        title: "one-bit broadcast: every first receipt has exactly one Data sender",
        parts: vec![clean.part(
            "collision-free first receipts",
            "first receipts with one transmitting neighbour",
        )],
    }
}

fn criterion_ls_ack(runs: &[LsRun]) -> CriterionReport {
    let mut deep = Tally::default();
    let mut depth_three = Tally::default();
    let mut shallow = Tally::default();
    for run in runs {
        let depth = run.chain_depth;
        let rep = verify_trace(
            &run.ls_ack,
            &run.graph,
            &run.lv,
            Expectations {
                level_timing: LevelTiming::Deadline,
            },
        );
        let expected = if depth % 2 == 1 {
            2 * (depth as u32 - 1)
        } else {
            2 * depth as u32
        };
        let got = || format!("{}: ack {:?}, expected {expected}", describe(run), rep.ack);
        match depth {
            0..=2 => shallow.record(rep.ack == AckStatus::NotApplicable, got),
            3 => depth_three.record(rep.ack == AckStatus::Arrived(expected), got),
            _ => deep.record(rep.ack == AckStatus::Arrived(expected) && rep.passed(), got),
        }
    }
    CriterionReport {
        id: 3,
        title: "two-bit broadcast: ack at 2(D-1) for odd D, 2D for even D",
        parts: vec![
            deep.part("D >= 4", "instances with the ack in the exact round"),
            depth_three.part("D = 3", "instances with the ack in the exact round"),
            shallow.part("D <= 2 not applicable", "instances reporting no ack"),
        ],
    }
}

fn criterion_oack(cfg: &SelftestConfig) -> CriterionReport {
    let mut rng = stream(cfg.seed, 4);
    let mut inform = Tally::default();
    let mut ack = Tally::default();
    for _ in 0..cfg.random_graphs {
        let n = rng.random_range(2..=30);
        let density = rng.random_range(0.0..0.35);
        let g = random_connected(&mut rng, n, density);
        let labels = label_oack(&g).expect("n >= 2");
        let t = run_simulation(
            &g,
            &labels,
            Protocol::Oack,
            b"payload",
            SimConfig::for_graph(&g),
        )
        .expect("valid inputs");
        let who = || format!("n={n} edges={} source={}", g.edge_count(), g.source());
        let bound = 2 * n as u32 - 3;
        let last = t.last_first_receipt();
        inform.record(t.completed && last.is_some_and(|r| r <= bound), || {
            format!("{}: last first receipt {last:?} > {bound}", who())
        });
        let ack_ok = matches!((t.ack_arrival, last), (Some(a), Some(l)) if a <= l + n as u32);
        ack.record(ack_ok, || {
            format!(
                "{}: ack {:?} after last receipt {last:?}",
                who(),
                t.ack_arrival
            )
        });
    }
    CriterionReport {
        id: 4,
        title: "three-bit broadcast: informed by 2n-3, ack within n rounds after",
        parts: vec![
            inform.part("informed by 2n-3", "graphs"),
            ack.part("ack within n rounds", "graphs"),
        ],
    }
}

fn criterion_reduction(cfg: &SelftestConfig) -> CriterionReport {
    let mut rng = stream(cfg.seed, 5);
    let mut agree = Tally::default();
    let mut directions = Tally::default();
    let (mut sat, mut unsat) = (0, 0);
    let mut formulas = vec![
        Formula::new(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]]).unwrap(),
        Formula::new(
            3,
            vec![
                [Literal::pos(0), Literal::pos(1), Literal::pos(2)],
                [Literal::neg(0), Literal::neg(1), Literal::neg(2)],
            ],
        )
        .unwrap(),
    ];
    for _ in 0..cfg.formulas {
        let k = rng.random_range(1..=4);
        let l = rng.random_range(1..=4);
        formulas.push(random_formula(&mut rng, k, l));
    }
    for (i, f) in formulas.iter().enumerate() {
        let truth = brute_force_1in3(f).expect("k <= 4").is_some();
        let gm = build_gadget(f);
        let separable = find_separation(&compute_levels(gm.graph()))
            .expect("small gadget")
            .is_some();
        if truth {
            sat += 1;
        } else {
            unsat += 1;
        }
        let fixed = match i {
            0 => truth,
            1 => !truth,
            _ => true,
        };
        agree.record(truth == separable && fixed, || {
            format!("formula #{i}: satisfiable={truth} separable={separable}")
        });
        let report = verify_reduction(f).expect("small formula");
        directions.record(report.holds(), || format!("formula #{i}: {report:?}"));
    }
    CriterionReport {
        id: 5,
        title: "1-in-3-SAT reduction: formula and gadget verdicts agree",
        parts: vec![
            agree.part(
                "verdicts agree",
                &format!("formulas ({sat} satisfiable, {unsat} not)"),
            ),
            directions.part("both constructions validate", "formulas"),
        ],
    }
}

fn criterion_checker(cfg: &SelftestConfig) -> CriterionReport {
    let mut rng = stream(cfg.seed, 6);
    let mut agree = Tally::default();
    let (mut accepted, mut rejected) = (0, 0);
    for i in 0..cfg.partitions {
        let depth = rng.random_range(1..=5);
        let sizes: Vec<usize> = (0..depth).map(|_| rng.random_range(1..=10)).collect();
        let (g, level_of) = random_layered(&mut rng, &sizes);
        let in_first: Vec<bool> = (0..g.node_count()).map(|_| rng.random_bool(0.5)).collect();
        let lv = compute_levels(&g);
        let sep = separation_from_parts(&lv, &in_first);
        let verdict = check_separation(&lv, &sep)
            .expect("well formed")
            .is_accept();
        let oracle = direct_condition(&g, &level_of, &in_first);
        if oracle {
            accepted += 1;
        } else {
            rejected += 1;
        }
        agree.record(verdict == oracle, || {
            format!("pair #{i}: checker {verdict}, direct {oracle}")
        });
    }
    CriterionReport {
        id: 6,
        title: "separation checker matches direct evaluation",
        parts: vec![agree.part(
            "checker agrees",
            &format!("pairs ({accepted} separating, {rejected} not)"),
        )],
    }
}

/// Bit widths read back from an emitted label file.
fn emitted_widths(text: &str) -> (String, Vec<usize>, usize) {
    let mut lines = text.lines();
    let scheme = lines
        .next()
        .unwrap_or("")
        .trim_start_matches("scheme ")
        .to_string();
    let bits: Vec<&str> = lines.filter_map(|l| l.split_whitespace().nth(1)).collect();
    let generators = bits.iter().filter(|&&b| b == "001").count();
    (scheme, bits.iter().map(|b| b.len()).collect(), generators)
}

fn criterion_label_widths(cfg: &SelftestConfig) -> CriterionReport {
    let mut rng = stream(cfg.seed, 7);
    let mut widths = Tally::default();
    let mut generator = Tally::default();
    for i in 0..cfg.label_graphs {
        let n = rng.random_range(2..=30);
        let density = rng.random_range(0.0..0.3);
        let g = random_connected(&mut rng, n, density);
        let (scheme, w, ones) = emitted_widths(&write_labels(&label_oack(&g).unwrap()));
        widths.record(
            scheme == "OACK3" && w.len() == n && w.iter().all(|&x| x == 3),
            || format!("graph #{i}: OACK3 widths {w:?}"),
        );
        generator.record(ones == 1, || {
            format!("graph #{i}: {ones} nodes labelled 001")
        });

        let size = rng.random_range(1..=40);
        let inst = augmented_separable(&mut rng, size);
        let lv = compute_levels(&inst.graph);
        let one = write_labels(&label_ls(&lv, &inst.separation).unwrap());
        let two = write_labels(&label_ls_ack(&lv, &inst.separation).unwrap().0);
        for (text, name, width) in [(one, "LS1", 1), (two, "LSACK2", 2)] {
            let (scheme, w, _) = emitted_widths(&text);
            widths.record(
                scheme == name
                    && w.len() == inst.graph.node_count()
                    && w.iter().all(|&x| x == width),
                || format!("graph #{i}: {name} widths {w:?}"),
            );
        }
    }
    CriterionReport {
        id: 7,
        title: "label files carry 1, 2 and 3 bits; exactly one 001 node",
        parts: vec![
            widths.part("widths", "label files"),
            generator.part("single 001 node", "three-bit label files"),
        ],
    }
}

fn criterion_ingestion() -> CriterionReport {
    let mut parts = Vec::new();
    match bundled_table("walking") {
        Err(e) => parts.push(part("walking table parses", false, e.to_string())),
        Ok(t) => {
            let chest = t.mean("navel", "chest");
            let ankle = t.mean("navel", "ankle");
            parts.push(part(
                "means",
                chest == Some(30.6) && ankle == Some(57.4),
                format!("navel-chest {chest:?}, navel-ankle {ankle:?}"),
            ));
            match derive_graph(&t, 50.0, "navel") {
                Ok(g) => parts.push(part(
                    "threshold 50 dB",
                    g.has_edge(0, 1) && !g.has_edge(0, 4),
                    format!(
                        "navel-chest kept: {}, navel-ankle kept: {}",
                        g.has_edge(0, 1),
                        g.has_edge(0, 4)
                    ),
                )),
                Err(e) => parts.push(part("threshold 50 dB", false, e.to_string())),
            }
        }
    }
    CriterionReport {
        id: 8,
        title: "bundled walking table and 50 dB threshold graph",
        parts,
    }
}

pub fn run_selftest(cfg: &SelftestConfig) -> Vec<CriterionReport> {
    let runs = separable_family(cfg);
    vec![
        criterion_ls_timing(&runs),
        criterion_ls_clean(&runs),
        criterion_ls_ack(&runs),
        criterion_oack(cfg),
        criterion_reduction(cfg),
        criterion_checker(cfg),
        criterion_label_widths(cfg),
        criterion_ingestion(),
    ]
}

/// One `PASS`/`FAIL` line per criterion, each part indented beneath it.
pub fn render(reports: &[CriterionReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let mark = |ok| if ok { "PASS" } else { "FAIL" };
        writeln!(out, "{} criterion {}: {}", mark(r.passed()), r.id, r.title).unwrap();
        for p in &r.parts {
            writeln!(out, "    {} {}: {}", mark(p.passed), p.name, p.summary).unwrap();
        }
    }
    out
}
