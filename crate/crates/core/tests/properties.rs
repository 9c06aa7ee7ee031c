mod common;

use common::*;
use labelcast_core::graph::{compute_levels, Graph, LevelView, NodeId};
use labelcast_core::labelling::{
    compute_beta_schedule, label_ls, label_ls_ack, label_oack, oack_ack_path, AckChain, Label,
};
use labelcast_core::protocols::{Message, MessageKind, Protocol};
use labelcast_core::separability::{
    brute_force_1in3, build_gadget, check_separation, extract_assignment, find_separation,
    verify_reduction, Formula, Literal, Separation,
};
use labelcast_core::simulator::{
    resolve_round, run_simulation, verify_trace, AckStatus, CheckKind, Expectations, LevelTiming,
    SimConfig,
};
use proptest::prelude::*;

fn separation_from_bits(lv: &LevelView, in_first: &[bool]) -> Separation {
    let depth = lv.eccentricity();
    let parts = (1..depth.max(1))
        .map(|i| {
            let (a, b): (Vec<NodeId>, Vec<NodeId>) =
                lv.bucket(i).iter().partition(|&&u| in_first[u]);
            (a, b)
        })
        .collect();
    Separation::new(parts)
}

fn deadline() -> Expectations {
    Expectations {
        level_timing: LevelTiming::Deadline,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn levels_match_relaxation_oracle(g in connected_graph(24, 30)) {
        let lv = compute_levels(&g);
        let expected = oracle_levels(&g);
        prop_assert_eq!(lv.levels(), expected.as_slice());
        for u in g.nodes() {
            for &p in lv.parents(u) {
                prop_assert_eq!(lv.level(p) + 1, lv.level(u));
                prop_assert!(lv.sons(p).contains(&u));
            }
        }
        let total: usize = lv.buckets().iter().map(Vec::len).sum();
        prop_assert_eq!(total, g.node_count());
    }

    #[test]
    fn checker_agrees_with_direct_evaluation(
        g in layered_graph(14, 14),
        bits in proptest::collection::vec(any::<bool>(), 14),
    ) {
        let lv = compute_levels(&g);
        let sep = separation_from_bits(&lv, &bits);
        let verdict = check_separation(&lv, &sep).unwrap();
        prop_assert_eq!(verdict.is_accept(), oracle_condition_holds(&g, &bits));
    }

    #[test]
    fn search_agrees_with_exhaustive_colouring(g in layered_graph(12, 12)) {
        let lv = compute_levels(&g);
        let found = find_separation(&lv).unwrap();
        prop_assert_eq!(found.is_some(), oracle_separable(&g));
        if let Some(sep) = found {
            prop_assert!(check_separation(&lv, &sep).unwrap().is_accept());
        }
    }

    #[test]
    fn trees_are_separable(g in tree(40)) {
        let lv = compute_levels(&g);
        prop_assert!(check_separation(&lv, &Separation::all_first(&lv)).unwrap().is_accept());
        prop_assert!(find_separation(&lv).unwrap().is_some());
    }

    #[test]
    fn schedule_invariants(g in connected_graph(24, 30)) {
        let n = g.node_count();
        let s = compute_beta_schedule(&g);
        prop_assert_eq!(s.informed_round[g.source()], -1);
        if n >= 2 {
            prop_assert!(s.last_informed_round() <= 2 * n as i64 - 3);
        }
        for (j, (frontier, dom)) in s.frontier_history.iter().zip(&s.dominator_history).enumerate() {
            for &f in frontier {
                prop_assert!(dom.iter().any(|&d| g.has_edge(d, f)), "stage {} misses {}", j, f);
            }
            // Minimal: every member has a frontier node only it covers.
            for &d in dom {
                let private = frontier.iter().any(|&f| {
                    g.has_edge(d, f) && dom.iter().filter(|&&e| g.has_edge(e, f)).count() == 1
                });
                prop_assert!(private);
            }
            if j > 0 {
                let prev = &s.dominator_history[j - 1];
                let retained = dom.iter().filter(|d| prev.contains(d)).count();
                prop_assert_eq!(s.stay_history[j].len(), retained);
                for &v in &s.stay_history[j] {
                    prop_assert_eq!(s.informed_round[v], 2 * j as i64 - 2);
                }
            }
        }
    }

    #[test]
    fn oack_labels_shape(g in connected_graph(24, 30)) {
        prop_assume!(g.node_count() >= 2);
        let labels = label_oack(&g).unwrap();
        let generator = Label::new(false, false, true);
        prop_assert_eq!(labels.labels().iter().filter(|&&l| l == generator).count(), 1);
        prop_assert_eq!(labels.get(g.source()), Label::ZERO);

        let s = compute_beta_schedule(&g);
        let path = oack_ack_path(&g, &s);
        let marked: Vec<NodeId> = g.nodes().filter(|&u| labels.get(u).x3()).collect();
        let mut sorted = path.clone();
        sorted.sort_unstable();
        prop_assert_eq!(&marked, &sorted);
        prop_assert!(g.has_edge(*path.last().unwrap(), g.source()));
        for w in path.windows(2) {
            prop_assert!(g.has_edge(w[0], w[1]));
            prop_assert!(s.informed_round[w[0]] > s.informed_round[w[1]]);
        }
        for (i, &a) in path.iter().enumerate() {
            for &b in path.iter().skip(i + 2) {
                prop_assert!(!g.has_edge(a, b));
            }
        }
    }

    #[test]
    fn oack_run_follows_the_offline_schedule(g in connected_graph(24, 30)) {
        prop_assume!(g.node_count() >= 2);
        let n = g.node_count();
        let labels = label_oack(&g).unwrap();
        let s = compute_beta_schedule(&g);
        let t = run_simulation(&g, &labels, Protocol::Oack, b"mu", SimConfig::for_graph(&g)).unwrap();
        prop_assert!(t.completed);
        for u in g.nodes().filter(|&u| u != g.source()) {
            prop_assert_eq!(t.first_receipt[u].map(i64::from), Some(s.informed_round[u]));
        }
        for u in g.nodes() {
            let sent: Vec<u32> = t.rounds.iter()
                .filter(|e| e.transmissions.contains(&(u, MessageKind::Data)))
                .map(|e| e.round)
                .collect();
            prop_assert_eq!(&sent, &s.transmit_rounds[u]);
        }
        let rep = verify_trace(&t, &g, &compute_levels(&g), Expectations::default());
        prop_assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        prop_assert!(rep.anomalies.is_empty(), "{:?}", rep.anomalies);
        let last = t.last_first_receipt().unwrap();
        prop_assert!(t.ack_arrival.unwrap() <= last + n as u32);
    }

    #[test]
    fn ls_runs_meet_the_level_deadlines(g in layered_graph(30, 20)) {
        let lv = compute_levels(&g);
        let Some(sep) = find_separation(&lv).unwrap() else { return Ok(()); };
        let labels = label_ls(&lv, &sep).unwrap();
        prop_assert_eq!(labels.len(), g.node_count());
        let t = run_simulation(&g, &labels, Protocol::Ls, b"mu", SimConfig::for_graph(&g)).unwrap();
        let rep = verify_trace(&t, &g, &lv, deadline());
        prop_assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        // Each node relays exactly once.
        for u in g.nodes() {
            let count = t.rounds.iter().filter(|e| e.transmissions.contains(&(u, MessageKind::Data))).count();
            prop_assert_eq!(count, 1);
        }
        prop_assert!(t.termination_round.unwrap() <= 2 * lv.eccentricity() as u32);
    }

    #[test]
    fn ls_ack_runs_deliver_the_ack_on_time(g in layered_graph(30, 20)) {
        let lv = compute_levels(&g);
        let Some(sep) = find_separation(&lv).unwrap() else { return Ok(()); };
        let (labels, chain) = label_ls_ack(&lv, &sep).unwrap();
        let depth = lv.eccentricity();
        match &chain {
            AckChain::Marked(nodes) => {
                prop_assert!(depth >= 4);
                prop_assert_eq!(nodes.len(), depth / 2 - 1);
                for (k, &u) in nodes.iter().rev().enumerate() {
                    prop_assert_eq!(lv.level(u), k + 1);
                }
            }
            AckChain::DegenerateDepth { .. } => prop_assert!(depth <= 3),
        }
        let marked = g.nodes().filter(|&u| labels.get(u).x2()).count();
        prop_assert_eq!(marked, chain.nodes().len());

        let t = run_simulation(&g, &labels, Protocol::LsAck, b"mu", SimConfig::for_graph(&g)).unwrap();
        let rep = verify_trace(&t, &g, &lv, deadline());
        prop_assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        prop_assert!(rep.anomalies.is_empty(), "{:?}", rep.anomalies);
        if depth >= 4 {
            prop_assert_eq!(rep.ack, AckStatus::Arrived(4 * (depth / 2) as u32));
        } else {
            prop_assert_eq!(rep.ack, AckStatus::NotApplicable);
        }
    }

    #[test]
    fn simulation_is_deterministic(g in layered_graph(20, 10)) {
        let lv = compute_levels(&g);
        let sep = find_separation(&lv).unwrap().unwrap_or_else(|| Separation::all_first(&lv));
        if let Ok((labels, _)) = label_ls_ack(&lv, &sep) {
            let cfg = SimConfig::for_graph(&g);
            let a = run_simulation(&g, &labels, Protocol::LsAck, b"x", cfg).unwrap();
            let b = run_simulation(&g, &labels, Protocol::LsAck, b"x", cfg).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn resolution_matches_the_counting_rule(
        g in connected_graph(16, 20),
        senders in proptest::collection::vec(any::<bool>(), 16),
    ) {
        let out: Vec<Option<Message>> = g.nodes()
            .map(|u| senders[u].then(|| Message::data(&[u as u8])))
            .collect();
        let got = resolve_round(&g, &out);
        for u in g.nodes() {
            let talking: Vec<NodeId> = g.nodes().filter(|&v| g.has_edge(u, v) && senders[v]).collect();
            let expected = if senders[u] || talking.len() != 1 {
                None
            } else {
                Some(Message::data(&[talking[0] as u8]))
            };
            prop_assert_eq!(&got[u], &expected);
        }
    }

    #[test]
    fn reduction_agrees_with_truth_table(
        k in 1usize..=4,
        raw in proptest::collection::vec(proptest::collection::vec((0usize..4, any::<bool>()), 3), 0..=4),
    ) {
        let clauses: Vec<[Literal; 3]> = raw.into_iter().filter_map(|c| {
            let lits: Vec<Literal> = c.into_iter().map(|(v, pos)| Literal { var: v % k, positive: pos }).collect();
            let distinct = lits[0] != lits[1] && lits[0] != lits[2] && lits[1] != lits[2];
            distinct.then(|| [lits[0], lits[1], lits[2]])
        }).collect();
        let f = Formula::new(k, clauses.clone()).unwrap();
        let signed: Vec<[i32; 3]> = clauses.iter()
            .map(|c| c.map(|l| l.to_signed() as i32))
            .collect();
        let truth = oracle_one_in_three(k, &signed);
        prop_assert_eq!(brute_force_1in3(&f).unwrap().is_some(), truth);

        let gm = build_gadget(&f);
        let lv = compute_levels(gm.graph());
        let found = find_separation(&lv).unwrap();
        prop_assert_eq!(found.is_some(), truth);
        if let Some(sep) = found {
            let a = extract_assignment(&gm, &sep).unwrap();
            prop_assert!(f.exactly_one_satisfied(&a));
        }
        prop_assert!(verify_reduction(&f).unwrap().holds());
    }
}

#[test]
fn augmented_graphs_receive_early_under_exact_timing() {
    // Two parents split across parts: the early-slot parent informs the child
    // one round before the exact deadline.
    let g: Graph = labelcast_core::build_graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0).unwrap();
    let lv = compute_levels(&g);
    let sep = find_separation(&lv).unwrap().unwrap();
    let labels = label_ls(&lv, &sep).unwrap();
    let t = run_simulation(&g, &labels, Protocol::Ls, b"m", SimConfig::for_graph(&g)).unwrap();
    assert_eq!(t.first_receipt[3], Some(1));
    let exact = verify_trace(&t, &g, &lv, Expectations::default());
    assert!(!exact.check(CheckKind::LevelTiming).unwrap().passed());
    assert!(verify_trace(&t, &g, &lv, deadline()).passed());
}
