mod common;

use common::{path, star};
use labelcast_core::graph::{build_graph, compute_levels};
use labelcast_core::labelling::{
    compute_beta_schedule, label_ls, label_ls_ack, label_oack, AckChain,
};
use labelcast_core::protocols::Protocol;
use labelcast_core::separability::{find_separation, Separation};
use labelcast_core::simulator::{run_simulation, verify_trace, AckStatus, Expectations, SimConfig};

#[test]
fn path_of_four_schedule_and_labels() {
    let g = path(4);
    let s = compute_beta_schedule(&g);
    assert_eq!(s.informed_round, vec![-1, 0, 2, 4]);
    let l = label_oack(&g).unwrap();
    let bits: Vec<_> = (0..4).map(|u| l.bits(u)).collect();
    assert_eq!(bits, ["000", "101", "101", "001"]);
}

#[test]
fn path_of_four_one_bit_run() {
    let g = path(4);
    let lv = compute_levels(&g);
    let sep = find_separation(&lv).unwrap().unwrap();
    let labels = label_ls(&lv, &sep).unwrap();
    let t = run_simulation(&g, &labels, Protocol::Ls, b"mu", SimConfig::for_graph(&g)).unwrap();
    assert_eq!(t.first_receipt, vec![None, Some(0), Some(2), Some(4)]);
    assert_eq!(t.termination_round, Some(6));
    assert!(verify_trace(&t, &g, &lv, Expectations::default()).passed());
}

#[test]
fn star_one_bit_run_terminates_at_two() {
    let g = star(5);
    let lv = compute_levels(&g);
    let labels = label_ls(&lv, &Separation::all_first(&lv)).unwrap();
    let t = run_simulation(&g, &labels, Protocol::Ls, b"mu", SimConfig::for_graph(&g)).unwrap();
    assert!(t.first_receipt[1..].iter().all(|&r| r == Some(0)));
    assert_eq!(t.termination_round, Some(2));
}

#[test]
fn star_three_bit_labels() {
    let g = star(4);
    let l = label_oack(&g).unwrap();
    assert_eq!(l.bits(1), "001");
    assert!((2..=4).all(|u| l.bits(u) == "000"));
}

#[test]
fn path_of_four_three_bit_run() {
    let g = path(4);
    let labels = label_oack(&g).unwrap();
    let t = run_simulation(&g, &labels, Protocol::Oack, b"mu", SimConfig::for_graph(&g)).unwrap();
    assert_eq!(t.first_receipt, vec![None, Some(0), Some(2), Some(4)]);
    // Generator 3 acks at 5; 2 relays at 6, 1 at 7; the source hears it at 7.
    assert_eq!(t.ack_arrival, Some(7));
    assert!(t.ack_arrival.unwrap() <= 5 + 4);
    assert!(verify_trace(&t, &g, &compute_levels(&g), Expectations::default()).passed());
}

#[test]
fn two_bit_ack_on_paths_of_seven_and_eight() {
    for (n, chain) in [(7, vec![2, 1]), (8, vec![2, 1])] {
        let g = path(n);
        let lv = compute_levels(&g);
        let sep = find_separation(&lv).unwrap().unwrap();
        let (labels, got) = label_ls_ack(&lv, &sep).unwrap();
        assert_eq!(got, AckChain::Marked(chain));
        let t = run_simulation(
            &g,
            &labels,
            Protocol::LsAck,
            b"mu",
            SimConfig::for_graph(&g),
        )
        .unwrap();
        let rep = verify_trace(&t, &g, &lv, Expectations::default());
        assert!(
            rep.passed(),
            "n={n}: {:?}",
            rep.failures().collect::<Vec<_>>()
        );
        assert_eq!(rep.ack, AckStatus::Arrived(12), "n={n}");
    }
}

#[test]
fn diamond_separation_and_labels() {
    let g = build_graph(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0).unwrap();
    let lv = compute_levels(&g);
    let sep = find_separation(&lv).unwrap().unwrap();
    let l = label_ls(&lv, &sep).unwrap();
    assert_eq!((l.bits(1).as_str(), l.bits(2).as_str()), ("1", "0"));
}

#[test]
fn single_node_has_nothing_to_label() {
    let g = path(1);
    let lv = compute_levels(&g);
    let l = label_ls(&lv, &Separation::all_first(&lv)).unwrap();
    assert_eq!(l.len(), 1);
    assert_eq!(l.bits(0), "0");
}
