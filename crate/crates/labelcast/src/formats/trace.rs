use labelcast_core::simulator::Trace;
use serde_json::{json, Value};

/// One JSON object per simulated round, then a `summary` footer.
pub fn trace_records(trace: &Trace) -> Vec<Value> {
    let mut records: Vec<Value> = trace
        .rounds
        .iter()
        .map(|e| {
            let collisions: Vec<Value> = trace
                .collisions
                .iter()
                .filter(|c| c.round == e.round)
                .map(|c| json!({"node": c.node, "senders": c.senders, "receiver_informed": c.receiver_informed}))
                .collect();
            json!({
                "round": e.round,
                "transmitters": e.transmissions.iter()
                    .map(|(u, k)| json!({"node": u, "kind": k.name()}))
                    .collect::<Vec<_>>(),
                "receptions": e.receptions.iter()
                    .map(|(u, from, k)| json!({"node": u, "from": from, "kind": k.name()}))
                    .collect::<Vec<_>>(),
                "collisions": collisions,
            })
        })
        .collect();
    let first_receipt: serde_json::Map<String, Value> = trace
        .first_receipt
        .iter()
        .enumerate()
        .map(|(u, r)| (u.to_string(), json!(r)))
        .collect();
    records.push(json!({
        "summary": {
            "protocol": trace.protocol.name(),
            "node_count": trace.node_count,
            "source": trace.source,
            "completed": trace.completed,
            "first_receipt": first_receipt,
            "termination_round": trace.termination_round,
            "ack_arrival_round": trace.ack_arrival,
            "rounds_run": trace.rounds_run,
        }
    }));
    records
}

pub fn trace_to_jsonl(trace: &Trace) -> String {
    let mut out = String::new();
    for r in trace_records(trace) {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}
