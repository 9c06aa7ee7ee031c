//! Command-line front end. [`run_cli`] never touches stdout/stderr itself; it
//! returns the report so the binary and the tests share one code path.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use labelcast_core::graph::{compute_levels, Graph, LevelView};
use labelcast_core::labelling::{label_ls, label_ls_ack, label_oack, AckChain, LabelSet, Scheme};
use labelcast_core::protocols::Protocol;
use labelcast_core::separability::{
    brute_force_1in3, build_gadget, check_separation, find_separation_with_cap, verify_reduction,
    Separation, Verdict, DEFAULT_LEVEL_CAP,
};
use labelcast_core::simulator::{
    run_simulation, verify_trace, AckStatus, Expectations, LevelTiming, SimConfig,
};

use crate::formats::{
    parse_edge_list, parse_formula, parse_labels, parse_separation, trace_to_jsonl,
    write_edge_list, write_labels, write_separation,
};
use crate::ingestion::{bundled_table, derive_graph, parse_attenuation_csv, POSITIONS};
use crate::selftest::{render, run_selftest, seed_from_env, SelftestConfig};

/// Every requested check passed.
pub const EXIT_OK: i32 = 0;
/// The command ran but a requested check failed (not separable, bound missed, ...).
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Command line did not match the grammar.
pub const EXIT_USAGE: i32 = 2;
/// An input file was unreadable or malformed, or an output could not be written.
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub status: i32,
    pub report: String,
    /// Structured output written by the command, if any.
    pub output_path: Option<PathBuf>,
}

impl CommandResult {
    fn new(status: i32, report: String) -> Self {
        CommandResult {
            status,
            report,
            output_path: None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "labelcast",
    version,
    about = "Labelling schemes for broadcast in collision-prone radio networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Timing {
    /// First receipt exactly at 2*level-2.
    Exact,
    /// First receipt anywhere in 2*level-3..=2*level-2.
    Deadline,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a given separation, or search for one when none is given.
    CheckSeparable {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        separation: Option<PathBuf>,
        /// Largest level size the search enumerates.
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        cap: usize,
    },
    /// Search for a separation and write it out.
    FindSeparation {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_LEVEL_CAP)]
        cap: usize,
    },
    /// Compute labels under OACK3, LS1 or LSACK2.
    Label {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        scheme: Scheme,
        /// Separation to label from (LS1/LSACK2); searched for when absent.
        #[arg(long)]
        separation: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a protocol round by round on a labelled graph.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// Compute labels with this scheme.
        #[arg(long, conflicts_with = "labels", required_unless_present = "labels")]
        scheme: Option<Scheme>,
        /// Read labels from a label file.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        protocol: Protocol,
        #[arg(long)]
        max_rounds: Option<u32>,
        /// Write a JSON-lines trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Check the run against the protocol's guarantees.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value = "payload")]
        payload: String,
        #[arg(long, value_enum, default_value_t = Timing::Exact)]
        timing: Timing,
    },
    /// Compare a 1-in-3-SAT formula with separability of its gadget graph.
    Reduce {
        #[arg(long)]
        formula: PathBuf,
        /// Also cross-check the assignment/separation constructions.
        #[arg(long)]
        verify: bool,
        /// Write the gadget graph as an edge list.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a body-area network graph from an attenuation table.
    DeriveWban {
        /// Bundled posture: name (walking, running, ...) or number 1-7.
        #[arg(long, required_unless_present = "table", conflicts_with = "table")]
        posture: Option<String>,
        /// Attenuation CSV instead of a bundled posture.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Keep a link iff its mean attenuation is below this many dB.
        #[arg(long)]
        threshold: f64,
        /// Position acting as the source.
        #[arg(long)]
        source: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite on generated instances (seed: LABELCAST_SEED).
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run_cli<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => dispatch(cli.command)
            .unwrap_or_else(|msg| CommandResult::new(EXIT_INPUT, format!("error: {msg}\n"))),
        Err(e) => {
            let status = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
            CommandResult::new(status, e.render().to_string())
        }
    }
}

type Outcome = Result<CommandResult, String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph, String> {
    parse_edge_list(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads a separation and checks it against `lv`; malformed files are errors.
fn load_separation(path: &Path, lv: &LevelView) -> Result<(Separation, Verdict), String> {
    let sep = parse_separation(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let verdict = check_separation(lv, &sep).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((sep, verdict))
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::CheckSeparable {
            graph,
            separation,
            cap,
        } => check_separable(&graph, separation.as_deref(), cap),
        Command::FindSeparation { graph, out, cap } => find(&graph, out, cap),
        Command::Label {
            graph,
            scheme,
            separation,
            out,
        } => label(&graph, scheme, separation.as_deref(), out),
        Command::Simulate {
            graph,
            scheme,
            labels,
            protocol,
            max_rounds,
            trace,
            verify,
            payload,
            timing,
        } => simulate(SimulateArgs {
            graph,
            scheme,
            labels,
            protocol,
            max_rounds,
            trace,
            verify,
            payload,
            timing,
        }),
        Command::Reduce {
            formula,
            verify,
            out,
        } => reduce(&formula, verify, out),
        Command::DeriveWban {
            posture,
            table,
            threshold,
            source,
            out,
        } => derive_wban(
            posture.as_deref(),
            table.as_deref(),
            threshold,
            &source,
            out,
        ),
        Command::Selftest { seed } => selftest(seed),
    }
}

/// Search result as a report: the separation, or why there is none.
fn search(lv: &LevelView, cap: usize) -> Result<Result<Separation, String>, String> {
    match find_separation_with_cap(lv, cap) {
        Ok(Some(sep)) => Ok(Ok(sep)),
        Ok(None) => Ok(Err(
            "not level-separable: some level admits no valid partition".into(),
        )),
        Err(e) => Err(e.to_string()),
    }
}

fn check_separable(graph: &Path, separation: Option<&Path>, cap: usize) -> Outcome {
    let g = load_graph(graph)?;
    let lv = compute_levels(&g);
    if let Some(path) = separation {
        return Ok(match load_separation(path, &lv)?.1 {
            Verdict::Accept => CommandResult::new(EXIT_OK, "accept: the separation is valid\n".into()),
            Verdict::Reject { node, level } => CommandResult::new(
                EXIT_CHECK_FAILED,
                format!(
                    "reject: node {node} at level {level} has neither exactly one parent in part 1 nor in part 2\n"
                ),
            ),
        });
    }
    Ok(match search(&lv, cap)? {
        Ok(sep) => CommandResult::new(EXIT_OK, format!("separable\n{}", write_separation(&sep))),
        Err(why) => CommandResult::new(EXIT_CHECK_FAILED, format!("{why}\n")),
    })
}

fn find(graph: &Path, out: Option<PathBuf>, cap: usize) -> Outcome {
    let g = load_graph(graph)?;
    let sep = match search(&compute_levels(&g), cap)? {
        Ok(sep) => sep,
        Err(why) => return Ok(CommandResult::new(EXIT_CHECK_FAILED, format!("{why}\n"))),
    };
    emit(write_separation(&sep), out, "separation")
}

/// Writes `text` to `out`, or returns it as the report.
fn emit(text: String, out: Option<PathBuf>, what: &str) -> Outcome {
    Ok(match out {
        None => CommandResult::new(EXIT_OK, text),
        Some(path) => {
            write(&path, &text)?;
            CommandResult {
                status: EXIT_OK,
                report: format!("wrote {what} to {}\n", path.display()),
                output_path: Some(path),
            }
        }
    })
}

/// Labels for `scheme`, with a note on the acknowledgement chain for LSACK2.
fn compute_labels(
    g: &Graph,
    scheme: Scheme,
    separation: Option<&Path>,
) -> Result<Result<(LabelSet, String), String>, String> {
    let lv = compute_levels(g);
    let separated = |lv: &LevelView| -> Result<Result<Separation, String>, String> {
        match separation {
            Some(path) => {
                let (sep, verdict) = load_separation(path, lv)?;
                Ok(match verdict {
                    Verdict::Accept => Ok(sep),
                    Verdict::Reject { node, level } => Err(format!(
                        "{}: not a valid separation (node {node} at level {level})",
                        path.display()
                    )),
                })
            }
            None => search(lv, DEFAULT_LEVEL_CAP),
        }
    };
    let labelled = match scheme {
        Scheme::Oack3 => label_oack(g).map(|l| (l, String::new())),
        Scheme::Ls1 => match separated(&lv)? {
            Ok(sep) => label_ls(&lv, &sep).map(|l| (l, String::new())),
            Err(why) => return Ok(Err(why)),
        },
        Scheme::LsAck2 => match separated(&lv)? {
            Ok(sep) => label_ls_ack(&lv, &sep).map(|(l, chain)| {
                let note = match chain {
                    AckChain::Marked(c) => format!("ack chain: {c:?}\n"),
                    AckChain::DegenerateDepth { eccentricity } => {
                        format!("no ack chain: eccentricity {eccentricity} is below 4\n")
                    }
                };
                (l, note)
            }),
            Err(why) => return Ok(Err(why)),
        },
    };
    labelled.map(Ok).map_err(|e| e.to_string())
}

fn label(graph: &Path, scheme: Scheme, separation: Option<&Path>, out: Option<PathBuf>) -> Outcome {
    let g = load_graph(graph)?;
    match compute_labels(&g, scheme, separation)? {
        Ok((labels, _)) => emit(write_labels(&labels), out, "labels"),
        Err(why) => Ok(CommandResult::new(EXIT_CHECK_FAILED, format!("{why}\n"))),
    }
}

struct SimulateArgs {
    graph: PathBuf,
    scheme: Option<Scheme>,
    labels: Option<PathBuf>,
    protocol: Protocol,
    max_rounds: Option<u32>,
    trace: Option<PathBuf>,
    verify: bool,
    payload: String,
    timing: Timing,
}

fn simulate(args: SimulateArgs) -> Outcome {
    let g = load_graph(&args.graph)?;
    let labels = match (&args.scheme, &args.labels) {
        (Some(scheme), _) => {
            if *scheme != args.protocol.expected_scheme() {
                return Ok(mismatch(args.protocol, *scheme));
            }
            match compute_labels(&g, *scheme, None)? {
                Ok((l, _)) => l,
                Err(why) => return Ok(CommandResult::new(EXIT_CHECK_FAILED, format!("{why}\n"))),
            }
        }
        (None, Some(path)) => {
            parse_labels(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, None) => unreachable!("clap requires --scheme or --labels"),
    };
    if labels.scheme() != args.protocol.expected_scheme() {
        return Ok(mismatch(args.protocol, labels.scheme()));
    }
    let mut config = SimConfig::for_graph(&g);
    if let Some(m) = args.max_rounds {
        config.max_rounds = m;
    }
    let trace = run_simulation(&g, &labels, args.protocol, args.payload.as_bytes(), config)
        .map_err(|e| e.to_string())?;

    let mut report = String::new();
    let opt = |r: Option<u32>| r.map_or_else(|| "none".to_string(), |r| r.to_string());
    writeln!(report, "protocol {}", trace.protocol).unwrap();
    writeln!(report, "nodes {} source {}", trace.node_count, trace.source).unwrap();
    writeln!(report, "completed {}", trace.completed).unwrap();
    writeln!(
        report,
        "last_first_receipt {}",
        opt(trace.last_first_receipt())
    )
    .unwrap();
    writeln!(report, "termination_round {}", opt(trace.termination_round)).unwrap();
    writeln!(report, "ack_arrival_round {}", opt(trace.ack_arrival)).unwrap();
    writeln!(report, "collisions {}", trace.collisions.len()).unwrap();
    writeln!(report, "rounds_run {}", trace.rounds_run).unwrap();
    for u in g.nodes() {
        writeln!(
            report,
            "node {u} first_receipt {}",
            opt(trace.first_receipt[u])
        )
        .unwrap();
    }

    let mut status = EXIT_OK;
    if args.verify {
        let level_timing = match args.timing {
            Timing::Exact => LevelTiming::Exact,
            Timing::Deadline => LevelTiming::Deadline,
        };
        let rep = verify_trace(
            &trace,
            &g,
            &compute_levels(&g),
            Expectations { level_timing },
        );
        for c in &rep.checks {
            match &c.violation {
                None => writeln!(report, "PASS {}", c.kind).unwrap(),
                Some(v) => writeln!(report, "FAIL {}: {v}", c.kind).unwrap(),
            }
        }
        for a in &rep.anomalies {
            writeln!(report, "note {a:?}").unwrap();
        }
        let ack = match rep.ack {
            AckStatus::NotApplicable => "not applicable".to_string(),
            AckStatus::Arrived(r) => format!("arrived in round {r}"),
            AckStatus::Missing => "missing".to_string(),
        };
        writeln!(report, "ack {ack}").unwrap();
        if !rep.passed() {
            status = EXIT_CHECK_FAILED;
        }
    }

    let mut output_path = None;
    if let Some(path) = args.trace {
        write(&path, &trace_to_jsonl(&trace))?;
        writeln!(report, "wrote trace to {}", path.display()).unwrap();
        output_path = Some(path);
    }
    Ok(CommandResult {
        status,
        report,
        output_path,
    })
}

fn mismatch(protocol: Protocol, scheme: Scheme) -> CommandResult {
    CommandResult::new(
        EXIT_USAGE,
        format!(
            "error: protocol {protocol} runs on {} labels, not {scheme}\n",
            protocol.expected_scheme()
        ),
    )
}

fn reduce(formula: &Path, verify: bool, out: Option<PathBuf>) -> Outcome {
    let f = parse_formula(&read(formula)?).map_err(|e| format!("{}: {e}", formula.display()))?;
    let gadget = build_gadget(&f);
    let mut report = format!(
        "formula: {} variable(s), {} clause(s)\ngadget: {} nodes, {} edges\n",
        f.var_count(),
        f.clauses().len(),
        gadget.graph().node_count(),
        gadget.graph().edge_count()
    );
    let satisfiable = brute_force_1in3(&f).map_err(|e| e.to_string())?.is_some();
    let separable = find_separation_with_cap(&compute_levels(gadget.graph()), DEFAULT_LEVEL_CAP)
        .map_err(|e| e.to_string())?
        .is_some();
    let word = |b| if b { "positive" } else { "negative" };
    writeln!(report, "1-in-3 satisfiable: {satisfiable}").unwrap();
    writeln!(report, "gadget separable: {separable}").unwrap();
    let mut ok = satisfiable == separable;
    if ok {
        writeln!(report, "both {}, agree", word(satisfiable)).unwrap();
    } else {
        writeln!(report, "disagree").unwrap();
    }
    if verify {
        let rep = verify_reduction(&f).map_err(|e| e.to_string())?;
        let show = |o: Option<bool>| match o {
            None => "not applicable",
            Some(true) => "ok",
            Some(false) => "FAILED",
        };
        writeln!(report, "assignment -> separation: {}", show(rep.forward_ok)).unwrap();
        writeln!(
            report,
            "separation -> assignment: {}",
            show(rep.backward_ok)
        )
        .unwrap();
        ok &= rep.holds();
    }
    let mut output_path = None;
    if let Some(path) = out {
        write(&path, &write_edge_list(gadget.graph()))?;
        writeln!(report, "wrote gadget to {}", path.display()).unwrap();
        output_path = Some(path);
    }
    Ok(CommandResult {
        status: if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
        report,
        output_path,
    })
}

fn derive_wban(
    posture: Option<&str>,
    table: Option<&Path>,
    threshold: f64,
    source: &str,
    out: Option<PathBuf>,
) -> Outcome {
    let table = match (posture, table) {
        (Some(p), _) => bundled_table(p).map_err(|e| e.to_string())?,
        (None, Some(path)) => {
            parse_attenuation_csv(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, None) => unreachable!("clap requires --posture or --table"),
    };
    let g = derive_graph(&table, threshold, source).map_err(|e| e.to_string())?;
    let mut report = format!(
        "posture {} threshold {threshold} dB source {source}\n",
        table.posture()
    );
    for (i, name) in POSITIONS.iter().enumerate() {
        writeln!(report, "node {i} = {name}").unwrap();
    }
    for &(a, b) in g.edges() {
        writeln!(
            report,
            "link {} - {} ({} dB)",
            POSITIONS[a],
            POSITIONS[b],
            table.mean_by_id(a, b)
        )
        .unwrap();
    }
    match out {
        None => {
            report.push_str(&write_edge_list(&g));
            Ok(CommandResult::new(EXIT_OK, report))
        }
        Some(path) => {
            write(&path, &write_edge_list(&g))?;
            writeln!(report, "wrote graph to {}", path.display()).unwrap();
            Ok(CommandResult {
                status: EXIT_OK,
                report,
                output_path: Some(path),
            })
        }
    }
}

fn selftest(seed: Option<u64>) -> Outcome {
    let seed = match seed {
        Some(s) => s,
        None => seed_from_env()?,
    };
    let reports = run_selftest(&SelftestConfig::with_seed(seed));
    let mut report = format!("seed {seed}\n");
    report.push_str(&render(&reports));
    let ok = reports.iter().all(|r| r.passed());
    Ok(CommandResult::new(
        if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
        report,
    ))
}
