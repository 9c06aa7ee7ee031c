//! Body-area-network channel attenuation tables and the graphs they induce.
//!
//! A table gives, for every unordered pair of the seven on-body positions, the
//! mean and standard deviation of path loss in dB for one posture. A link is
//! kept when its mean attenuation is strictly below the receiver threshold;
//! standard deviations are carried along but never used for edges.

use labelcast_core::graph::{Graph, GraphError, NodeId};

pub use crate::formats::parse_edge_list;

/// Position names in node-id order.
pub const POSITIONS: [&str; 7] = [
    "navel",
    "chest",
    "head",
    "upper arm",
    "ankle",
    "thigh",
    "wrist",
];

const PAIR_COUNT: usize = POSITIONS.len() * (POSITIONS.len() - 1) / 2;

/// Position id for a name; case-insensitive, `_` and `-` read as spaces.
pub fn position_id(name: &str) -> Option<NodeId> {
    let norm = name.trim().to_ascii_lowercase().replace(['_', '-'], " ");
    POSITIONS.iter().position(|&p| p == norm)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown position {name:?}")]
    UnknownPosition { line: usize, name: String },
    #[error("line {line}: pair ({a}, {b}) appears twice")]
    DuplicatePair { line: usize, a: String, b: String },
    #[error("pair ({a}, {b}) is missing")]
    MissingPair { a: String, b: String },
    #[error("threshold must be a positive number of dB, got {0}")]
    BadThreshold(f64),
    #[error("unknown source position {0:?}")]
    UnknownSource(String),
    #[error("no bundled posture matches {0:?}")]
    UnknownPosture(String),
    #[error("derived graph is disconnected: unreachable from the source: {}", .unreachable.join(", "))]
    Disconnected { unreachable: Vec<String> },
    #[error(transparent)]
    Graph(GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttenuationTable {
    posture: String,
    mean: [[f64; 7]; 7],
    stddev: [[f64; 7]; 7],
}

impl AttenuationTable {
    pub fn posture(&self) -> &str {
        &self.posture
    }

    pub fn mean(&self, a: &str, b: &str) -> Option<f64> {
        let (i, j) = (position_id(a)?, position_id(b)?);
        (i != j).then(|| self.mean[i][j])
    }

    pub fn stddev(&self, a: &str, b: &str) -> Option<f64> {
        let (i, j) = (position_id(a)?, position_id(b)?);
        (i != j).then(|| self.stddev[i][j])
    }

    pub fn mean_by_id(&self, a: NodeId, b: NodeId) -> f64 {
        self.mean[a][b]
    }
}

fn record_line(rec: &csv::StringRecord, fallback: usize) -> usize {
    rec.position().map_or(fallback, |p| p.line() as usize)
}

/// Parses a table: `#` comment lines (an optional `# posture: <name>`), a
/// header row naming the seven positions, then 21 rows `a,b,mean,stddev`.
pub fn parse_attenuation_csv(text: &str) -> Result<AttenuationTable, IngestError> {
    let posture = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("posture:"))
        .map(|p| p.trim().to_string())
        .unwrap_or_default();

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let csv_err = |e: csv::Error| IngestError::Syntax {
        line: e.position().map_or(0, |p| p.line() as usize),
        message: e.to_string(),
    };

    let header = records
        .next()
        .ok_or(IngestError::Syntax {
            line: 1,
            message: "missing header row".into(),
        })?
        .map_err(csv_err)?;
    let header_line = record_line(&header, 1);
    let mut seen = [false; 7];
    for name in header.iter() {
        let id = position_id(name).ok_or_else(|| IngestError::UnknownPosition {
            line: header_line,
            name: name.into(),
        })?;
        seen[id] = true;
    }
    if header.len() != 7 || seen.contains(&false) {
        return Err(IngestError::Syntax {
            line: header_line,
            message: format!(
                "header must name the seven positions: {}",
                POSITIONS.join(", ")
            ),
        });
    }

    let mut mean = [[0.0; 7]; 7];
    let mut stddev = [[0.0; 7]; 7];
    let mut filled = [[false; 7]; 7];
    for rec in records {
        let rec = rec.map_err(csv_err)?;
        let line = record_line(&rec, 0);
        let syntax = |message: String| IngestError::Syntax { line, message };
        if rec.len() != 4 {
            return Err(syntax(format!(
                "expected `a,b,mean,stddev`, found {} field(s)",
                rec.len()
            )));
        }
        let id = |name: &str| {
            position_id(name).ok_or_else(|| IngestError::UnknownPosition {
                line,
                name: name.into(),
            })
        };
        let (a, b) = (id(&rec[0])?, id(&rec[1])?);
        if a == b {
            return Err(syntax(format!(
                "pair ({}, {}) joins a position to itself",
                &rec[0], &rec[1]
            )));
        }
        let value = |s: &str, what: &str| -> Result<f64, IngestError> {
            match s.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
                _ => Err(syntax(format!(
                    "{what} must be a positive number, found {s:?}"
                ))),
            }
        };
        let (m, s) = (value(&rec[2], "mean")?, value(&rec[3], "stddev")?);
        if filled[a][b] {
            return Err(IngestError::DuplicatePair {
                line,
                a: POSITIONS[a].into(),
                b: POSITIONS[b].into(),
            });
        }
        for (x, y) in [(a, b), (b, a)] {
            mean[x][y] = m;
            stddev[x][y] = s;
            filled[x][y] = true;
        }
    }
    for a in 0..7 {
        for b in a + 1..7 {
            if !filled[a][b] {
                return Err(IngestError::MissingPair {
                    a: POSITIONS[a].into(),
                    b: POSITIONS[b].into(),
                });
            }
        }
    }
    debug_assert_eq!(
        filled.iter().flatten().filter(|&&f| f).count(),
        2 * PAIR_COUNT
    );
    Ok(AttenuationTable {
        posture,
        mean,
        stddev,
    })
}

/// Keeps link `(a, b)` iff its mean attenuation is strictly below `threshold_db`.
pub fn derive_graph(
    table: &AttenuationTable,
    threshold_db: f64,
    source: &str,
) -> Result<Graph, IngestError> {
    if !(threshold_db > 0.0 && threshold_db.is_finite()) {
        return Err(IngestError::BadThreshold(threshold_db));
    }
    let source_id = position_id(source).ok_or_else(|| IngestError::UnknownSource(source.into()))?;
    let mut edges = Vec::new();
    for a in 0..7 {
        for b in a + 1..7 {
            if table.mean[a][b] < threshold_db {
                edges.push((a, b));
            }
        }
    }
    Graph::new(POSITIONS.len(), edges, source_id).map_err(|e| match e {
        GraphError::Disconnected { unreachable } => IngestError::Disconnected {
            unreachable: unreachable
                .iter()
                .map(|&u| POSITIONS[u].to_string())
                .collect(),
        },
        other => IngestError::Graph(other),
    })
}

/// A posture table shipped with the crate.
#[derive(Debug, Clone, Copy)]
pub struct BundledPosture {
    pub number: u8,
    pub key: &'static str,
    pub file_name: &'static str,
    pub text: &'static str,
}

pub const BUNDLED: [BundledPosture; 7] = [
    BundledPosture {
        number: 1,
        key: "walking",
        file_name: "posture1_walking.csv",
        text: include_str!("../data/posture1_walking.csv"),
    },
    BundledPosture {
        number: 2,
        key: "running",
        file_name: "posture2_running.csv",
        text: include_str!("../data/posture2_running.csv"),
    },
    BundledPosture {
        number: 3,
        key: "walking_weakly",
        file_name: "posture3_walking_weakly.csv",
        text: include_str!("../data/posture3_walking_weakly.csv"),
    },
    BundledPosture {
        number: 4,
        key: "sitting_down",
        file_name: "posture4_sitting_down.csv",
        text: include_str!("../data/posture4_sitting_down.csv"),
    },
    BundledPosture {
        number: 5,
        key: "lying_down",
        file_name: "posture5_lying_down.csv",
        text: include_str!("../data/posture5_lying_down.csv"),
    },
    BundledPosture {
        number: 6,
        key: "sleeping",
        file_name: "posture6_sleeping.csv",
        text: include_str!("../data/posture6_sleeping.csv"),
    },
    BundledPosture {
        number: 7,
        key: "jacket",
        file_name: "posture7_jacket.csv",
        text: include_str!("../data/posture7_jacket.csv"),
    },
];

/// Looks a bundled posture up by number (`1`..`7`), key (`walking`) or file
/// name (`posture1_walking.csv`, with or without extension).
pub fn bundled_posture(name: &str) -> Result<&'static BundledPosture, IngestError> {
    let norm = name.trim().to_ascii_lowercase().replace([' ', '-'], "_");
    BUNDLED
        .iter()
        .find(|p| {
            norm == p.number.to_string()
                || norm == p.key
                || norm == p.file_name
                || Some(norm.as_str()) == p.file_name.strip_suffix(".csv")
        })
        .ok_or(IngestError::UnknownPosture(name.into()))
}

pub fn bundled_table(name: &str) -> Result<AttenuationTable, IngestError> {
    parse_attenuation_csv(bundled_posture(name)?.text)
}
