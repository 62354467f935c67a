//! Text artifacts: trace and sweep CSV, P2 graymap heatmaps, run manifests.
//!
//! Floats are written as `{:.16e}` (17 significant digits) so every `f64`
//! survives a text round-trip exactly.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{parse_error, Result};
use crate::simulator::{CurveRow, EvolutionTrace};

/// Largest gray level in exported heatmaps.
pub const PGM_MAXVAL: u32 = 65535;

// Plain PGM lines should stay within 70 characters.
const PGM_LINE: usize = 70;

fn channel_header(out: &mut String, first: &str, dim: usize) {
    out.push_str(first);
    for k in 1..=dim {
        let _ = write!(out, ",ch{k}");
    }
    out.push('\n');
}

/// `stage,ch1,...,ch{2p}` with one row per stage.
pub fn trace_csv(trace: &EvolutionTrace) -> String {
    let mut out = String::new();
    channel_header(&mut out, "stage", 2 * trace.p());
    for (d, probs) in trace.stages().iter().enumerate() {
        let _ = write!(out, "{d}");
        for x in probs {
            let _ = write!(out, ",{x:.16e}");
        }
        out.push('\n');
    }
    out
}

/// `theta,ch1,...` with one row per sweep angle.
pub fn curves_csv(rows: &[CurveRow]) -> String {
    let dim = rows.first().map_or(0, |r| r.probabilities.len());
    let mut out = String::new();
    channel_header(&mut out, "theta", dim);
    for row in rows {
        let _ = write!(out, "{:.16e}", row.theta.radians());
        for x in &row.probabilities {
            let _ = write!(out, ",{x:.16e}");
        }
        out.push('\n');
    }
    out
}

/// Parsed CSV table: header plus numeric rows (first column included).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| parse_error("csv", text, "missing header"))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let row = line
                .split(',')
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| parse_error("csv field", f, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(parse_error(
                    "csv row",
                    line,
                    format!("expected {} fields", header.len()),
                ));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

/// Gray level for probability `prob`.
pub fn gray_level(prob: f64) -> u32 {
    (prob * PGM_MAXVAL as f64)
        .round()
        .clamp(0.0, PGM_MAXVAL as f64) as u32
}

/// ASCII graymap (P2): one pixel row per stage, one column per channel.
pub fn trace_pgm(trace: &EvolutionTrace) -> String {
    let width = 2 * trace.p();
    let height = trace.len();
    let mut out = format!("P2\n{width} {height}\n{PGM_MAXVAL}\n");
    for probs in trace.stages() {
        let mut line = String::new();
        for &x in probs {
            let px = gray_level(x).to_string();
            if !line.is_empty() && line.len() + 1 + px.len() > PGM_LINE {
                out.push_str(&line);
                out.push('\n');
                line.clear();
            }
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(&px);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// A decoded graymap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graymap {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    pub pixels: Vec<u32>,
}

impl Graymap {
    pub fn pixel(&self, row: usize, col: usize) -> u32 {
        self.pixels[row * self.width + col]
    }
}

pub fn parse_pgm(text: &str) -> Result<Graymap> {
    let bad = |reason: &str| parse_error("pgm", "", reason);
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P2") {
        return Err(bad("missing P2 magic"));
    }
    let mut num = || -> Result<u32> {
        tokens
            .next()
            .ok_or_else(|| bad("truncated"))?
            .parse::<u32>()
            .map_err(|e| bad(&e.to_string()))
    };
    let width = num()? as usize;
    let height = num()? as usize;
    let maxval = num()?;
    let pixels = (0..width * height)
        .map(|_| num())
        .collect::<Result<Vec<_>>>()?;
    if pixels.iter().any(|&p| p > maxval) {
        return Err(bad("pixel above maxval"));
    }
    Ok(Graymap {
        width,
        height,
        maxval,
        pixels,
    })
}

/// How the device angles of a run were chosen.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ThetaPolicy {
    Uniform {
        theta: f64,
    },
    File {
        path: String,
        default_theta: Option<f64>,
        /// Resolved angles in row-major grid order.
        thetas: Vec<f64>,
    },
    Random {
        mean_t: f64,
        sigma_t: f64,
        seed: u64,
        /// Raw draws in row-major grid order, before clamping to [0, 100].
        sampled_transmissions: Vec<f64>,
    },
    Preset {
        name: String,
    },
}

/// Everything needed to repeat a run with the same build.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub schedule: String,
    pub p: usize,
    pub input: String,
    pub policy: ThetaPolicy,
    pub detector_labels: String,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
