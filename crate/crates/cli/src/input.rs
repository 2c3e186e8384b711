//! Line-oriented input, from a file or stdin (`-`).
//!
//! Two row encodings are accepted and may be mixed: delimited tokens
//! (comma or whitespace, decided per line) and JSON objects (`{"x": ...,
//! "z": ...}` or `{"x": ..., "y": ..., "w": ...}`). Blank lines and `#`
//! comments are skipped, and a leading header row is tolerated when none
//! of its fields is numeric. Every rejection names its 1-based line
//! number.

use std::fs;
use std::io::Read;

use anyhow::{bail, Context, Result};
use serde_json::{Map, Value};

/// `(score, loss)` rows for `fit` and `stream`.
pub struct PairRows {
    pub rows: Vec<(f64, f64)>,
    /// The same losses as integers, when every loss is written as one;
    /// exact arithmetic is then available.
    pub int_losses: Option<Vec<i64>>,
}

/// `(score, label[, weight])` rows for `calibrate`.
pub struct LabeledRows {
    pub xs: Vec<f64>,
    pub ys: Vec<u8>,
    pub ws: Option<Vec<f64>>,
}

enum Row<'a> {
    Tokens(Vec<&'a str>),
    Json(Map<String, Value>),
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Data rows with their 1-based line numbers, header and comments removed.
fn data_lines(text: &str) -> Result<Vec<(usize, Row<'_>)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('{') {
            let v: Value = serde_json::from_str(line)
                .with_context(|| format!("line {lineno}: invalid JSON row"))?;
            match v {
                Value::Object(map) => out.push((lineno, Row::Json(map))),
                other => bail!("line {lineno}: expected a JSON object, got {other}"),
            }
            continue;
        }
        let f = fields(line);
        if out.is_empty() && f.iter().all(|t| t.parse::<f64>().is_err()) {
            continue;
        }
        out.push((lineno, Row::Tokens(f)));
    }
    Ok(out)
}

fn finite(v: f64, what: &str, lineno: usize) -> Result<f64> {
    if !v.is_finite() {
        bail!("line {lineno}: {what} must be finite, got {v}");
    }
    Ok(v)
}

fn parse_number(token: &str, what: &str, lineno: usize) -> Result<f64> {
    token
        .parse()
        .with_context(|| format!("line {lineno}: expected a {what}, got {token:?}"))
}

fn json_number(map: &Map<String, Value>, key: &str, what: &str, lineno: usize) -> Result<f64> {
    let v = map
        .get(key)
        .with_context(|| format!("line {lineno}: missing key {key:?}"))?;
    v.as_f64()
        .with_context(|| format!("line {lineno}: expected a {what} for {key:?}, got {v}"))
}

pub fn read_pairs(path: &str) -> Result<PairRows> {
    let text = read_source(path)?;
    let mut rows = Vec::new();
    let mut ints = Some(Vec::new());
    for (lineno, row) in data_lines(&text)? {
        let (x, z, z_int) = match row {
            Row::Tokens(f) => {
                if f.len() != 2 {
                    bail!(
                        "line {lineno}: expected 2 fields (score, loss), got {}",
                        f.len()
                    );
                }
                let x = finite(parse_number(f[0], "score", lineno)?, "score", lineno)?;
                let z = finite(parse_number(f[1], "loss", lineno)?, "loss", lineno)?;
                (x, z, f[1].parse::<i64>().ok())
            }
            Row::Json(map) => {
                let x = finite(json_number(&map, "x", "score", lineno)?, "score", lineno)?;
                let z = finite(json_number(&map, "z", "loss", lineno)?, "loss", lineno)?;
                // Integer detection mirrors the token rule: `3` is exact,
                // `3.0` is not.
                (x, z, map["z"].as_i64())
            }
        };
        match (ints.as_mut(), z_int) {
            (Some(v), Some(iv)) => v.push(iv),
            _ => ints = None,
        }
        rows.push((x, z));
    }
    Ok(PairRows {
        rows,
        int_losses: ints,
    })
}

pub fn read_labeled(path: &str) -> Result<LabeledRows> {
    let text = read_source(path)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut ws: Option<Vec<f64>> = None;
    for (lineno, row) in data_lines(&text)? {
        // The first row fixes the arity; later rows must match it.
        let weighted = match ws {
            Some(_) => true,
            None if xs.is_empty() => match &row {
                Row::Tokens(f) => f.len() == 3,
                Row::Json(map) => map.contains_key("w"),
            },
            None => false,
        };
        let (x, y_raw, w) = match row {
            Row::Tokens(f) => {
                let want = if weighted { 3 } else { 2 };
                if f.len() != want {
                    bail!(
                        "line {lineno}: expected {want} fields (score, label{}), got {}",
                        if weighted { ", weight" } else { "" },
                        f.len()
                    );
                }
                let x = finite(parse_number(f[0], "score", lineno)?, "score", lineno)?;
                let y: f64 = f[1].parse().with_context(|| {
                    format!("line {lineno}: label must be 0 or 1, got {:?}", f[1])
                })?;
                let w = if weighted {
                    Some(parse_number(f[2], "weight", lineno)?)
                } else {
                    None
                };
                (x, y, w)
            }
            Row::Json(map) => {
                let x = finite(json_number(&map, "x", "score", lineno)?, "score", lineno)?;
                let y = json_number(&map, "y", "label", lineno)?;
                let w = match (weighted, map.contains_key("w")) {
                    (true, true) => Some(json_number(&map, "w", "weight", lineno)?),
                    (false, false) => None,
                    _ => bail!("line {lineno}: weight key \"w\" must appear on every row or none"),
                };
                (x, y, w)
            }
        };
        if y_raw != 0.0 && y_raw != 1.0 {
            bail!("line {lineno}: label must be 0 or 1, got {y_raw}");
        }
        xs.push(x);
        ys.push(y_raw as u8);
        if let Some(w) = w {
            if !(w > 0.0 && w.is_finite()) {
                bail!("line {lineno}: weight must be positive and finite, got {w}");
            }
            ws.get_or_insert_with(Vec::new).push(w);
        }
    }
    Ok(LabeledRows { xs, ys, ws })
}
