//! File formats: JSON reports, sweep CSV, binary PPM and edge-list graphs.

use std::fmt::Write as _;
use std::io::{self, Write};

use circplane_core::explore::SweepRow;
use circplane_core::finite::FiniteGraph;
use circplane_core::render::Raster;
use circplane_core::Point;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Graph { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(#[from] circplane_core::Error),
    #[error("invalid PPM: {0}")]
    Ppm(&'static str),
}

/// Pretty JSON with a trailing newline; fields appear in declaration order.
pub fn write_json<W: Write + ?Sized, T: Serialize>(out: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")
}

pub const SWEEP_HEADER: &str = "epsilon,r,certified,min_margin";

fn opt_field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with header `epsilon,r,certified,min_margin`; missing values are empty fields.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for row in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            row.epsilon,
            opt_field(row.r),
            row.certified,
            opt_field(row.min_margin)
        );
    }
    s
}

/// Binary PPM: `P6\n{W} {H}\n255\n` then the RGB triples, top row first.
pub fn encode_ppm(img: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.rgb);
    out
}

fn ppm_token<'a>(data: &'a [u8], pos: &mut usize) -> Result<&'a [u8], FormatError> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if data.get(*pos) == Some(&b'#') {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            break;
        }
    }
    let start = *pos;
    while *pos < data.len() && !data[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err(FormatError::Ppm("truncated header"));
    }
    Ok(&data[start..*pos])
}

fn ppm_number(data: &[u8], pos: &mut usize) -> Result<usize, FormatError> {
    std::str::from_utf8(ppm_token(data, pos)?)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or(FormatError::Ppm("bad number in header"))
}

/// Decodes a P6 image with maximum value 255.
pub fn decode_ppm(data: &[u8]) -> Result<Raster, FormatError> {
    let mut pos = 0;
    if ppm_token(data, &mut pos)? != b"P6" {
        return Err(FormatError::Ppm("missing P6 magic"));
    }
    let width = ppm_number(data, &mut pos)?;
    let height = ppm_number(data, &mut pos)?;
    if ppm_number(data, &mut pos)? != 255 {
        return Err(FormatError::Ppm("maximum value must be 255"));
    }
    if !data.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(FormatError::Ppm("truncated header"));
    }
    let body = &data[pos + 1..];
    if body.len() != 3 * width * height {
        return Err(FormatError::Ppm("pixel data length does not match dimensions"));
    }
    Ok(Raster {
        width,
        height,
        rgb: body.to_vec(),
    })
}

/// Parses an edge list.
///
/// Each line is `u v` with zero-based vertex indices; `#` starts a comment.
/// A line reading `# coords` switches to coordinates, one `x y` line per
/// vertex in index order. The vertex count is the larger of the highest
/// index plus one and the number of coordinate lines.
pub fn parse_graph(text: &str) -> Result<FiniteGraph, FormatError> {
    let mut edges = Vec::new();
    let mut coords: Option<Vec<Point>> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: &str| FormatError::Graph {
            line: i + 1,
            msg: msg.to_string(),
        };
        if let Some(comment) = line.strip_prefix('#') {
            if comment.trim() == "coords" {
                if coords.is_some() {
                    return Err(err("second coords block"));
                }
                coords = Some(Vec::new());
            }
            continue;
        }
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err("expected two fields"));
        }
        match &mut coords {
            None => {
                let u = fields[0].parse::<usize>().map_err(|_| err("bad vertex index"))?;
                let v = fields[1].parse::<usize>().map_err(|_| err("bad vertex index"))?;
                edges.push((u, v));
            }
            Some(pts) => {
                let x = fields[0].parse::<f64>().map_err(|_| err("bad coordinate"))?;
                let y = fields[1].parse::<f64>().map_err(|_| err("bad coordinate"))?;
                if !x.is_finite() || !y.is_finite() {
                    return Err(err("non-finite coordinate"));
                }
                pts.push(Point::new(x, y));
            }
        }
    }
    let from_edges = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = from_edges.max(coords.as_ref().map_or(0, Vec::len));
    Ok(FiniteGraph::new(n, edges, coords)?)
}

/// Inverse of [`parse_graph`]. Coordinates use shortest round-trip formatting.
pub fn format_graph(g: &FiniteGraph) -> String {
    let mut s = format!("# {} vertices, {} edges\n", g.n(), g.edges().len());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    if let Some(pts) = g.coords() {
        s.push_str("# coords\n");
        for p in pts {
            let _ = writeln!(s, "{:?} {:?}", p.x, p.y);
        }
    }
    s
}
