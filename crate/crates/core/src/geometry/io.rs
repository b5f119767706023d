//! Point-set files.
//!
//! Text form: a header line `q <modulus>` followed by one `x1 x2` pair per
//! line (decimal residues, whitespace separated). Blank lines are ignored and
//! repeated points are rejected.
//!
//! JSON form: `{"q": 7, "points": [[0, 1], [3, 4]]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Plane, Point, PointSet};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
pub struct PointSetFile {
    pub q: u64,
    pub points: Vec<[u64; 2]>,
}

fn to_point(plane: &Plane, [a, b]: [u64; 2], line: usize) -> Result<Point> {
    let q = plane.q();
    for v in [a, b] {
        if v >= q as u64 {
            return Err(Error::Parse { line, message: Error::OutOfRange { value: v, q }.to_string() });
        }
    }
    Ok(plane.point(a, b))
}

fn check_modulus(plane: &Plane, found: u64) -> Result<()> {
    if found != plane.q() as u64 {
        return Err(Error::FieldMismatch { expected: plane.q(), found: found as u32 });
    }
    Ok(())
}

fn collect(plane: &Plane, points: Vec<(Point, usize)>) -> Result<PointSet> {
    let mut set = PointSet::empty(plane);
    for (p, line) in points {
        let idx = plane.index(p);
        if set.members[idx] {
            return Err(Error::Parse { line, message: format!("duplicate point {p}") });
        }
        set.members[idx] = true;
        set.elements.push(p);
    }
    Ok(set)
}

/// Parses the text form. The header modulus must equal the plane's.
pub fn parse_text(plane: &Plane, input: &str) -> Result<PointSet> {
    let mut lines = input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
    let mut parts = header.split_whitespace();
    let q = match (parts.next(), parts.next(), parts.next()) {
        (Some("q"), Some(v), None) => v
            .parse::<u64>()
            .map_err(|e| Error::Parse { line: hline + 1, message: format!("bad modulus: {e}") })?,
        _ => return Err(Error::Parse { line: hline + 1, message: "expected header `q <value>`".into() }),
    };
    check_modulus(plane, q)?;

    let mut points = Vec::new();
    for (i, line) in lines {
        let nums: Vec<&str> = line.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(Error::Parse { line: i + 1, message: format!("expected two residues, got {}", nums.len()) });
        }
        let mut xy = [0u64; 2];
        for (slot, tok) in xy.iter_mut().zip(&nums) {
            *slot = tok.parse().map_err(|e| Error::Parse { line: i + 1, message: format!("{tok:?}: {e}") })?;
        }
        points.push((to_point(plane, xy, i + 1)?, i + 1));
    }
    collect(plane, points)
}

pub fn to_text(set: &PointSet) -> String {
    let mut out = format!("q {}\n", set.q());
    for p in set.iter() {
        out.push_str(&format!("{} {}\n", p.x1, p.x2));
    }
    out
}

pub fn parse_json(plane: &Plane, input: &str) -> Result<PointSet> {
    let file: PointSetFile = serde_json::from_str(input)?;
    check_modulus(plane, file.q)?;
    let points = file
        .points
        .into_iter()
        .enumerate()
        .map(|(i, xy)| to_point(plane, xy, i + 1).map(|p| (p, i + 1)))
        .collect::<Result<Vec<_>>>()?;
    collect(plane, points)
}

pub fn to_json(set: &PointSet) -> String {
    let file = PointSetFile {
        q: set.q() as u64,
        points: set.iter().map(|p| [p.x1.value() as u64, p.x2.value() as u64]).collect(),
    };
    serde_json::to_string(&file).expect("point set serializes")
}

/// Reads a set file, choosing the JSON parser when the content starts with `{`.
pub fn load_point_set(plane: &Plane, path: impl AsRef<Path>) -> Result<PointSet> {
    let content = std::fs::read_to_string(path)?;
    if content.trim_start().starts_with('{') {
        parse_json(plane, &content)
    } else {
        parse_text(plane, &content)
    }
}
