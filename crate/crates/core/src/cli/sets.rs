//! Set-slot specifications accepted by `--set`.
//!
//! A spec is a comma-separated list of slots; when fewer slots are given
//! than a command needs, the last one is repeated. Each slot is one of
//!
//! - `full`, `empty`
//! - `random` (density and seed from `--density` / `--seed`, with the seed
//!   derived per slot) or `random:<density>:<seed>`
//! - `line-ap` (`start = 0`, `step = 1`, `len = ⌈√q⌉`) or
//!   `line-ap:<start>:<step>:<len>`
//! - `file:<path>` or a bare path to a text/JSON point-set file

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::geometry::{arithmetic_progression, gen_example_line_ap, gen_random_set, load_point_set, Plane, PointSet};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub enum SetSpec {
    Full,
    Empty,
    Random { density: Option<f64>, seed: Option<u64> },
    LineAp { start: u64, step: u64, len: Option<usize> },
    File(PathBuf),
}

impl std::str::FromStr for SetSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> std::result::Result<u64, String> {
            parts[i].parse().map_err(|_| format!("bad number {:?} in set spec {s:?}", parts[i]))
        };
        Ok(match parts[0] {
            "full" if parts.len() == 1 => SetSpec::Full,
            "empty" if parts.len() == 1 => SetSpec::Empty,
            "random" if parts.len() == 1 => SetSpec::Random { density: None, seed: None },
            "random" if parts.len() == 3 => {
                let density = parts[1].parse().map_err(|_| format!("bad density in set spec {s:?}"))?;
                SetSpec::Random { density: Some(density), seed: Some(num(2)?) }
            }
            "line-ap" if parts.len() == 1 => SetSpec::LineAp { start: 0, step: 1, len: None },
            "line-ap" if parts.len() == 4 => SetSpec::LineAp { start: num(1)?, step: num(2)?, len: Some(num(3)? as usize) },
            "full" | "empty" | "random" | "line-ap" => return Err(format!("malformed set spec {s:?}")),
            "file" if parts.len() >= 2 => SetSpec::File(PathBuf::from(&s["file:".len()..])),
            _ if !s.is_empty() => SetSpec::File(PathBuf::from(s)),
            _ => return Err("empty set spec".into()),
        })
    }
}

pub fn parse_slots(spec: &str) -> std::result::Result<Vec<SetSpec>, String> {
    spec.split(',').map(str::trim).map(str::parse).collect()
}

impl SetSpec {
    /// Materializes the set for slot number `slot`.
    pub fn build(&self, plane: &Plane, slot: usize, density: f64, seed: u64) -> Result<PointSet> {
        match self {
            SetSpec::Full => Ok(PointSet::full(plane)),
            SetSpec::Empty => Ok(PointSet::empty(plane)),
            SetSpec::Random { density: d, seed: s } => {
                gen_random_set(plane, d.unwrap_or(density), s.unwrap_or_else(|| derive_seed(seed, slot as u64)))
            }
            SetSpec::LineAp { start, step, len } => {
                let len = len.unwrap_or_else(|| default_ap_len(plane.q()));
                if len > plane.q() as usize {
                    return Err(Error::OutOfRange { value: len as u64, q: plane.q() });
                }
                gen_example_line_ap(plane, &arithmetic_progression(plane.field(), *start, *step, len))
            }
            SetSpec::File(path) => load_point_set(plane, path),
        }
    }
}

/// `⌈√q⌉`
pub fn default_ap_len(q: u32) -> usize {
    let mut n = 0usize;
    while n * n < q as usize {
        n += 1;
    }
    n
}

/// Builds exactly `count` sets, repeating the last slot as needed.
pub fn build_sets(plane: &Plane, slots: &[SetSpec], count: usize, density: f64, seed: u64) -> Result<Vec<PointSet>> {
    (0..count)
        .map(|i| slots[i.min(slots.len() - 1)].build(plane, i, density, seed))
        .collect()
}
