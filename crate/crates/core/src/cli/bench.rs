use std::time::Instant;

use serde::Serialize;

use crate::counting::{count_par_t, count_rhom_t, Method, Quantity, FOURIER_MAX_Q};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::geometry::{Plane, PointSet};

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub method: Method,
    pub value: u64,
    pub median_ms: f64,
    pub times_ms: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTable {
    pub quantity: Quantity,
    pub q: u32,
    pub t: u32,
    pub runs: usize,
    pub rows: Vec<BenchRow>,
    pub agree: bool,
    /// Oracle median over fast median, when both were timed.
    pub speedup: Option<f64>,
}

impl BenchTable {
    pub fn row(&self, method: Method) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Times each method `runs` times on the same instance.
///
/// Fails up front (before any timing) if a method cannot handle the
/// instance; value disagreement is reported through [`BenchTable::agree`].
pub fn bench(
    plane: &Plane,
    sets: [&PointSet; 4],
    t: FieldElement,
    quantity: Quantity,
    methods: &[Method],
    runs: usize,
) -> Result<BenchTable> {
    let count = |m: Method| -> Result<u64> {
        Ok(match quantity {
            Quantity::ParT => count_par_t(plane, sets, t, m)?.value,
            Quantity::RhomT => count_rhom_t(plane, sets, t, false, m)?.value,
            other => return Err(Error::UnsupportedMethod { quantity: other.name(), method: "bench" }),
        })
    };
    for &m in methods {
        if m == Method::Fourier && quantity != Quantity::ParT {
            return Err(Error::UnsupportedMethod { quantity: quantity.name(), method: m.name() });
        }
        if m == Method::Fourier && plane.q() > FOURIER_MAX_Q {
            return Err(Error::FourierCap { q: plane.q(), cap: FOURIER_MAX_Q });
        }
    }
    if !matches!(quantity, Quantity::ParT | Quantity::RhomT) {
        return Err(Error::UnsupportedMethod { quantity: quantity.name(), method: "bench" });
    }

    let runs = runs.max(1);
    let mut rows = Vec::new();
    for &method in methods {
        let mut times = Vec::with_capacity(runs);
        let mut value = 0;
        for _ in 0..runs {
            let start = Instant::now();
            value = count(method)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
        }
        let median_ms = median(&mut times.clone());
        rows.push(BenchRow { method, value, median_ms, times_ms: times });
    }
    let agree = rows.windows(2).all(|w| w[0].value == w[1].value);
    let med = |m: Method| rows.iter().find(|r| r.method == m).map(|r| r.median_ms);
    let speedup = match (med(Method::Oracle), med(Method::Fast)) {
        (Some(o), Some(f)) => Some(o / f.max(1e-6)),
        _ => None,
    };
    Ok(BenchTable { quantity, q: plane.q(), t: t.value(), runs, rows, agree, speedup })
}
