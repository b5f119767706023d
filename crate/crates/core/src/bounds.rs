//! Inequality checkers. Each check computes both sides from exact counts and
//! returns a [`BoundReport`]; statements whose constant is only asymptotic are
//! reported with `enforced = false` and never count as violations.

use serde::Serialize;

use crate::counting::{par_all_fast, par_t_fast, rhom_t_fast, shifted_products, unit_distances_fast};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::geometry::{gen_random_set, Plane, PointSet};
use crate::rng::derive_seed;

/// Guard band added to the right-hand side before comparing.
pub const GUARD: f64 = 1e-9;

/// Everything needed to regenerate a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputsDigest {
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<u32>,
    pub set_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InputsDigest {
    pub fn radius(q: u32, t: u32) -> Self {
        InputsDigest { q, t: Some(t), t2: None, set_sizes: Vec::new(), seed: None }
    }

    pub fn sets(q: u32, t: FieldElement, sets: &[&PointSet]) -> Self {
        InputsDigest { q, t: Some(t.value()), t2: None, set_sizes: sets.iter().map(|s| s.len()).collect(), seed: None }
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `lhs / rhs`; zero when both sides vanish, infinite (`null` in JSON)
    /// when only the right side does.
    pub ratio: f64,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<bool>,
    /// Whether a failure of this report is a hard violation.
    pub enforced: bool,
    pub inputs: InputsDigest,
}

impl BoundReport {
    pub fn new(name: &'static str, lhs: f64, rhs: f64, enforced: bool, inputs: InputsDigest) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        BoundReport { name, lhs, rhs, holds: lhs <= rhs + GUARD, ratio, slack: rhs - lhs, hypothesis: None, enforced, inputs }
    }

    fn with_hypothesis(mut self, h: bool) -> Self {
        self.hypothesis = Some(h);
        self
    }

    pub fn violated(&self) -> bool {
        self.enforced && !self.holds
    }
}

fn nonzero(t: FieldElement) -> Result<()> {
    if t.is_zero() {
        Err(Error::InvalidRadius)
    } else {
        Ok(())
    }
}

fn product(sets: &[&PointSet]) -> f64 {
    sets.iter().map(|s| s.len() as f64).product()
}

/// `|N_t(U, V) - |U||V|/q| ≤ 2√q·√(|U||V|)`.
pub fn check_unit_distance(plane: &Plane, u: &PointSet, v: &PointSet, t: FieldElement) -> Result<BoundReport> {
    nonzero(t)?;
    let q = plane.q() as f64;
    let n = unit_distances_fast(plane, u, v, t) as f64;
    let uv = product(&[u, v]);
    let lhs = (n - uv / q).abs();
    let rhs = 2.0 * q.sqrt() * uv.sqrt();
    Ok(BoundReport::new("unit_distance_deviation", lhs, rhs, true, InputsDigest::sets(plane.q(), t, &[u, v])))
}

/// `|Par_t - Par/q| ≤ √q·√(|E₁||E₂||E₃||E₄|)`.
pub fn check_thm_par_t(plane: &Plane, sets: [&PointSet; 4], t: FieldElement) -> Result<BoundReport> {
    nonzero(t)?;
    let q = plane.q() as f64;
    let par_t = par_t_fast(plane, sets, t) as f64;
    let par = par_all_fast(plane, sets) as f64;
    let lhs = (par_t - par / q).abs();
    let rhs = q.sqrt() * product(&sets).sqrt();
    Ok(BoundReport::new("par_t_deviation", lhs, rhs, true, InputsDigest::sets(plane.q(), t, &sets)))
}

/// `|Par_t - Par_t'| ≤ √q·√(|E₁||E₂||E₃||E₄|)` for `t ≠ t'`.
pub fn check_thm_par_tt(plane: &Plane, sets: [&PointSet; 4], t: FieldElement, t2: FieldElement) -> Result<BoundReport> {
    nonzero(t)?;
    nonzero(t2)?;
    if t == t2 {
        return Err(Error::InvalidPair(t.value()));
    }
    let q = plane.q() as f64;
    let a = par_t_fast(plane, sets, t) as f64;
    let b = par_t_fast(plane, sets, t2) as f64;
    let rhs = q.sqrt() * product(&sets).sqrt();
    let mut inputs = InputsDigest::sets(plane.q(), t, &sets);
    inputs.t2 = Some(t2.value());
    Ok(BoundReport::new("par_t_pair_gap", (a - b).abs(), rhs, true, inputs))
}

/// Two-tier comparison of `Rhom_t` with `Par_t / q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhomRelation {
    pub rhom_t: u64,
    pub par_t: u64,
    /// `|Rhom_t - Σ_x |E₁₂ˣ||E₃₄ˣ|/q| ≤ 2√q·Σ_x √(|E₁₂ˣ||E₃₄ˣ|)`, always enforced.
    pub tier_a: BoundReport,
    /// `|Rhom_t - Par_t/q| ≤ √q·√(|E₁||E₂|/q)·√(|E₃||E₄|/q)`, reported only;
    /// `hypothesis` records whether `|E₁||E₂| ≥ q³` and `|E₃||E₄| ≥ q³`.
    pub tier_b: BoundReport,
}

pub fn check_thm_rhom_relation(plane: &Plane, sets: [&PointSet; 4], t: FieldElement) -> Result<RhomRelation> {
    nonzero(t)?;
    let q = plane.q() as f64;
    let rhom = rhom_t_fast(plane, sets, t, false);
    let par_t = par_t_fast(plane, sets, t);
    let (products, roots) = shifted_products(plane, sets, t);
    debug_assert_eq!(products, par_t);
    let inputs = InputsDigest::sets(plane.q(), t, &sets);

    let tier_a = BoundReport::new(
        "rhom_relation_tier_a",
        (rhom as f64 - products as f64 / q).abs(),
        2.0 * q.sqrt() * roots,
        true,
        inputs.clone(),
    );

    let (p12, p34) = (product(&sets[..2]), product(&sets[2..]));
    let q3 = q.powi(3);
    let tier_b = BoundReport::new(
        "rhom_relation_tier_b",
        (rhom as f64 - par_t as f64 / q).abs(),
        q.sqrt() * (p12 / q).sqrt() * (p34 / q).sqrt(),
        false,
        inputs,
    )
    .with_hypothesis(p12 >= q3 && p34 >= q3);

    Ok(RhomRelation { rhom_t: rhom, par_t, tier_a, tier_b })
}

/// `Rhom_t` measured in units of `|E₁||E₂||E₃||E₄|/q⁴`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhomLower {
    pub name: &'static str,
    pub rhom_t: u64,
    pub scale: f64,
    pub ratio: f64,
    /// `|E₁||E₂||E₃||E₄| ≥ q⁷`.
    pub hypothesis: bool,
    /// `ratio > 0` when the hypothesis holds, absent otherwise.
    pub verdict: Option<bool>,
    pub inputs: InputsDigest,
}

pub fn check_thm_rhom_lower(plane: &Plane, sets: [&PointSet; 4], t: FieldElement) -> Result<RhomLower> {
    nonzero(t)?;
    let q = plane.q() as f64;
    let rhom = rhom_t_fast(plane, sets, t, false);
    let prod = product(&sets);
    let scale = prod / q.powi(4);
    let ratio = if scale > 0.0 { rhom as f64 / scale } else { 0.0 };
    let hypothesis = prod >= q.powi(7);
    Ok(RhomLower {
        name: "rhom_lower_ratio",
        rhom_t: rhom,
        scale,
        ratio,
        hypothesis,
        verdict: hypothesis.then_some(ratio > 0.0),
        inputs: InputsDigest::sets(plane.q(), t, &sets),
    })
}

// ---------------------------------------------------------------------------
// Randomized sweeps

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    UnitDistance,
    ParT,
    ParPair,
    RhomRelation,
    RhomLower,
    All,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::UnitDistance => "unit-distance",
            Check::ParT => "par-t",
            Check::ParPair => "par-pair",
            Check::RhomRelation => "rhom-relation",
            Check::RhomLower => "rhom-lower",
            Check::All => "all",
        }
    }
}

impl std::str::FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "unit-distance" | "lemma2.2" => Check::UnitDistance,
            "par-t" | "thm1.2" => Check::ParT,
            "par-pair" | "thm1.2-pair" => Check::ParPair,
            "rhom-relation" | "thm1.1" => Check::RhomRelation,
            "rhom-lower" | "thm1.1-lower" => Check::RhomLower,
            "all" => Check::All,
            _ => return Err(format!("unknown check {s:?}")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CheckReport {
    Bound(BoundReport),
    Relation(RhomRelation),
    Lower(RhomLower),
}

impl CheckReport {
    /// Enforced bound reports contained in this report.
    pub fn enforced(&self) -> Vec<&BoundReport> {
        match self {
            CheckReport::Bound(b) if b.enforced => vec![b],
            CheckReport::Relation(r) => vec![&r.tier_a],
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub check: &'static str,
    pub q: u32,
    pub trials: usize,
    pub reports: usize,
    pub violations: usize,
    /// Smallest `rhs - lhs` over enforced reports (`null` when none).
    pub min_slack: Option<f64>,
    pub max_ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub check: Check,
    pub trials: usize,
    pub density: f64,
    pub seed: u64,
    /// Fixed radius; when absent, trial `k` uses `t = 1 + (k mod (q - 1))`.
    pub t: Option<FieldElement>,
}

/// Random sets for one trial: slot `i` of trial `k` is seeded with
/// `derive_seed(seed, 4k + i)`.
pub fn trial_sets(plane: &Plane, density: f64, seed: u64, trial: usize) -> Result<[PointSet; 4]> {
    let mut out = Vec::with_capacity(4);
    for slot in 0..4 {
        out.push(gen_random_set(plane, density, derive_seed(seed, (4 * trial + slot) as u64))?);
    }
    Ok(out.try_into().expect("four sets"))
}

pub fn sweep(plane: &Plane, cfg: &SweepConfig) -> Result<(Vec<CheckReport>, SweepSummary)> {
    let field = plane.field();
    let q = plane.q();
    let mut reports = Vec::new();
    for trial in 0..cfg.trials {
        let sets = trial_sets(plane, cfg.density, cfg.seed, trial)?;
        let refs = [&sets[0], &sets[1], &sets[2], &sets[3]];
        let t = cfg.t.unwrap_or_else(|| field.element(1 + (trial as u64 % (q as u64 - 1))));
        let seed = Some(cfg.seed);
        let checks: &[Check] = match cfg.check {
            Check::All => &[Check::UnitDistance, Check::ParT, Check::ParPair, Check::RhomRelation, Check::RhomLower],
            ref c => std::slice::from_ref(c),
        };
        for check in checks {
            let report = match check {
                Check::UnitDistance => {
                    let mut r = check_unit_distance(plane, refs[0], refs[1], t)?;
                    r.inputs.seed = seed;
                    CheckReport::Bound(r)
                }
                Check::ParT => {
                    let mut r = check_thm_par_t(plane, refs, t)?;
                    r.inputs.seed = seed;
                    CheckReport::Bound(r)
                }
                Check::ParPair => {
                    let t2 = field.element(1 + (t.value() as u64 % (q as u64 - 1)));
                    let mut r = check_thm_par_tt(plane, refs, t, t2)?;
                    r.inputs.seed = seed;
                    CheckReport::Bound(r)
                }
                Check::RhomRelation => {
                    let mut r = check_thm_rhom_relation(plane, refs, t)?;
                    r.tier_a.inputs.seed = seed;
                    r.tier_b.inputs.seed = seed;
                    CheckReport::Relation(r)
                }
                Check::RhomLower => {
                    let mut r = check_thm_rhom_lower(plane, refs, t)?;
                    r.inputs.seed = seed;
                    CheckReport::Lower(r)
                }
                Check::All => unreachable!(),
            };
            reports.push(report);
        }
    }
    let enforced: Vec<&BoundReport> = reports.iter().flat_map(CheckReport::enforced).collect();
    let summary = SweepSummary {
        check: cfg.check.name(),
        q,
        trials: cfg.trials,
        reports: reports.len(),
        violations: enforced.iter().filter(|r| r.violated()).count(),
        min_slack: enforced.iter().map(|r| r.slack).reduce(f64::min),
        max_ratio: enforced.iter().map(|r| r.ratio).reduce(f64::max),
    };
    Ok((reports, summary))
}
