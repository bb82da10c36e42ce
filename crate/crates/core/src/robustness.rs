//! Criterion sweeps along one-parameter state families and detection
//! thresholds under white noise.
//!
//! Thresholds are found by a coarse scan followed by bisection. Monotonicity
//! of the left sides in the noise parameter is expected but not assumed: the
//! scan brackets the lowest violation onset, so multiple crossings cannot be
//! silently skipped.

use std::fmt;
use std::str::FromStr;

use crate::criteria::{
    evaluate_one_to_two, evaluate_two_to_one, CriterionId, CriterionReport, DETECTION_EPS,
};
use crate::error::{Error, Result};
use crate::observables::PartyPairs;
use crate::state::{ghz_family, ghz_standard, w_state, white_noise_mix, DensityOperator};

/// Grid size of the coarse threshold scan.
pub const SCAN_POINTS: usize = 101;
/// Default bisection tolerance on the bracket width.
pub const DEFAULT_TOL: f64 = 1e-4;

/// One-parameter state families from the detection-power study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFamily {
    /// a|000⟩ + √(1−a²)|111⟩, parameter a.
    Ghz,
    /// p·|GHZ⟩⟨GHZ| + (1−p)/8·I with a = 1/√2, parameter p.
    GhzNoise,
    /// p·|W⟩⟨W| + (1−p)/8·I, parameter p.
    WNoise,
}

impl StateFamily {
    /// The family member at parameter value `t` ∈ [0, 1].
    pub fn state_at(&self, t: f64) -> Result<DensityOperator> {
        match self {
            StateFamily::Ghz => Ok(ghz_family(t)?.projector()),
            StateFamily::GhzNoise => white_noise_mix(&ghz_standard(), t),
            StateFamily::WNoise => white_noise_mix(&w_state(), t),
        }
    }

    pub fn parameter_name(&self) -> &'static str {
        match self {
            StateFamily::Ghz => "a",
            StateFamily::GhzNoise | StateFamily::WNoise => "p",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Ghz => "ghz",
            StateFamily::GhzNoise => "ghz-noise",
            StateFamily::WNoise => "w-noise",
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(StateFamily::Ghz),
            "ghz-noise" => Ok(StateFamily::GhzNoise),
            "w-noise" => Ok(StateFamily::WNoise),
            other => Err(Error::BadFamily(other.to_string())),
        }
    }
}

/// Evaluate every tripartite criterion at one family member and keep the
/// requested ids, in their requested order.
fn evaluate_point(
    family: StateFamily,
    t: f64,
    pairs: &PartyPairs,
    criteria: &[CriterionId],
) -> Result<Vec<CriterionReport>> {
    let state = family.state_at(t)?;
    let mut all = evaluate_one_to_two(&state, &pairs.a, &pairs.b, &pairs.c)?;
    all.extend(evaluate_two_to_one(&state, &pairs.a, &pairs.b, &pairs.c)?);
    criteria
        .iter()
        .map(|id| {
            all.iter()
                .find(|r| r.id == *id)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("criterion {id} is not tripartite")))
        })
        .collect()
}

/// Criterion values along a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub family: StateFamily,
    pub parameter_name: &'static str,
    /// One entry per (grid point, criterion), ordered by grid point first.
    pub rows: Vec<(f64, CriterionReport)>,
}

impl SweepResult {
    /// CSV with schema `parameter,criterion,lhs,steering_bound,gms_bound`,
    /// floats printed with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,criterion,lhs,steering_bound,gms_bound\n");
        let fmt_opt =
            |v: Option<f64>| v.map(crate::io::fmt_sig12).unwrap_or_default();
        for (t, r) in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                crate::io::fmt_sig12(*t),
                r.id,
                crate::io::fmt_sig12(r.lhs_bits),
                fmt_opt(r.steering_bound_bits),
                fmt_opt(r.gms_bound_bits),
            ));
        }
        out
    }
}

/// Evaluate `criteria` on `steps` evenly spaced family members between
/// `from` and `to` inclusive. Points run in parallel when the `parallel`
/// feature is enabled; row order is deterministic either way.
pub fn sweep(
    family: StateFamily,
    from: f64,
    to: f64,
    steps: usize,
    pairs: &PartyPairs,
    criteria: &[CriterionId],
) -> Result<SweepResult> {
    if steps < 2 {
        return Err(Error::Domain(format!("need at least 2 steps, got {steps}")));
    }
    if !from.is_finite() || !to.is_finite() || from >= to {
        return Err(Error::Domain(format!(
            "sweep range [{from}, {to}] must increase"
        )));
    }
    if criteria.is_empty() {
        return Err(Error::EmptyInput);
    }
    let grid: Vec<f64> = (0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect();
    let per_point =
        crate::par::map_items(&grid, |&t| evaluate_point(family, t, pairs, criteria));
    let mut rows = Vec::with_capacity(steps * criteria.len());
    for (t, reports) in grid.iter().zip(per_point) {
        for report in reports? {
            rows.push((*t, report));
        }
    }
    Ok(SweepResult {
        family,
        parameter_name: family.parameter_name(),
        rows,
    })
}

/// Which bound of a criterion a threshold search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Steering,
    Gms,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Steering => "steering",
            BoundKind::Gms => "gms",
        })
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "steering" => Ok(BoundKind::Steering),
            "gms" => Ok(BoundKind::Gms),
            other => Err(Error::Domain(format!("unknown bound kind `{other}`"))),
        }
    }
}

/// Lowest parameter value at which a criterion starts violating a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub family: StateFamily,
    pub criterion: CriterionId,
    pub bound_kind: BoundKind,
    /// Onset parameter, `None` when no grid point violates.
    pub p_star: Option<f64>,
    /// Half-width of the final bracket: violated at `p_star + bracket`, not
    /// violated at `p_star − bracket`.
    pub bracket: f64,
    /// The bound value in bits (constant along the family).
    pub bound_bits: f64,
}

fn lhs_and_bound(
    family: StateFamily,
    t: f64,
    pairs: &PartyPairs,
    criterion: CriterionId,
    bound_kind: BoundKind,
) -> Result<(f64, f64)> {
    let report = evaluate_point(family, t, pairs, &[criterion])?.remove(0);
    let bound = match bound_kind {
        BoundKind::Steering => report.steering_bound_bits,
        BoundKind::Gms => report.gms_bound_bits,
    }
    .ok_or_else(|| {
        Error::Domain(format!("criterion {criterion} has no {bound_kind} bound"))
    })?;
    Ok((report.lhs_bits, bound))
}

/// Scan-then-bisect search for the lowest violation onset of one criterion
/// bound along a family, to bracket width `tolerance`.
pub fn find_threshold(
    family: StateFamily,
    criterion: CriterionId,
    bound_kind: BoundKind,
    tolerance: f64,
) -> Result<Threshold> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::Domain(format!("tolerance {tolerance} must be > 0")));
    }
    let pairs = PartyPairs::pauli();
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| i as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    let scans = crate::par::map_items(&grid, |&t| {
        lhs_and_bound(family, t, &pairs, criterion, bound_kind)
    });
    let mut bound_bits = f64::NAN;
    let mut onset = None;
    for (i, scan) in scans.into_iter().enumerate() {
        let (lhs, bound) = scan?;
        bound_bits = bound;
        if onset.is_none() && lhs < bound - DETECTION_EPS {
            onset = Some(i);
        }
    }
    let Some(i) = onset else {
        return Ok(Threshold {
            family,
            criterion,
            bound_kind,
            p_star: None,
            bracket: 0.0,
            bound_bits,
        });
    };
    if i == 0 {
        // violated at the very start of the range
        return Ok(Threshold {
            family,
            criterion,
            bound_kind,
            p_star: Some(grid[0]),
            bracket: 0.0,
            bound_bits,
        });
    }
    let mut lo = grid[i - 1]; // not violated
    let mut hi = grid[i]; // violated
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        let (lhs, bound) = lhs_and_bound(family, mid, &pairs, criterion, bound_kind)?;
        if lhs < bound - DETECTION_EPS {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold {
        family,
        criterion,
        bound_kind,
        p_star: Some(0.5 * (lo + hi)),
        bracket: 0.5 * (hi - lo),
        bound_bits,
    })
}
