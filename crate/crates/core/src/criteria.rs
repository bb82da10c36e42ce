//! Entropic steering criteria for bipartite and tripartite states.
//!
//! Each criterion sums a conditional Shannon entropy over the two global
//! measurement settings (everyone's first observable, then everyone's
//! second) and compares against bounds that every nonsteerable state, and
//! where applicable every non-GMS state, must respect. Violations are
//! sufficient conditions: a verdict always means "detected with these
//! observables", never that an undetected state is nonsteerable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::{joint_distribution, JointDistribution};
use crate::entropy::conditional_entropy;
use crate::error::{Error, Result};
use crate::observables::{composite_overlap, ObservablePair};
use crate::state::DensityOperator;

/// Detection requires a strict violation: lhs < bound − DETECTION_EPS.
/// Boundary saturation (product states sitting exactly on a bound) must not
/// fire under roundoff.
pub const DETECTION_EPS: f64 = 1e-9;

/// Party positions: Alice steers in the one-to-two scenario; Alice and Bob
/// steer Charlie in the two-to-one scenario.
const A: usize = 0;
const B: usize = 1;
const C: usize = 2;

/// Identifies one inequality: a fixed left-hand side and bound set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionId {
    /// Bipartite Maassen–Uffink generalization: Σ H(O_B|O_A).
    Bipartite,
    /// Σ H(O_BC|O_A).
    S1,
    /// Σ H(O_B|O_A).
    S2,
    /// Σ H(O_C|O_A).
    S3,
    /// Σ H(O_B|O_A, O_C).
    Cb,
    /// Σ H(O_C|O_A, O_B).
    Cc,
    /// S1 + C_B + C_C.
    A,
    /// Σ H(O_C|O_A, O_B), steered party C.
    T1,
    /// Σ H(O_C|O_A).
    T2A,
    /// Σ H(O_C|O_B).
    T2B,
    /// T2A + T2B.
    Tsum,
}

impl CriterionId {
    pub const ONE_TO_TWO: [CriterionId; 6] = [
        CriterionId::S1,
        CriterionId::S2,
        CriterionId::S3,
        CriterionId::Cb,
        CriterionId::Cc,
        CriterionId::A,
    ];

    pub const TWO_TO_ONE: [CriterionId; 4] = [
        CriterionId::T1,
        CriterionId::T2A,
        CriterionId::T2B,
        CriterionId::Tsum,
    ];

    pub fn all_tripartite() -> Vec<CriterionId> {
        let mut v = Self::ONE_TO_TWO.to_vec();
        v.extend_from_slice(&Self::TWO_TO_ONE);
        v
    }

    pub fn name(&self) -> &'static str {
        match self {
            CriterionId::Bipartite => "bipartite",
            CriterionId::S1 => "S1",
            CriterionId::S2 => "S2",
            CriterionId::S3 => "S3",
            CriterionId::Cb => "CB",
            CriterionId::Cc => "CC",
            CriterionId::A => "A",
            CriterionId::T1 => "T1",
            CriterionId::T2A => "T2A",
            CriterionId::T2B => "T2B",
            CriterionId::Tsum => "Tsum",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bipartite" | "muf" => Ok(CriterionId::Bipartite),
            "s1" => Ok(CriterionId::S1),
            "s2" => Ok(CriterionId::S2),
            "s3" => Ok(CriterionId::S3),
            // the single "C" of the detection-power study reads as C_B; the
            // B↔C mirror is CC
            "c" | "cb" => Ok(CriterionId::Cb),
            "cc" => Ok(CriterionId::Cc),
            "a" => Ok(CriterionId::A),
            "t1" => Ok(CriterionId::T1),
            "t2a" => Ok(CriterionId::T2A),
            "t2b" => Ok(CriterionId::T2B),
            "tsum" => Ok(CriterionId::Tsum),
            other => Err(Error::Domain(format!("unknown criterion id `{other}`"))),
        }
    }
}

/// Detection verdict, ordered weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    NoDetection,
    SteeringDetected,
    GmsDetected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::NoDetection => "NoDetection",
            Verdict::SteeringDetected => "SteeringDetected",
            Verdict::GmsDetected => "GmsDetected",
        };
        f.write_str(s)
    }
}

/// One evaluated inequality: left side, applicable bounds and verdict, all
/// in bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: CriterionId,
    pub lhs_bits: f64,
    /// Bound below which steering is detected, absent for GMS-only checks.
    pub steering_bound_bits: Option<f64>,
    /// Bound below which genuine multipartite steering is detected.
    pub gms_bound_bits: Option<f64>,
    /// For `A` only: the weaker −4·log₂ α_min constant that the chained
    /// bound −2·log₂ α_BC implies. Informational; the verdict uses the
    /// tighter form.
    pub weak_steering_bound_bits: Option<f64>,
    pub verdict: Verdict,
}

impl CriterionReport {
    fn build(
        id: CriterionId,
        lhs_bits: f64,
        steering_bound_bits: Option<f64>,
        gms_bound_bits: Option<f64>,
    ) -> Self {
        if let (Some(s), Some(g)) = (steering_bound_bits, gms_bound_bits) {
            debug_assert!(g <= s + 1e-12, "{id}: gms bound {g} above steering bound {s}");
        }
        let verdict = if matches!(gms_bound_bits, Some(g) if lhs_bits < g - DETECTION_EPS) {
            Verdict::GmsDetected
        } else if matches!(steering_bound_bits, Some(s) if lhs_bits < s - DETECTION_EPS) {
            Verdict::SteeringDetected
        } else {
            Verdict::NoDetection
        };
        Self {
            id,
            lhs_bits,
            steering_bound_bits,
            gms_bound_bits,
            weak_steering_bound_bits: None,
            verdict,
        }
    }

    /// lhs − steering bound, when that bound applies.
    pub fn steering_margin(&self) -> Option<f64> {
        self.steering_bound_bits.map(|b| self.lhs_bits - b)
    }

    /// lhs − GMS bound, when that bound applies.
    pub fn gms_margin(&self) -> Option<f64> {
        self.gms_bound_bits.map(|b| self.lhs_bits - b)
    }

    /// CSV row `id,lhs,steering_bound,gms_bound,verdict`; absent bounds
    /// print as empty fields.
    pub fn csv_row(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map(crate::io::fmt_sig12).unwrap_or_default();
        format!(
            "{},{},{},{},{}",
            self.id,
            crate::io::fmt_sig12(self.lhs_bits),
            fmt_opt(self.steering_bound_bits),
            fmt_opt(self.gms_bound_bits),
            self.verdict
        )
    }
}

/// Header matching [`CriterionReport::csv_row`].
pub const REPORT_CSV_HEADER: &str = "id,lhs,steering_bound,gms_bound,verdict";

fn bound_bits(alpha: f64) -> f64 {
    -alpha.log2()
}

fn check_arity(state: &DensityOperator, expected: usize) -> Result<()> {
    let got = state.layout().parties();
    if got != expected {
        return Err(Error::BadArity { expected, got });
    }
    Ok(())
}

fn check_pair_dims(state: &DensityOperator, pairs: &[&ObservablePair]) -> Result<()> {
    for (k, pair) in pairs.iter().enumerate() {
        let want = state.layout().dims()[k];
        if pair.dim() != want {
            return Err(Error::DimensionMismatch(format!(
                "pair for party {} has dimension {}, state has {}",
                crate::state::PartyLayout::party_name(k),
                pair.dim(),
                want
            )));
        }
    }
    Ok(())
}

/// The two global settings: everyone measures their first observable, then
/// everyone their second.
pub(crate) fn setting_distributions(
    state: &DensityOperator,
    pairs: &[&ObservablePair],
) -> Result<[JointDistribution; 2]> {
    let firsts: Vec<_> = pairs.iter().map(|p| p.first()).collect();
    let seconds: Vec<_> = pairs.iter().map(|p| p.second()).collect();
    Ok([
        joint_distribution(state, &firsts)?,
        joint_distribution(state, &seconds)?,
    ])
}

fn summed_conditional(
    dists: &[JointDistribution; 2],
    target: &[usize],
    given: &[usize],
) -> Result<f64> {
    let mut acc = 0.0;
    for d in dists {
        acc += conditional_entropy(d, target, given)?;
    }
    // conditional Shannon entropies are nonnegative; scrub the ~1e-16
    // cancellation residue of deterministic slices
    Ok(acc.max(0.0))
}

/// Evaluate every one-to-two criterion (Alice steering Bob and Charlie) and
/// return reports in the order S1, S2, S3, C_B, C_C, A.
pub fn evaluate_one_to_two(
    state: &DensityOperator,
    obs_a: &ObservablePair,
    obs_b: &ObservablePair,
    obs_c: &ObservablePair,
) -> Result<Vec<CriterionReport>> {
    check_arity(state, 3)?;
    check_pair_dims(state, &[obs_a, obs_b, obs_c])?;
    let dists = setting_distributions(state, &[obs_a, obs_b, obs_c])?;

    let alpha_b = obs_b.alpha();
    let alpha_c = obs_c.alpha();
    let composite = composite_overlap(obs_b, obs_c);

    let s1 = summed_conditional(&dists, &[B, C], &[A])?;
    let s2 = summed_conditional(&dists, &[B], &[A])?;
    let s3 = summed_conditional(&dists, &[C], &[A])?;
    let cb = summed_conditional(&dists, &[B], &[A, C])?;
    let cc = summed_conditional(&dists, &[C], &[A, B])?;
    // exact identity: A is assembled from the same three left sides
    let a = s1 + cb + cc;

    let mut a_report = CriterionReport::build(
        CriterionId::A,
        a,
        Some(2.0 * bound_bits(composite.alpha_bc)),
        Some(2.0 * bound_bits(composite.alpha_min)),
    );
    a_report.weak_steering_bound_bits = Some(4.0 * bound_bits(composite.alpha_min));

    Ok(vec![
        CriterionReport::build(
            CriterionId::S1,
            s1,
            Some(bound_bits(composite.alpha_bc)),
            Some(bound_bits(composite.alpha_min)),
        ),
        CriterionReport::build(CriterionId::S2, s2, Some(bound_bits(alpha_b)), None),
        CriterionReport::build(CriterionId::S3, s3, Some(bound_bits(alpha_c)), None),
        CriterionReport::build(CriterionId::Cb, cb, Some(bound_bits(alpha_b)), None),
        CriterionReport::build(CriterionId::Cc, cc, Some(bound_bits(alpha_c)), None),
        a_report,
    ])
}

/// Evaluate every two-to-one criterion (Alice and Bob steering Charlie) and
/// return reports in the order T1, T2A, T2B, Tsum.
pub fn evaluate_two_to_one(
    state: &DensityOperator,
    obs_a: &ObservablePair,
    obs_b: &ObservablePair,
    obs_c: &ObservablePair,
) -> Result<Vec<CriterionReport>> {
    check_arity(state, 3)?;
    check_pair_dims(state, &[obs_a, obs_b, obs_c])?;
    let dists = setting_distributions(state, &[obs_a, obs_b, obs_c])?;

    let alpha_c = obs_c.alpha();

    let t1 = summed_conditional(&dists, &[C], &[A, B])?;
    let t2a = summed_conditional(&dists, &[C], &[A])?;
    let t2b = summed_conditional(&dists, &[C], &[B])?;
    let tsum = t2a + t2b;

    Ok(vec![
        CriterionReport::build(CriterionId::T1, t1, Some(bound_bits(alpha_c)), None),
        CriterionReport::build(CriterionId::T2A, t2a, Some(bound_bits(alpha_c)), None),
        CriterionReport::build(CriterionId::T2B, t2b, Some(bound_bits(alpha_c)), None),
        CriterionReport::build(
            CriterionId::Tsum,
            tsum,
            Some(2.0 * bound_bits(alpha_c)),
            Some(bound_bits(alpha_c)),
        ),
    ])
}

/// The bipartite Maassen–Uffink steering inequality Σ H(O_B|O_A) ≥ −log₂ α_B.
pub fn evaluate_bipartite(
    state: &DensityOperator,
    obs_a: &ObservablePair,
    obs_b: &ObservablePair,
) -> Result<CriterionReport> {
    check_arity(state, 2)?;
    check_pair_dims(state, &[obs_a, obs_b])?;
    let dists = setting_distributions(state, &[obs_a, obs_b])?;
    let lhs = summed_conditional(&dists, &[1], &[0])?;
    Ok(CriterionReport::build(
        CriterionId::Bipartite,
        lhs,
        Some(bound_bits(obs_b.alpha())),
        None,
    ))
}

/// Aggregate verdict: the strongest single-criterion verdict and who
/// achieved it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverallVerdict {
    pub verdict: Verdict,
    pub achieved_by: CriterionId,
}

/// Strongest verdict across reports (GMS > Steering > NoDetection).
pub fn classify(reports: &[CriterionReport]) -> Result<OverallVerdict> {
    let best = reports
        .iter()
        .max_by_key(|r| r.verdict)
        .ok_or(Error::EmptyInput)?;
    Ok(OverallVerdict {
        verdict: best.verdict,
        achieved_by: best.id,
    })
}
