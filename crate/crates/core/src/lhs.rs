//! Explicit finite LHS and hybrid-LHS models, and the falsification harness
//! that checks the criterion engine against them.
//!
//! Each model class realizes, by construction, a state that the
//! corresponding inequalities cannot flag: a plain LHS model is nonsteerable
//! in every scenario, a hybrid model is non-GMS, and a two-to-one model
//! keeps Charlie pre-determined per branch. Any violation found here is an
//! implementation bug, not physics, so the harness fails loudly with the
//! offending model attached.
//!
//! Sampling is fully reproducible: model `i` of a run draws from
//! `ChaCha8Rng` seeded with the user seed on stream `i`. Pure local states
//! are normalized complex Gaussian vectors; mixed ones are G·G†/Tr(G·G†)
//! with G a complex Gaussian matrix; weights come from a flat simplex draw.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::criteria::{
    evaluate_one_to_two, evaluate_two_to_one, setting_distributions, CriterionId, CriterionReport,
};
use crate::dist::joint_distribution;
use crate::entropy::{conditional_entropy, shannon_entropy};
use crate::error::{Error, Result};
use crate::observables::{Observable, PartyPairs};
use crate::state::{DensityOperator, PartyLayout};

/// Branch-weight normalization tolerance.
pub const WEIGHT_TOL: f64 = 1e-9;
/// Margins below −MARGIN_TOL count as violations in the harness.
pub const MARGIN_TOL: f64 = 1e-9;

fn check_weights<'a, I: Iterator<Item = &'a f64>>(weights: I) -> Result<()> {
    let mut sum = 0.0;
    let mut any = false;
    for &w in weights {
        any = true;
        if w < 0.0 {
            return Err(Error::BadWeights(format!("negative weight {w}")));
        }
        sum += w;
    }
    if !any {
        return Err(Error::EmptyInput);
    }
    if (sum - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::BadWeights(format!("weights sum to {sum}")));
    }
    Ok(())
}

fn check_parties(state: &DensityOperator, parties: usize, what: &str) -> Result<()> {
    if state.layout().parties() != parties {
        return Err(Error::DimensionMismatch(format!(
            "{what} must cover {parties} part{}, got {}",
            if parties == 1 { "y" } else { "ies" },
            state.layout().parties()
        )));
    }
    Ok(())
}

/// One branch of a fully local model: λ fixes a product state for all three
/// parties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhsBranch {
    pub weight: f64,
    pub local_a: DensityOperator,
    pub local_b: DensityOperator,
    pub local_c: DensityOperator,
}

/// A finite LHS model: Σ_λ q_λ ρ_λ^A ⊗ ρ_λ^B ⊗ ρ_λ^C.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhsModel {
    pub branches: Vec<LhsBranch>,
}

impl LhsModel {
    pub fn new(branches: Vec<LhsBranch>) -> Result<Self> {
        check_weights(branches.iter().map(|b| &b.weight))?;
        for b in &branches {
            check_parties(&b.local_a, 1, "local state")?;
            check_parties(&b.local_b, 1, "local state")?;
            check_parties(&b.local_c, 1, "local state")?;
        }
        Ok(Self { branches })
    }

    /// The realized tripartite state, a valid density operator.
    pub fn realize(&self) -> Result<DensityOperator> {
        let first = self.branches.first().ok_or(Error::EmptyInput)?;
        let dims = vec![
            first.local_a.total_dim(),
            first.local_b.total_dim(),
            first.local_c.total_dim(),
        ];
        let total: usize = dims.iter().product();
        let mut acc = DMatrix::<Complex64>::zeros(total, total);
        for b in &self.branches {
            let prod = b.local_a.kron(&b.local_b).kron(&b.local_c);
            acc += prod.matrix() * Complex64::new(b.weight, 0.0);
        }
        DensityOperator::new(acc, PartyLayout::new(dims)?)
    }
}

/// One branch of a hybrid model: λ fixes the state of `local`'s party while
/// the remaining two parties share an arbitrary (possibly entangled) state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridBranch {
    pub weight: f64,
    pub local: DensityOperator,
    pub partners: DensityOperator,
}

/// A finite hybrid-LHS model with three branch families: in family A Bob
/// and Charlie share an arbitrary pre-determined state, in family B only
/// Bob's state is pre-determined, and in family C only Charlie's. Family
/// weights jointly sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridLhsModel {
    pub branches_a: Vec<HybridBranch>,
    pub branches_b: Vec<HybridBranch>,
    pub branches_c: Vec<HybridBranch>,
}

impl HybridLhsModel {
    pub fn new(
        branches_a: Vec<HybridBranch>,
        branches_b: Vec<HybridBranch>,
        branches_c: Vec<HybridBranch>,
    ) -> Result<Self> {
        let all = branches_a.iter().chain(&branches_b).chain(&branches_c);
        check_weights(all.map(|b| &b.weight))?;
        for family in [&branches_a, &branches_b, &branches_c] {
            for b in family {
                check_parties(&b.local, 1, "local state")?;
                check_parties(&b.partners, 2, "partner state")?;
            }
        }
        Ok(Self {
            branches_a,
            branches_b,
            branches_c,
        })
    }

    /// Total weight carried by each family (A, B, C).
    pub fn family_weights(&self) -> [f64; 3] {
        let sum = |v: &[HybridBranch]| v.iter().map(|b| b.weight).sum();
        [
            sum(&self.branches_a),
            sum(&self.branches_b),
            sum(&self.branches_c),
        ]
    }

    /// The realized tripartite state in (A, B, C) party order.
    pub fn realize(&self) -> Result<DensityOperator> {
        let mut acc: Option<DMatrix<Complex64>> = None;
        let mut dims: Option<Vec<usize>> = None;
        // family A leaves the kron order alone; families B and C park the
        // local party in front and then restore (A, B, C)
        let families: [(&[HybridBranch], Option<[usize; 3]>); 3] = [
            (&self.branches_a, None),
            (&self.branches_b, Some([1, 0, 2])),
            (&self.branches_c, Some([1, 2, 0])),
        ];
        for (family, perm) in families {
            for b in family {
                let mut prod = b.local.kron(&b.partners);
                if let Some(p) = perm {
                    prod = prod.permute_parties(&p)?;
                }
                let m = prod.matrix() * Complex64::new(b.weight, 0.0);
                match (&mut acc, &mut dims) {
                    (Some(a), Some(d)) => {
                        if prod.layout().dims() != d.as_slice() {
                            return Err(Error::DimensionMismatch(
                                "branch dimensions disagree".into(),
                            ));
                        }
                        *a += m;
                    }
                    _ => {
                        dims = Some(prod.layout().dims().to_vec());
                        acc = Some(m);
                    }
                }
            }
        }
        let acc = acc.ok_or(Error::EmptyInput)?;
        DensityOperator::new(acc, PartyLayout::new(dims.unwrap())?)
    }
}

/// One branch of a two-to-one model: Alice and Bob share `joint_ab` (product
/// for the nonsteerable family, arbitrary for the non-GMS family) while
/// Charlie's state is pre-determined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoToOneBranch {
    pub weight: f64,
    pub joint_ab: DensityOperator,
    pub local_c: DensityOperator,
}

/// A finite model in which Alice and Bob can never steer Charlie: every
/// branch fixes Charlie's state outright.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoToOneLhsModel {
    pub branches: Vec<TwoToOneBranch>,
}

impl TwoToOneLhsModel {
    pub fn new(branches: Vec<TwoToOneBranch>) -> Result<Self> {
        check_weights(branches.iter().map(|b| &b.weight))?;
        for b in &branches {
            check_parties(&b.joint_ab, 2, "joint AB state")?;
            check_parties(&b.local_c, 1, "local state")?;
        }
        Ok(Self { branches })
    }

    pub fn realize(&self) -> Result<DensityOperator> {
        let first = self.branches.first().ok_or(Error::EmptyInput)?;
        let mut dims = first.joint_ab.layout().dims().to_vec();
        dims.push(first.local_c.total_dim());
        let total: usize = dims.iter().product();
        let mut acc = DMatrix::<Complex64>::zeros(total, total);
        for b in &self.branches {
            let prod = b.joint_ab.kron(&b.local_c);
            acc += prod.matrix() * Complex64::new(b.weight, 0.0);
        }
        DensityOperator::new(acc, PartyLayout::new(dims)?)
    }
}

// --- seeded sampling -------------------------------------------------------

fn model_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = w.iter().sum();
    for x in &mut w {
        *x /= sum;
    }
    w
}

fn random_gaussian_vector(rng: &mut ChaCha8Rng, d: usize) -> DVector<Complex64> {
    DVector::from_fn(d, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// Uniformly random state over `dims`: a pure Gaussian projector or a
/// normalized G·G† with even odds.
fn random_state(rng: &mut ChaCha8Rng, dims: Vec<usize>) -> DensityOperator {
    let layout = PartyLayout::new(dims).expect("sampler dims are valid");
    let d = layout.total_dim();
    let matrix = if rng.random::<bool>() {
        let v = random_gaussian_vector(rng, d);
        let v = v.clone() / Complex64::new(v.norm(), 0.0);
        &v * v.adjoint()
    } else {
        let g = DMatrix::from_fn(d, d, |_, _| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        m.map(|z| z / tr)
    };
    DensityOperator::new(matrix, layout).expect("sampled states satisfy the invariants")
}

fn random_qubit(rng: &mut ChaCha8Rng) -> DensityOperator {
    random_state(rng, vec![2])
}

/// Reproducible random LHS models over three qubit parties.
pub fn sample_lhs(count: usize, branch_count: usize, seed: u64) -> Vec<LhsModel> {
    (0..count)
        .map(|i| {
            let mut rng = model_rng(seed, i as u64);
            let weights = random_simplex(&mut rng, branch_count);
            let branches = weights
                .into_iter()
                .map(|weight| LhsBranch {
                    weight,
                    local_a: random_qubit(&mut rng),
                    local_b: random_qubit(&mut rng),
                    local_c: random_qubit(&mut rng),
                })
                .collect();
            LhsModel::new(branches).expect("sampled weights are a simplex point")
        })
        .collect()
}

/// Reproducible random hybrid models: a three-way family split, then
/// `branch_count` branches per family with possibly entangled partner pairs.
pub fn sample_hybrid(count: usize, branch_count: usize, seed: u64) -> Vec<HybridLhsModel> {
    (0..count)
        .map(|i| {
            let mut rng = model_rng(seed, i as u64);
            let family_weights = random_simplex(&mut rng, 3);
            let mut families = Vec::with_capacity(3);
            for fw in family_weights {
                let weights = random_simplex(&mut rng, branch_count);
                let branches: Vec<HybridBranch> = weights
                    .into_iter()
                    .map(|w| HybridBranch {
                        weight: fw * w,
                        local: random_qubit(&mut rng),
                        partners: random_state(&mut rng, vec![2, 2]),
                    })
                    .collect();
                families.push(branches);
            }
            let c = families.pop().unwrap();
            let b = families.pop().unwrap();
            let a = families.pop().unwrap();
            HybridLhsModel::new(a, b, c).expect("family weights sum to one")
        })
        .collect()
}

/// Reproducible random two-to-one models; half the branches use a product
/// AB state, half an arbitrary joint one.
pub fn sample_two_to_one(count: usize, branch_count: usize, seed: u64) -> Vec<TwoToOneLhsModel> {
    (0..count)
        .map(|i| {
            let mut rng = model_rng(seed, i as u64);
            let weights = random_simplex(&mut rng, branch_count);
            let branches = weights
                .into_iter()
                .map(|weight| {
                    let joint_ab = if rng.random::<bool>() {
                        random_qubit(&mut rng).kron(&random_qubit(&mut rng))
                    } else {
                        random_state(&mut rng, vec![2, 2])
                    };
                    TwoToOneBranch {
                        weight,
                        joint_ab,
                        local_c: random_qubit(&mut rng),
                    }
                })
                .collect();
            TwoToOneLhsModel::new(branches).expect("sampled weights are a simplex point")
        })
        .collect()
}

// --- verification ----------------------------------------------------------

/// All margins one model produced; every one must clear −MARGIN_TOL.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCheck {
    pub checks: usize,
    pub min_margin: f64,
    pub tightest: String,
}

struct MarginCollector {
    checks: Vec<(String, f64)>,
}

impl MarginCollector {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn push(&mut self, label: String, margin: f64) {
        self.checks.push((label, margin));
    }

    fn push_reports(&mut self, reports: &[CriterionReport], ids: Option<&[CriterionId]>, gms_only: bool) {
        for r in reports {
            if let Some(ids) = ids {
                if !ids.contains(&r.id) {
                    continue;
                }
            }
            if !gms_only {
                if let Some(m) = r.steering_margin() {
                    self.push(format!("{}/steering", r.id), m);
                }
            }
            if let Some(m) = r.gms_margin() {
                self.push(format!("{}/gms", r.id), m);
            }
        }
    }

    fn finish<M: Serialize>(self, model: &M) -> Result<ModelCheck> {
        let (tightest, min_margin) = self
            .checks
            .iter()
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("margins are finite"))
            .map(|(l, m)| (l.clone(), *m))
            .expect("at least one check ran");
        if min_margin < -MARGIN_TOL {
            return Err(Error::OracleFailure {
                check: tightest,
                margin: min_margin,
                model_json: serde_json::to_string(model).unwrap_or_else(|e| e.to_string()),
            });
        }
        Ok(ModelCheck {
            checks: self.checks.len(),
            min_margin,
            tightest,
        })
    }
}

/// Outcome entropy of one local observable on one branch state.
fn branch_entropy(local: &DensityOperator, obs: &Observable) -> Result<f64> {
    Ok(shannon_entropy(&joint_distribution(local, &[obs])?))
}

/// Check a plain LHS model: no state-independent bound of either scenario
/// may be violated, and the state-dependent Walborn-style inequalities must
/// hold with their right sides computed exactly from the branches.
pub fn verify_lhs(model: &LhsModel, pairs: &PartyPairs) -> Result<ModelCheck> {
    let rho = model.realize()?;
    let mut collector = MarginCollector::new();
    collector.push_reports(
        &evaluate_one_to_two(&rho, &pairs.a, &pairs.b, &pairs.c)?,
        None,
        false,
    );
    collector.push_reports(
        &evaluate_two_to_one(&rho, &pairs.a, &pairs.b, &pairs.c)?,
        None,
        false,
    );

    let dists = setting_distributions(&rho, &[&pairs.a, &pairs.b, &pairs.c])?;
    for (setting, dist) in ["X", "Z"].into_iter().zip(&dists) {
        let pick = |pair: &crate::observables::ObservablePair| {
            if setting == "X" { pair.first().clone() } else { pair.second().clone() }
        };
        let obs_b = pick(&pairs.b);
        let obs_c = pick(&pairs.c);
        let mut rhs_b = 0.0;
        let mut rhs_c = 0.0;
        for br in &model.branches {
            rhs_b += br.weight * branch_entropy(&br.local_b, &obs_b)?;
            rhs_c += br.weight * branch_entropy(&br.local_c, &obs_c)?;
        }
        // product branches make the joint branch entropy additive
        let rhs_bc = rhs_b + rhs_c;
        collector.push(
            format!("walborn-B|A/{setting}"),
            conditional_entropy(dist, &[1], &[0])? - rhs_b,
        );
        collector.push(
            format!("walborn-C|A/{setting}"),
            conditional_entropy(dist, &[2], &[0])? - rhs_c,
        );
        collector.push(
            format!("walborn-BC|A/{setting}"),
            conditional_entropy(dist, &[1, 2], &[0])? - rhs_bc,
        );
        collector.push(
            format!("walborn-C|AB/{setting}"),
            conditional_entropy(dist, &[2], &[0, 1])? - rhs_c,
        );
    }
    collector.finish(model)
}

/// Check a hybrid model: only the genuine-multipartite bounds apply (the
/// plain steering bounds can legitimately break, e.g. for φ⁺ shared between
/// Alice and Bob).
pub fn verify_hybrid(model: &HybridLhsModel, pairs: &PartyPairs) -> Result<ModelCheck> {
    let rho = model.realize()?;
    let mut collector = MarginCollector::new();
    collector.push_reports(
        &evaluate_one_to_two(&rho, &pairs.a, &pairs.b, &pairs.c)?,
        Some(&[CriterionId::S1, CriterionId::A]),
        true,
    );
    collector.push_reports(
        &evaluate_two_to_one(&rho, &pairs.a, &pairs.b, &pairs.c)?,
        Some(&[CriterionId::Tsum]),
        true,
    );
    collector.finish(model)
}

/// Check a two-to-one model: Charlie is pre-determined in every branch, so
/// all two-to-one bounds apply, as does the Walborn-style state-dependent
/// inequality for Charlie.
pub fn verify_two_to_one(model: &TwoToOneLhsModel, pairs: &PartyPairs) -> Result<ModelCheck> {
    let rho = model.realize()?;
    let mut collector = MarginCollector::new();
    collector.push_reports(
        &evaluate_two_to_one(&rho, &pairs.a, &pairs.b, &pairs.c)?,
        None,
        false,
    );

    let dists = setting_distributions(&rho, &[&pairs.a, &pairs.b, &pairs.c])?;
    for (setting, dist) in ["X", "Z"].into_iter().zip(&dists) {
        let obs_c = if setting == "X" {
            pairs.c.first().clone()
        } else {
            pairs.c.second().clone()
        };
        let mut rhs_c = 0.0;
        for br in &model.branches {
            rhs_c += br.weight * branch_entropy(&br.local_c, &obs_c)?;
        }
        collector.push(
            format!("walborn-C|AB/{setting}"),
            conditional_entropy(dist, &[2], &[0, 1])? - rhs_c,
        );
        collector.push(
            format!("walborn-C|A/{setting}"),
            conditional_entropy(dist, &[2], &[0])? - rhs_c,
        );
        collector.push(
            format!("walborn-C|B/{setting}"),
            conditional_entropy(dist, &[2], &[1])? - rhs_c,
        );
    }
    collector.finish(model)
}

/// Which model class a batch run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lhs,
    Hybrid,
    TwoToOne,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelKind::Lhs => "lhs",
            ModelKind::Hybrid => "hybrid",
            ModelKind::TwoToOne => "two-to-one",
        };
        f.write_str(s)
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lhs" => Ok(ModelKind::Lhs),
            "hybrid" => Ok(ModelKind::Hybrid),
            "two-to-one" | "2-1" => Ok(ModelKind::TwoToOne),
            other => Err(Error::Domain(format!("unknown model kind `{other}`"))),
        }
    }
}

/// Aggregate outcome of a batch verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub kind: ModelKind,
    pub models: usize,
    pub checks: usize,
    pub min_margin: f64,
    pub tightest: String,
}

fn summarize(kind: ModelKind, results: Vec<Result<ModelCheck>>) -> Result<BatchSummary> {
    let mut summary = BatchSummary {
        kind,
        models: 0,
        checks: 0,
        min_margin: f64::INFINITY,
        tightest: String::new(),
    };
    for r in results {
        let check = r?;
        summary.models += 1;
        summary.checks += check.checks;
        if check.min_margin < summary.min_margin {
            summary.min_margin = check.min_margin;
            summary.tightest = check.tightest;
        }
    }
    Ok(summary)
}

/// Sample `count` models of `kind` and verify them all (in parallel when the
/// `parallel` feature is on). The first violation aborts the batch with
/// [`Error::OracleFailure`].
pub fn run_batch_check(
    kind: ModelKind,
    count: usize,
    branch_count: usize,
    seed: u64,
    pairs: &PartyPairs,
) -> Result<BatchSummary> {
    if count == 0 || branch_count == 0 {
        return Err(Error::EmptyInput);
    }
    let results = match kind {
        ModelKind::Lhs => {
            let models = sample_lhs(count, branch_count, seed);
            crate::par::map_items(&models, |m| verify_lhs(m, pairs))
        }
        ModelKind::Hybrid => {
            let models = sample_hybrid(count, branch_count, seed);
            crate::par::map_items(&models, |m| verify_hybrid(m, pairs))
        }
        ModelKind::TwoToOne => {
            let models = sample_two_to_one(count, branch_count, seed);
            crate::par::map_items(&models, |m| verify_two_to_one(m, pairs))
        }
    };
    summarize(kind, results)
}
