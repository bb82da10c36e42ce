//! Joint outcome distributions of product projective measurements.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::observables::Observable;
use crate::state::{multi_indices, DensityOperator, PartyLayout};

/// Entries this far below zero are treated as roundoff and clipped; anything
/// lower is an error.
pub const NEGATIVE_PROB_TOL: f64 = 1e-12;
/// Normalization tolerance for the total probability mass.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A probability tensor indexed by per-party outcomes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    probs: Vec<f64>,
    dims: Vec<usize>,
}

impl JointDistribution {
    /// Validates shape, clips negative roundoff, and checks normalization.
    pub fn new(probs: Vec<f64>, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || probs.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for shape {dims:?}",
                probs.len()
            )));
        }
        let mut clipped = probs;
        for p in &mut clipped {
            if *p < -NEGATIVE_PROB_TOL {
                return Err(Error::InvalidState(format!("negative probability {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = clipped.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidState(format!("probabilities sum to {sum}")));
        }
        Ok(Self { probs: clipped, dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    /// Flat row-major view of the tensor.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of one outcome tuple.
    pub fn prob(&self, outcomes: &[usize]) -> f64 {
        let idx = outcomes
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&o, &d)| acc * d + o);
        self.probs[idx]
    }

    /// Sum out every party not in `keep`; kept parties stay in original
    /// order. Marginals of a normalized tensor stay normalized.
    pub fn marginalize(&self, keep: &[usize]) -> Result<JointDistribution> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        for &p in keep {
            if p >= self.parties() {
                return Err(Error::BadPartyIndex {
                    index: p,
                    parties: self.parties(),
                });
            }
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() == self.parties() {
            return Ok(self.clone());
        }
        let kept_dims: Vec<usize> = kept.iter().map(|&p| self.dims[p]).collect();
        let total: usize = kept_dims.iter().product();
        let mut out = vec![0.0; total];
        for (idx, mi) in multi_indices(&self.dims).iter().enumerate() {
            let flat = kept
                .iter()
                .map(|&p| mi[p])
                .zip(&kept_dims)
                .fold(0, |acc, (o, &d)| acc * d + o);
            out[flat] += self.probs[idx];
        }
        JointDistribution::new(out, kept_dims)
    }

    /// Iterate `(outcome tuple, probability)` in row-major outcome order.
    pub fn outcomes(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        multi_indices(&self.dims)
            .into_iter()
            .zip(self.probs.iter().copied())
    }

    /// Uniform distribution over a shape.
    pub fn uniform(dims: Vec<usize>) -> Result<JointDistribution> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total == 0 {
            return Err(Error::EmptyInput);
        }
        JointDistribution::new(vec![1.0 / total as f64; total], dims)
    }
}

/// Outcome distribution of measuring each party with its own observable:
/// entry (x_a, x_b, …) is ⟨x_a x_b …| ρ |x_a x_b …⟩ in the product eigenbasis.
pub fn joint_distribution(
    state: &DensityOperator,
    observables: &[&Observable],
) -> Result<JointDistribution> {
    let layout: &PartyLayout = state.layout();
    if observables.len() != layout.parties() {
        return Err(Error::DimensionMismatch(format!(
            "{} observables for {} parties",
            observables.len(),
            layout.parties()
        )));
    }
    for (k, obs) in observables.iter().enumerate() {
        if obs.dim() != layout.dims()[k] {
            return Err(Error::DimensionMismatch(format!(
                "observable dimension {} != party {} dimension {}",
                obs.dim(),
                PartyLayout::party_name(k),
                layout.dims()[k]
            )));
        }
    }

    let dims = layout.dims().to_vec();
    let mut probs = Vec::with_capacity(layout.total_dim());
    for mi in multi_indices(&dims) {
        let mut v = observables[0].vector(mi[0]).clone();
        for (k, &outcome) in mi.iter().enumerate().skip(1) {
            v = v.kronecker(observables[k].vector(outcome));
        }
        let value: Complex64 = v.dotc(&(state.matrix() * &v));
        // Hermiticity makes the quadratic form real; residue means a layout bug
        assert!(
            value.im.abs() <= 1e-10,
            "imaginary probability residue {:.3e}",
            value.im
        );
        probs.push(value.re);
    }
    JointDistribution::new(probs, dims)
}
