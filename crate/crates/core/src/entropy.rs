//! Shannon and Von Neumann entropy kernels, all in base-2 bits.

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::state::DensityOperator;

/// Probabilities below this are treated as exact zeros in entropy sums,
/// guarding log of roundoff dust.
pub const PROB_FLOOR: f64 = 1e-15;

fn plogp(p: f64) -> f64 {
    if p < PROB_FLOOR {
        0.0
    } else {
        p * p.log2()
    }
}

/// Shannon entropy −Σ p log₂ p of the full tensor, with 0·log 0 = 0.
pub fn shannon_entropy(dist: &JointDistribution) -> f64 {
    -dist.probabilities().iter().map(|&p| plogp(p)).sum::<f64>()
}

/// Shannon entropy of a raw probability slice (no shape needed).
pub fn shannon_entropy_of(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| plogp(p)).sum::<f64>()
}

/// Conditional Shannon entropy H(T|G) = H(T∪G) − H(G) computed from
/// marginals. `target` and `given` must be disjoint party sets; an empty
/// `given` reduces to the marginal entropy of `target`.
pub fn conditional_entropy(
    dist: &JointDistribution,
    target: &[usize],
    given: &[usize],
) -> Result<f64> {
    if target.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    if target.iter().any(|t| given.contains(t)) {
        return Err(Error::BadPartition);
    }
    let mut union = target.to_vec();
    union.extend_from_slice(given);
    let joint = dist.marginalize(&union)?;
    if given.is_empty() {
        return Ok(shannon_entropy(&joint));
    }
    let cond = dist.marginalize(given)?;
    Ok(shannon_entropy(&joint) - shannon_entropy(&cond))
}

/// Relative entropy D(p‖q) = Σ p log₂(p/q) ≥ 0, +∞ when q vanishes on the
/// support of p.
pub fn relative_entropy(p: &JointDistribution, q: &JointDistribution) -> Result<f64> {
    if p.dims() != q.dims() {
        return Err(Error::DimensionMismatch(format!(
            "shapes {:?} vs {:?}",
            p.dims(),
            q.dims()
        )));
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.probabilities().iter().zip(q.probabilities()) {
        if pi < PROB_FLOOR {
            continue;
        }
        if qi < PROB_FLOOR {
            return Ok(f64::INFINITY);
        }
        acc += pi * (pi / qi).log2();
    }
    Ok(acc)
}

/// Von Neumann entropy S(ρ) = −Σ λ log₂ λ over the eigenvalue spectrum,
/// with negatives clipped to zero.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    -rho.eigenvalues()
        .into_iter()
        .map(|l| plogp(l.max(0.0)))
        .sum::<f64>()
}

/// Conditional Von Neumann entropy S(T|G) = S(ρ_TG) − S(ρ_G); negative for
/// entangled states, down to −log₂ d for maximal entanglement.
pub fn von_neumann_conditional(
    state: &DensityOperator,
    target: usize,
    given: usize,
) -> Result<f64> {
    if target == given {
        return Err(Error::BadPartition);
    }
    let joint = state.partial_trace(&[target, given])?;
    let marginal = state.partial_trace(&[given])?;
    Ok(von_neumann_entropy(&joint) - von_neumann_entropy(&marginal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{tensor_product, PartyLayout, PureStateVector, State};
    use nalgebra::DVector;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dist(probs: Vec<f64>, dims: Vec<usize>) -> JointDistribution {
        JointDistribution::new(probs, dims).unwrap()
    }

    fn random_dist(dims: &[usize], rng: &mut ChaCha8Rng) -> JointDistribution {
        let n: usize = dims.iter().product();
        let mut w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let sum: f64 = w.iter().sum();
        for x in &mut w {
            *x /= sum;
        }
        dist(w, dims.to_vec())
    }

    fn bell() -> DensityOperator {
        let mut amps = DVector::zeros(4);
        amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[3] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        PureStateVector::new(amps, PartyLayout::qubits(2))
            .unwrap()
            .projector()
    }

    #[test]
    fn shannon_known_values() {
        let u = JointDistribution::uniform(vec![2, 2, 2]).unwrap();
        assert!((shannon_entropy(&u) - 3.0).abs() < 1e-12);

        let point = dist(vec![1.0, 0.0, 0.0, 0.0], vec![4]);
        assert_eq!(shannon_entropy(&point), 0.0);

        let d = dist(vec![0.5, 0.25, 0.25], vec![3]);
        assert!((shannon_entropy(&d) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn shannon_uniform_is_log2_n() {
        for n in 2..=27 {
            let u = JointDistribution::uniform(vec![n]).unwrap();
            assert!((shannon_entropy(&u) - (n as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_known_values() {
        let u = JointDistribution::uniform(vec![2, 2]).unwrap();
        assert!((conditional_entropy(&u, &[1], &[0]).unwrap() - 1.0).abs() < 1e-12);

        let corr = dist(vec![0.5, 0.0, 0.0, 0.5], vec![2, 2]);
        assert!(conditional_entropy(&corr, &[1], &[0]).unwrap().abs() < 1e-12);

        // chain-rule value 1.5 − H(3/4, 1/4), cross-checked against the
        // p(x_a)-weighted average of per-slice entropies
        let d = dist(vec![0.5, 0.25, 0.0, 0.25], vec![2, 2]);
        let h_a = shannon_entropy_of(&[0.75, 0.25]);
        let want = 1.5 - h_a;
        assert!((want - 0.688_721_875_540_867_3).abs() < 1e-12);
        let got = conditional_entropy(&d, &[1], &[0]).unwrap();
        assert!((got - want).abs() < 1e-12);
        let slices = 0.75 * shannon_entropy_of(&[0.5 / 0.75, 0.25 / 0.75])
            + 0.25 * shannon_entropy_of(&[0.0, 1.0]);
        assert!((got - slices).abs() < 1e-12);
    }

    #[test]
    fn conditional_rejects_overlap() {
        let u = JointDistribution::uniform(vec![2, 2]).unwrap();
        assert!(matches!(
            conditional_entropy(&u, &[0], &[0]),
            Err(Error::BadPartition)
        ));
    }

    #[test]
    fn chain_rule_and_monotonicity_on_random_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let d = random_dist(&[2, 3, 2], &mut rng);
            let h_tg = shannon_entropy(&d.marginalize(&[0, 1]).unwrap());
            let h_g = shannon_entropy(&d.marginalize(&[0]).unwrap());
            let cond = conditional_entropy(&d, &[1], &[0]).unwrap();
            assert!((cond + h_g - h_tg).abs() < 1e-12, "chain rule");
            let h_t = shannon_entropy(&d.marginalize(&[1]).unwrap());
            assert!(cond <= h_t + 1e-12, "conditioning must not increase entropy");
        }
    }

    #[test]
    fn relative_entropy_known_values() {
        let u = JointDistribution::uniform(vec![8]).unwrap();
        assert!(relative_entropy(&u, &u).unwrap().abs() < 1e-12);

        let mut point = vec![0.0; 8];
        point[3] = 1.0;
        let point = dist(point, vec![8]);
        assert!((relative_entropy(&point, &u).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(relative_entropy(&u, &point).unwrap(), f64::INFINITY);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let p = random_dist(&[2, 2, 2], &mut rng);
            let q = random_dist(&[2, 2, 2], &mut rng);
            assert!(relative_entropy(&p, &q).unwrap() >= -1e-12);
        }

        let v = JointDistribution::uniform(vec![4]).unwrap();
        assert!(matches!(
            relative_entropy(&u, &v),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn von_neumann_known_values() {
        // maximally entangled: S(B|A) = -1
        assert!((von_neumann_conditional(&bell(), 1, 0).unwrap() + 1.0).abs() < 1e-10);

        // product state: S(B|A) = S(rho_B)
        let mut amps = DVector::zeros(2);
        amps[0] = Complex64::new(0.6, 0.0);
        amps[1] = Complex64::new(0.8, 0.0);
        let psi = PureStateVector::new(amps, PartyLayout::new(vec![2]).unwrap()).unwrap();
        let half = DensityOperator::maximally_mixed(PartyLayout::new(vec![2]).unwrap());
        let prod = tensor_product(&[
            State::Density(psi.projector()),
            State::Density(half.clone()),
        ])
        .unwrap()
        .to_density();
        let got = von_neumann_conditional(&prod, 1, 0).unwrap();
        assert!((got - 1.0).abs() < 1e-10);

        // eigenvalue oracle: maximally mixed two-qubit state has S(B|A) = 1
        let mm = DensityOperator::maximally_mixed(PartyLayout::qubits(2));
        assert!((von_neumann_conditional(&mm, 1, 0).unwrap() - 1.0).abs() < 1e-10);
        assert!((von_neumann_entropy(&mm) - 2.0).abs() < 1e-10);

        assert!(matches!(
            von_neumann_conditional(&mm, 1, 1),
            Err(Error::BadPartition)
        ));
    }

    #[test]
    fn conditional_von_neumann_floor_scales_with_dimension() {
        // maximally entangled qutrit pair reaches S(B|A) = -log2(3)
        let d = 3;
        let mut amps = DVector::zeros(d * d);
        for k in 0..d {
            amps[k * d + k] = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        }
        let psi = PureStateVector::new(amps, PartyLayout::new(vec![d, d]).unwrap())
            .unwrap()
            .projector();
        let got = von_neumann_conditional(&psi, 1, 0).unwrap();
        assert!((got + (d as f64).log2()).abs() < 1e-10);
    }
}
