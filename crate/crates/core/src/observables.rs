//! Projective observables as labeled orthonormal eigenbases.
//!
//! Criteria only ever consume outcome statistics, so an observable is just
//! its eigenbasis; eigenvalues are never stored. The maximum squared overlap
//! α between two bases feeds every entropic bound as −log₂ α.

use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Orthonormality tolerance for eigenbases.
pub const ORTHONORMALITY_TOL: f64 = 1e-9;

/// Computed overlaps this close to the 1/d floor are snapped onto it.
pub const MUB_SNAP_TOL: f64 = 1e-12;

/// A rank-1 nondegenerate projective measurement: `d` orthonormal
/// eigenvectors, one per outcome 0…d−1.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    basis: Vec<DVector<Complex64>>,
}

impl Observable {
    /// Validates pairwise orthonormality within `ORTHONORMALITY_TOL`.
    pub fn new(basis: Vec<DVector<Complex64>>) -> Result<Self> {
        let d = basis.len();
        if d < 2 {
            return Err(Error::Domain(format!("observable needs >= 2 outcomes, got {d}")));
        }
        for v in &basis {
            if v.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "eigenvector of length {} in a {d}-outcome basis",
                    v.len()
                )));
            }
        }
        for i in 0..d {
            for j in i..d {
                let want = if i == j { 1.0 } else { 0.0 };
                let ip = basis[i].dotc(&basis[j]);
                if (ip - Complex64::new(want, 0.0)).norm() > ORTHONORMALITY_TOL {
                    return Err(Error::InvalidState(format!(
                        "basis not orthonormal at pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Eigenvector of outcome `k`.
    pub fn vector(&self, k: usize) -> &DVector<Complex64> {
        &self.basis[k]
    }

    pub fn vectors(&self) -> &[DVector<Complex64>] {
        &self.basis
    }

    /// σ_z eigenbasis {|0⟩, |1⟩}.
    pub fn pauli_z() -> Self {
        Self::clock_basis(2).expect("d = 2")
    }

    /// σ_x eigenbasis {(|0⟩+|1⟩)/√2, (|0⟩−|1⟩)/√2}.
    pub fn pauli_x() -> Self {
        let plus = DVector::from_vec(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ]);
        let minus = DVector::from_vec(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        ]);
        Self::new(vec![plus, minus]).expect("orthonormal by construction")
    }

    /// Eigenbasis of the qudit clock operator: the computational basis.
    pub fn clock_basis(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("clock basis needs d >= 2, got {d}")));
        }
        let basis = (0..d)
            .map(|k| {
                let mut v = DVector::zeros(d);
                v[k] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::new(basis)
    }

    /// Eigenbasis of the qudit shift operator: the discrete Fourier
    /// transform of the computational basis, mutually unbiased with it.
    pub fn shift_basis(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("shift basis needs d >= 2, got {d}")));
        }
        let scale = 1.0 / (d as f64).sqrt();
        let basis = (0..d)
            .map(|k| {
                DVector::from_fn(d, |j, _| {
                    let phase = 2.0 * PI * (j * k) as f64 / d as f64;
                    Complex64::from_polar(scale, phase)
                })
            })
            .collect();
        Self::new(basis)
    }
}

/// Maximum squared overlap α = max_{j,k} |⟨x_j|z_k⟩|² between two eigenbases
/// of equal dimension. −log₂ α is the Maassen–Uffink bound; α = 1/d exactly
/// for mutually unbiased bases.
pub fn mub_overlap(first: &Observable, second: &Observable) -> Result<f64> {
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch(format!(
            "observable dimensions {} vs {}",
            first.dim(),
            second.dim()
        )));
    }
    let mut alpha: f64 = 0.0;
    for x in first.vectors() {
        for z in second.vectors() {
            alpha = alpha.max(x.dotc(z).norm_sqr());
        }
    }
    // α is mathematically confined to [1/d, 1]; squaring inner products of
    // unit vectors leaves ~1e-16 residue, so snap the MUB floor exactly and
    // clip the top so that complementary-observable bounds come out exact
    let floor = 1.0 / first.dim() as f64;
    if (alpha - floor).abs() <= MUB_SNAP_TOL {
        alpha = floor;
    }
    Ok(alpha.min(1.0))
}

/// Two observables on the same party with their precomputed overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservablePair {
    first: Observable,
    second: Observable,
    alpha: f64,
}

impl ObservablePair {
    pub fn new(first: Observable, second: Observable) -> Result<Self> {
        let alpha = mub_overlap(&first, &second)?;
        Ok(Self { first, second, alpha })
    }

    /// The (X, Z) qubit pair used throughout: σ_x then σ_z, α = 1/2.
    pub fn pauli_xz() -> Self {
        Self::new(Observable::pauli_x(), Observable::pauli_z()).expect("same dimension")
    }

    /// The (shift, clock) qudit pair, a MUB pair in any dimension: α = 1/d.
    pub fn clock_shift(d: usize) -> Result<Self> {
        Self::new(Observable::shift_basis(d)?, Observable::clock_basis(d)?)
    }

    pub fn first(&self) -> &Observable {
        &self.first
    }

    pub fn second(&self) -> &Observable {
        &self.second
    }

    pub fn dim(&self) -> usize {
        self.first.dim()
    }

    /// α = max squared overlap of the two eigenbases, in [1/d, 1].
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Overlap data for the composite observable O_B ⊗ O_C against Z_B ⊗ Z_C.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeOverlap {
    /// α_BC = α_B · α_C: overlaps of tensor-basis eigenvectors factorize.
    pub alpha_bc: f64,
    /// α_min = min{α_B, α_C}.
    pub alpha_min: f64,
}

/// Overlap of the composite pair on parties B and C.
pub fn composite_overlap(pair_b: &ObservablePair, pair_c: &ObservablePair) -> CompositeOverlap {
    CompositeOverlap {
        alpha_bc: pair_b.alpha() * pair_c.alpha(),
        alpha_min: pair_b.alpha().min(pair_c.alpha()),
    }
}

/// One observable pair per party, in party order (A, B, C).
#[derive(Debug, Clone, PartialEq)]
pub struct PartyPairs {
    pub a: ObservablePair,
    pub b: ObservablePair,
    pub c: ObservablePair,
}

impl PartyPairs {
    /// Qubit X/Z pairs everywhere.
    pub fn pauli() -> Self {
        Self {
            a: ObservablePair::pauli_xz(),
            b: ObservablePair::pauli_xz(),
            c: ObservablePair::pauli_xz(),
        }
    }

    /// Shift/clock pairs matched to a per-party dimension list.
    pub fn clock_shift(dims: &[usize]) -> Result<Self> {
        if dims.len() != 3 {
            return Err(Error::BadArity {
                expected: 3,
                got: dims.len(),
            });
        }
        Ok(Self {
            a: ObservablePair::clock_shift(dims[0])?,
            b: ObservablePair::clock_shift(dims[1])?,
            c: ObservablePair::clock_shift(dims[2])?,
        })
    }
}
