//! Dense complex states over small multipartite Hilbert spaces.
//!
//! Everything is stored densely: total dimensions in this crate stay in the
//! 8–27 range, so there is nothing to gain from sparse or structured
//! representations. Parties are ordered (A, B, C, …) and a basis state
//! |a b c⟩ sits at flat index `a·d_B·d_C + b·d_C + c`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise Hermiticity tolerance.
pub const HERMITICITY_TOL: f64 = 1e-8;
/// Trace and norm tolerance.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalue floor for positive semidefiniteness.
pub const PSD_FLOOR: f64 = -1e-8;

/// Ordered per-party local dimensions. Parties are named A, B, C, … by
/// position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyLayout {
    dims: Vec<usize>,
}

impl PartyLayout {
    /// A layout from explicit local dimensions, each at least 2.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Domain(format!("local dimension {d} < 2")));
        }
        Ok(Self { dims })
    }

    /// `n` qubit parties.
    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n]).expect("n >= 1 qubits")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Display name of party `i`: A, B, C, …
    pub fn party_name(i: usize) -> char {
        (b'A' + i as u8) as char
    }

    /// Flat row-major index of a per-party outcome tuple.
    pub fn flat_index(&self, outcomes: &[usize]) -> usize {
        debug_assert_eq!(outcomes.len(), self.dims.len());
        outcomes
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&o, &d)| acc * d + o)
    }

    /// Validate that `positions` are in range and nonempty, returning them
    /// sorted and deduplicated.
    pub(crate) fn check_positions(&self, positions: &[usize]) -> Result<Vec<usize>> {
        if positions.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        for &p in positions {
            if p >= self.parties() {
                return Err(Error::BadPartyIndex {
                    index: p,
                    parties: self.parties(),
                });
            }
        }
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(sorted)
    }
}

/// All multi-indices of a dims tuple, in row-major order.
pub(crate) fn multi_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; dims.len()];
    for _ in 0..total {
        out.push(idx.clone());
        for k in (0..dims.len()).rev() {
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

/// A normalized pure state vector over a party layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    amplitudes: DVector<Complex64>,
    layout: PartyLayout,
}

impl PureStateVector {
    /// Validates Euclidean norm 1 within `TRACE_TOL` and matching dimension.
    pub fn new(amplitudes: DVector<Complex64>, layout: PartyLayout) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude count {} != total dimension {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("norm {norm} != 1")));
        }
        Ok(Self { amplitudes, layout })
    }

    /// Computational basis state |i⟩ of a single party with dimension `d`.
    pub fn basis_state(d: usize, i: usize) -> Result<Self> {
        let layout = PartyLayout::new(vec![d])?;
        if i >= d {
            return Err(Error::Domain(format!("basis index {i} >= dimension {d}")));
        }
        let mut amps = DVector::zeros(d);
        amps[i] = Complex64::new(1.0, 0.0);
        Self::new(amps, layout)
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn layout(&self) -> &PartyLayout {
        &self.layout
    }

    /// The rank-1 projector |ψ⟩⟨ψ| as a density operator.
    pub fn projector(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator {
            matrix: m,
            layout: self.layout.clone(),
        }
    }

    /// Reorder parties: entry `i` of `perm` names the old position that
    /// becomes new position `i`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        let map = permutation_index_map(&self.layout, perm)?;
        let mut amps = DVector::zeros(self.amplitudes.len());
        for (old, &new) in map.iter().enumerate() {
            amps[new] = self.amplitudes[old];
        }
        let dims = perm.iter().map(|&p| self.layout.dims()[p]).collect();
        Ok(Self {
            amplitudes: amps,
            layout: PartyLayout::new(dims)?,
        })
    }
}

/// A trace-one positive-semidefinite Hermitian operator over a party layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
    layout: PartyLayout,
}

impl DensityOperator {
    /// Validates Hermiticity (entrywise `HERMITICITY_TOL`), unit trace
    /// (`TRACE_TOL`) and positive semidefiniteness (eigenvalues above
    /// `PSD_FLOOR`).
    pub fn new(matrix: DMatrix<Complex64>, layout: PartyLayout) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, layout needs {d}x{d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        for i in 0..d {
            for j in i..d {
                let delta = matrix[(i, j)] - matrix[(j, i)].conj();
                if delta.norm() > HERMITICITY_TOL {
                    return Err(Error::InvalidState(format!(
                        "not Hermitian at ({i},{j}): residual {:.3e}",
                        delta.norm()
                    )));
                }
            }
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let out = Self { matrix, layout };
        let min = out
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < PSD_FLOOR {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(out)
    }

    /// The maximally mixed state I/d over `layout`.
    pub fn maximally_mixed(layout: PartyLayout) -> Self {
        let d = layout.total_dim();
        let m = DMatrix::identity(d, d).map(|x: f64| Complex64::new(x / d as f64, 0.0));
        Self { matrix: m, layout }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn layout(&self) -> &PartyLayout {
        &self.layout
    }

    pub fn total_dim(&self) -> usize {
        self.layout.total_dim()
    }

    /// Real eigenvalue spectrum (Hermitian eigendecomposition), unsorted and
    /// unclipped.
    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    /// Trace out every party not in `keep`; the result keeps the retained
    /// parties in their original order. Trace is preserved.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let keep = self.layout.check_positions(keep)?;
        let dims = self.layout.dims();
        let traced: Vec<usize> = (0..dims.len()).filter(|p| !keep.contains(p)).collect();
        if traced.is_empty() {
            return Ok(self.clone());
        }

        let kept_dims: Vec<usize> = keep.iter().map(|&p| dims[p]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&p| dims[p]).collect();
        let kept_indices = multi_indices(&kept_dims);
        let traced_indices = multi_indices(&traced_dims);

        // recompose a full multi-index from kept and traced components
        let full_index = |kq: &[usize], tq: &[usize]| -> usize {
            let mut full = vec![0usize; dims.len()];
            for (slot, &p) in keep.iter().enumerate() {
                full[p] = kq[slot];
            }
            for (slot, &p) in traced.iter().enumerate() {
                full[p] = tq[slot];
            }
            self.layout.flat_index(&full)
        };

        let dk: usize = kept_dims.iter().product();
        let mut out = DMatrix::zeros(dk, dk);
        for (i, ki) in kept_indices.iter().enumerate() {
            for (j, kj) in kept_indices.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in &traced_indices {
                    acc += self.matrix[(full_index(ki, t), full_index(kj, t))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityOperator {
            matrix: out,
            layout: PartyLayout::new(kept_dims)?,
        })
    }

    /// Reorder parties: entry `i` of `perm` names the old position that
    /// becomes new position `i`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<Self> {
        let map = permutation_index_map(&self.layout, perm)?;
        let d = self.total_dim();
        let mut out = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        let dims = perm.iter().map(|&p| self.layout.dims()[p]).collect();
        Ok(Self {
            matrix: out,
            layout: PartyLayout::new(dims)?,
        })
    }

    /// Kronecker product with another density operator, concatenating layouts.
    pub fn kron(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.layout.dims().to_vec();
        dims.extend_from_slice(other.layout.dims());
        DensityOperator {
            matrix: self.matrix.kronecker(&other.matrix),
            layout: PartyLayout { dims },
        }
    }
}

fn permutation_index_map(layout: &PartyLayout, perm: &[usize]) -> Result<Vec<usize>> {
    let n = layout.parties();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation length {} != party count {n}",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= n {
            return Err(Error::BadPartyIndex {
                index: p,
                parties: n,
            });
        }
        if seen[p] {
            return Err(Error::Domain(format!("party {p} repeated in permutation")));
        }
        seen[p] = true;
    }
    let dims = layout.dims();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_layout = PartyLayout::new(new_dims)?;
    // old flat index -> new flat index
    let map = multi_indices(dims)
        .iter()
        .map(|mi| {
            let new_mi: Vec<usize> = perm.iter().map(|&p| mi[p]).collect();
            new_layout.flat_index(&new_mi)
        })
        .collect();
    Ok(map)
}

/// A state of either kind, as stored in state files.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureStateVector),
    Density(DensityOperator),
}

impl State {
    pub fn layout(&self) -> &PartyLayout {
        match self {
            State::Pure(v) => v.layout(),
            State::Density(m) => m.layout(),
        }
    }

    /// View as a density operator (projector for pure inputs).
    pub fn to_density(&self) -> DensityOperator {
        match self {
            State::Pure(v) => v.projector(),
            State::Density(m) => m.clone(),
        }
    }
}

/// Tensor product of uniformly-kinded factors over the concatenated layout.
///
/// The trace (or norm) of the product is the product of the factor traces.
pub fn tensor_product(factors: &[State]) -> Result<State> {
    let first = factors.first().ok_or(Error::EmptyInput)?;
    match first {
        State::Pure(_) => {
            let mut vecs = Vec::with_capacity(factors.len());
            for f in factors {
                match f {
                    State::Pure(v) => vecs.push(v),
                    State::Density(_) => return Err(Error::KindMismatch),
                }
            }
            let mut amps = vecs[0].amplitudes().clone();
            let mut dims = vecs[0].layout().dims().to_vec();
            for v in &vecs[1..] {
                amps = amps.kronecker(v.amplitudes());
                dims.extend_from_slice(v.layout().dims());
            }
            Ok(State::Pure(PureStateVector {
                amplitudes: amps,
                layout: PartyLayout::new(dims)?,
            }))
        }
        State::Density(_) => {
            let mut mats = Vec::with_capacity(factors.len());
            for f in factors {
                match f {
                    State::Density(m) => mats.push(m),
                    State::Pure(_) => return Err(Error::KindMismatch),
                }
            }
            let mut out = mats[0].clone();
            for m in &mats[1..] {
                out = out.kron(m);
            }
            Ok(State::Density(out))
        }
    }
}

/// The three-qubit family a|000⟩ + √(1−a²)|111⟩ for a ∈ [0, 1].
pub fn ghz_family(a: f64) -> Result<PureStateVector> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(format!("ghz amplitude a={a} outside [0,1]")));
    }
    let mut amps = DVector::zeros(8);
    amps[0] = Complex64::new(a, 0.0);
    amps[7] = Complex64::new((1.0 - a * a).sqrt(), 0.0);
    PureStateVector::new(amps, PartyLayout::qubits(3))
}

/// The standard GHZ state with a = 1/√2.
pub fn ghz_standard() -> PureStateVector {
    ghz_family(std::f64::consts::FRAC_1_SQRT_2).expect("1/sqrt(2) is in range")
}

/// The three-qubit W state (|001⟩ + |010⟩ + |100⟩)/√3.
pub fn w_state() -> PureStateVector {
    let c = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut amps = DVector::zeros(8);
    amps[1] = c;
    amps[2] = c;
    amps[4] = c;
    PureStateVector::new(amps, PartyLayout::qubits(3)).expect("normalized by construction")
}

/// White-noise mixture p·|ψ⟩⟨ψ| + (1−p)·I/d for p ∈ [0, 1].
pub fn white_noise_mix(pure: &PureStateVector, p: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("noise weight p={p} outside [0,1]")));
    }
    let d = pure.layout().total_dim();
    let proj = pure.projector();
    let mixed = (1.0 - p) / d as f64;
    let mut m = proj.matrix * Complex64::new(p, 0.0);
    for i in 0..d {
        m[(i, i)] += Complex64::new(mixed, 0.0);
    }
    DensityOperator::new(m, pure.layout().clone())
}
