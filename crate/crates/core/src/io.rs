//! State and observable file formats, plus deterministic float printing.
//!
//! States travel as `{"dims":[2,2,2],"kind":"pure"|"density","data":[[re,im],…]}`
//! where pure data lists amplitudes and density data the row-major flattened
//! matrix. Observables travel as `{"d":2,"basis":[[[re,im],…],…]}`. Parsing
//! always revalidates the physical invariants.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::observables::Observable;
use crate::state::{DensityOperator, PartyLayout, PureStateVector, State};

/// Format a float with 12 significant digits, byte-stable across runs.
pub fn fmt_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    kind: String,
    data: Vec<[f64; 2]>,
}

impl StateFile {
    fn from_state(state: &State) -> Self {
        match state {
            State::Pure(v) => Self {
                dims: v.layout().dims().to_vec(),
                kind: "pure".into(),
                data: v.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
            },
            State::Density(m) => {
                let d = m.total_dim();
                let mut data = Vec::with_capacity(d * d);
                for i in 0..d {
                    for j in 0..d {
                        let z = m.matrix()[(i, j)];
                        data.push([z.re, z.im]);
                    }
                }
                Self {
                    dims: m.layout().dims().to_vec(),
                    kind: "density".into(),
                    data,
                }
            }
        }
    }

    fn into_state(self) -> Result<State> {
        let layout = PartyLayout::new(self.dims)?;
        let d = layout.total_dim();
        match self.kind.as_str() {
            "pure" => {
                if self.data.len() != d {
                    return Err(Error::Parse(format!(
                        "pure state needs {d} amplitudes, found {}",
                        self.data.len()
                    )));
                }
                let amps = DVector::from_iterator(
                    d,
                    self.data.iter().map(|&[re, im]| Complex64::new(re, im)),
                );
                Ok(State::Pure(PureStateVector::new(amps, layout)?))
            }
            "density" => {
                if self.data.len() != d * d {
                    return Err(Error::Parse(format!(
                        "density matrix needs {} entries, found {}",
                        d * d,
                        self.data.len()
                    )));
                }
                // data is row-major
                let m = DMatrix::from_fn(d, d, |i, j| {
                    let [re, im] = self.data[i * d + j];
                    Complex64::new(re, im)
                });
                Ok(State::Density(DensityOperator::new(m, layout)?))
            }
            other => Err(Error::Parse(format!(
                "unknown state kind `{other}` (expected \"pure\" or \"density\")"
            ))),
        }
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateFile::from_state(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        StateFile::deserialize(deserializer)?
            .into_state()
            .map_err(D::Error::custom)
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateFile::from_state(&State::Density(self.clone())).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match StateFile::deserialize(deserializer)?
            .into_state()
            .map_err(D::Error::custom)?
        {
            State::Density(m) => Ok(m),
            State::Pure(_) => Err(D::Error::custom("expected kind \"density\"")),
        }
    }
}

impl Serialize for PureStateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateFile::from_state(&State::Pure(self.clone())).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PureStateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match StateFile::deserialize(deserializer)?
            .into_state()
            .map_err(D::Error::custom)?
        {
            State::Pure(v) => Ok(v),
            State::Density(_) => Err(D::Error::custom("expected kind \"pure\"")),
        }
    }
}

/// Serialize a state to the canonical JSON file form.
pub fn state_to_json(state: &State) -> String {
    serde_json::to_string(state).expect("state serialization cannot fail")
}

/// Parse and validate a state from JSON.
pub fn state_from_json(json: &str) -> Result<State> {
    Ok(serde_json::from_str(json)?)
}

/// Load and validate a state file.
pub fn load_state(path: &Path) -> Result<State> {
    state_from_json(&std::fs::read_to_string(path)?)
}

/// Write a state file.
pub fn save_state(path: &Path, state: &State) -> Result<()> {
    Ok(std::fs::write(path, state_to_json(state))?)
}

#[derive(Serialize, Deserialize)]
struct ObservableFile {
    d: usize,
    basis: Vec<Vec<[f64; 2]>>,
}

/// Serialize an observable to the canonical JSON form.
pub fn observable_to_json(obs: &Observable) -> String {
    let file = ObservableFile {
        d: obs.dim(),
        basis: obs
            .vectors()
            .iter()
            .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("observable serialization cannot fail")
}

/// Parse and validate an observable from JSON.
pub fn observable_from_json(json: &str) -> Result<Observable> {
    let file: ObservableFile = serde_json::from_str(json)?;
    if file.basis.len() != file.d {
        return Err(Error::Parse(format!(
            "{} eigenvectors for dimension {}",
            file.basis.len(),
            file.d
        )));
    }
    let basis = file
        .basis
        .iter()
        .map(|v| {
            DVector::from_iterator(v.len(), v.iter().map(|&[re, im]| Complex64::new(re, im)))
        })
        .collect();
    Observable::new(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{ghz_standard, white_noise_mix};

    #[test]
    fn fmt_sig12_is_stable() {
        assert_eq!(fmt_sig12(0.5), "5.00000000000e-1");
        assert_eq!(fmt_sig12(2.0), "2.00000000000e0");
        assert_eq!(fmt_sig12(0.0), "0.00000000000e0");
    }

    #[test]
    fn pure_state_round_trips() {
        let state = State::Pure(ghz_standard());
        let json = state_to_json(&state);
        assert!(json.contains("\"kind\":\"pure\""));
        let back = state_from_json(&json).unwrap();
        assert_eq!(state, back);
    }

    #[test]
    fn density_round_trips_row_major() {
        let rho = white_noise_mix(&ghz_standard(), 0.7).unwrap();
        let json = state_to_json(&State::Density(rho.clone()));
        let back = state_from_json(&json).unwrap();
        match back {
            State::Density(m) => {
                assert!((m.matrix() - rho.matrix()).norm() < 1e-15);
            }
            State::Pure(_) => panic!("kind flipped"),
        }
        // entry (0, 7) of the GHZ projector part sits at flat position 7 when
        // the flattening is row-major
        let file: serde_json::Value = serde_json::from_str(&json).unwrap();
        let data = file["data"].as_array().unwrap();
        let z07 = data[7].as_array().unwrap();
        assert!((z07[0].as_f64().unwrap() - 0.35).abs() < 1e-12);
    }

    #[test]
    fn invalid_states_are_rejected_on_load() {
        // wrong norm
        let bad = r#"{"dims":[2],"kind":"pure","data":[[1.0,0.0],[1.0,0.0]]}"#;
        assert!(state_from_json(bad).is_err());
        // wrong entry count
        let bad = r#"{"dims":[2],"kind":"pure","data":[[1.0,0.0]]}"#;
        assert!(matches!(state_from_json(bad), Err(Error::Parse(_))));
        // unknown kind
        let bad = r#"{"dims":[2],"kind":"ket","data":[[1.0,0.0],[0.0,0.0]]}"#;
        assert!(matches!(state_from_json(bad), Err(Error::Parse(_))));
        // non-PSD density
        let bad = r#"{"dims":[2],"kind":"density","data":[[1.5,0.0],[0.0,0.0],[0.0,0.0],[-0.5,0.0]]}"#;
        assert!(state_from_json(bad).is_err());
    }

    #[test]
    fn observable_round_trips() {
        let x = Observable::pauli_x();
        let json = observable_to_json(&x);
        let back = observable_from_json(&json).unwrap();
        assert_eq!(x, back);
        // a non-orthonormal basis fails validation on load
        let bad = r#"{"d":2,"basis":[[[1.0,0.0],[0.0,0.0]],[[1.0,0.0],[0.0,0.0]]]}"#;
        assert!(observable_from_json(bad).is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join("steering-core-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("state.json");
        let state = State::Density(white_noise_mix(&ghz_standard(), 0.9).unwrap());
        save_state(&path, &state).unwrap();
        let back = load_state(&path).unwrap();
        match (&state, &back) {
            (State::Density(a), State::Density(b)) => {
                assert!((a.matrix() - b.matrix()).norm() < 1e-12)
            }
            _ => panic!("kind flipped"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }
}
