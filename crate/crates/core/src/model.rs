//! Data re-uploading variational classifier.
//!
//! One layer is the encoding circuit for the sample, followed by a trainable
//! `RY(θ_{l,j})` on every qubit and a CNOT ring: `CNOT(n-1 -> 0)` first, then
//! `CNOT(j -> j+1)` for `j = 0..n-2`. The encoding is repeated at the start of
//! every layer. The model output is `<Z>` on the last qubit.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::encoding::{encode, required_qubits, EncodingSpec, FeatureVector};
use crate::error::{Error, Result};
use crate::statevector::{Circuit, Gate, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub encoding: EncodingSpec,
    pub num_features: usize,
    pub num_layers: usize,
}

impl ModelConfig {
    pub fn new(encoding: EncodingSpec, num_features: usize, num_layers: usize) -> Result<Self> {
        let config = Self { encoding, num_features, num_layers };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.encoding.validate()?;
        if self.num_features < 2 {
            return Err(Error::Config(format!("need at least 2 features, got {}", self.num_features)));
        }
        if self.num_layers < 1 {
            return Err(Error::Config("need at least 1 layer".into()));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        required_qubits(self.encoding.kind, self.num_features)
    }

    /// `M * n` trainable angles.
    pub fn num_params(&self) -> usize {
        self.num_layers * self.num_qubits()
    }
}

/// Trainable angles, layer-major: `theta[l * n + j]` drives qubit `j` of layer `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    theta: Vec<f64>,
}

impl ModelParams {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::Parameter(format!("theta[{i}] is not finite")));
        }
        Ok(Self { theta })
    }

    pub fn zeros(config: &ModelConfig) -> Self {
        Self { theta: vec![0.0; config.num_params()] }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    fn check(&self, config: &ModelConfig) -> Result<()> {
        if self.theta.len() != config.num_params() {
            return Err(Error::Parameter(format!(
                "expected {} parameters for {} layers x {} qubits, got {}",
                config.num_params(),
                config.num_layers,
                config.num_qubits(),
                self.theta.len()
            )));
        }
        Ok(())
    }
}

/// Gates of one classification block on `thetas.len()` qubits.
fn classifier_block(thetas: &[f64]) -> impl Iterator<Item = Gate> + '_ {
    let n = thetas.len();
    let rotations = thetas.iter().enumerate().map(|(target, &angle)| Gate::Ry { target, angle });
    let ring = (n > 1)
        .then(|| std::iter::once(Gate::Cnot { control: n - 1, target: 0 }).chain((0..n - 1).map(|j| Gate::Cnot { control: j, target: j + 1 })))
        .into_iter()
        .flatten();
    rotations.chain(ring)
}

fn check_input(x: &FeatureVector, config: &ModelConfig) -> Result<()> {
    config.validate()?;
    if x.len() != config.num_features {
        return Err(Error::Input(format!("expected {} features, got {}", config.num_features, x.len())));
    }
    Ok(())
}

/// The full `M`-layer circuit for sample `x`.
pub fn build_model_circuit(x: &FeatureVector, config: &ModelConfig, params: &ModelParams) -> Result<Circuit> {
    check_input(x, config)?;
    params.check(config)?;
    let encoding = encode(&config.encoding, x)?;
    let n = config.num_qubits();
    let mut circuit = Circuit::new(n)?;
    for thetas in params.as_slice().chunks_exact(n) {
        circuit.append(&encoding)?;
        for gate in classifier_block(thetas) {
            circuit.push(gate)?;
        }
    }
    Ok(circuit)
}

/// `<Z>` on the last qubit after running the model circuit on `|0...0>`.
pub fn forward(x: &FeatureVector, config: &ModelConfig, params: &ModelParams) -> Result<f64> {
    let circuit = build_model_circuit(x, config, params)?;
    let mut state = StateVector::zero(circuit.num_qubits())?;
    state.apply_circuit(&circuit)?;
    state.expectation_z(circuit.num_qubits() - 1)
}

/// Maps `<Z>` in `[-1, 1]` to the class-1 probability `(1 - <Z>) / 2`.
pub fn probability(expectation: f64) -> f64 {
    (1.0 - expectation) / 2.0
}

/// Class 1 iff the class-1 probability exceeds 0.5; ties go to class 0.
pub fn label_from_expectation(expectation: f64) -> u8 {
    u8::from(probability(expectation) > 0.5)
}

pub fn predict(x: &FeatureVector, config: &ModelConfig, params: &ModelParams) -> Result<u8> {
    forward(x, config, params).map(label_from_expectation)
}

/// A model bound to one sample, with its encoding circuit built once.
///
/// Evaluates the same gate sequence as [`forward`], in the same order, so the
/// results are bit-identical.
#[derive(Debug, Clone)]
pub struct SampleEvaluator {
    config: ModelConfig,
    encoding: Circuit,
}

impl SampleEvaluator {
    pub fn new(x: &FeatureVector, config: &ModelConfig) -> Result<Self> {
        check_input(x, config)?;
        let encoding = encode(&config.encoding, x)?;
        Ok(Self { config: *config, encoding })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    fn apply_block(state: &mut StateVector, thetas: &[f64]) {
        for gate in classifier_block(thetas) {
            state.apply_trusted(&gate);
        }
    }

    fn apply_encoding(&self, state: &mut StateVector) {
        for gate in self.encoding.gates() {
            state.apply_trusted(gate);
        }
    }

    fn finish(&self, mut state: StateVector, theta: &[f64], from_layer: usize) -> f64 {
        let n = self.config.num_qubits();
        for thetas in theta.chunks_exact(n).skip(from_layer) {
            self.apply_encoding(&mut state);
            Self::apply_block(&mut state, thetas);
        }
        // qubit index is in range by construction
        state.expectation_z(n - 1).unwrap_or(0.0)
    }

    pub fn expectation(&self, params: &ModelParams) -> Result<f64> {
        params.check(&self.config)?;
        let state = StateVector::zero(self.config.num_qubits())?;
        Ok(self.finish(state, params.as_slice(), 0))
    }

    /// `<Z>` and its exact gradient with respect to every θ, from the
    /// two-term shift rule `d<Z>/dθ = (<Z>(θ+π/2) - <Z>(θ-π/2)) / 2`.
    ///
    /// States entering each layer are cached, so shifting a parameter of
    /// layer `l` only re-simulates layers `l..M`.
    pub fn expectation_and_gradient(&self, params: &ModelParams) -> Result<(f64, Vec<f64>)> {
        params.check(&self.config)?;
        let n = self.config.num_qubits();
        let theta = params.as_slice();

        let mut prefixes = Vec::with_capacity(self.config.num_layers);
        let mut state = StateVector::zero(n)?;
        for thetas in theta.chunks_exact(n) {
            self.apply_encoding(&mut state);
            prefixes.push(state.clone());
            Self::apply_block(&mut state, thetas);
        }
        let value = state.expectation_z(n - 1)?;

        let mut gradient = Vec::with_capacity(theta.len());
        let mut shifted = theta.to_vec();
        for (layer, prefix) in prefixes.iter().enumerate() {
            for j in 0..n {
                let i = layer * n + j;
                let mut eval = |delta: f64| {
                    shifted[i] = theta[i] + delta;
                    let mut s = prefix.clone();
                    Self::apply_block(&mut s, &shifted[layer * n..(layer + 1) * n]);
                    let z = self.finish(s, &shifted, layer + 1);
                    shifted[i] = theta[i];
                    z
                };
                let plus = eval(FRAC_PI_2);
                let minus = eval(-FRAC_PI_2);
                gradient.push((plus - minus) / 2.0);
            }
        }
        Ok((value, gradient))
    }
}
