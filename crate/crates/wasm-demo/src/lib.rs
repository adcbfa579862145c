//! Browser bindings for three interactive views: the state a feature map
//! prepares, the amplitude-encoding rotation tree, and a small training run
//! on synthetic data. Each returns a JSON string for the page to render.
//!
//! The `*_json` functions are plain Rust so they can be tested natively; the
//! exported wrappers only translate errors.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qembed::bench::preprocess_for;
use qembed::data::{l2_normalize, split_train_test, synth_binary_dataset};
use qembed::encoding::{amplitude_angles, amplitude_circuit, encode, Axis, EncodingKind, EncodingSpec, FeatureVector};
use qembed::model::ModelConfig;
use qembed::statevector::{Gate, StateVector};
use qembed::train::{evaluate, train, TrainConfig};
use qembed::{Error, Result};

#[derive(Serialize)]
struct GateView {
    kind: String,
    qubits: Vec<usize>,
    angle: Option<f64>,
    label: String,
}

impl From<&Gate> for GateView {
    fn from(g: &Gate) -> Self {
        Self { kind: g.kind().to_string(), qubits: g.qubits(), angle: g.angle(), label: g.to_string() }
    }
}

#[derive(Serialize)]
struct StateView {
    encoding: String,
    num_qubits: usize,
    inputs: Vec<f64>,
    gates: Vec<GateView>,
    amplitudes: Vec<[f64; 2]>,
    probabilities: Vec<f64>,
}

#[derive(Serialize)]
struct TreeView {
    normalized: Vec<f64>,
    num_qubits: usize,
    levels: Vec<Vec<f64>>,
    gates: Vec<GateView>,
    reconstructed: Vec<f64>,
}

#[derive(Serialize)]
struct TrainView {
    encoding: String,
    num_qubits: usize,
    num_params: usize,
    train_size: usize,
    test_size: usize,
    epoch_accuracies: Vec<f64>,
    test_accuracy: f64,
    f1: f64,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Output(e.to_string()))
}

fn spec_for(encoding: &str, axis: &str, iqp_layers: usize) -> Result<EncodingSpec> {
    let kind: EncodingKind = encoding.parse()?;
    let spec = EncodingSpec { kind, axis: axis.parse::<Axis>()?, iqp_layers };
    spec.validate()?;
    Ok(spec)
}

fn simulate(circuit: &qembed::statevector::Circuit) -> Result<StateVector> {
    let mut state = StateVector::zero(circuit.num_qubits())?;
    state.apply_circuit(circuit)?;
    Ok(state)
}

/// Encodes `values` and simulates the circuit from `|0...0>`. Amplitude
/// inputs are normalized first.
pub fn encode_state_json(encoding: &str, axis: &str, values: &[f64], iqp_layers: usize) -> Result<String> {
    let spec = spec_for(encoding, axis, iqp_layers)?;
    let inputs = if spec.kind == EncodingKind::Amplitude { l2_normalize(values) } else { values.to_vec() };
    let circuit = encode(&spec, &FeatureVector::new(inputs.clone())?)?;
    let state = simulate(&circuit)?;
    to_json(&StateView {
        encoding: spec.label(),
        num_qubits: circuit.num_qubits(),
        inputs,
        gates: circuit.gates().iter().map(GateView::from).collect(),
        amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        probabilities: state.probabilities(),
    })
}

/// Rotation angles of the amplitude-encoding tree for `values` (normalized
/// here), grouped by level, plus the amplitudes the circuit prepares.
pub fn amplitude_tree_json(values: &[f64]) -> Result<String> {
    let normalized = l2_normalize(values);
    let tree = amplitude_angles(&FeatureVector::new(normalized.clone())?)?;
    let circuit = amplitude_circuit(&tree)?;
    let state = simulate(&circuit)?;
    to_json(&TreeView {
        normalized,
        num_qubits: tree.num_qubits(),
        levels: (0..tree.num_qubits()).map(|l| tree.level(l).to_vec()).collect(),
        gates: circuit.gates().iter().map(GateView::from).collect(),
        reconstructed: state.amplitudes().iter().map(|a| a.re).collect(),
    })
}

/// Trains an `n`-feature, `m`-layer classifier on two Gaussian blobs and
/// reports per-epoch training accuracy and held-out metrics.
#[allow(clippy::too_many_arguments)]
pub fn train_demo_json(
    encoding: &str,
    axis: &str,
    n: usize,
    m: usize,
    samples: usize,
    separation: f64,
    epochs: usize,
    learning_rate: f64,
    seed: u64,
) -> Result<String> {
    let spec = spec_for(encoding, axis, 2)?;
    let model = ModelConfig::new(spec, n, m)?;
    let data = synth_binary_dataset(samples, n, separation, seed)?;
    let (train_raw, test_raw) = split_train_test(&data, 0.8, seed)?;
    let (train_set, test_set) = preprocess_for(&train_raw, &test_raw, spec.kind)?;
    let tcfg = TrainConfig { epochs, learning_rate, seed, ..TrainConfig::default() };
    let history = train(&train_set, &model, &tcfg)?;
    let (test_accuracy, f1) = evaluate(&test_set, &model, &history.final_params)?;
    to_json(&TrainView {
        encoding: spec.label(),
        num_qubits: model.num_qubits(),
        num_params: model.num_params(),
        train_size: train_set.len(),
        test_size: test_set.len(),
        epoch_accuracies: history.epoch_train_accuracy,
        test_accuracy,
        f1,
    })
}

fn js(result: Result<String>) -> std::result::Result<String, JsError> {
    result.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = encodeState)]
pub fn encode_state(encoding: &str, axis: &str, values: Vec<f64>, iqp_layers: usize) -> std::result::Result<String, JsError> {
    js(encode_state_json(encoding, axis, &values, iqp_layers))
}

#[wasm_bindgen(js_name = amplitudeTree)]
pub fn amplitude_tree(values: Vec<f64>) -> std::result::Result<String, JsError> {
    js(amplitude_tree_json(&values))
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = trainDemo)]
pub fn train_demo(
    encoding: &str,
    axis: &str,
    n: usize,
    m: usize,
    samples: usize,
    separation: f64,
    epochs: usize,
    learning_rate: f64,
    seed: u64,
) -> std::result::Result<String, JsError> {
    js(train_demo_json(encoding, axis, n, m, samples, separation, epochs, learning_rate, seed))
}
