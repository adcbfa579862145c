//! Classical-to-quantum feature maps.
//!
//! Five encoders turn a preprocessed feature vector into a state-preparation
//! circuit:
//!
//! * **Simple Angle**: one `RX(x_j)` (or `RY(x_j)`) per qubit.
//! * **π/4 Angle**: `H` then `U(x_j)` per qubit, where
//!   `U(x) = [[cos(π/4-x), sin(π/4-x)], [-sin(π/4-x), cos(π/4-x)]]`, giving
//!   the single-qubit state `cos x_j |0> + sin x_j |1>`.
//! * **Entangled Angle**: `H` and `RY(x_j)` on every qubit, then a ring of CNOTs.
//! * **Amplitude**: a tree of uniformly controlled `RY` rotations that loads a
//!   unit vector of length `N <= 2^n` into the amplitudes of `n` qubits.
//! * **IQP**: repeated blocks of `H`, `RZ(x_j)` and `RZZ(x_j x_k)`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Circuit, Control, Gate, Matrix2};

/// Tolerance on `sum x^2 = 1` for amplitude encoding inputs.
pub const AMPLITUDE_NORM_TOL: f64 = 1e-9;

/// Preprocessed input features: radians for the angle encoders, a unit
/// vector for amplitude encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("feature vector is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("feature {i} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl TryFrom<&[f64]> for FeatureVector {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    #[serde(rename = "simple")]
    SimpleAngle,
    #[serde(rename = "pi4")]
    Pi4Angle,
    #[serde(rename = "entangled")]
    EntangledAngle,
    Amplitude,
    Iqp,
}

impl EncodingKind {
    pub const ALL: [EncodingKind; 5] = [
        EncodingKind::SimpleAngle,
        EncodingKind::Pi4Angle,
        EncodingKind::EntangledAngle,
        EncodingKind::Amplitude,
        EncodingKind::Iqp,
    ];

    /// Short token used on the command line and in result files.
    pub fn token(self) -> &'static str {
        match self {
            EncodingKind::SimpleAngle => "simple",
            EncodingKind::Pi4Angle => "pi4",
            EncodingKind::EntangledAngle => "entangled",
            EncodingKind::Amplitude => "amplitude",
            EncodingKind::Iqp => "iqp",
        }
    }

    /// Display name used in markdown tables.
    pub fn display_name(self) -> &'static str {
        match self {
            EncodingKind::SimpleAngle => "Simple Angle",
            EncodingKind::Pi4Angle => "π/4 Angle",
            EncodingKind::EntangledAngle => "Entangled Angle",
            EncodingKind::Amplitude => "Amplitude",
            EncodingKind::Iqp => "IQP",
        }
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for EncodingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simple" | "simple-angle" | "simpleangle" => Ok(EncodingKind::SimpleAngle),
            "pi4" | "pi4-angle" | "pi4angle" => Ok(EncodingKind::Pi4Angle),
            "entangled" | "entangled-angle" | "entangledangle" => Ok(EncodingKind::EntangledAngle),
            "amplitude" => Ok(EncodingKind::Amplitude),
            "iqp" => Ok(EncodingKind::Iqp),
            other => Err(Error::Config(format!("unknown encoding '{other}'"))),
        }
    }
}

/// Rotation axis of the Simple Angle encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    #[default]
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" | "rx" => Ok(Axis::X),
            "y" | "ry" => Ok(Axis::Y),
            other => Err(Error::Config(format!("unknown rotation axis '{other}'"))),
        }
    }
}

/// Which feature map to build. `axis` only matters for Simple Angle and
/// `iqp_layers` only for IQP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EncodingSpec {
    pub kind: EncodingKind,
    #[serde(default)]
    pub axis: Axis,
    #[serde(default = "default_iqp_layers")]
    pub iqp_layers: usize,
}

fn default_iqp_layers() -> usize {
    2
}

impl EncodingSpec {
    pub fn new(kind: EncodingKind) -> Self {
        Self { kind, axis: Axis::X, iqp_layers: 2 }
    }

    pub fn simple(axis: Axis) -> Self {
        Self { axis, ..Self::new(EncodingKind::SimpleAngle) }
    }

    pub fn iqp(layers: usize) -> Self {
        Self { iqp_layers: layers, ..Self::new(EncodingKind::Iqp) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == EncodingKind::Iqp && self.iqp_layers < 2 {
            return Err(Error::Config(format!("IQP needs at least 2 layers, got {}", self.iqp_layers)));
        }
        Ok(())
    }

    /// Axis as reported in result rows: only Simple Angle has one.
    pub fn reported_axis(&self) -> Option<Axis> {
        (self.kind == EncodingKind::SimpleAngle).then_some(self.axis)
    }

    /// Label such as `simple-rx` or `iqp`.
    pub fn label(&self) -> String {
        match self.kind {
            EncodingKind::SimpleAngle => format!("simple-r{}", self.axis),
            kind => kind.token().to_string(),
        }
    }
}

impl fmt::Display for EncodingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Qubits needed to encode `num_features` values with `kind`.
///
/// Angle encoders and IQP use one qubit per feature. Amplitude encoding uses
/// the smallest `n >= 1` with `N <= 2^n`.
pub fn required_qubits(kind: EncodingKind, num_features: usize) -> usize {
    match kind {
        EncodingKind::Amplitude => {
            let mut n = 1;
            while (1usize << n) < num_features {
                n += 1;
            }
            n
        }
        _ => num_features,
    }
}

/// Builds the circuit for `spec` on input `x`.
pub fn encode(spec: &EncodingSpec, x: &FeatureVector) -> Result<Circuit> {
    spec.validate()?;
    match spec.kind {
        EncodingKind::SimpleAngle => encode_simple_angle(x, spec.axis),
        EncodingKind::Pi4Angle => encode_pi4_angle(x),
        EncodingKind::EntangledAngle => encode_entangled_angle(x),
        EncodingKind::Amplitude => encode_amplitude(x),
        EncodingKind::Iqp => encode_iqp(x, spec.iqp_layers),
    }
}

/// `R_axis(x_j)` on qubit `j`.
pub fn encode_simple_angle(x: &FeatureVector, axis: Axis) -> Result<Circuit> {
    let mut circuit = Circuit::new(x.len())?;
    for (target, &angle) in x.values().iter().enumerate() {
        circuit.push(match axis {
            Axis::X => Gate::Rx { target, angle },
            Axis::Y => Gate::Ry { target, angle },
        })?;
    }
    Ok(circuit)
}

/// The `U(x)` matrix of the π/4-angle encoder.
pub fn pi4_unitary(x: f64) -> Matrix2 {
    let (s, c) = (FRAC_PI_4 - x).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(s, 0.0)],
        [Complex64::new(-s, 0.0), Complex64::new(c, 0.0)],
    ]
}

/// A column of `H` followed by a column of `U(x_j)`.
pub fn encode_pi4_angle(x: &FeatureVector) -> Result<Circuit> {
    let mut circuit = Circuit::new(x.len())?;
    for target in 0..x.len() {
        circuit.push(Gate::H { target })?;
    }
    for (target, &v) in x.values().iter().enumerate() {
        circuit.push(Gate::U1q { target, matrix: pi4_unitary(v) })?;
    }
    Ok(circuit)
}

/// `H` and `RY(x_j)` on every qubit, then `CNOT(j -> j+1)` down the register
/// and a closing `CNOT(N-1 -> 0)`.
pub fn encode_entangled_angle(x: &FeatureVector) -> Result<Circuit> {
    let n = x.len();
    if n < 2 {
        return Err(Error::Input("entangled angle encoding needs at least 2 features".into()));
    }
    let mut circuit = Circuit::new(n)?;
    for target in 0..n {
        circuit.push(Gate::H { target })?;
    }
    for (target, &angle) in x.values().iter().enumerate() {
        circuit.push(Gate::Ry { target, angle })?;
    }
    for j in 0..n - 1 {
        circuit.push(Gate::Cnot { control: j, target: j + 1 })?;
    }
    circuit.push(Gate::Cnot { control: n - 1, target: 0 })?;
    Ok(circuit)
}

/// Rotation angles of the amplitude-encoding tree, root first and then level
/// by level, left to right. Level `l` holds `2^l` angles.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeAngles {
    num_qubits: usize,
    angles: Vec<f64>,
}

impl AmplitudeAngles {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.angles
    }

    /// The `2^level` angles applied to qubit `level`.
    pub fn level(&self, level: usize) -> &[f64] {
        let start = (1 << level) - 1;
        &self.angles[start..start + (1 << level)]
    }
}

fn check_unit_norm(x: &FeatureVector) -> Result<()> {
    let norm_sqr = x.norm_sqr();
    if (norm_sqr - 1.0).abs() > AMPLITUDE_NORM_TOL {
        return Err(Error::Normalization { norm_sqr });
    }
    Ok(())
}

/// Angle for one tree node with children `(left, right)` and parent norm
/// `parent = sqrt(left^2 + right^2)`.
fn node_angle(right: f64, parent: f64) -> f64 {
    if parent == 0.0 {
        // empty subtree: the rotation acts on zero amplitude
        return 0.0;
    }
    let ratio = (right / parent).clamp(-1.0, 1.0);
    if parent > 0.0 {
        2.0 * ratio.asin()
    } else {
        // unreachable for norms produced by the square-root reduction
        2.0 * PI - 2.0 * ratio.asin()
    }
}

/// Computes the tree angles by repeatedly replacing the vector with the norms
/// of its adjacent pairs. The input is zero-padded to `2^n` first.
pub fn amplitude_angles(x: &FeatureVector) -> Result<AmplitudeAngles> {
    check_unit_norm(x)?;
    let num_qubits = required_qubits(EncodingKind::Amplitude, x.len());
    let mut current = x.values().to_vec();
    current.resize(1 << num_qubits, 0.0);

    let mut levels: Vec<Vec<f64>> = Vec::with_capacity(num_qubits);
    while current.len() > 1 {
        let parents: Vec<f64> = current.chunks_exact(2).map(|p| p[0].hypot(p[1])).collect();
        let angles = current
            .chunks_exact(2)
            .zip(&parents)
            .map(|(pair, &parent)| node_angle(pair[1], parent))
            .collect();
        levels.push(angles);
        current = parents;
    }
    let angles = levels.into_iter().rev().flatten().collect();
    Ok(AmplitudeAngles { num_qubits, angles })
}

/// Uniformly controlled `RY` tree: one rotation on qubit 0, then on qubit `l`
/// one rotation per control pattern of qubits `0..l`, patterns in binary
/// order with qubit 0 as the most significant control (open = 0).
pub fn encode_amplitude(x: &FeatureVector) -> Result<Circuit> {
    let tree = amplitude_angles(x)?;
    amplitude_circuit(&tree)
}

/// Lays out precomputed tree angles as a circuit.
pub fn amplitude_circuit(tree: &AmplitudeAngles) -> Result<Circuit> {
    let n = tree.num_qubits();
    let mut circuit = Circuit::new(n)?;
    circuit.push(Gate::Ry { target: 0, angle: tree.level(0)[0] })?;
    for level in 1..n {
        for (pattern, &angle) in tree.level(level).iter().enumerate() {
            let controls = (0..level)
                .map(|q| Control { qubit: q, fires_on_one: (pattern >> (level - 1 - q)) & 1 == 1 })
                .collect();
            circuit.push(Gate::Mcry { controls, target: level, angle })?;
        }
    }
    Ok(circuit)
}

/// `layers` repetitions of: `H` on every qubit, `RZ(x_j)` on qubit `j`, and
/// `RZZ(x_j x_k)` once for every pair `j < k`.
pub fn encode_iqp(x: &FeatureVector, layers: usize) -> Result<Circuit> {
    if layers < 2 {
        return Err(Error::Config(format!("IQP needs at least 2 layers, got {layers}")));
    }
    let v = x.values();
    let n = v.len();
    let mut circuit = Circuit::new(n)?;
    for _ in 0..layers {
        for target in 0..n {
            circuit.push(Gate::H { target })?;
        }
        for (target, &angle) in v.iter().enumerate() {
            circuit.push(Gate::Rz { target, angle })?;
        }
        for j in 0..n {
            for k in j + 1..n {
                circuit.push(Gate::Rzz { qubits: (j, k), angle: v[j] * v[k] })?;
            }
        }
    }
    Ok(circuit)
}
