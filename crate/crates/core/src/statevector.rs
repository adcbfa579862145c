//! Dense statevector simulation for the small registers the encoders and the
//! classifier build.
//!
//! Qubit 0 is the top wire of a circuit diagram and the most significant bit
//! of a basis index: for three qubits, `|q0 q1 q2>` is stored at index
//! `4*q0 + 2*q1 + q2`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

const UNITARY_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

pub type Matrix2 = [[Complex64; 2]; 2];

/// A control wire. Closed controls fire when the qubit is `|1>`, open
/// controls (drawn as hollow dots) fire on `|0>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub fires_on_one: bool,
}

impl Control {
    pub fn closed(qubit: usize) -> Self {
        Self { qubit, fires_on_one: true }
    }

    pub fn open(qubit: usize) -> Self {
        Self { qubit, fires_on_one: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    H,
    Cnot,
    Rzz,
    Mcry,
    U1q,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::H => "H",
            GateKind::Cnot => "CNOT",
            GateKind::Rzz => "RZZ",
            GateKind::Mcry => "MCRY",
            GateKind::U1q => "U",
        };
        f.write_str(name)
    }
}

/// One gate operation. Rotation angles are in radians with the
/// `exp(-i angle/2 P)` convention.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Rx { target: usize, angle: f64 },
    Ry { target: usize, angle: f64 },
    Rz { target: usize, angle: f64 },
    H { target: usize },
    Cnot { control: usize, target: usize },
    /// `exp(-i angle/2 Z⊗Z)` on two distinct qubits.
    Rzz { qubits: (usize, usize), angle: f64 },
    /// `RY(angle)` on `target`, applied only where every control matches.
    Mcry { controls: Vec<Control>, target: usize, angle: f64 },
    /// Arbitrary single-qubit unitary.
    U1q { target: usize, matrix: Matrix2 },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Rx { .. } => GateKind::Rx,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::H { .. } => GateKind::H,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Rzz { .. } => GateKind::Rzz,
            Gate::Mcry { .. } => GateKind::Mcry,
            Gate::U1q { .. } => GateKind::U1q,
        }
    }

    /// Rotation angle, for the gates that carry one.
    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rx { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::Rzz { angle, .. }
            | Gate::Mcry { angle, .. } => Some(*angle),
            _ => None,
        }
    }

    /// All qubits the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. }
            | Gate::H { target }
            | Gate::U1q { target, .. } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Rzz { qubits, .. } => vec![qubits.0, qubits.1],
            Gate::Mcry { controls, target, .. } => {
                let mut qs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                qs.push(*target);
                qs
            }
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Rx { target, angle } => Gate::Rx { target: *target, angle: -angle },
            Gate::Ry { target, angle } => Gate::Ry { target: *target, angle: -angle },
            Gate::Rz { target, angle } => Gate::Rz { target: *target, angle: -angle },
            Gate::Rzz { qubits, angle } => Gate::Rzz { qubits: *qubits, angle: -angle },
            Gate::Mcry { controls, target, angle } => Gate::Mcry {
                controls: controls.clone(),
                target: *target,
                angle: -angle,
            },
            Gate::U1q { target, matrix } => Gate::U1q { target: *target, matrix: adjoint(matrix) },
            Gate::H { .. } | Gate::Cnot { .. } => self.clone(),
        }
    }

    /// Checks qubit indices against `num_qubits` and structural invariants.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::Index { index: q, num_qubits });
            }
        }
        if let Some(angle) = self.angle() {
            if !angle.is_finite() {
                return Err(Error::InvalidGate(format!("{} angle is not finite", self.kind())));
            }
        }
        match self {
            Gate::Cnot { control, target } if control == target => {
                Err(Error::InvalidGate("CNOT control equals target".into()))
            }
            Gate::Rzz { qubits: (a, b), .. } if a == b => {
                Err(Error::InvalidGate("RZZ needs two distinct qubits".into()))
            }
            Gate::Mcry { controls, target, .. } => {
                for (i, c) in controls.iter().enumerate() {
                    if c.qubit == *target {
                        return Err(Error::InvalidGate("MCRY target is also a control".into()));
                    }
                    if controls[..i].iter().any(|d| d.qubit == c.qubit) {
                        return Err(Error::InvalidGate(format!("duplicate control on qubit {}", c.qubit)));
                    }
                }
                Ok(())
            }
            Gate::U1q { matrix, .. } => {
                let dev = unitarity_defect(matrix);
                if dev > UNITARY_TOL {
                    Err(Error::InvalidGate(format!("matrix is not unitary (defect {dev:e})")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// The 2x2 matrix acting on the target, for single-target gates.
    pub fn target_matrix(&self) -> Option<Matrix2> {
        match self {
            Gate::Rx { angle, .. } => Some(rx_matrix(*angle)),
            Gate::Ry { angle, .. } | Gate::Mcry { angle, .. } => Some(ry_matrix(*angle)),
            Gate::Rz { angle, .. } => Some(rz_matrix(*angle)),
            Gate::H { .. } => Some(h_matrix()),
            Gate::Cnot { .. } => Some(x_matrix()),
            Gate::U1q { matrix, .. } => Some(*matrix),
            Gate::Rzz { .. } => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rx { target, angle } | Gate::Ry { target, angle } | Gate::Rz { target, angle } => {
                write!(f, "{}({angle:.4}) q{target}", self.kind())
            }
            Gate::H { target } => write!(f, "H q{target}"),
            Gate::Cnot { control, target } => write!(f, "CNOT q{control}->q{target}"),
            Gate::Rzz { qubits: (a, b), angle } => write!(f, "RZZ({angle:.4}) q{a},q{b}"),
            Gate::Mcry { controls, target, angle } => {
                write!(f, "RY({angle:.4}) q{target} if")?;
                for c in controls {
                    write!(f, " q{}={}", c.qubit, u8::from(c.fires_on_one))?;
                }
                Ok(())
            }
            Gate::U1q { target, .. } => write!(f, "U q{target}"),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rx_matrix(angle: f64) -> Matrix2 {
    let (s, co) = (angle / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

pub fn ry_matrix(angle: f64) -> Matrix2 {
    let (s, co) = (angle / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

pub fn rz_matrix(angle: f64) -> Matrix2 {
    let half = angle / 2.0;
    [
        [Complex64::from_polar(1.0, -half), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, half)],
    ]
}

pub fn h_matrix() -> Matrix2 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]]
}

pub fn x_matrix() -> Matrix2 {
    [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

fn adjoint(m: &Matrix2) -> Matrix2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// Largest elementwise deviation of `m† m` from the identity.
pub fn unitarity_defect(m: &Matrix2) -> f64 {
    let a = adjoint(m);
    let mut worst = 0.0f64;
    for (i, row) in a.iter().enumerate() {
        for (j, (m0j, m1j)) in m[0].iter().zip(&m[1]).enumerate() {
            let v = row[0] * m0j + row[1] * m1j;
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v - c(expect, 0.0)).norm());
        }
    }
    worst
}

/// Ordered gate list over a fixed number of qubits. Every gate is validated
/// on insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        Ok(Self { num_qubits, gates: Vec::new() })
    }

    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut circuit = Self::new(num_qubits)?;
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `other`, which must act on the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::Size(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Size(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    /// Wraps a normalized amplitude vector whose length is a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Size(format!("amplitude count {len} is not a power of two >= 2")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::Normalization { norm_sqr });
        }
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Applies a gate the caller has already validated against this register.
    pub(crate) fn apply_trusted(&mut self, gate: &Gate) {
        debug_assert!(gate.validate(self.num_qubits).is_ok());
        apply_unchecked(&mut self.amplitudes, self.num_qubits, gate);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies `gate` in place. The gate is validated before any amplitude
    /// is touched, so an error leaves the state unchanged.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        apply_unchecked(&mut self.amplitudes, self.num_qubits, gate);
        Ok(())
    }

    /// Applies every gate of `circuit` in order, in place.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::Size(format!(
                "circuit has {} qubits but the state has {}",
                circuit.num_qubits(),
                self.num_qubits
            )));
        }
        // Gates were validated when pushed onto the circuit.
        for g in circuit.gates() {
            apply_unchecked(&mut self.amplitudes, self.num_qubits, g);
        }
        Ok(())
    }

    /// `<Z>` on `qubit`: `+|a|^2` where the qubit's bit is 0, `-|a|^2` where it is 1.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::Index { index: qubit, num_qubits: self.num_qubits });
        }
        let bit = bit_of(self.num_qubits, qubit);
        let value = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if i & bit == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum::<f64>();
        Ok(value.clamp(-1.0, 1.0))
    }
}

/// `|0...0>` on `n` qubits.
pub fn zero_state(n: usize) -> Result<StateVector> {
    StateVector::zero(n)
}

/// Returns `gate` applied to `state`; the input is left untouched.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Returns `circuit` applied to `state`, gates in list order.
pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_circuit(circuit)?;
    Ok(out)
}

pub fn expectation_z(state: &StateVector, qubit: usize) -> Result<f64> {
    state.expectation_z(qubit)
}

#[inline]
fn bit_of(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

/// Applies a validated gate to a raw amplitude buffer of length `2^num_qubits`.
/// The buffer need not be normalized; every gate acts linearly.
pub(crate) fn apply_unchecked(amps: &mut [Complex64], num_qubits: usize, gate: &Gate) {
    match gate {
        Gate::Rx { target, angle } => apply_1q(amps, num_qubits, *target, &rx_matrix(*angle), 0, 0),
        Gate::Ry { target, angle } => apply_ry(amps, num_qubits, *target, *angle, 0, 0),
        Gate::H { target } => apply_1q(amps, num_qubits, *target, &h_matrix(), 0, 0),
        Gate::U1q { target, matrix } => apply_1q(amps, num_qubits, *target, matrix, 0, 0),
        Gate::Rz { target, angle } => {
            let bit = bit_of(num_qubits, *target);
            let (minus, plus) = half_phases(*angle);
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= if i & bit == 0 { minus } else { plus };
            }
        }
        Gate::Rzz { qubits: (p, q), angle } => {
            let mask = bit_of(num_qubits, *p) | bit_of(num_qubits, *q);
            let (minus, plus) = half_phases(*angle);
            for (i, a) in amps.iter_mut().enumerate() {
                // even parity of the two bits is the +1 eigenspace of Z⊗Z
                *a *= if (i & mask).count_ones().is_multiple_of(2) { minus } else { plus };
            }
        }
        Gate::Cnot { control, target } => {
            let cbit = bit_of(num_qubits, *control);
            let tbit = bit_of(num_qubits, *target);
            for i in 0..amps.len() {
                if i & tbit == 0 && i & cbit != 0 {
                    amps.swap(i, i | tbit);
                }
            }
        }
        Gate::Mcry { controls, target, angle } => {
            let mut mask = 0;
            let mut value = 0;
            for ctl in controls {
                let b = bit_of(num_qubits, ctl.qubit);
                mask |= b;
                if ctl.fires_on_one {
                    value |= b;
                }
            }
            apply_ry(amps, num_qubits, *target, *angle, mask, value);
        }
    }
}

fn half_phases(angle: f64) -> (Complex64, Complex64) {
    (Complex64::from_polar(1.0, -angle / 2.0), Complex64::from_polar(1.0, angle / 2.0))
}

fn apply_1q(amps: &mut [Complex64], num_qubits: usize, target: usize, m: &Matrix2, mask: usize, value: usize) {
    let bit = bit_of(num_qubits, target);
    for i in 0..amps.len() {
        if i & bit != 0 || i & mask != value {
            continue;
        }
        let j = i | bit;
        let (a, b) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a + m[0][1] * b;
        amps[j] = m[1][0] * a + m[1][1] * b;
    }
}

// Real-valued specialization; RY dominates both the amplitude encoder and
// the trainable block.
fn apply_ry(amps: &mut [Complex64], num_qubits: usize, target: usize, angle: f64, mask: usize, value: usize) {
    let bit = bit_of(num_qubits, target);
    let (s, co) = (angle / 2.0).sin_cos();
    for i in 0..amps.len() {
        if i & bit != 0 || i & mask != value {
            continue;
        }
        let j = i | bit;
        let (a, b) = (amps[i], amps[j]);
        amps[i] = a * co - b * s;
        amps[j] = a * s + b * co;
    }
}
