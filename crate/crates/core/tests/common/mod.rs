//! Dense-matrix reference simulator. Every gate is expanded to a full
//! `2^n x 2^n` unitary built from its textbook definition, and circuits are
//! plain matrix products applied to `|0...0>`. Qubit 0 is the most
//! significant bit of the basis index.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use qembed::statevector::Gate;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[derive(Clone, Debug)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<C>,
}

impl Dense {
    pub fn identity(n: usize) -> Self {
        let dim = 1 << n;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c(1.0, 0.0);
        }
        Self { dim, data }
    }

    pub fn at(&self, r: usize, col: usize) -> C {
        self.data[r * self.dim + col]
    }

    pub fn mul(&self, rhs: &Dense) -> Dense {
        let dim = self.dim;
        let mut data = vec![c(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.at(i, k);
                if a == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    data[i * dim + j] += a * rhs.at(k, j);
                }
            }
        }
        Dense { dim, data }
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.at(i, j) * v[j]).sum()).collect()
    }
}

fn bit(index: usize, n: usize, q: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

fn single(n: usize, target: usize, u: [[C; 2]; 2]) -> Dense {
    let dim = 1 << n;
    let mask = 1 << (n - 1 - target);
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            if i & !mask == j & !mask {
                data[i * dim + j] = u[bit(i, n, target)][bit(j, n, target)];
            }
        }
    }
    Dense { dim, data }
}

fn permutation(n: usize, f: impl Fn(usize) -> usize) -> Dense {
    let dim = 1 << n;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for j in 0..dim {
        data[f(j) * dim + j] = c(1.0, 0.0);
    }
    Dense { dim, data }
}

fn diagonal(n: usize, f: impl Fn(usize) -> C) -> Dense {
    let dim = 1 << n;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for i in 0..dim {
        data[i * dim + i] = f(i);
    }
    Dense { dim, data }
}

pub fn rx(t: f64) -> [[C; 2]; 2] {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

pub fn ry(t: f64) -> [[C; 2]; 2] {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

fn hadamard() -> [[C; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
}

pub fn gate_matrix(n: usize, gate: &Gate) -> Dense {
    match gate {
        Gate::Rx { target, angle } => single(n, *target, rx(*angle)),
        Gate::Ry { target, angle } => single(n, *target, ry(*angle)),
        Gate::Rz { target, angle } => {
            let (t, a) = (*target, *angle);
            diagonal(n, |i| C::from_polar(1.0, if bit(i, n, t) == 0 { -a / 2.0 } else { a / 2.0 }))
        }
        Gate::H { target } => single(n, *target, hadamard()),
        Gate::Cnot { control, target } => {
            let (ct, tg) = (*control, *target);
            permutation(n, |j| if bit(j, n, ct) == 1 { j ^ (1 << (n - 1 - tg)) } else { j })
        }
        Gate::Rzz { qubits: (a, b), angle } => {
            let (a, b, t) = (*a, *b, *angle);
            diagonal(n, |i| {
                let zz = if bit(i, n, a) == bit(i, n, b) { 1.0 } else { -1.0 };
                C::from_polar(1.0, -t / 2.0 * zz)
            })
        }
        Gate::Mcry { controls, target, angle } => {
            // sum over control patterns: matching pattern gets RY, others identity
            let u = single(n, *target, ry(*angle));
            let id = Dense::identity(n);
            let dim = 1 << n;
            let mut data = vec![c(0.0, 0.0); dim * dim];
            for i in 0..dim {
                let active = controls.iter().all(|k| (bit(i, n, k.qubit) == 1) == k.fires_on_one);
                let src = if active { &u } else { &id };
                for j in 0..dim {
                    data[i * dim + j] = src.at(i, j);
                }
            }
            Dense { dim, data }
        }
        Gate::U1q { target, matrix } => single(n, *target, *matrix),
    }
}

/// `U_k ... U_1` for gates given in application order.
pub fn unitary(n: usize, gates: &[Gate]) -> Dense {
    gates.iter().fold(Dense::identity(n), |acc, g| gate_matrix(n, g).mul(&acc))
}

pub fn zero_ket(n: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(1.0, 0.0);
    v
}

pub fn run(n: usize, gates: &[Gate]) -> Vec<C> {
    unitary(n, gates).apply(&zero_ket(n))
}

pub fn z_expectation(state: &[C], n: usize, q: usize) -> f64 {
    state.iter().enumerate().map(|(i, a)| if bit(i, n, q) == 0 { a.norm_sqr() } else { -a.norm_sqr() }).sum()
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Reference gate lists for the angle and IQP feature maps, written from
/// their definitions rather than from the library builders.
pub fn reference_encoding(kind: qembed::encoding::EncodingKind, axis: qembed::encoding::Axis, x: &[f64], iqp_layers: usize) -> Vec<Gate> {
    use qembed::encoding::{Axis, EncodingKind};
    use std::f64::consts::FRAC_PI_4;
    let n = x.len();
    let mut g = Vec::new();
    match kind {
        EncodingKind::SimpleAngle => {
            for (j, &v) in x.iter().enumerate() {
                g.push(match axis {
                    Axis::X => Gate::Rx { target: j, angle: v },
                    Axis::Y => Gate::Ry { target: j, angle: v },
                });
            }
        }
        EncodingKind::Pi4Angle => {
            for (j, &v) in x.iter().enumerate() {
                let (s, co) = (FRAC_PI_4 - v).sin_cos();
                g.push(Gate::H { target: j });
                g.push(Gate::U1q { target: j, matrix: [[c(co, 0.0), c(s, 0.0)], [c(-s, 0.0), c(co, 0.0)]] });
            }
        }
        EncodingKind::EntangledAngle => {
            g.extend((0..n).map(|j| Gate::H { target: j }));
            g.extend(x.iter().enumerate().map(|(j, &v)| Gate::Ry { target: j, angle: v }));
            g.extend((0..n - 1).map(|j| Gate::Cnot { control: j, target: j + 1 }));
            g.push(Gate::Cnot { control: n - 1, target: 0 });
        }
        EncodingKind::Iqp => {
            for _ in 0..iqp_layers {
                g.extend((0..n).map(|j| Gate::H { target: j }));
                g.extend(x.iter().enumerate().map(|(j, &v)| Gate::Rz { target: j, angle: v }));
                for j in 0..n {
                    for k in j + 1..n {
                        g.push(Gate::Rzz { qubits: (j, k), angle: x[j] * x[k] });
                    }
                }
            }
        }
        EncodingKind::Amplitude => panic!("amplitude has no closed-form reference gate list"),
    }
    g
}

/// One classifier block: RY(θ) on every qubit, CNOT(n-1 -> 0), CNOT(j -> j+1).
pub fn reference_block(n: usize, thetas: &[f64]) -> Vec<Gate> {
    let mut g: Vec<Gate> = thetas.iter().enumerate().map(|(j, &t)| Gate::Ry { target: j, angle: t }).collect();
    if n > 1 {
        g.push(Gate::Cnot { control: n - 1, target: 0 });
        g.extend((0..n - 1).map(|j| Gate::Cnot { control: j, target: j + 1 }));
    }
    g
}
