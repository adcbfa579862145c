//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qembed --test acceptance`. MNIST files are read
//! from `$QEMBED_MNIST_DIR`, falling back to `data/mnist` at the repo root
//! (see `scripts/fetch_mnist.sh`).

mod common;

use std::f64::consts::{FRAC_PI_2, TAU};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qembed::bench::{
    render_csv, run_grid, CsvSource, DatasetSource, GridSpec, MnistSource, RunRecord,
};
use qembed::data::{load_csv, split_train_test};
use qembed::encoding::{
    amplitude_angles, encode_amplitude, encode_iqp, encode_pi4_angle, encode_simple_angle, Axis, EncodingKind,
    EncodingSpec, FeatureVector,
};
use qembed::metrics::{accuracy, f1_score};
use qembed::model::{forward, ModelConfig, ModelParams};
use qembed::statevector::{Circuit, Control, Gate, StateVector};

/// Seed used for both desk-scale training runs.
const PUBLISHED_SEED: u64 = 33;

const ANGLE_TOL: f64 = 0.005;
const ANGLE_BUDGET: Duration = Duration::from_millis(1);
const RECONSTRUCTION_TOL: f64 = 1e-10;
const DOUBLING_TOL: f64 = 1e-12;
const GRADIENT_TOL: f64 = 1e-5;
const FD_STEP: f64 = 1e-5;
const NORM_DRIFT_TOL: f64 = 1e-12;
const COMMUTE_TOL: f64 = 1e-12;
const DENSE_MODEL_TOL: f64 = 1e-10;
const WDBC_MIN_ACCURACY: f64 = 0.85;
const WDBC_MIN_F1: f64 = 0.80;
const WDBC_BUDGET: Duration = Duration::from_secs(120);
const MNIST_MIN_ACCURACY: f64 = 0.95;
const MNIST_BUDGET: Duration = Duration::from_secs(600);

/// Criteria whose stated target contradicts another stated requirement.
/// Each entry names the outcome the implementation is expected to produce
/// instead; the run still prints FAIL for it.
const KNOWN_UNATTAINABLE: &[&str] = &["2b"];

struct Verdict {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: &'static str, name: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { id, name, pass, detail }
}

fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn mnist_dir() -> PathBuf {
    std::env::var_os("QEMBED_MNIST_DIR").map(PathBuf::from).unwrap_or_else(|| repo_root().join("data/mnist"))
}

fn fv(x: Vec<f64>) -> FeatureVector {
    FeatureVector::new(x).unwrap()
}

fn simulate(circuit: &Circuit) -> Vec<num_complex::Complex64> {
    let mut s = StateVector::zero(circuit.num_qubits()).unwrap();
    s.apply_circuit(circuit).unwrap();
    s.into_amplitudes()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return raw.into_iter().map(|v| v / norm).collect();
        }
    }
}

fn c1_amplitude_angles() -> Verdict {
    let x = fv([0.01, 0.02, 0.4, 0.04, 0.03, 0.2, 0.13, 0.17].map(f64::sqrt).to_vec());
    let expected = [1.63, 2.63, 1.70, 1.91, 0.61, 2.40, 1.70];
    let got = amplitude_angles(&x).unwrap();
    let worst = got.angles().iter().zip(expected).map(|(a, e)| (a - e).abs()).fold(0.0, f64::max);

    let reps = 1000;
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(amplitude_angles(std::hint::black_box(&x)).unwrap());
    }
    let per_call = start.elapsed() / reps;
    verdict(
        "1",
        "amplitude angle reproduction",
        worst <= ANGLE_TOL && per_call < ANGLE_BUDGET,
        format!("max |Δ| = {worst:.4} (tol {ANGLE_TOL}), {per_call:?} per call"),
    )
}

fn c2a_amplitude_reconstruction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = 2 + i % 7;
        let x = random_unit(&mut rng, n);
        let state = simulate(&encode_amplitude(&fv(x.clone())).unwrap());
        for (k, a) in state.iter().enumerate() {
            let want = x.get(k).copied().unwrap_or(0.0);
            worst = worst.max((a - num_complex::Complex64::new(want, 0.0)).norm());
        }
    }
    verdict(
        "2a",
        "amplitude state preparation (200 vectors, N=2..8)",
        worst < RECONSTRUCTION_TOL,
        format!("max error {worst:.2e}"),
    )
}

/// Returns the verdict and the (trailing, total) zero-angle gate counts.
fn c2b_trailing_zeros() -> (Verdict, (usize, usize)) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let x = random_unit(&mut rng, 6);
    let circuit = encode_amplitude(&fv(x)).unwrap();
    let angles: Vec<f64> = circuit.gates().iter().filter_map(Gate::angle).collect();
    let trailing = angles.iter().rev().take_while(|a| **a == 0.0).count();
    let total = angles.iter().filter(|a| **a == 0.0).count();
    let v = verdict(
        "2b",
        "N=6 amplitude circuit has three trailing zero-angle gates",
        trailing == 3,
        format!("{} rotations, {trailing} trailing zero, {total} zero in total", angles.len()),
    );
    (v, (trailing, total))
}

fn c3_doubling() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..=FRAC_PI_2)).collect();
        let doubled = x.iter().map(|v| 2.0 * v).collect();
        let a = simulate(&encode_simple_angle(&fv(doubled), Axis::Y).unwrap());
        let b = simulate(&encode_pi4_angle(&fv(x)).unwrap());
        worst = worst.max(common::max_diff(&a, &b));
    }
    verdict("3", "doubling identity RY(2x) vs π/4 angle", worst < DOUBLING_TOL, format!("max error {worst:.2e}"))
}

fn c4_gradients() -> Verdict {
    use qembed::model::SampleEvaluator;
    use rand::seq::IndexedRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let kind = *EncodingKind::ALL.choose(&mut rng).unwrap();
        let n = *[4usize, 6, 8].choose(&mut rng).unwrap();
        let m = *[2usize, 4].choose(&mut rng).unwrap();
        let config = ModelConfig::new(EncodingSpec::new(kind), n, m).unwrap();
        let theta: Vec<f64> = (0..config.num_params()).map(|_| rng.random_range(0.0..TAU)).collect();
        let x = if kind == EncodingKind::Amplitude {
            random_unit(&mut rng, n)
        } else {
            (0..n).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect()
        };
        let x = fv(x);
        let params = ModelParams::new(theta.clone()).unwrap();
        let (_, ps) = SampleEvaluator::new(&x, &config).unwrap().expectation_and_gradient(&params).unwrap();
        for i in 0..theta.len() {
            let at = |d: f64| {
                let mut t = theta.clone();
                t[i] += d;
                forward(&x, &config, &ModelParams::new(t).unwrap()).unwrap()
            };
            let fd = (at(FD_STEP) - at(-FD_STEP)) / (2.0 * FD_STEP);
            worst = worst.max((ps[i] - fd).abs());
        }
    }
    verdict("4", "parameter shift vs finite differences (20 draws)", worst < GRADIENT_TOL, format!("max |PS - FD| = {worst:.2e}"))
}

fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
    let q = rng.random_range(0..n);
    let other = (q + rng.random_range(1..n)) % n;
    let angle = rng.random_range(-TAU..TAU);
    match rng.random_range(0..7) {
        0 => Gate::Rx { target: q, angle },
        1 => Gate::Ry { target: q, angle },
        2 => Gate::Rz { target: q, angle },
        3 => Gate::H { target: q },
        4 => Gate::Cnot { control: q, target: other },
        5 => Gate::Rzz { qubits: (q, other), angle },
        _ => Gate::Mcry { controls: vec![Control { qubit: other, fires_on_one: rng.random() }], target: q, angle },
    }
}

fn c5_simulator() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let mut drift = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(2..=8);
        let gates: Vec<Gate> = (0..50).map(|_| random_gate(&mut rng, n)).collect();
        let mut s = StateVector::zero(n).unwrap();
        s.apply_circuit(&Circuit::from_gates(n, gates).unwrap()).unwrap();
        drift = drift.max((s.norm_sqr() - 1.0).abs());
    }

    // shuffle the RZ/RZZ gates inside each diagonal block
    let mut commute = 0.0f64;
    for _ in 0..50 {
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect();
        let circuit = encode_iqp(&fv(x), 2).unwrap();
        let mut shuffled = Vec::new();
        let mut block: Vec<Gate> = Vec::new();
        for g in circuit.gates() {
            if matches!(g, Gate::H { .. }) {
                rand::seq::SliceRandom::shuffle(block.as_mut_slice(), &mut rng);
                shuffled.append(&mut block);
                shuffled.push(g.clone());
            } else {
                block.push(g.clone());
            }
        }
        rand::seq::SliceRandom::shuffle(block.as_mut_slice(), &mut rng);
        shuffled.append(&mut block);
        let a = simulate(&circuit);
        let b = simulate(&Circuit::from_gates(4, shuffled).unwrap());
        commute = commute.max(common::max_diff(&a, &b));
    }

    let mut dense = 0.0f64;
    for (kind, num_features) in [
        (EncodingKind::SimpleAngle, 2),
        (EncodingKind::SimpleAngle, 3),
        (EncodingKind::Pi4Angle, 3),
        (EncodingKind::EntangledAngle, 3),
        (EncodingKind::Iqp, 3),
    ] {
        for layers in [1, 2, 4] {
            let config = ModelConfig::new(EncodingSpec::new(kind), num_features, layers).unwrap();
            let n = config.num_qubits();
            let x: Vec<f64> = (0..num_features).map(|_| rng.random_range(0.0..FRAC_PI_2)).collect();
            let theta: Vec<f64> = (0..config.num_params()).map(|_| rng.random_range(0.0..TAU)).collect();
            let mut gates = Vec::new();
            for l in 0..layers {
                gates.extend(common::reference_encoding(kind, Axis::X, &x, 2));
                gates.extend(common::reference_block(n, &theta[l * n..(l + 1) * n]));
            }
            let expected = common::z_expectation(&common::run(n, &gates), n, n - 1);
            let got = forward(&fv(x), &config, &ModelParams::new(theta).unwrap()).unwrap();
            dense = dense.max((got - expected).abs());
        }
    }

    verdict(
        "5",
        "simulator invariants",
        drift < NORM_DRIFT_TOL && commute < COMMUTE_TOL && dense < DENSE_MODEL_TOL,
        format!("norm drift {drift:.2e}, IQP reorder {commute:.2e}, dense-model {dense:.2e}"),
    )
}

fn single_cell(dataset: DatasetSource, encoding: EncodingSpec, n: usize, m: usize) -> GridSpec {
    let mut spec = GridSpec::paper(vec![dataset], PUBLISHED_SEED);
    spec.encodings = vec![encoding];
    spec.features = vec![n];
    spec.layers = vec![m];
    spec
}

fn c6_wdbc() -> Verdict {
    let source = CsvSource::wdbc(repo_root().join("data/wdbc.csv"));
    let full = match load_csv(&source.path, &source.options) {
        Ok(d) => d,
        Err(e) => return verdict("6", "WDBC 4F/4L Simple Angle RX", false, format!("cannot load data: {e}")),
    };
    let (train, test) = split_train_test(&full, 0.8, PUBLISHED_SEED).unwrap();

    let start = Instant::now();
    let spec = single_cell(DatasetSource::Csv(source), EncodingSpec::simple(Axis::X), 4, 4);
    let record = run_grid(&spec).unwrap().remove(0);
    let elapsed = start.elapsed();
    verdict(
        "6",
        "WDBC 4F/4L Simple Angle RX",
        (train.len(), test.len()) == (455, 114)
            && record.labels.len() == 114
            && record.is_ok()
            && record.test_accuracy >= WDBC_MIN_ACCURACY
            && record.f1 >= WDBC_MIN_F1
            && elapsed < WDBC_BUDGET,
        format!(
            "split {}/{}, test {:.4} (>= {WDBC_MIN_ACCURACY}), F1 {:.4} (>= {WDBC_MIN_F1}), {:.1}s, seed {PUBLISHED_SEED}{}",
            train.len(),
            test.len(),
            record.test_accuracy,
            record.f1,
            elapsed.as_secs_f64(),
            record.error.map(|e| format!(", error: {e}")).unwrap_or_default()
        ),
    )
}

fn c7_mnist() -> Verdict {
    let dir = mnist_dir();
    let files = ["train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"]
        .map(|f| dir.join(f));
    if let Some(missing) = files.iter().find(|p| !p.exists()) {
        return verdict(
            "7",
            "MNIST01 4F/4L Amplitude",
            false,
            format!("missing {} (run scripts/fetch_mnist.sh)", missing.display()),
        );
    }
    let [train_images, train_labels, test_images, test_labels] = files;
    let source = DatasetSource::Mnist(MnistSource {
        train_images,
        train_labels,
        test_images: Some(test_images),
        test_labels: Some(test_labels),
        classes: (0, 1),
    });
    let mut spec = single_cell(source, EncodingSpec::new(EncodingKind::Amplitude), 4, 4);
    spec.train_cap = 1000;
    spec.test_cap = 500;

    let start = Instant::now();
    let record = run_grid(&spec).unwrap().remove(0);
    let elapsed = start.elapsed();
    verdict(
        "7",
        "MNIST01 4F/4L Amplitude",
        record.is_ok() && record.labels.len() == 500 && record.test_accuracy >= MNIST_MIN_ACCURACY && elapsed < MNIST_BUDGET,
        format!(
            "{} test samples, test {:.4} (>= {MNIST_MIN_ACCURACY}), F1 {:.4}, {:.1}s, seed {PUBLISHED_SEED}{}",
            record.labels.len(),
            record.test_accuracy,
            record.f1,
            elapsed.as_secs_f64(),
            record.error.map(|e| format!(", error: {e}")).unwrap_or_default()
        ),
    )
}

fn c8_metrics() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let len = rng.random_range(1..64);
        let pred: Vec<u8> = (0..len).map(|_| rng.random_range(0..2)).collect();
        let labels: Vec<u8> = (0..len).map(|_| rng.random_range(0..2)).collect();
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut fn_ = 0usize;
        let mut hits = 0usize;
        for i in 0..len {
            match (pred[i], labels[i]) {
                (1, 1) => tp += 1,
                (1, 0) => fp += 1,
                (0, 1) => fn_ += 1,
                _ => {}
            }
            if pred[i] == labels[i] {
                hits += 1;
            }
        }
        let acc = hits as f64 / len as f64;
        let f1 = if tp == 0 {
            0.0
        } else {
            let p = tp as f64 / (tp + fp) as f64;
            let r = tp as f64 / (tp + fn_) as f64;
            2.0 * p * r / (p + r)
        };
        if accuracy(&pred, &labels).unwrap() != acc || f1_score(&pred, &labels, 1).unwrap() != f1 {
            mismatches += 1;
        }
    }
    verdict("8", "metric oracle (1000 random vectors)", mismatches == 0, format!("{mismatches} mismatches"))
}

fn csv_schema_ok(records: &[RunRecord]) -> bool {
    let csv = render_csv(records).unwrap();
    let mut lines = csv.lines();
    lines.next() == Some("dataset,encoding,axis,N,M,ep1,ep2,ep3,ep4,ep5,test,f1,seed,wall_time_s")
        && lines.count() == records.len()
}

fn c9_grid_shape() -> Verdict {
    let wdbc = || DatasetSource::Csv(CsvSource::wdbc(repo_root().join("data/wdbc.csv")));
    let paper = match run_grid(&GridSpec::paper(vec![wdbc()], PUBLISHED_SEED)) {
        Ok(r) => r,
        Err(e) => return verdict("9", "grid shape", false, format!("grid failed: {e}")),
    };
    let appendix = run_grid(&GridSpec::appendix(vec![wdbc()], PUBLISHED_SEED)).unwrap();
    let failed = paper.iter().chain(&appendix).filter(|r| !r.is_ok()).count();
    let appendix_simple = appendix.iter().all(|r| r.encoding == EncodingKind::SimpleAngle && r.axis.is_some());
    let axes_per_cell = [4, 6, 8].iter().all(|&n| {
        [2, 4].iter().all(|&m| appendix.iter().filter(|r| r.n == n && r.m == m).count() == 2)
    });
    verdict(
        "9",
        "grid shape (paper grid and RX/RY appendix mode)",
        paper.len() == 30 && appendix.len() == 12 && appendix_simple && axes_per_cell && failed == 0
            && csv_schema_ok(&paper) && csv_schema_ok(&appendix),
        format!("{} paper records, {} appendix records, {failed} failed cells", paper.len(), appendix.len()),
    )
}

fn main() -> ExitCode {
    // libtest passes flags such as --nocapture or a name filter; a filter
    // that does not mention this suite skips it.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }

    let (v2b, (trailing, total)) = c2b_trailing_zeros();
    let verdicts = vec![
        c1_amplitude_angles(),
        c2a_amplitude_reconstruction(),
        v2b,
        c3_doubling(),
        c4_gradients(),
        c5_simulator(),
        c6_wdbc(),
        c7_mnist(),
        c8_metrics(),
        c9_grid_shape(),
    ];

    let mut unexpected = 0;
    for v in &verdicts {
        let known = KNOWN_UNATTAINABLE.contains(&v.id);
        let tag = match (v.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("[{tag}] criterion {}: {} | {}", v.id, v.name, v.detail);
        if !v.pass && !known {
            unexpected += 1;
        }
    }

    // Exact reconstruction of a 6-vector zeroes one angle on the middle
    // level and one on the last; a third zero would drop a nonzero amplitude.
    if (trailing, total) != (1, 2) {
        println!("criterion 2b produced ({trailing}, {total}) zero angles, expected (1, 2)");
        unexpected += 1;
    }

    let passed = verdicts.iter().filter(|v| v.pass).count();
    println!("acceptance: {passed}/{} criteria passed, {unexpected} unexpected failures", verdicts.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
