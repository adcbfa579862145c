use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{
    cap_samples, l2_normalize_dataset, load_csv, load_mnist_idx, pca_fit, pca_transform, rescale_to_range,
    select_features, split_train_test, synth_binary_dataset, CsvOptions, LabelColumn, LabeledDataset,
};
use crate::encoding::{Axis, EncodingKind, EncodingSpec};
use crate::error::{Error, Result};
use crate::metrics::{accuracy, f1_score};
use crate::model::ModelConfig;
use crate::parallel::map_ordered;
use crate::train::{predict_dataset, train, TrainConfig};

/// Default feature ranking for the breast-cancer table (0-based columns of
/// the 30 features, most important first).
pub const WDBC_RANKED_FEATURES: [usize; 8] = [23, 21, 27, 15, 9, 24, 18, 11];

pub const PAPER_FEATURES: [usize; 3] = [4, 6, 8];
pub const PAPER_LAYERS: [usize; 2] = [2, 4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvSource {
    pub name: String,
    pub path: PathBuf,
    pub options: CsvOptions,
    /// Feature columns in importance order. Empty means file order.
    #[serde(default)]
    pub ranking: Vec<usize>,
}

impl CsvSource {
    /// The breast-cancer file as shipped in `data/wdbc.csv`.
    pub fn wdbc(path: impl Into<PathBuf>) -> Self {
        Self {
            name: "wdbc".into(),
            path: path.into(),
            options: CsvOptions {
                label_column: LabelColumn::Name("diagnosis".into()),
                positive_label: "M".into(),
                has_header: Some(true),
            },
            ranking: WDBC_RANKED_FEATURES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MnistSource {
    pub train_images: PathBuf,
    pub train_labels: PathBuf,
    /// Without a separate test file pair the training file is split.
    #[serde(default)]
    pub test_images: Option<PathBuf>,
    #[serde(default)]
    pub test_labels: Option<PathBuf>,
    pub classes: (u8, u8),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSource {
    pub samples: usize,
    pub dim: usize,
    pub separation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DatasetSource {
    Csv(CsvSource),
    Mnist(MnistSource),
    Synth(SynthSource),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub datasets: Vec<DatasetSource>,
    pub encodings: Vec<EncodingSpec>,
    pub features: Vec<usize>,
    pub layers: Vec<usize>,
    pub train_cap: usize,
    pub test_cap: usize,
    pub split: f64,
    /// `seed` here is the master seed; each cell trains with a derived one.
    pub train: TrainConfig,
}

impl GridSpec {
    /// All five encodings (Simple Angle on RX) over the paper's N and M.
    pub fn paper(datasets: Vec<DatasetSource>, seed: u64) -> Self {
        let encodings = EncodingKind::ALL.iter().map(|&k| EncodingSpec::new(k)).collect();
        Self::with_encodings(datasets, encodings, seed)
    }

    /// Simple Angle with RX and with RY over the paper's N and M.
    pub fn appendix(datasets: Vec<DatasetSource>, seed: u64) -> Self {
        let encodings = vec![EncodingSpec::simple(Axis::X), EncodingSpec::simple(Axis::Y)];
        Self::with_encodings(datasets, encodings, seed)
    }

    fn with_encodings(datasets: Vec<DatasetSource>, encodings: Vec<EncodingSpec>, seed: u64) -> Self {
        Self {
            datasets,
            encodings,
            features: PAPER_FEATURES.to_vec(),
            layers: PAPER_LAYERS.to_vec(),
            train_cap: 4000,
            test_cap: 2000,
            split: 0.8,
            train: TrainConfig::with_seed(seed),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() || self.encodings.is_empty() || self.features.is_empty() || self.layers.is_empty() {
            return Err(Error::Config("datasets, encodings, features and layers must be nonempty".into()));
        }
        if let Some(n) = self.features.iter().find(|&&n| n < 2) {
            return Err(Error::Config(format!("feature count {n} is below 2")));
        }
        if self.layers.contains(&0) {
            return Err(Error::Config("layer count must be positive".into()));
        }
        if self.train_cap == 0 || self.test_cap == 0 {
            return Err(Error::Config("sample caps must be positive".into()));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::Config(format!("split ratio {} outside (0, 1)", self.split)));
        }
        for e in &self.encodings {
            e.validate()?;
        }
        self.train.validate()
    }

    pub fn num_cells(&self) -> usize {
        self.datasets.len() * self.features.len() * self.layers.len() * self.encodings.len()
    }
}

/// One row of a result table. Failed cells carry `error` and zeroed metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub encoding: EncodingKind,
    pub axis: Option<Axis>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub ep_accuracies: Vec<f64>,
    pub test_accuracy: f64,
    pub f1: f64,
    pub seed: u64,
    pub wall_time_s: f64,
    #[serde(default)]
    pub error: Option<String>,
    /// Test-set predictions and labels, kept so metrics can be recomputed.
    #[serde(default)]
    pub predictions: Vec<u8>,
    #[serde(default)]
    pub labels: Vec<u8>,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// Display name including the rotation axis where one applies.
    pub fn encoding_label(&self) -> String {
        match self.axis {
            Some(a) => format!("{} (R{})", self.encoding.display_name(), a.to_string().to_uppercase()),
            None => self.encoding.display_name().to_string(),
        }
    }
}

/// Mixes the master seed with a cell index (splitmix64 finalizer).
pub fn cell_seed(master: u64, index: usize) -> u64 {
    let mut z = master.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Train/test splits before per-cell feature selection. `columns` lists
/// usable feature columns in priority order.
struct Prepared {
    name: String,
    train: LabeledDataset,
    test: LabeledDataset,
    columns: Vec<usize>,
}

fn prepare(source: &DatasetSource, spec: &GridSpec) -> Result<Prepared> {
    let seed = spec.train.seed;
    let max_n = spec.features.iter().copied().max().unwrap_or(0);
    match source {
        DatasetSource::Csv(src) => {
            let data = load_csv(&src.path, &src.options)?.with_name(src.name.clone());
            let (train, test) = split_train_test(&data, spec.split, seed)?;
            let columns = if src.ranking.is_empty() { (0..data.feature_dim()).collect() } else { src.ranking.clone() };
            Ok(Prepared {
                name: src.name.clone(),
                train: cap_samples(&train, spec.train_cap, seed),
                test: cap_samples(&test, spec.test_cap, seed.wrapping_add(1)),
                columns,
            })
        }
        DatasetSource::Mnist(src) => {
            let (a, b) = src.classes;
            let full = load_mnist_idx(&src.train_images, &src.train_labels, a, b)?;
            let (train, test) = match (&src.test_images, &src.test_labels) {
                (Some(images), Some(labels)) => (full, load_mnist_idx(images, labels, a, b)?),
                (None, None) => split_train_test(&full, spec.split, seed)?,
                _ => return Err(Error::Config("MNIST test images and labels must be given together".into())),
            };
            let train = cap_samples(&train, spec.train_cap, seed);
            let test = cap_samples(&test, spec.test_cap, seed.wrapping_add(1));
            let k = max_n.min(train.feature_dim());
            let pca = pca_fit(&train, k)?;
            Ok(Prepared {
                name: format!("mnist{a}{b}"),
                train: pca_transform(&pca, &train)?,
                test: pca_transform(&pca, &test)?,
                columns: (0..k).collect(),
            })
        }
        DatasetSource::Synth(src) => {
            let data = synth_binary_dataset(src.samples, src.dim, src.separation, seed)?;
            let (train, test) = split_train_test(&data, spec.split, seed)?;
            Ok(Prepared {
                name: "synth".into(),
                train: cap_samples(&train, spec.train_cap, seed),
                test: cap_samples(&test, spec.test_cap, seed.wrapping_add(1)),
                columns: (0..src.dim).collect(),
            })
        }
    }
}

/// Angle encodings see features in `[0, π/2]`; amplitude encoding also
/// normalizes each rescaled row to unit length.
pub fn preprocess_for(
    train: &LabeledDataset,
    test: &LabeledDataset,
    encoding: EncodingKind,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let (train, test) = rescale_to_range(train, test, 0.0, FRAC_PI_2)?;
    if encoding == EncodingKind::Amplitude {
        Ok((l2_normalize_dataset(&train)?, l2_normalize_dataset(&test)?))
    } else {
        Ok((train, test))
    }
}

struct Cell {
    dataset: usize,
    n: usize,
    m: usize,
    encoding: EncodingSpec,
    seed: u64,
}

struct CellOutcome {
    ep_accuracies: Vec<f64>,
    test_accuracy: f64,
    f1: f64,
    predictions: Vec<u8>,
    labels: Vec<u8>,
}

fn run_cell(cell: &Cell, data: &Prepared, spec: &GridSpec) -> Result<CellOutcome> {
    let model = ModelConfig::new(cell.encoding, cell.n, cell.m)?;
    let train_raw = select_features(&data.train, &data.columns, cell.n)?;
    let test_raw = select_features(&data.test, &data.columns, cell.n)?;
    let (train_set, test_set) = preprocess_for(&train_raw, &test_raw, cell.encoding.kind)?;
    let tcfg = TrainConfig { seed: cell.seed, ..spec.train };
    let history = train(&train_set, &model, &tcfg)?;
    let predictions = predict_dataset(&test_set, &model, &history.final_params)?;
    let labels = test_set.labels();
    Ok(CellOutcome {
        test_accuracy: accuracy(&predictions, &labels)?,
        f1: f1_score(&predictions, &labels, 1)?,
        ep_accuracies: history.epoch_train_accuracy,
        predictions,
        labels,
    })
}

/// Runs every (dataset, N, M, encoding) cell, in that nesting order.
///
/// Datasets that cannot be loaded abort the whole grid. Anything that fails
/// inside a cell is recorded on that cell's row and the rest carry on.
pub fn run_grid(spec: &GridSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let prepared = spec.datasets.iter().map(|d| prepare(d, spec)).collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::with_capacity(spec.num_cells());
    for dataset in 0..prepared.len() {
        for &n in &spec.features {
            for &m in &spec.layers {
                for &encoding in &spec.encodings {
                    let seed = cell_seed(spec.train.seed, cells.len());
                    cells.push(Cell { dataset, n, m, encoding, seed });
                }
            }
        }
    }

    Ok(map_ordered(&cells, |cell| {
        let start = Instant::now();
        let outcome = run_cell(cell, &prepared[cell.dataset], spec);
        let wall_time_s = start.elapsed().as_secs_f64();
        let mut record = RunRecord {
            dataset: prepared[cell.dataset].name.clone(),
            encoding: cell.encoding.kind,
            axis: cell.encoding.reported_axis(),
            n: cell.n,
            m: cell.m,
            ep_accuracies: Vec::new(),
            test_accuracy: 0.0,
            f1: 0.0,
            seed: cell.seed,
            wall_time_s,
            error: None,
            predictions: Vec::new(),
            labels: Vec::new(),
        };
        match outcome {
            Ok(o) => {
                record.ep_accuracies = o.ep_accuracies;
                record.test_accuracy = o.test_accuracy;
                record.f1 = o.f1;
                record.predictions = o.predictions;
                record.labels = o.labels;
            }
            Err(e) => record.error = Some(e.to_string()),
        }
        record
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synth() -> DatasetSource {
        DatasetSource::Synth(SynthSource { samples: 40, dim: 4, separation: 3.0 })
    }

    #[test]
    fn cell_seeds_differ() {
        let seeds: Vec<u64> = (0..30).map(|i| cell_seed(7, i)).collect();
        let mut unique = seeds.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), 30);
        assert_eq!(cell_seed(7, 3), seeds[3]);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(GridSpec::paper(vec![synth()], 0).num_cells(), 30);
        assert_eq!(GridSpec::appendix(vec![synth()], 0).num_cells(), 12);
    }

    #[test]
    fn validation() {
        let mut spec = GridSpec::paper(vec![synth()], 0);
        assert!(spec.validate().is_ok());
        spec.features = vec![1];
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        spec = GridSpec::paper(vec![], 0);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn oversized_cell_fails_alone() {
        let mut spec = GridSpec::paper(vec![synth()], 1);
        spec.encodings = vec![EncodingSpec::simple(Axis::X)];
        spec.features = vec![4, 6];
        spec.layers = vec![1];
        spec.train.epochs = 1;
        let records = run_grid(&spec).unwrap();
        assert_eq!(records.len(), 2);
        assert!(records[0].is_ok());
        assert!(records[1].error.as_deref().unwrap().contains("ranked features"));
    }

    #[test]
    fn amplitude_rows_are_unit_length() {
        let data = synth_binary_dataset(20, 4, 1.0, 0).unwrap();
        let (tr, te) = preprocess_for(&data, &data, EncodingKind::Amplitude).unwrap();
        for s in tr.samples().iter().chain(te.samples()) {
            let norm: f64 = s.features.iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        let (tr, _) = preprocess_for(&data, &data, EncodingKind::Iqp).unwrap();
        assert!(tr.samples().iter().flat_map(|s| &s.features).all(|v| (0.0..=FRAC_PI_2).contains(v)));
    }
}
