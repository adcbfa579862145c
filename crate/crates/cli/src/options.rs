use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Deserialize;

use qembed::bench::{CsvSource, DatasetSource, GridSpec, MnistSource, OutputFormat, SynthSource};
use qembed::data::{CsvOptions, LabelColumn};
use qembed::encoding::{Axis, EncodingKind, EncodingSpec};
use qembed::train::TrainConfig;
use qembed::{Error, Result};

/// Every field is optional so that a config file and the command line can
/// be layered; defaults are applied after merging.
#[derive(Debug, Default, Clone, Parser, Deserialize)]
#[command(name = "qembed-bench", version, about = "Benchmark quantum feature maps on a variational classifier")]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// TOML file with the same keys as the long flags; flags win.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// wdbc | mnist | synth | csv
    #[arg(long)]
    pub dataset: Option<String>,
    /// CSV file for --dataset csv (or to relocate the wdbc file).
    #[arg(long)]
    pub csv_path: Option<PathBuf>,
    /// Label column, by header name or 0-based index.
    #[arg(long)]
    pub label_column: Option<String>,
    /// Label value treated as the positive class.
    #[arg(long)]
    pub positive_label: Option<String>,
    /// Feature columns by importance, e.g. 23,21,27. Defaults to file order.
    #[arg(long, value_delimiter = ',')]
    pub ranking: Option<Vec<usize>>,

    /// IDX image file(s): TRAIN[,TEST]. Without TEST the train file is split.
    #[arg(long, value_delimiter = ',')]
    pub mnist_images: Option<Vec<PathBuf>>,
    /// IDX label file(s): TRAIN[,TEST].
    #[arg(long, value_delimiter = ',')]
    pub mnist_labels: Option<Vec<PathBuf>>,
    /// Digit pair a,b; a becomes label 0 and b label 1.
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<u8>>,

    /// Sample count for --dataset synth.
    #[arg(long)]
    pub synth_samples: Option<usize>,
    /// Distance between blob means per axis for --dataset synth.
    #[arg(long)]
    pub synth_separation: Option<f64>,

    /// simple | pi4 | entangled | amplitude | iqp | all (comma lists allowed)
    #[arg(long, value_delimiter = ',')]
    #[serde(default, deserialize_with = "one_or_many")]
    pub encoding: Option<Vec<String>>,
    /// Simple Angle rotation axis: x | y | both
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub features: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub layers: Option<Vec<usize>>,
    #[arg(long)]
    pub iqp_layers: Option<usize>,

    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub train_cap: Option<usize>,
    #[arg(long)]
    pub test_cap: Option<usize>,
    #[arg(long)]
    pub split: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output file. Prints to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv | json | md. Defaults to the --out extension, then csv.
    #[arg(long)]
    pub format: Option<String>,
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<String>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(Some(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => s.split(',').map(str::to_string).collect(),
        OneOrMany::Many(v) => v,
    }))
}

macro_rules! layer {
    ($flags:ident, $file:ident; $($field:ident),* $(,)?) => {
        Options { config: $flags.config, $($field: $flags.$field.or($file.$field)),* }
    };
}

impl Options {
    pub fn load_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Field-wise: values set on `self` win over `file`.
    pub fn over(self, file: Options) -> Options {
        let flags = self;
        layer!(flags, file;
            dataset, csv_path, label_column, positive_label, ranking, mnist_images, mnist_labels, classes,
            synth_samples, synth_separation, encoding, axis, features, layers, iqp_layers, epochs, lr,
            batch_size, train_cap, test_cap, split, seed, out, format,
        )
    }

    pub fn output_format(&self) -> Result<OutputFormat> {
        if let Some(f) = &self.format {
            return f.parse();
        }
        match self.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("json") => Ok(OutputFormat::Json),
            Some("md") | Some("markdown") => Ok(OutputFormat::Md),
            _ => Ok(OutputFormat::Csv),
        }
    }

    fn encodings(&self) -> Result<Vec<EncodingSpec>> {
        let axes = match self.axis.as_deref().map(str::trim) {
            None => vec![Axis::X],
            Some("both") => vec![Axis::X, Axis::Y],
            Some(a) => vec![a.parse::<Axis>()?],
        };
        let tokens = self.encoding.clone().unwrap_or_else(|| vec!["all".into()]);
        let mut kinds = Vec::new();
        for t in &tokens {
            if t.trim() == "all" {
                kinds.extend(EncodingKind::ALL);
            } else {
                kinds.push(t.parse::<EncodingKind>()?);
            }
        }
        let mut specs = Vec::new();
        for kind in kinds {
            let mut spec = EncodingSpec::new(kind);
            if let Some(l) = self.iqp_layers {
                spec.iqp_layers = l;
            }
            if kind == EncodingKind::SimpleAngle {
                specs.extend(axes.iter().map(|&axis| EncodingSpec { axis, ..spec }));
            } else {
                specs.push(spec);
            }
        }
        specs.dedup();
        Ok(specs)
    }

    fn dataset(&self) -> Result<DatasetSource> {
        let name = self.dataset.as_deref().unwrap_or("wdbc");
        match name {
            "wdbc" => {
                let mut src = CsvSource::wdbc(self.csv_path.clone().unwrap_or_else(|| "data/wdbc.csv".into()));
                if let Some(r) = &self.ranking {
                    src.ranking = r.clone();
                }
                Ok(DatasetSource::Csv(src))
            }
            "csv" => {
                let path = self.csv_path.clone().ok_or_else(|| Error::Config("--dataset csv needs --csv-path".into()))?;
                let label_column: LabelColumn = self
                    .label_column
                    .as_deref()
                    .ok_or_else(|| Error::Config("--dataset csv needs --label-column".into()))?
                    .parse()?;
                let positive_label = self
                    .positive_label
                    .clone()
                    .ok_or_else(|| Error::Config("--dataset csv needs --positive-label".into()))?;
                let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("csv").to_string();
                Ok(DatasetSource::Csv(CsvSource {
                    name,
                    path,
                    options: CsvOptions { label_column, positive_label, has_header: None },
                    ranking: self.ranking.clone().unwrap_or_default(),
                }))
            }
            "mnist" => {
                let dir = Path::new("data/mnist");
                let images = self.mnist_images.clone().unwrap_or_else(|| {
                    vec![dir.join("train-images-idx3-ubyte"), dir.join("t10k-images-idx3-ubyte")]
                });
                let labels = self.mnist_labels.clone().unwrap_or_else(|| {
                    vec![dir.join("train-labels-idx1-ubyte"), dir.join("t10k-labels-idx1-ubyte")]
                });
                if images.is_empty() || images.len() > 2 || images.len() != labels.len() {
                    return Err(Error::Config(
                        "--mnist-images and --mnist-labels each take TRAIN[,TEST] with matching counts".into(),
                    ));
                }
                let classes = match self.classes.as_deref() {
                    None => (0, 1),
                    Some(&[a, b]) => (a, b),
                    Some(_) => return Err(Error::Config("--classes takes exactly two digits a,b".into())),
                };
                Ok(DatasetSource::Mnist(MnistSource {
                    train_images: images[0].clone(),
                    train_labels: labels[0].clone(),
                    test_images: images.get(1).cloned(),
                    test_labels: labels.get(1).cloned(),
                    classes,
                }))
            }
            "synth" => Ok(DatasetSource::Synth(SynthSource {
                samples: self.synth_samples.unwrap_or(400),
                dim: self.features.as_ref().and_then(|f| f.iter().copied().max()).unwrap_or(8).max(2),
                separation: self.synth_separation.unwrap_or(2.0),
            })),
            other => Err(Error::Config(format!("unknown dataset {other:?} (expected wdbc, mnist, synth or csv)"))),
        }
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let defaults = TrainConfig::default();
        let spec = GridSpec {
            datasets: vec![self.dataset()?],
            encodings: self.encodings()?,
            features: self.features.clone().unwrap_or_else(|| qembed::bench::PAPER_FEATURES.to_vec()),
            layers: self.layers.clone().unwrap_or_else(|| qembed::bench::PAPER_LAYERS.to_vec()),
            train_cap: self.train_cap.unwrap_or(4000),
            test_cap: self.test_cap.unwrap_or(2000),
            split: self.split.unwrap_or(0.8),
            train: TrainConfig {
                epochs: self.epochs.unwrap_or(defaults.epochs),
                learning_rate: self.lr.unwrap_or(defaults.learning_rate),
                batch_size: self.batch_size.unwrap_or(defaults.batch_size),
                seed: self.seed.unwrap_or(0),
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

