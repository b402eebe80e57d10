//! A small dense classifier trained with Adam, plus gradient saliency.
//!
//! Hidden layers apply an affine map followed by leaky-ReLU and (during
//! training) inverted dropout; the output layer is a 2-way softmax. The
//! loss is cross-entropy plus an L2 penalty on the weights. Everything is
//! deterministic given the configured seed: initialisation, shuffling and
//! dropout masks all flow from it.
//!
//! Inputs are passed densely but consumed through a sparse index/value view,
//! which makes one-hot batches cheap in the first layer.

use crate::dataset::BinaryDataset;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    pub leaky_slope: f64,
    pub dropout: f64,
    pub l2: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_epsilon: f64,
    pub rng_seed: u64,
}

impl Default for MlpConfig {
    fn default() -> MlpConfig {
        MlpConfig {
            hidden: vec![256, 128, 64],
            leaky_slope: 0.01,
            dropout: 0.01,
            l2: 1e-4,
            learning_rate: 1e-3,
            batch_size: 64,
            epochs: 30,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_epsilon: 1e-8,
            rng_seed: 0,
        }
    }
}

impl MlpConfig {
    fn check(&self) -> Result<(), TrainError> {
        let rates_ok = self.dropout >= 0.0
            && self.dropout < 1.0
            && self.learning_rate > 0.0
            && self.leaky_slope >= 0.0;
        let sizes_ok =
            self.batch_size > 0 && self.epochs > 0 && self.hidden.iter().all(|h| *h > 0);
        if rates_ok && sizes_ok {
            Ok(())
        } else {
            Err(TrainError::BadConfig)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Layer {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows x cols`.
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_accuracy: f64,
    pub val_loss: Option<f64>,
    pub val_accuracy: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MlpModel {
    pub layers: Vec<Layer>,
    pub config: MlpConfig,
    pub history: Vec<EpochStats>,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TrainError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("input dimension {got} does not match the model's {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite loss at epoch {epoch}")]
    Diverged { epoch: usize },
    #[error("invalid configuration")]
    BadConfig,
    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<TrainError>,
    },
    #[error("no models supplied")]
    NoModels,
    #[error(transparent)]
    Dataset(#[from] crate::dataset::DatasetError),
}

/// A sparse view of one input: indices with their values.
type SparseInput = Vec<(u32, f64)>;

fn to_sparse(x: &[f64]) -> SparseInput {
    x.iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(i, v)| (i as u32, *v))
        .collect()
}

impl MlpModel {
    pub fn input_dim(&self) -> usize {
        self.layers[0].cols
    }

    /// Class probabilities for one input. `training` supplies the RNG for
    /// dropout masks; pass `None` for evaluation (no dropout).
    pub fn forward(
        &self,
        x: &[f64],
        training: Option<&mut ChaCha8Rng>,
    ) -> Result<Vec<f64>, TrainError> {
        if x.len() != self.input_dim() {
            return Err(TrainError::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let sparse = to_sparse(x);
        let mut acts = Activations::new(&self.layers);
        self.forward_sparse(&sparse, &mut acts, training);
        Ok(acts.probabilities().to_vec())
    }

    /// Forward pass from a sparse input into preallocated activations.
    fn forward_sparse(
        &self,
        x: &SparseInput,
        acts: &mut Activations,
        mut training: Option<&mut ChaCha8Rng>,
    ) {
        let cfg = &self.config;
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let z = &mut acts.z[l];
            z.copy_from_slice(&layer.biases);
            if l == 0 {
                for &(i, v) in x {
                    let col = i as usize;
                    for (o, zo) in z.iter_mut().enumerate() {
                        *zo += layer.weights[o * layer.cols + col] * v;
                    }
                }
            } else {
                let prev = &acts.a[l - 1];
                for o in 0..layer.rows {
                    let row = &layer.weights[o * layer.cols..(o + 1) * layer.cols];
                    let mut acc = 0.0;
                    for (w, p) in row.iter().zip(prev.iter()) {
                        acc += w * p;
                    }
                    z[o] += acc;
                }
            }
            if l == last {
                softmax_into(&acts.z[l], &mut acts.a[l]);
            } else {
                let slope = cfg.leaky_slope;
                let zs = acts.z[l].clone();
                let a = &mut acts.a[l];
                for (av, zv) in a.iter_mut().zip(zs.iter()) {
                    *av = if *zv > 0.0 { *zv } else { slope * zv };
                }
                if let Some(rng) = training.as_deref_mut() {
                    if cfg.dropout > 0.0 {
                        let keep = 1.0 - cfg.dropout;
                        let mask = &mut acts.mask[l];
                        for (m, av) in mask.iter_mut().zip(a.iter_mut()) {
                            if rng.gen::<f64>() < cfg.dropout {
                                *m = 0.0;
                                *av = 0.0;
                            } else {
                                *m = 1.0 / keep;
                                *av *= 1.0 / keep;
                            }
                        }
                    } else {
                        acts.mask[l].fill(1.0);
                    }
                }
            }
        }
    }

    /// Gradient of the probability of `class` with respect to the inputs,
    /// with dropout off.
    pub fn input_gradient(&self, x: &[f64], class: usize) -> Result<Vec<f64>, TrainError> {
        if x.len() != self.input_dim() {
            return Err(TrainError::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let sparse = to_sparse(x);
        let mut acts = Activations::new(&self.layers);
        self.forward_sparse(&sparse, &mut acts, None);
        let p = acts.probabilities();
        // d p_k / d z_j = p_k (delta_kj - p_j) for the softmax outputs.
        let pk = p[class];
        let mut delta: Vec<f64> = p
            .iter()
            .enumerate()
            .map(|(j, pj)| pk * (if j == class { 1.0 } else { 0.0 } - pj))
            .collect();
        for l in (1..self.layers.len()).rev() {
            let layer = &self.layers[l];
            let mut prev = vec![0.0; layer.cols];
            for (o, d) in delta.iter().enumerate() {
                let row = &layer.weights[o * layer.cols..(o + 1) * layer.cols];
                for (pv, w) in prev.iter_mut().zip(row.iter()) {
                    *pv += w * d;
                }
            }
            let slope = self.config.leaky_slope;
            for (pv, zv) in prev.iter_mut().zip(acts.z[l - 1].iter()) {
                if *zv <= 0.0 {
                    *pv *= slope;
                }
            }
            delta = prev;
        }
        let layer = &self.layers[0];
        let mut grad = vec![0.0; layer.cols];
        for (o, d) in delta.iter().enumerate() {
            let row = &layer.weights[o * layer.cols..(o + 1) * layer.cols];
            for (g, w) in grad.iter_mut().zip(row.iter()) {
                *g += w * d;
            }
        }
        Ok(grad)
    }
}

/// Per-layer scratch: pre-activations, activations, dropout masks.
struct Activations {
    z: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
    mask: Vec<Vec<f64>>,
}

impl Activations {
    fn new(layers: &[Layer]) -> Activations {
        Activations {
            z: layers.iter().map(|l| vec![0.0; l.rows]).collect(),
            a: layers.iter().map(|l| vec![0.0; l.rows]).collect(),
            mask: layers.iter().map(|l| vec![1.0; l.rows]).collect(),
        }
    }

    fn probabilities(&self) -> &[f64] {
        self.a.last().unwrap()
    }
}

fn softmax_into(z: &[f64], out: &mut [f64]) {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, zv) in out.iter_mut().zip(z.iter()) {
        let e = (zv - max).exp();
        *o = e;
        sum += e;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

/// Per-layer Adam state and gradient accumulators.
struct Optimiser {
    m_w: Vec<Vec<f64>>,
    v_w: Vec<Vec<f64>>,
    m_b: Vec<Vec<f64>>,
    v_b: Vec<Vec<f64>>,
    g_w: Vec<Vec<f64>>,
    g_b: Vec<Vec<f64>>,
    step: u64,
}

impl Optimiser {
    fn new(layers: &[Layer]) -> Optimiser {
        let wshape: Vec<Vec<f64>> = layers.iter().map(|l| vec![0.0; l.weights.len()]).collect();
        let bshape: Vec<Vec<f64>> = layers.iter().map(|l| vec![0.0; l.biases.len()]).collect();
        Optimiser {
            m_w: wshape.clone(),
            v_w: wshape.clone(),
            m_b: bshape.clone(),
            v_b: bshape.clone(),
            g_w: wshape,
            g_b: bshape,
            step: 0,
        }
    }

    fn zero_grads(&mut self) {
        for g in self.g_w.iter_mut().chain(self.g_b.iter_mut()) {
            g.fill(0.0);
        }
    }

    fn apply(&mut self, layers: &mut [Layer], cfg: &MlpConfig, batch: usize) {
        self.step += 1;
        let t = self.step as i32;
        let lr = cfg.learning_rate;
        let (b1, b2, eps) = (cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon);
        let bc1 = 1.0 - b1.powi(t);
        let bc2 = 1.0 - b2.powi(t);
        let scale = 1.0 / batch as f64;
        for (l, layer) in layers.iter_mut().enumerate() {
            for (i, w) in layer.weights.iter_mut().enumerate() {
                // Mean data gradient plus the L2 penalty gradient.
                let g = self.g_w[l][i] * scale + 2.0 * cfg.l2 * *w;
                let m = &mut self.m_w[l][i];
                let v = &mut self.v_w[l][i];
                *m = b1 * *m + (1.0 - b1) * g;
                *v = b2 * *v + (1.0 - b2) * g * g;
                let mhat = *m / bc1;
                let vhat = *v / bc2;
                *w -= lr * mhat / (vhat.sqrt() + eps);
            }
            for (i, b) in layer.biases.iter_mut().enumerate() {
                let g = self.g_b[l][i] * scale;
                let m = &mut self.m_b[l][i];
                let v = &mut self.v_b[l][i];
                *m = b1 * *m + (1.0 - b1) * g;
                *v = b2 * *v + (1.0 - b2) * g * g;
                let mhat = *m / bc1;
                let vhat = *v / bc2;
                *b -= lr * mhat / (vhat.sqrt() + eps);
            }
        }
    }
}

/// He-style uniform initialisation scaled by fan-in.
fn init_layers(dims: &[usize], rng: &mut ChaCha8Rng) -> Vec<Layer> {
    dims.windows(2)
        .map(|w| {
            let (cols, rows) = (w[0], w[1]);
            let limit = (6.0 / cols as f64).sqrt();
            let weights = (0..rows * cols)
                .map(|_| rng.gen_range(-limit..limit))
                .collect();
            Layer {
                rows,
                cols,
                weights,
                biases: vec![0.0; rows],
            }
        })
        .collect()
}

/// Trains one model. `val` is evaluated at the end of each epoch with
/// dropout off and recorded in the history.
pub fn train(
    inputs: &[Vec<f64>],
    labels: &[u8],
    val: Option<(&[Vec<f64>], &[u8])>,
    config: &MlpConfig,
) -> Result<MlpModel, TrainError> {
    config.check()?;
    if inputs.is_empty() {
        return Err(TrainError::EmptyTrainingSet);
    }
    assert_eq!(inputs.len(), labels.len());
    let input_dim = inputs[0].len();
    let mut dims = vec![input_dim];
    dims.extend_from_slice(&config.hidden);
    dims.push(2);

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut model = MlpModel {
        layers: init_layers(&dims, &mut rng),
        config: config.clone(),
        history: Vec::new(),
    };
    let sparse: Vec<SparseInput> = inputs.iter().map(|x| to_sparse(x)).collect();
    let mut opt = Optimiser::new(&model.layers);
    let mut acts = Activations::new(&model.layers);
    let mut order: Vec<usize> = (0..inputs.len()).collect();

    for epoch in 0..config.epochs {
        use rand::seq::SliceRandom;
        order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        let mut correct = 0usize;
        for chunk in order.chunks(config.batch_size) {
            opt.zero_grads();
            let mut batch_loss = 0.0;
            for &idx in chunk {
                let x = &sparse[idx];
                let y = labels[idx] as usize;
                model.forward_sparse(x, &mut acts, Some(&mut rng));
                let p = acts.probabilities();
                batch_loss += -(p[y].max(1e-300)).ln();
                if argmax2(p) == y {
                    correct += 1;
                }
                // Output delta for softmax with cross-entropy.
                let last = model.layers.len() - 1;
                let mut delta: Vec<f64> = acts.a[last]
                    .iter()
                    .enumerate()
                    .map(|(j, pj)| pj - if j == y { 1.0 } else { 0.0 })
                    .collect();
                for l in (0..model.layers.len()).rev() {
                    let layer = &model.layers[l];
                    // Accumulate weight and bias gradients.
                    if l == 0 {
                        for (o, d) in delta.iter().enumerate() {
                            opt.g_b[l][o] += d;
                            let base = o * layer.cols;
                            for &(i, v) in x {
                                opt.g_w[l][base + i as usize] += d * v;
                            }
                        }
                    } else {
                        let prev = &acts.a[l - 1];
                        for (o, d) in delta.iter().enumerate() {
                            opt.g_b[l][o] += d;
                            let gw = &mut opt.g_w[l][o * layer.cols..(o + 1) * layer.cols];
                            for (g, pv) in gw.iter_mut().zip(prev.iter()) {
                                *g += d * pv;
                            }
                        }
                    }
                    if l == 0 {
                        break;
                    }
                    // Propagate through the affine map, dropout and the
                    // activation of the previous layer.
                    let mut prev_delta = vec![0.0; layer.cols];
                    for (o, d) in delta.iter().enumerate() {
                        let row = &layer.weights[o * layer.cols..(o + 1) * layer.cols];
                        for (pd, w) in prev_delta.iter_mut().zip(row.iter()) {
                            *pd += w * d;
                        }
                    }
                    for ((pd, m), zv) in prev_delta
                        .iter_mut()
                        .zip(acts.mask[l - 1].iter())
                        .zip(acts.z[l - 1].iter())
                    {
                        *pd *= m * if *zv > 0.0 { 1.0 } else { config.leaky_slope };
                    }
                    delta = prev_delta;
                }
            }
            if !batch_loss.is_finite() {
                return Err(TrainError::Diverged { epoch });
            }
            epoch_loss += batch_loss;
            opt.apply(&mut model.layers, config, chunk.len());
        }
        let penalty: f64 = model
            .layers
            .iter()
            .flat_map(|l| l.weights.iter())
            .map(|w| w * w)
            .sum::<f64>()
            * config.l2;
        let train_loss = epoch_loss / inputs.len() as f64 + penalty;
        if !train_loss.is_finite() {
            return Err(TrainError::Diverged { epoch });
        }
        let (val_loss, val_accuracy) = match val {
            Some((vx, vy)) => {
                let ev = evaluate_with_loss(&model, vx, vy)?;
                (Some(ev.1 + penalty), Some(ev.0.accuracy))
            }
            None => (None, None),
        };
        model.history.push(EpochStats {
            epoch,
            train_loss,
            train_accuracy: correct as f64 / inputs.len() as f64,
            val_loss,
            val_accuracy,
        });
    }
    Ok(model)
}

fn argmax2(p: &[f64]) -> usize {
    if p[1] > p[0] {
        1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub mcc: f64,
    /// `confusion[actual][predicted]`.
    pub confusion: [[u64; 2]; 2],
}

/// Accuracy, Matthews correlation and the confusion matrix on a test split.
pub fn evaluate(model: &MlpModel, inputs: &[Vec<f64>], labels: &[u8]) -> Result<EvalReport, TrainError> {
    evaluate_with_loss(model, inputs, labels).map(|(r, _)| r)
}

fn evaluate_with_loss(
    model: &MlpModel,
    inputs: &[Vec<f64>],
    labels: &[u8],
) -> Result<(EvalReport, f64), TrainError> {
    let mut confusion = [[0u64; 2]; 2];
    let mut loss = 0.0;
    let mut acts = Activations::new(&model.layers);
    for (x, y) in inputs.iter().zip(labels) {
        if x.len() != model.input_dim() {
            return Err(TrainError::DimensionMismatch {
                expected: model.input_dim(),
                got: x.len(),
            });
        }
        let sparse = to_sparse(x);
        model.forward_sparse(&sparse, &mut acts, None);
        let p = acts.probabilities();
        loss += -(p[*y as usize].max(1e-300)).ln();
        confusion[*y as usize][argmax2(p)] += 1;
    }
    let total: u64 = confusion.iter().flatten().sum();
    let correct = confusion[0][0] + confusion[1][1];
    Ok((
        EvalReport {
            accuracy: correct as f64 / total as f64,
            mcc: mcc_from_confusion(&confusion),
            confusion,
        },
        loss / inputs.len().max(1) as f64,
    ))
}

/// Matthews correlation coefficient; 0 when any denominator factor is 0.
pub fn mcc_from_confusion(confusion: &[[u64; 2]; 2]) -> f64 {
    let tn = confusion[0][0] as f64;
    let fp = confusion[0][1] as f64;
    let fne = confusion[1][0] as f64;
    let tp = confusion[1][1] as f64;
    let denom = (tp + fp) * (tp + fne) * (tn + fp) * (tn + fne);
    if denom == 0.0 {
        return 0.0;
    }
    (tp * tn - fp * fne) / denom.sqrt()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub accuracy: f64,
    pub mcc: f64,
    pub confusion: [[u64; 2]; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: Vec<FoldResult>,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub mcc_mean: f64,
    pub mcc_std: f64,
}

/// Five-fold cross-validation: fold `i` is the test split for model `i`.
/// Folds train in parallel with seeds `rng_seed + fold`. Returns the report
/// and the trained models (for saliency reuse).
pub fn cross_validate(
    ds: &BinaryDataset,
    config: &MlpConfig,
) -> Result<(CvReport, Vec<MlpModel>), TrainError> {
    let encoded = ds.encode_all()?;
    let labels = ds.labels();
    let results: Result<Vec<(FoldResult, MlpModel)>, TrainError> = ds
        .folds
        .par_iter()
        .enumerate()
        .map(|(fold, test_idx)| {
            let train_idx = ds.train_indices(fold);
            let tx: Vec<Vec<f64>> = train_idx.iter().map(|&i| encoded[i].clone()).collect();
            let ty: Vec<u8> = train_idx.iter().map(|&i| labels[i]).collect();
            let vx: Vec<Vec<f64>> = test_idx.iter().map(|&i| encoded[i].clone()).collect();
            let vy: Vec<u8> = test_idx.iter().map(|&i| labels[i]).collect();
            let mut cfg = config.clone();
            cfg.rng_seed = config.rng_seed.wrapping_add(fold as u64);
            let model = train(&tx, &ty, Some((&vx, &vy)), &cfg).map_err(|e| TrainError::Fold {
                fold,
                source: Box::new(e),
            })?;
            let ev = evaluate(&model, &vx, &vy)?;
            Ok((
                FoldResult {
                    fold,
                    accuracy: ev.accuracy,
                    mcc: ev.mcc,
                    confusion: ev.confusion,
                },
                model,
            ))
        })
        .collect();
    let mut folds = Vec::new();
    let mut models = Vec::new();
    for (f, m) in results? {
        folds.push(f);
        models.push(m);
    }
    let accs: Vec<f64> = folds.iter().map(|f| f.accuracy).collect();
    let mccs: Vec<f64> = folds.iter().map(|f| f.mcc).collect();
    Ok((
        CvReport {
            accuracy_mean: mean(&accs),
            accuracy_std: std_dev(&accs),
            mcc_mean: mean(&mccs),
            mcc_std: std_dev(&mccs),
            folds,
        },
        models,
    ))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

pub const SALIENCY_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaliencyReport {
    /// Row-major `len x 64`: mean absolute input gradients, max-normalised.
    pub matrix: Vec<f64>,
    pub len: usize,
    pub threshold: f64,
    /// Count of above-threshold entries per alphabet index.
    pub letter_histogram: Vec<usize>,
    /// Count of above-threshold entries per signature position.
    pub position_histogram: Vec<usize>,
}

/// Mean absolute gradient of the predicted-class probability with respect to
/// each input, over every test input of every model, max-normalised and
/// partitioned at the threshold.
pub fn gradient_saliency(
    models: &[MlpModel],
    test_sets: &[Vec<Vec<f64>>],
    len: usize,
) -> Result<SaliencyReport, TrainError> {
    if models.is_empty() || models.len() != test_sets.len() {
        return Err(TrainError::NoModels);
    }
    let dim = models[0].input_dim();
    assert_eq!(dim, len * crate::dataset::ALPHABET_SIZE);
    let mut acc = vec![0.0f64; dim];
    let mut count = 0usize;
    for (model, tests) in models.iter().zip(test_sets) {
        for x in tests {
            let p = model.forward(x, None)?;
            let class = argmax2(&p);
            let grad = model.input_gradient(x, class)?;
            for (a, g) in acc.iter_mut().zip(&grad) {
                *a += g.abs();
            }
            count += 1;
        }
    }
    if count == 0 {
        return Err(TrainError::NoModels);
    }
    for a in &mut acc {
        *a /= count as f64;
    }
    let max = acc.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        for a in &mut acc {
            *a /= max;
        }
    }
    let mut letter_histogram = vec![0usize; crate::dataset::ALPHABET_SIZE];
    let mut position_histogram = vec![0usize; len];
    for (i, v) in acc.iter().enumerate() {
        if *v > SALIENCY_THRESHOLD {
            letter_histogram[i % crate::dataset::ALPHABET_SIZE] += 1;
            position_histogram[i / crate::dataset::ALPHABET_SIZE] += 1;
        }
    }
    Ok(SaliencyReport {
        matrix: acc,
        len,
        threshold: SALIENCY_THRESHOLD,
        letter_histogram,
        position_histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_config() -> MlpConfig {
        MlpConfig {
            hidden: vec![8],
            epochs: 30,
            batch_size: 8,
            rng_seed: 42,
            ..MlpConfig::default()
        }
    }

    /// Two separable clusters in 4 dimensions.
    fn separable(n: usize) -> (Vec<Vec<f64>>, Vec<u8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..n {
            let label = (i % 2) as u8;
            let centre = if label == 0 { 1.0 } else { -1.0 };
            xs.push((0..4).map(|_| centre + 0.2 * rng.gen::<f64>()).collect());
            ys.push(label);
        }
        (xs, ys)
    }

    #[test]
    fn zero_weights_give_uniform_probabilities() {
        let model = MlpModel {
            layers: vec![Layer {
                rows: 2,
                cols: 4,
                weights: vec![0.0; 8],
                biases: vec![0.0; 2],
            }],
            config: MlpConfig::default(),
            history: Vec::new(),
        };
        let p = model.forward(&[0.3, -0.7, 1.0, 0.0], None).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!((p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let model = MlpModel {
            layers: init_layers(&[16, 8, 2], &mut rng),
            config: MlpConfig::default(),
            history: Vec::new(),
        };
        for _ in 0..1000 {
            let x: Vec<f64> = (0..16).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
            let p = model.forward(&x, None).unwrap();
            assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
            assert!(p[0] > 0.0 && p[1] > 0.0);
        }
    }

    #[test]
    fn leaky_relu_slope() {
        // One hidden unit with identity weights exposes the activation.
        let model = MlpModel {
            layers: vec![
                Layer {
                    rows: 1,
                    cols: 1,
                    weights: vec![1.0],
                    biases: vec![0.0],
                },
                Layer {
                    rows: 2,
                    cols: 1,
                    weights: vec![1.0, 0.0],
                    biases: vec![0.0, 0.0],
                },
            ],
            config: MlpConfig::default(),
            history: Vec::new(),
        };
        // With x = -1 the hidden activation is -0.01; the logit gap equals it.
        let p = model.forward(&[-1.0], None).unwrap();
        let gap = (p[0] / p[1]).ln();
        assert!((gap - (-0.01)).abs() < 1e-12);
    }

    #[test]
    fn separable_data_reaches_full_accuracy() {
        let (xs, ys) = separable(64);
        let model = train(&xs, &ys, None, &toy_config()).unwrap();
        let ev = evaluate(&model, &xs, &ys).unwrap();
        assert_eq!(ev.accuracy, 1.0);
        assert_eq!(ev.mcc, 1.0);
        // Loss decreases over the first epochs.
        assert!(model.history[4].train_loss < model.history[0].train_loss);
    }

    #[test]
    fn training_is_deterministic() {
        let (xs, ys) = separable(32);
        let m1 = train(&xs, &ys, None, &toy_config()).unwrap();
        let m2 = train(&xs, &ys, None, &toy_config()).unwrap();
        assert_eq!(m1.layers[0].weights, m2.layers[0].weights);
        let h1: Vec<f64> = m1.history.iter().map(|h| h.train_loss).collect();
        let h2: Vec<f64> = m2.history.iter().map(|h| h.train_loss).collect();
        assert_eq!(h1, h2);
    }

    #[test]
    fn chance_level_confusion_has_zero_mcc() {
        assert_eq!(mcc_from_confusion(&[[25, 25], [25, 25]]), 0.0);
        // All predictions one class: a zero denominator factor.
        assert_eq!(mcc_from_confusion(&[[50, 0], [50, 0]]), 0.0);
        assert_eq!(mcc_from_confusion(&[[50, 0], [0, 50]]), 1.0);
    }

    #[test]
    fn mcc_invariant_under_label_swap() {
        let c = [[30, 12], [7, 41]];
        let swapped = [[41, 7], [12, 30]];
        assert!((mcc_from_confusion(&c) - mcc_from_confusion(&swapped)).abs() < 1e-15);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let model = MlpModel {
            layers: init_layers(&[12, 6, 2], &mut rng),
            config: MlpConfig::default(),
            history: Vec::new(),
        };
        let step = 1e-5;
        for _ in 0..20 {
            let x: Vec<f64> = (0..12).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            for class in 0..2 {
                let grad = model.input_gradient(&x, class).unwrap();
                for i in 0..12 {
                    let mut xp = x.clone();
                    xp[i] += step;
                    let mut xm = x.clone();
                    xm[i] -= step;
                    let fd = (model.forward(&xp, None).unwrap()[class]
                        - model.forward(&xm, None).unwrap()[class])
                        / (2.0 * step);
                    let denom = grad[i].abs().max(fd.abs()).max(1e-8);
                    assert!(
                        (grad[i] - fd).abs() / denom <= 1e-4,
                        "dim {i}: analytic {} vs fd {}",
                        grad[i],
                        fd
                    );
                }
            }
        }
    }

    #[test]
    fn single_linear_layer_saliency_is_row_difference() {
        // With softmax over W x, the gradient of p_0 is p0 p1 (w_0 - w_1).
        let model = MlpModel {
            layers: vec![Layer {
                rows: 2,
                cols: 3,
                weights: vec![1.0, -2.0, 0.5, 0.25, 1.0, -1.0],
                biases: vec![0.0, 0.0],
            }],
            config: MlpConfig::default(),
            history: Vec::new(),
        };
        let x = vec![0.2, 0.1, -0.4];
        let p = model.forward(&x, None).unwrap();
        let grad = model.input_gradient(&x, 0).unwrap();
        let expect: Vec<f64> = (0..3)
            .map(|i| p[0] * p[1] * (model.layers[0].weights[i] - model.layers[0].weights[3 + i]))
            .collect();
        for (g, e) in grad.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn cross_validation_on_separable_data() {
        use crate::dataset::build_binary_dataset;
        use crate::isosig::IsoSig;
        // Two manifolds' seed signatures repeated: trivially separable by
        // their one-hot patterns.
        let a: Vec<IsoSig> = (0..40).map(|_| IsoSig::parse("cMcabbgqs").unwrap()).collect();
        let b: Vec<IsoSig> = (0..40).map(|_| IsoSig::parse("cMcabbjaj").unwrap()).collect();
        let ds = build_binary_dataset(&a, &b, ["a".into(), "b".into()], 9, 11).unwrap();
        let cfg = MlpConfig {
            hidden: vec![16],
            epochs: 15,
            batch_size: 16,
            rng_seed: 3,
            ..MlpConfig::default()
        };
        let (report, models) = cross_validate(&ds, &cfg).unwrap();
        assert_eq!(models.len(), 5);
        assert_eq!(report.folds.len(), 5);
        assert!(report.accuracy_mean == 1.0, "mean {}", report.accuracy_mean);
    }

    #[test]
    fn saliency_requires_models() {
        assert!(gradient_saliency(&[], &[], 9).is_err());
    }
}
