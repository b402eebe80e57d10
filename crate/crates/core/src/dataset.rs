//! Fixed-length signature datasets: length histograms, reproducible
//! sampling, one-hot encoding and stratified folds.
//!
//! Every character of a signature becomes an independent 64-wide one-hot
//! block, so a length-`L` signature encodes as a `64·L` binary vector with
//! exactly `L` ones. All randomness flows from explicit seeds.

use crate::graph::PachnerGraph;
use crate::isosig::{alphabet_decode, IsoSig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

pub const ALPHABET_SIZE: usize = 64;
pub const FOLDS: usize = 5;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DatasetError {
    #[error("no signatures of length {0} in the graph")]
    NoSuchLength(usize),
    #[error("signature {sig} has length {actual}, expected {expected}")]
    LengthMismatch {
        sig: String,
        actual: usize,
        expected: usize,
    },
    #[error("signature contains a character outside the alphabet")]
    BadCharacter,
    #[error("class {0} is empty")]
    EmptyClass(usize),
}

/// Histogram of signature string lengths over all nodes.
pub fn length_histogram(g: &PachnerGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for sig in g.nodes() {
        *hist.entry(sig.len()).or_insert(0) += 1;
    }
    hist
}

/// Uniform sample without replacement of at most `count` signatures of
/// length `len`, deterministic for a given seed. Errors when the graph has
/// no signature of that length.
pub fn sample_fixed_length(
    g: &PachnerGraph,
    len: usize,
    count: usize,
    rng_seed: u64,
) -> Result<Vec<IsoSig>, DatasetError> {
    let mut pool: Vec<&IsoSig> = g.nodes().iter().filter(|s| s.len() == len).collect();
    if pool.is_empty() {
        return Err(DatasetError::NoSuchLength(len));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    pool.shuffle(&mut rng);
    Ok(pool.into_iter().take(count).cloned().collect())
}

/// One-hot encodes a fixed-length signature: block `b` carries a single one
/// at the alphabet index of character `b`.
pub fn one_hot(sig: &IsoSig, len: usize) -> Result<Vec<f64>, DatasetError> {
    if sig.len() != len {
        return Err(DatasetError::LengthMismatch {
            sig: sig.as_str().to_owned(),
            actual: sig.len(),
            expected: len,
        });
    }
    let mut v = vec![0.0; ALPHABET_SIZE * len];
    for (i, ch) in sig.as_str().chars().enumerate() {
        let k = alphabet_decode(ch).ok_or(DatasetError::BadCharacter)?;
        v[i * ALPHABET_SIZE + k as usize] = 1.0;
    }
    Ok(v)
}

/// Recovers the signature string from a one-hot vector (block argmaxes).
pub fn one_hot_decode(v: &[f64]) -> String {
    v.chunks(ALPHABET_SIZE)
        .map(|block| {
            let k = block
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .map(|(i, _)| i)
                .unwrap_or(0);
            crate::isosig::alphabet_encode(k as u8)
        })
        .collect()
}

/// A labelled sample: the signature and its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub sig: IsoSig,
    pub label: u8,
}

/// A binary dataset with five stratified folds over sample indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryDataset {
    pub samples: Vec<Sample>,
    pub class_names: [String; 2],
    pub len: usize,
    pub rng_seed: u64,
    pub folds: [Vec<usize>; FOLDS],
}

impl BinaryDataset {
    /// One-hot encodes every sample, in order.
    pub fn encode_all(&self) -> Result<Vec<Vec<f64>>, DatasetError> {
        self.samples
            .iter()
            .map(|s| one_hot(&s.sig, self.len))
            .collect()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Indices of the training split when `fold` is held out.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (f, idxs) in self.folds.iter().enumerate() {
            if f != fold {
                out.extend_from_slice(idxs);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Builds a labelled two-class dataset: labels 0/1 by source list, one
/// seeded shuffle, and five stratified folds (per-fold class counts within
/// one of the global proportions).
pub fn build_binary_dataset(
    class_a: &[IsoSig],
    class_b: &[IsoSig],
    class_names: [String; 2],
    len: usize,
    rng_seed: u64,
) -> Result<BinaryDataset, DatasetError> {
    if class_a.is_empty() {
        return Err(DatasetError::EmptyClass(0));
    }
    if class_b.is_empty() {
        return Err(DatasetError::EmptyClass(1));
    }
    for sig in class_a.iter().chain(class_b) {
        if sig.len() != len {
            return Err(DatasetError::LengthMismatch {
                sig: sig.as_str().to_owned(),
                actual: sig.len(),
                expected: len,
            });
        }
    }
    let mut samples: Vec<Sample> = class_a
        .iter()
        .map(|s| Sample {
            sig: s.clone(),
            label: 0,
        })
        .chain(class_b.iter().map(|s| Sample {
            sig: s.clone(),
            label: 1,
        }))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    samples.shuffle(&mut rng);

    // Stratify: deal each class's (already shuffled) indices round-robin.
    let mut folds: [Vec<usize>; FOLDS] = Default::default();
    for label in [0u8, 1u8] {
        for (k, idx) in samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.label == label)
            .map(|(i, _)| i)
            .enumerate()
        {
            folds[k % FOLDS].push(idx);
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(BinaryDataset {
        samples,
        class_names,
        len,
        rng_seed,
        folds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Budget};
    use crate::moves::MoveSet;
    use crate::seeds;

    fn s3_graph(depth: u16) -> PachnerGraph {
        let b = Budget::new(1_000_000);
        generate(seeds::S3, MoveSet::EXCHANGE, depth, &b).unwrap()
    }

    #[test]
    fn single_node_histogram() {
        let g = s3_graph(0);
        let hist = length_histogram(&g);
        assert_eq!(hist.len(), 1);
        assert_eq!(hist[&9], 1);
    }

    #[test]
    fn histogram_total_is_node_count() {
        let g = s3_graph(3);
        let hist = length_histogram(&g);
        assert_eq!(hist.values().sum::<usize>(), g.node_count());
    }

    #[test]
    fn sampling_is_deterministic_and_capped() {
        let g = s3_graph(3);
        let hist = length_histogram(&g);
        let (len, avail) = hist.iter().next_back().map(|(l, c)| (*l, *c)).unwrap();
        let s1 = sample_fixed_length(&g, len, avail + 100, 7).unwrap();
        let s2 = sample_fixed_length(&g, len, avail + 100, 7).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), avail);
        // No duplicates.
        let mut dedup = s1.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), s1.len());
        assert!(sample_fixed_length(&g, len, 0, 7).unwrap().is_empty());
        assert!(sample_fixed_length(&g, 4, 5, 7).is_err());
    }

    #[test]
    fn one_hot_shape_and_injectivity() {
        let sig = IsoSig::parse("a").unwrap();
        let v = one_hot(&sig, 1).unwrap();
        assert_eq!(v.len(), 64);
        assert_eq!(v[0], 1.0);
        assert_eq!(v.iter().sum::<f64>(), 1.0);
        assert!(one_hot(&sig, 2).is_err());

        let sig = IsoSig::parse("cMcabbgqs").unwrap();
        let v = one_hot(&sig, 9).unwrap();
        assert_eq!(v.len(), 9 * 64);
        assert_eq!(v.iter().sum::<f64>(), 9.0);
        assert_eq!(one_hot_decode(&v), "cMcabbgqs");
    }

    #[test]
    fn folds_are_stratified_and_deterministic() {
        let a: Vec<IsoSig> = (0..18)
            .map(|_| IsoSig::parse("cMcabbgqs").unwrap())
            .collect();
        let b: Vec<IsoSig> = (0..7)
            .map(|_| IsoSig::parse("cMcabbjaj").unwrap())
            .collect();
        let ds = build_binary_dataset(&a, &b, ["a".into(), "b".into()], 9, 3).unwrap();
        assert_eq!(ds.samples.len(), 25);
        let all: usize = ds.folds.iter().map(Vec::len).sum();
        assert_eq!(all, 25);
        // Per-fold class counts within one of 18/5 and 7/5.
        for fold in &ds.folds {
            let ones = fold.iter().filter(|&&i| ds.samples[i].label == 1).count();
            let zeros = fold.len() - ones;
            assert!((3..=4).contains(&zeros), "zeros {zeros}");
            assert!((1..=2).contains(&ones), "ones {ones}");
        }
        let ds2 = build_binary_dataset(&a, &b, ["a".into(), "b".into()], 9, 3).unwrap();
        assert_eq!(ds, ds2);
    }

    #[test]
    fn empty_class_is_rejected() {
        let a: Vec<IsoSig> = vec![IsoSig::parse("cMcabbgqs").unwrap()];
        assert!(matches!(
            build_binary_dataset(&a, &[], ["a".into(), "b".into()], 9, 0),
            Err(DatasetError::EmptyClass(1))
        ));
    }

    #[test]
    fn identical_classes_are_accepted() {
        let a: Vec<IsoSig> = (0..10)
            .map(|_| IsoSig::parse("cMcabbgqs").unwrap())
            .collect();
        let ds = build_binary_dataset(&a, &a, ["x".into(), "x".into()], 9, 1).unwrap();
        assert_eq!(ds.samples.len(), 20);
    }
}
