//! Multi-scale structural complexity (dissimilarity) of measurement records.
//!
//! A record of N shots on n qubits is flattened into one +/-1 sequence of
//! length L = n * N. Coarse-graining step m replaces every non-overlapping
//! window of Lambda^m symbols by its mean; the partial dissimilarity D_m is
//! the normalized absolute change of the mean squared symbol between
//! consecutive scales, and the total is the sum over all steps down to the
//! global mean.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::combin::{binomial, unrank_mask, weight_masks};
use crate::error::{Error, Result};

/// Flattened shot-major record of +/-1 encoded measurement outcomes
/// (-1 encodes bit 0).
#[derive(Debug, Clone, PartialEq)]
pub struct BitstringRecord {
    symbols: Vec<f64>,
    n: usize,
    n_shots: usize,
}

impl BitstringRecord {
    /// Wrap raw symbols; length must equal `n * n_shots` and every entry
    /// must be +1 or -1.
    pub fn from_symbols(symbols: Vec<f64>, n: usize, n_shots: usize) -> Result<Self> {
        if symbols.len() != n * n_shots || symbols.is_empty() {
            return Err(Error::LengthMismatch {
                left: symbols.len(),
                right: n * n_shots,
            });
        }
        if let Some(bad) = symbols.iter().find(|&&s| s != 1.0 && s != -1.0) {
            return Err(Error::Parse(format!("record symbol {bad} is not +/-1")));
        }
        Ok(BitstringRecord { symbols, n, n_shots })
    }

    /// Build from per-shot basis masks; bit 1 maps to +1, bit 0 to -1,
    /// qubit 0 first within each shot.
    pub fn from_shot_masks(n: usize, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut symbols = Vec::new();
        let mut n_shots = 0;
        for mask in masks {
            n_shots += 1;
            for q in 0..n {
                symbols.push(if mask >> (n - 1 - q) & 1 == 1 { 1.0 } else { -1.0 });
            }
        }
        BitstringRecord { symbols, n, n_shots }
    }

    pub fn symbols(&self) -> &[f64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_shots(&self) -> usize {
        self.n_shots
    }

    /// One shot per line as a 0/1 string.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.len() + self.n_shots);
        for shot in self.symbols.chunks(self.n) {
            for &s in shot {
                out.push(if s > 0.0 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Parse one shot per line, either a plain 0/1 string or whitespace- or
    /// comma-separated +/-1 tokens; 0 maps to -1 on ingest.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut n = 0usize;
        let mut n_shots = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let shot: Vec<f64> = if line.contains([' ', ',', '\t']) {
                line.split([' ', ',', '\t'])
                    .filter(|t| !t.is_empty())
                    .map(|t| match t {
                        "1" | "+1" => Ok(1.0),
                        "0" | "-1" => Ok(-1.0),
                        other => Err(Error::Parse(format!("bad record token {other:?}"))),
                    })
                    .collect::<Result<_>>()?
            } else {
                line.chars()
                    .map(|c| match c {
                        '1' => Ok(1.0),
                        '0' => Ok(-1.0),
                        other => Err(Error::Parse(format!("bad record character {other:?}"))),
                    })
                    .collect::<Result<_>>()?
            };
            if n == 0 {
                n = shot.len();
            } else if shot.len() != n {
                return Err(Error::LengthMismatch {
                    left: shot.len(),
                    right: n,
                });
            }
            symbols.extend(shot);
            n_shots += 1;
        }
        if symbols.is_empty() {
            return Err(Error::Parse("empty record".into()));
        }
        Ok(BitstringRecord { symbols, n, n_shots })
    }
}

/// Partial dissimilarities D_m for m = 1..M and their sum.
#[derive(Debug, Clone)]
pub struct DissimilarityProfile {
    /// Window base.
    pub lambda: usize,
    /// D_m indexed by m-1.
    pub partials: Vec<f64>,
    /// Sum of all partials.
    pub total: f64,
    /// Number of renormalization steps M (the last step is the global mean).
    pub steps: usize,
}

/// Replace every non-overlapping window of `lambda^m` symbols by its mean;
/// the output keeps the input length. The length must divide evenly (callers
/// truncate up front, see [`total_dissimilarity`]).
pub fn coarse_grain(b: &[f64], m: u32, lambda: usize) -> Result<Vec<f64>> {
    let window = lambda.pow(m);
    if window == 0 || b.len() % window != 0 {
        return Err(Error::LengthMismatch {
            left: b.len(),
            right: window,
        });
    }
    let mut out = Vec::with_capacity(b.len());
    for chunk in b.chunks(window) {
        let mean = chunk.iter().sum::<f64>() / window as f64;
        out.extend(std::iter::repeat_n(mean, window));
    }
    Ok(out)
}

/// D_m between consecutive scales: (1/2L) |sum_i ((b_i^{m+1})^2 - (b_i^m)^2)|.
pub fn partial_dissimilarity(b_m: &[f64], b_m1: &[f64]) -> Result<f64> {
    if b_m.len() != b_m1.len() || b_m.is_empty() {
        return Err(Error::LengthMismatch {
            left: b_m.len(),
            right: b_m1.len(),
        });
    }
    let sum: f64 = b_m1
        .iter()
        .zip(b_m)
        .map(|(next, cur)| next * next - cur * cur)
        .sum();
    Ok(sum.abs() / (2.0 * b_m.len() as f64))
}

/// Full profile of a record: truncate to the largest lambda-power prefix,
/// then run m = 1..M with M = log_lambda(L'), so the final layer is the
/// global mean.
pub fn total_dissimilarity(record: &BitstringRecord, lambda: usize) -> DissimilarityProfile {
    profile_of_symbols(record.symbols(), lambda)
}

pub(crate) fn profile_of_symbols(symbols: &[f64], lambda: usize) -> DissimilarityProfile {
    assert!(lambda >= 2, "window base must be at least 2");
    let mut steps = 0u32;
    let mut keep = 1usize;
    while keep * lambda <= symbols.len() {
        keep *= lambda;
        steps += 1;
    }
    // D_m compares b^m against b^{m+1}; the raw +/-1 layer b^0 never enters
    // (its mean square is identically 1). At m = M the layer is already the
    // global mean, so D_M = 0 by construction.
    let mut current = coarse_grain(&symbols[..keep], 1, lambda)
        .expect("prefix length is a lambda power");
    let mut partials = Vec::with_capacity(steps as usize);
    for m in 1..=steps {
        let next = if m < steps {
            coarse_grain(&current, m + 1, lambda).expect("prefix length is a lambda power")
        } else {
            current.clone()
        };
        partials.push(partial_dissimilarity(&current, &next).expect("equal lengths"));
        current = next;
    }
    let total = partials.iter().sum();
    DissimilarityProfile {
        lambda,
        partials,
        total,
        steps: steps as usize,
    }
}

/// Haar-record reference law for the partial dissimilarity at step m:
/// (1/2)(1 - lambda^-1) lambda^-m. Sums to 1/(2 lambda) over all m >= 1
/// (0.25 at lambda = 2).
pub fn haar_partial_law(m: u32, lambda: usize) -> f64 {
    assert!(m >= 1);
    let l = lambda as f64;
    0.5 * (1.0 - 1.0 / l) * l.powi(-(m as i32))
}

/// Dissimilarity of a z-basis record of `n_samples` weight-k bitstrings
/// drawn uniformly (all weight-k outcomes are equally likely for any signed
/// Dicke state). Deterministic in `seed`.
pub fn z_basis_dissimilarity(n: usize, k: usize, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::Config("n_samples must be >= 1".into()));
    }
    let dim = binomial(n, k);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let record = BitstringRecord::from_shot_masks(
        n,
        (0..n_samples).map(|_| unrank_mask(k, rng.random_range(0..dim))),
    );
    Ok(total_dissimilarity(&record, 2).total)
}

/// Exact variant: the record enumerates every weight-k bitstring once, in
/// colex order.
pub fn z_basis_dissimilarity_exact(n: usize, k: usize) -> f64 {
    let record = BitstringRecord::from_shot_masks(n, weight_masks(n, k));
    total_dissimilarity(&record, 2).total
}
