//! Exact bipartite entanglement of signed Dicke states.
//!
//! With the total excitation number fixed at k, the bipartite amplitude
//! matrix is block diagonal in the subsystem-A Hamming weight w: the A side
//! contributes w excitations and the B side k-w. Each block is a small dense
//! real matrix C(n_A, w) x C(n_B, k-w); the squared Schmidt coefficients are
//! the union of the Gram-matrix eigenvalues of all blocks.

use rayon::prelude::*;

use crate::combin::{binomial, rank_mask, weight_masks};
use crate::dicke::{Bipartition, SignedDickeState};
use crate::error::{Error, Result};
use crate::jacobi::symmetric_eigenvalues;

const LN_2: f64 = std::f64::consts::LN_2;

/// One fixed-A-weight block of the bipartite amplitude matrix.
#[derive(Debug, Clone)]
pub struct SchmidtBlock {
    /// Hamming weight carried by subsystem A in this block.
    pub weight_a: usize,
    pub rows: usize,
    pub cols: usize,
    /// Row-major amplitudes, rows indexed by A-substring rank, columns by
    /// B-substring rank.
    pub data: Vec<f64>,
}

/// Per-weight blocks of the bipartite amplitude matrix of a signed Dicke
/// state. Squared entries over all blocks sum to 1.
#[derive(Debug, Clone)]
pub struct BlockedSchmidtMatrix {
    pub n_a: usize,
    pub n_b: usize,
    pub k: usize,
    pub blocks: Vec<SchmidtBlock>,
}

/// Schmidt spectrum and base-2 von Neumann entropy.
#[derive(Debug, Clone)]
pub struct EntropyResult {
    /// -sum lambda^2 log2 lambda^2 over the spectrum.
    pub entropy_bits: f64,
    /// Eigenvalues of the reduced density matrix (squared Schmidt
    /// coefficients), descending.
    pub schmidt_spectrum: Vec<f64>,
    /// Number of spectrum entries above 1e-12.
    pub rank: usize,
}

/// Scatter an A- or B-substring index onto the full basis index.
///
/// Substring bit conventions mirror the global one: sub-qubit i is
/// `members[i]` and occupies bit (len-1-i) of the sub-index.
#[inline]
fn scatter(sub: u64, members: &[usize], n: usize) -> u64 {
    let len = members.len();
    let mut out = 0u64;
    let mut rest = sub;
    while rest != 0 {
        let p = rest.trailing_zeros() as usize;
        out |= 1u64 << (n - 1 - members[len - 1 - p]);
        rest &= rest - 1;
    }
    out
}

/// Layout of one block: the precomputed full-basis rank for every
/// (row, col) entry, so sign lookups per state are table-driven.
struct BlockLayout {
    weight_a: usize,
    rows: usize,
    cols: usize,
    full_ranks: Vec<u64>,
}

fn block_layouts(n: usize, k: usize, part: &Bipartition) -> Vec<BlockLayout> {
    let n_a = part.n_a();
    let n_b = part.n_b();
    let w_min = k.saturating_sub(n_b);
    let w_max = k.min(n_a);
    let mut layouts = Vec::with_capacity(w_max - w_min + 1);
    for w in w_min..=w_max {
        let rows = binomial(n_a, w) as usize;
        let cols = binomial(n_b, k - w) as usize;
        let a_masks: Vec<u64> = weight_masks(n_a, w)
            .map(|sub| scatter(sub, part.members_a(), n))
            .collect();
        let b_masks: Vec<u64> = weight_masks(n_b, k - w)
            .map(|sub| scatter(sub, part.members_b(), n))
            .collect();
        let mut full_ranks = Vec::with_capacity(rows * cols);
        for am in &a_masks {
            for bm in &b_masks {
                full_ranks.push(rank_mask(am | bm));
            }
        }
        layouts.push(BlockLayout {
            weight_a: w,
            rows,
            cols,
            full_ranks,
        });
    }
    layouts
}

/// Arrange the state's amplitudes into per-weight blocks for the given
/// bipartition.
pub fn build_blocked_matrix(
    state: &SignedDickeState,
    part: &Bipartition,
) -> Result<BlockedSchmidtMatrix> {
    if part.n() != state.n() {
        return Err(Error::LengthMismatch {
            left: part.n(),
            right: state.n(),
        });
    }
    let amp = state.amplitude_magnitude();
    let blocks = block_layouts(state.n(), state.k(), part)
        .into_iter()
        .map(|layout| SchmidtBlock {
            weight_a: layout.weight_a,
            rows: layout.rows,
            cols: layout.cols,
            data: layout
                .full_ranks
                .iter()
                .map(|&r| state.sign(r) * amp)
                .collect(),
        })
        .collect();
    Ok(BlockedSchmidtMatrix {
        n_a: part.n_a(),
        n_b: part.n_b(),
        k: state.k(),
        blocks,
    })
}

/// Gram matrix of the smaller side of a block: M M^T when rows <= cols,
/// otherwise M^T M.
fn block_gram(block: &SchmidtBlock) -> (Vec<f64>, usize) {
    let (rows, cols) = (block.rows, block.cols);
    let (m, data): (usize, Vec<f64>) = if rows <= cols {
        (rows, block.data.clone())
    } else {
        // transpose so dot products run over contiguous rows
        let mut t = vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                t[c * rows + r] = block.data[r * cols + c];
            }
        }
        (cols, t)
    };
    let inner = block.data.len() / m;
    let mut gram = vec![0.0; m * m];
    for i in 0..m {
        let ri = &data[i * inner..(i + 1) * inner];
        for j in 0..=i {
            let rj = &data[j * inner..(j + 1) * inner];
            let dot: f64 = ri.iter().zip(rj).map(|(x, y)| x * y).sum();
            gram[i * m + j] = dot;
            gram[j * m + i] = dot;
        }
    }
    (gram, m)
}

fn spectrum_of_blocks(blocks: &[SchmidtBlock]) -> Result<Vec<f64>> {
    let mut spectrum = Vec::new();
    for block in blocks {
        let (mut gram, m) = block_gram(block);
        let evs = symmetric_eigenvalues(&mut gram, m, 1e-12, 100).map_err(|_| {
            Error::Eigensolver {
                block_weight: block.weight_a,
            }
        })?;
        for ev in evs {
            // Gram matrices are PSD; tiny negative roundoff is clamped
            if ev >= -1e-12 {
                spectrum.push(ev.max(0.0));
            } else {
                spectrum.push(ev);
            }
        }
    }
    spectrum.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(spectrum)
}

fn entropy_of_spectrum(spectrum: &[f64]) -> f64 {
    let mut s = 0.0;
    for &p in spectrum {
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    s.max(0.0)
}

/// Schmidt spectrum and entropy from the blocked matrix. Eigenvalues come
/// from the Gram matrix of each block's smaller side.
pub fn von_neumann_entropy(m: &BlockedSchmidtMatrix) -> Result<EntropyResult> {
    let spectrum = spectrum_of_blocks(&m.blocks)?;
    let entropy_bits = entropy_of_spectrum(&spectrum);
    let rank = spectrum.iter().filter(|&&p| p > 1e-12).count();
    Ok(EntropyResult {
        entropy_bits,
        schmidt_spectrum: spectrum,
        rank,
    })
}

/// Convenience: build the blocked matrix and take its entropy.
pub fn entanglement_entropy(state: &SignedDickeState, part: &Bipartition) -> Result<EntropyResult> {
    von_neumann_entropy(&build_blocked_matrix(state, part)?)
}

/// Average entanglement entropy of a Haar-random pure state for subsystem
/// dimensions 2^n_a x 2^n_b (in bits):
/// (1/ln 2) * sum_{k=d_B+1}^{d_A d_B} 1/k - (d_A - 1)/(2 d_B ln 2),
/// with n_a and n_b swapped so that n_a <= n_b. The harmonic tail is summed
/// with Kahan compensation.
pub fn page_entropy(n_a: usize, n_b: usize) -> f64 {
    let (n_a, n_b) = if n_a <= n_b { (n_a, n_b) } else { (n_b, n_a) };
    if n_a == 0 {
        return 0.0;
    }
    let d_a = 1u64 << n_a;
    let d_b = 1u64 << n_b;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in (d_b + 1)..=(d_a * d_b) {
        let term = 1.0 / k as f64;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum / LN_2 - (d_a - 1) as f64 / (2.0 * d_b as f64 * LN_2)
}

/// Fitted logarithmic law a*log2(n/2) + b for the half-filled Dicke state
/// entropy at equal bipartition, with the reference coefficients
/// a = 0.435, b = 0.787.
pub fn dicke_log_fit(n: usize) -> f64 {
    dicke_log_fit_with(n, 0.435, 0.787)
}

pub fn dicke_log_fit_with(n: usize, a: f64, b: f64) -> f64 {
    assert!(n >= 2 && n % 2 == 0, "log fit defined for even n >= 2");
    a * (n as f64 / 2.0).log2() + b
}

/// Exhaustive scan over every sign pattern of a (n, k) Dicke state.
#[derive(Debug, Clone)]
pub struct SignEnumeration {
    /// Largest entropy found.
    pub max_entropy: f64,
    /// Sign pattern attaining it (bit r set = sign -1 at rank r); the
    /// smallest such pattern when the maximum is degenerate.
    pub max_pattern: u64,
    /// Counts per entropy bin over [0, min(n_a, n_b)].
    pub histogram: Vec<u64>,
    pub bin_width: f64,
    /// Total number of patterns counted (2^C(n,k); global-sign pairs are
    /// scanned once and counted twice).
    pub total_states: u64,
}

/// Entropy of every one of the 2^C(n,k) sign patterns for the given
/// bipartition, reported as a histogram plus the maximum. Guarded at
/// C(n, k) <= 20. Patterns differing by a global sign share a spectrum and
/// are deduplicated during the scan.
pub fn enumerate_sign_entropies(
    n: usize,
    k: usize,
    part: &Bipartition,
    bins: usize,
) -> Result<SignEnumeration> {
    let dim = binomial(n, k);
    if dim > 20 {
        return Err(Error::ResourceGuard {
            what: "sign-pattern enumeration",
            requested: dim as usize,
            limit: 20,
        });
    }
    if part.n() != n {
        return Err(Error::LengthMismatch {
            left: part.n(),
            right: n,
        });
    }
    let bins = bins.max(1);
    let layouts = block_layouts(n, k, part);
    let amp = 1.0 / (dim as f64).sqrt();
    let e_max = part.n_a().min(part.n_b()) as f64;
    let bin_width = e_max / bins as f64;

    let half = 1u64 << (dim - 1);
    let chunk = 1u64 << 12;
    let n_chunks = half.div_ceil(chunk);

    struct Partial {
        histogram: Vec<u64>,
        max_entropy: f64,
        max_pattern: u64,
    }

    let reduced = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let end = (start + chunk).min(half);
            let mut hist = vec![0u64; bins];
            let mut best = (-1.0f64, 0u64);
            let mut gram = Vec::new();
            for p2 in start..end {
                // fix rank 0 to +: pattern bit 0 stays clear
                let pattern = p2 << 1;
                let mut spectrum = Vec::with_capacity(8);
                for layout in &layouts {
                    let m = layout.rows.min(layout.cols);
                    let inner = layout.rows.max(layout.cols);
                    gram.clear();
                    gram.resize(m * m, 0.0);
                    // Gram of the smaller side, straight from signs
                    for i in 0..m {
                        for j in 0..=i {
                            let mut dot = 0.0;
                            for c in 0..inner {
                                let (ri, rj) = if layout.rows <= layout.cols {
                                    (
                                        layout.full_ranks[i * layout.cols + c],
                                        layout.full_ranks[j * layout.cols + c],
                                    )
                                } else {
                                    (
                                        layout.full_ranks[c * layout.cols + i],
                                        layout.full_ranks[c * layout.cols + j],
                                    )
                                };
                                let si = if pattern >> ri & 1 == 1 { -1.0 } else { 1.0 };
                                let sj = if pattern >> rj & 1 == 1 { -1.0 } else { 1.0 };
                                dot += si * sj;
                            }
                            dot *= amp * amp;
                            gram[i * m + j] = dot;
                            gram[j * m + i] = dot;
                        }
                    }
                    if let Ok(evs) = symmetric_eigenvalues(&mut gram, m, 1e-12, 100) {
                        spectrum.extend(evs.into_iter().map(|e| e.max(0.0)));
                    }
                }
                let entropy = entropy_of_spectrum(&spectrum);
                let bin = ((entropy / bin_width) as usize).min(bins - 1);
                hist[bin] += 2; // pattern and its global-sign complement
                if entropy > best.0 || (entropy == best.0 && pattern < best.1) {
                    best = (entropy, pattern);
                }
            }
            Partial {
                histogram: hist,
                max_entropy: best.0,
                max_pattern: best.1,
            }
        })
        .reduce(
            || Partial {
                histogram: vec![0u64; bins],
                max_entropy: -1.0,
                max_pattern: 0,
            },
            |mut a, b| {
                for (x, y) in a.histogram.iter_mut().zip(&b.histogram) {
                    *x += y;
                }
                if b.max_entropy > a.max_entropy
                    || (b.max_entropy == a.max_entropy && b.max_pattern < a.max_pattern)
                {
                    a.max_entropy = b.max_entropy;
                    a.max_pattern = b.max_pattern;
                }
                a
            },
        );

    Ok(SignEnumeration {
        max_entropy: reduced.max_entropy,
        max_pattern: reduced.max_pattern,
        histogram: reduced.histogram,
        bin_width,
        total_states: 1u64 << dim,
    })
}
