//! Signed Dicke states stored as one sign bit per weight-k basis state, and
//! bipartitions of the qubit set.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::combin::{binomial, format_bitstring, parse_bitstring, rank_mask, unrank_mask, weight_masks};
use crate::error::{Error, Result};
use crate::statevector::{StateVector, DEFAULT_QUBIT_GUARD};

/// Packed sign vector; a set bit means sign -1.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SignBits {
    words: Vec<u64>,
    len: u64,
}

impl SignBits {
    fn all_plus(len: u64) -> Self {
        let words = vec![0u64; len.div_ceil(64) as usize];
        SignBits { words, len }
    }

    #[inline]
    fn is_minus(&self, idx: u64) -> bool {
        self.words[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }

    #[inline]
    fn flip(&mut self, idx: u64) {
        self.words[(idx / 64) as usize] ^= 1u64 << (idx % 64);
    }

    fn count_minus(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// A Dicke state of `n` qubits and `k` excitations with a +/-1 sign per
/// basis state. Amplitude at the basis state of rank `r` is
/// `sign(r) / sqrt(C(n, k))`; the norm is 1 by construction.
///
/// Signs are packed one bit per basis state, so half-filled systems up to
/// n = 28 (C(28,14) = 40,116,600 signs, about 4.8 MB) stay cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDickeState {
    n: usize,
    k: usize,
    signs: SignBits,
}

impl SignedDickeState {
    /// The ordinary Dicke state: every sign +1.
    pub fn dicke(n: usize, k: usize) -> Result<Self> {
        if k > n || n == 0 || n > 64 {
            return Err(Error::Config(format!("invalid (n, k) = ({n}, {k})")));
        }
        Ok(SignedDickeState {
            n,
            k,
            signs: SignBits::all_plus(binomial(n, k)),
        })
    }

    /// Sample a random-sign Dicke state: each sign is independently -1 with
    /// probability `p`. Deterministic for fixed `(n, k, p, seed)`; the
    /// generator is ChaCha12 seeded with `seed`, one uniform draw per sign
    /// in rank order.
    pub fn sample(n: usize, k: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange { value: p });
        }
        let mut state = Self::dicke(n, k)?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        for r in 0..state.dim() {
            if rng.random::<f64>() < p {
                state.signs.flip(r);
            }
        }
        Ok(state)
    }

    /// Build from an explicit sign predicate over basis masks
    /// (`true` means sign -1).
    pub fn from_fn(n: usize, k: usize, mut minus: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut state = Self::dicke(n, k)?;
        for (r, mask) in weight_masks(n, k).enumerate() {
            if minus(mask) {
                state.signs.flip(r as u64);
            }
        }
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// C(n, k), the number of basis states carrying amplitude.
    pub fn dim(&self) -> u64 {
        binomial(self.n, self.k)
    }

    /// Common amplitude magnitude 1/sqrt(C(n, k)).
    pub fn amplitude_magnitude(&self) -> f64 {
        1.0 / (self.dim() as f64).sqrt()
    }

    /// Sign (+1.0 or -1.0) of the basis state with colex rank `r`.
    #[inline]
    pub fn sign(&self, r: u64) -> f64 {
        if self.signs.is_minus(r) {
            -1.0
        } else {
            1.0
        }
    }

    /// Sign of the basis state given by `mask` (must have weight k).
    pub fn sign_of_mask(&self, mask: u64) -> Result<f64> {
        let got = mask.count_ones() as usize;
        if got != self.k {
            return Err(Error::InvalidWeight { got, expected: self.k });
        }
        Ok(self.sign(rank_mask(mask)))
    }

    /// Flip the sign at rank `r` in place.
    pub fn flip_sign(&mut self, r: u64) {
        self.signs.flip(r);
    }

    pub fn count_minus(&self) -> u64 {
        self.signs.count_minus()
    }

    /// Dense statevector with amplitude `sign(rank(b))/sqrt(C)` on every
    /// weight-k index `b` and 0 elsewhere.
    pub fn embed_statevector(&self) -> Result<StateVector> {
        self.embed_statevector_with_guard(DEFAULT_QUBIT_GUARD)
    }

    pub fn embed_statevector_with_guard(&self, guard: usize) -> Result<StateVector> {
        if self.n > guard {
            return Err(Error::ResourceGuard {
                what: "statevector embedding",
                requested: self.n,
                limit: guard,
            });
        }
        let mut amps = vec![Complex64::ZERO; 1usize << self.n];
        let a = self.amplitude_magnitude();
        for (r, mask) in weight_masks(self.n, self.k).enumerate() {
            amps[mask as usize] = Complex64::new(self.sign(r as u64) * a, 0.0);
        }
        StateVector::from_amplitudes(self.n, amps)
    }

    /// Text dump: one line per nonzero amplitude, "bitstring sign".
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (r, mask) in weight_masks(self.n, self.k).enumerate() {
            let s = if self.signs.is_minus(r as u64) { "-1" } else { "+1" };
            out.push_str(&format_bitstring(mask, self.n));
            out.push(' ');
            out.push_str(s);
            out.push('\n');
        }
        out
    }

    /// Parse the [`dump`](Self::dump) format.
    pub fn from_dump(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut n = 0usize;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (bits, sign) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("bad dump line {line:?}")))?;
            let (ln, mask) = parse_bitstring(bits)?;
            n = ln;
            let minus = match sign.trim() {
                "+1" | "1" => false,
                "-1" => true,
                other => return Err(Error::Parse(format!("bad sign {other:?}"))),
            };
            entries.push((mask, minus));
        }
        if entries.is_empty() {
            return Err(Error::Parse("empty dump".into()));
        }
        let k = entries[0].0.count_ones() as usize;
        if entries.len() as u64 != binomial(n, k) {
            return Err(Error::Parse(format!(
                "dump has {} lines, expected C({n},{k}) = {}",
                entries.len(),
                binomial(n, k)
            )));
        }
        let mut state = Self::dicke(n, k)?;
        for (mask, minus) in entries {
            if minus {
                let r = rank_mask(mask);
                state.signs.flip(r);
            }
        }
        Ok(state)
    }
}

/// Ordered split of the qubit labels {0..n-1} into subsystems A and B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    members_a: Vec<usize>,
    members_b: Vec<usize>,
}

impl Bipartition {
    /// Build from the A-side labels; B is the complement. A must be a proper
    /// nonempty subset of {0..n-1}.
    pub fn new(n: usize, members_a: &[usize]) -> Result<Self> {
        let mut a = members_a.to_vec();
        a.sort_unstable();
        a.dedup();
        if a.len() != members_a.len() {
            return Err(Error::Config("duplicate labels in subsystem A".into()));
        }
        if a.is_empty() || a.len() >= n {
            return Err(Error::Config(format!(
                "subsystem A size {} must be in [1, {}]",
                a.len(),
                n - 1
            )));
        }
        if let Some(&bad) = a.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidQubit { label: bad, n });
        }
        let b: Vec<usize> = (0..n).filter(|q| !a.contains(q)).collect();
        Ok(Bipartition {
            n,
            members_a: a,
            members_b: b,
        })
    }

    /// A = {0..n_a-1}.
    pub fn prefix(n: usize, n_a: usize) -> Result<Self> {
        Self::new(n, &(0..n_a).collect::<Vec<_>>())
    }

    /// Contiguous half split A = {0..n/2-1}.
    pub fn contiguous_half(n: usize) -> Result<Self> {
        Self::prefix(n, n / 2)
    }

    /// Uniformly random subset of size `n_a` as subsystem A.
    pub fn random(n: usize, n_a: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut labels: Vec<usize> = (0..n).collect();
        // partial Fisher-Yates: the first n_a entries become A
        for i in 0..n_a {
            let j = rng.random_range(i..n);
            labels.swap(i, j);
        }
        Self::new(n, &labels[..n_a])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members_a(&self) -> &[usize] {
        &self.members_a
    }

    pub fn members_b(&self) -> &[usize] {
        &self.members_b
    }

    pub fn n_a(&self) -> usize {
        self.members_a.len()
    }

    pub fn n_b(&self) -> usize {
        self.members_b.len()
    }

    /// The same split with A and B exchanged.
    pub fn swapped(&self) -> Self {
        Bipartition {
            n: self.n,
            members_a: self.members_b.clone(),
            members_b: self.members_a.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::rank_subset;

    #[test]
    fn p0_and_p1_are_uniform() {
        let plus = SignedDickeState::sample(6, 3, 0.0, 7).unwrap();
        assert_eq!(plus.count_minus(), 0);
        let minus = SignedDickeState::sample(6, 3, 1.0, 7).unwrap();
        assert_eq!(minus.count_minus(), minus.dim());
    }

    #[test]
    fn p_out_of_range_rejected() {
        assert!(matches!(
            SignedDickeState::sample(4, 2, 1.5, 0),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn seed_determinism() {
        let a = SignedDickeState::sample(10, 5, 0.31, 42).unwrap();
        let b = SignedDickeState::sample(10, 5, 0.31, 42).unwrap();
        assert_eq!(a, b);
        let c = SignedDickeState::sample(10, 5, 0.31, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sign_flip_involution() {
        let mut s = SignedDickeState::sample(8, 4, 0.5, 3).unwrap();
        let orig = s.clone();
        s.flip_sign(17);
        assert_ne!(s, orig);
        s.flip_sign(17);
        assert_eq!(s, orig);
    }

    #[test]
    fn norm_is_exactly_one_in_integers() {
        // every sign squares to 1, so C(n,k) * (1/C(n,k)) = 1 exactly:
        // check the integer identity sum_r sign(r)^2 == C(n, k)
        let s = SignedDickeState::sample(8, 3, 0.4, 11).unwrap();
        let sum: u64 = (0..s.dim()).map(|r| (s.sign(r) * s.sign(r)) as u64).sum();
        assert_eq!(sum, s.dim());
    }

    #[test]
    fn minus_fraction_concentrates_at_p() {
        // n=16, k=8, p=0.5 over 10^4 instances: the -1 fraction stays within
        // 3 binomial sigma of 0.5
        let per = binomial(16, 8);
        let samples = 10_000u64;
        let mut minus = 0u64;
        for i in 0..samples {
            minus += SignedDickeState::sample(16, 8, 0.5, 1000 + i)
                .unwrap()
                .count_minus();
        }
        let total = (per * samples) as f64;
        let frac = minus as f64 / total;
        let sigma = (0.25 / total).sqrt();
        assert!(
            (frac - 0.5).abs() < 3.0 * sigma,
            "fraction {frac} vs 0.5 +- {}",
            3.0 * sigma
        );
    }

    #[test]
    fn embed_matches_six_term_example() {
        // D_4^2 is the uniform superposition of the six weight-2 strings
        let s = SignedDickeState::dicke(4, 2).unwrap();
        let v = s.embed_statevector().unwrap();
        let a = 1.0 / 6.0_f64.sqrt();
        for (idx, amp) in v.amplitudes().iter().enumerate() {
            if (idx as u64).count_ones() == 2 {
                assert!((amp.re - a).abs() < 1e-15);
                assert_eq!(amp.im, 0.0);
            } else {
                assert_eq!(*amp, num_complex::Complex64::ZERO);
            }
        }
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn embed_signed_example_flips_single_term() {
        // flipping only the rank of 0110 gives the four-qubit signed state
        let (_, m0110) = parse_bitstring("0110").unwrap();
        let r = rank_subset(4, 2, m0110).unwrap().rank;
        let mut s = SignedDickeState::dicke(4, 2).unwrap();
        s.flip_sign(r);
        let v = s.embed_statevector().unwrap();
        let a = 1.0 / 6.0_f64.sqrt();
        assert!((v.amplitude(m0110).re + a).abs() < 1e-15);
        let (_, m0011) = parse_bitstring("0011").unwrap();
        assert!((v.amplitude(m0011).re - a).abs() < 1e-15);
    }

    #[test]
    fn embed_k0_is_all_zeros_ket() {
        let s = SignedDickeState::dicke(2, 0).unwrap();
        let v = s.embed_statevector().unwrap();
        assert_eq!(v.amplitude(0), num_complex::Complex64::ONE);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn embed_guard() {
        let s = SignedDickeState::dicke(30, 2).unwrap();
        assert!(matches!(
            s.embed_statevector(),
            Err(Error::ResourceGuard { .. })
        ));
    }

    #[test]
    fn dump_roundtrip() {
        let s = SignedDickeState::sample(5, 2, 0.5, 9).unwrap();
        let text = s.dump();
        assert_eq!(text.lines().count(), 10);
        let back = SignedDickeState::from_dump(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn bipartition_construction() {
        let p = Bipartition::new(4, &[2, 0]).unwrap();
        assert_eq!(p.members_a(), &[0, 2]);
        assert_eq!(p.members_b(), &[1, 3]);
        assert_eq!(p.swapped().members_a(), &[1, 3]);
        assert!(Bipartition::new(4, &[0, 1, 2, 3]).is_err());
        assert!(Bipartition::new(4, &[]).is_err());
        assert!(Bipartition::new(4, &[5]).is_err());
    }

    #[test]
    fn random_bipartition_has_requested_size() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = Bipartition::random(10, 5, &mut rng).unwrap();
            assert_eq!(p.n_a(), 5);
            assert_eq!(p.n_b(), 5);
        }
    }
}
