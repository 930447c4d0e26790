//! Binomial coefficients and colexicographic ranking of fixed-weight
//! bitstrings (the combinatorial number system).
//!
//! Basis states of `n` qubits with `k` excitations are indexed by the rank of
//! their bitmask among all weight-`k` masks. Colex order on the set bit
//! positions coincides with increasing numeric order of the masks, so rank 0
//! is the numerically smallest mask (all ones packed into the low bits).
//!
//! Qubit convention used crate-wide: qubit 0 is the leftmost character of a
//! printed bitstring and the most significant bit of the computational index.

use crate::error::{Error, Result};

/// C(n, k) in u64 arithmetic; 0 when k > n. Overflow-free for the sizes this
/// crate targets (n <= 64 with C(n, k) < 2^63).
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u64 = 1;
    for i in 1..=k {
        result = result * (n as u64 - (k as u64 - i as u64)) / i as u64;
    }
    result
}

/// Index of one weight-k n-bit string under colex (combinadic) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetRank {
    pub n: usize,
    pub k: usize,
    pub rank: u64,
}

/// Rank a computational-basis mask among all masks of its weight.
///
/// `mask` holds the basis index (qubit 0 = most significant of the low `n`
/// bits). Errors when the weight of `mask` differs from `k`.
pub fn rank_subset(n: usize, k: usize, mask: u64) -> Result<SubsetRank> {
    let got = mask.count_ones() as usize;
    if got != k {
        return Err(Error::InvalidWeight { got, expected: k });
    }
    Ok(SubsetRank {
        n,
        k,
        rank: rank_mask(mask),
    })
}

/// Colex rank of `mask` among masks of equal weight: sum of C(p_i, i) over
/// the ascending set bit positions p_1 < p_2 < ... (i starting at 1).
pub fn rank_mask(mask: u64) -> u64 {
    let mut rank = 0u64;
    let mut rest = mask;
    let mut i = 1usize;
    while rest != 0 {
        let pos = rest.trailing_zeros() as usize;
        rank += binomial(pos, i);
        rest &= rest - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`rank_mask`]: the weight-`k` mask with colex rank `rank`.
pub fn unrank_mask(k: usize, rank: u64) -> u64 {
    let mut mask = 0u64;
    let mut r = rank;
    let mut bound = 63usize;
    for i in (1..=k).rev() {
        // largest position p with C(p, i) <= r
        let mut p = bound;
        while binomial(p, i) > r {
            p -= 1;
        }
        r -= binomial(p, i);
        mask |= 1u64 << p;
        bound = p.saturating_sub(1);
    }
    mask
}

/// All weight-`k` masks over `n` bits in colex (= increasing numeric) order.
///
/// Uses Gosper's hack to step to the next mask of equal popcount.
pub fn weight_masks(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let count = binomial(n, k);
    let mut current = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut emitted = 0u64;
    std::iter::from_fn(move || {
        if emitted >= count {
            return None;
        }
        let out = current;
        emitted += 1;
        if emitted < count && current != 0 {
            let c = current;
            let lowest = c & c.wrapping_neg();
            let ripple = c + lowest;
            current = ripple | (((c ^ ripple) >> 2) / lowest);
        }
        Some(out)
    })
}

/// Parse a 0/1 string into a mask, qubit 0 leftmost.
pub fn parse_bitstring(s: &str) -> Result<(usize, u64)> {
    let n = s.len();
    if n == 0 || n > 64 {
        return Err(Error::Parse(format!("bitstring length {n} unsupported")));
    }
    let mut mask = 0u64;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => mask |= 1u64 << (n - 1 - i),
            _ => return Err(Error::Parse(format!("invalid bit character {ch:?}"))),
        }
    }
    Ok((n, mask))
}

/// Format a mask as a 0/1 string of length `n`, qubit 0 leftmost.
pub fn format_bitstring(mask: u64, n: usize) -> String {
    (0..n)
        .map(|q| if mask >> (n - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(28, 14), 40_116_600);
        assert_eq!(binomial(5, 6), 0);
    }

    #[test]
    fn rank_examples() {
        // n=4, k=2: smallest and largest strings of the colex order
        let (_, lo) = parse_bitstring("0011").unwrap();
        let (_, hi) = parse_bitstring("1100").unwrap();
        assert_eq!(rank_subset(4, 2, lo).unwrap().rank, 0);
        assert_eq!(rank_subset(4, 2, hi).unwrap().rank, 5);
    }

    #[test]
    fn rank_rejects_wrong_weight() {
        let (_, mask) = parse_bitstring("0111").unwrap();
        assert!(matches!(
            rank_subset(4, 2, mask),
            Err(Error::InvalidWeight { got: 3, expected: 2 })
        ));
    }

    #[test]
    fn ranks_bijective_n6_k3() {
        // brute-force oracle: enumerate every weight-3 mask of 6 bits and
        // check the ranks are a permutation of 0..20
        let mut seen = vec![false; 20];
        for mask in 0u64..64 {
            if mask.count_ones() == 3 {
                let r = rank_subset(6, 3, mask).unwrap().rank as usize;
                assert!(r < 20);
                assert!(!seen[r], "rank {r} hit twice");
                seen[r] = true;
                assert_eq!(unrank_mask(3, r as u64), mask);
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn colex_order_is_numeric_order() {
        let masks: Vec<u64> = weight_masks(6, 3).collect();
        assert_eq!(masks.len(), 20);
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
        for (r, mask) in masks.iter().enumerate() {
            assert_eq!(rank_mask(*mask), r as u64);
        }
    }

    #[test]
    fn roundtrip_various_sizes() {
        for (n, k) in [(1, 0), (1, 1), (8, 3), (10, 5), (12, 1)] {
            for r in 0..binomial(n, k) {
                let mask = unrank_mask(k, r);
                assert_eq!(mask.count_ones() as usize, k);
                assert_eq!(rank_mask(mask), r);
                assert!(mask < (1u64 << n));
            }
        }
    }

    #[test]
    fn bitstring_roundtrip() {
        let (n, mask) = parse_bitstring("0110").unwrap();
        assert_eq!(n, 4);
        assert_eq!(mask, 0b0110);
        assert_eq!(format_bitstring(mask, n), "0110");
        assert!(parse_bitstring("01a1").is_err());
    }
}
