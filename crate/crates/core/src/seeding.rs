//! Deterministic seed derivation for nested sampling loops.
//!
//! A master seed fans out to independent child seeds through the splitmix64
//! finalizer: `child = mix(mix(mix(master) ^ STREAM_GAMMA*stream) ^ index)`.
//! Every sweep, instance, shot and bipartition draws its generator from a
//! `(stream, index)` pair, so sub-sweeps replay identically no matter how
//! work is scheduled.

/// splitmix64 finalizer (Steele, Lea, Flood 2014).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for the `index`-th draw of logical stream `stream` under
/// `master`.
pub fn child_seed(master: u64, stream: u64, index: u64) -> u64 {
    let s = splitmix64(master) ^ splitmix64(stream.wrapping_mul(0xA24B_AED4_963E_E407));
    splitmix64(s ^ index)
}
