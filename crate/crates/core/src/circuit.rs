//! Dense statevector simulation of the preparation protocol: deterministic
//! Dicke preparation (split & cyclic shift cascade), a random CZ sign layer,
//! the multi-controlled-Z sign oracle and projective measurement.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::combin::{binomial, format_bitstring, rank_mask};
use crate::dicke::SignedDickeState;
use crate::dissimilarity::BitstringRecord;
use crate::error::{Error, Result};
use crate::seeding::child_seed;
use crate::statevector::{StateVector, DEFAULT_QUBIT_GUARD};

/// Circuit gate set: X, CNOT, CZ, controlled and doubly-controlled Y
/// rotations, the three-angle universal rotation U0, and the basis-state
/// sign oracle MCZ.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X { target: usize },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
    Cry { control: usize, target: usize, angle: f64 },
    Ccry { control1: usize, control2: usize, target: usize, angle: f64 },
    U0 { target: usize, theta: f64, phi: f64, lambda: f64 },
    /// Flips the sign of exactly the computational basis state `pattern`.
    Mcz { pattern: u64 },
}

impl Gate {
    fn labels(&self) -> Vec<usize> {
        match *self {
            Gate::X { target } => vec![target],
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz { a, b } => vec![a, b],
            Gate::Cry { control, target, .. } => vec![control, target],
            Gate::Ccry { control1, control2, target, .. } => vec![control1, control2, target],
            Gate::U0 { target, .. } => vec![target],
            Gate::Mcz { .. } => vec![],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let labels = self.labels();
        for &q in &labels {
            if q >= n {
                return Err(Error::InvalidQubit { label: q, n });
            }
        }
        for i in 0..labels.len() {
            for j in (i + 1)..labels.len() {
                if labels[i] == labels[j] {
                    return Err(Error::InvalidQubit { label: labels[i], n });
                }
            }
        }
        if let Gate::Mcz { pattern } = self {
            if *pattern >> n != 0 {
                return Err(Error::InvalidQubit {
                    label: 64 - pattern.leading_zeros() as usize,
                    n,
                });
            }
        }
        Ok(())
    }
}

/// Circuit role tag carried for dump provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitTag {
    Prep,
    SignLayer,
}

/// Ordered list of gates over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub tag: Option<CircuitTag>,
}

impl CircuitSpec {
    pub fn new(n: usize, gates: Vec<Gate>, tag: Option<CircuitTag>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(CircuitSpec { n, gates, tag })
    }

    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n {
            return Err(Error::LengthMismatch {
                left: state.n_qubits(),
                right: self.n,
            });
        }
        for g in &self.gates {
            apply_gate(state, g)?;
        }
        Ok(())
    }

    /// Run on |0...0> under the default statevector guard.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut state = StateVector::zero_state(self.n)?;
        self.apply_to(&mut state)?;
        Ok(state)
    }

    /// Line-oriented dump, one gate per line, for fixture diffing.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&gate_line(g, self.n));
            out.push('\n');
        }
        out
    }
}

fn gate_line(gate: &Gate, n: usize) -> String {
    match *gate {
        Gate::X { target } => format!("X {target}"),
        Gate::Cnot { control, target } => format!("CNOT c={control} t={target}"),
        Gate::Cz { a, b } => format!("CZ {a} {b}"),
        Gate::Cry { control, target, angle } => {
            format!("CRY {angle:.4} c={control} t={target}")
        }
        Gate::Ccry { control1, control2, target, angle } => {
            format!("CCRY {angle:.4} c={control1} c={control2} t={target}")
        }
        Gate::U0 { target, theta, phi, lambda } => {
            format!("U0 {theta:.4} {phi:.4} {lambda:.4} t={target}")
        }
        Gate::Mcz { pattern } => format!("MCZ {}", format_bitstring(pattern, n)),
    }
}

#[inline]
fn bit_pos(n: usize, qubit: usize) -> usize {
    n - 1 - qubit
}

/// Apply a real 2x2 matrix [[m00, m01], [m10, m11]] to `target`, restricted
/// to indices where every bit of `control_mask` is set.
fn apply_real_2x2(
    state: &mut StateVector,
    target: usize,
    m: [f64; 4],
    control_mask: u64,
) {
    let n = state.n_qubits();
    let stride = 1usize << bit_pos(n, target);
    let amps = state.amplitudes_mut();
    let len = amps.len();
    let cm = control_mask as usize;
    let mut base = 0usize;
    while base < len {
        for i0 in base..base + stride {
            if i0 & cm == cm {
                let i1 = i0 + stride;
                let a0 = amps[i0];
                let a1 = amps[i1];
                amps[i0] = a0.scale(m[0]) + a1.scale(m[1]);
                amps[i1] = a0.scale(m[2]) + a1.scale(m[3]);
            }
        }
        base += stride << 1;
    }
}

/// Unitary action of one gate; the norm is preserved to machine precision.
/// U0 uses rows [cos(t/2), -e^{i l} sin(t/2)] and
/// [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)].
pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<()> {
    let n = state.n_qubits();
    gate.validate(n)?;
    match *gate {
        Gate::X { target } => {
            let stride = 1usize << bit_pos(n, target);
            let amps = state.amplitudes_mut();
            let mut base = 0usize;
            while base < amps.len() {
                for i0 in base..base + stride {
                    amps.swap(i0, i0 + stride);
                }
                base += stride << 1;
            }
        }
        Gate::Cnot { control, target } => {
            let stride = 1usize << bit_pos(n, target);
            let cmask = 1usize << bit_pos(n, control);
            let amps = state.amplitudes_mut();
            let mut base = 0usize;
            while base < amps.len() {
                for i0 in base..base + stride {
                    if i0 & cmask != 0 {
                        amps.swap(i0, i0 + stride);
                    }
                }
                base += stride << 1;
            }
        }
        Gate::Cz { a, b } => {
            let mask = (1usize << bit_pos(n, a)) | (1usize << bit_pos(n, b));
            for (idx, amp) in state.amplitudes_mut().iter_mut().enumerate() {
                if idx & mask == mask {
                    *amp = -*amp;
                }
            }
        }
        Gate::Cry { control, target, angle } => {
            let (s, c) = (angle / 2.0).sin_cos();
            apply_real_2x2(state, target, [c, -s, s, c], 1u64 << bit_pos(n, control));
        }
        Gate::Ccry { control1, control2, target, angle } => {
            let (s, c) = (angle / 2.0).sin_cos();
            let mask = (1u64 << bit_pos(n, control1)) | (1u64 << bit_pos(n, control2));
            apply_real_2x2(state, target, [c, -s, s, c], mask);
        }
        Gate::U0 { target, theta, phi, lambda } => {
            let (st, ct) = (theta / 2.0).sin_cos();
            let m = [
                Complex64::new(ct, 0.0),
                -Complex64::from_polar(st, lambda),
                Complex64::from_polar(st, phi),
                Complex64::from_polar(ct, phi + lambda),
            ];
            let stride = 1usize << bit_pos(n, target);
            let amps = state.amplitudes_mut();
            let mut base = 0usize;
            while base < amps.len() {
                for i0 in base..base + stride {
                    let i1 = i0 + stride;
                    let a0 = amps[i0];
                    let a1 = amps[i1];
                    amps[i0] = m[0] * a0 + m[1] * a1;
                    amps[i1] = m[2] * a0 + m[3] * a1;
                }
                base += stride << 1;
            }
        }
        Gate::Mcz { pattern } => {
            let amps = state.amplitudes_mut();
            amps[pattern as usize] = -amps[pattern as usize];
        }
    }
    Ok(())
}

fn scs_angle(l: usize, m: usize) -> f64 {
    // orientation chosen so the shifted branch comes out positive
    -2.0 * (l as f64 / m as f64).sqrt().acos()
}

/// Deterministic Dicke preparation: X gates seed the k excitations on the
/// last qubits, then the split-and-cyclic-shift cascade mixes them so the
/// output on |0...0> is exactly the uniform weight-k superposition.
///
/// Block SCS_m (m = n down to 2) splits a packed run of l ones on the first
/// m qubits into "keep the last qubit" with amplitude sqrt(l/m) and "shift
/// the run up" with amplitude sqrt(1 - l/m); l = 1 is a CNOT/CRY/CNOT
/// gadget on the last two qubits, each l >= 2 a CNOT/CCRY/CNOT gadget.
pub fn build_dicke_prep(n: usize, k: usize) -> CircuitSpec {
    assert!(k <= n && n >= 1);
    let mut gates = Vec::new();
    for q in n - k..n {
        gates.push(Gate::X { target: q });
    }
    if k > 0 {
        for m in (2..=n).rev() {
            let max_ones = k.min(m - 1);
            gates.push(Gate::Cnot { control: m - 1, target: m - 2 });
            gates.push(Gate::Cry {
                control: m - 2,
                target: m - 1,
                angle: scs_angle(1, m),
            });
            gates.push(Gate::Cnot { control: m - 1, target: m - 2 });
            for l in 1..max_ones {
                let u = m - l - 2;
                gates.push(Gate::Cnot { control: m - 1, target: u });
                gates.push(Gate::Ccry {
                    control1: u,
                    control2: m - l - 1,
                    target: m - 1,
                    angle: scs_angle(l + 1, m),
                });
                gates.push(Gate::Cnot { control: m - 1, target: u });
            }
        }
    }
    CircuitSpec {
        n,
        gates,
        tag: Some(CircuitTag::Prep),
    }
}

/// How the random CZ layer draws its qubit pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSampling {
    /// n^2/2 candidate slots, each drawing a uniformly random unordered
    /// pair; repeated pairs allowed.
    #[default]
    WithReplacement,
    /// Every unordered pair considered exactly once, in shuffled order.
    Distinct,
}

/// Random sign layer: iterate over n^2/2 candidate slots, draw a uniform
/// unordered qubit pair per slot and keep a CZ there with probability `q`,
/// so the gate count never exceeds n^2/2.
pub fn build_random_cz_layer(n: usize, q: f64, seed: u64) -> Result<CircuitSpec> {
    build_random_cz_layer_with(n, q, seed, PairSampling::WithReplacement)
}

pub fn build_random_cz_layer_with(
    n: usize,
    q: f64,
    seed: u64,
    sampling: PairSampling,
) -> Result<CircuitSpec> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ProbabilityOutOfRange { value: q });
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            pairs.push((a, b));
        }
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let slots = n * n / 2;
    let mut gates = Vec::new();
    match sampling {
        PairSampling::WithReplacement => {
            for _ in 0..slots {
                let (a, b) = pairs[rng.random_range(0..pairs.len())];
                if rng.random::<f64>() < q {
                    gates.push(Gate::Cz { a, b });
                }
            }
        }
        PairSampling::Distinct => {
            for i in (1..pairs.len()).rev() {
                pairs.swap(i, rng.random_range(0..=i));
            }
            for &(a, b) in pairs.iter().take(slots.min(pairs.len())) {
                if rng.random::<f64>() < q {
                    gates.push(Gate::Cz { a, b });
                }
            }
        }
    }
    Ok(CircuitSpec {
        n,
        gates,
        tag: Some(CircuitTag::SignLayer),
    })
}

/// Full preparation protocol: Dicke prep followed by the random CZ layer on
/// |0...0>. The CZ layer is diagonal, so every amplitude keeps magnitude
/// 1/sqrt(C(n,k)) on the weight-k sector and 0 elsewhere.
pub fn run_prep_protocol(n: usize, k: usize, q: f64, seed: u64) -> Result<StateVector> {
    let mut state = StateVector::zero_state(n)?;
    build_dicke_prep(n, k).apply_to(&mut state)?;
    build_random_cz_layer(n, q, seed)?.apply_to(&mut state)?;
    Ok(state)
}

/// Sign readout of a protocol output: checks that the support is a single
/// Hamming weight with uniform magnitudes and real amplitudes (within
/// `1e-9`), then packs the signs.
pub fn extract_signed_dicke(state: &StateVector) -> Result<SignedDickeState> {
    const TOL: f64 = 1e-9;
    let n = state.n_qubits();
    let amps = state.amplitudes();
    let argmax = (0..amps.len())
        .max_by(|&i, &j| {
            amps[i]
                .norm_sqr()
                .partial_cmp(&amps[j].norm_sqr())
                .unwrap()
        })
        .unwrap();
    let k = (argmax as u64).count_ones() as usize;
    let magnitude = 1.0 / (binomial(n, k) as f64).sqrt();
    let mut minus_ranks = Vec::new();
    for (idx, amp) in amps.iter().enumerate() {
        if amp.im.abs() > TOL {
            return Err(Error::Numerical(format!(
                "amplitude at index {idx} is not real"
            )));
        }
        if (idx as u64).count_ones() as usize == k {
            if (amp.re.abs() - magnitude).abs() > TOL {
                return Err(Error::Numerical(format!(
                    "amplitude magnitude {} at index {idx}, expected {magnitude}",
                    amp.re.abs()
                )));
            }
            if amp.re < 0.0 {
                minus_ranks.push(rank_mask(idx as u64));
            }
        } else if amp.norm() > TOL {
            return Err(Error::Numerical(format!(
                "unexpected support at index {idx} (weight {})",
                (idx as u64).count_ones()
            )));
        }
    }
    let mut out = SignedDickeState::dicke(n, k)?;
    for r in minus_ranks {
        out.flip_sign(r);
    }
    Ok(out)
}

/// Flip the sign of one computational basis amplitude. The exact
/// (non-circuit) sign-imposition oracle.
pub fn apply_mcz_oracle(state: &mut StateVector, pattern: u64) -> Result<()> {
    apply_gate(state, &Gate::Mcz { pattern })
}

/// Measurement basis for [`sample_measurements`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureBasis {
    /// Computational basis.
    Z,
    /// Per shot, one angle triple (theta, phi, lambda) uniform over
    /// [0, pi/2]^3 applied as U0 to every qubit before a single z readout.
    RandomPerShot,
}

/// Projective measurement record: `n_shots` outcomes appended shot-major as
/// +/-1 symbols (-1 encodes bit 0). Deterministic in `seed`; random-basis
/// shots use child seed stream 1.
pub fn sample_measurements(
    state: &StateVector,
    n_shots: usize,
    basis: MeasureBasis,
    seed: u64,
) -> BitstringRecord {
    let n = state.n_qubits();
    match basis {
        MeasureBasis::Z => {
            let mut cdf: Vec<f64> = Vec::with_capacity(state.amplitudes().len());
            let mut acc = 0.0;
            for amp in state.amplitudes() {
                acc += amp.norm_sqr();
                cdf.push(acc);
            }
            let total = acc;
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let masks: Vec<u64> = (0..n_shots)
                .map(|_| {
                    let u = rng.random::<f64>() * total;
                    cdf.partition_point(|&c| c <= u) as u64
                })
                .collect();
            BitstringRecord::from_shot_masks(n, masks)
        }
        MeasureBasis::RandomPerShot => {
            // measurement statistics are invariant under the final diagonal
            // phase of U0, so only the lambda phases and the Ry(theta) part
            // act; for real fixed-weight states lambda is a global phase
            // too and the whole shot runs in real arithmetic
            let real_fixed_weight = {
                let mut weight = None;
                let mut ok = true;
                for (idx, amp) in state.amplitudes().iter().enumerate() {
                    if amp.norm_sqr() > 0.0 {
                        if amp.im != 0.0 {
                            ok = false;
                            break;
                        }
                        let w = (idx as u64).count_ones();
                        match weight {
                            None => weight = Some(w),
                            Some(prev) if prev != w => {
                                ok = false;
                                break;
                            }
                            _ => {}
                        }
                    }
                }
                ok && weight.is_some()
            };
            let masks: Vec<u64> = (0..n_shots)
                .into_par_iter()
                .map_init(
                    || vec![Complex64::ZERO; state.amplitudes().len()],
                    |scratch, shot| {
                        let mut rng =
                            ChaCha12Rng::seed_from_u64(child_seed(seed, 1, shot as u64));
                        let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
                        let _phi = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
                        let lambda = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
                        if real_fixed_weight {
                            sample_rotated_real(state, theta, &mut rng)
                        } else {
                            sample_rotated_complex(state, theta, lambda, scratch, &mut rng)
                        }
                    },
                )
                .collect();
            BitstringRecord::from_shot_masks(n, masks)
        }
    }
}

/// Sample one z outcome of Ry(theta)^{(x)n} |state> for a real state by
/// contracting one qubit at a time and drawing its bit from the conditional
/// marginal.
fn sample_rotated_real(state: &StateVector, theta: f64, rng: &mut ChaCha12Rng) -> u64 {
    let n = state.n_qubits();
    let (s, c) = (theta / 2.0).sin_cos();
    let mut v: Vec<f64> = state.amplitudes().iter().map(|a| a.re).collect();
    let mut len = v.len();
    let mut outcome = 0u64;
    for _ in 0..n {
        let half = len / 2;
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        for j in 0..half {
            let a0 = v[j];
            let a1 = v[j + half];
            let t0 = c * a0 - s * a1;
            let t1 = s * a0 + c * a1;
            v[j] = t0;
            v[j + half] = t1;
            p0 += t0 * t0;
            p1 += t1 * t1;
        }
        let pick_one = rng.random::<f64>() * (p0 + p1) >= p0;
        outcome <<= 1;
        if pick_one {
            outcome |= 1;
            v.copy_within(half..len, 0);
        }
        len = half;
        v.truncate(len);
    }
    outcome
}

/// General-state variant: lambda phases folded into the initial copy, then
/// the same real Ry contraction over complex amplitudes.
fn sample_rotated_complex(
    state: &StateVector,
    theta: f64,
    lambda: f64,
    scratch: &mut [Complex64],
    rng: &mut ChaCha12Rng,
) -> u64 {
    let n = state.n_qubits();
    let (s, c) = (theta / 2.0).sin_cos();
    let phases: Vec<Complex64> = (0..=n)
        .map(|w| Complex64::from_polar(1.0, lambda * w as f64))
        .collect();
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        scratch[idx] = amp * phases[(idx as u64).count_ones() as usize];
    }
    let mut len = scratch.len();
    let mut outcome = 0u64;
    for _ in 0..n {
        let half = len / 2;
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        for j in 0..half {
            let a0 = scratch[j];
            let a1 = scratch[j + half];
            let t0 = a0.scale(c) - a1.scale(s);
            let t1 = a0.scale(s) + a1.scale(c);
            scratch[j] = t0;
            scratch[j + half] = t1;
            p0 += t0.norm_sqr();
            p1 += t1.norm_sqr();
        }
        let pick_one = rng.random::<f64>() * (p0 + p1) >= p0;
        outcome <<= 1;
        if pick_one {
            outcome |= 1;
            scratch.copy_within(half..len, 0);
        }
        len = half;
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::parse_bitstring;
    use crate::dicke::SignedDickeState;

    fn amp(state: &StateVector, bits: &str) -> Complex64 {
        let (_, mask) = parse_bitstring(bits).unwrap();
        state.amplitude(mask)
    }

    #[test]
    fn x_flips_and_cz_signs() {
        let mut s = StateVector::zero_state(1).unwrap();
        apply_gate(&mut s, &Gate::X { target: 0 }).unwrap();
        assert_eq!(s.amplitude(1), Complex64::ONE);

        let mut t = StateVector::zero_state(2).unwrap();
        apply_gate(&mut t, &Gate::X { target: 0 }).unwrap();
        apply_gate(&mut t, &Gate::X { target: 1 }).unwrap();
        apply_gate(&mut t, &Gate::Cz { a: 0, b: 1 }).unwrap();
        assert_eq!(amp(&t, "11"), -Complex64::ONE);
    }

    #[test]
    fn u0_rotation_definition() {
        let mut s = StateVector::zero_state(1).unwrap();
        let theta = std::f64::consts::FRAC_PI_2;
        apply_gate(&mut s, &Gate::U0 { target: 0, theta, phi: 0.0, lambda: 0.0 }).unwrap();
        let c = (theta / 2.0).cos();
        let d = (theta / 2.0).sin();
        assert!((s.amplitude(0).re - c).abs() < 1e-15);
        assert!((s.amplitude(1).re - d).abs() < 1e-15);
    }

    #[test]
    fn gate_validation() {
        let s = StateVector::zero_state(2).unwrap();
        let mut s = s;
        assert!(apply_gate(&mut s, &Gate::X { target: 2 }).is_err());
        assert!(apply_gate(&mut s, &Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!(apply_gate(&mut s, &Gate::Mcz { pattern: 7 }).is_err());
    }

    #[test]
    fn prep_single_qubit_is_one_x() {
        let c = build_dicke_prep(1, 1);
        assert_eq!(c.gates, vec![Gate::X { target: 0 }]);
        let out = c.simulate().unwrap();
        assert_eq!(out.amplitude(1), Complex64::ONE);
    }

    #[test]
    fn prep_four_qubit_matches_uniform_state() {
        let out = build_dicke_prep(4, 2).simulate().unwrap();
        let a = 1.0 / 6.0_f64.sqrt();
        for bits in ["0011", "0101", "0110", "1001", "1010", "1100"] {
            let got = amp(&out, bits);
            assert!((got.re - a).abs() < 1e-10, "{bits}: {got}");
            assert!(got.im.abs() < 1e-14);
        }
        for (idx, v) in out.amplitudes().iter().enumerate() {
            if (idx as u64).count_ones() != 2 {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn prep_matches_embedding_small_sizes() {
        for n in 1..=8 {
            for k in 0..=n {
                let circuit = build_dicke_prep(n, k).simulate().unwrap();
                let direct = SignedDickeState::dicke(n, k)
                    .unwrap()
                    .embed_statevector()
                    .unwrap();
                let f = circuit.fidelity(&direct).unwrap();
                assert!(f >= 1.0 - 1e-10, "n={n} k={k}: fidelity {f}");
            }
        }
    }

    #[test]
    fn cz_layer_counts() {
        let empty = build_random_cz_layer(4, 0.0, 3).unwrap();
        assert!(empty.gates.is_empty());
        let full = build_random_cz_layer(4, 1.0, 3).unwrap();
        assert_eq!(full.gates.len(), 8); // n^2/2 slots
        assert!(build_random_cz_layer(4, 1.2, 0).is_err());

        // mean count over seeds concentrates at q * n^2 / 2
        let trials = 200u64;
        let mut total = 0usize;
        for seed in 0..trials {
            total += build_random_cz_layer(16, 0.5, seed).unwrap().gates.len();
        }
        let mean = total as f64 / trials as f64;
        let sigma = (128.0 * 0.25 / trials as f64).sqrt();
        assert!((mean - 64.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn cz_layer_distinct_mode_has_no_repeats() {
        let layer =
            build_random_cz_layer_with(6, 1.0, 9, PairSampling::Distinct).unwrap();
        assert_eq!(layer.gates.len(), 15); // C(6,2) pairs, each once
        let mut seen = std::collections::HashSet::new();
        for g in &layer.gates {
            if let Gate::Cz { a, b } = g {
                assert!(seen.insert((*a, *b)));
            }
        }
    }

    #[test]
    fn protocol_q0_is_plain_dicke() {
        let out = run_prep_protocol(6, 3, 0.0, 11).unwrap();
        let direct = SignedDickeState::dicke(6, 3)
            .unwrap()
            .embed_statevector()
            .unwrap();
        assert!(out.fidelity(&direct).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn protocol_amplitudes_stay_uniform() {
        let out = run_prep_protocol(8, 4, 0.5, 5).unwrap();
        let a = 1.0 / (binomial(8, 4) as f64).sqrt();
        for (idx, v) in out.amplitudes().iter().enumerate() {
            if (idx as u64).count_ones() == 4 {
                assert!((v.norm() - a).abs() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
        let extracted = extract_signed_dicke(&out).unwrap();
        assert_eq!(extracted.n(), 8);
        assert_eq!(extracted.k(), 4);
    }

    #[test]
    fn protocol_single_cz_reproduces_signed_example() {
        // prep then CZ(1, 2): exactly the four-qubit state with the 0110
        // amplitude negated
        let mut state = build_dicke_prep(4, 2).simulate().unwrap();
        apply_gate(&mut state, &Gate::Cz { a: 1, b: 2 }).unwrap();
        let a = 1.0 / 6.0_f64.sqrt();
        assert!((amp(&state, "0110").re + a).abs() < 1e-10);
        for bits in ["0011", "0101", "1001", "1010", "1100"] {
            assert!((amp(&state, bits).re - a).abs() < 1e-10);
        }
    }

    #[test]
    fn mcz_oracle_flip_twice_is_identity() {
        let mut state = build_dicke_prep(4, 2).simulate().unwrap();
        let orig = state.clone();
        let (_, m) = parse_bitstring("0110").unwrap();
        apply_mcz_oracle(&mut state, m).unwrap();
        let a = 1.0 / 6.0_f64.sqrt();
        assert!((state.amplitude(m).re + a).abs() < 1e-12);
        apply_mcz_oracle(&mut state, m).unwrap();
        assert_eq!(state, orig);
        // flipping an unpopulated string changes nothing
        apply_mcz_oracle(&mut state, 0).unwrap();
        assert_eq!(state, orig);
    }

    #[test]
    fn unitarity_over_random_gates() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let n = 8;
        let mut state = SignedDickeState::sample(n, 4, 0.5, 1)
            .unwrap()
            .embed_statevector()
            .unwrap();
        for _ in 0..10_000 {
            let q1 = rng.random_range(0..n);
            let mut q2 = rng.random_range(0..n);
            while q2 == q1 {
                q2 = rng.random_range(0..n);
            }
            let angle = rng.random::<f64>() * std::f64::consts::TAU;
            let gate = match rng.random_range(0..6) {
                0 => Gate::X { target: q1 },
                1 => Gate::Cnot { control: q1, target: q2 },
                2 => Gate::Cz { a: q1, b: q2 },
                3 => Gate::Cry { control: q1, target: q2, angle },
                4 => Gate::U0 {
                    target: q1,
                    theta: angle,
                    phi: rng.random::<f64>(),
                    lambda: rng.random::<f64>(),
                },
                _ => Gate::Mcz { pattern: rng.random_range(0..(1u64 << n)) },
            };
            apply_gate(&mut state, &gate).unwrap();
            assert!((state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn layer_and_record_determinism() {
        let a = build_random_cz_layer(10, 0.5, 77).unwrap();
        let b = build_random_cz_layer(10, 0.5, 77).unwrap();
        assert_eq!(a, b);

        let state = run_prep_protocol(6, 3, 0.5, 4).unwrap();
        let r1 = sample_measurements(&state, 64, MeasureBasis::RandomPerShot, 9);
        let r2 = sample_measurements(&state, 64, MeasureBasis::RandomPerShot, 9);
        assert_eq!(r1, r2);
        let r3 = sample_measurements(&state, 64, MeasureBasis::Z, 9);
        let r4 = sample_measurements(&state, 64, MeasureBasis::Z, 9);
        assert_eq!(r3, r4);
    }

    #[test]
    fn zero_ket_measures_all_minus_one() {
        let state = StateVector::zero_state(2).unwrap();
        let rec = sample_measurements(&state, 16, MeasureBasis::Z, 1);
        assert!(rec.symbols().iter().all(|&s| s == -1.0));
    }

    #[test]
    fn dicke_z_statistics() {
        // every outcome has weight 2 and each of the 6 strings shows up at
        // its uniform frequency within 3 multinomial sigma
        let state = build_dicke_prep(4, 2).simulate().unwrap();
        let shots = 8192;
        let rec = sample_measurements(&state, shots, MeasureBasis::Z, 12);
        let mut counts = std::collections::HashMap::new();
        for shot in rec.symbols().chunks(4) {
            let weight = shot.iter().filter(|&&s| s > 0.0).count();
            assert_eq!(weight, 2);
            let mask: u64 = shot
                .iter()
                .enumerate()
                .map(|(q, &s)| if s > 0.0 { 1u64 << (3 - q) } else { 0 })
                .sum();
            *counts.entry(mask).or_insert(0usize) += 1;
        }
        let p = 1.0 / 6.0;
        let sigma = (p * (1.0 - p) / shots as f64).sqrt();
        for (_, c) in counts {
            let f = c as f64 / shots as f64;
            assert!((f - p).abs() < 3.0 * sigma, "frequency {f}");
        }
    }

    #[test]
    fn sign_structure_invisible_in_z_basis() {
        // the plain and signed four-qubit states give identical z records
        // under the same seed
        let plus = build_dicke_prep(4, 2).simulate().unwrap();
        let mut signed = plus.clone();
        let (_, m) = parse_bitstring("0110").unwrap();
        apply_mcz_oracle(&mut signed, m).unwrap();
        let r_plus = sample_measurements(&plus, 512, MeasureBasis::Z, 21);
        let r_signed = sample_measurements(&signed, 512, MeasureBasis::Z, 21);
        assert_eq!(r_plus, r_signed);
    }

    #[test]
    fn random_basis_complex_path_matches_real_path_statistics() {
        // multiply by a global i to force the complex path; per-qubit means
        // must agree with the real path within sampling error
        let state = build_dicke_prep(4, 2).simulate().unwrap();
        let rotated = StateVector::from_amplitudes(
            4,
            state.amplitudes().iter().map(|a| a * Complex64::I).collect(),
        )
        .unwrap();
        let shots = 20_000;
        let r_real = sample_measurements(&state, shots, MeasureBasis::RandomPerShot, 3);
        let r_cplx = sample_measurements(&rotated, shots, MeasureBasis::RandomPerShot, 3);
        let mean = |r: &BitstringRecord| {
            r.symbols().iter().sum::<f64>() / r.symbols().len() as f64
        };
        let m1 = mean(&r_real);
        let m2 = mean(&r_cplx);
        assert!((m1 - m2).abs() < 0.02, "means {m1} vs {m2}");
    }

    #[test]
    fn circuit_dump_format() {
        let spec = CircuitSpec::new(
            4,
            vec![
                Gate::Cz { a: 1, b: 2 },
                Gate::Cry { control: 3, target: 2, angle: 0.7297 },
                Gate::Mcz { pattern: 0b0110 },
            ],
            None,
        )
        .unwrap();
        assert_eq!(spec.dump(), "CZ 1 2\nCRY 0.7297 c=3 t=2\nMCZ 0110\n");
    }
}
