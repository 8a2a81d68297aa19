//! Dense state-vector simulation.
//!
//! Amplitudes are stored little-endian: qubit 0 is the least significant bit
//! of the basis index. Operators on "the low `n` qubits" act on every
//! contiguous block of `2^n` amplitudes independently, which is how oracles
//! and the diffusion operator extend to larger registers.

mod oracle;

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::MAX_QUBITS;

pub use oracle::OracleSpec;

/// Norm deviation beyond which [`StateVector::measure`] refuses to sample.
pub const MEASURE_NORM_TOLERANCE: f64 = 1e-6;

/// Registers at least this large split element-wise maps across threads.
const PAR_THRESHOLD: usize = 1 << 14;
/// Fixed chunk size for reductions, so sums come out bit-identical
/// regardless of thread scheduling.
const REDUCE_CHUNK: usize = 1 << 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An operator acting on the low `block_qubits()` qubits of a register.
///
/// `apply_block` must not touch any query counter; callers report how many
/// times the operator was applied through `record_applications` so that a
/// controlled power counts as `2^j` queries no matter how many blocks it
/// touched.
pub trait BlockOperator: Sync {
    fn block_qubits(&self) -> u32;
    fn apply_block(&self, block: &mut [Complex64]);
    fn record_applications(&self, _count: u64) {}
}

/// The Grover iteration G = R_h·Z_f on the oracle's input register.
#[derive(Debug, Clone, Copy)]
pub struct GroverOperator<'a> {
    oracle: &'a OracleSpec,
}

impl<'a> GroverOperator<'a> {
    pub fn new(oracle: &'a OracleSpec) -> Self {
        Self { oracle }
    }
}

impl BlockOperator for GroverOperator<'_> {
    fn block_qubits(&self) -> u32 {
        self.oracle.qubits()
    }

    fn apply_block(&self, block: &mut [Complex64]) {
        self.oracle.reflect_block(block);
        invert_about_mean(block);
    }

    fn record_applications(&self, count: u64) {
        self.oracle.record_queries(count);
    }
}

/// x_i ← 2μ − x_i where μ is the block mean.
pub fn invert_about_mean(block: &mut [Complex64]) {
    let mean = deterministic_sum(block) / block.len() as f64;
    let twice = mean * 2.0;
    if block.len() >= PAR_THRESHOLD {
        block.par_iter_mut().for_each(|x| *x = twice - *x);
    } else {
        block.iter_mut().for_each(|x| *x = twice - *x);
    }
}

fn deterministic_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() < PAR_THRESHOLD {
        return xs.iter().sum();
    }
    let partial: Vec<Complex64> = xs.par_chunks(REDUCE_CHUNK).map(|c| c.iter().sum()).collect();
    partial.into_iter().sum()
}

/// A normalized vector of `2^m` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩ on `qubits` qubits.
    pub fn zero(qubits: u32) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: u32, index: u64) -> Result<Self> {
        check_size(qubits)?;
        let len = 1usize << qubits;
        if index as usize >= len {
            return Err(Error::ParameterDomain(format!(
                "basis index {index} outside 0..{len}"
            )));
        }
        let mut amps = vec![ZERO; len];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    /// |h⟩ = H^{⊗n}|0^n⟩.
    pub fn uniform(qubits: u32) -> Result<Self> {
        check_size(qubits)?;
        let len = 1usize << qubits;
        let amp = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Ok(Self {
            qubits,
            amps: vec![amp; len],
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm
    /// must be 1 within 1e−9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::ParameterDomain(format!(
                "amplitude count {len} is not a power of two ≥ 2"
            )));
        }
        let qubits = len.trailing_zeros();
        check_size(qubits)?;
        let state = Self { qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NormDrift(norm));
        }
        Ok(state)
    }

    /// Wraps amplitudes produced by unitary maps without re-checking the norm.
    pub(crate) fn from_raw(qubits: u32, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1usize << qubits);
        Self { qubits, amps }
    }

    /// Builds a state from unnormalized amplitudes, rescaling to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NormDrift(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amps)
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Mutable access for callers implementing their own unitary actions.
    /// Keeping the vector normalized is the caller's responsibility.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn probability(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Z_f on the low `oracle.qubits()` qubits; counts one query.
    pub fn apply_phase_oracle(&mut self, oracle: &OracleSpec) -> Result<()> {
        let block = self.block_len(oracle.qubits())?;
        self.for_each_block(block, |b| oracle.reflect_block(b));
        oracle.record_queries(1);
        Ok(())
    }

    /// Bit-flip oracle O_f: |x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩ with x on the low
    /// `oracle.qubits()` qubits and y on qubit `target`. Counts one query.
    pub fn apply_bit_flip_oracle(&mut self, oracle: &OracleSpec, target: u32) -> Result<()> {
        self.block_len(oracle.qubits())?;
        if target < oracle.qubits() || target >= self.qubits {
            return Err(Error::ParameterDomain(format!(
                "oracle target qubit {target} must lie in {}..{}",
                oracle.qubits(),
                self.qubits
            )));
        }
        let n = oracle.qubits();
        let flip = 1usize << target;
        let outer = self.amps.len() >> n;
        for high in 0..outer {
            let base = high << n;
            if base & flip != 0 {
                continue;
            }
            for &x in oracle.marked() {
                let i = base | x as usize;
                self.amps.swap(i, i | flip);
            }
        }
        oracle.record_queries(1);
        Ok(())
    }

    /// Reflection about the uniform state on the low `n` qubits, computed as
    /// inversion about the mean in O(2^m).
    pub fn apply_diffusion(&mut self, n: u32) -> Result<()> {
        let block = self.block_len(n)?;
        if block == self.amps.len() {
            invert_about_mean(&mut self.amps);
        } else {
            self.for_each_block(block, invert_about_mean);
        }
        Ok(())
    }

    /// One Grover iteration: phase oracle followed by diffusion.
    pub fn apply_grover_iteration(&mut self, oracle: &OracleSpec) -> Result<()> {
        self.apply_phase_oracle(oracle)?;
        self.apply_diffusion(oracle.qubits())
    }

    pub fn apply_hadamard(&mut self, qubit: u32) -> Result<()> {
        self.check_qubit(qubit)?;
        let half = 1usize << qubit;
        let h = FRAC_1_SQRT_2;
        let pair = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * h;
                *b = (x - y) * h;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(half << 1).for_each(pair);
        } else {
            self.amps.chunks_mut(half << 1).for_each(pair);
        }
        Ok(())
    }

    /// H on qubits `first..first + count`.
    pub fn apply_hadamard_layer(&mut self, first: u32, count: u32) -> Result<()> {
        for q in first..first + count {
            self.apply_hadamard(q)?;
        }
        Ok(())
    }

    /// Z_0 on the low `n` qubits: negates every amplitude whose low `n` bits
    /// are all zero.
    pub fn apply_zero_reflection(&mut self, n: u32) -> Result<()> {
        let block = self.block_len(n)?;
        for chunk in self.amps.chunks_mut(block) {
            chunk[0] = -chunk[0];
        }
        Ok(())
    }

    /// Multiplies every amplitude by −1.
    pub fn negate(&mut self) {
        self.amps.iter_mut().for_each(|a| *a = -*a);
    }

    /// Discrete Fourier transform with kernel e^{2πi·jk/2^t}/√(2^t) on qubits
    /// `first..first + t`.
    pub fn qft(&mut self, first: u32, t: u32) -> Result<()> {
        self.fourier(first, t, FftDirection::Inverse)
    }

    /// Inverse of [`Self::qft`].
    pub fn inverse_qft(&mut self, first: u32, t: u32) -> Result<()> {
        self.fourier(first, t, FftDirection::Forward)
    }

    // rustfft's "inverse" direction carries the e^{+2πi} kernel.
    fn fourier(&mut self, first: u32, t: u32, direction: FftDirection) -> Result<()> {
        if t == 0 || first + t > self.qubits {
            return Err(Error::ParameterDomain(format!(
                "Fourier register {first}..{} outside {} qubits",
                first + t,
                self.qubits
            )));
        }
        let size = 1usize << t;
        let fft = FftPlanner::<f64>::new().plan_fft(size, direction);
        let scale = 1.0 / (size as f64).sqrt();
        let stride = 1usize << first;
        if stride == 1 {
            let mut scratch = vec![ZERO; fft.get_inplace_scratch_len()];
            for chunk in self.amps.chunks_mut(size) {
                fft.process_with_scratch(chunk, &mut scratch);
                chunk.iter_mut().for_each(|a| *a *= scale);
            }
            return Ok(());
        }
        let span = size * stride;
        let mut buf = vec![ZERO; size];
        for base_high in (0..self.amps.len()).step_by(span) {
            for low in 0..stride {
                let base = base_high + low;
                for (y, slot) in buf.iter_mut().enumerate() {
                    *slot = self.amps[base + y * stride];
                }
                fft.process(&mut buf);
                for (y, v) in buf.iter().enumerate() {
                    self.amps[base + y * stride] = v * scale;
                }
            }
        }
        Ok(())
    }

    /// Applies `op^(2^power_log2)` to the target register (the low
    /// `op.block_qubits()` qubits) in every branch where `control` is 1.
    pub fn apply_controlled_power<O: BlockOperator + ?Sized>(
        &mut self,
        op: &O,
        control: u32,
        power_log2: u32,
    ) -> Result<()> {
        let n = op.block_qubits();
        let block = self.block_len(n)?;
        if control < n || control >= self.qubits {
            return Err(Error::ParameterDomain(format!(
                "control qubit {control} must lie outside the target register 0..{n} and below {}",
                self.qubits
            )));
        }
        if power_log2 >= 63 {
            return Err(Error::ParameterDomain(format!("power 2^{power_log2} too large")));
        }
        let reps = 1u64 << power_log2;
        let control_bit = 1usize << (control - n);
        let apply = |(b, chunk): (usize, &mut [Complex64])| {
            if b & control_bit != 0 {
                for _ in 0..reps {
                    op.apply_block(chunk);
                }
            }
        };
        if self.amps.len() / block > 1 && self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(block).enumerate().for_each(apply);
        } else {
            self.amps.chunks_mut(block).enumerate().for_each(apply);
        }
        op.record_applications(reps);
        Ok(())
    }

    /// Applies `op` once to every block (uncontrolled).
    pub fn apply_block_operator<O: BlockOperator + ?Sized>(&mut self, op: &O) -> Result<()> {
        let block = self.block_len(op.block_qubits())?;
        self.for_each_block(block, |b| op.apply_block(b));
        op.record_applications(1);
        Ok(())
    }

    /// Samples a basis index with probability |amp|².
    pub fn measure<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<u64> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > MEASURE_NORM_TOLERANCE {
            return Err(Error::NormDrift(norm));
        }
        let target = rng.random::<f64>() * norm;
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if target < acc {
                return Ok(i as u64);
            }
        }
        Ok(last_nonzero as u64)
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_len(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(x, y)| x.conj() * y).sum())
    }

    /// ‖self − other‖ with no phase alignment.
    pub fn norm_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_len(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Total squared amplitude on indices whose low `oracle.qubits()` bits
    /// are marked.
    pub fn marked_mass(&self, oracle: &OracleSpec) -> Result<f64> {
        let block = self.block_len(oracle.qubits())?;
        Ok(self
            .amps
            .chunks(block)
            .map(|b| {
                oracle
                    .marked()
                    .iter()
                    .map(|&x| b[x as usize].norm_sqr())
                    .sum::<f64>()
            })
            .sum())
    }

    /// ‖Π φ‖ where Π projects onto the marked input values (identity on the
    /// rest of the register).
    pub fn project_marked_norm(&self, oracle: &OracleSpec) -> Result<f64> {
        Ok(self.marked_mass(oracle)?.sqrt())
    }

    fn block_len(&self, n: u32) -> Result<usize> {
        if n == 0 || n > self.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.qubits as usize,
                actual: n as usize,
            });
        }
        Ok(1usize << n)
    }

    fn check_qubit(&self, q: u32) -> Result<()> {
        if q >= self.qubits {
            return Err(Error::ParameterDomain(format!(
                "qubit {q} outside register of {} qubits",
                self.qubits
            )));
        }
        Ok(())
    }

    fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                actual: other.amps.len(),
            });
        }
        Ok(())
    }

    fn for_each_block<F>(&mut self, block: usize, f: F)
    where
        F: Fn(&mut [Complex64]) + Sync + Send,
    {
        if self.amps.len() / block > 1 && self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(block).for_each(f);
        } else {
            self.amps.chunks_mut(block).for_each(f);
        }
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.amps.len()))?;
        for a in &self.amps {
            seq.serialize_element(&[a.re, a.im])?;
        }
        seq.end()
    }
}

fn check_size(qubits: u32) -> Result<()> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::SizeLimit {
            requested: qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests;
