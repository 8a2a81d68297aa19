//! Closed-form model of the Grover rotation in the plane spanned by the
//! normalized marked state |A⟩ and unmarked state |B⟩.
//!
//! The uniform state sits at angle θ_a = arcsin(√(a/N)) from |B⟩ and every
//! Grover iteration advances it by 2θ_a, so after k iterations the marked
//! mass is sin²((2k+1)θ_a). Everything here is oracle-free; the simulator in
//! [`crate::sv`] is checked against it.
//!
//! The angle-level helpers ([`success_probability`], [`optimal_iterations`],
//! ...) are shared with amplitude amplification, where θ comes from an
//! arbitrary success probability p instead of a/N.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Upper bound on the qubit count accepted by [`RotationModel::new`].
pub const MAX_MODEL_QUBITS: u32 = 30;

// Absorbs the rounding error of (π/2 − θ)/(2θ) when the quotient is an exact
// integer, e.g. θ = π/6 gives 0.9999999999999998 in double precision.
const FLOOR_SLACK: f64 = 1e-9;

/// Exact two-dimensional description of Grover dynamics for `a` marked items
/// out of `N = 2^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationModel {
    n: u32,
    a: u64,
    theta: f64,
}

impl RotationModel {
    pub fn new(n: u32, a: u64) -> Result<Self> {
        if n == 0 || n > MAX_MODEL_QUBITS {
            return Err(Error::ParameterDomain(format!(
                "qubit count {n} not in 1..={MAX_MODEL_QUBITS}"
            )));
        }
        let size = 1u64 << n;
        if a > size {
            return Err(Error::ParameterDomain(format!(
                "marked count {a} exceeds domain size {size}"
            )));
        }
        let theta = if a == size {
            FRAC_PI_2
        } else {
            (a as f64 / size as f64).sqrt().asin()
        };
        Ok(Self { n, a, theta })
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    /// N = 2^n.
    pub fn domain_size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn marked(&self) -> u64 {
        self.a
    }

    pub fn unmarked(&self) -> u64 {
        self.domain_size() - self.a
    }

    /// θ_a in radians.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// a/N.
    pub fn marked_fraction(&self) -> f64 {
        self.a as f64 / self.domain_size() as f64
    }

    /// Probability of measuring a marked item after `k` Grover iterations.
    pub fn success_prob(&self, k: u64) -> f64 {
        if self.a == 0 {
            0.0
        } else if self.a == self.domain_size() {
            1.0
        } else {
            success_probability(self.theta, k)
        }
    }

    /// k* = ⌊(π/2 − θ_a)/(2θ_a)⌋, the largest iteration count that does not
    /// rotate past |A⟩. The angle left over, π/2 − (2k*+1)θ_a, lies in
    /// [0, 2θ_a), so success_prob(k*) ≥ cos²(2θ_a) when a ≤ N/2.
    pub fn optimal_k(&self) -> Result<u64> {
        if self.a == 0 {
            return Err(Error::NoSolutions);
        }
        if self.a == self.domain_size() {
            return Ok(0);
        }
        Ok(optimal_iterations(self.theta))
    }

    /// The iteration count whose angle (2k+1)θ_a is nearest to π/2. The
    /// leftover angle is at most θ_a, so success_prob ≥ cos²θ_a = 1 − a/N.
    pub fn nearest_k(&self) -> Result<u64> {
        if self.a == 0 {
            return Err(Error::NoSolutions);
        }
        if self.a == self.domain_size() {
            return Ok(0);
        }
        let q = (FRAC_PI_2 - self.theta) / (2.0 * self.theta);
        Ok(q.round().max(0.0) as u64)
    }

    /// Success probability when k is drawn uniformly from {0, …, m−1}:
    /// P_m = 1/2 − sin(4mθ)/(4m·sin 2θ).
    pub fn p_m(&self, m: u64) -> Result<f64> {
        self.check_nondegenerate()?;
        average_success(self.theta, m)
    }

    /// m* = 1/sin(2θ_a); for m ≥ m*, P_m ≥ 1/4.
    pub fn critical_m(&self) -> Result<f64> {
        self.check_nondegenerate()?;
        Ok(critical_schedule(self.theta))
    }

    fn check_nondegenerate(&self) -> Result<()> {
        if self.a == 0 || self.a == self.domain_size() {
            Err(Error::DegenerateAngle("a must satisfy 0 < a < N"))
        } else {
            Ok(())
        }
    }
}

/// sin²((2k+1)θ).
pub fn success_probability(theta: f64, k: u64) -> f64 {
    let s = ((2 * k + 1) as f64 * theta).sin();
    s * s
}

/// ⌊(π/2 − θ)/(2θ)⌋ for θ ∈ (0, π/2].
pub fn optimal_iterations(theta: f64) -> u64 {
    debug_assert!(theta > 0.0);
    let q = (FRAC_PI_2 - theta) / (2.0 * theta);
    (q + FLOOR_SLACK).floor().max(0.0) as u64
}

/// Mean of sin²((2k+1)θ) over k ∈ {0, …, m−1} via the closed form.
pub fn average_success(theta: f64, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::ParameterDomain("schedule bound m must be ≥ 1".into()));
    }
    let sin2 = (2.0 * theta).sin();
    if sin2.abs() < f64::EPSILON {
        return Err(Error::DegenerateAngle("sin(2θ) = 0"));
    }
    let m = m as f64;
    Ok(0.5 - (4.0 * m * theta).sin() / (4.0 * m * sin2))
}

/// 1/sin(2θ).
pub fn critical_schedule(theta: f64) -> f64 {
    1.0 / (2.0 * theta).sin()
}
