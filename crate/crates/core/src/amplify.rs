//! Amplitude amplification for an arbitrary state preparation U and
//! predicate χ.
//!
//! The amplification step is G = R_ψ·Z_χ with R_ψ = −U Z_0 U†, a reflection
//! about |ψ⟩ = U|0⟩. On the plane spanned by the normalized good and bad
//! components of |ψ⟩ it is a rotation by 2θ_p, where sin²θ_p = p is the
//! good-state probability of |ψ⟩. With U = H^{⊗n} it is exactly the Grover
//! iteration.

use std::borrow::Cow;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand::Rng;

use crate::analytic::optimal_iterations;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::search::{run_fixed, run_schedule, Amplifiable, SearchOutcome, SearchParams, CLASSICAL_PROBE_CAP};
use crate::sv::{invert_about_mean, BlockOperator, OracleSpec, StateVector};

/// Unitarity tolerance for explicit matrices and prepared states.
pub const UNITARY_TOL: f64 = 1e-9;

/// Probabilities this close to 0 or 1 are treated as degenerate.
pub(crate) const DEGENERATE_P: f64 = 1e-12;

/// A state-preparation unitary acting on a `2^qubits` block of amplitudes.
pub trait StatePreparation: Send + Sync {
    fn qubits(&self) -> u32;

    /// In-place U.
    fn apply(&self, block: &mut [Complex64]);

    /// In-place U†.
    fn apply_adjoint(&self, block: &mut [Complex64]);

    /// U|0⟩.
    fn prepare(&self) -> Result<StateVector> {
        let mut state = StateVector::zero(self.qubits())?;
        self.apply(state.amplitudes_mut());
        Ok(state)
    }

    /// R_ψ = −U Z_0 U† applied in place.
    fn reflect_about_prepared(&self, block: &mut [Complex64]) {
        self.apply_adjoint(block);
        block[0] = -block[0];
        self.apply(block);
        block.iter_mut().for_each(|x| *x = -*x);
    }
}

/// U = H^{⊗n}. The reflection and the prepared state use the same
/// arithmetic as the plain Grover path in [`crate::sv`], so amplification
/// with this preparation reproduces Grover search bit for bit.
#[derive(Debug, Clone, Copy)]
pub struct HadamardTransform {
    qubits: u32,
}

impl HadamardTransform {
    pub fn new(qubits: u32) -> Self {
        Self { qubits }
    }
}

impl StatePreparation for HadamardTransform {
    fn qubits(&self) -> u32 {
        self.qubits
    }

    fn apply(&self, block: &mut [Complex64]) {
        walsh_hadamard(block);
    }

    fn apply_adjoint(&self, block: &mut [Complex64]) {
        walsh_hadamard(block);
    }

    fn prepare(&self) -> Result<StateVector> {
        StateVector::uniform(self.qubits)
    }

    fn reflect_about_prepared(&self, block: &mut [Complex64]) {
        invert_about_mean(block);
    }
}

fn walsh_hadamard(block: &mut [Complex64]) {
    let len = block.len();
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut half = 1;
    while half < len {
        for chunk in block.chunks_mut(half << 1) {
            let (lo, hi) = chunk.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * scale;
                *b = (x - y) * scale;
            }
        }
        half <<= 1;
    }
}

/// Explicit unitary matrix, up to [`crate::linalg::MAX_MATRIX_QUBITS`] qubits.
#[derive(Debug, Clone)]
pub struct DenseUnitary {
    qubits: u32,
    matrix: ComplexMatrix,
}

impl DenseUnitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::ParameterDomain(format!(
                "matrix dimension {dim} is not 2^n"
            )));
        }
        let qubits = dim.trailing_zeros();
        if qubits > crate::linalg::MAX_MATRIX_QUBITS {
            return Err(Error::SizeLimit {
                requested: qubits,
                limit: crate::linalg::MAX_MATRIX_QUBITS,
            });
        }
        matrix.check_unitary(UNITARY_TOL)?;
        Ok(Self { qubits, matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl StatePreparation for DenseUnitary {
    fn qubits(&self) -> u32 {
        self.qubits
    }

    fn apply(&self, block: &mut [Complex64]) {
        let out = self
            .matrix
            .mul_vec(block)
            .expect("block length checked by caller");
        block.copy_from_slice(&out);
    }

    fn apply_adjoint(&self, block: &mut [Complex64]) {
        let out = self
            .matrix
            .adjoint_mul_vec(block)
            .expect("block length checked by caller");
        block.copy_from_slice(&out);
    }
}

/// Black-box preparation given as a forward action and its adjoint.
pub struct ActionPreparation<F, G> {
    qubits: u32,
    forward: F,
    adjoint: G,
}

impl<F, G> ActionPreparation<F, G>
where
    F: Fn(&mut [Complex64]) + Send + Sync,
    G: Fn(&mut [Complex64]) + Send + Sync,
{
    pub fn new(qubits: u32, forward: F, adjoint: G) -> Self {
        Self {
            qubits,
            forward,
            adjoint,
        }
    }
}

impl<F, G> StatePreparation for ActionPreparation<F, G>
where
    F: Fn(&mut [Complex64]) + Send + Sync,
    G: Fn(&mut [Complex64]) + Send + Sync,
{
    fn qubits(&self) -> u32 {
        self.qubits
    }

    fn apply(&self, block: &mut [Complex64]) {
        (self.forward)(block)
    }

    fn apply_adjoint(&self, block: &mut [Complex64]) {
        (self.adjoint)(block)
    }
}

/// A state preparation U together with a good-set predicate χ.
///
/// The predicate is held as an [`OracleSpec`], either owned or borrowed from
/// the caller so that Z_χ applications show up on the caller's counter.
pub struct Amplifier<'a> {
    prep: Box<dyn StatePreparation + 'a>,
    good: Cow<'a, OracleSpec>,
    psi: StateVector,
    p: f64,
    invocations: AtomicU64,
}

impl std::fmt::Debug for Amplifier<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Amplifier")
            .field("qubits", &self.qubits())
            .field("good", &self.good.marked())
            .field("p", &self.p)
            .finish()
    }
}

impl<'a> Amplifier<'a> {
    pub fn new<P>(prep: P, chi: impl Fn(u64) -> bool) -> Result<Self>
    where
        P: StatePreparation + 'a,
    {
        let good = OracleSpec::from_predicate(prep.qubits(), chi)?;
        Self::with_oracle(prep, good)
    }

    /// Takes ownership of `good` as the predicate χ.
    pub fn with_oracle<P>(prep: P, good: OracleSpec) -> Result<Self>
    where
        P: StatePreparation + 'a,
    {
        Self::build(Box::new(prep), Cow::Owned(good))
    }

    /// Uses the caller's oracle as χ; its query counter records every Z_χ.
    pub fn borrowing<P>(prep: P, good: &'a OracleSpec) -> Result<Self>
    where
        P: StatePreparation + 'a,
    {
        Self::build(Box::new(prep), Cow::Borrowed(good))
    }

    fn build(prep: Box<dyn StatePreparation + 'a>, good: Cow<'a, OracleSpec>) -> Result<Self> {
        if good.qubits() != prep.qubits() {
            return Err(Error::DimensionMismatch {
                expected: prep.qubits() as usize,
                actual: good.qubits() as usize,
            });
        }
        let psi = prep.prepare()?;
        let norm = psi.norm_sqr();
        if (norm - 1.0).abs() > UNITARY_TOL {
            return Err(Error::NonUnitary((norm - 1.0).abs()));
        }
        let p = psi.marked_mass(&good)?.clamp(0.0, 1.0);
        Ok(Self {
            prep,
            good,
            psi,
            p,
            invocations: AtomicU64::new(0),
        })
    }

    /// Explicit matrix U; fails with [`Error::NonUnitary`] if U†U ≠ I.
    pub fn from_matrix(matrix: ComplexMatrix, chi: impl Fn(u64) -> bool) -> Result<Self> {
        Self::new(DenseUnitary::new(matrix)?, chi)
    }

    pub fn qubits(&self) -> u32 {
        self.prep.qubits()
    }

    /// p = Σ_{χ(x)=1} |⟨x|U|0⟩|².
    pub fn success_probability(&self) -> f64 {
        self.p
    }

    /// θ_p = arcsin(√p).
    pub fn theta(&self) -> f64 {
        self.p.sqrt().min(1.0).asin()
    }

    pub fn good(&self) -> &OracleSpec {
        &self.good
    }

    /// U|0⟩.
    pub fn prepared(&self) -> &StateVector {
        &self.psi
    }

    pub fn preparation(&self) -> &(dyn StatePreparation + 'a) {
        self.prep.as_ref()
    }

    /// Charges `count` applications of G to the counters without simulating
    /// them (used by sampling shortcuts that are exact in distribution).
    pub fn record_iterations(&self, count: u64) {
        self.record_applications(count);
    }

    /// Total invocations of U and U† so far across all runs.
    pub fn invocations(&self) -> u64 {
        self.invocations.load(Ordering::Relaxed)
    }

    /// One application of G = −U Z_0 U† Z_χ: one χ query, two invocations.
    pub fn apply_iteration(&self, state: &mut StateVector) -> Result<()> {
        state.apply_block_operator(self)
    }

    /// k = ⌊(π/2 − θ_p)/(2θ_p)⌋.
    pub fn optimal_iterations(&self) -> Result<u64> {
        if self.p < DEGENERATE_P {
            return Err(Error::NoSolutions);
        }
        if self.p > 1.0 - DEGENERATE_P {
            return Ok(0);
        }
        Ok(optimal_iterations(self.theta()))
    }

    /// Eigenvectors ψ± = (ψ_A ± iψ_B)/√2 of G with eigenvalues e^{±i2θ_p},
    /// where ψ_A, ψ_B are the normalized good and bad parts of U|0⟩. The
    /// returned structure carries the residuals of the eigen-equations and of
    /// the decomposition U|0⟩ = (−i/√2)(e^{iθ}ψ₊ − e^{−iθ}ψ₋).
    pub fn eigen_structure(&self) -> Result<EigenStructure> {
        let (psi_a, psi_b) = self.plane_basis()?;
        let theta = self.theta();
        let i = Complex64::i();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let combine = |sign: f64| -> Result<StateVector> {
            let amps = psi_a
                .amplitudes()
                .iter()
                .zip(psi_b.amplitudes())
                .map(|(a, b)| (a + i * sign * b) * s)
                .collect();
            StateVector::normalized(amps)
        };
        let psi_plus = combine(1.0)?;
        let psi_minus = combine(-1.0)?;
        let lambda_plus = Complex64::from_polar(1.0, 2.0 * theta);
        let lambda_minus = lambda_plus.conj();

        let residual = |v: &StateVector, lambda: Complex64| -> Result<f64> {
            let gv = self.apply_silent(v);
            let scaled = v.amplitudes().iter().map(|x| x * lambda);
            Ok(gv
                .amplitudes()
                .iter()
                .zip(scaled)
                .map(|(g, e)| (g - e).norm_sqr())
                .sum::<f64>()
                .sqrt())
        };
        let residual_plus = residual(&psi_plus, lambda_plus)?;
        let residual_minus = residual(&psi_minus, lambda_minus)?;

        let ep = Complex64::from_polar(1.0, theta);
        let coef = -i * s;
        let decomposition_residual = self
            .psi
            .amplitudes()
            .iter()
            .zip(psi_plus.amplitudes().iter().zip(psi_minus.amplitudes()))
            .map(|(x, (pp, pm))| (x - coef * (ep * pp - ep.conj() * pm)).norm_sqr())
            .sum::<f64>()
            .sqrt();

        let g_a = self.apply_silent(&psi_a);
        let g_b = self.apply_silent(&psi_b);
        let plane_matrix = [
            [psi_a.inner_product(&g_a)?, psi_a.inner_product(&g_b)?],
            [psi_b.inner_product(&g_a)?, psi_b.inner_product(&g_b)?],
        ];

        Ok(EigenStructure {
            theta,
            psi_plus,
            psi_minus,
            lambda_plus,
            lambda_minus,
            residual_plus,
            residual_minus,
            decomposition_residual,
            plane_matrix,
        })
    }

    /// Normalized good and bad components of U|0⟩.
    pub fn plane_basis(&self) -> Result<(StateVector, StateVector)> {
        if self.p < DEGENERATE_P || self.p > 1.0 - DEGENERATE_P {
            return Err(Error::DegenerateAngle("p must satisfy 0 < p < 1"));
        }
        let split = |want_good: bool| {
            let amps = self
                .psi
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(x, a)| {
                    if self.good.contains(x as u64) == want_good {
                        *a
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            StateVector::normalized(amps)
        };
        Ok((split(true)?, split(false)?))
    }

    fn apply_silent(&self, v: &StateVector) -> StateVector {
        let mut out = v.clone();
        self.apply_block(out.amplitudes_mut());
        out
    }
}

impl BlockOperator for Amplifier<'_> {
    fn block_qubits(&self) -> u32 {
        self.qubits()
    }

    fn apply_block(&self, block: &mut [Complex64]) {
        self.good.reflect_block(block);
        self.prep.reflect_about_prepared(block);
    }

    fn record_applications(&self, count: u64) {
        self.good.record_queries(count);
        self.invocations.fetch_add(2 * count, Ordering::Relaxed);
    }
}

impl Amplifiable for Amplifier<'_> {
    fn prepare(&self) -> Result<StateVector> {
        self.invocations.fetch_add(1, Ordering::Relaxed);
        Ok(self.psi.clone())
    }

    fn step(&self, state: &mut StateVector) -> Result<()> {
        self.apply_iteration(state)
    }

    fn check(&self, x: u64) -> bool {
        self.good.evaluate(x)
    }
}

/// Result of one amplification run.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifyOutcome {
    /// `total_queries` counts applications of G.
    pub outcome: SearchOutcome,
    /// Invocations of U and U† (one per preparation, two per G).
    pub invocations: u64,
}

/// Eigen-decomposition of G restricted to the good/bad plane.
#[derive(Debug, Clone)]
pub struct EigenStructure {
    pub theta: f64,
    pub psi_plus: StateVector,
    pub psi_minus: StateVector,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    /// ‖Gψ₊ − λ₊ψ₊‖.
    pub residual_plus: f64,
    /// ‖Gψ₋ − λ₋ψ₋‖.
    pub residual_minus: f64,
    /// ‖U|0⟩ − (−i/√2)(e^{iθ}ψ₊ − e^{−iθ}ψ₋)‖.
    pub decomposition_residual: f64,
    /// ⟨e_i|G|e_j⟩ in the basis (ψ_A, ψ_B).
    pub plane_matrix: [[Complex64; 2]; 2],
}

impl EigenStructure {
    pub fn plane_trace(&self) -> Complex64 {
        self.plane_matrix[0][0] + self.plane_matrix[1][1]
    }

    pub fn plane_determinant(&self) -> Complex64 {
        self.plane_matrix[0][0] * self.plane_matrix[1][1] - self.plane_matrix[0][1] * self.plane_matrix[1][0]
    }
}

/// Amplification with known p: ⌊(π/2 − θ_p)/(2θ_p)⌋ steps from U|0⟩, then a
/// single measurement. Succeeds with probability at least cos²(2θ_p) for p ≤ 1/2.
pub fn amplify_known<R: Rng + ?Sized>(amplifier: &Amplifier, rng: &mut R) -> Result<AmplifyOutcome> {
    let k = amplifier.optimal_iterations()?;
    let (x, hit) = run_fixed(amplifier, k, rng)?;
    Ok(AmplifyOutcome {
        outcome: SearchOutcome {
            found: hit.then_some(x),
            total_queries: k,
            loops: vec![crate::search::LoopRecord {
                m_value: k as f64,
                k_drawn: k,
                measured: x,
                hit,
            }],
            evaluations: 1,
        },
        invocations: 1 + 2 * k,
    })
}

/// Amplification with unknown p, using the same exponential schedule as
/// [`crate::search::search_unknown`] (guard m ≤ √(2^n)). When p > 1/2 the
/// prepared state is first sampled directly up to four times.
pub fn amplify_unknown<R: Rng + ?Sized>(
    amplifier: &Amplifier,
    params: &SearchParams,
    rng: &mut R,
) -> Result<AmplifyOutcome> {
    let mut outcome = SearchOutcome::default();
    let mut invocations = 0;
    if amplifier.p > 0.5 + DEGENERATE_P {
        for _ in 0..CLASSICAL_PROBE_CAP {
            let (x, hit) = run_fixed(amplifier, 0, rng)?;
            invocations += 1;
            outcome.evaluations += 1;
            if hit {
                outcome.found = Some(x);
                return Ok(AmplifyOutcome { outcome, invocations });
            }
        }
    }
    let max_m = params
        .max_m()
        .unwrap_or_else(|| ((1u64 << amplifier.qubits()) as f64).sqrt());
    run_schedule(amplifier, params.lambda(), max_m, &mut outcome, rng)?;
    invocations += outcome.loops.len() as u64 + 2 * outcome.total_queries;
    Ok(AmplifyOutcome { outcome, invocations })
}
