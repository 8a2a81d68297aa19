//! Small dense complex matrices: enough linear algebra for explicit
//! state-preparation unitaries and the random query algorithms used by the
//! lower-bound verifier.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Largest qubit count for which explicit matrices are built (1024 × 1024).
pub const MAX_MATRIX_QUBITS: u32 = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// H^{⊗n}: entry (i, j) is (−1)^{popcount(i & j)}/√(2^n).
    pub fn hadamard(n: u32) -> Self {
        let dim = 1usize << n;
        let scale = 1.0 / (dim as f64).sqrt();
        let data = (0..dim * dim)
            .map(|idx| {
                let (i, j) = (idx / dim, idx % dim);
                let sign = if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(sign * scale, 0.0)
            })
            .collect();
        Self { dim, data }
    }

    /// Permutation matrix sending |j⟩ to |perm(j)⟩. `perm` must be a
    /// bijection on 0..dim.
    pub fn permutation(dim: usize, perm: impl Fn(usize) -> usize) -> Result<Self> {
        let mut m = Self::zeros(dim);
        let mut seen = vec![false; dim];
        for j in 0..dim {
            let i = perm(j);
            if i >= dim || seen[i] {
                return Err(Error::ParameterDomain(format!("not a permutation at {j} → {i}")));
            }
            seen[i] = true;
            m.data[i * dim + j] = ONE;
        }
        Ok(m)
    }

    /// Haar-distributed unitary: Gram–Schmidt on the columns of a matrix of
    /// i.i.d. standard complex Gaussians. Gram–Schmidt yields the QR factor
    /// whose R has a positive real diagonal, which is the phase fixing that
    /// makes Q exactly Haar.
    pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let gauss = |rng: &mut R| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        };
        // Column-major working copy.
        let mut cols: Vec<Vec<Complex64>> =
            (0..dim).map(|_| (0..dim).map(|_| gauss(rng)).collect()).collect();
        for j in 0..dim {
            let (done, rest) = cols.split_at_mut(j);
            let col = &mut rest[0];
            // Two passes of modified Gram–Schmidt keep orthogonality at
            // machine precision.
            for _ in 0..2 {
                for q in done.iter() {
                    let proj: Complex64 = q.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
                    col.iter_mut().zip(q).for_each(|(c, a)| *c -= proj * a);
                }
            }
            let norm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            col.iter_mut().for_each(|c| *c /= norm);
        }
        let mut m = Self::zeros(dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.data[i * dim + j] = *v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, col)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim;
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[j * dim + i] = self.data[i * dim + j].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let dim = self.dim;
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.data[i * dim + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * dim..(k + 1) * dim];
                let dst = &mut out.data[i * dim..(i + 1) * dim];
                dst.iter_mut().zip(row).for_each(|(d, b)| *d += a * b);
            }
        }
        Ok(out)
    }

    /// `self ⊗ other`, with `other` on the low-order index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim * other.dim;
        let mut m = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        m.data[(i * other.dim + k) * dim + j * other.dim + l] = a * other.get(k, l);
                    }
                }
            }
        }
        m
    }

    /// y = M x.
    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(x.len())?;
        Ok(self
            .data
            .chunks(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// y = M† x.
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(x.len())?;
        let mut out = vec![ZERO; self.dim];
        for (row, xi) in self.data.chunks(self.dim).zip(x) {
            out.iter_mut().zip(row).for_each(|(o, a)| *o += a.conj() * xi);
        }
        Ok(out)
    }

    /// max |(M†M − I)_{ij}|.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim;
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let dot: Complex64 = (0..dim).map(|k| self.get(k, i).conj() * self.get(k, j)).sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn check_unitary(&self, tol: f64) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev > tol {
            Err(Error::NonUnitary(dev))
        } else {
            Ok(())
        }
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if other != self.dim {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other,
            })
        } else {
            Ok(())
        }
    }
}
