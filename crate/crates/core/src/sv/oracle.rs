use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Phase oracle Z_f for a marked subset of {0, …, 2^n − 1}.
///
/// Two counters are kept: `queries` counts quantum oracle applications
/// (one per Grover iteration) and `evaluations` counts classical membership
/// checks. Both are atomic so replicas running in parallel may share an
/// oracle.
#[derive(Debug)]
pub struct OracleSpec {
    n: u32,
    marked: Vec<u64>,
    queries: AtomicU64,
    evaluations: AtomicU64,
}

impl OracleSpec {
    pub fn new<I: IntoIterator<Item = u64>>(n: u32, marked: I) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::ParameterDomain(format!("oracle width {n} not in 1..=63")));
        }
        let size = 1u64 << n;
        let mut marked: Vec<u64> = marked.into_iter().collect();
        if let Some(&bad) = marked.iter().find(|&&x| x >= size) {
            return Err(Error::ParameterDomain(format!(
                "marked index {bad} outside 0..{size}"
            )));
        }
        marked.sort_unstable();
        marked.dedup();
        Ok(Self {
            n,
            marked,
            queries: AtomicU64::new(0),
            evaluations: AtomicU64::new(0),
        })
    }

    /// Singleton oracle O_r.
    pub fn singleton(n: u32, r: u64) -> Result<Self> {
        Self::new(n, [r])
    }

    /// Oracle whose marked set is `{x : predicate(x)}`.
    pub fn from_predicate(n: u32, predicate: impl Fn(u64) -> bool) -> Result<Self> {
        if n > crate::MAX_QUBITS {
            return Err(Error::SizeLimit {
                requested: n,
                limit: crate::MAX_QUBITS,
            });
        }
        Self::new(n, (0..1u64 << n).filter(|&x| predicate(x)))
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    pub fn domain_size(&self) -> u64 {
        1u64 << self.n
    }

    /// Sorted marked indices.
    pub fn marked(&self) -> &[u64] {
        &self.marked
    }

    pub fn marked_count(&self) -> u64 {
        self.marked.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        self.marked.binary_search(&x).is_ok()
    }

    /// One classical evaluation of f, counted in `evaluations`.
    pub fn evaluate(&self, x: u64) -> bool {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        self.contains(x)
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn record_queries(&self, count: u64) {
        self.queries.fetch_add(count, Ordering::Relaxed);
    }

    pub fn reset_counters(&self) {
        self.queries.store(0, Ordering::Relaxed);
        self.evaluations.store(0, Ordering::Relaxed);
    }

    /// Negates marked amplitudes of a single `2^n` block without touching the
    /// query counter.
    pub fn reflect_block(&self, block: &mut [Complex64]) {
        debug_assert_eq!(block.len(), 1usize << self.n);
        for &x in &self.marked {
            block[x as usize] = -block[x as usize];
        }
    }
}

impl Clone for OracleSpec {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            marked: self.marked.clone(),
            queries: AtomicU64::new(self.queries()),
            evaluations: AtomicU64::new(self.evaluations()),
        }
    }
}
