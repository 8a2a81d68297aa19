pub mod amplify;
pub mod count;
pub mod curve;
pub mod lowerbound;
pub mod search;

use std::fs;
use std::path::Path;

use rand::seq::index;
use rand::Rng;

use crate::args::Marked;
use crate::Failure;

/// Rendered report plus an optional invariant violation to signal on exit.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub violation: Option<String>,
}

pub fn domain_size(n: u32) -> Result<u64, Failure> {
    if n == 0 || n > 63 {
        return Err(Failure::Usage(format!("--n {n} not in 1..=63")));
    }
    Ok(1u64 << n)
}

/// Resolves the marked set. `--a` draws distinct indices with `rng`, which
/// callers take from the setup stream so trial streams stay untouched.
pub fn marked_set<R: Rng + ?Sized>(n: u32, marked: &Marked, rng: &mut R) -> Result<Vec<u64>, Failure> {
    let size = domain_size(n)?;
    let mut set = match (marked.a, &marked.marked_file) {
        (Some(a), _) => {
            if a > size {
                return Err(Failure::Usage(format!("--a {a} exceeds the domain size {size}")));
            }
            let len = usize::try_from(size).map_err(|_| Failure::Usage("domain too large".into()))?;
            index::sample(rng, len, a as usize)
                .into_iter()
                .map(|i| i as u64)
                .collect()
        }
        (None, Some(path)) => read_marked_file(path)?,
        (None, None) => return Err(Failure::Usage("one of --a or --marked-file is required".into())),
    };
    if let Some(&bad) = set.iter().find(|&&x| x >= size) {
        return Err(Failure::Usage(format!("marked index {bad} outside 0..{size}")));
    }
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

fn read_marked_file(path: &Path) -> Result<Vec<u64>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let x = token.parse::<u64>().map_err(|_| {
                Failure::Usage(format!(
                    "{}:{}: not an index: {token:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            out.push(x);
        }
    }
    Ok(out)
}

pub fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, count) = xs.into_iter().fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        0.5 * (xs[mid - 1] + xs[mid])
    }
}
