//! Brute-force joint spectral radius bounds from products of fixed length.
//!
//! For every `k ≥ 1`,
//!
//! ```text
//! max ρ(P)^{1/k}  ≤  ρ(𝒜)  ≤  max ‖P‖₂^{1/k}
//! ```
//!
//! over all `r^k` products `P` of `k` matrices from the set. The trace
//! quantity `max |tr P|^{1/k}` tends to `ρ(𝒜)` along a subsequence but bounds
//! nothing at finite `k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, MatrixSet};
use crate::scalar::Scalar;

/// Largest number of chains enumerated exhaustively by default.
pub const EXHAUSTIVE_CAP: u64 = 1 << 20;

/// Product-based estimates at one depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsBracket<T> {
    pub depth: usize,
    /// `max ρ(P)^{1/k}`, a certified lower bound when exhaustive.
    pub lower: T,
    /// `max ‖P‖₂^{1/k}`; absent in sampled mode, where it bounds nothing.
    pub upper: Option<T>,
    /// `max |tr P|^{1/k}`.
    pub trace_estimate: T,
    pub products_evaluated: u64,
    /// RNG seed, for sampled brackets.
    pub seed: Option<u64>,
}

impl<T: Scalar> BoundsBracket<T> {
    pub fn is_exhaustive(&self) -> bool {
        self.seed.is_none()
    }

    /// Whether `[lo, hi]` lies inside `[lower, upper]`.
    pub fn contains_interval(&self, lo: T, hi: T) -> bool {
        self.upper.is_some_and(|u| self.lower <= lo && hi <= u)
    }
}

#[derive(Debug, Clone, Copy)]
struct Extremes<T> {
    spectral: T,
    norm: T,
    trace: T,
    count: u64,
}

impl<T: Scalar> Extremes<T> {
    fn new() -> Self {
        Self { spectral: T::zero(), norm: T::zero(), trace: T::zero(), count: 0 }
    }

    fn observe(&mut self, p: &Matrix2<T>, with_norm: bool) {
        self.spectral = self.spectral.max(p.spectral_radius());
        if with_norm {
            self.norm = self.norm.max(p.induced_two_norm());
        }
        self.trace = self.trace.max(p.trace().abs());
        self.count += 1;
    }

    fn into_bracket(self, depth: usize, seed: Option<u64>) -> BoundsBracket<T> {
        let root = T::one() / T::from_usize_lossy(depth);
        BoundsBracket {
            depth,
            lower: self.spectral.powf(root),
            upper: seed.is_none().then(|| self.norm.powf(root)),
            trace_estimate: self.trace.powf(root),
            products_evaluated: self.count,
            seed,
        }
    }
}

/// Number of chains `r^k`, saturating.
pub fn chain_count(r: usize, depth: usize) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..depth {
        n = n.saturating_mul(r as u128);
    }
    n
}

fn check_exhaustive(set_len: usize, depth: usize, cap: u64) -> Result<()> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let chains = chain_count(set_len, depth);
    if chains > cap as u128 {
        return Err(Error::CapExceeded { chains, cap });
    }
    Ok(())
}

/// Depth-first walk over all chains, extending each prefix product by one
/// factor on the left.
fn walk<T: Scalar>(set: &[Matrix2<T>], remaining: usize, prefix: &Matrix2<T>, acc: &mut Extremes<T>) {
    for m in set {
        let p = *m * *prefix;
        if remaining == 1 {
            acc.observe(&p, true);
        } else {
            walk(set, remaining - 1, &p, acc);
        }
    }
}

fn exhaustive<T: Scalar>(set: &MatrixSet<T>, depth: usize, cap: u64) -> Result<Extremes<T>> {
    check_exhaustive(set.len(), depth, cap)?;
    let mut acc = Extremes::new();
    walk(set.matrices(), depth, &Matrix2::identity(), &mut acc);
    Ok(acc)
}

/// `max ρ(P)^{1/k}` over all products of length `depth`.
pub fn lower_bound<T: Scalar>(set: &MatrixSet<T>, depth: usize) -> Result<T> {
    Ok(bracket(set, depth)?.lower)
}

/// `max ‖P‖₂^{1/k}` over all products of length `depth`.
pub fn upper_bound<T: Scalar>(set: &MatrixSet<T>, depth: usize) -> Result<T> {
    Ok(bracket(set, depth)?.upper.expect("exhaustive bracket has an upper bound"))
}

/// `max |tr P|^{1/k}` over all products of length `depth`.
pub fn trace_estimate<T: Scalar>(set: &MatrixSet<T>, depth: usize) -> Result<T> {
    Ok(bracket(set, depth)?.trace_estimate)
}

/// All three estimates from one exhaustive enumeration, capped at
/// [`EXHAUSTIVE_CAP`] chains.
pub fn bracket<T: Scalar>(set: &MatrixSet<T>, depth: usize) -> Result<BoundsBracket<T>> {
    bracket_with_cap(set, depth, EXHAUSTIVE_CAP)
}

pub fn bracket_with_cap<T: Scalar>(set: &MatrixSet<T>, depth: usize, cap: u64) -> Result<BoundsBracket<T>> {
    let b = exhaustive(set, depth, cap)?.into_bracket(depth, None);
    debug_assert!(b.lower <= b.upper.unwrap() * (T::one() + T::lit(1e3) * T::epsilon()));
    Ok(b)
}

/// Heuristic bracket from `samples` uniformly drawn chains. Only the lower
/// bound and the trace estimate are reported.
pub fn sampled_bracket<T: Scalar>(
    set: &MatrixSet<T>,
    depth: usize,
    samples: u64,
    seed: u64,
) -> Result<BoundsBracket<T>> {
    if depth == 0 {
        return Err(Error::InvalidDepth);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Extremes::new();
    let ms = set.matrices();
    for _ in 0..samples {
        let p = (0..depth).fold(Matrix2::identity(), |p, _| ms[rng.gen_range(0..ms.len())] * p);
        acc.observe(&p, false);
    }
    Ok(acc.into_bracket(depth, Some(seed)))
}
