//! Plane norms as gauge functions on a uniform angular grid.
//!
//! A norm is stored through its values on unit directions,
//! `R(φ) = ‖(cos φ, sin φ)‖`, so that `‖x‖ = |x| R(arg x)` and the unit
//! sphere is the polar curve `r = 1 / R(φ)`. The grid has `N + 1` nodes
//! `φ_k = -π + 2πk/N`; nodes `0` and `N` both stand for the angle `±π` and
//! always carry the same value.
//!
//! A matrix `A` acts on gauges through two tables sampled on the grid: the
//! radial stretch `H(φ) = |A (cos φ, sin φ)|` and the image angle
//! `Φ(φ) = arg A (cos φ, sin φ)`, giving `‖A x‖ = |x| H(φ) R(Φ(φ))`.

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, MatrixSet};
use crate::scalar::Scalar;

/// Stretch values below this are treated as an exact zero image.
pub const ZERO_STRETCH: f64 = 1e-14;

/// Tolerance on `R(φ) = R(φ + π)` accepted by [`PolarNorm::is_centrally_symmetric`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// How the gauge is read at an angle that is not a grid node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lookup {
    /// Linear interpolation between the two bracketing nodes.
    #[default]
    Interpolate,
    /// Value at the nearest node, rounding the fractional node index and
    /// clamping it to `0..=N`.
    Nearest,
}

/// Checks that `nodes` is an admissible grid size.
pub fn check_node_count(nodes: usize) -> Result<()> {
    if nodes < 8 || !nodes.is_multiple_of(2) {
        return Err(Error::InvalidNodeCount(nodes));
    }
    Ok(())
}

/// Angle of node `k` on an `nodes`-interval grid, exact at `k ∈ {0, N/2, N}`.
pub fn grid_angle<T: Scalar>(nodes: usize, k: usize) -> T {
    let num = T::from_usize_lossy(2 * k) - T::from_usize_lossy(nodes);
    T::PI() * (num / T::from_usize_lossy(nodes))
}

/// Angular spacing `2π / N`.
pub fn grid_step<T: Scalar>(nodes: usize) -> T {
    T::lit(2.0) * T::PI() / T::from_usize_lossy(nodes)
}

/// Fractional node index of `phi ∈ [-π, π]`.
fn node_position<T: Scalar>(nodes: usize, phi: T) -> T {
    (phi / T::PI() + T::one()) * T::from_usize_lossy(nodes) / T::lit(2.0)
}

fn wrap_angle<T: Scalar>(phi: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    if phi >= -T::PI() && phi <= T::PI() {
        return phi;
    }
    let wrapped = phi - two_pi * ((phi + T::PI()) / two_pi).floor();
    wrapped.min(T::PI())
}

fn nearest_node<T: Scalar>(nodes: usize, position: T) -> usize {
    let r = position.round();
    if r <= T::zero() {
        0
    } else {
        r.to_usize().unwrap_or(nodes).min(nodes)
    }
}

/// Lower bracketing node and weight of the upper one.
fn bracket<T: Scalar>(nodes: usize, position: T) -> (usize, T) {
    let lower = nearest_node(nodes, position.floor()).min(nodes - 1);
    let weight = (position - T::from_usize_lossy(lower)).max(T::zero()).min(T::one());
    (lower, weight)
}

/// Node index of the antipodal direction, in `0..N`.
fn antipode(nodes: usize, k: usize) -> usize {
    let half = nodes / 2;
    if k < half {
        k + half
    } else {
        k - half
    }
}

/// Gauge values of a centrally symmetric norm on the uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarNorm<T> {
    values: Vec<T>,
}

impl<T: Scalar> PolarNorm<T> {
    /// The Euclidean norm, `R ≡ 1`.
    pub fn euclidean(nodes: usize) -> Result<Self> {
        Self::constant(nodes, T::one())
    }

    pub fn constant(nodes: usize, value: T) -> Result<Self> {
        check_node_count(nodes)?;
        Self::from_values(vec![value; nodes + 1])
    }

    /// Builds a norm from `N + 1` gauge values.
    ///
    /// Values must be positive and finite. The two `±π` endpoints are
    /// replaced by their mean, and then every antipodal pair by its mean, so
    /// the result is exactly centrally symmetric. Already symmetric input is
    /// returned unchanged.
    pub fn from_values(mut values: Vec<T>) -> Result<Self> {
        let nodes = values.len().saturating_sub(1);
        check_node_count(nodes)?;
        if let Some(k) = values.iter().position(|v| !(v.is_finite() && *v > T::zero())) {
            return Err(Error::InvalidGauge(format!(
                "value at node {k} is {}, expected positive and finite",
                values[k]
            )));
        }
        let two = T::lit(2.0);
        let ends = (values[0] + values[nodes]) / two;
        values[0] = ends;
        values[nodes] = ends;
        let half = nodes / 2;
        for k in 0..half {
            let mean = (values[k] + values[k + half]) / two;
            values[k] = mean;
            values[k + half] = mean;
        }
        values[nodes] = values[0];
        Ok(Self { values })
    }

    /// Wraps values produced by an operation that preserves the invariants.
    fn from_trusted(values: Vec<T>) -> Self {
        debug_assert!(values.len() >= 9);
        debug_assert!(values[0] == values[values.len() - 1]);
        Self { values }
    }

    /// Number of grid intervals `N`.
    pub fn nodes(&self) -> usize {
        self.values.len() - 1
    }

    /// The `N + 1` gauge values `R(φ_k)`.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn angle(&self, k: usize) -> T {
        grid_angle(self.nodes(), k)
    }

    pub fn step(&self) -> T {
        grid_step(self.nodes())
    }

    /// `R(φ)` at an arbitrary angle.
    pub fn gauge_at(&self, phi: T, lookup: Lookup) -> T {
        let nodes = self.nodes();
        let position = node_position(nodes, wrap_angle(phi));
        match lookup {
            Lookup::Nearest => self.values[nearest_node(nodes, position)],
            Lookup::Interpolate => {
                let (a, t) = bracket(nodes, position);
                self.interpolate(a, t)
            }
        }
    }

    #[inline]
    fn interpolate(&self, lower: usize, weight: T) -> T {
        (T::one() - weight) * self.values[lower] + weight * self.values[lower + 1]
    }

    /// `‖x‖ = |x| R(arg x)`.
    pub fn evaluate(&self, x: [T; 2], lookup: Lookup) -> T {
        let r = x[0].hypot(x[1]);
        if r == T::zero() {
            return T::zero();
        }
        r * self.gauge_at(x[1].atan2(x[0]), lookup)
    }

    /// Radii `1 / R(φ_k)` of the unit sphere.
    pub fn sphere_radii(&self) -> Vec<T> {
        self.values.iter().map(|v| v.recip()).collect()
    }

    /// `max_k |R(φ_k) - R(φ_k + π)|`.
    pub fn symmetry_defect(&self) -> T {
        let nodes = self.nodes();
        (0..nodes)
            .map(|k| (self.values[k] - self.values[antipode(nodes, k)]).abs())
            .fold(T::zero(), T::max)
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        self.symmetry_defect() <= T::lit(SYMMETRY_TOLERANCE)
    }

    /// Largest violation of the discrete chord bound
    /// `R_k ≤ (R_{k-1} + R_{k+1}) / (2 cos Δφ)`; non-positive for a convex
    /// unit ball.
    pub fn chord_violation(&self) -> T {
        chord_violation(&self.values)
    }

    /// Divides every value by the one at angle 0, so that `R°(0) = 1`.
    pub fn normalize(&self) -> Self {
        let pivot = self.values[self.nodes() / 2];
        Self::from_trusted(self.values.iter().map(|v| *v / pivot).collect())
    }

    /// Ratio bounds `(min_k R*_k / R_k, max_k R*_k / R_k)`.
    pub fn rho_bounds(&self, r_star: &[T]) -> Result<(T, T)> {
        self.check_len(r_star.len())?;
        let nodes = self.nodes();
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for (s, r) in r_star[..nodes].iter().zip(&self.values[..nodes]) {
            let q = *s / *r;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        Ok((lo, hi))
    }

    /// Max-relaxation step: `R_next(φ_k) = max(R(φ_k), R*(φ_k) / γ)`.
    pub fn relax_update(&self, r_star: &[T], gamma: T) -> Result<Self> {
        self.check_len(r_star.len())?;
        if !(gamma > T::zero() && gamma.is_finite()) {
            return Err(Error::InvalidGauge(format!("relaxation factor {gamma} is not positive")));
        }
        let values = self
            .values
            .iter()
            .zip(r_star)
            .map(|(r, s)| r.max(*s / gamma))
            .collect();
        Ok(Self::from_trusted(values))
    }

    /// Eccentricity of `self` with respect to `other`: the ratio of the largest
    /// to the smallest node-wise quotient `R_self / R_other`.
    pub fn eccentricity(&self, other: &Self) -> Result<T> {
        let (lo, hi) = other.rho_bounds(&self.values)?;
        Ok(hi / lo)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.values.len() {
            return Err(Error::GridMismatch {
                expected: self.nodes(),
                actual: len.saturating_sub(1),
            });
        }
        Ok(())
    }
}

/// Stretch, image angle and lookup indices of one matrix on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTransform<T> {
    /// `H(φ_k) = |A (cos φ_k, sin φ_k)|`.
    pub stretch: Vec<T>,
    /// `Φ(φ_k) = atan2` of the image vector, in `[-π, π]`.
    pub image_angle: Vec<T>,
    /// Nearest node of `Φ(φ_k)`, in `0..=N`.
    pub nearest: Vec<usize>,
    /// Lower bracketing node of `Φ(φ_k)`, in `0..N`, and the upper node's weight.
    pub bracket: Vec<(usize, T)>,
}

/// Per-matrix [`MatrixTransform`]s for a whole set on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformTables<T> {
    nodes: usize,
    transforms: Vec<MatrixTransform<T>>,
}

impl<T: Scalar> TransformTables<T> {
    /// Samples every matrix of `set` on an `nodes`-interval grid.
    ///
    /// Only the half-turn `φ ∈ [-π, 0)` is sampled directly; the other half
    /// is filled from `A(-x) = -A x`, so antipodal nodes carry identical
    /// stretches and antipodal image indices.
    pub fn build(set: &MatrixSet<T>, nodes: usize) -> Result<Self> {
        check_node_count(nodes)?;
        let transforms = set
            .matrices()
            .iter()
            .map(|m| Self::sample(m, nodes))
            .collect();
        Ok(Self { nodes, transforms })
    }

    fn sample(m: &Matrix2<T>, nodes: usize) -> MatrixTransform<T> {
        let half = nodes / 2;
        let len = nodes + 1;
        let mut t = MatrixTransform {
            stretch: Vec::with_capacity(len),
            image_angle: Vec::with_capacity(len),
            nearest: Vec::with_capacity(len),
            bracket: Vec::with_capacity(len),
        };
        for k in 0..half {
            let (s, c) = grid_angle::<T>(nodes, k).sin_cos();
            let [x, y] = m.apply([c, s]);
            let phi = y.atan2(x);
            let position = node_position(nodes, phi);
            t.stretch.push(x.hypot(y));
            t.image_angle.push(phi);
            t.nearest.push(nearest_node(nodes, position));
            t.bracket.push(bracket(nodes, position));
        }
        for k in 0..half {
            let phi = t.image_angle[k];
            let flipped = if phi <= T::zero() { phi + T::PI() } else { phi - T::PI() };
            let near = t.nearest[k];
            let (lower, weight) = t.bracket[k];
            t.stretch.push(t.stretch[k]);
            t.image_angle.push(flipped);
            t.nearest.push(if near == nodes { half } else { antipode(nodes, near) });
            t.bracket.push((antipode(nodes, lower), weight));
        }
        t.stretch.push(t.stretch[0]);
        t.image_angle.push(t.image_angle[0]);
        t.nearest.push(t.nearest[0]);
        t.bracket.push(t.bracket[0]);
        t
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn transforms(&self) -> &[MatrixTransform<T>] {
        &self.transforms
    }

    /// `H_i(φ_k) R(Φ_i(φ_k))` for matrix `i` at every node: the gauge of the
    /// norm `x ↦ ‖A_i x‖`. Zero where the stretch vanishes.
    pub fn image_gauge(&self, i: usize, norm: &PolarNorm<T>, lookup: Lookup) -> Result<Vec<T>> {
        norm.check_len(self.nodes + 1)?;
        let t = &self.transforms[i];
        let cutoff = T::lit(ZERO_STRETCH);
        let out = (0..=self.nodes)
            .map(|k| {
                let h = t.stretch[k];
                if h < cutoff {
                    return T::zero();
                }
                let r = match lookup {
                    Lookup::Nearest => norm.values[t.nearest[k]],
                    Lookup::Interpolate => {
                        let (a, w) = t.bracket[k];
                        norm.interpolate(a, w)
                    }
                };
                h * r
            })
            .collect();
        Ok(out)
    }
}

/// `R*(φ_k) = max_i H_i(φ_k) R(Φ_i(φ_k))`, the gauge of `x ↦ max_i ‖A_i x‖`.
pub fn composite_r_star<T: Scalar>(
    norm: &PolarNorm<T>,
    tables: &TransformTables<T>,
    lookup: Lookup,
) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); tables.nodes + 1];
    for i in 0..tables.transforms.len() {
        for (o, v) in out.iter_mut().zip(tables.image_gauge(i, norm, lookup)?) {
            *o = o.max(v);
        }
    }
    Ok(out)
}

/// `sin Δφ / sin 2Δφ = 1 / (2 cos Δφ)`.
fn chord_factor<T: Scalar>(nodes: usize) -> T {
    let step = grid_step::<T>(nodes);
    step.sin() / (T::lit(2.0) * step).sin()
}

/// One pass of local convexification over `N + 1` gauge values:
/// `v_k ← min(v_k, (v_{k-1} + v_{k+1}) sin Δφ / sin 2Δφ)`, with neighbours
/// taken cyclically and always from the input. The result keeps
/// `v_0 = v_N`.
pub fn convexify<T: Scalar>(values: &[T]) -> Vec<T> {
    assert!(values.len() >= 3, "convexify needs at least two grid intervals");
    let nodes = values.len() - 1;
    let s = chord_factor::<T>(nodes);
    let mut out = Vec::with_capacity(values.len());
    out.push(values[0].min(s * (values[1] + values[nodes - 1])));
    for k in 1..nodes {
        out.push(values[k].min(s * (values[k - 1] + values[k + 1])));
    }
    out.push(out[0]);
    out
}

/// Repeats [`convexify`] until one more pass would move no value by more
/// than `tolerance` times the largest value, or `max_passes` is reached.
/// Returns the values and the number of passes applied.
pub fn convexify_until_stable<T: Scalar>(
    values: &[T],
    tolerance: T,
    max_passes: usize,
) -> (Vec<T>, usize) {
    let mut current = values.to_vec();
    for pass in 0..max_passes {
        let next = convexify(&current);
        let scale = next.iter().copied().fold(T::zero(), T::max);
        let change = current
            .iter()
            .zip(&next)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max);
        current = next;
        if change <= tolerance * scale {
            return (current, pass + 1);
        }
    }
    (current, max_passes)
}

/// Largest `v_k - (v_{k-1} + v_{k+1}) / (2 cos Δφ)` over the cyclic grid.
pub fn chord_violation<T: Scalar>(values: &[T]) -> T {
    let nodes = values.len() - 1;
    let s = chord_factor::<T>(nodes);
    (0..nodes)
        .map(|k| {
            let prev = if k == 0 { values[nodes - 1] } else { values[k - 1] };
            values[k] - s * (prev + values[k + 1])
        })
        .fold(T::neg_infinity(), T::max)
}

/// The action of a matrix set on gauges: `R ↦ R*`, optionally followed by
/// one convexification pass.
#[derive(Debug, Clone)]
pub struct ImageOperator<T> {
    tables: TransformTables<T>,
    lookup: Lookup,
    convexify: bool,
}

impl<T: Scalar> ImageOperator<T> {
    pub fn new(set: &MatrixSet<T>, nodes: usize, lookup: Lookup, convexify: bool) -> Result<Self> {
        Ok(Self::from_tables(TransformTables::build(set, nodes)?, lookup, convexify))
    }

    pub fn from_tables(tables: TransformTables<T>, lookup: Lookup, convexify: bool) -> Self {
        Self { tables, lookup, convexify }
    }

    pub fn tables(&self) -> &TransformTables<T> {
        &self.tables
    }

    pub fn lookup(&self) -> Lookup {
        self.lookup
    }

    pub fn convexifies(&self) -> bool {
        self.convexify
    }

    pub fn apply(&self, norm: &PolarNorm<T>) -> Result<Vec<T>> {
        let r_star = composite_r_star(norm, &self.tables, self.lookup)?;
        Ok(if self.convexify { convexify(&r_star) } else { r_star })
    }
}
