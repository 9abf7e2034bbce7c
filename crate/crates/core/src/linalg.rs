//! Closed-form kernels for real 2×2 matrices and finite sets of them.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A real 2×2 matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2<T> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

impl<T: Scalar> Matrix2<T> {
    pub const fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_rows(rows: [[T; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[T; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn diag(d1: T, d2: T) -> Self {
        Self::new(d1, T::zero(), T::zero(), d2)
    }

    /// Counter-clockwise rotation by `theta` radians.
    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    pub fn scale(&self, c: T) -> Self {
        Self::new(c * self.a11, c * self.a12, c * self.a21, c * self.a22)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn trace(&self) -> T {
        self.a11 + self.a22
    }

    pub fn det(&self) -> T {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn apply(&self, x: [T; 2]) -> [T; 2] {
        [
            self.a11 * x[0] + self.a12 * x[1],
            self.a21 * x[0] + self.a22 * x[1],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.a11 == T::zero() && self.a12 == T::zero() && self.a21 == T::zero() && self.a22 == T::zero()
    }

    fn is_scalar_multiple_of_identity(&self) -> bool {
        self.a12 == T::zero() && self.a21 == T::zero() && self.a11 == self.a22
    }

    /// Discriminant of the characteristic polynomial, in the form
    /// `(a11 - a22)^2 + 4 a12 a21` which does not cancel for nearly equal roots.
    fn discriminant(&self) -> T {
        let d = self.a11 - self.a22;
        d * d + T::lit(4.0) * self.a12 * self.a21
    }

    /// Real eigenvalues, larger magnitude first, or `None` for a complex pair.
    pub fn real_eigenvalues(&self) -> Option<(T, T)> {
        let disc = self.discriminant();
        if disc < T::zero() {
            return None;
        }
        let tr = self.trace();
        let root = disc.sqrt();
        // Sign-aware root: the dominant eigenvalue never subtracts nearly
        // equal quantities; the other comes from the determinant.
        let big = (tr + root.copysign(tr)) / T::lit(2.0);
        let small = if big == T::zero() { T::zero() } else { self.det() / big };
        Some((big, small))
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> T {
        match self.real_eigenvalues() {
            Some((big, _)) => big.abs(),
            // Complex conjugate pair: |λ|² = det > 0.
            None => self.det().abs().sqrt(),
        }
    }

    /// Largest singular value, `sqrt(ρ(AᵀA))`.
    pub fn induced_two_norm(&self) -> T {
        (self.transpose() * *self).spectral_radius().sqrt()
    }

    /// Unit eigenvector directions for the real eigenvalues.
    pub fn eigen_directions(&self) -> EigenDirections<T> {
        if self.is_scalar_multiple_of_identity() {
            return EigenDirections::Every;
        }
        let Some((l1, l2)) = self.real_eigenvalues() else {
            return EigenDirections::Complex;
        };
        let mut dirs = Vec::with_capacity(2);
        for lambda in [l1, l2] {
            if let Some(v) = self.null_direction(lambda) {
                if !dirs.iter().any(|d: &[T; 2]| cross(*d, v).abs() == T::zero()) {
                    dirs.push(v);
                }
            }
        }
        EigenDirections::Lines(dirs)
    }

    /// Direction spanning the kernel of `A - λI`, taken orthogonal to the
    /// larger of its two rows.
    fn null_direction(&self, lambda: T) -> Option<[T; 2]> {
        let r1 = [self.a11 - lambda, self.a12];
        let r2 = [self.a21, self.a22 - lambda];
        let n1 = r1[0].hypot(r1[1]);
        let n2 = r2[0].hypot(r2[1]);
        let (row, n) = if n1 >= n2 { (r1, n1) } else { (r2, n2) };
        if n == T::zero() {
            return None;
        }
        Some([-row[1] / n, row[0] / n])
    }
}

impl<T: Scalar> Mul for Matrix2<T> {
    type Output = Matrix2<T>;

    fn mul(self, rhs: Self) -> Self {
        Matrix2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

/// Real eigenvector structure of a 2×2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenDirections<T> {
    /// Complex eigenvalue pair: no real invariant line.
    Complex,
    /// Multiple of the identity: every line is invariant.
    Every,
    /// One or two invariant lines, as unit vectors.
    Lines(Vec<[T; 2]>),
}

#[inline]
fn cross<T: Scalar>(u: [T; 2], v: [T; 2]) -> T {
    u[0] * v[1] - u[1] * v[0]
}

/// `|sin|` of the angle between `d` and `A d`; zero when `A d = 0`.
fn misalignment<T: Scalar>(a: &Matrix2<T>, d: [T; 2]) -> T {
    let image = a.apply(d);
    let len = image[0].hypot(image[1]);
    if len == T::zero() {
        return T::zero();
    }
    let dlen = d[0].hypot(d[1]);
    (cross(d, image) / (len * dlen)).abs()
}

/// Outcome of the common-eigenvector test.
///
/// `margin` is the smallest, over candidate directions, of the largest
/// `|sin|` misalignment between the candidate and its images; it is 1 when
/// no candidate exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Irreducibility<T> {
    Irreducible { margin: T },
    Reducible { direction: [T; 2], margin: T },
    Inconclusive { direction: [T; 2], margin: T },
}

impl<T: Scalar> Irreducibility<T> {
    pub fn is_reducible(&self) -> bool {
        matches!(self, Irreducibility::Reducible { .. })
    }

    pub fn margin(&self) -> T {
        match *self {
            Irreducibility::Irreducible { margin }
            | Irreducibility::Reducible { margin, .. }
            | Irreducibility::Inconclusive { margin, .. } => margin,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Irreducibility::Irreducible { .. } => "irreducible",
            Irreducibility::Reducible { .. } => "reducible",
            Irreducibility::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Directions closer than this (in `|sin|`) are treated as equal.
pub const DIRECTION_TOLERANCE: f64 = 1e-9;

fn direction_tolerance<T: Scalar>() -> T {
    T::lit(DIRECTION_TOLERANCE).max(T::lit(64.0) * T::epsilon())
}

/// An ordered, non-empty family of nonzero finite 2×2 matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet<T> {
    matrices: Vec<Matrix2<T>>,
}

impl<T: Scalar> MatrixSet<T> {
    pub fn new(matrices: Vec<Matrix2<T>>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::EmptySet);
        }
        for (index, m) in matrices.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if m.is_zero() {
                return Err(Error::ZeroMatrix { index });
            }
        }
        Ok(Self { matrices })
    }

    pub fn matrices(&self) -> &[Matrix2<T>] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Every matrix multiplied by `c`. Fails if `c` is zero or not finite.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.matrices.iter().map(|m| m.scale(c)).collect())
    }

    /// The product `A[i_n] ··· A[i_2] A[i_1]` for zero-based `indices = [i_1, …, i_n]`:
    /// the first index is the rightmost factor. An empty chain is the identity.
    pub fn product_chain(&self, indices: &[usize]) -> Result<Matrix2<T>> {
        indices.iter().try_fold(Matrix2::identity(), |acc, &i| {
            self.matrices
                .get(i)
                .map(|m| *m * acc)
                .ok_or(Error::IndexOutOfRange { index: i, len: self.len() })
        })
    }

    /// Decides whether the set has a common real eigenvector, which for 2×2
    /// matrices is the only possible proper invariant subspace.
    pub fn irreducibility(&self) -> Irreducibility<T> {
        let tol = direction_tolerance::<T>();
        let mut candidates = Vec::new();
        let mut all_scalar = true;
        for m in &self.matrices {
            match m.eigen_directions() {
                EigenDirections::Complex => return Irreducibility::Irreducible { margin: T::one() },
                EigenDirections::Every => {}
                EigenDirections::Lines(lines) => {
                    all_scalar = false;
                    candidates.extend(lines);
                }
            }
        }
        if all_scalar {
            return Irreducibility::Reducible {
                direction: [T::one(), T::zero()],
                margin: T::zero(),
            };
        }

        let mut best: Option<([T; 2], T)> = None;
        for d in candidates {
            let worst = self
                .matrices
                .iter()
                .map(|m| misalignment(m, d))
                .fold(T::zero(), T::max);
            if best.is_none_or(|(_, b)| worst < b) {
                best = Some((d, worst));
            }
        }
        let Some((direction, margin)) = best else {
            return Irreducibility::Irreducible { margin: T::one() };
        };
        let ten = T::lit(10.0);
        if margin <= tol / ten {
            Irreducibility::Reducible { direction, margin }
        } else if margin < tol * ten {
            Irreducibility::Inconclusive { direction, margin }
        } else {
            Irreducibility::Irreducible { margin }
        }
    }
}
