//! Max-relaxation iteration for Barabanov norms.
//!
//! Each step takes the current norm `‖·‖ₙ`, forms its image
//! `x ↦ maxᵢ ‖Aᵢ x‖ₙ`, and reads off
//!
//! ```text
//! ρₙ⁺ = max_x maxᵢ‖Aᵢx‖ₙ / ‖x‖ₙ      ρₙ⁻ = min_x maxᵢ‖Aᵢx‖ₙ / ‖x‖ₙ      γₙ = γ(ρₙ⁻, ρₙ⁺)
//! ```
//!
//! then sets `‖x‖ₙ₊₁ = max{‖x‖ₙ, γₙ⁻¹ maxᵢ‖Aᵢx‖ₙ}` and rescales it so the
//! reference vector has norm one. For an irreducible set the interval
//! `[ρₙ⁻, ρₙ⁺]` contains the joint spectral radius at every step, shrinks
//! monotonically, and the rescaled norms converge to a Barabanov norm.

use crate::error::{Error, Result};
use crate::linalg::{Irreducibility, MatrixSet};
use crate::polar::{check_node_count, ImageOperator, Lookup, PolarNorm};
use crate::scalar::Scalar;

/// Mean used to pick the relaxation level `γ` inside `[ρ⁻, ρ⁺]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// `(t + s) / 2`
    #[default]
    Arithmetic,
    /// `√(ts)`
    Geometric,
    /// `2ts / (t + s)`
    Harmonic,
}

impl Averaging {
    pub fn eval<T: Scalar>(self, t: T, s: T) -> Result<T> {
        if !(t > T::zero() && s > T::zero()) {
            return Err(Error::NonPositiveArgument(
                t.to_f64().unwrap_or(f64::NAN),
                s.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(self.mean(t, s))
    }

    fn mean<T: Scalar>(self, t: T, s: T) -> T {
        let two = T::lit(2.0);
        match self {
            Averaging::Arithmetic => (t + s) / two,
            Averaging::Geometric => (t * s).sqrt(),
            Averaging::Harmonic => two * t * s / (t + s),
        }
    }

    /// The mean clamped into `[lo, hi]`; falls back to the arithmetic mean
    /// when the selected one degenerates (a zero lower bound).
    fn level<T: Scalar>(self, lo: T, hi: T) -> T {
        let g = self.mean(lo, hi);
        let g = if g > T::zero() && g.is_finite() { g } else { (lo + hi) / T::lit(2.0) };
        g.max(lo).min(hi)
    }
}

/// When the bracket `[ρ⁻, ρ⁺]` counts as tight enough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StoppingRule {
    /// `ρ⁺ - ρ⁻ < tolerance`
    #[default]
    AbsoluteGap,
    /// `(ρ⁺ - ρ⁻) / ρ⁺ < tolerance`
    RelativeGap,
}

impl StoppingRule {
    pub fn is_met<T: Scalar>(self, lo: T, hi: T, tolerance: T) -> bool {
        let gap = hi - lo;
        match self {
            StoppingRule::AbsoluteGap => gap < tolerance,
            StoppingRule::RelativeGap => gap < tolerance * hi,
        }
    }
}

/// A norm representation the max-relaxation loop can drive.
///
/// `Action` is whatever precomputed form of the matrix set the
/// representation needs to build the image norm `x ↦ maxᵢ ‖Aᵢ x‖`.
pub trait RelaxableNorm<T: Scalar>: Clone {
    type Action;
    type Image;

    fn image(&self, action: &Self::Action) -> Result<Self::Image>;

    /// `(min, max)` of `image(x) / self(x)` over nonzero `x`.
    fn ratio_bounds(&self, image: &Self::Image) -> Result<(T, T)>;

    /// `x ↦ max{self(x), image(x) / gamma}`.
    fn relax(&self, image: &Self::Image, gamma: T) -> Result<Self>;

    /// Rescaled so the reference vector has norm one.
    fn normalized(&self) -> Self;
}

impl<T: Scalar> RelaxableNorm<T> for PolarNorm<T> {
    type Action = ImageOperator<T>;
    type Image = Vec<T>;

    fn image(&self, action: &ImageOperator<T>) -> Result<Vec<T>> {
        action.apply(self)
    }

    fn ratio_bounds(&self, image: &Vec<T>) -> Result<(T, T)> {
        self.rho_bounds(image)
    }

    fn relax(&self, image: &Vec<T>, gamma: T) -> Result<Self> {
        self.relax_update(image, gamma)
    }

    fn normalized(&self) -> Self {
        self.normalize()
    }
}

/// One recorded step: the bracket computed from `‖·‖ₙ` and the level used
/// to build `‖·‖ₙ₊₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStep<T> {
    pub n: usize,
    pub rho_minus: T,
    pub rho_plus: T,
    pub gamma: T,
}

impl<T: Scalar> IterationStep<T> {
    pub fn gap(&self) -> T {
        self.rho_plus - self.rho_minus
    }

    pub fn midpoint(&self) -> T {
        (self.rho_plus + self.rho_minus) / T::lit(2.0)
    }
}

/// Loop parameters independent of the norm representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopParams<T> {
    pub tolerance: T,
    pub max_iters: usize,
    pub averaging: Averaging,
    pub stopping: StoppingRule,
    /// Keep every normalized iterate, for diagnostics.
    pub record_norms: bool,
}

/// Outcome of [`iterate`].
#[derive(Debug, Clone)]
pub struct Iteration<T, N> {
    pub steps: Vec<IterationStep<T>>,
    pub final_norm: N,
    pub converged: bool,
    /// Normalized norms `‖·‖ₙ°` for `n = 0, 1, …`; empty unless requested.
    pub history: Vec<N>,
}

/// Runs the max-relaxation loop from `initial` until the stopping rule
/// holds or `max_iters` steps were taken.
pub fn iterate<T, N>(initial: N, action: &N::Action, params: &LoopParams<T>) -> Result<Iteration<T, N>>
where
    T: Scalar,
    N: RelaxableNorm<T>,
{
    let mut norm = initial;
    let mut steps = Vec::new();
    let mut history = Vec::new();
    let mut converged = false;
    for n in 1..=params.max_iters {
        if params.record_norms {
            history.push(norm.normalized());
        }
        let image = norm.image(action)?;
        let (rho_minus, rho_plus) = norm.ratio_bounds(&image)?;
        if rho_plus.is_nan() || rho_plus <= T::zero() {
            return Err(Error::InvalidGauge("image norm vanished on the whole grid".into()));
        }
        let gamma = params.averaging.level(rho_minus, rho_plus);
        steps.push(IterationStep { n, rho_minus, rho_plus, gamma });
        norm = norm.relax(&image, gamma)?.normalized();
        if params.stopping.is_met(rho_minus, rho_plus, params.tolerance) {
            converged = true;
            break;
        }
    }
    if params.record_norms {
        history.push(norm.clone());
    }
    Ok(Iteration { steps, final_norm: norm, converged, history })
}

/// Settings for [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T> {
    /// Grid intervals `N`; even, at least 8.
    pub nodes: usize,
    pub tolerance: T,
    pub max_iters: usize,
    pub averaging: Averaging,
    pub lookup: Lookup,
    /// Apply one local convexification pass to every image gauge.
    pub convexify: bool,
    pub stopping: StoppingRule,
    /// Proceed on sets whose irreducibility test says reducible.
    pub force: bool,
    /// Starting gauge; the Euclidean norm when absent.
    pub initial_norm: Option<PolarNorm<T>>,
    pub record_norms: bool,
}

impl<T: Scalar> Default for RunConfig<T> {
    fn default() -> Self {
        Self {
            nodes: 3000,
            tolerance: T::lit(1e-3),
            max_iters: 1000,
            averaging: Averaging::Arithmetic,
            lookup: Lookup::Interpolate,
            convexify: true,
            stopping: StoppingRule::AbsoluteGap,
            force: false,
            initial_norm: None,
            record_norms: false,
        }
    }
}

impl<T: Scalar> RunConfig<T> {
    pub fn validate(&self) -> Result<()> {
        check_node_count(self.nodes)?;
        if !(self.tolerance > T::zero() && self.tolerance.is_finite()) {
            return Err(Error::InvalidTolerance(self.tolerance.to_f64().unwrap_or(f64::NAN)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidMaxIters);
        }
        if let Some(init) = &self.initial_norm {
            if init.nodes() != self.nodes {
                return Err(Error::GridMismatch { expected: self.nodes, actual: init.nodes() });
            }
        }
        Ok(())
    }

    pub fn image_operator(&self, set: &MatrixSet<T>) -> Result<ImageOperator<T>> {
        ImageOperator::new(set, self.nodes, self.lookup, self.convexify)
    }
}

/// Result of [`run`]: the step history and the a posteriori bracket.
#[derive(Debug, Clone)]
pub struct IterationReport<T> {
    pub steps: Vec<IterationStep<T>>,
    /// Normalized gauge after the last step.
    pub final_norm: PolarNorm<T>,
    pub converged: bool,
    pub tolerance_used: T,
    pub node_count: usize,
    pub irreducibility: Irreducibility<T>,
    /// Set when a reducible input was forced through; the bracket is then
    /// not backed by the convergence theory.
    pub unsupported_regime: bool,
    pub warnings: Vec<String>,
    /// Normalized iterates, when `record_norms` was set.
    pub history: Vec<PolarNorm<T>>,
}

impl<T: Scalar> IterationReport<T> {
    pub fn last_step(&self) -> &IterationStep<T> {
        self.steps.last().expect("a run takes at least one step")
    }

    /// `(ρ⁻, ρ⁺)` of the last step.
    pub fn interval(&self) -> (T, T) {
        let s = self.last_step();
        (s.rho_minus, s.rho_plus)
    }

    pub fn midpoint(&self) -> T {
        self.last_step().midpoint()
    }

    pub fn gap(&self) -> T {
        self.last_step().gap()
    }

    pub fn iterations(&self) -> usize {
        self.steps.len()
    }
}

/// Computes the joint spectral radius bracket and a Barabanov gauge for a
/// set of 2×2 matrices.
///
/// Reducible sets are refused with [`Error::Reducible`] unless
/// `config.force` is set; an inconclusive irreducibility test proceeds with a
/// warning.
pub fn run<T: Scalar>(set: &MatrixSet<T>, config: &RunConfig<T>) -> Result<IterationReport<T>> {
    config.validate()?;
    let irreducibility = set.irreducibility();
    let mut warnings = Vec::new();
    let mut unsupported_regime = false;
    match irreducibility {
        Irreducibility::Irreducible { .. } => {}
        Irreducibility::Inconclusive { margin, .. } => warnings.push(format!(
            "irreducibility test inconclusive (common-eigenvector margin {margin:e})"
        )),
        Irreducibility::Reducible { direction, .. } => {
            if !config.force {
                return Err(Error::Reducible(
                    direction[0].to_f64().unwrap_or(f64::NAN),
                    direction[1].to_f64().unwrap_or(f64::NAN),
                ));
            }
            unsupported_regime = true;
            warnings.push("reducible set forced through: bounds are not certified".into());
        }
    }

    let operator = config.image_operator(set)?;
    let initial = match &config.initial_norm {
        Some(n) => n.clone(),
        None => PolarNorm::euclidean(config.nodes)?,
    };
    let params = LoopParams {
        tolerance: config.tolerance,
        max_iters: config.max_iters,
        averaging: config.averaging,
        stopping: config.stopping,
        record_norms: config.record_norms,
    };
    let it = iterate(initial, &operator, &params)?;
    if !it.converged {
        let last = it.steps.last().expect("max_iters >= 1");
        warnings.push(format!(
            "not converged after {} iterations; gap {:e} above tolerance",
            it.steps.len(),
            last.gap().to_f64().unwrap_or(f64::NAN)
        ));
    }
    Ok(IterationReport {
        steps: it.steps,
        final_norm: it.final_norm,
        converged: it.converged,
        tolerance_used: config.tolerance,
        node_count: config.nodes,
        irreducibility,
        unsupported_regime,
        warnings,
        history: it.history,
    })
}

/// Grid residual of the Barabanov condition `ρ‖x‖ = maxᵢ‖Aᵢx‖`:
/// `max_k |R*(φ_k) / R(φ_k) - ρ|`, with `R*` formed by `operator`.
pub fn barabanov_residual<T: Scalar>(
    norm: &PolarNorm<T>,
    operator: &ImageOperator<T>,
    rho: T,
) -> Result<T> {
    let r_star = operator.apply(norm)?;
    let nodes = norm.nodes();
    Ok(r_star[..nodes]
        .iter()
        .zip(&norm.values()[..nodes])
        .map(|(s, r)| (*s / *r - rho).abs())
        .fold(T::zero(), T::max))
}
