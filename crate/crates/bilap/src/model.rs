//! Shared domain types: parameter sets, boundary regimes, model geometries,
//! spectra, and rate fits.
//!
//! Everything here is an immutable value record, safe to clone and share
//! across threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An extended real number: finite, or plus infinity.
///
/// The Robin parameters β and γ may take the value +∞ (constrained limit
/// problems); −∞ never occurs. Represented as a tagged value, never as a
/// floating-point sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtReal {
    Finite(f64),
    #[serde(with = "inf_token")]
    Infinite,
}

mod inf_token {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let tok = String::deserialize(d)?;
        match tok.as_str() {
            "inf" | "+inf" | "infinite" => Ok(()),
            other => Err(de::Error::custom(format!(
                "expected \"inf\" for an infinite parameter, got {other:?}"
            ))),
        }
    }
}

impl ExtReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    /// Finite value, or 0 when infinite (the weight that enters assembly
    /// before the corresponding dofs are eliminated).
    pub fn finite_or_zero(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => 0.0,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::Finite(v)
    }
}

/// The parameter tuple (σ, α, β, γ) of the energy form.
///
/// σ is the Poisson ratio, α the tension, β and γ the transversal and normal
/// boundary response coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub sigma: f64,
    pub alpha: f64,
    pub beta: ExtReal,
    pub gamma: ExtReal,
}

impl ParamSet {
    pub fn new(sigma: f64, alpha: f64, beta: impl Into<ExtReal>, gamma: impl Into<ExtReal>) -> Self {
        ParamSet { sigma, alpha, beta: beta.into(), gamma: gamma.into() }
    }

    /// All-finite convenience constructor.
    pub fn finite(sigma: f64, alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::new(sigma, alpha, beta, gamma)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_beta(mut self, beta: impl Into<ExtReal>) -> Self {
        self.beta = beta.into();
        self
    }

    pub fn with_gamma(mut self, gamma: impl Into<ExtReal>) -> Self {
        self.gamma = gamma.into();
        self
    }
}

/// Which trace constraints are active, derived from which of β, γ are +∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryRegime {
    /// β, γ both finite: no essential constraint.
    FullRobin,
    /// γ = +∞: zero trace (hinged-type).
    NavierRobin,
    /// β = +∞: zero normal derivative.
    KuttlerSigillito,
    /// β = γ = +∞: clamped.
    Dirichlet,
}

/// Classify the boundary regime of a parameter set.
pub fn regime_of(params: &ParamSet) -> BoundaryRegime {
    match (params.beta.is_infinite(), params.gamma.is_infinite()) {
        (false, false) => BoundaryRegime::FullRobin,
        (false, true) => BoundaryRegime::NavierRobin,
        (true, false) => BoundaryRegime::KuttlerSigillito,
        (true, true) => BoundaryRegime::Dirichlet,
    }
}

/// Model geometry: interval, axis-aligned rectangle, or disk centred at the
/// origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainSpec {
    Interval { a: f64, b: f64 },
    Rectangle { lx: f64, ly: f64 },
    Disk { r: f64 },
}

impl DomainSpec {
    pub fn interval(a: f64, b: f64) -> Self {
        DomainSpec::Interval { a, b }
    }

    pub fn rectangle(lx: f64, ly: f64) -> Self {
        DomainSpec::Rectangle { lx, ly }
    }

    pub fn disk(r: f64) -> Self {
        DomainSpec::Disk { r }
    }

    pub fn dimension(&self) -> usize {
        match self {
            DomainSpec::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// Length (1-D) or area (2-D).
    pub fn volume(&self) -> f64 {
        match *self {
            DomainSpec::Interval { a, b } => b - a,
            DomainSpec::Rectangle { lx, ly } => lx * ly,
            DomainSpec::Disk { r } => std::f64::consts::PI * r * r,
        }
    }

    /// Counting measure of the endpoints (1-D) or perimeter (2-D).
    pub fn boundary_measure(&self) -> f64 {
        match *self {
            DomainSpec::Interval { .. } => 2.0,
            DomainSpec::Rectangle { lx, ly } => 2.0 * (lx + ly),
            DomainSpec::Disk { r } => 2.0 * std::f64::consts::PI * r,
        }
    }

    /// Mean curvature K = div ν of the boundary: 1/R on a disk, 0 on the
    /// flat pieces of the other model domains.
    pub fn mean_curvature(&self) -> f64 {
        match *self {
            DomainSpec::Disk { r } => 1.0 / r,
            _ => 0.0,
        }
    }
}

/// Validation failures for (domain, parameter) pairs.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("sigma = {sigma} outside the open interval ({lo}, 1) for dimension {dim}")]
    SigmaOutOfRange { sigma: f64, lo: f64, dim: usize },
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
}

/// Check σ against the coercivity interval (−1/(d−1), 1) and the domain
/// against positivity of its measure.
///
/// For the interval the form does not see σ (the Hessian and Laplacian
/// energies coincide in one dimension), so any σ ∈ (−1, 1) is accepted there.
pub fn validate(domain: &DomainSpec, params: &ParamSet) -> Result<(), ModelError> {
    match *domain {
        DomainSpec::Interval { a, b } => {
            if !(b > a) {
                return Err(ModelError::DegenerateDomain(format!("interval ({a}, {b})")));
            }
        }
        DomainSpec::Rectangle { lx, ly } => {
            if !(lx > 0.0 && ly > 0.0) {
                return Err(ModelError::DegenerateDomain(format!("rectangle {lx} x {ly}")));
            }
        }
        DomainSpec::Disk { r } => {
            if !(r > 0.0) {
                return Err(ModelError::DegenerateDomain(format!("disk of radius {r}")));
            }
        }
    }
    let dim = domain.dimension();
    // d = 1: the lower endpoint −1/(d−1) is undefined; σ is ignored by the
    // 1-D assembly, accept (−1, 1).
    let lo = if dim == 1 { -1.0 } else { -1.0 / (dim as f64 - 1.0) };
    if !(params.sigma > lo && params.sigma < 1.0) || !params.sigma.is_finite() {
        return Err(ModelError::SigmaOutOfRange { sigma: params.sigma, lo, dim });
    }
    Ok(())
}

/// Solver output: sorted eigenvalues with coefficient vectors in the discrete
/// basis, per-pair residual norms, and discretization metadata.
#[derive(Debug, Clone, Default)]
pub struct Spectrum {
    /// Eigenvalues in nondecreasing order, repeated with multiplicity.
    pub eigenvalues: Vec<f64>,
    /// Eigenvector coefficients, one `Vec<f64>` per eigenvalue, B-orthonormal.
    pub eigenvectors: Vec<Vec<f64>>,
    /// ‖A v − λ B v‖₂ per pair.
    pub residual_norms: Vec<f64>,
    /// Characteristic mesh size (0 when not mesh based).
    pub mesh_size: f64,
    /// Number of free degrees of freedom of the discrete problem.
    pub dof_count: usize,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// 1-based access, matching the λ_k numbering.
    pub fn lambda(&self, k: usize) -> f64 {
        assert!(k >= 1 && k <= self.eigenvalues.len(), "eigenvalue index {k} out of range");
        self.eigenvalues[k - 1]
    }

    pub fn sorted_ok(&self) -> bool {
        self.eigenvalues.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Fitted log–log slope over a sweep window.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RateFit {
    /// Least-squares slope of log|λ| against log|axis|.
    pub exponent: f64,
    /// Intercept of the same fit.
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    /// Index range [start, end) of the sweep rows used.
    pub window: (usize, usize),
}
