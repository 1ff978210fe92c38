//! Decision procedures for the blow-up hypotheses.
//!
//! The toric divisor condition compares the extremal affine function of the
//! pair `(P, F)`, restricted to `F`, with the extremal affine function of `F`
//! itself: the condition holds iff they differ by a constant. The remaining
//! checks are finite-dimensional linear algebra on a [`MomentConfiguration`]:
//! balancing (`Σ a_i^{n−1} μ(p_i) ∈ t`), genericity
//! (`t + span μ(p_i) = h`) and the kernel condition (fields in `h` vanishing at
//! every `p_i` lie in `t`).

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::blowup::free_fixed_points;
use crate::error::{Error, Result};
use crate::extremal::{extremal_affine, restrict_affine, AffineFunction};
use crate::linalg::{self, Matrix};
use crate::polytope::DelzantPolytope;
use crate::rational::{dot, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub facet: usize,
    /// Extremal affine function of `(P, {F})` in ambient coordinates.
    pub pair: AffineFunction,
    /// `pair` pulled back to the facet chart.
    pub restricted: AffineFunction,
    /// Extremal affine function of the facet polytope, same chart.
    pub facet_affine: AffineFunction,
    pub difference_gradient: Vec<Rational>,
    pub satisfied: bool,
    /// `restricted − facet_affine`, a constant when satisfied.
    pub offset: Option<Rational>,
}

pub fn check_facet_condition(p: &DelzantPolytope, f: usize) -> Result<ObstructionReport> {
    p.facet(f)?;
    if let Some(bad) = p.is_delzant().violations.first() {
        return Err(Error::NotDelzant { vertex: bad.vertex });
    }
    let pair = extremal_affine(p, &BTreeSet::from([f]))?.affine;
    let (facet_poly, chart) = p.facet_polytope(f)?;
    if chart.facet != f {
        return Err(Error::ChartMismatch);
    }
    let restricted = restrict_affine(&pair, &chart)?;
    let facet_affine = extremal_affine(&facet_poly, &BTreeSet::new())?.affine;
    let difference_gradient: Vec<Rational> = restricted
        .gradient
        .iter()
        .zip(&facet_affine.gradient)
        .map(|(a, b)| a - b)
        .collect();
    let satisfied = difference_gradient.iter().all(Zero::is_zero);
    let offset = satisfied.then(|| &restricted.constant - &facet_affine.constant);
    Ok(ObstructionReport { facet: f, pair, restricted, facet_affine, difference_gradient, satisfied, offset })
}

/// Finite-dimensional data entering the blow-up hypotheses.
///
/// Vectors live in `h ≅ Q^{h_dim}` with the standard inner product; `t` is
/// given by a basis (columns), possibly empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentConfiguration {
    /// Complex dimension of the manifold.
    pub n: usize,
    pub h_dim: usize,
    /// `μ(p_i)`.
    pub points: Vec<Vec<Rational>>,
    /// `a_i > 0`.
    pub weights: Vec<Rational>,
    pub t_basis: Vec<Vec<Rational>>,
    /// Linear map on `h` whose kernel is the set of fields vanishing at every
    /// `p_i`; rows of length `h_dim`.
    pub eval_matrix: Option<Matrix>,
}

impl MomentConfiguration {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfiguration(msg));
        if self.n == 0 {
            return bad("complex dimension must be positive".into());
        }
        if self.weights.len() != self.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), got: self.weights.len() });
        }
        for v in self.points.iter().chain(&self.t_basis) {
            if v.len() != self.h_dim {
                return Err(Error::DimensionMismatch { expected: self.h_dim, got: v.len() });
            }
        }
        if let Some(e) = &self.eval_matrix {
            for row in e {
                if row.len() != self.h_dim {
                    return Err(Error::DimensionMismatch { expected: self.h_dim, got: row.len() });
                }
            }
        }
        if let Some(i) = self.weights.iter().position(|w| !w.is_positive()) {
            return bad(format!("weight {i} is not positive"));
        }
        if linalg::rank(&self.t_basis, self.h_dim) != self.t_basis.len() {
            return bad("t basis is not linearly independent".into());
        }
        Ok(())
    }

    /// Toric data with `t = h = Rⁿ`: points are the given vertices, all
    /// weights one, and every torus field vanishes at a fixed point.
    pub fn toric(p: &DelzantPolytope, points: Vec<Vec<Rational>>) -> Self {
        let n = p.dim();
        let t_basis = linalg::identity(n);
        let eval_matrix = Some(linalg::zeros((points.len() * n).max(1), n));
        let weights = vec![Rational::one(); points.len()];
        Self { n, h_dim: n, points, weights, t_basis, eval_matrix }
    }

    /// [`MomentConfiguration::toric`] at the fixed points off facet `f`.
    pub fn toric_free(p: &DelzantPolytope, f: usize) -> Result<Self> {
        let points = free_fixed_points(p, f)?.into_iter().map(|v| v.point).collect();
        Ok(Self::toric(p, points))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub satisfied: bool,
    /// `Σ a_i^{n−1} μ(p_i)`.
    pub sum: Vec<Rational>,
    /// Component of `sum` orthogonal to `t`.
    pub residual: Vec<Rational>,
}

pub fn check_balance(cfg: &MomentConfiguration) -> Result<BalanceReport> {
    cfg.validate()?;
    let mut sum = vec![Rational::zero(); cfg.h_dim];
    for (mu, a) in cfg.points.iter().zip(&cfg.weights) {
        let w = num_traits::pow(a.clone(), cfg.n - 1);
        for (s, m) in sum.iter_mut().zip(mu) {
            *s += &w * m;
        }
    }
    let residual = if cfg.t_basis.is_empty() {
        sum.clone()
    } else {
        // normal equations TᵀT c = Tᵀ s
        let k = cfg.t_basis.len();
        let gram: Matrix = (0..k)
            .map(|i| (0..k).map(|j| dot(&cfg.t_basis[i], &cfg.t_basis[j])).collect())
            .collect();
        let rhs: Vec<Rational> = cfg.t_basis.iter().map(|b| dot(b, &sum)).collect();
        let c = linalg::solve_square(&gram, &rhs)
            .ok_or_else(|| Error::InvalidConfiguration("t basis is degenerate".into()))?;
        (0..cfg.h_dim)
            .map(|i| {
                let proj = cfg
                    .t_basis
                    .iter()
                    .zip(&c)
                    .fold(Rational::zero(), |acc, (b, ci)| acc + ci * &b[i]);
                &sum[i] - proj
            })
            .collect()
    };
    let satisfied = residual.iter().all(Zero::is_zero);
    Ok(BalanceReport { satisfied, sum, residual })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityReport {
    pub satisfied: bool,
    pub rank: usize,
    pub h_dim: usize,
}

pub fn check_genericity(cfg: &MomentConfiguration) -> Result<GenericityReport> {
    cfg.validate()?;
    let vectors: Matrix = cfg.t_basis.iter().chain(&cfg.points).cloned().collect();
    let rank = linalg::rank(&vectors, cfg.h_dim);
    Ok(GenericityReport { satisfied: rank == cfg.h_dim, rank, h_dim: cfg.h_dim })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport {
    pub satisfied: bool,
    /// Basis of the fields vanishing at every point.
    pub null_basis: Vec<Vec<Rational>>,
    /// Indices into `null_basis` of vectors outside `t`.
    pub outside_t: Vec<usize>,
}

pub fn check_kernel_condition(cfg: &MomentConfiguration) -> Result<KernelReport> {
    cfg.validate()?;
    let e = cfg.eval_matrix.as_ref().ok_or(Error::MissingEvaluationData)?;
    let null_basis = linalg::nullspace(e, cfg.h_dim);
    let outside_t: Vec<usize> = null_basis
        .iter()
        .enumerate()
        .filter(|(_, v)| !linalg::in_span(&cfg.t_basis, v))
        .map(|(i, _)| i)
        .collect();
    Ok(KernelReport { satisfied: outside_t.is_empty(), null_basis, outside_t })
}
