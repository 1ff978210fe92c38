//! The extremal affine function of a polytope relative to a set of excluded
//! facets.
//!
//! `A` is the unique affine function for which
//!
//! ```text
//! L(f) = ∫_{∂P ∖ E} f dσ − ∫_P f·A dλ
//! ```
//!
//! vanishes on every affine `f`. Testing against `{1, x_1, …, x_n}` gives the
//! square system `G a = b` with `G` the moment Gram matrix and `b` the
//! boundary moments, solved exactly. With `E = ∅` this is the classical
//! extremal affine function of a compact toric manifold.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::linalg::{self, Matrix};
use crate::moments::{self, MAX_DEGREE};
use crate::polynomial::Polynomial;
use crate::polytope::{DelzantPolytope, FacetChart};
use crate::rational::{dot, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFunction {
    pub constant: Rational,
    pub gradient: Vec<Rational>,
}

impl AffineFunction {
    pub fn new(constant: Rational, gradient: Vec<Rational>) -> Self {
        Self { constant, gradient }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(Rational::zero(), vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        &self.constant + dot(&self.gradient, x)
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::affine(&self.constant, &self.gradient)
    }

    pub fn is_constant(&self) -> bool {
        self.gradient.iter().all(Zero::is_zero)
    }

    /// `x ↦ A(T x + v)`.
    pub fn pullback(&self, t: &IntMatrix, v: &[Rational]) -> Self {
        let n = self.dim();
        let gradient = (0..n)
            .map(|j| {
                (0..n).fold(Rational::zero(), |acc, i| acc + &self.gradient[i] * BigInt::from(t[i][j]))
            })
            .collect();
        Self::new(self.eval(v), gradient)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalSolveReport {
    pub affine: AffineFunction,
    pub gram: Matrix,
    pub rhs: Vec<Rational>,
    /// `G a − b`; always exactly zero on success.
    pub residuals: Vec<Rational>,
    /// More than one facet was excluded. The defining functional is only
    /// established for a single cusp divisor.
    pub multiple_exclusions: bool,
}

pub fn extremal_affine(p: &DelzantPolytope, excluded: &BTreeSet<usize>) -> Result<ExtremalSolveReport> {
    let n = p.dim();
    let interior = moments::polytope_moments(p)?;
    let boundary = moments::boundary_moments(p, excluded)?.total(n);
    let gram = interior.gram();
    if !linalg::is_positive_definite(&gram) {
        return Err(Error::SingularGram);
    }
    let mut rhs = Vec::with_capacity(n + 1);
    rhs.push(boundary.volume);
    rhs.extend(boundary.first_moments);
    let coeffs = linalg::solve_square(&gram, &rhs).ok_or(Error::SingularGram)?;
    let residuals: Vec<Rational> = linalg::mat_vec(&gram, &coeffs)
        .into_iter()
        .zip(&rhs)
        .map(|(lhs, r)| lhs - r)
        .collect();
    if residuals.iter().any(|r| !r.is_zero()) {
        return Err(Error::Internal("nonzero residual in extremal solve".into()));
    }
    let affine = AffineFunction::new(coeffs[0].clone(), coeffs[1..].to_vec());
    Ok(ExtremalSolveReport { affine, gram, rhs, residuals, multiple_exclusions: excluded.len() > 1 })
}

/// `L(q) = ∫_{∂P∖E} q dσ − ∫_P q·A dλ` with `A` the extremal affine function
/// of `(P, E)`.
pub fn relative_futaki(p: &DelzantPolytope, excluded: &BTreeSet<usize>, q: &Polynomial) -> Result<Rational> {
    let degree = q.degree();
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree, max: MAX_DEGREE });
    }
    if q.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    let a = extremal_affine(p, excluded)?.affine.to_polynomial();
    let boundary = moments::boundary_moments(p, excluded)?.total(p.dim()).integrate(q)?;
    let interior = moments::integrate_cubic(p, &(q * &a))?;
    Ok(boundary - interior)
}

/// Pullback of `a` along the chart of a facet, in chart coordinates.
pub fn restrict_affine(a: &AffineFunction, chart: &FacetChart) -> Result<AffineFunction> {
    if a.dim() != chart.ambient_dim {
        return Err(Error::DimensionMismatch { expected: chart.ambient_dim, got: a.dim() });
    }
    let gradient = chart
        .basis
        .iter()
        .map(|b| {
            b.iter()
                .zip(&a.gradient)
                .fold(Rational::zero(), |acc, (&bi, g)| acc + g * BigInt::from(bi))
        })
        .collect();
    Ok(AffineFunction::new(a.eval(&chart.origin), gradient))
}
