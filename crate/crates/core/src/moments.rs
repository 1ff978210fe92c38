//! Exact integrals of low-degree polynomials over a polytope and over its
//! facets.
//!
//! The polytope is fanned into simplices from its lexicographically smallest
//! vertex (recursively on faces), and each simplex contributes closed-form
//! moments. Facet integrals use the lattice measure `dσ`, characterised by
//! `dλ = ±dσ ∧ d⟨u, ·⟩` for the primitive normal `u`; equivalently the
//! Euclidean measure divided by `|u|`. In the facet's lattice chart that is
//! plain Lebesgue measure, which keeps everything rational.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::polynomial::Polynomial;
use crate::polytope::{affine_rank, DelzantPolytope};
use crate::rational::{factorial, Rational};

/// Largest degree accepted by [`integrate_polynomial`].
pub const MAX_DEGREE: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentData {
    pub volume: Rational,
    pub first_moments: Vec<Rational>,
    pub second_moments: Matrix,
}

impl MomentData {
    fn zero(dim: usize) -> Self {
        Self {
            volume: Rational::zero(),
            first_moments: vec![Rational::zero(); dim],
            second_moments: linalg::zeros(dim, dim),
        }
    }

    fn accumulate(&mut self, other: &MomentData) {
        self.volume += &other.volume;
        for (a, b) in self.first_moments.iter_mut().zip(&other.first_moments) {
            *a += b;
        }
        for (ra, rb) in self.second_moments.iter_mut().zip(&other.second_moments) {
            for (a, b) in ra.iter_mut().zip(rb) {
                *a += b;
            }
        }
    }

    /// Gram matrix of `{1, x_1, …, x_n}` in `L²(P)`.
    pub fn gram(&self) -> Matrix {
        let n = self.first_moments.len();
        let mut g = linalg::zeros(n + 1, n + 1);
        g[0][0] = self.volume.clone();
        for i in 0..n {
            g[0][i + 1] = self.first_moments[i].clone();
            g[i + 1][0] = self.first_moments[i].clone();
            for j in 0..n {
                g[i + 1][j + 1] = self.second_moments[i][j].clone();
            }
        }
        g
    }

    /// `∫ q` for `deg q ≤ 2`.
    pub fn integrate(&self, q: &Polynomial) -> Result<Rational> {
        let degree = q.degree();
        if degree > MAX_DEGREE {
            return Err(Error::UnsupportedDegree { degree, max: MAX_DEGREE });
        }
        if q.dim() != self.first_moments.len() {
            return Err(Error::DimensionMismatch { expected: self.first_moments.len(), got: q.dim() });
        }
        let mut total = Rational::zero();
        for (e, c) in q.terms() {
            let vars: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
                .collect();
            let m = match vars.as_slice() {
                [] => &self.volume,
                [i] => &self.first_moments[*i],
                [i, j] => &self.second_moments[*i][*j],
                _ => unreachable!("degree checked above"),
            };
            total += c * m;
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetMoments {
    pub facet: usize,
    /// `∫_F dσ`, the lattice volume of the facet.
    pub measure: Rational,
    pub first_moments: Vec<Rational>,
    pub second_moments: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMomentData {
    /// One entry per non-excluded facet, in facet order.
    pub facets: Vec<FacetMoments>,
    pub excluded: BTreeSet<usize>,
}

impl BoundaryMomentData {
    /// Sum over the included facets.
    pub fn total(&self, dim: usize) -> MomentData {
        let mut out = MomentData::zero(dim);
        for f in &self.facets {
            out.accumulate(&MomentData {
                volume: f.measure.clone(),
                first_moments: f.first_moments.clone(),
                second_moments: f.second_moments.clone(),
            });
        }
        out
    }
}

/// Volume and moments up to degree two of the simplex spanned by `points`
/// (`k + 1` points in `k` coordinates).
pub fn simplex_moments(points: &[Vec<Rational>]) -> MomentData {
    let k = points.len() - 1;
    let base = &points[0];
    let edges: Matrix = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let volume = linalg::det(&edges).abs() / Rational::from_integer(factorial(k));
    let sums: Vec<Rational> = (0..k)
        .map(|i| points.iter().fold(Rational::zero(), |acc, p| acc + &p[i]))
        .collect();
    let kk = BigInt::from(k);
    let first_moments = sums
        .iter()
        .map(|s| &volume * s / Rational::from_integer(&kk + 1))
        .collect();
    let c2 = &volume / Rational::from_integer((&kk + 1) * (&kk + 2));
    let second_moments = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let pp = points.iter().fold(Rational::zero(), |acc, p| acc + &p[i] * &p[j]);
                    &c2 * (pp + &sums[i] * &sums[j])
                })
                .collect()
        })
        .collect();
    MomentData { volume, first_moments, second_moments }
}

/// `∫_S q` over a simplex for a polynomial of any degree, by expanding in
/// barycentric coordinates and using the Dirichlet integral
/// `∫ bᵝ = k!·β!/(k+|β|)! · vol(S)`.
pub(crate) fn simplex_integral(points: &[Vec<Rational>], q: &Polynomial) -> Rational {
    let k = points.len() - 1;
    let volume = simplex_moments(points).volume;
    let mut total = Rational::zero();
    for (e, c) in q.terms() {
        let vars: Vec<usize> = e
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat_n(i, m as usize))
            .collect();
        let d = vars.len();
        let mut acc = Rational::zero();
        let mut tuple = vec![0usize; d];
        loop {
            let mut prod = Rational::from_integer(BigInt::from(1));
            for (&var, &j) in vars.iter().zip(&tuple) {
                prod *= &points[j][var];
            }
            if !prod.is_zero() {
                let mut counts = vec![0usize; k + 1];
                for &j in &tuple {
                    counts[j] += 1;
                }
                let beta = counts.iter().fold(BigInt::from(1), |a, &m| a * factorial(m));
                acc += prod * Rational::from_integer(beta);
            }
            // advance the base-(k+1) counter
            let mut pos = 0;
            while pos < d {
                tuple[pos] += 1;
                if tuple[pos] <= k {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == d {
                break;
            }
        }
        let scale = Rational::new(factorial(k), factorial(k + d));
        total += c * acc * scale;
    }
    total * volume
}

fn fan(p: &DelzantPolytope, face: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let verts = p.vertices();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for j in 0..p.facets().len() {
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&v| verts[v].active_facets.contains(&j))
            .collect();
        if sub.len() < k || sub.contains(&apex) || seen.contains(&sub) {
            continue;
        }
        let pts: Vec<&[Rational]> = sub.iter().map(|&v| verts[v].point.as_slice()).collect();
        if affine_rank(&pts) != k - 1 {
            continue;
        }
        let mut inner = Vec::new();
        fan(p, &sub, k - 1, &mut inner);
        for mut s in inner {
            s.insert(0, apex);
            out.push(s);
        }
        seen.insert(sub);
    }
}

/// Simplices (as vertex-index lists) of the fan triangulation of `P`.
pub fn triangulate(p: &DelzantPolytope) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..p.vertices().len()).collect();
    let mut out = Vec::new();
    fan(p, &all, p.dim(), &mut out);
    out
}

/// Simplices of the fan triangulation of facet `f`.
pub fn triangulate_facet(p: &DelzantPolytope, f: usize) -> Vec<Vec<usize>> {
    let face = p.facet_vertices(f);
    let mut out = Vec::new();
    fan(p, &face, p.dim() - 1, &mut out);
    out
}

fn simplex_points(p: &DelzantPolytope, s: &[usize]) -> Vec<Vec<Rational>> {
    s.iter().map(|&v| p.vertices()[v].point.clone()).collect()
}

pub fn polytope_moments(p: &DelzantPolytope) -> Result<MomentData> {
    let mut out = MomentData::zero(p.dim());
    for s in triangulate(p) {
        out.accumulate(&simplex_moments(&simplex_points(p, &s)));
    }
    if !out.volume.is_positive() {
        return Err(Error::DegeneratePolytope);
    }
    Ok(out)
}

/// `dσ`-moments of facet `f` in ambient coordinates.
pub fn facet_moments(p: &DelzantPolytope, f: usize) -> Result<FacetMoments> {
    p.facet(f)?;
    let n = p.dim();
    if n == 1 {
        let v = &p.vertices()[p.facet_vertices(f)[0]].point;
        return Ok(FacetMoments {
            facet: f,
            measure: Rational::from_integer(BigInt::from(1)),
            first_moments: v.clone(),
            second_moments: vec![vec![&v[0] * &v[0]]],
        });
    }
    let chart = p.facet_chart(f)?;
    let mut local = MomentData::zero(n - 1);
    for s in triangulate_facet(p, f) {
        let pts: Vec<Vec<Rational>> = s
            .iter()
            .map(|&v| chart.coordinates(&p.vertices()[v].point))
            .collect();
        local.accumulate(&simplex_moments(&pts));
    }
    if !local.volume.is_positive() {
        return Err(Error::DegenerateFacet { facet: f });
    }
    // push forward along x = o + B y
    let b = |i: usize, j: usize| Rational::from_integer(BigInt::from(chart.basis[j][i]));
    let o = &chart.origin;
    let bf: Vec<Rational> = (0..n)
        .map(|i| (0..n - 1).fold(Rational::zero(), |acc, j| acc + b(i, j) * &local.first_moments[j]))
        .collect();
    let first_moments: Vec<Rational> = (0..n).map(|i| &o[i] * &local.volume + &bf[i]).collect();
    let second_moments = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut bsb = Rational::zero();
                    for k in 0..n - 1 {
                        for l in 0..n - 1 {
                            bsb += b(i, k) * &local.second_moments[k][l] * b(j, l);
                        }
                    }
                    &o[i] * &o[j] * &local.volume + &o[i] * &bf[j] + &bf[i] * &o[j] + bsb
                })
                .collect()
        })
        .collect();
    Ok(FacetMoments { facet: f, measure: local.volume, first_moments, second_moments })
}

pub fn boundary_moments(p: &DelzantPolytope, excluded: &BTreeSet<usize>) -> Result<BoundaryMomentData> {
    for &e in excluded {
        p.facet(e)?;
    }
    let facets = (0..p.facets().len())
        .filter(|f| !excluded.contains(f))
        .map(|f| facet_moments(p, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryMomentData { facets, excluded: excluded.clone() })
}

/// Exact `∫_P q dλ` for `deg q ≤ 2`.
pub fn integrate_polynomial(p: &DelzantPolytope, q: &Polynomial) -> Result<Rational> {
    let degree = q.degree();
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree { degree, max: MAX_DEGREE });
    }
    polytope_moments(p)?.integrate(q)
}

/// `∫_P q dλ` for cubic integrands; needed when a quadratic is multiplied by
/// an affine weight.
pub(crate) fn integrate_cubic(p: &DelzantPolytope, q: &Polynomial) -> Result<Rational> {
    let degree = q.degree();
    if degree > 3 {
        return Err(Error::UnsupportedDegree { degree, max: 3 });
    }
    Ok(triangulate(p)
        .iter()
        .map(|s| simplex_integral(&simplex_points(p, s), q))
        .fold(Rational::zero(), |a, b| a + b))
}
