//! Rational polytopes in halfspace form `⟨u, x⟩ ≥ c` with primitive inward
//! integer normals.
//!
//! Construction validates boundedness, full dimension and irredundancy, and
//! caches the vertex list. Everything is exact; vertices come from solving
//! every `n`-subset of facet equations.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};
use crate::linalg::{self, Matrix};
use crate::rational::{dot_int, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    /// Inward primitive normal.
    pub normal: Vec<i64>,
    pub offset: Rational,
    pub label: Option<String>,
}

impl Facet {
    pub fn new(normal: Vec<i64>, offset: Rational) -> Self {
        Self { normal, offset, label: None }
    }

    pub fn labelled(normal: Vec<i64>, offset: Rational, label: &str) -> Self {
        Self { normal, offset, label: Some(label.to_string()) }
    }

    /// `⟨u, x⟩ − c`; nonnegative exactly on the halfspace.
    pub fn slack(&self, x: &[Rational]) -> Rational {
        dot_int(&self.normal, x) - &self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rational>,
    /// Sorted indices of the facets tight at `point`.
    pub active_facets: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantPolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexViolation {
    pub vertex: usize,
    pub point: Vec<Rational>,
    pub active_facets: Vec<usize>,
    /// Determinant of the active normals; `None` when more than `n` facets
    /// meet at the vertex.
    pub determinant: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantReport {
    pub is_delzant: bool,
    pub violations: Vec<VertexViolation>,
}

/// Lattice-adapted affine chart of a facet hyperplane.
///
/// `map(y) = origin + Σ y_j basis_j`. Together with `transversal`
/// (`⟨u, transversal⟩ = 1`) the basis vectors form a unimodular frame, so the
/// chart carries `Zⁿ⁻¹` onto the hyperplane lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetChart {
    pub facet: usize,
    pub ambient_dim: usize,
    pub origin: Vec<Rational>,
    pub basis: Vec<Vec<i64>>,
    pub transversal: Vec<i64>,
    /// Facets of the ambient polytope adjacent to `facet`, in the order they
    /// appear as facets of the chart polytope.
    pub neighbors: Vec<usize>,
    inverse: IntMatrix,
}

impl FacetChart {
    pub fn map(&self, y: &[Rational]) -> Vec<Rational> {
        let mut x = self.origin.clone();
        for (yj, b) in y.iter().zip(&self.basis) {
            for (xi, &bi) in x.iter_mut().zip(b) {
                *xi += yj * BigInt::from(bi);
            }
        }
        x
    }

    /// Chart coordinates of a point on the facet hyperplane.
    pub fn coordinates(&self, x: &[Rational]) -> Vec<Rational> {
        self.inverse[1..].iter().map(|row| dot_int(row, x)).collect()
    }
}

pub(crate) fn cmp_points(a: &[Rational], b: &[Rational]) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Dimension of the affine hull of the given points.
pub(crate) fn affine_rank(points: &[&[Rational]]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let n = first.len();
    let diffs: Matrix = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&diffs, n)
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

fn normals_matrix(facets: &[Facet], idx: &[usize]) -> Matrix {
    idx.iter()
        .map(|&i| facets[i].normal.iter().map(|&x| int(x)).collect())
        .collect()
}

/// Vertices of `{x : ⟨u_i, x⟩ ≥ c_i}` by exhaustive `n`-subset solving, sorted
/// lexicographically. Does not check boundedness.
pub fn brute_force_vertices(dim: usize, facets: &[Facet]) -> Vec<Vertex> {
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for subset in subsets(facets.len(), dim) {
        let a = normals_matrix(facets, &subset);
        let b: Vec<Rational> = subset.iter().map(|&i| facets[i].offset.clone()).collect();
        let Some(x) = linalg::solve_square(&a, &b) else {
            continue;
        };
        if facets.iter().all(|f| !f.slack(&x).is_negative()) && !points.contains(&x) {
            points.push(x);
        }
    }
    points.sort_by(|a, b| cmp_points(a, b));
    points
        .into_iter()
        .map(|point| {
            let active_facets = facets
                .iter()
                .enumerate()
                .filter(|(_, f)| f.slack(&point).is_zero())
                .map(|(i, _)| i)
                .collect();
            Vertex { point, active_facets }
        })
        .collect()
}

/// Whether the recession cone `{d : ⟨u_i, d⟩ ≥ 0}` is nonzero.
fn has_recession_direction(dim: usize, facets: &[Facet]) -> bool {
    let all: Vec<usize> = (0..facets.len()).collect();
    if linalg::rank(&normals_matrix(facets, &all), dim) < dim {
        return true;
    }
    // Pointed cone: nonzero iff some extreme ray exists, and extreme rays are
    // cut out by n-1 independent tight constraints.
    for subset in subsets(facets.len(), dim - 1) {
        let a = normals_matrix(facets, &subset);
        let ns = linalg::nullspace(&a, dim);
        if ns.len() != 1 {
            continue;
        }
        let d = &ns[0];
        let values: Vec<Rational> = facets.iter().map(|f| dot_int(&f.normal, d)).collect();
        if values.iter().all(|v| !v.is_negative()) || values.iter().all(|v| !v.is_positive()) {
            return true;
        }
    }
    false
}

impl DelzantPolytope {
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for (i, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: f.normal.len() });
            }
            if f.normal.iter().all(|&x| x == 0) {
                return Err(Error::ZeroNormal { facet: i });
            }
            let g = lattice::gcd_all(&f.normal);
            if g != 1 {
                return Err(Error::NotPrimitive { facet: i, gcd: g });
            }
        }
        if facets.len() <= dim {
            return Err(Error::UnboundedPolytope);
        }
        if has_recession_direction(dim, &facets) {
            return Err(Error::UnboundedPolytope);
        }
        let vertices = brute_force_vertices(dim, &facets);
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let pts: Vec<&[Rational]> = vertices.iter().map(|v| v.point.as_slice()).collect();
        if affine_rank(&pts) < dim {
            return Err(Error::DegeneratePolytope);
        }
        for i in 0..facets.len() {
            if facets[..i]
                .iter()
                .any(|f| f.normal == facets[i].normal && f.offset == facets[i].offset)
            {
                return Err(Error::RedundantFacet { facet: i });
            }
            let on: Vec<&[Rational]> = vertices
                .iter()
                .filter(|v| v.active_facets.contains(&i))
                .map(|v| v.point.as_slice())
                .collect();
            if on.is_empty() || affine_rank(&on) < dim - 1 {
                return Err(Error::RedundantFacet { facet: i });
            }
        }
        Ok(Self { dim, facets, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, i: usize) -> Result<&Facet> {
        self.facets
            .get(i)
            .ok_or(Error::FacetOutOfRange { facet: i, count: self.facets.len() })
    }

    /// Index of the facet with the given label.
    pub fn facet_by_label(&self, label: &str) -> Option<usize> {
        self.facets.iter().position(|f| f.label.as_deref() == Some(label))
    }

    /// All vertices with their active facets, sorted lexicographically.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_index(&self, point: &[Rational]) -> Option<usize> {
        self.vertices.iter().position(|v| v.point == point)
    }

    /// Indices (into `vertices()`) of the vertices lying on facet `f`.
    pub fn facet_vertices(&self, f: usize) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.active_facets.contains(&f))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn is_delzant(&self) -> DelzantReport {
        let violations: Vec<VertexViolation> = self
            .vertices
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                let determinant = (v.active_facets.len() == self.dim)
                    .then(|| linalg::det(&normals_matrix(&self.facets, &v.active_facets)));
                let ok = matches!(&determinant, Some(d) if d.abs() == int(1));
                (!ok).then(|| VertexViolation {
                    vertex: i,
                    point: v.point.clone(),
                    active_facets: v.active_facets.clone(),
                    determinant,
                })
            })
            .collect();
        DelzantReport { is_delzant: violations.is_empty(), violations }
    }

    /// The lattice chart of facet `f` built from the Hermite completion of its
    /// normal.
    pub fn facet_chart(&self, f: usize) -> Result<FacetChart> {
        let facet = self.facet(f)?;
        if self.dim < 2 {
            return Err(Error::PointFacet);
        }
        let u = lattice::complete_to_unimodular(&facet.normal)?;
        let inverse = lattice::unimodular_inverse(&u)?;
        let column = |j: usize| -> Vec<i64> { u.iter().map(|row| row[j]).collect() };
        let transversal = column(0);
        let origin = transversal.iter().map(|&w| &facet.offset * BigInt::from(w)).collect();
        let basis = (1..self.dim).map(column).collect();
        let on_f = self.facet_vertices(f);
        let neighbors = (0..self.facets.len())
            .filter(|&k| k != f)
            .filter(|&k| {
                let common: Vec<&[Rational]> = on_f
                    .iter()
                    .filter(|&&v| self.vertices[v].active_facets.contains(&k))
                    .map(|&v| self.vertices[v].point.as_slice())
                    .collect();
                !common.is_empty() && affine_rank(&common) == self.dim - 2
            })
            .collect();
        Ok(FacetChart {
            facet: f,
            ambient_dim: self.dim,
            origin,
            basis,
            transversal,
            neighbors,
            inverse,
        })
    }

    /// Facet `f` as a full-dimensional polytope in its lattice chart.
    pub fn facet_polytope(&self, f: usize) -> Result<(DelzantPolytope, FacetChart)> {
        let chart = self.facet_chart(f)?;
        let facets = chart
            .neighbors
            .iter()
            .map(|&k| {
                let fk = &self.facets[k];
                let pulled: Vec<i64> = chart
                    .basis
                    .iter()
                    .map(|b| b.iter().zip(&fk.normal).map(|(x, y)| x * y).sum())
                    .collect();
                let (normal, g) = lattice::primitivize(&pulled);
                let offset = (&fk.offset - dot_int(&fk.normal, &chart.origin)) / int(g);
                Facet { normal, offset, label: fk.label.clone() }
            })
            .collect();
        let poly = DelzantPolytope::new(self.dim - 1, facets).map_err(|e| match e {
            Error::DegeneratePolytope | Error::EmptyPolytope | Error::UnboundedPolytope => {
                Error::DegenerateFacet { facet: f }
            }
            other => other,
        })?;
        Ok((poly, chart))
    }

    /// Image under `x ↦ T x + v` for unimodular `T`.
    pub fn apply_unimodular(&self, t: &IntMatrix, v: &[Rational]) -> Result<Self> {
        if t.len() != self.dim || v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: t.len().min(v.len()) });
        }
        let tinv = lattice::unimodular_inverse(t)?;
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let normal: Vec<i64> = (0..self.dim)
                    .map(|j| (0..self.dim).map(|i| tinv[i][j] * f.normal[i]).sum())
                    .collect();
                let offset = &f.offset + dot_int(&normal, v);
                Facet { normal, offset, label: f.label.clone() }
            })
            .collect();
        Self::new(self.dim, facets)
    }

    pub fn translate(&self, v: &[Rational]) -> Result<Self> {
        let id: IntMatrix = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| i64::from(i == j)).collect())
            .collect();
        self.apply_unimodular(&id, v)
    }

    /// `c·P` for rational `c > 0`.
    pub fn dilate(&self, c: &Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::NonPositiveParameter(Box::new(c.clone())));
        }
        let facets = self
            .facets
            .iter()
            .map(|f| Facet { normal: f.normal.clone(), offset: &f.offset * c, label: f.label.clone() })
            .collect();
        Self::new(self.dim, facets)
    }

    pub(crate) fn with_extra_facet(&self, facet: Facet) -> Result<Self> {
        let mut facets = self.facets.clone();
        facets.push(facet);
        Self::new(self.dim, facets)
    }
}

/// The standard simplex `{x_i ≥ 0, Σ x_i ≤ 1}` with facets labelled
/// `x1..xn` and `hyp` (last).
pub fn standard_simplex(dim: usize) -> DelzantPolytope {
    let mut facets: Vec<Facet> = (0..dim)
        .map(|i| {
            let mut u = vec![0; dim];
            u[i] = 1;
            Facet::labelled(u, int(0), &format!("x{}", i + 1))
        })
        .collect();
    facets.push(Facet::labelled(vec![-1; dim], int(-1), "hyp"));
    DelzantPolytope::new(dim, facets).expect("standard simplex is valid")
}

/// The box `Π [0, side_i]`, facets ordered `x_i ≥ 0, −x_i ≥ −side_i`.
pub fn lattice_box(sides: &[Rational]) -> Result<DelzantPolytope> {
    let dim = sides.len();
    let mut facets = Vec::with_capacity(2 * dim);
    for (i, s) in sides.iter().enumerate() {
        let mut u = vec![0; dim];
        u[i] = 1;
        facets.push(Facet::labelled(u.clone(), int(0), &format!("x{}-", i + 1)));
        u[i] = -1;
        facets.push(Facet::labelled(u, -s.clone(), &format!("x{}+", i + 1)));
    }
    DelzantPolytope::new(dim, facets)
}

pub(crate) fn facet_key(f: &Facet) -> (Vec<i64>, Rational) {
    (f.normal.clone(), f.offset.clone())
}

/// Facet sets compared as unordered collections of `(normal, offset)`.
pub fn same_halfspaces(a: &DelzantPolytope, b: &DelzantPolytope) -> bool {
    let ka: BTreeSet<_> = a.facets.iter().map(facet_key).collect();
    let kb: BTreeSet<_> = b.facets.iter().map(facet_key).collect();
    a.dim == b.dim && ka == kb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn pt(xs: &[Rational]) -> Vec<Rational> {
        xs.to_vec()
    }

    #[test]
    fn simplex_vertices() {
        let p = standard_simplex(2);
        let pts: Vec<_> = p.vertices().iter().map(|v| v.point.clone()).collect();
        assert_eq!(
            pts,
            vec![pt(&[int(0), int(0)]), pt(&[int(0), int(1)]), pt(&[int(1), int(0)])]
        );
        assert!(p.vertices().iter().all(|v| v.active_facets.len() == 2));
    }

    #[test]
    fn chopped_simplex_vertices() {
        let p = standard_simplex(2)
            .with_extra_facet(Facet::new(vec![1, 1], ratio(1, 4)))
            .unwrap();
        let pts: Vec<_> = p.vertices().iter().map(|v| v.point.clone()).collect();
        assert_eq!(
            pts,
            vec![
                pt(&[int(0), ratio(1, 4)]),
                pt(&[int(0), int(1)]),
                pt(&[ratio(1, 4), int(0)]),
                pt(&[int(1), int(0)]),
            ]
        );
        assert!(p.is_delzant().is_delzant);
    }

    #[test]
    fn rejects_bad_input() {
        let unbounded = vec![Facet::new(vec![1, 0], int(0)), Facet::new(vec![0, 1], int(0))];
        assert_eq!(DelzantPolytope::new(2, unbounded), Err(Error::UnboundedPolytope));
        let strip = vec![
            Facet::new(vec![1, 0], int(0)),
            Facet::new(vec![-1, 0], int(-1)),
            Facet::new(vec![0, 1], int(0)),
        ];
        assert_eq!(DelzantPolytope::new(2, strip), Err(Error::UnboundedPolytope));
        let empty = vec![
            Facet::new(vec![1, 0], int(1)),
            Facet::new(vec![0, 1], int(0)),
            Facet::new(vec![-1, -1], int(0)),
        ];
        assert_eq!(DelzantPolytope::new(2, empty), Err(Error::EmptyPolytope));
        let flat = vec![
            Facet::new(vec![1, 0], int(0)),
            Facet::new(vec![-1, 0], int(0)),
            Facet::new(vec![0, 1], int(0)),
            Facet::new(vec![0, -1], int(-1)),
        ];
        assert_eq!(DelzantPolytope::new(2, flat), Err(Error::DegeneratePolytope));
        let doubled = vec![
            Facet::new(vec![2, 0], int(0)),
            Facet::new(vec![-1, 0], int(-1)),
            Facet::new(vec![0, 1], int(0)),
            Facet::new(vec![0, -1], int(-1)),
        ];
        assert_eq!(
            DelzantPolytope::new(2, doubled),
            Err(Error::NotPrimitive { facet: 0, gcd: 2 })
        );
        let redundant = vec![
            Facet::new(vec![1, 0], int(0)),
            Facet::new(vec![0, 1], int(0)),
            Facet::new(vec![-1, -1], int(-1)),
            Facet::new(vec![-1, -1], int(-2)),
        ];
        assert_eq!(DelzantPolytope::new(2, redundant), Err(Error::RedundantFacet { facet: 3 }));
    }

    #[test]
    fn non_delzant_examples() {
        // weighted projective plane: corner at (0,1) has determinant -2
        let wp = DelzantPolytope::new(
            2,
            vec![
                Facet::new(vec![1, 0], int(0)),
                Facet::new(vec![0, 1], int(0)),
                Facet::new(vec![-1, -2], int(-2)),
            ],
        )
        .unwrap();
        let rep = wp.is_delzant();
        assert!(!rep.is_delzant);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].point, pt(&[int(0), int(1)]));
        assert_eq!(rep.violations[0].determinant.as_ref().map(|d| d.abs()), Some(int(2)));

        // square pyramid: four facets meet at the apex
        let pyramid = DelzantPolytope::new(
            3,
            vec![
                Facet::new(vec![0, 0, 1], int(0)),
                Facet::new(vec![1, 0, -1], int(-1)),
                Facet::new(vec![-1, 0, -1], int(-1)),
                Facet::new(vec![0, 1, -1], int(-1)),
                Facet::new(vec![0, -1, -1], int(-1)),
            ],
        )
        .unwrap();
        let rep = pyramid.is_delzant();
        assert!(!rep.is_delzant);
        let apex = rep.violations.iter().find(|v| v.active_facets.len() == 4).unwrap();
        assert_eq!(apex.point, pt(&[int(0), int(0), int(1)]));
        assert_eq!(apex.determinant, None);
    }

    #[test]
    fn simplices_are_delzant() {
        for n in 1..=4 {
            assert!(standard_simplex(n).is_delzant().is_delzant);
        }
    }

    #[test]
    fn hypotenuse_chart_gives_unit_interval() {
        let p = standard_simplex(2);
        let (q, chart) = p.facet_polytope(2).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.vertices().len(), 2);
        let a = &q.vertices()[0].point[0];
        let b = &q.vertices()[1].point[0];
        assert_eq!(b - a, int(1));
        for v in q.vertices() {
            let x = chart.map(&v.point);
            assert_eq!(p.facet(2).unwrap().slack(&x), int(0));
            assert!(p.vertex_index(&x).is_some());
            assert_eq!(chart.coordinates(&x), v.point);
        }
        assert_eq!(chart.neighbors, vec![0, 1]);
    }

    #[test]
    fn cube_face_is_square() {
        let cube = lattice_box(&[int(1), int(1), int(1)]).unwrap();
        let (sq, _) = cube.facet_polytope(5).unwrap();
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.facets().len(), 4);
        assert_eq!(sq.vertices().len(), 4);
        assert!(sq.is_delzant().is_delzant);
    }

    #[test]
    fn interval_facets_are_points() {
        let seg = lattice_box(&[int(1)]).unwrap();
        assert_eq!(seg.facet_polytope(0).unwrap_err(), Error::PointFacet);
    }

    #[test]
    fn unimodular_maps() {
        let p = standard_simplex(2);
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(p.apply_unimodular(&id, &[int(0), int(0)]).unwrap(), p);

        let shear = vec![vec![1, 1], vec![0, 1]];
        let q = p.apply_unimodular(&shear, &[int(0), int(0)]).unwrap();
        assert!(q.is_delzant().is_delzant);
        let mut images: Vec<Vec<Rational>> = p
            .vertices()
            .iter()
            .map(|v| vec![&v.point[0] + &v.point[1], v.point[1].clone()])
            .collect();
        images.sort_by(|a, b| cmp_points(a, b));
        let got: Vec<_> = q.vertices().iter().map(|v| v.point.clone()).collect();
        assert_eq!(got, images);

        let v = [int(3), int(-2)];
        let t = p.translate(&v).unwrap();
        for (f, g) in p.facets().iter().zip(t.facets()) {
            assert_eq!(g.offset, &f.offset + dot_int(&f.normal, &v));
            assert_eq!(g.normal, f.normal);
        }

        let bad = vec![vec![2, 0], vec![0, 1]];
        assert_eq!(p.apply_unimodular(&bad, &v), Err(Error::NotUnimodular));
    }
}
