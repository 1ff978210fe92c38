//! Toric blow-ups at torus fixed points, realised as corner chops of the
//! moment polytope.
//!
//! Chopping a smooth vertex `v` with active facets `⟨u_i, x⟩ ≥ c_i` at depth
//! `ε'` adds the facet `⟨Σ u_i, x⟩ ≥ Σ c_i + ε'`. In the lattice frame of the
//! vertex the removed corner is the standard simplex of size `ε'`, so the
//! volume drops by `ε'ⁿ/n!`. The depth `ε'` stands in for the `ε²a_j` scale
//! of the exceptional class; nothing here depends on that correspondence.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{DelzantPolytope, Facet, Vertex};
use crate::rational::{dot_int, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSpec {
    pub vertex: Vertex,
    pub parameter: Rational,
}

/// One applied chop within a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChopRecord {
    pub round: usize,
    pub spec: BlowupSpec,
    /// Index of the exceptional facet in the resulting polytope.
    pub facet: usize,
}

struct Corner {
    normal: Vec<i64>,
    base: Rational,
    /// Primitive edge directions; `edges[k]` pairs to one with the k-th active
    /// normal and to zero with the others.
    edges: Vec<Vec<Rational>>,
}

fn corner(p: &DelzantPolytope, v: usize) -> Result<Corner> {
    let vx = &p.vertices()[v];
    let n = p.dim();
    let rows: linalg::Matrix = vx
        .active_facets
        .iter()
        .map(|&i| p.facets()[i].normal.iter().map(|&x| int(x)).collect())
        .collect();
    let det = if vx.active_facets.len() == n { linalg::det(&rows) } else { Rational::zero() };
    if det.abs() != int(1) {
        return Err(Error::SingularVertex { active: vx.active_facets.len(), det: Box::new(det) });
    }
    let inv = linalg::inverse(&rows).ok_or_else(|| Error::Internal("unimodular corner".into()))?;
    let edges = (0..n).map(|k| (0..n).map(|i| inv[i][k].clone()).collect()).collect();
    let mut normal = vec![0i64; n];
    let mut base = Rational::zero();
    for &i in &vx.active_facets {
        let f = &p.facets()[i];
        for (a, b) in normal.iter_mut().zip(&f.normal) {
            *a += b;
        }
        base += &f.offset;
    }
    Ok(Corner { normal, base, edges })
}

fn locate(p: &DelzantPolytope, point: &[Rational]) -> Result<usize> {
    if point.len() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: point.len() });
    }
    p.vertex_index(point).ok_or(Error::NotAVertex)
}

fn bound_at(p: &DelzantPolytope, v: usize, c: &Corner) -> Rational {
    p.vertices()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != v)
        .map(|(_, w)| dot_int(&c.normal, &w.point) - &c.base)
        .min()
        .expect("a polytope has at least two vertices")
}

/// Supremum of admissible chop depths at `vertex`: the smallest value of the
/// exceptional normal, measured from the vertex, over all other vertices.
pub fn max_chop_parameter(p: &DelzantPolytope, vertex: &[Rational]) -> Result<Rational> {
    let v = locate(p, vertex)?;
    let c = corner(p, v)?;
    Ok(bound_at(p, v, &c))
}

fn check_parameter(eps: &Rational) -> Result<()> {
    if !eps.is_positive() {
        return Err(Error::NonPositiveParameter(Box::new(eps.clone())));
    }
    Ok(())
}

fn fresh_label(p: &DelzantPolytope, index: usize) -> String {
    let mut label = format!("E{index}");
    while p.facet_by_label(&label).is_some() {
        label.push('\'');
    }
    label
}

pub fn blow_up_vertex(p: &DelzantPolytope, vertex: &[Rational], eps: &Rational) -> Result<DelzantPolytope> {
    check_parameter(eps)?;
    let v = locate(p, vertex)?;
    let c = corner(p, v)?;
    let bound = bound_at(p, v, &c);
    if *eps >= bound {
        return Err(Error::ChopTooDeep { parameter: Box::new(eps.clone()), bound: Box::new(bound) });
    }
    let label = fresh_label(p, p.facets().len());
    p.with_extra_facet(Facet { normal: c.normal, offset: c.base + eps, label: Some(label) })
}

/// Chops every listed vertex at the same depth. Fails if any chop is too
/// deep or if two corners would reach into each other.
///
/// Returns the new polytope and the indices of the exceptional facets, in
/// the order of `vertices`.
pub fn chop_all(
    p: &DelzantPolytope,
    vertices: &[Vec<Rational>],
    eps: &Rational,
) -> Result<(DelzantPolytope, Vec<usize>)> {
    check_parameter(eps)?;
    let idx = vertices.iter().map(|x| locate(p, x)).collect::<Result<Vec<_>>>()?;
    let corners = idx.iter().map(|&v| corner(p, v)).collect::<Result<Vec<_>>>()?;
    for (&v, c) in idx.iter().zip(&corners) {
        let bound = bound_at(p, v, c);
        if *eps >= bound {
            return Err(Error::ChopTooDeep { parameter: Box::new(eps.clone()), bound: Box::new(bound) });
        }
    }
    // corner region i has vertices v_i and v_i + ε' e_k
    let regions: Vec<Vec<Vec<Rational>>> = idx
        .iter()
        .zip(&corners)
        .map(|(&v, c)| {
            let apex = &p.vertices()[v].point;
            let mut pts = vec![apex.clone()];
            pts.extend(c.edges.iter().map(|e| apex.iter().zip(e).map(|(a, d)| a + eps * d).collect()));
            pts
        })
        .collect();
    for (i, ci) in corners.iter().enumerate() {
        let level = &ci.base + eps;
        for (j, region) in regions.iter().enumerate() {
            if i != j && region.iter().any(|x| dot_int(&ci.normal, x) <= level) {
                return Err(Error::InteractingChops { first: i.min(j), second: i.max(j) });
            }
        }
    }
    let mut out = p.clone();
    let mut new_facets = Vec::with_capacity(corners.len());
    for c in corners {
        let index = out.facets().len();
        let label = fresh_label(&out, index);
        out = out.with_extra_facet(Facet { normal: c.normal, offset: c.base + eps, label: Some(label) })?;
        new_facets.push(index);
    }
    Ok((out, new_facets))
}

/// Vertices not on facet `f`: the fixed points away from the divisor.
pub fn free_fixed_points(p: &DelzantPolytope, f: usize) -> Result<Vec<Vertex>> {
    let facet = p.facet(f)?;
    Ok(p.vertices()
        .iter()
        .filter(|v| facet.slack(&v.point).is_positive())
        .cloned()
        .collect())
}

/// Iterated blow-up of all newly created fixed points away from a divisor
/// facet, one common depth per round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerState {
    pub polytope: DelzantPolytope,
    pub divisor_facet: usize,
    pub round: usize,
    pub history: Vec<ChopRecord>,
    last_new_facets: Vec<usize>,
}

impl TowerState {
    pub fn new(polytope: DelzantPolytope, divisor_facet: usize) -> Result<Self> {
        polytope.facet(divisor_facet)?;
        if let Some(bad) = polytope.is_delzant().violations.first() {
            return Err(Error::NotDelzant { vertex: bad.vertex });
        }
        Ok(Self { polytope, divisor_facet, round: 0, history: Vec::new(), last_new_facets: Vec::new() })
    }

    /// Vertices the next step will chop: the free fixed points in round 0,
    /// afterwards the vertices of the previous round's exceptional facets
    /// that are off the divisor.
    pub fn designated(&self) -> Result<Vec<Vertex>> {
        let free = free_fixed_points(&self.polytope, self.divisor_facet)?;
        if self.round == 0 {
            return Ok(free);
        }
        Ok(free
            .into_iter()
            .filter(|v| v.active_facets.iter().any(|f| self.last_new_facets.contains(f)))
            .collect())
    }

    /// Depth used in each completed round.
    pub fn schedule(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for r in &self.history {
            if out.len() <= r.round {
                out.push(r.spec.parameter.clone());
            }
        }
        out
    }

    /// Whether the depth changed between rounds; only equality within a round
    /// is needed for the symmetry argument.
    pub fn schedule_varies(&self) -> bool {
        self.schedule().windows(2).any(|w| w[0] != w[1])
    }

    pub fn last_new_facets(&self) -> &[usize] {
        &self.last_new_facets
    }
}

pub fn tower_step(state: &TowerState, eps: &Rational) -> Result<TowerState> {
    let targets = state.designated()?;
    let points: Vec<Vec<Rational>> = targets.iter().map(|v| v.point.clone()).collect();
    let (polytope, new_facets) = chop_all(&state.polytope, &points, eps)?;
    if !polytope.is_delzant().is_delzant {
        return Err(Error::Internal("tower step produced a non-Delzant polytope".into()));
    }
    let divisor = &state.polytope.facets()[state.divisor_facet];
    if polytope.facets()[state.divisor_facet] != *divisor
        || polytope.facet_vertices(state.divisor_facet).len()
            != state.polytope.facet_vertices(state.divisor_facet).len()
    {
        return Err(Error::Internal("tower step modified the divisor facet".into()));
    }
    let mut history = state.history.clone();
    for (vertex, &facet) in targets.into_iter().zip(&new_facets) {
        history.push(ChopRecord {
            round: state.round,
            spec: BlowupSpec { vertex, parameter: eps.clone() },
            facet,
        });
    }
    Ok(TowerState {
        polytope,
        divisor_facet: state.divisor_facet,
        round: state.round + 1,
        history,
        last_new_facets: new_facets,
    })
}

/// Exceptional facet normal at a smooth vertex (the sum of its active
/// normals).
pub fn exceptional_normal(p: &DelzantPolytope, vertex: &[Rational]) -> Result<Vec<i64>> {
    let v = locate(p, vertex)?;
    Ok(corner(p, v)?.normal)
}

/// Facets meeting at a vertex, for diagnostics.
pub fn active_facets(p: &DelzantPolytope, vertex: &[Rational]) -> Result<Vec<usize>> {
    let v = locate(p, vertex)?;
    Ok(p.vertices()[v].active_facets.clone())
}
