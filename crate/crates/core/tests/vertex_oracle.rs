//! Vertex enumeration against an independent Cramer's-rule oracle on random
//! three-dimensional polytopes.

use std::collections::BTreeSet;

use cuspcheck::polytope::{DelzantPolytope, Facet};
use cuspcheck::rational::Rational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Q = Rational;

fn det3(m: [[Q; 3]; 3]) -> Q {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Every feasible intersection of three independent planes.
fn oracle_vertices(halfspaces: &[([i64; 3], Q)]) -> BTreeSet<Vec<Q>> {
    let mut out = BTreeSet::new();
    let k = halfspaces.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                let rows = [&halfspaces[a], &halfspaces[b], &halfspaces[c]];
                let m = |r: usize, j: usize| q(rows[r].0[j]);
                let base = [[m(0, 0), m(0, 1), m(0, 2)], [m(1, 0), m(1, 1), m(1, 2)], [m(2, 0), m(2, 1), m(2, 2)]];
                let d = det3(base.clone());
                if d.is_zero() {
                    continue;
                }
                let x: Vec<Q> = (0..3)
                    .map(|col| {
                        let mut mc = base.clone();
                        for r in 0..3 {
                            mc[r][col] = rows[r].1.clone();
                        }
                        det3(mc) / &d
                    })
                    .collect();
                let feasible = halfspaces.iter().all(|(u, off)| {
                    let s: Q = (0..3).map(|j| q(u[j]) * &x[j]).sum();
                    s >= *off
                });
                if feasible {
                    out.insert(x);
                }
            }
        }
    }
    out
}

fn cross(a: &[Q], b: &[Q]) -> [Q; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Halfspaces whose boundary meets the vertex set in a genuine 2-face.
fn irredundant(halfspaces: &[([i64; 3], Q)], verts: &BTreeSet<Vec<Q>>) -> Vec<([i64; 3], Q)> {
    let mut kept: Vec<([i64; 3], Q)> = Vec::new();
    for h in halfspaces {
        if kept.iter().any(|k| k == h) {
            continue;
        }
        let on: Vec<&Vec<Q>> = verts
            .iter()
            .filter(|x| (0..3).map(|j| q(h.0[j]) * &x[j]).sum::<Q>() == h.1)
            .collect();
        let spans_plane = on.iter().skip(1).any(|p| {
            on.iter().skip(1).any(|r| {
                let d1: Vec<Q> = (0..3).map(|j| &p[j] - &on[0][j]).collect();
                let d2: Vec<Q> = (0..3).map(|j| &r[j] - &on[0][j]).collect();
                cross(&d1, &d2).iter().any(|c| !c.is_zero())
            })
        });
        if spans_plane {
            kept.push(h.clone());
        }
    }
    kept
}

fn primitive<R: Rng>(rng: &mut R) -> [i64; 3] {
    loop {
        let u = [rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
        let g = u.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        if g == 1 {
            return u;
        }
    }
}

#[test]
fn random_cut_boxes_match_oracle() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for _ in 0..60 {
        let mut hs: Vec<([i64; 3], Q)> = Vec::new();
        for i in 0..3 {
            let mut u = [0; 3];
            u[i] = 1;
            hs.push((u, q(0)));
            u[i] = -1;
            hs.push((u, q(-rng.gen_range(2..=4))));
        }
        for _ in 0..rng.gen_range(1..=4) {
            let u = primitive(&mut rng);
            // keep the centre of the box strictly inside
            let centre: Q = u.iter().map(|&x| Q::new(x.into(), 1.into())).sum::<Q>();
            let off = centre - Q::new(rng.gen_range(1..=6).into(), 2.into());
            hs.push((u, off));
        }
        let verts = oracle_vertices(&hs);
        let hs = irredundant(&hs, &verts);
        let facets: Vec<Facet> = hs.iter().map(|(u, c)| Facet::new(u.to_vec(), c.clone())).collect();
        let p = DelzantPolytope::new(3, facets).expect("oracle-cleaned polytope is valid");
        let got: BTreeSet<Vec<Q>> = p.vertices().iter().map(|v| v.point.clone()).collect();
        assert_eq!(got, oracle_vertices(&hs));
        for v in p.vertices() {
            let active: Vec<usize> = (0..hs.len())
                .filter(|&i| (0..3).map(|j| q(hs[i].0[j]) * &v.point[j]).sum::<Q>() == hs[i].1)
                .collect();
            assert_eq!(v.active_facets, active);
            assert!(v.point.iter().all(|x| !x.is_negative()));
        }
        checked += 1;
    }
    assert_eq!(checked, 60);
}

#[test]
fn library_brute_force_agrees() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..20 {
        let mut facets = Vec::new();
        for i in 0..3 {
            let mut u = vec![0; 3];
            u[i] = 1;
            facets.push(Facet::new(u.clone(), q(0)));
            u[i] = -1;
            facets.push(Facet::new(u, q(-3)));
        }
        let u = primitive(&mut rng);
        let centre: Q = u.iter().map(|&x| q(x) * Q::new(3.into(), 2.into())).sum();
        facets.push(Facet::new(u.to_vec(), centre - q(1)));
        let all = cuspcheck::polytope::brute_force_vertices(3, &facets);
        let hs: Vec<([i64; 3], Q)> =
            facets.iter().map(|f| ([f.normal[0], f.normal[1], f.normal[2]], f.offset.clone())).collect();
        let got: BTreeSet<Vec<Q>> = all.into_iter().map(|v| v.point).collect();
        assert_eq!(got, oracle_vertices(&hs));
    }
}
