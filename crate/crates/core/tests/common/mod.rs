//! Random Delzant polytopes for the property tests.
#![allow(dead_code)]

use cuspcheck::blowup::{blow_up_vertex, max_chop_parameter};
use cuspcheck::lattice::IntMatrix;
use cuspcheck::polytope::{lattice_box, standard_simplex, DelzantPolytope};
use cuspcheck::rational::{ratio, Rational};
use rand::Rng;

pub fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    ratio(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

pub fn random_positive<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    ratio(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

/// Product of a few elementary shears and a signed permutation.
pub fn random_unimodular<R: Rng>(rng: &mut R, dim: usize) -> IntMatrix {
    let mut t: IntMatrix = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    if dim > 1 {
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(0..dim);
            let j = (i + rng.gen_range(1..dim)) % dim;
            let k = rng.gen_range(-2..=2);
            for row in t.iter_mut() {
                row[j] += k * row[i];
            }
        }
        let a = rng.gen_range(0..dim);
        let b = rng.gen_range(0..dim);
        t.swap(a, b);
    }
    if rng.gen_bool(0.5) {
        let i = rng.gen_range(0..dim);
        for x in t[i].iter_mut() {
            *x = -*x;
        }
    }
    t
}

pub fn random_shift<R: Rng>(rng: &mut R, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| random_rational(rng, 3, 2)).collect()
}

/// A simplex or box, scaled, with up to `max_chops` corner chops.
pub fn random_delzant<R: Rng>(rng: &mut R, dim: usize, max_chops: usize) -> DelzantPolytope {
    let mut p = if rng.gen_bool(0.5) {
        standard_simplex(dim).dilate(&random_positive(rng, 4, 2)).unwrap()
    } else {
        let sides: Vec<Rational> = (0..dim).map(|_| random_positive(rng, 3, 2)).collect();
        lattice_box(&sides).unwrap()
    };
    if dim > 1 {
        for _ in 0..rng.gen_range(0..=max_chops) {
            let v = p.vertices()[rng.gen_range(0..p.vertices().len())].point.clone();
            let bound = max_chop_parameter(&p, &v).unwrap();
            let eps = bound * ratio(rng.gen_range(1..=3), 4);
            p = blow_up_vertex(&p, &v, &eps).unwrap();
        }
    }
    p
}
