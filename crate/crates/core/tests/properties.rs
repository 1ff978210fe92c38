//! Invariants of the extremal affine function and of corner chops on random
//! Delzant polytopes of dimension at most three.

mod common;

use std::collections::BTreeSet;

use cuspcheck::blowup::{blow_up_vertex, max_chop_parameter};
use cuspcheck::extremal::extremal_affine;
use cuspcheck::linalg::is_positive_definite;
use cuspcheck::moments::polytope_moments;
use cuspcheck::obstruction::check_facet_condition;
use cuspcheck::rational::{factorial, ratio, Rational};
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn setup(seed: u64) -> (StdRng, usize) {
    let mut rng = StdRng::seed_from_u64(seed);
    let dim = rng.gen_range(1..=3);
    (rng, dim)
}

fn excluded_set<R: Rng>(rng: &mut R, facets: usize) -> BTreeSet<usize> {
    if rng.gen_bool(0.2) {
        BTreeSet::new()
    } else {
        BTreeSet::from([rng.gen_range(0..facets)])
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residuals_vanish(seed in any::<u64>()) {
        let (mut rng, dim) = setup(seed);
        let p = common::random_delzant(&mut rng, dim, 2);
        let ex = excluded_set(&mut rng, p.facets().len());
        let r = extremal_affine(&p, &ex).unwrap();
        prop_assert!(r.residuals.iter().all(Zero::is_zero));
    }

    #[test]
    fn unimodular_equivariance(seed in any::<u64>()) {
        let (mut rng, dim) = setup(seed);
        let p = common::random_delzant(&mut rng, dim, 2);
        let ex = excluded_set(&mut rng, p.facets().len());
        let t = common::random_unimodular(&mut rng, dim);
        let v = common::random_shift(&mut rng, dim);
        let q = p.apply_unimodular(&t, &v).unwrap();
        let a = extremal_affine(&p, &ex).unwrap().affine;
        let b = extremal_affine(&q, &ex).unwrap().affine;
        prop_assert_eq!(b.pullback(&t, &v), a);
    }

    #[test]
    fn dilation_law(seed in any::<u64>()) {
        let (mut rng, dim) = setup(seed);
        let p = common::random_delzant(&mut rng, dim, 2);
        let ex = excluded_set(&mut rng, p.facets().len());
        let c = common::random_positive(&mut rng, 5, 3);
        let a = extremal_affine(&p, &ex).unwrap().affine;
        let b = extremal_affine(&p.dilate(&c).unwrap(), &ex).unwrap().affine;
        // A_{cP}(cx) = A_P(x)/c, coefficientwise
        prop_assert_eq!(&b.constant * &c, a.constant);
        for (bg, ag) in b.gradient.iter().zip(&a.gradient) {
            prop_assert_eq!(bg * &c * &c, ag.clone());
        }
    }

    #[test]
    fn gram_positive_definite(seed in any::<u64>()) {
        let (mut rng, dim) = setup(seed);
        let p = common::random_delzant(&mut rng, dim, 2);
        prop_assert!(is_positive_definite(&polytope_moments(&p).unwrap().gram()));
    }

    #[test]
    fn chop_removes_a_corner_simplex(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let dim = rng.gen_range(2..=3);
        let p = common::random_delzant(&mut rng, dim, 1);
        let v = p.vertices()[rng.gen_range(0..p.vertices().len())].point.clone();
        let bound = max_chop_parameter(&p, &v).unwrap();
        let eps = &bound * ratio(rng.gen_range(1..=7), 8);
        let q = blow_up_vertex(&p, &v, &eps).unwrap();
        prop_assert!(q.is_delzant().is_delzant);
        let loss = polytope_moments(&p).unwrap().volume - polytope_moments(&q).unwrap().volume;
        let n_fact = Rational::from_integer(factorial(dim));
        prop_assert_eq!(loss, Pow::pow(&eps, dim as u32) / n_fact);
    }

    #[test]
    fn obstruction_is_chart_independent(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let dim = rng.gen_range(2..=3);
        let p = common::random_delzant(&mut rng, dim, 1);
        let f = rng.gen_range(0..p.facets().len());
        let t = common::random_unimodular(&mut rng, dim);
        let q = p.apply_unimodular(&t, &common::random_shift(&mut rng, dim)).unwrap();
        let a = check_facet_condition(&p, f).unwrap();
        let b = check_facet_condition(&q, f).unwrap();
        prop_assert_eq!(a.satisfied, b.satisfied);
        prop_assert_eq!(a.offset, b.offset);
    }
}

#[test]
fn chop_too_deep_is_rejected() {
    let p = cuspcheck::polytope::standard_simplex(2);
    let origin = vec![Rational::zero(), Rational::zero()];
    assert_eq!(max_chop_parameter(&p, &origin).unwrap(), Rational::one());
    assert!(blow_up_vertex(&p, &origin, &Rational::one()).is_err());
}
