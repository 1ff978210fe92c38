//! Integer lattice helpers: gcds, column Hermite normal form, unimodular
//! completion of a primitive vector.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{int, Rational};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_all(v) == 1
}

/// Divides out the content of a nonzero vector.
pub fn primitivize(v: &[i64]) -> (Vec<i64>, i64) {
    let g = gcd_all(v);
    (v.iter().map(|x| x / g).collect(), g)
}

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Replaces columns `(p, q)` by `(x·p + y·q, s·p + t·q)`.
fn combine_columns(m: &mut IntMatrix, p: usize, q: usize, x: i64, y: i64, s: i64, t: i64) -> Result<()> {
    for row in m.iter_mut() {
        let (cp, cq) = (row[p] as i128, row[q] as i128);
        row[p] = narrow(x as i128 * cp + y as i128 * cq)?;
        row[q] = narrow(s as i128 * cp + t as i128 * cq)?;
    }
    Ok(())
}

fn negate_column(m: &mut IntMatrix, p: usize) {
    for row in m.iter_mut() {
        row[p] = -row[p];
    }
}

/// Column-style Hermite normal form: returns `(h, u)` with `a·u = h`, `u`
/// unimodular, `h` lower echelon with positive pivots and the entries left of
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix, cols: usize) -> Result<(IntMatrix, IntMatrix)> {
    let mut h = a.clone();
    let mut u: IntMatrix = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut col = 0;
    for i in 0..h.len() {
        if col == cols {
            break;
        }
        for j in col + 1..cols {
            if h[i][j] == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(h[i][col], h[i][j]);
            let (a_, b_) = (h[i][col] / g, h[i][j] / g);
            combine_columns(&mut h, col, j, x, y, -b_, a_)?;
            combine_columns(&mut u, col, j, x, y, -b_, a_)?;
        }
        if h[i][col] == 0 {
            continue;
        }
        if h[i][col] < 0 {
            negate_column(&mut h, col);
            negate_column(&mut u, col);
        }
        let pivot = h[i][col];
        for j in 0..col {
            let q = Integer::div_floor(&h[i][j], &pivot);
            if q != 0 {
                combine_columns(&mut h, j, col, 1, -q, 0, 1)?;
                combine_columns(&mut u, j, col, 1, -q, 0, 1)?;
            }
        }
        col += 1;
    }
    Ok((h, u))
}

/// Extends a primitive vector `normal` to a unimodular matrix `u` with
/// `normalᵀ·u = (1, 0, …, 0)`.
///
/// The first column of `u` pairs to one with `normal`; the remaining columns
/// are a basis of the lattice hyperplane `normal⊥ ∩ Zⁿ`.
pub fn complete_to_unimodular(normal: &[i64]) -> Result<IntMatrix> {
    if !is_primitive(normal) {
        return Err(Error::Internal("completing a non-primitive vector".into()));
    }
    let (h, u) = hermite_normal_form(&vec![normal.to_vec()], normal.len())?;
    debug_assert_eq!(h[0][0], 1);
    Ok(u)
}

pub fn to_rational(m: &IntMatrix) -> linalg::Matrix {
    m.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect()
}

pub fn det(m: &IntMatrix) -> Rational {
    linalg::det(&to_rational(m))
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return false;
    }
    let d = det(m);
    d == int(1) || d == int(-1)
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    if !is_unimodular(m) {
        return Err(Error::NotUnimodular);
    }
    let inv = linalg::inverse(&to_rational(m)).ok_or(Error::NotUnimodular)?;
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    use num_traits::ToPrimitive;
                    x.to_integer().to_i64().ok_or(Error::Overflow)
                })
                .collect()
        })
        .collect()
}
