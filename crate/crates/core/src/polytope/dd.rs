//! Double description: extreme rays of a pointed cone `{y : A y >= 0}`.
//!
//! Starts from a simplicial cone on a greedy set of independent rows and adds
//! the remaining rows one at a time. Two rays are combined only if they are
//! adjacent, which is decided algebraically: the rows vanishing on both must
//! have rank `dim - 2`.

use num_traits::Zero;

use crate::bitset::BitSet;
use crate::linalg::echelon::rank;
use crate::linalg::scalar::{content, convert_rows, dot, Scalar};
use crate::linalg::{Int, Rat};

#[derive(Clone, Debug)]
pub(crate) struct Ray<T> {
    pub vector: Vec<T>,
    /// Rows of the input that vanish on the ray.
    pub zeros: BitSet,
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum DdError {
    /// The rows do not have full column rank, so the cone has a lineality space.
    NotPointed,
}

fn make_primitive<T: Scalar>(v: Vec<T>) -> Option<Vec<T>> {
    let g = content(&v)?;
    if g.is_zero() || g == T::one() {
        return Some(v);
    }
    v.iter().map(|x| x.div_exact(&g)).collect()
}

/// Rays of the simplicial cone `{y : B y >= 0}` for an invertible `B`.
fn simplicial_rays(basis: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let k = basis.len();
    // Gauss-Jordan on [B | I] over Q; column i of B^-1 is ray i.
    let mut m: Vec<Vec<Rat>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rat> = row.iter().map(|x| Rat::from_integer(x.clone())).collect();
            r.extend((0..k).map(|j| Rat::from_integer(Int::from((i == j) as i64))));
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k)
            .find(|&i| !m[i][c].is_zero())
            .expect("invertible basis");
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..k {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * k {
                    let v = &m[i][j] - &f * &m[c][j];
                    m[i][j] = v;
                }
            }
        }
    }
    (0..k)
        .map(|col| {
            let entries: Vec<Rat> = (0..k).map(|row| m[row][k + col].clone()).collect();
            let lcm = entries.iter().fold(Int::from(1), |acc, x| {
                num_integer::Integer::lcm(&acc, x.denom())
            });
            let ints: Vec<Int> = entries
                .iter()
                .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
                .collect();
            crate::linalg::primitive(&ints)
        })
        .collect()
}

fn greedy_basis<T: Scalar>(rows: &[Vec<T>], dim: usize) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<T>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if chosen.len() == dim {
            break;
        }
        if row.iter().all(Scalar::is_zero) {
            continue;
        }
        chosen_rows.push(row.clone());
        if rank(&chosen_rows, dim)? == chosen_rows.len() {
            chosen.push(i);
        } else {
            chosen_rows.pop();
        }
    }
    Some(chosen)
}

fn adjacent<T: Scalar>(rows: &[Vec<T>], common: &BitSet, dim: usize) -> Option<bool> {
    let sub: Vec<Vec<T>> = common.iter().map(|i| rows[i].clone()).collect();
    Some(rank(&sub, dim)? == dim - 2)
}

/// Extreme rays of `{y in R^dim : row . y >= 0 for all rows}`.
///
/// Returns `None` if the scalar type overflows.
pub(crate) fn extreme_rays<T: Scalar>(
    rows: &[Vec<T>],
    dim: usize,
) -> Option<Result<Vec<Ray<T>>, DdError>> {
    let m = rows.len();
    if dim == 0 {
        return Some(Ok(Vec::new()));
    }
    let basis = greedy_basis(rows, dim)?;
    if basis.len() < dim {
        return Some(Err(DdError::NotPointed));
    }
    let basis_rows: Vec<Vec<Int>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(Scalar::to_int).collect())
        .collect();
    let mut processed = BitSet::new(m);
    for &i in &basis {
        processed.insert(i);
    }
    let mut rays: Vec<Ray<T>> = Vec::with_capacity(dim);
    for v in simplicial_rays(&basis_rows) {
        let vector: Vec<T> = v.iter().map(T::from_int).collect::<Option<_>>()?;
        let mut zeros = BitSet::new(m);
        for &i in &basis {
            if dot(&rows[i], &vector)?.is_zero() {
                zeros.insert(i);
            }
        }
        rays.push(Ray { vector, zeros });
    }

    for (idx, row) in rows.iter().enumerate() {
        if processed.contains(idx) {
            continue;
        }
        let values: Vec<T> = rays
            .iter()
            .map(|r| dot(row, &r.vector))
            .collect::<Option<_>>()?;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (k, v) in values.iter().enumerate() {
            match v.signum_i32() {
                1 => pos.push(k),
                -1 => neg.push(k),
                _ => {}
            }
        }
        let mut next: Vec<Ray<T>> = Vec::with_capacity(rays.len());
        if !neg.is_empty() && !pos.is_empty() && dim >= 2 {
            let need = dim - 2;
            for &p in &pos {
                for &q in &neg {
                    let (rp, rq) = (&rays[p], &rays[q]);
                    if rp.zeros.intersection_count(&rq.zeros) < need {
                        continue;
                    }
                    let common = rp.zeros.intersection(&rq.zeros);
                    if !adjacent(rows, &common, dim)? {
                        continue;
                    }
                    let (vp, vq) = (&values[p], &values[q]);
                    // vp > 0 > vq: vp * rq - vq * rp lies on the hyperplane
                    let mvq = vq.neg()?;
                    let vector: Vec<T> = rp
                        .vector
                        .iter()
                        .zip(&rq.vector)
                        .map(|(a, b)| vp.mul_add(b, &mvq, a))
                        .collect::<Option<_>>()?;
                    let vector = make_primitive(vector)?;
                    let mut zeros = common;
                    zeros.insert(idx);
                    next.push(Ray { vector, zeros });
                }
            }
        }
        for (k, mut r) in rays.into_iter().enumerate() {
            match values[k].signum_i32() {
                0 => {
                    r.zeros.insert(idx);
                    next.push(r);
                }
                1 => next.push(r),
                _ => {}
            }
        }
        processed.insert(idx);
        rays = next;
    }
    Some(Ok(rays))
}

/// Runs [`extreme_rays`] in machine words first and falls back to big integers.
pub(crate) fn extreme_rays_exact(rows: &[Vec<Int>], dim: usize) -> Result<Vec<Ray<Int>>, DdError> {
    if let Some(small) = convert_rows::<i64>(rows) {
        if let Some(res) = extreme_rays(&small, dim) {
            return res.map(|rays| {
                rays.into_iter()
                    .map(|r| Ray {
                        vector: r.vector.iter().map(Scalar::to_int).collect(),
                        zeros: r.zeros,
                    })
                    .collect()
            });
        }
    }
    extreme_rays(rows, dim).expect("bigint never overflows")
}
