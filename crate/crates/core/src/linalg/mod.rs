//! Exact integer and rational linear algebra.

pub mod echelon;
pub mod scalar;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use echelon::{column_echelon, ColumnEchelon, Track};
use scalar::{convert_rows, dot};

pub type Int = BigInt;
pub type Rat = BigRational;

pub const DEFAULT_SEED: u64 = 1;

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(rows: &[Vec<Int>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect();
        Self::from_rows(&rows, cols).expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Int) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

/// A basis of a saturated sublattice of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub ambient_dim: usize,
    pub vectors: Vec<Vec<Int>>,
}

impl LatticeBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn standard(n: usize) -> Self {
        let vectors = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
        Self {
            ambient_dim: n,
            vectors,
        }
    }
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides an integer vector by the gcd of its entries.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = scalar::content(v).expect("bigint never overflows");
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Result of [`saturate`]: the echelon of the selected subset, which also
/// carries the kernel and the full unimodular transform.
pub(crate) struct Saturation<T> {
    pub echelon: ColumnEchelon<T>,
}

/// Saturates the lattice generated by `vectors` from a random subset.
///
/// The subset starts at `min(m, expected_rank or n)` vectors and doubles
/// until its span contains every input vector. With `expected_rank` given,
/// the containment check is replaced by comparing ranks.
pub(crate) fn saturate<T: scalar::Scalar>(
    vectors: &[Vec<T>],
    ncols: usize,
    expected_rank: Option<usize>,
    seed: u64,
    track: Track,
) -> Option<Saturation<T>> {
    let m = vectors.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut size = m.min(expected_rank.unwrap_or(ncols)).max(1).min(m);
    let track = Track {
        u: track.u || expected_rank.is_none(),
        w: track.w,
    };
    loop {
        let mut subset: Vec<usize> = if size == m {
            (0..m).collect()
        } else {
            sample(&mut rng, m, size).into_vec()
        };
        subset.sort_unstable();
        let rows: Vec<Vec<T>> = subset.iter().map(|&i| vectors[i].clone()).collect();
        let echelon = column_echelon(&rows, ncols, track)?;
        let sufficient = if size == m {
            true
        } else if let Some(r) = expected_rank {
            echelon.rank >= r
        } else {
            let kernel = echelon.kernel().expect("tracked");
            let mut ok = true;
            'outer: for v in vectors {
                for k in kernel {
                    if !dot(v, k)?.is_zero() {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            ok
        };
        if sufficient {
            return Some(Saturation { echelon });
        }
        size = (2 * size).min(m);
    }
}

/// Basis of `span_Q(vectors) ∩ Z^n`.
///
/// A random subset (seeded by `rng_seed`) of about rank size is saturated
/// first; it is enlarged by doubling while its span misses some vector.
pub fn saturated_basis(vectors: &[Vec<Int>], rng_seed: u64) -> LatticeBasis {
    let n = vectors.first().map_or(0, |v| v.len());
    let nonzero: Vec<Vec<Int>> = vectors
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    if nonzero.is_empty() {
        return LatticeBasis {
            ambient_dim: n,
            vectors: Vec::new(),
        };
    }
    let track = Track { u: true, w: true };
    let basis: Vec<Vec<Int>> = match convert_rows::<i64>(&nonzero)
        .and_then(|rows| saturate(&rows, n, None, rng_seed, track))
    {
        Some(s) => s
            .echelon
            .saturated_basis()
            .expect("tracked")
            .iter()
            .map(|r| r.iter().map(scalar::Scalar::to_int).collect())
            .collect(),
        None => saturate(&nonzero, n, None, rng_seed, track)
            .expect("bigint never overflows")
            .echelon
            .saturated_basis()
            .expect("tracked")
            .to_vec(),
    };
    LatticeBasis {
        ambient_dim: n,
        vectors: basis,
    }
}

/// Integer kernel basis of the rows (vectors `x` with `row . x = 0`).
pub fn integer_kernel(rows: &[Vec<Int>], ncols: usize) -> Vec<Vec<Int>> {
    let e =
        column_echelon(rows, ncols, Track { u: true, w: false }).expect("bigint never overflows");
    e.kernel().expect("tracked").to_vec()
}

/// Solves a rational linear system `x^T A = b` restricted to the row space of `A`.
fn solve_left(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    // Work on the transpose: A^T x = b, an n x r system.
    let r = a.len();
    let n = b.len();
    let mut m: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rat> = (0..r).map(|i| a[i][j].clone()).collect();
            row.push(b[j].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for k in col..=r {
            m[row][k] = &m[row][k] * &inv;
        }
        for i in 0..n {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for k in col..=r {
                    let v = &m[i][k] - &f * &m[row][k];
                    m[i][k] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|rw| !rw[r].is_zero()) {
        return Err(Error::NotInSpan);
    }
    let mut x = vec![Rat::zero(); r];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][r].clone();
    }
    Ok(x)
}

/// Rational coefficients `t` with `v = Σ t_j u_j` for the basis vectors `u_j`.
pub fn coordinates_in_basis(v: &[Int], basis: &LatticeBasis) -> Result<Vec<Rat>> {
    if v.len() != basis.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: basis.ambient_dim,
            found: v.len(),
        });
    }
    let a: Vec<Vec<Rat>> = basis
        .vectors
        .iter()
        .map(|u| u.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let b: Vec<Rat> = v.iter().map(|x| Rat::from_integer(x.clone())).collect();
    if a.is_empty() {
        return if v.iter().all(Zero::is_zero) {
            Ok(Vec::new())
        } else {
            Err(Error::NotInSpan)
        };
    }
    solve_left(&a, &b)
}

/// Integer coordinates of vectors of a saturated lattice in its basis.
///
/// One `r x r` minor of the basis is inverted once; every vector is then
/// mapped with a single integer product and checked by reconstruction.
pub fn lattice_coordinates(vectors: &[Vec<Int>], basis: &LatticeBasis) -> Result<Vec<Vec<Int>>> {
    let r = basis.rank();
    let n = basis.ambient_dim;
    let mut m: Vec<Vec<Rat>> = basis
        .vectors
        .iter()
        .map(|u| u.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let mut cols = Vec::with_capacity(r);
    let mut row = 0;
    for c in 0..n {
        if row == r {
            break;
        }
        let Some(p) = (row..r).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for i in row + 1..r {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for k in c..n {
                    let v = &m[i][k] - &f * &m[row][k];
                    m[i][k] = v;
                }
            }
        }
        cols.push(c);
        row += 1;
    }
    let minor: Vec<Vec<Rat>> = (0..r)
        .map(|k| {
            cols.iter()
                .map(|&c| Rat::from_integer(basis.vectors[k][c].clone()))
                .collect()
        })
        .collect();
    let inverse = invert_rational(&minor).ok_or(Error::NotInSpan)?;
    let denom = inverse.iter().flatten().fold(Int::one(), |acc, x| {
        num_integer::Integer::lcm(&acc, x.denom())
    });
    let scaled: Vec<Vec<Int>> = inverse
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| (x * Rat::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let mut c = vec![Int::zero(); r];
        for (k, &col) in cols.iter().enumerate() {
            if v[col].is_zero() {
                continue;
            }
            for (j, cj) in c.iter_mut().enumerate() {
                *cj += &v[col] * &scaled[k][j];
            }
        }
        for cj in c.iter_mut() {
            if !(&*cj % &denom).is_zero() {
                return Err(Error::NotInSpan);
            }
            *cj = &*cj / &denom;
        }
        for (i, x) in v.iter().enumerate() {
            let back: Int = c.iter().zip(&basis.vectors).map(|(a, u)| a * &u[i]).sum();
            if &back != x {
                return Err(Error::NotInSpan);
            }
        }
        out.push(c);
    }
    Ok(out)
}

fn invert_rational(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let k = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&i| !m[i][c].is_zero())?;
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
    Some(m.into_iter().map(|r| r[k..].to_vec()).collect())
}

/// Bareiss determinant; `None` on overflow.
pub(crate) fn bareiss_det<T: scalar::Scalar>(rows: &[Vec<T>]) -> Option<T> {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut sign = 1;
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Some(T::zero());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k])?.sub(&a[i][k].mul(&a[k][j])?)?;
                a[i][j] = v.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a.last().map_or(T::one(), |r| r[n - 1].clone());
    if sign < 0 {
        d.neg()
    } else {
        Some(d)
    }
}

/// `|det|` of a square integer matrix by fraction-free elimination.
pub fn det_abs(m: &IntMatrix) -> Result<Int> {
    if m.rows() != m.cols() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let rows = m.to_rows();
    let d = match convert_rows::<i64>(&rows).and_then(|r| bareiss_det(&r)) {
        Some(d) => Int::from(d),
        None => bareiss_det(&rows).expect("bigint never overflows"),
    };
    Ok(d.abs())
}

/// `|det|` of a square rational matrix by exact Gaussian elimination.
pub fn det_abs_rational(rows: &[Vec<Rat>]) -> Result<Rat> {
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NonSquare {
            rows: n,
            cols: r.len(),
        });
    }
    let mut a = rows.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(Rat::zero());
        };
        a.swap(k, p);
        let piv = a[k][k].clone();
        det *= &piv;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..n {
                let v = &a[i][j] - &f * &a[k][j];
                a[i][j] = v;
            }
        }
    }
    Ok(det.abs())
}

/// `g = gcd(λ(u_1), …, λ(u_r))` for the basis vectors `u_j`.
pub fn primitivity_divisor(lambda: &[Int], basis: &LatticeBasis) -> Result<Int> {
    let mut g = Int::zero();
    for u in &basis.vectors {
        g = num_integer::Integer::gcd(&g, &dot_int(lambda, u));
    }
    if g.is_zero() {
        Err(Error::FormVanishes)
    } else {
        Ok(g)
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
