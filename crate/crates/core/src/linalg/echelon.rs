//! Lower column echelon form by unimodular column operations.
//!
//! For an `m x n` integer matrix `A` we compute a unimodular `U` with
//! `A U = [H | 0]`, where `H` has `rank` columns and is lower triangular on
//! the pivot rows. With `W = U^-1` this gives `A = H * W[..rank]`: the first
//! `rank` rows of `W` are a basis of the saturation of the row lattice of
//! `A`, and `H` holds the coordinates of the rows in that basis. The last
//! `n - rank` columns of `U` span the integer kernel of `A`.

use super::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub u: bool,
    pub w: bool,
}

#[derive(Clone, Debug)]
pub struct ColumnEchelon<T> {
    pub rank: usize,
    /// Input rows that produced a pivot, in order.
    pub pivot_rows: Vec<usize>,
    /// Coordinates of every input row in the saturated basis (`m x rank`).
    pub coords: Vec<Vec<T>>,
    /// `U`, stored by columns, if tracked.
    pub u_cols: Option<Vec<Vec<T>>>,
    /// `W = U^-1`, stored by rows, if tracked.
    pub w_rows: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> ColumnEchelon<T> {
    /// Rows of `W` spanning the saturated row lattice.
    pub fn saturated_basis(&self) -> Option<&[Vec<T>]> {
        self.w_rows.as_deref().map(|w| &w[..self.rank])
    }

    /// Columns of `U` spanning the integer kernel.
    pub fn kernel(&self) -> Option<&[Vec<T>]> {
        self.u_cols.as_deref().map(|u| &u[self.rank..])
    }

    /// Product of the pivots: the index of the row lattice in its
    /// saturation when the input rows are linearly independent.
    pub fn pivot_product(&self) -> Option<T> {
        let mut acc = T::one();
        for (k, &row) in self.pivot_rows.iter().enumerate() {
            acc = acc.mul(&self.coords[row][k])?;
        }
        acc.abs()
    }
}

struct State<'a, T> {
    a: &'a mut [Vec<T>],
    first_row: usize,
    u: Option<Vec<Vec<T>>>,
    w: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> State<'_, T> {
    /// `col_c -= q * col_p`.
    fn sub_multiple(&mut self, c: usize, p: usize, q: &T) -> Option<()> {
        if q.is_zero() {
            return Some(());
        }
        for row in self.a[self.first_row..].iter_mut() {
            if !row[p].is_zero() {
                row[c] = row[c].sub(&q.mul(&row[p])?)?;
            }
        }
        if let Some(u) = self.u.as_mut() {
            let (cp, cc) = pick_two(u, p, c);
            for (x, y) in cc.iter_mut().zip(cp.iter()) {
                if !y.is_zero() {
                    *x = x.sub(&q.mul(y)?)?;
                }
            }
        }
        if let Some(w) = self.w.as_mut() {
            // inverse: row_p += q * row_c
            let (rp, rc) = pick_two(w, p, c);
            for (x, y) in rp.iter_mut().zip(rc.iter()) {
                if !y.is_zero() {
                    *x = x.add(&q.mul(y)?)?;
                }
            }
        }
        Some(())
    }

    fn swap(&mut self, p: usize, c: usize) {
        if p == c {
            return;
        }
        for row in self.a[self.first_row..].iter_mut() {
            row.swap(p, c);
        }
        if let Some(u) = self.u.as_mut() {
            u.swap(p, c);
        }
        if let Some(w) = self.w.as_mut() {
            w.swap(p, c);
        }
    }

    fn negate(&mut self, p: usize) -> Option<()> {
        for row in self.a[self.first_row..].iter_mut() {
            row[p] = row[p].neg()?;
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[p].iter_mut() {
                *x = x.neg()?;
            }
        }
        if let Some(w) = self.w.as_mut() {
            for x in w[p].iter_mut() {
                *x = x.neg()?;
            }
        }
        Some(())
    }
}

fn pick_two<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &mut T) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

/// Computes the column echelon form of `rows` (each of length `ncols`).
///
/// Returns `None` on arithmetic overflow of the scalar type.
pub fn column_echelon<T: Scalar>(
    rows: &[Vec<T>],
    ncols: usize,
    track: Track,
) -> Option<ColumnEchelon<T>> {
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut pivot_rows = Vec::new();
    let mut rank = 0;
    let (u, w) = {
        let mut st = State {
            a: &mut a,
            first_row: 0,
            u: track.u.then(|| identity(ncols)),
            w: track.w.then(|| identity(ncols)),
        };
        let m = st.a.len();
        for i in 0..m {
            if rank == ncols {
                break;
            }
            st.first_row = i;
            loop {
                // smallest nonzero entry to the pivot position
                let mut best: Option<(usize, T)> = None;
                for c in rank..ncols {
                    let v = &st.a[i][c];
                    if v.is_zero() {
                        continue;
                    }
                    let av = v.abs()?;
                    let better = match &best {
                        None => true,
                        Some((_, b)) => av.sub(b)?.signum_i32() < 0,
                    };
                    if better {
                        best = Some((c, av));
                    }
                }
                let Some((c0, _)) = best else { break };
                st.swap(rank, c0);
                let mut done = true;
                for c in rank + 1..ncols {
                    if st.a[i][c].is_zero() {
                        continue;
                    }
                    let q = st.a[i][c].div_floor(&st.a[i][rank])?;
                    let rem = st.a[i][c].sub(&q.mul(&st.a[i][rank])?)?;
                    st.sub_multiple(c, rank, &q)?;
                    if !rem.is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if st.a[i][rank].is_zero() {
                continue;
            }
            if st.a[i][rank].signum_i32() < 0 {
                st.negate(rank)?;
            }
            // reduce earlier pivot columns modulo the new pivot
            for j in 0..rank {
                let q = st.a[i][j].div_floor(&st.a[i][rank])?;
                st.sub_multiple(j, rank, &q)?;
            }
            pivot_rows.push(i);
            rank += 1;
        }
        (st.u.take(), st.w.take())
    };
    for row in a.iter_mut() {
        row.truncate(rank);
    }
    Some(ColumnEchelon {
        rank,
        pivot_rows,
        coords: a,
        u_cols: u,
        w_rows: w,
    })
}

/// Rank by fraction-free elimination.
pub fn rank<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Option<usize> {
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let m = a.len();
    let mut r = 0;
    let mut prev = T::one();
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..m {
            let f = a[i][c].clone();
            for k in c + 1..ncols {
                let v = piv.mul(&a[i][k])?.sub(&f.mul(&a[r][k])?)?;
                a[i][k] = v.div_exact(&prev)?;
            }
            a[i][c] = T::zero();
        }
        prev = piv;
        r += 1;
    }
    Some(r)
}
