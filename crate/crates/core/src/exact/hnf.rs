//! Hermite and Smith normal forms over the integers.
//!
//! Convention: row-style echelon form. Each non-zero row starts with a
//! positive pivot, pivot columns strictly increase downwards, and every entry
//! above a pivot lies in `[0, pivot)`. Zero rows are dropped from `h`.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{Int, IntMatrix};

#[derive(Debug, Clone)]
pub struct Hnf {
    /// Canonical row HNF with zero rows removed.
    pub h: IntMatrix,
    /// Square unimodular transform with `u * m = [h; 0]`.
    pub u: IntMatrix,
    /// Column index of the pivot of each row of `h`.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.h.nrows()
    }
}

fn sub_scaled(target: &mut [Int], source: &[Int], q: &Int) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

fn negate(row: &mut [Int]) {
    for v in row.iter_mut() {
        *v = -std::mem::take(v);
    }
}

/// In-place echelonization of `a`, mirrored on `u` when present.
/// Returns pivot columns; rows past the pivot count are zero.
pub(crate) fn echelonize(a: &mut [Vec<Int>], mut u: Option<&mut [Vec<Int>]>, cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // smallest non-zero magnitude in column c at or below r
            let best = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = best else { break };
            a.swap(r, p);
            if let Some(u) = u.as_deref_mut() {
                u.swap(r, p);
            }
            let mut clean = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let (top, bottom) = a.split_at_mut(i);
                sub_scaled(&mut bottom[0], &top[r], &q);
                if let Some(u) = u.as_deref_mut() {
                    let (top, bottom) = u.split_at_mut(i);
                    sub_scaled(&mut bottom[0], &top[r], &q);
                }
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r).is_none_or(|row| row[c].is_zero()) {
            continue;
        }
        if a[r][c].is_negative() {
            negate(&mut a[r]);
            if let Some(u) = u.as_deref_mut() {
                negate(&mut u[r]);
            }
        }
        for i in 0..r {
            if a[i][c].is_zero() {
                continue;
            }
            let q = a[i][c].div_floor(&a[r][c]);
            if q.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            sub_scaled(&mut top[i], &bottom[0], &q);
            if let Some(u) = u.as_deref_mut() {
                let (top, bottom) = u.split_at_mut(r);
                sub_scaled(&mut top[i], &bottom[0], &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row Hermite normal form with its unimodular transform.
pub fn hnf(m: &IntMatrix) -> Hnf {
    let cols = m.ncols();
    let mut a = m.to_rows();
    let mut u = IntMatrix::identity(m.nrows()).to_rows();
    let pivots = echelonize(&mut a, Some(&mut u), cols);
    a.truncate(pivots.len());
    Hnf {
        h: IntMatrix::from_rows(cols, a).expect("hnf rows"),
        u: IntMatrix::from_rows(m.nrows(), u).expect("hnf transform"),
        pivots,
    }
}

/// HNF without tracking the transform.
pub(crate) fn hnf_rows(mut rows: Vec<Vec<Int>>, cols: usize) -> Vec<Vec<Int>> {
    let pivots = echelonize(&mut rows, None, cols);
    rows.truncate(pivots.len());
    rows
}

/// Basis (in HNF) of `{x : x * m = 0}`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let n = m.nrows();
    let mut a = m.to_rows();
    let mut u = IntMatrix::identity(n).to_rows();
    let pivots = echelonize(&mut a, Some(&mut u), m.ncols());
    let kernel: Vec<Vec<Int>> = u.split_off(pivots.len());
    IntMatrix::from_rows(n, hnf_rows(kernel, n)).expect("kernel rows")
}

/// Basis (in HNF, as rows) of `{x : m * x = 0}`.
pub fn right_kernel(m: &IntMatrix) -> IntMatrix {
    left_kernel(&m.transpose())
}

/// Rank and the non-zero Smith diagonal `d_1 | d_2 | ...`.
pub fn snf_rank_and_torsion(m: &IntMatrix) -> (usize, Vec<Int>) {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut a = m.to_rows();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // bring the smallest non-zero entry of the trailing block to (t, t)
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                let (top, bottom) = a.split_at_mut(i);
                sub_scaled(&mut bottom[0], &top[t], &q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a[t..rows].iter_mut() {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest leftover in row/column t onto the diagonal
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                }
                if best.1 != t {
                    for row in a.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let (top, bottom) = a.split_at_mut(i);
                    for (x, y) in top[t].iter_mut().zip(bottom[0].iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    (diag.len(), diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use num_traits::One;

    fn is_unit(v: &Int) -> bool {
        v.abs().is_one()
    }

    #[test]
    fn identity_is_its_own_hnf() {
        let id = IntMatrix::identity(3);
        let r = hnf(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
    }

    #[test]
    fn diagonal_already_canonical() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(hnf(&m).h, m);
    }

    #[test]
    fn rank_one_gcd_reduction() {
        // gcd(4,6) = 2 in the first column, the second row is 3/2 of the first
        let m = IntMatrix::from_i64(&[&[4, 6], &[6, 9]]);
        let r = hnf(&m);
        assert_eq!(r.h, IntMatrix::from_i64(&[&[2, 3]]));
        assert_eq!(r.rank(), 1);
        let prod = &r.u * &m;
        assert_eq!(prod.row(0), r.h.row(0));
        assert!(prod.row(1).iter().all(Zero::is_zero));
        assert!(is_unit(&r.u.determinant().unwrap()));
    }

    #[test]
    fn entries_above_pivots_are_reduced() {
        let m = IntMatrix::from_i64(&[&[1, -3], &[0, 6]]);
        assert_eq!(hnf(&m).h, IntMatrix::from_i64(&[&[1, 3], &[0, 6]]));
    }

    #[test]
    fn kernels() {
        let m = IntMatrix::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(left_kernel(&m).nrows(), 0);
        let m = IntMatrix::from_i64(&[&[2, 4, 6]]);
        let k = right_kernel(&m);
        assert_eq!(k.nrows(), 2);
        for row in k.rows_iter() {
            let s: Int = row.iter().zip([2, 4, 6]).map(|(a, b)| a * int(b)).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn smith_forms() {
        let (r, d) = snf_rank_and_torsion(&IntMatrix::identity(3));
        assert_eq!((r, d), (3, vec![int(1); 3]));
        assert_eq!(snf_rank_and_torsion(&IntMatrix::from_i64(&[&[2]])), (1, vec![int(2)]));
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        assert_eq!(snf_rank_and_torsion(&m), (2, vec![int(2), int(4)]));
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(snf_rank_and_torsion(&m), (2, vec![int(1), int(6)]));
        let m = IntMatrix::from_i64(&[&[0, 0], &[0, 0]]);
        assert_eq!(snf_rank_and_torsion(&m), (0, vec![]));
    }
}
