use num_integer::Integer;
use num_traits::{One, Zero};

use super::hnf::{echelonize, hnf_rows};
use super::{denominator_lcm, ExactError, Int, IntMatrix, RatMatrix};

/// A sublattice of `Z^n` stored by its canonical row HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    ambient_dim: usize,
    basis: IntMatrix,
}

impl IntegerLattice {
    /// Lattice spanned by the rows of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let n = generators.ncols();
        Self::from_rows(n, generators.to_rows())
    }

    pub fn from_rows(ambient_dim: usize, rows: Vec<Vec<Int>>) -> Self {
        let rows = hnf_rows(rows, ambient_dim);
        IntegerLattice {
            ambient_dim,
            basis: IntMatrix::from_rows(ambient_dim, rows).expect("lattice rows"),
        }
    }

    pub fn full(n: usize) -> Self {
        IntegerLattice {
            ambient_dim: n,
            basis: IntMatrix::identity(n),
        }
    }

    pub fn zero(n: usize) -> Self {
        IntegerLattice {
            ambient_dim: n,
            basis: IntMatrix::zeros(0, n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.basis == IntMatrix::identity(self.ambient_dim)
    }

    /// Index `[Z^n : L]` for full-rank lattices.
    pub fn index(&self) -> Option<Int> {
        if self.rank() != self.ambient_dim {
            return None;
        }
        Some((0..self.rank()).map(|i| self.basis[(i, i)].clone()).product())
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut v = v.to_vec();
        for row in self.basis.rows_iter() {
            let p = row.iter().position(|x| !x.is_zero()).expect("hnf row is non-zero");
            if v[..p].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, r) = v[p].div_mod_floor(&row[p]);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &q * b;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn is_sublattice_of(&self, other: &IntegerLattice) -> bool {
        self.basis.rows_iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &IntegerLattice) -> Result<IntegerLattice, ExactError> {
        lattice_intersection(self, other)
    }
}

/// `L1 ∩ L2`, via the integer kernel of the stacked basis `[B1; -B2]`.
pub fn lattice_intersection(
    l1: &IntegerLattice,
    l2: &IntegerLattice,
) -> Result<IntegerLattice, ExactError> {
    let n = l1.ambient_dim;
    if l2.ambient_dim != n {
        return Err(ExactError::DimensionMismatch {
            expected: n,
            found: l2.ambient_dim,
        });
    }
    let r1 = l1.rank();
    let r2 = l2.rank();
    if r1 == 0 || r2 == 0 {
        return Ok(IntegerLattice::zero(n));
    }
    let mut stacked = l1.basis.to_rows();
    stacked.extend(l2.basis.rows_iter().map(|r| r.iter().map(|v| -v).collect()));
    let mut u = IntMatrix::identity(r1 + r2).to_rows();
    let pivots = echelonize(&mut stacked, Some(&mut u), n);
    let mut generators: Vec<Vec<Int>> = u[pivots.len()..]
        .iter()
        .map(|k| {
            let mut x = vec![Int::zero(); n];
            for (coef, b) in k[..r1].iter().zip(l1.basis.rows_iter()) {
                if coef.is_zero() {
                    continue;
                }
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += coef * bi;
                }
            }
            x
        })
        .collect();
    // both full rank: the intersection contains (i1 * i2) Z^n, which keeps entries small
    if let (Some(i1), Some(i2)) = (l1.index(), l2.index()) {
        let m = i1 * i2;
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = m.clone();
            generators.push(e);
        }
    }
    Ok(IntegerLattice::from_rows(n, generators))
}

/// `{x in Z^n : M x in Z^N}` for a rational `N x n` matrix `M`.
///
/// Denominators are cleared row by row: with `A_i = d_i M_i` the constraint
/// is `A_i x ≡ 0 (mod d_i)`, solved as the kernel of `[A_i B^T | d_i]`
/// against the current basis `B`, then projected back.
pub fn rational_preimage_lattice(m: &RatMatrix) -> IntegerLattice {
    let n = m.ncols();
    let global = denominator_lcm(m.rows_iter().flatten());
    let mut basis = IntMatrix::identity(n).to_rows();
    if global.is_one() {
        return IntegerLattice::from_rows(n, basis);
    }
    for row in m.rows_iter() {
        let d = denominator_lcm(row);
        if d.is_one() {
            continue;
        }
        let a: Vec<Int> = row
            .iter()
            .map(|q| q.numer() * (&d / q.denom()))
            .collect();
        let values: Vec<Int> = basis
            .iter()
            .map(|b| {
                let s: Int = b.iter().zip(&a).map(|(x, y)| x * y).sum();
                s.mod_floor(&d)
            })
            .collect();
        if values.iter().all(Zero::is_zero) {
            continue;
        }
        // left kernel of the column (values; d), projected to the first r entries
        let r = basis.len();
        let mut column: Vec<Vec<Int>> = values.into_iter().map(|v| vec![v]).collect();
        column.push(vec![d.clone()]);
        let mut u = IntMatrix::identity(r + 1).to_rows();
        let pivots = echelonize(&mut column, Some(&mut u), 1);
        let mut generators: Vec<Vec<Int>> = u[pivots.len()..]
            .iter()
            .map(|k| {
                let mut x = vec![Int::zero(); n];
                for (coef, b) in k[..r].iter().zip(&basis) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += coef * bi;
                    }
                }
                x
            })
            .collect();
        for i in 0..n {
            let mut e = vec![Int::zero(); n];
            e[i] = global.clone();
            generators.push(e);
        }
        basis = hnf_rows(generators, n);
    }
    IntegerLattice::from_rows(n, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Rat};

    fn lat(rows: &[&[i64]]) -> IntegerLattice {
        IntegerLattice::from_generators(&IntMatrix::from_i64(rows))
    }

    /// Brute-force membership oracle over a box.
    fn box_members(pred: impl Fn(i64, i64) -> bool, r: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                if pred(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    #[test]
    fn intersection_of_full_lattice_with_itself() {
        let z2 = IntegerLattice::full(2);
        assert_eq!(lattice_intersection(&z2, &z2).unwrap(), z2);
    }

    #[test]
    fn intersection_matches_box_enumeration() {
        let l1 = lat(&[&[2, 0], &[0, 1]]);
        let l2 = lat(&[&[1, 0], &[0, 3]]);
        let both = lattice_intersection(&l1, &l2).unwrap();
        // oracle: the members of both inputs on a 12-box generate the result
        let members = box_members(|x, y| x % 2 == 0 && y % 3 == 0, 12);
        let rows: Vec<Vec<Int>> = members.iter().map(|&(x, y)| vec![int(x), int(y)]).collect();
        assert_eq!(both, IntegerLattice::from_rows(2, rows));
        assert_eq!(both, lat(&[&[2, 0], &[0, 3]]));
    }

    #[test]
    fn transverse_lines_meet_in_zero() {
        let l1 = lat(&[&[1, 1]]);
        let l2 = lat(&[&[1, -1]]);
        let meet = lattice_intersection(&l1, &l2).unwrap();
        assert_eq!(meet.rank(), 0);
        assert!(lattice_intersection(&l1, &IntegerLattice::full(3)).is_err());
    }

    #[test]
    fn preimage_of_integral_matrix_is_everything() {
        let m = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]).to_rat();
        assert!(rational_preimage_lattice(&m).is_full());
    }

    #[test]
    fn preimage_of_one_half() {
        let m = RatMatrix::from_rows(1, vec![vec![rat(1, 2)]]).unwrap();
        assert_eq!(rational_preimage_lattice(&m), lat(&[&[2]]));
    }

    #[test]
    fn preimage_matches_brute_force() {
        // x/2 + y/3 integral
        let m = RatMatrix::from_rows(2, vec![vec![rat(1, 2), rat(1, 3)]]).unwrap();
        let got = rational_preimage_lattice(&m);
        let members = box_members(|x, y| (3 * x + 2 * y) % 6 == 0, 12);
        let rows: Vec<Vec<Int>> = members.iter().map(|&(x, y)| vec![int(x), int(y)]).collect();
        let oracle = IntegerLattice::from_rows(2, rows);
        assert_eq!(got, oracle);
        assert_eq!(got, lat(&[&[2, 0], &[0, 3]]));
    }

    #[test]
    fn membership_and_index() {
        let l = lat(&[&[2, 1], &[0, 3]]);
        assert!(l.contains(&[int(2), int(4)]));
        assert!(!l.contains(&[int(1), int(0)]));
        assert_eq!(l.index(), Some(int(6)));
        assert!(!l.contains(&[int(0)]));
        let r: Vec<Rat> = vec![];
        assert!(rational_preimage_lattice(&RatMatrix::from_rows(0, vec![r]).unwrap()).is_full());
    }
}
