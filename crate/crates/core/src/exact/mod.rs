//! Exact scalars, dense matrices and integer lattice algorithms.
//!
//! Everything here is arbitrary precision. Lattices are kept in row-style
//! Hermite normal form so that two lattices are equal exactly when their
//! stored bases are equal.

mod hnf;
mod lattice;
mod matrix;

pub use hnf::{hnf, left_kernel, right_kernel, snf_rank_and_torsion, Hnf};
pub use lattice::{lattice_intersection, rational_preimage_lattice, IntegerLattice};
pub use matrix::{rational_row_echelon, IntMatrix, Matrix, RatMatrix};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows of unequal length")]
    RaggedRows,
    #[error("matrix is singular")]
    Singular,
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn rat_from_int(v: Int) -> Rat {
    Rat::from_integer(v)
}

/// Least common multiple of the denominators; 1 for an empty slice.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Int {
    values
        .into_iter()
        .fold(Int::one(), |acc, q| acc.lcm(q.denom()))
}

/// Non-negative gcd of the entries; 0 when all entries vanish.
pub fn content<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    a.lcm(b)
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let bad = || ExactError::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: Int = num.parse().map_err(|_| bad())?;
    let den: Int = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_reduce_and_print() {
        let q = parse_rat("4/-6").unwrap();
        assert_eq!(q, rat(-2, 3));
        assert_eq!(format_rat(&q), "-2/3");
        assert_eq!(format_rat(&rat(6, 3)), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn lcm_and_content() {
        let v = [rat(1, 2), rat(2, 3), rat(5, 1)];
        assert_eq!(denominator_lcm(&v), int(6));
        assert_eq!(content(&[int(4), int(-6), int(0)]), int(2));
        assert_eq!(content(&[] as &[Int]), int(0));
    }
}
