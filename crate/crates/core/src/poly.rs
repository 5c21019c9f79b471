//! Polynomials in `e1, …, ek` with rational coefficients, modelling
//! `H*(BT^k)`. A polynomial of degree `d` sits in cohomological degree `2d`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{content, denominator_lcm, format_rat, Int, Matrix, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero linear form")]
    ZeroDivisor,
    #[error("integral division requested on non-integral input")]
    NotIntegral,
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("expected a 2x2 matrix, got {0}x{1}")]
    NotTwoByTwo(usize, usize),
}

/// Exponent vector. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn lowered(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] -= 1;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "e{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of total degree `d` in `nvars` variables, largest first.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Monomial>) {
        if slots == 1 {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, left - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(&mut Vec::new(), d, nvars, &mut out);
    out
}

/// Sparse polynomial with rational coefficients; zero terms are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut p = Poly::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong variable count");
            p.add_term(m, c);
        }
        p
    }

    /// Builds `Σ coeffs[i] * monomials[i]`.
    pub fn from_coefficients(nvars: usize, monomials: &[Monomial], coeffs: &[Rat]) -> Self {
        Self::from_terms(
            nvars,
            monomials.iter().cloned().zip(coeffs.iter().cloned()),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coefficients_in(&self, basis: &[Monomial]) -> Vec<Rat> {
        basis.iter().map(|m| self.coefficient(m)).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&m).unwrap_or_else(Rat::zero) + c;
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    /// Homogeneous degree, or `None` for zero or inhomogeneous polynomials.
    pub fn grade(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Rat::is_integer)
    }

    pub fn denominator_lcm(&self) -> Int {
        denominator_lcm(self.terms.values())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Poly {
            nvars: self.nvars,
            terms: acc,
        }
    }
}

impl fmt::Display for Poly {
    /// Largest monomial first, e.g. `3*e1^2*e2 - 1/2*e3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if m.degree() == 0 {
                write!(f, "{}", format_rat(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rat(&mag))?;
            }
        }
        Ok(())
    }
}

/// A degree-one form `Σ c_i e_i`, e.g. an axial value.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearForm(Vec<Rat>);

impl LinearForm {
    pub fn new(coefficients: Vec<Rat>) -> Self {
        LinearForm(coefficients)
    }

    pub fn from_ints(coefficients: &[i64]) -> Self {
        LinearForm(coefficients.iter().map(|&v| Rat::from_integer(v.into())).collect())
    }

    pub fn from_int_vec(coefficients: &[Int]) -> Self {
        LinearForm(coefficients.iter().map(|v| Rat::from_integer(v.clone())).collect())
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    /// Least positive integer making the form integral.
    pub fn denominator_lcm(&self) -> Int {
        denominator_lcm(&self.0)
    }

    pub fn scale(&self, c: &Rat) -> LinearForm {
        LinearForm(self.0.iter().map(|v| v * c).collect())
    }

    pub fn to_poly(&self) -> Poly {
        let k = self.0.len();
        Poly::from_terms(
            k,
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(k, i), c.clone())),
        )
    }

    /// Integer coefficient vector, if integral.
    pub fn integer_coefficients(&self) -> Option<Vec<Int>> {
        self.is_integral()
            .then(|| self.0.iter().map(|v| v.to_integer()).collect())
    }

    /// `q` with `other = q * self`, when the two forms are parallel and `self != 0`.
    pub fn ratio_to(&self, other: &LinearForm) -> Option<Rat> {
        if self.0.len() != other.0.len() {
            return None;
        }
        let j = self.0.iter().position(|v| !v.is_zero())?;
        let q = &other.0[j] / &self.0[j];
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| &(a * &q) == b)
            .then_some(q)
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        LinearForm(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.nvars(), rhs.nvars(), "variable count mismatch");
        LinearForm(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

fn divide_by_form(l0: &LinearForm, f: &Poly) -> Option<Poly> {
    let k = l0.nvars();
    let j = l0.0.iter().position(|v| !v.is_zero())?;
    let pivot = l0.0[j].clone();
    let divisor = l0.to_poly();
    let mut rem = f.clone();
    let mut quotient = Poly::zero(k);
    loop {
        let lead = rem
            .terms
            .iter()
            .filter(|(m, _)| m.0[j] > 0)
            .max_by(|(a, _), (b, _)| a.0[j].cmp(&b.0[j]).then_with(|| a.cmp(b)))
            .map(|(m, c)| (m.lowered(j), c / &pivot));
        let Some((m, c)) = lead else { break };
        let step = Poly::term(m, c);
        rem = &rem - &(&step * &divisor);
        quotient = &quotient + &step;
    }
    rem.is_zero().then_some(quotient)
}

/// Exact division of an integral polynomial by an integral linear form over `Z`.
///
/// Returns `Ok(None)` when `ℓ` does not divide `f` in `Z[e1, …, ek]`.
pub fn divides_linear(ell: &LinearForm, f: &Poly) -> Result<Option<Poly>, PolyError> {
    if ell.nvars() != f.nvars() {
        return Err(PolyError::VariableMismatch(ell.nvars(), f.nvars()));
    }
    let ints = ell.integer_coefficients().ok_or(PolyError::NotIntegral)?;
    if !f.is_integral() {
        return Err(PolyError::NotIntegral);
    }
    let g = content(&ints);
    if g.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    let primitive = LinearForm(ints.iter().map(|v| Rat::from_integer(v / &g)).collect());
    let Some(q) = divide_by_form(&primitive, f) else {
        return Ok(None);
    };
    // Gauss: q is integral here; the content of ℓ must divide it
    let ok = q
        .terms
        .values()
        .all(|c| c.is_integer() && c.to_integer().is_multiple_of(&g));
    Ok(ok.then(|| q.scale(&Rat::new(Int::one(), g))))
}

/// Exact division over `Q`.
pub fn divides_linear_rational(ell: &LinearForm, f: &Poly) -> Result<Option<Poly>, PolyError> {
    if ell.nvars() != f.nvars() {
        return Err(PolyError::VariableMismatch(ell.nvars(), f.nvars()));
    }
    if ell.is_zero() {
        return Err(PolyError::ZeroDivisor);
    }
    Ok(divide_by_form(ell, f))
}

fn convolve<T>(p: &[T], a: &T, b: &T) -> Vec<T>
where
    T: Clone + Zero + Mul<Output = T>,
{
    // (Σ p_i s^i) * (a + b s)
    let mut out = vec![T::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] = out[i].clone() + c.clone() * a.clone();
        out[i + 1] = out[i + 1].clone() + c.clone() * b.clone();
    }
    out
}

/// Matrix of the substitution `f(r, s) ↦ f(ar + bs, cr + ds)` on binary forms of
/// degree `n`, in the basis `r^n, r^{n-1}s, …, s^n`. Row `α` holds the
/// expansion of `(ar+bs)^{n-α} (cr+ds)^α`.
pub fn sym_power_matrix<T>(n: usize, a: &Matrix<T>) -> Result<Matrix<T>, PolyError>
where
    T: Clone + Zero + One + Mul<Output = T>,
{
    if a.nrows() != 2 || a.ncols() != 2 {
        return Err(PolyError::NotTwoByTwo(a.nrows(), a.ncols()));
    }
    let (p, q, r, s) = (&a[(0, 0)], &a[(0, 1)], &a[(1, 0)], &a[(1, 1)]);
    let mut rows = Vec::with_capacity(n + 1);
    for alpha in 0..=n {
        let mut coeffs = vec![T::one()];
        for _ in 0..n - alpha {
            coeffs = convolve(&coeffs, p, q);
        }
        for _ in 0..alpha {
            coeffs = convolve(&coeffs, r, s);
        }
        rows.push(coeffs);
    }
    Ok(Matrix::from_rows(n + 1, rows).expect("square rows"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, IntMatrix};

    fn e(k: usize, i: usize) -> Poly {
        Poly::var(k, i)
    }

    fn c(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    #[test]
    fn rendering_is_graded_lex() {
        let p = &(&e(3, 0).pow(2) * &e(3, 1)).scale(&c(3)) - &e(3, 2).scale(&rat(1, 2));
        assert_eq!(p.to_string(), "3*e1^2*e2 - 1/2*e3");
        assert_eq!(Poly::zero(2).to_string(), "0");
        assert_eq!((&e(2, 1) - &e(2, 0)).to_string(), "-e1 + e2");
        assert_eq!(Poly::constant(2, c(-5)).to_string(), "-5");
    }

    #[test]
    fn monomial_enumeration() {
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0], Monomial::new(vec![2, 0, 0]));
        assert_eq!(ms[5], Monomial::new(vec![0, 0, 2]));
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(monomials_of_degree(2, 0), vec![Monomial::one(2)]);
    }

    #[test]
    fn divides_plain_variable() {
        let l = LinearForm::from_ints(&[1, 0]);
        let f = &e(2, 0) * &e(2, 1);
        assert_eq!(divides_linear(&l, &f).unwrap(), Some(e(2, 1)));
    }

    #[test]
    fn divides_with_content() {
        let l = LinearForm::from_ints(&[2, 0]);
        let f = &e(2, 0).pow(2).scale(&c(2)) - &(&e(2, 0) * &e(2, 1)).scale(&c(4));
        let q = &e(2, 0) - &e(2, 1).scale(&c(2));
        assert_eq!(divides_linear(&l, &f).unwrap(), Some(q));
    }

    #[test]
    fn content_blocks_integral_quotient() {
        let l = LinearForm::from_ints(&[2, 0]);
        let f = e(2, 0).pow(2);
        assert_eq!(divides_linear(&l, &f).unwrap(), None);
        // over Q it divides
        assert_eq!(
            divides_linear_rational(&l, &f).unwrap(),
            Some(e(2, 0).scale(&rat(1, 2)))
        );
    }

    #[test]
    fn zero_divisor_is_rejected() {
        let l = LinearForm::from_ints(&[0, 0]);
        assert_eq!(divides_linear(&l, &e(2, 0)), Err(PolyError::ZeroDivisor));
        let half = LinearForm::new(vec![rat(1, 2), c(0)]);
        assert_eq!(divides_linear(&half, &e(2, 0)), Err(PolyError::NotIntegral));
    }

    #[test]
    fn ratio_detects_parallel_forms() {
        let a = LinearForm::new(vec![rat(1, 2), c(0)]);
        let b = LinearForm::new(vec![rat(-1, 3), c(0)]);
        assert_eq!(a.ratio_to(&b), Some(rat(-2, 3)));
        assert_eq!(a.ratio_to(&LinearForm::from_ints(&[1, 1])), None);
        assert_eq!(LinearForm::new(vec![rat(2, 3), rat(2, 3)]).denominator_lcm(), int(3));
    }

    #[test]
    fn sym_power_first_is_identity_map() {
        let a = IntMatrix::from_i64(&[&[2, -1], &[3, 5]]);
        assert_eq!(sym_power_matrix(1, &a).unwrap(), a);
        assert_eq!(
            sym_power_matrix(2, &IntMatrix::identity(2)).unwrap(),
            IntMatrix::identity(3)
        );
        assert!(sym_power_matrix(2, &IntMatrix::identity(3)).is_err());
    }
}
