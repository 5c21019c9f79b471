use num_traits::Zero;
use orbigraph::exact::{Int, IntMatrix, Matrix, Rat};
use orbigraph::poly::{
    divides_linear, monomials_of_degree, sym_power_matrix, LinearForm, Monomial, Poly,
};
use proptest::prelude::*;

const K: usize = 3;

fn poly(deg: u32, lo: i64, hi: i64) -> impl Strategy<Value = Poly> {
    let ms = monomials_of_degree(K, deg);
    prop::collection::vec(lo..=hi, ms.len()).prop_map(move |cs| {
        let cs: Vec<Rat> = cs.into_iter().map(|c| Rat::from_integer(c.into())).collect();
        Poly::from_coefficients(K, &ms, &cs)
    })
}

fn form() -> impl Strategy<Value = LinearForm> {
    prop::collection::vec(-4i64..=4, K)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(|v| LinearForm::from_ints(&v))
}

/// Replace variable `j` by the polynomial `s` (naive expansion).
fn substitute(f: &Poly, j: usize, s: &Poly) -> Poly {
    let mut out = Poly::zero(f.nvars());
    for (m, c) in f.terms() {
        let mut e = m.exponents().to_vec();
        let pj = e[j];
        e[j] = 0;
        let rest = Poly::term(Monomial::new(e), c.clone());
        out = &out + &(&rest * &s.pow(pj));
    }
    out
}

/// Binary forms in (r, s) as k=2 polynomials; returns the coefficient matrix
/// of (ar+bs)^{n-α}(cr+ds)^α in the basis r^n, …, s^n.
fn substitution_oracle(n: usize, a: &IntMatrix) -> IntMatrix {
    let lin = |x: &Int, y: &Int| {
        LinearForm::new(vec![Rat::from_integer(x.clone()), Rat::from_integer(y.clone())]).to_poly()
    };
    let first = lin(&a[(0, 0)], &a[(0, 1)]);
    let second = lin(&a[(1, 0)], &a[(1, 1)]);
    let basis: Vec<Monomial> = (0..=n as u32).map(|i| Monomial::new(vec![n as u32 - i, i])).collect();
    let rows = (0..=n)
        .map(|alpha| {
            let p = &first.pow((n - alpha) as u32) * &second.pow(alpha as u32);
            p.coefficients_in(&basis).into_iter().map(|c| c.to_integer()).collect()
        })
        .collect();
    Matrix::from_rows(n + 1, rows).unwrap()
}

fn mat2() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-7i64..=7, 4).prop_map(|v| {
        IntMatrix::from_i64(&[&[v[0], v[1]], &[v[2], v[3]]])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn division_round_trip(l in form(), q in poly(2, -5, 5)) {
        let f = &l.to_poly() * &q;
        prop_assert_eq!(divides_linear(&l, &f).unwrap(), Some(q));
    }

    #[test]
    fn division_matches_hyperplane_evaluation(l in form(), f in poly(2, -3, 3)) {
        let ints = l.integer_coefficients().unwrap();
        let j = ints.iter().position(|v| !v.is_zero()).unwrap();
        // x_j = -(Σ_{i≠j} ℓ_i x_i) / ℓ_j
        let pivot = Rat::from_integer(ints[j].clone());
        let mut s = Poly::zero(K);
        for (i, c) in ints.iter().enumerate() {
            if i != j {
                s = &s - &Poly::var(K, i).scale(&(Rat::from_integer(c.clone()) / &pivot));
            }
        }
        let vanishes = substitute(&f, j, &s).is_zero();
        let g = ints.iter().fold(Int::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
        let primitive = LinearForm::from_int_vec(&ints.iter().map(|v| v / &g).collect::<Vec<_>>());
        prop_assert_eq!(divides_linear(&primitive, &f).unwrap().is_some(), vanishes);
    }

    #[test]
    fn graded_product(f in poly(2, -3, 3), g in poly(1, -3, 3)) {
        let p = &f * &g;
        if !f.is_zero() && !g.is_zero() {
            prop_assert_eq!(p.grade(), Some(3));
        }
    }

    #[test]
    fn sym_power_three_matches_substitution(a in mat2()) {
        prop_assert_eq!(sym_power_matrix(3, &a).unwrap(), substitution_oracle(3, &a));
    }

    #[test]
    fn sym_power_is_homomorphism(a in mat2(), b in mat2(), n in 1usize..=4) {
        let lhs = sym_power_matrix(n, &(&a * &b)).unwrap();
        let rhs = &sym_power_matrix(n, &a).unwrap() * &sym_power_matrix(n, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn sym_power_three_closed_form() {
    // rows (a³,3a²b,3ab²,b³), (a²c, a²d+2abc, 2abd+b²c, b²d), (ac², bc²+2acd, 2bcd+ad², bd²), (c³,3c²d,3cd²,d³)
    for (a, b, c, d) in [(2i64, 3, 5, 7), (-1, 4, 0, 2), (1, 0, 0, 1)] {
        let m = sym_power_matrix(3, &IntMatrix::from_i64(&[&[a, b], &[c, d]])).unwrap();
        let expect = IntMatrix::from_i64(&[
            &[a * a * a, 3 * a * a * b, 3 * a * b * b, b * b * b],
            &[a * a * c, a * a * d + 2 * a * b * c, 2 * a * b * d + b * b * c, b * b * d],
            &[a * c * c, b * c * c + 2 * a * c * d, 2 * b * c * d + a * d * d, b * d * d],
            &[c * c * c, 3 * c * c * d, 3 * c * d * d, d * d * d],
        ]);
        assert_eq!(m, expect);
    }
}
