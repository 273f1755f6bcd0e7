use diophantine::auxpoly::{divided_derivative, BivariatePolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn seeded(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn poly(max_deg: usize, c: i64) -> impl Strategy<Value = BivariatePolynomial> {
    (0..=max_deg, 0..=max_deg).prop_flat_map(move |(d1, d2)| {
        prop::collection::vec(-c..=c, (d1 + 1) * (d2 + 1)).prop_map(move |v| {
            let v: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
            BivariatePolynomial::from_vector(d1, d2, &v)
        })
    })
}

/// Ordinary partial derivative by repeated differentiation, as rationals.
fn plain_derivative(f: &BivariatePolynomial, k: usize, l: usize) -> Vec<Vec<BigRational>> {
    let mut g: Vec<Vec<BigRational>> = f.coeffs.iter().map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect()).collect();
    for _ in 0..k {
        let mut h = vec![vec![BigRational::zero(); f.d2 + 1]; f.d1 + 1];
        for i in 1..=f.d1 {
            for j in 0..=f.d2 {
                h[i - 1][j] = &g[i][j] * BigRational::from_integer(BigInt::from(i));
            }
        }
        g = h;
    }
    for _ in 0..l {
        let mut h = vec![vec![BigRational::zero(); f.d2 + 1]; f.d1 + 1];
        for i in 0..=f.d1 {
            for j in 1..=f.d2 {
                h[i][j - 1] = &g[i][j] * BigRational::from_integer(BigInt::from(j));
            }
        }
        g = h;
    }
    g
}

fn factorial(n: usize) -> BigRational {
    BigRational::from_integer((1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k)))
}

fn coeff(f: &BivariatePolynomial, i: usize, j: usize) -> BigInt {
    f.coeffs.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(BigInt::zero)
}

proptest! {
    #![proptest_config(seeded(200))]

    #[test]
    fn divided_derivative_is_integral_and_matches(f in poly(5, 50)) {
        for k in 0..=f.d1 + 1 {
            for l in 0..=f.d2 + 1 {
                let d = divided_derivative(&f, k, l);
                let plain = plain_derivative(&f, k, l);
                let scale = factorial(k) * factorial(l);
                for i in 0..=f.d1 {
                    for j in 0..=f.d2 {
                        let q = &plain[i][j] / &scale;
                        prop_assert!(q.is_integer());
                        prop_assert_eq!(q.to_integer(), coeff(&d, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_single_variable(f in poly(5, 20), g in poly(5, 20), n in 0usize..=10) {
        let fg = f.mul(&g);
        for second in [false, true] {
            let dd = |p: &BivariatePolynomial, k: usize| if second { divided_derivative(p, 0, k) } else { divided_derivative(p, k, 0) };
            let mut rhs = BivariatePolynomial::zero(0, 0);
            for i in 0..=n {
                rhs = rhs.add(&dd(&f, i).mul(&dd(&g, n - i)));
            }
            prop_assert_eq!(dd(&fg, n).trimmed(), rhs.trimmed());
        }
    }

    #[test]
    fn leibniz_two_variables(f in poly(5, 20), g in poly(5, 20), n1 in 0usize..=6, n2 in 0usize..=6) {
        let lhs = divided_derivative(&f.mul(&g), n1, n2);
        let mut rhs = BivariatePolynomial::zero(0, 0);
        for i1 in 0..=n1 {
            for i2 in 0..=n2 {
                rhs = rhs.add(&divided_derivative(&f, i1, i2).mul(&divided_derivative(&g, n1 - i1, n2 - i2)));
            }
        }
        prop_assert_eq!(lhs.trimmed(), rhs.trimmed());
    }

    #[test]
    fn iterated_derivatives_compose_with_binomials(f in poly(5, 20), a in 0usize..=3, b in 0usize..=3, c in 0usize..=3, d in 0usize..=3) {
        // D^(a,b) D^(c,d) = C(a+c, a) C(b+d, b) D^(a+c, b+d).
        let lhs = divided_derivative(&divided_derivative(&f, c, d), a, b);
        let base = divided_derivative(&f, a + c, b + d);
        let k = (factorial(a + c) / (factorial(a) * factorial(c))) * (factorial(b + d) / (factorial(b) * factorial(d)));
        let k = k.to_integer();
        for i in 0..=f.d1 {
            for j in 0..=f.d2 {
                prop_assert_eq!(coeff(&lhs, i, j), &k * coeff(&base, i, j));
            }
        }
    }
}
