//! Property tests: polynomial ring axioms against a dense coefficient grid,
//! theta parity and quasi-periodicity, Halphen symmetry, characteristic
//! arithmetic.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use siegel_theta::characteristics::Characteristic;
use siegel_theta::exactpoly::RationalPoly;
use siegel_theta::halphen::{halphen_rhs, HalphenState};
use siegel_theta::siegel::SiegelPoint;
use siegel_theta::theta::theta_value;
use siegel_theta::Complex64;

// Dense polynomials in x, y with coefficients indexed [deg_x][deg_y].
const SIDE: usize = 8;
type Dense = [[i64; SIDE]; SIDE];

fn dense_strategy() -> impl Strategy<Value = Dense> {
    // Degree below 4 in each variable so products still fit.
    proptest::collection::vec(-6i64..=6, 16).prop_map(|c| {
        let mut d = [[0; SIDE]; SIDE];
        for i in 0..4 {
            for j in 0..4 {
                // Sparse-ish: zero out roughly half the slots.
                if (i + 2 * j) % 3 != 0 || c[4 * i + j] % 2 == 0 {
                    d[i][j] = c[4 * i + j];
                }
            }
        }
        d
    })
}

fn to_poly(d: &Dense) -> RationalPoly {
    let x = RationalPoly::var("x");
    let y = RationalPoly::var("y");
    let mut p = RationalPoly::zero();
    for (i, row) in d.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c != 0 {
                let mono = &x.pow(i as u32).unwrap() * &y.pow(j as u32).unwrap();
                p = &p + &(&RationalPoly::from_int(c) * &mono);
            }
        }
    }
    p
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = [[0; SIDE]; SIDE];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[i + k][j + l] += a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn dense_add(a: &Dense, b: &Dense) -> Dense {
    let mut out = *a;
    for i in 0..SIDE {
        for j in 0..SIDE {
            out[i][j] += b[i][j];
        }
    }
    out
}

fn dense_eval(d: &Dense, x: i64, y: i64) -> BigInt {
    let mut sum = BigInt::from(0);
    for (i, row) in d.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            sum += BigInt::from(c) * BigInt::from(x).pow(i as u32) * BigInt::from(y).pow(j as u32);
        }
    }
    sum
}

fn point(x: i64, y: i64) -> HashMap<String, BigRational> {
    HashMap::from([
        ("x".to_string(), BigRational::from_integer(x.into())),
        ("y".to_string(), BigRational::from_integer(y.into())),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_matches_dense_convolution(a in dense_strategy(), b in dense_strategy()) {
        // Products are restricted to degree < 4 per factor, so `SIDE = 8` suffices.
        let a4 = truncate(&a);
        let b4 = truncate(&b);
        prop_assert_eq!(&to_poly(&a4) * &to_poly(&b4), to_poly(&dense_mul(&a4, &b4)));
        prop_assert_eq!(&to_poly(&a) + &to_poly(&b), to_poly(&dense_add(&a, &b)));
    }

    #[test]
    fn ring_axioms(a in dense_strategy(), b in dense_strategy(), c in dense_strategy()) {
        let (p, q, r) = (to_poly(&a), to_poly(&b), to_poly(&c));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&(&p - &q) + &q, p.clone());
        prop_assert_eq!(&p + &(-&q), &p - &q);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in dense_strategy(), b in dense_strategy(), x in -4i64..=4, y in -4i64..=4) {
        let (p, q) = (to_poly(&a), to_poly(&b));
        let at = point(x, y);
        let pv = p.evaluate(&at).unwrap();
        let qv = q.evaluate(&at).unwrap();
        prop_assert_eq!(pv.clone(), BigRational::from_integer(dense_eval(&a, x, y)));
        prop_assert_eq!((&p * &q).evaluate(&at).unwrap(), &pv * &qv);
        prop_assert_eq!((&p + &q).evaluate(&at).unwrap(), &pv + &qv);
    }
}

fn truncate(d: &Dense) -> Dense {
    let mut out = [[0; SIDE]; SIDE];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = d[i][j];
        }
    }
    out
}

fn tau_strategy(genus: usize) -> impl Strategy<Value = SiegelPoint> {
    let n = genus * (genus + 1) / 2;
    (
        proptest::collection::vec(-1.0f64..1.0, n),
        proptest::collection::vec(-0.2f64..0.2, n),
        proptest::collection::vec(0.7f64..1.6, genus),
    )
        .prop_map(move |(re, off, diag)| {
            let mut upper = Vec::with_capacity(n);
            let mut k = 0;
            for j in 0..genus {
                for l in j..genus {
                    upper.push(Complex64::new(re[k], if j == l { diag[j] } else { off[k] }));
                    k += 1;
                }
            }
            SiegelPoint::from_upper(genus, upper).unwrap()
        })
}

fn z_strategy(genus: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-0.5f64..0.5, -0.25f64..0.25), genus)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

const EPS: f64 = 1e-14;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn theta_parity((g, tau, z, idx) in (1usize..=3).prop_flat_map(|g| (Just(g), tau_strategy(g), z_strategy(g), 0..(1usize << (2 * g))))) {
        let a = Characteristic::from_index(g, idx).unwrap();
        let minus: Vec<Complex64> = z.iter().map(|w| -w).collect();
        let v = theta_value(&a, &z, &tau, EPS).unwrap();
        let w = theta_value(&a, &minus, &tau, EPS).unwrap();
        let sign = if a.is_even() { 1.0 } else { -1.0 };
        prop_assert!((w - v * sign).norm() <= 1e-12 * (1.0 + v.norm()), "{v} vs {w}");
    }

    #[test]
    fn theta_quasi_periodicity(tau in tau_strategy(2), z in z_strategy(2), idx in 0usize..16, j in 0usize..2) {
        let a = Characteristic::from_index(2, idx).unwrap();
        let v = theta_value(&a, &z, &tau, EPS).unwrap();
        let scale = 1e-11 * (1.0 + v.norm());

        let mut shifted = z.clone();
        shifted[j] += 1.0;
        let sign = if a.a_prime_bit(j) == 1 { -1.0 } else { 1.0 };
        let lattice = theta_value(&a, &shifted, &tau, EPS).unwrap();
        prop_assert!((lattice - v * sign).norm() <= scale);

        let mut shifted = z.clone();
        for (l, s) in shifted.iter_mut().enumerate() {
            *s += tau.get(l, j);
        }
        let sign = if a.a_double_prime_bit(j) == 1 { -1.0 } else { 1.0 };
        let factor = (Complex64::new(0.0, -PI) * (tau.get(j, j) + z[j] * 2.0)).exp() * sign;
        let period = theta_value(&a, &shifted, &tau, EPS).unwrap();
        prop_assert!((period - v * factor).norm() <= scale * (1.0 + factor.norm()), "{period} vs {}", v * factor);
    }

    #[test]
    fn halphen_rhs_symmetry(x in (-3.0f64..3.0, -3.0f64..3.0), y in (-3.0f64..3.0, -3.0f64..3.0), z in (-3.0f64..3.0, -3.0f64..3.0)) {
        let c = |p: (f64, f64)| Complex64::new(p.0, p.1);
        let state = |a, b, d| HalphenState { tau: Complex64::new(0.0, 1.0), psi10: a, psi00: b, psi01: d };
        let r = halphen_rhs(&state(c(x), c(y), c(z)));
        // Swapping the first and third variables swaps the first and third equations.
        let s = halphen_rhs(&state(c(z), c(y), c(x)));
        prop_assert!((r[0] - s[2]).norm() < 1e-12 && (r[2] - s[0]).norm() < 1e-12 && (r[1] - s[1]).norm() < 1e-12);
        // Sum of the right-hand sides is 2(xy + yz + zx).
        let sum = r[0] + r[1] + r[2];
        let expect = (c(x) * c(y) + c(y) * c(z) + c(z) * c(x)) * 2.0;
        prop_assert!((sum - expect).norm() < 1e-10);
        // Homogeneous of degree 2.
        let t = halphen_rhs(&state(c(x) * 2.0, c(y) * 2.0, c(z) * 2.0));
        for k in 0..3 {
            prop_assert!((t[k] - r[k] * 4.0).norm() < 1e-10);
        }
    }

    #[test]
    fn characteristic_arithmetic(g in 1usize..=4, i in any::<usize>(), j in any::<usize>()) {
        let n = 1 << (2 * g);
        let a = Characteristic::from_index(g, i % n).unwrap();
        let b = Characteristic::from_index(g, j % n).unwrap();
        let sum = a.try_add(&b).unwrap();
        // The weight is a quadratic form whose polarization is the pairing.
        prop_assert_eq!(sum.weight(), (a.weight() + b.weight() + a.pairing(&b).unwrap()) % 2);
        prop_assert_eq!(a.pairing(&b).unwrap(), b.pairing(&a).unwrap());
        prop_assert_eq!(a.pairing(&a).unwrap(), 0);
        prop_assert!(a.try_add(&a).unwrap().is_zero());
        prop_assert_eq!(Characteristic::from_index(g, a.index()).unwrap(), a);
        prop_assert_eq!(a.to_string().parse::<Characteristic>().unwrap(), a);
    }
}
