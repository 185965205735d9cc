//! The certified tail bound against a brute-force sum over a box ten layers
//! larger than the kernel's, written independently of the kernel (no pairing
//! of `m` with `-m`, no moment bookkeeping).

use std::f64::consts::PI;

use proptest::prelude::*;
use siegel_theta::characteristics::Characteristic;
use siegel_theta::siegel::SiegelPoint;
use siegel_theta::theta::{theta_jet, theta_value};
use siegel_theta::Complex64;

struct Oracle {
    value: Complex64,
    gradient: Vec<Complex64>,
    /// Rounding allowance: a few ulps of every term, weighted by its phase size.
    rounding: f64,
}

fn brute_force(a: &Characteristic, z: &[Complex64], tau: &SiegelPoint, radius: i64) -> Oracle {
    let g = tau.genus();
    let mut value = Complex64::new(0.0, 0.0);
    let mut gradient = vec![Complex64::new(0.0, 0.0); g];
    let mut rounding = 0.0;
    let mut n = vec![-radius; g];
    loop {
        let m: Vec<f64> = (0..g).map(|j| n[j] as f64 + a.a_prime_bit(j) as f64 / 2.0).collect();
        let mut exponent = Complex64::new(0.0, 0.0);
        for j in 0..g {
            for l in 0..g {
                exponent += tau.get(j, l) * (m[j] * m[l]) * Complex64::new(0.0, PI);
            }
            let shifted = z[j] + a.a_double_prime_bit(j) as f64 / 2.0;
            exponent += shifted * m[j] * Complex64::new(0.0, 2.0 * PI);
        }
        let term = exponent.exp();
        value += term;
        for j in 0..g {
            gradient[j] += term * m[j] * Complex64::new(0.0, 2.0 * PI);
        }
        rounding += 16.0 * f64::EPSILON * (1.0 + exponent.norm()) * term.norm();
        let mut j = 0;
        loop {
            if j == g {
                return Oracle { value, gradient, rounding };
            }
            n[j] += 1;
            if n[j] <= radius {
                break;
            }
            n[j] = -radius;
            j += 1;
        }
    }
}

fn tau_strategy(genus: usize) -> impl Strategy<Value = SiegelPoint> {
    let n = genus * (genus + 1) / 2;
    (
        proptest::collection::vec(-1.0f64..1.0, n),
        proptest::collection::vec(-0.15f64..0.15, n),
        proptest::collection::vec(0.5f64..1.5, genus),
    )
        .prop_map(move |(re, off, diag)| {
            let mut upper = Vec::with_capacity(n);
            let mut k = 0;
            for j in 0..genus {
                for l in j..genus {
                    let im = if j == l { diag[j] } else { off[k] };
                    upper.push(Complex64::new(re[k], im));
                    k += 1;
                }
            }
            SiegelPoint::from_upper(genus, upper).unwrap()
        })
}

fn z_strategy(genus: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-0.5f64..0.5, -0.3f64..0.3), genus)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn check(genus: usize, tau: &SiegelPoint, z: &[Complex64], index: usize, eps: f64) -> Result<(), TestCaseError> {
    let a = Characteristic::from_index(genus, index % (1 << (2 * genus))).unwrap();
    let jet = theta_jet(&a, z, tau, eps).unwrap();
    let oracle = brute_force(&a, z, tau, jet.radius as i64 + 10);
    let err = (jet.value - oracle.value).norm();
    prop_assert!(jet.tail_bound <= eps);
    prop_assert!(
        err <= jet.tail_bound + oracle.rounding,
        "value error {err:e} > tail {:e} + rounding {:e} (radius {})",
        jet.tail_bound,
        oracle.rounding,
        jet.radius
    );
    for j in 0..genus {
        let gerr = (jet.z_gradient[j] - oracle.gradient[j]).norm();
        prop_assert!(gerr <= jet.gradient_tail_bound + 2.0 * PI * 4.0 * oracle.rounding, "gradient error {gerr:e}");
    }
    let v = theta_value(&a, z, tau, eps).unwrap();
    prop_assert!((v - oracle.value).norm() <= eps + oracle.rounding);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn genus1_tail_bound_is_certified(tau in tau_strategy(1), z in z_strategy(1), idx in 0usize..4, e in 0usize..4) {
        check(1, &tau, &z, idx, [1e-3, 1e-6, 1e-10, 1e-14][e])?;
    }

    #[test]
    fn genus2_tail_bound_is_certified(tau in tau_strategy(2), z in z_strategy(2), idx in 0usize..16, e in 0usize..4) {
        check(2, &tau, &z, idx, [1e-3, 1e-6, 1e-10, 1e-14][e])?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn genus3_tail_bound_is_certified(tau in tau_strategy(3), z in z_strategy(3), idx in 0usize..64, e in 0usize..3) {
        check(3, &tau, &z, idx, [1e-3, 1e-8, 1e-13][e])?;
    }
}

/// With a loose tolerance the bound is active (the error is not just
/// rounding), yet still respected.
#[test]
fn loose_tolerance_errors_stay_below_bound() {
    let tau = SiegelPoint::from_upper(1, vec![Complex64::new(0.2, 0.3)]).unwrap();
    let z = [Complex64::new(0.1, 0.2)];
    let a = Characteristic::from_index(1, 0).unwrap();
    let jet = theta_jet(&a, &z, &tau, 1e-2).unwrap();
    let oracle = brute_force(&a, &z, &tau, jet.radius as i64 + 10);
    let err = (jet.value - oracle.value).norm();
    assert!(err > 1e-12, "expected a visible truncation error, got {err:e}");
    assert!(err <= jet.tail_bound, "{err:e} > {:e}", jet.tail_bound);
}
