//! Exact q-expansions of thetanulls in genus 1 and 2.
//!
//! `theta_a(0, tau) = sum_m i^{(2m).a''} exp(pi i m^t tau m)` over
//! `m in Z^g + a'/2`. With `k = 2m` integral, the term is
//! `exp(2 pi i Tr(nu tau))` for `nu = k k^t / 8`, so exponents are stored as
//! the integral symmetric matrix `8 nu = k k^t` (upper triangle, row-major).
//! Since `k` and `-k` give the same `nu`, every coefficient is
//! `i^s + i^{-s}` summed over sign classes, an integer.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::characteristics::{enumerate, Characteristic, ParityFilter};
use crate::error::{Error, Result};
use crate::identities::{CheckConfig, IdentityCheck, Residuals};
use crate::siegel::SiegelPoint;
use crate::sum::ComplexSum;
use crate::theta::theta_moments;
use crate::Complex64;

/// Largest order accepted in genus 1 and genus 2.
pub const ORDER_LIMITS: [u32; 2] = [200, 40];

/// Largest q-expansion tail accepted by [`crosscheck`].
pub const TAIL_LIMIT: f64 = 1e-12;

pub fn order_limit(genus: usize) -> Result<u32> {
    match genus {
        1 | 2 => Ok(ORDER_LIMITS[genus - 1]),
        _ => Err(Error::UnsupportedGenus {
            genus,
            supported: "1, 2",
        }),
    }
}

/// Upper triangle of `8 nu = k k^t`: `[k1^2]` or `[k1^2, k1 k2, k2^2]`.
pub type Exponent = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QExpansion {
    pub genus: usize,
    pub characteristic: Characteristic,
    /// Lattice points with `|m|^2 <= order` are included.
    pub order: u32,
    pub coefficients: BTreeMap<Exponent, i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub exponent: Exponent,
    pub coeff: i64,
}

fn exponent(k: &[i64]) -> Exponent {
    let g = k.len();
    let mut e = Vec::with_capacity(g * (g + 1) / 2);
    for j in 0..g {
        for l in j..g {
            e.push(k[j] * k[l]);
        }
    }
    e
}

/// `i^s + i^{-s}`.
fn paired_phase(s: i64) -> i64 {
    match s.rem_euclid(4) {
        0 => 2,
        2 => -2,
        _ => 0,
    }
}

/// Exact coefficients of `theta_a(0, tau)` from all `m` with `|m|^2 <= order`.
pub fn thetanull_qexp(a: &Characteristic, order: u32) -> Result<QExpansion> {
    let g = a.genus();
    let limit = order_limit(g)?;
    if order > limit {
        return Err(Error::OrderTooLarge { order, limit });
    }
    // |k|^2 = 4 |m|^2 <= 4 order.
    let bound = 4 * order as i64;
    let r = (bound as f64).sqrt().floor() as i64 + 1;
    let offset: Vec<i64> = (0..g).map(|j| a.a_prime_bit(j) as i64).collect();
    let mut coefficients: BTreeMap<Exponent, i64> = BTreeMap::new();
    let mut k = vec![0i64; g];
    let mut visit = |k: &[i64]| {
        if k.iter().map(|x| x * x).sum::<i64>() > bound {
            return;
        }
        // One representative per pair {k, -k}; k = 0 stands alone.
        let first_nonzero = k.iter().find(|&&x| x != 0);
        let s: i64 = k.iter().enumerate().map(|(j, x)| x * a.a_double_prime_bit(j) as i64).sum();
        let weight = match first_nonzero {
            None => 1,
            Some(&x) if x > 0 => paired_phase(s),
            Some(_) => return,
        };
        *coefficients.entry(exponent(k)).or_insert(0) += weight;
    };
    // k_j = 2 n_j + a'_j ranges over integers of fixed parity.
    fn walk(j: usize, k: &mut Vec<i64>, offset: &[i64], r: i64, visit: &mut dyn FnMut(&[i64])) {
        if j == k.len() {
            visit(k);
            return;
        }
        let mut x = -r - ((-r - offset[j]).rem_euclid(2));
        while x <= r {
            k[j] = x;
            walk(j + 1, k, offset, r, visit);
            x += 2;
        }
    }
    walk(0, &mut k, &offset, r + 1, &mut visit);
    coefficients.retain(|_, v| *v != 0);
    Ok(QExpansion {
        genus: g,
        characteristic: *a,
        order,
        coefficients,
    })
}

impl QExpansion {
    pub fn coefficient_list(&self) -> Vec<Coefficient> {
        self.coefficients
            .iter()
            .map(|(e, c)| Coefficient {
                exponent: e.clone(),
                coeff: *c,
            })
            .collect()
    }

    /// `2 pi i Tr(nu tau)` for the stored exponent.
    fn phase(&self, e: &Exponent, tau: &SiegelPoint) -> Complex64 {
        let trace = match self.genus {
            1 => tau.get(0, 0) * e[0] as f64,
            _ => tau.get(0, 0) * e[0] as f64 + tau.get(0, 1) * (2 * e[1]) as f64 + tau.get(1, 1) * e[2] as f64,
        };
        trace * Complex64::new(0.0, 2.0 * PI / 8.0)
    }

    /// Truncated sum and a rounding allowance for it.
    pub fn evaluate(&self, tau: &SiegelPoint) -> Result<(Complex64, f64)> {
        if tau.genus() != self.genus {
            return Err(Error::GenusMismatch {
                left: self.genus,
                right: tau.genus(),
            });
        }
        let mut sum = ComplexSum::default();
        let mut rounding = 0.0;
        for (e, &c) in &self.coefficients {
            let p = self.phase(e, tau);
            let term = p.exp() * c as f64;
            // exp of an argument of size |p| carries about |p| ulps.
            rounding += (4.0 + p.norm()) * f64::EPSILON * term.norm();
            sum.add(term);
        }
        Ok((sum.value(), rounding))
    }

    /// Bound on the omitted terms `|m|^2 > order` at `tau`.
    pub fn tail_bound(&self, tau: &SiegelPoint) -> f64 {
        let g = self.genus;
        let lambda = tau.lambda_min();
        // |m|^2 > order forces some |m_j| > sqrt(order / g); bound the sum
        // over that region by g * T(r) * S^{g-1} with one-dimensional sums.
        let r = (self.order as f64 / g as f64).sqrt();
        let tail = |r: f64| -> f64 {
            // Smallest |x| > r with x in Z/2 covers both cosets.
            let x0 = ((2.0 * r).floor() + 1.0) / 2.0;
            let q = (-2.0 * PI * lambda * x0).exp();
            2.0 * (-PI * lambda * x0 * x0).exp() / (1.0 - q)
        };
        // Coset points with |x| <= 1 number at most 3.
        let full = 3.0 + tail(1.0);
        g as f64 * tail(r) * full.powi(g as i32 - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crosscheck {
    pub qexp_value: Complex64,
    pub kernel_value: Complex64,
    pub residual: f64,
    pub qexp_tail_bound: f64,
    pub kernel_tail_bound: f64,
    pub rounding: f64,
    /// `qexp_tail_bound + kernel_tail_bound + rounding`.
    pub bound: f64,
}

impl Crosscheck {
    pub fn within_bound(&self) -> bool {
        self.residual <= self.bound
    }
}

/// Compares the truncated expansion with the series kernel at `tau`.
pub fn crosscheck(a: &Characteristic, tau: &SiegelPoint, order: u32, eps: f64) -> Result<Crosscheck> {
    let q = thetanull_qexp(a, order)?;
    let tail = q.tail_bound(tau);
    if !(tail <= TAIL_LIMIT) {
        return Err(Error::TailTooLarge {
            bound: tail,
            limit: TAIL_LIMIT,
        });
    }
    let (value, rounding) = q.evaluate(tau)?;
    let zero = vec![Complex64::new(0.0, 0.0); tau.genus()];
    let m = theta_moments(a, &zero, tau, 0, eps)?;
    let kernel = m.value();
    let kernel_rounding = kernel_rounding(tau, m.radius(), a)?;
    let kernel_tail = m.tail_bound(0);
    let bound = tail + kernel_tail + 2.0 * (rounding + kernel_rounding);
    Ok(Crosscheck {
        qexp_value: value,
        kernel_value: kernel,
        residual: (value - kernel).norm(),
        qexp_tail_bound: tail,
        kernel_tail_bound: kernel_tail,
        rounding: rounding + kernel_rounding,
        bound,
    })
}

/// Rounding allowance for the kernel's box sum, by the same per-term rule as
/// [`QExpansion::evaluate`] applied to the expansion up to the box radius.
fn kernel_rounding(tau: &SiegelPoint, radius: u32, a: &Characteristic) -> Result<f64> {
    let y = tau.imag_matrix();
    let g = tau.genus();
    let mut total = 0.0;
    let r = radius as i64;
    let mut n = vec![-r; g];
    loop {
        let m: Vec<f64> = (0..g).map(|j| n[j] as f64 + a.a_prime_bit(j) as f64 / 2.0).collect();
        let mut quad_im = 0.0;
        let mut quad_re = 0.0;
        for j in 0..g {
            for l in 0..g {
                quad_im += m[j] * y[(j, l)] * m[l];
                quad_re += m[j] * tau.get(j, l).re * m[l];
            }
        }
        let arg = PI * (quad_re.abs() + quad_im) + PI * m.iter().map(|x| x.abs()).sum::<f64>();
        total += (8.0 + arg) * f64::EPSILON * (-PI * quad_im).exp();
        let mut j = 0;
        loop {
            if j == g {
                return Ok(total);
            }
            n[j] += 1;
            if n[j] <= r {
                break;
            }
            n[j] = -r;
            j += 1;
        }
    }
}

/// Shift added to the imaginary part of seeded genus-2 points so that the
/// order-40 expansion has a tail below [`TAIL_LIMIT`].
pub const GENUS2_IMAG_SHIFT: f64 = 1.0;

/// Every even thetanull, expansion at the genus's order limit against the
/// kernel at seeded points. The relative residual is `residual / bound`, so
/// the check passes when every comparison lies within its certified bound.
pub fn check_fourier_crosscheck(config: &CheckConfig, genus: usize) -> Result<IdentityCheck> {
    let order = order_limit(genus)?;
    let taus: Vec<SiegelPoint> = match genus {
        1 => config
            .plan
            .upper_half_plane(20, config.plan.imag_diag)
            .into_iter()
            .map(|t| SiegelPoint::from_upper(1, vec![t]))
            .collect::<Result<_>>()?,
        _ => config
            .plan
            .taus(2)?
            .into_iter()
            .map(|t| {
                let mut u = t.upper().to_vec();
                u[0].im += GENUS2_IMAG_SHIFT;
                u[2].im += GENUS2_IMAG_SHIFT;
                SiegelPoint::from_upper(2, u)
            })
            .collect::<Result<_>>()?,
    };
    let even = enumerate(genus, ParityFilter::Even)?;
    let expansions: Vec<QExpansion> = even.iter().map(|a| thetanull_qexp(a, order)).collect::<Result<_>>()?;
    let eps = config.eps;
    let residuals = crate::identities::collect_residuals(taus.len(), |s| {
        let tau = &taus[s];
        let mut r = Residuals::default();
        for (a, q) in even.iter().zip(&expansions) {
            let x = crosscheck(a, tau, q.order, eps)?;
            let rel = if x.bound > 0.0 { x.residual / x.bound } else { x.residual };
            r.record_residual(s, "expansion vs kernel / bound", || format!("a={a}"), x.residual, rel);
        }
        Ok(r)
    })?;
    Ok(residuals.into_check(
        "fourier-crosscheck",
        genus,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(1.0),
        vec![
            format!("order {order}; relative residual is residual / (tails + rounding)"),
            if genus == 2 {
                format!("seeded points with Im tau shifted by {GENUS2_IMAG_SHIFT} I")
            } else {
                "seeded genus-1 points".into()
            },
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::DEFAULT_EPS;

    fn ch(g: usize, p: u8, pp: u8) -> Characteristic {
        Characteristic::from_masks(g, p, pp).unwrap()
    }

    #[test]
    fn genus1_theta00_is_one_plus_two_q_squares() {
        let q = thetanull_qexp(&ch(1, 0, 0), 50).unwrap();
        // 8 nu = k^2 = 4 n^2; q = e^{pi i tau} carries 8 nu = 4.
        let expect: BTreeMap<Exponent, i64> =
            (0..=7).map(|n: i64| (vec![4 * n * n], if n == 0 { 1 } else { 2 })).collect();
        assert_eq!(q.coefficients, expect);
    }

    #[test]
    fn genus1_theta01_alternates_and_theta10_is_odd_squares() {
        let q = thetanull_qexp(&ch(1, 0, 1), 20).unwrap();
        for (e, c) in &q.coefficients {
            let n = ((e[0] / 4) as f64).sqrt() as i64;
            assert_eq!(*c, if n == 0 { 1 } else if n % 2 == 0 { 2 } else { -2 });
        }
        let q = thetanull_qexp(&ch(1, 1, 0), 20).unwrap();
        assert!(q.coefficients.iter().all(|(e, c)| e[0] % 2 == 1 && *c == 2));
    }

    #[test]
    fn odd_characteristic_vanishes() {
        assert!(thetanull_qexp(&ch(1, 1, 1), 100).unwrap().coefficients.is_empty());
        assert!(thetanull_qexp(&ch(2, 1, 1), 20).unwrap().coefficients.is_empty());
    }

    #[test]
    fn order_limits() {
        assert!(matches!(thetanull_qexp(&ch(1, 0, 0), 201), Err(Error::OrderTooLarge { .. })));
        assert!(matches!(thetanull_qexp(&ch(2, 0, 0), 41), Err(Error::OrderTooLarge { .. })));
        assert!(thetanull_qexp(&ch(3, 0, 0), 1).is_err());
    }

    #[test]
    fn genus2_diagonal_is_a_product() {
        // At diagonal tau only the diagonal of 8 nu matters: summing over the
        // off-diagonal entry must give the convolution of genus-1 expansions.
        for (p, pp) in [(0u8, 0u8), (1, 0), (2, 1), (3, 0), (0, 3)] {
            let a = ch(2, p, pp);
            if !a.is_even() {
                continue;
            }
            let q2 = thetanull_qexp(&a, 30).unwrap();
            let one = |bit_p: u8, bit_pp: u8| thetanull_qexp(&ch(1, bit_p, bit_pp), 30).unwrap();
            let (f, g) = (one(p >> 1, pp >> 1), one(p & 1, pp & 1));
            let mut product: BTreeMap<(i64, i64), i64> = BTreeMap::new();
            for (e1, c1) in &f.coefficients {
                for (e2, c2) in &g.coefficients {
                    if e1[0] + e2[0] <= 120 {
                        *product.entry((e1[0], e2[0])).or_insert(0) += c1 * c2;
                    }
                }
            }
            let mut collapsed: BTreeMap<(i64, i64), i64> = BTreeMap::new();
            for (e, c) in &q2.coefficients {
                *collapsed.entry((e[0], e[2])).or_insert(0) += c;
            }
            collapsed.retain(|_, v| *v != 0);
            product.retain(|_, v| *v != 0);
            assert_eq!(collapsed, product, "a={a}");
        }
    }

    #[test]
    fn crosscheck_examples() {
        let tau = SiegelPoint::from_upper(1, vec![Complex64::new(0.0, 2.0)]).unwrap();
        let x = crosscheck(&ch(1, 0, 0), &tau, 50, DEFAULT_EPS).unwrap();
        assert!(x.residual < 1e-12 && x.within_bound(), "{x:?}");
        let tau = SiegelPoint::diagonal(&[Complex64::new(0.0, 2.0), Complex64::new(0.0, 3.0)]).unwrap();
        for a in enumerate(2, ParityFilter::Even).unwrap() {
            let x = crosscheck(&a, &tau, 40, DEFAULT_EPS).unwrap();
            assert!(x.residual < 1e-12 && x.within_bound(), "{a}: {x:?}");
        }
    }

    #[test]
    fn tail_too_large_near_the_real_axis() {
        let tau = SiegelPoint::from_upper(1, vec![Complex64::new(0.0, 0.05)]).unwrap();
        assert!(matches!(crosscheck(&ch(1, 0, 0), &tau, 10, DEFAULT_EPS), Err(Error::TailTooLarge { .. })));
    }

    #[test]
    fn tail_bound_dominates_omitted_terms() {
        let tau = SiegelPoint::from_upper(2, vec![Complex64::new(0.3, 0.9), Complex64::new(0.1, 0.2), Complex64::new(-0.4, 1.1)]).unwrap();
        let a = ch(2, 1, 2);
        for order in [2u32, 5, 10] {
            let lo = thetanull_qexp(&a, order).unwrap();
            let hi = thetanull_qexp(&a, 40).unwrap();
            let omitted = (hi.evaluate(&tau).unwrap().0 - lo.evaluate(&tau).unwrap().0).norm();
            assert!(omitted <= lo.tail_bound(&tau), "order {order}: {omitted} > {}", lo.tail_bound(&tau));
        }
    }
}
