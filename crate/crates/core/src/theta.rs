//! Certified evaluation of theta series with half-integer characteristics,
//!
//! ```text
//! theta_a(z, tau) = sum_{n in Z^g} exp(pi i m^t tau m + 2 pi i m^t (z + a''/2)),   m = n + a'/2,
//! ```
//!
//! together with the moment sums `sum_m m_{i_1} ... m_{i_k} term(m)` from
//! which every derivative used in this crate is read off:
//!
//! * `d/dz_j theta = 2 pi i * M_j`, `d^2/dz_j dz_l theta = (2 pi i)^2 * M_jl`;
//! * by the heat equation `delta_jl theta = M_jl` and
//!   `delta_jl delta_mp theta = M_jlmp`.
//!
//! The sum runs over the box `|m_j| <= N` in a fixed lexicographic order,
//! pairing `m` with `-m` so that the parity symmetry of the lattice makes
//! odd thetanulls, their Hessians, and even gradients at `z = 0` exactly zero.
//! `N` is chosen from a Gaussian shell bound on the discarded tail.

use std::f64::consts::PI;

use serde::Serialize;

use crate::characteristics::Characteristic;
use crate::error::{Error, Result};
use crate::forms::{orderings, sorted_tuples, tuple_position, QuarticForm, SymmetricForm};
use crate::siegel::{DerivationIndex, SiegelPoint};
use crate::sum::ComplexSum;
use crate::Complex64;

/// Default absolute accuracy requested from the series.
pub const DEFAULT_EPS: f64 = 1e-14;

/// A thetanull must exceed this multiple of its tail bound before it is
/// used as a denominator.
pub const NEAR_ZERO_GUARD: f64 = 1e3;

/// Hard cap on the box radius; beyond this the input is rejected.
const MAX_RADIUS: u32 = 4096;

/// Highest moment order the kernel computes.
pub const MAX_MOMENT_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    /// Box radius: the sum runs over `|n_j + a'_j / 2| <= radius`.
    pub radius: u32,
    /// Certified bound on the discarded tail of the value series.
    pub tail_bound: f64,
}

/// Upper bound on `sum_{m outside the box} |m|^k |term(m)|` for every
/// characteristic, with `lambda = lambda_min(Im tau)` and `beta = |Im z|`.
///
/// Points outside the box have `|m|_inf > N`. Those with
/// `R < |m|_inf <= R + 1` number at most `(2R + 3)^g - (2R + 1)^g`, and each
/// term is bounded by `f(r) = r^k exp(-pi lambda r^2 + 2 pi beta r)` at some
/// `r > R`, hence by `sup_{r >= R} f`. Shells are summed until the ratio of
/// consecutive shell bounds drops below 1/2 past the peak of `f`, after which
/// the remainder is dominated by the last shell.
pub fn shell_tail_bound(genus: usize, lambda: f64, beta: f64, radius: u32, k: usize) -> f64 {
    let g = genus as i32;
    let kf = k as f64;
    let peak = (2.0 * PI * beta + (4.0 * PI * PI * beta * beta + 8.0 * PI * lambda * kf).sqrt())
        / (4.0 * PI * lambda);
    let log_f = |r: f64| {
        let r = r.max(peak);
        let lr = if k == 0 { 0.0 } else { kf * r.ln() };
        lr - PI * lambda * r * r + 2.0 * PI * beta * r
    };
    let mut total = 0.0;
    let mut prev = f64::INFINITY;
    let mut shell = radius as f64;
    loop {
        let count = (2.0 * shell + 3.0).powi(g) - (2.0 * shell + 1.0).powi(g);
        let term = count * log_f(shell).exp();
        total += term;
        if shell > peak && term <= 0.5 * prev {
            // Remaining shells decay at least geometrically with ratio 1/2.
            total += term;
            break;
        }
        if term == 0.0 && shell > peak {
            break;
        }
        prev = term;
        shell += 1.0;
        if shell > radius as f64 + 1e6 {
            return f64::INFINITY;
        }
    }
    total
}

fn imag_norm(z: &[Complex64]) -> f64 {
    z.iter().map(|x| x.im * x.im).sum::<f64>().sqrt()
}

/// Smallest box radius whose discarded tail is bounded by `eps` for the
/// value and the moment sums up to `order`.
fn radius_for(tau: &SiegelPoint, z: &[Complex64], eps: f64, order: usize, scale_2pi: bool) -> Result<Truncation> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if z.len() != tau.genus() {
        return Err(Error::GenusMismatch {
            left: z.len(),
            right: tau.genus(),
        });
    }
    let lambda = tau.lambda_min();
    if !(lambda > crate::siegel::IMAG_EIGEN_MARGIN) {
        return Err(Error::IllConditionedTau {
            lambda_min: lambda,
            margin: crate::siegel::IMAG_EIGEN_MARGIN,
        });
    }
    let beta = imag_norm(z);
    let g = tau.genus();
    let bound_at = |n: u32| -> f64 {
        (0..=order)
            .map(|k| {
                let s = if scale_2pi { (2.0 * PI).powi(k as i32) } else { 1.0 };
                s * shell_tail_bound(g, lambda, beta, n, k)
            })
            .fold(0.0, f64::max)
    };
    let mut n = 1;
    loop {
        let bound = bound_at(n);
        if bound <= eps {
            return Ok(Truncation {
                radius: n,
                tail_bound: shell_tail_bound(g, lambda, beta, n, 0),
            });
        }
        n += 1;
        if n > MAX_RADIUS {
            return Err(Error::IllConditionedTau {
                lambda_min: lambda,
                margin: crate::siegel::IMAG_EIGEN_MARGIN,
            });
        }
    }
}

/// Box radius certifying `|discarded tail of theta_a(z, tau)| <= eps`.
pub fn truncation_radius(tau: &SiegelPoint, z: &[Complex64], eps: f64) -> Result<Truncation> {
    radius_for(tau, z, eps, 0, false)
}

/// Moment sums `sum_m m^t term(m)` for all sorted multi-indices `t` of
/// order `0..=max_order`.
#[derive(Debug, Clone)]
pub struct Moments {
    genus: usize,
    by_order: Vec<Vec<Complex64>>,
    radius: u32,
    /// Certified tail bound for each order's entries.
    tail_bounds: Vec<f64>,
}

impl Moments {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn max_order(&self) -> usize {
        self.by_order.len() - 1
    }

    pub fn value(&self) -> Complex64 {
        self.by_order[0][0]
    }

    /// Moment for the multi-index `t` (any order of indices).
    pub fn get(&self, t: &[usize]) -> Complex64 {
        let mut key = t.to_vec();
        key.sort_unstable();
        self.by_order[key.len()][tuple_position(self.genus, &key)]
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn tail_bound(&self, order: usize) -> f64 {
        self.tail_bounds[order]
    }
}

/// Evaluates the moment sums of `theta_a(z, tau)` up to `max_order <= 4`,
/// each with certified absolute tail at most `eps`.
pub fn theta_moments(
    a: &Characteristic,
    z: &[Complex64],
    tau: &SiegelPoint,
    max_order: usize,
    eps: f64,
) -> Result<Moments> {
    let g = tau.genus();
    if a.genus() != g {
        return Err(Error::GenusMismatch {
            left: a.genus(),
            right: g,
        });
    }
    if max_order > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!("moment order {max_order} > {MAX_MOMENT_ORDER}")));
    }
    let trunc = radius_for(tau, z, eps, max_order, false)?;
    let lambda = tau.lambda_min();
    let beta = imag_norm(z);
    let tail_bounds = (0..=max_order)
        .map(|k| shell_tail_bound(g, lambda, beta, trunc.radius, k))
        .collect();
    let by_order = sum_moments(a, z, tau, max_order, trunc.radius);
    Ok(Moments {
        genus: g,
        by_order,
        radius: trunc.radius,
        tail_bounds,
    })
}

fn sum_moments(a: &Characteristic, z: &[Complex64], tau: &SiegelPoint, max_order: usize, radius: u32) -> Vec<Vec<Complex64>> {
    let g = tau.genus();
    let tuples: Vec<Vec<Vec<usize>>> = (0..=max_order).map(|k| sorted_tuples(g, k)).collect();
    let mut sums: Vec<Vec<ComplexSum>> = tuples.iter().map(|t| vec![ComplexSum::default(); t.len()]).collect();

    // Doubled coordinates 2m, so half-integers are exact integers.
    let shift: Vec<i64> = (0..g).map(|j| i64::from(a.a_prime_bit(j))).collect();
    let dprime: Vec<i64> = (0..g).map(|j| i64::from(a.a_double_prime_bit(j))).collect();
    let r = i64::from(radius);
    // 2m_j ranges over values of parity shift_j with |2m_j| <= 2N.
    let lo: Vec<i64> = shift.iter().map(|&s| -2 * r + s).collect();
    let hi: Vec<i64> = shift.iter().map(|&s| 2 * r - s).collect();
    let z_is_zero = z.iter().all(|x| x.re == 0.0 && x.im == 0.0);

    let tau_entries: Vec<Vec<Complex64>> = (0..g).map(|j| (0..g).map(|l| tau.get(j, l)).collect()).collect();
    let mut two_m = lo.clone();
    let mut products: Vec<Vec<f64>> = tuples.iter().map(|t| vec![0.0; t.len()]).collect();
    loop {
        // Visit m = 0 once and each nonzero pair {m, -m} once, at its
        // lexicographically positive representative.
        let first_nonzero = two_m.iter().find(|&&x| x != 0);
        let canonical = first_nonzero.is_none_or(|&x| x > 0);
        if canonical {
            let is_origin = first_nonzero.is_none();
            let m: Vec<f64> = two_m.iter().map(|&x| x as f64 * 0.5).collect();
            // pi i m^t tau m
            let mut quad = Complex64::new(0.0, 0.0);
            for j in 0..g {
                for l in 0..g {
                    quad += tau_entries[j][l] * (m[j] * m[l]);
                }
            }
            let base = (Complex64::new(0.0, PI) * quad).exp();
            // exp(pi i m^t a'') = i^k with k = (2m)^t a''.
            let k = two_m.iter().zip(&dprime).map(|(x, d)| x * d).sum::<i64>().rem_euclid(4);
            let (cr, ci) = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][k as usize];
            let char_phase = Complex64::new(cr, ci);
            // (w_plus + w_minus, w_plus - w_minus) for the pair (m, -m).
            let (even_part, odd_part) = if is_origin {
                (base, Complex64::new(0.0, 0.0))
            } else if z_is_zero {
                (base * (2.0 * cr), base * Complex64::new(0.0, 2.0 * ci))
            } else {
                let mz: Complex64 = m.iter().zip(z).map(|(mj, zj)| zj * *mj).sum();
                let e = (Complex64::new(0.0, 2.0 * PI) * mz).exp();
                let w_plus = base * e * char_phase;
                let w_minus = base * e.inv() * char_phase.conj();
                (w_plus + w_minus, w_plus - w_minus)
            };
            for (order, order_tuples) in tuples.iter().enumerate() {
                let weight = if order % 2 == 0 { even_part } else { odd_part };
                for (idx, t) in order_tuples.iter().enumerate() {
                    let p = if order == 0 {
                        1.0
                    } else {
                        // Prefix products: t[..order-1] is itself a sorted tuple.
                        let prefix = if order == 1 {
                            1.0
                        } else {
                            products[order - 1][tuple_position(g, &t[..order - 1])]
                        };
                        prefix * m[t[order - 1]]
                    };
                    products[order][idx] = p;
                    if p != 0.0 {
                        sums[order][idx].add(weight * p);
                    }
                }
            }
        }
        // Odometer over the box, last coordinate fastest.
        let mut pos = g;
        loop {
            if pos == 0 {
                return sums.iter().map(|s| s.iter().map(|x| x.value()).collect()).collect();
            }
            pos -= 1;
            if two_m[pos] < hi[pos] {
                two_m[pos] += 2;
                break;
            }
            two_m[pos] = lo[pos];
        }
    }
}

/// `theta_a(z, tau)` alone, with certified truncation error at most `eps`.
pub fn theta_value(a: &Characteristic, z: &[Complex64], tau: &SiegelPoint, eps: f64) -> Result<Complex64> {
    Ok(theta_moments(a, z, tau, 0, eps)?.value())
}

/// Value, first and second `z`-derivatives of `theta_a` at `(z, tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaJet {
    pub value: Complex64,
    pub z_gradient: Vec<Complex64>,
    pub z_hessian: SymmetricForm,
    /// Certified bound on the truncation error of `value`.
    pub tail_bound: f64,
    /// Certified bound on the truncation error of each gradient entry.
    pub gradient_tail_bound: f64,
    /// Certified bound on the truncation error of each Hessian entry.
    pub hessian_tail_bound: f64,
    pub radius: u32,
}

/// JSON shape printed by the `eval` subcommand.
#[derive(Debug, Serialize)]
pub struct ThetaJetJson {
    pub value: [f64; 2],
    pub grad: Vec<[f64; 2]>,
    pub hess: Vec<Vec<[f64; 2]>>,
    pub tail_bound: f64,
}

impl ThetaJet {
    pub fn to_json(&self) -> ThetaJetJson {
        let pair = |z: Complex64| [z.re, z.im];
        let g = self.z_gradient.len();
        ThetaJetJson {
            value: pair(self.value),
            grad: self.z_gradient.iter().copied().map(pair).collect(),
            hess: (0..g)
                .map(|j| (0..g).map(|l| pair(self.z_hessian.get(j, l))).collect())
                .collect(),
            tail_bound: self.tail_bound,
        }
    }
}

/// Evaluates `theta_a`, its gradient and Hessian in `z`, each with certified
/// truncation error at most `eps`.
pub fn theta_jet(a: &Characteristic, z: &[Complex64], tau: &SiegelPoint, eps: f64) -> Result<ThetaJet> {
    let g = tau.genus();
    // Scaled bounds: gradient carries 2 pi |m|, Hessian (2 pi)^2 |m|^2.
    let trunc = radius_for(tau, z, eps, 2, true)?;
    if a.genus() != g {
        return Err(Error::GenusMismatch {
            left: a.genus(),
            right: g,
        });
    }
    let sums = sum_moments(a, z, tau, 2, trunc.radius);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let lambda = tau.lambda_min();
    let beta = imag_norm(z);
    let hess = SymmetricForm::from_fn(g, |j, l| sums[2][tuple_position(g, &[j, l])] * two_pi_i * two_pi_i);
    Ok(ThetaJet {
        value: sums[0][0],
        z_gradient: sums[1].iter().map(|m| m * two_pi_i).collect(),
        z_hessian: hess,
        tail_bound: trunc.tail_bound,
        gradient_tail_bound: 2.0 * PI * shell_tail_bound(g, lambda, beta, trunc.radius, 1),
        hessian_tail_bound: 4.0 * PI * PI * shell_tail_bound(g, lambda, beta, trunc.radius, 2),
        radius: trunc.radius,
    })
}

fn require_parity(a: &Characteristic, even: bool) -> Result<()> {
    if a.is_even() != even {
        return Err(Error::WrongParity {
            expected: if even { "even" } else { "odd" },
            got: a.to_string(),
        });
    }
    Ok(())
}

fn origin(genus: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); genus]
}

/// `delta_jl theta_a(0, tau)`, computed term by term as `sum m_j m_l term(m)`.
pub fn delta_theta(a: &Characteristic, tau: &SiegelPoint, idx: DerivationIndex, eps: f64) -> Result<Complex64> {
    require_parity(a, true)?;
    if idx.l() >= tau.genus() {
        return Err(Error::InvalidArgument(format!("derivation index out of range for genus {}", tau.genus())));
    }
    let m = theta_moments(a, &origin(tau.genus()), tau, 2, eps)?;
    Ok(m.get(&[idx.j(), idx.l()]))
}

/// Thetanull data of an even characteristic: value, `psi_a` and `delta psi_a`.
#[derive(Debug, Clone)]
pub struct ThetanullJet {
    pub value: Complex64,
    pub tail_bound: f64,
    /// `psi_a = (delta_jl theta_a) / theta_a`.
    pub psi: SymmetricForm,
    /// `delta psi_a` as a quartic form, when fourth moments were requested.
    pub delta_psi: Option<QuarticForm>,
}

fn guard_nonzero(value: Complex64, tail_bound: f64, eps: f64) -> Result<()> {
    // The certified tail may be far below eps; guard against the larger of the two.
    let floor = tail_bound.max(eps * 1e-3);
    if !(value.norm() > NEAR_ZERO_GUARD * floor) {
        return Err(Error::NearZeroThetanull {
            value: value.norm(),
            tail_bound,
        });
    }
    Ok(())
}

fn thetanull_from_moments(m: &Moments, eps: f64) -> Result<ThetanullJet> {
    let g = m.genus();
    let value = m.value();
    guard_nonzero(value, m.tail_bound(0), eps)?;
    let psi = SymmetricForm::from_fn(g, |j, l| m.get(&[j, l]) / value);
    let delta_psi = if m.max_order() >= 4 {
        // delta_jl psi_mp = M_jlmp / theta - psi_jl psi_mp, summed over the
        // orderings of each monomial.
        let fourth = QuarticForm::from_symmetric_tensor(g, |key| m.get(key) / value);
        Some(&fourth - &psi.square())
    } else {
        None
    };
    Ok(ThetanullJet {
        value,
        tail_bound: m.tail_bound(0),
        psi,
        delta_psi,
    })
}

/// Evaluates the thetanull of an even characteristic with `psi_a` and, if
/// `with_quartic`, `delta psi_a`.
pub fn thetanull_jet(a: &Characteristic, tau: &SiegelPoint, eps: f64, with_quartic: bool) -> Result<ThetanullJet> {
    require_parity(a, true)?;
    let order = if with_quartic { 4 } else { 2 };
    let m = theta_moments(a, &origin(tau.genus()), tau, order, eps)?;
    thetanull_from_moments(&m, eps)
}

/// `psi_a = (delta_jl theta_a / theta_a)_{jl}` for even `a`.
pub fn psi_matrix(a: &Characteristic, tau: &SiegelPoint, eps: f64) -> Result<SymmetricForm> {
    Ok(thetanull_jet(a, tau, eps, false)?.psi)
}

/// `(1 / 2 pi i) d theta_a / d z_j` at `z = 0` for odd `a`.
pub fn odd_z_gradient(a: &Characteristic, tau: &SiegelPoint, eps: f64) -> Result<Vec<Complex64>> {
    require_parity(a, false)?;
    let g = tau.genus();
    let m = theta_moments(a, &origin(g), tau, 1, eps)?;
    Ok((0..g).map(|j| m.get(&[j])).collect())
}

/// The quartic form `delta psi_a` with coefficients `delta_jl psi_{a,mp}`,
/// from fourth moments and the quotient rule (no differencing in `tau`).
pub fn quartic_delta_psi(a: &Characteristic, tau: &SiegelPoint, eps: f64) -> Result<QuarticForm> {
    Ok(thetanull_jet(a, tau, eps, true)?
        .delta_psi
        .expect("fourth moments requested"))
}

/// Coefficient of `u_j u_l u_m u_p` in `delta psi` divided by the number of
/// orderings, i.e. the symmetrized tensor entry.
pub fn symmetrized_entry(q: &QuarticForm, key: [usize; 4]) -> Complex64 {
    let mut k = key;
    k.sort_unstable();
    q.get(k) / orderings(&k) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristics::{enumerate, ParityFilter};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tau2() -> SiegelPoint {
        SiegelPoint::from_row_major(2, &[c(0.31, 1.13), c(-0.27, 0.08), c(-0.27, 0.08), c(0.44, 0.97)]).unwrap()
    }

    #[test]
    fn radius_small_for_tau_i() {
        let tau = SiegelPoint::diagonal(&[c(0.0, 1.0)]).unwrap();
        let t = truncation_radius(&tau, &[c(0.0, 0.0)], 1e-15).unwrap();
        assert!(t.radius <= 6, "radius {}", t.radius);
        assert!(t.tail_bound <= 1e-15);
        assert!(truncation_radius(&tau, &[c(0.0, 0.0)], 0.0).is_err());
        assert!(truncation_radius(&tau, &[c(0.0, 0.0)], -1.0).is_err());
    }

    #[test]
    fn radius_monotone_in_imaginary_part_and_eps() {
        let small = SiegelPoint::diagonal(&[c(0.2, 0.3), c(0.0, 0.5)]).unwrap();
        let big = SiegelPoint::diagonal(&[c(0.2, 0.6), c(0.0, 1.0)]).unwrap();
        let z = [c(0.1, 0.2), c(0.0, -0.1)];
        for eps in [1e-6, 1e-10, 1e-14] {
            assert!(truncation_radius(&big, &z, eps).unwrap().radius <= truncation_radius(&small, &z, eps).unwrap().radius);
        }
        let mut last = f64::INFINITY;
        for eps in [1e-4, 1e-8, 1e-12, 1e-16] {
            let t = truncation_radius(&small, &z, eps).unwrap();
            assert!(t.tail_bound <= last);
            last = t.tail_bound;
        }
    }

    #[test]
    fn odd_thetanull_and_even_gradient_vanish_exactly() {
        let tau = tau2();
        let zero = [c(0.0, 0.0); 2];
        for a in enumerate(2, ParityFilter::All).unwrap() {
            let jet = theta_jet(&a, &zero, &tau, DEFAULT_EPS).unwrap();
            if a.is_even() {
                assert!(jet.z_gradient.iter().all(|x| *x == c(0.0, 0.0)));
                assert!(jet.value.norm() > 0.0);
            } else {
                assert_eq!(jet.value, c(0.0, 0.0));
                assert!(jet.z_hessian.entries().iter().all(|x| *x == c(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn parity_in_z() {
        let tau = tau2();
        let z = [c(0.13, -0.07), c(-0.21, 0.11)];
        let mz: Vec<_> = z.iter().map(|x| -x).collect();
        for a in enumerate(2, ParityFilter::All).unwrap() {
            let p = theta_jet(&a, &z, &tau, DEFAULT_EPS).unwrap();
            let n = theta_jet(&a, &mz, &tau, DEFAULT_EPS).unwrap();
            let sign = if a.is_even() { 1.0 } else { -1.0 };
            assert!((p.value - n.value * sign).norm() <= 10.0 * (p.tail_bound + 1e-15));
        }
    }

    #[test]
    fn quasi_periodicity_in_integer_shifts() {
        let tau = tau2();
        let z = [c(0.13, -0.07), c(-0.21, 0.11)];
        for a in enumerate(2, ParityFilter::All).unwrap() {
            let base = theta_jet(&a, &z, &tau, DEFAULT_EPS).unwrap().value;
            for j in 0..2 {
                let mut zs = z;
                zs[j] += 1.0;
                let shifted = theta_jet(&a, &zs, &tau, DEFAULT_EPS).unwrap().value;
                // exp(2 pi i m_j) = exp(pi i a'_j).
                let factor = if a.a_prime_bit(j) == 1 { -1.0 } else { 1.0 };
                assert!((shifted - base * factor).norm() < 1e-12, "{a} j={j}");
            }
        }
    }

    #[test]
    fn product_splitting_on_diagonal() {
        let t1 = c(0.1, 1.1);
        let t2 = c(-0.3, 0.8);
        let tau = SiegelPoint::diagonal(&[t1, t2]).unwrap();
        let zero2 = [c(0.0, 0.0); 2];
        let zero1 = [c(0.0, 0.0)];
        let g1 = |tau1| SiegelPoint::diagonal(&[tau1]).unwrap();
        for a in enumerate(2, ParityFilter::Even).unwrap() {
            let a1 = Characteristic::new(&[i64::from(a.a_prime_bit(0))], &[i64::from(a.a_double_prime_bit(0))]).unwrap();
            let a2 = Characteristic::new(&[i64::from(a.a_prime_bit(1))], &[i64::from(a.a_double_prime_bit(1))]).unwrap();
            let whole = theta_jet(&a, &zero2, &tau, DEFAULT_EPS).unwrap().value;
            let f1 = theta_jet(&a1, &zero1, &g1(t1), DEFAULT_EPS).unwrap().value;
            let f2 = theta_jet(&a2, &zero1, &g1(t2), DEFAULT_EPS).unwrap().value;
            assert!((whole - f1 * f2).norm() < 1e-13, "{a}");
        }
    }

    #[test]
    fn heat_equation_matches_hessian() {
        let tau = tau2();
        let zero = [c(0.0, 0.0); 2];
        let two_pi_i = c(0.0, 2.0 * PI);
        for a in enumerate(2, ParityFilter::Even).unwrap() {
            let jet = theta_jet(&a, &zero, &tau, DEFAULT_EPS).unwrap();
            for idx in DerivationIndex::all(2) {
                let d = delta_theta(&a, &tau, idx, DEFAULT_EPS).unwrap();
                let h = jet.z_hessian.get(idx.j(), idx.l()) / (two_pi_i * two_pi_i);
                assert!((d - h).norm() <= 1e-14 * (1.0 + d.norm()));
            }
        }
        let odd: Characteristic = "11".parse().unwrap();
        assert!(delta_theta(&odd, &tau, DerivationIndex::new(0, 0), DEFAULT_EPS).is_err());
    }

    #[test]
    fn delta_theta_real_at_tau_i() {
        let tau = SiegelPoint::diagonal(&[c(0.0, 1.0)]).unwrap();
        let a = Characteristic::zero(1).unwrap();
        let d = delta_theta(&a, &tau, DerivationIndex::new(0, 0), DEFAULT_EPS).unwrap();
        assert_eq!(d.im, 0.0);
        assert!(d.re > 0.0);
    }

    #[test]
    fn delta_theta_matches_central_difference() {
        // Central difference with h = 1e-5 and the delta normalization.
        let tau = tau2();
        let h = 1e-5;
        for a in enumerate(2, ParityFilter::Even).unwrap() {
            for idx in DerivationIndex::all(2) {
                let step = c(h, 0.0);
                let plus = theta_jet(&a, &[c(0.0, 0.0); 2], &tau.perturbed(idx.j(), idx.l(), step).unwrap(), 1e-15).unwrap().value;
                let minus = theta_jet(&a, &[c(0.0, 0.0); 2], &tau.perturbed(idx.j(), idx.l(), -step).unwrap(), 1e-15).unwrap().value;
                let fd = (plus - minus) / (2.0 * h) * idx.normalization();
                let d = delta_theta(&a, &tau, idx, 1e-15).unwrap();
                assert!((fd - d).norm() < 1e-8, "{a} {idx:?}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn psi_diagonal_structure_at_scalar_tau() {
        let t = c(0.17, 0.93);
        let genus1 = SiegelPoint::diagonal(&[t]).unwrap();
        let psi00 = psi_matrix(&Characteristic::zero(1).unwrap(), &genus1, DEFAULT_EPS).unwrap().get(0, 0);
        let psi10 = psi_matrix(&"(1;0)".parse().unwrap(), &genus1, DEFAULT_EPS).unwrap().get(0, 0);
        for g in 2..=3 {
            let tau = SiegelPoint::scalar_diagonal(g, t).unwrap();
            let zero = Characteristic::zero(g).unwrap();
            let ones = Characteristic::from_masks(g, (1 << g) - 1, 0).unwrap();
            for (a, want) in [(zero, psi00), (ones, psi10)] {
                let psi = psi_matrix(&a, &tau, DEFAULT_EPS).unwrap();
                for j in 0..g {
                    for l in 0..g {
                        if j == l {
                            assert!((psi.get(j, l) - want).norm() < 1e-13);
                        } else {
                            assert!(psi.get(j, l).norm() < 1e-14);
                        }
                        assert_eq!(psi.get(j, l), psi.get(l, j));
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_derivative_formula_genus_one() {
        for t in [c(0.0, 1.0), c(0.0, 2.0), c(0.3, 0.8)] {
            let tau = SiegelPoint::diagonal(&[t]).unwrap();
            let odd: Characteristic = "(1;1)".parse().unwrap();
            let d = odd_z_gradient(&odd, &tau, DEFAULT_EPS).unwrap()[0];
            let th = |s: &str| thetanull_jet(&s.parse().unwrap(), &tau, DEFAULT_EPS, false).unwrap().value;
            let prod = th("(0;0)") * th("(0;1)") * th("(1;0)");
            // (1/2 pi i) theta_11' = (i/2) theta_00 theta_01 theta_10 with the
            // phase exp(pi i m a'') of this characteristic convention.
            assert!((d - prod * c(0.0, 0.5)).norm() < 1e-13 * prod.norm(), "{d} vs {prod}");
        }
        let even = Characteristic::zero(1).unwrap();
        assert!(odd_z_gradient(&even, &SiegelPoint::diagonal(&[c(0.0, 1.0)]).unwrap(), DEFAULT_EPS).is_err());
    }

    #[test]
    fn quartic_delta_psi_unit_vectors_and_finite_difference() {
        let tau = tau2();
        let h = 1e-4;
        for a in enumerate(2, ParityFilter::Even).unwrap() {
            let q = quartic_delta_psi(&a, &tau, 1e-15).unwrap();
            // u = e_j picks delta_jj psi_jj.
            for j in 0..2 {
                let mut u = [c(0.0, 0.0); 2];
                u[j] = c(1.0, 0.0);
                let step = c(h, 0.0);
                let pj = |s: Complex64| psi_matrix(&a, &tau.perturbed(j, j, s).unwrap(), 1e-15).unwrap().get(j, j);
                let fd = (pj(-step * 2.0) - pj(step * 2.0) + (pj(step) - pj(-step)) * 8.0) / (12.0 * h)
                    * DerivationIndex::new(j, j).normalization();
                assert!((q.evaluate(&u) - fd).norm() < 1e-7 * (1.0 + fd.norm()), "{a}: {} vs {fd}", q.evaluate(&u));
            }
        }
    }

    #[test]
    fn quartic_entries_match_symmetrized_finite_differences() {
        // The symmetrized entry averages delta_{jl} psi_{mp} over the three
        // ways of splitting {j, l, m, p} into two pairs.
        let tau = tau2();
        let h = 1e-4;
        let a: Characteristic = "12".parse().unwrap();
        let q = quartic_delta_psi(&a, &tau, 1e-15).unwrap();
        let fd = |idx: DerivationIndex, j: usize, l: usize| {
            let at = |s: f64| {
                psi_matrix(&a, &tau.perturbed(idx.j(), idx.l(), c(s, 0.0)).unwrap(), 1e-15)
                    .unwrap()
                    .get(j, l)
            };
            (at(-2.0 * h) - at(2.0 * h) + (at(h) - at(-h)) * 8.0) / (12.0 * h) * idx.normalization()
        };
        for key in sorted_tuples(2, 4) {
            let [j, l, m, p] = [key[0], key[1], key[2], key[3]];
            let splits = [((j, l), (m, p)), ((j, m), (l, p)), ((j, p), (l, m))];
            let avg = splits
                .iter()
                .map(|&((a1, b1), (a2, b2))| fd(DerivationIndex::new(a1, b1), a2, b2))
                .sum::<Complex64>()
                / 3.0;
            let got = symmetrized_entry(&q, [j, l, m, p]);
            assert!((got - avg).norm() < 1e-7 * (1.0 + avg.norm()), "{key:?}: {got} vs {avg}");
        }
    }
}
