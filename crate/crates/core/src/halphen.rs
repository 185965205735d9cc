//! Genus one: the Halphen system satisfied by `(psi_10, psi_00, psi_01)`,
//! its RK4 integration, the `theta^4` difference formulas, the derivative of
//! Legendre's `lambda`, and the hypergeometric expressions for the periods.
//!
//! Throughout, `delta = (1 / pi i) d/dtau` and `psi_a = delta theta_a / theta_a`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::characteristics::Characteristic;
use crate::error::{Error, Result};
use crate::identities::{collect_residuals, prop3_terms, CheckConfig, IdentityCheck, NullData, Residuals};
use crate::siegel::SiegelPoint;
use crate::theta::{thetanull_jet, theta_value};
use crate::Complex64;

/// Smallest `Im tau` allowed along an integration path.
pub const PATH_MARGIN: f64 = 1e-2;

/// Radius inside which the `2F1` power series is summed directly.
pub const SERIES_RADIUS: f64 = 0.7;

const SERIES_MAX_TERMS: usize = 20_000;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ch(a_prime: u8, a_double_prime: u8) -> Characteristic {
    Characteristic::from_masks(1, a_prime, a_double_prime).expect("genus-1 characteristic")
}

/// Genus-1 point as a 1x1 Siegel point.
pub fn point(tau: Complex64) -> Result<SiegelPoint> {
    SiegelPoint::from_upper(1, vec![tau])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalphenState {
    pub tau: Complex64,
    pub psi10: Complex64,
    pub psi00: Complex64,
    pub psi01: Complex64,
}

impl HalphenState {
    /// The state on the theta trajectory, from the series kernel.
    pub fn from_theta(tau: Complex64, eps: f64) -> Result<Self> {
        let p = point(tau)?;
        let psi = |a: Characteristic| -> Result<Complex64> { Ok(thetanull_jet(&a, &p, eps, false)?.psi.get(0, 0)) };
        Ok(Self {
            tau,
            psi10: psi(ch(1, 0))?,
            psi00: psi(ch(0, 0))?,
            psi01: psi(ch(0, 1))?,
        })
    }

    pub fn psi(&self) -> [Complex64; 3] {
        [self.psi10, self.psi00, self.psi01]
    }

    fn with_psi(tau: Complex64, p: [Complex64; 3]) -> Self {
        Self {
            tau,
            psi10: p[0],
            psi00: p[1],
            psi01: p[2],
        }
    }

    /// Largest componentwise distance in `psi`.
    pub fn distance(&self, other: &HalphenState) -> f64 {
        self.psi()
            .iter()
            .zip(other.psi())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// `delta (psi_10, psi_00, psi_01)` according to the Halphen system.
pub fn halphen_rhs(state: &HalphenState) -> [Complex64; 3] {
    let (x, y, z) = (state.psi10, state.psi00, state.psi01);
    [
        (x * y + x * z - y * z) * 2.0,
        (x * y + y * z - x * z) * 2.0,
        (x * z + y * z - x * y) * 2.0,
    ]
}

fn axpy(p: &[Complex64; 3], h: Complex64, k: &[Complex64; 3]) -> [Complex64; 3] {
    [p[0] + k[0] * h, p[1] + k[1] * h, p[2] + k[2] * h]
}

/// Classical RK4 along the segment from `start.tau` to `end_tau`, in the
/// path parameter `t in [0, 1]`: `d psi / dt = (end - start) pi i delta psi`.
pub fn integrate(start: &HalphenState, end_tau: Complex64, steps: usize) -> Result<HalphenState> {
    if start.tau == end_tau {
        return Ok(*start);
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    let d = end_tau - start.tau;
    let scale = d * Complex64::new(0.0, PI);
    let h = 1.0 / steps as f64;
    let f = |t: f64, p: &[Complex64; 3]| -> Result<[Complex64; 3]> {
        let tau = start.tau + d * t;
        if !(tau.im > PATH_MARGIN) {
            return Err(Error::PathLeavesHalfPlane { t });
        }
        let r = halphen_rhs(&HalphenState::with_psi(tau, *p));
        Ok([r[0] * scale, r[1] * scale, r[2] * scale])
    };
    let mut p = start.psi();
    let hc = c(h);
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = f(t, &p)?;
        let k2 = f(t + h / 2.0, &axpy(&p, hc / 2.0, &k1))?;
        let k3 = f(t + h / 2.0, &axpy(&p, hc / 2.0, &k2))?;
        let k4 = f(t + h, &axpy(&p, hc, &k3))?;
        for i in 0..3 {
            p[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    Ok(HalphenState::with_psi(end_tau, p))
}

/// Endpoint errors against the theta trajectory at `steps` and `2 steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepHalving {
    pub steps: usize,
    pub coarse_error: f64,
    pub fine_error: f64,
    /// `coarse_error / fine_error`; about 16 for a fourth-order method.
    pub ratio: f64,
}

pub fn step_halving(from: Complex64, to: Complex64, steps: usize, eps: f64) -> Result<StepHalving> {
    let start = HalphenState::from_theta(from, eps)?;
    let exact = HalphenState::from_theta(to, eps)?;
    let coarse_error = integrate(&start, to, steps)?.distance(&exact);
    let fine_error = integrate(&start, to, 2 * steps)?.distance(&exact);
    Ok(StepHalving {
        steps,
        coarse_error,
        fine_error,
        ratio: coarse_error / fine_error,
    })
}

/// Thetanulls, `psi` and `lambda` at a genus-1 point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenusOneData {
    pub tau: Complex64,
    pub theta00: Complex64,
    pub theta01: Complex64,
    pub theta10: Complex64,
    pub state: HalphenState,
}

impl GenusOneData {
    pub fn compute(tau: Complex64, eps: f64) -> Result<Self> {
        let p = point(tau)?;
        let jet = |a: Characteristic| thetanull_jet(&a, &p, eps, false);
        let (j10, j00, j01) = (jet(ch(1, 0))?, jet(ch(0, 0))?, jet(ch(0, 1))?);
        Ok(Self {
            tau,
            theta00: j00.value,
            theta01: j01.value,
            theta10: j10.value,
            state: HalphenState {
                tau,
                psi10: j10.psi.get(0, 0),
                psi00: j00.psi.get(0, 0),
                psi01: j01.psi.get(0, 0),
            },
        })
    }

    /// Legendre's `lambda = (theta_10 / theta_00)^4`.
    pub fn lambda(&self) -> Complex64 {
        (self.theta10 / self.theta00).powi(4)
    }
}

/// One comparison `lhs = rhs` with the relative residual normalized by
/// `max(|lhs|, |rhs|, scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub scale: f64,
}

impl Comparison {
    fn new(lhs: Complex64, rhs: Complex64, scale: f64) -> Self {
        Self { lhs, rhs, scale }
    }

    pub fn abs_residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn rel_residual(&self) -> f64 {
        let d = self.scale.max(self.lhs.norm()).max(self.rhs.norm());
        if d > 0.0 {
            self.abs_residual() / d
        } else {
            self.abs_residual()
        }
    }
}

/// `theta_00^4 = 4(psi_10 - psi_01)`, `theta_01^4 = 4(psi_10 - psi_00)`,
/// `theta_10^4 = 4(psi_00 - psi_01)` and their consequence
/// `theta_00^4 = theta_01^4 + theta_10^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theta4Differences {
    pub theta00: Comparison,
    pub theta01: Comparison,
    pub theta10: Comparison,
    pub jacobi: Comparison,
}

pub fn theta4_differences(d: &GenusOneData) -> Theta4Differences {
    let s = &d.state;
    let four = |x: Complex64, y: Complex64| (x - y) * 4.0;
    let t4 = |t: Complex64| t.powi(4);
    let psi_scale = 4.0 * s.psi().iter().map(|p| p.norm()).fold(0.0, f64::max);
    Theta4Differences {
        theta00: Comparison::new(t4(d.theta00), four(s.psi10, s.psi01), psi_scale),
        theta01: Comparison::new(t4(d.theta01), four(s.psi10, s.psi00), psi_scale),
        theta10: Comparison::new(t4(d.theta10), four(s.psi00, s.psi01), psi_scale),
        jacobi: Comparison::new(t4(d.theta00), t4(d.theta01) + t4(d.theta10), 0.0),
    }
}

/// `delta lambda` computed as `4 lambda (psi_10 - psi_00)`, compared with
/// `lambda theta_01^4` and `lambda (1 - lambda) theta_00^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreChecks {
    pub lambda: Complex64,
    pub delta_lambda: Complex64,
    pub via_theta01: Comparison,
    pub via_theta00: Comparison,
}

pub fn legendre_lambda_checks(d: &GenusOneData) -> LegendreChecks {
    let lambda = d.lambda();
    let s = &d.state;
    let delta_lambda = lambda * (s.psi10 - s.psi00) * 4.0;
    let scale = (lambda * 4.0).norm() * s.psi10.norm().max(s.psi00.norm());
    LegendreChecks {
        lambda,
        delta_lambda,
        via_theta01: Comparison::new(delta_lambda, lambda * d.theta01.powi(4), scale),
        via_theta00: Comparison::new(delta_lambda, lambda * (c(1.0) - lambda) * d.theta00.powi(4), scale),
    }
}

/// Gauss hypergeometric `2F1(a, b; c; z)` for real parameters.
///
/// Direct power series for `|z| <= 0.7`; otherwise the Pfaff transformation
/// `2F1(a, b; c; z) = (1 - z)^{-a} 2F1(a, c - b; c; z / (z - 1))` when the new
/// argument lies in that disk. Anything else is reported as not converged.
pub fn hyp2f1(a: f64, b: f64, cc: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    if z.norm() <= SERIES_RADIUS {
        return hyp2f1_series(a, b, cc, z, tol);
    }
    let w = z / (z - 1.0);
    if w.norm() <= SERIES_RADIUS {
        return Ok((c(1.0) - z).powf(-a) * hyp2f1_series(a, cc - b, cc, w, tol)?);
    }
    Err(Error::NotConverged(format!(
        "2F1 argument {z} outside the series disk and its Pfaff image"
    )))
}

fn hyp2f1_series(a: f64, b: f64, cc: f64, z: Complex64, tol: f64) -> Result<Complex64> {
    if cc <= 0.0 && cc.fract() == 0.0 {
        return Err(Error::InvalidArgument(format!("2F1 lower parameter {cc} is a non-positive integer")));
    }
    let mut term = c(1.0);
    let mut sum = c(1.0);
    for n in 0..SERIES_MAX_TERMS {
        let k = n as f64;
        term *= z * ((a + k) * (b + k) / ((cc + k) * (k + 1.0)));
        sum += term;
        // Once the ratio of successive terms is below 1, the remainder is
        // bounded by a geometric series.
        let ratio = z.norm() * ((a + k + 1.0) * (b + k + 1.0) / ((cc + k + 1.0) * (k + 2.0))).abs();
        if ratio < 1.0 && term.norm() * ratio / (1.0 - ratio) <= tol * sum.norm().max(f64::MIN_POSITIVE) {
            return Ok(sum);
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NotConverged(format!("2F1 series at {z} after {SERIES_MAX_TERMS} terms")))
}

/// The period expressions `2F1(1/2, 1/2; 1; lambda) = theta_00^2` and
/// `2F1(-1/2, 1/2; 1; lambda) = (2 theta_00^4 - theta_10^4 + 4(psi_00 + psi_10 + psi_01)) / (3 theta_00^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodChecks {
    pub omega: Comparison,
    pub eta: Comparison,
}

pub fn period_checks(d: &GenusOneData, tol: f64) -> Result<PeriodChecks> {
    let lambda = d.lambda();
    let s = &d.state;
    let t00sq = d.theta00.powi(2);
    let omega = hyp2f1(0.5, 0.5, 1.0, lambda, tol)?;
    let eta = hyp2f1(-0.5, 0.5, 1.0, lambda, tol)?;
    let log_derivative = (s.psi00 + s.psi10 + s.psi01) * 4.0;
    let numerator = d.theta00.powi(4) * 2.0 - d.theta10.powi(4) + log_derivative;
    let scale = d.theta00.powi(4).norm().max(log_derivative.norm()) / (3.0 * t00sq.norm());
    Ok(PeriodChecks {
        omega: Comparison::new(omega, t00sq, 0.0),
        eta: Comparison::new(eta, numerator / (t00sq * 3.0), scale),
    })
}

fn record(r: &mut Residuals, s: usize, component: &str, tau: Complex64, cmp: &Comparison) {
    r.record(s, component, || format!("tau={tau}"), cmp.lhs, cmp.rhs, cmp.scale);
}

/// Sample points for genus-1 checks: the seeded plan's points plus `tau = i`.
fn sample_taus(config: &CheckConfig, stream: u64, imag: (f64, f64)) -> Vec<Complex64> {
    let mut taus = vec![Complex64::new(0.0, 1.0)];
    taus.extend(config.plan.upper_half_plane(stream, imag));
    taus
}

/// Series `delta psi` against the Halphen right-hand side, and the genus-1
/// case of the second-order system against both.
pub fn check_halphen_system(config: &CheckConfig) -> Result<IdentityCheck> {
    let taus = sample_taus(config, 10, config.plan.imag_diag);
    let eps = config.eps;
    let residuals = collect_residuals(taus.len(), |s| {
        let tau = taus[s];
        let data = NullData::compute(&point(tau)?, eps, true)?;
        let a = [ch(1, 0), ch(0, 0), ch(0, 1)];
        let psi = a.map(|x| data.psi(&x).get(0, 0));
        let rhs = halphen_rhs(&HalphenState::with_psi(tau, psi));
        let scale = 2.0 * psi.iter().map(|p| p.norm_sqr()).fold(0.0, f64::max);
        let one = [c(1.0)];
        let mut r = Residuals::default();
        for (k, x) in a.iter().enumerate() {
            let series = data.delta_psi(x).evaluate(&one);
            r.record(s, "series vs halphen", || format!("a={x} tau={tau}"), series, rhs[k], scale);
            let terms = prop3_terms(&data, x)?;
            let theta4 = data.theta(x).powi(4);
            let system: Complex64 = terms.iter().map(|t| t.evaluate(&one)).sum::<Complex64>() / theta4;
            let system_scale = terms.iter().map(|t| t.evaluate(&one).norm()).fold(0.0, f64::max) / theta4.norm();
            r.record(s, "second-order system vs halphen", || format!("a={x} tau={tau}"), system, rhs[k], system_scale);
        }
        Ok(r)
    })?;
    Ok(residuals.into_check(
        "halphen-system",
        1,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(crate::identities::DEFAULT_TOLERANCE),
        vec!["points: tau = i and the seeded genus-1 sample".into()],
    ))
}

/// Fixed integration segment used for the accuracy and order checks.
pub const REFERENCE_FROM: Complex64 = Complex64::new(0.0, 1.0);
pub const REFERENCE_TO: Complex64 = Complex64::new(0.0, 2.0);
pub const REFERENCE_STEPS: usize = 10_000;
/// Coarse step count for the step-halving order estimate; coarse enough that
/// truncation error dominates rounding.
pub const HALVING_STEPS: usize = 8;
pub const ORDER_RATIO_RANGE: (f64, f64) = (12.0, 20.0);

/// RK4 trajectories against the theta-evaluated `psi`: the reference segment
/// `i -> 2i`, unit vertical segments from seeded starts (with the `theta^4`
/// invariants checked at intermediate points), and the step-halving ratio.
pub fn check_halphen_integration(config: &CheckConfig) -> Result<IdentityCheck> {
    let eps = config.eps;
    let mut r = Residuals::default();
    let start = HalphenState::from_theta(REFERENCE_FROM, eps)?;
    let end = integrate(&start, REFERENCE_TO, REFERENCE_STEPS)?;
    let exact = HalphenState::from_theta(REFERENCE_TO, eps)?;
    for (k, name) in ["psi_10", "psi_00", "psi_01"].iter().enumerate() {
        r.record(0, "i -> 2i, 10^4 steps", || (*name).to_string(), end.psi()[k], exact.psi()[k], 0.0);
    }

    let starts = config.plan.upper_half_plane(11, config.plan.imag_diag);
    let checkpoints = 4;
    let steps_per_leg = 500;
    let segments = collect_residuals(starts.len(), |s| {
        let mut r = Residuals::default();
        let mut state = HalphenState::from_theta(starts[s], eps)?;
        for leg in 1..=checkpoints {
            let tau = starts[s] + Complex64::new(0.0, leg as f64 / checkpoints as f64);
            state = integrate(&state, tau, steps_per_leg)?;
            let d = GenusOneData::compute(tau, eps)?;
            for (k, name) in ["psi_10", "psi_00", "psi_01"].iter().enumerate() {
                r.record(s + 1, "seeded vertical segments", || format!("{name} at {tau}"), state.psi()[k], d.state.psi()[k], 0.0);
            }
            let t00 = d.theta00.powi(4);
            let invariant = (state.psi10 - state.psi01) * 4.0;
            r.record(s + 1, "invariant 4(psi_10 - psi_01) = theta_00^4", || format!("tau={tau}"), invariant, t00, 0.0);
        }
        Ok(r)
    })?;
    let mut r = r.merge(segments);

    let halving = step_halving(REFERENCE_FROM, REFERENCE_TO, HALVING_STEPS, eps)?;
    let (lo, hi) = ORDER_RATIO_RANGE;
    let outside = if halving.ratio.is_nan() {
        f64::INFINITY
    } else {
        (lo - halving.ratio).max(halving.ratio - hi).max(0.0)
    };
    r.record_residual(0, "step-halving ratio outside [12, 20]", || format!("ratio {:.3}", halving.ratio), outside, outside);

    Ok(r.into_check(
        "halphen-integration",
        1,
        starts.len() + 1,
        config.plan.seed,
        config.tolerance_or(1e-6),
        vec![
            format!(
                "step halving {} -> {} steps: errors {:.3e} -> {:.3e}, ratio {:.3}",
                halving.steps,
                2 * halving.steps,
                halving.coarse_error,
                halving.fine_error,
                halving.ratio
            ),
            format!("seeded segments: tau0 -> tau0 + i in {checkpoints} legs of {steps_per_leg} steps"),
        ],
    ))
}

pub fn check_theta4_differences(config: &CheckConfig) -> Result<IdentityCheck> {
    let taus = sample_taus(config, 12, config.plan.imag_diag);
    let eps = config.eps;
    let mut r = collect_residuals(taus.len(), |s| {
        let d = GenusOneData::compute(taus[s], eps)?;
        let t = theta4_differences(&d);
        let mut r = Residuals::default();
        record(&mut r, s, "theta_00^4 = 4(psi_10 - psi_01)", d.tau, &t.theta00);
        record(&mut r, s, "theta_01^4 = 4(psi_10 - psi_00)", d.tau, &t.theta01);
        record(&mut r, s, "theta_10^4 = 4(psi_00 - psi_01)", d.tau, &t.theta10);
        record(&mut r, s, "theta_00^4 = theta_01^4 + theta_10^4", d.tau, &t.jacobi);
        Ok(r)
    })?;
    let at_i = GenusOneData::compute(Complex64::new(0.0, 1.0), eps)?;
    r.record(0, "theta_01(i) = theta_10(i)", || "tau=i".into(), at_i.theta01, at_i.theta10, 0.0);
    Ok(r.into_check(
        "theta4-differences",
        1,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(crate::identities::DEFAULT_TOLERANCE),
        vec![],
    ))
}

pub fn check_legendre_lambda(config: &CheckConfig) -> Result<IdentityCheck> {
    let taus = sample_taus(config, 13, config.plan.imag_diag);
    let eps = config.eps;
    let residuals = collect_residuals(taus.len(), |s| {
        let d = GenusOneData::compute(taus[s], eps)?;
        let l = legendre_lambda_checks(&d);
        let mut r = Residuals::default();
        record(&mut r, s, "4 lambda (psi_10 - psi_00) = lambda theta_01^4", d.tau, &l.via_theta01);
        record(&mut r, s, "4 lambda (psi_10 - psi_00) = lambda (1 - lambda) theta_00^4", d.tau, &l.via_theta00);
        Ok(r)
    })?;
    Ok(residuals.into_check(
        "legendre-lambda",
        1,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(crate::identities::DEFAULT_TOLERANCE),
        vec![],
    ))
}

/// Imaginary parts for the period checks: `lambda` stays inside the series
/// disk, where both sides are analytic continuations from the cusp.
pub const PERIOD_IMAG_RANGE: (f64, f64) = (1.2, 2.0);

/// `Im tau` for the cusp-limit comparison.
pub const CUSP_IMAG: f64 = 8.0;

pub fn check_hypergeometric_periods(config: &CheckConfig) -> Result<IdentityCheck> {
    let taus = sample_taus(config, 14, PERIOD_IMAG_RANGE);
    let eps = config.eps;
    let series_tol = eps.min(1e-15);
    let mut r = collect_residuals(taus.len(), |s| {
        let d = GenusOneData::compute(taus[s], eps)?;
        let p = period_checks(&d, series_tol)?;
        let mut r = Residuals::default();
        record(&mut r, s, "2F1(1/2, 1/2; 1; lambda) = theta_00^2", d.tau, &p.omega);
        record(&mut r, s, "2F1(-1/2, 1/2; 1; lambda) = theta expression", d.tau, &p.eta);
        Ok(r)
    })?;
    let cusp = Complex64::new(0.0, CUSP_IMAG);
    let d = GenusOneData::compute(cusp, eps)?;
    let f = hyp2f1(0.5, 0.5, 1.0, d.lambda(), series_tol)?;
    r.record(0, "cusp limit", || "2F1 -> 1".into(), f, c(1.0), 0.0);
    r.record(0, "cusp limit", || "theta_00 -> 1".into(), d.theta00, c(1.0), 0.0);
    Ok(r.into_check(
        "hypergeometric-periods",
        1,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(crate::identities::DEFAULT_TOLERANCE),
        vec![
            format!("Im tau in [{}, {}] plus tau = i; cusp comparison at tau = {CUSP_IMAG}i", PERIOD_IMAG_RANGE.0, PERIOD_IMAG_RANGE.1),
            "2F1 by direct series for |z| <= 0.7, Pfaff transformation beyond".into(),
        ],
    ))
}

/// Theta value at a genus-1 point, for callers outside the module.
pub fn theta_at(a_prime: u8, a_double_prime: u8, tau: Complex64, eps: f64) -> Result<Complex64> {
    theta_value(&ch(a_prime, a_double_prime), &[c(0.0)], &point(tau)?, eps)
}
