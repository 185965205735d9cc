//! Genus-2 relations: Göpel system equations, the quadratic and quartic
//! thetanull relations, explicit `eta_{a,b}`, the product and 72nd-power
//! formulas, and the relations used to bound the transcendence degree.

use super::general::prop3_terms;
use super::{collect_residuals, CheckConfig, IdentityCheck, NullData, Residuals, DEFAULT_TOLERANCE};
use crate::characteristics::{gopel_systems, Characteristic, GopelSystem};
use crate::error::Result;
use crate::forms::{QuarticForm, SymmetricForm};
use crate::siegel::SiegelPoint;
use crate::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ch(label: &str) -> Characteristic {
    Characteristic::digit_decode(label).expect("valid genus-2 label")
}

fn sum_forms<'a>(forms: impl IntoIterator<Item = &'a SymmetricForm>) -> SymmetricForm {
    forms.into_iter().fold(SymmetricForm::zero(2), |acc, f| &acc + f)
}

fn null_data(config: &CheckConfig, with_quartic: bool) -> Result<(Vec<SiegelPoint>, impl Fn(&SiegelPoint) -> Result<NullData>)> {
    let eps = config.eps;
    Ok((config.plan.taus(2)?, move |tau: &SiegelPoint| NullData::compute(tau, eps, with_quartic)))
}

/// Right-hand side of the explicit `delta psi_a` formula with its terms.
fn explicit_delta_psi(data: &NullData, systems: &[GopelSystem], a: &Characteristic) -> (QuarticForm, f64) {
    let own = data.psi(a).square().scale(c(-2.0));
    let squares = data.even.iter().fold(QuarticForm::zero(2), |acc, b| &acc + &data.psi(b).square());
    let total = sum_forms(data.even.iter().map(|b| data.psi(b))).square();
    let gopel = systems
        .iter()
        .filter(|g| g.contains(a))
        .fold(QuarticForm::zero(2), |acc, g| &acc + &sum_forms(g.members().iter().map(|b| data.psi(b))).square());
    let terms = [own, squares.scale(c(-1.0 / 3.0)), total.scale(c(-1.0 / 6.0)), gopel.scale(c(0.25))];
    let scale = terms.iter().map(QuarticForm::max_norm).fold(0.0, f64::max);
    let sum = terms.iter().skip(1).fold(terms[0].clone(), |acc, t| &acc + t);
    (sum, scale)
}

/// The fifteen Göpel equations `delta(sum_G psi) = (sum_G psi)^2 - 2 sum_G psi^2`,
/// the explicit `delta psi_a` for all ten even `a`, and agreement of the
/// explicit formula with the general second-order system.
pub fn check_genus2_system(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, true)?;
    let systems = gopel_systems(2)?;
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let mut r = Residuals::default();
        for g in &systems {
            let members = g.members();
            let lhs = members.iter().fold(QuarticForm::zero(2), |acc, b| &acc + data.delta_psi(b));
            let sum_sq = sum_forms(members.iter().map(|b| data.psi(b))).square();
            let squares = members.iter().fold(QuarticForm::zero(2), |acc, b| &acc + &data.psi(b).square());
            let rhs = &sum_sq - &squares.scale(c(2.0));
            let scale = sum_sq.max_norm().max(2.0 * squares.max_norm());
            r.record_quartic(s, "goepel equations", || format!("G={g}"), &lhs, &rhs, scale);
        }
        for a in &data.even {
            let (rhs, scale) = explicit_delta_psi(&data, &systems, a);
            r.record_quartic(s, "explicit delta psi", || format!("a={a}"), data.delta_psi(a), &rhs, scale);
            let terms = prop3_terms(&data, a)?;
            let t4 = data.theta(a).powi(4);
            let general = terms.iter().fold(QuarticForm::zero(2), |acc, t| &acc + t).scale(t4.inv());
            let general_scale = terms.iter().map(QuarticForm::max_norm).fold(0.0, f64::max) / t4.norm();
            r.record_quartic(s, "explicit vs general system", || format!("a={a}"), &rhs, &general, scale.max(general_scale));
        }
        Ok(r)
    })?;
    let mut membership = Residuals::default();
    for a in crate::characteristics::enumerate(2, crate::characteristics::ParityFilter::Even)? {
        let count = systems.iter().filter(|g| g.contains(&a)).count();
        membership.record(0, "systems per characteristic", || format!("a={a} in {count}"), c(count as f64), c(6.0), 1.0);
    }
    Ok(residuals.merge(membership).into_check(
        "genus2-system",
        2,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(DEFAULT_TOLERANCE),
        vec![],
    ))
}

/// The three quadratic relations and the three quartic relations among
/// genus-2 thetanulls.
pub fn check_genus2_riemann(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, false)?;
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let t2 = |l: &str| data.theta_label(l).powi(2);
        let t4 = |l: &str| data.theta_label(l).powi(4);
        let mut r = Residuals::default();
        let quadratic = [
            ("00", "01", "02", "03", "20", "21"),
            ("00", "02", "01", "03", "10", "12"),
            ("00", "03", "01", "02", "30", "33"),
        ];
        for (k, (p, q, u, v, x, y)) in quadratic.into_iter().enumerate() {
            let left = t2(p) * t2(q);
            let right = t2(u) * t2(v);
            let lhs = left - right;
            let rhs = t2(x) * t2(y);
            let label = format!("quadratic {}", k + 1);
            r.record(s, &label, || format!("t{p}^2 t{q}^2 - t{u}^2 t{v}^2 = t{x}^2 t{y}^2"), lhs, rhs, left.norm().max(right.norm()));
        }
        let quartic = [("01", "10", "33"), ("02", "21", "30"), ("03", "12", "20")];
        for (k, (p, x, y)) in quartic.into_iter().enumerate() {
            let lhs = t4("00") - t4(p);
            let rhs = t4(x) + t4(y);
            let scale = [t4("00"), t4(p), t4(x), t4(y)].iter().map(|z| z.norm()).fold(0.0, f64::max);
            let label = format!("quartic {}", k + 1);
            r.record(s, &label, || format!("t00^4 - t{p}^4 = t{x}^4 + t{y}^4"), lhs, rhs, scale);
        }
        Ok(r)
    })?;
    Ok(residuals.into_check(
        "genus2-riemann",
        2,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(DEFAULT_TOLERANCE),
        vec!["second quadratic relation read as t00^2 t02^2 - t01^2 t03^2 = t10^2 t12^2".into()],
    ))
}

/// `eta_{a,b} = (psi_{a,1} - psi_{b,1})(psi_{a,2} - psi_{b,2}) - (psi_{a,3} - psi_{b,3})^2`.
pub(crate) fn eta_from_psi(data: &NullData, a: &str, b: &str) -> Complex64 {
    let d = |k| data.psi_label(a, k) - data.psi_label(b, k);
    d(1) * d(2) - d(3) * d(3)
}

/// Explicit thetanull expressions for `eta_{a,b}`, `a, b in {00, 01, 02, 03}`:
/// `(a, b, sign, numerator labels)`, value `sign / 16 * prod theta_n^2 / (theta_a^2 theta_b^2)`.
pub const ETA_FORMULAS: [(&str, &str, f64, [&str; 4]); 6] = [
    ("00", "01", 1.0, ["10", "12", "30", "33"]),
    ("00", "02", 1.0, ["20", "21", "30", "33"]),
    ("01", "02", -1.0, ["10", "12", "20", "21"]),
    ("00", "03", 1.0, ["10", "12", "20", "21"]),
    ("01", "03", -1.0, ["20", "21", "30", "33"]),
    ("02", "03", -1.0, ["10", "12", "30", "33"]),
];

pub(crate) fn eta_from_theta(data: &NullData, a: &str, b: &str) -> Complex64 {
    let (x, y) = if a < b { (a, b) } else { (b, a) };
    let (_, _, sign, num) = ETA_FORMULAS
        .iter()
        .find(|f| f.0 == x && f.1 == y)
        .expect("pair among 00, 01, 02, 03");
    let t2 = |l: &str| data.theta_label(l).powi(2);
    num.iter().map(|l| t2(l)).product::<Complex64>() / (t2(x) * t2(y)) * (sign / 16.0)
}

/// The six explicit `eta` formulas, and their numerators rewritten through
/// the quadratic relations as polynomials in `theta_00..theta_03`.
pub fn check_genus2_eta(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, false)?;
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let t2 = |l: &str| data.theta_label(l).powi(2);
        // Each numerator pair through the quadratic relations.
        let pair = |x: &str| -> Complex64 {
            match x {
                "10" => t2("00") * t2("02") - t2("01") * t2("03"),
                "20" => t2("00") * t2("01") - t2("02") * t2("03"),
                "30" => t2("00") * t2("03") - t2("01") * t2("02"),
                _ => unreachable!(),
            }
        };
        let mut r = Residuals::default();
        for (a, b, _, num) in ETA_FORMULAS {
            let lhs = eta_from_psi(&data, a, b);
            let rhs = eta_from_theta(&data, a, b);
            let d = |k| data.psi_label(a, k) - data.psi_label(b, k);
            let scale = (d(1) * d(2)).norm().max((d(3) * d(3)).norm());
            r.record(s, &format!("eta_{a},{b}"), || format!("a={a} b={b}"), lhs, rhs, scale);
            let direct: Complex64 = num.iter().map(|l| t2(l)).product();
            let rewritten = pair(num[0]) * pair(num[2]);
            r.record(s, "numerators via quadratic relations", || format!("eta_{a},{b}"), direct, rewritten, 0.0);
        }
        Ok(r)
    })?;
    Ok(residuals.into_check("genus2-eta", 2, taus.len(), config.plan.seed, config.tolerance_or(DEFAULT_TOLERANCE), vec![]))
}

/// `(1/16) prod_c theta_c^2 prod_{G containing a, b} prod_{d in G} theta_d^-2`.
fn eta_product_rhs(data: &NullData, systems: &[GopelSystem], a: &Characteristic, b: &Characteristic) -> Complex64 {
    let all: Complex64 = data.even.iter().map(|x| data.theta(x).powi(2)).product();
    let denom: Complex64 = systems
        .iter()
        .filter(|g| g.contains(a) && g.contains(b))
        .flat_map(|g| g.members().iter())
        .map(|d| data.theta(d).powi(2))
        .product();
    all / denom / 16.0
}

fn eta_psi(data: &NullData, a: &Characteristic, b: &Characteristic) -> Complex64 {
    (data.psi(a) - data.psi(b)).determinant()
}

fn pairs(even: &[Characteristic]) -> Vec<(Characteristic, Characteristic)> {
    let mut out = Vec::new();
    for (i, a) in even.iter().enumerate() {
        for b in &even[i + 1..] {
            out.push((*a, *b));
        }
    }
    out
}

fn sign_of(z: Complex64) -> f64 {
    if z.re >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `eta_{a,b} = +-(1/16) prod_c theta_c^2 prod_{G containing a, b} prod_{d in G} theta_d^-2`
/// for all 45 pairs. The sign of each pair is read off at the first sample
/// and then held fixed.
pub fn check_genus2_eta_product(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, false)?;
    let systems = gopel_systems(2)?;
    let first = compute(&taus[0])?;
    let pair_list = pairs(&first.even);
    let signs: Vec<f64> = pair_list
        .iter()
        .map(|(a, b)| sign_of(eta_psi(&first, a, b) / eta_product_rhs(&first, &systems, a, b)))
        .collect();
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let mut r = Residuals::default();
        for ((a, b), sign) in pair_list.iter().zip(&signs) {
            let lhs = eta_psi(&data, a, b);
            let rhs = eta_product_rhs(&data, &systems, a, b) * *sign;
            r.record(s, "eta product", || format!("a={a} b={b} sign={sign:+}"), lhs, rhs, 0.0);
        }
        Ok(r)
    })?;
    let mut structure = Residuals::default();
    for (a, b) in &pair_list {
        let n = systems.iter().filter(|g| g.contains(a) && g.contains(b)).count();
        structure.record(0, "systems per pair", || format!("a={a} b={b} in {n}"), c(n as f64), c(2.0), 1.0);
    }
    let negative: Vec<String> = pair_list
        .iter()
        .zip(&signs)
        .filter(|(_, s)| **s < 0.0)
        .map(|((a, b), _)| format!("{a},{b}"))
        .collect();
    let notes = vec![format!(
        "sign -1 for {} of 45 pairs: {}; +1 otherwise",
        negative.len(),
        negative.join(" ")
    )];
    Ok(residuals.merge(structure).into_check("genus2-eta-product", 2, taus.len(), config.plan.seed, config.tolerance_or(DEFAULT_TOLERANCE), notes))
}

/// `theta_a^72 = +-2^-108 prod_c theta_c^18 prod_{b != a} eta_{a,b}^-3
///            = +-2^72 prod_{pairs} eta_{c,d} prod_{b != a} eta_{a,b}^-3`,
/// compared as ratios in the log domain; signs read off at the first sample.
pub fn check_genus2_seventy_second_power(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, false)?;
    let ln2 = 2f64.ln();
    let ratios = |data: &NullData| -> Vec<(Characteristic, Complex64, Complex64)> {
        let pair_list = pairs(&data.even);
        let log_eta = |a: &Characteristic, b: &Characteristic| eta_psi(data, a, b).ln();
        let all_pairs: Complex64 = pair_list.iter().map(|(a, b)| log_eta(a, b)).sum();
        let all_theta: Complex64 = data.even.iter().map(|x| data.theta(x).ln()).sum();
        data.even
            .iter()
            .map(|a| {
                let own: Complex64 = data.even.iter().filter(|b| *b != a).map(|b| log_eta(a, b)).sum();
                let left = data.theta(a).ln() * 72.0;
                let middle = all_theta * 18.0 - own * 3.0 - 108.0 * ln2;
                let right = all_pairs - own * 3.0 + 72.0 * ln2;
                (*a, (left - middle).exp(), (left - right).exp())
            })
            .collect()
    };
    let first = ratios(&compute(&taus[0])?);
    let signs: Vec<(f64, f64)> = first.iter().map(|(_, m, r)| (sign_of(*m), sign_of(*r))).collect();
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let mut r = Residuals::default();
        for ((a, middle, right), (sm, sr)) in ratios(&data).into_iter().zip(&signs) {
            r.record(s, "theta_a^72 via theta products", || format!("a={a}"), middle, c(*sm), 1.0);
            r.record(s, "theta_a^72 via eta products", || format!("a={a}"), right, c(*sr), 1.0);
        }
        Ok(r)
    })?;
    let describe = |pick: fn(&(f64, f64)) -> f64| -> String {
        first
            .iter()
            .zip(&signs)
            .map(|((a, _, _), s)| format!("{a}:{:+}", pick(s)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let notes = vec![
        format!("signs, theta-product form: {}", describe(|s| s.0)),
        format!("signs, eta-product form: {}", describe(|s| s.1)),
        "compared as ratio to the sign; residual is |ratio - sign|".into(),
    ];
    Ok(residuals.into_check("genus2-72nd-power", 2, taus.len(), config.plan.seed, config.tolerance_or(DEFAULT_TOLERANCE), notes))
}

/// `chi1^2 + chi2^2 + chi3^2 - 2(chi1 chi2 + chi2 chi3 + chi3 chi1)` and its
/// largest term.
fn chi_combination(chi: [Complex64; 3]) -> (Complex64, f64) {
    let [a, b, d] = chi;
    let terms = [a * a, b * b, d * d, a * b * -2.0, b * d * -2.0, d * a * -2.0];
    (terms.iter().sum(), terms.iter().map(|t| t.norm()).fold(0.0, f64::max))
}

/// The pairs defining `chi_1, chi_2, chi_3`.
const CHI_PAIRS: [(&str, &str); 3] = [("00", "01"), ("00", "02"), ("01", "02")];

/// The chi relation with `chi_k = (psi_{a,3} - psi_{b,3})^2` taken from `psi`,
/// and with `chi_k` obtained from the explicit `eta` formulas as
/// `(psi_{a,1} - psi_{b,1})(psi_{a,2} - psi_{b,2}) - eta_{a,b}`.
pub fn check_chi_relation(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, false)?;
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let mut r = Residuals::default();
        let d = |a: &str, b: &str, k| data.psi_label(a, k) - data.psi_label(b, k);
        let from_psi = CHI_PAIRS.map(|(a, b)| d(a, b, 3).powi(2));
        let parts = CHI_PAIRS.map(|(a, b)| (d(a, b, 1) * d(a, b, 2), eta_from_theta(&data, a, b)));
        let from_eta = parts.map(|(p, e)| p - e);
        let (v, scale) = chi_combination(from_psi);
        r.record(s, "chi from psi", String::new, v, c(0.0), scale);
        let (v, scale) = chi_combination(from_eta);
        // Each chi_k here is a difference of larger terms; a perturbation of
        // relative size u in those terms moves the combination by about
        // 4 max|chi| max(|p|, |eta|) u.
        let largest_chi = from_eta.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let largest_part = parts.iter().map(|(p, e)| p.norm().max(e.norm())).fold(0.0, f64::max);
        let conditioned = scale.max(4.0 * largest_chi * largest_part);
        r.record(s, "chi from explicit eta", String::new, v, c(0.0), conditioned);
        Ok(r)
    })?;
    Ok(residuals.into_check("chi-relation", 2, taus.len(), config.plan.seed, config.tolerance_or(DEFAULT_TOLERANCE), vec![]))
}

/// Dense complex polynomial product.
fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Complex64], b: &[Complex64], s: f64) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(c(0.0)) + b.get(k).copied().unwrap_or(c(0.0)) * s)
        .collect()
}

/// The chi relation with the explicit `eta` expanded as polynomials in
/// `X = theta_03^2`, coefficients in `theta_00, theta_01, theta_02` and `psi`.
pub(crate) fn r0_polynomial(data: &NullData) -> Vec<Complex64> {
    let t2 = |l: &str| data.theta_label(l).powi(2);
    let (a, b, d) = (t2("00"), t2("01"), t2("02"));
    // Numerator factors through the quadratic relations, linear in X.
    let f10 = [a * d, -b]; // theta_10^2 theta_12^2
    let f20 = [a * b, -d]; // theta_20^2 theta_21^2
    let f30 = [-b * d, a]; // theta_30^2 theta_33^2
    let etas = [
        poly_mul(&f10, &f30).iter().map(|z| z / (a * b) / 16.0).collect::<Vec<_>>(),
        poly_mul(&f20, &f30).iter().map(|z| z / (a * d) / 16.0).collect(),
        poly_mul(&f10, &f20).iter().map(|z| z / (b * d) / -16.0).collect(),
    ];
    let dpsi = |x: &str, y: &str, k| data.psi_label(x, k) - data.psi_label(y, k);
    let chi: Vec<Vec<Complex64>> = CHI_PAIRS
        .iter()
        .zip(&etas)
        .map(|((x, y), eta)| poly_add(&[dpsi(x, y, 1) * dpsi(x, y, 2)], eta, -1.0))
        .collect();
    let mut total = vec![c(0.0)];
    for k in 0..3 {
        total = poly_add(&total, &poly_mul(&chi[k], &chi[k]), 1.0);
        total = poly_add(&total, &poly_mul(&chi[k], &chi[(k + 1) % 3]), -2.0);
    }
    total
}

/// Leading coefficient of the chi relation in `theta_03` is `-3/16^2`, and
/// the relation vanishes at the actual `theta_03`.
pub fn check_r0_leading(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, false)?;
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let poly = r0_polynomial(&data);
        let mut r = Residuals::default();
        r.record(s, "theta_03^8 coefficient", String::new, poly[4], c(-3.0 / 256.0), 0.0);
        let x = data.theta_label("03").powi(2);
        let terms: Vec<Complex64> = poly.iter().enumerate().map(|(k, p)| p * x.powi(k as i32)).collect();
        let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
        r.record(s, "relation at theta_03", String::new, terms.iter().sum(), c(0.0), scale);
        Ok(r)
    })?;
    Ok(residuals.into_check(
        "r0-leading",
        2,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(DEFAULT_TOLERANCE),
        vec!["chi relation expanded in X = theta_03^2 from the explicit eta; degree 4 in X".into()],
    ))
}

/// `phi_0..phi_3` for the family `k` from `psi(a, j)` and `eta(a, b)`.
pub fn phi_values(psi: impl Fn(&str, usize) -> Complex64, eta: impl Fn(&str, &str) -> Complex64, k: usize) -> [Complex64; 4] {
    let labels = ["00", "01", "02", "03"];
    std::array::from_fn(|i| {
        let others: Vec<&str> = labels.iter().enumerate().filter(|&(m, _)| m != i).map(|(_, l)| *l).collect();
        let (a, b, d) = (others[0], others[1], others[2]);
        let x = |l: &str| psi(l, k);
        let (da, ab, bd) = (x(d) - x(a), x(a) - x(b), x(b) - x(d));
        da * ab * eta(b, d) + bd * ab * eta(d, a) + bd * da * eta(a, b)
    })
}

/// `((sum phi)^2 - 2 sum phi^2)^2 - 64 prod phi` and its largest term.
pub fn relation_8b_value(phi: [Complex64; 4]) -> (Complex64, f64) {
    let sum: Complex64 = phi.iter().sum();
    let squares: Complex64 = phi.iter().map(|p| p * p).sum();
    let inner = sum * sum - squares * 2.0;
    let outer = inner * inner;
    let product = phi.iter().product::<Complex64>() * 64.0;
    let scale = outer.norm().max(product.norm()).max((sum * sum).powi(2).norm());
    (outer - product, scale)
}

/// The quartic relation among `phi_0..phi_3`, for both index families, with
/// `eta` developed from `psi` and with `eta` from the explicit thetanull formulas.
pub fn check_relation_8b(config: &CheckConfig) -> Result<IdentityCheck> {
    let (taus, compute) = null_data(config, false)?;
    let residuals = collect_residuals(taus.len(), |s| {
        let data = compute(&taus[s])?;
        let mut r = Residuals::default();
        let psi = |a: &str, j| data.psi_label(a, j);
        for k in 1..=2 {
            let (v, scale) = relation_8b_value(phi_values(psi, |a, b| eta_from_psi(&data, a, b), k));
            r.record(s, &format!("developed eta, index {k}"), String::new, v, c(0.0), scale);
            let (v, scale) = relation_8b_value(phi_values(psi, |a, b| eta_from_theta(&data, a, b), k));
            r.record(s, &format!("explicit eta, index {k}"), String::new, v, c(0.0), scale);
        }
        Ok(r)
    })?;
    Ok(residuals.into_check(
        "relation-8b",
        2,
        taus.len(),
        config.plan.seed,
        config.tolerance_or(DEFAULT_TOLERANCE),
        vec!["index 2 family obtained from index 1 by substituting psi_(.,1) -> psi_(.,2)".into()],
    ))
}

/// At `tau0 * 1_2`: `((e1 + e2 + e3)^2 - 2(e1^2 + e2^2 + e3^2))^2 = theta_10(tau0)^32 / 16^4`
/// with `e1 = eta_{00,01}`, `e2 = eta_{00,02}`, `e3 = eta_{01,02}`; also
/// `eta_{01,02}^4` alone. The first sample is `tau0 = i`.
pub fn check_r1_leading(config: &CheckConfig) -> Result<IdentityCheck> {
    let mut points = config.plan.upper_half_plane(1, (0.8, 2.0));
    points[0] = Complex64::new(0.0, 1.0);
    let eps = config.eps;
    let k0: Vec<Characteristic> = ["00", "01", "02", "03"].iter().map(|l| ch(l)).collect();
    let residuals = collect_residuals(points.len(), |s| {
        let tau0 = points[s];
        let tau = SiegelPoint::scalar_diagonal(2, tau0)?;
        let data = NullData::compute_for(&tau, eps, false, k0.clone())?;
        let (e1, e2, e3) = (eta_from_psi(&data, "00", "01"), eta_from_psi(&data, "00", "02"), eta_from_psi(&data, "01", "02"));
        let inner = (e1 + e2 + e3).powi(2) - (e1 * e1 + e2 * e2 + e3 * e3) * 2.0;
        let genus1 = SiegelPoint::diagonal(&[tau0])?;
        let t10 = crate::theta::theta_value(&Characteristic::from_masks(1, 1, 0)?, &[c(0.0)], &genus1, eps)?;
        let expected = t10.powi(32) / 16f64.powi(4);
        let mut r = Residuals::default();
        let detail = || format!("tau0={tau0}");
        r.record(s, "leading coefficient", detail, inner * inner, expected, 0.0);
        r.record(s, "eta_01,02^4", detail, e3.powi(4), expected, 0.0);
        Ok(r)
    })?;
    Ok(residuals.into_check("r1-leading", 2, points.len(), config.plan.seed, config.tolerance_or(1e-8), vec![]))
}

/// The quadratic/quartic relations, explicit eta, eta products, and 72nd powers.
pub fn check_genus2_algebraic(config: &CheckConfig) -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        check_genus2_riemann(config)?,
        check_genus2_eta(config)?,
        check_genus2_eta_product(config)?,
        check_genus2_seventy_second_power(config)?,
    ])
}

/// The chi relation, its leading coefficient, the phi relation and its
/// leading coefficient at diagonal points.
pub fn check_r0_r1(config: &CheckConfig) -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        check_chi_relation(config)?,
        check_r0_leading(config)?,
        check_relation_8b(config)?,
        check_r1_leading(config)?,
    ])
}
