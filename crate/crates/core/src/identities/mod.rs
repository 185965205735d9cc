//! Numeric verification of theta identities at seeded sample points.
//!
//! Each check evaluates both sides of one identity (or a small family of
//! related ones) at every sample point and every admissible characteristic,
//! and reports the largest absolute and scale-normalized residuals. The
//! relative residual of a single comparison divides by the largest magnitude
//! among the terms that enter it, so identities between very large or very
//! small quantities are judged on the same footing.

mod general;
mod genus2;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characteristics::{enumerate, Characteristic, ParityFilter};
use crate::error::{Error, Result};
use crate::forms::{QuarticForm, SymmetricForm};
use crate::siegel::SiegelPoint;
use crate::theta::{thetanull_jet, DEFAULT_EPS};
use crate::Complex64;

pub use general::{
    check_heat_equation, check_lemma4_diagonal, check_prop3, check_prop4, check_riemann_quartic,
    check_transformation_laws, Prop4Part,
};
pub(crate) use general::prop3_terms;
pub use genus2::{
    check_chi_relation, check_genus2_algebraic, check_genus2_eta, check_genus2_eta_product,
    check_genus2_riemann, check_genus2_seventy_second_power, check_genus2_system, check_r0_leading,
    check_r0_r1, check_r1_leading, check_relation_8b, phi_values, relation_8b_value,
};

/// Default relative tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Residuals of one named sub-identity.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ComponentResidual {
    pub label: String,
    pub comparisons: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
}

/// The comparison with the largest relative residual.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Witness {
    pub sample: usize,
    pub component: String,
    pub detail: String,
    pub rel_residual: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub genus: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub status: Status,
    pub components: Vec<ComponentResidual>,
    /// Worst comparison; always present when the check fails.
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Residual bookkeeping for one sample point (or a merge of several).
#[derive(Debug, Clone, Default)]
pub struct Residuals {
    components: BTreeMap<String, ComponentResidual>,
    order: Vec<String>,
    worst: Option<Witness>,
}

impl Residuals {
    /// Records `|lhs - rhs|` normalized by `max(scale, |lhs|, |rhs|)`.
    pub fn record(&mut self, sample: usize, component: &str, detail: impl FnOnce() -> String, lhs: Complex64, rhs: Complex64, scale: f64) {
        let abs = (lhs - rhs).norm();
        let denom = scale.max(lhs.norm()).max(rhs.norm());
        let rel = if denom > 0.0 { abs / denom } else { abs };
        self.record_residual(sample, component, detail, abs, rel);
    }

    /// Records a precomputed residual pair. NaN counts as infinite.
    pub fn record_residual(&mut self, sample: usize, component: &str, detail: impl FnOnce() -> String, abs: f64, rel: f64) {
        let abs = if abs.is_nan() { f64::INFINITY } else { abs };
        let rel = if rel.is_nan() { f64::INFINITY } else { rel };
        let entry = self.components.entry(component.to_string()).or_insert_with(|| {
            self.order.push(component.to_string());
            ComponentResidual {
                label: component.to_string(),
                comparisons: 0,
                max_abs_residual: 0.0,
                max_rel_residual: 0.0,
            }
        });
        entry.comparisons += 1;
        entry.max_abs_residual = entry.max_abs_residual.max(abs);
        entry.max_rel_residual = entry.max_rel_residual.max(rel);
        if self.worst.as_ref().is_none_or(|w| rel > w.rel_residual) {
            self.worst = Some(Witness {
                sample,
                component: component.to_string(),
                detail: detail(),
                rel_residual: rel,
            });
        }
    }

    /// Coefficientwise comparison of quartic forms, normalized by the largest
    /// coefficient among `lhs`, `rhs` and the supplied term scale.
    pub fn record_quartic(&mut self, sample: usize, component: &str, detail: impl Fn() -> String, lhs: &QuarticForm, rhs: &QuarticForm, scale: f64) {
        let denom = scale.max(lhs.max_norm()).max(rhs.max_norm());
        let diff = (lhs - rhs).max_norm();
        let rel = if denom > 0.0 { diff / denom } else { diff };
        self.record_residual(sample, component, detail, diff, rel);
    }

    /// Merges `other` after `self`; ties keep the earlier witness.
    pub fn merge(mut self, other: Residuals) -> Residuals {
        for label in other.order {
            let c = &other.components[&label];
            match self.components.get_mut(&label) {
                Some(mine) => {
                    mine.comparisons += c.comparisons;
                    mine.max_abs_residual = mine.max_abs_residual.max(c.max_abs_residual);
                    mine.max_rel_residual = mine.max_rel_residual.max(c.max_rel_residual);
                }
                None => {
                    self.order.push(label.clone());
                    self.components.insert(label, c.clone());
                }
            }
        }
        if let Some(w) = other.worst {
            if self.worst.as_ref().is_none_or(|mine| w.rel_residual > mine.rel_residual) {
                self.worst = Some(w);
            }
        }
        self
    }

    pub fn into_check(self, name: &str, genus: usize, sample_count: usize, seed: u64, tolerance: f64, notes: Vec<String>) -> IdentityCheck {
        let components: Vec<ComponentResidual> = self.order.iter().map(|l| self.components[l].clone()).collect();
        let max_abs = components.iter().map(|c| c.max_abs_residual).fold(0.0, f64::max);
        let max_rel = components.iter().map(|c| c.max_rel_residual).fold(0.0, f64::max);
        let pass = !components.is_empty() && max_rel <= tolerance;
        IdentityCheck {
            name: name.to_string(),
            genus,
            sample_count,
            seed,
            tolerance,
            max_abs_residual: max_abs,
            max_rel_residual: max_rel,
            status: if pass { Status::Pass } else { Status::Fail },
            components,
            witness: self.worst,
            notes,
        }
    }
}

/// Evaluates `per_sample` for every index concurrently and merges the results
/// in index order, so the outcome does not depend on scheduling.
pub fn collect_residuals<F>(count: usize, per_sample: F) -> Result<Residuals>
where
    F: Fn(usize) -> Result<Residuals> + Sync,
{
    let parts: Vec<Result<Residuals>> = (0..count).into_par_iter().map(&per_sample).collect();
    let mut total = Residuals::default();
    for p in parts {
        total = total.merge(p?);
    }
    Ok(total)
}

/// Seeded distribution of sample points.
///
/// `tau = X + iY` with `X` symmetric, entries uniform in `[-real_range, real_range]`;
/// `Y = D + S` with `D` diagonal uniform in `imag_diag` and `S` symmetric
/// uniform in `[-imag_offdiag, imag_offdiag]`; `z` has real and imaginary
/// parts uniform in `[-z_range, z_range]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePlan {
    pub seed: u64,
    pub count: usize,
    pub real_range: f64,
    pub imag_diag: (f64, f64),
    pub imag_offdiag: f64,
    pub z_range: f64,
}

impl SamplePlan {
    pub fn new(seed: u64, count: usize) -> Self {
        Self {
            seed,
            count,
            real_range: 1.0,
            imag_diag: (0.8, 2.0),
            imag_offdiag: 0.1,
            z_range: 0.3,
        }
    }

    fn rng(&self, genus: usize, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream * 8 + genus as u64);
        rng
    }

    fn draw_tau(&self, rng: &mut ChaCha8Rng, genus: usize) -> Result<SiegelPoint> {
        let mut upper = Vec::with_capacity(genus * (genus + 1) / 2);
        for j in 0..genus {
            for l in j..genus {
                let x = rng.random_range(-self.real_range..=self.real_range);
                let mut y = rng.random_range(-self.imag_offdiag..=self.imag_offdiag);
                if j == l {
                    y += rng.random_range(self.imag_diag.0..=self.imag_diag.1);
                }
                upper.push(Complex64::new(x, y));
            }
        }
        SiegelPoint::from_upper(genus, upper)
    }

    /// The `count` points `tau`, generated sequentially from the seed.
    pub fn taus(&self, genus: usize) -> Result<Vec<SiegelPoint>> {
        let mut rng = self.rng(genus, 0);
        (0..self.count).map(|_| self.draw_tau(&mut rng, genus)).collect()
    }

    /// `count` pairs `(z, tau)`.
    pub fn points(&self, genus: usize) -> Result<Vec<(Vec<Complex64>, SiegelPoint)>> {
        let mut rng = self.rng(genus, 1);
        (0..self.count)
            .map(|_| {
                let tau = self.draw_tau(&mut rng, genus)?;
                let z = (0..genus)
                    .map(|_| {
                        Complex64::new(
                            rng.random_range(-self.z_range..=self.z_range),
                            rng.random_range(-self.z_range..=self.z_range),
                        )
                    })
                    .collect();
                Ok((z, tau))
            })
            .collect()
    }

    /// `count` genus-1 points with imaginary part in `imag` (used for scalar
    /// diagonal specializations and genus-1 checks).
    pub fn upper_half_plane(&self, stream: u64, imag: (f64, f64)) -> Vec<Complex64> {
        let mut rng = self.rng(1, 2 + stream);
        (0..self.count)
            .map(|_| {
                let x = rng.random_range(-self.real_range..=self.real_range);
                let y = rng.random_range(imag.0..=imag.1);
                Complex64::new(x, y)
            })
            .collect()
    }

    /// Seeded random complex vectors, e.g. test directions `u` for quartic forms.
    pub fn directions(&self, genus: usize, sample: usize, count: usize) -> Vec<Vec<Complex64>> {
        let mut rng = self.rng(genus, 1000 + sample as u64);
        (0..count)
            .map(|_| {
                (0..genus)
                    .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
                    .collect()
            })
            .collect()
    }
}

/// Everything a check needs to know about a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckConfig {
    pub plan: SamplePlan,
    pub eps: f64,
    /// Overrides each check's default tolerance when set.
    pub tolerance: Option<f64>,
    /// Number of random Gamma(4,8) elements for transformation checks.
    pub gamma_count: usize,
}

impl CheckConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        Self {
            plan: SamplePlan::new(seed, samples),
            eps: DEFAULT_EPS,
            tolerance: None,
            gamma_count: 10,
        }
    }

    pub fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        if self.plan.count == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {}", self.eps)));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("tolerance must be positive, got {t}")));
            }
        }
        if self.gamma_count == 0 {
            return Err(Error::InvalidArgument("gamma count must be positive".into()));
        }
        Ok(())
    }
}

/// Thetanull data of all even characteristics at one point.
#[derive(Debug, Clone)]
pub struct NullData {
    pub genus: usize,
    pub even: Vec<Characteristic>,
    values: Vec<Option<Complex64>>,
    psi: Vec<Option<SymmetricForm>>,
    delta_psi: Vec<Option<QuarticForm>>,
}

impl NullData {
    pub fn compute(tau: &SiegelPoint, eps: f64, with_quartic: bool) -> Result<Self> {
        let even = enumerate(tau.genus(), ParityFilter::Even)?;
        Self::compute_for(tau, eps, with_quartic, even)
    }

    /// Data for the listed even characteristics only, e.g. where others vanish.
    pub fn compute_for(tau: &SiegelPoint, eps: f64, with_quartic: bool, even: Vec<Characteristic>) -> Result<Self> {
        let g = tau.genus();
        let n = 1 << (2 * g);
        let mut values = vec![None; n];
        let mut psi = vec![None; n];
        let mut delta_psi = vec![None; n];
        for a in &even {
            let jet = thetanull_jet(a, tau, eps, with_quartic)?;
            values[a.index()] = Some(jet.value);
            psi[a.index()] = Some(jet.psi);
            delta_psi[a.index()] = jet.delta_psi;
        }
        Ok(Self {
            genus: g,
            even,
            values,
            psi,
            delta_psi,
        })
    }

    /// Thetanull; zero for odd characteristics.
    pub fn theta(&self, a: &Characteristic) -> Complex64 {
        self.values[a.index()].unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn psi(&self, a: &Characteristic) -> &SymmetricForm {
        self.psi[a.index()].as_ref().expect("psi is defined for even characteristics")
    }

    pub fn delta_psi(&self, a: &Characteristic) -> &QuarticForm {
        self.delta_psi[a.index()].as_ref().expect("quartic data requested")
    }

    /// Thetanull by genus-2 digit label.
    pub fn theta_label(&self, label: &str) -> Complex64 {
        self.theta(&Characteristic::digit_decode(label).expect("valid label"))
    }

    /// `psi_{a,k}` in the genus-2 numbering `k = 1: (1,1), 2: (2,2), 3: (1,2)`.
    pub fn psi_label(&self, label: &str, k: usize) -> Complex64 {
        let p = self.psi(&Characteristic::digit_decode(label).expect("valid label"));
        match k {
            1 => p.get(0, 0),
            2 => p.get(1, 1),
            3 => p.get(0, 1),
            _ => panic!("psi index {k} out of range"),
        }
    }
}

/// Runs a registered check for one genus.
pub type CheckFn = fn(&CheckConfig, usize) -> Result<IdentityCheck>;

pub struct RegistryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub genera: &'static [usize],
    pub run: CheckFn,
}

fn run_prop4_i(config: &CheckConfig, genus: usize) -> Result<IdentityCheck> {
    check_prop4(genus, config, Prop4Part::I)
}

fn run_prop4_ii(config: &CheckConfig, genus: usize) -> Result<IdentityCheck> {
    check_prop4(genus, config, Prop4Part::II)
}

fn genus2_only(f: fn(&CheckConfig) -> Result<IdentityCheck>, genus: usize, config: &CheckConfig) -> Result<IdentityCheck> {
    if genus != 2 {
        return Err(Error::UnsupportedGenus {
            genus,
            supported: "2",
        });
    }
    f(config)
}

fn genus1_only(f: fn(&CheckConfig) -> Result<IdentityCheck>, genus: usize, config: &CheckConfig) -> Result<IdentityCheck> {
    if genus != 1 {
        return Err(Error::UnsupportedGenus {
            genus,
            supported: "1",
        });
    }
    f(config)
}

macro_rules! genus2 {
    ($f:path) => {{
        fn run(config: &CheckConfig, genus: usize) -> Result<IdentityCheck> {
            genus2_only($f, genus, config)
        }
        run as CheckFn
    }};
}

macro_rules! genus1 {
    ($f:path) => {{
        fn run(config: &CheckConfig, genus: usize) -> Result<IdentityCheck> {
            genus1_only($f, genus, config)
        }
        run as CheckFn
    }};
}

/// Every registered identity check, in reporting order.
pub fn registry() -> Vec<RegistryEntry> {
    vec![
        RegistryEntry {
            name: "heat-equation",
            description: "series delta theta vs z-Hessian / (2 pi i)^2 and vs tau finite differences",
            genera: &[1, 2, 3],
            run: check_heat_equation,
        },
        RegistryEntry {
            name: "riemann-quartic",
            description: "quartic Riemann relation for all pairs (a, c)",
            genera: &[1, 2, 3],
            run: check_riemann_quartic,
        },
        RegistryEntry {
            name: "prop3",
            description: "second-order system for delta psi_a as quartic forms",
            genera: &[1, 2, 3],
            run: check_prop3,
        },
        RegistryEntry {
            name: "prop4-i",
            description: "squared odd gradients over theta_0 via psi differences",
            genera: &[1, 2, 3],
            run: run_prop4_i,
        },
        RegistryEntry {
            name: "prop4-ii",
            description: "fourth powers of odd gradients via theta^4 psi^2",
            genera: &[1, 2, 3],
            run: run_prop4_ii,
        },
        RegistryEntry {
            name: "lemma4-diagonal",
            description: "det(psi_b - psi_a) at scalar diagonal tau vs genus-1 data",
            genera: &[1, 2, 3],
            run: check_lemma4_diagonal,
        },
        RegistryEntry {
            name: "transformation-laws",
            description: "delta lambda_0 congruence law and weight-2 law for eta under Gamma(4,8)",
            genera: &[1, 2],
            run: check_transformation_laws,
        },
        RegistryEntry {
            name: "genus2-system",
            description: "Goepel system equations and explicit delta psi_a",
            genera: &[2],
            run: genus2!(check_genus2_system),
        },
        RegistryEntry {
            name: "genus2-riemann",
            description: "quadratic and quartic thetanull relations",
            genera: &[2],
            run: genus2!(check_genus2_riemann),
        },
        RegistryEntry {
            name: "genus2-eta",
            description: "explicit eta_{a,b} for a, b in {00, 01, 02, 03}",
            genera: &[2],
            run: genus2!(check_genus2_eta),
        },
        RegistryEntry {
            name: "genus2-eta-product",
            description: "eta_{a,b} as a thetanull product over Goepel systems, all 45 pairs",
            genera: &[2],
            run: genus2!(check_genus2_eta_product),
        },
        RegistryEntry {
            name: "genus2-72nd-power",
            description: "theta_a^72 via products of eta",
            genera: &[2],
            run: genus2!(check_genus2_seventy_second_power),
        },
        RegistryEntry {
            name: "chi-relation",
            description: "chi relation with chi from psi and from the explicit eta",
            genera: &[2],
            run: genus2!(check_chi_relation),
        },
        RegistryEntry {
            name: "r0-leading",
            description: "theta_03^8 coefficient of the chi relation is -3/16^2",
            genera: &[2],
            run: genus2!(check_r0_leading),
        },
        RegistryEntry {
            name: "relation-8b",
            description: "quartic relation among phi_0..phi_3, both index families",
            genera: &[2],
            run: genus2!(check_relation_8b),
        },
        RegistryEntry {
            name: "r1-leading",
            description: "psi_{03,1}^8 coefficient at diagonal tau equals theta_10^32 / 16^4",
            genera: &[2],
            run: genus2!(check_r1_leading),
        },
        RegistryEntry {
            name: "halphen-system",
            description: "genus-1 Halphen system vs quartic delta psi",
            genera: &[1],
            run: genus1!(crate::halphen::check_halphen_system),
        },
        RegistryEntry {
            name: "halphen-integration",
            description: "RK4 integration of the Halphen system vs theta-evaluated psi",
            genera: &[1],
            run: genus1!(crate::halphen::check_halphen_integration),
        },
        RegistryEntry {
            name: "theta4-differences",
            description: "theta^4 as differences of psi, Jacobi's quartic identity",
            genera: &[1],
            run: genus1!(crate::halphen::check_theta4_differences),
        },
        RegistryEntry {
            name: "legendre-lambda",
            description: "derivative of the Legendre lambda function",
            genera: &[1],
            run: genus1!(crate::halphen::check_legendre_lambda),
        },
        RegistryEntry {
            name: "hypergeometric-periods",
            description: "2F1 expressions for the elliptic periods in thetanulls",
            genera: &[1],
            run: genus1!(crate::halphen::check_hypergeometric_periods),
        },
        RegistryEntry {
            name: "fourier-crosscheck",
            description: "exact q-expansions vs the numeric kernel",
            genera: &[1, 2],
            run: crate::fourier::check_fourier_crosscheck,
        },
    ]
}

pub fn registry_names() -> Vec<&'static str> {
    registry().iter().map(|e| e.name).collect()
}

pub fn lookup(name: &str) -> Result<RegistryEntry> {
    registry()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownIdentity {
            name: name.to_string(),
            known: registry_names().join(", "),
        })
}

/// Runs the named check (or `all`) at `genus`, or at every supported genus
/// when `genus` is `None`. With an explicit genus, `all` skips checks that do
/// not support it; a single named check at an unsupported genus is an error.
pub fn run_checks(selection: &str, genus: Option<usize>, config: &CheckConfig) -> Result<Vec<IdentityCheck>> {
    config.validate()?;
    let entries = if selection == "all" {
        registry()
    } else {
        vec![lookup(selection)?]
    };
    let mut out = Vec::new();
    for e in &entries {
        let genera: Vec<usize> = match genus {
            Some(g) if e.genera.contains(&g) => vec![g],
            Some(g) if selection != "all" => {
                return Err(Error::UnsupportedGenus {
                    genus: g,
                    supported: "see the registry entry",
                })
            }
            Some(_) => continue,
            None => e.genera.to_vec(),
        };
        for g in genera {
            log::info!("running {} at genus {g}", e.name);
            out.push((e.run)(config, g)?);
        }
    }
    Ok(out)
}
