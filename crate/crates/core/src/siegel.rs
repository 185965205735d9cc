//! Points of the Siegel upper half-space, the normalized derivations
//! `delta_jl`, and integer symplectic matrices acting on them.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Complex64;

/// Smallest admissible eigenvalue of `Im tau`.
pub const IMAG_EIGEN_MARGIN: f64 = 1e-8;

/// Condition-number estimate above which `c tau + d` is treated as singular.
pub const COCYCLE_CONDITION_LIMIT: f64 = 1e12;

/// Relative asymmetry tolerated when loading a full matrix.
const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A symmetric complex `g x g` matrix with positive-definite imaginary part.
///
/// Only the upper triangle is stored, so symmetry is exact.
#[derive(Clone, PartialEq)]
pub struct SiegelPoint {
    genus: usize,
    upper: Vec<Complex64>,
    lambda_min: f64,
}

fn upper_index(genus: usize, j: usize, l: usize) -> usize {
    let (j, l) = if j <= l { (j, l) } else { (l, j) };
    j * genus - j * (j + 1) / 2 + l
}

impl SiegelPoint {
    /// From a row-major `g x g` matrix. Rejects asymmetric input.
    pub fn from_row_major(genus: usize, entries: &[Complex64]) -> Result<Self> {
        if genus == 0 || entries.len() != genus * genus {
            return Err(Error::InvalidSiegelPoint(format!(
                "expected {} entries for genus {genus}, got {}",
                genus * genus,
                entries.len()
            )));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let mut upper = Vec::with_capacity(genus * (genus + 1) / 2);
        for j in 0..genus {
            for l in j..genus {
                let (x, y) = (entries[j * genus + l], entries[l * genus + j]);
                if (x - y).norm() > SYMMETRY_TOLERANCE * scale {
                    return Err(Error::InvalidSiegelPoint(format!(
                        "entries ({j},{l}) and ({l},{j}) differ"
                    )));
                }
                upper.push(x);
            }
        }
        Self::from_upper(genus, upper)
    }

    /// From the upper triangle listed row by row: `(0,0), (0,1), ..., (1,1), ...`.
    pub fn from_upper(genus: usize, upper: Vec<Complex64>) -> Result<Self> {
        if genus == 0 || upper.len() != genus * (genus + 1) / 2 {
            return Err(Error::InvalidSiegelPoint(format!(
                "expected {} upper-triangle entries for genus {genus}",
                genus * (genus + 1) / 2
            )));
        }
        if upper.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidSiegelPoint("non-finite entry".into()));
        }
        let mut point = Self {
            genus,
            upper,
            lambda_min: 0.0,
        };
        let lambda_min = point.imag_matrix().symmetric_eigenvalues().min();
        if !(lambda_min > IMAG_EIGEN_MARGIN) {
            return Err(Error::IllConditionedTau {
                lambda_min,
                margin: IMAG_EIGEN_MARGIN,
            });
        }
        point.lambda_min = lambda_min;
        Ok(point)
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        let g = entries.len();
        let mut m = vec![Complex64::new(0.0, 0.0); g * g];
        for (j, &t) in entries.iter().enumerate() {
            m[j * g + j] = t;
        }
        Self::from_row_major(g, &m)
    }

    /// `tau * 1_g`.
    pub fn scalar_diagonal(genus: usize, tau: Complex64) -> Result<Self> {
        Self::diagonal(&vec![tau; genus])
    }

    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self> {
        let g = m.nrows();
        if m.ncols() != g {
            return Err(Error::InvalidSiegelPoint("matrix is not square".into()));
        }
        let entries: Vec<Complex64> = (0..g)
            .flat_map(|j| (0..g).map(move |l| (j, l)))
            .map(|(j, l)| m[(j, l)])
            .collect();
        Self::from_row_major(g, &entries)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.upper[upper_index(self.genus, j, l)]
    }

    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.genus, self.genus, |j, l| self.get(j, l))
    }

    pub fn imag_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.genus, self.genus, |j, l| self.get(j, l).im)
    }

    /// Smallest eigenvalue of `Im tau`.
    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// `tau + h E`, with `E` the symmetric unit perturbation in slot `(j, l)`.
    pub fn perturbed(&self, j: usize, l: usize, h: Complex64) -> Result<Self> {
        let mut upper = self.upper.clone();
        upper[upper_index(self.genus, j, l)] += h;
        Self::from_upper(self.genus, upper)
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        (0..self.genus)
            .flat_map(|j| (0..self.genus).map(move |l| (j, l)))
            .map(|(j, l)| self.get(j, l))
            .collect()
    }
}

impl fmt::Debug for SiegelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SiegelPoint(g={}, [", self.genus)?;
        for (k, z) in self.row_major().iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}{:+}i", z.re, z.im)?;
        }
        f.write_str("])")
    }
}

#[derive(Serialize, Deserialize)]
struct SiegelPointJson {
    genus: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for SiegelPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SiegelPointJson {
            genus: self.genus,
            entries: self.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SiegelPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SiegelPointJson::deserialize(deserializer)?;
        let entries: Vec<Complex64> = raw
            .entries
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        SiegelPoint::from_row_major(raw.genus, &entries).map_err(serde::de::Error::custom)
    }
}

/// Index of a normalized derivation `delta_jl`, `j <= l` (0-based).
///
/// `delta_jj = (1 / pi i) d/d tau_jj` and `delta_jl = (1 / 2 pi i) d/d tau_jl`
/// for `j < l`. In both cases `delta_jl` acts on a theta series term with
/// summation vector `m` as multiplication by `m_j m_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivationIndex {
    j: usize,
    l: usize,
}

impl DerivationIndex {
    pub fn new(j: usize, l: usize) -> Self {
        if j <= l {
            Self { j, l }
        } else {
            Self { j: l, l: j }
        }
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn is_diagonal(&self) -> bool {
        self.j == self.l
    }

    /// Factor `k` with `delta_jl = k * d/d tau_jl`.
    pub fn normalization(&self) -> Complex64 {
        let denom = if self.is_diagonal() { PI } else { 2.0 * PI };
        Complex64::new(0.0, -1.0 / denom)
    }

    /// The flat list `delta_1, ..., delta_n`, `n = g(g+1)/2`: diagonal
    /// derivations first, then off-diagonal ones in lexicographic order. In
    /// genus 2 this is `delta_11, delta_22, delta_12`.
    pub fn all(genus: usize) -> Vec<DerivationIndex> {
        let mut out: Vec<_> = (0..genus).map(|j| Self::new(j, j)).collect();
        for j in 0..genus {
            for l in j + 1..genus {
                out.push(Self::new(j, l));
            }
        }
        out
    }
}

/// An integer symplectic matrix `((a, b), (c, d))`, stored as a row-major
/// `2g x 2g` array.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix {
    genus: usize,
    entries: Vec<i64>,
}

impl SymplecticMatrix {
    /// Validates `^t gamma J gamma = J` exactly.
    pub fn new(genus: usize, entries: Vec<i64>) -> Result<Self> {
        if genus == 0 || entries.len() != 4 * genus * genus {
            return Err(Error::InvalidArgument(format!(
                "symplectic matrix of genus {genus} needs {} entries",
                4 * genus * genus
            )));
        }
        let m = Self { genus, entries };
        if !m.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(m)
    }

    pub fn from_blocks(a: &[i64], b: &[i64], c: &[i64], d: &[i64]) -> Result<Self> {
        let gg = a.len();
        let genus = (gg as f64).sqrt().round() as usize;
        if genus * genus != gg || [b.len(), c.len(), d.len()].iter().any(|&n| n != gg) {
            return Err(Error::InvalidArgument("blocks must be g x g".into()));
        }
        let n = 2 * genus;
        let mut entries = vec![0; n * n];
        for j in 0..genus {
            for l in 0..genus {
                entries[j * n + l] = a[j * genus + l];
                entries[j * n + genus + l] = b[j * genus + l];
                entries[(genus + j) * n + l] = c[j * genus + l];
                entries[(genus + j) * n + genus + l] = d[j * genus + l];
            }
        }
        Self::new(genus, entries)
    }

    pub fn identity(genus: usize) -> Self {
        let n = 2 * genus;
        let entries = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
        Self { genus, entries }
    }

    /// `((1, s), (0, 1))` for symmetric `s`.
    pub fn upper_unipotent(genus: usize, s: &[i64]) -> Result<Self> {
        let id = identity_block(genus);
        Self::from_blocks(&id, s, &vec![0; genus * genus], &id)
    }

    /// `((1, 0), (s, 1))` for symmetric `s`.
    pub fn lower_unipotent(genus: usize, s: &[i64]) -> Result<Self> {
        let id = identity_block(genus);
        Self::from_blocks(&id, &vec![0; genus * genus], s, &id)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    fn at(&self, r: usize, c: usize) -> i64 {
        self.entries[r * 2 * self.genus + c]
    }

    fn block(&self, row: usize, col: usize) -> Vec<i64> {
        let g = self.genus;
        (0..g)
            .flat_map(|j| (0..g).map(move |l| (j, l)))
            .map(|(j, l)| self.at(row * g + j, col * g + l))
            .collect()
    }

    pub fn a(&self) -> Vec<i64> {
        self.block(0, 0)
    }

    pub fn b(&self) -> Vec<i64> {
        self.block(0, 1)
    }

    pub fn c(&self) -> Vec<i64> {
        self.block(1, 0)
    }

    pub fn d(&self) -> Vec<i64> {
        self.block(1, 1)
    }

    pub fn is_symplectic(&self) -> bool {
        let n = 2 * self.genus;
        let g = self.genus;
        let j_form = |r: usize, c: usize| -> i64 {
            if r < g && c == r + g {
                1
            } else if r >= g && c + g == r {
                -1
            } else {
                0
            }
        };
        for r in 0..n {
            for c in 0..n {
                // (^t M J M)_{rc} = sum_{p,q} M_{pr} J_{pq} M_{qc}
                let mut acc: i128 = 0;
                for p in 0..n {
                    for q in 0..n {
                        let jpq = j_form(p, q);
                        if jpq != 0 {
                            acc += i128::from(self.at(p, r)) * i128::from(jpq) * i128::from(self.at(q, c));
                        }
                    }
                }
                if acc != i128::from(j_form(r, c)) {
                    return false;
                }
            }
        }
        true
    }

    /// Exact product. Panics on genus mismatch or `i64` overflow.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.genus, other.genus, "genus mismatch in symplectic product");
        let n = 2 * self.genus;
        let mut entries = vec![0i64; n * n];
        for r in 0..n {
            for c in 0..n {
                let mut acc: i64 = 0;
                for k in 0..n {
                    let t = self.at(r, k).checked_mul(other.at(k, c)).expect("symplectic entry overflow");
                    acc = acc.checked_add(t).expect("symplectic entry overflow");
                }
                entries[r * n + c] = acc;
            }
        }
        Self {
            genus: self.genus,
            entries,
        }
    }

    /// `gamma^{-1} = ((^t d, -^t b), (-^t c, ^t a))`.
    pub fn inverse(&self) -> Self {
        let g = self.genus;
        let t = |m: Vec<i64>, sign: i64| -> Vec<i64> {
            (0..g * g).map(|k| sign * m[(k % g) * g + k / g]).collect()
        };
        Self::from_blocks(&t(self.d(), 1), &t(self.b(), -1), &t(self.c(), -1), &t(self.a(), 1))
            .expect("inverse of a symplectic matrix is symplectic")
    }

    /// Membership in the theta group of level (4, 8): `gamma = 1 mod 4` and
    /// `diag(a ^t b) = diag(c ^t d) = 0 mod 8`.
    pub fn is_in_gamma_48(&self) -> Result<bool> {
        if !self.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        let n = 2 * self.genus;
        for r in 0..n {
            for c in 0..n {
                if (self.at(r, c) - i64::from(r == c)).rem_euclid(4) != 0 {
                    return Ok(false);
                }
            }
        }
        let g = self.genus;
        let diag_mod8 = |x: &[i64], y: &[i64]| {
            (0..g).all(|j| (0..g).map(|k| x[j * g + k] * y[j * g + k]).sum::<i64>().rem_euclid(8) == 0)
        };
        Ok(diag_mod8(&self.a(), &self.b()) && diag_mod8(&self.c(), &self.d()))
    }

    fn complex_block(&self, row: usize, col: usize) -> DMatrix<Complex64> {
        let g = self.genus;
        let b = self.block(row, col);
        DMatrix::from_fn(g, g, |j, l| Complex64::new(b[j * g + l] as f64, 0.0))
    }
}

fn identity_block(genus: usize) -> Vec<i64> {
    (0..genus * genus).map(|k| i64::from(k / genus == k % genus)).collect()
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 2 * self.genus;
        let rows: Vec<String> = (0..n)
            .map(|r| format!("{:?}", &self.entries[r * n..(r + 1) * n]))
            .collect();
        write!(f, "Sp(g={}, [{}])", self.genus, rows.join(", "))
    }
}

/// `c tau + d`.
pub fn cocycle_factor(gamma: &SymplecticMatrix, tau: &SiegelPoint) -> Result<DMatrix<Complex64>> {
    if gamma.genus() != tau.genus() {
        return Err(Error::GenusMismatch {
            left: gamma.genus(),
            right: tau.genus(),
        });
    }
    Ok(gamma.complex_block(1, 0) * tau.matrix() + gamma.complex_block(1, 1))
}

/// Inverse with a 1-norm condition check; fails above [`COCYCLE_CONDITION_LIMIT`].
pub(crate) fn checked_inverse(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let inv = m
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::SingularCocycle { condition: f64::INFINITY })?;
    let norm1 = |x: &DMatrix<Complex64>| {
        (0..x.ncols())
            .map(|c| x.column(c).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    };
    let condition = norm1(m) * norm1(&inv);
    if !(condition <= COCYCLE_CONDITION_LIMIT) {
        return Err(Error::SingularCocycle { condition });
    }
    Ok(inv)
}

/// `gamma tau = (a tau + b)(c tau + d)^{-1}`, symmetrized.
pub fn act(gamma: &SymplecticMatrix, tau: &SiegelPoint) -> Result<SiegelPoint> {
    let inv = checked_inverse(&cocycle_factor(gamma, tau)?)?;
    let num = gamma.complex_block(0, 0) * tau.matrix() + gamma.complex_block(0, 1);
    let image = num * inv;
    let sym = (&image + image.transpose()) * Complex64::new(0.5, 0.0);
    SiegelPoint::from_matrix(&sym)
}

/// A product of `word_length` random unipotent generators, each in
/// Gamma(4,8): upper `((1, s), (0, 1))` or lower `((1, 0), (s, 1))` with
/// `s = +-8 E_jj` or `s = +-4 (E_jl + E_lj)`.
pub fn random_gamma_48(genus: usize, seed: u64, word_length: usize) -> Result<SymplecticMatrix> {
    if word_length == 0 {
        return Err(Error::InvalidArgument("word_length must be at least 1".into()));
    }
    if genus == 0 {
        return Err(Error::UnsupportedGenus {
            genus,
            supported: ">= 1",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word = SymplecticMatrix::identity(genus);
    for _ in 0..word_length {
        let j = rng.random_range(0..genus);
        let l = rng.random_range(j..genus);
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        let mut s = vec![0i64; genus * genus];
        if j == l {
            s[j * genus + j] = 8 * sign;
        } else {
            s[j * genus + l] = 4 * sign;
            s[l * genus + j] = 4 * sign;
        }
        let generator = if rng.random_bool(0.5) {
            SymplecticMatrix::upper_unipotent(genus, &s)?
        } else {
            SymplecticMatrix::lower_unipotent(genus, &s)?
        };
        word = word.mul(&generator);
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_tau() -> SiegelPoint {
        SiegelPoint::from_row_major(2, &[c(0.3, 1.2), c(-0.2, 0.1), c(-0.2, 0.1), c(0.1, 0.9)]).unwrap()
    }

    #[test]
    fn rejects_bad_points() {
        assert!(SiegelPoint::from_row_major(1, &[c(0.0, -1.0)]).is_err());
        assert!(SiegelPoint::from_row_major(2, &[c(0.0, 1.0), c(0.1, 0.0), c(0.2, 0.0), c(0.0, 1.0)]).is_err());
        assert!(matches!(
            SiegelPoint::from_row_major(2, &[c(0.0, 1.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 1.0)]),
            Err(Error::IllConditionedTau { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_symmetry_on_load() {
        let tau = sample_tau();
        let s = serde_json::to_string(&tau).unwrap();
        let back: SiegelPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, tau);
        let asym = r#"{"genus":2,"entries":[[0,1],[0.5,0],[0.1,0],[0,1]]}"#;
        assert!(serde_json::from_str::<SiegelPoint>(asym).is_err());
    }

    #[test]
    fn derivation_normalization() {
        let d = DerivationIndex::new(1, 0);
        assert_eq!((d.j(), d.l()), (0, 1));
        assert!((d.normalization() * Complex64::new(0.0, 2.0 * PI) - 1.0).norm() < 1e-15);
        let dd = DerivationIndex::new(1, 1);
        assert!((dd.normalization() * Complex64::new(0.0, PI) - 1.0).norm() < 1e-15);
        let all: Vec<_> = DerivationIndex::all(2).iter().map(|d| (d.j(), d.l())).collect();
        assert_eq!(all, [(0, 0), (1, 1), (0, 1)]);
        assert_eq!(DerivationIndex::all(3).len(), 6);
    }

    #[test]
    fn gamma48_membership() {
        assert!(SymplecticMatrix::identity(2).is_in_gamma_48().unwrap());
        let b = [8, 4, 4, 16];
        assert!(SymplecticMatrix::upper_unipotent(2, &b).unwrap().is_in_gamma_48().unwrap());
        let b = [4, 0, 0, 8];
        assert!(!SymplecticMatrix::upper_unipotent(2, &b).unwrap().is_in_gamma_48().unwrap());
        let c8 = [8, 0, 0, 0];
        assert!(SymplecticMatrix::lower_unipotent(2, &c8).unwrap().is_in_gamma_48().unwrap());
        // Symplectic but not congruent to 1 mod 4.
        let s = SymplecticMatrix::upper_unipotent(1, &[1]).unwrap();
        assert!(!s.is_in_gamma_48().unwrap());
        let not_sym = SymplecticMatrix {
            genus: 1,
            entries: vec![2, 0, 0, 1],
        };
        assert!(matches!(not_sym.is_in_gamma_48(), Err(Error::NotSymplectic)));
        assert!(SymplecticMatrix::new(1, vec![2, 0, 0, 1]).is_err());
    }

    #[test]
    fn unipotent_words() {
        assert!(random_gamma_48(2, 1, 0).is_err());
        for seed in 0..50 {
            for len in 1..5 {
                let g = random_gamma_48(2, seed, len).unwrap();
                assert!(g.is_symplectic());
                assert!(g.is_in_gamma_48().unwrap());
                let inv = g.inverse();
                assert_eq!(g.mul(&inv), SymplecticMatrix::identity(2));
                assert!(inv.is_in_gamma_48().unwrap());
            }
        }
    }

    #[test]
    fn action_identity_and_translation() {
        let tau = sample_tau();
        let id = SymplecticMatrix::identity(2);
        let same = act(&id, &tau).unwrap();
        for (x, y) in same.upper().iter().zip(tau.upper()) {
            assert!((x - y).norm() < 1e-15);
        }
        let b = [8, 4, 4, -8];
        let shifted = act(&SymplecticMatrix::upper_unipotent(2, &b).unwrap(), &tau).unwrap();
        for j in 0..2 {
            for l in 0..2 {
                let want = tau.get(j, l) + b[j * 2 + l] as f64;
                assert!((shifted.get(j, l) - want).norm() < 1e-13);
            }
        }
        let f = cocycle_factor(&SymplecticMatrix::upper_unipotent(2, &b).unwrap(), &tau).unwrap();
        assert!((f - DMatrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn genus_one_imaginary_part() {
        let tau = SiegelPoint::diagonal(&[c(0.2, 0.7)]).unwrap();
        let gamma = SymplecticMatrix::lower_unipotent(1, &[8]).unwrap();
        let image = act(&gamma, &tau).unwrap();
        let ctd = c(8.0, 0.0) * tau.get(0, 0) + 1.0;
        let want = tau.get(0, 0).im / ctd.norm_sqr();
        assert!((image.get(0, 0).im - want).abs() < 1e-14);
    }

    #[test]
    fn action_composes_and_cocycle_chain_rule() {
        let tau = sample_tau();
        for seed in 0..20 {
            let g1 = random_gamma_48(2, seed, 2).unwrap();
            let g2 = random_gamma_48(2, seed + 1000, 2).unwrap();
            let lhs = act(&g1.mul(&g2), &tau).unwrap();
            let rhs = act(&g1, &act(&g2, &tau).unwrap()).unwrap();
            for (x, y) in lhs.upper().iter().zip(rhs.upper()) {
                assert!((x - y).norm() < 1e-9 * (1.0 + x.norm()), "{x} vs {y}");
            }
            assert!(lhs.lambda_min() > 0.0);
            let whole = cocycle_factor(&g1.mul(&g2), &tau).unwrap();
            let chained = cocycle_factor(&g1, &act(&g2, &tau).unwrap()).unwrap()
                * cocycle_factor(&g2, &tau).unwrap();
            assert!((&whole - &chained).norm() < 1e-9 * whole.norm());
        }
    }

    #[test]
    fn singular_cocycle_is_reported() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 1e-14)]);
        assert!(matches!(checked_inverse(&m), Err(Error::SingularCocycle { .. })));
    }
}
