//! Quadratic and quartic forms in `u in C^g` with complex coefficients.
//!
//! A [`SymmetricForm`] stores the symmetric matrix `phi_jl` of
//! `phi(u) = sum_{j,l} phi_jl u_j u_l`. A [`QuarticForm`] stores, for each
//! sorted index tuple `j <= l <= m <= p`, the coefficient of the monomial
//! `u_j u_l u_m u_p`, so two quartic forms are equal as polynomials exactly
//! when their stored coefficients agree.

use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::Complex64;

/// Sorted index tuples of length `order` over `0..genus`, in lexicographic order.
pub fn sorted_tuples(genus: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(order);
    fn rec(genus: usize, order: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == order {
            out.push(current.clone());
            return;
        }
        for i in start..genus {
            current.push(i);
            rec(genus, order, i, current, out);
            current.pop();
        }
    }
    rec(genus, order, 0, &mut current, &mut out);
    out
}

/// Position of a sorted tuple within [`sorted_tuples`].
pub fn tuple_position(genus: usize, tuple: &[usize]) -> usize {
    debug_assert!(tuple.windows(2).all(|w| w[0] <= w[1]));
    // Count tuples lexicographically before `tuple`.
    let k = tuple.len();
    let mut pos = 0;
    let mut start = 0;
    for (depth, &t) in tuple.iter().enumerate() {
        let remaining = k - depth - 1;
        for first in start..t {
            pos += multichoose(genus - first, remaining);
        }
        start = t;
    }
    pos
}

/// Number of multisets of size `k` drawn from `n` symbols.
fn multichoose(n: usize, k: usize) -> usize {
    if k == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    // C(n + k - 1, k)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n + k - 1 - i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricForm {
    genus: usize,
    /// Upper triangle, row by row.
    upper: Vec<Complex64>,
}

fn upper_pos(genus: usize, j: usize, l: usize) -> usize {
    let (j, l) = if j <= l { (j, l) } else { (l, j) };
    j * genus - j * (j + 1) / 2 + l
}

impl SymmetricForm {
    pub fn zero(genus: usize) -> Self {
        Self {
            genus,
            upper: vec![Complex64::new(0.0, 0.0); genus * (genus + 1) / 2],
        }
    }

    pub fn from_fn(genus: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut upper = Vec::with_capacity(genus * (genus + 1) / 2);
        for j in 0..genus {
            for l in j..genus {
                upper.push(f(j, l));
            }
        }
        Self { genus, upper }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn get(&self, j: usize, l: usize) -> Complex64 {
        self.upper[upper_pos(self.genus, j, l)]
    }

    pub fn set(&mut self, j: usize, l: usize, value: Complex64) {
        let p = upper_pos(self.genus, j, l);
        self.upper[p] = value;
    }

    pub fn evaluate(&self, u: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.genus {
            for l in 0..self.genus {
                acc += self.get(j, l) * u[j] * u[l];
            }
        }
        acc
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            genus: self.genus,
            upper: self.upper.iter().map(|x| x * s).collect(),
        }
    }

    /// `phi * eta` as a quartic form.
    pub fn product(&self, other: &SymmetricForm) -> QuarticForm {
        assert_eq!(self.genus, other.genus);
        let g = self.genus;
        let mut q = QuarticForm::zero(g);
        for a in 0..g {
            for b in 0..g {
                let x = self.get(a, b);
                for c in 0..g {
                    for d in 0..g {
                        let mut key = [a, b, c, d];
                        key.sort_unstable();
                        q.coefficients[tuple_position(g, &key)] += x * other.get(c, d);
                    }
                }
            }
        }
        q
    }

    pub fn square(&self) -> QuarticForm {
        self.product(self)
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.genus, self.genus, |j, l| self.get(j, l))
    }

    pub fn determinant(&self) -> Complex64 {
        self.to_matrix().determinant()
    }

    pub fn max_norm(&self) -> f64 {
        self.upper.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.upper
    }
}

impl Add for &SymmetricForm {
    type Output = SymmetricForm;
    fn add(self, rhs: &SymmetricForm) -> SymmetricForm {
        SymmetricForm {
            genus: self.genus,
            upper: self.upper.iter().zip(&rhs.upper).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SymmetricForm {
    type Output = SymmetricForm;
    fn sub(self, rhs: &SymmetricForm) -> SymmetricForm {
        SymmetricForm {
            genus: self.genus,
            upper: self.upper.iter().zip(&rhs.upper).map(|(a, b)| a - b).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuarticForm {
    genus: usize,
    coefficients: Vec<Complex64>,
}

impl QuarticForm {
    pub fn zero(genus: usize) -> Self {
        Self {
            genus,
            coefficients: vec![Complex64::new(0.0, 0.0); multichoose(genus, 4)],
        }
    }

    /// From a fully symmetric tensor `t(j, l, m, p)`: the monomial coefficient
    /// of a sorted key is `t(key)` times the number of distinct orderings.
    pub fn from_symmetric_tensor(genus: usize, mut t: impl FnMut(&[usize]) -> Complex64) -> Self {
        let coefficients = sorted_tuples(genus, 4)
            .iter()
            .map(|key| t(key) * orderings(key) as f64)
            .collect();
        Self { genus, coefficients }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Coefficient of `u_j u_l u_m u_p` (indices in any order).
    pub fn get(&self, key: [usize; 4]) -> Complex64 {
        let mut key = key;
        key.sort_unstable();
        self.coefficients[tuple_position(self.genus, &key)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        sorted_tuples(self.genus, 4).into_iter().zip(self.coefficients.iter().copied())
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn evaluate(&self, u: &[Complex64]) -> Complex64 {
        self.iter()
            .map(|(key, c)| key.iter().fold(c, |acc, &i| acc * u[i]))
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            genus: self.genus,
            coefficients: self.coefficients.iter().map(|x| x * s).collect(),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Number of distinct orderings of a sorted multi-index.
pub fn orderings(key: &[usize]) -> usize {
    let factorial = |n: usize| (1..=n).product::<usize>();
    let mut denom = 1;
    let mut run = 1;
    for w in key.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    factorial(key.len()) / denom
}

impl Add for &QuarticForm {
    type Output = QuarticForm;
    fn add(self, rhs: &QuarticForm) -> QuarticForm {
        QuarticForm {
            genus: self.genus,
            coefficients: self.coefficients.iter().zip(&rhs.coefficients).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QuarticForm {
    type Output = QuarticForm;
    fn sub(self, rhs: &QuarticForm) -> QuarticForm {
        QuarticForm {
            genus: self.genus,
            coefficients: self.coefficients.iter().zip(&rhs.coefficients).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<Complex64> for &QuarticForm {
    type Output = QuarticForm;
    fn mul(self, s: Complex64) -> QuarticForm {
        self.scale(s)
    }
}
