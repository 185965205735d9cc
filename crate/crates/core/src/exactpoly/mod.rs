//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a hash map from exponent vectors to nonzero
//! [`BigRational`] coefficients, so a polynomial is zero exactly when the map
//! is empty. Iteration for display and serialization uses graded
//! lexicographic order on the variable list.

pub mod formal;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Complex64;

/// Largest total or per-variable degree accepted.
pub const MAX_DEGREE: u64 = 1_000_000;

pub type Exponents = Vec<u32>;

#[derive(Clone, Default)]
pub struct RationalPoly {
    variables: Vec<String>,
    terms: HashMap<Exponents, BigRational>,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Graded lexicographic comparison; larger monomials compare greater.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| u64::from(e)).sum();
    let db: u64 = b.iter().map(|&e| u64::from(e)).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl RationalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = HashMap::new();
        terms.insert(vec![1], BigRational::one());
        Self {
            variables: vec![name.to_string()],
            terms,
        }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| u64::from(x)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in one variable; 0 if it does not occur.
    pub fn degree_in(&self, name: &str) -> u32 {
        match self.variables.iter().position(|v| v == name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Coefficient of a monomial given as `(name, exponent)` pairs.
    pub fn coefficient(&self, monomial: &[(&str, u32)]) -> BigRational {
        let mut key = vec![0; self.variables.len()];
        for &(name, e) in monomial {
            match self.variables.iter().position(|v| v == name) {
                Some(i) => key[i] += e,
                None if e == 0 => {}
                None => return BigRational::zero(),
            }
        }
        self.terms.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms in descending graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &BigRational)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| grlex(b.0, a.0));
        out
    }

    /// Re-expresses `self` over `variables`, which must contain all of its
    /// variables.
    fn embed(&self, variables: &[String]) -> HashMap<Exponents, BigRational> {
        if variables == self.variables.as_slice() {
            return self.terms.clone();
        }
        let map: Vec<usize> = self
            .variables
            .iter()
            .map(|v| variables.iter().position(|w| w == v).expect("variable present"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut key = vec![0; variables.len()];
                for (i, &x) in e.iter().enumerate() {
                    key[map[i]] = x;
                }
                (key, c.clone())
            })
            .collect()
    }

    fn merged_variables(&self, other: &Self) -> Vec<String> {
        let mut vars = self.variables.clone();
        for v in &other.variables {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn from_map(variables: Vec<String>, mut terms: HashMap<Exponents, BigRational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        Self { variables, terms }
    }

    pub fn checked_add(&self, other: &Self) -> Self {
        let vars = self.merged_variables(other);
        let mut terms = self.embed(&vars);
        for (e, c) in other.embed(&vars) {
            *terms.entry(e).or_insert_with(BigRational::zero) += c;
        }
        Self::from_map(vars, terms)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self {
                variables: self.variables.clone(),
                terms: HashMap::new(),
            };
        }
        Self {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let vars = self.merged_variables(other);
        let left = self.embed(&vars);
        let right = other.embed(&vars);
        let max_l = self.max_exponent();
        let max_r = other.max_exponent();
        if u64::from(max_l) + u64::from(max_r) > MAX_DEGREE
            || self.total_degree() + other.total_degree() > MAX_DEGREE
        {
            return Err(Error::DegreeOverflow(self.total_degree() + other.total_degree()));
        }
        let mut terms: HashMap<Exponents, BigRational> = HashMap::with_capacity(left.len().max(right.len()));
        for (el, cl) in &left {
            for (er, cr) in &right {
                let key: Exponents = el.iter().zip(er).map(|(a, b)| a + b).collect();
                let prod = cl * cr;
                match terms.get_mut(&key) {
                    Some(c) => *c += prod,
                    None => {
                        terms.insert(key, prod);
                    }
                }
            }
        }
        Ok(Self::from_map(vars, terms))
    }

    fn max_exponent(&self) -> u32 {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if u64::from(n) * self.total_degree() > MAX_DEGREE {
            return Err(Error::DegreeOverflow(u64::from(n) * self.total_degree()));
        }
        let mut result = Self::from_int(1);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Replaces the variable `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Self) -> Result<Self> {
        let Some(idx) = self.variables.iter().position(|v| v == name) else {
            return Ok(self.clone());
        };
        // Group terms by the exponent of `name`, then combine with powers of `value`.
        let mut by_power: HashMap<u32, HashMap<Exponents, BigRational>> = HashMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[idx] = 0;
            by_power.entry(e[idx]).or_default().insert(rest, c.clone());
        }
        let mut powers: Vec<u32> = by_power.keys().copied().collect();
        powers.sort_unstable();
        let mut result = Self::zero();
        let mut value_power = Self::from_int(1);
        let mut current = 0;
        for p in powers {
            while current < p {
                value_power = value_power.checked_mul(value)?;
                current += 1;
            }
            let part = Self::from_map(self.variables.clone(), by_power.remove(&p).unwrap_or_default());
            result = result.checked_add(&part.checked_mul(&value_power)?);
        }
        Ok(result.drop_unused())
    }

    /// Removes variables that no longer occur in any term.
    pub fn drop_unused(&self) -> Self {
        let used: Vec<usize> = (0..self.variables.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] != 0))
            .collect();
        if used.len() == self.variables.len() {
            return self.clone();
        }
        Self {
            variables: used.iter().map(|&i| self.variables[i].clone()).collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (used.iter().map(|&i| e[i]).collect(), c.clone()))
                .collect(),
        }
    }

    /// Exact evaluation; every variable must be assigned.
    pub fn evaluate(&self, values: &HashMap<String, BigRational>) -> Result<BigRational> {
        let vals: Vec<&BigRational> = self
            .variables
            .iter()
            .map(|v| {
                values
                    .get(v)
                    .ok_or_else(|| Error::InvalidArgument(format!("no value for variable {v}")))
            })
            .collect::<Result<_>>()?;
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    t *= vals[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation at complex values, for numeric shadows.
    pub fn evaluate_complex(&self, values: &HashMap<String, Complex64>) -> Result<Complex64> {
        let vals: Vec<Complex64> = self
            .variables
            .iter()
            .map(|v| {
                values
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("no value for variable {v}")))
            })
            .collect::<Result<_>>()?;
        let mut acc = crate::sum::ComplexSum::default();
        for (e, c) in self.sorted_terms() {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (i, &x) in e.iter().enumerate() {
                t *= vals[i].powu(x);
            }
            acc.add(t);
        }
        Ok(acc.value())
    }
}

impl PartialEq for RationalPoly {
    /// Equality as polynomials, independent of variable order.
    fn eq(&self, other: &Self) -> bool {
        self.checked_add(&-other).is_zero()
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            if k > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let abs = c.abs();
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.variables[i].clone()
                    } else {
                        format!("{}^{x}", self.variables[i])
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{abs}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        self.checked_add(rhs)
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        self.checked_add(&-rhs)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    /// Panics if the product would exceed [`MAX_DEGREE`]; use
    /// [`RationalPoly::checked_mul`] to handle that case.
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        self.checked_mul(rhs).expect("polynomial degree overflow")
    }
}
