//! Fixed-point big-integer theta sums at `tau = i t`, shared by the oracle
//! and acceptance tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;

pub const DIGITS: u32 = 70;

/// Fixed-point numbers `x * 10^DIGITS`.
pub struct Fixed {
    pub scale: BigInt,
}

impl Fixed {
    pub fn new() -> Self {
        Self {
            scale: BigInt::from(10u32).pow(DIGITS),
        }
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b / &self.scale
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * &self.scale / b
    }

    pub fn atan_inv(&self, x: u32) -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = &self.scale / &x;
        let mut sum = BigInt::zero();
        let mut k = 0u32;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
        }
        sum
    }

    /// Machin: pi = 16 atan(1/5) - 4 atan(1/239).
    pub fn pi(&self) -> BigInt {
        self.atan_inv(5) * 16 - self.atan_inv(239) * 4
    }

    pub fn exp(&self, x: &BigInt) -> BigInt {
        let mut term = self.scale.clone();
        let mut sum = self.scale.clone();
        let mut k = 1u32;
        while !term.is_zero() {
            term = self.mul(&term, x) / BigInt::from(k);
            sum += &term;
            k += 1;
        }
        sum
    }

    pub fn to_string(&self, x: &BigInt, digits: usize) -> String {
        let s = x.to_string();
        let int_len = s.len() - DIGITS as usize;
        format!("{}.{}", &s[..int_len], &s[int_len..int_len + digits])
    }

    pub fn to_f64(&self, x: &BigInt) -> f64 {
        self.to_string(x, 25).parse().unwrap()
    }
}

/// `sum_n sign(n) q^{(n + shift)^2}` with `q = e^{-pi t}` for `t = num / den`,
/// from exact powers of `e^{-pi t / 4}` (so half-integer shifts stay exact).
pub fn jacobi_sum(f: &Fixed, num: u32, den: u32, half_shift: bool, alternate: bool) -> BigInt {
    let pi = f.pi();
    let base = f.div(&f.scale, &f.exp(&(pi * BigInt::from(num) / BigInt::from(4 * den))));
    let mut sum = BigInt::zero();
    for n in -12i64..=12 {
        // 4 (n + 1/2)^2 = (2n + 1)^2, 4 n^2 = (2n)^2.
        let k = if half_shift { (2 * n + 1).unsigned_abs() } else { (2 * n).unsigned_abs() };
        let mut term = f.scale.clone();
        for _ in 0..k * k {
            term = f.mul(&term, &base);
            if term.is_zero() {
                break;
            }
        }
        if alternate && n % 2 != 0 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    sum
}
