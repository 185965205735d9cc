//! Half-integer theta characteristics `a = (a', a'')` with entries in {0, 1}.
//!
//! A characteristic of genus `g` is stored as two `g`-bit masks. Bit
//! `g - 1 - j` of a mask holds the `j`-th entry (0-based), so the integer
//! value of a mask reads the vector left to right as a binary number. In
//! genus 2 that value is exactly the digit `(0,0)->0, (0,1)->1, (1,0)->2,
//! (1,1)->3`, and sorting by `(a' << g) | a''` gives lexicographic order on
//! the concatenated bits.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest genus a `Characteristic` can represent.
pub const MAX_GENUS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ParityFilter {
    #[default]
    All,
    Even,
    Odd,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Characteristic {
    genus: u8,
    prime: u8,
    dprime: u8,
}

impl Characteristic {
    /// Builds a characteristic from integer vectors; entries are reduced mod 2.
    pub fn new(a_prime: &[i64], a_double_prime: &[i64]) -> Result<Self> {
        let genus = a_prime.len();
        if a_double_prime.len() != genus {
            return Err(Error::GenusMismatch {
                left: genus,
                right: a_double_prime.len(),
            });
        }
        check_genus(genus)?;
        let pack = |v: &[i64]| {
            v.iter().enumerate().fold(0u8, |acc, (j, &x)| {
                acc | ((x.rem_euclid(2) as u8) << (genus - 1 - j))
            })
        };
        Ok(Self {
            genus: genus as u8,
            prime: pack(a_prime),
            dprime: pack(a_double_prime),
        })
    }

    /// Builds a characteristic from packed masks (see module docs for the bit layout).
    pub fn from_masks(genus: usize, a_prime: u8, a_double_prime: u8) -> Result<Self> {
        check_genus(genus)?;
        let mask = low_mask(genus);
        Ok(Self {
            genus: genus as u8,
            prime: a_prime & mask,
            dprime: a_double_prime & mask,
        })
    }

    pub fn zero(genus: usize) -> Result<Self> {
        Self::from_masks(genus, 0, 0)
    }

    /// Inverse of [`Characteristic::index`].
    pub fn from_index(genus: usize, index: usize) -> Result<Self> {
        check_genus(genus)?;
        if index >= 1 << (2 * genus) {
            return Err(Error::InvalidArgument(format!(
                "characteristic index {index} out of range for genus {genus}"
            )));
        }
        Self::from_masks(genus, (index >> genus) as u8, (index & ((1 << genus) - 1)) as u8)
    }

    pub fn genus(&self) -> usize {
        self.genus as usize
    }

    pub fn prime_mask(&self) -> u8 {
        self.prime
    }

    pub fn double_prime_mask(&self) -> u8 {
        self.dprime
    }

    /// Position in the canonical order, `(a' << g) | a''`.
    pub fn index(&self) -> usize {
        ((self.prime as usize) << self.genus) | self.dprime as usize
    }

    /// Entry `j` (0-based) of `a'`.
    pub fn a_prime_bit(&self, j: usize) -> u8 {
        (self.prime >> (self.genus as usize - 1 - j)) & 1
    }

    /// Entry `j` (0-based) of `a''`.
    pub fn a_double_prime_bit(&self, j: usize) -> u8 {
        (self.dprime >> (self.genus as usize - 1 - j)) & 1
    }

    pub fn a_prime(&self) -> Vec<u8> {
        (0..self.genus()).map(|j| self.a_prime_bit(j)).collect()
    }

    pub fn a_double_prime(&self) -> Vec<u8> {
        (0..self.genus()).map(|j| self.a_double_prime_bit(j)).collect()
    }

    /// `|a| = a'·a'' mod 2`.
    pub fn weight(&self) -> u8 {
        ((self.prime & self.dprime).count_ones() & 1) as u8
    }

    pub fn parity(&self) -> Parity {
        if self.weight() == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.prime == 0 && self.dprime == 0
    }

    /// Symplectic pairing `<a, b> = a'·b'' - b'·a'' mod 2`.
    pub fn pairing(&self, other: &Self) -> Result<u8> {
        self.same_genus(other)?;
        Ok((((self.prime & other.dprime).count_ones() + (other.prime & self.dprime).count_ones())
            & 1) as u8)
    }

    /// `a'·b'' mod 2`, the sign exponent appearing in the odd-gradient formulas.
    pub fn prime_dot_double_prime(&self, other: &Self) -> u8 {
        ((self.prime & other.dprime).count_ones() & 1) as u8
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_genus(other)?;
        Ok(Self {
            genus: self.genus,
            prime: self.prime ^ other.prime,
            dprime: self.dprime ^ other.dprime,
        })
    }

    /// Two-digit label, genus 2 only: first digit encodes `a'`, second `a''`.
    pub fn digit_encode(&self) -> Result<String> {
        if self.genus != 2 {
            return Err(Error::UnsupportedGenus {
                genus: self.genus(),
                supported: "2 (digit labels)",
            });
        }
        Ok(format!("{}{}", self.prime, self.dprime))
    }

    pub fn digit_decode(label: &str) -> Result<Self> {
        let digits: Vec<u32> = label
            .chars()
            .map(|c| c.to_digit(4))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::ParseCharacteristic(label.to_string()))?;
        match digits.as_slice() {
            [p, d] => Self::from_masks(2, *p as u8, *d as u8),
            _ => Err(Error::ParseCharacteristic(label.to_string())),
        }
    }

    /// The explicit form `(a'_1,...,a'_g;a''_1,...,a''_g)`.
    pub fn bit_string(&self) -> String {
        let join = |v: Vec<u8>| {
            v.iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("({};{})", join(self.a_prime()), join(self.a_double_prime()))
    }

    fn same_genus(&self, other: &Self) -> Result<()> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch {
                left: self.genus(),
                right: other.genus(),
            });
        }
        Ok(())
    }
}

fn low_mask(genus: usize) -> u8 {
    ((1u16 << genus) - 1) as u8
}

fn check_genus(genus: usize) -> Result<()> {
    if genus == 0 || genus > MAX_GENUS {
        return Err(Error::UnsupportedGenus {
            genus,
            supported: "1..=8",
        });
    }
    Ok(())
}

impl Add for Characteristic {
    type Output = Characteristic;

    /// Componentwise sum mod 2. Panics on genus mismatch; see [`Characteristic::try_add`].
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("adding characteristics of different genus")
    }
}

impl PartialOrd for Characteristic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Characteristic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.genus, self.index()).cmp(&(other.genus, other.index()))
    }
}

impl fmt::Debug for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.digit_encode() {
            Ok(label) => f.write_str(&label),
            Err(_) => f.write_str(&self.bit_string()),
        }
    }
}

impl Serialize for Characteristic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Characteristic {
    type Err = Error;

    /// Accepts `(a';a'')` with comma-separated bits in any genus, or a
    /// two-digit genus-2 label such as `"20"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::ParseCharacteristic(s.to_string());
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (left, right) = inner.split_once(';').ok_or_else(bad)?;
            let parse = |part: &str| -> Result<Vec<i64>> {
                part.split(',')
                    .map(|t| match t.trim() {
                        "0" => Ok(0),
                        "1" => Ok(1),
                        _ => Err(bad()),
                    })
                    .collect()
            };
            return Characteristic::new(&parse(left)?, &parse(right)?);
        }
        Characteristic::digit_decode(s)
    }
}

/// All characteristics of the given genus (1..=3) in canonical order.
pub fn enumerate(genus: usize, filter: ParityFilter) -> Result<Vec<Characteristic>> {
    if !(1..=3).contains(&genus) {
        return Err(Error::UnsupportedGenus {
            genus,
            supported: "1..=3",
        });
    }
    Ok((0..1usize << (2 * genus))
        .map(|i| Characteristic::from_index(genus, i).expect("index in range"))
        .filter(|a| match filter {
            ParityFilter::All => true,
            ParityFilter::Even => a.is_even(),
            ParityFilter::Odd => !a.is_even(),
        })
        .collect())
}

/// Number of even characteristics, `2^{g-1} (2^g + 1)`.
pub fn even_count(genus: usize) -> usize {
    (1 << (genus - 1)) * ((1 << genus) + 1)
}

/// Four distinct even characteristics of the form `{a, a+c, a+d, a+c+d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GopelSystem {
    members: [Characteristic; 4],
}

impl GopelSystem {
    /// Validates the coset structure; members are stored sorted.
    pub fn new(mut members: [Characteristic; 4]) -> Result<Self> {
        members.sort();
        let genus = members[0].genus();
        if members.iter().any(|m| m.genus() != genus) {
            return Err(Error::InvalidArgument("mixed genus in Göpel system".into()));
        }
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("Göpel system members must be distinct".into()));
        }
        if members.iter().any(|m| !m.is_even()) {
            return Err(Error::InvalidArgument("Göpel system members must be even".into()));
        }
        let [a, b, c, d] = members;
        if a + b + c != d {
            return Err(Error::InvalidArgument("members do not form a coset".into()));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Characteristic; 4] {
        &self.members
    }

    pub fn contains(&self, a: &Characteristic) -> bool {
        self.members.contains(a)
    }
}

impl fmt::Display for GopelSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", labels.join(", "))
    }
}

/// The Göpel systems of genus 2, by brute force over 4-subsets of the even
/// characteristics. Ordered lexicographically by sorted member indices.
pub fn gopel_systems(genus: usize) -> Result<Vec<GopelSystem>> {
    if genus != 2 {
        return Err(Error::UnsupportedGenus {
            genus,
            supported: "2 (Göpel systems)",
        });
    }
    let even = enumerate(2, ParityFilter::Even)?;
    let n = even.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let (a, b, c, d) = (even[i], even[j], even[k], even[l]);
                    // b = a + c', c = a + d', so the coset closes iff d = a + c' + d'.
                    if a + (a + b) + (a + c) == d {
                        out.push(GopelSystem { members: [a, b, c, d] });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> Characteristic {
        s.parse().unwrap()
    }

    #[test]
    fn parity_small_cases() {
        assert_eq!(ch("(0;0)").parity(), Parity::Even);
        assert_eq!(ch("(1;1)").parity(), Parity::Odd);
        let all = enumerate(2, ParityFilter::All).unwrap();
        assert_eq!(all.iter().filter(|a| a.is_even()).count(), 10);
        assert_eq!(all.iter().filter(|a| !a.is_even()).count(), 6);
    }

    #[test]
    fn construction_reduces_mod_two() {
        let a = Characteristic::new(&[3, -2], &[2, -1]).unwrap();
        assert_eq!(a, ch("(1,0;0,1)"));
    }

    #[test]
    fn even_counts() {
        for g in 1..=3 {
            assert_eq!(enumerate(g, ParityFilter::Even).unwrap().len(), even_count(g));
        }
        assert_eq!(enumerate(3, ParityFilter::Even).unwrap().len(), 36);
        assert!(enumerate(4, ParityFilter::All).is_err());
        assert!(enumerate(0, ParityFilter::All).is_err());
    }

    #[test]
    fn genus_one_even_list() {
        let even: Vec<String> = enumerate(1, ParityFilter::Even)
            .unwrap()
            .iter()
            .map(|a| a.bit_string())
            .collect();
        assert_eq!(even, ["(0;0)", "(0;1)", "(1;0)"]);
    }

    #[test]
    fn genus_two_even_list_matches_digit_order() {
        let even: Vec<String> = enumerate(2, ParityFilter::Even)
            .unwrap()
            .iter()
            .map(|a| a.digit_encode().unwrap())
            .collect();
        assert_eq!(even, ["00", "01", "02", "03", "10", "12", "20", "21", "30", "33"]);
    }

    #[test]
    fn digit_encoding() {
        assert_eq!(ch("(1,0;0,0)").digit_encode().unwrap(), "20");
        assert_eq!(ch("(0,0;0,0)").digit_encode().unwrap(), "00");
        assert!(ch("(1;0)").digit_encode().is_err());
        for a in enumerate(2, ParityFilter::All).unwrap() {
            assert_eq!(Characteristic::digit_decode(&a.digit_encode().unwrap()).unwrap(), a);
        }
        assert!(Characteristic::digit_decode("4").is_err());
        assert!(Characteristic::digit_decode("123").is_err());
    }

    #[test]
    fn pairing_against_weights() {
        for g in 1..=3 {
            let all = enumerate(g, ParityFilter::All).unwrap();
            for a in &all {
                assert_eq!(a.pairing(a).unwrap(), 0);
                for b in &all {
                    let w = ((*a + *b).weight() + a.weight() + b.weight()) % 2;
                    assert_eq!(a.pairing(b).unwrap(), w);
                    assert_eq!(a.pairing(b).unwrap(), b.pairing(a).unwrap());
                }
            }
        }
        let a = ch("(1;0)");
        let b = ch("(1,0;0,0)");
        assert!(matches!(a.pairing(&b), Err(Error::GenusMismatch { .. })));
    }

    #[test]
    fn character_sum_over_even_set() {
        // sum_{b even} (-1)^{<a+c, b>} = (-1)^{|a+c|} 2^{g-1} for a odd, c even.
        for g in 1..=3 {
            let all = enumerate(g, ParityFilter::All).unwrap();
            let even: Vec<_> = all.iter().filter(|a| a.is_even()).copied().collect();
            for a in all.iter().filter(|a| !a.is_even()) {
                for c in &even {
                    let s: i64 = even
                        .iter()
                        .map(|b| if (*a + *c).pairing(b).unwrap() == 0 { 1 } else { -1 })
                        .sum();
                    let sign = if (*a + *c).weight() == 0 { 1 } else { -1 };
                    assert_eq!(s, sign * (1 << (g - 1)));
                }
            }
        }
    }

    #[test]
    fn gopel_systems_genus_two() {
        let systems = gopel_systems(2).unwrap();
        assert_eq!(systems.len(), 15);
        let first: Vec<String> = systems[0].members().iter().map(|m| m.to_string()).collect();
        assert_eq!(first, ["00", "01", "02", "03"]);
        for b in enumerate(2, ParityFilter::Even).unwrap() {
            assert_eq!(systems.iter().filter(|s| s.contains(&b)).count(), 6);
        }
        for s in &systems {
            let [a, b, c, d] = *s.members();
            assert!((a + b + c + d).is_zero());
            assert!(GopelSystem::new([d, c, b, a]).is_ok());
        }
        assert!(gopel_systems(3).is_err());
    }

    #[test]
    fn gopel_validation_rejects_non_cosets() {
        let bad = [ch("00"), ch("01"), ch("02"), ch("10")];
        assert!(GopelSystem::new(bad).is_err());
        let odd = [ch("00"), ch("11"), ch("02"), ch("13")];
        assert!(GopelSystem::new(odd).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(ch("(1,0;0,1)").to_string(), "21");
        assert_eq!(ch("(1,0,1;0,1,1)").to_string(), "(1,0,1;0,1,1)");
        assert!("(1,2;0,1)".parse::<Characteristic>().is_err());
        assert!("(1,0;0)".parse::<Characteristic>().is_err());
    }
}
