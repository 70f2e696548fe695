//! Exact rational arithmetic and points in rational space.
//!
//! Everything geometric in the crate is exact. Distances are compared as
//! squared Euclidean distances so they stay rational.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Parses `p/q` or `p`. Non-canonical input (e.g. `2/4`, `3/-6`) is accepted
/// and normalized.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p/q` in lowest terms, or `p` when the denominator is 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// A point of `Q^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    /// Embeds a Boolean point.
    pub fn from_bits(bits: &[bool]) -> Self {
        RationalPoint(bits.iter().map(|&b| int(b as i64)).collect())
    }

    /// Embeds the Boolean point with the given assignment index.
    pub fn from_index(index: u32, n: usize) -> Self {
        RationalPoint((0..n).map(|i| int(((index >> i) & 1) as i64)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    /// Returns the assignment index when every coordinate is 0 or 1.
    pub fn as_boolean_index(&self) -> Option<u32> {
        let mut idx = 0u32;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_one() {
                idx |= 1 << i;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(idx)
    }

    /// Squared norm.
    pub fn norm_sq(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, c| acc + c * c)
    }

    pub fn parse(coords: &[impl AsRef<str>]) -> Result<Self> {
        coords
            .iter()
            .map(|c| parse_rational(c.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(RationalPoint)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl Index<usize> for RationalPoint {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Squared Euclidean distance.
pub fn sqdist(a: &RationalPoint, b: &RationalPoint) -> Result<Rational> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.0.iter().zip(&b.0).fold(Rational::zero(), |acc, (x, y)| {
        let d = x - y;
        acc + &d * &d
    }))
}

/// Number of differing coordinates.
pub fn hamming(a: &[bool], b: &[bool]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// Bits of an assignment index, `x_1` first.
pub fn index_to_bits(index: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| (index >> i) & 1 == 1).collect()
}

pub fn bits_to_index(bits: &[bool]) -> u32 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as u32) << i))
}

/// Renders an assignment as a bit string `x_1 x_2 ... x_n`.
pub fn bits_string(index: u32, n: usize) -> String {
    (0..n)
        .map(|i| if (index >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&[false; 3], &[false; 3]).unwrap(), 0);
        assert_eq!(
            hamming(&[true, false, true], &[false, false, true]).unwrap(),
            1
        );
        assert_eq!(hamming(&[true, true], &[false, false]).unwrap(), 2);
        assert!(matches!(
            hamming(&[true], &[true, false]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sqdist_examples() {
        let a = RationalPoint::from_bits(&[true, true, false]);
        let b = RationalPoint::new(vec![rat(2, 3); 3]);
        assert_eq!(sqdist(&a, &b).unwrap(), rat(2, 3));
        assert_eq!(sqdist(&b, &b).unwrap(), int(0));
        let x = RationalPoint::from_bits(&[true, false, true]);
        let y = RationalPoint::from_bits(&[false, false, true]);
        assert_eq!(sqdist(&x, &y).unwrap(), int(1));
        assert!(sqdist(&x, &RationalPoint::new(vec![int(0)])).is_err());
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("3/-6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert_eq!(format_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        for bad in ["", "1/0", "a/2", "1/2/3", "1.5"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn boolean_index_roundtrip() {
        let p = RationalPoint::from_index(0b101, 3);
        assert_eq!(p.as_boolean_index(), Some(0b101));
        assert_eq!(RationalPoint::new(vec![rat(1, 2)]).as_boolean_index(), None);
        assert_eq!(bits_string(0b011, 4), "1100");
    }

    proptest! {
        #[test]
        fn rational_format_parse_roundtrip(p in -1_000_000i64..1_000_000, q in 1i64..1_000_000) {
            let r = rat(p, q);
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }

        #[test]
        fn sqdist_equals_hamming_on_boolean_points(n in 1usize..12, a in any::<u32>(), b in any::<u32>()) {
            let mask = (1u32 << n) - 1;
            let (a, b) = (a & mask, b & mask);
            let d = sqdist(&RationalPoint::from_index(a, n), &RationalPoint::from_index(b, n)).unwrap();
            let h = hamming(&index_to_bits(a, n), &index_to_bits(b, n)).unwrap();
            prop_assert_eq!(d, int(h as i64));
        }
    }
}
