//! Fixed-width bit strings written most significant bit first.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A bit string of fixed width. The leftmost written character is the
/// highest-order bit of `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    width: usize,
}

impl BitString {
    pub fn new(value: u64, width: usize) -> Self {
        assert!(width <= 64, "bit strings are limited to 64 bits");
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        assert!(value & !mask == 0, "value {value} does not fit in {width} bits");
        BitString { value, width }
    }

    pub fn zeros(width: usize) -> Self {
        BitString::new(0, width)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Bit at written position `pos` (0 = leftmost).
    pub fn bit(&self, pos: usize) -> bool {
        assert!(pos < self.width);
        (self.value >> (self.width - 1 - pos)) & 1 == 1
    }

    /// Parity of the bitwise product with `other`.
    pub fn dot(&self, other: &BitString) -> bool {
        (self.value & other.value).count_ones() % 2 == 1
    }

    pub fn xor(&self, other: &BitString) -> BitString {
        assert_eq!(self.width, other.width);
        BitString::new(self.value ^ other.value, self.width)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Bitwise complement within the width.
    pub fn complement(&self) -> BitString {
        let mask = if self.width == 64 { u64::MAX } else { (1u64 << self.width) - 1 };
        BitString::new(!self.value & mask, self.width)
    }

    /// Concatenation, `self` to the left.
    pub fn concat(&self, right: &BitString) -> BitString {
        BitString::new((self.value << right.width) | right.value, self.width + right.width)
    }

    /// All strings of the given width in increasing order.
    pub fn all(width: usize) -> impl Iterator<Item = BitString> {
        assert!(width < 64);
        (0..(1u64 << width)).map(move |v| BitString::new(v, width))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.width {
            f.write_str(if self.bit(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 64 || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidBits(s.to_string()));
        }
        let value = u64::from_str_radix(s, 2).map_err(|_| Error::InvalidBits(s.to_string()))?;
        Ok(BitString::new(value, s.len()))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Shorthand for parsing a literal in tests and examples. Panics on bad input.
pub fn bits(s: &str) -> BitString {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_msb_first() {
        assert_eq!(BitString::new(1, 2).to_string(), "01");
        assert_eq!(BitString::new(0b0011, 4).to_string(), "0011");
        assert!(bits("10").bit(0));
        assert!(!bits("10").bit(1));
    }

    #[test]
    fn dot_is_parity_of_product() {
        assert!(!bits("10").dot(&bits("01")));
        assert!(bits("11").dot(&bits("01")));
        assert!(!bits("110").dot(&bits("111")));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<BitString>().is_err());
        assert!("012".parse::<BitString>().is_err());
        assert_eq!("0011".parse::<BitString>().unwrap(), BitString::new(3, 4));
    }

    #[test]
    fn concat_and_complement() {
        assert_eq!(bits("01").concat(&bits("1")), bits("011"));
        assert_eq!(bits("0011").complement(), bits("1100"));
    }
}
