//! Fixed-width bit strings packed into machine words.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A string of `width` bits. Bit `i` is the `i`-th character of the printed
/// form and lives in word `i / 64` at position `i % 64`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    width: usize,
    words: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit string {0:?}")]
pub struct BitStringParseError(pub String);

pub(crate) fn words_for(width: usize) -> usize {
    width.div_ceil(64)
}

/// Mask of the valid bits in the last word of a `width`-bit string.
pub(crate) fn tail_mask(width: usize) -> u64 {
    match width % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl BitString {
    pub fn zeros(width: usize) -> Self {
        BitString {
            width,
            words: vec![0; words_for(width)],
        }
    }

    /// Build from packed words; bits past `width` are cleared.
    pub fn from_words(width: usize, words: &[u64]) -> Self {
        let mut w = words[..words_for(width)].to_vec();
        if let Some(last) = w.last_mut() {
            *last &= tail_mask(width);
        }
        BitString { width, words: w }
    }

    /// Low `width` bits of `value`, bit 0 of the value becoming bit 0 here.
    pub fn from_u64(width: usize, value: u64) -> Self {
        let mut s = Self::zeros(width);
        if width > 0 {
            s.words[0] = value & if width >= 64 { u64::MAX } else { tail_mask(width) };
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.width, "bit {i} out of range for width {}", self.width);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitString) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Value of the first `min(width, 64)` bits as an integer.
    pub fn low_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = BitStringParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = BitString::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(i, true),
                _ => return Err(BitStringParseError(s.to_string())),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip() {
        let s: BitString = "0101100".parse().unwrap();
        assert_eq!(s.to_string(), "0101100");
        assert!(s.get(1) && !s.get(0));
        assert_eq!(s.count_ones(), 3);
        assert!("01a".parse::<BitString>().is_err());
    }

    #[test]
    fn wide_strings() {
        let mut s = BitString::zeros(130);
        s.set(129, true);
        assert_eq!(s.words().len(), 3);
        assert_eq!(s.words()[2], 2);
        let t = BitString::from_words(70, &[u64::MAX, u64::MAX]);
        assert_eq!(t.count_ones(), 70);
    }
}
