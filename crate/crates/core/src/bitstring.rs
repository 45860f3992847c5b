use std::fmt;
use std::str::FromStr;

use crate::error::Error;

const WORD: usize = 64;

/// A binary string packed 64 bits per word.
///
/// Bits past `len` in the last word are always zero, so derived equality and
/// hashing agree with bitwise equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self { words: Vec::with_capacity(bits.div_ceil(WORD)), len: 0 }
    }

    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(WORD)], len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at position `i`; panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            self.words[(self.len - 1) / WORD] |= 1u64 << ((self.len - 1) % WORD);
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.words[i / WORD] >> (i % WORD)) & 1 == 1)
    }

    /// Contiguous substring `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        assert!(start <= end && end <= self.len, "slice {start}..{end} out of range");
        (start..end).map(|i| self.get(i)).collect()
    }

    /// Bits at the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> BitString {
        positions.iter().map(|&i| self.get(i)).collect()
    }

    /// Unpacked copy with one byte (0 or 1) per bit, for tight inner loops.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Build from a random word source, filling `len` bits.
    pub(crate) fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.truncate(len.div_ceil(WORD));
        words.resize(len.div_ceil(WORD), 0);
        if !len.is_multiple_of(WORD) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % WORD)) - 1;
        }
        Self { words, len }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let iter = iter.into_iter();
        let mut out = BitString::with_capacity(iter.size_hint().0);
        for bit in iter {
            out.push(bit);
        }
        out
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBitString(format!("unexpected character {other:?}"))),
            })
            .collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_crosses_word_boundaries() {
        let mut s = BitString::new();
        for i in 0..130 {
            s.push(i % 7 == 0);
        }
        assert_eq!(s.len(), 130);
        assert!((0..130).all(|i| s.get(i) == (i % 7 == 0)));
        assert_eq!(s.count_ones(), 19);
    }

    #[test]
    fn from_words_masks_the_tail() {
        let s = BitString::from_words(vec![u64::MAX, u64::MAX], 70);
        assert_eq!(s.count_ones(), 70);
        assert_eq!(s, (0..70).map(|_| true).collect());
    }

    #[test]
    fn set_and_slice() {
        let mut s = BitString::zeros(10);
        s.set(3, true);
        s.set(9, true);
        assert_eq!(s.to_string(), "0001000001");
        assert_eq!(s.slice(2, 5).to_string(), "010");
        assert_eq!(s.select(&[9, 0, 3]).to_string(), "101");
    }
}
