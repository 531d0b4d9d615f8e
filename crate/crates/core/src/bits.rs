//! Bit-vector primitives for cube vertices.
//!
//! Coordinates are 1-based and coordinate 1 is the leftmost character of the
//! textual form, so `"0110".parse::<BitVector>()` has bit 2 and bit 3 set.
//! Lengths are unbounded; word packing is an internal detail.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Default upper bound on the number of elements any enumeration may yield.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 28;

const WORD: usize = 64;

/// A vertex of the Boolean cube `{0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    // bit for coordinate i lives at words[(i-1)/64], position (i-1)%64
    words: Vec<u64>,
}

impl BitVector {
    /// All-zeros vector of length `len`.
    pub fn zeros(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(Self { len, words: vec![0; len.div_ceil(WORD)] })
    }

    /// All-ones vector of length `len`.
    pub fn ones(len: usize) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        v.words.iter_mut().for_each(|w| *w = u64::MAX);
        v.clear_tail();
        Ok(v)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let mut v = Self::zeros(bits.len())?;
        for (idx, &b) in bits.iter().enumerate() {
            v.set(idx + 1, b);
        }
        Ok(v)
    }

    /// Uniformly random vector of length `len`.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Self> {
        let mut v = Self::zeros(len)?;
        v.words.iter_mut().for_each(|w| *w = rng.gen());
        v.clear_tail();
        Ok(v)
    }

    /// Vector whose textual form is the `len`-digit binary expansion of
    /// `index`, so coordinate 1 is the most significant bit.
    ///
    /// Lexicographic order of the textual form coincides with numeric order
    /// of `index`.
    pub fn from_index(len: usize, index: u64) -> Result<Self> {
        if len > WORD {
            return Err(Error::TooLongForIndex { len });
        }
        let mut v = Self::zeros(len)?;
        for i in 1..=len {
            if (index >> (len - i)) & 1 == 1 {
                v.set(i, true);
            }
        }
        Ok(v)
    }

    /// Inverse of [`BitVector::from_index`]; `None` when `len > 64`.
    pub fn to_index(&self) -> Option<u64> {
        if self.len > WORD {
            return None;
        }
        let mut index = 0u64;
        for i in 1..=self.len {
            index = (index << 1) | self.bit(i) as u64;
        }
        Some(index)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; vectors have at least one coordinate.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value of coordinate `i` (1-based).
    ///
    /// Panics if `i` is outside `1..=len`; use [`BitVector::try_bit`] for a
    /// checked lookup.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len, "coordinate {i} out of range 1..={}", self.len);
        let p = i - 1;
        (self.words[p / WORD] >> (p % WORD)) & 1 == 1
    }

    pub fn try_bit(&self, i: usize) -> Result<bool> {
        self.check_coordinate(i)?;
        Ok(self.bit(i))
    }

    /// Sets coordinate `i` in place. Panics on an out-of-range coordinate.
    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i >= 1 && i <= self.len, "coordinate {i} out of range 1..={}", self.len);
        let p = i - 1;
        let mask = 1u64 << (p % WORD);
        if value {
            self.words[p / WORD] |= mask;
        } else {
            self.words[p / WORD] &= !mask;
        }
    }

    /// Hamming weight `|x|`.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance; errors when the lengths differ.
    pub fn distance(&self, other: &Self) -> Result<usize> {
        self.check_same_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Coordinatewise exclusive or.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Ok(Self { len: self.len, words })
    }

    /// Bitwise complement `flip(x)`.
    pub fn flip_all(&self) -> Self {
        let mut v = Self { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        v.clear_tail();
        v
    }

    /// `x + e_i`: the neighbour across coordinate `i`.
    pub fn flip_at(&self, i: usize) -> Result<Self> {
        self.check_coordinate(i)?;
        let mut v = self.clone();
        v.set(i, !self.bit(i));
        Ok(v)
    }

    /// Concatenation `self ∘ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = Self { len: self.len + other.len, words: vec![0; (self.len + other.len).div_ceil(WORD)] };
        v.words[..self.words.len()].copy_from_slice(&self.words);
        for i in 1..=other.len {
            if other.bit(i) {
                v.set(self.len + i, true);
            }
        }
        v
    }

    /// `self ∘ bit`.
    pub fn push(&self, bit: bool) -> Self {
        let mut v = self.clone();
        v.len += 1;
        if v.words.len() * WORD < v.len {
            v.words.push(0);
        }
        v.set(v.len, bit);
        v
    }

    /// Coordinates `first..=last` as a new vector (1-based, inclusive).
    pub fn slice(&self, first: usize, last: usize) -> Result<Self> {
        self.check_coordinate(first)?;
        self.check_coordinate(last)?;
        if last < first {
            return Err(Error::EmptyVector);
        }
        let mut v = Self::zeros(last - first + 1)?;
        for i in first..=last {
            if self.bit(i) {
                v.set(i - first + 1, true);
            }
        }
        Ok(v)
    }

    /// Splits off the last coordinate: `z = x ∘ b` gives `(x, b)`.
    ///
    /// Errors on a length-1 vector, whose head would be empty.
    pub fn split_last(&self) -> Result<(Self, bool)> {
        if self.len < 2 {
            return Err(Error::EmptyVector);
        }
        Ok((self.slice(1, self.len - 1)?, self.bit(self.len)))
    }

    /// Coordinates in order, coordinate 1 first.
    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |i| self.bit(i))
    }

    fn check_coordinate(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len {
            return Err(Error::CoordinateOutOfRange { coordinate: i, len: self.len });
        }
        Ok(())
    }

    fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(())
    }

    fn clear_tail(&mut self) {
        let used = self.len % WORD;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits)
    }
}

/// The edge `(vertex, vertex + e_coordinate)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeId {
    pub vertex: BitVector,
    pub coordinate: usize,
}

impl EdgeId {
    pub fn new(vertex: BitVector, coordinate: usize) -> Result<Self> {
        vertex.check_coordinate(coordinate)?;
        Ok(Self { vertex, coordinate })
    }

    /// The other endpoint.
    pub fn neighbor(&self) -> BitVector {
        self.vertex.flip_at(self.coordinate).expect("coordinate validated at construction")
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.vertex, self.coordinate)
    }
}

/// Number of vertices of `{0,1}^n`, or `CapExceeded` if it is above `cap`.
pub fn cube_size(n: usize, cap: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    if n >= 63 || (1u64 << n) > cap {
        return Err(Error::CapExceeded { what: format!("2^{n} cube vertices"), cap });
    }
    Ok(1u64 << n)
}

/// All of `{0,1}^n` in lexicographic order, under the default cap.
pub fn enumerate_cube(n: usize) -> Result<CubeIter> {
    enumerate_cube_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_cube_with_cap(n: usize, cap: u64) -> Result<CubeIter> {
    let size = cube_size(n, cap)?;
    Ok(CubeIter { n, next: 0, end: size })
}

/// Iterator over cube vertices in lexicographic order.
#[derive(Clone, Debug)]
pub struct CubeIter {
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for CubeIter {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.next >= self.end {
            return None;
        }
        let v = BitVector::from_index(self.n, self.next).expect("n checked by cube_size");
        self.next += 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for CubeIter {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(bv("0000").weight(), 0);
        assert_eq!(bv("1111").weight(), 4);
        assert_eq!(bv("01100110").weight(), 4);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(bv("0000").distance(&bv("0000")).unwrap(), 0);
        assert_eq!(bv("0011").distance(&bv("0111")).unwrap(), 1);
        assert_eq!(bv("01100").distance(&bv("10011")).unwrap(), 5);
        assert!(matches!(
            bv("01").distance(&bv("011")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn flips() {
        assert_eq!(bv("0000").flip_all(), bv("1111"));
        assert_eq!(bv("0110").flip_all(), bv("1001"));
        assert_eq!(bv("01101").flip_all().flip_all(), bv("01101"));
        assert_eq!(bv("0000").flip_at(1).unwrap(), bv("1000"));
        assert_eq!(bv("1111").flip_at(4).unwrap(), bv("1110"));
        assert_eq!(bv("0101").flip_at(2).unwrap().flip_at(2).unwrap(), bv("0101"));
        assert!(bv("0101").flip_at(0).is_err());
        assert!(bv("0101").flip_at(5).is_err());
    }

    #[test]
    fn enumeration_order_and_count() {
        let one: Vec<String> = enumerate_cube(1).unwrap().map(|v| v.to_string()).collect();
        assert_eq!(one, ["0", "1"]);
        let two: Vec<String> = enumerate_cube(2).unwrap().map(|v| v.to_string()).collect();
        assert_eq!(two, ["00", "01", "10", "11"]);
        let all: std::collections::HashSet<BitVector> = enumerate_cube(16).unwrap().collect();
        assert_eq!(all.len(), 65536);
        assert!(matches!(enumerate_cube_with_cap(10, 1000), Err(Error::CapExceeded { .. })));
        assert!(enumerate_cube(0).is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<BitVector>().is_err());
        assert!("01a".parse::<BitVector>().is_err());
    }

    #[test]
    fn long_vectors_cross_word_boundaries() {
        let mut v = BitVector::zeros(130).unwrap();
        v.set(64, true);
        v.set(65, true);
        v.set(130, true);
        assert_eq!(v.weight(), 3);
        assert_eq!(v.flip_all().weight(), 127);
        let w = v.push(true);
        assert_eq!(w.len(), 131);
        assert_eq!(w.weight(), 4);
        let (head, last) = w.split_last().unwrap();
        assert!(last);
        assert_eq!(head, v);
        assert_eq!(v.concat(&v).weight(), 6);
        assert_eq!(v.slice(60, 70).unwrap().to_string(), "00001100000");
    }

    proptest! {
        #[test]
        fn text_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let v = BitVector::from_bools(&bits).unwrap();
            prop_assert_eq!(v.to_string().parse::<BitVector>().unwrap(), v);
        }

        #[test]
        fn neighbor_at_distance_one(bits in proptest::collection::vec(any::<bool>(), 1..150), pick in any::<usize>()) {
            let v = BitVector::from_bools(&bits).unwrap();
            let i = 1 + pick % v.len();
            prop_assert_eq!(v.distance(&v.flip_at(i).unwrap()).unwrap(), 1);
        }

        #[test]
        fn distance_is_weight_of_xor(
            pair in (1usize..150).prop_flat_map(|n| (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            ))
        ) {
            let a = BitVector::from_bools(&pair.0).unwrap();
            let b = BitVector::from_bools(&pair.1).unwrap();
            prop_assert_eq!(a.distance(&b).unwrap(), a.xor(&b).unwrap().weight());
            prop_assert_eq!(a.distance(&b).unwrap(), b.distance(&a).unwrap());
        }

        #[test]
        fn index_round_trip(n in 1usize..=64, raw in any::<u64>()) {
            let index = if n == 64 { raw } else { raw & ((1u64 << n) - 1) };
            let v = BitVector::from_index(n, index).unwrap();
            prop_assert_eq!(v.to_index(), Some(index));
        }
    }
}
