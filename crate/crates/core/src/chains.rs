//! The De Bruijn–Tengbergen–Kruyswijk partition of `{0,1}^n` into monotone
//! symmetric chains.
//!
//! The marking stage repeatedly marks an adjacent `10` pair, treats it as
//! deleted, and stops once the unmarked bits read `0…01…1`. Which pair is
//! chosen at each step does not affect the result, so [`mark`] runs it as a
//! single stack pass: a `1` is pushed, a `0` pops and marks the pair. The
//! literal pair-deletion procedure is kept as [`mark_by_pair_deletion`] and
//! serves as the oracle for the fast pass.
//!
//! Every vertex `x` determines a [`ChainCode`] over `{0, 1, _}`: marked
//! coordinates keep their bit, unmarked ones become blanks. The chain of
//! that code consists of the vertices obtained by filling the blanks with
//! `0…01…1`, one per level.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitVector;
use crate::error::{Error, Result};

/// Output of the marking stage: the original bits plus the marked set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedString {
    bits: BitVector,
    marked: BitVector,
}

impl MarkedString {
    /// Fresh string with nothing marked.
    pub fn unmarked(bits: BitVector) -> Self {
        let marked = BitVector::zeros(bits.len()).expect("non-empty");
        Self { bits, marked }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    /// Indicator vector of the marked coordinates.
    pub fn marked_mask(&self) -> &BitVector {
        &self.marked
    }

    pub fn is_marked(&self, i: usize) -> bool {
        self.marked.bit(i)
    }

    pub fn marked_coordinates(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.is_marked(i)).collect()
    }

    pub fn unmarked_coordinates(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| !self.is_marked(i)).collect()
    }

    /// Unmarked zeros and unmarked ones, `(a, b)` with the unmarked
    /// subsequence equal to `0^a 1^b` once marking is complete.
    pub fn unmarked_profile(&self) -> (usize, usize) {
        let mut zeros = 0;
        let mut ones = 0;
        for i in 1..=self.len() {
            if !self.is_marked(i) {
                if self.bits.bit(i) {
                    ones += 1;
                } else {
                    zeros += 1;
                }
            }
        }
        (zeros, ones)
    }

    /// Runs the stack pass over `first..=last`, skipping coordinates that
    /// are already marked. Coordinates outside the range are untouched.
    pub fn mark_range(&mut self, first: usize, last: usize) {
        let mut open: Vec<usize> = Vec::new();
        for i in first..=last.min(self.len()) {
            if self.marked.bit(i) {
                continue;
            }
            if self.bits.bit(i) {
                open.push(i);
            } else if let Some(j) = open.pop() {
                self.marked.set(j, true);
                self.marked.set(i, true);
            }
        }
    }

    /// The chain code: marked bits copied, unmarked coordinates blank.
    pub fn chain_code(&self) -> ChainCode {
        let mut fixed = self.bits.clone();
        for i in 1..=self.len() {
            if !self.is_marked(i) {
                fixed.set(i, false);
            }
        }
        ChainCode { fixed, blanks: self.marked.flip_all() }
    }
}

impl fmt::Display for MarkedString {
    /// Marked bits carry a combining circumflex, e.g. `01̂1̂0̂0̂11̂0̂`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            f.write_str(if self.bits.bit(i) { "1" } else { "0" })?;
            if self.is_marked(i) {
                f.write_str("\u{302}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MarkedString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MarkedString({self})")
    }
}

/// The marking stage, as one left-to-right stack pass.
pub fn mark(x: &BitVector) -> MarkedString {
    let mut m = MarkedString::unmarked(x.clone());
    m.mark_range(1, x.len());
    m
}

/// Which adjacent `10` pair the literal procedure picks at each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairOrder {
    LeftmostFirst,
    RightmostFirst,
}

/// The marking stage exactly as described: repeatedly find a `10` pair
/// among the surviving coordinates, mark it, delete it. Quadratic; used as
/// an oracle for [`mark`].
pub fn mark_by_pair_deletion(x: &BitVector, order: PairOrder) -> MarkedString {
    let mut m = MarkedString::unmarked(x.clone());
    let mut alive: Vec<usize> = (1..=x.len()).collect();
    loop {
        let pairs = alive.windows(2).enumerate().filter(|(_, w)| x.bit(w[0]) && !x.bit(w[1]));
        let found = match order {
            PairOrder::LeftmostFirst => pairs.map(|(p, _)| p).next(),
            PairOrder::RightmostFirst => pairs.map(|(p, _)| p).next_back(),
        };
        let Some(p) = found else { break };
        m.marked.set(alive[p], true);
        m.marked.set(alive[p + 1], true);
        alive.drain(p..p + 2);
    }
    m
}

/// Marks the prefix before `i`, then the suffix after `i`, then finishes
/// on the whole partially marked string.
pub fn mark_three_step(x: &BitVector, i: usize) -> Result<MarkedString> {
    let (mut m, _) = split_marking(x, i)?;
    m.mark_range(1, x.len());
    Ok(m)
}

/// Unmarked counts after marking the prefix `x_1..x_{i-1}` and the suffix
/// `x_{i+1}..x_n` separately: the prefix reduces to `0^a 1^b` and the
/// suffix to `0^c 1^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SplitProfile {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

pub fn split_profile(x: &BitVector, i: usize) -> Result<SplitProfile> {
    split_marking(x, i).map(|(_, p)| p)
}

fn split_marking(x: &BitVector, i: usize) -> Result<(MarkedString, SplitProfile)> {
    x.try_bit(i)?;
    let mut m = MarkedString::unmarked(x.clone());
    if i > 1 {
        m.mark_range(1, i - 1);
    }
    m.mark_range(i + 1, x.len());
    let count = |range: std::ops::RangeInclusive<usize>, value: bool| {
        range.filter(|&p| !m.is_marked(p) && x.bit(p) == value).count()
    };
    let profile = SplitProfile {
        a: count(1..=i - 1, false),
        b: count(1..=i - 1, true),
        c: count(i + 1..=x.len(), false),
        d: count(i + 1..=x.len(), true),
    };
    Ok((m, profile))
}

/// One symbol of a chain code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainSymbol {
    Zero,
    One,
    Blank,
}

/// A monotone symmetric chain, given by its code `y ∈ {0,1,_}^n`.
///
/// With `m` blanks the chain runs from level `k = (n - m)/2` to `n - k`;
/// the member at level `j` fills the leftmost `m - (j - k)` blanks with 0
/// and the rest with 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChainCode {
    // bits at non-blank coordinates; zero at blanks
    fixed: BitVector,
    blanks: BitVector,
}

impl ChainCode {
    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbol(&self, i: usize) -> ChainSymbol {
        match (self.blanks.bit(i), self.fixed.bit(i)) {
            (true, _) => ChainSymbol::Blank,
            (false, true) => ChainSymbol::One,
            (false, false) => ChainSymbol::Zero,
        }
    }

    /// Number of blanks `m`; the chain has `m + 1` members.
    pub fn blank_count(&self) -> usize {
        self.blanks.weight()
    }

    pub fn blank_coordinates(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.blanks.bit(i)).collect()
    }

    /// Indicator vector of the blank coordinates.
    pub fn blank_mask(&self) -> &BitVector {
        &self.blanks
    }

    /// Bottom level `k`.
    pub fn bottom(&self) -> usize {
        (self.len() - self.blank_count()) / 2
    }

    /// Top level `n - k`.
    pub fn top(&self) -> usize {
        self.len() - self.bottom()
    }

    pub fn chain_length(&self) -> usize {
        self.blank_count() + 1
    }

    /// The member of weight `level`.
    pub fn member(&self, level: usize) -> Result<BitVector> {
        let (bottom, top) = (self.bottom(), self.top());
        if level < bottom || level > top {
            return Err(Error::LevelOutOfRange { level, bottom, top });
        }
        let zeros = self.blank_count() - (level - bottom);
        let mut v = self.fixed.clone();
        let mut seen = 0;
        for i in 1..=self.len() {
            if self.blanks.bit(i) {
                seen += 1;
                if seen > zeros {
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }

    /// The whole chain, bottom to top. Each step up turns the rightmost
    /// remaining 0-blank into a 1, so the flipped coordinates decrease on
    /// the way up.
    pub fn members(&self) -> Vec<BitVector> {
        (self.bottom()..=self.top())
            .map(|j| self.member(j).expect("level in range"))
            .collect()
    }
}

impl fmt::Display for ChainCode {
    /// `'0'`, `'1'`, and `'_'` for blank.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (1..=self.len())
            .map(|i| match self.symbol(i) {
                ChainSymbol::Zero => '0',
                ChainSymbol::One => '1',
                ChainSymbol::Blank => '_',
            })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for ChainCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainCode({self})")
    }
}

impl FromStr for ChainCode {
    type Err = Error;

    /// Parses `'0'`/`'1'`/`'_'` and checks that the string is the code of
    /// an actual chain of the partition.
    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut fixed = BitVector::zeros(n)?;
        let mut blanks = BitVector::zeros(n)?;
        for (idx, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => fixed.set(idx + 1, true),
                '_' => blanks.set(idx + 1, true),
                other => return Err(Error::Parse(format!("invalid chain symbol {other:?} in {s:?}"))),
            }
        }
        if (n - blanks.weight()) % 2 != 0 {
            return Err(Error::InvalidChainCode(format!("{s}: blank count parity differs from length")));
        }
        let code = ChainCode { fixed, blanks };
        let bottom = code.member(code.bottom())?;
        let top = code.member(code.top())?;
        if chain_code(&bottom) != code || chain_code(&top) != code {
            return Err(Error::InvalidChainCode(format!("{s}: fixed symbols are not a marked pattern")));
        }
        Ok(code)
    }
}

/// Code of the chain containing `x`.
pub fn chain_code(x: &BitVector) -> ChainCode {
    mark(x).chain_code()
}

/// Where a vertex sits in the partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainPosition {
    pub code: ChainCode,
    /// Bottom level of the chain.
    pub k: usize,
    /// Level of the vertex, equal to its weight.
    pub j: usize,
    /// Distance from the chain top: blanks of the vertex holding 0.
    pub ell: usize,
}

impl ChainPosition {
    pub fn top(&self) -> usize {
        self.code.len() - self.k
    }
}

pub fn position(x: &BitVector) -> ChainPosition {
    let code = chain_code(x);
    let k = code.bottom();
    let ell = (1..=x.len()).filter(|&i| code.blanks.bit(i) && !x.bit(i)).count();
    ChainPosition { code, k, j: x.weight(), ell }
}

pub fn chain_member(code: &ChainCode, level: usize) -> Result<BitVector> {
    code.member(level)
}

pub fn chain_members(code: &ChainCode) -> Vec<BitVector> {
    code.members()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::enumerate_cube;
    use std::collections::HashMap;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn code(s: &str) -> ChainCode {
        s.parse().unwrap()
    }

    #[test]
    fn worked_marking() {
        let m = mark(&bv("01100110"));
        assert_eq!(m.marked_coordinates(), vec![2, 3, 4, 5, 7, 8]);
        assert_eq!(m.to_string(), "01\u{302}1\u{302}0\u{302}0\u{302}11\u{302}0\u{302}");
        assert!(mark(&bv("0011")).marked_coordinates().is_empty());
        assert_eq!(mark(&bv("1100")).marked_coordinates(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn chain_code_examples() {
        assert_eq!(chain_code(&bv("01100110")).to_string(), "_1100_10");
        assert_eq!(chain_code(&bv("0011")).to_string(), "____");
        assert_eq!(chain_code(&bv("10")).to_string(), "10");
    }

    #[test]
    fn position_examples() {
        let p = position(&bv("01100110"));
        assert_eq!((p.code.to_string().as_str(), p.k, p.j, p.ell), ("_1100_10", 3, 4, 1));
        let p = position(&bv("1111"));
        assert_eq!((p.code.to_string().as_str(), p.k, p.j, p.ell), ("____", 0, 4, 0));
        let p = position(&bv("0000"));
        assert_eq!((p.code.to_string().as_str(), p.k, p.j, p.ell), ("____", 0, 0, 4));
    }

    #[test]
    fn member_examples() {
        assert_eq!(chain_member(&code("_1100_10"), 3).unwrap(), bv("01100010"));
        assert_eq!(chain_member(&code("_1100_10"), 5).unwrap(), bv("11100110"));
        assert_eq!(chain_member(&code("____"), 2).unwrap(), bv("0011"));
        assert!(matches!(
            chain_member(&code("_1100_10"), 2),
            Err(Error::LevelOutOfRange { level: 2, bottom: 3, top: 5 })
        ));
        let strs = |c: &str| chain_members(&code(c)).iter().map(|v| v.to_string()).collect::<Vec<_>>();
        assert_eq!(strs("_1100_10"), ["01100010", "01100110", "11100110"]);
        assert_eq!(strs("1010"), ["1010"]);
        assert_eq!(strs("____"), ["0000", "0001", "0011", "0111", "1111"]);
    }

    #[test]
    fn invalid_codes_rejected() {
        assert!("___".parse::<ChainCode>().is_ok());
        assert!("__".parse::<ChainCode>().is_ok());
        assert!("_".parse::<ChainCode>().is_ok());
        assert!(matches!("0110".parse::<ChainCode>(), Err(Error::InvalidChainCode(_))));
        assert!(matches!("___1".parse::<ChainCode>(), Err(Error::InvalidChainCode(_))));
        assert!(matches!("01".parse::<ChainCode>(), Err(Error::InvalidChainCode(_))));
        assert!("1x".parse::<ChainCode>().is_err());
    }

    #[test]
    fn strategies_agree_small_n() {
        for n in 1..=10 {
            for x in enumerate_cube(n).unwrap() {
                let fast = mark(&x);
                assert_eq!(fast, mark_by_pair_deletion(&x, PairOrder::LeftmostFirst), "{x}");
                assert_eq!(fast, mark_by_pair_deletion(&x, PairOrder::RightmostFirst), "{x}");
                let (zeros, ones) = fast.unmarked_profile();
                let unmarked = fast.unmarked_coordinates();
                assert!(unmarked.iter().take(zeros).all(|&i| !x.bit(i)));
                assert!(unmarked.iter().skip(zeros).all(|&i| x.bit(i)));
                assert_eq!(unmarked.len(), zeros + ones);
                let marked_ones = fast.marked_coordinates().iter().filter(|&&i| x.bit(i)).count();
                assert_eq!(2 * marked_ones, fast.marked_coordinates().len());
                for i in 1..=n {
                    assert_eq!(mark_three_step(&x, i).unwrap(), fast);
                }
            }
        }
    }

    #[test]
    fn chains_partition_cube_monotonically() {
        for n in 1..=12 {
            let mut owner: HashMap<BitVector, ChainCode> = HashMap::new();
            for x in enumerate_cube(n).unwrap() {
                let c = chain_code(&x);
                if owner.contains_key(&x) {
                    continue;
                }
                let members = c.members();
                assert_eq!(members.len(), c.chain_length());
                assert!(members.contains(&x));
                // read from the top down, the flipped coordinates increase
                let mut last_flip = 0;
                for (level, pair) in members.windows(2).enumerate().rev() {
                    assert_eq!(pair[0].weight(), c.bottom() + level);
                    let diff = pair[0].xor(&pair[1]).unwrap();
                    assert_eq!(diff.weight(), 1);
                    let flipped = diff.iter().position(|b| b).unwrap() + 1;
                    assert!(flipped > last_flip);
                    last_flip = flipped;
                }
                for m in members {
                    assert_eq!(chain_code(&m), c);
                    assert!(owner.insert(m, c.clone()).is_none());
                }
            }
            assert_eq!(owner.len(), 1 << n);
        }
    }

    #[test]
    fn member_inverts_position() {
        for n in 1..=12 {
            for x in enumerate_cube(n).unwrap() {
                let p = position(&x);
                assert_eq!(chain_member(&p.code, p.j).unwrap(), x);
                assert_eq!(p.ell + p.j, p.top());
                assert!(p.k <= p.j && p.j <= p.top());
            }
        }
    }

    #[test]
    fn split_profile_of_worked_example() {
        // prefix 011 stays unmarked; suffix 0110 marks its trailing 10
        let p = split_profile(&bv("01100110"), 4).unwrap();
        assert_eq!(p, SplitProfile { a: 1, b: 2, c: 1, d: 1 });
        assert!(split_profile(&bv("01"), 3).is_err());
    }
}
