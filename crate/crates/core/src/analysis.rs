//! Counting and Boolean-function facts about the partition and about `ψ`.
//!
//! Everything here is exact: binomials are big integers and probabilities
//! are big rationals, compared for equality rather than within a tolerance.
//! Each closed form comes with an enumeration that checks it.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use num_integer::binomial as big_binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bijections::BijectionKind;
use crate::bits::{cube_size, BitVector};
use crate::chains::{chain_code, mark};
use crate::error::{Error, Result};

/// `C(n, k)`, zero for `k < 0` or `k > n`.
pub fn binomial(n: usize, k: i64) -> BigUint {
    if k < 0 || k as usize > n {
        return BigUint::zero();
    }
    big_binomial(BigUint::from(n), BigUint::from(k as usize))
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Number of chains of each length `t ∈ [1, n+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCountTable {
    pub n: usize,
    /// Every `t` in `1..=n+1`, including zero counts.
    pub counts: BTreeMap<usize, BigUint>,
}

impl ChainCountTable {
    pub fn get(&self, t: usize) -> BigUint {
        self.counts.get(&t).cloned().unwrap_or_default()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().filter(|(_, c)| !c.is_zero()).map(|(&t, c)| (t, c))
    }

    /// `Σ t · M_t`, which is `2^n` for a partition.
    pub fn covered_vertices(&self) -> BigUint {
        self.counts.iter().map(|(&t, c)| c * BigUint::from(t)).sum()
    }

    pub fn from_formula(n: usize) -> Self {
        Self { n, counts: (1..=n + 1).map(|t| (t, chain_count_formula(n, t))).collect() }
    }
}

/// Closed form for the number `M_t` of chains of length `t`:
/// `C(n, (n-t+1)/2) - C(n, (n-t-1)/2)` when `t ≢ n (mod 2)`, else 0.
pub fn chain_count_formula(n: usize, t: usize) -> BigUint {
    if t == 0 || t > n + 1 || (t % 2) == (n % 2) {
        return BigUint::zero();
    }
    let k = (n as i64 - t as i64 + 1) / 2;
    binomial(n, k) - binomial(n, k - 1)
}

/// `M_t` by collecting the distinct chain codes of every vertex.
pub fn chain_count_enumerated(n: usize, cap: u64) -> Result<ChainCountTable> {
    let size = cube_size(n, cap)?;
    let mut codes = HashSet::new();
    for index in 0..size {
        codes.insert(chain_code(&BitVector::from_index(n, index)?));
    }
    let mut counts: BTreeMap<usize, BigUint> = (1..=n + 1).map(|t| (t, BigUint::zero())).collect();
    for code in codes {
        *counts.get_mut(&code.chain_length()).expect("length within 1..=n+1") += 1u32;
    }
    Ok(ChainCountTable { n, counts })
}

/// Vertices whose marking leaves exactly `a` unmarked zeros and `b`
/// unmarked ones: `C(n, (n-a-b)/2) - C(n, (n-a-b-2)/2)`.
pub fn unmarked_profile_count(n: usize, a: usize, b: usize) -> Result<BigUint> {
    if a + b > n || (a + b) % 2 != n % 2 {
        return Err(Error::InvalidArgument(format!(
            "profile (a={a}, b={b}) needs a+b <= n and a+b ≡ n (mod 2) for n={n}"
        )));
    }
    let k = ((n - a - b) / 2) as i64;
    Ok(binomial(n, k) - binomial(n, k - 1))
}

/// Vertices with exactly `a` unmarked zeros: `C(n, ⌊(n-a)/2⌋)`.
pub fn unmarked_zeros_count(n: usize, a: usize) -> Result<BigUint> {
    if a > n {
        return Err(Error::InvalidArgument(format!("a={a} exceeds n={n}")));
    }
    Ok(binomial(n, ((n - a) / 2) as i64))
}

/// Profile `(a, b)` → number of vertices, by marking every vertex.
pub fn unmarked_profile_enumerated(n: usize, cap: u64) -> Result<BTreeMap<(usize, usize), u64>> {
    let size = cube_size(n, cap)?;
    let mut counts = BTreeMap::new();
    for index in 0..size {
        *counts.entry(mark(&BitVector::from_index(n, index)?).unmarked_profile()).or_insert(0) += 1;
    }
    Ok(counts)
}

fn check_even_coordinate(n: usize, i: usize) -> Result<()> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    if i == 0 || i > n {
        return Err(Error::CoordinateOutOfRange { coordinate: i, len: n });
    }
    Ok(())
}

/// `Pr_x[ψ_i(x) ≠ x_i]` from the counting argument.
///
/// Marking the prefix `x_1..x_{i-1}` and the suffix `x_{i+1}..x_n` apart
/// leaves `0^a 1^b` and `0^c 1^d`; output bit `i` differs from `x_i` exactly
/// when `x_i = 0`, `b = 0` and `a ≥ c`. The three parts are independent, the
/// prefix count with `(a, b) = (j, 0)` is
/// `C(i-1, (i-1-j)/2) - C(i-1, (i-3-j)/2)` for `i-1-j` even, and the suffix
/// count with `c = k` is `C(n-i, ⌊(n-i-k)/2⌋)`.
pub fn flip_probability_exact(n: usize, i: usize) -> Result<BigRational> {
    check_even_coordinate(n, i)?;
    let prefix = i - 1;
    let suffix = n - i;
    let prefix_count = |j: usize| -> BigUint {
        if (prefix - j) % 2 != 0 {
            return BigUint::zero();
        }
        let k = ((prefix - j) / 2) as i64;
        binomial(prefix, k) - binomial(prefix, k - 1)
    };
    // tail[j] = Σ_{j' ≥ j} prefix_count(j')
    let mut tail = vec![BigUint::zero(); prefix + 2];
    for j in (0..=prefix).rev() {
        tail[j] = &tail[j + 1] + prefix_count(j);
    }
    let mut favourable = BigUint::zero();
    for k in 0..=suffix.min(prefix) {
        favourable += binomial(suffix, ((suffix - k) / 2) as i64) * &tail[k];
    }
    Ok(ratio(favourable, pow2(n)))
}

/// Exhaustive count of `x` with `ψ_i(x) ≠ x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitAgreementStat {
    pub n: usize,
    pub i: usize,
    pub disagree_count: u64,
    pub probability: BigRational,
}

/// `(count of x with ψ_i(x) ≠ x_i)` for every `i ∈ [n]`, one pass.
pub fn flip_counts_exhaustive(n: usize, cap: u64) -> Result<Vec<u64>> {
    check_even_coordinate(n, 1)?;
    let size = cube_size(n, cap)?;
    let mut counts = vec![0u64; n];
    for index in 0..size {
        let x = BitVector::from_index(n, index)?;
        let z = crate::bijections::psi(&x)?;
        for (slot, i) in counts.iter_mut().zip(1..=n) {
            if z.bits().bit(i) != x.bit(i) {
                *slot += 1;
            }
        }
    }
    Ok(counts)
}

pub fn flip_probability_exhaustive(n: usize, i: usize, cap: u64) -> Result<BitAgreementStat> {
    check_even_coordinate(n, i)?;
    let disagree_count = flip_counts_exhaustive(n, cap)?[i - 1];
    Ok(BitAgreementStat { n, i, disagree_count, probability: ratio(disagree_count.into(), pow2(n)) })
}

/// `max_i Pr[ψ_i(x) ≠ x_i] · √n`, from the exact formula.
pub fn scaled_max_flip_probability(n: usize) -> Result<f64> {
    let mut best = 0.0f64;
    for i in 1..=n {
        best = best.max(rational_to_f64(&flip_probability_exact(n, i)?));
    }
    Ok(best * (n as f64).sqrt())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Whether coordinate `i` lies in a balanced substring `x_s..x_e`, reading
/// 1 as `(` and 0 as `)`. Equivalent to `i` being marked; quadratic scan.
pub fn dyck_is_marked(x: &BitVector, i: usize) -> Result<bool> {
    x.try_bit(i)?;
    for s in 1..=i {
        let mut depth: i64 = 0;
        for e in s..=x.len() {
            depth += if x.bit(e) { 1 } else { -1 };
            if depth < 0 {
                break;
            }
            if depth == 0 && e >= i {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Majority of an odd-length vector.
pub fn majority(x: &BitVector) -> Result<bool> {
    if x.len() % 2 == 0 {
        return Err(Error::EvenLength(x.len()));
    }
    Ok(2 * x.weight() > x.len())
}

/// `r(x) = 0 ∘ 1^n ∘ x'` where `x'` replaces each 0 by `10` and each 1 by
/// `00`. Each output bit reads at most one input bit.
///
/// The `10` blocks mark themselves and each `00` block closes two of the
/// leading ones, so `r(x)` keeps `1 + max(0, 2|x| - n)` unmarked zeros.
/// Output bit 1 of `ψ` is 0 exactly when coordinate 1 holds 0 and at least
/// two zeros stay unmarked, which makes `ψ_1(r(x))` the complement of
/// `majority(x)`.
pub fn majority_reduction(x: &BitVector) -> Result<BitVector> {
    let n = x.len();
    if n % 2 == 0 {
        return Err(Error::EvenLength(n));
    }
    let mut r = BitVector::zeros(3 * n + 1)?;
    for p in 2..=n + 1 {
        r.set(p, true);
    }
    for (q, bit) in x.iter().enumerate() {
        if !bit {
            r.set(n + 2 + 2 * q, true);
        }
    }
    Ok(r)
}

/// Coordinate `i ∈ [n+1]` of `f(x)`.
pub fn output_bit(kind: BijectionKind, x: &BitVector, i: usize) -> Result<bool> {
    kind.forward(x)?.bits().try_bit(i)
}

/// `Inf[g] = E_x #{j : g(x) ≠ g(x + e_j)}` for any `g : {0,1}^n → {0,1}`.
pub fn total_influence(n: usize, cap: u64, g: impl Fn(&BitVector) -> Result<bool>) -> Result<BigRational> {
    let size = cube_size(n, cap)?;
    let values = (0..size)
        .map(|index| g(&BitVector::from_index(n, index)?))
        .collect::<Result<Vec<bool>>>()?;
    let mut sensitive = 0u64;
    for index in 0..size {
        for j in 0..n {
            if values[index as usize] != values[(index ^ (1 << j)) as usize] {
                sensitive += 1;
            }
        }
    }
    Ok(ratio(sensitive.into(), pow2(n)))
}

/// Total influence of output bit `i` of `kind` on `{0,1}^n`.
pub fn influence(kind: BijectionKind, i: usize, n: usize, cap: u64) -> Result<BigRational> {
    if i == 0 || i > n + 1 {
        return Err(Error::CoordinateOutOfRange { coordinate: i, len: n + 1 });
    }
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    total_influence(n, cap, |x| output_bit(kind, x, i))
}

/// Influence of every output bit, computing each image once.
pub fn influences(kind: BijectionKind, n: usize, cap: u64) -> Result<Vec<BigRational>> {
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let size = cube_size(n, cap)?;
    let images = (0..size)
        .map(|index| Ok(kind.forward(&BitVector::from_index(n, index)?)?.into_bits()))
        .collect::<Result<Vec<_>>>()?;
    (1..=n + 1)
        .map(|i| {
            let mut sensitive = 0u64;
            for index in 0..size {
                for j in 0..n {
                    if images[index as usize].bit(i) != images[(index ^ (1 << j)) as usize].bit(i) {
                        sensitive += 1;
                    }
                }
            }
            Ok(ratio(sensitive.into(), pow2(n)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{enumerate_cube, DEFAULT_ENUMERATION_CAP as CAP};

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn chain_count_examples() {
        assert_eq!(chain_count_formula(4, 5), big(1));
        assert_eq!(chain_count_formula(4, 3), big(3));
        assert_eq!(chain_count_formula(4, 2), big(0));
        let table = chain_count_enumerated(4, CAP).unwrap();
        let nonzero: Vec<(usize, BigUint)> = table.nonzero().map(|(t, c)| (t, c.clone())).collect();
        assert_eq!(nonzero, vec![(1, big(2)), (3, big(3)), (5, big(1))]);
        let two = chain_count_enumerated(2, CAP).unwrap();
        assert_eq!(two.nonzero().map(|(t, c)| (t, c.clone())).collect::<Vec<_>>(), vec![(1, big(1)), (3, big(1))]);
    }

    #[test]
    fn chain_counts_formula_matches_enumeration() {
        for n in 1..=12 {
            let table = chain_count_enumerated(n, CAP).unwrap();
            assert_eq!(table, ChainCountTable::from_formula(n), "n={n}");
            assert_eq!(table.covered_vertices(), big(1 << n));
        }
    }

    #[test]
    fn profile_examples() {
        assert_eq!(unmarked_profile_count(4, 0, 0).unwrap(), big(2));
        assert_eq!(unmarked_profile_count(4, 4, 0).unwrap(), big(1));
        assert!(unmarked_profile_count(4, 1, 0).is_err());
        assert!(unmarked_profile_count(4, 4, 2).is_err());
        for n in 1..=12 {
            let enumerated = unmarked_profile_enumerated(n, CAP).unwrap();
            let mut total = BigUint::zero();
            for a in 0..=n {
                let mut with_a = BigUint::zero();
                for b in 0..=n - a {
                    if (a + b) % 2 != n % 2 {
                        continue;
                    }
                    let c = unmarked_profile_count(n, a, b).unwrap();
                    assert_eq!(c, big(enumerated.get(&(a, b)).copied().unwrap_or(0)), "n={n} a={a} b={b}");
                    with_a += &c;
                }
                assert_eq!(with_a, unmarked_zeros_count(n, a).unwrap());
                total += with_a;
            }
            assert_eq!(total, big(1 << n));
        }
    }

    #[test]
    fn flip_probability_formula_matches_enumeration() {
        for n in [2, 4, 6, 8, 10] {
            let counts = flip_counts_exhaustive(n, CAP).unwrap();
            for i in 1..=n {
                let exact = flip_probability_exact(n, i).unwrap();
                assert_eq!(exact, ratio(big(counts[i - 1]), pow2(n)), "n={n} i={i}");
                assert!(exact <= BigRational::new(1.into(), 2.into()));
            }
        }
        let stat = flip_probability_exhaustive(4, 1, CAP).unwrap();
        assert_eq!(stat.probability, flip_probability_exact(4, 1).unwrap());
        assert!(flip_probability_exact(5, 1).is_err());
        assert!(flip_probability_exact(4, 5).is_err());
    }

    #[test]
    fn dyck_examples() {
        assert!(dyck_is_marked(&bv("01100110"), 2).unwrap());
        assert!(!dyck_is_marked(&bv("01100110"), 1).unwrap());
        for i in 1..=4 {
            assert!(!dyck_is_marked(&bv("0011"), i).unwrap());
        }
        for n in 1..=10 {
            for x in enumerate_cube(n).unwrap() {
                let m = mark(&x);
                for i in 1..=n {
                    assert_eq!(dyck_is_marked(&x, i).unwrap(), m.is_marked(i), "{x} at {i}");
                }
            }
        }
    }

    #[test]
    fn majority_reduction_examples() {
        assert_eq!(majority_reduction(&bv("01101")).unwrap().to_string(), "0111111000001000");
        let ones = bv("11111");
        let r = majority_reduction(&ones).unwrap();
        assert_eq!(r.to_string(), format!("0{}{}", "1".repeat(5), "0".repeat(10)));
        // six unmarked zeros: psi keeps the first three, coordinate 1 stays 0
        assert!(!output_bit(BijectionKind::Psi, &r, 1).unwrap());
        assert!(majority(&ones).unwrap());
        assert!(matches!(majority_reduction(&bv("0110")), Err(Error::EvenLength(4))));
        for n in [1, 3, 5, 7, 9] {
            for x in enumerate_cube(n).unwrap() {
                let r = majority_reduction(&x).unwrap();
                assert_eq!(r.len(), 3 * n + 1);
                assert_eq!(output_bit(BijectionKind::Psi, &r, 1).unwrap(), !majority(&x).unwrap(), "{x}");
            }
        }
    }

    #[test]
    fn output_bits_and_influence() {
        assert!(output_bit(BijectionKind::Psi, &bv("0000"), 5).unwrap());
        assert!(output_bit(BijectionKind::Psi, &bv("1111"), 1).unwrap());
        assert!(output_bit(BijectionKind::Psi, &bv("1111"), 6).is_err());
        assert!(total_influence(6, CAP, |_| Ok(true)).unwrap().is_zero());
        // the dictator x_1 has influence exactly 1
        assert!(total_influence(6, CAP, |x| Ok(x.bit(1))).unwrap().is_one());
        let all = influences(BijectionKind::Psi, 6, CAP).unwrap();
        for (i, inf) in all.iter().enumerate() {
            assert_eq!(inf, &influence(BijectionKind::Psi, i + 1, 6, CAP).unwrap());
            assert!(*inf >= BigRational::zero());
        }
        assert!(influence(BijectionKind::Psi, 0, 6, CAP).is_err());
    }
}
