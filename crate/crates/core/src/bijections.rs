//! Bijections from the cube `{0,1}^n` onto the Hamming ball
//! `B = {z ∈ {0,1}^{n+1} : |z| > n/2}`, `n` even.
//!
//! * [`psi`] moves each vertex halfway up its chain: the vertex at distance
//!   `ℓ` from the top of its chain goes to the vertex at distance `⌊ℓ/2⌋`,
//!   with the extra bit recording the parity of `ℓ`. Both directions have
//!   constant stretch.
//! * [`phi`] reflects the lower half of each chain onto the upper half.
//!   Forward stretch is exactly 3; the inverse is only good on average.
//! * [`naive`] complements light vertices. Its stretch grows with `n`.
//!
//! All maps go through [`position`] and [`chain_member`], so one call costs
//! a single marking pass plus one chain fill.

use std::fmt;
use std::str::FromStr;

use crate::bits::{cube_size, BitVector};
use crate::chains::{chain_member, position};
use crate::error::{Error, Result};

/// A vertex of the Hamming ball over `n + 1` coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BallVector(BitVector);

impl BallVector {
    /// Checks that `z` has odd length `n + 1 ≥ 3` and weight above `n/2`.
    pub fn new(z: BitVector) -> Result<Self> {
        let n = cube_dimension_of_ball(&z)?;
        if 2 * z.weight() <= n {
            return Err(Error::NotInBall { vector: z.to_string(), half_n: n / 2 });
        }
        Ok(Self(z))
    }

    /// Cube dimension `n`; the vector itself has `n + 1` coordinates.
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    pub fn into_bits(self) -> BitVector {
        self.0
    }
}

impl AsRef<BitVector> for BallVector {
    fn as_ref(&self) -> &BitVector {
        &self.0
    }
}

impl fmt::Display for BallVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for BallVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BallVector({})", self.0)
    }
}

impl FromStr for BallVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }
}

fn cube_dimension_of_ball(z: &BitVector) -> Result<usize> {
    let n = z.len() - 1;
    if n == 0 || n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    Ok(n)
}

fn check_even(x: &BitVector) -> Result<usize> {
    let n = x.len();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    Ok(n)
}

/// Which bijection to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BijectionKind {
    Psi,
    Phi,
    Naive,
}

impl BijectionKind {
    pub const ALL: [BijectionKind; 3] = [BijectionKind::Psi, BijectionKind::Phi, BijectionKind::Naive];

    pub fn forward(self, x: &BitVector) -> Result<BallVector> {
        match self {
            BijectionKind::Psi => psi(x),
            BijectionKind::Phi => phi(x),
            BijectionKind::Naive => naive(x),
        }
    }

    pub fn inverse(self, z: &BitVector) -> Result<BitVector> {
        match self {
            BijectionKind::Psi => psi_inverse(z),
            BijectionKind::Phi => phi_inverse(z),
            BijectionKind::Naive => naive_inverse(z),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BijectionKind::Psi => "psi",
            BijectionKind::Phi => "phi",
            BijectionKind::Naive => "naive",
        }
    }
}

impl fmt::Display for BijectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BijectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psi" => Ok(BijectionKind::Psi),
            "phi" => Ok(BijectionKind::Phi),
            "naive" => Ok(BijectionKind::Naive),
            other => Err(Error::Parse(format!("unknown bijection {other:?} (expected psi, phi or naive)"))),
        }
    }
}

/// `ψ(x)`: with `x = c_j` on its chain `c_k..c_{n-k}`, returns
/// `c_{(n-k+j)/2} ∘ 1` when `j ≡ n-k (mod 2)` and `c_{(n-k+j+1)/2} ∘ 0`
/// otherwise.
pub fn psi(x: &BitVector) -> Result<BallVector> {
    check_even(x)?;
    let p = position(x);
    let target = p.top() - p.ell / 2;
    let member = chain_member(&p.code, target)?;
    Ok(BallVector(member.push(p.ell % 2 == 0)))
}

/// `ψ⁻¹(x ∘ b)`: with `x = c_j`, returns `c_{2j-(n-k)}` for `b = 1` and
/// `c_{2j-(n-k)-1}` for `b = 0`.
pub fn psi_inverse(z: &BitVector) -> Result<BitVector> {
    let ball = BallVector::new(z.clone())?;
    let (x, b) = ball.0.split_last()?;
    let p = position(&x);
    // ball membership gives 2j >= n, hence both levels are >= k
    let level = 2 * p.j - p.top() - usize::from(!b);
    chain_member(&p.code, level)
}

/// `φ(x)`: `c_{n-j} ∘ 1` when `j ≤ n/2`, else `x ∘ 0`.
pub fn phi(x: &BitVector) -> Result<BallVector> {
    let n = check_even(x)?;
    let p = position(x);
    if 2 * p.j <= n {
        Ok(BallVector(chain_member(&p.code, n - p.j)?.push(true)))
    } else {
        Ok(BallVector(x.push(false)))
    }
}

/// Inverse of [`phi`]. A trailing 0 with `|x| ≤ n/2` is reported as
/// [`Error::NotInImage`]; a trailing 1 with `|x| < n/2` as
/// [`Error::NotInBall`].
pub fn phi_inverse(z: &BitVector) -> Result<BitVector> {
    let n = cube_dimension_of_ball(z)?;
    let (x, b) = z.split_last()?;
    let j = x.weight();
    if b {
        if 2 * j < n {
            return Err(Error::NotInBall { vector: z.to_string(), half_n: n / 2 });
        }
        let p = position(&x);
        chain_member(&p.code, n - j)
    } else if 2 * j <= n {
        Err(Error::NotInImage { vector: z.to_string() })
    } else {
        Ok(x)
    }
}

/// `flip(x) ∘ 1` when `|x| ≤ n/2`, else `x ∘ 0`.
pub fn naive(x: &BitVector) -> Result<BallVector> {
    let n = check_even(x)?;
    if 2 * x.weight() <= n {
        Ok(BallVector(x.flip_all().push(true)))
    } else {
        Ok(BallVector(x.push(false)))
    }
}

pub fn naive_inverse(z: &BitVector) -> Result<BitVector> {
    let ball = BallVector::new(z.clone())?;
    let (w, b) = ball.0.split_last()?;
    Ok(if b { w.flip_all() } else { w })
}

/// The ball automorphism `f(z) = ψ(ψ⁻¹(z) ⊕ ψ⁻¹(x) ⊕ ψ⁻¹(y))`, which swaps
/// `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityMap {
    shift: BitVector,
}

impl TransitivityMap {
    pub fn new(x: &BallVector, y: &BallVector) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::LengthMismatch { left: x.bits().len(), right: y.bits().len() });
        }
        let shift = psi_inverse(x.bits())?.xor(&psi_inverse(y.bits())?)?;
        Ok(Self { shift })
    }

    pub fn apply(&self, z: &BallVector) -> Result<BallVector> {
        psi(&psi_inverse(z.bits())?.xor(&self.shift)?)
    }
}

pub fn transitivity_map(x: &BallVector, y: &BallVector, z: &BallVector) -> Result<BallVector> {
    TransitivityMap::new(x, y)?.apply(z)
}

/// Outcome of checking a bijection on every vertex of `{0,1}^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionAudit {
    pub kind: BijectionKind,
    pub n: usize,
    pub domain_size: u64,
    /// Vertices of the ball that were hit.
    pub image_size: u64,
    /// Images with weight `≤ n/2`.
    pub outside_ball: u64,
    /// Images hit more than once, counted with multiplicity minus one.
    pub collisions: u64,
    /// `x` with `f⁻¹(f(x)) ≠ x`.
    pub forward_round_trip_failures: u64,
    /// Ball vertices `z` with `f(f⁻¹(z)) ≠ z` or `f⁻¹(z)` failing.
    pub inverse_round_trip_failures: u64,
}

impl BijectionAudit {
    pub fn is_bijection(&self) -> bool {
        self.outside_ball == 0
            && self.collisions == 0
            && self.image_size == self.domain_size
            && self.forward_round_trip_failures == 0
            && self.inverse_round_trip_failures == 0
    }
}

/// Exhaustively checks that `kind` maps `{0,1}^n` onto the ball and that
/// both round trips are the identity.
pub fn audit_bijection(kind: BijectionKind, n: usize, cap: u64) -> Result<BijectionAudit> {
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let domain_size = cube_size(n, cap)?;
    let ball_len = n + 1;
    let mut hits = vec![0u8; 1usize << ball_len];
    let mut audit = BijectionAudit {
        kind,
        n,
        domain_size,
        image_size: 0,
        outside_ball: 0,
        collisions: 0,
        forward_round_trip_failures: 0,
        inverse_round_trip_failures: 0,
    };
    for index in 0..domain_size {
        let x = BitVector::from_index(n, index)?;
        let z = kind.forward(&x)?;
        if 2 * z.bits().weight() <= n {
            audit.outside_ball += 1;
        }
        let slot = &mut hits[z.bits().to_index().expect("n < 64") as usize];
        if *slot > 0 {
            audit.collisions += 1;
        } else {
            audit.image_size += 1;
        }
        *slot = slot.saturating_add(1);
        if kind.inverse(z.bits()).ok().as_ref() != Some(&x) {
            audit.forward_round_trip_failures += 1;
        }
    }
    for index in 0..(1u64 << ball_len) {
        let z = BitVector::from_index(ball_len, index)?;
        if 2 * z.weight() <= n {
            continue;
        }
        let back = kind.inverse(&z).and_then(|x| kind.forward(&x));
        if back.map(BallVector::into_bits).ok().as_ref() != Some(&z) {
            audit.inverse_round_trip_failures += 1;
        }
    }
    Ok(audit)
}
