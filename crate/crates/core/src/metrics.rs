//! Stretch of a bijection and of its inverse.
//!
//! For `f : {0,1}^n → B` the forward stretch of an edge `(x, x + e_i)` is
//! `distance(f(x), f(x + e_i))`. `maxStretch` is the largest such value and
//! `avgStretch` the mean over uniform `x` and `i ∈ [n]`. Every edge is seen
//! twice in that expectation, so averaging over unordered edges gives the
//! same number.
//!
//! The inverse is measured on the subgraph of `{0,1}^{n+1}` induced by the
//! ball: edges `(z, z + e_i)` with both endpoints in `B`, `i ∈ [n+1]`, each
//! unordered edge weighted equally.
//!
//! Exhaustive sweeps accumulate integer sums and report an exact rational
//! mean. They shard the domain into fixed blocks regardless of how many
//! workers run, and merge `(max, witness, sum, count)` in block order, so
//! reports are identical for every worker count. Sampled sweeps use
//! ChaCha8 with one stream per block of samples, which keeps them
//! reproducible for a given seed under the same rule.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bijections::{BallVector, BijectionKind, TransitivityMap};
use crate::bits::{BitVector, EdgeId, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

const SHARD: u64 = 1 << 12;
const SAMPLE_BLOCK: u64 = 1 << 14;
const ABSENT: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Forward => "fwd",
            Direction::Inverse => "inv",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fwd" | "forward" => Ok(Direction::Forward),
            "inv" | "inverse" => Ok(Direction::Inverse),
            other => Err(Error::Parse(format!("unknown direction {other:?} (expected fwd or inv)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parallelism and size limits for a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Worker threads; 0 means rayon's global pool.
    pub workers: usize,
    /// Upper bound on enumerated domain elements (vertex-direction pairs for
    /// stretch sweeps, vertex pairs for pairwise audits).
    pub cap: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { workers: 0, cap: DEFAULT_ENUMERATION_CAP }
    }
}

impl SweepOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self { workers, ..Self::default() }
    }

    fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        if self.workers == 0 {
            return Ok(job());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        Ok(pool.install(job))
    }

    fn check_cap(&self, what: String, count: u128) -> Result<()> {
        if count > u128::from(self.cap) {
            return Err(Error::CapExceeded { what, cap: self.cap });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AverageStretch {
    /// `total / edges`, exact.
    Exact { total: u64, edges: u64 },
    Estimate { mean: f64, std_error: f64, samples: u64, seed: u64 },
}

impl AverageStretch {
    pub fn as_f64(&self) -> f64 {
        match *self {
            AverageStretch::Exact { total, edges } => total as f64 / edges as f64,
            AverageStretch::Estimate { mean, .. } => mean,
        }
    }

    /// The exact mean; `None` for estimates.
    pub fn exact(&self) -> Option<Ratio<u64>> {
        match *self {
            AverageStretch::Exact { total, edges } => Some(Ratio::new(total, edges)),
            AverageStretch::Estimate { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StretchReport {
    pub kind: BijectionKind,
    pub direction: Direction,
    pub n: usize,
    pub mode: Mode,
    pub max_stretch: u64,
    /// An edge attaining `max_stretch`. In exhaustive mode this is the
    /// lexicographically smallest such edge with the witness vertex taken
    /// as the endpoint holding 0 at the coordinate.
    pub max_witness: Option<EdgeId>,
    pub average: AverageStretch,
    /// Unordered edges (exhaustive) or samples drawn (sampled).
    pub edges_considered: u64,
}

impl StretchReport {
    /// Recomputes the stretch of `max_witness`.
    pub fn recheck_witness(&self) -> Result<Option<u64>> {
        let Some(edge) = &self.max_witness else { return Ok(None) };
        let other = edge.neighbor();
        let d = match self.direction {
            Direction::Forward => {
                let a = self.kind.forward(&edge.vertex)?;
                let b = self.kind.forward(&other)?;
                a.bits().distance(b.bits())?
            }
            Direction::Inverse => {
                let a = self.kind.inverse(&edge.vertex)?;
                let b = self.kind.inverse(&other)?;
                a.distance(&b)?
            }
        };
        Ok(Some(d as u64))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Tally {
    max: u64,
    // (vertex index, coordinate), smallest among maximisers
    witness: Option<(u64, usize)>,
    total: u64,
    sum_sq: u128,
    count: u64,
}

impl Tally {
    const EMPTY: Tally = Tally { max: 0, witness: None, total: 0, sum_sq: 0, count: 0 };

    fn record(&mut self, d: u64, vertex: u64, coordinate: usize) {
        self.total += d;
        self.sum_sq += u128::from(d * d);
        self.count += 1;
        let better = match (d.cmp(&self.max), self.witness) {
            (_, None) => true,
            (Ordering::Greater, _) => true,
            (Ordering::Equal, Some(w)) => (vertex, coordinate) < w,
            _ => false,
        };
        if better {
            self.max = d;
            self.witness = Some((vertex, coordinate));
        }
    }

    fn merge(self, other: Tally) -> Tally {
        let (max, witness) = match (self.witness, other.witness) {
            (None, _) => (other.max, other.witness),
            (_, None) => (self.max, self.witness),
            (Some(a), Some(b)) => match self.max.cmp(&other.max) {
                Ordering::Greater => (self.max, Some(a)),
                Ordering::Less => (other.max, Some(b)),
                Ordering::Equal => (self.max, Some(a.min(b))),
            },
        };
        Tally {
            max,
            witness,
            total: self.total + other.total,
            sum_sq: self.sum_sq + other.sum_sq,
            count: self.count + other.count,
        }
    }
}

fn shards(size: u64) -> Vec<(u64, u64)> {
    (0..size.div_ceil(SHARD)).map(|s| (s * SHARD, ((s + 1) * SHARD).min(size))).collect()
}

/// `f(x)` as an index of `{0,1}^{n+1}`, for every `x` of `{0,1}^n`.
pub(crate) fn forward_table(kind: BijectionKind, n: usize) -> Result<Vec<u64>> {
    let size = 1u64 << n;
    let blocks: Vec<Result<Vec<u64>>> = shards(size)
        .into_par_iter()
        .map(|(lo, hi)| {
            (lo..hi)
                .map(|x| {
                    let z = kind.forward(&BitVector::from_index(n, x)?)?;
                    Ok(z.bits().to_index().expect("n < 64"))
                })
                .collect()
        })
        .collect();
    let mut table = Vec::with_capacity(size as usize);
    for block in blocks {
        table.extend(block?);
    }
    Ok(table)
}

/// `f⁻¹(z)` for every `z` of `{0,1}^{n+1}`; [`ABSENT`] outside the ball.
fn inverse_table(kind: BijectionKind, n: usize) -> Result<Vec<u64>> {
    let size = 1u64 << (n + 1);
    let blocks: Vec<Result<Vec<u64>>> = shards(size)
        .into_par_iter()
        .map(|(lo, hi)| {
            (lo..hi)
                .map(|z| {
                    if 2 * (z.count_ones() as usize) <= n {
                        return Ok(ABSENT);
                    }
                    let x = kind.inverse(&BitVector::from_index(n + 1, z)?)?;
                    Ok(x.to_index().expect("n < 64"))
                })
                .collect()
        })
        .collect();
    let mut table = Vec::with_capacity(size as usize);
    for block in blocks {
        table.extend(block?);
    }
    Ok(table)
}

fn check_even(n: usize) -> Result<()> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    Ok(())
}

/// Sweeps every edge `(v, v + e_i)` of `{0,1}^len` with `v_i = 0` and both
/// endpoints present in `table`, measuring distance between table entries.
fn sweep_edges(table: &[u64], len: usize) -> Tally {
    let parts: Vec<Tally> = shards(table.len() as u64)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut tally = Tally::EMPTY;
            for v in lo..hi {
                let image = table[v as usize];
                if image == ABSENT {
                    continue;
                }
                for i in 1..=len {
                    let bit = 1u64 << (len - i);
                    if v & bit != 0 {
                        continue;
                    }
                    let other = table[(v | bit) as usize];
                    if other == ABSENT {
                        continue;
                    }
                    tally.record(u64::from((image ^ other).count_ones()), v, i);
                }
            }
            tally
        })
        .collect();
    parts.into_iter().fold(Tally::EMPTY, Tally::merge)
}

fn exhaustive_report(kind: BijectionKind, direction: Direction, n: usize, tally: Tally, len: usize) -> Result<StretchReport> {
    let max_witness = match tally.witness {
        Some((v, i)) => Some(EdgeId::new(BitVector::from_index(len, v)?, i)?),
        None => None,
    };
    Ok(StretchReport {
        kind,
        direction,
        n,
        mode: Mode::Exhaustive,
        max_stretch: tally.max,
        max_witness,
        average: AverageStretch::Exact { total: tally.total, edges: tally.count },
        edges_considered: tally.count,
    })
}

pub fn forward_stretch_exhaustive(kind: BijectionKind, n: usize, opts: SweepOptions) -> Result<StretchReport> {
    check_even(n)?;
    opts.check_cap(format!("{n}·2^{n} vertex-direction pairs"), (n as u128) << n.min(120))?;
    opts.install(|| {
        let table = forward_table(kind, n)?;
        exhaustive_report(kind, Direction::Forward, n, sweep_edges(&table, n), n)
    })?
}

pub fn inverse_stretch_exhaustive(kind: BijectionKind, n: usize, opts: SweepOptions) -> Result<StretchReport> {
    check_even(n)?;
    opts.check_cap(format!("{}·2^{} vertex-direction pairs", n + 1, n + 1), ((n + 1) as u128) << (n + 1).min(120))?;
    opts.install(|| {
        let table = inverse_table(kind, n)?;
        exhaustive_report(kind, Direction::Inverse, n, sweep_edges(&table, n + 1), n + 1)
    })?
}

pub fn stretch_exhaustive(kind: BijectionKind, direction: Direction, n: usize, opts: SweepOptions) -> Result<StretchReport> {
    match direction {
        Direction::Forward => forward_stretch_exhaustive(kind, n, opts),
        Direction::Inverse => inverse_stretch_exhaustive(kind, n, opts),
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

struct SampleTally {
    max: u64,
    witness: Option<EdgeId>,
    total: u64,
    sum_sq: u128,
    count: u64,
}

fn sampled_report(
    kind: BijectionKind,
    direction: Direction,
    n: usize,
    samples: u64,
    seed: u64,
    opts: SweepOptions,
    draw: impl Fn(&mut ChaCha8Rng) -> Result<(EdgeId, u64)> + Sync,
) -> Result<StretchReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let blocks: Vec<Result<SampleTally>> = opts.install(|| {
        (0..samples.div_ceil(SAMPLE_BLOCK))
            .into_par_iter()
            .map(|block| {
                let mut rng = block_rng(seed, block);
                let count = SAMPLE_BLOCK.min(samples - block * SAMPLE_BLOCK);
                let mut t = SampleTally { max: 0, witness: None, total: 0, sum_sq: 0, count: 0 };
                for _ in 0..count {
                    let (edge, d) = draw(&mut rng)?;
                    t.total += d;
                    t.sum_sq += u128::from(d * d);
                    t.count += 1;
                    if t.witness.is_none() || d > t.max {
                        t.max = d;
                        t.witness = Some(edge);
                    }
                }
                Ok(t)
            })
            .collect()
    })?;
    let mut acc = SampleTally { max: 0, witness: None, total: 0, sum_sq: 0, count: 0 };
    for block in blocks {
        let t = block?;
        acc.total += t.total;
        acc.sum_sq += t.sum_sq;
        acc.count += t.count;
        if acc.witness.is_none() || t.max > acc.max {
            acc.max = t.max;
            acc.witness = t.witness;
        }
    }
    let count = acc.count as f64;
    let mean = acc.total as f64 / count;
    let variance = if acc.count > 1 {
        ((acc.sum_sq as f64 - count * mean * mean) / (count - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(StretchReport {
        kind,
        direction,
        n,
        mode: Mode::Sampled,
        max_stretch: acc.max,
        max_witness: acc.witness,
        average: AverageStretch::Estimate { mean, std_error: (variance / count).sqrt(), samples, seed },
        edges_considered: acc.count,
    })
}

/// Monte-Carlo `avgStretch`: `samples` uniform `(x, i)` draws.
///
/// `max_stretch` is the sample maximum only.
pub fn forward_stretch_sampled(kind: BijectionKind, n: usize, samples: u64, seed: u64, opts: SweepOptions) -> Result<StretchReport> {
    check_even(n)?;
    sampled_report(kind, Direction::Forward, n, samples, seed, opts, |rng| {
        let x = BitVector::random(n, rng)?;
        let i = rng.gen_range(1..=n);
        let y = x.flip_at(i)?;
        let d = kind.forward(&x)?.bits().distance(kind.forward(&y)?.bits())?;
        Ok((EdgeId::new(x, i)?, d as u64))
    })
}

/// Monte-Carlo inverse stretch over uniform induced ball edges, drawn by
/// rejection: uniform `(z, i)` over `{0,1}^{n+1} × [n+1]`, kept when `z` is
/// in the ball and `z_i = 0`.
pub fn inverse_stretch_sampled(kind: BijectionKind, n: usize, samples: u64, seed: u64, opts: SweepOptions) -> Result<StretchReport> {
    check_even(n)?;
    sampled_report(kind, Direction::Inverse, n, samples, seed, opts, |rng| loop {
        let z = BitVector::random(n + 1, rng)?;
        let i = rng.gen_range(1..=n + 1);
        if 2 * z.weight() <= n || z.bit(i) {
            continue;
        }
        let w = z.flip_at(i)?;
        let d = kind.inverse(&z)?.distance(&kind.inverse(&w)?)?;
        return Ok((EdgeId::new(z, i)?, d as u64));
    })
}

pub fn stretch_sampled(
    kind: BijectionKind,
    direction: Direction,
    n: usize,
    samples: u64,
    seed: u64,
    opts: SweepOptions,
) -> Result<StretchReport> {
    match direction {
        Direction::Forward => forward_stretch_sampled(kind, n, samples, seed, opts),
        Direction::Inverse => inverse_stretch_sampled(kind, n, samples, seed, opts),
    }
}

/// Extreme distance ratios over all unordered pairs of a finite point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioAudit {
    pub pairs: u64,
    pub min_ratio: Ratio<u64>,
    pub min_witness: (BitVector, BitVector),
    pub max_ratio: Ratio<u64>,
    pub max_witness: (BitVector, BitVector),
}

#[derive(Clone, Copy)]
struct RatioTally {
    min: (Ratio<u64>, (u64, u64)),
    max: (Ratio<u64>, (u64, u64)),
    pairs: u64,
}

impl RatioTally {
    fn merge(a: Option<RatioTally>, b: Option<RatioTally>) -> Option<RatioTally> {
        match (a, b) {
            (None, t) | (t, None) => t,
            (Some(a), Some(b)) => Some(RatioTally {
                min: if (b.min.0, b.min.1) < (a.min.0, a.min.1) { b.min } else { a.min },
                max: if b.max.0 > a.max.0 || (b.max.0 == a.max.0 && b.max.1 < a.max.1) { b.max } else { a.max },
                pairs: a.pairs + b.pairs,
            }),
        }
    }
}

/// Ratios `distance(image[p], image[q]) / distance(p, q)` over all `p < q`
/// among `points`, given as indices.
fn ratio_sweep(points: &[u64], image: impl Fn(usize) -> u64 + Sync) -> Option<RatioTally> {
    let parts: Vec<Option<RatioTally>> = (0..points.len())
        .into_par_iter()
        .map(|a| {
            let mut tally: Option<RatioTally> = None;
            for b in a + 1..points.len() {
                let (p, q) = (points[a], points[b]);
                let r = Ratio::new(u64::from((image(a) ^ image(b)).count_ones()), u64::from((p ^ q).count_ones()));
                let one = RatioTally { min: (r, (p, q)), max: (r, (p, q)), pairs: 1 };
                tally = RatioTally::merge(tally, Some(one));
            }
            tally
        })
        .collect();
    parts.into_iter().fold(None, RatioTally::merge)
}

fn ratio_audit(tally: RatioTally, len: usize) -> Result<RatioAudit> {
    let v = |i: u64| BitVector::from_index(len, i);
    Ok(RatioAudit {
        pairs: tally.pairs,
        min_ratio: tally.min.0,
        min_witness: (v(tally.min.1 .0)?, v(tally.min.1 .1)?),
        max_ratio: tally.max.0,
        max_witness: (v(tally.max.1 .0)?, v(tally.max.1 .1)?),
    })
}

/// Extreme values of `distance(f(x), f(y)) / distance(x, y)` over all
/// unordered pairs `x ≠ y` of `{0,1}^n`.
pub fn pairwise_ratio_audit(kind: BijectionKind, n: usize, opts: SweepOptions) -> Result<RatioAudit> {
    check_even(n)?;
    if n >= 32 {
        return Err(Error::CapExceeded { what: format!("pairs of 2^{n} vertices"), cap: opts.cap });
    }
    opts.check_cap(format!("4^{n} vertex pairs"), 1u128 << (2 * n))?;
    opts.install(|| {
        let table = forward_table(kind, n)?;
        let points: Vec<u64> = (0..1u64 << n).collect();
        let tally = ratio_sweep(&points, |a| table[a]).expect("at least two vertices");
        ratio_audit(tally, n)
    })?
}

/// Checks the swapping automorphism of the ball built from `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityAudit {
    pub x: BallVector,
    pub y: BallVector,
    pub maps_x_to_y: bool,
    pub maps_y_to_x: bool,
    pub ratios: RatioAudit,
}

pub fn transitivity_audit(x: &BallVector, y: &BallVector, opts: SweepOptions) -> Result<TransitivityAudit> {
    let f = TransitivityMap::new(x, y)?;
    let n = x.n();
    let len = n + 1;
    if len >= 32 {
        return Err(Error::CapExceeded { what: format!("pairs of ball vertices over {len} coordinates"), cap: opts.cap });
    }
    opts.check_cap(format!("4^{n} ball vertex pairs"), 1u128 << (2 * n))?;
    opts.install(|| {
        let points: Vec<u64> = (0..1u64 << len).filter(|z| 2 * z.count_ones() as usize > n).collect();
        let images = points
            .iter()
            .map(|&z| {
                let ball = BallVector::new(BitVector::from_index(len, z)?)?;
                Ok(f.apply(&ball)?.bits().to_index().expect("len < 64"))
            })
            .collect::<Result<Vec<u64>>>()?;
        let tally = ratio_sweep(&points, |a| images[a]).expect("ball has at least two vertices");
        Ok(TransitivityAudit {
            x: x.clone(),
            y: y.clone(),
            maps_x_to_y: &f.apply(x)? == y,
            maps_y_to_x: &f.apply(y)? == x,
            ratios: ratio_audit(tally, len)?,
        })
    })?
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SweepOptions {
        SweepOptions::default()
    }

    /// Direct double loop over ordered `(x, i)` pairs, no tables.
    fn brute_forward(kind: BijectionKind, n: usize) -> (u64, Ratio<u64>) {
        let mut max = 0;
        let mut total = 0u64;
        for x in crate::bits::enumerate_cube(n).unwrap() {
            for i in 1..=n {
                let y = x.flip_at(i).unwrap();
                let d = kind.forward(&x).unwrap().bits().distance(kind.forward(&y).unwrap().bits()).unwrap() as u64;
                max = max.max(d);
                total += d;
            }
        }
        (max, Ratio::new(total, (n as u64) << n))
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        for n in [2, 4, 6, 8] {
            for kind in BijectionKind::ALL {
                let report = forward_stretch_exhaustive(kind, n, opts()).unwrap();
                let (max, avg) = brute_forward(kind, n);
                assert_eq!(report.max_stretch, max);
                assert_eq!(report.average.exact().unwrap(), avg);
                assert_eq!(report.recheck_witness().unwrap(), Some(max));
                assert_eq!(report.edges_considered, (n as u64) << (n - 1));
            }
        }
    }

    #[test]
    fn known_maxima() {
        for n in [2, 4, 6, 8, 10] {
            let psi = forward_stretch_exhaustive(BijectionKind::Psi, n, opts()).unwrap();
            assert!(psi.max_stretch <= 4);
            assert!(psi.average.as_f64() <= psi.max_stretch as f64);
            let inv = inverse_stretch_exhaustive(BijectionKind::Psi, n, opts()).unwrap();
            assert!(inv.max_stretch <= 5);
            assert_eq!(inv.recheck_witness().unwrap(), Some(inv.max_stretch));
            let naive = forward_stretch_exhaustive(BijectionKind::Naive, n, opts()).unwrap();
            assert_eq!(naive.max_stretch, n as u64);
        }
    }

    #[test]
    fn inverse_edges_are_induced_ball_edges() {
        // n = 4: count z in {0,1}^5 with |z| >= 3 and directions holding 0
        let expected: u64 = (0..32u64)
            .filter(|z| z.count_ones() >= 3)
            .map(|z| 5 - u64::from(z.count_ones()))
            .sum();
        let report = inverse_stretch_exhaustive(BijectionKind::Psi, 4, opts()).unwrap();
        assert_eq!(report.edges_considered, expected);
        let min_is_positive = (0..32u64).filter(|z| z.count_ones() >= 3).all(|z| {
            let zv = BitVector::from_index(5, z).unwrap();
            (1..=5).filter(|&i| !zv.bit(i)).all(|i| {
                let a = crate::bijections::psi_inverse(&zv).unwrap();
                let b = crate::bijections::psi_inverse(&zv.flip_at(i).unwrap()).unwrap();
                a.distance(&b).unwrap() >= 1
            })
        });
        assert!(min_is_positive);
    }

    #[test]
    fn reports_do_not_depend_on_workers() {
        for direction in [Direction::Forward, Direction::Inverse] {
            let one = stretch_exhaustive(BijectionKind::Phi, direction, 10, SweepOptions::with_workers(1)).unwrap();
            let many = stretch_exhaustive(BijectionKind::Phi, direction, 10, SweepOptions::with_workers(8)).unwrap();
            assert_eq!(one, many);
        }
        let one = forward_stretch_sampled(BijectionKind::Psi, 40, 50_000, 3, SweepOptions::with_workers(1)).unwrap();
        let many = forward_stretch_sampled(BijectionKind::Psi, 40, 50_000, 3, SweepOptions::with_workers(8)).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn sampled_is_seeded_and_consistent() {
        let exact = forward_stretch_exhaustive(BijectionKind::Psi, 4, opts()).unwrap().average.as_f64();
        let a = forward_stretch_sampled(BijectionKind::Psi, 4, 100_000, 11, opts()).unwrap();
        let b = forward_stretch_sampled(BijectionKind::Psi, 4, 100_000, 11, opts()).unwrap();
        assert_eq!(a, b);
        let AverageStretch::Estimate { mean, std_error, samples, seed } = a.average else { panic!() };
        assert_eq!((samples, seed), (100_000, 11));
        assert!((mean - exact).abs() <= 4.0 * std_error, "{mean} vs {exact} ± {std_error}");
        assert_eq!(a.recheck_witness().unwrap(), Some(a.max_stretch));
        let c = forward_stretch_sampled(BijectionKind::Psi, 4, 100_000, 12, opts()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_inverse_tracks_exhaustive() {
        let exact = inverse_stretch_exhaustive(BijectionKind::Psi, 8, opts()).unwrap().average.as_f64();
        let s = inverse_stretch_sampled(BijectionKind::Psi, 8, 200_000, 5, opts()).unwrap();
        let AverageStretch::Estimate { mean, std_error, .. } = s.average else { panic!() };
        assert!((mean - exact).abs() <= 4.0 * std_error);
        assert!(s.max_stretch <= 5);
    }

    #[test]
    fn pairwise_small() {
        let audit = pairwise_ratio_audit(BijectionKind::Psi, 4, opts()).unwrap();
        assert_eq!(audit.pairs, 16 * 15 / 2);
        assert!(audit.min_ratio >= Ratio::new(1, 5) && audit.max_ratio <= Ratio::from_integer(4));
        let (p, q) = &audit.max_witness;
        let r = Ratio::new(
            crate::bijections::psi(p).unwrap().bits().distance(crate::bijections::psi(q).unwrap().bits()).unwrap() as u64,
            p.distance(q).unwrap() as u64,
        );
        assert_eq!(r, audit.max_ratio);
    }

    #[test]
    fn caps_and_parity() {
        assert!(matches!(forward_stretch_exhaustive(BijectionKind::Psi, 5, opts()), Err(Error::OddDimension(5))));
        let tight = SweepOptions { workers: 0, cap: 100 };
        assert!(matches!(forward_stretch_exhaustive(BijectionKind::Psi, 8, tight), Err(Error::CapExceeded { .. })));
        assert!(matches!(pairwise_ratio_audit(BijectionKind::Psi, 16, opts()), Err(Error::CapExceeded { .. })));
        assert!(forward_stretch_sampled(BijectionKind::Psi, 4, 0, 1, opts()).is_err());
    }
}
