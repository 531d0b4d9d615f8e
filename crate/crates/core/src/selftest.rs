//! The acceptance criteria as runnable checks.
//!
//! Each check returns a pass/fail verdict and a one-line detail. Every
//! comparison is exact: maxima are integers and averages, probabilities and
//! ratios are rationals. The regression values below were produced by the
//! exhaustive sweeps and are frozen here.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{self, binomial, ChainCountTable};
use crate::bijections::{audit_bijection, psi, BallVector, BijectionKind};
use crate::bits::{enumerate_cube, BitVector};
use crate::chains::{chain_code, mark, mark_by_pair_deletion, mark_three_step, PairOrder};
use crate::cli;
use crate::error::{Error, Result};
use crate::metrics::{forward_stretch_exhaustive, inverse_stretch_exhaustive, pairwise_ratio_audit, transitivity_audit, SweepOptions};

/// Exact `avgStretch(φ⁻¹)` at `n = 8, 12, 16`, as `(n, numer, denom)`.
pub const PHI_INVERSE_AVERAGES: [(usize, u64, u64); 3] = [(8, 16, 9), (12, 24, 13), (16, 32, 17)];

/// Window for `avgStretch(naive) / √n` over even `n ∈ 4..=16`, as
/// `(numer, denom)` pairs. Observed range: 0.9864 to 1.0625.
pub const NAIVE_WINDOW: ((u64, u64), (u64, u64)) = ((49, 50), (107, 100));

/// Bound `C` on `max_i Pr[ψ_i(x) ≠ x_i] · √n`. The scaled maxima rise with
/// `n` (0.3919 at `n = 14`); extrapolating the `n = 12, 14` entries as
/// `L - α/n` gives `L ≈ 0.3989`, rounded up to 2/5.
pub const FLIP_CONSTANT: (u64, u64) = (2, 5);

pub const TRANSITIVITY_SEED: u64 = 7;
pub const TRANSITIVITY_PAIRS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, title: "psi is a bijection with max stretch <= 4 and inverse <= 5, even n <= 16" },
    Criterion { id: 2, title: "worked marking, chain and psi examples" },
    Criterion { id: 3, title: "phi max stretch = 3; pinned inverse averages trend to 2" },
    Criterion { id: 4, title: "naive max stretch = n; avg/sqrt(n) in pinned window" },
    Criterion { id: 5, title: "psi pairwise ratios in [1/5, 4] at n = 8" },
    Criterion { id: 6, title: "transitivity maps swap 20 seeded ball pairs, ratios in [1/20, 20]" },
    Criterion { id: 7, title: "chain and profile counts match enumeration, n <= 14" },
    Criterion { id: 8, title: "flip probability formula = enumeration, n <= 14; n = 16 under pinned constant" },
    Criterion { id: 9, title: "sum of influences = n * avgStretch(psi), even n <= 12" },
    Criterion { id: 10, title: "majority(x) = psi_1(r(x)), odd n <= 13" },
    Criterion { id: 11, title: "Dyck criterion agrees with marking, n <= 14" },
    Criterion { id: 12, title: "marking is order-independent; three-step marking agrees" },
    Criterion { id: 13, title: "CLI output is deterministic across runs and worker counts" },
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Runs one criterion. An error inside the check counts as a failure; only
/// an unknown id is an error.
pub fn run_criterion(id: u8, opts: SweepOptions) -> Result<CriterionOutcome> {
    let criterion = CRITERIA
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}; ids are 1..={}", CRITERIA.len())))?;
    let verdict = match id {
        1 => psi_stretch(opts),
        2 => worked_examples(),
        3 => phi_bounds(opts),
        4 => naive_baseline(opts),
        5 => pairwise(opts),
        6 => transitivity(opts),
        7 => counting(opts),
        8 => flip_probability(opts),
        9 => influence_identity(opts),
        10 => majority_reduction(),
        11 => dyck_equivalence(),
        12 => marking_orders(),
        13 => determinism(opts),
        _ => unreachable!("ids come from CRITERIA"),
    };
    let (passed, detail) = verdict.unwrap_or_else(|e| (false, format!("error: {e}")));
    Ok(CriterionOutcome { id, title: criterion.title, passed, detail })
}

pub fn run_all(opts: SweepOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.id, opts).expect("listed id")).collect()
}

type Verdict = Result<(bool, String)>;

fn big(r: Ratio<u64>) -> BigRational {
    BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

fn big_pair((p, q): (u64, u64)) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn bv(s: &str) -> BitVector {
    s.parse().expect("literal bit string")
}

fn psi_stretch(opts: SweepOptions) -> Verdict {
    let mut ok = true;
    let mut worst = (0, 0);
    for n in (2..=16).step_by(2) {
        let bijective = audit_bijection(BijectionKind::Psi, n, opts.cap)?.is_bijection();
        let fwd = forward_stretch_exhaustive(BijectionKind::Psi, n, opts)?.max_stretch;
        let inv = inverse_stretch_exhaustive(BijectionKind::Psi, n, opts)?.max_stretch;
        ok &= bijective && fwd <= 4 && inv <= 5;
        worst = (worst.0.max(fwd), worst.1.max(inv));
    }
    Ok((ok, format!("largest forward max {}, largest inverse max {}", worst.0, worst.1)))
}

fn worked_examples() -> Verdict {
    let x = bv("01100110");
    let marked = mark(&x);
    let code = chain_code(&x);
    let members: Vec<String> = code.members().iter().map(ToString::to_string).collect();
    let mut ok = marked.marked_mask().to_string() == "01111011"
        && code.to_string() == "_1100_10"
        && members == ["01100010", "01100110", "11100110"];
    let full_chain = [("0000", "00111"), ("0001", "01110"), ("0011", "01111"), ("0111", "11110"), ("1111", "11111")];
    for (input, expected) in full_chain {
        ok &= psi(&bv(input))?.to_string() == expected;
    }
    Ok((ok, format!("mark {marked}, code {code}, members {}", members.join(" "))))
}

fn phi_bounds(opts: SweepOptions) -> Verdict {
    let mut ok = true;
    for n in (4..=16).step_by(2) {
        ok &= audit_bijection(BijectionKind::Phi, n, opts.cap)?.is_bijection();
        ok &= forward_stretch_exhaustive(BijectionKind::Phi, n, opts)?.max_stretch == 3;
    }
    let two = BigRational::from_integer(2.into());
    let mut gaps = Vec::new();
    let mut observed = Vec::new();
    for (n, p, q) in PHI_INVERSE_AVERAGES {
        let avg = inverse_stretch_exhaustive(BijectionKind::Phi, n, opts)?.average.exact().expect("exhaustive");
        ok &= avg == Ratio::new(p, q);
        observed.push(format!("n={n}: {}/{}", avg.numer(), avg.denom()));
        gaps.push((big(avg) - &two).abs());
    }
    ok &= gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok((ok, format!("inverse averages {}", observed.join(", "))))
}

fn naive_baseline(opts: SweepOptions) -> Verdict {
    let (lo, hi) = (big_pair(NAIVE_WINDOW.0), big_pair(NAIVE_WINDOW.1));
    let mut ok = true;
    let mut range = (f64::INFINITY, 0.0f64);
    for n in (4..=16).step_by(2) {
        let report = forward_stretch_exhaustive(BijectionKind::Naive, n, opts)?;
        ok &= report.max_stretch == n as u64;
        let avg = big(report.average.exact().expect("exhaustive"));
        // closed form 1 + (n-1) C(n, n/2) / 2^n
        let middle = BigInt::from(binomial(n, (n / 2) as i64));
        let closed = BigRational::one() + BigRational::new(middle * BigInt::from(n - 1), BigInt::one() << n);
        ok &= avg == closed;
        let scaled_sq = &avg * &avg / BigRational::from_integer(n.into());
        ok &= &lo * &lo <= scaled_sq && scaled_sq <= &hi * &hi;
        let scaled = report.average.as_f64() / (n as f64).sqrt();
        range = (range.0.min(scaled), range.1.max(scaled));
    }
    Ok((ok, format!("avg/sqrt(n) in [{:.4}, {:.4}]", range.0, range.1)))
}

fn pairwise(opts: SweepOptions) -> Verdict {
    let audit = pairwise_ratio_audit(BijectionKind::Psi, 8, opts)?;
    let ok = audit.pairs == 256 * 255 / 2 && audit.min_ratio >= Ratio::new(1, 5) && audit.max_ratio <= Ratio::new(4, 1);
    Ok((
        ok,
        format!(
            "{} pairs, ratios in [{}/{}, {}/{}]",
            audit.pairs,
            audit.min_ratio.numer(),
            audit.min_ratio.denom(),
            audit.max_ratio.numer(),
            audit.max_ratio.denom()
        ),
    ))
}

fn random_ball(rng: &mut ChaCha8Rng, n: usize) -> Result<BallVector> {
    loop {
        let z = BitVector::random(n + 1, rng)?;
        if 2 * z.weight() > n {
            return BallVector::new(z);
        }
    }
}

fn transitivity(opts: SweepOptions) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(TRANSITIVITY_SEED);
    let mut ok = true;
    let (mut lo, mut hi) = (Ratio::new(u64::MAX, 1), Ratio::new(0, 1));
    for _ in 0..TRANSITIVITY_PAIRS {
        let x = random_ball(&mut rng, 8)?;
        let y = random_ball(&mut rng, 8)?;
        let audit = transitivity_audit(&x, &y, opts)?;
        ok &= audit.maps_x_to_y && audit.maps_y_to_x;
        ok &= audit.ratios.min_ratio >= Ratio::new(1, 20) && audit.ratios.max_ratio <= Ratio::new(20, 1);
        lo = lo.min(audit.ratios.min_ratio);
        hi = hi.max(audit.ratios.max_ratio);
    }
    Ok((ok, format!("seed {TRANSITIVITY_SEED}, ratios in [{}/{}, {}/{}]", lo.numer(), lo.denom(), hi.numer(), hi.denom())))
}

fn counting(opts: SweepOptions) -> Verdict {
    let mut ok = true;
    for n in 1..=14 {
        let enumerated = analysis::chain_count_enumerated(n, opts.cap)?;
        ok &= enumerated == ChainCountTable::from_formula(n);
        ok &= enumerated.covered_vertices() == BigUint::one() << n;

        let profiles = analysis::unmarked_profile_enumerated(n, opts.cap)?;
        ok &= profiles.values().sum::<u64>() == 1 << n;
        for a in 0..=n {
            let mut zeros = 0u64;
            for b in 0..=n - a {
                let seen = profiles.get(&(a, b)).copied().unwrap_or(0);
                zeros += seen;
                match analysis::unmarked_profile_count(n, a, b) {
                    Ok(count) => ok &= count == seen.into(),
                    Err(_) => ok &= seen == 0,
                }
            }
            ok &= analysis::unmarked_zeros_count(n, a)? == zeros.into();
        }
    }
    let fig = analysis::chain_count_enumerated(4, opts.cap)?;
    let table: Vec<String> = fig.nonzero().map(|(t, c)| format!("{t}:{c}")).collect();
    ok &= table == ["1:2", "3:3", "5:1"];
    Ok((ok, format!("n=4 chain lengths {{{}}}", table.join(", "))))
}

fn flip_probability(opts: SweepOptions) -> Verdict {
    let mut ok = true;
    for n in (2..=14).step_by(2) {
        let counts = analysis::flip_counts_exhaustive(n, opts.cap)?;
        for i in 1..=n {
            let exact = analysis::flip_probability_exact(n, i)?;
            ok &= exact == BigRational::new(counts[i - 1].into(), BigInt::one() << n);
        }
    }
    let c = big_pair(FLIP_CONSTANT);
    let bound_sq = &c * &c;
    let n = 16;
    let mut max = BigRational::zero();
    for i in 1..=n {
        max = max.max(analysis::flip_probability_exact(n, i)?);
    }
    ok &= &max * &max * BigRational::from_integer(n.into()) <= bound_sq;
    let scaled = analysis::rational_to_f64(&max) * (n as f64).sqrt();
    Ok((ok, format!("n=16 max Pr*sqrt(n) = {scaled:.6} <= {}/{}", FLIP_CONSTANT.0, FLIP_CONSTANT.1)))
}

fn influence_identity(opts: SweepOptions) -> Verdict {
    let mut ok = true;
    for n in (2..=12).step_by(2) {
        let total: BigRational = analysis::influences(BijectionKind::Psi, n, opts.cap)?.iter().sum();
        let avg = big(forward_stretch_exhaustive(BijectionKind::Psi, n, opts)?.average.exact().expect("exhaustive"));
        ok &= total == avg * BigRational::from_integer(n.into());
    }
    Ok((ok, "checked exactly for n = 2, 4, ..., 12".to_string()))
}

fn majority_reduction() -> Verdict {
    let mut mismatches = 0u64;
    let mut complement_holds = true;
    let mut checked = 0u64;
    for n in (1..=13).step_by(2) {
        for x in enumerate_cube(n)? {
            let first = analysis::output_bit(BijectionKind::Psi, &analysis::majority_reduction(&x)?, 1)?;
            let majority = analysis::majority(&x)?;
            mismatches += u64::from(first != majority);
            complement_holds &= first != majority;
            checked += 1;
        }
    }
    Ok((
        mismatches == 0,
        format!("{mismatches} of {checked} inputs differ; psi_1(r(x)) = not majority(x) on all inputs: {complement_holds}"),
    ))
}

fn dyck_equivalence() -> Verdict {
    let mut ok = true;
    for n in 1..=14 {
        for x in enumerate_cube(n)? {
            let marked = mark(&x);
            for i in 1..=n {
                ok &= analysis::dyck_is_marked(&x, i)? == marked.is_marked(i);
            }
        }
    }
    Ok((ok, "all (x, i) for n = 1..=14".to_string()))
}

fn marking_orders() -> Verdict {
    let mut ok = true;
    for n in 1..=14 {
        for x in enumerate_cube(n)? {
            let direct = mark(&x);
            ok &= mark_by_pair_deletion(&x, PairOrder::LeftmostFirst) == direct;
            ok &= mark_by_pair_deletion(&x, PairOrder::RightmostFirst) == direct;
            if n <= 12 {
                for i in 1..=n {
                    ok &= mark_three_step(&x, i)? == direct;
                }
            }
        }
    }
    Ok((ok, "orders agree for n <= 14, three-step for n <= 12".to_string()))
}

fn determinism(opts: SweepOptions) -> Verdict {
    let cap = opts.cap.to_string();
    let run = |extra: &[&str]| {
        let mut args = vec!["cubeball", "--cap", cap.as_str(), "--allow-large"];
        args.extend_from_slice(extra);
        cli::execute(args)
    };
    let sample = ["verify", "--bijection", "psi", "--n", "16", "--mode", "sample", "--samples", "200000", "--seed", "7"];
    let first = run(&sample);
    let mut ok = first.code == 0 && !first.stdout.is_empty();
    ok &= run(&sample) == first;
    ok &= run(&[&["--workers", "1"][..], &sample].concat()) == first;
    ok &= run(&[&["--workers", "8"][..], &sample].concat()) == first;

    let exhaustive = ["verify", "--bijection", "psi", "--direction", "inv", "--n", "14"];
    let one = run(&[&["--workers", "1"][..], &exhaustive].concat());
    let eight = run(&[&["--workers", "8"][..], &exhaustive].concat());
    ok &= one.code == 0 && one == eight;
    Ok((ok, "sampled seed 7 repeated and on 1/8 workers; exhaustive on 1/8 workers".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_consecutive() {
        for (k, c) in CRITERIA.iter().enumerate() {
            assert_eq!(usize::from(c.id), k + 1);
        }
        assert!(run_criterion(14, SweepOptions::default()).is_err());
    }

    #[test]
    fn worked_examples_pass() {
        assert!(run_criterion(2, SweepOptions::default()).unwrap().passed);
    }
}
