use cubeball::analysis::output_bit;
use cubeball::bijections::{psi, psi_inverse, BallVector, BijectionKind};
use cubeball::bits::{enumerate_cube, BitVector};
use cubeball::chains::{chain_code, mark, position};
use cubeball::metrics::{stretch_exhaustive, stretch_sampled, Direction, SweepOptions};
use proptest::prelude::*;

#[test]
fn marked_coordinates_pass_through_psi() {
    for n in [12, 14] {
        for x in enumerate_cube(n).unwrap() {
            let z = psi(&x).unwrap();
            let marked = mark(&x);
            for i in marked.marked_coordinates() {
                assert_eq!(z.bits().bit(i), x.bit(i), "{x} at {i}");
            }
        }
    }
}

#[test]
fn psi_moves_halfway_up_every_chain() {
    for x in enumerate_cube(14).unwrap() {
        let p = position(&x);
        let z = psi(&x).unwrap();
        let (head, extra) = z.bits().split_last().unwrap();
        assert_eq!(chain_code(&head), p.code);
        assert_eq!(head.weight(), p.top() - p.ell / 2);
        assert_eq!(extra, p.ell % 2 == 0);
    }
}

#[test]
fn every_algorithm_round_trips_at_sixteen() {
    for kind in BijectionKind::ALL {
        for x in enumerate_cube(16).unwrap().step_by(7) {
            let z = kind.forward(&x).unwrap();
            assert_eq!(kind.inverse(z.bits()).unwrap(), x);
        }
    }
}

#[test]
fn sampled_average_brackets_exact() {
    // five standard errors; the sampled run is seeded, so this is a fixed check
    const WIDTH: f64 = 5.0;
    let opts = SweepOptions::default();
    for direction in [Direction::Forward, Direction::Inverse] {
        let exact = stretch_exhaustive(BijectionKind::Psi, direction, 14, opts).unwrap().average.as_f64();
        let sampled = stretch_sampled(BijectionKind::Psi, direction, 14, 200_000, 11, opts).unwrap();
        let cubeball::metrics::AverageStretch::Estimate { mean, std_error, .. } = sampled.average else { panic!() };
        assert!((mean - exact).abs() <= WIDTH * std_error, "{direction}: {mean} vs {exact}");
        assert!(sampled.max_stretch <= if direction == Direction::Forward { 4 } else { 5 });
    }
}

fn even_vector(max_half: usize) -> impl Strategy<Value = BitVector> {
    (1..=max_half).prop_flat_map(|h| prop::collection::vec(any::<bool>(), 2 * h)).prop_map(|b| BitVector::from_bools(&b).unwrap())
}

proptest! {
    #[test]
    fn psi_round_trips_in_high_dimension(x in even_vector(100)) {
        let z = psi(&x).unwrap();
        prop_assert_eq!(psi_inverse(z.bits()).unwrap(), x);
    }

    #[test]
    fn psi_stretch_bound_in_high_dimension(x in even_vector(100), pick in any::<prop::sample::Index>()) {
        let i = pick.index(x.len()) + 1;
        let y = x.flip_at(i).unwrap();
        let d = psi(&x).unwrap().bits().distance(psi(&y).unwrap().bits()).unwrap();
        prop_assert!(d <= 4);
    }

    #[test]
    fn psi_inverse_stretch_bound_in_high_dimension(x in even_vector(100), pick in any::<prop::sample::Index>()) {
        let z = psi(&x).unwrap().into_bits();
        let i = pick.index(z.len()) + 1;
        let w = z.flip_at(i).unwrap();
        if let Ok(w) = BallVector::new(w) {
            let d = x.distance(&psi_inverse(w.bits()).unwrap()).unwrap();
            prop_assert!(d <= 5);
        }
    }

    #[test]
    fn marked_bits_pass_through_in_high_dimension(x in even_vector(100)) {
        let marked = mark(&x);
        for i in marked.marked_coordinates() {
            prop_assert_eq!(output_bit(BijectionKind::Psi, &x, i).unwrap(), x.bit(i));
        }
    }
}
