use std::f64::consts::TAU;

use obswave_core::{ArcSet, PiRational, Scalar};
use proptest::prelude::*;

const DEN: i128 = 24;
/// Cells of width `π/96` never straddle an endpoint on the `π/24` grid.
const CELLS: i128 = 192;

fn exact_set() -> impl Strategy<Value = ArcSet<PiRational>> {
    prop::collection::vec((0..2 * DEN, 0..=2 * DEN), 0..5).prop_map(|arcs| {
        arcs.into_iter()
            .map(|(a, l)| ArcSet::from_start_len(PiRational::new(a, DEN), PiRational::new(l, DEN)))
            .fold(ArcSet::empty(), |acc, s| acc.union(&s))
    })
}

fn cell_mid(i: i128) -> PiRational {
    PiRational::new(2 * i + 1, CELLS)
}

/// Measure by counting covered cells.
fn grid_measure(pred: impl Fn(PiRational) -> bool) -> PiRational {
    let hits = (0..CELLS).filter(|&i| pred(cell_mid(i))).count() as i128;
    PiRational::new(2 * hits, CELLS)
}

proptest! {
    #[test]
    fn measure_matches_grid(a in exact_set()) {
        prop_assert_eq!(a.measure(), grid_measure(|x| a.contains(x)));
    }

    #[test]
    fn boolean_ops_match_pointwise(a in exact_set(), b in exact_set()) {
        prop_assert_eq!(a.union(&b).measure(), grid_measure(|x| a.contains(x) || b.contains(x)));
        prop_assert_eq!(a.intersection(&b).measure(), grid_measure(|x| a.contains(x) && b.contains(x)));
        prop_assert_eq!(a.difference(&b).measure(), grid_measure(|x| a.contains(x) && !b.contains(x)));
        prop_assert_eq!(a.symmetric_difference(&b).measure(), grid_measure(|x| a.contains(x) != b.contains(x)));
        prop_assert_eq!(a.complement().measure(), grid_measure(|x| !a.contains(x)));
    }

    #[test]
    fn union_is_commutative_and_associative(a in exact_set(), b in exact_set(), c in exact_set()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.intersection(&b), b.intersection(&a));
    }

    #[test]
    fn normalization_is_idempotent(a in exact_set()) {
        let again = ArcSet::from_spans(a.spans().to_vec());
        prop_assert_eq!(&again, &a);
        prop_assert_eq!(a.union(&a), a.clone());
        prop_assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn inclusion_exclusion(a in exact_set(), b in exact_set()) {
        prop_assert_eq!(a.union(&b).measure() + a.intersection(&b).measure(), a.measure() + b.measure());
        prop_assert!(a.measure() <= PiRational::two_pi());
    }

    #[test]
    fn split_preserves_measure(a in exact_set(), cut in 0..2 * DEN) {
        let total = a
            .split_at(PiRational::new(cut, DEN))
            .iter()
            .fold(PiRational::zero(), |acc, s| acc + s.len());
        prop_assert_eq!(total, a.measure());
    }

    #[test]
    fn float_mode_agrees_with_exact(a in exact_set()) {
        prop_assert!((a.to_f64().measure() - a.measure().to_f64()).abs() < 1e-12);
    }
}

#[test]
fn float_arcs_against_dense_grid() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    const N: usize = 1_000_000;
    for _ in 0..5 {
        let arcs: Vec<(f64, f64)> = (0..4)
            .map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(0.0..3.0)))
            .collect();
        let set = arcs
            .iter()
            .fold(ArcSet::empty(), |acc, &(a, l)| acc.union(&ArcSet::from_start_len(a, l)));
        let hits = (0..N)
            .filter(|&i| {
                let x = (i as f64 + 0.5) * TAU / N as f64;
                arcs.iter().any(|&(a, l)| (x - a).rem_euclid(TAU) < l)
            })
            .count();
        let grid = hits as f64 * TAU / N as f64;
        // Each of the eight endpoints can misplace at most one cell.
        assert!(
            (set.measure() - grid).abs() <= 8.0 * TAU / N as f64,
            "{} vs {grid}",
            set.measure()
        );
    }
}

#[test]
fn full_and_empty_edges() {
    let full = ArcSet::<PiRational>::full();
    assert!(full.covers_circle());
    assert!(full.complement().is_empty());
    let whole = ArcSet::from_start_len(PiRational::new(3, 2), PiRational::two_pi());
    assert!(whole.is_full());
    let nothing = ArcSet::from_start_len(PiRational::new(1, 3), PiRational::zero());
    assert!(nothing.is_empty());
}
