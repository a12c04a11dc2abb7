mod common;

use proptest::prelude::*;

use smacofss::data::{from_mds_data, make_mds_data, DistTriangle};
use smacofss::monotone::{normalize, pava};

use common::*;

#[test]
fn pava_matches_exhaustive_search() {
    let err = pava_max_error(1000, 1);
    assert!(err <= 1e-10, "max error {err:e}");
}

#[test]
fn stress_never_increases() {
    let d = stress_descent(200, 2, 1e-12);
    assert_eq!(
        d.violations, 0,
        "worst increase {:e} over {} steps",
        d.worst_increase, d.steps
    );
    assert_eq!(d.runs, 1600);
}

#[test]
fn penrose_conditions() {
    let r = penrose_max_residual(100, 3);
    assert!(r <= 1e-8, "max residual {r:e}");
}

#[test]
fn torgerson_recovers_euclidean_distances() {
    let e = torgerson_recovery_error(50, 4);
    assert!(e <= 1e-8, "max distance error {e:e}");
}

#[test]
fn tie_approaches_agree_without_ties() {
    let e = tie_equivalence_error(30, 5);
    assert!(e <= 1e-12, "max difference {e:e}");
}

#[test]
fn shepard_fitlines_sum_to_stress() {
    let e = shepard_stress_error(30, 6);
    assert!(e <= 1e-9, "max gap {e:e}");
}

fn weighted_vector(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_len).prop_flat_map(|m| {
        (
            prop::collection::vec(-10.0f64..10.0, m),
            prop::collection::vec(0.01f64..5.0, m),
        )
    })
}

proptest! {
    #[test]
    fn pava_is_monotone_and_keeps_the_weighted_sum((y, w) in weighted_vector(40)) {
        let fit = pava(&y, &w);
        prop_assert!(fit.windows(2).all(|p| p[0] <= p[1] + 1e-12));
        let before: f64 = y.iter().zip(&w).map(|(a, b)| a * b).sum();
        let after: f64 = fit.iter().zip(&w).map(|(a, b)| a * b).sum();
        prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before.abs()));
    }

    #[test]
    fn pava_leaves_sorted_input_alone(mut y in prop::collection::vec(-5.0f64..5.0, 1..30)) {
        y.sort_by(f64::total_cmp);
        let fit = pava(&y, &vec![1.0; y.len()]);
        prop_assert_eq!(fit, y);
    }

    #[test]
    fn normalize_gives_unit_weighted_sum_of_squares((y, w) in weighted_vector(20)) {
        let mut v: Vec<f64> = y.iter().map(|x| x.abs() + 0.1).collect();
        normalize(&mut v, &w).unwrap();
        let ss: f64 = v.iter().zip(&w).map(|(a, b)| b * a * a).sum();
        prop_assert!((ss - 1.0).abs() < 1e-12);
    }

    #[test]
    fn data_round_trips_through_triangles(
        n in 2usize..9,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let m = n * (n - 1) / 2;
        let cells: Vec<Option<f64>> = (0..m)
            .map(|_| {
                use rand::Rng;
                r.gen_bool(0.8).then(|| r.gen_range(0..4) as f64)
            })
            .collect();
        prop_assume!(cells.iter().any(Option::is_some));
        let t = DistTriangle::new(n, cells).unwrap();
        let data = make_mds_data(&t, None).unwrap();
        prop_assert!(data.validate().is_ok());
        prop_assert!(data.delta.windows(2).all(|p| p[0] <= p[1]));
        prop_assert_eq!(data.blocks.iter().sum::<usize>(), data.ndat);
        let (back, w) = from_mds_data(&data).unwrap();
        prop_assert_eq!(&back, &t);
        for (d, w) in back.values().iter().zip(w.values()) {
            prop_assert_eq!(d.is_some(), *w == Some(1.0));
        }
    }
}
