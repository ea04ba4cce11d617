use proptest::prelude::*;

use fracperc::analytic::{ModelParams, Target};
use fracperc::geometry::{Axis, Connectivity};
use fracperc::montecarlo::{run_experiment, spanning_probability, write_csv, Experiment, Functional, McEstimate};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn merging_is_associative_and_commutative(
        a in prop::collection::vec(-1e3f64..1e3, 0..40),
        b in prop::collection::vec(-1e3f64..1e3, 0..40),
        c in prop::collection::vec(-1e3f64..1e3, 0..40),
    ) {
        let [ea, eb, ec] = [&a, &b, &c].map(|v| v.iter().copied().collect::<McEstimate>());
        let left = ea.merge(&eb).merge(&ec);
        let right = ea.merge(&eb.merge(&ec));
        let swapped = ec.merge(&ea).merge(&eb);
        prop_assert_eq!(left.count, right.count);
        for other in [right, swapped] {
            prop_assert!(close(left.mean, other.mean) || (left.mean - other.mean).abs() < 1e-12);
            prop_assert!(close(left.m2, other.m2) || (left.m2 - other.m2).abs() < 1e-9);
        }
    }
}

#[test]
fn stderr_shrinks_like_inverse_root_count() {
    let params = ModelParams::new(2, 0.7, 2).unwrap();
    let run = |samples| {
        let exp = Experiment { functionals: vec![Functional::V0], targets: vec![Target::F], ..Experiment::new(params.clone(), 5, samples, 12) };
        run_experiment(&exp).unwrap()[0].estimate.stderr()
    };
    let ratio = run(1000) / run(16_000);
    assert!((3.2..4.8).contains(&ratio), "ratio {ratio}");
}

#[test]
fn spanning_probability_is_monotone_under_shared_coupling() {
    let mut prev = 0.0;
    let mut first = None;
    for i in 0..10 {
        let p = 0.5 + 0.05 * i as f64;
        let params = ModelParams::new(2, p, 2).unwrap();
        let est = spanning_probability(&params, 10, 64, 5, Connectivity::Eight, Axis::Horizontal).unwrap();
        assert!(est.mean >= prev, "p={p}: {} < {prev}", est.mean);
        first.get_or_insert(est.mean);
        prev = est.mean;
    }
    assert!(prev > first.unwrap());
}

#[test]
fn four_connectivity_spans_less_often() {
    let params = ModelParams::new(3, 0.8, 2).unwrap();
    let four = spanning_probability(&params, 4, 400, 2, Connectivity::Four, Axis::Vertical).unwrap();
    let eight = spanning_probability(&params, 4, 400, 2, Connectivity::Eight, Axis::Vertical).unwrap();
    assert!(four.mean <= eight.mean);
}

#[test]
fn rescaled_column_only_above_critical_mean() {
    let exp = Experiment::new(ModelParams::new(2, 0.2, 2).unwrap(), 4, 50, 1);
    assert!(run_experiment(&exp).unwrap().iter().all(|r| r.rescaled_mean.is_none()));
    let exp = Experiment::new(ModelParams::new(2, 0.6, 2).unwrap(), 4, 50, 1);
    for row in run_experiment(&exp).unwrap() {
        let k = row.functional.order().unwrap() as i32;
        let scale = 2f64.powi(4 * k) / 2.4f64.powi(4);
        assert!(close(row.rescaled_mean.unwrap(), scale * row.estimate.mean) || row.estimate.mean == 0.0);
    }
}

#[test]
fn csv_floats_round_trip() {
    let exp = Experiment::new(ModelParams::new(3, 0.7, 2).unwrap(), 3, 40, 8);
    let rows = run_experiment(&exp).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    for (line, row) in text.lines().skip(1).zip(&rows) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[5].parse::<f64>().unwrap(), row.estimate.mean);
        assert_eq!(fields[6].parse::<f64>().unwrap(), row.estimate.stderr());
    }
}

#[test]
fn line_experiments() {
    let exp = Experiment {
        functionals: vec![Functional::V0, Functional::V1],
        ..Experiment::new(ModelParams::new(3, 0.8, 1).unwrap(), 5, 2000, 4)
    };
    let rows = run_experiment(&exp).unwrap();
    let v1 = rows.iter().find(|r| r.functional == Functional::V1 && r.target == Target::F).unwrap();
    let expect = 0.8f64.powi(5);
    assert!((v1.estimate.mean - expect).abs() < 4.0 * v1.estimate.stderr());
}
