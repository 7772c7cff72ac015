mod common;

use common::{brute_prior, strings, HashMachine};
use proptest::prelude::*;
use qsp_core::machine::{Machine, Sk2};
use qsp_core::prior::{laplace_fraction, laplace_rule, PriorMethod, PriorParams, SpeedPrior};
use qsp_core::rng::seeded;

fn machines() -> Vec<Box<dyn Machine>> {
    vec![Box::new(Sk2), Box::new(HashMachine)]
}

#[test]
fn classical_prior_equals_double_loop() {
    for m in machines() {
        let prior = SpeedPrior::new(m.as_ref(), PriorParams::default());
        for n in 1..=4 {
            for x in strings(n) {
                let got = prior.classical(&x).unwrap().value;
                let want = brute_prior(m.as_ref(), &x, &[]);
                assert!(
                    (got - want).abs() < 1e-15,
                    "{} x={x:?}: {got} vs {want}",
                    m.id()
                );
            }
        }
    }
}

#[test]
fn hash_machine_prior_is_not_trivial() {
    let prior = SpeedPrior::new(&HashMachine, PriorParams::default());
    let nonzero = (1..=3)
        .flat_map(strings)
        .filter(|x| prior.classical(x).unwrap().value > 0.0)
        .count();
    assert!(nonzero >= 7, "only {nonzero} strings with positive prior");
}

#[test]
fn quasi_classical_equals_double_loop() {
    let mut rng = seeded(0);
    for m in machines() {
        let prior = SpeedPrior::new(m.as_ref(), PriorParams::default());
        for nx in 1..=2 {
            for ny in 0..=2 {
                for x in strings(nx) {
                    for y in strings(ny) {
                        let got = prior
                            .quasi(&x, &y, PriorMethod::Classical, &mut rng)
                            .unwrap()
                            .value;
                        let want = brute_prior(m.as_ref(), &x, &y);
                        assert!((got - want).abs() < 1e-15, "{} x={x:?} y={y:?}", m.id());
                    }
                }
            }
        }
    }
}

#[test]
fn quantum_estimates_stay_within_bounds_on_hash_machine() {
    let prior = SpeedPrior::new(
        &HashMachine,
        PriorParams {
            precision: 6,
            ..PriorParams::default()
        },
    );
    for x in strings(2) {
        let exact = prior.classical(&x).unwrap().value;
        let mut hits_q = 0;
        let mut hits_d = 0;
        for seed in 0..50 {
            let mut rng = seeded(seed);
            let q = prior.qcount(&x, &mut rng).unwrap();
            hits_q += usize::from((q.value - exact).abs() <= q.error_bound);
            let d = prior.dj(&x, &mut rng).unwrap();
            hits_d += usize::from((d.value - exact).abs() <= d.error_bound);
        }
        assert!(hits_q >= 45, "x={x:?} qcount {hits_q}/50");
        assert!(hits_d >= 45, "x={x:?} dj {hits_d}/50");
    }
}

proptest! {
    #[test]
    fn laplace_bounds(n in 0u64..1_000_000, frac in 0.0f64..=1.0) {
        let ones = (frac * n as f64).floor() as u64;
        let p = laplace_rule(ones, n).unwrap();
        prop_assert!(p > 0.0 && p < 1.0);
        prop_assert_eq!(laplace_fraction(ones, n).unwrap(), (ones + 1, n + 2));
        if ones < n {
            prop_assert!(laplace_rule(ones + 1, n).unwrap() > p);
        }
    }

    #[test]
    fn conditional_is_ratio(y in prop::collection::vec(any::<bool>(), 1..3), x in prop::collection::vec(any::<bool>(), 1..3)) {
        let prior = SpeedPrior::new(&HashMachine, PriorParams::default());
        let mut rng = seeded(1);
        let den = prior.classical(&x).unwrap().value;
        let xy: Vec<bool> = x.iter().chain(&y).copied().collect();
        let num = prior.classical(&xy).unwrap().value;
        match prior.conditional(&y, &x, PriorMethod::Classical, &mut rng) {
            Ok(c) => prop_assert!((c.value - num / den).abs() < 1e-12),
            Err(_) => prop_assert!(den <= 0.0),
        }
    }
}

#[test]
fn laplace_rejects_impossible_counts() {
    assert!(laplace_rule(3, 2).is_err());
}
