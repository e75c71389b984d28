mod support;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sullivan::algebra::LowerGrading;
use sullivan::fixtures::FIXTURES;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check(cases: u32, body: impl Fn(u64) -> Result<(), String>) {
    runner(cases)
        .run(&any::<u64>(), |seed| {
            body(seed).map_err(TestCaseError::fail)
        })
        .unwrap();
}

#[test]
fn koszul_signs_and_leibniz_rule() {
    check(1000, |seed| {
        support::koszul_and_leibniz(&mut ChaCha8Rng::seed_from_u64(seed))
    });
}

#[test]
fn sparse_cohomology_matches_dense_oracle() {
    check(50, |seed| {
        let c = support::random_cdga(&mut ChaCha8Rng::seed_from_u64(seed), 14);
        support::cohomology_agrees(&c, 12)
    });
}

#[test]
fn slice_differential_squares_to_zero() {
    let models = support::slice_models();
    let strategy = (0..models.len(), 0u32..=2, -3i32..=2, 5u32..=7);
    runner(20)
        .run(&strategy, |(k, p, q, top)| {
            let (name, alg, d) = &models[k];
            support::slice_square(alg, d, p, q, top)
                .map_err(|e| TestCaseError::fail(format!("{name}: {e}")))
        })
        .unwrap();
}

#[test]
fn every_fixture_squares_to_zero() {
    for f in FIXTURES {
        let doc = f.load().unwrap();
        let c = doc.realize(doc.max_generator_degree() + 2).unwrap();
        c.check_differential(LowerGrading::Ignored)
            .unwrap_or_else(|v| panic!("{}: {}", f.name, v.into_error(&c.algebra)));
    }
}

proptest! {
    #![proptest_config(Config { cases: 64, failure_persistence: None, ..Config::default() })]

    #[test]
    fn dense_rank_of_a_square_is_bounded(n in 1usize..5, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<sullivan::Q>> = (0..n)
            .map(|_| (0..n).map(|_| sullivan::Q::from_integer(rng.gen_range(-2i64..=2).into())).collect())
            .collect();
        let r = support::rank(rows.clone());
        prop_assert!(r <= n);
        let doubled: Vec<Vec<sullivan::Q>> = rows.iter().chain(rows.iter()).cloned().collect();
        prop_assert_eq!(support::rank(doubled), r);
    }
}
