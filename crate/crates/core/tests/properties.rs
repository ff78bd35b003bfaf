use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use quanta_stats::continuum::{
    doubling_ladder, finite_n_energy_cdf, limit_convergence, moments, EnergySystem, Moments,
};
use quanta_stats::exactnum::{ratio, BigRat};
use quanta_stats::occupancy::{
    configurations, enumerate_level_states, gf_mean_occupancy, gf_total_configurations, level_pmf,
    mean_occupancy, state_probability, total_configurations, DistTable,
};
use quanta_stats::partitions::{partition_count, restricted_partition_count};
use quanta_stats::quanta::{cross_route_check, quanta_pmf};

#[test]
fn state_probabilities_sum_to_one() {
    for n in 1..=8 {
        for s in 0..=8 {
            let total: BigRat = enumerate_level_states(n, s)
                .unwrap()
                .iter()
                .map(|st| state_probability(st).unwrap())
                .sum();
            assert!(total.is_one(), "N={n} s={s}");
        }
    }
}

#[test]
fn three_way_totals() {
    for n in 1..=8 {
        for s in 0..=8 {
            let summed: BigInt = enumerate_level_states(n, s).unwrap().iter().map(configurations).sum();
            let closed = total_configurations(n, s).unwrap();
            assert_eq!(summed, closed);
            assert_eq!(gf_total_configurations(n, s).unwrap(), closed);
        }
    }
}

#[test]
fn level_count_is_restricted_partition_count() {
    for n in 0..=12 {
        for s in 0..=12 {
            let len = enumerate_level_states(n, s).unwrap().len();
            assert_eq!(BigInt::from(len), restricted_partition_count(s, n), "N={n} s={s}");
            if n >= s {
                assert_eq!(BigInt::from(len), partition_count(s));
            }
        }
    }
}

#[test]
fn cross_route_sweep() {
    for n in 1..=40 {
        for s in 0..=40 {
            let r = cross_route_check(n, s).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}

#[test]
fn limit_ladders_decrease() {
    for mean in [ratio(1, 1), ratio(2, 1), ratio(5, 2)] {
        let rungs = limit_convergence(&mean, 10, &doubling_ladder(5)).unwrap();
        assert!(rungs.windows(2).all(|w| w[1].tv < w[0].tv), "{mean}: {rungs:?}");
    }
}

#[test]
fn finite_density_normalised() {
    for n in 2..=40 {
        let sys = EnergySystem::new(n, 3.0).unwrap();
        assert!((finite_n_energy_cdf(&sys, 3.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(finite_n_energy_cdf(&sys, 0.0).unwrap(), 0.0);
    }
}

proptest! {
    #[test]
    fn pmf_normalised_and_monotone(n in 1u64..60, s in 0u64..60) {
        let t = level_pmf(n, s).unwrap();
        prop_assert!(t.total().is_one());
        prop_assert_eq!(t.entries().len() as u64, s + 1);
        if n >= 2 {
            prop_assert!(t.entries().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn pmf_is_mean_occupancy_over_n(n in 1u64..30, s in 0u64..30) {
        let t = level_pmf(n, s).unwrap();
        for k in 0..=s {
            prop_assert_eq!(t.get(k), mean_occupancy(n, s, k).unwrap() / BigRat::from_integer(n.into()));
        }
    }

    #[test]
    fn gf_mean_matches_closed_form(n in 1u64..12, s in 0u64..12, k in 0u64..12) {
        prop_assume!(k <= s);
        prop_assert_eq!(gf_mean_occupancy(n, s, k).unwrap(), mean_occupancy(n, s, k).unwrap());
    }

    #[test]
    fn routes_agree(n in 1u64..=40, s in 0u64..=40) {
        let (a, b) = (level_pmf(n, s).unwrap(), quanta_pmf(n, s).unwrap());
        prop_assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn moments_identities(n in 1u64..=30, s in 0u64..=30) {
        let m = moments(n, s).unwrap();
        prop_assert_eq!(&m.variance, &(&m.second - &m.mean * &m.mean));
        prop_assert!(m.variance >= BigRat::from_integer(0.into()));
        prop_assert_eq!(m, Moments::from_table(&level_pmf(n, s).unwrap()));
    }

    #[test]
    fn table_json_round_trip(n in 1u64..20, s in 0u64..20) {
        let t = quanta_pmf(n, s).unwrap();
        let back: DistTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }
}
