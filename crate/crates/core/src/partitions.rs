//! Integer partition counts and the harmonic integral representation of
//! `p_s`.
//!
//! The integral
//!
//! ```text
//! p_s = (2/π) ∫₀^{π/2} Π_{κ=1}^{s} sin((s+κ)x)/sin(κx) · cos((s²−2s)x) dx
//! ```
//!
//! has an integrand that is a trigonometric polynomial: every zero of a
//! denominator `sin(κx)` is a removable singularity. The quadrature splits
//! panels at all of those zeros so that no node ever lands on one, and the
//! reported error estimate carries the rounding that the near-singular
//! factors amplify. Past s ≈ 20 that rounding dominates in double precision
//! and the result is reported as non-converged instead of returned.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, AdaptiveOptions};

/// Error estimates at or above this make [`partition_integral`] fail.
pub const CONVERGENCE_THRESHOLD: f64 = 0.4;

/// Hard cap on accepted panels.
pub const MAX_PANELS: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadReport {
    pub s: u64,
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels: usize,
    /// Smallest distance from any evaluated node to a zero of any `sin(κx)`.
    pub min_denominator_distance: f64,
    pub converged: bool,
}

/// Partition numbers `p_0..=p_s` by Euler's pentagonal-number recurrence.
pub fn partition_counts(s: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(s + 1);
    p.push(BigInt::one());
    for n in 1..=s {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[n - g1].clone();
            if g2 <= n {
                term += &p[n - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p
}

/// `p_s`, with `p_0 = 1`.
pub fn partition_count(s: u64) -> BigInt {
    partition_counts(s as usize).pop().expect("non-empty")
}

/// Partitions of `s` into at most `max_parts` parts (equivalently, with no
/// part larger than `max_parts`).
pub fn restricted_partition_count(s: u64, max_parts: u64) -> BigInt {
    let s = s as usize;
    let k = (max_parts as usize).min(s);
    let mut ways = vec![BigInt::zero(); s + 1];
    ways[0] = BigInt::one();
    for part in 1..=k {
        for n in part..=s {
            let add = ways[n - part].clone();
            ways[n] += add;
        }
    }
    ways.swap_remove(s)
}

/// Evaluates the product of `sin((s+κ)x)/sin(κx)` over κ = 1..=s times
/// `cos((s²−2s)x)`, every factor in double precision.
pub fn partition_integrand(s: u64, x: f64) -> Result<f64> {
    check_domain(x)?;
    integrand_with_error(s, x).map(|(v, _)| v)
}

fn check_domain(x: f64) -> Result<()> {
    if !x.is_finite() || !(0.0..=FRAC_PI_2).contains(&x) {
        return Err(Error::OutOfDomain { x });
    }
    Ok(())
}

/// Value plus a first-order bound on its absolute rounding error, built
/// from the condition number `|a·cot a|` of each sine and `|a·tan a|` of
/// the cosine.
fn integrand_with_error(s: u64, x: f64) -> Result<(f64, f64)> {
    let eps = f64::EPSILON;
    let mut product = 1.0;
    let mut rel = 0.0;
    for kappa in 1..=s {
        let b = kappa as f64 * x;
        let den = b.sin();
        if den == 0.0 {
            return Err(Error::SingularNode { kappa, x });
        }
        let a = (s + kappa) as f64 * x;
        let num = a.sin();
        product *= num / den;
        rel += 4.0 + cot_condition(a, num) + cot_condition(b, den);
    }
    let c_arg = (s * s) as f64 * x - (2 * s) as f64 * x;
    let c = c_arg.cos();
    let value = product * c;
    let err = eps * (value.abs() * rel + product.abs() * (2.0 + c_arg.abs() * c_arg.sin().abs()));
    Ok((value, err))
}

fn cot_condition(arg: f64, sin_arg: f64) -> f64 {
    (arg * arg.cos() / sin_arg).abs()
}

/// Zeros `mπ/κ` of `sin(κx)`, κ = 1..=s, lying strictly inside (0, π/2),
/// together with both endpoints; sorted and deduplicated.
fn panel_breaks(s: u64) -> Vec<f64> {
    let mut breaks = vec![0.0, FRAC_PI_2];
    for kappa in 2..=s {
        for m in 1.. {
            // mπ/κ < π/2  ⇔  2m < κ
            if 2 * m >= kappa {
                break;
            }
            breaks.push(m as f64 * PI / kappa as f64);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0));
    breaks
}

fn denominator_distance(s: u64, x: f64) -> f64 {
    (1..=s)
        .map(|kappa| {
            let step = PI / kappa as f64;
            let nearest = (x / step).round() * step;
            (x - nearest).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `(2/π) ∫₀^{π/2}` of [`partition_integrand`] by panel-split adaptive
/// Gauss–Legendre. `panels_hint` equal subdivisions seed every gap between
/// consecutive denominator zeros.
///
/// Returns [`Error::NonConvergence`] with the full report when the error
/// estimate is not below [`CONVERGENCE_THRESHOLD`].
pub fn partition_integral(s: u64, panels_hint: usize) -> Result<QuadReport> {
    if s == 0 {
        return Err(Error::InvalidParameter(
            "the integral representation needs s >= 1".into(),
        ));
    }
    let breaks = panel_breaks(s);
    let min_dist = Cell::new(f64::INFINITY);
    let singular = Cell::new(false);
    let outcome = quad::integrate(
        |x| {
            min_dist.set(min_dist.get().min(denominator_distance(s, x)));
            match integrand_with_error(s, x) {
                Ok(v) => v,
                Err(_) => {
                    singular.set(true);
                    (0.0, f64::INFINITY)
                }
            }
        },
        &breaks,
        panels_hint,
        AdaptiveOptions {
            abs_tol: 1e-9,
            rel_tol: 1e-13,
            max_panels: MAX_PANELS,
        },
    );
    let scale = 2.0 / PI;
    let report = QuadReport {
        s,
        value: scale * outcome.value,
        abs_error_estimate: scale * outcome.abs_error_estimate,
        panels: outcome.panels,
        min_denominator_distance: min_dist.get(),
        converged: false,
    };
    let ok = !singular.get()
        && report.abs_error_estimate.is_finite()
        && report.abs_error_estimate < CONVERGENCE_THRESHOLD;
    let report = QuadReport {
        converged: ok,
        ..report
    };
    if ok {
        Ok(report)
    } else {
        Err(Error::NonConvergence(Box::new(report)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts partitions of `n` with parts no larger than `max` by recursion.
    fn brute_partitions(n: u64, max: u64) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|p| brute_partitions(n - p, p)).sum()
    }

    #[test]
    fn partition_count_values() {
        assert_eq!(partition_count(0), BigInt::from(1));
        assert_eq!(partition_count(4), BigInt::from(5));
        assert_eq!(partition_count(10), BigInt::from(brute_partitions(10, 10)));
        assert_eq!(partition_count(10), BigInt::from(42));
        assert_eq!(partition_count(12), BigInt::from(77));
        assert_eq!(partition_count(100).to_string(), "190569292");
    }

    #[test]
    fn partition_count_matches_brute_force() {
        for s in 0..=25 {
            assert_eq!(partition_count(s), BigInt::from(brute_partitions(s, s)), "s={s}");
        }
    }

    #[test]
    fn restricted_counts() {
        assert_eq!(restricted_partition_count(4, 4), BigInt::from(5));
        assert_eq!(restricted_partition_count(4, 2), BigInt::from(3));
        assert_eq!(restricted_partition_count(0, 0), BigInt::from(1));
        assert_eq!(restricted_partition_count(3, 0), BigInt::from(0));
        for s in 0..=20 {
            assert_eq!(restricted_partition_count(s, 1), BigInt::from(1));
            for k in 0..=22 {
                assert_eq!(
                    restricted_partition_count(s, k),
                    BigInt::from(brute_partitions(s, k)),
                    "s={s} k={k}"
                );
            }
            assert_eq!(restricted_partition_count(s, s + 3), partition_count(s));
        }
    }

    #[test]
    fn integrand_small_x_limit_is_central_binomial() {
        // Each factor tends to (s+κ)/κ, so the product tends to C(2s, s).
        let v = partition_integrand(4, 1e-7).unwrap();
        assert!((v - 70.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn integrand_s1_identity() {
        for x in [0.1, 0.5, 1.0, 1.3, FRAC_PI_2] {
            let v = partition_integrand(1, x).unwrap();
            assert!((v - 2.0 * x.cos() * x.cos()).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn integrand_at_quarter_pi() {
        // Reference: the same product evaluated at the binary value of
        // fl(π/4) with 50-digit arithmetic (mpmath), frozen here.
        let x = std::f64::consts::FRAC_PI_4;
        let v = partition_integrand(4, x).unwrap();
        let reference = 2.0_f64;
        assert!(((v - reference) / reference).abs() < 1e-9, "{v}");
    }

    #[test]
    fn integrand_errors() {
        assert!(matches!(
            partition_integrand(3, 0.0),
            Err(Error::SingularNode { kappa: 1, .. })
        ));
        assert!(matches!(partition_integrand(3, -0.1), Err(Error::OutOfDomain { .. })));
        assert!(matches!(partition_integrand(3, 2.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(partition_integrand(3, f64::NAN), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn integrand_is_smooth_across_denominator_zeros() {
        for s in [4u64, 7, 10] {
            for x0 in panel_breaks(s).into_iter().filter(|&x| x > 0.0 && x < FRAC_PI_2) {
                let lo = partition_integrand(s, x0 - 1e-6).unwrap();
                let hi = partition_integrand(s, x0 + 1e-6).unwrap();
                let scale = lo.abs().max(hi.abs()).max(1.0);
                assert!((lo - hi).abs() < 1e-3 * scale, "s={s} x0={x0}: {lo} vs {hi}");
            }
        }
    }

    #[test]
    fn breaks_cover_all_zeros() {
        let b = panel_breaks(6);
        // zeros in (0, π/2): π/3 (κ=3), π/4 (κ=4), π/5, 2π/5 (κ=5), π/6 (κ=6)
        assert_eq!(b.len(), 2 + 5);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn integral_small_cases() {
        let r = partition_integral(1, 1).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "{r:?}");
        let r = partition_integral(4, 1).unwrap();
        assert!((r.value - 5.0).abs() < 1e-8, "{r:?}");
        assert!(r.min_denominator_distance > 0.0);
        assert!(r.panels >= 1);
        let r = partition_integral(12, 2).unwrap();
        assert!((r.value - 77.0).abs() < 0.5, "{r:?}");
    }

    #[test]
    fn integral_rejects_zero() {
        assert!(matches!(partition_integral(0, 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn large_s_is_flagged_not_returned() {
        match partition_integral(60, 1) {
            Err(Error::NonConvergence(report)) => {
                assert!(!report.converged);
                assert!(report.abs_error_estimate >= CONVERGENCE_THRESHOLD);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
