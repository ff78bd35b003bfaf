//! Moments of `p(κ)`, its geometric large-system limit, and the classical
//! continuous-energy picture: the energy simplex `ε_1 + … + ε_N = E` with
//! uniform surface measure, its one-particle marginal and the Boltzmann
//! law.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{as_string, format_rat, rat_int, rat_to_f64, BigRat};
use crate::occupancy::{level_pmf, DistTable};
use crate::quad::{self, AdaptiveOptions};

/// `⟨κ⟩`, `⟨κ²⟩` and `σ²`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Moments {
    #[serde(serialize_with = "as_string::rat")]
    pub mean: BigRat,
    #[serde(serialize_with = "as_string::rat")]
    pub second: BigRat,
    #[serde(serialize_with = "as_string::rat")]
    pub variance: BigRat,
}

impl Moments {
    /// Direct summation over a distribution table.
    pub fn from_table(table: &DistTable) -> Self {
        let mean = table.raw_moment(1);
        let second = table.raw_moment(2);
        let variance = &second - &mean * &mean;
        Self {
            mean,
            second,
            variance,
        }
    }
}

/// Closed forms: `⟨κ⟩ = s/N`,
/// `⟨κ²⟩ = (N−1)/(N+1)·⟨κ⟩ + 2N/(N+1)·⟨κ⟩²`,
/// `σ² = (N−1)/(N+1)·(⟨κ⟩ + ⟨κ⟩²)`.
pub fn moments(n: u64, s: u64) -> Result<Moments> {
    if n == 0 {
        return Err(Error::ParticleCount { n, min: 1 });
    }
    let n_r = rat_int(n);
    let mean = rat_int(s) / &n_r;
    let up = &n_r + rat_int(1);
    let down = &n_r - rat_int(1);
    let mean_sq = &mean * &mean;
    let second = &down / &up * &mean + rat_int(2) * &n_r / &up * &mean_sq;
    let variance = &down / &up * (&mean + &mean_sq);
    Ok(Moments {
        mean,
        second,
        variance,
    })
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `(1/⟨κ⟩) e^{−κ/⟨κ⟩}`, the large-system limit of `p(κ)` read as a density.
pub fn geometric_limit_pmf(mean_quanta: f64, kappa: f64) -> Result<f64> {
    require_positive("mean number of quanta", mean_quanta)?;
    if kappa < 0.0 {
        return Ok(0.0);
    }
    Ok((-kappa / mean_quanta).exp() / mean_quanta)
}

/// Standard deviation of the limiting law; equal to its mean.
pub fn geometric_limit_std(mean_quanta: f64) -> Result<f64> {
    require_positive("mean number of quanta", mean_quanta)?;
    Ok(mean_quanta)
}

/// The limit law discretised as a normalised geometric pmf:
/// `(1 − q) q^κ` with `q = e^{−1/⟨κ⟩}`.
pub fn discrete_geometric_pmf(mean_quanta: f64, kappa: u64) -> Result<f64> {
    require_positive("mean number of quanta", mean_quanta)?;
    let q = (-1.0 / mean_quanta).exp();
    Ok(-(-1.0 / mean_quanta).exp_m1() * q.powf(kappa as f64))
}

/// Total-variation distance between an exact table and the normalised
/// geometric comparator, including the comparator's tail beyond s.
pub fn tv_to_geometric(table: &DistTable, mean_quanta: f64) -> Result<f64> {
    require_positive("mean number of quanta", mean_quanta)?;
    let q = (-1.0 / mean_quanta).exp();
    let mut body = 0.0;
    for (k, p) in table.iter() {
        body += (rat_to_f64(p) - discrete_geometric_pmf(mean_quanta, k)?).abs();
    }
    let tail = q.powf((table.quanta() + 1) as f64);
    Ok(0.5 * (body + tail))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRung {
    pub multiplier: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    pub tv: f64,
}

/// TV distance to the geometric comparator at `N = m·base_n`,
/// `s = ⟨κ⟩·N`, for every multiplier m.
pub fn limit_convergence(mean_quanta: &BigRat, base_n: u64, multipliers: &[u64]) -> Result<Vec<LimitRung>> {
    if mean_quanta <= &rat_int(0) {
        return Err(Error::InvalidParameter("mean number of quanta must be positive".into()));
    }
    let mean = rat_to_f64(mean_quanta);
    multipliers
        .iter()
        .map(|&m| {
            let n = m * base_n;
            if n < 2 {
                return Err(Error::ParticleCount { n, min: 2 });
            }
            let s = mean_quanta * rat_int(n);
            if !s.is_integer() {
                return Err(Error::InvalidParameter(format!(
                    "<kappa> * N = {} is not an integer for N = {n}",
                    format_rat(&s)
                )));
            }
            let s: u64 = s
                .to_integer()
                .try_into()
                .map_err(|_| Error::InvalidParameter("s does not fit in 64 bits".into()))?;
            let tv = tv_to_geometric(&level_pmf(n, s)?, mean)?;
            Ok(LimitRung {
                multiplier: m,
                n,
                s,
                tv,
            })
        })
        .collect()
}

/// Multipliers 1, 2, 4, … with `rungs` entries.
pub fn doubling_ladder(rungs: u32) -> Vec<u64> {
    (0..rungs).map(|i| 1u64 << i).collect()
}

pub fn strictly_decreasing(rungs: &[LimitRung]) -> bool {
    rungs.windows(2).all(|w| w[1].tv < w[0].tv)
}

/// N particles sharing a continuous energy E.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySystem {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "E")]
    energy: f64,
}

impl EnergySystem {
    pub fn new(n: u64, energy: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParticleCount { n, min: 1 });
        }
        require_positive("energy", energy)?;
        Ok(Self { n, energy })
    }

    pub fn with_mean_energy(n: u64, mean_energy: f64) -> Result<Self> {
        require_positive("mean energy", mean_energy)?;
        Self::new(n, mean_energy * n as f64)
    }

    pub fn particles(&self) -> u64 {
        self.n
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn mean_energy(&self) -> f64 {
        self.energy / self.n as f64
    }

    fn require_pair(&self) -> Result<()> {
        if self.n < 2 {
            Err(Error::ParticleCount { n: self.n, min: 2 })
        } else {
            Ok(())
        }
    }

    fn require_energy(&self, eps: f64) -> Result<()> {
        if (0.0..=self.energy).contains(&eps) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "particle energy {eps} outside [0, {}]",
                self.energy
            )))
        }
    }
}

/// `x^k / k!` as a running product.
fn power_over_factorial(x: f64, k: u64) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * x / i as f64)
}

/// Area of the simplex `Σ ε_i = E`: `√N E^{N−1}/(N−1)!`.
pub fn hyperplane_area(sys: &EnergySystem) -> f64 {
    (sys.n as f64).sqrt() * power_over_factorial(sys.energy, sys.n - 1)
}

/// Area per unit ε of the zone `ε ≤ ε_1 ≤ ε + dε`:
/// `√N (E−ε)^{N−2}/(N−2)!`.
pub fn zone_area_density(sys: &EnergySystem, eps: f64) -> Result<f64> {
    sys.require_pair()?;
    sys.require_energy(eps)?;
    Ok((sys.n as f64).sqrt() * power_over_factorial(sys.energy - eps, sys.n - 2))
}

/// One-particle energy density under uniform measure on the simplex:
/// `(N−1)/E · (1 − ε/E)^{N−2}`, evaluated in the log domain.
pub fn finite_n_energy_pdf(sys: &EnergySystem, eps: f64) -> Result<f64> {
    sys.require_pair()?;
    sys.require_energy(eps)?;
    let n = sys.n as f64;
    let lead = (n - 1.0) / sys.energy;
    if sys.n == 2 {
        return Ok(lead);
    }
    Ok(lead * ((n - 2.0) * (-eps / sys.energy).ln_1p()).exp())
}

/// `1 − (1 − ε/E)^{N−1}`.
pub fn finite_n_energy_cdf(sys: &EnergySystem, eps: f64) -> Result<f64> {
    sys.require_pair()?;
    let x = eps.clamp(0.0, sys.energy);
    Ok(-(((sys.n - 1) as f64) * (-x / sys.energy).ln_1p()).exp_m1())
}

/// `(1/⟨ε⟩) e^{−ε/⟨ε⟩}`.
pub fn boltzmann_pdf(mean_energy: f64, eps: f64) -> Result<f64> {
    require_positive("mean energy", mean_energy)?;
    if eps < 0.0 {
        return Err(Error::InvalidParameter(format!("energy {eps} is negative")));
    }
    Ok((-eps / mean_energy).exp() / mean_energy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub eps: f64,
    pub pdf_finite: f64,
    pub pdf_boltzmann: f64,
}

/// `points` equally spaced energies on `[0, upper]`; the finite-N density
/// is zero above E.
pub fn energy_grid(sys: &EnergySystem, upper: f64, points: usize) -> Result<Vec<GridRow>> {
    sys.require_pair()?;
    require_positive("grid upper bound", upper)?;
    let points = points.max(2);
    let mean = sys.mean_energy();
    (0..points)
        .map(|i| {
            let eps = upper * i as f64 / (points - 1) as f64;
            let pdf_finite = if eps <= sys.energy {
                finite_n_energy_pdf(sys, eps)?
            } else {
                0.0
            };
            Ok(GridRow {
                eps,
                pdf_finite,
                pdf_boltzmann: boltzmann_pdf(mean, eps)?,
            })
        })
        .collect()
}

/// Largest `|finite_n_energy_pdf − boltzmann_pdf|` over a grid on
/// `[0, 3⟨ε⟩]`.
pub fn boltzmann_sup_gap(n: u64, mean_energy: f64, points: usize) -> Result<f64> {
    let sys = EnergySystem::with_mean_energy(n, mean_energy)?;
    Ok(energy_grid(&sys, 3.0 * mean_energy, points)?
        .iter()
        .map(|r| (r.pdf_finite - r.pdf_boltzmann).abs())
        .fold(0.0, f64::max))
}

/// `∫₀^E zone_area_density dε` by adaptive Gauss–Legendre.
pub fn integrate_zone_density(sys: &EnergySystem) -> Result<f64> {
    sys.require_pair()?;
    let out = quad::integrate(
        |eps| {
            let v = zone_area_density(sys, eps.clamp(0.0, sys.energy)).unwrap_or(0.0);
            (v, f64::EPSILON * v.abs())
        },
        &[0.0, sys.energy],
        1,
        AdaptiveOptions::default(),
    );
    if out.converged {
        Ok(out.value)
    } else {
        Err(Error::InvalidParameter("zone integral did not converge".into()))
    }
}

/// Uniform point on the simplex `Σ ε_i = E`: independent standard
/// exponentials, normalised and scaled by E.
pub fn sample_energy_simplex<R: Rng + ?Sized>(sys: &EnergySystem, rng: &mut R) -> Result<Vec<f64>> {
    sys.require_pair()?;
    let draws: Vec<f64> = (0..sys.n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    Ok(draws.into_iter().map(|x| sys.energy * x / total).collect())
}

/// One-sample Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value `√(−ln(α/2)/2)` of `√n·D`.
pub fn ks_critical_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}
