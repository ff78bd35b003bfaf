//! Indistinguishable quanta shared among particles: every composition
//! `(κ_1, …, κ_N)` of s is an equally likely state.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exactnum::{binomial, rat_int, rat_to_f64, BigRat};
use crate::occupancy::{level_pmf, total_configurations, DistTable, Route, ENUMERATION_CAP};

/// Quanta held by each particle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Composition {
    quanta: Vec<u64>,
}

impl Composition {
    pub fn new(quanta: Vec<u64>) -> Result<Self> {
        if quanta.is_empty() {
            return Err(Error::ParticleCount { n: 0, min: 1 });
        }
        Ok(Self { quanta })
    }

    pub fn quanta(&self) -> &[u64] {
        &self.quanta
    }

    pub fn particles(&self) -> u64 {
        self.quanta.len() as u64
    }

    pub fn total(&self) -> u64 {
        self.quanta.iter().sum()
    }
}

fn require_particles(n: u64, min: u64) -> Result<()> {
    if n < min {
        Err(Error::ParticleCount { n, min })
    } else {
        Ok(())
    }
}

/// `S_II = C(N+s−1, s)`.
pub fn count_states(n: u64, s: u64) -> Result<BigInt> {
    require_particles(n, 1)?;
    Ok(binomial(n + s - 1, s as i64))
}

/// All compositions of s into N non-negative parts, lexicographic.
pub fn enumerate_compositions(n: u64, s: u64) -> Result<Vec<Composition>> {
    let count = count_states(n, s)?;
    if count > BigInt::from(ENUMERATION_CAP) {
        return Err(Error::SizeCap {
            count: count.to_string(),
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut current = vec![0u64; n as usize];
    fill(0, s, &mut current, &mut out);
    Ok(out)
}

fn fill(slot: usize, left: u64, current: &mut [u64], out: &mut Vec<Composition>) {
    if slot + 1 == current.len() {
        current[slot] = left;
        out.push(Composition {
            quanta: current.to_vec(),
        });
        return;
    }
    for k in 0..=left {
        current[slot] = k;
        fill(slot + 1, left - k, current, out);
    }
}

/// `S_κ = C(N+s−κ−2, s−κ)`: states in which a chosen particle holds κ quanta.
pub fn count_states_with_level(n: u64, s: u64, kappa: u64) -> Result<BigInt> {
    require_particles(n, 2)?;
    if kappa > s {
        return Err(Error::LevelOutOfRange { level: kappa, s });
    }
    Ok(binomial(n + s - kappa - 2, (s - kappa) as i64))
}

/// `p(κ) = S_κ / S_II`.
pub fn quanta_pmf(n: u64, s: u64) -> Result<DistTable> {
    let total = count_states(n, s)?;
    let entries = if n == 1 {
        (0..=s).map(|k| rat_int(u8::from(k == s))).collect()
    } else {
        (0..=s)
            .map(|k| Ok(BigRat::new(count_states_with_level(n, s, k)?, total.clone())))
            .collect::<Result<Vec<_>>>()?
    };
    DistTable::new(n, s, Route::Quanta, entries)
}

/// Uniform composition via stars and bars: N−1 bar positions drawn as a
/// uniform subset of the N+s−1 slots (Floyd's algorithm), the gaps between
/// bars being the parts.
pub fn sample_state<R: Rng + ?Sized>(n: u64, s: u64, rng: &mut R) -> Result<Composition> {
    require_particles(n, 1)?;
    let slots = n + s - 1;
    let bars = n - 1;
    let mut chosen = BTreeSet::new();
    for j in (slots - bars)..slots {
        let t = rng.random_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    let mut quanta = Vec::with_capacity(n as usize);
    let mut prev: i64 = -1;
    for &b in &chosen {
        quanta.push((b as i64 - prev - 1) as u64);
        prev = b as i64;
    }
    quanta.push((slots as i64 - prev - 1) as u64);
    Ok(Composition { quanta })
}

/// Pooled histogram of quanta per particle slot over repeated draws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStats {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    pub seed: u64,
    pub draws: u64,
    /// `hist[κ]` counts particle slots holding κ quanta.
    pub hist: Vec<u64>,
}

impl SampleStats {
    pub fn empty(n: u64, s: u64, seed: u64) -> Self {
        Self {
            n,
            s,
            seed,
            draws: 0,
            hist: vec![0; s as usize + 1],
        }
    }

    pub fn record(&mut self, state: &Composition) {
        self.draws += 1;
        for &k in state.quanta() {
            self.hist[k as usize] += 1;
        }
    }

    /// Combines two runs over the same (N, s). The merged seed is the
    /// XOR of the parts, which keeps the merge commutative.
    pub fn merge(&self, other: &SampleStats) -> Result<SampleStats> {
        if (self.n, self.s) != (other.n, other.s) {
            return Err(Error::InvalidParameter(format!(
                "cannot merge samples of (N={}, s={}) and (N={}, s={})",
                self.n, self.s, other.n, other.s
            )));
        }
        Ok(SampleStats {
            n: self.n,
            s: self.s,
            seed: self.seed ^ other.seed,
            draws: self.draws + other.draws,
            hist: self.hist.iter().zip(&other.hist).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn slots(&self) -> u64 {
        self.draws * self.n
    }

    /// Pearson goodness of fit of the pooled histogram against `expected`,
    /// over the levels with non-zero expected mass.
    pub fn chi_square(&self, expected: &DistTable) -> ChiSquareSummary {
        let total = self.slots() as f64;
        let mut statistic = 0.0;
        let mut bins = 0u64;
        for (k, p) in expected.iter() {
            let e = total * rat_to_f64(p);
            if e > 0.0 {
                let o = self.hist.get(k as usize).copied().unwrap_or(0) as f64;
                statistic += (o - e) * (o - e) / e;
                bins += 1;
            }
        }
        let dof = bins.saturating_sub(1);
        let p_value = if dof == 0 {
            1.0
        } else {
            ChiSquared::new(dof as f64)
                .map(|d| d.sf(statistic))
                .unwrap_or(f64::NAN)
        };
        ChiSquareSummary {
            statistic,
            dof,
            p_value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareSummary {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
}

/// The generator every seeded entry point uses.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `draws` uniform states from a generator seeded with `seed`.
pub fn sample_stats(n: u64, s: u64, draws: u64, seed: u64) -> Result<SampleStats> {
    require_particles(n, 1)?;
    let mut rng = seeded_rng(seed);
    let mut stats = SampleStats::empty(n, s, seed);
    for _ in 0..draws {
        stats.record(&sample_state(n, s, &mut rng)?);
    }
    Ok(stats)
}

/// Outcome of comparing the two counting routes for one (N, s).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossRouteReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    /// `C_I`, decimal.
    pub total_configurations: String,
    /// `S_II`, decimal.
    pub count_states: String,
    pub counts_equal: bool,
    pub pmf_equal: bool,
    /// κ values where the two distributions differ.
    pub mismatched_levels: Vec<u64>,
}

impl CrossRouteReport {
    pub fn passed(&self) -> bool {
        self.counts_equal && self.pmf_equal
    }
}

/// Checks `C_I = S_II` and that both routes give the same `p(κ)`.
pub fn cross_route_check(n: u64, s: u64) -> Result<CrossRouteReport> {
    let configs = total_configurations(n, s)?;
    let states = count_states(n, s)?;
    let levels = level_pmf(n, s)?;
    let quanta = quanta_pmf(n, s)?;
    let mismatched_levels = levels.mismatches(&quanta);
    Ok(CrossRouteReport {
        n,
        s,
        counts_equal: configs == states,
        pmf_equal: mismatched_levels.is_empty() && levels.same_distribution(&quanta),
        total_configurations: configs.to_string(),
        count_states: states.to_string(),
        mismatched_levels,
    })
}

/// Position of `state` in the lexicographic list of compositions with the
/// same N and s.
pub fn composition_rank(state: &Composition) -> BigInt {
    let n = state.particles();
    let mut left = state.total();
    let mut rank = BigInt::zero();
    for (i, &k) in state.quanta().iter().enumerate() {
        let rest = n - i as u64 - 1;
        if rest == 0 {
            break;
        }
        for smaller in 0..k {
            // Compositions of (left - smaller) into `rest` parts.
            rank += binomial(left - smaller + rest - 1, (left - smaller) as i64);
        }
        left -= k;
    }
    rank
}
