//! Distinguishable particles over energy levels: every configuration
//! (assignment of labelled particles to levels) is equally likely.
//!
//! A state is an occupancy vector `(n_0, …, n_s)` with `Σ n_κ = N` and
//! `Σ κ n_κ = s`; it collects `N! / Π n_κ!` configurations.

mod gf;
mod table;

pub use gf::{gf_mean_occupancy, gf_total_configurations, TruncPoly};
pub use table::{DistTable, ProbRow, Route};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{as_string, binomial, binomial_i, multinomial, rat_int, BigRat};
use crate::partitions::restricted_partition_count;

/// Largest number of states or compositions any enumeration will build.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Occupancy vector `(n_0, …, n_s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LevelState {
    occupancies: Vec<u64>,
}

impl LevelState {
    /// Wraps an occupancy vector; the particle count is `Σ n_κ` and the
    /// quanta count is the vector length minus one, which must equal
    /// `Σ κ n_κ`.
    pub fn new(occupancies: Vec<u64>) -> Result<Self> {
        if occupancies.is_empty() {
            return Err(Error::InvalidState("occupancy vector is empty".into()));
        }
        let s = occupancies.len() as u64 - 1;
        let energy: u64 = occupancies
            .iter()
            .enumerate()
            .map(|(k, &n)| k as u64 * n)
            .sum();
        if energy != s {
            return Err(Error::InvalidState(format!(
                "energy Σκ·n_κ = {energy} but the vector spans levels 0..={s}"
            )));
        }
        Ok(Self { occupancies })
    }

    pub fn occupancies(&self) -> &[u64] {
        &self.occupancies
    }

    pub fn particles(&self) -> u64 {
        self.occupancies.iter().sum()
    }

    pub fn quanta(&self) -> u64 {
        self.occupancies.len() as u64 - 1
    }

    pub fn occupancy(&self, kappa: u64) -> u64 {
        self.occupancies.get(kappa as usize).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateRecord {
    pub state: LevelState,
    #[serde(serialize_with = "as_string::int")]
    pub configurations: BigInt,
    #[serde(serialize_with = "as_string::rat")]
    pub probability: BigRat,
}

fn require_particles(n: u64, min: u64) -> Result<()> {
    if n < min {
        Err(Error::ParticleCount { n, min })
    } else {
        Ok(())
    }
}

fn require_level(kappa: u64, s: u64) -> Result<()> {
    if kappa > s {
        Err(Error::LevelOutOfRange { level: kappa, s })
    } else {
        Ok(())
    }
}

/// Number of level states, `S_I`: partitions of s into at most N parts.
pub fn count_level_states(n: u64, s: u64) -> BigInt {
    restricted_partition_count(s, n.min(s))
}

/// All occupancy vectors for N particles and s quanta, in lexicographic
/// order of `(n_0, …, n_s)`.
pub fn enumerate_level_states(n: u64, s: u64) -> Result<Vec<LevelState>> {
    if n == 0 {
        return Ok(if s == 0 {
            vec![LevelState { occupancies: vec![0] }]
        } else {
            Vec::new()
        });
    }
    let count = count_level_states(n, s);
    if count > BigInt::from(ENUMERATION_CAP) {
        return Err(Error::SizeCap {
            count: count.to_string(),
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut occ = vec![0u64; s as usize + 1];
    descend(s as usize, s, n, &mut occ, &mut out);
    out.sort_unstable();
    debug_assert_eq!(BigInt::from(out.len()), count);
    Ok(out)
}

/// Fills levels `level, level-1, …, 1` with `energy` quanta using at most
/// `free` particles; the rest sit at level 0.
fn descend(level: usize, energy: u64, free: u64, occ: &mut [u64], out: &mut Vec<LevelState>) {
    if level == 1 {
        if energy <= free {
            occ[1] = energy;
            occ[0] = free - energy;
            out.push(LevelState { occupancies: occ.to_vec() });
            occ[1] = 0;
        }
        return;
    }
    if level == 0 {
        // s = 0: everybody at the ground level.
        occ[0] = free;
        out.push(LevelState { occupancies: occ.to_vec() });
        return;
    }
    let k = level as u64;
    let most = (energy / k).min(free);
    for count in 0..=most {
        let rest = energy - count * k;
        // Levels below can absorb at most (level - 1) quanta per particle.
        if rest > (k - 1) * (free - count) {
            continue;
        }
        occ[level] = count;
        descend(level - 1, rest, free - count, occ, out);
    }
    occ[level] = 0;
}

/// `N! / Π n_κ!`.
pub fn configurations(state: &LevelState) -> BigInt {
    multinomial(&state.occupancies)
}

/// `C_I = (N+s−1)! / (s!(N−1)!)`.
pub fn total_configurations(n: u64, s: u64) -> Result<BigInt> {
    require_particles(n, 1)?;
    Ok(binomial(n + s - 1, s as i64))
}

/// Probability of a state when configurations are equally likely.
pub fn state_probability(state: &LevelState) -> Result<BigRat> {
    let total = total_configurations(state.particles(), state.quanta())?;
    Ok(BigRat::new(configurations(state), total))
}

/// Every state with its configuration count and probability.
pub fn state_records(n: u64, s: u64) -> Result<Vec<StateRecord>> {
    let total = total_configurations(n, s)?;
    Ok(enumerate_level_states(n, s)?
        .into_iter()
        .map(|state| {
            let configurations = configurations(&state);
            let probability = BigRat::new(configurations.clone(), total.clone());
            StateRecord {
                state,
                configurations,
                probability,
            }
        })
        .collect())
}

/// `p(n/κ)` for n = 0..=N: probability that exactly n particles sit at
/// level κ.
pub fn conditional_occupancy_pmf(n: u64, s: u64, kappa: u64) -> Result<Vec<BigRat>> {
    require_particles(n, 1)?;
    require_level(kappa, s)?;
    let mut pmf = vec![BigRat::zero(); n as usize + 1];
    for rec in state_records(n, s)? {
        pmf[rec.state.occupancy(kappa) as usize] += rec.probability;
    }
    Ok(pmf)
}

/// `⟨n_κ⟩ = N · C(N+s−κ−2, N−2) / C_I`; for one particle, 1 at κ = s.
pub fn mean_occupancy(n: u64, s: u64, kappa: u64) -> Result<BigRat> {
    require_particles(n, 1)?;
    require_level(kappa, s)?;
    if n == 1 {
        return Ok(rat_int(u8::from(kappa == s)));
    }
    let weight = binomial_i((n + s - kappa) as i64 - 2, n as i64 - 2);
    Ok(BigRat::new(BigInt::from(n) * weight, total_configurations(n, s)?))
}

/// `p(κ) = C(N+s−κ−2, N−2) / C(N+s−1, N−1)`, the probability that a given
/// particle holds κ quanta.
pub fn level_pmf(n: u64, s: u64) -> Result<DistTable> {
    require_particles(n, 1)?;
    let entries = if n == 1 {
        (0..=s).map(|k| rat_int(u8::from(k == s))).collect()
    } else {
        let total = binomial(n + s - 1, n as i64 - 1);
        (0..=s)
            .map(|k| BigRat::new(binomial(n + s - k - 2, n as i64 - 2), total.clone()))
            .collect()
    };
    Ok(DistTable::from_parts_unchecked(n, s, Route::Levels, entries))
}

/// `p(κ) = ⟨n_κ⟩ / N` with the averages taken over the enumerated states.
pub fn level_pmf_by_enumeration(n: u64, s: u64) -> Result<DistTable> {
    require_particles(n, 1)?;
    let mut entries = vec![BigRat::zero(); s as usize + 1];
    for rec in state_records(n, s)? {
        for (k, &occ) in rec.state.occupancies.iter().enumerate() {
            entries[k] += &rec.probability * rat_int(occ);
        }
    }
    let entries = entries.into_iter().map(|e| e / rat_int(n)).collect();
    DistTable::new(n, s, Route::Levels, entries)
}

/// States with the largest configuration count. More than one entry means
/// the "most probable state" is not unique.
pub fn most_probable_states(n: u64, s: u64) -> Result<Vec<StateRecord>> {
    let records = state_records(n, s)?;
    let Some(best) = records.iter().map(|r| r.configurations.clone()).max() else {
        return Ok(Vec::new());
    };
    Ok(records
        .into_iter()
        .filter(|r| r.configurations == best)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;
    use num_traits::One;

    fn st(v: &[u64]) -> LevelState {
        LevelState::new(v.to_vec()).unwrap()
    }

    /// Every vector in the (N+1)^(s+1) grid satisfying both conservation laws.
    fn grid_states(n: u64, s: u64) -> Vec<Vec<u64>> {
        let len = s as usize + 1;
        let mut out = Vec::new();
        let mut v = vec![0u64; len];
        loop {
            let parts: u64 = v.iter().sum();
            let energy: u64 = v.iter().enumerate().map(|(k, &x)| k as u64 * x).sum();
            if parts == n && energy == s {
                out.push(v.clone());
            }
            let mut i = 0;
            loop {
                if i == len {
                    return out;
                }
                v[i] += 1;
                if v[i] <= n {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn worked_example_states() {
        let states = enumerate_level_states(4, 4).unwrap();
        let got: Vec<&[u64]> = states.iter().map(|s| s.occupancies()).collect();
        assert_eq!(
            got,
            vec![
                &[0, 4, 0, 0, 0][..],
                &[1, 2, 1, 0, 0],
                &[2, 0, 2, 0, 0],
                &[2, 1, 0, 1, 0],
                &[3, 0, 0, 0, 1],
            ]
        );
        let c: Vec<BigInt> = states.iter().map(configurations).collect();
        assert_eq!(c, [1, 12, 6, 12, 4].map(BigInt::from).to_vec());
    }

    #[test]
    fn enumeration_edge_cases() {
        assert_eq!(enumerate_level_states(1, 3).unwrap(), vec![st(&[0, 0, 0, 1])]);
        assert_eq!(enumerate_level_states(2, 4).unwrap().len(), 3);
        assert_eq!(enumerate_level_states(0, 3).unwrap(), vec![]);
        assert_eq!(enumerate_level_states(0, 0).unwrap().len(), 1);
        assert_eq!(enumerate_level_states(5, 0).unwrap(), vec![st(&[5])]);
    }

    #[test]
    fn enumeration_matches_grid_scan() {
        for n in 0..=5 {
            for s in 0..=5 {
                let got: Vec<Vec<u64>> = enumerate_level_states(n, s)
                    .unwrap()
                    .into_iter()
                    .map(|x| x.occupancies)
                    .collect();
                let mut want = grid_states(n, s);
                want.sort();
                assert_eq!(got, want, "N={n} s={s}");
            }
        }
    }

    #[test]
    fn enumeration_respects_cap() {
        assert!(matches!(
            enumerate_level_states(200, 200),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn state_validation() {
        assert!(LevelState::new(vec![]).is_err());
        assert!(LevelState::new(vec![1, 1, 1]).is_err());
        let s = st(&[2, 1, 0, 1, 0]);
        assert_eq!((s.particles(), s.quanta()), (4, 4));
    }

    #[test]
    fn totals() {
        assert_eq!(total_configurations(4, 4).unwrap(), BigInt::from(35));
        assert_eq!(total_configurations(1, 17).unwrap(), BigInt::one());
        assert_eq!(total_configurations(3, 2).unwrap(), BigInt::from(6));
        assert!(total_configurations(0, 2).is_err());
        let by_sum: BigInt = enumerate_level_states(3, 2).unwrap().iter().map(configurations).sum();
        assert_eq!(by_sum, BigInt::from(6));
    }

    #[test]
    fn state_probabilities() {
        assert_eq!(state_probability(&st(&[1, 2, 1, 0, 0])).unwrap(), ratio(12, 35));
        assert_eq!(state_probability(&st(&[0, 4, 0, 0, 0])).unwrap(), ratio(1, 35));
        assert_eq!(state_probability(&st(&[2, 0, 2, 0, 0])).unwrap(), ratio(6, 35));
    }

    #[test]
    fn conditional_pmf_example() {
        let level0 = conditional_occupancy_pmf(4, 4, 0).unwrap();
        assert_eq!(level0[2], ratio(18, 35));
        let level1 = conditional_occupancy_pmf(4, 4, 1).unwrap();
        assert_eq!(level1[4], ratio(1, 35));
        assert!(conditional_occupancy_pmf(4, 4, 5).is_err());
        for n in 1..=6 {
            for s in 0..=6 {
                for k in 0..=s {
                    let total: BigRat = conditional_occupancy_pmf(n, s, k).unwrap().iter().sum();
                    assert!(total.is_one());
                }
            }
        }
    }

    #[test]
    fn mean_occupancy_example() {
        let want = [60, 40, 24, 12, 4];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(mean_occupancy(4, 4, k as u64).unwrap(), ratio(*w, 35));
        }
        let sum: BigRat = (0..=4).map(|k| mean_occupancy(4, 4, k).unwrap()).sum();
        assert_eq!(sum, ratio(4, 1));
        assert_eq!(mean_occupancy(1, 3, 3).unwrap(), ratio(1, 1));
        assert_eq!(mean_occupancy(1, 3, 0).unwrap(), ratio(0, 1));
        assert_eq!(mean_occupancy(2, 1, 0).unwrap(), ratio(1, 1));
    }

    #[test]
    fn level_pmf_examples() {
        let t = level_pmf(4, 4).unwrap();
        assert_eq!(t.entries(), [15, 10, 6, 3, 1].map(|x| ratio(x, 35)));
        for k in 0..=4i64 {
            assert_eq!(t.get(k as u64), ratio((5 - k) * (6 - k), 70));
        }
        let t = level_pmf(1, 7).unwrap();
        assert_eq!(t.get(7), ratio(1, 1));
        assert!(t.entries()[..7].iter().all(Zero::is_zero));
        let t = level_pmf(3, 2).unwrap();
        assert_eq!(t.entries(), [ratio(3, 6), ratio(2, 6), ratio(1, 6)]);
        assert_eq!(level_pmf(3, 2).unwrap(), level_pmf_by_enumeration(3, 2).unwrap());
        assert_eq!(level_pmf(5, 0).unwrap().entries(), [ratio(1, 1)]);
        assert_eq!(level_pmf(2, 1).unwrap().get(0), ratio(1, 2));
    }

    #[test]
    fn most_probable() {
        let top = most_probable_states(4, 4).unwrap();
        let states: Vec<&[u64]> = top.iter().map(|r| r.state.occupancies()).collect();
        assert_eq!(states, vec![&[1, 2, 1, 0, 0][..], &[2, 1, 0, 1, 0]]);
        assert!(top.iter().all(|r| r.configurations == BigInt::from(12)));
        let single = most_probable_states(1, 5).unwrap();
        assert_eq!(single.len(), 1);
        let two = most_probable_states(2, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].state, st(&[1, 0, 1]));
        assert_eq!(two[0].configurations, BigInt::from(2));
    }

    #[test]
    fn monotone_in_kappa() {
        for n in 2..=12 {
            for s in 0..=12 {
                let t = level_pmf(n, s).unwrap();
                assert!(t.entries().windows(2).all(|w| w[0] >= w[1]), "N={n} s={s}");
            }
        }
    }
}
