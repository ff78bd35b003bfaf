use std::io;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rat_parts, rat_to_f64, BigInt, BigRat};

/// Which counting argument produced a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Equal weight per configuration of distinguishable particles.
    Levels,
    /// Equal weight per state of indistinguishable quanta.
    Quanta,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Levels => "levels",
            Route::Quanta => "quanta",
        }
    }
}

/// Exact distribution of the number of quanta held by one particle,
/// indexed by κ = 0..=s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistTable {
    n: u64,
    s: u64,
    route: Route,
    entries: Vec<BigRat>,
}

impl DistTable {
    /// Builds a table, checking that there are `s + 1` non-negative entries
    /// summing to one.
    pub fn new(n: u64, s: u64, route: Route, entries: Vec<BigRat>) -> Result<Self> {
        if entries.len() as u64 != s + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                s + 1,
                entries.len()
            )));
        }
        if entries.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidParameter("negative probability".into()));
        }
        let total: BigRat = entries.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameter(format!("entries sum to {total}")));
        }
        Ok(Self { n, s, route, entries })
    }

    pub(crate) fn from_parts_unchecked(n: u64, s: u64, route: Route, entries: Vec<BigRat>) -> Self {
        debug_assert_eq!(entries.len() as u64, s + 1);
        Self { n, s, route, entries }
    }

    pub fn particles(&self) -> u64 {
        self.n
    }

    pub fn quanta(&self) -> u64 {
        self.s
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn entries(&self) -> &[BigRat] {
        &self.entries
    }

    /// `p(κ)`; zero for κ > s.
    pub fn get(&self, kappa: u64) -> BigRat {
        self.entries
            .get(kappa as usize)
            .cloned()
            .unwrap_or_else(BigRat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigRat)> {
        self.entries.iter().enumerate().map(|(k, p)| (k as u64, p))
    }

    pub fn total(&self) -> BigRat {
        self.entries.iter().sum()
    }

    /// Same probabilities, ignoring which route produced them.
    pub fn same_distribution(&self, other: &DistTable) -> bool {
        self.n == other.n && self.s == other.s && self.entries == other.entries
    }

    /// κ values where the two tables differ.
    pub fn mismatches(&self, other: &DistTable) -> Vec<u64> {
        let len = self.entries.len().max(other.entries.len()) as u64;
        (0..len).filter(|&k| self.get(k) != other.get(k)).collect()
    }

    /// Σ κ^power p(κ), exact.
    pub fn raw_moment(&self, power: u32) -> BigRat {
        self.iter()
            .map(|(k, p)| p * BigRat::from_integer(BigInt::from(k).pow(power)))
            .sum()
    }

    pub fn rows(&self) -> Vec<ProbRow> {
        self.iter().map(|(k, p)| ProbRow::new(k, p)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serialises")
    }

    /// CSV with header `k,num,den,float`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["k", "num", "den", "float"])?;
        for row in self.rows() {
            w.serialize((row.k, &row.num, &row.den, row.float))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One exact probability with its float rendering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbRow {
    pub k: u64,
    pub num: String,
    pub den: String,
    pub float: f64,
}

impl ProbRow {
    pub fn new(k: u64, p: &BigRat) -> Self {
        let (num, den) = rat_parts(p);
        Self {
            k,
            num,
            den,
            float: rat_to_f64(p),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    #[serde(rename = "N")]
    n: u64,
    s: u64,
    route: Route,
    p: Vec<ProbRow>,
}

impl Serialize for DistTable {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            n: self.n,
            s: self.s,
            route: self.route,
            p: self.rows(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for DistTable {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = Wire::deserialize(de)?;
        let mut entries = vec![BigRat::zero(); wire.p.len()];
        for row in &wire.p {
            let num: BigInt = row.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = row.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let slot = entries
                .get_mut(row.k as usize)
                .ok_or_else(|| D::Error::custom(format!("k = {} out of range", row.k)))?;
            *slot = BigRat::new(num, den);
        }
        DistTable::new(wire.n, wire.s, wire.route, entries).map_err(D::Error::custom)
    }
}
