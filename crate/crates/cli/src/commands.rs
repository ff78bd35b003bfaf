use anyhow::{bail, Result};
use serde::Serialize;

use quanta_stats::continuum::{
    self, boltzmann_sup_gap, doubling_ladder, energy_grid, hyperplane_area, integrate_zone_density,
    ks_critical_coefficient, ks_statistic, limit_convergence, sample_energy_simplex, strictly_decreasing,
    EnergySystem, LimitRung,
};
use quanta_stats::exactnum::{parse_rat, rat_parts};
use quanta_stats::occupancy::{level_pmf, most_probable_states, state_records, DistTable, ProbRow};
use quanta_stats::partitions::{partition_count, partition_integral, QuadReport};
use quanta_stats::quanta::{quanta_pmf, sample_stats, seeded_rng, ChiSquareSummary, SampleStats};
use quanta_stats::Error;

use crate::cli::{Command, Format};
use crate::emit::{self, float, json_doc, Csv};
use crate::{check, EXIT_CHECK_FAILED, EXIT_NONCONVERGENCE, EXIT_OK};

/// Runs one subcommand; `Err` means invalid input (exit 2).
pub fn run(command: &Command) -> Result<u8> {
    let out = command.output();
    let (bytes, code) = match command {
        Command::Dist { n, s, .. } => dist(*n, *s, out.format)?,
        Command::Enumerate { n, s, .. } => enumerate(*n, *s, out.format)?,
        Command::Partition { s, panels, .. } => partition(*s, *panels, out.format)?,
        Command::Sample { n, s, draws, seed, .. } => sample(*n, *s, *draws, *seed, out.format)?,
        Command::Limit { mean, n, ladder, .. } => limit(mean, *n, *ladder, out.format)?,
        Command::Continuum {
            n,
            energy,
            mean,
            points,
            draws,
            seed,
            ..
        } => continuum_cmd(*n, *energy, *mean, *points, *draws, *seed, out.format)?,
        Command::Check { n, s, .. } => check::run(*n, *s, out.format)?,
    };
    emit::write(out, &bytes)?;
    Ok(code)
}

fn prob_fields(row: &ProbRow) -> [String; 3] {
    [row.num.clone(), row.den.clone(), float(row.float)]
}

#[derive(Serialize)]
struct DistDoc<'a> {
    #[serde(rename = "N")]
    n: u64,
    s: u64,
    routes_equal: bool,
    levels: &'a DistTable,
    quanta: &'a DistTable,
}

fn dist(n: u64, s: u64, format: Format) -> Result<(Vec<u8>, u8)> {
    let levels = level_pmf(n, s)?;
    let quanta = quanta_pmf(n, s)?;
    let equal = levels.same_distribution(&quanta);
    eprintln!("N={n} s={s} routes-equal={equal}");
    let bytes = match format {
        Format::Json => json_doc(
            "dist",
            DistDoc {
                n,
                s,
                routes_equal: equal,
                levels: &levels,
                quanta: &quanta,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(["route", "k", "num", "den", "float"])?;
            for table in [&levels, &quanta] {
                for row in table.rows() {
                    let [num, den, f] = prob_fields(&row);
                    csv.row([table.route().as_str().to_string(), row.k.to_string(), num, den, f])?;
                }
            }
            csv.finish()?
        }
    };
    Ok((bytes, if equal { EXIT_OK } else { EXIT_CHECK_FAILED }))
}

#[derive(Serialize)]
struct StateRow {
    occupancies: Vec<u64>,
    configurations: String,
    probability: ProbRow,
    most_probable: bool,
}

#[derive(Serialize)]
struct EnumerateDoc {
    #[serde(rename = "N")]
    n: u64,
    s: u64,
    total_configurations: String,
    states: Vec<StateRow>,
    most_probable_unique: bool,
}

fn enumerate(n: u64, s: u64, format: Format) -> Result<(Vec<u8>, u8)> {
    let records = state_records(n, s)?;
    let top: Vec<_> = most_probable_states(n, s)?.into_iter().map(|r| r.state).collect();
    let rows: Vec<StateRow> = records
        .iter()
        .enumerate()
        .map(|(i, r)| StateRow {
            occupancies: r.state.occupancies().to_vec(),
            configurations: r.configurations.to_string(),
            probability: ProbRow::new(i as u64, &r.probability),
            most_probable: top.contains(&r.state),
        })
        .collect();
    let total: quanta_stats::BigInt = records.iter().map(|r| r.configurations.clone()).sum();
    if top.len() > 1 {
        eprintln!("most probable state is not unique: {} states tie", top.len());
    }
    let bytes = match format {
        Format::Json => json_doc(
            "enumerate",
            EnumerateDoc {
                n,
                s,
                total_configurations: total.to_string(),
                states: rows,
                most_probable_unique: top.len() == 1,
            },
        )?,
        Format::Csv => {
            let mut header: Vec<String> = (0..=s).map(|k| format!("n_{k}")).collect();
            header.extend(["configurations", "num", "den", "float", "most_probable"].map(String::from));
            let mut csv = Csv::new(header)?;
            for row in rows {
                let mut fields: Vec<String> = row.occupancies.iter().map(u64::to_string).collect();
                fields.push(row.configurations);
                fields.extend(prob_fields(&row.probability));
                fields.push(row.most_probable.to_string());
                csv.row(fields)?;
            }
            csv.finish()?
        }
    };
    Ok((bytes, EXIT_OK))
}

#[derive(Serialize)]
struct PartitionDoc {
    s: u64,
    exact: String,
    #[serde(flatten)]
    report: QuadReport,
    rounded_matches: bool,
}

fn partition(s: u64, panels: usize, format: Format) -> Result<(Vec<u8>, u8)> {
    if s == 0 {
        bail!("--s must be at least 1 for the integral representation");
    }
    let exact = partition_count(s);
    let (report, code) = match partition_integral(s, panels) {
        Ok(r) => (r, EXIT_OK),
        Err(Error::NonConvergence(r)) => {
            eprintln!(
                "quadrature did not converge for s={s}: error estimate {} >= {}",
                r.abs_error_estimate,
                quanta_stats::partitions::CONVERGENCE_THRESHOLD
            );
            (*r, EXIT_NONCONVERGENCE)
        }
        Err(e) => return Err(e.into()),
    };
    let rounded_matches = report.value.round() == exact.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let bytes = match format {
        Format::Json => json_doc(
            "partition",
            PartitionDoc {
                s,
                exact: exact.to_string(),
                report: report.clone(),
                rounded_matches,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new([
                "s",
                "p_s",
                "value",
                "abs_error_estimate",
                "panels",
                "min_denominator_distance",
                "converged",
            ])?;
            csv.row([
                s.to_string(),
                exact.to_string(),
                float(report.value),
                float(report.abs_error_estimate),
                report.panels.to_string(),
                float(report.min_denominator_distance),
                report.converged.to_string(),
            ])?;
            csv.finish()?
        }
    };
    Ok((bytes, code))
}

#[derive(Serialize)]
struct SampleDoc<'a> {
    stats: &'a SampleStats,
    chi_square: ChiSquareSummary,
    expected: &'a DistTable,
}

fn sample(n: u64, s: u64, draws: u64, seed: u64, format: Format) -> Result<(Vec<u8>, u8)> {
    if draws == 0 {
        bail!("--draws must be positive");
    }
    let expected = quanta_pmf(n, s)?;
    let stats = sample_stats(n, s, draws, seed)?;
    let chi = stats.chi_square(&expected);
    eprintln!(
        "chi-square {:.4} on {} dof, p-value {:.4}",
        chi.statistic, chi.dof, chi.p_value
    );
    let bytes = match format {
        Format::Json => json_doc(
            "sample",
            SampleDoc {
                stats: &stats,
                chi_square: chi,
                expected: &expected,
            },
        )?,
        Format::Csv => {
            let slots = stats.slots() as f64;
            let mut csv = Csv::new(["k", "count", "freq", "expected_num", "expected_den", "expected_float"])?;
            for (k, p) in expected.iter() {
                let count = stats.hist[k as usize];
                let (num, den) = rat_parts(p);
                csv.row([
                    k.to_string(),
                    count.to_string(),
                    float(count as f64 / slots),
                    num,
                    den,
                    float(quanta_stats::exactnum::rat_to_f64(p)),
                ])?;
            }
            csv.finish()?
        }
    };
    Ok((bytes, EXIT_OK))
}

#[derive(Serialize)]
struct LimitDoc<'a> {
    mean: String,
    rungs: &'a [LimitRung],
    strictly_decreasing: bool,
}

fn limit(mean: &str, base_n: u64, ladder: u32, format: Format) -> Result<(Vec<u8>, u8)> {
    let mean_r = parse_rat(mean)?;
    if ladder == 0 || ladder > 16 {
        bail!("--ladder must be between 1 and 16");
    }
    let rungs = limit_convergence(&mean_r, base_n, &doubling_ladder(ladder))?;
    let decreasing = strictly_decreasing(&rungs);
    if !decreasing {
        eprintln!("TV distance is not strictly decreasing along the ladder");
    }
    let bytes = match format {
        Format::Json => json_doc(
            "limit",
            LimitDoc {
                mean: quanta_stats::exactnum::format_rat(&mean_r),
                rungs: &rungs,
                strictly_decreasing: decreasing,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(["m", "N", "s", "tv"])?;
            for r in &rungs {
                csv.row([r.multiplier.to_string(), r.n.to_string(), r.s.to_string(), float(r.tv)])?;
            }
            csv.finish()?
        }
    };
    Ok((bytes, if decreasing { EXIT_OK } else { EXIT_CHECK_FAILED }))
}

#[derive(Serialize)]
struct KsSummary {
    draws: u64,
    seed: u64,
    statistic: f64,
    threshold: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ContinuumDoc {
    system: EnergySystem,
    mean_energy: f64,
    hyperplane_area: f64,
    zone_integral: f64,
    sup_gap: f64,
    grid: Vec<continuum::GridRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ks: Option<KsSummary>,
}

#[allow(clippy::too_many_arguments)]
fn continuum_cmd(
    n: u64,
    energy: Option<f64>,
    mean: Option<f64>,
    points: usize,
    draws: u64,
    seed: u64,
    format: Format,
) -> Result<(Vec<u8>, u8)> {
    let sys = match (energy, mean) {
        (Some(e), None) => EnergySystem::new(n, e)?,
        (None, Some(m)) => EnergySystem::with_mean_energy(n, m)?,
        (Some(e), Some(m)) => {
            let sys = EnergySystem::new(n, e)?;
            if (sys.mean_energy() - m).abs() > 1e-12 * m.abs() {
                bail!("--E {e} and --mean {m} disagree for N = {n}");
            }
            sys
        }
        (None, None) => bail!("one of --E or --mean is required"),
    };
    if n < 2 {
        bail!("--N must be at least 2 for the energy density");
    }
    if points < 2 {
        bail!("--points must be at least 2");
    }
    let mean_energy = sys.mean_energy();
    let grid = energy_grid(&sys, 3.0 * mean_energy, points)?;
    let ks = if draws > 0 {
        let mut rng = seeded_rng(seed);
        let mut first = Vec::with_capacity(draws as usize);
        for _ in 0..draws {
            first.push(sample_energy_simplex(&sys, &mut rng)?[0]);
        }
        let statistic = ks_statistic(&first, |x| continuum::finite_n_energy_cdf(&sys, x).unwrap_or(f64::NAN));
        let threshold = ks_critical_coefficient(0.01) / (draws as f64).sqrt();
        eprintln!("KS statistic {statistic:.6} (alpha=0.01 threshold {threshold:.6})");
        Some(KsSummary {
            draws,
            seed,
            statistic,
            threshold,
            passed: statistic < threshold,
        })
    } else {
        None
    };
    let bytes = match format {
        Format::Json => json_doc(
            "continuum",
            ContinuumDoc {
                system: sys,
                mean_energy,
                hyperplane_area: hyperplane_area(&sys),
                zone_integral: integrate_zone_density(&sys)?,
                sup_gap: boltzmann_sup_gap(n, mean_energy, points)?,
                grid,
                ks,
            },
        )?,
        Format::Csv => {
            let mut csv = Csv::new(["eps", "pdf_finite", "pdf_boltzmann"])?;
            for r in &grid {
                csv.row([float(r.eps), float(r.pdf_finite), float(r.pdf_boltzmann)])?;
            }
            csv.finish()?
        }
    };
    Ok((bytes, EXIT_OK))
}
