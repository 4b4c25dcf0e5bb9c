use super::checks::{group_grid, validation_suite};
use super::csv::{read_columns, Table};
use super::{Check, Command, GroupName, HamiltonianName, KernelGrid, Report, RunConfig};
use crate::error::{Error, Result};
use crate::lie::AlgebraVector;
use crate::noncomm::{fourier_transform, star_monomial, GroupFunction};
use crate::oracle::{
    character_coefficient, fourier_coefficients_u1, rd_gaussian_kernel, su2_heat_kernel, u1_heat_kernel,
    CentralSamples, SpectralTruncation, TAIL_TOLERANCE,
};
use crate::propagator::{propagate, GridSpec, PropagatorConfig, Support};
use crate::quantum::{free_particle_symbol, quantum_correct, Potential};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::sync::Arc;
use std::time::Instant;

/// Kernel value columns; kernels are densities against the Haar measure.
const KERNEL_RE: &str = "re[1/vol]";
const KERNEL_IM: &str = "im[1/vol]";

/// Runs the configured command, writes its files into `config.out` and
/// returns the report (also written as `report.json`, except for `compare`,
/// which writes `compare.json` so the compared run stays intact).
pub fn execute(config: &RunConfig) -> Result<Report> {
    let config = config.resolved()?;
    let start = Instant::now();
    std::fs::create_dir_all(&config.out)?;
    let mut report = match config.command()? {
        Command::Validate => Report::new(&config, validation_suite(&config)?)?,
        Command::Transform => transform(&config)?,
        Command::Star => star(&config)?,
        Command::Propagate => run_propagate(&config)?,
        Command::Compare => compare(&config)?,
    };
    if config.timing {
        report.seconds = Some(start.elapsed().as_secs_f64());
    }
    if config.command()? == Command::Compare {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        std::fs::write(config.out.join("compare.json"), text)?;
    } else {
        report.write(&config.out)?;
    }
    Ok(report)
}

/// Unit of chart coordinates: radians on exponential charts of compact
/// groups, dimensionless on trace charts, length on R^d.
fn coordinate_unit(config: &RunConfig) -> &'static str {
    match (config.group, config.chart) {
        (GroupName::Rd, _) => "len",
        (_, super::ChartName::Exp) => "rad",
        (_, super::ChartName::Trace) => "1",
    }
}

/// `z0[rad],z1[rad],..` or, for dual coordinates, `x0[1/rad],..`.
fn coordinate_header(config: &RunConfig, d: usize, dual: bool) -> Vec<String> {
    let unit = coordinate_unit(config);
    let (prefix, unit) = match (dual, unit) {
        (false, u) => ("z", u.to_string()),
        (true, "1") => ("x", "1".to_string()),
        (true, u) => ("x", format!("1/{u}")),
    };
    (0..d).map(|i| format!("{prefix}{i}[{unit}]")).collect()
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn transform(config: &RunConfig) -> Result<Report> {
    let chart = config.build_chart()?;
    let d = chart.dim();
    let grid = Arc::new(group_grid(config, &chart, config.n.unwrap_or(16))?);
    let f = GroupFunction::from_fn(grid.clone(), |z, _| {
        let r2 = z.norm().powi(2);
        Complex64::from_polar((-r2 / 2.0).exp(), 0.5 * z[0])
    })?;
    let ft = fourier_transform(&f);
    let mut header = vec!["sample".to_string()];
    header.extend(coordinate_header(config, d, true));
    header.extend(columns(&["re[vol]", "im[vol]"]));
    let mut table = Table::new(header);
    let m = config.dual_nodes.max(2);
    for k in 0..m {
        let s = -config.cutoff + 2.0 * config.cutoff * k as f64 / (m - 1) as f64;
        let x = AlgebraVector::axis(d, 0, s);
        let v = ft.evaluate(&x);
        let mut row = x.components().to_vec();
        row.extend([v.re, v.im]);
        table.row(&[k], &row);
    }
    table.write(&config.out.join("transform.csv"))?;
    let back = crate::noncomm::inverse_transform(&ft);
    let round_trip = back.max_abs_diff(&f)?;
    let plancherel = (crate::noncomm::dual_inner_product(&ft, &ft)?.re - f.values().iter().zip(grid.weights()).map(|(v, w)| v.norm_sqr() * w).sum::<f64>()).abs();
    let checks = vec![
        Check::at_most("round_trip", round_trip, 1e-12),
        Check::at_most("plancherel", plancherel, 1e-10),
    ];
    Report::new(config, checks)
}

fn star(config: &RunConfig) -> Result<Report> {
    let chart = config.build_chart()?;
    let d = chart.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut header = vec!["sample".to_string(), "i".into(), "j".into()];
    header.extend(coordinate_header(config, d, true));
    header.extend(columns(&["re[x^2]", "im[x^2]"]));
    let mut table = Table::new(header);
    let mut worst = 0.0f64;
    for s in 0..config.samples {
        let x = AlgebraVector::new((0..d).map(|_| rng.gen_range(-2.0..2.0)).collect());
        for i in 0..d {
            for j in 0..d {
                let v = star_monomial(&chart, &[i, j], &x)?;
                let mut row = x.components().to_vec();
                row.extend([v.re, v.im]);
                table.row(&[s, i, j], &row);
                if j > i {
                    let w = star_monomial(&chart, &[j, i], &x)?;
                    let bracket: f64 = (0..d).map(|k| chart.group().structure_constant(i, j, k) * x[k]).sum();
                    worst = worst.max((v - w + Complex64::new(0.0, bracket)).norm());
                }
            }
        }
    }
    table.write(&config.out.join("star.csv"))?;
    let tol = if chart.group().is_abelian() { 1e-8 } else { 1e-4 };
    Report::new(config, vec![Check::at_most("star_commutator", worst, tol)])
}

fn build_hamiltonian(config: &RunConfig) -> Result<crate::quantum::CorrectedHamiltonian> {
    let mut h = free_particle_symbol(&config.build_chart()?)?;
    if config.hamiltonian == HamiltonianName::FreeCos {
        h = h.with_potential(Potential::cosine(config.potential_strength));
    }
    quantum_correct(&h)
}

fn grid_spec(config: &RunConfig) -> GridSpec {
    match config.kernel_grid {
        KernelGrid::Class => GridSpec::Class { shells: config.shells, directions: config.directions, max_angle: None },
        _ => GridSpec::Group {
            n_per_dim: config.n.unwrap_or(16),
            half_width: (config.group == GroupName::Rd).then_some(config.extent),
            interpolation: config.interpolation,
        },
    }
}

/// Exact kernel at the sample points, for free imaginary-time runs only.
fn oracle_values(config: &RunConfig, points: &[AlgebraVector]) -> Result<Option<Vec<f64>>> {
    if config.hamiltonian != HamiltonianName::Free || config.scheme != super::SchemeName::Imaginary {
        return Ok(None);
    }
    let t = config.time.unwrap_or(0.0);
    let chart = config.build_chart()?;
    let group = chart.group().clone();
    let values = match config.group {
        GroupName::Rd => points.iter().map(|z| rd_gaussian_kernel(z.components(), t)).collect(),
        GroupName::U1 => {
            let trunc = SpectralTruncation::adequate(&group, t)?;
            points.iter().map(|z| u1_heat_kernel(z[0], t, &trunc)).collect::<Result<Vec<_>>>()?
        }
        _ => {
            let trunc = SpectralTruncation::adequate(&group, t)?;
            points.iter().map(|z| su2_heat_kernel(&chart.point(z)?, t, &trunc)).collect::<Result<Vec<_>>>()?
        }
    };
    Ok(Some(values))
}

/// Relative sup and L² differences.
fn differences(values: &[Complex64], reference: &[Complex64], weights: &[f64]) -> (f64, f64) {
    let sup_ref = reference.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let sup = values.iter().zip(reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let l2: f64 = values.iter().zip(reference).zip(weights).map(|((a, b), w)| (a - b).norm_sqr() * w).sum();
    let l2_ref: f64 = reference.iter().zip(weights).map(|(b, w)| b.norm_sqr() * w).sum();
    (sup / sup_ref, (l2 / l2_ref).sqrt())
}

/// Number of reported modes: `2 j_max + 1`.
fn mode_count(config: &RunConfig) -> usize {
    (2.0 * config.j_max) as usize + 1
}

/// `λ` of mode `m`: `j = m/2` on SU(2)/SO(3), `n = m` on U(1).
fn mode_eigenvalue(group: GroupName, m: usize) -> f64 {
    let t = SpectralTruncation::new(m.max(1));
    match group {
        GroupName::U1 => t.u1_eigenvalue(m as i64),
        _ => t.spin_eigenvalue(m),
    }
}

fn mode_label(group: GroupName, m: usize) -> String {
    match group {
        GroupName::U1 => format!("n={m}"),
        _ if m % 2 == 0 => format!("j={}", m / 2),
        _ => format!("j={}/2", m),
    }
}

/// Mode coefficients of a central kernel: character coefficients on
/// SU(2)/SO(3), Fourier coefficients on U(1). Empty on R^d.
fn mode_coefficients(config: &RunConfig, support: &Support, values: &[Complex64]) -> Result<Vec<f64>> {
    let count = mode_count(config);
    match (config.group, support) {
        (GroupName::Rd, _) => Ok(Vec::new()),
        (GroupName::U1, Support::Group(grid)) => {
            let c = fourier_coefficients_u1(grid, values, count - 1)?;
            Ok((0..count).map(|m| c[m + count - 1].re).collect())
        }
        (group, support) => (0..count)
            .map(|m| {
                if group == GroupName::So3 && m % 2 == 1 {
                    // no half-integer representations on SO(3)
                    return Ok(f64::NAN);
                }
                match support {
                    Support::Group(grid) => character_coefficient(CentralSamples::Grid(grid, values), m),
                    Support::Class { grid, .. } => character_coefficient(CentralSamples::Class(grid, values), m),
                }
            })
            .collect(),
    }
}

/// Exact mode coefficients of the heat kernel at `T`.
fn oracle_modes(config: &RunConfig) -> Vec<f64> {
    let t = config.time.unwrap_or(0.0);
    let group = config.lie_group();
    let volume = group.volume().unwrap_or(f64::NAN);
    (0..mode_count(config))
        .map(|m| {
            let decay = (-mode_eigenvalue(config.group, m) * t).exp();
            match config.group {
                GroupName::U1 => decay / volume,
                GroupName::So3 if m % 2 == 1 => 0.0,
                _ => (m + 1) as f64 * decay / volume,
            }
        })
        .collect()
}

/// Fitted decay rates against the spectrum: `|rate/λ − 1|` for `λ > 0` and
/// `|rate|/λ_1` for the zero mode, worst over the resolved modes.
fn mode_check(config: &RunConfig, coefficients: &[f64]) -> (Check, serde_json::Value) {
    let t = config.time.unwrap_or(0.0);
    let exact = oracle_modes(config);
    let first = mode_eigenvalue(config.group, 1);
    let mut worst = 0.0f64;
    let mut rows = Vec::new();
    for (m, (&c, &o)) in coefficients.iter().zip(&exact).enumerate() {
        if o == 0.0 {
            rows.push(json!({"mode": mode_label(config.group, m), "coefficient": c}));
            continue;
        }
        let lambda = mode_eigenvalue(config.group, m);
        let rate = -(c / o * (-lambda * t).exp()).ln() / t;
        let dev = if lambda > 0.0 { (rate / lambda - 1.0).abs() } else { rate.abs() / first };
        worst = worst.max(if dev.is_nan() { f64::INFINITY } else { dev });
        rows.push(json!({
            "mode": mode_label(config.group, m),
            "eigenvalue": lambda,
            "coefficient": c,
            "oracle_coefficient": o,
            "ratio": c / o,
            "fitted_rate": rate,
        }));
    }
    (Check::at_most("mode_rates", worst, 0.05), serde_json::Value::Array(rows))
}

fn kernel_table(config: &RunConfig, d: usize, points: &[AlgebraVector], values: &[Complex64]) -> Table {
    let mut header = vec!["node".to_string()];
    header.extend(coordinate_header(config, d, false));
    header.extend(columns(&[KERNEL_RE, KERNEL_IM]));
    let mut table = Table::new(header);
    for (k, (z, v)) in points.iter().zip(values).enumerate() {
        let mut row = z.components().to_vec();
        row.extend([v.re, v.im]);
        table.row(&[k], &row);
    }
    table
}

fn run_propagate(config: &RunConfig) -> Result<Report> {
    let h = build_hamiltonian(config)?;
    let shift = h.constant_shift();
    let scheme = config.time_scheme();
    let pc = PropagatorConfig::new(h, config.epsilon(), config.steps.unwrap_or(1), scheme, grid_spec(config))
        .with_ladder(config.ladder);
    let run = propagate(&pc)?;
    let support = run.kernel.support().clone();
    let points = support.points()?;
    let d = support.chart().dim();
    let values = run.kernel.identity_row()?;
    kernel_table(config, d, &points, &values).write(&config.out.join("kernel.csv"))?;

    let oracle = oracle_values(config, &points)?.map(|o| o.into_iter().map(|v| Complex64::new(v, 0.0)).collect::<Vec<_>>());
    let mut ladder = Table::new(
        columns(&["level", "steps", "epsilon[time]", "change[1/vol]", "oracle_sup[rel]", "oracle_l2[rel]"]),
    );
    let mut errors = Vec::new();
    for (level, (entry, k)) in run.ladder.iter().zip(&run.levels).enumerate() {
        let (sup, l2) = match &oracle {
            Some(o) => differences(&k.identity_row()?, o, support.weights()),
            None => (f64::NAN, f64::NAN),
        };
        errors.push(sup);
        ladder.row(&[level, entry.steps], &[entry.epsilon, entry.change.unwrap_or(f64::NAN), sup, l2]);
    }
    ladder.write(&config.out.join("ladder.csv"))?;

    let mut checks = vec![Check::at_most(
        "finite",
        values.iter().filter(|v| !v.is_finite()).count() as f64,
        0.0,
    )];
    let mut extra = json!({"constant_shift": shift, "orders": run.observed_orders()});
    if let Some(o) = &oracle {
        let (sup, l2) = differences(&values, o, support.weights());
        extra["oracle_sup_error"] = json!(sup);
        extra["oracle_l2_error"] = json!(l2);
        match config.group {
            GroupName::U1 => checks.push(Check::at_most("oracle_sup_error", sup, 1e-2)),
            GroupName::Rd => checks.push(Check::at_most("oracle_sup_error", sup, 5e-3)),
            _ => {}
        }
        if config.group != GroupName::Rd {
            let coefficients = mode_coefficients(config, &support, &values)?;
            let (check, rows) = mode_check(config, &coefficients);
            checks.push(check);
            extra["modes"] = rows;
        }
        if errors.len() > 1 {
            let rise = errors.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
            checks.push(
                Check::at_most("ladder_monotone", rise, TAIL_TOLERANCE)
                    .with_note("largest increase of oracle_sup along the ladder; the oracle is exact to its tail tolerance"),
            );
        }
    }
    let mut report = Report::new(config, checks)?;
    report.extra = Some(extra);
    Ok(report)
}

fn read_kernel(path: &std::path::Path, expected: usize) -> Result<Vec<Complex64>> {
    let cols = read_columns(path, &[KERNEL_RE, KERNEL_IM])?;
    if cols[0].len() != expected {
        return Err(Error::GridMismatch);
    }
    Ok(cols[0].iter().zip(&cols[1]).map(|(&re, &im)| Complex64::new(re, im)).collect())
}

fn compare(config: &RunConfig) -> Result<Report> {
    let prior_path = config.out.join("report.json");
    let text = std::fs::read_to_string(&prior_path)
        .map_err(|_| Error::InvalidConfig(format!("no propagate run in {}", config.out.display())))?;
    let prior: Report = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", prior_path.display())))?;
    if prior.command != Command::Propagate {
        return Err(Error::InvalidConfig(format!("{} is not a propagate report", prior_path.display())));
    }
    let run = prior.config;
    let support = grid_spec(&run).build(&run.build_chart()?)?;
    let points = support.points()?;
    let d = support.chart().dim();
    let values = read_kernel(&config.out.join("kernel.csv"), points.len())?;
    let reference = match &config.reference {
        Some(dir) => read_kernel(&dir.join("kernel.csv"), points.len())?,
        None => oracle_values(&run, &points)?
            .ok_or_else(|| Error::InvalidConfig("no exact kernel for this run; give a reference run".into()))?
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
    };

    let mut header = vec!["node".to_string()];
    header.extend(coordinate_header(&run, d, false));
    header.extend(columns(&[KERNEL_RE, KERNEL_IM, "ref_re[1/vol]", "ref_im[1/vol]", "abs_diff[1/vol]"]));
    let mut table = Table::new(header);
    for (k, ((z, a), b)) in points.iter().zip(&values).zip(&reference).enumerate() {
        let mut row = z.components().to_vec();
        row.extend([a.re, a.im, b.re, b.im, (a - b).norm()]);
        table.row(&[k], &row);
    }
    table.write(&config.out.join("compare.csv"))?;

    let kernel_modes = mode_coefficients(&run, &support, &values).unwrap_or_default();
    let reference_modes = match &config.reference {
        Some(_) => mode_coefficients(&run, &support, &reference).unwrap_or_default(),
        None if run.group != GroupName::Rd => oracle_modes(&run),
        None => Vec::new(),
    };
    let count = if run.group == GroupName::Rd { 0 } else { mode_count(&run) };
    let mut header = vec!["quantity".to_string()];
    header.extend((0..count).map(|m| mode_label(run.group, m)));
    let mut modes = Table::new(header);
    let pad = |v: &[f64]| (0..count).map(|m| v.get(m).copied().unwrap_or(f64::NAN)).collect::<Vec<_>>();
    let (km, rm) = (pad(&kernel_modes), pad(&reference_modes));
    let ratio: Vec<f64> = km.iter().zip(&rm).map(|(a, b)| if a == b { 1.0 } else { a / b }).collect();
    modes.labelled_row("kernel", &km);
    modes.labelled_row("reference", &rm);
    modes.labelled_row("ratio", &ratio);
    modes.write(&config.out.join("modes.csv"))?;

    let (sup, l2) = differences(&values, &reference, support.weights());
    let mut checks = Vec::new();
    if config.reference.is_none() {
        match run.group {
            GroupName::U1 => checks.push(Check::at_most("oracle_sup_error", sup, 1e-2)),
            GroupName::Rd => checks.push(Check::at_most("oracle_sup_error", sup, 5e-3)),
            _ => {}
        }
        if run.group != GroupName::Rd && !kernel_modes.is_empty() {
            checks.push(mode_check(&run, &kernel_modes).0);
        }
    }
    let mut report = Report::new(config, checks)?;
    report.extra = Some(json!({
        "compared_run": run,
        "reference": config.reference.as_ref().map_or("oracle".to_string(), |p| p.display().to_string()),
        "sup_difference": sup,
        "l2_difference": l2,
    }));
    Ok(report)
}

