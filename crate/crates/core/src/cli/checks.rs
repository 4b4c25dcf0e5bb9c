use super::{Check, GroupName, RunConfig};
use crate::error::Result;
use crate::lie::{AlgebraVector, Chart, ChartKind, GroupElement, GroupKind};
use crate::noncomm::{
    coadjoint, cyclic_check, dual_inner_product, dual_inner_product_literal, fourier_transform, inverse_transform,
    pairing_via_omega, plane_wave, pointwise_pairing, star_commutator_defect, star_pairing, star_product, DualFunction,
    GroupFunction, Interpolation,
};
use crate::quadrature::{Damping, DualGrid, GroupGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::Instant;

pub(super) fn group_grid(config: &RunConfig, chart: &Chart, n: usize) -> Result<GroupGrid> {
    let grid = match config.group {
        GroupName::Rd => GroupGrid::with_extent(chart, n, config.extent)?,
        _ => GroupGrid::new(chart, n)?,
    };
    Ok(grid.with_interpolation(config.interpolation))
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> AlgebraVector {
    AlgebraVector::new((0..d).map(|_| rng.gen_range(-radius..radius)).collect())
}

/// Smooth test function number `k`, negligible (or periodic) at the range edge.
fn test_function(config: &RunConfig, grid: &Arc<GroupGrid>, k: u64) -> Result<DualFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9e37_79b9).wrapping_add(k));
    let d = grid.chart().dim();
    let f = match config.group {
        GroupName::U1 => {
            let co: Vec<Complex64> = (0..7).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            GroupFunction::from_fn(grid.clone(), |z, _| {
                let t = z[0];
                let trig: Complex64 =
                    co.iter().enumerate().map(|(m, a)| a * Complex64::from_polar(1.0, (m as f64 - 3.0) * t)).sum();
                trig * ((1.0 + t.cos()) / 2.0).powi(4)
            })?
        }
        _ => {
            let s = length_scale(grid.chart());
            let center = random_vector(&mut rng, d, 0.5 * s);
            let phase = rng.gen_range(-1.0..1.0) / s;
            gaussian(grid, &center, s, phase)?
        }
    };
    Ok(fourier_transform(&f))
}

/// Chart ball radius relative to the SU(2) exponential chart (1 on R^d and U(1)).
fn length_scale(chart: &Chart) -> f64 {
    match chart.group().kind() {
        GroupKind::SU2 | GroupKind::SO3 => chart.range().radius().map_or(1.0, |r| r / (2.0 * std::f64::consts::PI)),
        _ => 1.0,
    }
}

fn gaussian(grid: &Arc<GroupGrid>, center: &AlgebraVector, width: f64, phase: f64) -> Result<GroupFunction> {
    GroupFunction::from_fn(grid.clone(), |z, _| {
        let r2 = (z - center).norm().powi(2);
        Complex64::from_polar((-r2 / (2.0 * width * width)).exp(), phase * z[0])
    })
}

fn norm(f: &DualFunction) -> Result<f64> {
    Ok(dual_inner_product(f, f)?.re.sqrt())
}

fn guarded(name: &str, timing: bool, f: impl FnOnce() -> Result<Check>) -> Check {
    let start = Instant::now();
    let mut check = f().unwrap_or_else(|e| Check::error(name, &e));
    if timing {
        check.seconds = Some(start.elapsed().as_secs_f64());
    }
    check
}

/// The validation suite for the configured group and chart. Every check
/// that applies to the group appears exactly once, in a fixed order.
pub(super) fn validation_suite(config: &RunConfig) -> Result<Vec<Check>> {
    let chart = config.build_chart()?;
    let n = config.n.unwrap_or(16);
    let t = config.timing;
    let nonabelian = matches!(config.group, GroupName::Su2 | GroupName::So3);
    let mut out = Vec::new();
    out.push(guarded("chart_conditions", t, || {
        let r = chart.validate(config.samples.max(200), config.seed);
        Ok(Check::at_most("chart_conditions", r.max_violation(), r.tolerance))
    }));
    out.push(guarded("plane_wave_properties", t, || plane_wave_check(config, &chart)));
    let grid = Arc::new(group_grid(config, &chart, n)?);
    out.push(guarded("unitarity_exact", t, || unitarity_exact(config, &grid)));
    out.push(guarded("unitarity_literal", t, || unitarity_literal(config, &grid)));
    out.push(guarded("star_commutator", t, || {
        let d = chart.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let xs: Vec<AlgebraVector> = (0..config.samples.min(20)).map(|_| random_vector(&mut rng, d, 2.0)).collect();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i + 1..d {
                worst = worst.max(star_commutator_defect(&chart, i, j, &xs)?);
            }
        }
        Ok(Check::at_most("star_commutator", worst, if nonabelian { 1e-4 } else { 1e-8 }))
    }));
    out.push(guarded("pairing_identity", t, || {
        let (f, g) = (test_function(config, &grid, 1)?, test_function(config, &grid, 2)?);
        let (a, b) = (pairing_via_omega(&f, &g)?, star_pairing(&f, &g)?);
        Ok(Check::at_most("pairing_identity", (a - b).norm() / b.norm().max(1.0), 1e-8))
    }));
    if nonabelian {
        out.push(guarded("omega_active", t, || {
            let d = chart.dim();
            let f = fourier_transform(&gaussian(&grid, &AlgebraVector::axis(d, 0, 1.0), 1.0, 0.0)?);
            let g = fourier_transform(&gaussian(&grid, &AlgebraVector::axis(d, 1, 1.0), 1.0, 0.0)?);
            let diff = (star_pairing(&f, &g)? - pointwise_pairing(&f, &g)?).norm();
            Ok(Check::above("omega_active", diff, 1e-3)
                .with_note("Gaussian bumps of width 1 at (1,0,0) and (0,1,0)"))
        }));
    }
    out.push(guarded("cyclicity", t, || {
        let fs = [test_function(config, &grid, 3)?, test_function(config, &grid, 4)?, test_function(config, &grid, 5)?];
        let value = star_pairing(&star_product(&fs[0], &fs[1])?, &fs[2])?.norm();
        let defect = cyclic_check(&fs)? / value.max(1e-300);
        Ok(Check::at_most("cyclicity", defect, if nonabelian { 1e-2 } else { 1e-8 }))
    }));
    out.push(guarded("ad_covariance", t, || ad_covariance(config, &chart, &grid)));
    Ok(out)
}

fn plane_wave_check(config: &RunConfig, chart: &Chart) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let d = chart.dim();
    let e = chart.group().identity();
    let mut worst = 0.0f64;
    for _ in 0..config.samples {
        let g = chart.point(&chart.sample_coordinates(&mut rng, 0.95))?;
        let x = random_vector(&mut rng, d, 3.0);
        let eg = plane_wave(chart, &g, &x)?;
        let inv = plane_wave(chart, &g.inverse(), &x)?;
        worst = worst
            .max((plane_wave(chart, &e, &x)? - 1.0).norm())
            .max((inv - eg.conj()).norm())
            .max((eg.norm() - 1.0).abs());
    }
    Ok(Check::at_most("plane_wave_properties", worst, 1e-12))
}

fn unitarity_exact(config: &RunConfig, grid: &Arc<GroupGrid>) -> Result<Check> {
    let (f, g) = (test_function(config, grid, 1)?, test_function(config, grid, 2)?);
    let (fv, gv) = (inverse_transform(&f), inverse_transform(&g));
    let direct: Complex64 =
        grid.weights().iter().zip(fv.values().iter().zip(gv.values())).map(|(w, (a, b))| a.conj() * b * *w).sum();
    let round_trip = inverse_transform(&fourier_transform(&fv)).max_abs_diff(&fv)?;
    let rel = (dual_inner_product(&f, &g)? - direct).norm() / (norm(&f)? * norm(&g)?);
    Ok(Check::at_most("unitarity_exact", rel.max(round_trip), 1e-12))
}

fn unitarity_literal(config: &RunConfig, grid: &Arc<GroupGrid>) -> Result<Check> {
    let d = grid.chart().dim();
    let (dual, tol) = match config.group {
        GroupName::U1 => (DualGrid::new(1, config.cutoff, config.dual_nodes, config.build_damping())?, 1e-3),
        GroupName::Rd => (DualGrid::reciprocal(d, grid.spacing(), grid.n_per_dim(), Damping::None)?, 1e-3),
        _ => (DualGrid::reciprocal(d, grid.spacing(), grid.n_per_dim(), Damping::None)?, 5e-2),
    };
    let (f, g) = (test_function(config, grid, 1)?, test_function(config, grid, 2)?);
    let exact = dual_inner_product(&f, &g)?;
    let literal = dual_inner_product_literal(&f, &g, &dual)?;
    Ok(Check::at_most("unitarity_literal", (exact - literal).norm() / (norm(&f)? * norm(&g)?), tol))
}

fn ad_covariance(config: &RunConfig, chart: &Chart, grid: &Arc<GroupGrid>) -> Result<Check> {
    let d = chart.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(17));
    let xs: Vec<AlgebraVector> = (0..20).map(|_| random_vector(&mut rng, d, 2.0)).collect();
    let (grid, f, h) = match config.group {
        GroupName::Su2 | GroupName::So3 => {
            // trace coordinates compress towards the boundary and need a finer grid
            let n = if chart.kind() == ChartKind::Trace { 32 } else { 24 };
            let fine = Arc::new(GroupGrid::new(chart, n)?.with_interpolation(Interpolation::Spectral));
            // the translate of f by h must stay negligible at the chart boundary
            let s = length_scale(chart);
            let center = AlgebraVector::from([0.6, -0.3, 0.2]).scale(s);
            let f = fourier_transform(&gaussian(&fine, &center, 0.8 * s, 0.0)?);
            let h = nearest_element(&fine, &AlgebraVector::from([0.9, 0.5, -0.6]).scale(s));
            (fine, f, h)
        }
        _ => {
            let f = test_function(config, grid, 6)?;
            let h = nearest_element(grid, &random_vector(&mut rng, d, 1.0));
            (grid.clone(), f, h)
        }
    };
    let left = DualFunction::plane_wave(grid.clone(), &h)?;
    let right = DualFunction::plane_wave(grid.clone(), &h.inverse())?;
    let conj = star_product(&star_product(&left, &f)?, &right)?;
    let scale = xs.iter().map(|x| f.evaluate(x).norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for x in &xs {
        worst = worst.max((conj.evaluate(x) - f.evaluate(&coadjoint(&h, x)?)).norm());
    }
    Ok(Check::at_most("ad_covariance", worst / scale, 1e-6))
}

fn nearest_element(grid: &GroupGrid, target: &AlgebraVector) -> GroupElement {
    let k = (0..grid.len())
        .min_by(|&a, &b| (&grid.nodes()[a] - target).norm().total_cmp(&(&grid.nodes()[b] - target).norm()))
        .unwrap_or(0);
    grid.elements()[k].clone()
}
