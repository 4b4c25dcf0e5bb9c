use ncgf::lie::{AlgebraVector, Chart, GroupElement, LieGroup};
use ncgf::noncomm::*;
use ncgf::quadrature::{Damping, DualGrid, GroupGrid};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn u1_grid(n: usize) -> Arc<GroupGrid> {
    Arc::new(GroupGrid::new(&Chart::exponential(LieGroup::u1()), n).unwrap())
}

fn su2_grid(n: usize) -> Arc<GroupGrid> {
    Arc::new(GroupGrid::new(&Chart::exponential(LieGroup::su2()), n).unwrap())
}

fn trig(rng: &mut ChaCha8Rng, degree: i32) -> impl Fn(f64) -> Complex64 {
    let co: Vec<(f64, Complex64)> = (-degree..=degree)
        .map(|m| (m as f64, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    move |t| co.iter().map(|(m, a)| a * Complex64::from_polar(1.0, m * t)).sum()
}

fn u1_fn(grid: &Arc<GroupGrid>, f: impl Fn(f64) -> Complex64) -> DualFunction {
    fourier_transform(&GroupFunction::from_fn(grid.clone(), |z, _| f(z[0])).unwrap())
}

/// Gaussian bump in exponential coordinates around `center`.
fn su2_bump(grid: &Arc<GroupGrid>, center: [f64; 3], width: f64, phase: f64) -> DualFunction {
    fourier_transform(
        &GroupFunction::from_fn(grid.clone(), |z, _| {
            let r2: f64 = (0..3).map(|i| (z[i] - center[i]).powi(2)).sum();
            Complex64::from_polar((-r2 / (2.0 * width * width)).exp(), phase * z[0])
        })
        .unwrap(),
    )
}

/// Low-degree polynomial in the quaternion components: smooth on all of SU(2).
fn su2_poly(grid: &Arc<GroupGrid>, seed: u64) -> DualFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<Complex64> = (0..8).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    fourier_transform(
        &GroupFunction::from_fn(grid.clone(), |_, g| {
            let q = g.as_quaternion().unwrap();
            a[0] + a[1] * q[0] + a[2] * q[1] + a[3] * q[2] + a[4] * q[3] + a[5] * q[0] * q[1] + a[6] * q[2] * q[3]
                + a[7] * q[0] * q[0]
        })
        .unwrap(),
    )
}

fn bump(t: f64) -> f64 {
    ((1.0 + t.cos()) / 2.0).powi(4)
}

fn norm(f: &DualFunction) -> f64 {
    dual_inner_product(f, f).unwrap().re.sqrt()
}

#[test]
fn inner_product_is_positive_and_matches_group_side() {
    for grid in [u1_grid(101), su2_grid(16)] {
        let f = fourier_transform(
            &GroupFunction::from_fn(grid.clone(), |z, _| Complex64::new(z[0].cos(), 0.3 * z.norm())).unwrap(),
        );
        let g = fourier_transform(&GroupFunction::from_fn(grid.clone(), |z, _| Complex64::from_polar(1.0, z[0])).unwrap());
        let ff = dual_inner_product(&f, &f).unwrap();
        assert!(ff.re > 0.0 && ff.im.abs() < 1e-12 * ff.re);
        let direct: Complex64 = grid
            .weights()
            .iter()
            .zip(f.z_density().iter().zip(g.z_density()))
            .map(|(w, (a, b))| a.conj() * b * *w)
            .sum();
        assert!((dual_inner_product(&f, &g).unwrap() - direct).norm() <= 1e-12 * direct.norm().max(1.0));
        let zero = f.combine(c(0.0), &f, c(0.0)).unwrap();
        assert_eq!(dual_inner_product(&zero, &zero).unwrap(), c(0.0));
    }
}

#[test]
fn literal_plancherel_u1() {
    let grid = u1_grid(513);
    let dual = DualGrid::new(1, 40.0, 800, Damping::Plateau).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let f = u1_fn(&grid, trig(&mut rng, 3));
        let g = u1_fn(&grid, trig(&mut rng, 3));
        let exact = dual_inner_product(&f, &g).unwrap();
        let literal = dual_inner_product_literal(&f, &g, &dual).unwrap();
        assert!((exact - literal).norm() <= 1e-3 * norm(&f) * norm(&g), "{exact} {literal}");
    }
}

#[test]
fn literal_plancherel_su2() {
    let grid = su2_grid(16);
    let dual = DualGrid::reciprocal(3, grid.spacing(), 16, Damping::None).unwrap();
    let f = su2_poly(&grid, 1);
    let g = su2_poly(&grid, 2);
    let exact = dual_inner_product(&f, &g).unwrap();
    let literal = dual_inner_product_literal(&f, &g, &dual).unwrap();
    let rel = (exact - literal).norm() / (norm(&f) * norm(&g));
    assert!(rel <= 5e-2, "{exact} {literal} rel {rel:.3e}");
}

#[test]
fn omega_pairing_equals_star_pairing() {
    for grid in [u1_grid(101), su2_grid(16)] {
        let d = grid.chart().dim();
        let f = fourier_transform(
            &GroupFunction::from_fn(grid.clone(), |z, _| Complex64::new((z[0] - 0.3).cos(), z[d - 1].sin())).unwrap(),
        );
        let g = fourier_transform(&GroupFunction::from_fn(grid.clone(), |z, _| Complex64::from_polar(1.0 + z[0], z.norm())).unwrap());
        let a = pairing_via_omega(&f, &g).unwrap();
        let b = star_pairing(&f, &g).unwrap();
        assert!((a - b).norm() <= 1e-8 * b.norm().max(1.0), "{a} {b}");
    }
}

#[test]
fn u1_pairings_coincide() {
    let grid = u1_grid(64);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = u1_fn(&grid, trig(&mut rng, 2));
    let g = u1_fn(&grid, trig(&mut rng, 2));
    let a = pairing_via_omega(&f, &g).unwrap();
    let b = pointwise_pairing(&f, &g).unwrap();
    assert!((a - b).norm() <= 1e-14 * a.norm().max(1.0));
}

#[test]
fn omega_pairing_literal_u1() {
    // the pointwise X-integral needs φ̃ψ̃ to decay inside the cutoff, so the
    // inputs vanish to high order at the cut
    let grid = u1_grid(513);
    let dual = DualGrid::new(1, 40.0, 800, Damping::None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (p, q) = (trig(&mut rng, 3), trig(&mut rng, 3));
    let f = u1_fn(&grid, |t| p(t) * bump(t));
    let g = u1_fn(&grid, |t| q(t) * bump(t));
    let literal = pairing_via_omega_literal(&f, &g, &dual).unwrap();
    let star = star_pairing(&f, &g).unwrap();
    assert!((literal - star).norm() <= 1e-3 * norm(&f) * norm(&g), "{literal} {star}");
}

#[test]
fn omega_correction_matters_on_su2() {
    // documented pair: Gaussian bumps of width 1 at (1, 0, 0) and (0, 1, 0)
    let grid = su2_grid(16);
    let f = su2_bump(&grid, [1.0, 0.0, 0.0], 1.0, 0.0);
    let g = su2_bump(&grid, [0.0, 1.0, 0.0], 1.0, 0.0);
    let star = star_pairing(&f, &g).unwrap();
    let plain = pointwise_pairing(&f, &g).unwrap();
    assert!((star - plain).norm() > 1e-3, "{star} {plain}");
}

#[test]
fn cyclic_invariance() {
    let grid = u1_grid(129);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = u1_fn(&grid, trig(&mut rng, 3));
    let g = u1_fn(&grid, trig(&mut rng, 3));
    assert!(cyclic_check(&[f.clone(), g.clone()]).unwrap() <= 1e-8);
    assert_eq!(cyclic_check(std::slice::from_ref(&f)).unwrap(), 0.0);
    let h = u1_fn(&grid, trig(&mut rng, 3));
    assert!(cyclic_check(&[f, g, h]).unwrap() <= 1e-8);
}

#[test]
fn cyclic_invariance_su2_coarse() {
    let grid = su2_grid(12);
    let fs = [
        su2_bump(&grid, [0.8, 0.0, 0.0], 1.2, 0.0),
        su2_bump(&grid, [0.0, 0.8, 0.0], 1.2, 0.3),
        su2_bump(&grid, [0.0, 0.0, 0.8], 1.2, 0.0),
    ];
    let value = star_pairing(&star_product(&fs[0], &fs[1]).unwrap(), &fs[2]).unwrap();
    let defect = cyclic_check(&fs).unwrap();
    assert!(defect <= 1e-2 * value.norm(), "{defect} vs {value}");
}

fn dual_samples(d: usize, n: usize, radius: f64, seed: u64) -> Vec<AlgebraVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| AlgebraVector::new((0..d).map(|_| rng.gen_range(-radius..radius)).collect())).collect()
}

/// Grid element nearest to the given exponential coordinates.
fn near_node(grid: &GroupGrid, z: [f64; 3]) -> GroupElement {
    let target = AlgebraVector::from(z);
    let k = (0..grid.len())
        .min_by(|&a, &b| {
            let da = (&grid.nodes()[a] - &target).norm();
            let db = (&grid.nodes()[b] - &target).norm();
            da.total_cmp(&db)
        })
        .unwrap();
    grid.elements()[k].clone()
}

fn ad_defect(f: &DualFunction, h: &GroupElement, xs: &[AlgebraVector]) -> f64 {
    let grid = f.grid();
    let left = DualFunction::plane_wave(grid.clone(), h).unwrap();
    let right = DualFunction::plane_wave(grid.clone(), &h.inverse()).unwrap();
    let conj = star_product(&star_product(&left, f).unwrap(), &right).unwrap();
    let scale = xs.iter().map(|x| f.evaluate(x).norm()).fold(0.0, f64::max);
    xs.iter()
        .map(|x| (conj.evaluate(x) - f.evaluate(&coadjoint(h, x).unwrap())).norm())
        .fold(0.0, f64::max)
        / scale
}

#[test]
fn ad_covariance_u1() {
    let grid = u1_grid(129);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = u1_fn(&grid, trig(&mut rng, 4));
    let h = grid.elements()[40].clone();
    assert!(ad_defect(&f, &h, &dual_samples(1, 20, 5.0, 1)) <= 1e-6);
}

#[test]
fn ad_covariance_su2_multilinear_converges() {
    // h is kept at a moderate angle so the intermediate translate of f stays
    // inside the chart ball
    let defect = |n: usize| {
        let grid = su2_grid(n);
        let f = su2_bump(&grid, [0.6, -0.3, 0.2], 1.5, 0.0);
        ad_defect(&f, &near_node(&grid, [0.9, 0.5, -0.6]), &dual_samples(3, 20, 2.0, 2))
    };
    let (coarse, fine) = (defect(16), defect(24));
    assert!(fine < 5e-2 && coarse / fine > 1.8, "{coarse:.3e} {fine:.3e}");
}

#[test]
fn ad_covariance_su2_spectral() {
    let grid = Arc::new(
        GroupGrid::new(&Chart::exponential(LieGroup::su2()), 24).unwrap().with_interpolation(Interpolation::Spectral),
    );
    let f = su2_bump(&grid, [0.6, -0.3, 0.2], 0.8, 0.0);
    let h = near_node(&grid, [0.9, 0.5, -0.6]);
    let d = ad_defect(&f, &h, &dual_samples(3, 20, 2.0, 3));
    assert!(d <= 1e-6, "{d:.3e}");
}
