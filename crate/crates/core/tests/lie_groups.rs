use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use ncgf::lie::{
    haar_density_numeric, left_derivative, AlgebraVector, Chart, ChartKind, GroupElement, GroupKind, LieGroup,
};
use ncgf::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn series_exp(a: &DMatrix<Complex64>, terms: usize) -> DMatrix<Complex64> {
    let n = a.nrows();
    let mut out = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..terms {
        term = &term * a / Complex64::new(k as f64, 0.0);
        out += &term;
    }
    out
}

fn groups() -> Vec<LieGroup> {
    vec![LieGroup::u1(), LieGroup::su2(), LieGroup::so3(), LieGroup::rd(3)]
}

#[test]
fn structure_constants_match_matrix_commutators() {
    for g in groups() {
        let d = g.dim();
        for i in 0..d {
            for j in 0..d {
                let (ti, tj) = (g.basis_matrix(i), g.basis_matrix(j));
                let comm = &ti * &tj - &tj * &ti;
                let mut expect = DMatrix::<Complex64>::zeros(ti.nrows(), ti.ncols());
                for k in 0..d {
                    expect += g.basis_matrix(k) * Complex64::new(g.structure_constant(i, j, k), 0.0);
                    assert_eq!(g.structure_constant(i, j, k), -g.structure_constant(j, i, k));
                }
                assert!(max_diff(&comm, &expect) <= 1e-12, "{:?} {i} {j}", g.kind());
            }
        }
    }
}

#[test]
fn jacobi_identity() {
    for g in groups() {
        let d = g.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for m in 0..d {
                        let s: f64 = (0..d)
                            .map(|l| {
                                g.structure_constant(i, j, l) * g.structure_constant(l, k, m)
                                    + g.structure_constant(j, k, l) * g.structure_constant(l, i, m)
                                    + g.structure_constant(k, i, l) * g.structure_constant(l, j, m)
                            })
                            .sum();
                        assert!(s.abs() <= 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn su2_basis_orthonormal_under_trace_form() {
    // -2 tr(T_i T_j) = δ_ij
    let g = LieGroup::su2();
    for i in 0..3 {
        for j in 0..3 {
            let v = (g.basis_matrix(i) * g.basis_matrix(j)).trace() * -2.0;
            assert_abs_diff_eq!(v.re, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-15);
        }
    }
}

#[test]
fn su2_product_matches_quaternion_table() {
    // Hamilton table: i*j = k, j*k = i, k*i = j; our element q0 - i q·σ is the quaternion (q0, q).
    let i = GroupElement::quaternion([0.0, 1.0, 0.0, 0.0]);
    let j = GroupElement::quaternion([0.0, 0.0, 1.0, 0.0]);
    let k = GroupElement::quaternion([0.0, 0.0, 0.0, 1.0]);
    assert!(i.multiply(&j).unwrap().distance(&k) < 1e-15);
    assert!(j.multiply(&k).unwrap().distance(&i) < 1e-15);
    assert!(k.multiply(&i).unwrap().distance(&j) < 1e-15);
    let a = GroupElement::quaternion([0.3, -0.4, 0.5, 0.7]);
    let b = GroupElement::quaternion([-0.2, 0.9, 0.1, -0.3]);
    let prod = a.multiply(&b).unwrap();
    assert!(max_diff(&prod.matrix(), &(a.matrix() * b.matrix())) < 1e-12);
}

#[test]
fn so3_inverse_reverses_axis() {
    let g = LieGroup::so3();
    let z = AlgebraVector::from([0.3, -1.1, 0.7]);
    let r = GroupElement::exp(&g, &z).unwrap();
    let r_neg = GroupElement::exp(&g, &(-&z)).unwrap();
    assert!(r.inverse().distance(&r_neg) < 1e-12);
}

#[test]
fn closed_form_exp_matches_power_series() {
    let zs = [[0.1, 0.2, -0.3], [1.0, -2.0, 2.0], [0.0, 0.0, 3.0], [1.7, 1.7, -1.6]];
    for g in [LieGroup::su2(), LieGroup::so3(), LieGroup::rd(3)] {
        // SO(3) matrices have norm |Z|, 20 terms leave ~1e-9 at |Z| = 3
        let terms = if g.kind() == GroupKind::SO3 { 40 } else { 20 };
        for z in zs {
            let z = AlgebraVector::from(z);
            let closed = GroupElement::exp(&g, &z).unwrap().matrix();
            let series = series_exp(&g.algebra_matrix(&z), terms);
            assert!(max_diff(&closed, &series) <= 1e-12, "{:?}", g.kind());
        }
    }
    let u1 = LieGroup::u1();
    for t in [-3.0, -0.5, 0.0, 1.2, 3.0] {
        let z = AlgebraVector::from([t]);
        let closed = GroupElement::exp(&u1, &z).unwrap().matrix();
        assert!(max_diff(&closed, &series_exp(&u1.algebra_matrix(&z), 30)) <= 1e-12);
    }
}

#[test]
fn su2_half_angle_trace() {
    let g = GroupElement::exp(&LieGroup::su2(), &AlgebraVector::from([PI / 2.0, 0.0, 0.0])).unwrap();
    assert_abs_diff_eq!(g.matrix().trace().re, 2.0 * (PI / 4.0).cos(), epsilon = 1e-14);
}

#[test]
fn log_cut_locus() {
    let so3 = LieGroup::so3();
    let r = GroupElement::exp(&so3, &AlgebraVector::from([0.0, PI, 0.0])).unwrap();
    assert!(matches!(r.log(), Err(Error::CutLocus)));
    let minus_e = GroupElement::quaternion([-1.0, 0.0, 0.0, 0.0]);
    assert!(matches!(minus_e.log(), Err(Error::CutLocus)));
    assert!(matches!(GroupElement::angle(PI).log(), Err(Error::CutLocus)));
    assert!(LieGroup::u1().identity().log().unwrap().norm() == 0.0);
}

#[test]
fn adjoint_action_brute_force() {
    let zw = [([0.4, -0.2, 1.1], [0.9, 0.3, -0.5]), ([2.0, 0.1, 0.1], [-1.0, 1.0, 0.5])];
    for g in [LieGroup::su2(), LieGroup::so3()] {
        let h = GroupElement::exp(&g, &AlgebraVector::from([0.7, -1.3, 0.4])).unwrap();
        for (z, w) in zw {
            let (z, w) = (AlgebraVector::from(z), AlgebraVector::from(w));
            // h Z h^{-1} by matrices
            let hm = h.matrix();
            let conj = &hm * g.algebra_matrix(&z) * h.inverse().matrix();
            let brute = g.algebra_components(&conj);
            let ad = h.adjoint(&z).unwrap();
            assert!(ad.max_abs_diff(&brute) <= 1e-12);
            assert_abs_diff_eq!(ad.norm(), z.norm(), epsilon = 1e-12);
            // bracket equivariance
            let lhs = h.adjoint(&g.lie_bracket(&z, &w).unwrap()).unwrap();
            let rhs = g.lie_bracket(&ad, &h.adjoint(&w).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }
}

#[test]
fn lie_bracket_examples() {
    let su2 = LieGroup::su2();
    let e1 = AlgebraVector::from([1.0, 0.0, 0.0]);
    let e2 = AlgebraVector::from([0.0, 1.0, 0.0]);
    let b = su2.lie_bracket(&e1, &e2).unwrap();
    // matrix commutator oracle
    let comm = su2.basis_matrix(0) * su2.basis_matrix(1) - su2.basis_matrix(1) * su2.basis_matrix(0);
    assert!(b.max_abs_diff(&su2.algebra_components(&comm)) < 1e-15);
    assert_eq!(b.components(), &[0.0, 0.0, 1.0]);
    assert_eq!(su2.lie_bracket(&e1, &e1).unwrap().norm(), 0.0);
    let u1 = LieGroup::u1();
    assert_eq!(u1.lie_bracket(&[1.0].into(), &[2.0].into()).unwrap().norm(), 0.0);
}

#[test]
fn left_derivatives() {
    let g = LieGroup::su2();
    let e = g.identity();
    let constant = |_: &GroupElement| Complex64::new(2.5, 0.0);
    assert!(left_derivative(&g, &constant, &e, 1, 1e-3).norm() < 1e-10);
    for kind in [ChartKind::Exponential, ChartKind::Trace] {
        let chart = Chart::new(g.clone(), kind).unwrap();
        let x = AlgebraVector::from([0.8, -0.7, 0.5]);
        for i in 0..3 {
            let f = |h: &GroupElement| chart.plane_wave(h, &x).unwrap();
            let v = left_derivative(&g, &f, &e, i, 1e-3) * Complex64::new(0.0, -1.0);
            assert!((v - Complex64::new(x[i], 0.0)).norm() < 1e-6);
        }
    }
}

#[test]
fn chart_coordinates_and_points() {
    let su2 = LieGroup::su2();
    let trace = Chart::new(su2.clone(), ChartKind::Trace).unwrap();
    let theta: f64 = 1.3;
    let n = AlgebraVector::from([0.6, 0.0, 0.8]);
    let g = GroupElement::exp(&su2, &n.scale(theta)).unwrap();
    let z = trace.coordinates(&g).unwrap();
    assert!(z.max_abs_diff(&n.scale(2.0 * (theta / 2.0).sin())) < 1e-14);
    // raw -(i/2) tr(g σ^i) is -sin(θ/2) n, our normalization is -2 times it
    let sigma3 = DMatrix::from_row_slice(2, 2, &[Complex64::new(1.0, 0.0), 0.0.into(), 0.0.into(), Complex64::new(-1.0, 0.0)]);
    let raw = (g.matrix() * sigma3).trace() * Complex64::new(0.0, -0.5);
    assert_abs_diff_eq!(-2.0 * raw.re, z[2], epsilon = 1e-14);

    let so3 = Chart::new(LieGroup::so3(), ChartKind::Trace).unwrap();
    assert!(matches!(so3.point(&AlgebraVector::from([0.0, 2.0, 0.0])), Err(Error::OutOfRange(_))));
    assert!(Chart::new(LieGroup::u1(), ChartKind::Trace).is_err());

    for chart in [
        Chart::exponential(LieGroup::u1()),
        Chart::exponential(su2.clone()),
        Chart::exponential(LieGroup::so3()),
        trace.clone(),
        so3.clone(),
    ] {
        let e = chart.group().identity();
        assert_eq!(chart.coordinates(&e).unwrap().norm(), 0.0);
        assert!(chart.point(&AlgebraVector::zeros(chart.dim())).unwrap().distance(&e) < 1e-15);
        assert_abs_diff_eq!(chart.haar_density(&AlgebraVector::zeros(chart.dim())).unwrap(), 1.0);
    }
}

#[test]
fn haar_density_matches_numerical_jacobian() {
    let samples = [[0.5, 0.1, -0.3], [1.5, -1.0, 2.0], [0.0, 0.0, 2.9], [0.3, 0.3, 0.3]];
    let charts = [
        Chart::exponential(LieGroup::su2()),
        Chart::exponential(LieGroup::so3()),
        Chart::new(LieGroup::su2(), ChartKind::Trace).unwrap(),
        Chart::new(LieGroup::so3(), ChartKind::Trace).unwrap(),
    ];
    for chart in &charts {
        let r = chart.range().radius().unwrap();
        for s in samples {
            let z = AlgebraVector::from(s);
            let z = if z.norm() >= 0.95 * r { z.scale(0.9 * r / z.norm()) } else { z };
            let closed = chart.haar_density(&z).unwrap();
            let numeric = haar_density_numeric(chart, &z, 1e-5).unwrap();
            assert!((closed - numeric).abs() < 1e-6 * closed.max(1.0), "{:?} {closed} {numeric}", chart.kind());
        }
    }
    let u1 = Chart::exponential(LieGroup::u1());
    assert_eq!(u1.haar_density(&[2.0].into()).unwrap(), 1.0);
    // SU(2): ω(θ) = (sin(θ/2)/(θ/2))²
    let z = AlgebraVector::from([0.0, 2.0, 0.0]);
    assert_abs_diff_eq!(charts[0].haar_density(&z).unwrap(), 1f64.sin().powi(2), epsilon = 1e-15);
}

#[test]
fn validate_real_charts_pass() {
    let charts = [
        Chart::exponential(LieGroup::u1()),
        Chart::exponential(LieGroup::su2()),
        Chart::exponential(LieGroup::so3()),
        Chart::exponential(LieGroup::rd(3)),
        Chart::new(LieGroup::su2(), ChartKind::Trace).unwrap(),
        Chart::new(LieGroup::so3(), ChartKind::Trace).unwrap(),
    ];
    for c in charts {
        let rep = c.validate(200, 7);
        assert!(rep.pass, "{:?} {:?} {rep:?}", c.group().kind(), c.kind());
    }
}

#[test]
fn misscaled_chart_fails_condition_two() {
    let rep = Chart::exponential(LieGroup::su2()).rescaled(2.0).validate(50, 1);
    assert!(!rep.pass);
    assert!((rep.unit_derivative - 1.0).abs() < 1e-6);
    assert!(rep.inverse_odd < 1e-10 && rep.adjoint_covariance < 1e-10);
}

#[test]
fn validation_is_deterministic() {
    let c = Chart::exponential(LieGroup::so3());
    assert_eq!(c.validate(30, 99), c.validate(30, 99));
}

fn su2_vec() -> impl Strategy<Value = AlgebraVector> {
    prop::array::uniform3(-1.8f64..1.8).prop_map(AlgebraVector::from)
}

proptest! {
    #[test]
    fn group_axioms(a in su2_vec(), b in su2_vec(), c in su2_vec()) {
        for g in [LieGroup::su2(), LieGroup::so3()] {
            let (x, y, z) = (
                GroupElement::exp(&g, &a).unwrap(),
                GroupElement::exp(&g, &b).unwrap(),
                GroupElement::exp(&g, &c).unwrap(),
            );
            let lhs = x.multiply(&y).unwrap().multiply(&z).unwrap();
            let rhs = x.multiply(&y.multiply(&z).unwrap()).unwrap();
            prop_assert!(lhs.distance(&rhs) <= 1e-12);
            prop_assert!(x.multiply(&g.identity()).unwrap().distance(&x) <= 1e-12);
            prop_assert!(x.multiply(&x.inverse()).unwrap().distance(&g.identity()) <= 1e-12);
            prop_assert!(x.inverse().inverse().distance(&x) <= 1e-12);
        }
    }

    #[test]
    fn exp_log_round_trip(a in su2_vec()) {
        // |a| ≤ 1.8·√3 ≈ 3.1 < 0.9 · 2π for SU(2); rescale for SO(3)
        let su2 = LieGroup::su2();
        let back = GroupElement::exp(&su2, &a).unwrap().log().unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-10);
        let so3 = LieGroup::so3();
        let a3 = if a.norm() > 0.9 * PI { a.scale(0.9 * PI / a.norm()) } else { a.clone() };
        let back3 = GroupElement::exp(&so3, &a3).unwrap().log().unwrap();
        prop_assert!(back3.max_abs_diff(&a3) <= 1e-10);
    }

    #[test]
    fn chart_round_trip_and_covariance(a in su2_vec(), h in su2_vec()) {
        for kind in [ChartKind::Exponential, ChartKind::Trace] {
            for group in [LieGroup::su2(), LieGroup::so3()] {
                let chart = Chart::new(group.clone(), kind).unwrap();
                let r = chart.range().radius().unwrap();
                let z = if a.norm() > 0.9 * r { a.scale(0.9 * r / a.norm()) } else { a.clone() };
                let g = chart.point(&z).unwrap();
                let zz = chart.coordinates(&g).unwrap();
                prop_assert!(zz.max_abs_diff(&z) <= 1e-10);
                let hh = GroupElement::exp(&group, &h).unwrap();
                let lhs = chart.coordinates(&g.conjugate_by(&hh).unwrap()).unwrap();
                prop_assert!(lhs.max_abs_diff(&hh.adjoint(&z).unwrap()) <= 1e-10);
                let inv = chart.coordinates(&g.inverse()).unwrap();
                prop_assert!(inv.max_abs_diff(&(-&z)) <= 1e-12);
            }
        }
    }
}
