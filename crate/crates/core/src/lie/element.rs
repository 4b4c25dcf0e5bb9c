use super::{check_dim, AlgebraVector, GroupKind, LieGroup};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Translation(Vec<f64>),
    Angle(f64),
    /// `q0 - i q·σ`
    Quaternion([f64; 4]),
    Rotation(Matrix3<f64>),
}

/// An element of one of the concrete groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    kind: GroupKind,
    repr: Repr,
}

/// Wrap an angle into `(-π, π]`.
pub(crate) fn wrap_angle(x: f64) -> f64 {
    let mut y = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if y <= -PI {
        y += 2.0 * PI;
    }
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

fn hamilton(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quat_to_rotation(q: &[f64; 4]) -> Matrix3<f64> {
    let [w, x, y, z] = *q;
    Matrix3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    )
}

/// `sin(x)/x` with a series near zero.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Rotation angle in `[0, π]` and unit axis of an SO(3) matrix.
/// The axis is arbitrary when the angle is zero.
fn rotation_axis_angle(r: &Matrix3<f64>) -> (f64, Vector3<f64>) {
    let axial = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]) * 0.5;
    let cos = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let sin = axial.norm();
    let theta = sin.atan2(cos);
    if cos > -0.5 {
        let axis = if sin > 0.0 { axial / sin } else { Vector3::x() };
        return (theta, axis);
    }
    // Near π the antisymmetric part is small; recover the axis from R + Rᵀ.
    let s = (r + r.transpose()) * 0.5 - Matrix3::identity() * cos;
    let (mut best, mut col) = (0, s[(0, 0)]);
    for i in 1..3 {
        if s[(i, i)] > col {
            best = i;
            col = s[(i, i)];
        }
    }
    let mut axis = s.column(best).into_owned();
    let n = axis.norm();
    axis /= n;
    if axis.dot(&axial) < 0.0 {
        axis = -axis;
    }
    (theta, axis)
}

impl GroupElement {
    pub fn identity(group: &LieGroup) -> Self {
        let repr = match group.kind() {
            GroupKind::Rd(d) => Repr::Translation(vec![0.0; d]),
            GroupKind::U1 => Repr::Angle(0.0),
            GroupKind::SU2 => Repr::Quaternion([1.0, 0.0, 0.0, 0.0]),
            GroupKind::SO3 => Repr::Rotation(Matrix3::identity()),
        };
        GroupElement {
            kind: group.kind(),
            repr,
        }
    }

    pub fn translation(x: Vec<f64>) -> Self {
        GroupElement {
            kind: GroupKind::Rd(x.len()),
            repr: Repr::Translation(x),
        }
    }

    pub fn angle(theta: f64) -> Self {
        GroupElement {
            kind: GroupKind::U1,
            repr: Repr::Angle(wrap_angle(theta)),
        }
    }

    /// SU(2) element `q0 - i (q1 σ1 + q2 σ2 + q3 σ3)`; the quaternion is normalized.
    pub fn quaternion(q: [f64; 4]) -> Self {
        let n = q.iter().map(|a| a * a).sum::<f64>().sqrt();
        GroupElement {
            kind: GroupKind::SU2,
            repr: Repr::Quaternion(q.map(|a| a / n)),
        }
    }

    pub fn rotation(r: Matrix3<f64>) -> Self {
        GroupElement {
            kind: GroupKind::SO3,
            repr: Repr::Rotation(r),
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn as_quaternion(&self) -> Option<[f64; 4]> {
        match &self.repr {
            Repr::Quaternion(q) => Some(*q),
            _ => None,
        }
    }

    pub fn as_rotation(&self) -> Option<Matrix3<f64>> {
        match &self.repr {
            Repr::Rotation(r) => Some(*r),
            _ => None,
        }
    }

    pub fn as_angle(&self) -> Option<f64> {
        match &self.repr {
            Repr::Angle(t) => Some(*t),
            _ => None,
        }
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.kind != other.kind {
            return Err(Error::GroupMismatch(self.kind.to_string(), other.kind.to_string()));
        }
        let repr = match (&self.repr, &other.repr) {
            (Repr::Translation(a), Repr::Translation(b)) => {
                Repr::Translation(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Repr::Angle(a), Repr::Angle(b)) => Repr::Angle(wrap_angle(a + b)),
            (Repr::Quaternion(a), Repr::Quaternion(b)) => Repr::Quaternion(hamilton(a, b)),
            (Repr::Rotation(a), Repr::Rotation(b)) => Repr::Rotation(a * b),
            _ => unreachable!("kind and representation always agree"),
        };
        Ok(GroupElement {
            kind: self.kind,
            repr,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        let repr = match &self.repr {
            Repr::Translation(a) => Repr::Translation(a.iter().map(|x| -x).collect()),
            Repr::Angle(a) => Repr::Angle(wrap_angle(-a)),
            Repr::Quaternion(q) => Repr::Quaternion([q[0], -q[1], -q[2], -q[3]]),
            Repr::Rotation(r) => Repr::Rotation(r.transpose()),
        };
        GroupElement {
            kind: self.kind,
            repr,
        }
    }

    /// `h g h^{-1}`.
    pub fn conjugate_by(&self, h: &GroupElement) -> Result<GroupElement> {
        h.multiply(self)?.multiply(&h.inverse())
    }

    /// Closed-form `exp(Z^i T_i)`.
    pub fn exp(group: &LieGroup, z: &AlgebraVector) -> Result<GroupElement> {
        check_dim(group.dim(), z)?;
        let c = z.components();
        let repr = match group.kind() {
            GroupKind::Rd(_) => Repr::Translation(c.to_vec()),
            GroupKind::U1 => Repr::Angle(wrap_angle(c[0])),
            GroupKind::SU2 => {
                let theta = z.norm();
                let s = 0.5 * sinc(0.5 * theta);
                Repr::Quaternion([(0.5 * theta).cos(), s * c[0], s * c[1], s * c[2]])
            }
            GroupKind::SO3 => {
                let v = Vector3::new(c[0], c[1], c[2]);
                let theta = v.norm();
                let k = skew(&v);
                let a = sinc(theta);
                let b = if theta < 1e-4 {
                    0.5 - theta * theta / 24.0
                } else {
                    (1.0 - theta.cos()) / (theta * theta)
                };
                Repr::Rotation(Matrix3::identity() + k * a + k * k * b)
            }
        };
        Ok(GroupElement {
            kind: group.kind(),
            repr,
        })
    }

    /// Principal logarithm. Fails with [`Error::CutLocus`] on the boundary of
    /// the principal domain (`θ = π` for U(1) and SO(3), `-e` for SU(2)).
    pub fn log(&self) -> Result<AlgebraVector> {
        let z = self.log_unchecked();
        let on_cut = match &self.repr {
            Repr::Translation(_) => false,
            Repr::Angle(t) => t.abs() >= PI,
            Repr::Quaternion(q) => {
                let v = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
                q[0] < 0.0 && v < 1e-12
            }
            Repr::Rotation(r) => rotation_axis_angle(r).0 >= PI - 1e-12,
        };
        if on_cut {
            Err(Error::CutLocus)
        } else {
            Ok(z)
        }
    }

    /// Logarithm that accepts cut-locus elements, returning one of the
    /// equivalent boundary coordinates. Used for interpolation lookups.
    pub(crate) fn log_unchecked(&self) -> AlgebraVector {
        match &self.repr {
            Repr::Translation(a) => AlgebraVector::new(a.clone()),
            Repr::Angle(t) => AlgebraVector::new(vec![*t]),
            Repr::Quaternion(q) => {
                let v = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
                let theta = 2.0 * v.atan2(q[0]);
                if v < 1e-300 {
                    if q[0] > 0.0 {
                        return AlgebraVector::new(vec![2.0 * q[1], 2.0 * q[2], 2.0 * q[3]]);
                    }
                    return AlgebraVector::new(vec![theta, 0.0, 0.0]);
                }
                let f = theta / v;
                AlgebraVector::new(vec![f * q[1], f * q[2], f * q[3]])
            }
            Repr::Rotation(r) => {
                let (theta, axis) = rotation_axis_angle(r);
                if theta < 1e-6 {
                    // first-order: axial vector is Z itself
                    let z = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]) * 0.5;
                    return AlgebraVector::new(vec![z.x, z.y, z.z]);
                }
                let z = axis * theta;
                AlgebraVector::new(vec![z.x, z.y, z.z])
            }
        }
    }

    /// Rotation-angle class parameter: `|θ|` for U(1), `[0, 2π]` for SU(2),
    /// `[0, π]` for SO(3), `|x|` for R^d. Central functions depend on nothing else.
    pub fn class_angle(&self) -> f64 {
        match &self.repr {
            Repr::Translation(a) => a.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Repr::Angle(t) => t.abs(),
            Repr::Quaternion(q) => {
                let v = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
                2.0 * v.atan2(q[0])
            }
            Repr::Rotation(r) => rotation_axis_angle(r).0,
        }
    }

    /// Components of `h (Z^i T_i) h^{-1}`.
    pub fn adjoint(&self, z: &AlgebraVector) -> Result<AlgebraVector> {
        let c = z.components();
        let rot = match &self.repr {
            Repr::Translation(_) | Repr::Angle(_) => return Ok(z.clone()),
            Repr::Quaternion(q) => quat_to_rotation(q),
            Repr::Rotation(r) => *r,
        };
        if c.len() != 3 {
            return Err(Error::LengthMismatch {
                expected: 3,
                got: c.len(),
            });
        }
        let v = rot * Vector3::new(c[0], c[1], c[2]);
        Ok(AlgebraVector::new(vec![v.x, v.y, v.z]))
    }

    /// Matrix in the defining representation (see module docs).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match &self.repr {
            Repr::Translation(a) => {
                let d = a.len();
                let mut m = DMatrix::<Complex64>::identity(d + 1, d + 1);
                for (i, x) in a.iter().enumerate() {
                    m[(i, d)] = c(*x, 0.0);
                }
                m
            }
            Repr::Angle(t) => DMatrix::from_element(1, 1, Complex64::from_polar(1.0, *t)),
            Repr::Quaternion(q) => DMatrix::from_row_slice(
                2,
                2,
                &[c(q[0], -q[3]), c(-q[2], -q[1]), c(q[2], -q[1]), c(q[0], q[3])],
            ),
            Repr::Rotation(r) => DMatrix::from_fn(3, 3, |i, j| c(r[(i, j)], 0.0)),
        }
    }

    /// Largest entrywise distance between matrix representations. For U(1)
    /// this is the wrapped angle difference.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        if let (Repr::Angle(a), Repr::Angle(b)) = (&self.repr, &other.repr) {
            return wrap_angle(a - b).abs();
        }
        let (a, b) = (self.matrix(), other.matrix());
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Image in SO(3) of an SU(2) element.
    pub fn to_rotation(&self) -> Option<GroupElement> {
        self.as_quaternion().map(|q| GroupElement::rotation(quat_to_rotation(&q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn so3_log_near_pi() {
        let g = LieGroup::so3();
        let z = AlgebraVector::from([0.0, (PI - 1e-7) / 2f64.sqrt(), (PI - 1e-7) / 2f64.sqrt()]);
        let r = GroupElement::exp(&g, &z).unwrap();
        let back = r.log().unwrap();
        assert!(back.max_abs_diff(&z) < 1e-7);
    }
}
