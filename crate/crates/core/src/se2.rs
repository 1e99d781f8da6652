//! SE(2) poses and the exp/log maps.
//!
//! A pose is `(x, y, theta)`; tangent vectors are ordered `(theta, x, y)`
//! to match the rotation-first layout of stiffness matrices and motion
//! features used throughout the crate.

use nalgebra::{Matrix2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut a = a % std::f64::consts::TAU;
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    } else if a <= -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    }
    a
}

/// A rigid planar transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose { x, y, theta }
    }

    pub fn identity() -> Self {
        Pose::new(0.0, 0.0, 0.0)
    }

    pub fn translation(&self) -> Vector2<f64> {
        Vector2::new(self.x, self.y)
    }

    pub fn rotation_matrix(&self) -> Matrix2<f64> {
        let (s, c) = self.theta.sin_cos();
        Matrix2::new(c, -s, s, c)
    }

    /// Applies the transform to a point.
    pub fn apply(&self, p: Vector2<f64>) -> Vector2<f64> {
        self.rotation_matrix() * p + self.translation()
    }

    /// Composition `self ∘ other` (apply `other` first, then `self`).
    pub fn compose(&self, other: &Pose) -> Pose {
        let t = self.apply(other.translation());
        Pose::new(t.x, t.y, self.theta + other.theta)
    }

    pub fn inverse(&self) -> Pose {
        let r_inv = self.rotation_matrix().transpose();
        let t = -(r_inv * self.translation());
        Pose::new(t.x, t.y, -self.theta)
    }

    /// Tangent vector `(theta, x, y)` with `exp(log(g)) = g`.
    ///
    /// Fails within `tol` of the `±pi` rotation, where the sign of the
    /// rotational component is ambiguous.
    pub fn log(&self, tol: f64) -> Result<Vector3<f64>> {
        let theta = wrap_angle(self.theta);
        if theta.abs() > std::f64::consts::PI - tol {
            return Err(Error::FeatureSingularity);
        }
        let v_inv = v_matrix(theta)
            .try_inverse()
            .ok_or(Error::FeatureSingularity)?;
        let rho = v_inv * self.translation();
        Ok(Vector3::new(theta, rho.x, rho.y))
    }

    /// Exponential map from a tangent vector `(theta, x, y)`.
    pub fn exp(xi: Vector3<f64>) -> Pose {
        let theta = xi.x;
        let t = v_matrix(theta) * Vector2::new(xi.y, xi.z);
        Pose::new(t.x, t.y, theta)
    }
}

/// The SE(2) left Jacobian `V(theta)` relating tangent translation to
/// group translation.
fn v_matrix(theta: f64) -> Matrix2<f64> {
    if theta.abs() < 1e-9 {
        // Second-order series keeps the map smooth through zero.
        let a = 1.0 - theta * theta / 6.0;
        let b = theta / 2.0 - theta * theta * theta / 24.0;
        Matrix2::new(a, -b, b, a)
    } else {
        let a = theta.sin() / theta;
        let b = (1.0 - theta.cos()) / theta;
        Matrix2::new(a, -b, b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn compose_inverse_is_identity() {
        let g = Pose::new(0.3, -1.2, 0.7);
        let e = g.compose(&g.inverse());
        assert_abs_diff_eq!(e.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.y, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.theta, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let xi = Pose::identity().log(1e-9).unwrap();
        assert_eq!(xi, Vector3::zeros());
    }

    #[test]
    fn log_of_pure_translation() {
        let xi = Pose::new(0.4, -0.2, 0.0).log(1e-9).unwrap();
        assert_abs_diff_eq!(xi.x, 0.0);
        assert_abs_diff_eq!(xi.y, 0.4);
        assert_abs_diff_eq!(xi.z, -0.2);
    }

    #[test]
    fn log_near_pi_is_singular() {
        let g = Pose::new(0.1, 0.1, std::f64::consts::PI);
        assert_eq!(g.log(1e-9), Err(Error::FeatureSingularity));
    }

    #[test]
    fn exp_log_round_trip() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..1000 {
            let g = Pose::new(next(), next(), next() * 3.0);
            let back = Pose::exp(g.log(1e-9).unwrap());
            assert_abs_diff_eq!(back.x, g.x, epsilon = 1e-9);
            assert_abs_diff_eq!(back.y, g.y, epsilon = 1e-9);
            assert_abs_diff_eq!(wrap_angle(back.theta - g.theta), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn apply_rotates_and_translates() {
        let g = Pose::new(1.0, 0.0, std::f64::consts::FRAC_PI_2);
        let p = g.apply(Vector2::new(1.0, 0.0));
        assert_abs_diff_eq!(p.x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 1.0, epsilon = 1e-12);
    }
}
