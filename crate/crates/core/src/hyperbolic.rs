//! Hyperbolic distances in `𝔻` (metric `|dz|/(1 − |z|²)`) and `ℍ` (metric
//! `|dz|/(2 Im z)`), and the sub-domains `⌊U⌋_r` of disks and half-planes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance in the upper half-plane.
pub fn dist_h(a: Complex64, b: Complex64) -> Result<f64> {
    if !(a.im > 0.0 && b.im > 0.0) {
        return Err(Error::DomainError(format!("points {a} and {b} must lie in the upper half-plane")));
    }
    Ok(((b - a).norm() / (2.0 * (a.im * b.im).sqrt())).asinh())
}

/// Distance in the unit disk.
pub fn dist_d(a: Complex64, b: Complex64) -> Result<f64> {
    if !(a.norm() < 1.0 && b.norm() < 1.0) {
        return Err(Error::DomainError(format!("points {a} and {b} must lie in the unit disk")));
    }
    Ok(((a - b) / (1.0 - a.conj() * b)).norm().atanh())
}

/// `ℓ(x) = argtanh x`, the distance from 0 to `x` in `𝔻`.
pub fn ell(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::DomainError(format!("ell needs 0 <= x < 1, got {x}")));
    }
    Ok(x.atanh())
}

/// `L(ε) = ℓ(1 − ε) = ½ log((2 − ε)/ε)`.
pub fn big_l(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::DomainError(format!("big_l needs 0 < eps <= 1, got {eps}")));
    }
    Ok(0.5 * ((2.0 - eps) / eps).ln())
}

/// A disk or an upper half-plane `{Im z > floor}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelDomain {
    Disk { center: Complex64, radius: f64 },
    UpperHalfPlane { floor: f64 },
}

impl ModelDomain {
    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::DomainError(format!("radius must be positive, got {radius}")));
        }
        Ok(ModelDomain::Disk { center, radius })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            ModelDomain::Disk { center, radius } => (z - center).norm() < radius,
            ModelDomain::UpperHalfPlane { floor } => z.im > floor,
        }
    }

    /// Hyperbolic distance of `U` between two of its points.
    pub fn dist(&self, a: Complex64, b: Complex64) -> Result<f64> {
        match *self {
            ModelDomain::Disk { center, radius } => dist_d((a - center) / radius, (b - center) / radius),
            ModelDomain::UpperHalfPlane { floor } => {
                let shift = Complex64::new(0.0, floor);
                dist_h(a - shift, b - shift)
            }
        }
    }

    /// `⌊U⌋_r`: the image of `B(0, r)` under the conformal isomorphism
    /// `𝔻 → U` fixing 0, i.e. the points at distance `< ℓ(r)` from 0.
    pub fn sub_domain(&self, r: f64) -> Result<ModelDomain> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::DomainError(format!("r must lie in (0, 1), got {r}")));
        }
        if !self.contains(Complex64::new(0.0, 0.0)) {
            return Err(Error::DomainError("0 is not in the domain".into()));
        }
        match *self {
            ModelDomain::Disk { center, radius } => {
                // φ(ζ) = c + R·(ζ + p)/(1 + p̄ζ) with p = −c/R
                let p = -center / radius;
                let p2 = p.norm_sqr();
                let denom = 1.0 - p2 * r * r;
                Ok(ModelDomain::Disk {
                    center: center + radius * p * (1.0 - r * r) / denom,
                    radius: radius * r * (1.0 - p2) / denom,
                })
            }
            ModelDomain::UpperHalfPlane { floor } => {
                // φ(ζ) = 2ihζ/(1 − ζ) with h = −floor maps [−r, r] onto the
                // vertical diameter [−2hr/(1 + r), 2hr/(1 − r)]·i
                let h = -floor;
                Ok(ModelDomain::Disk {
                    center: Complex64::new(0.0, h * 2.0 * r * r / (1.0 - r * r)),
                    radius: 2.0 * h * r / (1.0 - r * r),
                })
            }
        }
    }
}
