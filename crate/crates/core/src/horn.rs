//! Extended horn maps, parabolic renormalization and Lavaurs maps.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fatou::{FatouSolver, FatouValue, EXTENSION_MAX_ITER};
use crate::maps::{MapKind, ParabolicMap};
use crate::series::log_p;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// `E(z) = e^{2πiz}`.
pub fn exp_cyl(z: Complex64) -> Complex64 {
    (TWO_PI_I * z).exp()
}

/// Principal branch of `E⁻¹`: `log(w)/(2πi)`.
pub fn log_cyl(w: Complex64) -> Complex64 {
    log_p(w) / TWO_PI_I
}

/// Which linear normalization of `R[f] = A ∘ E ∘ h ∘ E⁻¹ ∘ B` is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `B = id`, `A = e^{−2π²γ}·id`: derivative 1 at the origin.
    #[default]
    DerivativeOne,
    /// `A` puts the critical value at 1, `B` restores derivative 1.
    CriticalValueOne,
}

/// Fatou coordinates of a map bundled with the data of its normalized horn
/// map: the singular value `v_f`, `v′ = Φ_attr(v_f)` and `a = e^{−2π²γ}`.
#[derive(Clone, Debug)]
pub struct HornContext {
    solver: FatouSolver,
    v_f: Complex64,
    v_prime: Complex64,
    a_norm: Complex64,
    normalization: Normalization,
    pre: Complex64,
    post: Complex64,
    max_iter: usize,
}

impl HornContext {
    /// Blaschke products are handled through their single-petal
    /// semiconjugates (`h[B_d]` is the restriction of `h[C_d]`).
    pub fn new(map: ParabolicMap) -> Result<Self> {
        let map = match map.kind() {
            MapKind::Blaschke(d) => ParabolicMap::new(MapKind::Cd(*d))?,
            MapKind::BInf => ParabolicMap::new(MapKind::CInf)?,
            _ => map,
        };
        let v_f = map.singular_value().ok_or_else(|| {
            Error::InvalidParameter(format!("no singular value known for {}", map.kind().name()))
        })?;
        Self::from_solver(FatouSolver::new(map)?, v_f)
    }

    pub fn from_solver(solver: FatouSolver, v_f: Complex64) -> Result<Self> {
        let v_prime = solver.phi_attr_extended(v_f, EXTENSION_MAX_ITER)?.value;
        let a_norm = (-2.0 * PI * PI * solver.gamma()).exp();
        Ok(HornContext {
            solver,
            v_f,
            v_prime,
            a_norm,
            normalization: Normalization::DerivativeOne,
            pre: Complex64::new(1.0, 0.0),
            post: a_norm,
            max_iter: EXTENSION_MAX_ITER,
        })
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        match normalization {
            Normalization::DerivativeOne => {
                self.pre = Complex64::new(1.0, 0.0);
                self.post = self.a_norm;
            }
            Normalization::CriticalValueOne => {
                let e = exp_cyl(self.v_prime);
                self.post = e.inv();
                self.pre = e * self.a_norm;
            }
        }
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.solver = self.solver.with_tol(tol);
        self
    }

    pub fn solver(&self) -> &FatouSolver {
        &self.solver
    }

    pub fn map(&self) -> &ParabolicMap {
        self.solver.map()
    }

    pub fn gamma(&self) -> Complex64 {
        self.solver.gamma()
    }

    pub fn v_f(&self) -> Complex64 {
        self.v_f
    }

    pub fn v_prime(&self) -> Complex64 {
        self.v_prime
    }

    pub fn a_norm(&self) -> Complex64 {
        self.a_norm
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    /// Scaling `B` applied to `w` before `E⁻¹`.
    pub fn renorm_prescale(&self) -> Complex64 {
        self.pre
    }

    /// Critical value `ν` of the normalized renormalization.
    pub fn critical_value(&self) -> Complex64 {
        self.post * exp_cyl(self.v_prime)
    }

    /// `h(ζ) = Φ_attr(f^m(z)) − m + n` with `z = Ψ_rep(ζ − n)`.
    pub fn horn_eval(&self, zeta: Complex64) -> Result<Complex64> {
        self.horn_value(zeta).map(|v| v.value)
    }

    /// [`horn_eval`](Self::horn_eval) with the error estimate of the
    /// attracting coordinate; `iterations` counts `n + m`.
    pub fn horn_value(&self, zeta: Complex64) -> Result<FatouValue> {
        let n = self.solver.rep_shift(zeta);
        let mut v = self.horn_value_shifted(zeta, n)?;
        v.iterations += n;
        Ok(v)
    }

    /// [`horn_eval`](Self::horn_eval) with an explicit repelling shift `n`.
    pub fn horn_eval_shifted(&self, zeta: Complex64, n: usize) -> Result<Complex64> {
        self.horn_value_shifted(zeta, n).map(|v| v.value)
    }

    fn horn_value_shifted(&self, zeta: Complex64, n: usize) -> Result<FatouValue> {
        let z = self.solver.psi_rep_shifted(zeta, n)?;
        match self.solver.phi_attr_extended(z, self.max_iter) {
            Ok(v) => Ok(v),
            Err(Error::Escaped(_)) => Err(Error::NotInDomain),
            Err(e) => Err(e),
        }
    }

    /// Averages of `h(ζ) − ζ` over 8 points of the lines `Im ζ = ±height`.
    pub fn a_up_down_estimate(&self, height: f64) -> Result<(Complex64, Complex64)> {
        if height < 3.0 {
            return Err(Error::InvalidParameter(format!("height must be >= 3, got {height}")));
        }
        let average = |im: f64| -> Result<Complex64> {
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..8 {
                let zeta = Complex64::new(j as f64 / 8.0, im);
                sum += self.horn_eval(zeta).map_err(|_| Error::HeightTooLow(height))? - zeta;
            }
            Ok(sum / 8.0)
        };
        Ok((average(height)?, average(-height)?))
    }

    /// `R[f](w) = A·E(h(E⁻¹(B·w)))`, `R[f](0) = 0`.
    pub fn renorm_eval(&self, w: Complex64) -> Result<Complex64> {
        self.renorm_eval_branch(w, 0)
    }

    /// Same as [`renorm_eval`](Self::renorm_eval) using the branch
    /// `E⁻¹ + k` of the logarithm.
    pub fn renorm_eval_branch(&self, w: Complex64, k: i64) -> Result<Complex64> {
        if w == Complex64::new(0.0, 0.0) {
            return Ok(w);
        }
        let zeta = log_cyl(self.pre * w) + k as f64;
        Ok(self.post * exp_cyl(self.horn_eval(zeta)?))
    }

    /// `g_σ(z) = Ψ_rep(Φ_attr(z) + σ)`, `z` in germ coordinates.
    pub fn lavaurs_eval(&self, sigma: Complex64, z: Complex64) -> Result<Complex64> {
        self.lavaurs_value(sigma, z).map(|v| v.value)
    }

    /// [`lavaurs_eval`](Self::lavaurs_eval) carrying the error estimate and
    /// iteration count of `Φ_attr(z)`.
    pub fn lavaurs_value(&self, sigma: Complex64, z: Complex64) -> Result<FatouValue> {
        let phi = match self.solver.phi_attr_extended(z, self.max_iter) {
            Ok(v) => v,
            Err(Error::Escaped(_)) | Err(Error::Undecided(_)) => return Err(Error::NotInBasin),
            Err(e) => return Err(e),
        };
        let value = self.solver.psi_rep_extended(phi.value + sigma, self.max_iter)?;
        Ok(FatouValue { value, ..phi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cylinder_maps_are_inverse() {
        let w = c(0.3, -0.2);
        assert!((exp_cyl(log_cyl(w)) - w).norm() < 1e-15);
        assert!((exp_cyl(c(1.0, 0.0)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn quad_context() {
        let ctx = HornContext::new(ParabolicMap::quad()).unwrap();
        assert!(ctx.v_prime().im.abs() < 1e-12);
        assert!((ctx.a_norm() - (-2.0 * PI * PI).exp()).norm() < 1e-14);
        assert_eq!(ctx.renorm_eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let zeta = c(0.3, 3.0);
        let a = ctx.horn_eval(zeta).unwrap();
        let b = ctx.horn_eval(zeta + 1.0).unwrap();
        assert!((b - a - 1.0).norm() < 1e-8);
    }

    #[test]
    fn height_precondition() {
        let ctx = HornContext::new(ParabolicMap::quad()).unwrap();
        assert!(matches!(ctx.a_up_down_estimate(2.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn critical_value_normalization_puts_value_at_one() {
        let ctx = HornContext::new(ParabolicMap::quad())
            .unwrap()
            .with_normalization(Normalization::CriticalValueOne);
        assert!((ctx.critical_value() - 1.0).norm() < 1e-12);
    }
}
