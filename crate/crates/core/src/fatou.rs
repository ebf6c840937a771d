//! Petals, attracting/repelling Fatou coordinates and the repelling
//! parameterization `Ψ_rep`.
//!
//! All points handled by [`FatouSolver`] are in germ coordinates (parabolic
//! point at 0). Fatou coordinates are expansion-normalized:
//! `Φ_attr = u − γ log_p u + o(1)` and `Φ_rep = u − γ log_p(−u) + o(1)` with
//! `u = −1/(a2 z)`.
//!
//! A coordinate is evaluated by pushing the point deep into its petal
//! (`|Re u| ≥ deep`) and reading off the asymptotic expansion of
//! [`FormalFatou`] there, corrected by the number of steps taken.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::germ::{self, GermData};
use crate::maps::{s_map, MapKind, ParabolicMap};
use crate::series::{log_p, FormalFatou};

/// Number of correction terms kept in the asymptotic expansion.
pub const SERIES_TERMS: usize = 12;
/// Default iteration budget for the extended coordinates.
pub const EXTENSION_MAX_ITER: usize = 100_000;
/// Default iteration budget for petal limits.
pub const PETAL_MAX_ITER: usize = 1_000_000;
pub const DEFAULT_TOL: f64 = 1e-10;

const PETAL_SAMPLES: usize = 64;
const MAX_HALVINGS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PetalKind {
    Attracting,
    Repelling,
}

/// Open disk of diameter `[0, r0·e^{iα}]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Petal {
    pub kind: PetalKind,
    pub r0: f64,
    pub alpha: f64,
    pub validated: bool,
}

impl Petal {
    pub fn center(&self) -> Complex64 {
        Complex64::from_polar(self.r0 / 2.0, self.alpha)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center()).norm() < self.r0 / 2.0
    }

    /// The 64 validation samples: 4 concentric rings of 16 points.
    pub fn samples(&self) -> Vec<Complex64> {
        let c = self.center();
        let rho = self.r0 / 2.0;
        let mut out = Vec::with_capacity(PETAL_SAMPLES);
        for s in [0.2, 0.45, 0.7, 0.95] {
            for j in 0..16 {
                let theta = 2.0 * PI * (j as f64 + 0.5) / 16.0;
                out.push(c + Complex64::from_polar(rho * s, theta));
            }
        }
        out
    }
}

/// A Fatou-coordinate value with the difference of the last two estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FatouValue {
    pub value: Complex64,
    pub err_estimate: f64,
    pub iterations: usize,
}

/// Outcome of following an orbit towards the attracting petal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasinStatus {
    /// First entry time into the attracting petal.
    Attracted(usize),
    Escaped,
    Undecided,
}

/// How [`FatouSolver::phi_petal_with`] extracts the limit of `w_n − n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FatouScheme {
    /// Asymptotic expansion read off deep in the petal.
    Series,
    /// `w = u − γ log_p u` with first-order Richardson extrapolation of `w_n − n`.
    Richardson,
}

fn rep_threshold(deep: f64, gamma: Complex64) -> f64 {
    deep + gamma.norm() * (deep.ln() + PI) + 1.0
}

fn u_of(a2: Complex64, z: Complex64) -> Complex64 {
    -(a2 * z).inv()
}

fn z_of(a2: Complex64, u: Complex64) -> Complex64 {
    -(a2 * u).inv()
}

/// Checks the petal condition on the 64 samples: `|u′ − (u ± 1)| ≤ 1/4` under
/// `f` (attracting) or the inverse branch (repelling), and `|γ/u| ≤ 1/4`.
pub fn validate_petal(map: &ParabolicMap, germ: &GermData, petal: &Petal) -> bool {
    let a2 = germ.a2;
    petal.samples().into_iter().all(|z| {
        if !map.germ_in_safe_region(z) {
            return false;
        }
        let u = u_of(a2, z);
        if (germ.gamma / u).norm() > 0.25 {
            return false;
        }
        let (image, shift) = match petal.kind {
            PetalKind::Attracting => (map.germ(z), 1.0),
            PetalKind::Repelling => (map.inverse_branch_zero(z, 1e-15), -1.0),
        };
        match image {
            Ok(w) if w != Complex64::new(0.0, 0.0) => {
                (u_of(a2, w) - (u + shift)).norm() <= 0.25
            }
            _ => false,
        }
    })
}

/// Starts at `r0 = 1/(8|a2|)` and halves until the petal validates.
pub fn choose_petal(map: &ParabolicMap, germ: &GermData, kind: PetalKind) -> Result<Petal> {
    let alpha = match kind {
        PetalKind::Attracting => germ.alpha_attr,
        PetalKind::Repelling => germ.alpha_rep,
    };
    let mut petal = Petal { kind, r0: 1.0 / (8.0 * germ.a2.norm()), alpha, validated: false };
    for _ in 0..MAX_HALVINGS {
        if validate_petal(map, germ, &petal) {
            petal.validated = true;
            return Ok(petal);
        }
        petal.r0 /= 2.0;
    }
    Err(Error::NoPetal(MAX_HALVINGS))
}

/// Fatou coordinates of one single-petal map.
///
/// Construction computes the germ, both petals and the asymptotic expansion
/// once; afterwards every evaluation is a pure function of its arguments.
#[derive(Clone, Debug)]
pub struct FatouSolver {
    map: ParabolicMap,
    germ: GermData,
    series: FormalFatou,
    attr: Petal,
    rep: Petal,
    deep: f64,
    rep_threshold: f64,
    tol: f64,
}

impl FatouSolver {
    pub fn new(map: ParabolicMap) -> Result<Self> {
        let germ = map.germ_data()?;
        let taylor = germ::series_coeffs(&map, SERIES_TERMS + 3)?;
        let mut series = FormalFatou::from_taylor(&taylor, SERIES_TERMS)?;
        // keep the low-order quantities consistent with the reported germ data
        series.gamma = germ.gamma;
        let attr = choose_petal(&map, &germ, PetalKind::Attracting)?;
        let rep = choose_petal(&map, &germ, PetalKind::Repelling)?;
        let entry = 1.0 / (attr.r0.min(rep.r0) * germ.a2.norm());
        let deep = entry.max(30.0).max(8.0 * germ.gamma.norm()).max(series.radius_for(1e-17));
        Ok(FatouSolver {
            map,
            germ,
            series,
            attr,
            rep,
            deep,
            rep_threshold: rep_threshold(deep, germ.gamma),
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Overrides the depth at which the expansion is read off. Values of
    /// `Φ` computed at different depths agree up to the truncation error,
    /// which makes a deeper solver an independent check on a default one.
    pub fn with_depth(mut self, deep: f64) -> Self {
        self.deep = deep;
        self.rep_threshold = rep_threshold(deep, self.germ.gamma);
        self
    }

    pub fn map(&self) -> &ParabolicMap {
        &self.map
    }

    pub fn germ(&self) -> &GermData {
        &self.germ
    }

    pub fn series(&self) -> &FormalFatou {
        &self.series
    }

    pub fn attracting_petal(&self) -> &Petal {
        &self.attr
    }

    pub fn repelling_petal(&self) -> &Petal {
        &self.rep
    }

    pub fn gamma(&self) -> Complex64 {
        self.germ.gamma
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `|Re u|` beyond which the expansion is read off.
    pub fn depth(&self) -> f64 {
        self.deep
    }

    /// `Ψ_rep` is evaluated directly from the expansion for `Re Z ≤ −threshold`.
    pub fn rep_threshold(&self) -> f64 {
        self.rep_threshold
    }

    pub fn u(&self, z: Complex64) -> Complex64 {
        u_of(self.germ.a2, z)
    }

    /// `u − γ log_p u`, the first two terms of the attracting coordinate.
    pub fn w_attr(&self, z: Complex64) -> Complex64 {
        let u = self.u(z);
        u - self.germ.gamma * log_p(u)
    }

    fn step(&self, z: Complex64) -> Result<Complex64> {
        let w = self.map.germ(z)?;
        if !self.map.germ_in_safe_region(w) {
            return Err(Error::Escaped(0));
        }
        Ok(w)
    }

    /// Attracting Fatou coordinate of a point of the attracting petal.
    pub fn phi_petal(&self, z: Complex64) -> Result<FatouValue> {
        self.phi_petal_with(z, self.tol, FatouScheme::Series)
    }

    pub fn phi_petal_with(&self, z: Complex64, tol: f64, scheme: FatouScheme) -> Result<FatouValue> {
        if !self.attr.contains(z) {
            return Err(Error::PetalEscape);
        }
        match scheme {
            FatouScheme::Series => self.phi_petal_series(z, tol),
            FatouScheme::Richardson => self.phi_petal_richardson(z, tol),
        }
    }

    fn phi_petal_series(&self, z: Complex64, tol: f64) -> Result<FatouValue> {
        let mut z = z;
        let mut n = 0usize;
        let mut u = self.u(z);
        while u.re < self.deep {
            z = self.step(z).map_err(|_| Error::PetalEscape)?;
            n += 1;
            if !self.attr.contains(z) {
                return Err(Error::PetalEscape);
            }
            if n >= PETAL_MAX_ITER {
                return Err(Error::NoConvergence { what: "attracting petal", iterations: n });
            }
            u = self.u(z);
        }
        let mut estimate = self.series.attracting(u) - n as f64;
        loop {
            z = self.step(z).map_err(|_| Error::PetalEscape)?;
            n += 1;
            u = self.u(z);
            let next = self.series.attracting(u) - n as f64;
            let err = (next - estimate).norm();
            if err < tol {
                return Ok(FatouValue { value: next, err_estimate: err, iterations: n });
            }
            if n >= PETAL_MAX_ITER {
                return Err(Error::NoConvergence { what: "attracting petal", iterations: n });
            }
            estimate = next;
        }
    }

    fn phi_petal_richardson(&self, z: Complex64, tol: f64) -> Result<FatouValue> {
        let gamma = self.germ.gamma;
        let w = |z: Complex64| {
            let u = self.u(z);
            u - gamma * log_p(u)
        };
        let mut z = z;
        let mut e_prev = w(z);
        let mut hat_prev: Option<Complex64> = None;
        for n in 1..=PETAL_MAX_ITER {
            z = self.step(z).map_err(|_| Error::PetalEscape)?;
            if !self.attr.contains(z) {
                return Err(Error::PetalEscape);
            }
            let e = w(z) - n as f64;
            let hat = e + (e - e_prev) * n as f64;
            if let Some(h) = hat_prev {
                let err = (hat - h).norm();
                if err < tol && n > 2 {
                    return Ok(FatouValue { value: hat, err_estimate: err, iterations: n });
                }
            }
            hat_prev = Some(hat);
            e_prev = e;
        }
        Err(Error::NoConvergence { what: "richardson petal limit", iterations: PETAL_MAX_ITER })
    }

    /// Repelling Fatou coordinate of a point of the repelling petal, by
    /// iterating the inverse branch fixing 0.
    pub fn phi_rep_petal(&self, z: Complex64) -> Result<FatouValue> {
        if !self.rep.contains(z) {
            return Err(Error::PetalEscape);
        }
        let mut z = z;
        let mut n = 0usize;
        let mut u = self.u(z);
        let mut estimate: Option<Complex64> = None;
        loop {
            if -u.re >= self.deep {
                let value = self.series.repelling(u) + n as f64;
                if let Some(prev) = estimate {
                    let err = (value - prev).norm();
                    if err < self.tol {
                        return Ok(FatouValue { value, err_estimate: err, iterations: n });
                    }
                }
                estimate = Some(value);
            }
            z = self.map.inverse_branch_zero(z, 1e-16)?;
            n += 1;
            if !self.rep.contains(z) {
                return Err(Error::PetalEscape);
            }
            if n >= PETAL_MAX_ITER {
                return Err(Error::NoConvergence { what: "repelling petal", iterations: n });
            }
            u = self.u(z);
        }
    }

    /// Follows the orbit of `z` until it enters the attracting petal.
    pub fn basin_test(&self, z: Complex64, max_iter: usize) -> BasinStatus {
        let mut z = z;
        for n in 0..=max_iter {
            if !z.is_finite() || !self.map.germ_in_safe_region(z) {
                return BasinStatus::Escaped;
            }
            if self.attr.contains(z) {
                return BasinStatus::Attracted(n);
            }
            if n == max_iter {
                break;
            }
            z = match self.map.germ(z) {
                Ok(w) => w,
                Err(_) => return BasinStatus::Escaped,
            };
        }
        BasinStatus::Undecided
    }

    /// `Φ_attr` extended to the basin by `Φ(z) = Φ(f^n(z)) − n`.
    pub fn phi_attr_extended(&self, z: Complex64, max_iter: usize) -> Result<FatouValue> {
        let mut z = z;
        for n in 0..=max_iter {
            if !z.is_finite() || !self.map.germ_in_safe_region(z) {
                return Err(Error::Escaped(n));
            }
            if self.attr.contains(z) {
                let mut v = self.phi_petal(z)?;
                v.value -= n as f64;
                v.iterations += n;
                return Ok(v);
            }
            if n == max_iter {
                break;
            }
            z = self.map.germ(z).map_err(|_| Error::Escaped(n))?;
        }
        Err(Error::Undecided(max_iter))
    }

    /// Inverse of the expansion on the repelling side: `u` with
    /// `u − γ log_p(−u) + Σ c_m u^{−m} = target`, Newton from `target + γ log_p(−target)`.
    fn invert_rep_series(&self, target: Complex64) -> Result<Complex64> {
        let gamma = self.germ.gamma;
        let mut u = target + gamma * log_p(-target);
        for _ in 0..50 {
            let step = (self.series.repelling(u) - target) / self.series.derivative(u);
            u -= step;
            if step.norm() <= 1e-15 * u.norm() {
                return Ok(u);
            }
        }
        Err(Error::NoConvergence { what: "repelling series inversion", iterations: 50 })
    }

    /// Shift `n ≥ 0` such that `Z − n` lies in the region where `Ψ_rep` is
    /// read off the expansion.
    pub fn rep_shift(&self, big_z: Complex64) -> usize {
        (big_z.re + self.rep_threshold + 2.0).ceil().max(0.0) as usize
    }

    /// `Ψ_rep(Z) = f^n(Ψ_rep(Z − n))`, with `Ψ_rep(Z − n)` from the inverted
    /// expansion of the repelling coordinate.
    pub fn psi_rep_extended(&self, big_z: Complex64, max_iter: usize) -> Result<Complex64> {
        if !big_z.is_finite() {
            return Err(Error::NotInDomain);
        }
        let n = self.rep_shift(big_z);
        if n > max_iter {
            return Err(Error::NoConvergence { what: "repelling shift", iterations: n });
        }
        self.psi_rep_shifted(big_z, n)
    }

    /// [`psi_rep_extended`](Self::psi_rep_extended) with an explicit shift.
    pub fn psi_rep_shifted(&self, big_z: Complex64, n: usize) -> Result<Complex64> {
        let u = self.invert_rep_series(big_z - n as f64)?;
        let mut z = z_of(self.germ.a2, u);
        for _ in 0..n {
            z = self.map.germ(z).map_err(|_| Error::NotInDomain)?;
            if !z.is_finite() || !self.map.germ_in_safe_region(z) {
                return Err(Error::NotInDomain);
            }
        }
        Ok(z)
    }
}

/// Attracting Fatou coordinate of the Blaschke products `B_d` (and `B_∞`)
/// through their single-petal semiconjugates: `Φ[B_d] = Φ[C_d] ∘ S` on the disk.
#[derive(Clone, Debug)]
pub struct BlaschkeFatou {
    blaschke: ParabolicMap,
    inner: FatouSolver,
}

impl BlaschkeFatou {
    pub fn new(blaschke: ParabolicMap) -> Result<Self> {
        let semi = match blaschke.kind() {
            MapKind::Blaschke(d) => MapKind::Cd(*d),
            MapKind::BInf => MapKind::CInf,
            _ => {
                return Err(Error::InvalidParameter(
                    "semiconjugate Fatou coordinate needs blaschke or b_inf".into(),
                ))
            }
        };
        Ok(BlaschkeFatou { blaschke, inner: FatouSolver::new(ParabolicMap::new(semi)?)? })
    }

    pub fn map(&self) -> &ParabolicMap {
        &self.blaschke
    }

    pub fn semiconjugate(&self) -> &FatouSolver {
        &self.inner
    }

    /// `Φ_attr[B_d](z)` for `z` in the unit disk (native coordinates).
    pub fn phi_attr_extended(&self, z: Complex64, max_iter: usize) -> Result<FatouValue> {
        if z.norm() >= 1.0 {
            return Err(Error::NotInBasin);
        }
        self.inner.phi_attr_extended(s_map(z)?, max_iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quad_petal_accepts_initial_radius() {
        let map = ParabolicMap::quad();
        let germ = GermData::compute(&map).unwrap();
        let petal = choose_petal(&map, &germ, PetalKind::Attracting).unwrap();
        assert!((petal.r0 - 0.125).abs() < 1e-12);
        assert!(petal.validated);
        let forced = Petal { kind: PetalKind::Attracting, r0: 0.9, alpha: PI, validated: false };
        assert!(!validate_petal(&map, &germ, &forced));
    }

    #[test]
    fn expm1_repelling_petal_on_positive_side() {
        let map = ParabolicMap::expm1();
        let germ = GermData::compute(&map).unwrap();
        let petal = choose_petal(&map, &germ, PetalKind::Repelling).unwrap();
        assert!(petal.validated);
        assert!(petal.alpha.abs() < 1e-9);
        assert!(petal.center().re > 0.0);
    }

    #[test]
    fn petal_membership() {
        let p = Petal { kind: PetalKind::Attracting, r0: 0.2, alpha: PI, validated: true };
        assert!(p.contains(c(-0.1, 0.0)));
        assert!(p.contains(c(-0.19, 0.0)));
        assert!(!p.contains(c(0.0, 0.0)));
        assert!(!p.contains(c(0.01, 0.0)));
    }

    #[test]
    fn basin_examples() {
        let s = FatouSolver::new(ParabolicMap::quad()).unwrap();
        assert!(matches!(s.basin_test(c(-0.5, 0.0), 1000), BasinStatus::Attracted(_)));
        assert_eq!(s.basin_test(c(1.0, 0.0), 1000), BasinStatus::Escaped);
        assert_eq!(s.basin_test(c(0.0, 0.0), 1000), BasinStatus::Undecided);
        assert!(matches!(s.phi_attr_extended(c(1.0, 0.0), 1000), Err(Error::Escaped(_))));
    }

    #[test]
    fn petal_functional_equation() {
        let s = FatouSolver::new(ParabolicMap::quad()).unwrap();
        for z in [c(-0.05, 0.01), c(-0.1, -0.02), c(-0.001, 0.0)] {
            let a = s.phi_petal(z).unwrap().value;
            let b = s.phi_petal(s.map().eval(z).unwrap()).unwrap().value;
            assert!((b - a - 1.0).norm() < 1e-8);
        }
        assert!(matches!(s.phi_petal(c(0.05, 0.0)), Err(Error::PetalEscape)));
    }

    #[test]
    fn repelling_roundtrip() {
        let s = FatouSolver::new(ParabolicMap::quad()).unwrap();
        for big_z in [c(-60.0, 0.5), c(-45.0, -2.0)] {
            let z = s.psi_rep_extended(big_z, 1000).unwrap();
            let back = s.phi_rep_petal(z).unwrap().value;
            assert!((back - big_z).norm() < 1e-9, "{big_z}: {back}");
        }
    }

    #[test]
    fn blaschke_requires_disk() {
        let b = BlaschkeFatou::new(ParabolicMap::new(MapKind::Blaschke(2)).unwrap()).unwrap();
        assert!(matches!(b.phi_attr_extended(c(1.5, 0.0), 100), Err(Error::NotInBasin)));
        assert!(b.phi_attr_extended(c(0.2, 0.1), 100_000).is_ok());
    }
}
