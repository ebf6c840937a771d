//! Germ data at the parabolic point: Taylor coefficients, iterative residue,
//! the residue of `dz/(f(z) − z)` and the attracting/repelling axes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maps::{MapKind, ParabolicMap};

/// Threshold below which `a2` counts as zero.
pub const DEGENERATE_A2: f64 = 1e-8;

/// Coefficients `a_0 … a_n` of the germ with the sample-doubling error estimate.
#[derive(Clone, Debug)]
pub struct TaylorCoefficients {
    pub coeffs: Vec<Complex64>,
    /// `max_k |a_k(N) − a_k(2N)|·r^k`, i.e. measured on the rescaled germ
    /// `f(rζ)/r`-style coefficients so roundoff amplification of high orders
    /// does not dominate.
    pub error: f64,
    pub radius: f64,
    pub samples: usize,
}

/// Default circle radius for coefficient and residue extraction.
pub fn default_radius(map: &ParabolicMap) -> f64 {
    match map.kind() {
        MapKind::Cd(_) | MapKind::CInf => 0.05,
        _ => 0.1,
    }
}

/// Larger radius used for the high-order coefficients feeding the Fatou series.
pub fn series_radius(map: &ParabolicMap) -> f64 {
    match map.kind() {
        MapKind::Expm1 | MapKind::ZExpZ | MapKind::Cd(_) | MapKind::CInf => 1.0,
        MapKind::Poly(c) => 0.25 / c[2].norm().max(1.0),
        _ => 0.25,
    }
}

fn dft_coeffs(map: &ParabolicMap, n: usize, radius: f64, samples: usize) -> Result<Vec<Complex64>> {
    let values: Vec<Complex64> = (0..samples)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            map.germ(Complex64::from_polar(radius, theta))
        })
        .collect::<Result<_>>()?;
    Ok((0..=n)
        .map(|k| {
            let sum = values
                .iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (j, f)| {
                    let theta = -2.0 * PI * ((j * k) % samples) as f64 / samples as f64;
                    acc + f * Complex64::from_polar(1.0, theta)
                });
            sum / (samples as f64 * radius.powi(k as i32))
        })
        .collect())
}

fn taylor_unchecked(
    map: &ParabolicMap,
    n: usize,
    radius: f64,
    samples: usize,
) -> Result<TaylorCoefficients> {
    if !(radius > 0.0) || radius > map.safe_radius() / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "radius {radius} must lie in (0, {}]",
            map.safe_radius() / 2.0
        )));
    }
    if !samples.is_power_of_two() || samples < 4 * n.max(1) {
        return Err(Error::InvalidParameter(format!(
            "samples must be a power of two >= 4n, got {samples} for n = {n}"
        )));
    }
    let coarse = dft_coeffs(map, n, radius, samples)?;
    let fine = dft_coeffs(map, n, radius, 2 * samples)?;
    let error = coarse
        .iter()
        .zip(&fine)
        .enumerate()
        .map(|(k, (a, b))| (a - b).norm() * radius.powi(k as i32))
        .fold(0.0, f64::max);
    Ok(TaylorCoefficients { coeffs: fine, error, radius, samples })
}

/// Taylor coefficients of the germ by the trapezoid rule on `|ζ| = radius`.
pub fn taylor_coeffs(
    map: &ParabolicMap,
    n: usize,
    radius: f64,
    samples: usize,
) -> Result<TaylorCoefficients> {
    let t = taylor_unchecked(map, n, radius, samples)?;
    if t.error > 1e-6 {
        return Err(Error::IllConditioned(t.error));
    }
    Ok(t)
}

/// Coefficients `a_0 … a_n` at [`series_radius`], without the conditioning gate.
pub(crate) fn series_coeffs(map: &ParabolicMap, n: usize) -> Result<Vec<Complex64>> {
    if let MapKind::Poly(c) = map.kind() {
        let mut out = c.clone();
        out.resize(n + 1, Complex64::new(0.0, 0.0));
        return Ok(out);
    }
    if matches!(map.kind(), MapKind::Quad) {
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        out[1] = Complex64::new(1.0, 0.0);
        out[2] = Complex64::new(1.0, 0.0);
        return Ok(out);
    }
    let samples = (4 * n).next_power_of_two().max(128);
    Ok(taylor_unchecked(map, n, series_radius(map), samples)?.coeffs)
}

/// `a2`, `a3`, the iterative residue and the axes of a single-petal germ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GermData {
    pub a2: Complex64,
    pub a3: Complex64,
    pub gamma: Complex64,
    pub alpha_attr: f64,
    pub alpha_rep: f64,
}

impl GermData {
    pub fn from_coefficients(a2: Complex64, a3: Complex64) -> Result<Self> {
        if a2.norm() < DEGENERATE_A2 {
            return Err(Error::DegenerateGerm(a2.norm()));
        }
        let gamma = 1.0 - a3 / (a2 * a2);
        let mut inv = a2.inv();
        // real germs: keep the axes exactly on the real line despite quadrature noise
        if inv.im.abs() < 1e-13 * inv.norm() {
            inv.im = 0.0;
        }
        if inv.re.abs() < 1e-13 * inv.norm() {
            inv.re = 0.0;
        }
        Ok(GermData { a2, a3, gamma, alpha_attr: angle(-inv), alpha_rep: angle(inv) })
    }

    /// Polynomial coefficients are read directly; every other kind goes
    /// through the Cauchy integrals of [`taylor_coeffs`].
    pub fn compute(map: &ParabolicMap) -> Result<Self> {
        if matches!(map.kind(), MapKind::Quad | MapKind::Poly(_)) {
            let a = series_coeffs(map, 3)?;
            return Self::from_coefficients(a[2], a[3]);
        }
        let t = taylor_coeffs(map, 3, default_radius(map), 64)?;
        Self::from_coefficients(t.coeffs[2], t.coeffs[3])
    }
}

impl ParabolicMap {
    /// Germ data, computed on first use and shared by later calls.
    pub fn germ_data(&self) -> Result<GermData> {
        if let Some(g) = self.germ_cache.get() {
            return Ok(*g);
        }
        let g = GermData::compute(self)?;
        Ok(*self.germ_cache.get_or_init(|| g))
    }
}

/// Argument in (−π, π].
fn angle(z: Complex64) -> f64 {
    let a = z.arg();
    if a <= -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// `γ = 1 − a3/a2²`.
pub fn iterative_residue(map: &ParabolicMap) -> Result<Complex64> {
    Ok(map.germ_data()?.gamma)
}

/// `(alpha_attr, alpha_rep) = (arg(−1/a2), arg(1/a2))`.
pub fn axes(map: &ParabolicMap) -> Result<(f64, f64)> {
    let g = map.germ_data()?;
    Ok((g.alpha_attr, g.alpha_rep))
}

/// `(1/2πi)∮ dζ/(f(ζ) − ζ)` over `|ζ| = radius`, trapezoid rule.
pub fn residue_integral(map: &ParabolicMap, radius: f64, samples: usize) -> Result<Complex64> {
    if !(radius > 0.0) || samples < 8 {
        return Err(Error::InvalidParameter("radius > 0 and samples >= 8 required".into()));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..samples {
        let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64);
        let diff = map.germ(z)? - z;
        if diff.norm() <= 1e-14 * radius {
            return Err(Error::ContourThroughZero);
        }
        // dζ/(2πi) = ζ dθ/(2π)
        sum += z / diff;
    }
    Ok(sum / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coefficients_of_closed_germs() {
        let t = taylor_coeffs(&ParabolicMap::quad(), 3, 0.1, 16).unwrap();
        assert!((t.coeffs[2] - 1.0).norm() < 1e-10);
        assert!(t.coeffs[3].norm() < 1e-10);

        let t = taylor_coeffs(&ParabolicMap::expm1(), 3, 0.1, 16).unwrap();
        assert!((t.coeffs[0]).norm() < 1e-12);
        assert!((t.coeffs[1] - 1.0).norm() < 1e-12);
        assert!((t.coeffs[2] - 0.5).norm() < 1e-10);
        assert!((t.coeffs[3] - 1.0 / 6.0).norm() < 1e-10);

        let cinf = ParabolicMap::new(MapKind::CInf).unwrap();
        let t = taylor_coeffs(&cinf, 3, 0.05, 64).unwrap();
        assert!((t.coeffs[2] - 2.0 / 3.0).norm() < 1e-8);
        assert!((t.coeffs[3] - 17.0 / 45.0).norm() < 1e-8);
    }

    #[test]
    fn sample_doubling_is_stable() {
        for map in [ParabolicMap::expm1(), ParabolicMap::new(MapKind::Cd(3)).unwrap()] {
            let r = default_radius(&map);
            let a = taylor_coeffs(&map, 4, r, 32).unwrap();
            let b = taylor_coeffs(&map, 4, r, 64).unwrap();
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn taylor_preconditions() {
        let quad = ParabolicMap::quad();
        assert!(matches!(taylor_coeffs(&quad, 3, 0.1, 10), Err(Error::InvalidParameter(_))));
        assert!(matches!(taylor_coeffs(&quad, 3, 0.1, 8), Err(Error::InvalidParameter(_))));
        assert!(matches!(taylor_coeffs(&quad, 3, 6.0, 16), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn residues() {
        assert!((iterative_residue(&ParabolicMap::quad()).unwrap() - 1.0).norm() < 1e-10);
        assert!((iterative_residue(&ParabolicMap::expm1()).unwrap() - 1.0 / 3.0).norm() < 1e-10);
        let c2 = ParabolicMap::new(MapKind::Cd(2)).unwrap();
        assert!((iterative_residue(&c2).unwrap() - 0.25).norm() < 1e-10);
    }

    #[test]
    fn residue_integrals() {
        let quad = ParabolicMap::quad();
        assert!(residue_integral(&quad, 0.1, 256).unwrap().norm() < 1e-10);
        let e = residue_integral(&ParabolicMap::expm1(), 0.1, 256).unwrap();
        assert!((e + 2.0 / 3.0).norm() < 1e-9);
        let cinf = ParabolicMap::new(MapKind::CInf).unwrap();
        let r = residue_integral(&cinf, 0.05, 256).unwrap();
        assert!((r + 17.0 / 20.0).norm() < 1e-7);
    }

    #[test]
    fn degenerate_germs() {
        let b2 = ParabolicMap::new(MapKind::Blaschke(2)).unwrap();
        assert!(matches!(iterative_residue(&b2), Err(Error::DegenerateGerm(_))));
        assert!(matches!(axes(&b2), Err(Error::DegenerateGerm(_))));
    }

    #[test]
    fn axes_examples() {
        let (a, r) = axes(&ParabolicMap::quad()).unwrap();
        assert!((a - PI).abs() < 1e-12 && r.abs() < 1e-12);
        let (a, r) = axes(&ParabolicMap::expm1()).unwrap();
        assert!((a - PI).abs() < 1e-9 && r.abs() < 1e-9);
        let poly = ParabolicMap::new(MapKind::Poly(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]))
            .unwrap();
        let (a, r) = axes(&poly).unwrap();
        assert!((a - PI / 2.0).abs() < 1e-12 && (r + PI / 2.0).abs() < 1e-12);
    }
}
