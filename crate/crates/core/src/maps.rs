//! Catalog of maps with a parabolic fixed point.
//!
//! Every map is exposed in two coordinate systems: its native coordinate
//! ([`ParabolicMap::eval`]) and the germ coordinate ([`ParabolicMap::germ`])
//! in which the parabolic point sits at the origin. The Blaschke family lives
//! at `z = 1` natively and is recentered through `z = 1 + ζ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which member of the catalog a [`ParabolicMap`] is.
#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    /// `z + z²`
    Quad,
    /// `e^z − 1`
    Expm1,
    /// `z·e^z`
    ZExpZ,
    /// `((z + a)/(1 + a z))^d` with `a = (d − 1)/(d + 1)`, parabolic at 1.
    Blaschke(u32),
    /// `(z^d + a)/(1 + a z^d)`, the Blaschke product conjugated by the disk
    /// automorphism; critical point at 0, parabolic at 1.
    BlaschkeTilde(u32),
    /// `exp(2(z − 1)/(z + 1))`, the limit of `Blaschke(d)` as `d → ∞`.
    BInf,
    /// The semiconjugate of `Blaschke(d)` by `S`, parabolic at 0 with one petal.
    Cd(u32),
    /// `(tan √v)²`, the `d = ∞` member of the `Cd` family.
    CInf,
    /// `Σ c_k z^k` with `c_0 = 0`, `c_1 = 1`, `c_2 ≠ 0`.
    Poly(Vec<Complex64>),
}

impl MapKind {
    pub fn name(&self) -> &'static str {
        match self {
            MapKind::Quad => "quad",
            MapKind::Expm1 => "expm1",
            MapKind::ZExpZ => "zexpz",
            MapKind::Blaschke(_) => "blaschke",
            MapKind::BlaschkeTilde(_) => "blaschke_tilde",
            MapKind::BInf => "b_inf",
            MapKind::Cd(_) => "c_d",
            MapKind::CInf => "c_inf",
            MapKind::Poly(_) => "poly",
        }
    }
}

/// JSON form of a map: `{"v":1, "kind": "...", "d": 2, "coeffs": [[re, im], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(default = "MapSpec::schema_version")]
    pub v: u32,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<[f64; 2]>>,
}

impl MapSpec {
    fn schema_version() -> u32 {
        1
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MapSpec = serde_json::from_str(text)?;
        if spec.v != 1 {
            return Err(Error::Json(format!("unsupported schema version {}", spec.v)));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map spec serializes")
    }

    pub fn build(&self) -> Result<ParabolicMap> {
        let need_d = || {
            self.d
                .ok_or_else(|| Error::InvalidParameter(format!("kind {} needs \"d\"", self.kind)))
        };
        let kind = match self.kind.as_str() {
            "quad" => MapKind::Quad,
            "expm1" => MapKind::Expm1,
            "zexpz" => MapKind::ZExpZ,
            "blaschke" => MapKind::Blaschke(need_d()?),
            "blaschke_tilde" => MapKind::BlaschkeTilde(need_d()?),
            "b_inf" => MapKind::BInf,
            "c_d" => MapKind::Cd(need_d()?),
            "c_inf" => MapKind::CInf,
            "poly" => {
                let coeffs = self.coeffs.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("kind poly needs \"coeffs\"".into())
                })?;
                MapKind::Poly(coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect())
            }
            other => return Err(Error::InvalidParameter(format!("unknown map kind {other:?}"))),
        };
        ParabolicMap::new(kind)
    }
}

impl From<&ParabolicMap> for MapSpec {
    fn from(map: &ParabolicMap) -> Self {
        let (d, coeffs) = match &map.kind {
            MapKind::Blaschke(d) | MapKind::BlaschkeTilde(d) | MapKind::Cd(d) => (Some(*d), None),
            MapKind::Poly(c) => (None, Some(c.iter().map(|z| [z.re, z.im]).collect())),
            _ => (None, None),
        };
        MapSpec { v: 1, kind: map.kind.name().to_string(), d, coeffs }
    }
}

/// A catalog map together with the constants its evaluator needs.
#[derive(Clone, Debug)]
pub struct ParabolicMap {
    kind: MapKind,
    /// `a = (d − 1)/(d + 1)` for the Blaschke kinds.
    blaschke_a: f64,
    /// Odd and even parts of `(1 + u/d)^d` as polynomials in `s = u²`.
    odd: Vec<f64>,
    even: Vec<f64>,
    /// Written once by [`ParabolicMap::germ_data`].
    pub(crate) germ_cache: std::sync::OnceLock<crate::germ::GermData>,
}

impl ParabolicMap {
    pub fn new(kind: MapKind) -> Result<Self> {
        let mut map = ParabolicMap {
            kind,
            blaschke_a: 0.0,
            odd: Vec::new(),
            even: Vec::new(),
            germ_cache: std::sync::OnceLock::new(),
        };
        match &map.kind {
            MapKind::Blaschke(d) | MapKind::BlaschkeTilde(d) | MapKind::Cd(d) => {
                let d = *d;
                if d < 2 {
                    return Err(Error::InvalidParameter(format!("degree must be >= 2, got {d}")));
                }
                map.blaschke_a = (d as f64 - 1.0) / (d as f64 + 1.0);
                if matches!(map.kind, MapKind::Cd(_)) {
                    let (odd, even) = odd_even_parts(d);
                    map.odd = odd;
                    map.even = even;
                }
            }
            MapKind::Poly(c) => {
                if c.len() < 3 {
                    return Err(Error::InvalidParameter("poly needs at least 3 coefficients".into()));
                }
                if c[0].norm() > 1e-14 || (c[1] - ONE).norm() > 1e-14 {
                    return Err(Error::InvalidParameter(
                        "poly coefficients must start with 0, 1".into(),
                    ));
                }
                if c[2].norm() < 1e-12 {
                    return Err(Error::InvalidParameter(
                        "poly needs a2 != 0 (single attracting petal)".into(),
                    ));
                }
                if c.iter().any(|z| !z.is_finite()) {
                    return Err(Error::InvalidParameter("non-finite coefficient".into()));
                }
            }
            _ => {}
        }
        Ok(map)
    }

    pub fn quad() -> Self {
        Self::new(MapKind::Quad).unwrap()
    }

    pub fn expm1() -> Self {
        Self::new(MapKind::Expm1).unwrap()
    }

    /// `z ↦ conj(f(conj z))`. Every kind except a non-real `poly` is real.
    pub fn conjugate(&self) -> Self {
        match &self.kind {
            MapKind::Poly(c) => Self::new(MapKind::Poly(c.iter().map(|z| z.conj()).collect()))
                .expect("conjugate coefficients stay valid"),
            _ => self.clone(),
        }
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn spec(&self) -> MapSpec {
        MapSpec::from(self)
    }

    /// Location of the parabolic point in native coordinates.
    pub fn fixed_point(&self) -> Complex64 {
        match self.kind {
            MapKind::Blaschke(_) | MapKind::BlaschkeTilde(_) | MapKind::BInf => ONE,
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Radius of the region where evaluation is trusted.
    ///
    /// For the Blaschke kinds this is a radius around the origin (the maps
    /// are only of interest on the unit disk); for the others it is centered
    /// at the parabolic point.
    pub fn safe_radius(&self) -> f64 {
        match self.kind {
            MapKind::Quad | MapKind::Poly(_) => 10.0,
            MapKind::Expm1 | MapKind::ZExpZ => 20.0,
            MapKind::Blaschke(_) | MapKind::BlaschkeTilde(_) | MapKind::BInf => 0.999,
            MapKind::Cd(_) | MapKind::CInf => 5.0,
        }
    }

    pub fn in_safe_region(&self, z: Complex64) -> bool {
        match self.kind {
            MapKind::Blaschke(_) | MapKind::BlaschkeTilde(_) | MapKind::BInf => {
                z.norm() <= self.safe_radius()
            }
            _ => (z - self.fixed_point()).norm() <= self.safe_radius(),
        }
    }

    pub fn domain_hint(&self) -> String {
        match self.kind {
            MapKind::Quad | MapKind::Poly(_) => "entire polynomial; |z| <= 10".into(),
            MapKind::Expm1 | MapKind::ZExpZ => "entire transcendental; |z| <= 20".into(),
            MapKind::Blaschke(_) | MapKind::BlaschkeTilde(_) | MapKind::BInf => {
                "unit disk; |z| <= 0.999".into()
            }
            MapKind::Cd(_) | MapKind::CInf => {
                "basin is C minus [0, +inf); |v| <= 5, poles on the positive axis".into()
            }
        }
    }

    /// Whether the parabolic point has exactly one attracting petal
    /// (`a2 ≠ 0`). The Blaschke kinds have two petals at `z = 1`.
    pub fn is_single_petal(&self) -> bool {
        !matches!(self.kind, MapKind::Blaschke(_) | MapKind::BlaschkeTilde(_) | MapKind::BInf)
    }

    /// The singular value in the immediate basin, in germ coordinates.
    pub fn singular_value(&self) -> Option<Complex64> {
        match &self.kind {
            MapKind::Quad => Some(Complex64::new(-0.25, 0.0)),
            MapKind::Expm1 | MapKind::Cd(_) | MapKind::CInf => Some(Complex64::new(-1.0, 0.0)),
            MapKind::ZExpZ => Some(Complex64::new(-(-1.0f64).exp(), 0.0)),
            // B_d's critical value is 0, i.e. -1 after recentering at 1.
            MapKind::Blaschke(_) => Some(Complex64::new(-1.0, 0.0)),
            MapKind::BlaschkeTilde(_) => Some(Complex64::new(self.blaschke_a - 1.0, 0.0)),
            MapKind::BInf => Some(Complex64::new((-2.0f64).exp() - 1.0, 0.0)),
            MapKind::Poly(c) if c.len() == 3 => Some(-c[2].inv() / 4.0),
            MapKind::Poly(_) => None,
        }
    }

    /// Radius (in germ coordinates) of a disk on which the branch of `f⁻¹`
    /// fixing the parabolic point inverts `f`.
    pub fn branch_radius(&self) -> f64 {
        match &self.kind {
            MapKind::Quad => 0.25,
            MapKind::Expm1 | MapKind::ZExpZ => 0.5,
            MapKind::Cd(_) | MapKind::CInf => 0.5,
            MapKind::Poly(c) => 0.25 / c[2].norm().max(1.0),
            _ => 0.05,
        }
    }

    /// Value of the map in native coordinates.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let w = match &self.kind {
            MapKind::Quad => z + z * z,
            MapKind::Expm1 => expm1(z),
            MapKind::ZExpZ => z * z.exp(),
            MapKind::Blaschke(d) => blaschke(z, self.blaschke_a, *d),
            MapKind::BlaschkeTilde(d) => {
                let p = z.powu(*d);
                (p + self.blaschke_a) / (ONE + p * self.blaschke_a)
            }
            MapKind::BInf => b_inf(z),
            MapKind::Cd(_) => {
                let s = -z;
                let r = horner_real(&self.odd, s) / horner_real(&self.even, s);
                z * r * r
            }
            MapKind::CInf => {
                let t = tanhc((-z).sqrt());
                z * t * t
            }
            MapKind::Poly(c) => horner(c, z),
        };
        if w.is_finite() {
            Ok(w)
        } else {
            Err(Error::NonFinite(z))
        }
    }

    /// Like [`eval`](Self::eval), also reporting whether `z` was outside the
    /// safe region (best-effort value).
    pub fn eval_flagged(&self, z: Complex64) -> Result<(Complex64, bool)> {
        Ok((self.eval(z)?, !self.in_safe_region(z)))
    }

    /// `f′(z)` in native coordinates, from closed formulas.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let w = match &self.kind {
            MapKind::Quad => ONE + z * 2.0,
            MapKind::Expm1 => z.exp(),
            MapKind::ZExpZ => (ONE + z) * z.exp(),
            MapKind::Blaschke(d) => {
                let a = self.blaschke_a;
                let den = ONE + z * a;
                let mu = (z + a) / den;
                mu.powu(d - 1) * (*d as f64) * (1.0 - a * a) / (den * den)
            }
            MapKind::BlaschkeTilde(d) => {
                let a = self.blaschke_a;
                let p = z.powu(*d);
                let den = ONE + p * a;
                z.powu(d - 1) * (*d as f64) * (1.0 - a * a) / (den * den)
            }
            MapKind::BInf => {
                let zp1 = z + 1.0;
                b_inf(z) * 4.0 / (zp1 * zp1)
            }
            MapKind::Cd(_) => {
                let s = -z;
                let o = horner_real(&self.odd, s);
                let e = horner_real(&self.even, s);
                let r = o / e;
                let dods = horner_real_derivative(&self.odd, s);
                let deds = horner_real_derivative(&self.even, s);
                // dR/dv = -(dR/ds)
                let drdv = -(dods * e - o * deds) / (e * e);
                r * r + z * r * drdv * 2.0
            }
            MapKind::CInf => {
                let u = (-z).sqrt();
                let th = u.tanh();
                tanhc(u) * (ONE - th * th)
            }
            MapKind::Poly(c) => {
                let dc: Vec<Complex64> =
                    c.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
                horner(&dc, z)
            }
        };
        if w.is_finite() {
            Ok(w)
        } else {
            Err(Error::NonFinite(z))
        }
    }

    /// The map in germ coordinates: `ζ ↦ f(p + ζ) − p`, `p` the parabolic point.
    pub fn germ(&self, zeta: Complex64) -> Result<Complex64> {
        let p = self.fixed_point();
        if p == Complex64::new(0.0, 0.0) {
            self.eval(zeta)
        } else {
            Ok(self.eval(p + zeta)? - p)
        }
    }

    pub fn germ_derivative(&self, zeta: Complex64) -> Result<Complex64> {
        self.derivative(self.fixed_point() + zeta)
    }

    /// Germ-coordinate version of [`in_safe_region`](Self::in_safe_region).
    pub fn germ_in_safe_region(&self, zeta: Complex64) -> bool {
        self.in_safe_region(self.fixed_point() + zeta)
    }

    /// The branch of `f⁻¹` fixing the parabolic point, in germ coordinates.
    ///
    /// Newton's method on `x ↦ f(x) − z` seeded at `x₀ = z`.
    pub fn inverse_branch_zero(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        const MAX_STEPS: usize = 50;
        if z == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        // germs recentered from p ≠ 0 carry roundoff of order ε·|p|
        let floor = 4.0 * f64::EPSILON * (z.norm() + self.fixed_point().norm());
        let mut x = z;
        for _ in 0..MAX_STEPS {
            let fx = self.germ(x)? - z;
            let dfx = self.germ_derivative(x)?;
            let step = fx / dfx;
            if !step.is_finite() {
                return Err(Error::NonFinite(x));
            }
            x -= step;
            if step.norm() <= (tol * x.norm()).max(floor) || step.norm() < 1e-300 {
                let residual = (self.germ(x)? - z).norm();
                if residual <= tol.max(floor) {
                    return Ok(x);
                }
            }
        }
        Err(Error::NoConvergence { what: "inverse branch", iterations: MAX_STEPS })
    }

    /// `C_d` (or `C_∞`) evaluated as `S ∘ B_d ∘ S⁻¹`, with `S⁻¹` landing in
    /// the unit disk. Only defined for the `Cd`/`CInf` kinds and off the slit.
    pub fn eval_via_semiconjugacy(&self, v: Complex64) -> Result<Complex64> {
        let z = s_inverse(v)?;
        let bz = match self.kind {
            MapKind::Cd(d) => blaschke(z, self.blaschke_a, d),
            MapKind::CInf => b_inf(z),
            _ => {
                return Err(Error::InvalidParameter(
                    "semiconjugacy route only exists for c_d and c_inf".into(),
                ))
            }
        };
        s_map(bz)
    }
}

/// `S(z) = (i(1 − z)/(1 + z))²`, the 2:1 map semiconjugating `B_d` to `C_d`.
pub fn s_map(z: Complex64) -> Result<Complex64> {
    let w = I * (ONE - z) / (ONE + z);
    let v = w * w;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(z))
    }
}

/// The preimage of `v` under [`s_map`] lying in the unit disk.
pub fn s_inverse(v: Complex64) -> Result<Complex64> {
    if !v.is_finite() {
        return Err(Error::NonFinite(v));
    }
    if v.im == 0.0 && v.re >= 0.0 {
        return Err(Error::BranchError(v));
    }
    // With q = √(−v) (principal, Re q > 0) the disk preimage is (1 − q)/(1 + q).
    let q = (-v).sqrt();
    let z = (ONE - q) / (ONE + q);
    if z.norm() >= 1.0 {
        return Err(Error::BranchError(v));
    }
    Ok(z)
}

fn blaschke(z: Complex64, a: f64, d: u32) -> Complex64 {
    ((z + a) / (ONE + z * a)).powu(d)
}

fn b_inf(z: Complex64) -> Complex64 {
    ((z - 1.0) * 2.0 / (z + 1.0)).exp()
}

/// `e^z − 1` without cancellation near 0.
pub fn expm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
}

/// `tanh(u)/u`, even in `u`.
fn tanhc(u: Complex64) -> Complex64 {
    if u.norm() < 1e-3 {
        let s = u * u;
        ONE - s / 3.0 + s * s * (2.0 / 15.0) - s * s * s * (17.0 / 315.0)
    } else {
        u.tanh() / u
    }
}

/// Coefficients (in `s = u²`) of the odd part divided by `u` and of the even
/// part of `(1 + u/d)^d`.
fn odd_even_parts(d: u32) -> (Vec<f64>, Vec<f64>) {
    let df = d as f64;
    let mut c = 1.0;
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for k in 0..=d {
        if k > 0 {
            c *= (df - k as f64 + 1.0) / (k as f64 * df);
        }
        if k % 2 == 0 {
            even.push(c);
        } else {
            odd.push(c);
        }
    }
    (odd, even)
}

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn horner_real(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

fn horner_real_derivative(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, a)| acc * z + a * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn catalog() -> Vec<ParabolicMap> {
        let mut kinds = vec![
            MapKind::Quad,
            MapKind::Expm1,
            MapKind::ZExpZ,
            MapKind::BInf,
            MapKind::CInf,
            MapKind::Poly(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.3, -0.2)]),
        ];
        for d in [2, 3, 5] {
            kinds.push(MapKind::Blaschke(d));
            kinds.push(MapKind::BlaschkeTilde(d));
            kinds.push(MapKind::Cd(d));
        }
        kinds.into_iter().map(|k| ParabolicMap::new(k).unwrap()).collect()
    }

    #[test]
    fn fixed_point_and_multiplier() {
        for map in catalog() {
            let p = map.fixed_point();
            assert!((map.eval(p).unwrap() - p).norm() < 1e-12, "{:?}", map.kind());
            assert!((map.derivative(p).unwrap() - 1.0).norm() < 1e-9, "{:?}", map.kind());
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        for map in catalog() {
            for z in [c(-0.3, 0.2), c(0.1, -0.25), c(-0.05, 0.0)] {
                let z = map.fixed_point() + z;
                let fd = (map.eval(z + h).unwrap() - map.eval(z - h).unwrap()) / (2.0 * h);
                let an = map.derivative(z).unwrap();
                assert!((fd - an).norm() < 1e-8 * an.norm().max(1.0), "{:?} at {z}", map.kind());
            }
        }
    }

    #[test]
    fn catalog_values() {
        let b2 = ParabolicMap::new(MapKind::Blaschke(2)).unwrap();
        assert!((b2.eval(c(0.0, 0.0)).unwrap() - 1.0 / 9.0).norm() < 1e-15);
        assert!((b2.eval(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!((b2.derivative(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);

        let binf = ParabolicMap::new(MapKind::BInf).unwrap();
        assert!((binf.eval(c(0.0, 0.0)).unwrap() - (-2.0f64).exp()).norm() < 1e-15);
        assert!((binf.derivative(c(0.0, 0.0)).unwrap() - 4.0 * (-2.0f64).exp()).norm() < 1e-14);
        assert!((binf.derivative(c(0.0, 0.0)).unwrap().re - 0.541341).abs() < 1e-6);

        let cinf = ParabolicMap::new(MapKind::CInf).unwrap();
        let v = 0.01;
        let series = v + (2.0 / 3.0) * v * v + (17.0 / 45.0) * v * v * v;
        let got = cinf.eval(c(v, 0.0)).unwrap();
        assert!((got.re - series).abs() < 1e-8);
        assert!((got.re - 0.1f64.tan().powi(2)).abs() < 1e-15);
        assert!((got.re - 0.01006705).abs() < 1e-8);

        assert_eq!(ParabolicMap::quad().eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(ParabolicMap::expm1().eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(ParabolicMap::quad().derivative(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn c2_has_closed_form() {
        // C_2(v) = v/(1 - v/4)^2
        let c2 = ParabolicMap::new(MapKind::Cd(2)).unwrap();
        for v in [c(-1.0, 0.0), c(0.3, 0.7), c(-2.0, -1.5)] {
            let want = v / ((ONE - v / 4.0) * (ONE - v / 4.0));
            assert!((c2.eval(v).unwrap() - want).norm() < 1e-14);
        }
    }

    #[test]
    fn s_map_values() {
        assert!(s_map(c(1.0, 0.0)).unwrap().norm() < 1e-16);
        assert!((s_map(c(0.0, 0.0)).unwrap() + 1.0).norm() < 1e-16);
        assert!(matches!(s_map(c(-1.0, 0.0)), Err(Error::NonFinite(_))));
        let z = c(0.3, 0.2);
        assert!((s_inverse(s_map(z).unwrap()).unwrap() - z).norm() < 1e-14);
        assert!(matches!(s_inverse(c(2.0, 0.0)), Err(Error::BranchError(_))));
        assert!(matches!(s_inverse(c(0.0, 0.0)), Err(Error::BranchError(_))));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ParabolicMap::new(MapKind::Blaschke(1)).is_err());
        assert!(ParabolicMap::new(MapKind::Cd(0)).is_err());
        let flat = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(ParabolicMap::new(MapKind::Poly(flat)).is_err());
        let shifted = vec![c(0.1, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        assert!(ParabolicMap::new(MapKind::Poly(shifted)).is_err());
    }

    #[test]
    fn inverse_branch_examples() {
        let quad = ParabolicMap::quad();
        assert_eq!(quad.inverse_branch_zero(c(0.0, 0.0), 1e-14).unwrap(), c(0.0, 0.0));
        let x = quad.inverse_branch_zero(quad.eval(c(0.1, 0.0)).unwrap(), 1e-14).unwrap();
        assert!((x - 0.1).norm() < 1e-12);
        // Closed form of the branch: (-1 + sqrt(1 + 4w))/2.
        let closed = (-1.0 + (1.0f64 + 0.04).sqrt()) / 2.0;
        let x = quad.inverse_branch_zero(c(0.01, 0.0), 1e-15).unwrap();
        assert!((x.re - closed).abs() < 1e-15);
        assert!((x.re - 0.00990195).abs() < 1e-8);
    }

    #[test]
    fn json_descriptor() {
        let spec = MapSpec::from_json(r#"{"kind":"c_d","d":3}"#).unwrap();
        let map = spec.build().unwrap();
        assert_eq!(map.kind(), &MapKind::Cd(3));
        let again = MapSpec::from_json(&map.spec().to_json()).unwrap();
        assert_eq!(again, spec);
        assert!(MapSpec::from_json(r#"{"v":2,"kind":"quad"}"#).is_err());
        assert!(MapSpec::from_json(r#"{"kind":"blaschke"}"#).unwrap().build().is_err());
        let poly = MapSpec::from_json(r#"{"kind":"poly","coeffs":[[0,0],[1,0],[0,1]]}"#)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(poly.eval(c(0.5, 0.0)).unwrap(), c(0.5, 0.25));
    }
}
