//! Dynamical and structural chessboards and their rasterization.
//!
//! The dynamical chessboard partitions the parabolic basin by the preimage
//! of the line `v′ + ℝ` under `Φ_attr`; the structural one pulls back the
//! circle through the critical value of the renormalization. Rendering is
//! row-partitioned and per-pixel pure, so the output bytes do not depend on
//! the number of workers.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatou::FatouValue;
use crate::horn::{log_cyl, HornContext};
use crate::maps::{s_map, MapKind, MapSpec, ParabolicMap};

/// Pixel budget used when a job does not specify one.
pub const RENDER_MAX_ITER: usize = 20_000;
pub const MAX_PIXELS: usize = 100_000_000;
/// `|Im(Φ − v′)|` below this counts as on the graph and is painted yellow.
pub const GRAPH_TIE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Yellow,
    Blue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shade {
    Light,
    Dark,
}

/// Classification of one point. Color and shade only exist for boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellClass {
    Escape,
    Undecided,
    Box { color: Color, shade: Shade },
}

impl CellClass {
    /// Box containing the point whose coordinate is `value`, relative to `v′`.
    pub fn from_coordinate(value: Complex64, v_prime: Complex64) -> Self {
        let rel = value - v_prime;
        let color = if rel.im > 0.0 || rel.im.abs() < GRAPH_TIE { Color::Yellow } else { Color::Blue };
        let shade = if (rel.re.floor() as i64).rem_euclid(2) == 0 { Shade::Light } else { Shade::Dark };
        CellClass::Box { color, shade }
    }

    pub fn color(&self) -> Option<Color> {
        match self {
            CellClass::Box { color, .. } => Some(*color),
            _ => None,
        }
    }

    pub fn shade(&self) -> Option<Shade> {
        match self {
            CellClass::Box { shade, .. } => Some(*shade),
            _ => None,
        }
    }

    pub fn is_box(&self) -> bool {
        matches!(self, CellClass::Box { .. })
    }

    pub fn rgb(&self) -> [u8; 3] {
        match self {
            CellClass::Escape => [0, 0, 0],
            CellClass::Undecided => [128, 128, 128],
            CellClass::Box { color: Color::Yellow, shade: Shade::Light } => [255, 221, 87],
            CellClass::Box { color: Color::Yellow, shade: Shade::Dark } => [214, 170, 20],
            CellClass::Box { color: Color::Blue, shade: Shade::Light } => [120, 160, 255],
            CellClass::Box { color: Color::Blue, shade: Shade::Dark } => [40, 80, 200],
        }
    }
}

/// Dynamical chessboard class of `z` (germ coordinates).
pub fn classify_dynamical(ctx: &HornContext, z: Complex64) -> CellClass {
    match ctx.solver().phi_attr_extended(z, ctx.max_iter()) {
        Ok(v) => CellClass::from_coordinate(v.value, ctx.v_prime()),
        Err(Error::Escaped(_)) => CellClass::Escape,
        Err(_) => CellClass::Undecided,
    }
}


/// Structural chessboard class of `w` in the domain of the normalized
/// renormalization, using the principal branch of `E⁻¹`.
pub fn classify_structural(ctx: &HornContext, w: Complex64) -> CellClass {
    classify_structural_branch(ctx, w, 0)
}

/// Structural class computed through the branch `E⁻¹ + k`. The color does
/// not depend on `k`; the shade flips with the parity of `k`.
pub fn classify_structural_branch(ctx: &HornContext, w: Complex64, k: i64) -> CellClass {
    if w == Complex64::new(0.0, 0.0) {
        return CellClass::Box { color: Color::Yellow, shade: Shade::Light };
    }
    let zeta = log_cyl(ctx.renorm_prescale() * w) + k as f64;
    match ctx.horn_eval(zeta) {
        Ok(h) => CellClass::from_coordinate(h, ctx.v_prime()),
        Err(Error::NotInDomain) | Err(Error::Escaped(_)) => CellClass::Escape,
        Err(_) => CellClass::Undecided,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderMode {
    Dynamical,
    Structural,
}

impl std::str::FromStr for RenderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dynamical" => Ok(RenderMode::Dynamical),
            "structural" => Ok(RenderMode::Structural),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
}

/// A window of the plane sampled at pixel centers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterJob {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub mode: RenderMode,
    pub map: MapSpec,
    pub max_iter: usize,
    pub tol: f64,
}

impl RasterJob {
    /// Square-pixel job: the window height follows from the aspect ratio.
    pub fn new(map: MapSpec, mode: RenderMode, center: Complex64, width: f64, nx: usize, ny: usize) -> Self {
        let height = width * ny as f64 / nx.max(1) as f64;
        RasterJob {
            window: Window { center, width, height },
            nx,
            ny,
            mode,
            map,
            max_iter: RENDER_MAX_ITER,
            tol: crate::fatou::DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let w = &self.window;
        if !(w.width > 0.0 && w.width.is_finite() && w.height > 0.0 && w.height.is_finite()) {
            return Err(Error::InvalidParameter("window width and height must be positive".into()));
        }
        if !w.center.is_finite() {
            return Err(Error::InvalidParameter("window center must be finite".into()));
        }
        if self.nx == 0 || self.ny == 0 || self.nx.saturating_mul(self.ny) > MAX_PIXELS {
            return Err(Error::InvalidParameter(format!(
                "resolution {}x{} outside 1..={MAX_PIXELS} pixels",
                self.nx, self.ny
            )));
        }
        if self.max_iter == 0 || !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("budget and tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Center of pixel `(j, k)`, row 0 at the top of the window.
    pub fn pixel(&self, j: usize, k: usize) -> Complex64 {
        let w = &self.window;
        let x = w.center.re - w.width / 2.0 + (j as f64 + 0.5) * w.width / self.nx as f64;
        let y = w.center.im + w.height / 2.0 - (k as f64 + 0.5) * w.height / self.ny as f64;
        Complex64::new(x, y)
    }
}

/// Point classifier for one map, in the map's native coordinates.
///
/// Blaschke products are classified through `S` on the unit disk; every
/// other map is classified directly.
#[derive(Clone, Debug)]
pub struct Chessboard {
    native: ParabolicMap,
    ctx: HornContext,
    through_s: bool,
}

impl Chessboard {
    pub fn new(map: &ParabolicMap, max_iter: usize, tol: f64) -> Result<Self> {
        let through_s = matches!(map.kind(), MapKind::Blaschke(_) | MapKind::BInf);
        let ctx = HornContext::new(map.clone())?.with_max_iter(max_iter).with_tol(tol);
        Ok(Chessboard { native: map.clone(), ctx, through_s })
    }

    pub fn context(&self) -> &HornContext {
        &self.ctx
    }

    /// Attracting Fatou coordinate at a point of the native plane.
    ///
    /// Errors: `Escaped` when the orbit leaves the basin, `Undecided` when
    /// the budget runs out.
    pub fn fatou(&self, z: Complex64) -> Result<FatouValue> {
        if self.through_s {
            return self.fatou_through_s(z);
        }
        let z = z - self.ctx.map().fixed_point();
        if matches!(self.native.kind(), MapKind::Cd(_) | MapKind::CInf) {
            return self.fatou_off_slit(z);
        }
        self.ctx.solver().phi_attr_extended(z, self.ctx.max_iter())
    }

    pub fn classify_dynamical(&self, z: Complex64) -> CellClass {
        match self.fatou(z) {
            Ok(v) => CellClass::from_coordinate(v.value, self.ctx.v_prime()),
            Err(Error::Escaped(_)) => CellClass::Escape,
            Err(_) => CellClass::Undecided,
        }
    }

    /// `Φ[B] = Φ[C] ∘ S`: the Blaschke product is iterated on the disk until
    /// the `S`-image of the orbit lands in the petal of the semiconjugate.
    fn fatou_through_s(&self, z: Complex64) -> Result<FatouValue> {
        if z.norm() >= 1.0 {
            return Err(Error::Escaped(0));
        }
        let petal = self.ctx.solver().attracting_petal();
        let mut z = z;
        for n in 0..=self.ctx.max_iter() {
            let v = s_map(z)?;
            if petal.contains(v) {
                return self.value_in_petal(v, n);
            }
            z = self.native.eval(z)?;
            if !(z.norm() < 1.0) {
                return Err(Error::Undecided(n));
            }
        }
        Err(Error::Undecided(self.ctx.max_iter()))
    }

    /// The basin of `C_d` and `C_∞` is the complement of the slit `[0, ∞)`.
    /// Orbits that pass near the poles leave any fixed radius and come back
    /// (`C_d(v) ~ c/v`), so only orbits that hit the slit or overflow count
    /// as escaping.
    fn fatou_off_slit(&self, z: Complex64) -> Result<FatouValue> {
        let petal = self.ctx.solver().attracting_petal();
        let mut z = z;
        for n in 0..=self.ctx.max_iter() {
            if !z.is_finite() || (z.im == 0.0 && z.re > 0.0) {
                return Err(Error::Escaped(n));
            }
            if petal.contains(z) {
                return self.value_in_petal(z, n);
            }
            z = self.native.germ(z).map_err(|_| Error::Escaped(n))?;
        }
        Err(Error::Undecided(self.ctx.max_iter()))
    }

    fn value_in_petal(&self, v: Complex64, n: usize) -> Result<FatouValue> {
        let mut phi = self.ctx.solver().phi_petal(v)?;
        phi.value -= n as f64;
        phi.iterations += n;
        Ok(phi)
    }

    pub fn classify_structural(&self, w: Complex64) -> CellClass {
        classify_structural(&self.ctx, w)
    }

    pub fn classify(&self, mode: RenderMode, z: Complex64) -> CellClass {
        match mode {
            RenderMode::Dynamical => self.classify_dynamical(z),
            RenderMode::Structural => self.classify_structural(z),
        }
    }
}

/// Classification grid in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChessboardImage {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<CellClass>,
}

impl ChessboardImage {
    pub fn cell(&self, j: usize, k: usize) -> CellClass {
        self.cells[k * self.nx + j]
    }

    pub fn rgb(&self) -> Vec<u8> {
        self.cells.iter().flat_map(|c| c.rgb()).collect()
    }

    pub fn rgba(&self) -> Vec<u8> {
        self.cells
            .iter()
            .flat_map(|c| {
                let [r, g, b] = c.rgb();
                [r, g, b, 255]
            })
            .collect()
    }

    /// Binary PPM: `P6\n<nx> <ny>\n255\n` followed by row-major RGB.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.nx, self.ny).into_bytes();
        out.extend(self.rgb());
        out
    }

    pub fn write_ppm(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_ppm())
    }
}

fn render_row(board: &Chessboard, job: &RasterJob, k: usize, row: &mut [CellClass]) {
    for (j, cell) in row.iter_mut().enumerate() {
        *cell = board.classify(job.mode, job.pixel(j, k));
    }
}

/// Renders with a prepared classifier. `threads = None` uses the ambient
/// rayon pool; `Some(n)` a dedicated pool of `n` workers.
pub fn render_with(board: &Chessboard, job: &RasterJob, threads: Option<usize>) -> Result<ChessboardImage> {
    job.validate()?;
    let mut cells = vec![CellClass::Undecided; job.nx * job.ny];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = |cells: &mut Vec<CellClass>| {
            cells
                .par_chunks_mut(job.nx)
                .enumerate()
                .for_each(|(k, row)| render_row(board, job, k, row));
        };
        match threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::InvalidParameter(e.to_string()))?;
                pool.install(|| run(&mut cells));
            }
            None => run(&mut cells),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        for (k, row) in cells.chunks_mut(job.nx).enumerate() {
            render_row(board, job, k, row);
        }
    }
    Ok(ChessboardImage { nx: job.nx, ny: job.ny, cells })
}

/// Builds the classifier for `job.map` and renders the window.
pub fn render(job: &RasterJob, threads: Option<usize>) -> Result<ChessboardImage> {
    job.validate()?;
    let map = job.map.build()?;
    let board = Chessboard::new(&map, job.max_iter, job.tol)?;
    render_with(&board, job, threads)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn box_from_coordinate() {
        let v = c(2.0, 0.0);
        assert_eq!(
            CellClass::from_coordinate(v + c(0.5, 1.0), v),
            CellClass::Box { color: Color::Yellow, shade: Shade::Light }
        );
        assert_eq!(
            CellClass::from_coordinate(v + c(1.5, -1.0), v),
            CellClass::Box { color: Color::Blue, shade: Shade::Dark }
        );
        assert_eq!(
            CellClass::from_coordinate(v + c(-0.5, 0.0), v),
            CellClass::Box { color: Color::Yellow, shade: Shade::Dark }
        );
        assert_eq!(CellClass::Escape.color(), None);
        assert_eq!(CellClass::Undecided.shade(), None);
    }

    #[test]
    fn job_validation() {
        let spec = MapSpec::from_json(r#"{"kind":"quad"}"#).unwrap();
        let mut job = RasterJob::new(spec, RenderMode::Dynamical, c(-0.5, 0.0), 0.0, 8, 8);
        assert!(job.validate().is_err());
        job.window.width = 2.0;
        job.window.height = 2.0;
        assert!(job.validate().is_ok());
        job.nx = 0;
        assert!(job.validate().is_err());
    }

    #[test]
    fn pixel_centers() {
        let spec = MapSpec::from_json(r#"{"kind":"quad"}"#).unwrap();
        let job = RasterJob::new(spec, RenderMode::Dynamical, c(0.0, 0.0), 2.0, 2, 2);
        assert_eq!(job.pixel(0, 0), c(-0.5, 0.5));
        assert_eq!(job.pixel(1, 1), c(0.5, -0.5));
    }

    #[test]
    fn ppm_header() {
        let img = ChessboardImage { nx: 2, ny: 1, cells: vec![CellClass::Escape, CellClass::Undecided] };
        let ppm = img.to_ppm();
        assert!(ppm.starts_with(b"P6\n2 1\n255\n"));
        assert_eq!(&ppm[11..], &[0, 0, 0, 128, 128, 128]);
    }
}
