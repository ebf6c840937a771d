//! Command-line frontend.
//!
//! Exit codes: 0 on success, 2 for usage and validation errors, 1 for
//! numeric failures (and for `verify` when a check fails).

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::chessboard::{render, RasterJob, RenderMode, Window, RENDER_MAX_ITER};
use crate::error::{Error, Result};
use crate::fatou::{FatouSolver, FatouValue, DEFAULT_TOL, EXTENSION_MAX_ITER};
use crate::germ::{default_radius, residue_integral, taylor_coeffs};
use crate::horn::{HornContext, Normalization};
use crate::maps::{MapSpec, ParabolicMap};
use crate::verify::{run_suite, Suite, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "parafatou", version, about = "Fatou coordinates, horn maps and chessboards of parabolic germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterative residue, residue integral and axes as CSV.
    Residue {
        #[command(flatten)]
        map: MapArg,
        /// Contour radius (defaults to the analysis radius of the map).
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Taylor coefficients of the germ at the parabolic point.
    Taylor {
        #[command(flatten)]
        map: MapArg,
        #[arg(short, long, default_value_t = 8)]
        n: usize,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Attracting Fatou coordinate at the points of a CSV file (germ coordinates).
    FatouSample(SampleArgs),
    /// Extended horn map at the points of a CSV file.
    HornSample(SampleArgs),
    /// Critical value of the normalized renormalization.
    RenormCritical {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_enum, default_value_t = NormalizationArg::DerivativeOne)]
        normalization: NormalizationArg,
        /// Lower renormalization, obtained by complex conjugation.
        #[arg(long)]
        lower: bool,
        #[arg(long, default_value_t = EXTENSION_MAX_ITER)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lavaurs map `g_σ` at the points of a CSV file (germ coordinates).
    LavaursSample {
        #[command(flatten)]
        sample: SampleArgs,
        /// Phase `σ` as "re,im".
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
        sigma: Complex64,
    },
    /// Dynamical or structural chessboard as a binary PPM.
    Chessboard {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Dynamical)]
        mode: ModeArg,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
        center: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        width: f64,
        #[arg(long, value_parser = parse_size, default_value = "512x512")]
        size: (usize, usize),
        #[arg(long, default_value_t = RENDER_MAX_ITER)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, env = "PARAFATOU_THREADS")]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs the acceptance checks and prints a PASS/FAIL table.
    Verify {
        #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// A map given positionally or with `--map`, as inline JSON or a file path.
#[derive(Debug, Args)]
pub struct MapArg {
    #[arg(value_name = "MAP")]
    positional: Option<String>,
    #[arg(long = "map", value_name = "MAP", conflicts_with = "positional")]
    flag: Option<String>,
}

impl MapArg {
    fn load(&self) -> Result<ParabolicMap> {
        let text = self
            .positional
            .as_ref()
            .or(self.flag.as_ref())
            .ok_or_else(|| Error::InvalidParameter("a map is required (inline JSON or file path)".into()))?;
        let json = if text.trim_start().starts_with('{') {
            text.clone()
        } else {
            fs::read_to_string(text).map_err(|e| Error::InvalidParameter(format!("{text}: {e}")))?
        };
        MapSpec::from_json(&json)?.build()
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    map: MapArg,
    /// CSV with a header row and columns `re,im`.
    #[arg(long)]
    points: PathBuf,
    #[arg(long, default_value_t = EXTENSION_MAX_ITER)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Dynamical,
    Structural,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NormalizationArg {
    DerivativeOne,
    CriticalValueOne,
}

/// `"re,im"`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected re,im, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im:?}: {e}"))?;
    Ok(Complex64::new(re, im))
}

/// `"WxH"`.
pub fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let w: usize = w.trim().parse().map_err(|e| format!("{w:?}: {e}"))?;
    let h: usize = h.trim().parse().map_err(|e| format!("{h:?}: {e}"))?;
    Ok((w, h))
}

/// 17 significant digits, `.` decimal, fixed notation for moderate
/// exponents and scientific notation otherwise (like C's `%.17g`, keeping
/// one decimal digit).
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{x:.*}", (16 - exp).max(0) as usize);
        if !fixed.contains('.') {
            return format!("{fixed}.0");
        }
        let trimmed = fixed.trim_end_matches('0');
        if trimmed.ends_with('.') {
            format!("{trimmed}0")
        } else {
            trimmed.to_string()
        }
    } else {
        let m = mantissa.trim_end_matches('0');
        let m = if m.ends_with('.') { format!("{m}0") } else { m.to_string() };
        format!("{m}e{exp}")
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::InvalidParameter(_) | Error::Json(_) | Error::DomainError(_))
}

struct Csv {
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn new(header: &[&str]) -> Self {
        Csv { rows: vec![header.iter().map(|s| s.to_string()).collect()] }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn named(&mut self, name: &str, z: Complex64) {
        self.push(vec![name.to_string(), fmt_num(z.re), fmt_num(z.im)]);
    }

    fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.write_record(row).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        }
        w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))
    }
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display()))),
        None => stdout.write_all(bytes).map_err(|e| Error::InvalidParameter(e.to_string())),
    }
}

/// Reads `re,im` columns (by name when present, else the first two).
pub fn read_points(path: &Path) -> Result<Vec<Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| Error::InvalidParameter(e.to_string()))?.clone();
    let col = |name: &str, fallback: usize| headers.iter().position(|h| h == name).unwrap_or(fallback);
    let (ire, iim) = (col("re", 0), col("im", 1));
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("{}: bad number on data row {}", path.display(), line + 1)))
        };
        out.push(Complex64::new(field(ire)?, field(iim)?));
    }
    Ok(out)
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::Escaped(_) => "escaped",
        Error::Undecided(_) => "undecided",
        Error::NotInDomain => "not_in_domain",
        Error::NotInBasin => "not_in_basin",
        _ => "error",
    }
}

fn sample_table(points: &[Complex64], value: impl Fn(Complex64) -> Result<FatouValue>) -> Csv {
    let mut csv = Csv::new(&["re", "im", "value_re", "value_im", "err", "iters", "status"]);
    for &z in points {
        let mut row = vec![fmt_num(z.re), fmt_num(z.im)];
        match value(z) {
            Ok(v) => row.extend([
                fmt_num(v.value.re),
                fmt_num(v.value.im),
                fmt_num(v.err_estimate),
                v.iterations.to_string(),
                "ok".into(),
            ]),
            Err(e) => row.extend([String::new(), String::new(), String::new(), String::new(), status_of(&e).into()]),
        }
        csv.push(row);
    }
    csv
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if is_usage_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Residue { map, radius, samples, out } => {
            let map = map.load()?;
            let radius = radius.unwrap_or_else(|| default_radius(&map));
            let integral = residue_integral(&map, radius, samples)?;
            let g = map.germ_data()?;
            let mut csv = Csv::new(&["quantity", "re", "im"]);
            csv.named("gamma", g.gamma);
            csv.named("gamma_minus_1", g.gamma - 1.0);
            csv.named("residue_integral", integral);
            csv.named("residue_check", Complex64::new((integral - (g.gamma - 1.0)).norm(), 0.0));
            csv.named("a2", g.a2);
            csv.named("a3", g.a3);
            csv.named("alpha_attr", Complex64::new(g.alpha_attr, 0.0));
            csv.named("alpha_rep", Complex64::new(g.alpha_rep, 0.0));
            emit(&csv.to_bytes()?, out.as_deref(), stdout)?;
        }
        Command::Taylor { map, n, radius, samples, out } => {
            let map = map.load()?;
            let radius = radius.unwrap_or_else(|| default_radius(&map));
            let t = taylor_coeffs(&map, n, radius, samples)?;
            let mut csv = Csv::new(&["k", "re", "im"]);
            for (k, a) in t.coeffs.iter().enumerate() {
                csv.push(vec![k.to_string(), fmt_num(a.re), fmt_num(a.im)]);
            }
            emit(&csv.to_bytes()?, out.as_deref(), stdout)?;
        }
        Command::FatouSample(args) => {
            let solver = FatouSolver::new(args.map.load()?)?.with_tol(args.tol);
            let points = read_points(&args.points)?;
            let csv = sample_table(&points, |z| solver.phi_attr_extended(z, args.budget));
            emit(&csv.to_bytes()?, args.out.as_deref(), stdout)?;
        }
        Command::HornSample(args) => {
            let ctx = HornContext::new(args.map.load()?)?.with_max_iter(args.budget).with_tol(args.tol);
            let points = read_points(&args.points)?;
            let csv = sample_table(&points, |z| ctx.horn_value(z));
            emit(&csv.to_bytes()?, args.out.as_deref(), stdout)?;
        }
        Command::LavaursSample { sample, sigma } => {
            let ctx = HornContext::new(sample.map.load()?)?.with_max_iter(sample.budget).with_tol(sample.tol);
            let points = read_points(&sample.points)?;
            let csv = sample_table(&points, |z| ctx.lavaurs_value(sigma, z));
            emit(&csv.to_bytes()?, sample.out.as_deref(), stdout)?;
        }
        Command::RenormCritical { map, normalization, lower, budget, out } => {
            let map = map.load()?;
            let map = if lower { map.conjugate() } else { map };
            let normalization = match normalization {
                NormalizationArg::DerivativeOne => Normalization::DerivativeOne,
                NormalizationArg::CriticalValueOne => Normalization::CriticalValueOne,
            };
            let ctx = HornContext::new(map)?.with_max_iter(budget).with_normalization(normalization);
            // the lower renormalization of f is the conjugate of the upper one of conj∘f∘conj
            let fix = |z: Complex64| if lower { z.conj() } else { z };
            let nu = fix(ctx.critical_value());
            let mut csv = Csv::new(&["quantity", "re", "im"]);
            csv.named("gamma", fix(ctx.gamma()));
            csv.named("v_f", fix(ctx.v_f()));
            csv.named("v_prime", fix(ctx.v_prime()));
            csv.named("a_norm", fix(ctx.a_norm()));
            csv.named("critical_value", nu);
            csv.named("critical_modulus", Complex64::new(nu.norm(), 0.0));
            if matches!(normalization, Normalization::DerivativeOne) {
                // |ν| = e^{−2π² Re γ} when v′ is real
                let bound = (-2.0 * PI * PI * ctx.gamma().re).exp();
                csv.named("modulus_over_e_2pi2_gamma", Complex64::new(nu.norm() / bound, 0.0));
            }
            emit(&csv.to_bytes()?, out.as_deref(), stdout)?;
        }
        Command::Chessboard { map, mode, center, width, size, budget, tol, threads, out } => {
            let spec = map.load()?.spec();
            let mode = match mode {
                ModeArg::Dynamical => RenderMode::Dynamical,
                ModeArg::Structural => RenderMode::Structural,
            };
            let (nx, ny) = size;
            if threads == Some(0) {
                return Err(Error::InvalidParameter("--threads must be at least 1".into()));
            }
            let job = RasterJob {
                window: Window { center, width, height: width * ny as f64 / nx.max(1) as f64 },
                nx,
                ny,
                mode,
                map: spec,
                max_iter: budget,
                tol,
            };
            job.validate()?;
            let img = render(&job, threads)?;
            img.write_ppm(&out).map_err(|e| Error::InvalidParameter(format!("{}: {e}", out.display())))?;
        }
        Command::Verify { suite, seed } => {
            let suite: Suite = suite.parse()?;
            let results = run_suite(suite, seed);
            let mut all = true;
            for r in &results {
                all &= r.pass;
                writeln!(stdout, "{r}").map_err(|e| Error::InvalidParameter(e.to_string()))?;
            }
            let passed = results.iter().filter(|r| r.pass).count();
            writeln!(stdout, "{passed}/{} checks passed", results.len())
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            return Ok(if all { 0 } else { 1 });
        }
    }
    Ok(0)
}
