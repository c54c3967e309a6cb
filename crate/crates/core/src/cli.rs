//! The `twocenters` command line.
//!
//! Every command validates its input before computing and computes before
//! writing, so a failing run leaves no partial files. Errors go to stderr
//! as one JSON object; the exit code is 0 only for a successful run with a
//! passing verdict.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bifurcation::{classify_grid, molecule, render_svg, write_csv, Component, DiagramWindow, EnergyMomentum, Focus};
use crate::coords::{doubled_position, Sign};
use crate::dynamics::{initial_state, integrate, PhaseChoice, Trajectory};
use crate::error::{Error, Result};
use crate::homoclinic::{collision_homoclinic, homoclinic_report, lyapunov_orbit, HomoclinicOptions};
use crate::knots::certify_knot;
use crate::params::{SystemParams, EARTH, MOON};
use crate::quadrature::{rotation_number, solve_family, subsystem_cells};

/// Environment variable that overrides `--out`.
pub const OUT_ENV: &str = "TWOCENTERS_OUT";

#[derive(Debug, Parser)]
#[command(name = "twocenters", version, about = "Euler's problem of two fixed centers")]
pub struct Cli {
    /// Mass ratio in (0, 1).
    #[arg(long, global = true, default_value_t = 0.25)]
    pub mu: f64,
    /// Integrator tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Seed for sampled phases.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (overridden by TWOCENTERS_OUT).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FocusArg {
    Earth,
    Moon,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a grid of the (g, c) plane; writes diagram.csv and diagram.svg.
    Diagram(DiagramArgs),
    /// Integrate one orbit; writes orbit.jsonl (and orbit.svg with --format svg).
    Orbit(OrbitArgs),
    /// Subsystem periods and rotation number at (g, c).
    Rotation(PointArgs),
    /// Tori with R = k/l over an energy range; writes family.csv.
    Family(FamilyArgs),
    /// Certify homoclinic orbits of the Lyapunov orbit at energy c.
    Homoclinic(HomoclinicArgs),
    /// Critical orbits and the molecule of the energy level c.
    Molecule(MoleculeArgs),
    /// Solve the (k, l) family at c and certify one of its periodic orbits.
    Knot(KnotArgs),
}

#[derive(Debug, Args)]
pub struct DiagramArgs {
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub g_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub g_max: f64,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub c_min: f64,
    #[arg(long, default_value_t = -0.05, allow_negative_numbers = true)]
    pub c_max: f64,
    /// Grid cells along each axis.
    #[arg(long, default_value_t = 600)]
    pub resolution: usize,
    /// SVG edge length in pixels.
    #[arg(long, default_value_t = 1000)]
    pub size: u32,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value = "earth")]
    pub component: Component,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long, allow_negative_numbers = true, required_unless_present = "lyapunov")]
    pub g: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value = "earth")]
    pub component: Component,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub span: f64,
    #[arg(long, default_value_t = 0.5)]
    pub lambda_phase: f64,
    #[arg(long, default_value_t = 0.5)]
    pub nu_phase: f64,
    #[arg(long, value_enum, default_value = "plus")]
    pub p_lambda_sign: SignArg,
    #[arg(long, value_enum, default_value = "plus")]
    pub p_nu_sign: SignArg,
    /// Integrate the Lyapunov orbit of energy c for one period instead.
    #[arg(long)]
    pub lyapunov: bool,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub l: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub c_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub c_max: f64,
    /// Energies in the grid.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value = "both")]
    pub component: Component,
}

#[derive(Debug, Args)]
pub struct HomoclinicArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value = "earth")]
    pub component: Component,
    #[arg(long, default_value_t = 20)]
    pub orbits: usize,
    /// Certify the collision homoclinic through this primary instead.
    #[arg(long, value_enum)]
    pub collision: Option<FocusArg>,
}

#[derive(Debug, Args)]
pub struct MoleculeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct KnotArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub l: u32,
    #[arg(long, default_value = "earth")]
    pub component: Component,
}

/// Settings shared by every command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub mu: f64,
    pub tol: f64,
    pub quad_tol: f64,
    pub class_eps: f64,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let out = std::env::var_os(OUT_ENV).map(PathBuf::from).or_else(|| cli.out.clone());
        let cfg = Self {
            mu: cli.mu,
            tol: cli.tol,
            quad_tol: crate::quadrature::QUAD_TOL,
            class_eps: crate::bifurcation::CURVE_TOL,
            out,
            seed: cli.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return Err(Error::Domain(self.mu));
        }
        for (name, v) in [("tol", self.tol), ("quad_tol", self.quad_tol), ("class_eps", self.class_eps)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Output directory, `.` unless configured.
    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Writes every file or none: contents are complete before the first
/// write, and the directory is created on demand.
fn write_files(dir: &Path, files: Vec<(&str, Vec<u8>)>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Files written for a command that otherwise only prints.
fn maybe_write(cfg: &RunConfig, name: &str, body: &str) -> Result<Vec<PathBuf>> {
    match &cfg.out {
        Some(dir) => write_files(dir, vec![(name, body.as_bytes().to_vec())]),
        None => Ok(Vec::new()),
    }
}

pub fn cmd_diagram(cfg: &RunConfig, args: &DiagramArgs, format: Option<Format>) -> Result<Outcome> {
    let params = SystemParams::new(cfg.mu)?;
    let window = DiagramWindow { g_min: args.g_min, g_max: args.g_max, c_min: args.c_min, c_max: args.c_max };
    window.validate()?;
    if args.size == 0 {
        return Err(Error::Validation("svg size must be positive".into()));
    }
    let n = args.resolution;
    let cells = classify_grid(&params, &window, n, n)?;
    let mut files = Vec::new();
    if format != Some(Format::Svg) {
        let mut csv = Vec::new();
        write_csv(&mut csv, &params, &cells).map_err(io_err(Path::new("diagram.csv")))?;
        files.push(("diagram.csv", csv));
    }
    if format != Some(Format::Csv) {
        files.push(("diagram.svg", render_svg(&params, &window, &cells, n, n, args.size).into_bytes()));
    }
    let files = write_files(&cfg.out_dir(), files)?;
    let stdout = format!("classified {} cells\n", cells.len());
    Ok(Outcome { pass: true, stdout, files })
}

/// Cartesian projection of a trajectory with both primaries marked.
pub fn orbit_svg(traj: &Trajectory, size: u32) -> String {
    let pts: Vec<[f64; 2]> = traj.samples().iter().map(|x| doubled_position(x.state[0], x.state[1])).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (EARTH[0], MOON[0], -0.5f64, 0.5f64);
    for p in &pts {
        (x0, x1, y0, y1) = (x0.min(p[0]), x1.max(p[0]), y0.min(p[1]), y1.max(p[1]));
    }
    let span = (x1 - x0).max(y1 - y0) * 1.1;
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let s = size as f64;
    let map = |p: [f64; 2]| ((p[0] - cx) / span * s + 0.5 * s, (cy - p[1]) / span * s + 0.5 * s);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = write!(svg, r##"<polyline fill="none" stroke="#1f4e8c" stroke-width="1" points=""##);
    for p in &pts {
        let (x, y) = map(*p);
        let _ = write!(svg, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(svg, r#""/>"#);
    for (name, at, r) in [("earth", EARTH, 6.0), ("moon", MOON, 4.0)] {
        let (x, y) = map(at);
        let _ = writeln!(svg, r##"<circle id="{name}" cx="{x:.2}" cy="{y:.2}" r="{r}" fill="#b03a2e"/>"##);
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn cmd_orbit(cfg: &RunConfig, args: &OrbitArgs, format: Option<Format>) -> Result<Outcome> {
    let params = SystemParams::new(cfg.mu)?;
    let traj = if args.lyapunov {
        lyapunov_orbit(args.c, &params)?.trajectory
    } else {
        let g = args.g.ok_or_else(|| Error::Validation("--g is required without --lyapunov".into()))?;
        let point = EnergyMomentum::new(g, args.c)?;
        let choice = PhaseChoice {
            component: args.component,
            lambda_phase: args.lambda_phase,
            nu_phase: args.nu_phase,
            p_lambda_sign: args.p_lambda_sign.into(),
            p_nu_sign: args.p_nu_sign.into(),
        };
        let start = initial_state(&point, &params, &choice)?;
        integrate(&start, &params, args.c, args.span, cfg.tol)?
    };
    let mut jsonl = Vec::new();
    traj.write_jsonl(&mut jsonl)?;
    let mut files = vec![("orbit.jsonl", jsonl)];
    if format == Some(Format::Svg) {
        files.push(("orbit.svg", orbit_svg(&traj, 1000).into_bytes()));
    }
    let files = write_files(&cfg.out_dir(), files)?;
    let stdout = format!(
        "{} samples to s = {}, max |Q| = {:e}\n",
        traj.samples().len(),
        traj.final_s(),
        traj.max_abs_q()
    );
    Ok(Outcome { pass: true, stdout, files })
}

pub fn cmd_rotation(cfg: &RunConfig, args: &PointArgs) -> Result<Outcome> {
    let params = SystemParams::new(cfg.mu)?;
    let point = EnergyMomentum::new(args.g, args.c)?;
    let (lc, nc) = subsystem_cells(&point, &params, args.component)?;
    let r = rotation_number(&point, &params, args.component)?;
    let body = to_json(&json!({
        "mu": cfg.mu,
        "g": point.g,
        "c": point.c,
        "component": r.component,
        "lambda_cell": lc,
        "nu_cell": nc,
        "rotation_number": r.value,
    }))?;
    let files = maybe_write(cfg, "rotation.json", &body)?;
    Ok(Outcome { pass: true, stdout: body, files })
}

pub fn cmd_family(cfg: &RunConfig, args: &FamilyArgs, format: Option<Format>) -> Result<Outcome> {
    let params = SystemParams::new(cfg.mu)?;
    if !(args.c_min <= args.c_max && args.c_max < 0.0) || args.count == 0 {
        return Err(Error::Validation("family needs c_min <= c_max < 0 and a positive count".into()));
    }
    let grid: Vec<f64> = if args.count == 1 {
        vec![args.c_min]
    } else {
        (0..args.count)
            .map(|i| args.c_min + (args.c_max - args.c_min) * i as f64 / (args.count - 1) as f64)
            .collect()
    };
    let fam = solve_family(args.k, args.l, &params, &grid, args.component)?;
    let (name, bytes) = if format == Some(Format::Json) {
        ("family.json", to_json(&fam)?.into_bytes())
    } else {
        let mut csv = Vec::new();
        fam.write_csv(&mut csv).map_err(io_err(Path::new("family.csv")))?;
        ("family.csv", csv)
    };
    let files = write_files(&cfg.out_dir(), vec![(name, bytes)])?;
    let stdout = format!(
        "{} tori with R = {}/{}; no root at {} of {} energies\n",
        fam.samples.len(),
        args.k,
        args.l,
        fam.no_root.len(),
        grid.len()
    );
    Ok(Outcome { pass: !fam.samples.is_empty(), stdout, files })
}

pub fn cmd_homoclinic(cfg: &RunConfig, args: &HomoclinicArgs) -> Result<Outcome> {
    let params = SystemParams::new(cfg.mu)?;
    let report = match args.collision {
        Some(f) => {
            let focus = if f == FocusArg::Earth { Focus::Earth } else { Focus::Moon };
            collision_homoclinic(args.c, &params, focus, (Sign::Plus, Sign::Plus))?.report
        }
        None => {
            let opts = HomoclinicOptions { tol: cfg.tol, seed: cfg.seed, ..Default::default() };
            homoclinic_report(args.c, &params, args.component, args.orbits, &opts)?
        }
    };
    let body = to_json(&report)?;
    let files = maybe_write(cfg, "homoclinic.json", &body)?;
    Ok(Outcome { pass: report.passed(), stdout: body, files })
}

pub fn cmd_molecule(cfg: &RunConfig, args: &MoleculeArgs, format: Option<Format>) -> Result<Outcome> {
    let params = SystemParams::new(cfg.mu)?;
    let graphs = molecule(args.c, &params)?;
    let body = if format == Some(Format::Json) {
        to_json(&graphs)?
    } else {
        graphs.iter().map(|g| g.to_string()).collect()
    };
    let name = if format == Some(Format::Json) { "molecule.json" } else { "molecule.txt" };
    let files = maybe_write(cfg, name, &body)?;
    Ok(Outcome { pass: true, stdout: body, files })
}

pub fn cmd_knot(cfg: &RunConfig, args: &KnotArgs) -> Result<Outcome> {
    let params = SystemParams::new(cfg.mu)?;
    if args.c >= params.c_j() {
        return Err(Error::Band { c: args.c, lo: f64::NEG_INFINITY, hi: params.c_j() });
    }
    let fam = solve_family(args.k, args.l, &params, &[args.c], args.component)?;
    let sample = fam.samples.first().ok_or(Error::NoRoot { c: args.c, target: fam.target() })?;
    let point = EnergyMomentum::new(sample.g, sample.c)?;
    let choice = PhaseChoice::with_component(sample.component);
    let cert = certify_knot(&point, &params, args.k, args.l, &choice, cfg.tol)?;
    let body = to_json(&cert)?;
    let files = maybe_write(cfg, "knot.json", &body)?;
    Ok(Outcome { pass: cert.pass, stdout: body, files })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig::from_cli(cli)?;
    match &cli.command {
        Command::Diagram(a) => cmd_diagram(&cfg, a, cli.format),
        Command::Orbit(a) => cmd_orbit(&cfg, a, cli.format),
        Command::Rotation(a) => cmd_rotation(&cfg, a),
        Command::Family(a) => cmd_family(&cfg, a, cli.format),
        Command::Homoclinic(a) => cmd_homoclinic(&cfg, a),
        Command::Molecule(a) => cmd_molecule(&cfg, a, cli.format),
        Command::Knot(a) => cmd_knot(&cfg, a),
    }
}

/// JSON object describing an error, as printed on stderr.
pub fn error_json(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

/// Parses `args`, runs the command and maps the result to an exit code:
/// 0 for a pass, 1 for a failing verdict, 2 for errors.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": "Usage", "message": e.to_string() }));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(2)
        }
    }
}
