//! `ccw` — command-line front end for the wire-design toolkit.
//!
//! One subcommand per core operation: field sampling, quadrupole search,
//! point gradients, resistance, Joule-heating operating points, power
//! curves, runaway thresholds, RRR fitting, design evaluation, and
//! design sweeps.
//!
//! Conventions shared by every subcommand:
//! - dimensioned flag values carry explicit unit suffixes (`100um`,
//!   `13A`, `5K_per_W`); bare numbers are rejected (see [`quantity`]);
//! - the machine-readable artifact (JSON or CSV) goes to `--out FILE`,
//!   written only after the computation succeeds, or to stdout;
//! - a one-line human summary goes to stderr, keeping stdout clean;
//! - identical inputs produce byte-identical artifacts (no timestamps);
//! - exit status: 0 success, 2 input error, 3 solver non-convergence,
//!   4 constraint failure.

mod quantity;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use ccw::design::{
    self, Constraints, DesignError, DesignPoint, SweepRanges,
};
use ccw::electrothermal::{
    self, layout_resistance, operating_point, operating_point_with_guess, power_curve,
    runaway_current, sheet_resistance, ResistivityModel, ThermalEnvironment, RUNAWAY_RESOLUTION,
};
use ccw::geometry::{parse_layout, Point3, WireLayout};
use ccw::magnetostatics::{
    field_map, find_quadrupole, gradient, AxisRange, Discretization, GridSpec,
    MagnetostaticsError, SearchBox,
};
use clap::{Args, Parser, Subcommand};
use quantity::QuantityList;

const EXIT_INPUT: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_CONSTRAINT: u8 = 4;

/// CLI failure modes, one per documented nonzero exit status. Input
/// errors exit 2 (shared with clap's own usage errors); solver
/// non-convergence exits 3. A failed constraint check is not an error —
/// the artifact is still written — so it is handled as an exit code on
/// the success path instead.
#[derive(Debug)]
enum CliError {
    Input(String),
    Solver(String),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> CliError {
        CliError::Input(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

/// Design and analysis toolkit for current-carrying wires under a
/// surface ion trap: magnetostatics of routed wire layouts, cryogenic
/// copper resistance, Joule-heating operating points, RRR fits, and
/// constrained design sweeps.
///
/// Units: every dimensioned flag value carries an explicit suffix; bare
/// numbers are rejected. Lengths nm/um/mm/m; currents mA/A;
/// temperatures K; thermal resistance K_per_W; fields uT/mT/T;
/// gradients T_per_m; power mW/W; current density A_per_cm2. Lists are
/// comma-separated (`8A,10A`) or inclusive ranges (`8A:12A:5`); points
/// are `x,y,z` lengths (`0um,125um,0um`).
///
/// The machine-readable artifact goes to `--out FILE` (written only on
/// success) or stdout; a one-line summary goes to stderr. Exit status:
/// 0 success, 2 input error, 3 solver non-convergence, 4 constraint
/// failure.
#[derive(Parser, Debug)]
#[command(name = "ccw", version)]
struct Cli {
    /// Echo all parsed inputs in SI base units to stderr before running.
    #[arg(long, global = true)]
    echo_units: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the field vector and |B| on a rectilinear grid (CSV).
    FieldMap(FieldMapArgs),
    /// Locate the |B| null above a layout and report its gradients (JSON).
    Quadrupole(QuadrupoleArgs),
    /// Field Jacobian and grad |B| at one point (JSON).
    Gradient(GradientArgs),
    /// Series resistance of a layout at one temperature (JSON).
    Resistance(ResistanceArgs),
    /// Self-consistent Joule-heating operating point (JSON).
    OperatingPoint(OperatingPointArgs),
    /// Self-heated vs isothermal dissipated power over currents (CSV).
    PowerCurve(PowerCurveArgs),
    /// Thermal-runaway current threshold by bisection (JSON).
    Runaway(RunawayArgs),
    /// Fit the residual resistance ratio to measured R(T) samples (JSON).
    FitRrr(FitRrrArgs),
    /// Evaluate one gate-zone design against all constraints (JSON).
    Evaluate(EvaluateArgs),
    /// Sweep design ranges and mark the Pareto front (CSV).
    Sweep(SweepArgs),
}

// ---------------------------------------------------------------------
// Shared flag groups
// ---------------------------------------------------------------------

#[derive(Args, Debug)]
struct LayoutArg {
    /// Wire-layout JSON file (schema in docs/layout-format.md).
    #[arg(long, value_name = "FILE")]
    layout: PathBuf,
}

impl LayoutArg {
    fn load(&self) -> Result<WireLayout, CliError> {
        let text = std::fs::read_to_string(&self.layout).map_err(|e| {
            CliError::Input(format!("cannot read layout {}: {e}", self.layout.display()))
        })?;
        parse_layout(&text).map_err(CliError::input)
    }
}

#[derive(Args, Debug)]
struct DiscArgs {
    /// Filament strands across the wire width (dimensionless).
    #[arg(long, value_name = "N", default_value_t = 4,
          value_parser = clap::value_parser!(u64).range(1..))]
    n_w: u64,
    /// Filament strands across the wire depth (dimensionless).
    #[arg(long, value_name = "N", default_value_t = 2,
          value_parser = clap::value_parser!(u64).range(1..))]
    n_d: u64,
}

impl DiscArgs {
    fn disc(&self) -> Discretization {
        Discretization::new(self.n_w as usize, self.n_d as usize)
    }
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Residual resistance ratio of the copper film (dimensionless, > 1).
    #[arg(long, default_value_t = 50.0)]
    rrr: f64,
    /// Pure-copper resistivity table CSV (header `T_K,rho_ohm_m`).
    /// Default: $CCW_RESISTIVITY_TABLE if set, else the built-in
    /// 4–300 K table (docs/resistivity-table.md).
    #[arg(long, value_name = "FILE")]
    table: Option<PathBuf>,
}

impl ModelArgs {
    fn model(&self) -> Result<ResistivityModel, CliError> {
        let path = self
            .table
            .clone()
            .or_else(|| std::env::var_os("CCW_RESISTIVITY_TABLE").map(PathBuf::from));
        match path {
            None => ResistivityModel::with_rrr(self.rrr).map_err(CliError::input),
            Some(p) => {
                let text = std::fs::read_to_string(&p).map_err(|e| {
                    CliError::Input(format!(
                        "cannot read resistivity table {}: {e}",
                        p.display()
                    ))
                })?;
                let table =
                    electrothermal::parse_resistivity_table(&text).map_err(CliError::input)?;
                ResistivityModel::with_rrr_and_table(self.rrr, table).map_err(CliError::input)
            }
        }
    }
}

#[derive(Args, Debug)]
struct EnvArgs {
    /// Heat-sink base temperature (e.g. 40K).
    #[arg(long, value_name = "TEMP", value_parser = quantity::temperature,
          default_value = "40K")]
    t_base: f64,
    /// Wire-to-sink thermal resistance (e.g. 5K_per_W).
    #[arg(long, value_name = "R", value_parser = quantity::thermal_resistance,
          default_value = "5K_per_W")]
    r_th: f64,
}

impl EnvArgs {
    fn env(&self) -> Result<ThermalEnvironment, CliError> {
        ThermalEnvironment::new(self.t_base, self.r_th).map_err(CliError::input)
    }
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write the artifact here instead of stdout (created only on
    /// success — a failed run leaves no partial file).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

impl OutArg {
    fn emit(&self, artifact: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => std::fs::write(p, artifact)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
            None => {
                print!("{artifact}");
                Ok(())
            }
        }
    }
}

#[derive(Args, Debug)]
struct DesignArgs {
    /// Wire width (e.g. 100um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length,
          default_value = "100um")]
    width: f64,
    /// Film thickness (e.g. 15um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length,
          default_value = "15um")]
    depth: f64,
    /// Edge-to-edge gap of the gate-zone wire pair (e.g. 88um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length,
          default_value = "88um")]
    separation: f64,
    /// Gate-zone leg length (e.g. 5mm).
    #[arg(long, value_name = "LEN", value_parser = quantity::length,
          default_value = "5mm")]
    length: f64,
    /// Drive current (e.g. 13A).
    #[arg(long, value_name = "I", value_parser = quantity::current,
          default_value = "13A")]
    current: f64,
    /// Ion height above the trap surface (e.g. 125um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length,
          default_value = "125um")]
    ion_height: f64,
}

impl DesignArgs {
    fn design(&self) -> DesignPoint {
        DesignPoint {
            width: self.width,
            depth: self.depth,
            separation: self.separation,
            length: self.length,
            current: self.current,
            ion_height: self.ion_height,
        }
    }
}

#[derive(Args, Debug)]
struct ConstraintArgs {
    /// Current-density cap (e.g. 1e6A_per_cm2).
    #[arg(long, value_name = "J", value_parser = quantity::current_density,
          default_value = "1e6A_per_cm2")]
    j_max: f64,
    /// Gradient-band lower edge (e.g. 100T_per_m).
    #[arg(long, value_name = "G", value_parser = quantity::gradient_strength,
          default_value = "100T_per_m")]
    gradient_min: f64,
    /// Gradient-band upper edge (e.g. 150T_per_m).
    #[arg(long, value_name = "G", value_parser = quantity::gradient_strength,
          default_value = "150T_per_m")]
    gradient_max: f64,
    /// Dissipated-power budget (e.g. 3W).
    #[arg(long, value_name = "P", value_parser = quantity::power,
          default_value = "3W")]
    power_budget: f64,
    /// Operating-temperature ceiling (e.g. 70K).
    #[arg(long, value_name = "TEMP", value_parser = quantity::temperature,
          default_value = "70K")]
    t_op_max: f64,
    /// Stray-field cap at each storage point (e.g. 2mT).
    #[arg(long, value_name = "B", value_parser = quantity::field,
          default_value = "2mT")]
    storage_b_max: f64,
    /// Storage-zone point `x,y,z` where the stray cap applies;
    /// repeatable. Default: ±5mm along the arms at 125um height.
    #[arg(long, value_name = "POINT", value_parser = quantity::length_triple,
          allow_hyphen_values = true)]
    storage_point: Vec<[f64; 3]>,
}

impl ConstraintArgs {
    fn constraints(&self) -> Constraints {
        let storage_points = if self.storage_point.is_empty() {
            Constraints::default().storage_points
        } else {
            self.storage_point
                .iter()
                .map(|p| Point3::new(p[0], p[1], p[2]))
                .collect()
        };
        Constraints {
            j_max: self.j_max,
            gradient_target: (self.gradient_min, self.gradient_max),
            power_budget: self.power_budget,
            t_op_max: self.t_op_max,
            storage_b_max: self.storage_b_max,
            storage_points,
        }
    }
}

// ---------------------------------------------------------------------
// Per-command flags
// ---------------------------------------------------------------------

#[derive(Args, Debug)]
struct FieldMapArgs {
    #[command(flatten)]
    layout: LayoutArg,
    /// Transverse axis: span `-200um:200um:101` or pinned value `0um`.
    #[arg(long, value_name = "AXIS", value_parser = quantity::length_axis,
          allow_hyphen_values = true)]
    x: AxisRange,
    /// Height axis (same syntax, e.g. 125um).
    #[arg(long, value_name = "AXIS", value_parser = quantity::length_axis,
          allow_hyphen_values = true)]
    y: AxisRange,
    /// Axial axis (same syntax).
    #[arg(long, value_name = "AXIS", value_parser = quantity::length_axis,
          allow_hyphen_values = true)]
    z: AxisRange,
    #[command(flatten)]
    disc: DiscArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct QuadrupoleArgs {
    #[command(flatten)]
    layout: LayoutArg,
    /// Search-box centre `x,y,z` (e.g. 0um,125um,0um).
    #[arg(long, value_name = "POINT", value_parser = quantity::length_triple,
          default_value = "0um,125um,0um", allow_hyphen_values = true)]
    center: [f64; 3],
    /// Search-box half-extents `hx,hy,hz` (e.g. 50um,75um,50um).
    #[arg(long, value_name = "SIZE", value_parser = quantity::length_triple,
          default_value = "50um,75um,50um")]
    half_extent: [f64; 3],
    #[command(flatten)]
    disc: DiscArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct GradientArgs {
    #[command(flatten)]
    layout: LayoutArg,
    /// Evaluation point `x,y,z` (e.g. 0um,125um,0um).
    #[arg(long, value_name = "POINT", value_parser = quantity::length_triple,
          allow_hyphen_values = true)]
    point: [f64; 3],
    /// Central-difference step (default 0.1um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length)]
    step: Option<f64>,
    #[command(flatten)]
    disc: DiscArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct ResistanceArgs {
    #[command(flatten)]
    layout: LayoutArg,
    /// Evaluation temperature (e.g. 293K).
    #[arg(long, value_name = "TEMP", value_parser = quantity::temperature,
          default_value = "293K")]
    temperature: f64,
    /// Film-thickness override applied to every wire (e.g. 15um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length)]
    thickness: Option<f64>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct OperatingPointArgs {
    #[command(flatten)]
    layout: LayoutArg,
    /// Drive current (e.g. 10A).
    #[arg(long, value_name = "I", value_parser = quantity::current)]
    current: f64,
    /// Initial wire-temperature guess (default: the base temperature).
    #[arg(long, value_name = "TEMP", value_parser = quantity::temperature)]
    t_guess: Option<f64>,
    #[command(flatten)]
    env: EnvArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct PowerCurveArgs {
    #[command(flatten)]
    layout: LayoutArg,
    /// Ascending currents: list `0A,2A,4A` or range `0A:12A:25`.
    #[arg(long, value_name = "LIST", value_parser = quantity::current_list)]
    currents: QuantityList,
    #[command(flatten)]
    env: EnvArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct RunawayArgs {
    #[command(flatten)]
    layout: LayoutArg,
    /// Upper end of the bisection search (e.g. 30A).
    #[arg(long, value_name = "I", value_parser = quantity::current,
          default_value = "30A")]
    i_max: f64,
    #[command(flatten)]
    env: EnvArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct FitRrrArgs {
    /// Measured R(T) samples CSV (header `T_K,R_ohm[,R_err_ohm]`).
    #[arg(long, value_name = "FILE")]
    samples: PathBuf,
    /// Wire length in squares, i.e. length/width (dimensionless).
    #[arg(long)]
    squares: f64,
    /// Film thickness (e.g. 15um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length)]
    thickness: f64,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    design: DesignArgs,
    #[command(flatten)]
    constraints: ConstraintArgs,
    #[command(flatten)]
    env: EnvArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Wire widths: list `80um,100um` or range `60um:120um:7`.
    #[arg(long, value_name = "LIST", value_parser = quantity::length_list,
          default_value = "100um")]
    widths: QuantityList,
    /// Film thicknesses (same syntax).
    #[arg(long, value_name = "LIST", value_parser = quantity::length_list,
          default_value = "15um")]
    depths: QuantityList,
    /// Pair separations (same syntax).
    #[arg(long, value_name = "LIST", value_parser = quantity::length_list,
          default_value = "88um")]
    separations: QuantityList,
    /// Gate-zone leg lengths (same syntax).
    #[arg(long, value_name = "LIST", value_parser = quantity::length_list,
          default_value = "5mm")]
    lengths: QuantityList,
    /// Drive currents: list `8A,10A` or range `8A:12A:5`.
    #[arg(long, value_name = "LIST", value_parser = quantity::current_list,
          default_value = "13A")]
    currents: QuantityList,
    /// Ion height shared by all candidates (e.g. 125um).
    #[arg(long, value_name = "LEN", value_parser = quantity::length,
          default_value = "125um")]
    ion_height: f64,
    #[command(flatten)]
    constraints: ConstraintArgs,
    #[command(flatten)]
    env: EnvArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArg,
}

// ---------------------------------------------------------------------
// Error mapping and serialization helpers
// ---------------------------------------------------------------------

/// A bracketing failure means the solver could not isolate the null —
/// exit 3; everything else a field command can raise is bad input.
fn map_mag(e: MagnetostaticsError) -> CliError {
    match e {
        MagnetostaticsError::NotBracketed { .. } => CliError::Solver(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn map_design(e: DesignError) -> CliError {
    match e {
        DesignError::Magnetostatics(MagnetostaticsError::NotBracketed { .. }) => {
            CliError::Solver(e.to_string())
        }
        _ => CliError::Input(e.to_string()),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))
}

/// Metres → micrometres, for summary lines only.
fn um(v: f64) -> f64 {
    v / 1.0e-6
}

// ---------------------------------------------------------------------
// Command bodies
// ---------------------------------------------------------------------

fn cmd_field_map(a: &FieldMapArgs) -> CliResult {
    let layout = a.layout.load()?;
    let grid = GridSpec { x: a.x, y: a.y, z: a.z };
    let map = field_map(&layout, &grid, a.disc.disc()).map_err(map_mag)?;
    a.out.emit(&map.to_csv())?;
    let (lo, hi) = map
        .magnitude
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    eprintln!(
        "field map: {}x{}x{} samples over '{}', |B| in [{lo:.3e}, {hi:.3e}] T",
        map.axes[0].len(),
        map.axes[1].len(),
        map.axes[2].len(),
        layout.name
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_quadrupole(a: &QuadrupoleArgs) -> CliResult {
    let layout = a.layout.load()?;
    let center = Point3::new(a.center[0], a.center[1], a.center[2]);
    let boxspec =
        SearchBox::centered(center, a.half_extent[0], a.half_extent[1], a.half_extent[2]);
    let q = find_quadrupole(&layout, &boxspec, a.disc.disc()).map_err(map_mag)?;
    a.out.emit(&to_json(&q)?)?;
    eprintln!(
        "quadrupole: null at ({:.3}, {:.3}, {:.3}) um, residual |B| = {:.3e} T, \
         gradient/amp = ({:.3}, {:.3}, {:.3}) T/m/A",
        um(q.position.x),
        um(q.position.y),
        um(q.position.z),
        q.residual_b,
        q.gradient_per_amp[0],
        q.gradient_per_amp[1],
        q.gradient_per_amp[2],
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_gradient(a: &GradientArgs) -> CliResult {
    let layout = a.layout.load()?;
    let p = Point3::new(a.point[0], a.point[1], a.point[2]);
    let g = gradient(p, &layout, a.disc.disc(), a.step).map_err(map_mag)?;
    let artifact = to_json(&serde_json::json!({
        "point_m": [p.x, p.y, p.z],
        "jacobian_T_per_m": g.jacobian,
        "grad_mag_T_per_m": g.grad_mag,
        "column_norms_T_per_m": [g.column_norm(0), g.column_norm(1), g.column_norm(2)],
        "trace_T_per_m": g.trace(),
    }))?;
    a.out.emit(&artifact)?;
    let mag = (g.grad_mag[0].powi(2) + g.grad_mag[1].powi(2) + g.grad_mag[2].powi(2)).sqrt();
    eprintln!(
        "gradient: |grad |B|| = {:.4} T/m at ({:.3}, {:.3}, {:.3}) um",
        mag,
        um(p.x),
        um(p.y),
        um(p.z)
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_resistance(a: &ResistanceArgs) -> CliResult {
    let layout = a.layout.load()?;
    let model = a.model.model()?;
    let r = layout_resistance(&layout, a.temperature, &model, a.thickness)
        .map_err(CliError::input)?;
    // Report the sheet resistance when one film thickness applies to the
    // whole layout (an override, or all wires sharing a depth).
    let thickness = a.thickness.or_else(|| {
        let mut depths = layout.wires.iter().map(|w| w.cross_section.depth);
        let first = depths.next()?;
        depths.all(|d| d == first).then_some(first)
    });
    let sheet = match thickness {
        Some(th) => Some(sheet_resistance(a.temperature, th, &model).map_err(CliError::input)?),
        None => None,
    };
    let artifact = to_json(&serde_json::json!({
        "temperature_K": a.temperature,
        "resistance_ohm": r,
        "squares": layout.squares(),
        "sheet_resistance_ohm_per_sq": sheet,
        "rrr": model.rrr,
    }))?;
    a.out.emit(&artifact)?;
    eprintln!(
        "resistance: {:.4} mOhm at {} K ({:.1} squares, RRR {})",
        r * 1.0e3,
        a.temperature,
        layout.squares(),
        model.rrr
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_operating_point(a: &OperatingPointArgs) -> CliResult {
    let layout = a.layout.load()?;
    let env = a.env.env()?;
    let model = a.model.model()?;
    let op = match a.t_guess {
        Some(t0) => operating_point_with_guess(a.current, &env, &layout, &model, t0),
        None => operating_point(a.current, &env, &layout, &model),
    };
    // The artifact is written even without convergence: a runaway
    // signature is a complete, meaningful result.
    a.out.emit(&to_json(&op)?)?;
    if op.converged {
        eprintln!(
            "operating point: T = {:.3} K, R = {:.4e} ohm, P = {:.4} W ({} iterations)",
            op.temperature, op.resistance, op.power, op.iterations
        );
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "thermal runaway: no converged operating point at {} A (last iterate {:.1} K)",
            op.current, op.temperature
        );
        Ok(ExitCode::from(EXIT_SOLVER))
    }
}

fn cmd_power_curve(a: &PowerCurveArgs) -> CliResult {
    let layout = a.layout.load()?;
    let env = a.env.env()?;
    let model = a.model.model()?;
    let rows = power_curve(&a.currents.0, &env, &layout, &model).map_err(CliError::input)?;
    let mut csv = String::from("current_A,p_selfheated_W,p_isothermal_W,converged\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{}", r.current, r.p_selfheated, r.p_isothermal, r.converged);
    }
    a.out.emit(&csv)?;
    let converged = rows.iter().filter(|r| r.converged).count();
    eprintln!(
        "power curve: {} points, I in [{}, {}] A, {} converged",
        rows.len(),
        rows.first().map(|r| r.current).unwrap_or(0.0),
        rows.last().map(|r| r.current).unwrap_or(0.0),
        converged
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_runaway(a: &RunawayArgs) -> CliResult {
    let layout = a.layout.load()?;
    let env = a.env.env()?;
    let model = a.model.model()?;
    if !(a.i_max > 0.0) || !a.i_max.is_finite() {
        return Err(CliError::Input(format!(
            "--i-max must be positive, got {} A",
            a.i_max
        )));
    }
    let threshold = runaway_current(&env, &layout, &model, a.i_max);
    let artifact = to_json(&serde_json::json!({
        "i_max_search_A": a.i_max,
        "resolution_A": RUNAWAY_RESOLUTION,
        // null: every current up to the search bound converges.
        "runaway_current_A": threshold,
    }))?;
    a.out.emit(&artifact)?;
    match threshold {
        Some(i) => eprintln!(
            "thermal runaway above {i:.2} A (largest converged current, bisected to {RUNAWAY_RESOLUTION} A)"
        ),
        None => eprintln!("no thermal runaway below the {} A search bound", a.i_max),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fit_rrr(a: &FitRrrArgs) -> CliResult {
    let text = std::fs::read_to_string(&a.samples).map_err(|e| {
        CliError::Input(format!("cannot read samples {}: {e}", a.samples.display()))
    })?;
    let samples = electrothermal::parse_rt_samples(&text).map_err(CliError::input)?;
    let fit =
        electrothermal::fit_rrr(&samples, a.squares, a.thickness).map_err(CliError::input)?;
    a.out.emit(&to_json(&fit)?)?;
    eprintln!(
        "RRR fit: rrr_hat = {:.1}, interval [{:.1}, {:.1}], residual norm {:.3e} ({} samples)",
        fit.rrr_hat,
        fit.interval.0,
        fit.interval.1,
        fit.residual_norm,
        samples.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_evaluate(a: &EvaluateArgs) -> CliResult {
    let design = a.design.design();
    let constraints = a.constraints.constraints();
    let env = a.env.env()?;
    let model = a.model.model()?;
    let metrics = design::evaluate(&design, &constraints, &env, &model).map_err(map_design)?;
    a.out.emit(&to_json(&metrics)?)?;
    if metrics.feasible {
        eprintln!(
            "evaluate: feasible — gradient {:.1} T/m, P = {:.3} W, T_op = {:.2} K",
            metrics.gradient_at_current, metrics.power, metrics.t_op
        );
        Ok(ExitCode::SUCCESS)
    } else if !metrics.op_converged {
        eprintln!(
            "evaluate: thermal runaway at {} A — no converged operating point",
            design.current
        );
        Ok(ExitCode::from(EXIT_SOLVER))
    } else {
        let failed: Vec<&str> = metrics
            .verdicts
            .iter()
            .filter(|v| !v.passed)
            .map(|v| v.constraint.as_str())
            .collect();
        eprintln!("evaluate: infeasible — failing constraints: {}", failed.join(", "));
        Ok(ExitCode::from(EXIT_CONSTRAINT))
    }
}

fn cmd_sweep(a: &SweepArgs) -> CliResult {
    let ranges = SweepRanges {
        width: a.widths.0.clone(),
        depth: a.depths.0.clone(),
        separation: a.separations.0.clone(),
        length: a.lengths.0.clone(),
        current: a.currents.0.clone(),
        ion_height: a.ion_height,
    };
    let constraints = a.constraints.constraints();
    let env = a.env.env()?;
    let model = a.model.model()?;
    let result = design::sweep(&ranges, &constraints, &env, &model).map_err(map_design)?;
    a.out.emit(&result.to_csv())?;
    eprintln!(
        "sweep: {} candidates, {} feasible, {} on the Pareto front",
        result.entries.len(),
        result.feasible_count(),
        result.front().len()
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------

fn run(cli: &Cli) -> CliResult {
    if cli.echo_units {
        eprintln!("parsed inputs (SI base units): {:#?}", cli.command);
    }
    match &cli.command {
        Command::FieldMap(a) => cmd_field_map(a),
        Command::Quadrupole(a) => cmd_quadrupole(a),
        Command::Gradient(a) => cmd_gradient(a),
        Command::Resistance(a) => cmd_resistance(a),
        Command::OperatingPoint(a) => cmd_operating_point(a),
        Command::PowerCurve(a) => cmd_power_curve(a),
        Command::Runaway(a) => cmd_runaway(a),
        Command::FitRrr(a) => cmd_fit_rrr(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(CliError::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
