//! Cryogenic copper resistivity, Joule-heating operating points, thermal
//! runaway limits, and RRR estimation from measured R(T) data.
//!
//! Resistivity follows Matthiessen's rule: `ρ(T) = ρ_pure(T) + ρ_res`,
//! where `ρ_pure` is an embedded pure-copper table (log-linear
//! interpolation) and the residual term is parameterized by the residual
//! resistance ratio, `RRR = ρ(293 K)/ρ_res`. Electrical and thermal
//! behaviour couple through a lumped single-node model: the wire sits at
//! temperature `T = t_base + r_th·P` with `P = I²·R(T)`, solved by damped
//! fixed-point iteration. Loss of a fixed point (temperature climbing out
//! of the table) is the thermal-runaway signature and is reported as data,
//! not as an error.
//!
//! Units: kelvins, ohms, watts, amperes, metres; resistivity in Ω·m.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{squares, WireLayout};
use crate::units::T_REF;

/// Convergence tolerance of the operating-point iteration [K].
pub const TEMPERATURE_TOL: f64 = 1.0e-3;

/// Iteration cap of the operating-point solver.
pub const ITERATION_CAP: usize = 1000;

/// Resolution of the runaway-current bisection [A].
pub const RUNAWAY_RESOLUTION: f64 = 0.01;

/// Errors from resistivity evaluation, fitting, and sample parsing.
#[derive(Debug, Error)]
pub enum ElectrothermalError {
    /// Temperature outside the resistivity table.
    #[error("temperature {t} K outside table range [{lo} K, {hi} K]")]
    OutOfRange {
        /// Requested temperature [K].
        t: f64,
        /// Table lower bound [K].
        lo: f64,
        /// Table upper bound [K].
        hi: f64,
    },
    /// Invalid model parameters or table.
    #[error("invalid resistivity model: {0}")]
    BadModel(String),
    /// Invalid thermal environment parameters.
    #[error("invalid thermal environment: {0}")]
    BadEnvironment(String),
    /// A scalar argument out of its domain.
    #[error("argument `{name}` out of domain: {value}")]
    BadArgument {
        /// Offending argument name.
        name: &'static str,
        /// Rejected value.
        value: f64,
    },
    /// R(T) fit input that cannot identify the model.
    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),
    /// Malformed R(T) sample or table document.
    #[error("sample parse error: {0}")]
    Parse(String),
    /// No temperature in the table range reaches the requested resistance.
    #[error("resistance {r} Ω unreachable within the table range (R spans [{lo} Ω, {hi} Ω])")]
    Unreachable {
        /// Requested resistance [Ω].
        r: f64,
        /// Smallest reachable resistance [Ω].
        lo: f64,
        /// Largest reachable resistance [Ω].
        hi: f64,
    },
}

/// Pure-copper resistivity ρ(T) [Ω·m vs K].
///
/// Transcribed from the standard recommended tabulation for well-annealed
/// high-purity copper (Matula, *Electrical resistivity of copper, gold,
/// palladium, and silver*, J. Phys. Chem. Ref. Data **8**, 1147 (1979)),
/// rounded to three digits and extended from 10 K down to 4 K by the
/// low-temperature ~T⁵ phonon scaling. Values are audited in the repo
/// documentation.
const PURE_COPPER_TABLE: [(f64, f64); 26] = [
    (4.0, 2.0e-15),
    (10.0, 1.54e-13),
    (15.0, 9.2e-13),
    (20.0, 7.98e-12),
    (25.0, 3.21e-11),
    (30.0, 8.97e-11),
    (35.0, 1.64e-10),
    (40.0, 2.39e-10),
    (45.0, 3.95e-10),
    (50.0, 5.18e-10),
    (55.0, 7.10e-10),
    (60.0, 9.71e-10),
    (70.0, 1.52e-9),
    (80.0, 2.13e-9),
    (90.0, 2.79e-9),
    (100.0, 3.47e-9),
    (120.0, 4.97e-9),
    (140.0, 6.35e-9),
    (160.0, 7.71e-9),
    (180.0, 9.07e-9),
    (200.0, 1.043e-8),
    (220.0, 1.179e-8),
    (250.0, 1.383e-8),
    (273.0, 1.540e-8),
    (293.0, 1.676e-8),
    (300.0, 1.725e-8),
];

/// Temperature-dependent copper resistivity: pure-metal table plus an
/// RRR-parameterized residual term.
///
/// Convention: `RRR = ρ(293 K) / ρ_res` with
/// `ρ(T) = ρ_pure(T) + ρ_res`. For a freestanding model this pins
/// `ρ_res = ρ_pure(293 K)/(RRR − 1)` so that the definition is
/// self-consistent at 293 K; when fitting measured data, `rho_ref` is
/// instead anchored to the measured room-temperature resistivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResistivityModel {
    /// Residual resistance ratio (> 1).
    pub rrr: f64,
    /// Pure-copper table: (T [K], ρ [Ω·m]), strictly increasing in T.
    pub rho_pure: Vec<(f64, f64)>,
    /// Total resistivity at the 293 K reference [Ω·m].
    pub rho_ref: f64,
}

impl Default for ResistivityModel {
    /// RRR = 50: typical electroplated copper, and the value used for the
    /// design-stage resistance predictions.
    fn default() -> Self {
        ResistivityModel::with_rrr(50.0).expect("default model is valid")
    }
}

impl ResistivityModel {
    /// Model with the embedded pure-copper table and the self-consistent
    /// reference `rho_ref = ρ_pure(293 K)·RRR/(RRR − 1)`.
    pub fn with_rrr(rrr: f64) -> Result<Self, ElectrothermalError> {
        Self::with_rrr_and_table(rrr, PURE_COPPER_TABLE.to_vec())
    }

    /// Model with a caller-provided pure-metal table (same conventions).
    pub fn with_rrr_and_table(
        rrr: f64,
        rho_pure: Vec<(f64, f64)>,
    ) -> Result<Self, ElectrothermalError> {
        validate_rrr(rrr)?;
        validate_table(&rho_pure)?;
        let rho_pure_ref = interp_log(&rho_pure, T_REF).expect("table covers 293 K");
        let rho_ref = rho_pure_ref * rrr / (rrr - 1.0);
        Ok(ResistivityModel { rrr, rho_pure, rho_ref })
    }

    /// Model whose reference resistivity is anchored to a measured value
    /// rather than derived from the pure table — the form produced by
    /// [`fit_rrr`].
    pub fn with_anchored_ref(rrr: f64, rho_ref: f64) -> Result<Self, ElectrothermalError> {
        validate_rrr(rrr)?;
        if !(rho_ref > 0.0) || !rho_ref.is_finite() {
            return Err(ElectrothermalError::BadModel(format!(
                "rho_ref must be positive, got {rho_ref}"
            )));
        }
        Ok(ResistivityModel { rrr, rho_pure: PURE_COPPER_TABLE.to_vec(), rho_ref })
    }

    /// The residual (temperature-independent) resistivity ρ_res [Ω·m].
    pub fn residual_resistivity(&self) -> f64 {
        self.rho_ref / self.rrr
    }

    /// Table temperature range [K].
    pub fn table_range(&self) -> (f64, f64) {
        (self.rho_pure[0].0, self.rho_pure[self.rho_pure.len() - 1].0)
    }
}

fn validate_rrr(rrr: f64) -> Result<(), ElectrothermalError> {
    if !(rrr > 1.0) || !rrr.is_finite() {
        return Err(ElectrothermalError::BadModel(format!("rrr must exceed 1, got {rrr}")));
    }
    Ok(())
}

fn validate_table(table: &[(f64, f64)]) -> Result<(), ElectrothermalError> {
    if table.len() < 2 {
        return Err(ElectrothermalError::BadModel("table needs >= 2 rows".into()));
    }
    for w in table.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(ElectrothermalError::BadModel(format!(
                "table temperatures must strictly increase ({} K then {} K)",
                w[0].0, w[1].0
            )));
        }
        if !(w[1].1 >= w[0].1) {
            return Err(ElectrothermalError::BadModel(format!(
                "table resistivity must be non-decreasing (at {} K)",
                w[1].0
            )));
        }
    }
    for &(t, rho) in table {
        if !t.is_finite() || !(rho > 0.0) || !rho.is_finite() {
            return Err(ElectrothermalError::BadModel(format!("bad table row ({t}, {rho})")));
        }
    }
    let (lo, hi) = (table[0].0, table[table.len() - 1].0);
    if lo > 10.0 || hi < 300.0 {
        return Err(ElectrothermalError::BadModel(format!(
            "table must cover [10 K, 300 K], got [{lo} K, {hi} K]"
        )));
    }
    Ok(())
}

/// Log-linear interpolation (linear T, linear ln ρ) within the table.
fn interp_log(table: &[(f64, f64)], t: f64) -> Result<f64, ElectrothermalError> {
    let (lo, hi) = (table[0].0, table[table.len() - 1].0);
    if !(t >= lo && t <= hi) {
        return Err(ElectrothermalError::OutOfRange { t, lo, hi });
    }
    // Exact at knots; binary search for the bracketing interval otherwise.
    let idx = table.partition_point(|&(tt, _)| tt <= t);
    if idx == 0 {
        return Ok(table[0].1);
    }
    let (t0, r0) = table[idx - 1];
    if t == t0 || idx == table.len() {
        return Ok(r0);
    }
    let (t1, r1) = table[idx];
    let f = (t - t0) / (t1 - t0);
    Ok((r0.ln() + f * (r1.ln() - r0.ln())).exp())
}

/// Lumped thermal model: heat sink at `t_base`, total chip→sink thermal
/// resistance `r_th`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalEnvironment {
    /// Heat-sink base temperature [K] (≥ 4 K).
    pub t_base: f64,
    /// Thermal resistance [K/W] (≥ 0).
    pub r_th: f64,
}

impl ThermalEnvironment {
    /// Validated constructor.
    pub fn new(t_base: f64, r_th: f64) -> Result<Self, ElectrothermalError> {
        if !(t_base >= 4.0) || !t_base.is_finite() {
            return Err(ElectrothermalError::BadEnvironment(format!(
                "t_base must be >= 4 K, got {t_base}"
            )));
        }
        if !(r_th >= 0.0) || !r_th.is_finite() {
            return Err(ElectrothermalError::BadEnvironment(format!(
                "r_th must be >= 0 K/W, got {r_th}"
            )));
        }
        Ok(ThermalEnvironment { t_base, r_th })
    }
}

/// A (possibly non-converged) self-heating solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Drive current [A].
    pub current: f64,
    /// Wire temperature [K].
    pub temperature: f64,
    /// Wire resistance at that temperature [Ω].
    pub resistance: f64,
    /// Dissipated power `current²·resistance` [W].
    pub power: f64,
    /// Whether the fixed point converged; `false` flags thermal runaway
    /// (temperature left the table range) or an exhausted iteration cap.
    pub converged: bool,
    /// Fixed-point iterations performed.
    pub iterations: usize,
}

/// One row of a power-vs-current curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerCurvePoint {
    /// Drive current [A].
    pub current: f64,
    /// Self-consistent dissipated power [W].
    pub p_selfheated: f64,
    /// Power if the wire stayed at `t_base` [W].
    pub p_isothermal: f64,
    /// Whether the self-heated point converged.
    pub converged: bool,
}

/// One measured R(T) sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RtSample {
    /// Sample temperature [K].
    pub t: f64,
    /// Measured resistance [Ω].
    pub r: f64,
    /// One-sigma resistance uncertainty [Ω], when stated.
    pub r_err: Option<f64>,
}

/// Result of an RRR fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrrFit {
    /// Best-fit residual resistance ratio.
    pub rrr_hat: f64,
    /// (low, high) range of refits over all extreme combinations of the
    /// stated sample uncertainties; collapses to `rrr_hat` when no sample
    /// carries an uncertainty.
    pub interval: (f64, f64),
    /// Euclidean norm of the log-resistance residuals at the best fit.
    pub residual_norm: f64,
    /// Per-sample residuals `ln(R_model/R_measured)` at the best fit.
    pub residuals: Vec<f64>,
    /// Reference resistivity anchored from the near-293 K sample [Ω·m].
    pub rho_ref: f64,
}

/// Total resistivity ρ(T) = ρ_pure(T) + ρ_res [Ω·m].
pub fn resistivity(t: f64, model: &ResistivityModel) -> Result<f64, ElectrothermalError> {
    Ok(interp_log(&model.rho_pure, t)? + model.residual_resistivity())
}

/// Sheet resistance ρ(T)/thickness [Ω/sq].
pub fn sheet_resistance(
    t: f64,
    thickness: f64,
    model: &ResistivityModel,
) -> Result<f64, ElectrothermalError> {
    if !(thickness > 0.0) || !thickness.is_finite() {
        return Err(ElectrothermalError::BadArgument { name: "thickness", value: thickness });
    }
    Ok(resistivity(t, model)? / thickness)
}

/// Series resistance of a layout at temperature `t` [Ω]:
/// `Σ squares(wire) × sheet_resistance`.
///
/// `thickness` overrides the film thickness for every wire when given;
/// otherwise each wire uses its own cross-section depth.
pub fn layout_resistance(
    layout: &WireLayout,
    t: f64,
    model: &ResistivityModel,
    thickness: Option<f64>,
) -> Result<f64, ElectrothermalError> {
    let mut total = 0.0;
    for wire in &layout.wires {
        let th = thickness.unwrap_or(wire.cross_section.depth);
        total += squares(wire) * sheet_resistance(t, th, model)?;
    }
    Ok(total)
}

/// Self-consistent operating point at `current`, starting from `t_base`.
///
/// Solves `T = t_base + r_th · I² · R(T)` by damped fixed-point iteration
/// (damping 0.5, tolerance 1 mK, cap 1000). The loop iterates to a tenth
/// of the tolerance internally so the reported temperature is independent
/// of the starting guess at the millikelvin level even when the loop gain
/// is close to one. A temperature escaping the resistivity table or an
/// exhausted cap yields `converged = false` with the last iterate — the
/// thermal-runaway signature — rather than an error.
pub fn operating_point(
    current: f64,
    env: &ThermalEnvironment,
    layout: &WireLayout,
    model: &ResistivityModel,
) -> OperatingPoint {
    operating_point_with_guess(current, env, layout, model, env.t_base)
}

/// [`operating_point`] with an explicit initial temperature guess; the
/// converged solution is independent of the guess (the fixed point is
/// unique when it exists).
pub fn operating_point_with_guess(
    current: f64,
    env: &ThermalEnvironment,
    layout: &WireLayout,
    model: &ResistivityModel,
    t_init: f64,
) -> OperatingPoint {
    let mut t = t_init;
    let mut last_r = 0.0;
    let mut last_p = 0.0;
    for iter in 1..=ITERATION_CAP {
        let r = match layout_resistance(layout, t, model, None) {
            Ok(r) => r,
            // Temperature left the table: runaway signature.
            Err(_) => {
                return OperatingPoint {
                    current,
                    temperature: t,
                    resistance: last_r,
                    power: last_p,
                    converged: false,
                    iterations: iter,
                }
            }
        };
        let p = current * current * r;
        let t_target = env.t_base + env.r_th * p;
        if (t_target - t).abs() < TEMPERATURE_TOL / 10.0 {
            return OperatingPoint {
                current,
                temperature: t,
                resistance: r,
                power: p,
                converged: true,
                iterations: iter,
            };
        }
        t += 0.5 * (t_target - t);
        last_r = r;
        last_p = p;
    }
    OperatingPoint {
        current,
        temperature: t,
        resistance: last_r,
        power: last_p,
        converged: false,
        iterations: ITERATION_CAP,
    }
}

/// Self-heated vs isothermal power for each current in `currents`
/// (non-negative, ascending).
///
/// The isothermal column assumes the wire stays at `t_base`; comparing the
/// two quantifies the self-heating penalty.
pub fn power_curve(
    currents: &[f64],
    env: &ThermalEnvironment,
    layout: &WireLayout,
    model: &ResistivityModel,
) -> Result<Vec<PowerCurvePoint>, ElectrothermalError> {
    let r_base = layout_resistance(layout, env.t_base, model, None)?;
    Ok(currents
        .iter()
        .map(|&i| {
            let op = operating_point(i, env, layout, model);
            PowerCurvePoint {
                current: i,
                p_selfheated: op.power,
                p_isothermal: i * i * r_base,
                converged: op.converged,
            }
        })
        .collect())
}

/// Largest current in `[0, i_max_search]` whose operating point converges,
/// located by bisection to 0.01 A; `None` when every tested current
/// converges (no runaway below the bound).
pub fn runaway_current(
    env: &ThermalEnvironment,
    layout: &WireLayout,
    model: &ResistivityModel,
    i_max_search: f64,
) -> Option<f64> {
    assert!(i_max_search > 0.0, "search bound must be positive");
    if operating_point(i_max_search, env, layout, model).converged {
        return None;
    }
    if !operating_point(0.0, env, layout, model).converged {
        // Even zero current has no valid point (base temperature outside
        // the model's range).
        return Some(0.0);
    }
    let (mut lo, mut hi) = (0.0, i_max_search);
    while hi - lo > RUNAWAY_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if operating_point(mid, env, layout, model).converged {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Fit the residual resistance ratio to measured R(T) samples of a wire
/// with the given square count and film thickness.
///
/// The sample nearest 293 K anchors the reference resistivity
/// `rho_ref = R·thickness/squares`; the remaining 1-D least-squares
/// problem in `ln R` over RRR is solved by a coarse log-spaced scan plus
/// golden-section refinement. The uncertainty interval refits at every
/// extreme combination of the stated per-sample errors (the model is
/// strongly nonlinear in RRR at low temperature, so linearized error
/// propagation would understate the asymmetry).
pub fn fit_rrr(
    samples: &[RtSample],
    layout_squares: f64,
    thickness: f64,
) -> Result<RrrFit, ElectrothermalError> {
    if !(layout_squares > 0.0) || !layout_squares.is_finite() {
        return Err(ElectrothermalError::BadArgument {
            name: "layout_squares",
            value: layout_squares,
        });
    }
    if !(thickness > 0.0) || !thickness.is_finite() {
        return Err(ElectrothermalError::BadArgument { name: "thickness", value: thickness });
    }
    if samples.len() < 2 {
        return Err(ElectrothermalError::DegenerateFit(format!(
            "need >= 2 samples, got {}",
            samples.len()
        )));
    }
    for (i, s) in samples.iter().enumerate() {
        if !(s.r > 0.0) || !s.r.is_finite() {
            return Err(ElectrothermalError::DegenerateFit(format!(
                "sample {i}: non-positive resistance {}",
                s.r
            )));
        }
        if !s.t.is_finite() {
            return Err(ElectrothermalError::DegenerateFit(format!("sample {i}: bad temperature")));
        }
        if let Some(e) = s.r_err {
            if !(e >= 0.0) || !e.is_finite() || e >= s.r {
                return Err(ElectrothermalError::DegenerateFit(format!(
                    "sample {i}: bad uncertainty {e}"
                )));
            }
        }
        for (j, other) in samples.iter().enumerate().take(i) {
            if other.t == s.t {
                return Err(ElectrothermalError::DegenerateFit(format!(
                    "samples {j} and {i} share temperature {} K",
                    s.t
                )));
            }
        }
    }
    // Anchor on the sample nearest the 293 K reference.
    let anchor = samples
        .iter()
        .min_by(|a, b| (a.t - T_REF).abs().total_cmp(&(b.t - T_REF).abs()))
        .expect("non-empty");
    if (anchor.t - T_REF).abs() > 40.0 {
        return Err(ElectrothermalError::DegenerateFit(format!(
            "no sample near 293 K to anchor rho_ref (closest is {} K)",
            anchor.t
        )));
    }
    let geom = layout_squares / thickness; // R = geom · ρ
    let rho_ref = anchor.r / geom;

    let rhos: Result<Vec<f64>, _> =
        samples.iter().map(|s| interp_log(&PURE_COPPER_TABLE, s.t)).collect();
    let rho_pure_at = rhos?;
    let r_meas: Vec<f64> = samples.iter().map(|s| s.r).collect();

    let best = fit_rrr_1d(&rho_pure_at, &r_meas, geom, rho_ref);

    // Extreme-combination refits for the interval.
    let err_idx: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.r_err.is_some_and(|e| e > 0.0))
        .map(|(i, _)| i)
        .collect();
    if err_idx.len() > 16 {
        return Err(ElectrothermalError::DegenerateFit(
            "too many uncertain samples for extreme-combination propagation (max 16)".into(),
        ));
    }
    let (mut lo, mut hi) = (best, best);
    for mask in 0..(1u32 << err_idx.len()) {
        let mut r_combo = r_meas.clone();
        for (bit, &i) in err_idx.iter().enumerate() {
            let e = samples[i].r_err.unwrap();
            r_combo[i] += if mask & (1 << bit) != 0 { e } else { -e };
        }
        // The anchor moves with its own extreme when it carries an error.
        let anchor_i = samples
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.t - T_REF).abs().total_cmp(&(b.1.t - T_REF).abs()))
            .map(|(i, _)| i)
            .unwrap();
        let rho_ref_combo = r_combo[anchor_i] / geom;
        let rrr_combo = fit_rrr_1d(&rho_pure_at, &r_combo, geom, rho_ref_combo);
        lo = lo.min(rrr_combo);
        hi = hi.max(rrr_combo);
    }

    let residuals: Vec<f64> = rho_pure_at
        .iter()
        .zip(&r_meas)
        .map(|(&rp, &rm)| (geom * (rp + rho_ref / best) / rm).ln())
        .collect();
    let residual_norm = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
    Ok(RrrFit { rrr_hat: best, interval: (lo, hi), residual_norm, residuals, rho_ref })
}

/// 1-D least squares in ln R over RRR ∈ (1, 1e5], log-spaced coarse scan
/// then golden-section refinement.
fn fit_rrr_1d(rho_pure_at: &[f64], r_meas: &[f64], geom: f64, rho_ref: f64) -> f64 {
    let objective = |ln_rrr: f64| -> f64 {
        let rho_res = rho_ref / ln_rrr.exp();
        rho_pure_at
            .iter()
            .zip(r_meas)
            .map(|(&rp, &rm)| {
                let resid = (geom * (rp + rho_res) / rm).ln();
                resid * resid
            })
            .sum()
    };
    let (lo, hi) = ((1.0 + 1.0e-6_f64).ln(), 1.0e5_f64.ln());
    let n: usize = 400;
    let mut best_i: usize = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..=n {
        let u = lo + (hi - lo) * i as f64 / n as f64;
        let v = objective(u);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let step = (hi - lo) / n as f64;
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);
    // Golden-section on the bracketing interval.
    let phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    for _ in 0..200 {
        if b - a < 1.0e-10 {
            break;
        }
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if objective(c) <= objective(d) {
            b = d;
        } else {
            a = c;
        }
    }
    (0.5 * (a + b)).exp()
}

/// Invert R(T) over the table range by bisection (R is strictly
/// increasing in T). Used to back out the wire temperature implied by a
/// measured resistance.
pub fn temperature_for_resistance(
    r_target: f64,
    layout: &WireLayout,
    model: &ResistivityModel,
    thickness: Option<f64>,
) -> Result<f64, ElectrothermalError> {
    let (t_lo, t_hi) = model.table_range();
    let r_lo = layout_resistance(layout, t_lo, model, thickness)?;
    let r_hi = layout_resistance(layout, t_hi, model, thickness)?;
    if !(r_target >= r_lo && r_target <= r_hi) {
        return Err(ElectrothermalError::Unreachable { r: r_target, lo: r_lo, hi: r_hi });
    }
    let (mut lo, mut hi) = (t_lo, t_hi);
    for _ in 0..200 {
        if hi - lo < 1.0e-6 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if layout_resistance(layout, mid, model, thickness)? <= r_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Parse R(T) samples from CSV with header `T_K,R_ohm[,R_err_ohm]`.
pub fn parse_rt_samples(text: &str) -> Result<Vec<RtSample>, ElectrothermalError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| ElectrothermalError::Parse(e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ti, ri) = match (col("T_K"), col("R_ohm")) {
        (Some(t), Some(r)) => (t, r),
        _ => {
            return Err(ElectrothermalError::Parse(
                "header must contain columns T_K and R_ohm".into(),
            ))
        }
    };
    let ei = col("R_err_ohm");
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ElectrothermalError::Parse(e.to_string()))?;
        let field = |i: usize| -> Result<f64, ElectrothermalError> {
            record
                .get(i)
                .ok_or_else(|| {
                    ElectrothermalError::Parse(format!("row {}: missing column {i}", row + 2))
                })?
                .parse::<f64>()
                .map_err(|e| ElectrothermalError::Parse(format!("row {}: {e}", row + 2)))
        };
        let r_err = match ei {
            Some(i) if record.get(i).is_some_and(|s| !s.is_empty()) => Some(field(i)?),
            _ => None,
        };
        out.push(RtSample { t: field(ti)?, r: field(ri)?, r_err });
    }
    if out.is_empty() {
        return Err(ElectrothermalError::Parse("no data rows".into()));
    }
    Ok(out)
}

/// Parse a pure-metal resistivity table from CSV with header
/// `T_K,rho_ohm_m` (used for table overrides).
pub fn parse_resistivity_table(text: &str) -> Result<Vec<(f64, f64)>, ElectrothermalError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| ElectrothermalError::Parse(e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (ti, ri) = match (col("T_K"), col("rho_ohm_m")) {
        (Some(t), Some(r)) => (t, r),
        _ => {
            return Err(ElectrothermalError::Parse(
                "header must contain columns T_K and rho_ohm_m".into(),
            ))
        }
    };
    let mut table = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ElectrothermalError::Parse(e.to_string()))?;
        let get = |i: usize| -> Result<f64, ElectrothermalError> {
            record
                .get(i)
                .ok_or_else(|| {
                    ElectrothermalError::Parse(format!("row {}: missing column {i}", row + 2))
                })?
                .parse::<f64>()
                .map_err(|e| ElectrothermalError::Parse(format!("row {}: {e}", row + 2)))
        };
        table.push((get(ti)?, get(ri)?));
    }
    validate_table(&table)?;
    Ok(table)
}
