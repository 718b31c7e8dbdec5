//! Design and analysis toolkit for current-carrying wires (CCWs) embedded
//! beneath surface ion traps.
//!
//! The crate is organised as four physics/engineering layers plus shared
//! constants:
//!
//! - [`geometry`] — wire layouts with rectangular cross-sections, layout-file
//!   I/O, and discretization into straight current filaments.
//! - [`magnetostatics`] — analytic finite-segment Biot–Savart fields,
//!   numerical gradients, field maps, and magnetic-quadrupole location.
//! - [`electrothermal`] — temperature-dependent copper resistivity (RRR
//!   model), wire resistance, self-consistent Joule-heating operating
//!   points, thermal-runaway limits, and RRR fitting from R(T) data.
//! - [`design`] — evaluation of candidate wire designs against engineering
//!   constraints and exhaustive parameter sweeps with Pareto fronts.
//!
//! All quantities are strict SI internally (metres, amperes, teslas, ohms,
//! kelvins); the only exception is current density, which is reported in
//! A/cm² because that is the unit the engineering limit is quoted in.

pub mod design;
pub mod electrothermal;
pub mod geometry;
pub mod magnetostatics;
pub mod units;

pub use design::{Constraints, DesignPoint, Metrics, SweepEntry, SweepResult, Verdict};
pub use electrothermal::{OperatingPoint, ResistivityModel, RrrFit, RtSample, ThermalEnvironment};
pub use geometry::{CrossSection, Filament, Point3, WireLayout, WirePath};
pub use magnetostatics::{FieldMap, FieldVector, GradientResult, QuadrupolePoint};
