//! Randomized invariant checks (proptest) plus a few deterministic
//! cross-validations that don't fit the unit-test scale: physical
//! symmetries of the field solver, exact current conservation, model
//! monotonicities, fit round-trips, and solver determinism.

use ccw::design::{evaluate, sweep, Constraints, DesignPoint, SweepRanges};
use ccw::electrothermal::{
    fit_rrr, layout_resistance, operating_point, resistivity, runaway_current, ResistivityModel,
    RtSample, ThermalEnvironment, RUNAWAY_RESOLUTION, TEMPERATURE_TOL,
};
use ccw::geometry::{
    antiparallel_pair, discretize, routed_pair, CrossSection, Filament, Point3, WirePath,
};
use ccw::magnetostatics::{
    field_map, find_quadrupole, gradient, segment_field, thin_wire_reference, AxisRange,
    Discretization, GridSpec, SearchBox,
};
use proptest::prelude::*;

/// A probe point at least `min_dist` from the segment axis, or `None`.
fn off_axis(p: Point3, a: Point3, b: Point3, min_dist: f64) -> bool {
    let d = b.sub(a);
    let len = d.norm();
    if len < 1e-6 {
        return false;
    }
    let dhat = d.scale(1.0 / len);
    let r = p.sub(a);
    let t = r.dot(dhat);
    let perp = r.sub(dhat.scale(t)).norm();
    // Distance to the segment (not the infinite line) — endpoints count.
    if t < 0.0 {
        return p.sub(a).norm() > min_dist;
    }
    if t > len {
        return p.sub(b).norm() > min_dist;
    }
    perp > min_dist
}

fn coord() -> impl Strategy<Value = f64> {
    -1.0..1.0_f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// B is strictly linear in the filament current.
    #[test]
    fn segment_field_linear_in_current(
        (ax, ay, az) in (coord(), coord(), coord()),
        (bx, by, bz) in (coord(), coord(), coord()),
        (px, py, pz) in (coord(), coord(), coord()),
        k in -8.0..8.0_f64,
    ) {
        let a = Point3::new(ax, ay, az);
        let b = Point3::new(bx, by, bz);
        let p = Point3::new(px, py, pz);
        prop_assume!(off_axis(p, a, b, 1e-2));
        prop_assume!(k.abs() > 1e-3);
        let f1 = Filament { start: a, end: b, current: 1.0 };
        let fk = Filament { start: a, end: b, current: k };
        let b1 = segment_field(p, &f1).unwrap();
        let bk = segment_field(p, &fk).unwrap();
        prop_assert!((bk.bx - k * b1.bx).abs() <= 1e-12 * b1.magnitude() * k.abs());
        prop_assert!((bk.by - k * b1.by).abs() <= 1e-12 * b1.magnitude() * k.abs());
        prop_assert!((bk.bz - k * b1.bz).abs() <= 1e-12 * b1.magnitude() * k.abs());
    }

    /// Rigid translation of source and probe leaves the field unchanged.
    #[test]
    fn segment_field_translation_invariant(
        (ax, ay, az) in (coord(), coord(), coord()),
        (bx, by, bz) in (coord(), coord(), coord()),
        (px, py, pz) in (coord(), coord(), coord()),
        (tx, ty, tz) in (-10.0..10.0_f64, -10.0..10.0_f64, -10.0..10.0_f64),
    ) {
        let a = Point3::new(ax, ay, az);
        let b = Point3::new(bx, by, bz);
        let p = Point3::new(px, py, pz);
        prop_assume!(off_axis(p, a, b, 1e-2));
        let t = Point3::new(tx, ty, tz);
        let f0 = Filament { start: a, end: b, current: 2.5 };
        let ft = Filament { start: a.add(t), end: b.add(t), current: 2.5 };
        let b0 = segment_field(p, &f0).unwrap();
        let bt = segment_field(p.add(t), &ft).unwrap();
        let scale = b0.magnitude();
        prop_assert!((bt.bx - b0.bx).abs() <= 1e-9 * scale);
        prop_assert!((bt.by - b0.by).abs() <= 1e-9 * scale);
        prop_assert!((bt.bz - b0.bz).abs() <= 1e-9 * scale);
    }

    /// Uniform geometric scaling by k at fixed current scales B by 1/k.
    #[test]
    fn segment_field_geometric_scaling(
        (ax, ay, az) in (coord(), coord(), coord()),
        (bx, by, bz) in (coord(), coord(), coord()),
        (px, py, pz) in (coord(), coord(), coord()),
        k in 0.1..10.0_f64,
    ) {
        let a = Point3::new(ax, ay, az);
        let b = Point3::new(bx, by, bz);
        let p = Point3::new(px, py, pz);
        prop_assume!(off_axis(p, a, b, 1e-2));
        let f = Filament { start: a, end: b, current: 1.0 };
        let fk = Filament { start: a.scale(k), end: b.scale(k), current: 1.0 };
        let b0 = segment_field(p, &f).unwrap();
        let bk = segment_field(p.scale(k), &fk).unwrap();
        let scale = b0.magnitude();
        prop_assert!((k * bk.bx - b0.bx).abs() <= 1e-9 * scale);
        prop_assert!((k * bk.by - b0.by).abs() <= 1e-9 * scale);
        prop_assert!((k * bk.bz - b0.bz).abs() <= 1e-9 * scale);
    }

    /// Any strand count conserves the wire current bit-exactly through
    /// every cross-cut.
    #[test]
    fn discretize_conserves_current(
        n_w in 1usize..8,
        n_d in 1usize..8,
        current in prop_oneof![1e-3..1e3_f64, -1e3..-1e-3_f64],
    ) {
        let path = WirePath::new(
            vec![
                Point3::new(0.0, 0.0, 0.0),
                Point3::new(1e-3, 0.0, 0.0),
                Point3::new(1e-3, 0.0, 1e-3),
            ],
            CrossSection::new(100e-6, 15e-6).unwrap(),
            current,
        )
        .unwrap();
        let fils = discretize(&path, n_w, n_d).unwrap();
        let n_seg = 2;
        prop_assert_eq!(fils.len(), n_w * n_d * n_seg);
        for seg in 0..n_seg {
            let sum = (0..n_w * n_d)
                .map(|s| fils[s * n_seg + seg].current)
                .fold(0.0, |acc, c| acc + c);
            prop_assert_eq!(sum, current);
        }
    }

    /// Phonon + residual resistivity is non-decreasing in temperature.
    #[test]
    fn resistivity_monotone_in_temperature(
        rrr in 2.0..1.0e4_f64,
        t1 in 4.0..300.0_f64,
        t2 in 4.0..300.0_f64,
    ) {
        let model = ResistivityModel::with_rrr(rrr).unwrap();
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(resistivity(lo, &model).unwrap() <= resistivity(hi, &model).unwrap());
    }

    /// Higher RRR means lower low-temperature resistivity, and the
    /// self-consistent construction satisfies its own definition:
    /// RRR = ρ(293 K)/ρ_res.
    #[test]
    fn resistivity_decreases_with_rrr(
        r1 in 5.0..500.0_f64,
        f in 1.5..10.0_f64,
    ) {
        let m1 = ResistivityModel::with_rrr(r1).unwrap();
        let m2 = ResistivityModel::with_rrr(r1 * f).unwrap();
        prop_assert!(resistivity(10.0, &m2).unwrap() < resistivity(10.0, &m1).unwrap());
        for (m, rrr) in [(&m1, r1), (&m2, r1 * f)] {
            let implied = resistivity(293.0, m).unwrap() / m.residual_resistivity();
            prop_assert!((implied - rrr).abs() <= 1e-9 * rrr);
        }
    }

    /// The converged operating temperature is non-decreasing in current.
    #[test]
    fn operating_temperature_monotone_in_current(
        i1 in 0.0..10.0_f64,
        i2 in 0.0..10.0_f64,
    ) {
        let layout = routed_pair(100e-6, 15e-6, 88e-6, 5e-3, 13.0).unwrap();
        let model = ResistivityModel::with_rrr(50.0).unwrap();
        let env = ThermalEnvironment::new(40.0, 5.0).unwrap();
        let (lo, hi) = if i1 <= i2 { (i1, i2) } else { (i2, i1) };
        let a = operating_point(lo, &env, &layout, &model);
        let b = operating_point(hi, &env, &layout, &model);
        prop_assert!(a.converged && b.converged);
        prop_assert!(a.temperature <= b.temperature + 2.0 * TEMPERATURE_TOL);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Fitting synthetic R(T) data generated by the model itself recovers
    /// the RRR within 5% across the physically relevant range.
    #[test]
    fn fit_rrr_round_trip(rrr_log in 2.3..7.6_f64) {
        let rrr = rrr_log.exp(); // ~10 .. ~2000
        let layout = routed_pair(100e-6, 15e-6, 88e-6, 5e-3, 13.0).unwrap();
        let model = ResistivityModel::with_rrr(rrr).unwrap();
        let samples: Vec<RtSample> = [293.0, 40.0, 70.0]
            .iter()
            .map(|&t| RtSample {
                t,
                r: layout_resistance(&layout, t, &model, None).unwrap(),
                r_err: None,
            })
            .collect();
        let fit = fit_rrr(&samples, layout.squares(), 15e-6).unwrap();
        prop_assert!(
            (fit.rrr_hat - rrr).abs() <= 0.05 * rrr,
            "rrr {} fitted as {}", rrr, fit.rrr_hat
        );
    }
}

/// The bisected runaway current brackets the convergence boundary.
#[test]
fn runaway_current_brackets_boundary() {
    let layout = routed_pair(100e-6, 15e-6, 88e-6, 5e-3, 13.0).unwrap();
    let model = ResistivityModel::with_rrr(50.0).unwrap();
    let env = ThermalEnvironment::new(40.0, 5.0).unwrap();
    let i = runaway_current(&env, &layout, &model, 20.0).expect("runaway below 20 A");
    assert!(i > 10.0 && i < 12.0, "runaway at {i} A");
    assert!(operating_point(i, &env, &layout, &model).converged);
    assert!(!operating_point(i + 2.0 * RUNAWAY_RESOLUTION, &env, &layout, &model).converged);
}

/// A finite-cross-section pair shrunk to 10 nm reproduces the ideal
/// zero-thickness antiparallel-pair gradient to 0.1%.
#[test]
fn thin_cross_section_matches_ideal_pair() {
    let sep_centers = 188e-6;
    let width = 1e-8;
    let layout = antiparallel_pair(width, 1e-8, sep_centers - width, 4e-3, 1.0).unwrap();
    let g = gradient(
        Point3::new(0.0, 125e-6, 0.0),
        &layout,
        Discretization { n_w: 1, n_d: 1 },
        None,
    )
    .unwrap();
    let per_amp = g.column_norm(2);
    let ideal = thin_wire_reference(sep_centers, 125e-6, 1.0, 4e-3).unwrap();
    assert!(
        (per_amp - ideal).abs() <= 1e-3 * ideal,
        "pair {per_amp} vs ideal {ideal}"
    );
}

/// Field maps, quadrupole location, and sweeps are bit-deterministic run
/// to run (required for byte-identical CLI output).
#[test]
fn solvers_are_deterministic() {
    let layout = routed_pair(100e-6, 15e-6, 88e-6, 5e-3, 13.0).unwrap();
    let disc = Discretization::default();
    let grid = GridSpec {
        x: AxisRange::span(-50e-6, 50e-6, 7),
        y: AxisRange::span(100e-6, 150e-6, 5),
        z: AxisRange::span(-50e-6, 50e-6, 7),
    };
    let m1 = field_map(&layout, &grid, disc).unwrap();
    let m2 = field_map(&layout, &grid, disc).unwrap();
    assert_eq!(m1.to_csv(), m2.to_csv());

    let boxspec = SearchBox::centered(Point3::new(0.0, 125e-6, 0.0), 50e-6, 75e-6, 50e-6);
    let q1 = find_quadrupole(&layout, &boxspec, disc).unwrap();
    let q2 = find_quadrupole(&layout, &boxspec, disc).unwrap();
    assert_eq!(q1.position, q2.position);
    assert_eq!(q1.gradient_per_amp, q2.gradient_per_amp);

    let env = ThermalEnvironment::new(40.0, 5.0).unwrap();
    let model = ResistivityModel::with_rrr(50.0).unwrap();
    let ranges = SweepRanges {
        width: vec![90e-6, 100e-6],
        depth: vec![15e-6],
        separation: vec![88e-6],
        length: vec![5e-3],
        current: vec![9.0, 10.0],
        ion_height: 125e-6,
    };
    let s1 = sweep(&ranges, &Constraints::default(), &env, &model).unwrap();
    let s2 = sweep(&ranges, &Constraints::default(), &env, &model).unwrap();
    assert_eq!(s1, s2);
    assert_eq!(s1.to_csv(), s2.to_csv());
}

/// A one-point sweep reproduces `evaluate` bit for bit (shared geometry
/// arithmetic).
#[test]
fn singleton_sweep_matches_evaluate() {
    let design = DesignPoint { current: 10.0, ..DesignPoint::default() };
    let env = ThermalEnvironment::new(40.0, 5.0).unwrap();
    let model = ResistivityModel::with_rrr(50.0).unwrap();
    let constraints = Constraints::default();
    let metrics = evaluate(&design, &constraints, &env, &model).unwrap();
    let s = sweep(&SweepRanges::singleton(&design), &constraints, &env, &model).unwrap();
    assert_eq!(s.entries.len(), 1);
    assert_eq!(s.entries[0].metrics, metrics);
    assert!(s.entries[0].pareto, "a lone feasible design is its own front");
}
