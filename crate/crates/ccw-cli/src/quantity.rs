//! Strict unit-suffixed quantity parsing for command-line flags.
//!
//! Every dimensioned flag value must carry an explicit unit suffix
//! (`100um`, `13A`, `5K_per_W`); bare numbers are rejected so a missing
//! unit can never silently change a length by six orders of magnitude.
//! Dimensionless flags (RRR, square counts, grid sizes) use plain
//! numeric parsers instead.
//!
//! All parsers return SI base values (m, A, K, K/W, T, T/m, W) with one
//! deliberate exception: current density stays in A/cm², the unit it is
//! universally quoted in for thin-film electromigration limits.

use ccw::magnetostatics::AxisRange;

/// A physical dimension with its accepted unit suffixes and the factor
/// converting each to the SI value this CLI hands to the library.
pub struct UnitKind {
    /// Human name used in error messages.
    pub name: &'static str,
    /// Accepted `(suffix, scale)` pairs.
    pub suffixes: &'static [(&'static str, f64)],
}

pub const LENGTH: UnitKind = UnitKind {
    name: "length",
    suffixes: &[("nm", 1.0e-9), ("um", 1.0e-6), ("mm", 1.0e-3), ("m", 1.0)],
};
pub const CURRENT: UnitKind =
    UnitKind { name: "current", suffixes: &[("mA", 1.0e-3), ("A", 1.0)] };
pub const TEMPERATURE: UnitKind =
    UnitKind { name: "temperature", suffixes: &[("K", 1.0)] };
pub const THERMAL_RESISTANCE: UnitKind =
    UnitKind { name: "thermal resistance", suffixes: &[("K_per_W", 1.0)] };
pub const FIELD: UnitKind = UnitKind {
    name: "magnetic field",
    suffixes: &[("uT", 1.0e-6), ("mT", 1.0e-3), ("T", 1.0)],
};
pub const GRADIENT: UnitKind =
    UnitKind { name: "field gradient", suffixes: &[("T_per_m", 1.0)] };
pub const POWER: UnitKind =
    UnitKind { name: "power", suffixes: &[("mW", 1.0e-3), ("W", 1.0)] };
pub const CURRENT_DENSITY: UnitKind =
    UnitKind { name: "current density", suffixes: &[("A_per_cm2", 1.0)] };

impl UnitKind {
    fn suffix_list(&self) -> String {
        self.suffixes.iter().map(|(s, _)| *s).collect::<Vec<_>>().join(", ")
    }

    /// Parse `"<number><suffix>"`; a bare number is rejected with a
    /// message listing the accepted suffixes.
    pub fn parse(&self, raw: &str) -> Result<f64, String> {
        let raw = raw.trim();
        // The longest matching suffix wins, so "5mA" reads milliamps
        // rather than a malformed amp value, "5mm" millimetres.
        let hit = self
            .suffixes
            .iter()
            .filter(|(s, _)| raw.ends_with(s))
            .max_by_key(|(s, _)| s.len());
        let Some(&(suffix, scale)) = hit else {
            return if raw.parse::<f64>().is_ok() {
                Err(format!(
                    "'{raw}' has no unit; {} values need a suffix ({})",
                    self.name,
                    self.suffix_list()
                ))
            } else {
                Err(format!(
                    "'{raw}' is not a {}; expected a number with unit suffix ({})",
                    self.name,
                    self.suffix_list()
                ))
            };
        };
        let number = &raw[..raw.len() - suffix.len()];
        match number.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v * scale),
            _ => Err(format!(
                "'{raw}': '{number}' is not a finite number (expected e.g. 100{suffix})"
            )),
        }
    }
}

pub fn length(s: &str) -> Result<f64, String> {
    LENGTH.parse(s)
}
pub fn current(s: &str) -> Result<f64, String> {
    CURRENT.parse(s)
}
pub fn temperature(s: &str) -> Result<f64, String> {
    TEMPERATURE.parse(s)
}
pub fn thermal_resistance(s: &str) -> Result<f64, String> {
    THERMAL_RESISTANCE.parse(s)
}
pub fn field(s: &str) -> Result<f64, String> {
    FIELD.parse(s)
}
pub fn gradient_strength(s: &str) -> Result<f64, String> {
    GRADIENT.parse(s)
}
pub fn power(s: &str) -> Result<f64, String> {
    POWER.parse(s)
}
pub fn current_density(s: &str) -> Result<f64, String> {
    CURRENT_DENSITY.parse(s)
}

/// `"x,y,z"` of three unit-suffixed lengths → metres.
pub fn length_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!(
            "'{s}' must be three comma-separated lengths (e.g. 0um,125um,0um)"
        ));
    }
    Ok([LENGTH.parse(parts[0])?, LENGTH.parse(parts[1])?, LENGTH.parse(parts[2])?])
}

/// Values of one unit kind: a comma list (`8A,10A,12A`) or an inclusive
/// evenly spaced range (`8A:12A:5`). A newtype so clap treats the whole
/// list as a single flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantityList(pub Vec<f64>);

fn parse_list(kind: &UnitKind, s: &str) -> Result<QuantityList, String> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!(
                "'{s}' range must be min:max:count (e.g. 8{u}:12{u}:5)",
                u = kind.suffixes.last().expect("kinds define suffixes").0
            ));
        }
        let lo = kind.parse(parts[0])?;
        let hi = kind.parse(parts[1])?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| format!("'{}' is not a sample count", parts[2]))?;
        if n == 0 {
            return Err("range count must be >= 1".into());
        }
        if !(hi >= lo) {
            return Err(format!("range max must be >= min in '{s}'"));
        }
        if n == 1 {
            return Ok(QuantityList(vec![lo]));
        }
        let step = (hi - lo) / (n - 1) as f64;
        Ok(QuantityList((0..n).map(|i| lo + step * i as f64).collect()))
    } else {
        s.split(',')
            .map(|p| kind.parse(p))
            .collect::<Result<Vec<_>, _>>()
            .map(QuantityList)
    }
}

pub fn length_list(s: &str) -> Result<QuantityList, String> {
    parse_list(&LENGTH, s)
}
pub fn current_list(s: &str) -> Result<QuantityList, String> {
    parse_list(&CURRENT, s)
}

/// A grid axis: one pinned coordinate (`125um`) or an inclusive span
/// (`-200um:200um:101`).
pub fn length_axis(s: &str) -> Result<AxisRange, String> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!(
                "'{s}' axis must be min:max:count (e.g. -200um:200um:101)"
            ));
        }
        let lo = LENGTH.parse(parts[0])?;
        let hi = LENGTH.parse(parts[1])?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| format!("'{}' is not a sample count", parts[2]))?;
        Ok(AxisRange::span(lo, hi, n))
    } else {
        Ok(AxisRange::fixed(LENGTH.parse(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_parse_to_metres() {
        // The contract is <number> × <scale>, so expectations are spelled
        // as the same product (a decimal literal like 100.0e-6 can differ
        // from 100.0 * 1.0e-6 in the last bit).
        assert_eq!(length("100um").unwrap(), 100.0 * 1.0e-6);
        assert_eq!(length("5mm").unwrap(), 5.0 * 1.0e-3);
        assert_eq!(length("3nm").unwrap(), 3.0 * 1.0e-9);
        assert_eq!(length("1.5m").unwrap(), 1.5);
        assert_eq!(length("-200um").unwrap(), -200.0 * 1.0e-6);
        assert_eq!(length("1e-3m").unwrap(), 1.0e-3);
    }

    #[test]
    fn bare_numbers_are_rejected() {
        for raw in ["100", "13", "0", "-5", "1e6"] {
            let err = length(raw).unwrap_err();
            assert!(err.contains("no unit"), "{err}");
        }
        assert!(current("10").is_err());
        assert!(temperature("40").is_err());
        assert!(thermal_resistance("5").is_err());
    }

    #[test]
    fn longest_suffix_wins() {
        assert_eq!(current("5mA").unwrap(), 5.0 * 1.0e-3);
        assert_eq!(current("5A").unwrap(), 5.0);
        assert_eq!(field("2mT").unwrap(), 2.0 * 1.0e-3);
        assert_eq!(field("2uT").unwrap(), 2.0 * 1.0e-6);
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(length("um").is_err());
        assert!(length("1.2.3mm").is_err());
        assert!(length("infm").is_err());
        assert!(length("nanA").is_err());
        assert!(current("5K").is_err());
        assert!(temperature("5K_per_W").is_err());
    }

    #[test]
    fn triples_parse() {
        assert_eq!(
            length_triple("0um,125um,0um").unwrap(),
            [0.0, 125.0 * 1.0e-6, 0.0]
        );
        assert!(length_triple("1um,2um").is_err());
        assert!(length_triple("1,2,3").is_err());
    }

    #[test]
    fn lists_and_ranges_parse() {
        assert_eq!(current_list("8A,10A,12A").unwrap().0, vec![8.0, 10.0, 12.0]);
        let r = current_list("8A:12A:5").unwrap().0;
        assert_eq!(r, vec![8.0, 9.0, 10.0, 11.0, 12.0]);
        assert_eq!(current_list("8A:12A:1").unwrap().0, vec![8.0]);
        assert!(current_list("12A:8A:5").is_err());
        assert!(current_list("8A:12A:0").is_err());
        assert!(current_list("8,10").is_err());
    }

    #[test]
    fn axes_parse() {
        let a = length_axis("-200um:200um:101").unwrap();
        assert_eq!((a.min, a.max, a.count), (-200.0 * 1.0e-6, 200.0 * 1.0e-6, 101));
        let p = length_axis("125um").unwrap();
        assert_eq!((p.min, p.max, p.count), (125.0 * 1.0e-6, 125.0 * 1.0e-6, 1));
    }
}
