//! Winding hottest-spot temperature from ambient temperature and load ratio.
//!
//! The hottest-spot temperature is the sum of ambient temperature, the
//! top-oil rise over ambient, and the winding hottest-spot rise over top
//! oil. Both rises respond to load changes as first-order exponentials
//! between an initial and an ultimate value; the boundary values are
//! algebraic functions of the load ratio.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default winding time constant: 5 minutes, in hours. Winding thermal
/// response is much faster than oil response; override per transformer.
pub const DEFAULT_WINDING_TIME_CONSTANT_H: f64 = 0.0833;

/// Rated thermal constants of one transformer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransformerCharacteristics {
    /// Rated current in amperes (informational only).
    pub rated_current: f64,
    /// Ratio R of load loss at rated load to no-load loss.
    pub loss_ratio: f64,
    /// Empirical exponent n for the top-oil rise, in [0.8, 1.0].
    pub oil_exponent: f64,
    /// Empirical exponent m for the hotspot rise, in [0.8, 1.0].
    pub winding_exponent: f64,
    /// Rated winding hottest-spot rise over top oil, °C.
    pub rated_hotspot_rise: f64,
    /// Rated top-oil rise over ambient, °C.
    pub rated_topoil_rise: f64,
    /// Top-oil time constant, hours.
    pub topoil_time_constant: f64,
    /// Winding time constant, hours.
    pub winding_time_constant: f64,
    /// Normal insulation life, hours.
    pub normal_insulation_life: f64,
}

impl Default for TransformerCharacteristics {
    /// The studied 934 A distribution transformer: R = 7.43, m = n = 0.8,
    /// rated rises 17.6 / 53.9 °C, top-oil time constant 6.8 h, and a
    /// normal insulation life of 180 000 h.
    fn default() -> Self {
        Self {
            rated_current: 934.0,
            loss_ratio: 7.43,
            oil_exponent: 0.8,
            winding_exponent: 0.8,
            rated_hotspot_rise: 17.6,
            rated_topoil_rise: 53.9,
            topoil_time_constant: 6.8,
            winding_time_constant: DEFAULT_WINDING_TIME_CONSTANT_H,
            normal_insulation_life: 180_000.0,
        }
    }
}

impl TransformerCharacteristics {
    pub fn validate(&self) -> Result<()> {
        if !(self.loss_ratio > 0.0) {
            return Err(Error::domain(format!(
                "loss_ratio must be > 0, got {}",
                self.loss_ratio
            )));
        }
        for (name, value) in [
            ("rated_hotspot_rise", self.rated_hotspot_rise),
            ("rated_topoil_rise", self.rated_topoil_rise),
            ("topoil_time_constant", self.topoil_time_constant),
            ("winding_time_constant", self.winding_time_constant),
            ("normal_insulation_life", self.normal_insulation_life),
        ] {
            if !(value > 0.0) {
                return Err(Error::domain(format!("{name} must be > 0, got {value}")));
            }
        }
        for (name, value) in [
            ("oil_exponent", self.oil_exponent),
            ("winding_exponent", self.winding_exponent),
        ] {
            if !(0.8..=1.0).contains(&value) {
                return Err(Error::domain(format!(
                    "{name} must lie in [0.8, 1.0], got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// One time step of operating conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingInterval {
    /// Ambient temperature, °C.
    pub ambient_temp: f64,
    /// Load ratio at the start of the interval (K_i), per-unit.
    pub load_ratio_initial: f64,
    /// Load ratio reached during the interval (K_U), per-unit.
    pub load_ratio_ultimate: f64,
    /// Interval length, hours.
    pub duration: f64,
}

impl OperatingInterval {
    pub fn validate(&self) -> Result<()> {
        if !(-60.0..=60.0).contains(&self.ambient_temp) {
            return Err(Error::domain(format!(
                "ambient_temp must lie in [-60, 60] °C, got {}",
                self.ambient_temp
            )));
        }
        if !(self.load_ratio_initial >= 0.0) || !(self.load_ratio_ultimate >= 0.0) {
            return Err(Error::domain(format!(
                "load ratios must be >= 0, got k_i={} k_u={}",
                self.load_ratio_initial, self.load_ratio_ultimate
            )));
        }
        if !(self.duration > 0.0) {
            return Err(Error::domain(format!(
                "duration must be > 0 h, got {}",
                self.duration
            )));
        }
        Ok(())
    }
}

/// Thermal quantities at the end of one simulated interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    /// Top-oil rise over ambient, °C.
    pub topoil_rise: f64,
    /// Winding hottest-spot rise over top oil, °C.
    pub hotspot_rise: f64,
    /// Winding hottest-spot temperature, °C.
    pub hotspot_temp: f64,
}

/// How the initial rises of each interval are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    /// Re-derive the initial rises from the interval's own K_i.
    #[default]
    Paper,
    /// Carry the previous interval's final rises forward.
    Continuity,
}

/// Top-oil rise boundary value for a given load ratio:
/// `rated_topoil_rise * ((K^2 R + 1) / (R + 1))^n`.
///
/// Serves both the initial value (with K_i) and the ultimate value
/// (with K_U); the two formulas are identical in form.
pub fn topoil_rise_boundary(chars: &TransformerCharacteristics, load_ratio: f64) -> Result<f64> {
    if !(chars.loss_ratio > 0.0) {
        return Err(Error::domain(format!(
            "loss_ratio must be > 0, got {}",
            chars.loss_ratio
        )));
    }
    if !(load_ratio >= 0.0) {
        return Err(Error::domain(format!(
            "load_ratio must be >= 0, got {load_ratio}"
        )));
    }
    let r = chars.loss_ratio;
    let ratio = (load_ratio * load_ratio * r + 1.0) / (r + 1.0);
    Ok(chars.rated_topoil_rise * ratio.powf(chars.oil_exponent))
}

/// Hotspot rise boundary value for a given load ratio:
/// `rated_hotspot_rise * K^(2m)`.
pub fn hotspot_rise_boundary(chars: &TransformerCharacteristics, load_ratio: f64) -> Result<f64> {
    if !(load_ratio >= 0.0) {
        return Err(Error::domain(format!(
            "load_ratio must be >= 0, got {load_ratio}"
        )));
    }
    Ok(chars.rated_hotspot_rise * load_ratio.powf(2.0 * chars.winding_exponent))
}

/// First-order exponential response from `initial` toward `ultimate`:
/// `(ultimate - initial)(1 - exp(-elapsed/time_constant)) + initial`.
///
/// Serves both the top-oil rise (oil time constant) and the hotspot rise
/// (winding time constant).
pub fn transient_rise(initial: f64, ultimate: f64, time_constant: f64, elapsed: f64) -> Result<f64> {
    if !(time_constant > 0.0) {
        return Err(Error::domain(format!(
            "time_constant must be > 0 h, got {time_constant}"
        )));
    }
    if !(elapsed >= 0.0) {
        return Err(Error::domain(format!(
            "elapsed must be >= 0 h, got {elapsed}"
        )));
    }
    Ok((ultimate - initial) * (1.0 - (-elapsed / time_constant).exp()) + initial)
}

/// Hottest-spot temperature: ambient plus the two rises.
pub fn hotspot_temperature(ambient: f64, topoil_rise: f64, hotspot_rise: f64) -> f64 {
    ambient + topoil_rise + hotspot_rise
}

/// Simulate one operating interval and return the end-of-interval state.
///
/// In [`InitMode::Paper`] the initial rises come from the boundary
/// equations with K_i and `prev` is ignored. In [`InitMode::Continuity`]
/// the initial rises are taken from `prev`, which must be supplied for
/// every interval after the first (drive the first interval in paper
/// mode or hand in a bootstrap state).
pub fn simulate_interval(
    chars: &TransformerCharacteristics,
    interval: &OperatingInterval,
    mode: InitMode,
    prev: Option<&ThermalState>,
) -> Result<ThermalState> {
    interval.validate()?;

    let (topoil_initial, hotspot_initial) = match mode {
        InitMode::Paper => (
            topoil_rise_boundary(chars, interval.load_ratio_initial)?,
            hotspot_rise_boundary(chars, interval.load_ratio_initial)?,
        ),
        InitMode::Continuity => match prev {
            Some(state) => (state.topoil_rise, state.hotspot_rise),
            None => {
                return Err(Error::usage(
                    "continuity mode requires the previous interval's thermal state",
                ))
            }
        },
    };
    let topoil_ultimate = topoil_rise_boundary(chars, interval.load_ratio_ultimate)?;
    let hotspot_ultimate = hotspot_rise_boundary(chars, interval.load_ratio_ultimate)?;

    let topoil_rise = transient_rise(
        topoil_initial,
        topoil_ultimate,
        chars.topoil_time_constant,
        interval.duration,
    )?;
    let hotspot_rise = transient_rise(
        hotspot_initial,
        hotspot_ultimate,
        chars.winding_time_constant,
        interval.duration,
    )?;

    Ok(ThermalState {
        topoil_rise,
        hotspot_rise,
        hotspot_temp: hotspot_temperature(interval.ambient_temp, topoil_rise, hotspot_rise),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn chars() -> TransformerCharacteristics {
        TransformerCharacteristics::default()
    }

    fn interval(ambient: f64, k_i: f64, k_u: f64, dt: f64) -> OperatingInterval {
        OperatingInterval {
            ambient_temp: ambient,
            load_ratio_initial: k_i,
            load_ratio_ultimate: k_u,
            duration: dt,
        }
    }

    #[test]
    fn topoil_boundary_at_rated_load_is_exact() {
        // ratio term is exactly 1 at K = 1
        assert_eq!(topoil_rise_boundary(&chars(), 1.0).unwrap(), 53.9);
    }

    #[test]
    fn topoil_boundary_at_half_load() {
        // 53.9 * ((0.25*7.43 + 1)/8.43)^0.8, evaluated at high precision
        assert_relative_eq!(
            topoil_rise_boundary(&chars(), 0.5).unwrap(),
            22.683_794_109_645_17,
            max_relative = 1e-12
        );
    }

    #[test]
    fn topoil_boundary_at_zero_load() {
        // 53.9 * (1/8.43)^0.8
        assert_relative_eq!(
            topoil_rise_boundary(&chars(), 0.0).unwrap(),
            9.793_246_939_144_156,
            max_relative = 1e-12
        );
    }

    #[test]
    fn topoil_boundary_rejects_nonpositive_loss_ratio() {
        let mut c = chars();
        c.loss_ratio = 0.0;
        assert!(matches!(
            topoil_rise_boundary(&c, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn hotspot_boundary_examples() {
        assert_eq!(hotspot_rise_boundary(&chars(), 1.0).unwrap(), 17.6);
        // 17.6 * 0.5^1.6
        assert_relative_eq!(
            hotspot_rise_boundary(&chars(), 0.5).unwrap(),
            5.805_834_807_400_735,
            max_relative = 1e-12
        );
        assert_eq!(hotspot_rise_boundary(&chars(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn transient_rise_examples() {
        assert_eq!(transient_rise(20.0, 60.0, 6.8, 0.0).unwrap(), 20.0);
        // 20 + 40 (1 - 1/e)
        assert_relative_eq!(
            transient_rise(20.0, 60.0, 6.8, 6.8).unwrap(),
            45.284_822_353_142_31,
            max_relative = 1e-12
        );
        // asymptote equals the ultimate value
        assert_relative_eq!(
            transient_rise(20.0, 60.0, 6.8, 1e6).unwrap(),
            60.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn transient_rise_rejects_bad_arguments() {
        assert!(matches!(
            transient_rise(20.0, 60.0, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            transient_rise(20.0, 60.0, -6.8, 1.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            transient_rise(20.0, 60.0, 6.8, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn hotspot_temperature_is_the_plain_sum() {
        assert_eq!(hotspot_temperature(30.0, 53.9, 17.6), 101.5);
        assert_eq!(hotspot_temperature(0.0, 0.0, 0.0), 0.0);
        assert_relative_eq!(
            hotspot_temperature(25.0, 45.285, 10.2),
            80.485,
            max_relative = 1e-12
        );
    }

    #[test]
    fn simulate_rated_steady_state() {
        let state =
            simulate_interval(&chars(), &interval(30.0, 1.0, 1.0, 1.0), InitMode::Paper, None)
                .unwrap();
        assert_relative_eq!(state.hotspot_temp, 101.5, max_relative = 1e-12);
        assert_relative_eq!(state.topoil_rise, 53.9, max_relative = 1e-12);
        assert_relative_eq!(state.hotspot_rise, 17.6, max_relative = 1e-12);
    }

    #[test]
    fn simulate_step_load_composes_the_boundaries() {
        // K 0 -> 1 over one oil time constant: the top-oil rise covers
        // (1 - 1/e) of the gap between the zero-load and rated values.
        let state = simulate_interval(
            &chars(),
            &interval(30.0, 0.0, 1.0, 6.8),
            InitMode::Paper,
            None,
        )
        .unwrap();
        let lo = topoil_rise_boundary(&chars(), 0.0).unwrap();
        let hi = topoil_rise_boundary(&chars(), 1.0).unwrap();
        let expected = lo + (hi - lo) * (1.0 - (-1.0_f64).exp());
        assert_relative_eq!(state.topoil_rise, expected, max_relative = 1e-12);
        // high-precision evaluation of the same composition
        assert_relative_eq!(state.topoil_rise, 37.674_032_332_085_55, max_relative = 1e-12);
    }

    #[test]
    fn continuity_with_matching_prev_equals_paper_mode() {
        let iv = interval(25.0, 0.4, 0.9, 1.0);
        let paper = simulate_interval(&chars(), &iv, InitMode::Paper, None).unwrap();
        let prev = ThermalState {
            topoil_rise: topoil_rise_boundary(&chars(), 0.4).unwrap(),
            hotspot_rise: hotspot_rise_boundary(&chars(), 0.4).unwrap(),
            hotspot_temp: 0.0, // unused by the simulation
        };
        let cont = simulate_interval(&chars(), &iv, InitMode::Continuity, Some(&prev)).unwrap();
        assert_eq!(paper.topoil_rise, cont.topoil_rise);
        assert_eq!(paper.hotspot_rise, cont.hotspot_rise);
        assert_eq!(paper.hotspot_temp, cont.hotspot_temp);
    }

    #[test]
    fn continuity_without_prev_is_a_usage_error() {
        let err = simulate_interval(
            &chars(),
            &interval(25.0, 0.4, 0.9, 1.0),
            InitMode::Continuity,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn characteristics_validation_catches_bad_exponents() {
        let mut c = chars();
        c.oil_exponent = 0.5;
        assert!(c.validate().is_err());
        c.oil_exponent = 1.0;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn interval_validation_bounds() {
        assert!(interval(-80.0, 1.0, 1.0, 1.0).validate().is_err());
        assert!(interval(20.0, -0.1, 1.0, 1.0).validate().is_err());
        assert!(interval(20.0, 1.0, 1.0, 0.0).validate().is_err());
        assert!(interval(20.0, 1.0, 1.0, 1.0).validate().is_ok());
    }

    proptest! {
        #[test]
        fn transient_constant_load_is_a_fixed_point(
            x in -50.0_f64..150.0,
            tau in 0.01_f64..20.0,
            t in 0.0_f64..100.0,
        ) {
            prop_assert_eq!(transient_rise(x, x, tau, t).unwrap(), x);
        }

        // Strict monotonicity holds until the exponential saturates in
        // f64, so elapsed times are kept within a few time constants.
        #[test]
        fn transient_is_monotone_in_elapsed_time(
            initial in -50.0_f64..150.0,
            ultimate in -50.0_f64..150.0,
            tau in 0.01_f64..20.0,
            r1 in 0.0_f64..10.0,
            dr in 0.01_f64..10.0,
        ) {
            prop_assume!((ultimate - initial).abs() > 1e-3);
            let a = transient_rise(initial, ultimate, tau, r1 * tau).unwrap();
            let b = transient_rise(initial, ultimate, tau, (r1 + dr) * tau).unwrap();
            if ultimate > initial {
                prop_assert!(b > a);
            } else {
                prop_assert!(b < a);
            }
        }

        #[test]
        fn boundaries_are_strictly_increasing_in_load(
            k in 0.0_f64..2.0,
            dk in 0.001_f64..1.0,
        ) {
            let c = chars();
            prop_assert!(
                topoil_rise_boundary(&c, k + dk).unwrap() > topoil_rise_boundary(&c, k).unwrap()
            );
            prop_assert!(
                hotspot_rise_boundary(&c, k + dk).unwrap() > hotspot_rise_boundary(&c, k).unwrap()
            );
        }

        #[test]
        fn hotspot_temperature_commutes_with_ambient_shift(
            ambient in -60.0_f64..60.0,
            to in 0.0_f64..100.0,
            hs in 0.0_f64..50.0,
            shift in -20.0_f64..20.0,
        ) {
            let base = hotspot_temperature(ambient, to, hs);
            let shifted = hotspot_temperature(ambient + shift, to, hs);
            prop_assert!((shifted - (base + shift)).abs() < 1e-9);
        }

        #[test]
        fn constant_load_state_is_independent_of_duration(
            k in 0.0_f64..1.5,
            ambient in -40.0_f64..40.0,
            dt1 in 0.1_f64..50.0,
            dt2 in 0.1_f64..50.0,
        ) {
            let a = simulate_interval(
                &chars(), &interval(ambient, k, k, dt1), InitMode::Paper, None,
            ).unwrap();
            let b = simulate_interval(
                &chars(), &interval(ambient, k, k, dt2), InitMode::Paper, None,
            ).unwrap();
            prop_assert_eq!(a.hotspot_temp, b.hotspot_temp);
        }

        #[test]
        fn simulated_state_is_additive(
            k_i in 0.0_f64..1.5,
            k_u in 0.0_f64..1.5,
            ambient in -40.0_f64..40.0,
        ) {
            let state = simulate_interval(
                &chars(), &interval(ambient, k_i, k_u, 1.0), InitMode::Paper, None,
            ).unwrap();
            prop_assert!(state.topoil_rise >= 0.0);
            prop_assert!(state.hotspot_rise >= 0.0);
            let sum = ambient + state.topoil_rise + state.hotspot_rise;
            prop_assert!((state.hotspot_temp - sum).abs() < 1e-12);
        }
    }
}
