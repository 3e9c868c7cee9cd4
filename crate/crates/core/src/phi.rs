//! The even function φ built from S, its elementary approximants φ0 and φ1,
//! and the classical theta-type g for comparison.

use std::f64::consts::PI;

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{domain, Result};
use crate::sfunc::{s_eval, s_series, MIN_TOL};
use crate::special::Constants;
use crate::sum::Neumaier;

/// |t| beyond which φ is reported as 0 (φ ~ 4t e^{−t} underflows soon after).
pub const PHI_CUTOFF: f64 = 700.0;
const SINH_SERIES_RADIUS: f64 = 1e-2;
const SHAPE_SERIES_RADIUS: f64 = 1e-3;

/// Shape constants ω of φ0 and ω₁ of φ1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiParams {
    pub omega: f64,
    pub omega1: f64,
}

impl PhiParams {
    pub fn standard() -> Self {
        Self::from_constants(&Constants::STANDARD)
    }

    pub fn from_constants(c: &Constants) -> Self {
        let l2 = c.log_two_pi - c.euler_gamma;
        Self {
            omega: 1.0 / (1.0 + l2),
            omega1: (1.0 + l2 / (4.0 * PI)) / (1.0 + l2),
        }
    }
}

impl Default for PhiParams {
    fn default() -> Self {
        Self::standard()
    }
}

/// φ(t) with its error estimate; `underflow` marks |t| past [`PHI_CUTOFF`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiEval {
    pub value: f64,
    pub abs_err: f64,
    pub underflow: bool,
}

/// 3t/(2 sinh t), even, with its power series near 0.
fn three_halves_t_over_sinh(t: f64) -> f64 {
    let t = t.abs();
    if t < SINH_SERIES_RADIUS {
        let t2 = t * t;
        1.5 * (1.0 - t2 / 6.0 + 7.0 * t2 * t2 / 360.0 - 31.0 * t2 * t2 * t2 / 15120.0)
    } else {
        // 3t e^{−t} / (1 − e^{−2t}) avoids overflow of sinh
        3.0 * t * (-t).exp() / (-(-2.0 * t).exp_m1())
    }
}

fn phi_terms(t: f64, tol: f64) -> Result<PhiEval> {
    let c = Constants::STANDARD;
    let s = s_eval((-2.0 * t).exp(), tol.max(MIN_TOL))?;
    let et = t.exp();
    let mut acc = Neumaier::new();
    let first = (t + c.half_log2pi_minus_gamma) * (-t).exp();
    let second = et * s.value;
    let third = three_halves_t_over_sinh(t);
    acc.add(first);
    acc.add(second);
    acc.add(third);
    let value = acc.total();
    let rounding = 4.0 * f64::EPSILON * (first.abs() + second.abs() + third.abs());
    Ok(PhiEval {
        value,
        abs_err: et * s.abs_err + rounding,
        underflow: false,
    })
}

/// φ(t), evaluated at |t| so that S is only needed on (0, 1].
pub fn phi_eval(t: f64, tol: f64) -> Result<PhiEval> {
    if !t.is_finite() {
        return Err(domain("phi", format!("t = {t} must be finite")));
    }
    let t = t.abs();
    if t > PHI_CUTOFF {
        return Ok(PhiEval {
            value: 0.0,
            abs_err: 4.0 * t * (-t).exp(),
            underflow: true,
        });
    }
    phi_terms(t, tol)
}

pub fn phi(t: f64, tol: f64) -> Result<f64> {
    phi_eval(t, tol).map(|p| p.value)
}

/// φ(t) from the defining formula at the given sign of t.
///
/// For t < 0 the S value at a = e^{2|t|} > 1 comes from S(1/a) through the
/// functional equation. The terms of size |t|e^{|t|} then cancel down to
/// ~e^{−|t|}, so that branch is assembled in double-double arithmetic.
pub fn phi_unfolded(t: f64, tol: f64) -> Result<f64> {
    if !t.is_finite() || t.abs() > 350.0 {
        return Err(domain(
            "phi_unfolded",
            format!("t = {t} outside [-350, 350]"),
        ));
    }
    if t >= 0.0 {
        return phi_terms(t, tol).map(|p| p.value);
    }
    let u = -t;
    let l = Dd::from_f64(Constants::STANDARD.half_log2pi_minus_gamma);
    let e = Dd::exp(u);
    let a = e * e;
    let s_inv = s_series(1.0 / a.to_f64(), tol.max(MIN_TOL))?.value;
    // S(a) = a S(1/a) + L(1 − a) + ((a + 1)/2) ln a, with ln a = 2u exactly
    let one = Dd::from_f64(1.0);
    let s_a = a.scale(s_inv) + l * (one - a) + (a + one).scale(u);
    let first = (l - Dd::from_f64(u)) * e;
    let second = e.recip() * s_a;
    let third = Dd::from_f64(three_halves_t_over_sinh(u));
    Ok((first + second + third).to_f64())
}

/// t/(sinh(ωt) cosh((1−ω)t)) = 4|t| e^{−|t|}/((1 − e^{−2ω|t|})(1 + e^{−2(1−ω)|t|})).
fn shape(t: f64, omega: f64) -> f64 {
    let t = t.abs();
    if t < SHAPE_SERIES_RADIUS {
        let u2 = (omega * t).powi(2);
        let v2 = ((1.0 - omega) * t).powi(2);
        let over_sinh = 1.0 - u2 / 6.0 + 7.0 * u2 * u2 / 360.0;
        let sech = 1.0 - v2 / 2.0 + 5.0 * v2 * v2 / 24.0;
        return over_sinh * sech / omega;
    }
    4.0 * t * (-t).exp()
        / ((-(-2.0 * omega * t).exp_m1()) * (1.0 + (-2.0 * (1.0 - omega) * t).exp()))
}

/// φ0(t) = t/(sinh(ωt) cosh((1−ω)t)).
pub fn phi0(t: f64) -> f64 {
    phi0_with(&PhiParams::standard(), t)
}

pub fn phi0_with(p: &PhiParams, t: f64) -> f64 {
    shape(t, p.omega)
}

fn arctan_ratio(t: f64, slope: f64) -> f64 {
    let u = slope * t;
    if u.abs() < SHAPE_SERIES_RADIUS {
        let u2 = u * u;
        slope * (1.0 - u2 / 3.0 + u2 * u2 / 5.0)
    } else {
        u.atan() / t
    }
}

/// φ1(t) = (t + ((ln 2π − γ)/(4π)) arctan(8t/9)) / (sinh(ω₁t) cosh((1−ω₁)t)).
pub fn phi1(t: f64) -> f64 {
    phi1_with(&Constants::STANDARD, t)
}

pub fn phi1_with(c: &Constants, t: f64) -> f64 {
    let p = PhiParams::from_constants(c);
    let lead = (c.log_two_pi - c.euler_gamma) / (4.0 * PI);
    shape(t, p.omega1) * (1.0 + lead * arctan_ratio(t, 8.0 / 9.0))
}

/// φ1(0), the limit (1 + (8/9)(ln 2π − γ)/(4π))/ω₁.
pub fn phi1_at_zero() -> f64 {
    let c = Constants::STANDARD;
    let p = PhiParams::standard();
    (1.0 + (c.log_two_pi - c.euler_gamma) * (8.0 / 9.0) / (4.0 * PI)) / p.omega1
}

const G_DIRECT_LIMIT: f64 = 6.0;

/// g(t) = Σ (2πn²e^{2t} − 3) n² e^{5t/2 − πn²e^{2t}}.
///
/// The raw sum is used for t ≥ −6; further left it needs ~e^{|t|} terms and
/// the even image g(|t|) is returned instead.
pub fn g_classic(t: f64) -> f64 {
    if !t.is_finite() {
        return f64::NAN;
    }
    let t = if t < -G_DIRECT_LIMIT { -t } else { t };
    let q = PI * (2.0 * t).exp();
    if q > 745.0 {
        return 0.0;
    }
    let mut acc = Neumaier::new();
    let mut peak: f64 = 0.0;
    let peak_n = (2.0 / q).sqrt().ceil() as u64 + 1;
    let mut n = 1u64;
    loop {
        let nf = n as f64;
        let n2 = nf * nf;
        let term = (2.0 * q * n2 - 3.0) * n2 * (2.5 * t - q * n2).exp();
        acc.add(term);
        peak = peak.max(term.abs());
        if n > peak_n && term.abs() <= 1e-18 * peak {
            break;
        }
        n += 1;
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{EULER_GAMMA, LOG_TWO_PI};
    use proptest::prelude::*;

    const TOL: f64 = 1e-13;

    #[test]
    fn params_match_constants() {
        let p = PhiParams::standard();
        assert!((p.omega - 0.442_348_420_392_820_2).abs() <= 1e-15);
        assert!(0.0 < p.omega && p.omega < p.omega1 && p.omega1 < 1.0);
    }

    #[test]
    fn phi_at_zero() {
        let v = phi(0.0, TOL).unwrap();
        assert!((v - (1.0 + LOG_TWO_PI - EULER_GAMMA)).abs() <= 1e-12);
    }

    #[test]
    fn phi_is_even_through_functional_equation() {
        let d = phi_unfolded(2.0, TOL).unwrap() - phi_unfolded(-2.0, TOL).unwrap();
        assert!(d.abs() <= 1e-12);
        let mut worst: f64 = 0.0;
        for i in 1..=100 {
            let t = i as f64 * 0.1;
            let d = phi_unfolded(t, TOL).unwrap() - phi_unfolded(-t, TOL).unwrap();
            worst = worst.max(d.abs());
        }
        assert!(worst <= 1e-11, "{worst}");
    }

    #[test]
    fn phi_large_t_behaviour() {
        let t = 15.0f64;
        let r = phi(t, TOL).unwrap() / (4.0 * t * (-t).exp());
        assert!((r - 1.0).abs() <= 0.02);
        let far = phi_eval(800.0, TOL).unwrap();
        assert!(far.underflow && far.value == 0.0);
        assert!(phi(f64::NAN, TOL).is_err());
    }

    #[test]
    fn sinh_term_branches_meet() {
        for t in [0.0099, 0.01, 0.0101] {
            let direct = 1.5 * t / f64::sinh(t);
            assert!((three_halves_t_over_sinh(t) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn phi0_examples() {
        let p = PhiParams::standard();
        assert!((phi0(0.0) - 1.0 / p.omega).abs() < 1e-15);
        assert!((phi0(0.0) - (1.0 + LOG_TWO_PI - EULER_GAMMA)).abs() < 1e-14);
        let rel = (phi(1.0, TOL).unwrap() - phi0(1.0)).abs() / phi(1.0, TOL).unwrap();
        assert!(rel <= 0.05);
        assert_eq!(phi0(5.0), phi0(-5.0));
        let t = 0.3f64;
        let direct = t / ((p.omega * t).sinh() * ((1.0 - p.omega) * t).cosh());
        assert!((phi0(t) - direct).abs() < 1e-14);
    }

    #[test]
    fn phi0_series_meets_direct_form() {
        let p = PhiParams::standard();
        for t in [9e-4f64, 1e-3, 1.1e-3] {
            let direct = t / ((p.omega * t).sinh() * ((1.0 - p.omega) * t).cosh());
            assert!((phi0(t) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn phi1_examples() {
        assert_eq!(phi1(3.0), phi1(-3.0));
        assert!((phi1(0.0) - phi1_at_zero()).abs() <= 1e-12);
        assert!((phi1(1e-6) - phi1_at_zero()).abs() <= 1e-12);
        assert!(phi1(0.0) > 0.0);
    }

    #[test]
    fn phi1_closer_than_phi0() {
        let mut d0: f64 = 0.0;
        let mut d1: f64 = 0.0;
        for i in 0..=100 {
            let t = 0.25 + i as f64 * 0.0575;
            let f = phi(t, TOL).unwrap();
            d0 = d0.max((phi0(t) - f).abs() / f);
            d1 = d1.max((phi1(t) - f).abs() / f);
        }
        assert!(d1 < d0, "{d1} vs {d0}");
    }

    #[test]
    fn g_classic_properties() {
        assert!((g_classic(0.4) - g_classic(-0.4)).abs() <= 1e-12);
        assert!(g_classic(0.3) > 0.0);
        let direct: f64 = (1..=10)
            .map(|n| {
                let n2 = (n * n) as f64;
                (2.0 * PI * n2 - 3.0) * n2 * (-PI * n2).exp()
            })
            .sum();
        assert!((g_classic(0.0) - direct).abs() < 1e-15);
        let lead = (2.0 * PI - 3.0) * (-PI).exp();
        assert!((g_classic(0.0) / lead - 1.0).abs() < 5e-3);
        for i in 0..=40 {
            let t = i as f64 * 0.05;
            assert!((g_classic(t) - g_classic(-t)).abs() <= 1e-11, "t = {t}");
        }
    }

    #[test]
    fn phi_positive_on_grid() {
        for i in 0..=60 {
            let t = if i == 0 {
                0.0
            } else {
                30f64.powf(i as f64 / 60.0) - 1.0 + 1e-3
            };
            assert!(phi(t, TOL).unwrap() > 0.0, "t = {t}");
        }
    }

    proptest! {
        #[test]
        fn unfolded_phi_is_even(t in 0.1f64..10.0) {
            let d = phi_unfolded(t, TOL).unwrap() - phi_unfolded(-t, TOL).unwrap();
            prop_assert!(d.abs() <= 1e-11);
        }

        #[test]
        fn phi_is_positive(log_t in -8f64..(31f64).ln()) {
            prop_assert!(phi(log_t.exp() - 1e-3, TOL).unwrap() > 0.0);
        }

        #[test]
        fn phi_tail_follows_asymptote(t in 12f64..20.0) {
            let r = phi(t, TOL).unwrap() * t.exp() / (4.0 * t);
            prop_assert!((0.95..=1.05).contains(&r));
        }

        #[test]
        fn classic_kernel_is_even(t in 0f64..2.0) {
            prop_assert!((g_classic(t) - g_classic(-t)).abs() <= 1e-11);
        }
    }
}
