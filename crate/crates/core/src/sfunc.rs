//! S(a) = Σₙ [ln(n/a) − a/(2n) − ψ(n/a)] by five independent routes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{domain, non_convergence, Error, Result};
use crate::quad::exp_sinh;
use crate::special::{
    cos_tail_integral, cot_sum, digamma_error_term, divisor_count, zeta_tail, Constants,
    BERNOULLI_2K, EULER_GAMMA, HALF_LOG2PI_MINUS_GAMMA,
};
use crate::sum::Neumaier;

/// Smallest tolerance any S route accepts.
pub const MIN_TOL: f64 = 1e-13;
/// Largest truncation index the direct series may use.
pub const SERIES_TERM_CAP: u64 = 10_000_000;
/// Default upper limit of a for the divisor route.
pub const DIVISOR_DEFAULT_MAX_A: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Route {
    Series,
    IntegralA,
    IntegralB,
    Rational,
    Divisor,
    FunctionalMap,
}

impl Route {
    pub const ALL: [Route; 6] = [
        Route::Series,
        Route::IntegralA,
        Route::IntegralB,
        Route::Rational,
        Route::Divisor,
        Route::FunctionalMap,
    ];
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Route::Series => "Series",
            Route::IntegralA => "IntegralA",
            Route::IntegralB => "IntegralB",
            Route::Rational => "Rational",
            Route::Divisor => "Divisor",
            Route::FunctionalMap => "FunctionalMap",
        };
        f.write_str(name)
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase().replace(['-', '_'], "");
        Route::ALL
            .into_iter()
            .find(|r| r.to_string().to_ascii_lowercase() == lower)
            .ok_or_else(|| domain("route", format!("unknown route '{s}'")))
    }
}

/// A value with an absolute-error estimate, the route that produced it and
/// the work spent (terms or integrand evaluations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err: f64,
    pub route: Route,
    pub work: u64,
}

/// A positive rational n/m in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Rational {
    n: u64,
    m: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(domain(
                "Rational",
                "numerator and denominator must be positive",
            ));
        }
        let g = gcd(n, m);
        Ok(Self { n: n / g, m: m / g })
    }

    pub fn numer(&self) -> u64 {
        self.n
    }

    pub fn denom(&self) -> u64 {
        self.m
    }

    pub fn to_f64(&self) -> f64 {
        self.n as f64 / self.m as f64
    }

    pub fn recip(&self) -> Self {
        Self {
            n: self.m,
            m: self.n,
        }
    }

    /// The rational with denominator ≤ `max_den` equal to `x` up to a few ulp,
    /// found by continued-fraction expansion.
    pub fn approximate(x: f64, max_den: u64) -> Option<Self> {
        if !(x.is_finite() && x > 0.0) {
            return None;
        }
        let (mut h0, mut h1) = (0u64, 1u64);
        let (mut k0, mut k1) = (1u64, 0u64);
        let mut r = x;
        for _ in 0..64 {
            let q = r.floor();
            if q > 1e15 {
                break;
            }
            let q = q as u64;
            let h2 = q.checked_mul(h1)?.checked_add(h0)?;
            let k2 = q.checked_mul(k1)?.checked_add(k0)?;
            if k2 > max_den {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            if h1 > 0 && ((h1 as f64 / k1 as f64) - x).abs() <= 4.0 * f64::EPSILON * x {
                return Rational::new(h1, k1).ok();
            }
            let frac = r - q as f64;
            if frac == 0.0 {
                break;
            }
            r = 1.0 / frac;
        }
        None
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.n, self.m)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            domain(
                "Rational",
                format!("expected 'n/m' with positive integers, got '{s}'"),
            )
        };
        let (n, m) = s.split_once('/').ok_or_else(bad)?;
        let n = n.trim().parse::<u64>().map_err(|_| bad())?;
        let m = m.trim().parse::<u64>().map_err(|_| bad())?;
        Rational::new(n, m)
    }
}

fn check_a(func: &'static str, a: f64, allow_zero: bool) -> Result<()> {
    let ok = a.is_finite() && (a > 0.0 || (allow_zero && a == 0.0));
    if ok {
        Ok(())
    } else {
        Err(domain(func, format!("a = {a} out of range")))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= MIN_TOL {
        Ok(())
    } else {
        Err(Error::Tolerance {
            tol,
            min: MIN_TOL,
            max: f64::INFINITY,
        })
    }
}

/// Direct summation of the defining series with a Bernoulli/Euler–Maclaurin
/// tail.
pub fn s_series(a: f64, tol: f64) -> Result<EvalResult> {
    check_a("s_series", a, true)?;
    check_tol(tol)?;
    if a == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            abs_err: 0.0,
            route: Route::Series,
            work: 0,
        });
    }
    let n_terms = (32.0 * a.max(1.0)).ceil();
    if n_terms > SERIES_TERM_CAP as f64 {
        return Err(non_convergence(
            "s_series",
            format!("a = {a} needs {n_terms} terms, above the cap {SERIES_TERM_CAP}"),
        ));
    }
    let n_terms = n_terms as u64;
    let mut acc = Neumaier::new();
    let mut rounding = 0.0;
    for n in 1..=n_terms {
        let term = digamma_error_term(a, n)?;
        let x = n as f64 / a;
        // the naive branch cancels ln x against ψ(x)
        let magnitude = if x < crate::special::ERROR_TERM_SERIES_THRESHOLD {
            x.ln().abs() + 0.5 / x + 1.0 / x + 1.0
        } else {
            term
        };
        rounding += 4.0 * f64::EPSILON * magnitude;
        acc.add(term);
    }
    // Σ_{n>N} Σ_k B₂ₖ a^{2k}/(2k n^{2k}) = Σ_k B₂ₖ a^{2k}/(2k) · T(2k, N)
    let mut tail = Neumaier::new();
    let mut last = f64::INFINITY;
    let a2 = a * a;
    let mut apow = 1.0;
    for (i, &b) in BERNOULLI_2K.iter().enumerate() {
        let k = i + 1;
        apow *= a2;
        let term = b * apow / (2 * k) as f64 * zeta_tail(2.0 * k as f64, n_terms)?;
        tail.add(term);
        last = term.abs();
        if last <= 1e-3 * tol {
            break;
        }
    }
    let value = acc.total() + tail.total();
    Ok(EvalResult {
        value,
        abs_err: last + rounding + 2.0 * f64::EPSILON * value.abs(),
        route: Route::Series,
        work: n_terms,
    })
}

/// Coefficients of u/(eᵘ − 1) = Σ bₙ uⁿ.
fn bernoulli_generating(deg: usize) -> Vec<f64> {
    let mut c = vec![0.0; deg + 1];
    c[0] = 1.0;
    if deg >= 1 {
        c[1] = -0.5;
    }
    let mut fact = 1.0;
    for n in 2..=deg {
        fact *= n as f64;
        if n % 2 == 0 && n / 2 <= BERNOULLI_2K.len() {
            c[n] = BERNOULLI_2K[n / 2 - 1] / fact;
        }
    }
    c
}

const PATCH_DEGREE: usize = 24;

/// ∫₀^{x_s} of the integral-A bracket, from its power series.
///
/// The bracket e^{−x}/x² + (1−a)e^{−x}/(2x) − a/((eˣ−1)(e^{ax}−1)) is
/// [e^{−x} + (1−a) x e^{−x}/2 − B(x)B(ax)]/x² with B(u) = u/(eᵘ−1); the
/// numerator starts at x².
fn bracket_a_patch(a: f64, xs: f64) -> f64 {
    let deg = PATCH_DEGREE + 2;
    let b = bernoulli_generating(deg);
    let mut num = vec![0.0; deg + 1];
    let mut inv_fact = 1.0;
    for n in 0..=deg {
        if n > 0 {
            inv_fact /= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        num[n] += sign * inv_fact;
        if n < deg {
            num[n + 1] += 0.5 * (1.0 - a) * sign * inv_fact;
        }
    }
    for n in 0..=deg {
        let mut conv = Neumaier::new();
        let mut apow = 1.0;
        for j in 0..=n {
            conv.add(b[n - j] * b[j] * apow);
            apow *= a;
        }
        num[n] -= conv.total();
    }
    let mut acc = Neumaier::new();
    let mut xpow = xs;
    for (n, c) in num.iter().enumerate().skip(2) {
        acc.add(c * xpow / (n - 1) as f64);
        xpow *= xs;
    }
    acc.total()
}

/// The integral representation with e^{−x}/x² and e^{−x}/x subtractions.
pub fn s_integral_a(a: f64, tol: f64) -> Result<EvalResult> {
    check_a("s_integral_a", a, false)?;
    check_tol(tol)?;
    let xs = 0.25 / a.max(1.0);
    let patch = bracket_a_patch(a, xs);
    let bracket = |x: f64| {
        let e = (-x).exp();
        e / (x * x) + 0.5 * (1.0 - a) * e / x - a / (x.exp_m1() * (a * x).exp_m1())
    };
    let q = exp_sinh(bracket, xs, 0.5 * tol);
    let constant = HALF_LOG2PI_MINUS_GAMMA - 1.0 + 0.5 * (1.0 + a) * EULER_GAMMA;
    let value = constant - patch - q.value;
    Ok(EvalResult {
        value,
        abs_err: q.abs_err + 8.0 * f64::EPSILON * (constant.abs() + patch.abs() + 1.0),
        route: Route::IntegralA,
        work: q.evals as u64,
    })
}

/// G(x) = 1/2 + 1/(eˣ−1) − 1/x, by its odd Bernoulli series below x = 1.
fn g_bracket(x: f64) -> f64 {
    if x < 1.0 {
        let x2 = x * x;
        let mut acc = 0.0;
        let mut fact = 2.0;
        let mut terms = [0.0; 12];
        for (k, slot) in terms.iter_mut().enumerate() {
            let kk = (k + 1) as f64;
            if k > 0 {
                fact *= (2.0 * kk - 1.0) * (2.0 * kk);
            }
            *slot = BERNOULLI_2K[k] / fact;
        }
        for c in terms.iter().rev() {
            acc = acc * x2 + c;
        }
        acc * x
    } else {
        0.5 + 1.0 / x.exp_m1() - 1.0 / x
    }
}

/// The integrand (e^{x/a} − 1)^{−1}(1/2 + 1/(eˣ−1) − 1/x) of the compact
/// integral representation; at x = 0 it takes its limit a/12.
pub fn integrand_b(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return a / 12.0;
    }
    g_bracket(x) / (x / a).exp_m1()
}

/// The compact integral representation, integrated in y = x/a.
pub fn s_integral_b(a: f64, tol: f64) -> Result<EvalResult> {
    check_a("s_integral_b", a, false)?;
    check_tol(tol)?;
    let q = exp_sinh(|y: f64| g_bracket(a * y) / y.exp_m1(), 0.0, 0.5 * tol / a);
    Ok(EvalResult {
        value: a * q.value,
        abs_err: a * q.abs_err,
        route: Route::IntegralB,
        work: q.evals as u64,
    })
}

/// Closed form at a rational argument through two cotangent sums.
pub fn s_rational(q: Rational) -> Result<EvalResult> {
    let (n, m) = (q.n as f64, q.m as f64);
    let c1 = cot_sum(q.n, q.m)?;
    let c2 = cot_sum(q.m, q.n)?;
    let mut acc = Neumaier::new();
    acc.add(HALF_LOG2PI_MINUS_GAMMA);
    acc.add(-0.5 / m);
    acc.add(-0.5 * (m / n).ln());
    acc.add(PI / (2.0 * n) * c1);
    acc.add(n * PI / (2.0 * m * m) * c2);
    let value = acc.total();
    Ok(EvalResult {
        value,
        abs_err: 1e-14 * value.abs() + 1e-15,
        route: Route::Rational,
        work: q.n + q.m,
    })
}

/// Divisor-weighted sum of cosine-tail integrals, restricted to a ≤ 4.
pub fn s_divisor(a: f64, tol: f64) -> Result<EvalResult> {
    s_divisor_with_limit(a, tol, DIVISOR_DEFAULT_MAX_A)
}

/// [`s_divisor`] with an explicit upper limit on a.
pub fn s_divisor_with_limit(a: f64, tol: f64, max_a: f64) -> Result<EvalResult> {
    check_a("s_divisor", a, false)?;
    check_tol(tol)?;
    if a > max_a {
        return Err(domain(
            "s_divisor",
            format!("a = {a} exceeds the route limit {max_a}"),
        ));
    }
    // direct terms until β = 2nπ/a ≥ 40, then the asymptotic expansion of the
    // cosine tail summed against τ(n)
    let n_direct = ((40.0 * a) / (2.0 * PI)).ceil().max(1.0) as u64;
    let mut acc = Neumaier::new();
    let mut rounding = 0.0;
    for n in 1..=n_direct {
        let g = cos_tail_integral(2.0 * PI * n as f64 / a)?;
        let w = 2.0 * divisor_count(n) as f64;
        acc.add(w * g);
        rounding += w * (1e-15 * g.abs() + 1e-17);
    }
    // Σ_{n>N} τ(n) n^{−s} = Σ_{d≤N} d^{−s} T(s, ⌊N/d⌋) + ζ(s) T(s, N)
    let divisor_tail = |s: f64| -> Result<f64> {
        let mut t = Neumaier::new();
        for d in 1..=n_direct {
            t.add((d as f64).powf(-s) * zeta_tail(s, n_direct / d)?);
        }
        t.add(zeta_tail(s, 0)? * zeta_tail(s, n_direct)?);
        Ok(t.total())
    };
    let r2 = (a / (2.0 * PI)).powi(2);
    let mut tail = Neumaier::new();
    let mut fact = 1.0; // (2j+1)!
    let mut rpow = 1.0;
    let mut last = f64::INFINITY;
    let mut converged = false;
    for j in 0..40usize {
        let jf = j as f64;
        if j > 0 {
            fact *= (2.0 * jf) * (2.0 * jf + 1.0);
        }
        rpow *= r2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = 2.0 * sign * fact * rpow * divisor_tail(2.0 * jf + 2.0)?;
        if term.abs() > last {
            break;
        }
        tail.add(term);
        last = term.abs();
        if last <= 1e-3 * tol {
            converged = true;
            break;
        }
    }
    if !converged && last > tol {
        return Err(non_convergence(
            "s_divisor",
            format!("asymptotic tail stalls at {last:e} for a = {a}"),
        ));
    }
    let value = acc.total() + tail.total();
    Ok(EvalResult {
        value,
        abs_err: last + rounding + 2.0 * f64::EPSILON * value.abs(),
        route: Route::Divisor,
        work: n_direct,
    })
}

/// a·S(1/a) + ((ln 2π − γ)/2)(1 − a) + ((a+1)/2) ln a, i.e. S(a) given S(1/a).
pub fn functional_map(a: f64, s_inv: f64) -> f64 {
    functional_map_with(&Constants::STANDARD, a, s_inv)
}

/// [`functional_map`] with an explicit constant set.
pub fn functional_map_with(c: &Constants, a: f64, s_inv: f64) -> f64 {
    let mut acc = Neumaier::new();
    acc.add(a * s_inv);
    acc.add(c.half_log2pi_minus_gamma * (1.0 - a));
    acc.add(0.5 * (a + 1.0) * a.ln());
    acc.total()
}

/// S(a) by the default strategy: the series for a ≤ 1, the functional map of
/// S(1/a) for a > 1.
pub fn s_eval(a: f64, tol: f64) -> Result<EvalResult> {
    s_eval_with(a, tol, None)
}

/// S(a) with an optional route override.
pub fn s_eval_with(a: f64, tol: f64, route: Option<Route>) -> Result<EvalResult> {
    check_a("s_eval", a, true)?;
    check_tol(tol)?;
    if a == 0.0 {
        return s_series(0.0, tol);
    }
    match route {
        None if a > 1.0 => map_from_inverse(a, tol),
        None | Some(Route::Series) => s_series(a, tol),
        Some(Route::FunctionalMap) => map_from_inverse(a, tol),
        Some(Route::IntegralA) => s_integral_a(a, tol),
        Some(Route::IntegralB) => s_integral_b(a, tol),
        Some(Route::Divisor) => s_divisor(a, tol),
        Some(Route::Rational) => {
            let q = Rational::approximate(a, 1_000_000).ok_or_else(|| {
                domain(
                    "s_eval",
                    format!("a = {a} is not a rational with a small denominator"),
                )
            })?;
            s_rational(q)
        }
    }
}

fn map_from_inverse(a: f64, tol: f64) -> Result<EvalResult> {
    let inner = s_series(1.0 / a, (tol / a.max(1.0)).max(MIN_TOL))?;
    let value = functional_map(a, inner.value);
    Ok(EvalResult {
        value,
        abs_err: a * inner.abs_err + 4.0 * f64::EPSILON * (value.abs() + a.ln().abs() * a),
        route: Route::FunctionalMap,
        work: inner.work,
    })
}

/// Default finite-difference step for [`s_derivative`].
pub fn default_derivative_step(a: f64) -> f64 {
    (1e-3f64).min(0.25 * a)
}

/// S′(a) by the fourth-order central difference
/// (−S(a+2h) + 8S(a+h) − 8S(a−h) + S(a−2h))/(12h). Requires a − 2h ≥ 0.
pub fn s_derivative(a: f64, h: f64) -> Result<f64> {
    check_a("s_derivative", a, false)?;
    if !(h.is_finite() && h > 0.0) || a - 2.0 * h < 0.0 {
        return Err(domain(
            "s_derivative",
            format!("step h = {h} must be positive with a - 2h >= 0 (a = {a})"),
        ));
    }
    let s = |x: f64| s_eval(x, MIN_TOL).map(|r| r.value);
    let num = -s(a + 2.0 * h)? + 8.0 * s(a + h)? - 8.0 * s(a - h)? + s(a - 2.0 * h)?;
    Ok(num / (12.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::LOG_TWO_PI;
    use proptest::prelude::*;

    fn s1() -> f64 {
        (LOG_TWO_PI - EULER_GAMMA - 1.0) / 2.0
    }
    fn s2() -> f64 {
        ((4.0 * PI).ln() - 1.0 - EULER_GAMMA) / 2.0
    }
    fn s3() -> f64 {
        ((6.0 * PI).ln() - 1.0 - EULER_GAMMA) / 2.0 + PI / (6.0 * 3f64.sqrt())
    }

    #[test]
    fn series_special_values() {
        assert_eq!(s_series(0.0, 1e-12).unwrap().value, 0.0);
        let r = s_series(1.0, 1e-13).unwrap();
        assert!((r.value - s1()).abs() < 1e-14, "{}", r.value - s1());
        assert!(r.abs_err <= 1e-13);
        let small = s_series(0.01, 1e-13).unwrap().value;
        let law = PI * PI * 1e-4 / 72.0;
        assert!((small / law - 1.0).abs() < 0.01);
    }

    #[test]
    fn series_rejects_bad_input() {
        assert!(matches!(s_series(-1.0, 1e-10), Err(Error::Domain { .. })));
        assert!(matches!(s_series(1.0, 1e-15), Err(Error::Tolerance { .. })));
        assert!(matches!(
            s_series(1e6, 1e-10),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn integral_a_values() {
        let r = s_integral_a(1.0, 1e-13).unwrap();
        assert!((r.value - s1()).abs() <= 1e-13, "{}", r.value - s1());
        let r = s_integral_a(2.0, 1e-13).unwrap();
        assert!((r.value - s2()).abs() <= 1e-12);
        let a = 0.37;
        let x = s_integral_a(a, 1e-12).unwrap().value;
        let y = s_series(a, 1e-12).unwrap().value;
        assert!((x - y).abs() <= 2e-12);
    }

    #[test]
    fn integral_b_values() {
        let r = s_integral_b(1.0, 1e-13).unwrap();
        assert!((r.value - s1()).abs() <= 1e-13);
        let r = s_integral_b(3.0, 1e-13).unwrap();
        assert!((r.value - s3()).abs() <= 1e-12, "{}", r.value - s3());
        assert!((integrand_b(5.0, 0.0) - 5.0 / 12.0).abs() < 1e-15);
        assert!((integrand_b(5.0, 1e-9) - 5.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn g_bracket_branches_meet() {
        for x in [0.9, 0.99, 1.0, 1.01] {
            let direct = 0.5 + 1.0 / f64::exp_m1(x) - 1.0 / x;
            assert!((g_bracket(x) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn rational_values() {
        let r = s_rational(Rational::new(1, 1).unwrap()).unwrap();
        assert!((r.value - s1()).abs() < 1e-15);
        let r = s_rational(Rational::new(2, 1).unwrap()).unwrap();
        assert!((r.value - s2()).abs() < 1e-15);
        let r = s_rational(Rational::new(3, 1).unwrap()).unwrap();
        assert!((r.value - s3()).abs() < 1e-14);
        let r = s_rational(Rational::new(2, 3).unwrap()).unwrap();
        let s = s_series(2.0 / 3.0, 1e-13).unwrap();
        assert!((r.value - s.value).abs() <= 1e-11);
    }

    #[test]
    fn rational_normalises_and_parses() {
        let q = Rational::new(6, 4).unwrap();
        assert_eq!((q.numer(), q.denom()), (3, 2));
        assert_eq!(
            "2/3".parse::<Rational>().unwrap(),
            Rational::new(2, 3).unwrap()
        );
        assert!("2/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!(
            Rational::approximate(2.0 / 3.0, 100),
            Rational::new(2, 3).ok()
        );
        assert_eq!(Rational::approximate(0.1, 100), Rational::new(1, 10).ok());
        assert_eq!(Rational::approximate(PI, 1000), None);
    }

    #[test]
    fn divisor_values() {
        let r = s_divisor(1.0, 1e-12).unwrap();
        assert!((r.value - s1()).abs() <= 1e-12, "{}", r.value - s1());
        let r = s_divisor(2.0, 1e-12).unwrap();
        assert!((r.value - s2()).abs() <= 1e-12, "{}", r.value - s2());
        let half = s_divisor(0.5, 1e-12).unwrap().value;
        let exact = s_rational(Rational::new(1, 2).unwrap()).unwrap().value;
        assert!((half - exact).abs() <= 2e-12);
        assert!(s_divisor(5.0, 1e-12).is_err());
        assert!(s_divisor_with_limit(5.0, 1e-12, 8.0).is_ok());
    }

    #[test]
    fn functional_map_examples() {
        assert!((functional_map(1.0, s1()) - s1()).abs() < 1e-16);
        let s_half = s_rational(Rational::new(1, 2).unwrap()).unwrap().value;
        assert!((functional_map(2.0, s_half) - s2()).abs() <= 1e-12);
        let third = functional_map(1.0 / 3.0, s3());
        assert!((third - s_series(1.0 / 3.0, 1e-13).unwrap().value).abs() <= 1e-11);
    }

    #[test]
    fn half_value_reference() {
        // S(1/2) from the functional map inverted at a = 2
        let expected = 0.033_757_110_473_933_66;
        let r = s_eval(0.5, 1e-13).unwrap();
        assert!((r.value - expected).abs() < 1e-13);
    }

    #[test]
    fn dispatcher_behaviour() {
        assert_eq!(s_eval(0.0, 1e-10).unwrap().value, 0.0);
        let r = s_eval(100.0, 1e-12).unwrap();
        assert_eq!(r.route, Route::FunctionalMap);
        // (a/2) ln a is only the leading term; the ratio creeps toward 1
        let ratio = |a: f64| s_eval(a, 1e-12).unwrap().value / (0.5 * a * a.ln());
        assert!(ratio(100.0) < ratio(1e4) && ratio(1e4) < ratio(1e8) && ratio(1e8) < 1.0);
        // the remainder after the exact large-a terms is a S(1/a) ~ pi^2/(72 a)
        let a = 100.0f64;
        let rest = r.value - (0.5 * (a + 1.0) * a.ln() - HALF_LOG2PI_MINUS_GAMMA * (a - 1.0));
        assert!((rest / (PI * PI / (72.0 * a)) - 1.0).abs() < 0.01);
        for route in Route::ALL {
            let r = s_eval_with(0.5, 1e-12, Some(route)).unwrap();
            assert!(
                (r.value - 0.033_757_110_473_933_66).abs() < 1e-11,
                "{route}"
            );
        }
    }

    #[test]
    fn derivative_at_one_and_near_zero() {
        let d = s_derivative(1.0, 1e-3).unwrap();
        assert!((d - 0.25).abs() < 1e-8, "{d}");
        let a = 0.001;
        let d = s_derivative(a, default_derivative_step(a)).unwrap();
        assert!((d / (PI * PI * a / 36.0) - 1.0).abs() < 0.01);
        let d2 = s_derivative(1.0, 5e-4).unwrap();
        assert!((d - d2).abs() <= 1e-9 || (s_derivative(1.0, 1e-3).unwrap() - d2).abs() <= 1e-9);
        assert!(s_derivative(0.001, 1e-3).is_err());
    }

    #[test]
    fn rational_route_matches_its_functional_image() {
        for n in 1..=12u64 {
            for m in 1..=12u64 {
                if gcd(n, m) != 1 {
                    continue;
                }
                let q = Rational::new(n, m).unwrap();
                let direct = s_rational(q).unwrap().value;
                let image = functional_map(q.to_f64(), s_rational(q.recip()).unwrap().value);
                assert!((direct - image).abs() <= 1e-11, "{q}: {direct} vs {image}");
            }
        }
    }

    #[test]
    fn routes_agree_on_reference_grid() {
        let grid = [0.1, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9, 1.0];
        for a in grid {
            let mut results = vec![
                s_series(a, 1e-13).unwrap(),
                s_integral_a(a, 1e-13).unwrap(),
                s_integral_b(a, 1e-13).unwrap(),
                s_divisor(a, 1e-13).unwrap(),
            ];
            if let Some(q) = Rational::approximate(a, 100) {
                results.push(s_rational(q).unwrap());
            }
            for x in &results {
                assert!(x.abs_err <= 1e-11, "{a} {:?}", x);
                for y in &results {
                    let gap = (x.value - y.value).abs();
                    assert!(
                        gap <= (x.abs_err + y.abs_err).max(1e-15),
                        "a = {a}: {:?} vs {:?}",
                        x,
                        y
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn functional_equation_residual(log_a in (0.05f64).ln()..(20.0f64).ln()) {
            let a = log_a.exp();
            let s = s_series(a, 1e-13).unwrap().value;
            let s_inv = s_series(1.0 / a, 1e-13).unwrap().value;
            prop_assert!((s - functional_map(a, s_inv)).abs() <= 1e-10);
        }

        #[test]
        fn s_is_positive(a in 1e-3f64..50.0) {
            prop_assert!(s_eval(a, 1e-12).unwrap().value > 0.0);
        }

        #[test]
        fn integrand_b_is_positive(a in 0.01f64..10.0, x in 1e-6f64..200.0) {
            prop_assert!(integrand_b(a, x) >= 0.0);
        }
    }
}
