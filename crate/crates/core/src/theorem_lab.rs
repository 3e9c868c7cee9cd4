//! Numerical probes of the argument linking zeta zeros to zeros of the φ
//! transform: the Mellin-type function F(z; w), its small-w asymptotics, the
//! circle integral I(ε; z), the h-kernel and its decomposition into edge
//! terms plus φ.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::fourier::{
    panel_sum, serialize_complex, truncation_point, verify_zeta_zero_map, ComplexEval, FtConfig,
    StripPoint, ZeroMapReport, ZERO_MAP_THRESHOLD,
};
use crate::phi::phi;
use crate::quad::{gauss_kronrod, GaussLegendre};
use crate::special::{complex_gamma, zeta_strip, BERNOULLI_2K, HALF_LOG2PI_MINUS_GAMMA};
use crate::sum::{ComplexNeumaier, Neumaier};

/// Smallest distance between the t-path and a pole that F_eval accepts.
pub const POLE_GUARD: f64 = 1e-8;
/// Margin kept between arg w and the excluded rays ±π.
pub const ARG_MARGIN: f64 = 1e-3;
/// θ nodes used by [`theorem_demo`].
pub const DEFAULT_THETA_NODES: usize = 256;
/// Constant C of the small-x expansion ∫_x^∞ ds/(s(e^s−1)) = 1/x + ln(x)/2 + C + O(x),
/// equal to −(ln 2π − γ)/2.
pub const EDGE_CONSTANT: f64 = -HALF_LOG2PI_MINUS_GAMMA;

const F_UPPER: f64 = 60.0;
const F_SEGMENTS: usize = 600;
const PANEL_NODES: usize = 16;

/// Poles of 1/(e^t − 1 + w) nearest the origin: ln(1−w) + 2πik, k ∈ {−1, 0, 1}.
fn nearby_poles(w: Complex64) -> Vec<Complex64> {
    let one_minus = 1.0 - w;
    if one_minus.norm() == 0.0 {
        return Vec::new();
    }
    let mu = one_minus.ln();
    (-1..=1)
        .map(|k| mu + Complex64::new(0.0, 2.0 * PI * k as f64))
        .collect()
}

fn path_distance(p: Complex64) -> f64 {
    if p.re >= 0.0 {
        p.im.abs()
    } else {
        p.norm()
    }
}

/// e^t − 1 without cancellation for small |t|.
fn complex_expm1(t: Complex64) -> Complex64 {
    let (s, c) = t.im.sin_cos();
    let half = (0.5 * t.im).sin();
    Complex64::new(t.re.exp_m1() * c - 2.0 * half * half, t.re.exp() * s)
}

/// ∫ t^{z−1}/(e^t − 1 + w) dt from 0 to `end` along a straight ray, from the
/// power series of the reciprocal.
fn small_t_piece(z: Complex64, w: Complex64, end: Complex64) -> (Complex64, f64) {
    const TERMS: usize = 80;
    let mut d = [0.0; TERMS];
    let mut fact = 1.0;
    for (n, dn) in d.iter_mut().enumerate().skip(1) {
        fact *= n as f64;
        *dn = 1.0 / fact;
    }
    let inv_w = 1.0 / w;
    let mut c: Vec<Complex64> = Vec::with_capacity(TERMS);
    c.push(inv_w);
    let mut acc = ComplexNeumaier::new();
    let mut tail = 0.0;
    let mut small = 0;
    let mut end_pow = Complex64::new(1.0, 0.0);
    for j in 0..TERMS {
        if j > 0 {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 1..=j {
                s += c[j - i] * d[i];
            }
            c.push(-s * inv_w);
            end_pow *= end;
        }
        let term = c[j] * end_pow / (z + j as f64);
        acc.add(term);
        let mag = term.norm();
        tail = mag;
        if mag <= 1e-18 * acc.total().norm() {
            small += 1;
            if small == 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let scale = (z * end.ln()).exp();
    (acc.total() * scale, 2.0 * tail * scale.norm())
}

fn ray_distance(p: Complex64, phi: f64) -> f64 {
    let along = p.re * phi.cos() + p.im * phi.sin();
    if along <= 0.0 {
        p.norm()
    } else {
        (p.im * phi.cos() - p.re * phi.sin()).abs()
    }
}

/// Poles of 1/(e^t − 1 + w) strictly between the positive axis and the ray
/// at angle `phi`.
fn swept_poles(w: Complex64, phi: f64) -> Vec<Complex64> {
    if phi == 0.0 || (1.0 - w).norm() == 0.0 {
        return Vec::new();
    }
    let mu = (1.0 - w).ln();
    let reach = (phi.tan().abs() * mu.re.abs() / (2.0 * PI)).ceil() as i64 + 1;
    (-reach..=reach)
        .map(|k| mu + Complex64::new(0.0, 2.0 * PI * k as f64))
        .filter(|p| {
            let a = p.arg();
            p.re > 0.0
                && if phi > 0.0 {
                    a > 0.0 && a < phi
                } else {
                    a < 0.0 && a > phi
                }
        })
        .collect()
}

/// Rotation angle of the integration ray for a given Im z.
fn ray_angle(z: Complex64, w: Complex64) -> f64 {
    if z.im.abs() < 2.0 {
        return 0.0;
    }
    let base = 0.5 * PI - 0.35;
    let poles = nearby_poles(w);
    let score = |phi: f64| {
        poles
            .iter()
            .map(|&p| ray_distance(p, phi) / p.norm().max(1e-300))
            .fold(f64::INFINITY, f64::min)
    };
    let best = [base, base - 0.1, base - 0.2, base - 0.3]
        .into_iter()
        .max_by(|a, b| score(*a).total_cmp(&score(*b)))
        .unwrap_or(base);
    best.copysign(z.im)
}

/// F(z; w) = (1/Γ(z)) ∫₀^∞ t^{z−1}/(e^t − 1 + w) dt with an error estimate.
///
/// For |Im z| ≥ 2 the path is rotated to a ray in the half plane of Im z,
/// which removes most of the cancellation in the t^{iy} oscillation, and the
/// residues of the poles swept over are added back.
#[allow(non_snake_case)]
pub fn F_eval(z: Complex64, w: Complex64, tol: f64) -> Result<ComplexEval> {
    if z.re.is_nan() || z.re <= 0.0 || !z.im.is_finite() {
        return Err(domain(
            "F_eval",
            format!("Re z = {} must be positive", z.re),
        ));
    }
    if w.norm() == 0.0 || !(w.re.is_finite() && w.im.is_finite()) {
        return Err(domain("F_eval", "w must be finite and non-zero"));
    }
    if w.arg().abs() > PI - ARG_MARGIN {
        return Err(domain(
            "F_eval",
            format!("|arg w| = {} exceeds π − {ARG_MARGIN:e}", w.arg().abs()),
        ));
    }
    let poles = nearby_poles(w);
    let distance = poles
        .iter()
        .map(|&p| path_distance(p))
        .fold(f64::INFINITY, f64::min);
    if distance < POLE_GUARD {
        return Err(Error::NearPole {
            func: "F_eval",
            distance,
        });
    }
    let phi = ray_angle(z, w);
    let dir = Complex64::from_polar(1.0, phi);
    let radius = poles.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    let ra = (0.25 * radius).min(0.5);
    let gamma = complex_gamma(z)?;
    let abs_tol = tol * gamma.norm() / 3.0;

    let (head, head_err) = small_t_piece(z, w, dir * ra);

    let denom = |t: Complex64| complex_expm1(t) + w;
    let r_max = F_UPPER / phi.cos();
    let mut breaks = vec![ra.ln(), 0.0];
    let mut upper_breaks = vec![1.0, r_max];
    let t_star = (1.0 - w).norm().ln().abs();
    let marks = poles
        .iter()
        .filter(|&&p| ray_distance(p, phi) < 0.5 * p.norm())
        .map(|p| p.norm())
        .chain(std::iter::once(t_star));
    for m in marks {
        if m > ra && m < 1.0 {
            breaks.push(m.ln());
        } else if m > 1.0 && m < r_max {
            upper_breaks.push(m);
        }
    }
    breaks.sort_by(f64::total_cmp);
    upper_breaks.sort_by(f64::total_cmp);

    let rot = Complex64::new(0.0, phi);
    let mid = gauss_kronrod(
        |u: f64| (z * (u + rot)).exp() / denom(dir * u.exp()),
        &breaks,
        abs_tol,
        F_SEGMENTS,
    );
    let zm1 = z - 1.0;
    let upper = gauss_kronrod(
        |r: f64| (zm1 * (r.ln() + rot)).exp() * dir / denom(dir * r),
        &upper_breaks,
        abs_tol,
        F_SEGMENTS,
    );
    let mut integral = head + mid.value + upper.value;
    for p in swept_poles(w, phi) {
        let residue = (zm1 * p.ln()).exp() / (1.0 - w);
        integral += Complex64::new(0.0, 2.0 * PI * phi.signum()) * residue;
    }
    if !(integral.re.is_finite() && integral.im.is_finite()) {
        return Err(crate::error::non_convergence(
            "F_eval",
            "non-finite integral",
        ));
    }
    // e^{-Re t} |t|^{x-1} e^{-y φ} bound on the discarded tail
    let tail = 2.0 * (-F_UPPER).exp() * r_max.powf(z.re - 1.0) * (-z.im * phi).exp() / phi.cos();
    let g = gamma.norm();
    Ok(ComplexEval {
        value: integral / gamma,
        abs_err: (head_err + mid.abs_err + upper.abs_err + tail) / g,
        work: (mid.evals + upper.evals) as u64,
    })
}

/// ζ(z) + Γ(1−z) w^{z−1} (1 + (1+z)w/2), the small-|w| form of F.
#[allow(non_snake_case)]
pub fn F_asymptotic(z: Complex64, w: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0 && z.re < 1.0) {
        return Err(domain(
            "F_asymptotic",
            format!("Re z = {} must lie in (0, 1)", z.re),
        ));
    }
    if w.norm() == 0.0 || w.arg().abs() >= PI {
        return Err(domain(
            "F_asymptotic",
            "w must be non-zero off the negative axis",
        ));
    }
    let zeta = zeta_strip(z)?;
    let g = complex_gamma(1.0 - z)?;
    let power = ((z - 1.0) * w.ln()).exp();
    Ok(zeta + g * power * (1.0 + (1.0 + z) * w * 0.5))
}

fn circle_sum(eps: f64, z: Complex64, n_theta: usize, tol: f64) -> Result<(Complex64, f64)> {
    let rule = GaussLegendre::new(PANEL_NODES);
    let panels = n_theta.div_ceil(PANEL_NODES);
    let width = 2.0 * PI / panels as f64;
    let zc = 1.0 - z;
    let parts: Vec<Result<(Complex64, f64)>> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let lo = -PI + p as f64 * width;
            let mut acc = ComplexNeumaier::new();
            let mut err = 0.0;
            for (theta, wt) in rule.mapped(lo, lo + width) {
                let w = Complex64::from_polar(eps, theta);
                let a = F_eval(z, w, tol)?;
                let b = F_eval(zc, w, tol)?;
                acc.add(a.value * b.value * wt);
                err += wt * (a.value.norm() * b.abs_err + b.value.norm() * a.abs_err);
            }
            Ok((acc.total(), err))
        })
        .collect();
    let mut total = ComplexNeumaier::new();
    let mut err = 0.0;
    for part in parts {
        let (v, e) = part?;
        total.add(v);
        err += e;
    }
    Ok((total.total() / (2.0 * PI), err / (2.0 * PI)))
}

/// I(ε; z) = (1/2π) ∫_{−π}^{π} F(z; εe^{iθ}) F(1−z; εe^{iθ}) dθ.
///
/// Gauss–Legendre panels of 16 nodes cover the open interval; `n_theta` is
/// rounded up to a whole number of panels and the error estimate compares
/// against a run with twice the nodes.
#[allow(non_snake_case)]
pub fn I_eval(eps: f64, z: Complex64, n_theta: usize, tol: f64) -> Result<ComplexEval> {
    if !(1e-5..=1e-1).contains(&eps) {
        return Err(domain(
            "I_eval",
            format!("eps = {eps:e} outside [1e-5, 1e-1]"),
        ));
    }
    if n_theta < 64 {
        return Err(domain("I_eval", format!("n_theta = {n_theta} below 64")));
    }
    if !(z.re > 0.0 && z.re < 1.0) {
        return Err(domain(
            "I_eval",
            format!("Re z = {} must lie in (0, 1)", z.re),
        ));
    }
    let (coarse, _) = circle_sum(eps, z, n_theta, tol)?;
    let (fine, fine_err) = circle_sum(eps, z, 2 * n_theta, tol)?;
    Ok(ComplexEval {
        value: fine,
        abs_err: (fine - coarse).norm() + fine_err,
        work: (6 * n_theta) as u64,
    })
}

/// Integrates a positive function of s over [lo, hi] on a log scale.
fn log_integral(f: impl Fn(f64) -> f64, lo: f64, hi: f64, abs_tol: f64) -> (f64, f64) {
    if hi <= lo {
        return (0.0, 0.0);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let n = ((b - a).ceil() as usize).max(1);
    let breaks: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let r = gauss_kronrod(
        |u: f64| {
            let s = u.exp();
            s * f(s)
        },
        &breaks,
        abs_tol,
        2000,
    );
    (r.value, r.abs_err)
}

/// h(t; ε) = e^{−t} [∫_{εe^{2t}}^∞ ds/((e^s−1)(e^{se^{−2t}}−1))
///                 − ∫_ε^{εe^{2t}} ds/((e^s−1)(e^s − e^{se^{−2t}}))].
pub fn h_kernel(t: f64, eps: f64, tol: f64) -> Result<f64> {
    if !(0.0..=10.0).contains(&t) {
        return Err(domain("h_kernel", format!("t = {t} outside [0, 10]")));
    }
    if !(1e-6..=1e-1).contains(&eps) {
        return Err(domain(
            "h_kernel",
            format!("eps = {eps:e} outside [1e-6, 1e-1]"),
        ));
    }
    let r = (-2.0 * t).exp();
    let one_minus_r = -(-2.0 * t).exp_m1();
    let lower = eps * (2.0 * t).exp();
    let abs_tol = 0.25 * tol;
    let (first, e1) = log_integral(
        |s| 1.0 / (s.exp_m1() * (s * r).exp_m1()),
        lower,
        lower + 60.0,
        abs_tol,
    );
    let (second, e2) = if t == 0.0 {
        (0.0, 0.0)
    } else {
        log_integral(
            |s| 1.0 / (s.exp_m1() * (s * r).exp() * (s * one_minus_r).exp_m1()),
            eps,
            lower,
            abs_tol,
        )
    };
    let h = (-t).exp() * (first - second);
    let err = (-t).exp() * (e1 + e2);
    if !h.is_finite() {
        return Err(crate::error::non_convergence(
            "h_kernel",
            format!("non-finite at t = {t}"),
        ));
    }
    if err > tol * (1.0 + h.abs()) {
        log::warn!("h_kernel error estimate {err:e} above requested {tol:e} at t = {t}");
    }
    Ok(h)
}

const EDGE_SWITCH: f64 = -2.0;

fn psi_edge_series(t: f64) -> f64 {
    let x = (2.0 * t).exp();
    let mut acc = Neumaier::new();
    acc.add(t);
    acc.add(EDGE_CONSTANT);
    let x2 = x * x;
    let mut pow = x;
    let mut fact = 2.0;
    for (i, b) in BERNOULLI_2K.iter().enumerate() {
        let k = (i + 1) as f64;
        let term = b * pow / (fact * (2.0 * k - 1.0));
        acc.add(-term);
        if term.abs() < 1e-20 * t.abs().max(1.0) {
            break;
        }
        pow *= x2;
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    t.exp() * acc.total()
}

fn psi_edge_quad(t: f64, tol: f64) -> (f64, f64) {
    let x = (2.0 * t).exp();
    let e_t = t.exp();
    // ∫_x^∞ ds/(s(e^s−1)) = ∫_0^V dv/(e^{x e^v} − 1) with u = e^v
    let v_max = ((x + 60.0) / x).ln();
    let n = (v_max.ceil() as usize).max(1);
    let breaks: Vec<f64> = (0..=n).map(|i| v_max * i as f64 / n as f64).collect();
    let r = gauss_kronrod(
        |v: f64| 1.0 / (x * v.exp()).exp_m1(),
        &breaks,
        0.5 * tol / e_t,
        1000,
    );
    (e_t * r.value - (-t).exp(), e_t * r.abs_err)
}

fn psi_edge_raw(t: f64, tol: f64) -> (f64, f64) {
    if t <= EDGE_SWITCH {
        (
            psi_edge_series(t),
            4.0 * f64::EPSILON * (t.abs() + 1.0) * t.exp(),
        )
    } else {
        psi_edge_quad(t, tol)
    }
}

/// ψ(t) = e^t ∫_{e^{2t}}^∞ ds/(s(e^s−1)) − e^{−t}.
pub fn psi_edge(t: f64, tol: f64) -> Result<f64> {
    if !(-20.0..=20.0).contains(&t) {
        return Err(domain("psi_edge", format!("t = {t} outside [-20, 20]")));
    }
    Ok(psi_edge_raw(t, tol).0)
}

/// ∫ ψ(t) e^{ikt} dt over the real line, truncated where the tails fall
/// below the tolerance.
pub fn psi_edge_ft(k: StripPoint, tol: f64) -> Result<ComplexEval> {
    psi_edge_ft_with(k, tol, &FtConfig::default())
}

pub fn psi_edge_ft_with(k: StripPoint, tol: f64, cfg: &FtConfig) -> Result<ComplexEval> {
    let c = 1.0 - k.im().abs();
    let t_max = truncation_point(k.im(), tol)? * cfg.cutoff_scale;
    let kc = k.as_complex();
    let f = |t: f64| Ok(psi_edge_raw(t, 0.1 * tol));
    let p = panel_sum(
        &f,
        |t| (Complex64::i() * kc * t).exp(),
        -t_max,
        t_max,
        k.re(),
        cfg,
    )?;
    let e = (-c * t_max).exp();
    let tail = 2.0 * e * ((t_max + 1.0 - EDGE_CONSTANT) / c + 1.0 / (c * c)) + 2.0 * e / c;
    Ok(ComplexEval {
        value: p.value,
        abs_err: p.abs_err + tail,
        work: p.work,
    })
}

/// ε^{−1/2}[ψ(t + ½ln ε) + ψ(−t + ½ln ε)] + φ(t).
pub fn decomposition(t: f64, eps: f64, tol: f64) -> Result<f64> {
    let shift = 0.5 * eps.ln();
    let a = psi_edge_raw(t + shift, tol).0;
    let b = psi_edge_raw(-t + shift, tol).0;
    Ok((a + b) / eps.sqrt() + phi(t, tol)?)
}

/// Outcome of [`theorem_demo`] for one candidate zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    #[serde(serialize_with = "serialize_complex")]
    pub z: Complex64,
    pub eps_list: Vec<f64>,
    pub abs_i: Vec<f64>,
    pub i_abs_err: Vec<f64>,
    pub transform_scaled_residual: f64,
    pub decreasing: bool,
    pub zero_map: ZeroMapReport,
    pub passed: bool,
}

/// Runs the circle integral along `eps_list` and the zero-map check at
/// z = x + iy.
pub fn theorem_demo(x: f64, y: f64, eps_list: &[f64], tol: f64) -> Result<TheoremReport> {
    theorem_demo_with(x, y, eps_list, tol, DEFAULT_THETA_NODES)
}

pub fn theorem_demo_with(
    x: f64,
    y: f64,
    eps_list: &[f64],
    tol: f64,
    n_theta: usize,
) -> Result<TheoremReport> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(
            "theorem_demo",
            format!("x = {x} must lie in (0, 1)"),
        ));
    }
    if eps_list.is_empty() || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain(
            "theorem_demo",
            "eps_list must be non-empty and strictly decreasing",
        ));
    }
    let z = Complex64::new(x, y);
    let evals: Vec<ComplexEval> = eps_list
        .par_iter()
        .map(|&e| I_eval(e, z, n_theta, tol))
        .collect::<Result<_>>()?;
    let abs_i: Vec<f64> = evals.iter().map(|e| e.value.norm()).collect();
    let i_abs_err = evals.iter().map(|e| e.abs_err).collect();
    let start = abs_i.len().saturating_sub(3);
    let decreasing = abs_i[start..].windows(2).all(|w| w[1] < w[0]);
    let zero_map = verify_zeta_zero_map(x, y, tol, ZERO_MAP_THRESHOLD)?;
    let transform_scaled_residual = if zero_map.neighbor_scale > 0.0 {
        zero_map.scaled_residual / zero_map.neighbor_scale
    } else {
        f64::INFINITY
    };
    Ok(TheoremReport {
        z,
        eps_list: eps_list.to_vec(),
        abs_i,
        i_abs_err,
        transform_scaled_residual,
        decreasing,
        passed: decreasing && zero_map.passed,
        zero_map,
    })
}
