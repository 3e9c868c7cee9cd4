//! Complex Fourier transforms ∫ f(t) e^{ikt} dt of the even kernels φ and φ0
//! on the strip |Im k| < 1, the scaled transform and a real-axis zero scanner.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{non_convergence, Error, Result};
use crate::phi::{phi0, phi_eval, PhiParams, PHI_CUTOFF};
use crate::quad::GaussLegendre;
use crate::sfunc::MIN_TOL;
use crate::sum::ComplexNeumaier;

/// Margin kept from the strip edges |Im k| = 1.
pub const STRIP_MARGIN: f64 = 1e-6;

/// A wavenumber inside the strip |Im k| < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripPoint {
    re_k: f64,
    im_k: f64,
}

impl StripPoint {
    pub fn new(re_k: f64, im_k: f64) -> Result<Self> {
        if !(re_k.is_finite() && im_k.is_finite()) || im_k.abs() >= 1.0 {
            return Err(Error::Strip {
                im: im_k,
                limit: 1.0,
            });
        }
        Ok(Self { re_k, im_k })
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::new(k, 0.0)
    }

    pub fn re(&self) -> f64 {
        self.re_k
    }

    pub fn im(&self) -> f64 {
        self.im_k
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re_k, self.im_k)
    }

    pub fn neg(&self) -> Self {
        Self {
            re_k: -self.re_k,
            im_k: -self.im_k,
        }
    }
}

/// A complex value with an absolute-error estimate and the integrand
/// evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexEval {
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub abs_err: f64,
    pub work: u64,
}

pub(crate) fn serialize_complex<S: serde::Serializer>(
    z: &Complex64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// Knobs of the truncated panel quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtConfig {
    /// Multiplies the truncation point obtained from the tail bound.
    pub cutoff_scale: f64,
    /// Gauss–Legendre nodes per panel for the reported value.
    pub nodes: usize,
    /// Node count of the companion rule used for the error estimate.
    pub check_nodes: usize,
}

impl Default for FtConfig {
    fn default() -> Self {
        Self {
            cutoff_scale: 1.0,
            nodes: 24,
            check_nodes: 16,
        }
    }
}

fn rule(n: usize) -> &'static GaussLegendre {
    static RULES: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let mut cache = RULES
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    cache
        .entry(n)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(n))))
}

/// Smallest T ≥ 20 with 2∫_T^∞ 8t e^{−t} e^{|Im k| t} dt ≤ tol/2, i.e. the
/// tail of an even kernel bounded by twice its 4t e^{−t} asymptote.
pub fn truncation_point(im_k: f64, tol: f64) -> Result<f64> {
    let c = 1.0 - im_k.abs();
    let bound = |t: f64| 16.0 * (-c * t).exp() * (t / c + 1.0 / (c * c));
    let mut t = 20.0;
    while bound(t) > 0.5 * tol {
        t += 1.0;
        if t > PHI_CUTOFF {
            return Err(non_convergence(
                "truncation_point",
                format!("tail bound needs T > {PHI_CUTOFF} for Im k = {im_k}, tol = {tol:e}"),
            ));
        }
    }
    Ok(t)
}

fn tail_bound(im_k: f64, t: f64) -> f64 {
    let c = 1.0 - im_k.abs();
    16.0 * (-c * t).exp() * (t / c + 1.0 / (c * c))
}

/// 2∫₀^T f(t) cos(kt) dt for an even kernel `f` returning (value, abs_err),
/// by Gauss–Legendre panels no wider than half a period of Re k.
pub fn even_transform(
    f: impl Fn(f64) -> Result<(f64, f64)>,
    k: StripPoint,
    tol: f64,
    cfg: &FtConfig,
) -> Result<ComplexEval> {
    if k.im().abs() >= 1.0 - STRIP_MARGIN {
        return Err(Error::Strip {
            im: k.im(),
            limit: 1.0 - STRIP_MARGIN,
        });
    }
    let t_max = truncation_point(k.im(), tol)? * cfg.cutoff_scale;
    if t_max > PHI_CUTOFF {
        return Err(non_convergence(
            "even_transform",
            format!("truncation point {t_max} beyond {PHI_CUTOFF}"),
        ));
    }
    let kc = k.as_complex();
    let p = panel_sum(&f, |t| (kc * t).cos(), 0.0, t_max, k.re(), cfg)?;
    Ok(ComplexEval {
        value: 2.0 * p.value,
        abs_err: 2.0 * p.abs_err + tail_bound(k.im(), t_max),
        work: p.work,
    })
}

/// Panel quadrature of f(t)·osc(t) over [a, b] with panels no wider than
/// min(π/|re_k|, 1); the error combines the two-rule discrepancy, the
/// integrand's own error and a rounding floor.
pub(crate) fn panel_sum(
    f: &impl Fn(f64) -> Result<(f64, f64)>,
    osc: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    re_k: f64,
    cfg: &FtConfig,
) -> Result<ComplexEval> {
    let width = if re_k == 0.0 {
        1.0
    } else {
        (PI / re_k.abs()).min(1.0)
    };
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let fine = rule(cfg.nodes);
    let coarse = rule(cfg.check_nodes);

    let mut total = ComplexNeumaier::new();
    let mut disc = 0.0;
    let mut scale = 0.0;
    let mut eval_err = 0.0;
    let mut work = 0u64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let hi = if p + 1 == panels { b } else { lo + width };
        let mut fine_sum = ComplexNeumaier::new();
        for (t, w) in fine.mapped(lo, hi) {
            let (v, e) = f(t)?;
            let c = osc(t);
            let term = c * (v * w);
            scale += term.norm();
            eval_err += e * w * c.norm();
            fine_sum.add(term);
        }
        let mut coarse_sum = ComplexNeumaier::new();
        for (t, w) in coarse.mapped(lo, hi) {
            let (v, _) = f(t)?;
            coarse_sum.add(osc(t) * (v * w));
        }
        work += (fine.len() + coarse.len()) as u64;
        let fs = fine_sum.total();
        disc += (fs - coarse_sum.total()).norm();
        total.add(fs);
    }
    Ok(ComplexEval {
        value: total.total(),
        abs_err: disc + eval_err + 8.0 * f64::EPSILON * scale,
        work,
    })
}

/// φ̃(k) = ∫ φ(t) e^{ikt} dt.
pub fn phi_ft(k: StripPoint, tol: f64) -> Result<ComplexEval> {
    phi_ft_with(k, tol, &FtConfig::default())
}

pub fn phi_ft_with(k: StripPoint, tol: f64, cfg: &FtConfig) -> Result<ComplexEval> {
    even_transform(
        |t| phi_eval(t, MIN_TOL).map(|p| (p.value, p.abs_err)),
        k,
        tol,
        cfg,
    )
}

/// The transform of φ0 by the same panel quadrature.
pub fn phi0_ft_quad(k: StripPoint, tol: f64) -> Result<ComplexEval> {
    phi0_ft_quad_with(k, tol, &FtConfig::default())
}

pub fn phi0_ft_quad_with(k: StripPoint, tol: f64, cfg: &FtConfig) -> Result<ComplexEval> {
    even_transform(
        |t| {
            let v = phi0(t);
            Ok((v, 4.0 * f64::EPSILON * v))
        },
        k,
        tol,
        cfg,
    )
}

/// Closed-form series for the φ0 transform, valid for Re k > 0: two
/// alternating families decaying like e^{−nπk/ω} and e^{−(n−1/2)πk/(1−ω)}.
pub fn phi0_ft_series(k: Complex64, n_max: usize) -> Result<Complex64> {
    phi0_ft_series_with(&PhiParams::standard(), k, n_max)
}

pub fn phi0_ft_series_with(p: &PhiParams, k: Complex64, n_max: usize) -> Result<Complex64> {
    if k.re.is_nan() || k.re <= 0.0 || k.im.abs() >= 1.0 {
        return Err(crate::error::domain(
            "phi0_ft_series",
            format!("needs Re k > 0 and |Im k| < 1, got {k}"),
        ));
    }
    let w = p.omega;
    let v = 1.0 - w;
    // near-coincident poles give terms ~1e4 with denominators ~1e-5, so the
    // trigonometric arguments are reduced in double-double arithmetic
    let wd = Dd::from_f64(w);
    let vd = Dd::from_f64(1.0) - wd;
    let v_over_w = vd * wd.recip();
    let w_over_v = wd * vd.recip();
    let mut acc = ComplexNeumaier::new();
    let mut quiet = 0;
    for n in 1..=n_max.max(1) {
        let nf = n as f64;
        let h = nf - 0.5;
        let cos_den = cos_pi(v_over_w.scale(nf));
        let sin_den = cos_pi(w_over_v.scale(h) - Dd::from_f64(0.5));
        if cos_den.abs() < 1e-8 {
            return Err(Error::Resonance { n, value: cos_den });
        }
        if sin_den.abs() < 1e-8 {
            return Err(Error::Resonance { n, value: sin_den });
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let a = (-(nf * PI / w) * k).exp() * (nf / (w * w * cos_den));
        let b = (-(h * PI / v) * k).exp() * (h / (v * v * sin_den));
        let term = (a + b) * sign;
        acc.add(term);
        let running = acc.total().norm();
        // a single small term can sit next to a near-resonant one, so require
        // two quiet terms in a row
        if term.norm() < 1e-17 * running {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(2.0 * PI * PI * acc.total())
}

/// cos(πx) for a double-double x, accurate relative to the result even close
/// to the zeros of cos.
fn cos_pi(x: Dd) -> f64 {
    let two_q = 2.0 * (0.5 * x.hi).floor();
    let r = x - Dd::from_f64(two_q);
    let j = (2.0 * r.hi).round();
    let d = r - Dd::from_f64(0.5 * j);
    let (sd, cd) = (PI * d.hi).sin_cos();
    let sin_d = sd + PI * d.lo * cd;
    let cos_d = cd - PI * d.lo * sd;
    match (j as i64).rem_euclid(4) {
        0 => cos_d,
        1 => -sin_d,
        2 => -cos_d,
        _ => sin_d,
    }
}

/// Default term cap of the φ0 series.
pub const PHI0_SERIES_TERMS: usize = 200_000;

/// φ̃0(k): the series (with k → −k reflection) for |Re k| ≥ 1/2, the
/// quadrature otherwise.
pub fn phi0_ft(k: StripPoint, tol: f64) -> Result<ComplexEval> {
    if k.re().abs() >= 0.5 {
        let kk = if k.re() < 0.0 {
            -k.as_complex()
        } else {
            k.as_complex()
        };
        let value = phi0_ft_series(kk, PHI0_SERIES_TERMS)?;
        Ok(ComplexEval {
            value,
            abs_err: 1e-15 * value.norm() + 1e-300,
            work: 0,
        })
    } else {
        phi0_ft_quad(k, tol)
    }
}

/// Which even kernel a transform refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Kernel {
    Phi,
    Phi0,
}

/// exp(π|k|/(2(1−ω))), the growth factor that undoes the leading decay of φ̃0.
pub fn scale_factor(k: f64) -> f64 {
    let w = PhiParams::standard().omega;
    (PI * k.abs() / (2.0 * (1.0 - w))).exp()
}

/// A real scaled transform value with its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledEval {
    pub k: f64,
    pub value: f64,
    pub abs_err: f64,
}

impl ScaledEval {
    /// The sign is trustworthy only when |value| exceeds the error.
    pub fn resolved(&self) -> bool {
        self.value.abs() > self.abs_err
    }
}

/// Re φ̃(k) · exp(π|k|/(2(1−ω))) on the real axis, for either kernel.
pub fn scaled_ft_of(kernel: Kernel, k: f64, tol: f64) -> Result<ScaledEval> {
    let kp = StripPoint::real(k)?;
    let r = match kernel {
        Kernel::Phi => phi_ft(kp, tol)?,
        Kernel::Phi0 => phi0_ft(kp, tol)?,
    };
    let s = scale_factor(k);
    Ok(ScaledEval {
        k,
        value: r.value.re * s,
        abs_err: r.abs_err * s,
    })
}

/// Scaled transform of φ.
pub fn scaled_ft(k: f64, tol: f64) -> Result<ScaledEval> {
    scaled_ft_of(Kernel::Phi, k, tol)
}

/// A sign change of the scaled transform, refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroBracket {
    pub k_lo: f64,
    pub k_hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
    pub root: f64,
    pub residual: f64,
}

/// Grid scan for sign changes of a real function `f` returning a scaled
/// value with its error, followed by bisection of each bracket to width ≤ tol.
///
/// Grid values not exceeding their own error estimate make the sign
/// meaningless; the scan then fails with [`Error::Unresolved`]. A cell whose
/// midpoint reveals a hidden pair of sign changes is logged as a warning and
/// both changes are reported.
pub fn scan_sign_changes<F>(
    f: F,
    k_min: f64,
    k_max: f64,
    step: f64,
    tol: f64,
) -> Result<Vec<ZeroBracket>>
where
    F: Fn(f64) -> Result<ScaledEval> + Sync,
{
    if !(k_min.is_finite() && k_max.is_finite() && k_min < k_max) {
        return Err(crate::error::domain(
            "scan",
            format!("need k_min < k_max, got [{k_min}, {k_max}]"),
        ));
    }
    if !(step.is_finite() && step > 0.0) || !(tol.is_finite() && tol > 0.0) {
        return Err(crate::error::domain(
            "scan",
            "step and tol must be positive",
        ));
    }
    let n = ((k_max - k_min) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|i| (k_min + i as f64 * step).min(k_max))
        .collect();
    let values: Vec<ScaledEval> = grid.par_iter().map(|&k| f(k)).collect::<Result<Vec<_>>>()?;
    let check = |v: &ScaledEval| -> Result<()> {
        if v.resolved() {
            Ok(())
        } else {
            Err(Error::Unresolved {
                k: v.k,
                value: v.value.abs(),
                abs_err: v.abs_err,
            })
        }
    };
    for v in &values {
        check(v)?;
    }

    let mut cells: Vec<(ScaledEval, ScaledEval)> = Vec::new();
    for i in 0..values.len() - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a.value.signum() != b.value.signum() {
            cells.push((a, b));
            continue;
        }
        // a dip of |f| inside the cell may hide two crossings
        let left_dip = i == 0 || values[i - 1].value.abs() > a.value.abs();
        let right_dip = i + 2 >= values.len() || values[i + 2].value.abs() > b.value.abs();
        if left_dip && right_dip {
            let mid = f(0.5 * (a.k + b.k))?;
            check(&mid)?;
            if mid.value.signum() != a.value.signum() {
                log::warn!(
                    "two sign changes share the grid cell [{}, {}] at step {step}",
                    a.k,
                    b.k
                );
                cells.push((a, mid));
                cells.push((mid, b));
            }
        }
    }

    let refined: Vec<ZeroBracket> = cells
        .par_iter()
        .map(|&(a, b)| bisect(&f, a, b, tol, &check))
        .collect::<Result<Vec<_>>>()?;
    let mut out = refined;
    out.sort_by(|x, y| x.root.total_cmp(&y.root));
    Ok(out)
}

fn bisect<F>(
    f: &F,
    mut lo: ScaledEval,
    mut hi: ScaledEval,
    tol: f64,
    check: &impl Fn(&ScaledEval) -> Result<()>,
) -> Result<ZeroBracket>
where
    F: Fn(f64) -> Result<ScaledEval>,
{
    let (k_lo, k_hi, f_lo, f_hi) = (lo.k, hi.k, lo.value, hi.value);
    for _ in 0..200 {
        if hi.k - lo.k <= tol {
            break;
        }
        let mid = f(0.5 * (lo.k + hi.k))?;
        if mid.value == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        check(&mid)?;
        if mid.value.signum() == lo.value.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo.k + hi.k);
    let residual = f(root)?.value.abs();
    Ok(ZeroBracket {
        k_lo,
        k_hi,
        f_lo,
        f_hi,
        root,
        residual,
    })
}

/// Real zeros of φ̃ on [k_min, k_max].
pub fn find_real_zeros(k_min: f64, k_max: f64, step: f64, tol: f64) -> Result<Vec<ZeroBracket>> {
    find_real_zeros_of(Kernel::Phi, k_min, k_max, step, tol, 1e-12)
}

/// Real zeros of either kernel's transform, with an explicit quadrature
/// tolerance.
pub fn find_real_zeros_of(
    kernel: Kernel,
    k_min: f64,
    k_max: f64,
    step: f64,
    tol: f64,
    quad_tol: f64,
) -> Result<Vec<ZeroBracket>> {
    if k_min < 0.0 {
        return Err(crate::error::domain(
            "find_real_zeros",
            "k_min must be >= 0",
        ));
    }
    scan_sign_changes(
        |k| scaled_ft_of(kernel, k, quad_tol),
        k_min,
        k_max,
        step,
        tol,
    )
}

/// Default locality threshold for [`verify_zeta_zero_map`].
pub const ZERO_MAP_THRESHOLD: f64 = 1e-3;

/// The transform at the wavenumber a zeta zero x + iy maps to, scaled, and
/// compared against the scaled magnitudes at Re k ± 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroMapReport {
    pub x: f64,
    pub y: f64,
    pub k: StripPoint,
    #[serde(serialize_with = "serialize_complex")]
    pub value: Complex64,
    pub scaled_residual: f64,
    pub scaled_abs_err: f64,
    pub neighbor_scale: f64,
    /// True when both neighbouring values exceed their own error estimates.
    pub resolved: bool,
    pub passed: bool,
}

pub fn verify_zeta_zero_map(x: f64, y: f64, tol: f64, threshold: f64) -> Result<ZeroMapReport> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Strip {
            im: 1.0 - 2.0 * x,
            limit: 1.0,
        });
    }
    let k = StripPoint::new(2.0 * y, 1.0 - 2.0 * x)?;
    let s = scale_factor(k.re());
    let centre = phi_ft(k, tol)?;
    let mut neighbors = Vec::with_capacity(2);
    for dk in [-1.0, 1.0] {
        let kn = StripPoint::new(k.re() + dk, k.im())?;
        let r = phi_ft(kn, tol)?;
        neighbors.push((
            r.value.norm() * scale_factor(kn.re()),
            r.abs_err * scale_factor(kn.re()),
        ));
    }
    let resolved = neighbors.iter().all(|&(v, e)| v > e);
    let neighbor_scale = 0.5 * (neighbors[0].0 + neighbors[1].0);
    let scaled_residual = centre.value.norm() * s;
    let scaled_abs_err = centre.abs_err * s;
    let passed = resolved && scaled_residual + scaled_abs_err <= threshold * neighbor_scale;
    Ok(ZeroMapReport {
        x,
        y,
        k,
        value: centre.value,
        scaled_residual,
        scaled_abs_err,
        neighbor_scale,
        resolved,
        passed,
    })
}
