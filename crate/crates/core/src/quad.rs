//! Quadrature building blocks: Gauss–Legendre panels, adaptive
//! Gauss–Kronrod (7/15) and the double-exponential tanh-sinh / exp-sinh
//! ladders. All routines are generic over real or complex integrands.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::sum::ComplexNeumaier;

/// Scalar field an integrand may take values in (`f64` or `Complex64`).
pub trait Field:
    Copy + Default + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
    fn to_complex(self) -> Complex64;
    fn from_complex(z: Complex64) -> Self;
    fn is_finite_value(self) -> bool;
}

impl Field for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Field for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn from_complex(z: Complex64) -> Self {
        z
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Outcome of a quadrature: the estimate, an absolute error estimate and the
/// number of integrand evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_err: f64,
    pub evals: usize,
}

/// Accumulates values of a [`Field`] with compensated summation.
#[derive(Default)]
pub(crate) struct FieldSum {
    acc: ComplexNeumaier,
}

impl FieldSum {
    pub(crate) fn add<T: Field>(&mut self, v: T) {
        self.acc.add(v.to_complex());
    }
    pub(crate) fn total<T: Field>(&self) -> T {
        T::from_complex(self.acc.total())
    }
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                let (pn, pnm1) = if n == 1 { (x, 1.0) } else { (p1, p0) };
                dp = nf * (x * pn - pnm1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let d = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + d * x, d * w))
    }

    /// Returns the rule's estimate and the sum of |w f| (the rounding scale).
    pub fn integrate<T: Field>(&self, f: impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
        let mut acc = FieldSum::default();
        let mut scale = 0.0;
        for (x, w) in self.mapped(a, b) {
            let v = f(x) * w;
            scale += v.magnitude();
            acc.add(v);
        }
        (acc.total(), scale)
    }
}

// Kronrod 15-point extension of the 7-point Gauss rule (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
    resabs: f64,
}

fn qk15<T: Field>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> Segment<T> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.magnitude() * WGK[7];
    let mut fv1 = [T::default(); 7];
    let mut fv2 = [T::default(); 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kron = kron + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[7] * (fc - mean).magnitude();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let value = kron * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((kron - gauss) * h).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Segment {
        a,
        b,
        value,
        err,
        resabs,
    }
}

/// Globally adaptive Gauss–Kronrod quadrature over the consecutive intervals
/// defined by `breaks` (at least two increasing points).
///
/// Subdivision stops once the summed error estimate falls below `abs_tol`
/// or the rounding floor `50 eps * integral of |f|`, or when `max_segments` is
/// reached. The returned error estimate is honest in either case.
pub fn gauss_kronrod<T: Field>(
    f: impl Fn(f64) -> T,
    breaks: &[f64],
    abs_tol: f64,
    max_segments: usize,
) -> QuadResult<T> {
    assert!(breaks.len() >= 2, "need at least one interval");
    let mut segs: Vec<Segment<T>> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| qk15(&f, w[0], w[1]))
        .collect();
    let mut evals = 15 * segs.len();
    let mut frozen_err = 0.0;
    let mut frozen: Vec<Segment<T>> = Vec::new();
    loop {
        let total_err: f64 = frozen_err + segs.iter().map(|s| s.err).sum::<f64>();
        let resabs: f64 = segs.iter().chain(&frozen).map(|s| s.resabs).sum();
        let floor = 50.0 * f64::EPSILON * resabs;
        if total_err <= abs_tol.max(floor)
            || segs.is_empty()
            || segs.len() + frozen.len() >= max_segments
        {
            break;
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("non-empty");
        let s = segs.swap_remove(idx);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b || (s.b - s.a) <= 1e-14 * s.a.abs().max(s.b.abs()) {
            frozen_err += s.err;
            frozen.push(s);
            continue;
        }
        segs.push(qk15(&f, s.a, mid));
        segs.push(qk15(&f, mid, s.b));
        evals += 30;
    }
    let mut acc = FieldSum::default();
    let mut all: Vec<&Segment<T>> = segs.iter().chain(&frozen).collect();
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut err = 0.0;
    for s in all {
        acc.add(s.value);
        err += s.err;
    }
    QuadResult {
        value: acc.total(),
        abs_err: err,
        evals,
    }
}

const DE_T_MAX: f64 = 5.0;
const DE_H0: f64 = 0.25;
const DE_MAX_LEVEL: usize = 10;

/// Double-exponential quadrature with the fixed node ladder 41, 81, 161, …
/// (step 0.25 halved per level over t in [-5, 5]). Stops when successive
/// levels differ by at most `tol / 2`.
fn de_ladder<T: Field>(
    node: impl Fn(f64) -> Option<(f64, f64)>,
    f: &impl Fn(f64) -> T,
    tol: f64,
) -> QuadResult<T> {
    let mut evals = 0usize;
    let mut scale = 0.0;
    let contribution = |t: f64, scale: &mut f64, evals: &mut usize| -> T {
        match node(t) {
            Some((x, w)) if w > 0.0 => {
                *evals += 1;
                let v = f(x) * w;
                if v.is_finite_value() {
                    *scale += v.magnitude();
                    v
                } else {
                    T::default()
                }
            }
            _ => T::default(),
        }
    };

    let mut h = DE_H0;
    let n0 = (DE_T_MAX / h).round() as i64;
    let mut raw = FieldSum::default();
    for j in -n0..=n0 {
        raw.add(contribution(j as f64 * h, &mut scale, &mut evals));
    }
    let mut prev: T = raw.total::<T>() * h;
    let mut diff = f64::INFINITY;
    for _level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let n = (DE_T_MAX / h).round() as i64;
        let mut j = -n + 1;
        while j <= n {
            raw.add(contribution(j as f64 * h, &mut scale, &mut evals));
            j += 2;
        }
        let cur: T = raw.total::<T>() * h;
        diff = (cur - prev).magnitude();
        prev = cur;
        if diff <= 0.5 * tol {
            break;
        }
    }
    let floor = 8.0 * f64::EPSILON * scale * h;
    QuadResult {
        value: prev,
        abs_err: diff + floor,
        evals,
    }
}

/// tanh-sinh rule on the finite interval [a, b].
pub fn tanh_sinh<T: Field>(f: impl Fn(f64) -> T, a: f64, b: f64, tol: f64) -> QuadResult<T> {
    let d = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    de_ladder(
        |t| {
            let u = half_pi * t.sinh();
            let ch = u.cosh();
            let w = d * half_pi * t.cosh() / (ch * ch);
            // distance to the nearer endpoint, formed without cancellation
            let x = if u < 0.0 {
                a + 2.0 * d / (1.0 + (-2.0 * u).exp())
            } else {
                b - 2.0 * d / (1.0 + (2.0 * u).exp())
            };
            if x <= a || x >= b || !w.is_finite() {
                None
            } else {
                Some((x, w))
            }
        },
        &f,
        tol,
    )
}

/// exp-sinh rule on the half line [a, ∞).
pub fn exp_sinh<T: Field>(f: impl Fn(f64) -> T, a: f64, tol: f64) -> QuadResult<T> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    de_ladder(
        |t| {
            let e = (half_pi * t.sinh()).exp();
            let x = a + e;
            let w = half_pi * t.cosh() * e;
            if x <= a || !x.is_finite() || !w.is_finite() {
                None
            } else {
                Some((x, w))
            }
        },
        &f,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_degree_2n_minus_1() {
        for n in [1, 2, 5, 16, 24] {
            let gl = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let (v, _) = gl.integrate(|x: f64| x.powi(deg as i32 - 1) * (1.0 + x), -1.0, 1.0);
            // ∫ x^{deg-1} (1 + x) over [-1,1]: only the even power survives.
            let even = if (deg - 1) % 2 == 0 { deg - 1 } else { deg };
            let exact = 2.0 / (even as f64 + 1.0);
            assert_relative_eq!(v, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn kronrod_weights_integrate_polynomials() {
        // K15 is exact to degree 22, G7 to degree 13.
        let s = qk15(&|x: f64| x.powi(22) + x.powi(13), 0.0, 1.0);
        assert_relative_eq!(s.value, 1.0 / 23.0 + 1.0 / 14.0, epsilon = 1e-15);
        let g = qk15(&|x: f64| x.powi(12), -1.0, 1.0);
        assert!(g.err < 1e-13);
    }

    #[test]
    fn adaptive_handles_near_singularity() {
        let eps = 1e-6;
        let r = gauss_kronrod(
            |x: f64| eps / (x * x + eps * eps),
            &[-1.0, 1.0],
            1e-12,
            2000,
        );
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((r.value - exact).abs() < 1e-10, "{} vs {}", r.value, exact);
    }

    #[test]
    fn complex_integrand() {
        let r = gauss_kronrod(
            |x: f64| Complex64::new(0.0, x).exp(),
            &[0.0, std::f64::consts::PI],
            1e-14,
            200,
        );
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let r = tanh_sinh(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((r.value - 2.0).abs() < 1e-11);
        assert!(r.abs_err < 1e-11);
    }

    #[test]
    fn exp_sinh_gamma_integral() {
        let r = exp_sinh(|x: f64| x.sqrt() * (-x).exp(), 0.0, 1e-13);
        let exact = std::f64::consts::PI.sqrt() / 2.0;
        assert!((r.value - exact).abs() < 1e-13, "{}", r.value - exact);
    }

    #[test]
    fn ladder_starts_at_41_nodes() {
        let r = exp_sinh(|_x: f64| 0.0, 0.0, 1.0);
        // first level plus one refinement (40 new nodes)
        assert_eq!(r.evals, 41 + 40);
    }
}
