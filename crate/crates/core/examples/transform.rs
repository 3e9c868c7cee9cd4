//! The transform of φ and φ0 at real and complex wavenumbers.

use num_complex::Complex64;
use zetaphi::fourier::{phi0_ft_quad, phi0_ft_series, phi_ft, StripPoint, PHI0_SERIES_TERMS};

fn main() -> zetaphi::Result<()> {
    for (re, im) in [(0.5, 0.0), (2.0, 0.0), (5.0, 0.3), (10.0, 0.5), (20.0, 0.0)] {
        let k = StripPoint::new(re, im)?;
        let f = phi_ft(k, 1e-12)?;
        let q = phi0_ft_quad(k, 1e-12)?;
        let s = phi0_ft_series(Complex64::new(re, im), PHI0_SERIES_TERMS)?;
        println!(
            "k = {re:>5}{im:+}i  phi~ = {:.10e}  phi0~ quad = {:.10e}  series gap = {:.1e}",
            f.value,
            q.value,
            (q.value - s).norm()
        );
    }
    Ok(())
}
