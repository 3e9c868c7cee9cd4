//! F(z; w) against its small-w asymptotic form near the first zeta zero.

use num_complex::Complex64;
use zetaphi::checks::GAMMA_1;
use zetaphi::theorem_lab::{F_asymptotic, F_eval};

fn main() -> zetaphi::Result<()> {
    let z = Complex64::new(0.5, GAMMA_1);
    for m in [1e-1, 1e-2, 1e-3, 1e-4] {
        let w = Complex64::from_polar(m, 1.0);
        let f = F_eval(z, w, 1e-11)?;
        let a = F_asymptotic(z, w)?;
        println!(
            "|w| = {m:<6} F = {:.8e}  |F - asymptotic| = {:.3e}",
            f.value,
            (f.value - a).norm()
        );
    }
    Ok(())
}
