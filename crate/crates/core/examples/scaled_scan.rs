//! Scaled transforms on the real axis and the zero-map test at the first two
//! zeta zeros.

use zetaphi::checks::{GAMMA_1, GAMMA_2};
use zetaphi::fourier::{scaled_ft_of, verify_zeta_zero_map, Kernel, ZERO_MAP_THRESHOLD};

fn main() -> zetaphi::Result<()> {
    println!(
        "{:>5} {:>16} {:>16} {:>10}",
        "k", "scaled phi0~", "scaled phi~", "err"
    );
    for i in 0..=12 {
        let k = 5.0 * i as f64;
        let a = scaled_ft_of(Kernel::Phi0, k, 1e-12)?;
        let b = scaled_ft_of(Kernel::Phi, k, 1e-12)?;
        println!(
            "{k:>5} {:>16.8e} {:>16.8e} {:>10.1e}",
            a.value, b.value, b.abs_err
        );
    }
    for y in [GAMMA_1, GAMMA_2] {
        let r = verify_zeta_zero_map(0.5, y, 1e-12, ZERO_MAP_THRESHOLD)?;
        println!(
            "k = {:.5}: scaled |phi~| = {:.3e} ± {:.3e}, neighbours {:.3e}, passed {}",
            r.k.re(),
            r.scaled_residual,
            r.scaled_abs_err,
            r.neighbor_scale,
            r.passed
        );
    }
    Ok(())
}
