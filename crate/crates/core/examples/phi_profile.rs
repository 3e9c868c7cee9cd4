//! φ next to its elementary approximants φ0 and φ1.

use zetaphi::phi::{phi, phi0, phi1, phi_unfolded};

fn main() -> zetaphi::Result<()> {
    println!(
        "{:>6} {:>18} {:>12} {:>12} {:>10}",
        "t", "phi", "phi0 rel", "phi1 rel", "evenness"
    );
    for i in 0..=24 {
        let t = 0.25 * i as f64;
        let p = phi(t, 1e-12)?;
        let even = phi_unfolded(t, 1e-12)? - phi_unfolded(-t, 1e-12)?;
        println!(
            "{t:>6.2} {p:>18.14} {:>12.3e} {:>12.3e} {even:>10.1e}",
            (phi0(t) - p) / p,
            (phi1(t) - p) / p
        );
    }
    Ok(())
}
