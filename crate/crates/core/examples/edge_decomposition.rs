//! The h-kernel against its split into shifted edge terms plus φ.

use zetaphi::theorem_lab::{decomposition, h_kernel, psi_edge};

fn main() -> zetaphi::Result<()> {
    for t in [-8.0, -2.0, 0.0, 2.0, 5.0] {
        println!("psi_edge({t:>4}) = {:.12e}", psi_edge(t, 1e-12)?);
    }
    for t in [0.5, 1.0, 2.0] {
        for eps in [1e-2, 1e-3, 1e-4] {
            let h = h_kernel(t, eps, 1e-11)?;
            let d = decomposition(t, eps, 1e-12)?;
            println!(
                "t = {t} eps = {eps:<6} h = {h:>16.9} residual = {:.3e}",
                h - d
            );
        }
    }
    Ok(())
}
