//! The circle integral I(ε; z) at the first zeta zero and at a regular point.

use zetaphi::checks::GAMMA_1;
use zetaphi::theorem_lab::theorem_demo;

fn main() -> zetaphi::Result<()> {
    let eps = [1e-2, 3e-3, 1e-3, 3e-4];
    for y in [GAMMA_1, 10.0] {
        let r = theorem_demo(0.5, y, &eps, 1e-10)?;
        println!("z = 0.5 + {y}i");
        for ((e, i), err) in r.eps_list.iter().zip(&r.abs_i).zip(&r.i_abs_err) {
            println!("  eps = {e:<7} |I| = {i:.6e} ± {err:.1e}");
        }
        println!(
            "  decreasing: {}  zero map passed: {}",
            r.decreasing, r.zero_map.passed
        );
    }
    Ok(())
}
