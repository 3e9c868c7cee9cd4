//! Checks S(a) = a S(1/a) + L(1 - a) + ((a + 1)/2) ln a on a log grid.

use zetaphi::sfunc::{functional_map, s_series};

fn main() -> zetaphi::Result<()> {
    println!("{:>10} {:>22} {:>10}", "a", "S(a)", "residual");
    for i in 0..=12 {
        let a = 0.05f64 * 400f64.powf(i as f64 / 12.0);
        let s = s_series(a, 1e-13)?.value;
        let mapped = functional_map(a, s_series(1.0 / a, 1e-13)?.value);
        println!("{a:>10.5} {s:>22.15} {:>10.2e}", s - mapped);
    }
    Ok(())
}
