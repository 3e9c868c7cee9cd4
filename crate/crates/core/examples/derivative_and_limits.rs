//! S'(1) and the small-a and large-a behaviour of S.

use std::f64::consts::PI;

use zetaphi::sfunc::{default_derivative_step, s_derivative, s_eval};

fn main() -> zetaphi::Result<()> {
    println!(
        "S'(1) = {:.12}",
        s_derivative(1.0, default_derivative_step(1.0))?
    );
    for a in [0.005, 0.01, 0.02, 0.05] {
        let r = s_eval(a, 1e-13)?.value * 72.0 / (PI * PI * a * a);
        println!("a = {a:<6} 72 S(a)/(π² a²) = {r:.8}");
    }
    for a in [10.0, 100.0, 1000.0] {
        let s = s_eval(a, 1e-12)?.value;
        println!(
            "a = {a:<6} S(a)/((a/2) ln a) = {:.6}",
            s / (0.5 * a * f64::ln(a))
        );
    }
    Ok(())
}
