//! Evaluates S(a) by every route and prints the spread between them.

use zetaphi::sfunc::{s_divisor, s_integral_a, s_integral_b, s_rational, s_series, Rational};

fn main() -> zetaphi::Result<()> {
    for (n, m) in [(1, 10), (1, 3), (1, 2), (9, 10), (1, 1)] {
        let q = Rational::new(n, m)?;
        let a = q.to_f64();
        let results = [
            s_series(a, 1e-13)?,
            s_integral_a(a, 1e-13)?,
            s_integral_b(a, 1e-13)?,
            s_divisor(a, 1e-13)?,
            s_rational(q)?,
        ];
        println!("a = {q}");
        for r in &results {
            println!(
                "  {:<14} {:.15}  ±{:.1e}  work {}",
                r.route.to_string(),
                r.value,
                r.abs_err,
                r.work
            );
        }
    }
    Ok(())
}
