//! Runs the acceptance checks on reduced grids.

use zetaphi::checks::{run_all, Level};
use zetaphi::special::Constants;

fn main() {
    for outcome in run_all(Level::Reduced, &Constants::STANDARD) {
        println!("{outcome}");
    }
}
