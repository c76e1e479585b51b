//! Error map of a rational fit over a region of the complex plane.
//!
//! The fit is computed from real samples only, yet it continues the function
//! analytically: the error stays small well away from the real interval,
//! degrading only near the approximant's poles.

use equifit::bench::{map_csv, poles_csv, run_complex_map};
use equifit::testlib::TestFunctionId;

fn main() {
    let map = run_complex_map(TestFunctionId::ExpSqrt, 50, (-1.5, 1.5), (-1.5, 1.5), 61).unwrap();

    // Coarse ASCII rendering: darker means larger error.
    let shades = [' ', '.', ':', '+', '#', '@'];
    for row in (0..map.resolution).rev() {
        let mut line = String::new();
        for col in 0..map.resolution {
            let e = map.errors[row * map.resolution + col];
            let level = if !e.is_finite() || e > 1e0 {
                5
            } else if e > 1e-3 {
                4
            } else if e > 1e-6 {
                3
            } else if e > 1e-9 {
                2
            } else if e > 1e-12 {
                1
            } else {
                0
            };
            line.push(shades[level]);
        }
        println!("{line}");
    }
    println!();
    println!("poles ({}):", map.poles.len());
    for (p, _) in &map.poles {
        println!("  {:+.4} {:+.4}i", p.re, p.im);
    }

    std::fs::write("cmap.csv", map_csv(&map)).unwrap();
    std::fs::write("cmap.csv.poles.csv", poles_csv(&map)).unwrap();
    eprintln!("wrote cmap.csv and cmap.csv.poles.csv");
}
