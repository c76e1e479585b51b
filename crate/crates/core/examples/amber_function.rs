//! The "amber" test function: Chebyshev coefficients +/-2^{-k} with signs
//! taken from the binary digits of pi. Analytic in the Bernstein 2-ellipse
//! and nowhere beyond, which makes it a calibrated target for equispaced
//! approximation experiments.

use num_complex::Complex64 as Cx;

use equifit::rational::fit_equispaced;
use equifit::testlib::{amber_coeffs, equispaced, eval_test_function, max_dense_error, TestFunctionId};

fn main() {
    let c = amber_coeffs();
    println!("first coefficients:");
    for (k, ck) in c.iter().take(10).enumerate() {
        println!("  c[{k}] = {ck:+.12e}");
    }
    println!("  ... ({} total)", c.len());
    let sum: f64 = c.iter().sum();
    println!("value at x = 1 (sum of coefficients): {sum:.15}");

    for n in [50, 100, 200, 400] {
        let f: Vec<Cx> = equispaced(n)
            .iter()
            .map(|&x| eval_test_function(TestFunctionId::Amber, Cx::new(x, 0.0)))
            .collect();
        let (approx, report) = fit_equispaced(&f, 1e-13).unwrap();
        let err = max_dense_error(|x| approx.eval(Cx::new(x, 0.0)), TestFunctionId::Amber, 1000)
            .unwrap();
        println!(
            "n = {n:3}  degree {:2}  dense error {:.2e}  interpolant: {}",
            report.degree, err, report.is_interpolant
        );
    }
}
