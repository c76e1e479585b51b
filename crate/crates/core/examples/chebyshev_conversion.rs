//! Convert a rational fit to an ordinary Chebyshev polynomial.
//!
//! The rational approximant of degree ~17 carries the same information as a
//! polynomial of degree ~104; the conversion makes that explicit.

use num_complex::Complex64 as Cx;

use equifit::rational::{fit_equispaced, to_chebyshev};
use equifit::testlib::{equispaced, eval_test_function, max_dense_error, TestFunctionId};

fn main() {
    let id = TestFunctionId::ExpSqrt;
    let f: Vec<Cx> = equispaced(50)
        .iter()
        .map(|&x| eval_test_function(id, Cx::new(x, 0.0)))
        .collect();

    let (approx, report) = fit_equispaced(&f, 1e-13).unwrap();
    let poly = to_chebyshev(&approx, 1e-15).unwrap();
    let err = max_dense_error(|x| poly.eval(Cx::new(x, 0.0)), id, 1000).unwrap();

    println!("rational degree   {}", report.degree);
    println!("polynomial degree {}", poly.degree());
    println!("polynomial error  {:.3e}", err);
    println!();
    println!("trailing coefficients:");
    let c = &poly.coefficients;
    for k in c.len().saturating_sub(5)..c.len() {
        println!("  c[{k}] = {:+.3e}", c[k]);
    }
}
