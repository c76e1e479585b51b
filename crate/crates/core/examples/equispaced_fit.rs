//! Fit a smooth function from 50 equispaced samples and report the result.

use num_complex::Complex64 as Cx;

use equifit::rational::fit_equispaced;
use equifit::testlib::{equispaced, eval_test_function, max_dense_error, TestFunctionId};

fn main() {
    let id = TestFunctionId::ExpSqrt;
    let f: Vec<Cx> = equispaced(50)
        .iter()
        .map(|&x| eval_test_function(id, Cx::new(x, 0.0)))
        .collect();

    let (approx, report) = fit_equispaced(&f, 1e-13).expect("fit failed");
    let dense = max_dense_error(|x| approx.eval(Cx::new(x, 0.0)), id, 1000).unwrap();

    println!("function:     {}", id.label());
    println!("degree:       {}", report.degree);
    println!("grid residual {:.3e} (relative)", report.grid_residual);
    println!("dense error   {:.3e} (absolute, 1000-point grid)", dense);
    println!("interpolant:  {}", report.is_interpolant);
    println!("rescued:      {}", report.rescue_applied);

    for (p, r) in approx.poles_and_residues().unwrap() {
        println!("pole {:+.6} {:+.6}i   residue {:+.3e} {:+.3e}i", p.re, p.im, r.re, r.im);
    }
}
