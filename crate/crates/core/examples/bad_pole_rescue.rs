//! The least-squares rescue for fits with poles on the approximation
//! interval.
//!
//! Around certain sample counts the greedy rational fit of the sum-of-six
//! function places a pole inside [-1, 1]. The front door detects this and
//! refits by least squares in a partial-fractions basis built from the good
//! poles, so the returned approximant is always pole-free on the interval.

use num_complex::Complex64 as Cx;

use equifit::rational::{detect_bad_poles, fit_equispaced, DEFAULT_IM_TOL};
use equifit::testlib::{equispaced, eval_test_function, max_dense_error, TestFunctionId};

fn main() {
    let id = TestFunctionId::Sum6;
    for n in (180..=280).step_by(10) {
        let f: Vec<Cx> = equispaced(n)
            .iter()
            .map(|&x| eval_test_function(id, Cx::new(x, 0.0)))
            .collect();
        let (approx, report) = fit_equispaced(&f, 1e-13).unwrap();
        let dense = max_dense_error(|x| approx.eval(Cx::new(x, 0.0)), id, 1000).unwrap();
        let poles: Vec<Cx> = approx
            .poles_and_residues()
            .unwrap()
            .iter()
            .map(|(p, _)| *p)
            .collect();
        let bad = detect_bad_poles(&poles, DEFAULT_IM_TOL).len();
        println!(
            "n = {n:3}  degree {:2}  error {:.2e}  rescued: {:5}  bad poles after fit: {bad}",
            report.degree, dense, report.rescue_applied
        );
    }
}
