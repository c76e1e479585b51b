//! Direct use of the five classical baseline fitters.

use num_complex::Complex64 as Cx;

use equifit::baselines::{
    cubic_spline, fh_adaptive, fourier_ext, fourier_plus_poly, growth_constant, poly_ls_cheb,
};
use equifit::testlib::{equispaced, eval_test_function, max_dense_error, TestFunctionId};

fn main() {
    let id = TestFunctionId::FC;
    let n = 100;
    let x = equispaced(n);
    let f: Vec<Cx> = x
        .iter()
        .map(|&xi| eval_test_function(id, Cx::new(xi, 0.0)))
        .collect();

    let poly = poly_ls_cheb(&x, &f, 2.0).unwrap();
    let fext = fourier_ext(&x, &f, 2.0, 2.0).unwrap();
    let fpoly = fourier_plus_poly(&x, &f, 2.0).unwrap();
    let spline = cubic_spline(&x, &f).unwrap();
    let fh = fh_adaptive(&x, &f).unwrap();

    let report = |name: &str, err: f64| println!("{name:<22} {err:.3e}");
    println!("{} at n = {n}, max error on a 1000-point grid:", id.label());
    report(
        "polynomial LS (cheb)",
        max_dense_error(|z| poly.eval(z), id, 1000).unwrap(),
    );
    report(
        "fourier extension",
        max_dense_error(|z| fext.eval(z), id, 1000).unwrap(),
    );
    report(
        "fourier + polynomial",
        max_dense_error(|z| fpoly.eval(z), id, 1000).unwrap(),
    );
    report(
        "cubic spline",
        max_dense_error(|z| spline.eval(z), id, 1000).unwrap(),
    );
    report(
        "floater-hormann",
        max_dense_error(|z| fh.eval(z), id, 1000).unwrap(),
    );
    println!();
    println!(
        "FH blending degree chosen by cross-validation: {}",
        fh.blending_degree
    );
    println!(
        "instability growth constant C(2) = {:.12}",
        growth_constant(2.0).unwrap()
    );
}
