//! Benchmark harness: convergence sweeps over the sample count for any
//! (function, method) set, complex-plane error maps, and CSV emission.

use num_complex::Complex64 as Cx;
use rayon::prelude::*;

use crate::baselines;
use crate::error::{Error, Result};
use crate::rational::{self, Approximant};
use crate::testlib::{equispaced, eval_test_function, max_dense_error, TestFunctionId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodId {
    Aaa,
    PolyCheb,
    PolyMonomial,
    FourierExt,
    FourierExtVa,
    FourierPoly,
    Spline,
    Fh,
}

impl MethodId {
    pub const ALL: [MethodId; 8] = [
        MethodId::Aaa,
        MethodId::PolyCheb,
        MethodId::PolyMonomial,
        MethodId::FourierExt,
        MethodId::FourierExtVa,
        MethodId::FourierPoly,
        MethodId::Spline,
        MethodId::Fh,
    ];

    /// The six methods of the head-to-head comparison.
    pub const COMPARISON: [MethodId; 6] = [
        MethodId::Spline,
        MethodId::PolyCheb,
        MethodId::FourierExt,
        MethodId::FourierPoly,
        MethodId::Fh,
        MethodId::Aaa,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MethodId::Aaa => "aaa",
            MethodId::PolyCheb => "poly_cheb",
            MethodId::PolyMonomial => "poly_monomial",
            MethodId::FourierExt => "fourier_ext",
            MethodId::FourierExtVa => "fourier_ext_va",
            MethodId::FourierPoly => "fourier_poly",
            MethodId::Spline => "spline",
            MethodId::Fh => "fh",
        }
    }
}

impl std::str::FromStr for MethodId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MethodId::ALL
            .iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown method id '{s}'")))
    }
}

/// A method together with its parameters.
#[derive(Debug, Clone, Copy)]
pub struct MethodConfig {
    pub method: MethodId,
    /// Oversampling ratio for the least-squares methods.
    pub gamma: f64,
    /// Extension half-width for the Fourier extension methods.
    pub t: f64,
    /// Relative fit tolerance (greedy rational method).
    pub tol: f64,
    /// Bad-pole imaginary tolerance (greedy rational method).
    pub im_tol: f64,
}

impl MethodConfig {
    pub fn new(method: MethodId) -> Self {
        MethodConfig {
            method,
            gamma: 2.0,
            t: 2.0,
            tol: 1e-13,
            im_tol: rational::DEFAULT_IM_TOL,
        }
    }
}

/// One sweep point: sample count, dense-grid max error, and fit diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub n: usize,
    pub error: f64,
    pub degree: usize,
    pub is_interpolant: bool,
    pub rescue_applied: bool,
}

#[derive(Debug, Clone)]
pub struct ConvergenceCurve {
    pub function: TestFunctionId,
    pub method: MethodConfig,
    pub points: Vec<ConvergencePoint>,
}

enum FittedMethod {
    Rational(Approximant),
    Linear(baselines::LinearFit),
    Spline(baselines::SplineFit),
    Fh(baselines::FHInterpolant),
}

impl FittedMethod {
    fn eval(&self, x: f64) -> Cx {
        match self {
            FittedMethod::Rational(r) => r.eval(Cx::new(x, 0.0)),
            FittedMethod::Linear(l) => l.eval(x),
            FittedMethod::Spline(s) => s.eval(x),
            FittedMethod::Fh(f) => f.eval(x),
        }
    }
}

fn fit_one(
    config: &MethodConfig,
    x: &[f64],
    f: &[Cx],
) -> Result<(FittedMethod, usize, bool, bool)> {
    match config.method {
        MethodId::Aaa => {
            let (approx, rep) = rational::fit_equispaced_with(
                f,
                config.tol,
                config.im_tol,
                rational::DEFAULT_MMAX,
            )?;
            Ok((
                FittedMethod::Rational(approx),
                rep.degree,
                rep.is_interpolant,
                rep.rescue_applied,
            ))
        }
        MethodId::PolyCheb => {
            let fit = baselines::poly_ls_cheb(x, f, config.gamma)?;
            let d = match fit.basis {
                baselines::Basis::Chebyshev { degree } => degree,
                _ => 0,
            };
            Ok((FittedMethod::Linear(fit), d, false, false))
        }
        MethodId::PolyMonomial => {
            let fit = baselines::poly_ls_monomial(x, f, config.gamma)?;
            let d = match fit.basis {
                baselines::Basis::Monomial { degree } => degree,
                _ => 0,
            };
            Ok((FittedMethod::Linear(fit), d, false, false))
        }
        MethodId::FourierExt => {
            let fit = baselines::fourier_ext(x, f, config.t, config.gamma)?;
            let d = match fit.basis {
                baselines::Basis::Fourier { k_max, .. } => k_max,
                _ => 0,
            };
            Ok((FittedMethod::Linear(fit), d, false, false))
        }
        MethodId::FourierExtVa => {
            let fit = baselines::fourier_ext_va(x, f, config.t, config.gamma)?;
            let d = match &fit.basis {
                baselines::Basis::ArnoldiFourier { k_max, .. } => *k_max,
                _ => 0,
            };
            Ok((FittedMethod::Linear(fit), d, false, false))
        }
        MethodId::FourierPoly => {
            let fit = baselines::fourier_plus_poly(x, f, config.gamma)?;
            let d = match fit.basis {
                baselines::Basis::FourierPlusCheb { k_max, .. } => k_max,
                _ => 0,
            };
            Ok((FittedMethod::Linear(fit), d, false, false))
        }
        MethodId::Spline => {
            let fit = baselines::cubic_spline(x, f)?;
            Ok((FittedMethod::Spline(fit), 3, false, false))
        }
        MethodId::Fh => {
            let fit = baselines::fh_adaptive(x, f)?;
            let d = fit.blending_degree;
            Ok((FittedMethod::Fh(fit), d, false, false))
        }
    }
}

/// Run the convergence experiment: for each n, sample the function at n
/// equispaced points, fit each method, and record the dense-grid max error.
/// A method failing at some n records an infinite error and the sweep
/// continues.
pub fn run_convergence(
    function: TestFunctionId,
    methods: &[MethodConfig],
    n_values: &[usize],
    grid_size: usize,
) -> Result<Vec<ConvergenceCurve>> {
    if n_values.is_empty() {
        return Err(Error::InvalidInput("no sample counts given".into()));
    }
    if n_values.iter().any(|&n| n < 4) {
        return Err(Error::InvalidInput("sample counts must be at least 4".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..methods.len())
        .flat_map(|mi| n_values.iter().map(move |&n| (mi, n)))
        .collect();
    let results: Vec<ConvergencePoint> = jobs
        .par_iter()
        .map(|&(mi, n)| {
            let config = &methods[mi];
            let x = equispaced(n);
            let f: Vec<Cx> = x
                .iter()
                .map(|&xi| eval_test_function(function, Cx::new(xi, 0.0)))
                .collect();
            match fit_one(config, &x, &f) {
                Ok((fit, degree, is_interpolant, rescue_applied)) => {
                    let error = max_dense_error(|x| fit.eval(x), function, grid_size)
                        .unwrap_or(f64::INFINITY);
                    ConvergencePoint {
                        n,
                        error,
                        degree,
                        is_interpolant,
                        rescue_applied,
                    }
                }
                Err(_) => ConvergencePoint {
                    n,
                    error: f64::INFINITY,
                    degree: 0,
                    is_interpolant: false,
                    rescue_applied: false,
                },
            }
        })
        .collect();
    let per = n_values.len();
    Ok(methods
        .iter()
        .enumerate()
        .map(|(mi, &method)| ConvergenceCurve {
            function,
            method,
            points: results[mi * per..(mi + 1) * per].to_vec(),
        })
        .collect())
}

/// A complex-plane error map together with the approximant's poles.
#[derive(Debug, Clone)]
pub struct ComplexMap {
    pub function: TestFunctionId,
    pub n: usize,
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub resolution: usize,
    /// |f(z) - r(z)| row-major: outer loop over im, inner over re.
    pub errors: Vec<f64>,
    pub grid: Vec<Cx>,
    pub poles: Vec<(Cx, Cx)>,
}

/// Fit the function from n equispaced samples and evaluate |f - r| on a
/// rectangular complex grid.
pub fn run_complex_map(
    function: TestFunctionId,
    n: usize,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
) -> Result<ComplexMap> {
    if resolution < 2 {
        return Err(Error::InvalidInput("need at least 2 points per axis".into()));
    }
    let x = equispaced(n);
    let f: Vec<Cx> = x
        .iter()
        .map(|&xi| eval_test_function(function, Cx::new(xi, 0.0)))
        .collect();
    let (approx, _) = rational::fit_equispaced(&f, 1e-13)?;
    let poles = approx.poles_and_residues()?;
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
    let mut grid = Vec::with_capacity(resolution * resolution);
    let mut errors = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let im = step(im_range.0, im_range.1, i);
        for j in 0..resolution {
            let z = Cx::new(step(re_range.0, re_range.1, j), im);
            let e = (eval_test_function(function, z) - approx.eval(z)).norm();
            grid.push(z);
            errors.push(e);
        }
    }
    Ok(ComplexMap {
        function,
        n,
        re_range,
        im_range,
        resolution,
        errors,
        grid,
        poles,
    })
}

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

fn fmt_err(e: f64) -> String {
    if e.is_finite() {
        format!("{e:.16e}")
    } else {
        "inf".to_string()
    }
}

/// Convergence CSV: header `function,method,n,error,degree,is_interpolant,rescue`
/// then one row per (method, n).
pub fn convergence_csv(curves: &[ConvergenceCurve]) -> String {
    let mut out = String::from("function,method,n,error,degree,is_interpolant,rescue\n");
    for curve in curves {
        for p in &curve.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                curve.function.name(),
                curve.method.method.name(),
                p.n,
                fmt_err(p.error),
                p.degree,
                p.is_interpolant,
                p.rescue_applied,
            ));
        }
    }
    out
}

/// Parse the convergence CSV (used for round-trip checks and downstream
/// tooling).
pub fn parse_convergence_csv(text: &str) -> Result<Vec<(String, String, ConvergencePoint)>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
    if header != "function,method,n,error,degree,is_interpolant,rescue" {
        return Err(Error::Parse("unexpected CSV header".into()));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(Error::Parse(format!("bad row: {line}")));
        }
        let error = if cols[3] == "inf" {
            f64::INFINITY
        } else {
            cols[3]
                .parse()
                .map_err(|e| Error::Parse(format!("bad error value: {e}")))?
        };
        rows.push((
            cols[0].to_string(),
            cols[1].to_string(),
            ConvergencePoint {
                n: cols[2].parse().map_err(|e| Error::Parse(format!("bad n: {e}")))?,
                error,
                degree: cols[4]
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad degree: {e}")))?,
                is_interpolant: cols[5] == "true",
                rescue_applied: cols[6] == "true",
            },
        ));
    }
    Ok(rows)
}

/// Map CSV: header `re,im,abserr`, row-major over the grid.
pub fn map_csv(map: &ComplexMap) -> String {
    let mut out = String::from("re,im,abserr\n");
    for (z, e) in map.grid.iter().zip(&map.errors) {
        out.push_str(&format!("{:.16e},{:.16e},{}\n", z.re, z.im, fmt_err(*e)));
    }
    out
}

/// Pole CSV companion: `re,im,residue_re,residue_im`.
pub fn poles_csv(map: &ComplexMap) -> String {
    let mut out = String::from("re,im,residue_re,residue_im\n");
    for (p, r) in &map.poles {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            p.re, p.im, r.re, r.im
        ));
    }
    out
}

/// Plot-data file: one series per method, n against log10(error).
pub fn plot_data(curves: &[ConvergenceCurve]) -> String {
    let mut out = String::new();
    for curve in curves {
        out.push_str(&format!("# {} {}\n", curve.function.name(), curve.method.method.name()));
        for p in &curve.points {
            let l = if p.error > 0.0 && p.error.is_finite() {
                format!("{:.6}", p.error.log10())
            } else if p.error == 0.0 {
                "-inf".to_string()
            } else {
                "inf".to_string()
            };
            out.push_str(&format!("{} {}\n", p.n, l));
        }
        out.push('\n');
    }
    out
}

/// Default sweep n = 4, 8, ..., nmax.
/// Write convergence curves as CSV, plus an optional plot-data file.
pub fn emit_convergence(
    path: &std::path::Path,
    curves: &[ConvergenceCurve],
    plot: Option<&std::path::Path>,
) -> crate::Result<()> {
    std::fs::write(path, convergence_csv(curves))?;
    if let Some(p) = plot {
        std::fs::write(p, plot_data(curves))?;
    }
    Ok(())
}

/// Write a complex map as CSV; the pole list goes to `<path>.poles.csv`.
pub fn emit_map(path: &std::path::Path, map: &ComplexMap) -> crate::Result<()> {
    std::fs::write(path, map_csv(map))?;
    let poles_path = format!("{}.poles.csv", path.display());
    std::fs::write(poles_path, poles_csv(map))?;
    Ok(())
}

pub fn default_sweep(nmax: usize, nstep: usize) -> Vec<usize> {
    (1..)
        .map(|k| k * nstep)
        .take_while(|&n| n <= nmax)
        .filter(|&n| n >= 4)
        .collect()
}
