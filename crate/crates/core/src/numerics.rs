//! Dense linear-algebra kernels and Chebyshev transforms shared by the fitters.
//!
//! Everything operates on complex scalars; real inputs are promoted by the
//! callers. All functions are pure and safe to call concurrently.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub type Cx = Complex64;
pub type CMatrix = DMatrix<Cx>;

/// Singular value decomposition A = U diag(s) V^H with s sorted descending.
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    /// Columns are left singular vectors, rows x min(rows, cols).
    pub u: CMatrix,
    /// V^H, min(rows, cols) x cols; right singular vectors are its conjugated rows.
    pub v_h: CMatrix,
}

fn check_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn svd(a: &CMatrix) -> Result<SvdResult> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    check_finite(a)?;
    let svd = a.clone().svd(true, true);
    Ok(SvdResult {
        singular_values: svd.singular_values.iter().copied().collect(),
        u: svd.u.expect("left vectors requested"),
        v_h: svd.v_t.expect("right vectors requested"),
    })
}

/// Minimum-norm solution of min ||Ax - b||_2, with singular values below
/// rtol * s_max treated as zero.
pub fn least_squares_min_norm(a: &CMatrix, b: &[Cx], rtol: f64) -> Result<Vec<Cx>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if a.nrows() != b.len() {
        return Err(Error::SizeMismatch(format!(
            "matrix has {} rows, rhs has {} entries",
            a.nrows(),
            b.len()
        )));
    }
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::InvalidInput("rtol must lie in (0, 1)".into()));
    }
    let dec = svd(a)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let cutoff = rtol * smax;
    let apply_pinv = |r: &[Cx]| -> Vec<Cx> {
        let mut x = vec![Cx::new(0.0, 0.0); a.ncols()];
        for (k, &s) in dec.singular_values.iter().enumerate() {
            if s <= cutoff || s == 0.0 {
                continue;
            }
            // (u_k^H r) / s_k * v_k
            let mut proj = Cx::new(0.0, 0.0);
            for i in 0..a.nrows() {
                proj += dec.u[(i, k)].conj() * r[i];
            }
            proj /= s;
            for j in 0..a.ncols() {
                x[j] += proj * dec.v_h[(k, j)].conj();
            }
        }
        x
    };
    let mut x = apply_pinv(b);
    // One step of iterative refinement; stays in the retained row space.
    let residual: Vec<Cx> = {
        let ax = a * CMatrix::from_column_slice(a.ncols(), 1, &x);
        (0..a.nrows()).map(|i| b[i] - ax[(i, 0)]).collect()
    };
    let dx = apply_pinv(&residual);
    for j in 0..a.ncols() {
        x[j] += dx[j];
    }
    Ok(x)
}

/// All finite generalized eigenvalues of A v = lambda B v.
///
/// Solved by a shift-and-invert reduction to a standard eigenproblem:
/// with mu an eigenvalue of (A - sigma B)^{-1} B, the pencil eigenvalue is
/// sigma + 1/mu, and infinite eigenvalues map to mu = 0.
pub fn generalized_eig(a: &CMatrix, b: &CMatrix) -> Result<Vec<Cx>> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows() {
        return Err(Error::SizeMismatch(
            "pencil matrices must be square and of equal size".into(),
        ));
    }
    check_finite(a)?;
    check_finite(b)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    // Fixed shifts keep the computation deterministic; values are arbitrary
    // points unlikely to coincide with an eigenvalue.
    let shifts = [
        Cx::new(0.8392869816, 0.6049875219),
        Cx::new(-1.3175683007, 0.4127519221),
        Cx::new(2.0913275441, -1.1523087633),
        Cx::new(-0.2431708217, -1.7350942518),
    ];
    let scale_a = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1.0);
    let scale_b = b.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale_b == 0.0 {
        return Ok(vec![]); // B = 0: every eigenvalue is infinite
    }
    let ratio = scale_a / scale_b;
    for &base in &shifts {
        let sigma = base * ratio;
        let shifted = a - b * sigma;
        let lu = shifted.clone().lu();
        let m = match lu.solve(b) {
            Some(m) => m,
            None => continue,
        };
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            continue;
        }
        let schur = match m.try_schur(f64::EPSILON, 10_000) {
            Some(s) => s,
            None => continue,
        };
        let mus = match schur.eigenvalues() {
            Some(e) => e,
            None => continue,
        };
        let mu_max = mus.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        let mut out: Vec<Cx> = mus
            .iter()
            .filter(|mu| mu.norm() > 1e-12 * mu_max)
            .map(|mu| sigma + 1.0 / mu)
            .collect();
        out.sort_by(|p, q| {
            p.re.partial_cmp(&q.re)
                .unwrap()
                .then(p.im.partial_cmp(&q.im).unwrap())
        });
        return Ok(out);
    }
    Err(Error::EigFailure)
}

/// Chebyshev coefficients c_0..c_m from values at the Chebyshev points of the
/// second kind x_j = cos(j pi / m), j = 0..m.
pub fn cheb_transform(values: &[Cx]) -> Result<Vec<Cx>> {
    if values.is_empty() {
        return Err(Error::InvalidInput("need at least one value".into()));
    }
    let m = values.len() - 1;
    if m == 0 {
        return Ok(vec![values[0]]);
    }
    // Even extension of length 2m turns the DCT-I into a plain FFT.
    let mut buf = vec![Cx::new(0.0, 0.0); 2 * m];
    for (j, &v) in values.iter().enumerate() {
        buf[j] = v;
        if j > 0 && j < m {
            buf[2 * m - j] = v;
        }
    }
    FftPlanner::new().plan_fft_forward(2 * m).process(&mut buf);
    let mf = m as f64;
    let mut c = Vec::with_capacity(m + 1);
    c.push(buf[0] / (2.0 * mf));
    for k in 1..m {
        c.push(buf[k] / mf);
    }
    c.push(buf[m] / (2.0 * mf));
    Ok(c)
}

/// Inverse of [`cheb_transform`]: values at the Chebyshev points from
/// coefficients.
pub fn cheb_inverse(coeffs: &[Cx]) -> Result<Vec<Cx>> {
    if coeffs.is_empty() {
        return Err(Error::InvalidInput("need at least one coefficient".into()));
    }
    let m = coeffs.len() - 1;
    if m == 0 {
        return Ok(vec![coeffs[0]]);
    }
    let mf = m as f64;
    let mut buf = vec![Cx::new(0.0, 0.0); 2 * m];
    buf[0] = coeffs[0] * 2.0 * mf;
    buf[m] = coeffs[m] * 2.0 * mf;
    for k in 1..m {
        buf[k] = coeffs[k] * mf;
        buf[2 * m - k] = coeffs[k] * mf;
    }
    FftPlanner::new().plan_fft_inverse(2 * m).process(&mut buf);
    Ok(buf[..=m].iter().map(|z| z / (2.0 * mf)).collect())
}

/// Chebyshev points of the second kind, ordered x_0 = 1 down to x_m = -1.
pub fn cheb_points(m: usize) -> Vec<f64> {
    if m == 0 {
        return vec![1.0];
    }
    (0..=m)
        .map(|j| (j as f64 * std::f64::consts::PI / m as f64).cos())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn svd_identity() {
        let a = CMatrix::identity(3, 3);
        let dec = svd(&a).unwrap();
        for s in dec.singular_values {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn svd_diagonal() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(3.0, 0.0),
            c(2.0, 0.0),
            c(1.0, 0.0),
        ]));
        let dec = svd(&a).unwrap();
        assert!((dec.singular_values[0] - 3.0).abs() < 1e-14);
        assert!((dec.singular_values[1] - 2.0).abs() < 1e-14);
        assert!((dec.singular_values[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn svd_reconstruction_random() {
        // Deterministic pseudo-random 10x4 matrix; oracle is direct multiplication.
        let a = CMatrix::from_fn(10, 4, |i, j| {
            let t = (i * 7 + j * 13 + 1) as f64;
            c((t * 0.37).sin(), (t * 0.11).cos())
        });
        let dec = svd(&a).unwrap();
        let s = CMatrix::from_fn(dec.singular_values.len(), dec.singular_values.len(), |i, j| {
            if i == j {
                c(dec.singular_values[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let rec = &dec.u * s * &dec.v_h;
        let resid = (&a - rec).norm() / a.norm();
        assert!(resid < 1e-13, "resid = {resid:.3e}");
        // column orthonormality of U and V
        let gu = dec.u.adjoint() * &dec.u;
        let gv = &dec.v_h * dec.v_h.adjoint();
        assert!((gu - CMatrix::identity(4, 4)).norm() < 1e-13);
        assert!((gv - CMatrix::identity(4, 4)).norm() < 1e-13);
        // A v_k = s_k u_k
        for k in 0..4 {
            let vk = dec.v_h.row(k).map(|z| z.conj()).transpose();
            let lhs = &a * vk;
            let rhs = dec.u.column(k) * c(dec.singular_values[k], 0.0);
            assert!((lhs - rhs).norm() <= 1e-12 * dec.singular_values[0]);
        }
    }

    #[test]
    fn svd_rejects_nonfinite() {
        let mut a = CMatrix::identity(2, 2);
        a[(0, 1)] = c(f64::NAN, 0.0);
        assert!(svd(&a).is_err());
    }

    #[test]
    fn lsq_identity() {
        let a = CMatrix::identity(4, 4);
        let b = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 0.0), c(2.0, -1.0)];
        let x = least_squares_min_norm(&a, &b, 1e-14).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).norm() < 1e-13);
        }
    }

    #[test]
    fn lsq_rank_one_projection() {
        let a = CMatrix::from_fn(2, 1, |_, _| c(1.0, 0.0));
        let b = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let x = least_squares_min_norm(&a, &b, 1e-14).unwrap();
        assert!((x[0] - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lsq_matches_truncated_svd_oracle() {
        // 20x10 ill-conditioned matrix from near-collinear columns.
        let a = CMatrix::from_fn(20, 10, |i, j| {
            let x = -1.0 + 2.0 * i as f64 / 19.0;
            c(x.powi(j as i32), 0.0)
        });
        let b: Vec<Cx> = (0..20)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / 19.0;
                c((3.0 * x).sin(), 0.0)
            })
            .collect();
        let x = least_squares_min_norm(&a, &b, 1e-14).unwrap();
        // Oracle: assemble the same solution directly from svd() output.
        let dec = svd(&a).unwrap();
        let cutoff = 1e-14 * dec.singular_values[0];
        let mut y = vec![c(0.0, 0.0); 10];
        for (k, &s) in dec.singular_values.iter().enumerate() {
            if s <= cutoff {
                continue;
            }
            let mut proj = c(0.0, 0.0);
            for i in 0..20 {
                proj += dec.u[(i, k)].conj() * b[i];
            }
            for j in 0..10 {
                y[j] += proj / s * dec.v_h[(k, j)].conj();
            }
        }
        let bvec = nalgebra::DVector::from_vec(b.clone());
        let rx = (&a * nalgebra::DVector::from_vec(x.clone()) - &bvec).norm();
        let ry = (&a * nalgebra::DVector::from_vec(y) - &bvec).norm();
        assert!((rx - ry).abs() < 1e-12);
    }

    #[test]
    fn lsq_local_optimality_probe() {
        let a = CMatrix::from_fn(6, 3, |i, j| c(((i + 1) * (j + 2)) as f64 % 5.0, (i as f64) * 0.1));
        let b: Vec<Cx> = (0..6).map(|i| c(i as f64, -(i as f64) * 0.3)).collect();
        let x = least_squares_min_norm(&a, &b, 1e-14).unwrap();
        let bvec = nalgebra::DVector::from_vec(b);
        let base = (&a * nalgebra::DVector::from_vec(x.clone()) - &bvec).norm();
        for t in 0..20 {
            let mut d = vec![c(0.0, 0.0); 3];
            let phi = t as f64;
            d[t % 3] = c(phi.cos(), phi.sin()) * 1e-6;
            let xp: Vec<Cx> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
            let r = (&a * nalgebra::DVector::from_vec(xp) - &bvec).norm();
            assert!(r + 1e-15 >= base);
        }
    }

    #[test]
    fn geig_diagonal() {
        let a = CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(if i == 0 { 2.0 } else { 6.0 }, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let b = CMatrix::identity(2, 2);
        let eig = generalized_eig(&a, &b).unwrap();
        assert_eq!(eig.len(), 2);
        assert!((eig[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((eig[1] - c(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn geig_singular_b_drops_infinite() {
        let a = CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                c(if i == 0 { 3.0 } else { 1.0 }, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let b = CMatrix::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let eig = generalized_eig(&a, &b).unwrap();
        assert_eq!(eig.len(), 1);
        assert!((eig[0] - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn geig_rejects_mismatch() {
        let a = CMatrix::identity(2, 2);
        let b = CMatrix::identity(3, 3);
        assert!(generalized_eig(&a, &b).is_err());
    }

    #[test]
    fn cheb_basis_function() {
        // Values of T_3 at 8 Chebyshev points -> unit coefficient vector.
        let m = 7;
        let pts = cheb_points(m);
        let vals: Vec<Cx> = pts.iter().map(|&x| c(4.0 * x * x * x - 3.0 * x, 0.0)).collect();
        let coef = cheb_transform(&vals).unwrap();
        for (k, ck) in coef.iter().enumerate() {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert!((ck - c(expect, 0.0)).norm() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn cheb_constant() {
        let vals = vec![c(5.0, 0.0); 9];
        let coef = cheb_transform(&vals).unwrap();
        assert!((coef[0] - c(5.0, 0.0)).norm() < 1e-13);
        for ck in &coef[1..] {
            assert!(ck.norm() < 1e-13);
        }
    }

    #[test]
    fn cheb_matches_direct_sum_oracle() {
        // exp(x) at 20 points; oracle is the direct cosine-sum quadrature.
        let m = 19;
        let pts = cheb_points(m);
        let vals: Vec<Cx> = pts.iter().map(|&x| c(x.exp(), 0.0)).collect();
        let coef = cheb_transform(&vals).unwrap();
        let mf = m as f64;
        for k in 0..=m {
            let mut s = 0.5 * (vals[0].re + if k % 2 == 0 { vals[m].re } else { -vals[m].re });
            for j in 1..m {
                s += vals[j].re * (std::f64::consts::PI * (j * k) as f64 / mf).cos();
            }
            let mut ck = 2.0 * s / mf;
            if k == 0 || k == m {
                ck *= 0.5;
            }
            assert!((coef[k].re - ck).abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn cheb_rejects_empty() {
        assert!(cheb_transform(&[]).is_err());
    }

    proptest! {
        #[test]
        fn cheb_roundtrip(vals in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..64)) {
            let v: Vec<Cx> = vals.iter().map(|&(re, im)| c(re, im)).collect();
            let coef = cheb_transform(&v).unwrap();
            let back = cheb_inverse(&coef).unwrap();
            let scale = v.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
            for (a, b) in v.iter().zip(&back) {
                prop_assert!((a - b).norm() <= 1e-13 * scale);
            }
        }
    }
}
