//! The classical comparison methods: oversampled polynomial least-squares in
//! Chebyshev and monomial bases, Fourier extension (plain and orthogonalized
//! on the grid), Fourier-plus-polynomial, not-a-knot cubic splines, and
//! Floater-Hormann barycentric interpolation with adaptive blending degree.

use num_complex::Complex64 as Cx;

use crate::error::{Error, Result};
use crate::numerics::{self, CMatrix};

const LS_RTOL: f64 = 1e-14;
// The raw extension basis is exponentially ill conditioned; truncating near
// sqrt(machine eps) keeps the coefficient norm under control at the cost of
// the well-known ~1e-7 accuracy floor. The Arnoldi variant removes the
// floor by orthogonalizing on the grid instead.
const FOURIER_EXT_RTOL: f64 = 1e-8;

/// Basis descriptor for a linear least-squares fit.
#[derive(Debug, Clone)]
pub enum Basis {
    Chebyshev { degree: usize },
    Monomial { degree: usize },
    /// exp(i pi k x / t), k = -k_max..k_max.
    Fourier { t: f64, k_max: usize },
    /// Chebyshev T_0..T_p followed by exp(i pi k x), k = -k_max..k_max.
    FourierPlusCheb { p: usize, k_max: usize },
    /// Krylov columns starting from exp(-i pi k_max x / t), orthonormalized
    /// on the sample grid; the Hessenberg recurrence is replayed off-grid.
    ArnoldiFourier {
        t: f64,
        k_max: usize,
        /// hess[j] holds h_{0..j+1, j}.
        hess: Vec<Vec<Cx>>,
        norm0: f64,
    },
}

/// A linear approximant: basis descriptor plus coefficients. For real data
/// the evaluation returns the real part.
#[derive(Debug, Clone)]
pub struct LinearFit {
    pub basis: Basis,
    pub coefficients: Vec<Cx>,
    pub real_data: bool,
}

impl LinearFit {
    pub fn eval(&self, x: f64) -> Cx {
        let z = Cx::new(x, 0.0);
        let v = match &self.basis {
            Basis::Chebyshev { .. } => clenshaw(&self.coefficients, z),
            Basis::Monomial { .. } => {
                let mut acc = Cx::new(0.0, 0.0);
                for &ck in self.coefficients.iter().rev() {
                    acc = acc * z + ck;
                }
                acc
            }
            Basis::Fourier { t, k_max } => {
                let mut acc = Cx::new(0.0, 0.0);
                for (idx, &ck) in self.coefficients.iter().enumerate() {
                    let k = idx as f64 - *k_max as f64;
                    acc += ck * (Cx::i() * std::f64::consts::PI * k * x / t).exp();
                }
                acc
            }
            Basis::FourierPlusCheb { p, k_max } => {
                let (cheb, four) = self.coefficients.split_at(p + 1);
                let mut acc = clenshaw(cheb, z);
                for (idx, &ck) in four.iter().enumerate() {
                    let k = idx as f64 - *k_max as f64;
                    acc += ck * (Cx::i() * std::f64::consts::PI * k * x).exp();
                }
                acc
            }
            Basis::ArnoldiFourier { t, k_max, hess, norm0 } => {
                let g = (Cx::i() * std::f64::consts::PI * x / t).exp();
                let q0 = (-Cx::i() * std::f64::consts::PI * *k_max as f64 * x / t).exp() / *norm0;
                let mut q = vec![q0];
                for col in hess {
                    let mut w = g * q[q.len() - 1];
                    for (i, &h) in col[..col.len() - 1].iter().enumerate() {
                        w -= h * q[i];
                    }
                    q.push(w / col[col.len() - 1]);
                }
                q.iter().zip(&self.coefficients).map(|(qi, ci)| qi * ci).sum()
            }
        };
        if self.real_data {
            Cx::new(v.re, 0.0)
        } else {
            v
        }
    }
}

fn clenshaw(coeffs: &[Cx], z: Cx) -> Cx {
    let two_z = z * 2.0;
    let mut b1 = Cx::new(0.0, 0.0);
    let mut b2 = Cx::new(0.0, 0.0);
    for &ck in coeffs.iter().rev() {
        let b0 = two_z * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    b1 - z * b2
}

fn is_real(f: &[Cx]) -> bool {
    let fnorm = f.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    f.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max) <= 1e-13 * fnorm.max(1e-300)
}

fn check_sizes(x: &[f64], f: &[Cx]) -> Result<()> {
    if x.len() != f.len() {
        return Err(Error::SizeMismatch("sample and value counts differ".into()));
    }
    if x.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    Ok(())
}

fn solve(a: &CMatrix, f: &[Cx]) -> Result<Vec<Cx>> {
    numerics::least_squares_min_norm(a, f, LS_RTOL)
}

/// Least-squares Chebyshev fit of degree ceil(n/gamma) - 1.
pub fn poly_ls_cheb(x: &[f64], f: &[Cx], gamma: f64) -> Result<LinearFit> {
    check_sizes(x, f)?;
    if gamma <= 1.0 {
        return Err(Error::InvalidInput("gamma must exceed 1".into()));
    }
    let n = x.len();
    let degree = ((n as f64 / gamma).ceil() as usize).max(1) - 1;
    let mut a = CMatrix::zeros(n, degree + 1);
    for (i, &xi) in x.iter().enumerate() {
        let mut t0 = 1.0;
        let mut t1 = xi;
        for k in 0..=degree {
            let tk = if k == 0 {
                1.0
            } else if k == 1 {
                xi
            } else {
                let t2 = 2.0 * xi * t1 - t0;
                t0 = t1;
                t1 = t2;
                t2
            };
            a[(i, k)] = Cx::new(tk, 0.0);
        }
    }
    Ok(LinearFit {
        basis: Basis::Chebyshev { degree },
        coefficients: solve(&a, f)?,
        real_data: is_real(f),
    })
}

/// Same degree budget in the exponentially ill-conditioned monomial basis;
/// truncated-SVD least squares provides the implicit regularization.
pub fn poly_ls_monomial(x: &[f64], f: &[Cx], gamma: f64) -> Result<LinearFit> {
    check_sizes(x, f)?;
    if gamma <= 1.0 {
        return Err(Error::InvalidInput("gamma must exceed 1".into()));
    }
    let n = x.len();
    let degree = ((n as f64 / gamma).ceil() as usize).max(1) - 1;
    let mut a = CMatrix::zeros(n, degree + 1);
    for (i, &xi) in x.iter().enumerate() {
        let mut p = 1.0;
        for k in 0..=degree {
            a[(i, k)] = Cx::new(p, 0.0);
            p *= xi;
        }
    }
    Ok(LinearFit {
        basis: Basis::Monomial { degree },
        coefficients: solve(&a, f)?,
        real_data: is_real(f),
    })
}

fn fourier_mode_count(n: usize, gamma: f64) -> Result<usize> {
    let cols = (n as f64 / gamma).floor() as usize;
    if cols < 1 {
        return Err(Error::InvalidInput("too few samples for any Fourier mode".into()));
    }
    let cols = if cols % 2 == 0 { cols - 1 } else { cols };
    Ok((cols - 1) / 2)
}

/// Fourier extension: least-squares fit of exp(i pi k x / t), k = -K..K,
/// with 2K+1 the largest odd count not exceeding n/gamma.
pub fn fourier_ext(x: &[f64], f: &[Cx], t: f64, gamma: f64) -> Result<LinearFit> {
    check_sizes(x, f)?;
    if t <= 1.0 || gamma <= 1.0 {
        return Err(Error::InvalidInput("need t > 1 and gamma > 1".into()));
    }
    let k_max = fourier_mode_count(x.len(), gamma)?;
    let n = x.len();
    let mut a = CMatrix::zeros(n, 2 * k_max + 1);
    for (i, &xi) in x.iter().enumerate() {
        for idx in 0..=2 * k_max {
            let k = idx as f64 - k_max as f64;
            a[(i, idx)] = (Cx::i() * std::f64::consts::PI * k * xi / t).exp();
        }
    }
    Ok(LinearFit {
        basis: Basis::Fourier { t, k_max },
        coefficients: numerics::least_squares_min_norm(&a, f, FOURIER_EXT_RTOL)?,
        real_data: is_real(f),
    })
}

/// Fourier extension with the basis orthonormalized on the sample grid by an
/// Arnoldi (modified Gram-Schmidt) recurrence, restoring a well-conditioned
/// least-squares problem.
pub fn fourier_ext_va(x: &[f64], f: &[Cx], t: f64, gamma: f64) -> Result<LinearFit> {
    check_sizes(x, f)?;
    if t <= 1.0 || gamma <= 1.0 {
        return Err(Error::InvalidInput("need t > 1 and gamma > 1".into()));
    }
    let k_max = fourier_mode_count(x.len(), gamma)?;
    let n = x.len();
    let nf = n as f64;
    let dot = |u: &[Cx], v: &[Cx]| -> Cx {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Cx>() / nf
    };
    let g: Vec<Cx> = x
        .iter()
        .map(|&xi| (Cx::i() * std::f64::consts::PI * xi / t).exp())
        .collect();
    let v0: Vec<Cx> = x
        .iter()
        .map(|&xi| (-Cx::i() * std::f64::consts::PI * k_max as f64 * xi / t).exp())
        .collect();
    let norm0 = dot(&v0, &v0).re.sqrt();
    let mut q: Vec<Vec<Cx>> = vec![v0.iter().map(|z| z / norm0).collect()];
    let mut hess: Vec<Vec<Cx>> = Vec::new();
    for _ in 0..2 * k_max {
        let mut w: Vec<Cx> = g.iter().zip(q.last().unwrap()).map(|(a, b)| a * b).collect();
        let mut col = Vec::with_capacity(q.len() + 1);
        for qi in &q {
            let h = dot(qi, &w);
            for (wk, qk) in w.iter_mut().zip(qi) {
                *wk -= h * qk;
            }
            col.push(h);
        }
        // Second Gram-Schmidt pass; corrections fold into the same
        // Hessenberg entries, so off-grid replay is unaffected.
        for (i, qi) in q.iter().enumerate() {
            let h = dot(qi, &w);
            for (wk, qk) in w.iter_mut().zip(qi) {
                *wk -= h * qk;
            }
            col[i] += h;
        }
        let hn = dot(&w, &w).re.sqrt();
        if hn == 0.0 {
            return Err(Error::Degenerate("Arnoldi breakdown".into()));
        }
        col.push(Cx::new(hn, 0.0));
        q.push(w.iter().map(|z| z / hn).collect());
        hess.push(col);
    }
    // Columns are orthonormal in the grid inner product, so the normal
    // equations are trivial: c_i = <q_i, f>.
    let coefficients: Vec<Cx> = q.iter().map(|qi| dot(qi, f)).collect();
    Ok(LinearFit {
        basis: Basis::ArnoldiFourier { t, k_max, hess, norm0 },
        coefficients,
        real_data: is_real(f),
    })
}

/// Combined basis: Chebyshev polynomials up to degree about sqrt(n) plus a
/// Fourier series on [-1, 1], with a joint column budget of about n/gamma.
pub fn fourier_plus_poly(x: &[f64], f: &[Cx], gamma: f64) -> Result<LinearFit> {
    check_sizes(x, f)?;
    if gamma <= 1.0 {
        return Err(Error::InvalidInput("gamma must exceed 1".into()));
    }
    let n = x.len();
    let total = (n as f64 / gamma).ceil() as usize;
    let p = (n as f64).sqrt().round() as usize;
    if total < p + 2 {
        return Err(Error::InvalidInput(
            "too few samples to allot any Fourier mode".into(),
        ));
    }
    let fcols = total - (p + 1);
    let fcols = if fcols % 2 == 0 { fcols - 1 } else { fcols };
    let k_max = (fcols.max(1) - 1) / 2;
    let cols = p + 1 + 2 * k_max + 1;
    let mut a = CMatrix::zeros(n, cols);
    for (i, &xi) in x.iter().enumerate() {
        let mut t0 = 1.0;
        let mut t1 = xi;
        for k in 0..=p {
            let tk = if k == 0 {
                1.0
            } else if k == 1 {
                xi
            } else {
                let t2 = 2.0 * xi * t1 - t0;
                t0 = t1;
                t1 = t2;
                t2
            };
            a[(i, k)] = Cx::new(tk, 0.0);
        }
        for idx in 0..=2 * k_max {
            let k = idx as f64 - k_max as f64;
            a[(i, p + 1 + idx)] = (Cx::i() * std::f64::consts::PI * k * xi).exp();
        }
    }
    Ok(LinearFit {
        basis: Basis::FourierPlusCheb { p, k_max },
        coefficients: solve(&a, f)?,
        real_data: is_real(f),
    })
}

/// Piecewise cubic interpolant with not-a-knot end conditions.
#[derive(Debug, Clone)]
pub struct SplineFit {
    pub knots: Vec<f64>,
    /// Coefficients (a, b, c, d) of a + b u + c u^2 + d u^3 with u = x - knot_i.
    pub pieces: Vec<[Cx; 4]>,
}

impl SplineFit {
    pub fn eval(&self, x: f64) -> Cx {
        let mut lo = 0usize;
        let mut hi = self.knots.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.knots[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = x - self.knots[lo];
        let [a, b, c, d] = self.pieces[lo];
        ((d * u + c) * u + b) * u + a
    }
}

/// Cubic spline interpolation with not-a-knot conditions at the first and
/// last interior knots.
pub fn cubic_spline(x: &[f64], f: &[Cx]) -> Result<SplineFit> {
    check_sizes(x, f)?;
    let n = x.len();
    if n < 4 {
        return Err(Error::InvalidInput("need at least four samples".into()));
    }
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    // Unknowns: second derivatives M_0..M_{n-1}.
    let mut a = CMatrix::zeros(n, n);
    let mut rhs = nalgebra::DVector::from_element(n, Cx::new(0.0, 0.0));
    // not-a-knot at x_1: (M_1 - M_0)/h_0 = (M_2 - M_1)/h_1
    a[(0, 0)] = Cx::new(-h[1], 0.0);
    a[(0, 1)] = Cx::new(h[0] + h[1], 0.0);
    a[(0, 2)] = Cx::new(-h[0], 0.0);
    for i in 1..n - 1 {
        a[(i, i - 1)] = Cx::new(h[i - 1], 0.0);
        a[(i, i)] = Cx::new(2.0 * (h[i - 1] + h[i]), 0.0);
        a[(i, i + 1)] = Cx::new(h[i], 0.0);
        rhs[i] = ((f[i + 1] - f[i]) / h[i] - (f[i] - f[i - 1]) / h[i - 1]) * 6.0;
    }
    // not-a-knot at x_{n-2}
    a[(n - 1, n - 3)] = Cx::new(-h[n - 2], 0.0);
    a[(n - 1, n - 2)] = Cx::new(h[n - 3] + h[n - 2], 0.0);
    a[(n - 1, n - 1)] = Cx::new(-h[n - 3], 0.0);
    let m = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Degenerate("singular spline system".into()))?;
    let mut pieces = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let hi = h[i];
        let b = (f[i + 1] - f[i]) / hi - (m[i] * 2.0 + m[i + 1]) * hi / 6.0;
        pieces.push([f[i], b, m[i] / 2.0, (m[i + 1] - m[i]) / (6.0 * hi)]);
    }
    Ok(SplineFit {
        knots: x.to_vec(),
        pieces,
    })
}

/// Floater-Hormann barycentric interpolant on equispaced nodes.
#[derive(Debug, Clone)]
pub struct FHInterpolant {
    pub nodes: Vec<f64>,
    pub values: Vec<Cx>,
    pub weights: Vec<f64>,
    pub blending_degree: usize,
}

impl FHInterpolant {
    pub fn eval(&self, x: f64) -> Cx {
        for (j, &t) in self.nodes.iter().enumerate() {
            if x == t {
                return self.values[j];
            }
        }
        let mut num = Cx::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..self.nodes.len() {
            let d = self.weights[j] / (x - self.nodes[j]);
            num += self.values[j] * d;
            den += d;
        }
        num / den
    }
}

/// Floater-Hormann weights for n equispaced nodes and blending degree d:
/// w_k = (-1)^k sum_{i = max(0, k-d)}^{min(k, n-1-d)} C(d, k-i).
pub fn fh_weights(n: usize, d: usize) -> Result<Vec<f64>> {
    if n == 0 || d > n - 1 {
        return Err(Error::InvalidInput("blending degree out of range".into()));
    }
    let binom = |n: usize, k: usize| -> f64 {
        let mut v = 1.0f64;
        for i in 0..k {
            v = v * (n - i) as f64 / (i + 1) as f64;
        }
        v
    };
    let mut w = Vec::with_capacity(n);
    for k in 0..n {
        let lo = k.saturating_sub(d);
        let hi = k.min(n - 1 - d);
        let mut s = 0.0;
        for i in lo..=hi {
            s += binom(d, k - i);
        }
        if k % 2 == 1 {
            s = -s;
        }
        w.push(s);
    }
    Ok(w)
}

/// Floater-Hormann interpolant at a fixed blending degree.
pub fn fh_interpolant(x: &[f64], f: &[Cx], d: usize) -> Result<FHInterpolant> {
    check_sizes(x, f)?;
    Ok(FHInterpolant {
        nodes: x.to_vec(),
        values: f.to_vec(),
        weights: fh_weights(x.len(), d)?,
        blending_degree: d,
    })
}

/// Adaptive blending degree by leave-half-out cross-validation: fit on the
/// even-index points, score the max error at the odd-index points, keep the
/// smallest degree attaining the minimum.
pub fn fh_adaptive(x: &[f64], f: &[Cx]) -> Result<FHInterpolant> {
    check_sizes(x, f)?;
    let n = x.len();
    if n < 4 {
        return Err(Error::InvalidInput("need at least four samples".into()));
    }
    let even_x: Vec<f64> = x.iter().copied().step_by(2).collect();
    let even_f: Vec<Cx> = f.iter().copied().step_by(2).collect();
    let d_cap = (even_x.len() - 1).min(20);
    let mut best = (0usize, f64::INFINITY);
    for d in 0..=d_cap {
        let interp = fh_interpolant(&even_x, &even_f, d)?;
        let mut score = 0.0f64;
        for i in (1..n).step_by(2) {
            score = score.max((interp.eval(x[i]) - f[i]).norm());
        }
        if score < best.1 {
            best = (d, score);
        }
    }
    fh_interpolant(x, f, best.0.min(n - 1))
}

/// The instability growth constant C(gamma) for polynomial least-squares with
/// oversampling ratio gamma:
/// C = [(1+a)^{1+a} (1-a)^{1-a}]^{1/2} with a = 1/gamma.
pub fn growth_constant(gamma: f64) -> Result<f64> {
    if gamma < 1.0 {
        return Err(Error::InvalidInput("gamma must be at least 1".into()));
    }
    let a = 1.0 / gamma;
    Ok(((1.0 + a).powf(1.0 + a) * (1.0 - a).powf(1.0 - a)).sqrt())
}
