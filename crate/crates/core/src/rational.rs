//! Rational approximation of sampled data: greedy barycentric fitting,
//! pole/zero/residue extraction, detection of poles inside the sample
//! interval, a partial-fractions least-squares rescue, and conversion to a
//! Chebyshev polynomial.

use num_complex::Complex64 as Cx;

use crate::error::{Error, Result};
use crate::numerics::{self, CMatrix};
use crate::testlib::equispaced;

/// Default threshold on |Im p| below which a pole with real part in [-1, 1]
/// counts as lying inside the interval.
pub const DEFAULT_IM_TOL: f64 = 1e-8;

/// Default degree cap for the greedy fit (degree < 100).
pub const DEFAULT_MMAX: usize = 99;

/// A rational function in barycentric form:
/// r(z) = sum_j w_j f_j / (z - t_j) / sum_j w_j / (z - t_j).
#[derive(Debug, Clone)]
pub struct BarycentricRational {
    pub support_points: Vec<f64>,
    pub support_values: Vec<Cx>,
    pub weights: Vec<Cx>,
}

/// A rational function in partial fractions form:
/// r(z) = c + sum_k a_k / (z - p_k).
#[derive(Debug, Clone)]
pub struct PartialFractionRational {
    pub poles: Vec<Cx>,
    pub residues: Vec<Cx>,
    pub constant: Cx,
}

/// Either representation, as produced by [`fit_equispaced`].
#[derive(Debug, Clone)]
pub enum Approximant {
    Barycentric(BarycentricRational),
    PartialFraction(PartialFractionRational),
}

/// Diagnostics for one fit.
#[derive(Debug, Clone, Copy)]
pub struct FitReport {
    pub degree: usize,
    /// max |F - r| over the sample grid, relative to the sup norm of F.
    pub grid_residual: f64,
    /// True when the fit interpolates all the data: degree = ceil((n-1)/2).
    pub is_interpolant: bool,
    pub n_bad_poles: usize,
    pub rescue_applied: bool,
}

/// A polynomial in the Chebyshev basis with real coefficients, evaluated by
/// backward recurrence.
#[derive(Debug, Clone)]
pub struct ChebyshevPolynomial {
    pub coefficients: Vec<f64>,
}

impl ChebyshevPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Cx) -> Cx {
        let two_z = z * 2.0;
        let mut b1 = Cx::new(0.0, 0.0);
        let mut b2 = Cx::new(0.0, 0.0);
        for &ck in self.coefficients.iter().rev() {
            let b0 = two_z * b1 - b2 + ck;
            b2 = b1;
            b1 = b0;
        }
        b1 - z * b2
    }
}

impl BarycentricRational {
    pub fn degree(&self) -> usize {
        self.support_points.len() - 1
    }

    /// Barycentric evaluation; exact (stored value) at support points.
    pub fn eval(&self, z: Cx) -> Cx {
        if self.support_points.len() == 1 {
            // The quotient is identically the single support value.
            return self.support_values[0];
        }
        for (j, &t) in self.support_points.iter().enumerate() {
            if z == Cx::new(t, 0.0) {
                return self.support_values[j];
            }
        }
        let mut num = Cx::new(0.0, 0.0);
        let mut den = Cx::new(0.0, 0.0);
        for j in 0..self.support_points.len() {
            let d = self.weights[j] / (z - self.support_points[j]);
            num += d * self.support_values[j];
            den += d;
        }
        num / den
    }

    /// All finite poles, from the generalized eigenvalues of the arrowhead
    /// pencil built from the weights and support points.
    pub fn poles(&self) -> Result<Vec<Cx>> {
        let mut p = self.pencil_eig(&self.weights)?;
        if self.is_real() {
            symmetrize_conjugate_pairs(&mut p);
            sort_complex(&mut p);
        }
        Ok(p)
    }

    /// All finite zeros; the same pencil with weights w_j f_j.
    pub fn zeros(&self) -> Result<Vec<Cx>> {
        let wf: Vec<Cx> = self
            .weights
            .iter()
            .zip(&self.support_values)
            .map(|(w, f)| w * f)
            .collect();
        let mut z = self.pencil_eig(&wf)?;
        if self.is_real() {
            symmetrize_conjugate_pairs(&mut z);
            sort_complex(&mut z);
        }
        Ok(z)
    }

    /// True when the quotient is a real rational function: real support
    /// values and weights that are real up to a common phase.
    fn is_real(&self) -> bool {
        let fmax = self.support_values.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if self.support_values.iter().any(|z| z.im.abs() > 1e-12 * fmax.max(1e-300)) {
            return false;
        }
        let wmax = self
            .weights
            .iter()
            .cloned()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap_or(Cx::new(1.0, 0.0));
        if wmax.norm() == 0.0 {
            return false;
        }
        let phase = wmax / wmax.norm();
        self.weights
            .iter()
            .all(|w| (w / phase).im.abs() <= 1e-10 * wmax.norm())
    }

    // The arrowhead pencil for the poles of a barycentric quotient reads
    // diag(t) u + v0·1 = λ u subject to topᵀ u = 0. Projecting onto the
    // complements of span{conj(top)} (right) and span{1} (left) deflates the
    // two structurally infinite eigenvalues exactly, leaving an
    // (m1-1)×(m1-1) pencil whose eigenvalues are the finite poles.
    fn pencil_eig(&self, top: &[Cx]) -> Result<Vec<Cx>> {
        let m1 = self.support_points.len();
        if m1 < 2 {
            return Ok(vec![]);
        }
        let top_conj: Vec<Cx> = top.iter().map(|w| w.conj()).collect();
        let q = householder_complement(&top_conj)?;
        let ones = vec![Cx::new(1.0, 0.0); m1];
        let p = householder_complement(&ones)?.adjoint();
        // diag(t) * q, built by scaling rows.
        let mut tq = q.clone();
        for j in 0..m1 {
            for k in 0..m1 - 1 {
                tq[(j, k)] *= Cx::new(self.support_points[j], 0.0);
            }
        }
        let a1 = &p * tq;
        let b1 = &p * q;
        numerics::generalized_eig(&a1, &b1)
    }

    /// Residues at the given poles, via the analytic derivative of the
    /// barycentric denominator: res = N(p) / D'(p).
    pub fn residues(&self, poles: &[Cx]) -> Result<Vec<Cx>> {
        let mut out = Vec::with_capacity(poles.len());
        for &p in poles {
            let mut num = Cx::new(0.0, 0.0);
            let mut dden = Cx::new(0.0, 0.0);
            for j in 0..self.support_points.len() {
                let d = p - self.support_points[j];
                if d.norm() == 0.0 {
                    return Err(Error::Degenerate(
                        "pole coincides with a support point".into(),
                    ));
                }
                num += self.weights[j] * self.support_values[j] / d;
                dden -= self.weights[j] / (d * d);
            }
            out.push(num / dden);
        }
        Ok(out)
    }
}

fn sort_complex(vals: &mut [Cx]) {
    vals.sort_by(|p, q| {
        p.re.partial_cmp(&q.re)
            .unwrap()
            .then(p.im.partial_cmp(&q.im).unwrap())
    });
}

/// A real rational function has nonreal poles and zeros in conjugate pairs;
/// the eigensolver loses exact pairing for ill-conditioned far-off pairs.
/// Re-impose the structure by averaging matched pairs.
fn symmetrize_conjugate_pairs(vals: &mut [Cx]) {
    let n = vals.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || vals[i].im <= 0.0 {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if used[j] || j == i || vals[j].im >= 0.0 {
                continue;
            }
            let d = (vals[j].conj() - vals[i]).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        if let Some((j, d)) = best {
            if d <= 1e-2 * (1.0 + vals[i].norm()) {
                let avg = (vals[i] + vals[j].conj()) * Cx::new(0.5, 0.0);
                vals[i] = avg;
                vals[j] = avg.conj();
                used[i] = true;
                used[j] = true;
            }
        }
    }
}

/// Columns 2..n of the Householder reflector sending `c` to a multiple of
/// e1; they form an orthonormal basis of the orthogonal complement of `c`.
fn householder_complement(c: &[Cx]) -> Result<CMatrix> {
    let n = c.len();
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Degenerate("zero weight vector".into()));
    }
    let phase = if c[0].norm() > 0.0 {
        c[0] / c[0].norm()
    } else {
        Cx::new(1.0, 0.0)
    };
    let mut v: Vec<Cx> = c.to_vec();
    v[0] += phase * norm;
    let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut q = CMatrix::zeros(n, n - 1);
    for col in 1..n {
        for row in 0..n {
            let mut h = if row == col {
                Cx::new(1.0, 0.0)
            } else {
                Cx::new(0.0, 0.0)
            };
            h -= v[row] * v[col].conj() * Cx::new(2.0 / vn2, 0.0);
            q[(row, col - 1)] = h;
        }
    }
    Ok(q)
}

impl PartialFractionRational {
    pub fn eval(&self, z: Cx) -> Cx {
        let mut v = self.constant;
        for (p, a) in self.poles.iter().zip(&self.residues) {
            v += a / (z - p);
        }
        v
    }
}

impl Approximant {
    pub fn eval(&self, z: Cx) -> Cx {
        match self {
            Approximant::Barycentric(r) => r.eval(z),
            Approximant::PartialFraction(r) => r.eval(z),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Approximant::Barycentric(r) => r.degree(),
            Approximant::PartialFraction(r) => r.poles.len(),
        }
    }

    /// Poles with residues. For the partial fractions form these are stored;
    /// for the barycentric form they are computed from the pencil.
    pub fn poles_and_residues(&self) -> Result<Vec<(Cx, Cx)>> {
        match self {
            Approximant::Barycentric(r) => {
                let p = r.poles()?;
                let res = r.residues(&p)?;
                Ok(p.into_iter().zip(res).collect())
            }
            Approximant::PartialFraction(r) => {
                Ok(r.poles.iter().copied().zip(r.residues.iter().copied()).collect())
            }
        }
    }
}

/// Elementwise evaluation on a set of complex points. Evaluation exactly at a
/// pole of a partial fractions approximant yields an infinite value.
pub fn eval_on_grid(r: &Approximant, points: &[Cx]) -> Vec<Cx> {
    points.iter().map(|&z| r.eval(z)).collect()
}

/// Greedy barycentric rational fit of samples F at points X.
///
/// Starting from the constant mean(F), each step promotes the sample with the
/// largest residual to a support point and recomputes the weights as the
/// right singular vector of the smallest singular value of the Loewner
/// matrix over the remaining rows. Stops when the grid residual drops below
/// tol * ||F||_inf or the degree cap is reached.
pub fn aaa_fit(
    x: &[f64],
    f: &[Cx],
    tol: f64,
    mmax: usize,
) -> Result<(BarycentricRational, FitReport)> {
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    if f.len() != n {
        return Err(Error::SizeMismatch("sample and value counts differ".into()));
    }
    if x.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::DuplicatePoints);
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidInput("tol must lie in (0, 1)".into()));
    }
    if mmax < 1 {
        return Err(Error::InvalidInput("mmax must be at least 1".into()));
    }
    if f.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }

    let fnorm = f.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let mean = f.iter().sum::<Cx>() / n as f64;

    let mut support: Vec<usize> = Vec::new();
    let mut in_support = vec![false; n];
    let mut weights: Vec<Cx> = Vec::new();
    let mut r_vals: Vec<Cx> = vec![mean; n];

    let argmax_residual = |r_vals: &[Cx], in_support: &[bool]| -> (usize, f64) {
        let mut best = (0usize, -1.0f64);
        for i in 0..n {
            if in_support[i] {
                continue;
            }
            let e = (f[i] - r_vals[i]).norm();
            if e > best.1 {
                best = (i, e);
            }
        }
        best
    };

    loop {
        let (j, err) = argmax_residual(&r_vals, &in_support);
        if err <= tol * fnorm && !support.is_empty() {
            break;
        }
        if support.len() == mmax + 1 || support.len() + 1 == n {
            // Degree cap reached, or adding another support point would leave
            // no rows for the Loewner matrix.
            if support.is_empty() {
                // n = 2 pathological case: fall through to a degree-0 fit below.
            } else {
                break;
            }
        }
        support.push(j);
        in_support[j] = true;
        if err <= tol * fnorm {
            // Data already matched by the constant mean: degree-0 fit.
            weights = vec![Cx::new(1.0, 0.0)];
        } else {
            weights = loewner_weights(x, f, &support, &in_support)?;
        }
        // Update r on the grid.
        for i in 0..n {
            if in_support[i] {
                r_vals[i] = f[i];
            } else if support.len() == 1 {
                // Degree 0: the quotient is identically the support value.
                r_vals[i] = f[support[0]];
            } else {
                let mut num = Cx::new(0.0, 0.0);
                let mut den = Cx::new(0.0, 0.0);
                for (jj, &sj) in support.iter().enumerate() {
                    let d = weights[jj] / (x[i] - x[sj]);
                    num += d * f[sj];
                    den += d;
                }
                r_vals[i] = num / den;
            }
        }
        if support.len() == 1 && err <= tol * fnorm {
            break;
        }
    }

    let (_, err) = argmax_residual(&r_vals, &in_support);
    let degree = support.len() - 1;
    let rational = BarycentricRational {
        support_points: support.iter().map(|&j| x[j]).collect(),
        support_values: support.iter().map(|&j| f[j]).collect(),
        weights,
    };
    let report = FitReport {
        degree,
        grid_residual: if fnorm > 0.0 { err / fnorm } else { 0.0 },
        is_interpolant: degree == (n - 1).div_ceil(2),
        n_bad_poles: 0,
        rescue_applied: false,
    };
    Ok((rational, report))
}

fn loewner_weights(x: &[f64], f: &[Cx], support: &[usize], in_support: &[bool]) -> Result<Vec<Cx>> {
    let cols = support.len();
    let rows: Vec<usize> = (0..x.len()).filter(|&i| !in_support[i]).collect();
    // Pad with zero rows when underdetermined so the decomposition exposes
    // the null space among the right singular vectors.
    let nr = rows.len().max(cols);
    let mut a = CMatrix::zeros(nr, cols);
    for (ri, &i) in rows.iter().enumerate() {
        for (ci, &j) in support.iter().enumerate() {
            a[(ri, ci)] = (f[i] - f[j]) / (x[i] - x[j]);
        }
    }
    let dec = numerics::svd(&a)?;
    let k = dec.singular_values.len() - 1;
    Ok((0..cols).map(|j| dec.v_h[(k, j)].conj()).collect())
}

/// Indices of poles inside the interval: Re p in [-1, 1] and |Im p| <= im_tol.
pub fn detect_bad_poles(poles: &[Cx], im_tol: f64) -> Vec<usize> {
    poles
        .iter()
        .enumerate()
        .filter(|(_, p)| p.re >= -1.0 && p.re <= 1.0 && p.im.abs() <= im_tol)
        .map(|(k, _)| k)
        .collect()
}

/// Linear least-squares refit in the partial fractions basis of the retained
/// poles plus a constant term.
///
/// For real data, complex poles are handled as conjugate pairs through the
/// real basis {Re 1/(x-p), Im 1/(x-p)}, so the result is real on the real
/// axis. An empty pole set degenerates to the constant mean(F).
pub fn aaa_ls(x: &[f64], f: &[Cx], good_poles: &[Cx]) -> Result<PartialFractionRational> {
    let n = x.len();
    if f.len() != n || n == 0 {
        return Err(Error::SizeMismatch("sample and value counts differ".into()));
    }
    let fnorm = f.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if good_poles.is_empty() {
        let mean = f.iter().sum::<Cx>() / n as f64;
        return Ok(PartialFractionRational {
            poles: vec![],
            residues: vec![],
            constant: mean,
        });
    }
    let real_data = f.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max) <= 1e-13 * fnorm;

    if !real_data {
        let mut a = CMatrix::zeros(n, good_poles.len() + 1);
        for i in 0..n {
            a[(i, 0)] = Cx::new(1.0, 0.0);
            for (k, &p) in good_poles.iter().enumerate() {
                a[(i, k + 1)] = 1.0 / (Cx::new(x[i], 0.0) - p);
            }
        }
        let sol = numerics::least_squares_min_norm(&a, f, 1e-14)?;
        return Ok(PartialFractionRational {
            poles: good_poles.to_vec(),
            residues: sol[1..].to_vec(),
            constant: sol[0],
        });
    }

    // Real data: split poles into (numerically) real ones and representatives
    // of conjugate pairs with positive imaginary part.
    let pair_tol = |p: &Cx| 1e-12 * (1.0 + p.norm());
    let mut real_poles: Vec<f64> = Vec::new();
    let mut reps: Vec<Cx> = Vec::new();
    for &p in good_poles {
        if p.im.abs() <= pair_tol(&p) {
            real_poles.push(p.re);
        } else if p.im > 0.0 {
            reps.push(p);
        } else if !reps.iter().any(|q| (q - p.conj()).norm() <= 1e-6 * (1.0 + p.norm())) {
            reps.push(p.conj());
        }
    }
    let cols = 1 + real_poles.len() + 2 * reps.len();
    let mut a = CMatrix::zeros(n, cols);
    for i in 0..n {
        a[(i, 0)] = Cx::new(1.0, 0.0);
        let mut c = 1;
        for &p in &real_poles {
            a[(i, c)] = Cx::new(1.0 / (x[i] - p), 0.0);
            c += 1;
        }
        for &p in &reps {
            let zeta = 1.0 / (Cx::new(x[i], 0.0) - p);
            a[(i, c)] = Cx::new(zeta.re, 0.0);
            a[(i, c + 1)] = Cx::new(zeta.im, 0.0);
            c += 2;
        }
    }
    let rhs: Vec<Cx> = f.iter().map(|z| Cx::new(z.re, 0.0)).collect();
    let sol = numerics::least_squares_min_norm(&a, &rhs, 1e-14)?;
    let mut poles = Vec::new();
    let mut residues = Vec::new();
    let mut c = 1;
    for &p in &real_poles {
        poles.push(Cx::new(p, 0.0));
        residues.push(Cx::new(sol[c].re, 0.0));
        c += 1;
    }
    for &p in &reps {
        // a_re * Re(zeta) + a_im * Im(zeta) = Re((a_re - i a_im) * zeta);
        // split the coefficient over the conjugate pair.
        let beta = Cx::new(sol[c].re, -sol[c + 1].re) * 0.5;
        poles.push(p);
        residues.push(beta);
        poles.push(p.conj());
        residues.push(beta.conj());
        c += 2;
    }
    Ok(PartialFractionRational {
        poles,
        residues,
        constant: Cx::new(sol[0].re, 0.0),
    })
}

/// Fit samples assumed to lie at the equispaced points -1 + 2j/(n-1).
///
/// Runs the greedy fit; if the result has poles inside [-1, 1] these are
/// discarded and a partial fractions least-squares refit over the retained
/// poles is returned instead.
pub fn fit_equispaced(f: &[Cx], tol: f64) -> Result<(Approximant, FitReport)> {
    fit_equispaced_with(f, tol, DEFAULT_IM_TOL, DEFAULT_MMAX)
}

pub fn fit_equispaced_with(
    f: &[Cx],
    tol: f64,
    im_tol: f64,
    mmax: usize,
) -> Result<(Approximant, FitReport)> {
    if f.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    let x = equispaced(f.len());
    let (bary, mut report) = aaa_fit(&x, f, tol, mmax)?;
    let poles = bary.poles()?;
    let bad = detect_bad_poles(&poles, im_tol);
    if bad.is_empty() {
        return Ok((Approximant::Barycentric(bary), report));
    }
    let good: Vec<Cx> = poles
        .iter()
        .enumerate()
        .filter(|(k, _)| !bad.contains(k))
        .map(|(_, &p)| p)
        .collect();
    let pf = aaa_ls(&x, f, &good)?;
    let fnorm = f.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let resid = x
        .iter()
        .zip(f)
        .map(|(&xi, &fi)| (pf.eval(Cx::new(xi, 0.0)) - fi).norm())
        .fold(0.0f64, f64::max);
    report.degree = pf.poles.len();
    report.grid_residual = if fnorm > 0.0 { resid / fnorm } else { 0.0 };
    report.is_interpolant = false;
    report.n_bad_poles = bad.len();
    report.rescue_applied = true;
    Ok((Approximant::PartialFraction(pf), report))
}

/// Convert an approximant (pole-free on [-1, 1]) to a Chebyshev polynomial by
/// adaptive degree doubling: sample on Chebyshev grids of size 2^k + 1 until
/// the upper half of the coefficients falls below tol * max|c|, then truncate
/// the trailing plateau.
pub fn to_chebyshev(r: &Approximant, tol: f64) -> Result<ChebyshevPolynomial> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidInput("tol must lie in (0, 1)".into()));
    }
    for k in 3..=16u32 {
        let m = 1usize << k;
        let pts = numerics::cheb_points(m);
        let vals: Vec<Cx> = pts.iter().map(|&x| r.eval(Cx::new(x, 0.0))).collect();
        if vals.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Degenerate("approximant has a pole on [-1, 1]".into()));
        }
        let coef = numerics::cheb_transform(&vals)?;
        let cmax = coef.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if cmax == 0.0 {
            return Ok(ChebyshevPolynomial {
                coefficients: vec![0.0],
            });
        }
        let cutoff = tol * cmax;
        let d = coef
            .iter()
            .rposition(|z| z.norm() > cutoff)
            .unwrap_or(0);
        if d + 1 <= (m + 1) / 2 {
            return Ok(ChebyshevPolynomial {
                coefficients: coef[..=d].iter().map(|z| z.re).collect(),
            });
        }
    }
    Err(Error::NotResolved(1 << 16))
}

// ---------------------------------------------------------------------------
// Plain-text serialization
// ---------------------------------------------------------------------------

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

impl Approximant {
    /// Serialize to the plain-text exchange format: a header with variant tag,
    /// degree, and tolerance, then one record per support point or pole.
    /// Values survive a round trip exactly (17 significant digits).
    pub fn to_text(&self, tol: f64) -> String {
        let mut s = String::new();
        match self {
            Approximant::Barycentric(r) => {
                s.push_str(&format!(
                    "barycentric degree={} tol={}\n",
                    r.degree(),
                    fmt17(tol)
                ));
                for j in 0..r.support_points.len() {
                    s.push_str(&format!(
                        "{} {} {} {} {}\n",
                        fmt17(r.support_points[j]),
                        fmt17(r.support_values[j].re),
                        fmt17(r.support_values[j].im),
                        fmt17(r.weights[j].re),
                        fmt17(r.weights[j].im),
                    ));
                }
            }
            Approximant::PartialFraction(r) => {
                s.push_str(&format!(
                    "partialfraction degree={} tol={}\n",
                    r.poles.len(),
                    fmt17(tol)
                ));
                s.push_str(&format!(
                    "constant {} {}\n",
                    fmt17(r.constant.re),
                    fmt17(r.constant.im)
                ));
                for (p, a) in r.poles.iter().zip(&r.residues) {
                    s.push_str(&format!(
                        "{} {} {} {}\n",
                        fmt17(p.re),
                        fmt17(p.im),
                        fmt17(a.re),
                        fmt17(a.im)
                    ));
                }
            }
        }
        s
    }

    /// Parse the format written by [`Approximant::to_text`]. Returns the
    /// approximant and the tolerance recorded in the header.
    pub fn from_text(s: &str) -> Result<(Approximant, f64)> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut parts = header.split_whitespace();
        let tag = parts.next().unwrap_or("");
        let mut degree = None;
        let mut tol = None;
        for p in parts {
            if let Some(v) = p.strip_prefix("degree=") {
                degree = Some(
                    v.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad degree: {e}")))?,
                );
            } else if let Some(v) = p.strip_prefix("tol=") {
                tol = Some(
                    v.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad tol: {e}")))?,
                );
            }
        }
        let degree = degree.ok_or_else(|| Error::Parse("missing degree".into()))?;
        let tol = tol.ok_or_else(|| Error::Parse("missing tol".into()))?;
        let nums = |line: &str| -> Result<Vec<f64>> {
            line.split_whitespace()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad number '{t}': {e}")))
                })
                .collect()
        };
        match tag {
            "barycentric" => {
                let mut t = Vec::new();
                let mut fv = Vec::new();
                let mut w = Vec::new();
                for line in lines {
                    let v = nums(line)?;
                    if v.len() != 5 {
                        return Err(Error::Parse("expected 5 fields per record".into()));
                    }
                    t.push(v[0]);
                    fv.push(Cx::new(v[1], v[2]));
                    w.push(Cx::new(v[3], v[4]));
                }
                if t.len() != degree + 1 {
                    return Err(Error::Parse("record count does not match degree".into()));
                }
                Ok((
                    Approximant::Barycentric(BarycentricRational {
                        support_points: t,
                        support_values: fv,
                        weights: w,
                    }),
                    tol,
                ))
            }
            "partialfraction" => {
                let cline = lines
                    .next()
                    .ok_or_else(|| Error::Parse("missing constant record".into()))?;
                let ctoks: Vec<&str> = cline.split_whitespace().collect();
                if ctoks.len() != 3 || ctoks[0] != "constant" {
                    return Err(Error::Parse("expected constant record".into()));
                }
                let cre: f64 = ctoks[1]
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad constant: {e}")))?;
                let cim: f64 = ctoks[2]
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad constant: {e}")))?;
                let mut p = Vec::new();
                let mut a = Vec::new();
                for line in lines {
                    let v = nums(line)?;
                    if v.len() != 4 {
                        return Err(Error::Parse("expected 4 fields per record".into()));
                    }
                    p.push(Cx::new(v[0], v[1]));
                    a.push(Cx::new(v[2], v[3]));
                }
                if p.len() != degree {
                    return Err(Error::Parse("record count does not match degree".into()));
                }
                Ok((
                    Approximant::PartialFraction(PartialFractionRational {
                        poles: p,
                        residues: a,
                        constant: Cx::new(cre, cim),
                    }),
                    tol,
                ))
            }
            other => Err(Error::Parse(format!("unknown variant tag '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testlib::{eval_test_function, TestFunctionId};

    fn c(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn sample(id: TestFunctionId, n: usize) -> (Vec<f64>, Vec<Cx>) {
        let x = equispaced(n);
        let f = x.iter().map(|&xi| eval_test_function(id, c(xi, 0.0))).collect();
        (x, f)
    }

    #[test]
    fn aaa_constant_data() {
        let x = equispaced(11);
        let f = vec![c(7.0, 0.0); 11];
        let (r, rep) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        assert_eq!(rep.degree, 0);
        assert_eq!(rep.grid_residual, 0.0);
        assert!((r.eval(c(0.3, 0.0)) - c(7.0, 0.0)).norm() < 1e-14);
        assert!(!rep.rescue_applied);
    }

    #[test]
    fn aaa_showcase_function() {
        let (x, f) = sample(TestFunctionId::ExpSqrt, 50);
        let (r, rep) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        assert!((16..=18).contains(&rep.degree), "degree = {}", rep.degree);
        assert!(rep.grid_residual <= 1e-12, "resid = {:.3e}", rep.grid_residual);
        // dense-grid error within a factor a few of the expected 9.6e-14
        let mut worst = 0.0f64;
        for &xi in &equispaced(1000) {
            let e = (r.eval(c(xi, 0.0)) - eval_test_function(TestFunctionId::ExpSqrt, c(xi, 0.0)))
                .norm();
            worst = worst.max(e);
        }
        assert!(worst <= 5e-13, "dense error = {worst:.3e}");
    }

    #[test]
    fn aaa_runge_low_degree() {
        let (x, f) = sample(TestFunctionId::Runge, 20);
        let (r, rep) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        assert_eq!(rep.degree, 2);
        for &xi in &equispaced(500) {
            let e = (r.eval(c(xi, 0.0)) - eval_test_function(TestFunctionId::Runge, c(xi, 0.0)))
                .norm();
            assert!(e < 1e-12);
        }
    }

    #[test]
    fn aaa_rejects_duplicates() {
        let x = vec![0.0, 0.0, 1.0];
        let f = vec![c(1.0, 0.0); 3];
        assert!(aaa_fit(&x, &f, 1e-13, 99).is_err());
    }

    #[test]
    fn bary_eval_support_short_circuit() {
        let (x, f) = sample(TestFunctionId::FB, 30);
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        for j in 0..r.support_points.len() {
            let v = r.eval(c(r.support_points[j], 0.0));
            assert_eq!(v, r.support_values[j]); // bit-identical
        }
    }

    #[test]
    fn poles_of_runge_fit() {
        let (x, f) = sample(TestFunctionId::Runge, 20);
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let mut poles = r.poles().unwrap();
        assert_eq!(poles.len(), 2);
        poles.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((poles[0] - c(0.0, -0.2)).norm() < 1e-10);
        assert!((poles[1] - c(0.0, 0.2)).norm() < 1e-10);
    }

    #[test]
    fn poles_of_tanh_fit() {
        let (x, f) = sample(TestFunctionId::FC, 100);
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let poles = r.poles().unwrap();
        let target = std::f64::consts::PI / 10.0;
        let nearest = poles
            .iter()
            .map(|p| (p - c(0.0, target)).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-6, "nearest = {nearest:.3e}");
        let nearest_conj = poles
            .iter()
            .map(|p| (p - c(0.0, -target)).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest_conj < 1e-6);
    }

    #[test]
    fn degree_zero_has_no_poles() {
        let x = equispaced(5);
        let f = vec![c(3.0, 0.0); 5];
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        assert!(r.poles().unwrap().is_empty());
        assert!(r.zeros().unwrap().is_empty());
    }

    #[test]
    fn residue_of_runge_pole() {
        let (x, f) = sample(TestFunctionId::Runge, 20);
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let poles = r.poles().unwrap();
        // Partial fractions oracle: 1/(1+25x^2) has residue -i/10 at +i/5.
        for &p in &poles {
            let res = r.residues(&[p]).unwrap()[0];
            let expect = if p.im > 0.0 { c(0.0, -0.1) } else { c(0.0, 0.1) };
            assert!((res - expect).norm() < 1e-8, "res = {res}");
        }
    }

    #[test]
    fn residue_of_hand_built_reciprocal() {
        // r(x) = 1/x in barycentric form: supports {-1, 1}, values {-1, 1},
        // weights {1, 1} (the denominator vanishes at 0).
        let r = BarycentricRational {
            support_points: vec![-1.0, 1.0],
            support_values: vec![c(-1.0, 0.0), c(1.0, 0.0)],
            weights: vec![c(1.0, 0.0), c(1.0, 0.0)],
        };
        let poles = r.poles().unwrap();
        assert_eq!(poles.len(), 1);
        assert!(poles[0].norm() < 1e-12);
        let res = r.residues(&poles).unwrap();
        assert!((res[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn weight_scale_invariance() {
        let (x, f) = sample(TestFunctionId::FA, 40);
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let mut scaled = r.clone();
        for w in &mut scaled.weights {
            *w *= c(2.0, 0.0);
        }
        let p1 = r.poles().unwrap();
        let p2 = scaled.poles().unwrap();
        for (a, b) in p1.iter().zip(&p2) {
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
        }
        let res1 = r.residues(&p1).unwrap();
        let res2 = scaled.residues(&p1).unwrap();
        for (a, b) in res1.iter().zip(&res2) {
            assert!((a - b).norm() < 1e-13 * (1.0 + a.norm()));
        }
        for &xi in &[-0.77, -0.1, 0.33, 0.92] {
            let d = (r.eval(c(xi, 0.0)) - scaled.eval(c(xi, 0.0))).norm();
            assert!(d <= 1e-13 * f.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }

    #[test]
    fn zeros_of_odd_function() {
        let x = equispaced(5);
        let f: Vec<Cx> = x.iter().map(|&xi| c(xi, 0.0)).collect();
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let zeros = r.zeros().unwrap();
        let nearest = zeros.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-12, "zeros = {zeros:?}");
    }

    #[test]
    fn zeros_of_parabola() {
        let x = equispaced(9);
        let f: Vec<Cx> = x.iter().map(|&xi| c(1.0 - xi * xi, 0.0)).collect();
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let zeros = r.zeros().unwrap();
        for target in [c(1.0, 0.0), c(-1.0, 0.0)] {
            let nearest = zeros.iter().map(|z| (z - target).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-8, "zeros = {zeros:?}");
        }
    }

    #[test]
    fn bad_pole_detection() {
        assert!(detect_bad_poles(&[c(0.0, 0.2), c(0.0, -0.2)], 1e-8).is_empty());
        assert_eq!(detect_bad_poles(&[c(0.5, 1e-12)], 1e-8), vec![0]);
        assert!(detect_bad_poles(&[c(1.5, 0.0)], 1e-8).is_empty());
    }

    #[test]
    fn aaa_ls_recovers_synthetic_partial_fraction() {
        // r(x) = 3 + 1/(x-2i) + 1/(x+2i), real on the real axis.
        let x = equispaced(50);
        let f: Vec<Cx> = x
            .iter()
            .map(|&xi| {
                let z = c(xi, 0.0);
                c(3.0, 0.0) + 1.0 / (z - c(0.0, 2.0)) + 1.0 / (z - c(0.0, -2.0))
            })
            .collect();
        let pf = aaa_ls(&x, &f, &[c(0.0, 2.0), c(0.0, -2.0)]).unwrap();
        assert!((pf.constant - c(3.0, 0.0)).norm() < 1e-10);
        for (p, a) in pf.poles.iter().zip(&pf.residues) {
            assert!(p.im.abs() > 1.0);
            assert!((a - c(1.0, 0.0)).norm() < 1e-10);
        }
        // real output on real input
        for &xi in &[-0.9, 0.1, 0.7] {
            assert!(pf.eval(c(xi, 0.0)).im.abs() < 1e-13);
        }
    }

    #[test]
    fn aaa_ls_empty_poles_gives_mean() {
        let x = equispaced(10);
        let f = vec![c(4.0, 0.0); 10];
        let pf = aaa_ls(&x, &f, &[]).unwrap();
        assert!((pf.constant - c(4.0, 0.0)).norm() < 1e-14);
        assert!(pf.poles.is_empty());
    }

    #[test]
    fn fit_equispaced_showcase() {
        let (_, f) = sample(TestFunctionId::ExpSqrt, 50);
        let (approx, rep) = fit_equispaced(&f, 1e-13).unwrap();
        assert!(matches!(approx, Approximant::Barycentric(_)));
        assert_eq!(rep.degree, 17);
        assert!(!rep.rescue_applied);
    }

    #[test]
    fn fit_equispaced_constant() {
        let f = vec![c(2.5, 0.0); 12];
        let (approx, rep) = fit_equispaced(&f, 1e-13).unwrap();
        assert_eq!(rep.degree, 0);
        assert!(!rep.rescue_applied);
        assert!((approx.eval(c(0.4, 0.0)) - c(2.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn fit_never_returns_bad_poles() {
        for id in [TestFunctionId::FA, TestFunctionId::FB, TestFunctionId::Sum6] {
            for n in [20, 60, 120] {
                let (_, f) = sample(id, n);
                let (approx, _) = fit_equispaced(&f, 1e-13).unwrap();
                let poles: Vec<Cx> =
                    approx.poles_and_residues().unwrap().iter().map(|(p, _)| *p).collect();
                assert!(
                    detect_bad_poles(&poles, DEFAULT_IM_TOL).is_empty(),
                    "{id:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn interpolant_flag_small_n() {
        let (x, f) = sample(TestFunctionId::FA, 8);
        let (_, rep) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        if rep.is_interpolant {
            assert_eq!(rep.degree, 4); // ceil((8-1)/2)
        }
    }

    #[test]
    fn conjugate_pole_symmetry() {
        let (x, f) = sample(TestFunctionId::FB, 80);
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let mut poles = r.poles().unwrap();
        poles.sort_by(|a, b| {
            a.re.partial_cmp(&b.re).unwrap().then(a.im.abs().partial_cmp(&b.im.abs()).unwrap())
        });
        for p in &poles {
            if p.im.abs() < 1e-10 {
                continue;
            }
            let partner = poles
                .iter()
                .map(|q| (q - p.conj()).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(partner < 1e-10 * (1.0 + p.norm()), "pole {p} unpaired");
        }
    }

    #[test]
    fn real_evaluation_of_real_fit() {
        let (x, f) = sample(TestFunctionId::FA, 50);
        let (r, _) = aaa_fit(&x, &f, 1e-13, 99).unwrap();
        let fnorm = f.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        for &xi in &equispaced(300) {
            assert!(r.eval(c(xi, 0.0)).im.abs() <= 1e-13 * fnorm);
        }
    }

    #[test]
    fn to_chebyshev_of_showcase_fit() {
        let (_, f) = sample(TestFunctionId::ExpSqrt, 50);
        let (approx, _) = fit_equispaced(&f, 1e-13).unwrap();
        let p = to_chebyshev(&approx, 1e-15).unwrap();
        assert!(
            (96..=112).contains(&p.degree()),
            "degree = {}",
            p.degree()
        );
        let mut worst = 0.0f64;
        for &xi in &equispaced(1000) {
            let e = (p.eval(c(xi, 0.0))
                - eval_test_function(TestFunctionId::ExpSqrt, c(xi, 0.0)))
            .norm();
            worst = worst.max(e);
        }
        assert!(worst <= 1e-12, "dense error = {worst:.3e}");
    }

    #[test]
    fn to_chebyshev_constant() {
        let f = vec![c(2.0, 0.0); 10];
        let (approx, _) = fit_equispaced(&f, 1e-13).unwrap();
        let p = to_chebyshev(&approx, 1e-13).unwrap();
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn to_chebyshev_recovers_basis_function() {
        // Data from T_5(x): coefficients should be the unit vector at k = 5.
        let x = equispaced(40);
        let f: Vec<Cx> = x
            .iter()
            .map(|&xi| c((5.0 * xi.acos()).cos(), 0.0))
            .collect();
        let (approx, _) = fit_equispaced(&f, 1e-13).unwrap();
        let p = to_chebyshev(&approx, 1e-10).unwrap();
        assert_eq!(p.degree(), 5);
        for (k, &ck) in p.coefficients.iter().enumerate() {
            let expect = if k == 5 { 1.0 } else { 0.0 };
            assert!((ck - expect).abs() < 1e-10, "k={k} c={ck}");
        }
    }

    #[test]
    fn eval_on_grid_basics() {
        let (x, f) = sample(TestFunctionId::FA, 30);
        let (approx, _) = fit_equispaced(&f, 1e-13).unwrap();
        assert!(eval_on_grid(&approx, &[]).is_empty());
        if let Approximant::Barycentric(r) = &approx {
            let pts = vec![c(r.support_points[1], 0.0)];
            let v = eval_on_grid(&approx, &pts);
            assert_eq!(v[0], r.support_values[1]);
        }
        let _ = x;
    }

    #[test]
    fn eval_at_partial_fraction_pole_is_infinite() {
        let pf = PartialFractionRational {
            poles: vec![c(0.0, 2.0)],
            residues: vec![c(1.0, 0.0)],
            constant: c(0.0, 0.0),
        };
        let v = pf.eval(c(0.0, 2.0));
        assert!(!v.re.is_finite() || !v.im.is_finite());
    }

    #[test]
    fn serialization_roundtrip_barycentric() {
        let (_, f) = sample(TestFunctionId::FB, 40);
        let (approx, _) = fit_equispaced(&f, 1e-13).unwrap();
        let text = approx.to_text(1e-13);
        let (back, tol) = Approximant::from_text(&text).unwrap();
        assert_eq!(tol, 1e-13);
        match (&approx, &back) {
            (Approximant::Barycentric(a), Approximant::Barycentric(b)) => {
                assert_eq!(a.support_points, b.support_points);
                assert_eq!(a.support_values, b.support_values);
                assert_eq!(a.weights, b.weights);
            }
            _ => panic!("variant changed in round trip"),
        }
    }

    #[test]
    fn serialization_roundtrip_partial_fraction() {
        let pf = PartialFractionRational {
            poles: vec![c(0.31, 2.17), c(0.31, -2.17)],
            residues: vec![c(1.25, -0.5), c(1.25, 0.5)],
            constant: c(0.125, 0.0),
        };
        let approx = Approximant::PartialFraction(pf);
        let text = approx.to_text(1e-11);
        let (back, tol) = Approximant::from_text(&text).unwrap();
        assert_eq!(tol, 1e-11);
        match (&approx, &back) {
            (Approximant::PartialFraction(a), Approximant::PartialFraction(b)) => {
                assert_eq!(a.poles, b.poles);
                assert_eq!(a.residues, b.residues);
                assert_eq!(a.constant, b.constant);
            }
            _ => panic!("variant changed in round trip"),
        }
    }
}
