//! Test function corpus: five benchmark functions, the amber function with
//! Chebyshev coefficients signed by the bits of pi, the Runge function, and
//! the sum of all six, plus the dense-grid error metric.

use num_complex::Complex64 as Cx;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunctionId {
    FA,
    FB,
    FC,
    FD,
    FE,
    Amber,
    Runge,
    Sum6,
    /// exp(x)/sqrt(1+9x^2), the showcase function of the front-page example.
    ExpSqrt,
}

impl TestFunctionId {
    pub const ALL: [TestFunctionId; 9] = [
        TestFunctionId::FA,
        TestFunctionId::FB,
        TestFunctionId::FC,
        TestFunctionId::FD,
        TestFunctionId::FE,
        TestFunctionId::Amber,
        TestFunctionId::Runge,
        TestFunctionId::Sum6,
        TestFunctionId::ExpSqrt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestFunctionId::FA => "fA",
            TestFunctionId::FB => "fB",
            TestFunctionId::FC => "fC",
            TestFunctionId::FD => "fD",
            TestFunctionId::FE => "fE",
            TestFunctionId::Amber => "amber",
            TestFunctionId::Runge => "runge",
            TestFunctionId::Sum6 => "sum6",
            TestFunctionId::ExpSqrt => "expsqrt",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TestFunctionId::FA => "sqrt(1.21 - x^2)",
            TestFunctionId::FB => "sqrt(0.01 + x^2)",
            TestFunctionId::FC => "tanh(5x)",
            TestFunctionId::FD => "sin(40x)",
            TestFunctionId::FE => "exp(-1/x^2)",
            TestFunctionId::Amber => "amber function",
            TestFunctionId::Runge => "1/(1 + 25x^2)",
            TestFunctionId::Sum6 => "sum of six test functions",
            TestFunctionId::ExpSqrt => "exp(x)/sqrt(1 + 9x^2)",
        }
    }
}

impl std::str::FromStr for TestFunctionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TestFunctionId::ALL
            .iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown function id '{s}'")))
    }
}

/// Evaluate a test function at a complex argument (principal branches).
pub fn eval_test_function(id: TestFunctionId, z: Cx) -> Cx {
    match id {
        TestFunctionId::FA => (Cx::new(1.21, 0.0) - z * z).sqrt(),
        TestFunctionId::FB => (Cx::new(0.01, 0.0) + z * z).sqrt(),
        TestFunctionId::FC => (z * 5.0).tanh(),
        TestFunctionId::FD => (z * 40.0).sin(),
        TestFunctionId::FE => {
            if z.norm() == 0.0 {
                return Cx::new(0.0, 0.0);
            }
            let w = -1.0 / (z * z);
            // exp underflows cleanly for strongly negative real part
            if w.re < -745.0 {
                Cx::new(0.0, 0.0)
            } else {
                w.exp()
            }
        }
        TestFunctionId::Runge => Cx::new(1.0, 0.0) / (Cx::new(1.0, 0.0) + z * z * 25.0),
        TestFunctionId::Amber => amber_eval(z),
        TestFunctionId::Sum6 => {
            eval_test_function(TestFunctionId::FA, z)
                + eval_test_function(TestFunctionId::FB, z)
                + eval_test_function(TestFunctionId::FC, z)
                + eval_test_function(TestFunctionId::FD, z)
                + eval_test_function(TestFunctionId::FE, z)
                + amber_eval(z)
        }
        TestFunctionId::ExpSqrt => z.exp() / (Cx::new(1.0, 0.0) + z * z * 9.0).sqrt(),
    }
}

/// The 54 amber coefficients c_k = +/- 2^{-k}, signs taken from the bits of
/// the 54-bit integer floor(2^52 * pi), most significant bit first.
pub fn amber_coeffs() -> [f64; 54] {
    let bits = (std::f64::consts::PI * (1u64 << 52) as f64).floor() as u64;
    let mut c = [0.0f64; 54];
    for (k, ck) in c.iter_mut().enumerate() {
        let bit = (bits >> (53 - k)) & 1;
        let sign = if bit == 1 { 1.0 } else { -1.0 };
        *ck = sign * 2.0f64.powi(-(k as i32));
    }
    c
}

/// Clenshaw evaluation of the truncated amber Chebyshev series.
pub fn amber_eval(z: Cx) -> Cx {
    let c = amber_coeffs();
    let two_z = z * 2.0;
    let mut b1 = Cx::new(0.0, 0.0);
    let mut b2 = Cx::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        let b0 = two_z * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    b1 - z * b2
}

/// The n equispaced sample points -1 + 2j/(n-1), j = 0..n-1.
pub fn equispaced(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n).map(|j| -1.0 + 2.0 * j as f64 / (n - 1) as f64).collect()
}

/// Max |f(x) - approx(x)| over an equispaced grid on [-1, 1]. Non-finite
/// approximant values yield an infinite error.
pub fn max_dense_error<E>(approx: E, id: TestFunctionId, grid_size: usize) -> Result<f64>
where
    E: Fn(f64) -> Cx,
{
    if grid_size < 2 {
        return Err(Error::InvalidInput("grid size must be at least 2".into()));
    }
    let mut worst = 0.0f64;
    for &x in &equispaced(grid_size) {
        let fx = eval_test_function(id, Cx::new(x, 0.0));
        let rx = approx(x);
        if !rx.re.is_finite() || !rx.im.is_finite() {
            return Ok(f64::INFINITY);
        }
        worst = worst.max((fx - rx).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn r(x: f64) -> Cx {
        Cx::new(x, 0.0)
    }

    #[test]
    fn direct_values() {
        assert!((eval_test_function(TestFunctionId::FA, r(0.0)) - r(1.1)).norm() < 1e-15);
        assert!(eval_test_function(TestFunctionId::FC, r(0.0)).norm() < 1e-15);
        assert!(eval_test_function(TestFunctionId::FD, r(0.0)).norm() < 1e-15);
    }

    #[test]
    fn fb_branch_points() {
        for s in [1.0, -1.0] {
            let z = Cx::new(0.0, 0.1 * s);
            // 0.01 + z² cancels only to roundoff, so the square root sits
            // near sqrt(eps·0.01).
            assert!(eval_test_function(TestFunctionId::FB, z).norm() < 1e-8);
        }
    }

    #[test]
    fn fe_underflow_near_zero() {
        for &x in &[-0.03, -0.01, 0.0, 0.005, 0.03] {
            let v = eval_test_function(TestFunctionId::FE, r(x));
            assert!(v.norm() <= 1e-300, "x={x}");
            assert!(v.re.is_finite());
        }
    }

    #[test]
    fn real_on_real_input() {
        for id in TestFunctionId::ALL {
            for j in 0..41 {
                let x = -1.0 + j as f64 / 20.0;
                let v = eval_test_function(id, r(x));
                assert!(v.im.abs() <= 1e-15, "{id:?} at {x}");
            }
        }
    }

    #[test]
    fn amber_signs_from_pi_bits() {
        // pi = 11.00100100001111110110..._2
        let expect = [1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0, 1.0, -1.0, -1.0];
        let c = amber_coeffs();
        for (k, &s) in expect.iter().enumerate() {
            assert_eq!(c[k].signum(), s, "k={k}");
            assert_eq!(c[k].abs(), 2.0f64.powi(-(k as i32)));
        }
    }

    #[test]
    fn amber_endpoint_sums() {
        let c = amber_coeffs();
        // Oracle: direct summation of the 54 terms; T_k(1) = 1, T_k(-1) = (-1)^k.
        let sum: f64 = c.iter().sum();
        let alt: f64 = c.iter().enumerate().map(|(k, &ck)| if k % 2 == 0 { ck } else { -ck }).sum();
        assert!((amber_eval(r(1.0)).re - sum).abs() < 1e-14);
        assert!((amber_eval(r(-1.0)).re - alt).abs() < 1e-14);
        assert!((sum - (std::f64::consts::PI - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn amber_clenshaw_matches_trig_definition() {
        let c = amber_coeffs();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let direct: f64 = c
                .iter()
                .enumerate()
                .map(|(k, &ck)| ck * (k as f64 * x.acos()).cos())
                .sum();
            assert!((amber_eval(r(x)).re - direct).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn dense_error_exact_approximant() {
        let e = max_dense_error(
            |x| eval_test_function(TestFunctionId::FC, r(x)),
            TestFunctionId::FC,
            1000,
        )
        .unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn dense_error_infinite_on_pole() {
        let e = max_dense_error(
            |x| Cx::new(1.0 / (x - 0.5), 0.0),
            TestFunctionId::FA,
            1001,
        )
        .unwrap();
        assert!(e.is_infinite());
    }

    #[test]
    fn id_parsing_roundtrip() {
        for id in TestFunctionId::ALL {
            assert_eq!(id.name().parse::<TestFunctionId>().unwrap(), id);
        }
        assert!("nope".parse::<TestFunctionId>().is_err());
    }
}
