//! Truncated Maclaurin series with complex coefficients.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0..=c_N`. Binary operations
//! between series of different orders truncate to the smaller order.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 128;

/// Inversion is refused when `|c_0|` falls below this.
pub const RECIPROCAL_FLOOR: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Plus or minus: selects `h + e^{-2iγ} g` versus `h - e^{-2iγ} g`, and the
/// matching variant of the convex target in [`pommerenke_f`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Wraps `c_0..=c_N`.
    ///
    /// # Panics
    /// If `coeffs` is empty; a series always has at least the constant term.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs c_0");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![ZERO; order + 1])
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        Self::monomial(value, 0, order)
    }

    /// `value * z^power`, truncated to `order`.
    pub fn monomial(value: Complex64, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = value;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `k`, zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Drops or zero-pads coefficients to reach `order`.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        Self::new(coeffs)
    }

    /// Cauchy (ordinary) product, truncated at the smaller order.
    ///
    /// Runs over the nonzero coefficients of the sparser operand, so products
    /// with short polynomials cost `O(N * nnz)`.
    pub fn cauchy_product(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let (sparse, dense) = if nonzero_count(self) <= nonzero_count(other) {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![Compensated::default(); order + 1];
        for (j, &a) in sparse.coeffs[..=order].iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (o, &b) in out[j..].iter_mut().zip(&dense.coeffs) {
                o.add_product(a, b);
            }
        }
        Self::new(out.into_iter().map(Compensated::value).collect())
    }

    /// Multiplicative inverse as a power series.
    pub fn reciprocal(&self) -> Result<Self> {
        Self::constant(ONE, self.order()).divide(self)
    }

    /// Series quotient `self / den`, truncated at the smaller order.
    ///
    /// The recurrence only visits nonzero coefficients of `den`, so dividing
    /// by a short polynomial is linear in the order.
    pub fn divide(&self, den: &Self) -> Result<Self> {
        let d0 = den.coeffs[0];
        if d0.norm() < RECIPROCAL_FLOOR {
            return Err(Error::NonInvertible {
                modulus: d0.norm(),
                floor: RECIPROCAL_FLOOR,
            });
        }
        let order = self.order().min(den.order());
        let tail: Vec<(usize, Complex64)> = den.coeffs[1..=order]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(|(j, &c)| (j + 1, c))
            .collect();
        let mut out = vec![ZERO; order + 1];
        for k in 0..=order {
            let mut acc = Compensated::from(self.coeffs[k]);
            for &(j, dj) in &tail {
                if j > k {
                    break;
                }
                acc.add_product(-dj, out[k - j]);
            }
            out[k] = acc.value() / d0;
        }
        Ok(Self::new(out))
    }

    /// Term-by-term derivative; the order drops by one. A constant series
    /// differentiates to the zero series of order 0.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k + 1) as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0; the order grows by one.
    pub fn integrate0(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(ZERO);
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Self::new(out)
    }

    /// Coefficientwise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .collect(),
        )
    }

    /// The series of `z -> p(z e^{iα})`: `c_k e^{ikα}`.
    pub fn rotate_arg(&self, alpha: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * Complex64::from_polar(1.0, k as f64 * alpha))
                .collect(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Multiplies by `z^n` keeping the order: an exact index shift.
    pub fn shift(&self, n: usize) -> Self {
        let order = self.order();
        let mut out = vec![ZERO; order + 1];
        if n <= order {
            out[n..].copy_from_slice(&self.coeffs[..=order - n]);
        }
        Self::new(out)
    }

    /// Horner evaluation of the truncated sum.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut value = ZERO;
        let mut deriv = ZERO;
        for &c in self.coeffs.iter().rev() {
            deriv = deriv * z + value;
            value = value * z + c;
        }
        (value, deriv)
    }

    /// Values at `r e^{2πij/m}` for `j = 0..m`.
    ///
    /// Coefficients are folded modulo `m` and summed with one inverse FFT,
    /// which is exact aliasing of the truncated sum (no extra approximation).
    pub fn sample_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        assert!(m > 0, "need at least one sample");
        let mut buf = vec![ZERO; m];
        let mut rk = 1.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            buf[k % m] += c * rk;
            rk *= r;
        }
        let fft = FftPlanner::new().plan_fft_inverse(m);
        fft.process(&mut buf);
        buf
    }

    /// Largest coefficient deviation over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn nonzero_count(s: &TruncatedSeries) -> usize {
    s.coeffs.iter().filter(|c| **c != ZERO).count()
}

fn zip_with(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    op: impl Fn(Complex64, Complex64) -> Complex64,
) -> TruncatedSeries {
    TruncatedSeries::new(
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| op(x, y))
            .collect(),
    )
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(-ONE)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.cauchy_product(rhs)
    }
}

/// Complex accumulator that carries the rounding error of every step
/// (error-free `TwoSum` and FMA-based `TwoProduct`), so sums of products come
/// out as if computed in twice the working precision.
#[derive(Clone, Copy, Debug, Default)]
struct Compensated {
    re: f64,
    im: f64,
    re_err: f64,
    im_err: f64,
}

fn two_sum(sum: &mut f64, err: &mut f64, x: f64) {
    let s = *sum + x;
    let bp = s - *sum;
    *err += (*sum - (s - bp)) + (x - bp);
    *sum = s;
}

impl Compensated {
    fn add_product(&mut self, a: Complex64, b: Complex64) {
        let p1 = a.re * b.re;
        let e1 = a.re.mul_add(b.re, -p1);
        let p2 = -a.im * b.im;
        let e2 = (-a.im).mul_add(b.im, -p2);
        two_sum(&mut self.re, &mut self.re_err, p1);
        two_sum(&mut self.re, &mut self.re_err, p2);
        self.re_err += e1 + e2;

        let p3 = a.re * b.im;
        let e3 = a.re.mul_add(b.im, -p3);
        let p4 = a.im * b.re;
        let e4 = a.im.mul_add(b.re, -p4);
        two_sum(&mut self.im, &mut self.im_err, p3);
        two_sum(&mut self.im, &mut self.im_err, p4);
        self.im_err += e3 + e4;
    }

    fn value(self) -> Complex64 {
        Complex64::new(self.re + self.re_err, self.im + self.im_err)
    }
}

impl From<Complex64> for Compensated {
    fn from(c: Complex64) -> Self {
        Self {
            re: c.re,
            im: c.im,
            ..Self::default()
        }
    }
}

/// A function analytic near the origin that can report its value and first
/// derivative at a point.
pub trait AnalyticFunction {
    fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64);
}

impl AnalyticFunction for TruncatedSeries {
    fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        self.evaluate_with_derivative(z)
    }
}

fn require_order(order: usize, min: usize) -> Result<()> {
    if order < min {
        Err(Error::InvalidOrder {
            order,
            reason: if min == 1 {
                "order must be at least 1"
            } else {
                "order must be at least 2"
            },
        })
    } else {
        Ok(())
    }
}

/// `z / (1 - λz)`: `c_0 = 0`, `c_k = λ^{k-1}`.
pub fn make_geometric(lambda: Complex64, order: usize) -> Result<TruncatedSeries> {
    require_order(order, 1)?;
    if !(lambda.norm() <= 1.0 + 1e-12) {
        return Err(Error::ParameterRange {
            name: "lambda",
            value: lambda.norm(),
            range: "the closed unit disk",
        });
    }
    let mut coeffs = vec![ZERO; order + 1];
    let mut power = ONE;
    for c in coeffs.iter_mut().skip(1) {
        *c = power;
        power *= lambda;
    }
    Ok(TruncatedSeries::new(coeffs))
}

/// Maclaurin series of the strip map
/// `(1 / (2i sin β)) log((1 + z e^{iβ}) / (1 + z e^{-iβ}))`, whose
/// coefficients are `(-1)^{k+1} sin(kβ) / (k sin β)`.
pub fn strip_log_series(beta: f64, order: usize) -> Result<TruncatedSeries> {
    require_order(order, 1)?;
    if !(beta > 0.0 && beta < PI) {
        return Err(Error::DegenerateStrip { beta });
    }
    let sin_beta = beta.sin();
    let mut coeffs = vec![ZERO; order + 1];
    for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let kf = k as f64;
        *c = Complex64::new(sign * (kf * beta).sin() / (kf * sin_beta), 0.0);
    }
    Ok(TruncatedSeries::new(coeffs))
}

/// The pair of unit-circle exponents `(μ, ν)` in
/// `f'(z) = 1 / ((1 + z e^{iμ})(1 + z e^{iν}))`.
pub fn pommerenke_exponents(eta: f64, gamma: f64, variant: Sign) -> (f64, f64) {
    match variant {
        Sign::Plus => (eta + gamma, -(eta - gamma)),
        Sign::Minus => (eta + gamma, -(eta + gamma)),
    }
}

/// Convex analytic target `f` with `f(0) = 0` and
/// `z f'(z) = z / ((1 + z e^{iμ})(1 + z e^{iν}))`.
pub fn pommerenke_f(eta: f64, gamma: f64, variant: Sign, order: usize) -> Result<TruncatedSeries> {
    require_order(order, 2)?;
    let (mu, nu) = pommerenke_exponents(eta, gamma, variant);
    let (p, q) = (Complex64::from_polar(1.0, mu), Complex64::from_polar(1.0, nu));
    let mut den = vec![ZERO; order];
    den[0] = ONE;
    den[1] = p + q;
    if order > 2 {
        den[2] = p * q;
    }
    Ok(TruncatedSeries::new(den).reciprocal()?.integrate0())
}

/// Convenience: unit-modulus complex number `e^{iφ}`.
pub fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}
