//! Harmonic maps `f = h + conj(g)` on the unit disk and the shear construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{cis, Sign, TruncatedSeries, RECIPROCAL_FLOOR};

/// Threshold below which `h'(0)` counts as vanishing.
pub const DEGENERATE_FLOOR: f64 = 1e-12;

/// `f = h + conj(g)` with `h`, `g` given by truncated series of equal order.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMap {
    h: TruncatedSeries,
    g: TruncatedSeries,
}

impl HarmonicMap {
    /// Pairs the analytic and co-analytic parts, truncating both to the
    /// smaller order.
    pub fn new(h: TruncatedSeries, g: TruncatedSeries) -> Self {
        let order = h.order().min(g.order());
        Self {
            h: h.with_order(order),
            g: g.with_order(order),
        }
    }

    pub fn h(&self) -> &TruncatedSeries {
        &self.h
    }

    pub fn g(&self) -> &TruncatedSeries {
        &self.g
    }

    pub fn order(&self) -> usize {
        self.h.order()
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.h.with_order(order), self.g.with_order(order))
    }

    /// `h(z) + conj(g(z))`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.h.evaluate(z) + self.g.evaluate(z).conj()
    }

    /// `|h'(z)|^2 - |g'(z)|^2`.
    pub fn jacobian_at(&self, z: Complex64) -> f64 {
        MapEvaluator::jacobian(self, z)
    }

    /// `g'/h'` as a series of order `N - 1`.
    pub fn dilatation_series(&self) -> Result<TruncatedSeries> {
        let hp = self.h.differentiate();
        let modulus = hp.coeff(0).norm();
        if modulus < DEGENERATE_FLOOR {
            return Err(Error::DegenerateMap { modulus });
        }
        self.g.differentiate().divide(&hp)
    }

    /// `h + sign * e^{-2iγ} g`, the analytic combination a shear prescribes.
    pub fn combination(&self, sign: Sign, gamma: f64) -> TruncatedSeries {
        &self.h + &self.g.scale(cis(-2.0 * gamma) * sign.factor())
    }

    /// `g'(0)`; nonzero means the map is outside the `f_zbar(0) = 0` class.
    pub fn g_prime_at_zero(&self) -> Complex64 {
        self.g.coeff(1)
    }
}

/// The analytic combination `h + sign * e^{-2iγ} g = F` a shear must honor.
#[derive(Clone, Debug, PartialEq)]
pub struct ShearTarget {
    pub target: TruncatedSeries,
    pub sign: Sign,
    pub gamma: f64,
}

impl ShearTarget {
    /// Requires `F(0) = 0` and `F'(0) = 1`.
    pub fn new(target: TruncatedSeries, sign: Sign, gamma: f64) -> Result<Self> {
        if target.order() < 1
            || target.coeff(0).norm() > 1e-12
            || (target.coeff(1) - 1.0).norm() > 1e-12
        {
            return Err(Error::Precondition(
                "shear target must satisfy F(0) = 0 and F'(0) = 1".into(),
            ));
        }
        Ok(Self {
            target,
            sign,
            gamma,
        })
    }
}

/// Solves `h + sign e^{-2iγ} g = F` with `g' = w h'` and `h(0) = g(0) = 0`:
/// `h' = F' / (1 + sign e^{-2iγ} w)`.
///
/// The output order is `min(order(F), order(w) + 1)`.
pub fn shear(target: &ShearTarget, w: &TruncatedSeries) -> Result<HarmonicMap> {
    let rotated = w.scale(cis(-2.0 * target.gamma) * target.sign.factor());
    let mut den = rotated;
    let c0 = den.coeff(0) + 1.0;
    if c0.norm() <= RECIPROCAL_FLOOR {
        return Err(Error::ShearDegenerate { modulus: c0.norm() });
    }
    let mut coeffs = den.into_coeffs();
    coeffs[0] = c0;
    den = TruncatedSeries::new(coeffs);

    let h_prime = target.target.differentiate().divide(&den)?;
    let g_prime = w.cauchy_product(&h_prime);
    Ok(HarmonicMap::new(h_prime.integrate0(), g_prime.integrate0()))
}

/// Pointwise access to a harmonic map and its complex derivatives.
///
/// Implemented by [`HarmonicMap`] (series evaluation) and by closed-form
/// evaluators for convolutions, so scans can run near the unit circle
/// without truncation error.
pub trait MapEvaluator {
    /// `f(z) = h(z) + conj(g(z))`.
    fn value(&self, z: Complex64) -> Complex64;

    /// `(h'(z), g'(z))`.
    fn derivatives(&self, z: Complex64) -> (Complex64, Complex64);

    fn jacobian(&self, z: Complex64) -> f64 {
        let (hp, gp) = self.derivatives(z);
        hp.norm_sqr() - gp.norm_sqr()
    }

    /// `g'(z) / h'(z)`.
    fn dilatation(&self, z: Complex64) -> Complex64 {
        let (hp, gp) = self.derivatives(z);
        gp / hp
    }

    /// `f(r e^{2πij/m})` for `j = 0..m`.
    fn circle_values(&self, r: f64, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / m as f64;
                self.value(Complex64::from_polar(r, t))
            })
            .collect()
    }
}

impl MapEvaluator for HarmonicMap {
    fn value(&self, z: Complex64) -> Complex64 {
        self.evaluate(z)
    }

    fn derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        (
            self.h.evaluate_with_derivative(z).1,
            self.g.evaluate_with_derivative(z).1,
        )
    }

    fn circle_values(&self, r: f64, m: usize) -> Vec<Complex64> {
        let h = self.h.sample_circle(r, m);
        let g = self.g.sample_circle(r, m);
        h.into_iter().zip(g).map(|(a, b)| a + b.conj()).collect()
    }
}

/// Möbius dilatation `(a - z) / (1 - a z)` expanded to `order`.
pub fn mobius_series(a: f64, order: usize) -> TruncatedSeries {
    let a = Complex64::new(a, 0.0);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    // (a - z) Σ (a z)^k
    let mut power = Complex64::new(1.0, 0.0);
    for k in 0..=order {
        coeffs[k] += a * power;
        if k < order {
            coeffs[k + 1] -= power;
        }
        power *= a;
    }
    TruncatedSeries::new(coeffs)
}
