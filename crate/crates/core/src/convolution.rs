//! Harmonic convolution `f1 ⊛ f2 = h1 * h2 + conj(g1 * g2)` and the explicit
//! dilatation of the convolution of a half-plane-type map with a
//! `T`-family map.
//!
//! Two settings share the machinery:
//!
//! * plus: `F_(a,α) ⊛ T_(η,γ)`, left map from the slanted Möbius half-plane
//!   family, right map sheared with `R + e^{-2iγ} S = f`;
//! * minus: `f_(b,α) ⊛ t_(η,γ)`, left map sheared with a minus sign, right
//!   map sheared with `r - e^{-2iγ} s = f`.
//!
//! In both, the convolution dilatation reduces to `W(z) = e^{2iα} ŵ(z e^{iα})`
//! with
//!
//! ```text
//! ŵ(z) = ∓ e^{iθ} z^n (k1 + zR''/R') / (k2 + zR''/R')
//! ```
//!
//! where `(k1, k2) = ((n - (n+2)a)/(1-a), 2/(1-a))` for plus and
//! `((n + (n+2)b)/(1+b), 2/(1+b))` for minus.

use num_complex::Complex64;

use crate::error::{check_finite, check_full_turn, check_open_unit, Error, Result};
use crate::families::{build_family, closed_form_f, minus_closed_form_f, Family, FamilySpec};
use crate::harmonic::{HarmonicMap, MapEvaluator};
use crate::series::{cis, pommerenke_exponents, AnalyticFunction, Sign, TruncatedSeries};

/// Where one side of a convolution came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    Family(FamilySpec),
    Raw,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub left: Operand,
    pub right: Operand,
}

#[derive(Clone, Debug)]
pub struct ConvolutionResult {
    pub map: HarmonicMap,
    /// Dilatation series of `map`; `None` when `h'(0)` vanishes.
    pub dilatation: Option<TruncatedSeries>,
    pub provenance: Provenance,
}

/// Componentwise Hadamard products of the analytic and co-analytic parts.
pub fn convolve_maps(f1: &HarmonicMap, f2: &HarmonicMap) -> HarmonicMap {
    HarmonicMap::new(f1.h().hadamard(f2.h()), f1.g().hadamard(f2.g()))
}

pub fn harmonic_convolve(f1: &HarmonicMap, f2: &HarmonicMap) -> ConvolutionResult {
    let map = convolve_maps(f1, f2);
    let dilatation = map.dilatation_series().ok();
    ConvolutionResult {
        map,
        dilatation,
        provenance: Provenance {
            left: Operand::Raw,
            right: Operand::Raw,
        },
    }
}

pub fn convolve_families(left: &FamilySpec, right: &FamilySpec) -> Result<ConvolutionResult> {
    let mut result = harmonic_convolve(&build_family(left)?, &build_family(right)?);
    result.provenance = Provenance {
        left: Operand::Family(*left),
        right: Operand::Family(*right),
    };
    Ok(result)
}

/// Parameters of one convolution instance in the plus or minus setting.
///
/// `coef` is `a` in the plus setting and `b` in the minus setting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvolutionPair {
    pub setting: Sign,
    pub coef: f64,
    pub alpha: f64,
    pub eta: f64,
    pub gamma: f64,
    pub theta: f64,
    pub n: u32,
}

impl ConvolutionPair {
    pub fn validate(&self) -> Result<()> {
        check_open_unit(
            match self.setting {
                Sign::Plus => "a",
                Sign::Minus => "b",
            },
            self.coef,
        )?;
        check_full_turn("alpha", self.alpha)?;
        check_full_turn("gamma", self.gamma)?;
        check_finite("eta", self.eta)?;
        check_finite("theta", self.theta)?;
        if self.n == 0 {
            return Err(Error::ParameterRange {
                name: "n",
                value: 0.0,
                range: "the positive integers",
            });
        }
        Ok(())
    }

    /// `(n-2)/(n+2)` for plus, `-(n-2)/(n+2)` for minus: the endpoint of the
    /// admissible coefficient range where `ŵ` collapses to a monomial.
    pub fn boundary_coef(setting: Sign, n: u32) -> f64 {
        let n = n as f64;
        let r = (n - 2.0) / (n + 2.0);
        match setting {
            Sign::Plus => r,
            Sign::Minus => -r,
        }
    }

    pub fn with_coef(mut self, coef: f64) -> Self {
        self.coef = coef;
        self
    }

    /// Direction `-(α + γ)` in which the convolution is convex.
    pub fn direction(&self) -> f64 {
        -(self.alpha + self.gamma)
    }

    /// `e^{i(θ - 2γ)}`.
    pub fn epsilon(&self) -> Complex64 {
        cis(self.theta - 2.0 * self.gamma)
    }

    pub fn left_family(&self) -> Family {
        match self.setting {
            Sign::Plus => Family::SlantedFaAlpha {
                a: self.coef,
                alpha: self.alpha,
            },
            Sign::Minus => Family::MinusFbAlpha {
                b: self.coef,
                alpha: self.alpha,
            },
        }
    }

    pub fn right_family(&self) -> Family {
        let (eta, gamma, theta, n) = (self.eta, self.gamma, self.theta, self.n);
        match self.setting {
            Sign::Plus => Family::PlusT {
                eta,
                gamma,
                theta,
                n,
            },
            Sign::Minus => Family::MinusT {
                eta,
                gamma,
                theta,
                n,
            },
        }
    }

    /// Left factor from its explicit formulas.
    pub fn left_closed_form(&self, order: usize) -> Result<HarmonicMap> {
        match self.setting {
            Sign::Plus => closed_form_f(self.coef, self.alpha, order),
            Sign::Minus => minus_closed_form_f(self.coef, self.alpha, order),
        }
    }

    /// The convolved map as series; left factor from closed form, right
    /// factor by shear.
    pub fn convolved_series(&self, order: usize) -> Result<HarmonicMap> {
        self.validate()?;
        let left = self.left_closed_form(order)?;
        let right = build_family(&FamilySpec::new(self.right_family(), order))?;
        Ok(convolve_maps(&left, &right))
    }

    /// `(k1, k2)` in the bracket of `ŵ`.
    pub fn bracket_constants(&self) -> (f64, f64) {
        let n = self.n as f64;
        match self.setting {
            Sign::Plus => {
                let a = self.coef;
                ((n - (n + 2.0) * a) / (1.0 - a), 2.0 / (1.0 - a))
            }
            Sign::Minus => {
                let b = self.coef;
                ((n + (n + 2.0) * b) / (1.0 + b), 2.0 / (1.0 + b))
            }
        }
    }

    /// `∓ e^{iθ}`, the scalar in front of `z^n`.
    pub fn prefactor(&self) -> Complex64 {
        match self.setting {
            Sign::Plus => -cis(self.theta),
            Sign::Minus => cis(self.theta),
        }
    }

    /// `R'` (plus) or `r'` (minus) in closed form.
    pub fn sheared_derivative(&self) -> ShearedDerivative {
        let (mu, nu) = pommerenke_exponents(self.eta, self.gamma, Sign::Plus);
        ShearedDerivative {
            e_mu: cis(mu),
            e_nu: cis(nu),
            eps: self.epsilon() * self.setting.factor(),
            n: self.n,
        }
    }

    /// `R'` as a series of `order`.
    pub fn sheared_derivative_series(&self, order: usize) -> Result<TruncatedSeries> {
        let d = self.sheared_derivative();
        let mut quad = vec![Complex64::new(0.0, 0.0); order + 1];
        quad[0] = 1.0.into();
        if order >= 1 {
            quad[1] = d.e_mu + d.e_nu;
        }
        if order >= 2 {
            quad[2] = d.e_mu * d.e_nu;
        }
        let mut den = TruncatedSeries::monomial(d.eps, self.n as usize, order).into_coeffs();
        den[0] += 1.0;
        TruncatedSeries::new(quad)
            .reciprocal()?
            .divide(&TruncatedSeries::new(den))
    }

    /// `ŵ` as a series, by series division of `k1 R' + zR''` by
    /// `k2 R' + zR''`.
    pub fn w_hat_series(&self, order: usize) -> Result<TruncatedSeries> {
        self.validate()?;
        let r1 = self.sheared_derivative_series(order)?;
        let z_r2 = TruncatedSeries::new(
            r1.coeffs()
                .iter()
                .enumerate()
                .map(|(k, &c)| c * k as f64)
                .collect(),
        );
        let (k1, k2) = self.bracket_constants();
        let num = &r1.scale(k1.into()) + &z_r2;
        let den = &r1.scale(k2.into()) + &z_r2;
        let bracket = num.divide(&den)?;
        Ok(bracket.shift(self.n as usize).scale(self.prefactor()))
    }

    pub fn closed_form(&self) -> ClosedFormConvolution {
        ClosedFormConvolution { pair: *self }
    }

    /// Series for values plus closed forms for derivatives.
    pub fn convolved_map(&self, order: usize) -> Result<ConvolvedMap> {
        Ok(ConvolvedMap {
            series: self.convolved_series(order)?,
            closed: self.closed_form(),
        })
    }
}

/// `ŵ` for the plus setting (half-plane Möbius map convolved with `T`).
pub fn dilatation_plus_closed(
    a: f64,
    eta: f64,
    gamma: f64,
    theta: f64,
    n: u32,
    order: usize,
) -> Result<TruncatedSeries> {
    ConvolutionPair {
        setting: Sign::Plus,
        coef: a,
        alpha: 0.0,
        eta,
        gamma,
        theta,
        n,
    }
    .w_hat_series(order)
}

/// `ŵ` for the minus setting.
pub fn dilatation_minus_closed(
    b: f64,
    eta: f64,
    gamma: f64,
    theta: f64,
    n: u32,
    order: usize,
) -> Result<TruncatedSeries> {
    ConvolutionPair {
        setting: Sign::Minus,
        coef: b,
        alpha: 0.0,
        eta,
        gamma,
        theta,
        n,
    }
    .w_hat_series(order)
}

/// `R'(z) = f'(z) / (1 + ε z^n)` with
/// `f'(z) = 1 / ((1 + z e^{iμ})(1 + z e^{iν}))`.
///
/// `ε` already carries the sign of the shear (`-e^{i(θ-2γ)}` for minus).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShearedDerivative {
    pub e_mu: Complex64,
    pub e_nu: Complex64,
    pub eps: Complex64,
    pub n: u32,
}

impl ShearedDerivative {
    /// `(f'(z), z f''(z) / f'(z))`.
    pub fn target_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let p = 1.0 + z * self.e_mu;
        let q = 1.0 + z * self.e_nu;
        let fp = (p * q).inv();
        let log_d = -(z * self.e_mu / p + z * self.e_nu / q);
        (fp, log_d)
    }

    /// `z R''(z) / R'(z)`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let (_, zf) = self.target_derivative(z);
        let ezn = self.eps * z.powu(self.n);
        zf - self.n as f64 * ezn / (1.0 + ezn)
    }
}

impl AnalyticFunction for ShearedDerivative {
    /// `(R'(z), R''(z))`.
    fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let (fp, _) = self.target_derivative(z);
        let ezn = self.eps * z.powu(self.n);
        let r1 = fp / (1.0 + ezn);
        if z == Complex64::new(0.0, 0.0) {
            // z R''/R' is 0/0 at the origin; R''(0) = f''(0) - n ε [n == 1] f'(0)
            let fpp0 = -(self.e_mu + self.e_nu);
            let lin = if self.n == 1 { self.eps } else { 0.0.into() };
            return (r1, fpp0 - lin);
        }
        (r1, r1 * self.log_derivative(z) / z)
    }
}

/// Pointwise closed forms for `ŵ`, `W` and the derivatives of the convolved
/// map; exact up to round-off everywhere in the open disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormConvolution {
    pub pair: ConvolutionPair,
}

impl ClosedFormConvolution {
    /// `(k1 + zR''/R') / (k2 + zR''/R')`.
    pub fn bracket(&self, z: Complex64) -> Complex64 {
        let q = self.pair.sheared_derivative().log_derivative(z);
        let (k1, k2) = self.pair.bracket_constants();
        (k1 + q) / (k2 + q)
    }

    pub fn w_hat(&self, z: Complex64) -> Complex64 {
        self.pair.prefactor() * z.powu(self.pair.n) * self.bracket(z)
    }

    /// Dilatation of the convolution: `e^{2iα} ŵ(z e^{iα})`.
    pub fn w(&self, z: Complex64) -> Complex64 {
        let alpha = self.pair.alpha;
        cis(2.0 * alpha) * self.w_hat(z * cis(alpha))
    }

    /// Coefficients `(x1, x2, y1, y2)` of the left map written as
    /// `h = x1 G1 + x2 G2`, `g = e^{2iα}(y1 G1 + y2 G2)` with
    /// `G1 = z/(1-ze^{iα})`, `G2 = z/(1-ze^{iα})²`.
    fn left_weights(&self) -> (f64, f64, f64, f64) {
        match self.pair.setting {
            Sign::Plus => {
                let a = self.pair.coef;
                let c = (1.0 - a) / (1.0 + a);
                (0.5, 0.5 * c, 0.5, -0.5 * c)
            }
            Sign::Minus => {
                let b = self.pair.coef;
                let d = (1.0 + b) / (1.0 - b);
                (0.5, 0.5 * d, -0.5, 0.5 * d)
            }
        }
    }
}

impl MapEvaluator for ClosedFormConvolution {
    /// Values need the antiderivative of `R'`, which has no closed form;
    /// use [`ConvolvedMap`] when values are required.
    fn value(&self, _z: Complex64) -> Complex64 {
        Complex64::new(f64::NAN, f64::NAN)
    }

    fn derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        let alpha = self.pair.alpha;
        let u = z * cis(alpha);
        let (r1, r2) = self.pair.sheared_derivative().value_and_derivative(u);
        let n = self.pair.n;
        let un = u.powu(n);
        let et = cis(self.pair.theta);
        let s1 = et * un * r1;
        // u S'' = e^{iθ} u^n (u R'' + n R')
        let u_s2 = et * un * (u * r2 + n as f64 * r1);
        let (x1, x2, y1, y2) = self.left_weights();
        let hp = x1 * r1 + x2 * (r1 + u * r2);
        let gp = cis(2.0 * alpha) * (y1 * s1 + y2 * (s1 + u_s2));
        (hp, gp)
    }
}

/// A convolution whose values come from a high-order series and whose
/// derivatives come from the closed forms.
#[derive(Clone, Debug)]
pub struct ConvolvedMap {
    pub series: HarmonicMap,
    pub closed: ClosedFormConvolution,
}

impl MapEvaluator for ConvolvedMap {
    fn value(&self, z: Complex64) -> Complex64 {
        self.series.evaluate(z)
    }

    fn derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        self.closed.derivatives(z)
    }

    fn circle_values(&self, r: f64, m: usize) -> Vec<Complex64> {
        self.series.circle_values(r, m)
    }
}

/// Smallest order `N` (a multiple of 64) for which a series with
/// coefficients bounded by `k^3` has tail `Σ_{k>N} k^3 r^k` below `tol`.
pub fn order_for_radius(r: f64, tol: f64) -> usize {
    assert!((0.0..1.0).contains(&r), "radius must lie in [0, 1)");
    let tail = |n: usize| {
        let mut sum = 0.0;
        let mut k = n + 1;
        loop {
            let kf = k as f64;
            let term = kf.powi(3) * r.powf(kf);
            sum += term;
            if term < tol * 1e-6 * (1.0 - r) {
                return sum;
            }
            k += 1;
        }
    };
    let mut n = 64;
    while tail(n) >= tol && n < 1 << 20 {
        n += 64;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus(a: f64, alpha: f64, eta: f64, gamma: f64, theta: f64, n: u32) -> ConvolutionPair {
        ConvolutionPair {
            setting: Sign::Plus,
            coef: a,
            alpha,
            eta,
            gamma,
            theta,
            n,
        }
    }

    #[test]
    fn convolving_with_half_plane_keeps_analytic_part() {
        let n = 40;
        let f = build_family(&FamilySpec::new(
            Family::PlusT {
                eta: 2.0,
                gamma: 0.5,
                theta: 1.0,
                n: 2,
            },
            n,
        ))
        .unwrap();
        let half = HarmonicMap::new(
            crate::series::make_geometric(1.0.into(), n).unwrap(),
            TruncatedSeries::zero(n),
        );
        let res = harmonic_convolve(&f, &half);
        assert_eq!(res.map.h(), f.h());
        assert_eq!(res.map.g(), &TruncatedSeries::zero(n));
    }

    #[test]
    fn f0_self_convolution() {
        let n = 200;
        let spec = FamilySpec::new(Family::StandardF0, n);
        let res = convolve_families(&spec, &spec).unwrap();
        let w = res.dilatation.as_ref().unwrap();
        assert!(w.coeff(0).norm() < 1e-15);
        // H0_k = (1+k)/2, G0_k = (1-k)/2, so the product coefficients are
        // squares; sum g'/h' at z = 0.5 directly.
        let z = 0.5f64;
        let (mut hp, mut gp) = (0.0, 0.0);
        for k in 1..400 {
            let kf = k as f64;
            hp += kf * ((1.0 + kf) / 2.0).powi(2) * z.powi(k - 1);
            gp += kf * ((1.0 - kf) / 2.0).powi(2) * z.powi(k - 1);
        }
        let oracle = gp / hp;
        let via_map = MapEvaluator::dilatation(&res.map, c(z, 0.0));
        assert!((via_map - oracle).norm() < 1e-12, "{via_map} vs {oracle}");
        let via_series = w.evaluate(c(z, 0.0));
        assert!((via_series - oracle).norm() < 1e-10);
        assert_eq!(
            res.provenance,
            Provenance {
                left: Operand::Family(spec),
                right: Operand::Family(spec)
            }
        );
    }

    #[test]
    fn convolution_commutes() {
        let n = 32;
        let a = build_family(&FamilySpec::new(Family::HalfPlaneFa { a: 0.3 }, n)).unwrap();
        let b = build_family(&FamilySpec::new(
            Family::StripV {
                beta: 2.0,
                theta: 0.2,
                n: 1,
            },
            n,
        ))
        .unwrap();
        assert_eq!(convolve_maps(&a, &b), convolve_maps(&b, &a));
    }

    #[test]
    fn boundary_monomial() {
        for n in 1..=4u32 {
            let a = ConvolutionPair::boundary_coef(Sign::Plus, n);
            let w = dilatation_plus_closed(a, 2.0, 0.3, 0.7, n, 64).unwrap();
            for k in 0..=64 {
                let expected = if k == n as usize { -cis(0.7) } else { c(0.0, 0.0) };
                assert!((w.coeff(k) - expected).norm() < 1e-10, "n={n} k={k}");
            }
        }
        let w = dilatation_plus_closed(-1.0 / 3.0, PI, 0.0, 0.0, 1, 32).unwrap();
        assert!((w.coeff(1) + 1.0).norm() < 1e-12);
        let w = dilatation_minus_closed(0.0, 2.0, 0.0, 1.1, 2, 32).unwrap();
        assert!((w.coeff(2) - cis(1.1)).norm() < 1e-12);
        assert!(w.coeff(3).norm() < 1e-12);
    }

    #[test]
    fn closed_form_matches_convolved_series() {
        for &setting in &[Sign::Plus, Sign::Minus] {
            let pair = ConvolutionPair {
                setting,
                coef: 0.15,
                alpha: 0.8,
                eta: 2.3,
                gamma: 0.4,
                theta: 1.2,
                n: 3,
            };
            let series = pair.convolved_series(600).unwrap();
            let closed = pair.closed_form();
            for &(r, t) in &[(0.0, 0.0), (0.3, 1.0), (0.7, 2.5), (0.9, -1.2)] {
                let z = Complex64::from_polar(r, t);
                let (hs, gs) = series.derivatives(z);
                let (hc, gc) = closed.derivatives(z);
                assert!((hs - hc).norm() < 1e-8 * (1.0 + hc.norm()), "{setting:?} h' at {z}");
                assert!((gs - gc).norm() < 1e-8 * (1.0 + gc.norm()), "{setting:?} g' at {z}");
                let w_series = MapEvaluator::dilatation(&series, z);
                assert!((w_series - closed.w(z)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn rotation_reduction() {
        let pair = plus(0.4, 1.1, PI, 0.6, 0.0, 2);
        let w_hat = pair.w_hat_series(256).unwrap();
        let series = pair.convolved_series(512).unwrap();
        for &(r, t) in &[(0.2, 0.3), (0.6, 2.0), (0.85, 4.0)] {
            let z = Complex64::from_polar(r, t);
            let expected = cis(2.0 * pair.alpha) * w_hat.evaluate(z * cis(pair.alpha));
            let got = MapEvaluator::dilatation(&series, z);
            assert!((got - expected).norm() < 1e-8);
        }
    }

    #[test]
    fn sheared_derivative_at_origin() {
        for n in 1..=3 {
            let pair = plus(0.0, 0.0, 1.7, 0.3, 0.9, n);
            let series = pair.sheared_derivative_series(8).unwrap();
            let (v, d) = pair.sheared_derivative().value_and_derivative(c(0.0, 0.0));
            assert!((v - series.coeff(0)).norm() < 1e-15);
            assert!((d - series.coeff(1)).norm() < 1e-14, "n={n}");
            let z = c(0.31, -0.2);
            let (vs, ds) = series.with_order(8).evaluate_with_derivative(z);
            let (vs_long, ds_long) = pair
                .sheared_derivative_series(200)
                .unwrap()
                .evaluate_with_derivative(z);
            let (vc, dc) = pair.sheared_derivative().value_and_derivative(z);
            assert!((vs_long - vc).norm() < 1e-12 && (ds_long - dc).norm() < 1e-12);
            assert!((vs - vc).norm() < 1e-2 && (ds - dc).norm() < 1e-1);
        }
    }

    #[test]
    fn tail_orders() {
        assert!(order_for_radius(0.5, 1e-12) < 200);
        let n = order_for_radius(0.99, 1e-9);
        assert!(n > 3000 && n < 10000, "{n}");
    }
}
