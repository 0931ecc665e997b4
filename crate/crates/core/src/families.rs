//! Named harmonic families, each produced by [`shear`](crate::harmonic::shear).
//!
//! Every family is fixed by an analytic combination `h ± e^{-2iγ} g = F` and
//! a dilatation `w = g'/h'`:
//!
//! | kind               | sign | γ  | F                               | w                                       |
//! |--------------------|------|----|---------------------------------|-----------------------------------------|
//! | `standard-f0`      | +    | 0  | `z/(1-z)`                       | `-z`                                    |
//! | `half-plane-fa`    | +    | 0  | `z/(1-z)`                       | `(a-z)/(1-az)`                          |
//! | `slanted-fa-alpha` | +    | α  | `z/(1-z e^{iα})`                | `e^{2iα}(a-z e^{iα})/(1-a z e^{iα})`    |
//! | `slanted-target`   | +    | γ  | `z/(1-z e^{iγ})`                | `e^{iθ} z^n`                            |
//! | `strip-v`          | +    | 0  | strip map of angle β            | `e^{iθ} z^n`                            |
//! | `plus-t`           | +    | γ  | convex `f` (plus variant)       | `e^{iθ} z^n`                            |
//! | `minus-t`          | -    | γ  | convex `f` (minus variant)      | `e^{iθ} z^n`                            |
//! | `minus-fb-alpha`   | -    | α  | `z/(1-z e^{iα})`                | `e^{2iα}(b+z e^{iα})/(1+b z e^{iα})`    |
//! | `cusp-fc`          | -    | 0  | `z/(1-z)`                       | `z`                                     |
//!
//! The canonical text form is `kind(key=value,...)`, e.g.
//! `plus-t(eta=3.141592653589793,gamma=0,theta=0,n=1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::angle::parse_angle;
use crate::error::{check_finite, check_full_turn, check_open_unit, Error, Result};
use crate::harmonic::{mobius_series, shear, HarmonicMap, ShearTarget};
use crate::series::{
    cis, make_geometric, pommerenke_f, strip_log_series, Sign, TruncatedSeries,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    StandardF0,
    HalfPlaneFa { a: f64 },
    SlantedFaAlpha { a: f64, alpha: f64 },
    SlantedTarget { gamma: f64, theta: f64, n: u32 },
    StripV { beta: f64, theta: f64, n: u32 },
    PlusT { eta: f64, gamma: f64, theta: f64, n: u32 },
    MinusT { eta: f64, gamma: f64, theta: f64, n: u32 },
    MinusFbAlpha { b: f64, alpha: f64 },
    CuspFc,
}

/// A family together with its truncation order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub order: usize,
}

impl FamilySpec {
    pub fn new(family: Family, order: usize) -> Self {
        Self { family, order }
    }

    pub fn build(&self) -> Result<HarmonicMap> {
        build_family(self)
    }
}

pub const KIND_NAMES: [&str; 9] = [
    "standard-f0",
    "half-plane-fa",
    "slanted-fa-alpha",
    "slanted-target",
    "strip-v",
    "plus-t",
    "minus-t",
    "minus-fb-alpha",
    "cusp-fc",
];

fn monomial_dilatation(theta: f64, n: u32, order: usize) -> TruncatedSeries {
    TruncatedSeries::monomial(cis(theta), n as usize, order)
}

fn check_n(n: u32) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name: "n",
            value: n as f64,
            range: "the positive integers",
        })
    }
}

impl Family {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Family::StandardF0 => KIND_NAMES[0],
            Family::HalfPlaneFa { .. } => KIND_NAMES[1],
            Family::SlantedFaAlpha { .. } => KIND_NAMES[2],
            Family::SlantedTarget { .. } => KIND_NAMES[3],
            Family::StripV { .. } => KIND_NAMES[4],
            Family::PlusT { .. } => KIND_NAMES[5],
            Family::MinusT { .. } => KIND_NAMES[6],
            Family::MinusFbAlpha { .. } => KIND_NAMES[7],
            Family::CuspFc => KIND_NAMES[8],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::StandardF0 | Family::CuspFc => Ok(()),
            Family::HalfPlaneFa { a } => check_open_unit("a", a),
            Family::SlantedFaAlpha { a, alpha } => {
                check_open_unit("a", a)?;
                check_full_turn("alpha", alpha)
            }
            Family::SlantedTarget { gamma, theta, n } => {
                check_full_turn("gamma", gamma)?;
                check_finite("theta", theta)?;
                check_n(n)
            }
            Family::StripV { beta, theta, n } => {
                if !(beta > 0.0 && beta < std::f64::consts::PI) {
                    return Err(Error::DegenerateStrip { beta });
                }
                check_finite("theta", theta)?;
                check_n(n)
            }
            Family::PlusT {
                eta,
                gamma,
                theta,
                n,
            }
            | Family::MinusT {
                eta,
                gamma,
                theta,
                n,
            } => {
                check_finite("eta", eta)?;
                check_full_turn("gamma", gamma)?;
                check_finite("theta", theta)?;
                check_n(n)
            }
            Family::MinusFbAlpha { b, alpha } => {
                check_open_unit("b", b)?;
                check_full_turn("alpha", alpha)
            }
        }
    }

    /// The analytic combination the family satisfies.
    pub fn shear_target(&self, order: usize) -> Result<ShearTarget> {
        self.validate()?;
        let one = Complex64::new(1.0, 0.0);
        let (target, sign, gamma) = match *self {
            Family::StandardF0 | Family::HalfPlaneFa { .. } => {
                (make_geometric(one, order)?, Sign::Plus, 0.0)
            }
            Family::SlantedFaAlpha { alpha, .. } => {
                (make_geometric(cis(alpha), order)?, Sign::Plus, alpha)
            }
            Family::SlantedTarget { gamma, .. } => {
                (make_geometric(cis(gamma), order)?, Sign::Plus, gamma)
            }
            Family::StripV { beta, .. } => (strip_log_series(beta, order)?, Sign::Plus, 0.0),
            Family::PlusT { eta, gamma, .. } => {
                (pommerenke_f(eta, gamma, Sign::Plus, order)?, Sign::Plus, gamma)
            }
            // same convex target as PlusT, sheared with the opposite sign
            Family::MinusT { eta, gamma, .. } => {
                (pommerenke_f(eta, gamma, Sign::Plus, order)?, Sign::Minus, gamma)
            }
            Family::MinusFbAlpha { alpha, .. } => {
                (make_geometric(cis(alpha), order)?, Sign::Minus, alpha)
            }
            Family::CuspFc => (make_geometric(one, order)?, Sign::Minus, 0.0),
        };
        ShearTarget::new(target, sign, gamma)
    }

    /// The prescribed dilatation `g'/h'` expanded to `order`.
    pub fn dilatation(&self, order: usize) -> Result<TruncatedSeries> {
        self.validate()?;
        Ok(match *self {
            Family::StandardF0 => TruncatedSeries::monomial(Complex64::new(-1.0, 0.0), 1, order),
            Family::HalfPlaneFa { a } => mobius_series(a, order),
            Family::SlantedFaAlpha { a, alpha } => mobius_series(a, order)
                .rotate_arg(alpha)
                .scale(cis(2.0 * alpha)),
            Family::SlantedTarget { theta, n, .. }
            | Family::StripV { theta, n, .. }
            | Family::PlusT { theta, n, .. }
            | Family::MinusT { theta, n, .. } => monomial_dilatation(theta, n, order),
            // (b + u)/(1 + b u) = -((-b) - u)/(1 - (-b) u)
            Family::MinusFbAlpha { b, alpha } => mobius_series(-b, order)
                .rotate_arg(alpha)
                .scale(-cis(2.0 * alpha)),
            Family::CuspFc => TruncatedSeries::monomial(Complex64::new(1.0, 0.0), 1, order),
        })
    }

    fn params(&self) -> Vec<(&'static str, String)> {
        let num = |v: f64| format!("{v}");
        match *self {
            Family::StandardF0 | Family::CuspFc => vec![],
            Family::HalfPlaneFa { a } => vec![("a", num(a))],
            Family::SlantedFaAlpha { a, alpha } => vec![("a", num(a)), ("alpha", num(alpha))],
            Family::SlantedTarget { gamma, theta, n } => vec![
                ("gamma", num(gamma)),
                ("theta", num(theta)),
                ("n", n.to_string()),
            ],
            Family::StripV { beta, theta, n } => vec![
                ("beta", num(beta)),
                ("theta", num(theta)),
                ("n", n.to_string()),
            ],
            Family::PlusT {
                eta,
                gamma,
                theta,
                n,
            }
            | Family::MinusT {
                eta,
                gamma,
                theta,
                n,
            } => vec![
                ("eta", num(eta)),
                ("gamma", num(gamma)),
                ("theta", num(theta)),
                ("n", n.to_string()),
            ],
            Family::MinusFbAlpha { b, alpha } => vec![("b", num(b)), ("alpha", num(alpha))],
        }
    }

    /// Assembles a family from its kind name and textual parameters.
    ///
    /// `alpha`, `gamma` and `theta` default to 0 and `n` to 1; `a`, `b`,
    /// `beta` and `eta` are required where the kind uses them. Angles accept
    /// pi literals. Keys the kind does not use are rejected.
    pub fn from_parts(kind: &str, params: &BTreeMap<String, String>) -> Result<Self> {
        let allowed: &[&str] = match kind {
            "standard-f0" | "cusp-fc" => &[],
            "half-plane-fa" => &["a"],
            "slanted-fa-alpha" => &["a", "alpha"],
            "slanted-target" => &["gamma", "theta", "n"],
            "strip-v" => &["beta", "theta", "n"],
            "plus-t" | "minus-t" => &["eta", "gamma", "theta", "n"],
            "minus-fb-alpha" => &["b", "alpha"],
            other => {
                return Err(Error::Parse(format!(
                    "unknown family `{other}`; expected one of {}",
                    KIND_NAMES.join(", ")
                )))
            }
        };
        if let Some(key) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!(
                "family `{kind}` has no parameter `{key}`"
            )));
        }

        let real = |key: &str| -> Result<f64> {
            let v = params
                .get(key)
                .ok_or_else(|| Error::Parse(format!("family `{kind}` requires `{key}`")))?;
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{key}`: `{v}` is not a number")))
        };
        let angle = |key: &str, default: Option<f64>| -> Result<f64> {
            match (params.get(key), default) {
                (Some(v), _) => parse_angle(v).map_err(|e| Error::Parse(format!("`{key}`: {e}"))),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(Error::Parse(format!("family `{kind}` requires `{key}`"))),
            }
        };
        let count = |key: &str| -> Result<u32> {
            match params.get(key) {
                None => Ok(1),
                Some(v) => v
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("`{key}`: `{v}` is not a natural number"))),
            }
        };

        let family = match kind {
            "standard-f0" => Family::StandardF0,
            "cusp-fc" => Family::CuspFc,
            "half-plane-fa" => Family::HalfPlaneFa { a: real("a")? },
            "slanted-fa-alpha" => Family::SlantedFaAlpha {
                a: real("a")?,
                alpha: angle("alpha", Some(0.0))?,
            },
            "slanted-target" => Family::SlantedTarget {
                gamma: angle("gamma", Some(0.0))?,
                theta: angle("theta", Some(0.0))?,
                n: count("n")?,
            },
            "strip-v" => Family::StripV {
                beta: angle("beta", None)?,
                theta: angle("theta", Some(0.0))?,
                n: count("n")?,
            },
            "plus-t" => Family::PlusT {
                eta: angle("eta", None)?,
                gamma: angle("gamma", Some(0.0))?,
                theta: angle("theta", Some(0.0))?,
                n: count("n")?,
            },
            "minus-t" => Family::MinusT {
                eta: angle("eta", None)?,
                gamma: angle("gamma", Some(0.0))?,
                theta: angle("theta", Some(0.0))?,
                n: count("n")?,
            },
            "minus-fb-alpha" => Family::MinusFbAlpha {
                b: real("b")?,
                alpha: angle("alpha", Some(0.0))?,
            },
            _ => unreachable!("kind checked above"),
        };
        Ok(family)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind_name())?;
        let params = self.params();
        if !params.is_empty() {
            let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", body.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = match s.find('(') {
            None => (s, ""),
            Some(open) => {
                let body = s[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{s}`")))?;
                (&s[..open], body)
            }
        };
        let mut params = BTreeMap::new();
        for item in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
            if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("duplicate parameter `{}`", k.trim())));
            }
        }
        Family::from_parts(kind.trim(), &params)
    }
}

/// Builds the family by shear from its target and dilatation.
pub fn build_family(spec: &FamilySpec) -> Result<HarmonicMap> {
    let target = spec.family.shear_target(spec.order)?;
    let w = spec.family.dilatation(spec.order)?;
    shear(&target, &w)
}

/// `z/(1 - z e^{iα})` and `z/(1 - z e^{iα})^2` as series.
fn geometric_pair(alpha: f64, order: usize) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let g1 = make_geometric(cis(alpha), order)?;
    let g2 = TruncatedSeries::new(
        g1.coeffs()
            .iter()
            .enumerate()
            .map(|(k, &c)| c * k as f64)
            .collect(),
    );
    Ok((g1, g2))
}

/// The slanted half-plane map with Möbius dilatation, from its explicit
/// formulas
/// `H = ½[z/(1-ze^{iα}) + ((1-a)/(1+a)) z/(1-ze^{iα})²]`,
/// `G = ½[z e^{2iα}/(1-ze^{iα}) - ((1-a)/(1+a)) z e^{2iα}/(1-ze^{iα})²]`.
pub fn closed_form_f(a: f64, alpha: f64, order: usize) -> Result<HarmonicMap> {
    check_open_unit("a", a)?;
    let (g1, g2) = geometric_pair(alpha, order)?;
    let c = (1.0 - a) / (1.0 + a);
    let half = Complex64::new(0.5, 0.0);
    let h = (&g1 + &g2.scale(c.into())).scale(half);
    let g = (&g1 - &g2.scale(c.into())).scale(half * cis(2.0 * alpha));
    Ok(HarmonicMap::new(h, g))
}

/// The minus-sheared map with dilatation `e^{2iα}(b+ze^{iα})/(1+bze^{iα})`:
/// `h = ½[((1+b)/(1-b)) z/(1-ze^{iα})² + z/(1-ze^{iα})]`,
/// `g = ½[((1+b)/(1-b)) z e^{2iα}/(1-ze^{iα})² - z e^{2iα}/(1-ze^{iα})]`.
pub fn minus_closed_form_f(b: f64, alpha: f64, order: usize) -> Result<HarmonicMap> {
    check_open_unit("b", b)?;
    let (g1, g2) = geometric_pair(alpha, order)?;
    let d = (1.0 + b) / (1.0 - b);
    let half = Complex64::new(0.5, 0.0);
    let h = (&g2.scale(d.into()) + &g1).scale(half);
    let g = (&g2.scale(d.into()) - &g1).scale(half * cis(2.0 * alpha));
    Ok(HarmonicMap::new(h, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const N: usize = 96;

    fn relation_error(spec: &FamilySpec) -> (f64, f64) {
        let map = build_family(spec).unwrap();
        let target = spec.family.shear_target(spec.order).unwrap();
        let lin = map
            .combination(target.sign, target.gamma)
            .max_abs_diff(&target.target);
        let dil = map
            .dilatation_series()
            .unwrap()
            .max_abs_diff(&spec.family.dilatation(spec.order).unwrap());
        (lin, dil)
    }

    #[test]
    fn standard_f0_relations() {
        let spec = FamilySpec::new(Family::StandardF0, N);
        let (lin, dil) = relation_error(&spec);
        assert!(lin < 1e-10 && dil < 1e-9, "{lin:e} {dil:e}");
        let map = spec.build().unwrap();
        let w = map.dilatation_series().unwrap();
        assert!((w.coeff(1) + 1.0).norm() < 1e-12);
        assert!(w.coeff(0).norm() < 1e-15);
    }

    #[test]
    fn plus_t_at_pi_is_half_plane_setting() {
        let fam = Family::PlusT {
            eta: PI,
            gamma: 0.0,
            theta: 0.0,
            n: 1,
        };
        let target = fam.shear_target(N).unwrap();
        assert!(target.target.max_abs_diff(&make_geometric(1.0.into(), N).unwrap()) < 1e-12);
        assert_eq!(
            fam.dilatation(N).unwrap(),
            TruncatedSeries::monomial(1.0.into(), 1, N)
        );
    }

    #[test]
    fn half_plane_fa_at_zero_is_f0() {
        let fa = build_family(&FamilySpec::new(Family::HalfPlaneFa { a: 0.0 }, N)).unwrap();
        let f0 = build_family(&FamilySpec::new(Family::StandardF0, N)).unwrap();
        assert!(fa.h().max_abs_diff(f0.h()) < 1e-12);
        assert!(fa.g().max_abs_diff(f0.g()) < 1e-12);
    }

    #[test]
    fn slanted_fa_alpha_zero_is_half_plane_fa() {
        let a = -0.35;
        let x = build_family(&FamilySpec::new(Family::SlantedFaAlpha { a, alpha: 0.0 }, N)).unwrap();
        let y = build_family(&FamilySpec::new(Family::HalfPlaneFa { a }, N)).unwrap();
        assert!(x.h().max_abs_diff(y.h()) < 1e-12);
        assert!(x.g().max_abs_diff(y.g()) < 1e-12);
    }

    #[test]
    fn minus_t_matches_strip_target() {
        let psi = 2.2;
        let fam = Family::MinusT {
            eta: psi,
            gamma: 0.0,
            theta: 0.4,
            n: 2,
        };
        let target = fam.shear_target(N).unwrap();
        assert_eq!(target.sign, Sign::Minus);
        assert!(target.target.max_abs_diff(&strip_log_series(psi, N).unwrap()) < 1e-12);
        let (lin, dil) = relation_error(&FamilySpec::new(fam, N));
        assert!(lin < 1e-10 && dil < 1e-9);
    }

    #[test]
    fn closed_forms_examples() {
        let f = closed_form_f(0.0, 0.0, 12).unwrap();
        for k in 1..=12 {
            assert!((f.h().coeff(k) - (1.0 + k as f64) / 2.0).norm() < 1e-15);
        }
        let a = 0.3;
        let c = (1.0 - a) / (1.0 + a);
        let f = closed_form_f(a, 0.0, 12).unwrap();
        for k in 1..=12 {
            let expected = 0.5 * (1.0 - c * k as f64);
            assert!((f.g().coeff(k) - expected).norm() < 1e-15);
        }
        let m = minus_closed_form_f(0.0, 0.0, 12).unwrap();
        for k in 1..=12 {
            let kf = k as f64;
            assert!((m.h().coeff(k) - (kf + 1.0) / 2.0).norm() < 1e-15);
            assert!((m.g().coeff(k) - (kf - 1.0) / 2.0).norm() < 1e-15);
        }
        let cusp = build_family(&FamilySpec::new(Family::CuspFc, 12)).unwrap();
        assert!(cusp.h().max_abs_diff(m.h()) < 1e-12);
        assert!(cusp.g().max_abs_diff(m.g()) < 1e-12);
        assert!(closed_form_f(1.0, 0.0, 4).is_err());
        assert!(minus_closed_form_f(-1.0, 0.0, 4).is_err());
    }

    #[test]
    fn closed_form_matches_shear() {
        for &(a, alpha) in &[(0.2, 0.0), (-0.6, 1.3), (0.85, 4.0)] {
            let cf = closed_form_f(a, alpha, N).unwrap();
            let sh = build_family(&FamilySpec::new(Family::SlantedFaAlpha { a, alpha }, N)).unwrap();
            assert!(cf.h().max_abs_diff(sh.h()) < 1e-9);
            assert!(cf.g().max_abs_diff(sh.g()) < 1e-9);
            assert!((sh.g_prime_at_zero() - sh.h().coeff(1) * cis(2.0 * alpha) * a).norm() < 1e-12);
        }
        for &(b, alpha) in &[(0.0, 0.0), (-0.7, 2.0), (0.5, 5.9)] {
            let cf = minus_closed_form_f(b, alpha, N).unwrap();
            let sh = build_family(&FamilySpec::new(Family::MinusFbAlpha { b, alpha }, N)).unwrap();
            assert!(cf.h().max_abs_diff(sh.h()) < 1e-9);
            assert!(cf.g().max_abs_diff(sh.g()) < 1e-9);
        }
    }

    #[test]
    fn range_violations() {
        let bad = [
            Family::HalfPlaneFa { a: 1.5 },
            Family::SlantedFaAlpha { a: 0.1, alpha: 7.0 },
            Family::StripV {
                beta: 0.0,
                theta: 0.0,
                n: 1,
            },
            Family::PlusT {
                eta: 1.0,
                gamma: 0.0,
                theta: 0.0,
                n: 0,
            },
            Family::MinusFbAlpha { b: -1.0, alpha: 0.0 },
        ];
        for fam in bad {
            assert!(build_family(&FamilySpec::new(fam, 8)).is_err(), "{fam:?}");
        }
        assert!(matches!(
            Family::StripV {
                beta: PI,
                theta: 0.0,
                n: 1
            }
            .validate(),
            Err(Error::DegenerateStrip { .. })
        ));
    }

    #[test]
    fn text_form_round_trips() {
        let fams = [
            Family::StandardF0,
            Family::HalfPlaneFa { a: -0.25 },
            Family::SlantedFaAlpha { a: 0.5, alpha: 1.0 },
            Family::SlantedTarget {
                gamma: PI / 4.0,
                theta: 0.1,
                n: 2,
            },
            Family::StripV {
                beta: 2.0,
                theta: 0.0,
                n: 3,
            },
            Family::PlusT {
                eta: PI,
                gamma: 0.3,
                theta: PI / 3.0,
                n: 4,
            },
            Family::MinusT {
                eta: 1.9,
                gamma: 0.0,
                theta: 0.0,
                n: 1,
            },
            Family::MinusFbAlpha { b: 0.1, alpha: 0.2 },
            Family::CuspFc,
        ];
        for fam in fams {
            let text = fam.to_string();
            assert_eq!(text.parse::<Family>().unwrap(), fam, "{text}");
        }
        assert_eq!(
            "plus-t(eta=pi, n=2)".parse::<Family>().unwrap(),
            Family::PlusT {
                eta: PI,
                gamma: 0.0,
                theta: 0.0,
                n: 2
            }
        );
        assert!("plus-t(gamma=0)".parse::<Family>().is_err());
        assert!("standard-f0(a=1)".parse::<Family>().is_err());
        assert!("koebe".parse::<Family>().is_err());
        assert!("half-plane-fa(a=0.1".parse::<Family>().is_err());
    }
}
