//! Numerical verification: grid scans of dilatation, Jacobian and the
//! real-part condition, convexity-in-direction of boundary curves, and
//! theorem presets that run all of them on one convolution.
//!
//! Every strict inequality is certified with a tolerance on a finite grid
//! and the report keeps the margin, so parameters sitting on the closure of
//! an admissible range stay distinguishable from failures.
//!
//! Scans are deterministic: the worst point is selected by value, with ties
//! broken by the lexicographically smallest witness `(re, im)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::convolution::{order_for_radius, ConvolutionPair};
use crate::error::{Error, Result};
use crate::harmonic::MapEvaluator;
use crate::series::{AnalyticFunction, Sign};

pub const DEFAULT_RADII: [f64; 7] = [0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.995];
pub const DEFAULT_ANGULAR_COUNT: usize = 2048;
/// Slack for the strict `< 1` dilatation bound and the `> 0` real-part bound.
pub const STRICT_TOLERANCE: f64 = 1e-9;
/// Consecutive boundary samples closer than this in the probed coordinate
/// are merged into one plateau.
pub const PLATEAU_EPS: f64 = 1e-10;
pub const CLOSURE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    radii: Vec<f64>,
    angular_count: usize,
}

impl GridSpec {
    pub fn new(radii: Vec<f64>, angular_count: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Precondition("grid needs at least one radius".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::Precondition("grid radii must lie in (0, 1)".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "grid radii must be strictly increasing".into(),
            ));
        }
        if angular_count < 64 {
            return Err(Error::Precondition(
                "grid needs at least 64 samples per circle".into(),
            ));
        }
        Ok(Self {
            radii,
            angular_count,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    /// The sub-grid of radii not exceeding `r_max`.
    pub fn restricted(&self, r_max: f64) -> Option<Self> {
        let radii: Vec<f64> = self.radii.iter().copied().filter(|&r| r <= r_max).collect();
        if radii.is_empty() {
            None
        } else {
            Some(Self {
                radii,
                angular_count: self.angular_count,
            })
        }
    }

    /// Grid points, radius-major, angles `2πj/m` ascending.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let m = self.angular_count;
        self.radii.iter().flat_map(move |&r| {
            (0..m).map(move |j| Complex64::from_polar(r, TAU * j as f64 / m as f64))
        })
    }

    pub fn description(&self) -> String {
        let radii: Vec<String> = self.radii.iter().map(|r| r.to_string()).collect();
        format!("radii={} angles={}", radii.join(";"), self.angular_count)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            angular_count: DEFAULT_ANGULAR_COUNT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub z: Complex64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub check_name: String,
    pub verdict: Verdict,
    pub worst_witness: Witness,
    /// Signed distance to the threshold; positive exactly when the check
    /// passes.
    pub margin: f64,
    pub grid: String,
    pub notes: String,
}

pub const REPORT_CSV_HEADER: &str = "check_name,verdict,margin,witness_re,witness_im,value,grid";

/// 17 significant digits, so every `f64` round-trips through text.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl VerificationReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.check_name,
            self.verdict,
            format_float(self.margin),
            format_float(self.worst_witness.z.re),
            format_float(self.worst_witness.z.im),
            format_float(self.worst_witness.value),
            self.grid
        )
    }
}

/// Header plus one LF-terminated row per report.
pub fn reports_to_csv<'a>(reports: impl IntoIterator<Item = &'a VerificationReport>) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Running extremum with deterministic tie-breaking.
struct Extremum {
    best: Option<(f64, Complex64)>,
    want_max: bool,
}

impl Extremum {
    fn min() -> Self {
        Self {
            best: None,
            want_max: false,
        }
    }

    fn max() -> Self {
        Self {
            best: None,
            want_max: true,
        }
    }

    fn offer(&mut self, value: f64, z: Complex64) {
        let replace = match self.best {
            None => true,
            Some((v, w)) => {
                let better = if self.want_max { value > v } else { value < v };
                better || (value == v && (z.re, z.im) < (w.re, w.im))
            }
        };
        if replace {
            self.best = Some((value, z));
        }
    }
}

/// Both sides of the equivalence `|k + w| < |k' + w|  ⟺  Re w > -(k + k')/2`
/// for `k' > k`, evaluated independently.
pub fn lemma21_equiv(k: f64, k_prime: f64, w: Complex64) -> Result<(bool, bool)> {
    if !(k_prime - k > 0.0) {
        return Err(Error::Precondition(format!(
            "need k' - k > 0, got k = {k}, k' = {k_prime}"
        )));
    }
    let left = (k + w).norm() < (k_prime + w).norm();
    let right = w.re > -(k + k_prime) / 2.0;
    Ok((left, right))
}

/// `min Re{n + 2 + 2 z R''(z) / R'(z)}` over the grid; passes when the
/// minimum exceeds `floor`.
pub fn re_condition_scan<F: AnalyticFunction>(
    r_prime: &F,
    n: u32,
    grid: &GridSpec,
    floor: f64,
) -> VerificationReport {
    let mut worst = Extremum::min();
    for z in grid.points() {
        let (v, d) = r_prime.value_and_derivative(z);
        let q = n as f64 + 2.0 + 2.0 * z * d / v;
        if v.norm() == 0.0 || !q.re.is_finite() {
            return VerificationReport {
                check_name: "re_condition".into(),
                verdict: Verdict::Inconclusive,
                worst_witness: Witness {
                    z,
                    value: f64::NAN,
                },
                margin: f64::NAN,
                grid: grid.description(),
                notes: "R' vanishes or is singular on the grid".into(),
            };
        }
        worst.offer(q.re, z);
    }
    let (value, z) = worst.best.expect("grid is nonempty");
    let margin = value - floor;
    VerificationReport {
        check_name: "re_condition".into(),
        verdict: if margin > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_witness: Witness { z, value },
        margin,
        grid: grid.description(),
        notes: String::new(),
    }
}

/// Per-radius supremum of `|w|`, in grid order.
pub fn sup_by_radius(w: impl Fn(Complex64) -> Complex64, grid: &GridSpec) -> Vec<(f64, f64)> {
    let m = grid.angular_count();
    grid.radii()
        .iter()
        .map(|&r| {
            let sup = (0..m)
                .map(|j| w(Complex64::from_polar(r, TAU * j as f64 / m as f64)).norm())
                .fold(0.0, f64::max);
            (r, sup)
        })
        .collect()
}

/// `sup |W|` over the grid; passes when below `1 - tolerance`.
pub fn dilatation_sup_scan(
    w: impl Fn(Complex64) -> Complex64,
    grid: &GridSpec,
    tolerance: f64,
) -> VerificationReport {
    let mut worst = Extremum::max();
    let m = grid.angular_count();
    let mut per_radius = Vec::with_capacity(grid.radii().len());
    for &r in grid.radii() {
        let mut circle_sup = 0.0f64;
        for j in 0..m {
            let z = Complex64::from_polar(r, TAU * j as f64 / m as f64);
            let value = w(z).norm();
            if !value.is_finite() {
                return VerificationReport {
                    check_name: "dilatation_sup".into(),
                    verdict: Verdict::Inconclusive,
                    worst_witness: Witness { z, value },
                    margin: f64::NAN,
                    grid: grid.description(),
                    notes: "dilatation not finite on the grid".into(),
                };
            }
            circle_sup = circle_sup.max(value);
            worst.offer(value, z);
        }
        per_radius.push(circle_sup);
    }
    let (value, z) = worst.best.expect("grid is nonempty");
    let margin = (1.0 - tolerance) - value;
    let mut notes = Vec::new();
    if per_radius
        .windows(2)
        .any(|p| p[1] < p[0] * (1.0 - 1e-12) - 1e-15)
    {
        notes.push("sup over circles decreases with r: truncation error suspected");
    }
    if margin > 0.0 && margin < 1e-2 {
        notes.push("near the bound: maximum modulus puts the sup on the outer circle");
    }
    VerificationReport {
        check_name: "dilatation_sup".into(),
        verdict: if margin > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_witness: Witness { z, value },
        margin,
        grid: grid.description(),
        notes: notes.join("; "),
    }
}

/// `min J_f` over the grid; passes when positive.
pub fn jacobian_min_scan<M: MapEvaluator + ?Sized>(f: &M, grid: &GridSpec) -> VerificationReport {
    let mut worst = Extremum::min();
    for z in grid.points() {
        let j = f.jacobian(z);
        if !j.is_finite() {
            return VerificationReport {
                check_name: "jacobian_min".into(),
                verdict: Verdict::Inconclusive,
                worst_witness: Witness { z, value: j },
                margin: f64::NAN,
                grid: grid.description(),
                notes: "Jacobian not finite on the grid".into(),
            };
        }
        worst.offer(j, z);
    }
    let (value, z) = worst.best.expect("grid is nonempty");
    VerificationReport {
        check_name: "jacobian_min".into(),
        verdict: if value > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_witness: Witness { z, value },
        margin: value,
        grid: grid.description(),
        notes: String::new(),
    }
}

/// Number of monotonicity reversals of a periodic sampled sequence after
/// merging plateaus, with the sample indices at which they occur.
pub fn count_reversals(y: &[f64], plateau: f64) -> (usize, Vec<usize>) {
    let m = y.len();
    let steps: Vec<(usize, bool)> = (0..m)
        .filter_map(|j| {
            let d = y[(j + 1) % m] - y[j];
            (d.abs() >= plateau).then_some((j, d > 0.0))
        })
        .collect();
    let mut at = Vec::new();
    for i in 0..steps.len() {
        let (_, up) = steps[i];
        let (next_j, next_up) = steps[(i + 1) % steps.len()];
        if up != next_up {
            at.push(next_j);
        }
    }
    at.sort_unstable();
    (at.len(), at)
}

/// Checks that the image of `|z| = r` meets every line parallel to
/// `e^{iψ}` at most twice: the coordinate `Im(e^{-iψ} f(r e^{it}))` must
/// have exactly one maximum and one minimum over a period.
///
/// The witness carries the reversal count as its value; the margin is
/// `3 - count`, so it is positive exactly for a pass.
pub fn direction_convexity_check<M: MapEvaluator + ?Sized>(
    f: &M,
    psi: f64,
    r: f64,
    samples: usize,
) -> VerificationReport {
    let grid = format!("r={r} samples={samples}");
    let inconclusive = |z: Complex64, value: f64, notes: String| VerificationReport {
        check_name: "direction_convexity".into(),
        verdict: Verdict::Inconclusive,
        worst_witness: Witness { z, value },
        margin: f64::NAN,
        grid: grid.clone(),
        notes,
    };
    if !(r > 0.0 && r < 1.0) || samples < 8 {
        return inconclusive(
            Complex64::new(r, 0.0),
            f64::NAN,
            "need 0 < r < 1 and at least 8 samples".into(),
        );
    }

    let values = f.circle_values(r, samples);
    let start = values[0];
    let end = f.value(Complex64::from_polar(r, TAU));
    let drift = (end - start).norm();
    if !(drift <= CLOSURE_TOLERANCE * start.norm().max(1.0)) {
        return inconclusive(
            Complex64::new(r, 0.0),
            drift,
            format!("boundary curve does not close: drift {drift:e}"),
        );
    }

    let rot = Complex64::from_polar(1.0, -psi);
    let y: Vec<f64> = values.iter().map(|v| (rot * v).im).collect();
    if y.iter().any(|v| !v.is_finite()) {
        return inconclusive(
            Complex64::new(r, 0.0),
            f64::NAN,
            "boundary curve not finite".into(),
        );
    }
    let (count, at) = count_reversals(&y, PLATEAU_EPS);
    let point = |j: usize| Complex64::from_polar(r, TAU * j as f64 / samples as f64);
    if count == 0 || count % 2 == 1 {
        return inconclusive(
            Complex64::new(r, 0.0),
            count as f64,
            format!("{count} reversals: sampling artifact"),
        );
    }
    let (verdict, z) = if count == 2 {
        let j_max = (0..samples)
            .max_by(|&a, &b| y[a].total_cmp(&y[b]).then(b.cmp(&a)))
            .expect("samples nonempty");
        (Verdict::Pass, point(j_max))
    } else {
        (Verdict::Fail, point(at[2]))
    };
    VerificationReport {
        check_name: "direction_convexity".into(),
        verdict,
        worst_witness: Witness {
            z,
            value: count as f64,
        },
        margin: 3.0 - count as f64,
        grid,
        notes: format!("psi={psi}"),
    }
}

/// `max |a(z) - b(z)|` over the grid; passes below `tolerance`.
pub fn agreement_scan(
    name: &str,
    a: impl Fn(Complex64) -> Complex64,
    b: impl Fn(Complex64) -> Complex64,
    grid: &GridSpec,
    tolerance: f64,
) -> VerificationReport {
    let mut worst = Extremum::max();
    for z in grid.points() {
        let d = (a(z) - b(z)).norm();
        worst.offer(if d.is_nan() { f64::INFINITY } else { d }, z);
    }
    let (value, z) = worst.best.expect("grid is nonempty");
    let margin = tolerance - value;
    VerificationReport {
        check_name: name.into(),
        verdict: if margin > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_witness: Witness { z, value },
        margin,
        grid: grid.description(),
        notes: String::new(),
    }
}

/// Scans the explicit `ŵ` for every coefficient in `coefs` (`a` for plus,
/// `b` for minus). Reports only; nothing outside the proven range is
/// asserted.
pub fn counterexample_search(
    setting: Sign,
    eta: f64,
    gamma: f64,
    theta: f64,
    n: u32,
    coefs: &[f64],
    grid: &GridSpec,
) -> Result<Vec<VerificationReport>> {
    coefs
        .iter()
        .map(|&coef| {
            let pair = ConvolutionPair {
                setting,
                coef,
                alpha: 0.0,
                eta,
                gamma,
                theta,
                n,
            };
            pair.validate()?;
            let closed = pair.closed_form();
            let mut report = dilatation_sup_scan(|z| closed.w_hat(z), grid, STRICT_TOLERANCE);
            let name = match setting {
                Sign::Plus => "a",
                Sign::Minus => "b",
            };
            report.check_name = format!("w_hat_sup[{name}={coef}]");
            Ok(report)
        })
        .collect()
}

/// Theorem presets: the two general convolution theorems and their
/// specializations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// Slanted Möbius half-plane map convolved with `T_(η,γ)`.
    T2_3,
    /// Minus-sheared map `f_(b,α)` convolved with `t_(η,γ)`.
    T3_2,
    /// `F_0 ⊛` half-plane map with dilatation `e^{iθ}z^n`, `n = 1, 2`.
    T1_3,
    /// `F_0 ⊛ V_β`, `β ∈ [π/2, π)`, `n = 1, 2`.
    T1_4,
    /// `F_0 ⊛ f_γ`, `n = 1, 2`.
    T1_5,
    /// `F_a ⊛` half-plane map, `a ∈ [(n-2)/(n+2), 1)`.
    T1_6,
    /// `F_a ⊛ V_β`, `β ∈ (0, π)`.
    T1_7,
    /// `F_(a,α) ⊛ f_γ`.
    T1_8,
    /// `f_c ⊛ f_n` with strip target of angle `ψ ∈ [π/2, π)`, `n = 1, 2`.
    T1_9,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::T2_3,
        TheoremId::T3_2,
        TheoremId::T1_3,
        TheoremId::T1_4,
        TheoremId::T1_5,
        TheoremId::T1_6,
        TheoremId::T1_7,
        TheoremId::T1_8,
        TheoremId::T1_9,
    ];

    pub fn setting(self) -> Sign {
        match self {
            TheoremId::T3_2 | TheoremId::T1_9 => Sign::Minus,
            _ => Sign::Plus,
        }
    }

    fn label(self) -> &'static str {
        match self {
            TheoremId::T2_3 => "t2.3",
            TheoremId::T3_2 => "t3.2",
            TheoremId::T1_3 => "t1.3",
            TheoremId::T1_4 => "t1.4",
            TheoremId::T1_5 => "t1.5",
            TheoremId::T1_6 => "t1.6",
            TheoremId::T1_7 => "t1.7",
            TheoremId::T1_8 => "t1.8",
            TheoremId::T1_9 => "t1.9",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix('t').unwrap_or(&key);
        TheoremId::ALL
            .into_iter()
            .find(|t| &t.label()[1..] == key)
            .ok_or_else(|| Error::Parse(format!("unknown theorem `{s}`")))
    }
}

/// User-supplied theorem parameters; `None` means "use the preset value or
/// the default".
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TheoremParams {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub eta: Option<f64>,
    pub theta: Option<f64>,
    pub n: Option<u32>,
}

struct Resolver {
    theorem: TheoremId,
    params: TheoremParams,
    violations: Vec<String>,
}

impl Resolver {
    fn fixed(&mut self, name: &str, given: Option<f64>, value: f64) -> f64 {
        if let Some(v) = given {
            if v != value {
                self.violations
                    .push(format!("{name} is fixed at {value} for {}, got {v}", self.theorem));
            }
        }
        value
    }

    fn required(&mut self, name: &str, given: Option<f64>) -> f64 {
        given.unwrap_or_else(|| {
            self.violations
                .push(format!("{} requires {name}", self.theorem));
            f64::NAN
        })
    }

    fn reject(&mut self, name: &str, given: Option<f64>) {
        if given.is_some() {
            self.violations
                .push(format!("{} takes no parameter {name}", self.theorem));
        }
    }

    fn check(&mut self, ok: bool, message: String) {
        if !ok {
            self.violations.push(message);
        }
    }

    /// Builds the pair. `strict` adds the theorem's range hypotheses on top
    /// of the structural requirements.
    fn resolve(mut self, strict: bool) -> Result<ConvolutionPair> {
        use TheoremId::*;
        let t = self.theorem;
        let p = self.params;
        let n = p.n.unwrap_or(1);
        let theta = p.theta.unwrap_or(0.0);

        match t.setting() {
            Sign::Plus => self.reject("b", p.b),
            Sign::Minus => self.reject("a", p.a),
        }
        let (coef, alpha, gamma, eta) = match t {
            T2_3 => (
                self.required("a", p.a),
                p.alpha.unwrap_or(0.0),
                p.gamma.unwrap_or(0.0),
                p.eta.unwrap_or(PI),
            ),
            T3_2 => (
                self.required("b", p.b),
                p.alpha.unwrap_or(0.0),
                p.gamma.unwrap_or(0.0),
                p.eta.unwrap_or(PI),
            ),
            T1_3 => (
                self.fixed("a", p.a, 0.0),
                self.fixed("alpha", p.alpha, 0.0),
                self.fixed("gamma", p.gamma, 0.0),
                self.fixed("eta", p.eta, PI),
            ),
            T1_4 => (
                self.fixed("a", p.a, 0.0),
                self.fixed("alpha", p.alpha, 0.0),
                self.fixed("gamma", p.gamma, 0.0),
                self.required("beta", p.eta),
            ),
            T1_5 => (
                self.fixed("a", p.a, 0.0),
                self.fixed("alpha", p.alpha, 0.0),
                p.gamma.unwrap_or(0.0),
                self.fixed("eta", p.eta, PI),
            ),
            T1_6 => (
                self.required("a", p.a),
                self.fixed("alpha", p.alpha, 0.0),
                self.fixed("gamma", p.gamma, 0.0),
                self.fixed("eta", p.eta, PI),
            ),
            T1_7 => (
                self.required("a", p.a),
                self.fixed("alpha", p.alpha, 0.0),
                self.fixed("gamma", p.gamma, 0.0),
                self.required("beta", p.eta),
            ),
            T1_8 => (
                self.required("a", p.a),
                p.alpha.unwrap_or(0.0),
                p.gamma.unwrap_or(0.0),
                self.fixed("eta", p.eta, PI),
            ),
            T1_9 => (
                self.fixed("b", p.b, 0.0),
                self.fixed("alpha", p.alpha, 0.0),
                self.fixed("gamma", p.gamma, 0.0),
                self.required("psi", p.eta),
            ),
        };

        if strict {
            let bound = ConvolutionPair::boundary_coef(t.setting(), n);
            match t.setting() {
                Sign::Plus => self.check(
                    coef >= bound - 1e-12 && coef < 1.0,
                    format!("a = {coef} outside [(n-2)/(n+2), 1) = [{bound}, 1)"),
                ),
                Sign::Minus => self.check(
                    coef > -1.0 && coef <= bound + 1e-12,
                    format!("b = {coef} outside (-1, -(n-2)/(n+2)] = (-1, {bound}]"),
                ),
            }
            match t {
                T1_3 | T1_4 | T1_5 | T1_9 => {
                    self.check(n == 1 || n == 2, format!("{t} needs n in {{1, 2}}, got {n}"))
                }
                _ => {}
            }
            match t {
                T1_4 => self.check(
                    (PI / 2.0..PI).contains(&eta),
                    format!("beta = {eta} outside [pi/2, pi)"),
                ),
                T1_9 => self.check(
                    (PI / 2.0..PI).contains(&eta),
                    format!("psi = {eta} outside [pi/2, pi)"),
                ),
                T1_7 => self.check(
                    eta > 0.0 && eta < PI,
                    format!("beta = {eta} outside (0, pi)"),
                ),
                _ => {}
            }
        }

        if !self.violations.is_empty() {
            return Err(Error::Hypothesis {
                theorem: t.to_string(),
                detail: self.violations.join("; "),
            });
        }
        let pair = ConvolutionPair {
            setting: t.setting(),
            coef,
            alpha,
            eta,
            gamma,
            theta,
            n,
        };
        pair.validate()?;
        Ok(pair)
    }
}

impl TheoremId {
    /// The convolution instance, with the theorem's hypotheses enforced.
    pub fn resolve(self, params: &TheoremParams) -> Result<ConvolutionPair> {
        Resolver {
            theorem: self,
            params: *params,
            violations: Vec::new(),
        }
        .resolve(true)
    }

    /// The convolution instance without the range hypotheses, for
    /// exploration outside the proven region.
    pub fn resolve_unchecked(self, params: &TheoremParams) -> Result<ConvolutionPair> {
        Resolver {
            theorem: self,
            params: *params,
            violations: Vec::new(),
        }
        .resolve(false)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub grid: GridSpec,
    pub convexity_radius: f64,
    pub convexity_samples: usize,
    /// Retries with doubled samples when the convexity check is inconclusive.
    pub max_doublings: u32,
    /// Series order for boundary values; `None` picks one from the radius.
    pub order: Option<usize>,
    pub tolerance: f64,
    /// Radius up to which series and closed-form dilatations are compared.
    pub consistency_radius: f64,
    pub consistency_tolerance: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            convexity_radius: 0.99,
            convexity_samples: 8192,
            max_doublings: 3,
            order: None,
            tolerance: STRICT_TOLERANCE,
            consistency_radius: 0.9,
            consistency_tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportBundle {
    pub theorem: TheoremId,
    pub pair: ConvolutionPair,
    pub in_hypothesis: bool,
    pub reports: Vec<VerificationReport>,
}

impl ReportBundle {
    pub fn verdict(&self) -> Verdict {
        if self.reports.iter().any(|r| r.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self.reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn min_margin(&self) -> f64 {
        self.reports
            .iter()
            .map(|r| r.margin)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn report(&self, name: &str) -> Option<&VerificationReport> {
        self.reports.iter().find(|r| r.check_name == name)
    }

    pub fn to_csv(&self) -> String {
        reports_to_csv(&self.reports)
    }
}

/// Runs every check on the convolution described by `pair`.
pub fn run_checks(
    theorem: TheoremId,
    pair: &ConvolutionPair,
    in_hypothesis: bool,
    options: &VerifyOptions,
) -> Result<ReportBundle> {
    let grid = &options.grid;
    let closed = pair.closed_form();
    let order = options
        .order
        .unwrap_or_else(|| order_for_radius(options.convexity_radius, 1e-9));
    let map = pair.convolved_map(order)?;

    let mut reports = vec![
        dilatation_sup_scan(|z| closed.w(z), grid, options.tolerance),
        jacobian_min_scan(&closed, grid),
        re_condition_scan(&pair.sheared_derivative(), pair.n, grid, options.tolerance),
    ];

    let psi = pair.direction();
    let mut samples = options.convexity_samples;
    let mut convexity =
        direction_convexity_check(&map, psi, options.convexity_radius, samples);
    for _ in 0..options.max_doublings {
        if convexity.verdict != Verdict::Inconclusive {
            break;
        }
        samples *= 2;
        convexity = direction_convexity_check(&map, psi, options.convexity_radius, samples);
    }
    convexity.notes = format!("{} order={order}", convexity.notes);
    reports.push(convexity);

    if let Some(sub) = grid.restricted(options.consistency_radius) {
        reports.push(series_consistency(&map, &sub, options.consistency_tolerance));
    }

    Ok(ReportBundle {
        theorem,
        pair: *pair,
        in_hypothesis,
        reports,
    })
}

/// Compares the dilatation of the convolved series (summed by FFT per
/// circle) against the closed form.
fn series_consistency(
    map: &crate::convolution::ConvolvedMap,
    grid: &GridSpec,
    tolerance: f64,
) -> VerificationReport {
    let m = grid.angular_count();
    let hp = map.series.h().differentiate();
    let gp = map.series.g().differentiate();
    let mut worst = Extremum::max();
    for &r in grid.radii() {
        let h = hp.sample_circle(r, m);
        let g = gp.sample_circle(r, m);
        for j in 0..m {
            let z = Complex64::from_polar(r, TAU * j as f64 / m as f64);
            let d = (g[j] / h[j] - map.closed.w(z)).norm();
            worst.offer(if d.is_nan() { f64::INFINITY } else { d }, z);
        }
    }
    let (value, z) = worst.best.expect("grid is nonempty");
    let margin = tolerance - value;
    VerificationReport {
        check_name: "series_consistency".into(),
        verdict: if margin > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_witness: Witness { z, value },
        margin,
        grid: grid.description(),
        notes: format!("order={}", map.series.order()),
    }
}

/// Resolves the theorem instance (hypotheses enforced) and runs all checks.
pub fn verify_theorem(
    theorem: TheoremId,
    params: &TheoremParams,
    options: &VerifyOptions,
) -> Result<ReportBundle> {
    let pair = theorem.resolve(params)?;
    run_checks(theorem, &pair, true, options)
}
