//! Parameter sweeps over theorem presets.

use shearconv_core::verify::{format_float, run_checks, VerifyOptions};
use shearconv_core::{parse_angle, Sign, TheoremId, TheoremParams, Verdict};

use crate::error::{CliError, CliResult};

/// Parses a value, an inclusive `start:stop:step` range, or a comma list.
/// The result is sorted ascending with duplicates removed.
pub fn parse_values(text: &str, name: &str, parse: impl Fn(&str) -> Option<f64>) -> CliResult<Vec<f64>> {
    let bad = |what: &str| CliError::Usage(format!("--{name}: {what} in `{text}`"));
    let num = |s: &str| parse(s.trim()).ok_or_else(|| bad(&format!("`{}` is not a number", s.trim())));
    let mut values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(bad("a range needs start:stop:step"));
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if !(step > 0.0) || !step.is_finite() {
            return Err(bad("step must be positive"));
        }
        if stop < start {
            Vec::new()
        } else {
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count)
                .map(|k| tidy(start + step * k as f64))
                .collect()
        }
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(num)
            .collect::<CliResult<Vec<f64>>>()?
    };
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(values)
}

/// Rounds away accumulated step error below twelve decimals.
fn tidy(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn angle(s: &str) -> Option<f64> {
    parse_angle(s).ok()
}

/// One axis of the sweep; `None` lets the preset choose.
type Axis = Vec<Option<f64>>;

fn axis(text: Option<&str>, name: &str, parse: impl Fn(&str) -> Option<f64>) -> CliResult<Axis> {
    match text {
        None => Ok(vec![None]),
        Some(t) => Ok(parse_values(t, name, parse)?.into_iter().map(Some).collect()),
    }
}

pub struct SweepRequest<'a> {
    pub theorem: TheoremId,
    pub coef: Option<&'a str>,
    pub alpha: Option<&'a str>,
    pub gamma: Option<&'a str>,
    pub eta: Option<&'a str>,
    pub theta: Option<&'a str>,
    pub n: Option<&'a str>,
}

pub struct SweepOutcome {
    pub csv: String,
    pub exit_code: i32,
    pub rows: usize,
}

pub fn run_sweep(req: &SweepRequest<'_>, options: &VerifyOptions) -> CliResult<SweepOutcome> {
    let coef_name = match req.theorem.setting() {
        Sign::Plus => "a",
        Sign::Minus => "b",
    };
    let coefs = axis(req.coef, coef_name, real)?;
    let alphas = axis(req.alpha, "alpha", angle)?;
    let gammas = axis(req.gamma, "gamma", angle)?;
    let etas = axis(req.eta, "eta", angle)?;
    let thetas = axis(req.theta, "theta", angle)?;
    let ns = axis(req.n, "n", |s| {
        s.parse::<u32>().ok().filter(|&n| n >= 1).map(f64::from)
    })?;
    if ns.iter().flatten().any(|v| v.fract() != 0.0) {
        return Err(CliError::Usage("--n: values must be natural numbers".into()));
    }

    let mut w = crate::table::new_writer();
    w.write_record([
        "theorem",
        coef_name,
        "alpha",
        "gamma",
        "eta",
        "theta",
        "n",
        "in_hypothesis",
        "verdict",
        "worst_check",
        "margin",
        "witness_re",
        "witness_im",
        "value",
    ])
    .map_err(crate::table::csv_error)?;

    let mut any_fail = false;
    let mut any_inconclusive = false;
    let mut rows = 0;
    for &coef in &coefs {
        for &alpha in &alphas {
            for &gamma in &gammas {
                for &eta in &etas {
                    for &theta in &thetas {
                        for &n in &ns {
                            let mut params = TheoremParams {
                                alpha,
                                gamma,
                                eta,
                                theta,
                                n: n.map(|v| v as u32),
                                ..TheoremParams::default()
                            };
                            match req.theorem.setting() {
                                Sign::Plus => params.a = coef,
                                Sign::Minus => params.b = coef,
                            }
                            let in_hyp = req.theorem.resolve(&params).is_ok();
                            let record = match req.theorem.resolve_unchecked(&params) {
                                Ok(pair) => {
                                    let bundle = run_checks(req.theorem, &pair, in_hyp, options)?;
                                    let verdict = bundle.verdict();
                                    if in_hyp {
                                        any_fail |= verdict == Verdict::Fail;
                                        any_inconclusive |= verdict == Verdict::Inconclusive;
                                    }
                                    let worst = bundle
                                        .reports
                                        .iter()
                                        .filter(|r| r.verdict == verdict)
                                        .min_by(|x, y| x.margin.total_cmp(&y.margin))
                                        .or_else(|| bundle.reports.first())
                                        .expect("bundle has reports");
                                    vec![
                                        req.theorem.to_string(),
                                        format_float(pair.coef),
                                        format_float(pair.alpha),
                                        format_float(pair.gamma),
                                        format_float(pair.eta),
                                        format_float(pair.theta),
                                        pair.n.to_string(),
                                        in_hyp.to_string(),
                                        verdict.to_string(),
                                        worst.check_name.clone(),
                                        format_float(worst.margin),
                                        format_float(worst.worst_witness.z.re),
                                        format_float(worst.worst_witness.z.im),
                                        format_float(worst.worst_witness.value),
                                    ]
                                }
                                Err(e) => {
                                    let show = |v: Option<f64>| v.map(format_float).unwrap_or_default();
                                    vec![
                                        req.theorem.to_string(),
                                        show(coef),
                                        show(alpha),
                                        show(gamma),
                                        show(eta),
                                        show(theta),
                                        n.map(|v| (v as u32).to_string()).unwrap_or_default(),
                                        "false".into(),
                                        "invalid".into(),
                                        e.to_string(),
                                        String::new(),
                                        String::new(),
                                        String::new(),
                                        String::new(),
                                    ]
                                }
                            };
                            w.write_record(&record).map_err(crate::table::csv_error)?;
                            rows += 1;
                        }
                    }
                }
            }
        }
    }
    let exit_code = if any_fail {
        crate::error::EXIT_FAILURE
    } else if any_inconclusive {
        crate::error::EXIT_INCONCLUSIVE
    } else {
        crate::error::EXIT_PASS
    };
    Ok(SweepOutcome {
        csv: crate::table::finish(w)?,
        exit_code,
        rows,
    })
}
