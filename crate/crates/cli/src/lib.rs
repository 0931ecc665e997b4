//! Command-line front end for `shearconv-core`.
//!
//! Exit codes: 0 pass, 1 runtime failure or failed check, 2 configuration
//! error, 3 inconclusive verdict.

pub mod args;
pub mod config;
pub mod error;
pub mod render;
pub mod sweep;
pub mod table;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use shearconv_core::convolution::order_for_radius;
use shearconv_core::verify::{
    dilatation_sup_scan, direction_convexity_check, jacobian_min_scan, reports_to_csv,
    VerifyOptions, DEFAULT_RADII,
};
use shearconv_core::{
    convolve_maps, verify_theorem, Family, FamilySpec, GridSpec, HarmonicMap, MapEvaluator,
    TheoremId, TheoremParams, Verdict, VerificationReport, DEFAULT_ORDER,
};

use crate::args::{Cli, Command, ConvolveArgs, FamilyArgs, GridArgs, RenderArgs, SweepArgs, VerifyArgs};
use crate::error::{CliError, CliResult, EXIT_CONFIG, EXIT_FAILURE, EXIT_INCONCLUSIVE, EXIT_PASS};
use crate::render::RenderSpec;

/// Tail tolerance used to pick a series order when none is given.
const AUTO_ORDER_TOLERANCE: f64 = 1e-9;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match execute(args, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(args: Vec<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    let args = match config::config_path(&args)? {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::Usage(format!("config {}: {e}", Path::new(&path).display()))
            })?;
            let entries = config::parse_config(&text)?;
            config::merge(args, &entries)
        }
        None => args,
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            return Ok(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_CONFIG
                }
            })
        }
    };
    let order = cli.order;
    if order == Some(0) {
        return Err(CliError::Usage("--order must be at least 1".into()));
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Build(a) => cmd_build(a, order, out, stdout),
        Command::Convolve(a) => cmd_convolve(a, order, out, stdout),
        Command::Verify(a) => cmd_verify(a, order, out, stdout, stderr),
        Command::Sweep(a) => cmd_sweep(a, order, out, stdout, stderr),
        Command::Render(a) => cmd_render(a, order, out, stdout),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("stdout", e)),
    }
}

fn exit_for(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAILURE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn family_from_args(a: &FamilyArgs) -> CliResult<Family> {
    let text = a
        .family
        .as_deref()
        .ok_or_else(|| CliError::Usage("--family is required".into()))?;
    let flags = [
        ("a", &a.a),
        ("b", &a.b),
        ("alpha", &a.alpha),
        ("beta", &a.beta),
        ("gamma", &a.gamma),
        ("eta", &a.eta),
        ("theta", &a.theta),
        ("n", &a.n),
    ];
    let given: BTreeMap<String, String> = flags
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect();
    if text.contains('(') {
        if !given.is_empty() {
            return Err(CliError::Usage(
                "give family parameters either inline or as flags, not both".into(),
            ));
        }
        return Ok(text.parse()?);
    }
    Ok(Family::from_parts(text.trim(), &given)?)
}

fn build(family: Family, order: usize) -> CliResult<HarmonicMap> {
    let spec = FamilySpec::new(family, order);
    Ok(spec.build()?)
}

fn read_table(path: &Path) -> CliResult<HarmonicMap> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    table::read_map(file, &path.display().to_string())
}

fn cmd_build(a: &FamilyArgs, order: Option<usize>, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<i32> {
    let map = build(family_from_args(a)?, order.unwrap_or(DEFAULT_ORDER))?;
    emit(out, &table::write_map(&map)?, stdout)?;
    Ok(EXIT_PASS)
}

fn operand(
    text: &Option<String>,
    input: &Option<PathBuf>,
    side: &str,
    order: usize,
) -> CliResult<HarmonicMap> {
    match (text, input) {
        (Some(t), None) => build(t.parse()?, order),
        (None, Some(p)) => read_table(p),
        _ => Err(CliError::Usage(format!(
            "convolve needs exactly one of --{side} or --{side}-input"
        ))),
    }
}

fn cmd_convolve(a: &ConvolveArgs, order: Option<usize>, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<i32> {
    let order = order.unwrap_or(DEFAULT_ORDER);
    let left = operand(&a.left, &a.left_input, "left", order)?;
    let right = operand(&a.right, &a.right_input, "right", order)?;
    let map = convolve_maps(&left, &right);
    emit(out, &table::write_map(&map)?, stdout)?;
    Ok(EXIT_PASS)
}

fn grid_from_args(g: &GridArgs) -> CliResult<GridSpec> {
    let radii = match &g.radii {
        None => DEFAULT_RADII.to_vec(),
        Some(text) => text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("--radii: `{}` is not a number", s.trim())))
            })
            .collect::<CliResult<Vec<f64>>>()?,
    };
    let angles = g.angles.unwrap_or(shearconv_core::verify::DEFAULT_ANGULAR_COUNT);
    Ok(GridSpec::new(radii, angles)?)
}

fn options_from_args(g: &GridArgs, order: Option<usize>) -> CliResult<VerifyOptions> {
    if !(g.radius > 0.0 && g.radius < 1.0) {
        return Err(CliError::Usage(format!("--radius must lie in (0, 1), got {}", g.radius)));
    }
    if g.samples < 8 {
        return Err(CliError::Usage("--samples must be at least 8".into()));
    }
    Ok(VerifyOptions {
        grid: grid_from_args(g)?,
        convexity_radius: g.radius,
        convexity_samples: g.samples,
        order,
        ..VerifyOptions::default()
    })
}

fn summary(stderr: &mut dyn Write, label: &str, reports: &[VerificationReport], verdict: Verdict) {
    let margin = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let _ = writeln!(stderr, "{label}: {verdict} (min margin {margin:e})");
}

fn cmd_verify(
    a: &VerifyArgs,
    order: Option<usize>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<i32> {
    let options = options_from_args(&a.grid, order)?;
    if let Some(t) = &a.theorem {
        let theorem: TheoremId = t.parse()?;
        let params = TheoremParams {
            a: a.a,
            b: a.b,
            alpha: a.alpha,
            gamma: a.gamma,
            eta: a.eta.or(a.beta).or(a.psi),
            theta: a.theta,
            n: a.n,
        };
        let bundle = verify_theorem(theorem, &params, &options)?;
        emit(out, &bundle.to_csv(), stdout)?;
        summary(stderr, &theorem.to_string(), &bundle.reports, bundle.verdict());
        return Ok(exit_for(bundle.verdict()));
    }

    let theorem_only = [
        ("a", a.a.is_some()),
        ("b", a.b.is_some()),
        ("alpha", a.alpha.is_some()),
        ("gamma", a.gamma.is_some()),
        ("eta", a.eta.is_some()),
        ("beta", a.beta.is_some()),
        ("psi", a.psi.is_some()),
        ("theta", a.theta.is_some()),
        ("n", a.n.is_some()),
    ];
    if let Some((name, _)) = theorem_only.iter().find(|(_, given)| *given) {
        return Err(CliError::Usage(format!("--{name} only applies with --theorem")));
    }
    let needed_radius = options
        .grid
        .radii()
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(if a.direction.is_some() { options.convexity_radius } else { 0.0 });
    let (map, label) = match (&a.input, &a.family) {
        (Some(p), None) => (read_table(p)?, p.display().to_string()),
        (None, Some(f)) => {
            let family: Family = f.parse()?;
            let n = order.unwrap_or_else(|| order_for_radius(needed_radius, AUTO_ORDER_TOLERANCE));
            (build(family, n)?, family.to_string())
        }
        _ => {
            return Err(CliError::Usage(
                "verify needs --theorem, --input or --family".into(),
            ))
        }
    };

    // keep only radii the series order resolves, unless radii were given
    let grid = if a.grid.radii.is_some() {
        options.grid.clone()
    } else {
        let usable: Vec<f64> = options
            .grid
            .radii()
            .iter()
            .copied()
            .filter(|&r| order_for_radius(r, AUTO_ORDER_TOLERANCE) <= map.order().max(64))
            .collect();
        if usable.is_empty() {
            return Err(CliError::Usage(format!(
                "order {} is too low for every grid radius; raise --order or give --radii",
                map.order()
            )));
        }
        GridSpec::new(usable, options.grid.angular_count())?
    };
    let mut reports = vec![
        jacobian_min_scan(&map, &grid),
        dilatation_sup_scan(|z| map.dilatation(z), &grid, options.tolerance),
    ];
    if let Some(psi) = a.direction {
        let need = order_for_radius(options.convexity_radius, AUTO_ORDER_TOLERANCE);
        if map.order() < need {
            return Err(CliError::Usage(format!(
                "order {} is too low for radius {} (need {need})",
                map.order(),
                options.convexity_radius
            )));
        }
        reports.push(direction_convexity_check(
            &map,
            psi,
            options.convexity_radius,
            options.convexity_samples,
        ));
    }
    let verdict = if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    emit(out, &reports_to_csv(&reports), stdout)?;
    summary(stderr, &label, &reports, verdict);
    Ok(exit_for(verdict))
}

fn cmd_sweep(
    a: &SweepArgs,
    order: Option<usize>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult<i32> {
    let theorem: TheoremId = a.theorem.parse()?;
    let coef = match theorem.setting() {
        shearconv_core::Sign::Plus => {
            if a.b.is_some() {
                return Err(CliError::Usage(format!("{theorem} takes --a, not --b")));
            }
            a.a.as_deref()
        }
        shearconv_core::Sign::Minus => {
            if a.a.is_some() {
                return Err(CliError::Usage(format!("{theorem} takes --b, not --a")));
            }
            a.b.as_deref()
        }
    };
    let options = options_from_args(&a.grid, order)?;
    let req = sweep::SweepRequest {
        theorem,
        coef,
        alpha: a.alpha.as_deref(),
        gamma: a.gamma.as_deref(),
        eta: a.eta.as_deref().or(a.beta.as_deref()).or(a.psi.as_deref()),
        theta: a.theta.as_deref(),
        n: a.n.as_deref(),
    };
    let outcome = sweep::run_sweep(&req, &options)?;
    emit(out, &outcome.csv, stdout)?;
    let _ = writeln!(stderr, "{theorem}: {} rows, exit {}", outcome.rows, outcome.exit_code);
    Ok(outcome.exit_code)
}

fn cmd_render(a: &RenderArgs, order: Option<usize>, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<i32> {
    let spec = RenderSpec {
        radial_lines: a.radial_lines,
        circles: a.circles,
        max_radius: a.max_radius,
        samples_per_curve: a.samples,
        direction_guide: a.guide,
        width: a.width,
        height: a.height,
        stroke: a.stroke.clone(),
        stroke_width: a.stroke_width,
        guide_stroke: a.guide_stroke.clone(),
    };
    spec.validate()?;
    let map = match (&a.input, &a.family.family) {
        (Some(p), None) => read_table(p)?,
        (None, Some(_)) => {
            let n = order.unwrap_or_else(|| order_for_radius(spec.max_radius, AUTO_ORDER_TOLERANCE));
            build(family_from_args(&a.family)?, n)?
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either --input or --family, not both".into()))
        }
        (None, None) => return Err(CliError::Usage("render needs --input or --family".into())),
    };
    let curves = render::trace(&map, &spec);
    emit(out, &render::svg(&curves, &spec), stdout)?;
    Ok(EXIT_PASS)
}
