use std::path::Path;
use std::process::Command;

use shearconv_cli::render::parse_points;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("shearconv").chain(args.iter().copied());
    let code = shearconv_cli::run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn build_standard_f0_table() {
    let o = run(&["build", "--family", "standard-f0", "--order", "8"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[0], ["index", "h_re", "h_im", "g_re", "g_im"]);
    assert_eq!(rows.len(), 10);
    assert!(!o.stdout.contains('\r'));
    // g' = -z h' term by term: k g_k = -(k-1) h_{k-1}
    for k in 2..=8 {
        let h_prev: f64 = rows[k][1].parse().unwrap();
        let g: f64 = rows[k + 1][3].parse().unwrap();
        assert!((k as f64 * g + (k - 1) as f64 * h_prev).abs() < 1e-14, "k={k}");
    }
}

#[test]
fn build_rejects_bad_parameters() {
    assert_eq!(run(&["build", "--family", "half-plane-fa", "--a", "1.5"]).code, 2);
    assert_eq!(run(&["build", "--family", "strip-v", "--beta", "0"]).code, 2);
    assert_eq!(run(&["build", "--family", "koebe"]).code, 2);
    assert_eq!(run(&["build"]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["--order", "0", "build", "--family", "standard-f0"]).code, 2);
}

#[test]
fn inline_and_flag_family_forms_agree() {
    let a = run(&["build", "--order", "16", "--family", "plus-t(eta=pi/2,gamma=0.3,theta=1,n=2)"]);
    let b = run(&[
        "build", "--order", "16", "--family", "plus-t", "--eta", "pi/2", "--gamma", "0.3", "--theta",
        "1", "--n", "2",
    ]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let both = run(&["build", "--family", "plus-t(eta=pi,n=2)", "--gamma", "0.3"]);
    assert_eq!(both.code, 2);
}

#[test]
fn help_and_version_exit_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("verify"));
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn verify_examples() {
    let o = run(&[
        "verify", "--theorem", "t2.3", "--a", "0", "--alpha", "0", "--gamma", "0", "--eta", "pi", "--n",
        "2",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows.len(), 6);
    assert!(rows[1..].iter().all(|r| r[1] == "pass"), "{}", o.stdout);

    let o = run(&["verify", "--theorem", "t3.2", "--b", "0", "--eta", "1.8", "--n", "1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);

    let o = run(&["verify", "--theorem", "t2.3", "--a", "-0.9", "--n", "4"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("error"), "{}", o.stderr);
}

#[test]
fn verify_usage_errors() {
    assert_eq!(run(&["verify"]).code, 2);
    assert_eq!(run(&["verify", "--theorem", "t9.9"]).code, 2);
    assert_eq!(run(&["verify", "--family", "standard-f0", "--a", "0.1"]).code, 2);
    assert_eq!(run(&["verify", "--theorem", "t2.3", "--radii", "0.5,0.2"]).code, 2);
}

#[test]
fn verify_family_path() {
    let o = run(&["verify", "--family", "half-plane-fa(a=0.2)", "--direction", "0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows.len(), 4);
    // too low an order for the convexity radius
    let o = run(&[
        "--order", "64", "verify", "--family", "half-plane-fa(a=0.2)", "--direction", "0",
    ]);
    assert_eq!(o.code, 2);
}

#[test]
fn build_then_verify_and_render_from_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("fa.csv");
    let fam = "half-plane-fa(a=0.3)";
    let o = run(&["--order", "6000", "--out", path_str(&table), "build", "--family", fam]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());

    let from_table = run(&["verify", "--input", path_str(&table), "--direction", "0"]);
    let from_family = run(&["--order", "6000", "verify", "--family", fam, "--direction", "0"]);
    assert_eq!(from_table.code, 0, "{}", from_table.stderr);
    assert_eq!(from_table.stdout, from_family.stdout);

    let svg_a = run(&["render", "--input", path_str(&table), "--circles", "4", "--radial-lines", "6"]);
    let svg_b = run(&[
        "--order", "6000", "render", "--family", fam, "--circles", "4", "--radial-lines", "6",
    ]);
    assert_eq!(svg_a.code, 0, "{}", svg_a.stderr);
    assert_eq!(svg_a.stdout, svg_b.stdout);
}

#[test]
fn convolve_from_tables_matches_families() {
    let dir = tempfile::tempdir().unwrap();
    let left = dir.path().join("l.csv");
    let right = dir.path().join("r.csv");
    assert_eq!(run(&["--order", "32", "--out", path_str(&left), "build", "--family", "standard-f0"]).code, 0);
    assert_eq!(
        run(&["--order", "32", "--out", path_str(&right), "build", "--family", "plus-t(eta=pi,n=2)"]).code,
        0
    );
    let a = run(&[
        "--order", "32", "convolve", "--left-input", path_str(&left), "--right-input", path_str(&right),
    ]);
    let b = run(&["--order", "32", "convolve", "--left", "standard-f0", "--right", "plus-t(eta=pi,n=2)"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(csv_rows(&a.stdout).len(), 34);
}

#[test]
fn malformed_table_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "index,h_re,h_im,g_re,g_im\n0,0,0,0,0\n1,1,zz,0,0\n").unwrap();
    let o = run(&["verify", "--input", path_str(&bad)]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
    let o = run(&["verify", "--input", path_str(&dir.path().join("missing.csv"))]);
    assert_eq!(o.code, 1);
}

#[test]
fn unwritable_output_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("no_such_dir").join("out.svg");
    let o = run(&[
        "--out", path_str(&target), "render", "--family", "standard-f0", "--order", "64", "--max-radius",
        "0.5",
    ]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("no_such_dir"), "{}", o.stderr);
}

#[test]
fn render_guide_and_bounds() {
    let o = run(&[
        "render", "--family", "standard-f0", "--guide", "pi/2", "--circles", "3", "--radial-lines", "4",
        "--samples", "90",
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.starts_with("<?xml"));
    assert_eq!(o.stdout.matches("class=\"guide\"").count(), 9);
    let pts = parse_points(&o.stdout);
    assert_eq!(pts.len(), (3 + 4) * 91);
    assert!(pts.iter().all(|p| p.re > -0.5));
    assert_eq!(run(&["render", "--family", "standard-f0", "--max-radius", "1"]).code, 2);
    assert_eq!(run(&["render", "--family", "standard-f0", "--circles", "1"]).code, 2);
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# half-plane map\nfamily = half-plane-fa\na = 0.25\norder = 12\n").unwrap();
    let from_cfg = run(&["--config", path_str(&cfg), "build"]);
    let direct = run(&["build", "--family", "half-plane-fa", "--a", "0.25", "--order", "12"]);
    assert_eq!(from_cfg.code, 0, "{}", from_cfg.stderr);
    assert_eq!(from_cfg.stdout, direct.stdout);

    let overridden = run(&["--config", path_str(&cfg), "build", "--a", "-0.5"]);
    let direct = run(&["build", "--family", "half-plane-fa", "--a", "-0.5", "--order", "12"]);
    assert_eq!(overridden.stdout, direct.stdout);

    std::fs::write(&cfg, "family = standard-f0\nnonsense\n").unwrap();
    let o = run(&["--config", path_str(&cfg), "build"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 2"), "{}", o.stderr);
    assert_eq!(run(&["--config", path_str(&dir.path().join("nope")), "build"]).code, 2);
}

#[test]
fn sweep_marks_hypothesis_range() {
    let o = run(&[
        "sweep", "--theorem", "t2.3", "--a", "-0.5:0.9:0.1", "--n", "1", "--alpha", "0", "--gamma", "0",
        "--eta", "pi", "--theta", "0",
    ]);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[0][1], "a");
    assert_eq!(rows.len(), 16);
    for r in &rows[1..] {
        let a: f64 = r[1].parse().unwrap();
        let in_hyp = r[7] == "true";
        assert_eq!(in_hyp, a >= -1.0 / 3.0, "a={a}");
        if in_hyp && a < 0.85 {
            assert_eq!(r[8], "pass", "{r:?}");
        }
    }
    // a = 0.9 fails the sub-disk convexity check at r = 0.99
    let last = rows.last().unwrap();
    assert_eq!((last[8].as_str(), last[9].as_str()), ("fail", "direction_convexity"));
    assert_eq!(o.code, 1, "{}", o.stderr);
}

#[test]
fn sweep_over_n_and_empty_range() {
    let o = run(&["sweep", "--theorem", "t2.3", "--a", "0", "--n", "1,2,3,4", "--eta", "pi"]);
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows.len(), 5);
    let flags: Vec<&str> = rows[1..].iter().map(|r| r[7].as_str()).collect();
    assert_eq!(flags, ["true", "true", "false", "false"]);

    let o = run(&["sweep", "--theorem", "t2.3", "--a", "0.9:0.1:0.1"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 1);
    assert!(o.stdout.starts_with("theorem,a,alpha"));

    assert_eq!(run(&["sweep", "--theorem", "t2.3", "--a", "0:1:0"]).code, 2);
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--theorem", "t3.2", "--b", "0,-0.2", "--eta", "1.8,2.5", "--n", "1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let coefs: Vec<f64> = csv_rows(&a.stdout)[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(coefs, [-0.2, -0.2, 0.0, 0.0]);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_shearconv");
    let status = Command::new(bin)
        .args(["build", "--family", "standard-f0", "--order", "4"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&status.stdout).lines().count(), 6);
    let status = Command::new(bin)
        .args(["build", "--family", "half-plane-fa", "--a", "1.5"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}
