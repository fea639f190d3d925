use std::path::PathBuf;
use std::process::{Command, Output};

fn lsmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsmix"))
        .args(args)
        .output()
        .expect("run lsmix")
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .display()
        .to_string()
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("lsmix-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

fn value(stdout: &[u8], key: &str) -> f64 {
    String::from_utf8_lossy(stdout)
        .lines()
        .find_map(|l| {
            l.strip_prefix(&format!("{key},"))
                .map(|v| v.parse().unwrap())
        })
        .unwrap_or_else(|| panic!("no `{key}` in output"))
}

#[test]
fn mc_risk_reports_bounds() {
    let out = lsmix(&[
        "mc-risk",
        "--scenario",
        &scenario("oracle_p8.txt"),
        "--reps",
        "500",
        "--strict",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let risk = value(&out.stdout, "empirical_risk");
    assert!(risk > 0.0 && risk <= value(&out.stdout, "foracle_rhs"));
    assert!(value(&out.stdout, "fgibbs_rhs") <= value(&out.stdout, "foracle_rhs"));
}

#[test]
fn mc_risk_is_reproducible() {
    let args = [
        "mc-risk",
        "--scenario",
        &scenario("fixed_projection.txt"),
        "--reps",
        "300",
        "--seed",
        "11",
    ];
    assert_eq!(lsmix(&args).stdout, lsmix(&args).stdout);
}

#[test]
fn strict_mode_rejects_inadmissible_beta() {
    let path = write_temp(
        "hot.txt",
        "n = 32\nsigma = 1\np = 8\nbeta = 0.3\nreps = 10\n",
    );
    let p = path.display().to_string();
    let out = lsmix(&["mc-risk", "--scenario", &p, "--strict"]);
    assert_eq!(out.status.code(), Some(3));
    let out = lsmix(&["mc-risk", "--scenario", &p]);
    assert!(out.status.success());
    let _ = std::fs::remove_file(path);
}

#[test]
fn invalid_input_exits_with_2() {
    let path = write_temp("bad.txt", "n = 32\nsigma = -1\np = 8\n");
    let out = lsmix(&["mc-risk", "--scenario", &path.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(path);
    assert_eq!(
        lsmix(&["cbeta", "--beta", "0.5", "--p-grid", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lsmix(&["approx", "--function", "step", "--n", "100"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lsmix(&["mc-risk", "--scenario", "/nonexistent/file"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cbeta_table() {
    let out = lsmix(&["cbeta", "--beta", "0.5", "--p-grid", "3,100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,gamma,c_beta,supremum,argmax");
    let c100: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!((c100 - 0.869_080_781_668_851_3).abs() < 1e-9);
}

#[test]
fn approx_table() {
    let out = lsmix(&[
        "approx",
        "--function",
        "staircase",
        "--n",
        "256",
        "--levels",
        "1,4,8",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    for line in text.lines().skip(2) {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[1] <= cells[2] && cells[3] <= cells[4]);
        assert!(cells[5] <= 2f64.powf(cells[0]));
    }
}

#[test]
fn bounds_for_scenarios() {
    let out = lsmix(&["bounds", "--scenario", &scenario("oracle_p8.txt")]);
    assert!(out.status.success());
    assert!(value(&out.stdout, "fgibbs_rhs") <= value(&out.stdout, "foracle_rhs"));
    let out = lsmix(&["bounds", "--scenario", &scenario("fourier_ordered.txt")]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn illustrate_writes_files() {
    let dir = std::env::temp_dir().join(format!("lsmix-cli-ill-{}", std::process::id()));
    let out = lsmix(&[
        "illustrate",
        "--sigma",
        "0.5",
        "--seed",
        "3",
        "--out-dir",
        &dir.display().to_string(),
    ]);
    assert!(out.status.success());
    let coeffs = std::fs::read_to_string(dir.join("coefficients.csv")).unwrap();
    assert_eq!(coeffs.lines().count(), 42);
    let freqs = std::fs::read_to_string(dir.join("frequencies.csv")).unwrap();
    assert_eq!(freqs.lines().count(), 22);
    let _ = std::fs::remove_dir_all(dir);
}
