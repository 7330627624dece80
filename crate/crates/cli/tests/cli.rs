//! End-to-end tests of the `wellbound` binary: exit codes, artifact shapes,
//! column contracts, and byte-level determinism, all through real processes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_wellbound")
}

/// Fresh working directory under the target tmp area.
fn workdir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.conf");
    std::fs::write(&path, text).unwrap();
    path
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(bin()).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Parse a CSV with purely numeric cells (empty cells become NaN).
fn csv_rows(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| if c.is_empty() { f64::NAN } else { c.parse().unwrap() })
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn help_lists_the_commands() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    for cmd in ["spectrum", "bands", "bend-sweep", "circle-opt", "converge-shrink"] {
        assert!(r.stdout.contains(cmd), "missing {cmd} in help");
    }
}

#[test]
fn missing_config_flag_is_a_usage_error() {
    let r = run(&["spectrum"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--config"), "{}", r.stderr);
}

#[test]
fn unknown_command_is_rejected() {
    let r = run(&["eigenstorm", "--config", "x.conf"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("eigenstorm"), "{}", r.stderr);
}

#[test]
fn unknown_config_key_fails_before_any_work() {
    let dir = workdir("unknown_key");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         potential.wobble = 3\n\
         geometry.kind = straight\n\
         geometry.n = 1\n\
         geometry.a = 3.0\n",
    );
    let out = dir.join("out");
    let r = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("potential.wobble"), "{}", r.stderr);
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);
    assert!(!out.join("manifest.json").exists(), "artifacts written despite bad config");
    assert!(!out.join("spectrum.json").exists());
}

#[test]
fn subcritical_well_is_a_successful_empty_answer() {
    let dir = workdir("subcritical");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 2.0\n\
         potential.rho = 1.0\n\
         geometry.kind = straight\n\
         geometry.n = 1\n\
         geometry.a = 3.0\n\
         geometry.nu = 3\n\
         solver.radial_order = 3\n\
         solver.angular_order = 3\n\
         spectrum.threshold = 0\n",
    );
    let out = dir.join("out");
    let r = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let json = read(&out.join("spectrum.json"));
    assert!(json.contains("\"no_bound_state\": true"), "{json}");
    assert!(json.contains("\"eigenvalues\": []"), "{json}");
    let manifest = read(&out.join("manifest.json"));
    assert!(manifest.contains("\"schema\": 1"), "{manifest}");
    assert!(manifest.contains("spectrum.csv"), "{manifest}");
    assert!(manifest.contains("\"config_sha256\""), "{manifest}");
}

#[test]
fn bend_sweep_rows_stay_below_the_straight_reference() {
    let dir = workdir("bend_sweep");
    let tol = 1e-7;
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 0.5\n\
         geometry.n = 5\n\
         geometry.a = 2.0\n\
         sweep.betas = [0, 0.5235987755982988, 1.0471975511965976]\n\
         solver.radial_order = 4\n\
         solver.angular_order = 8\n\
         solver.tol = 1e-7\n",
    );
    let out = dir.join("out");
    let r = run(&["bend-sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let (header, rows) = csv_rows(&read(&out.join("bend_sweep.csv")));
    assert_eq!(header, "beta,e1,e0_reference,n_wells,kappa");
    assert_eq!(rows.len(), 3);
    let e0 = rows[0][2];
    assert_eq!(rows[0][1], e0, "beta = 0 row must equal the reference");
    for row in &rows[1..] {
        assert!(row[0] > 0.0);
        assert!(
            row[1] < e0 - tol,
            "bent chain must bind strictly deeper: e1 {} vs reference {e0}",
            row[1]
        );
        assert_eq!(row[3], 5.0);
    }
}

#[test]
fn point_oracle_hits_the_single_center_value() {
    let dir = workdir("point_oracle");
    // alpha = -1/(4 pi) puts the bound state exactly at eps = -1
    let cfg = write_config(
        &dir,
        "oracle.nu = 3\n\
         oracle.alpha = -0.07957747154594767\n\
         oracle.centers = [0, 0, 0]\n",
    );
    let out = dir.join("out");
    let r = run(&["oracle", "point", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let (header, rows) = csv_rows(&read(&out.join("oracle_point.csv")));
    assert_eq!(header, "index,eps");
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1] + 1.0).abs() < 1e-9, "eps {}", rows[0][1]);
}

#[test]
fn radial_oracle_lists_channels_with_multiplicity() {
    let dir = workdir("radial_oracle");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         oracle.nu = 2\n\
         oracle.m_max = 4\n",
    );
    let out = dir.join("out");
    let r = run(&["oracle", "radial", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let (header, rows) = csv_rows(&read(&out.join("oracle_radial.csv")));
    assert_eq!(header, "channel,multiplicity,kappa,eps");
    // the depth-4 2D flat well binds only in the radial channel: m = 1 needs
    // an interior wavenumber past the first Bessel zero 2.405 > sqrt(4)
    assert_eq!(rows.len(), 1);
    assert_eq!((rows[0][0], rows[0][1]), (0.0, 1.0));
    assert!((rows[0][2] - 1.290_214_544_414_955).abs() < 1e-8);
}

#[test]
fn identical_config_and_seed_rerun_byte_identically() {
    let dir = workdir("determinism");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         geometry.n = 2\n\
         geometry.radius = 4.0\n\
         solver.radial_order = 3\n\
         solver.angular_order = 6\n\
         search.budget = 25\n\
         search.restarts = 1\n\
         search.seed = 9\n\
         search.tol = 1e-4\n",
    );
    let (out1, out2) = (dir.join("r1"), dir.join("r2"));
    for out in [&out1, &out2] {
        let r = run(&["circle-opt", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    }
    let a = std::fs::read(out1.join("circle_opt.json")).unwrap();
    let b = std::fs::read(out2.join("circle_opt.json")).unwrap();
    assert_eq!(a, b, "search artifacts differ between identical runs");
    // the pair search must settle on antipodal wells
    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("3.141592653589793"), "{text}");
}

#[test]
fn seed_flag_overrides_the_config_seed() {
    let dir = workdir("seed_flag");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         geometry.n = 2\n\
         geometry.radius = 4.0\n\
         solver.radial_order = 3\n\
         solver.angular_order = 6\n\
         search.budget = 12\n\
         search.restarts = 0\n\
         search.seed = 9\n\
         search.tol = 1e-4\n",
    );
    let out = dir.join("out");
    let r = run(&[
        "circle-opt",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "123",
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let json = read(&out.join("circle_opt.json"));
    assert!(json.contains("\"seed\": 123"), "{json}");
    let manifest = read(&out.join("manifest.json"));
    assert!(manifest.contains("\"seed\": 123"), "{manifest}");
}

#[test]
fn spectrum_on_chain_reports_threshold_reference() {
    let dir = workdir("chain_threshold");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         geometry.kind = straight\n\
         geometry.n = 5\n\
         geometry.a = 4.0\n\
         solver.radial_order = 4\n\
         solver.angular_order = 8\n",
    );
    let out = dir.join("out");
    let r = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stdout: {} stderr: {}", r.stdout, r.stderr);
    let json = std::fs::read_to_string(out.join("spectrum.json")).unwrap();
    // the periodic reference must be present, negative, and close to the
    // five-well ground state at this weakly coupled spacing
    let csv = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();
    let (_, rows) = csv_rows(&csv);
    let e1 = rows[0][1];
    let needle = "\"threshold_eps\": ";
    let pos = json.find(needle).expect("threshold_eps in spectrum.json");
    let tail = &json[pos + needle.len()..];
    let end = tail.find([',', '\n']).unwrap();
    let threshold: f64 = tail[..end].trim().parse().unwrap();
    assert!(threshold < 0.0, "threshold {threshold}");
    assert!(
        (threshold - e1).abs() < 0.05,
        "threshold {threshold} vs five-well ground state {e1}"
    );
}

#[test]
fn exhausted_bisection_budget_exits_3() {
    let dir = workdir("exit3");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         geometry.kind = straight\n\
         geometry.n = 1\n\
         geometry.a = 3.0\n\
         solver.radial_order = 4\n\
         solver.angular_order = 8\n\
         solver.tol = 1e-13\n\
         solver.max_bisections = 1\n\
         spectrum.threshold = 0\n",
    );
    let out = dir.join("out");
    let r = run(&["spectrum", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 3, "stdout: {} stderr: {}", r.stdout, r.stderr);
    assert!(r.stderr.contains("convergence"), "{}", r.stderr);
}

#[test]
fn bands_table_has_one_column_per_band() {
    let dir = workdir("bands");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         bands.a = 4.0\n\
         bands.t = 4.0\n\
         bands.h = 0.125\n\
         bands.theta_points = 9\n\
         bands.k = 3\n",
    );
    let out = dir.join("out");
    let r = run(&["bands", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let (header, rows) = csv_rows(&read(&out.join("bands.csv")));
    assert_eq!(header, "theta,band1,band2,band3");
    assert_eq!(rows.len(), 9);
    for row in &rows {
        assert_eq!(row.len(), 4);
        assert!(row[1] <= row[2] && row[2] <= row[3], "bands out of order: {row:?}");
    }
    let json = read(&out.join("bands.json"));
    assert!(json.contains("\"negative_bands\": 1"), "{json}");
}

#[test]
fn shrink_table_differences_decrease() {
    let dir = workdir("shrink");
    // flat 3D well at its zero-energy resonance depth (pi/2)^2
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 2.4674011002723395\n\
         potential.rho = 1.0\n\
         shrink.mu_prime0 = 1.0\n\
         shrink.eps_list = [0.5, 0.25]\n\
         solver.radial_order = 3\n\
         solver.angular_order = 3\n\
         solver.tol = 1e-4\n",
    );
    let out = dir.join("out");
    let r = run(&["converge-shrink", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let (header, rows) = csv_rows(&read(&out.join("shrink.csv")));
    assert_eq!(header, "eps,e_regular,e_point,abs_diff");
    assert_eq!(rows.len(), 2);
    assert!(rows[1][3] < rows[0][3], "differences must shrink: {rows:?}");
    // both rows compare against the same point-interaction level
    assert_eq!(rows[0][2], rows[1][2]);
    let json = read(&out.join("shrink.json"));
    assert!(json.contains("\"alpha\""), "{json}");
}

#[test]
fn non_resonant_well_is_a_config_error_for_shrink() {
    let dir = workdir("shrink_bad");
    let cfg = write_config(
        &dir,
        "potential.kind = flat\n\
         potential.depth = 4.0\n\
         potential.rho = 1.0\n\
         shrink.eps_list = [0.5, 0.25]\n",
    );
    let out = dir.join("out");
    let r = run(&["converge-shrink", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, 2, "stderr: {}", r.stderr);
    assert!(r.stderr.contains("resonance"), "{}", r.stderr);
}

#[test]
fn bad_tol_flag_is_rejected() {
    let r = run(&["spectrum", "--config", "x.conf", "--tol", "-1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--tol"), "{}", r.stderr);
}
