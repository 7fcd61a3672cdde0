//! End-to-end tests driving the compiled `utmed` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use utmed::filter::{denoise_pa, smf, FilterParams};
use utmed::image::Image;
use utmed::noise::add_salt_pepper;
use utmed::pgm::{read_pgm, write_pgm};

fn utmed_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_utmed"))
}

fn run(args: &[&str]) -> Output {
    utmed_bin()
        .args(args)
        .output()
        .expect("binary spawns")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_image(dir: &Path, name: &str, img: &Image) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, write_pgm(img, false)).unwrap();
    path
}

fn ramp(w: u32, h: u32) -> Image {
    // stays inside [1, 254] so impulse statistics are clean
    Image::from_fn(w, h, |x, y| (1 + (x * 13 + y * 7) % 254) as u8)
}

fn s(path: &Path) -> String {
    path.to_str().unwrap().to_owned()
}

#[test]
fn noise_zero_density_copies_payload() {
    let dir = TempDir::new().unwrap();
    let clean = ramp(24, 24);
    let input = write_image(dir.path(), "clean.pgm", &clean);
    let output = dir.path().join("out.pgm");

    let out = run(&[
        "noise", "--kind", "sp", "--density", "0", "--seed", "1",
        &s(&input), &s(&output),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(std::fs::read(&output).unwrap(), std::fs::read(&input).unwrap());
    assert!(stdout(&out).contains("measured density: 0.0000"));
}

#[test]
fn noise_is_reproducible_and_reports_density() {
    let dir = TempDir::new().unwrap();
    let clean = ramp(64, 64);
    let input = write_image(dir.path(), "clean.pgm", &clean);
    let out_a = dir.path().join("a.pgm");
    let out_b = dir.path().join("b.pgm");

    for out_path in [&out_a, &out_b] {
        let out = run(&[
            "noise", "--kind", "sp", "--density", "0.5", "--seed", "9",
            &s(&input), &s(out_path),
        ]);
        assert_eq!(exit_code(&out), 0);
        let line = stdout(&out);
        let measured: f64 = line
            .trim()
            .rsplit(' ')
            .next()
            .unwrap()
            .parse()
            .unwrap();
        assert!((measured - 0.5).abs() < 0.05, "{line}");
    }
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
}

#[test]
fn noise_parameter_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let input = write_image(dir.path(), "clean.pgm", &ramp(4, 4));
    let output = dir.path().join("out.pgm");
    // density beyond 1 fails validation
    let out = run(&[
        "noise", "--kind", "rvin", "--density", "1.5", "--seed", "1",
        &s(&input), &s(&output),
    ]);
    assert_eq!(exit_code(&out), 1);
    // gaussian without --var is a usage error
    let out = run(&["noise", "--kind", "gaussian", &s(&input), &s(&output)]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn denoise_dispatches_to_the_right_filter() {
    let dir = TempDir::new().unwrap();
    let noisy = add_salt_pepper(&ramp(32, 32), 0.25, 0.25, 3).unwrap();
    let input = write_image(dir.path(), "noisy.pgm", &noisy);

    let pa_path = dir.path().join("pa.pgm");
    let out = run(&["denoise", "--filter", "pa", &s(&input), &s(&pa_path)]);
    assert_eq!(exit_code(&out), 0);
    let restored = read_pgm(&std::fs::read(&pa_path).unwrap()).unwrap();
    assert_eq!(restored, denoise_pa(&noisy, &FilterParams::default()));

    let smf_path = dir.path().join("smf.pgm");
    let out = run(&["denoise", "--filter", "smf3", &s(&input), &s(&smf_path)]);
    assert_eq!(exit_code(&out), 0);
    let restored = read_pgm(&std::fs::read(&smf_path).unwrap()).unwrap();
    assert_eq!(restored, smf(&noisy, 3).unwrap());

    // thresholds flow through
    let tight = dir.path().join("tight.pgm");
    let out = run(&[
        "denoise", "--filter", "pa", "--t", "10", "--t1", "5",
        &s(&input), &s(&tight),
    ]);
    assert_eq!(exit_code(&out), 0);
    let restored = read_pgm(&std::fs::read(&tight).unwrap()).unwrap();
    assert_eq!(restored, denoise_pa(&noisy, &FilterParams::new(10, 5)));
}

#[test]
fn unknown_filter_is_a_usage_error() {
    let out = run(&["denoise", "--filter", "warp", "a.pgm", "b.pgm"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "denoise", "--filter", "pa",
        &s(&dir.path().join("absent.pgm")),
        &s(&dir.path().join("out.pgm")),
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn metrics_prints_one_csv_row() {
    let dir = TempDir::new().unwrap();
    let clean = ramp(16, 16);
    let noisy = add_salt_pepper(&clean, 0.2, 0.2, 1).unwrap();
    let clean_path = write_image(dir.path(), "clean.pgm", &clean);
    let noisy_path = write_image(dir.path(), "noisy.pgm", &noisy);

    // perfect restoration
    let out = run(&[
        "metrics", &s(&clean_path), &s(&noisy_path), &s(&clean_path),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).trim(), "0,inf,nan");

    // doing nothing leaves the enhancement factor at exactly 1
    let out = run(&[
        "metrics", &s(&clean_path), &s(&noisy_path), &s(&noisy_path),
    ]);
    assert_eq!(exit_code(&out), 0);
    let row = stdout(&out);
    assert_eq!(row.trim().split(',').count(), 3);
    assert_eq!(row.trim().split(',').nth(2), Some("1"));
}

#[test]
fn metrics_size_mismatch_exits_two() {
    let dir = TempDir::new().unwrap();
    let a = write_image(dir.path(), "a.pgm", &ramp(8, 8));
    let b = write_image(dir.path(), "b.pgm", &ramp(8, 9));
    let out = run(&["metrics", &s(&a), &s(&b), &s(&a)]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sweep_writes_a_deterministic_grid() {
    let dir = TempDir::new().unwrap();
    let img_a = write_image(dir.path(), "a.pgm", &ramp(16, 16));
    let img_b = write_image(dir.path(), "b.pgm", &ramp(16, 16));
    let csv_path = dir.path().join("grid.csv");

    let args = [
        "sweep",
        "--images",
        &format!("{},{}", s(&img_a), s(&img_b)),
        "--filters",
        "pa,smf3",
        "--kind",
        "sp",
        "--levels",
        "0.1,0.3",
        "--seeds",
        "1,2",
        &s(&csv_path),
    ];
    let out = run(&args.iter().map(|a| a.as_ref()).collect::<Vec<&str>>());
    assert_eq!(exit_code(&out), 0);

    let first = std::fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "image,filter,noise_kind,level,seed,mse,psnr,ief");
    // 2 images x 2 filters x 2 levels x 2 seeds
    assert_eq!(lines.len(), 1 + 16);
    assert!(lines[1].starts_with(&format!("{},pa,sp,0.1,1,", s(&img_a))));

    // byte-identical on a repeated run
    let out = run(&args.iter().map(|a| a.as_ref()).collect::<Vec<&str>>());
    assert_eq!(exit_code(&out), 0);
    assert_eq!(std::fs::read_to_string(&csv_path).unwrap(), first);
}

#[test]
fn sweep_reads_config_files_and_flags_override() {
    let dir = TempDir::new().unwrap();
    let img = write_image(dir.path(), "a.pgm", &ramp(16, 16));
    let cfg_path = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg_path,
        format!(
            "# grid\nimages = {}\nfilters = pa\nkind = sp\nlevels = 0.1, 0.3\nseeds = 1\n",
            s(&img)
        ),
    )
    .unwrap();
    let csv_path = dir.path().join("grid.csv");

    let out = run(&[
        "sweep", "--config", &s(&cfg_path), &s(&csv_path),
    ]);
    assert_eq!(exit_code(&out), 0);
    let base = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(base.lines().count(), 1 + 2); // two levels

    // a levels flag overrides the file's list
    let out = run(&[
        "sweep", "--config", &s(&cfg_path), "--levels", "0.5", &s(&csv_path),
    ]);
    assert_eq!(exit_code(&out), 0);
    let overridden = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(overridden.lines().count(), 1 + 1);
    assert!(overridden.contains(",pa,sp,0.5,1,"));
}

#[test]
fn sweep_aborts_before_writing_when_an_image_is_missing() {
    let dir = TempDir::new().unwrap();
    let img = write_image(dir.path(), "a.pgm", &ramp(8, 8));
    let csv_path = dir.path().join("grid.csv");
    let missing = dir.path().join("missing.pgm");

    let out = run(&[
        "sweep",
        "--images",
        &format!("{},{}", s(&img), s(&missing)),
        "--filters",
        "pa",
        "--kind",
        "sp",
        "--levels",
        "0.1",
        &s(&csv_path),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(!csv_path.exists(), "partial results must not be written");
}

#[test]
fn verify_shipped_network_passes() {
    let dir = TempDir::new().unwrap();
    let report_path = dir.path().join("report.txt");
    let out = run(&["verify", &s(&report_path)]);
    assert_eq!(exit_code(&out), 0);
    let report = std::fs::read_to_string(&report_path).unwrap();
    assert!(report.contains("failures = 0"));
    assert!(report.contains("comparators = 45"));
    assert!(report.contains("embedded binary windows: 512/512 identical"));
    assert!(report.contains("cycles_first_output=15"));
    assert!(report.contains("reference_delta=2"));
    assert!(stdout(&out).contains("failures = 0"));
}

#[test]
fn verify_base_network_fails_with_listed_vectors() {
    let out = run(&["verify", "--network", "base"]);
    assert_eq!(exit_code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("comparators = 42"));
    assert!(text.contains("failed:"));
    assert!(!text.contains("failures = 0\n"));
}
