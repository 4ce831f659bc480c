use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsr"))
        .args(args)
        .output()
        .expect("fsr binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Writes a small binary PGM with a smooth gradient.
fn write_test_image(dir: &Path, width: usize, height: usize) -> PathBuf {
    let path = dir.join("input.pgm");
    let mut data = format!("P5\n{width} {height}\n255\n").into_bytes();
    for r in 0..height {
        for c in 0..width {
            data.push(((r * 5 + c * 3) % 256) as u8);
        }
    }
    std::fs::write(&path, data).unwrap();
    path
}

fn pgm_size(path: &Path) -> (usize, usize) {
    let data = std::fs::read(path).unwrap();
    let header = String::from_utf8_lossy(&data[..data.len().min(32)]).into_owned();
    let mut fields = header.split_whitespace();
    assert_eq!(fields.next(), Some("P5"));
    let w = fields.next().unwrap().parse().unwrap();
    let h = fields.next().unwrap().parse().unwrap();
    (w, h)
}

#[test]
fn reconstructs_from_random_density() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_test_image(dir.path(), 20, 12);
    let output = dir.path().join("out.pgm");
    let mask = dir.path().join("mask.pbm");
    let out = fsr(&[
        "reconstruct",
        "--input",
        input.to_str().unwrap(),
        "--density",
        "0.3",
        "--seed",
        "4",
        "--save-mask",
        mask.to_str().unwrap(),
        "--iters",
        "20",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(pgm_size(&output), (20, 12));
    assert!(stderr(&out).contains("PSNR"));
    assert!(std::fs::read(&mask).unwrap().starts_with(b"P4"));
}

#[test]
fn reconstructs_from_saved_mask_with_every_method() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_test_image(dir.path(), 16, 16);
    let mask = dir.path().join("mask.pbm");
    let first = dir.path().join("first.pgm");
    let out = fsr(&[
        "reconstruct",
        "--input",
        input.to_str().unwrap(),
        "--density",
        "0.4",
        "--save-mask",
        mask.to_str().unwrap(),
        "--iters",
        "10",
        "--output",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    for method in ["fsr-ap", "fsr-otf", "fsr-none", "lin", "nn"] {
        let output = dir.path().join(format!("{method}.pgm"));
        let out = fsr(&[
            "reconstruct",
            "--input",
            input.to_str().unwrap(),
            "--mask",
            mask.to_str().unwrap(),
            "--method",
            method,
            "--iters",
            "10",
            "--output",
            output.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{method}: {}", stderr(&out));
        assert_eq!(pgm_size(&output), (16, 16));
    }
    // Same mask and method as the first run gives the same image.
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(dir.path().join("fsr-ap.pgm")).unwrap()
    );
}

#[test]
fn rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_test_image(dir.path(), 8, 8);
    let output = dir.path().join("out.pgm");
    let cases: &[&[&str]] = &[
        &["--density", "1.5"],
        &["--density", "0.5", "--tau", "0"],
        &["--density", "0.5", "--gamma", "2"],
        &["--density", "0.5", "--block", "0"],
        &["--density", "0.5", "--method", "bicubic"],
        &[],
    ];
    for extra in cases {
        let mut args = vec![
            "reconstruct",
            "--input",
            input.to_str().unwrap(),
            "--output",
            output.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        let out = fsr(&args);
        assert!(!out.status.success(), "accepted {extra:?}");
        assert!(!stderr(&out).is_empty());
    }
    let out = fsr(&[
        "reconstruct",
        "--input",
        "/nonexistent.pgm",
        "--density",
        "0.5",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn bench_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_test_image(dir.path(), 16, 16);
    let config = dir.path().join("sweep.cfg");
    std::fs::write(
        &config,
        format!(
            "images = {}\ndensities = 0.2, 0.6\nseeds = 1, 2\nmethods = fsr-ap, fsr-otf, lin, nn\niters = 15\ntaus = 1, 2\n",
            input.display()
        ),
    )
    .unwrap();
    let out_dir = dir.path().join("results");
    let out = fsr(&[
        "bench",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let report = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    let mut lines = report.lines();
    assert_eq!(
        lines.next(),
        Some("image,density,seed,method,tau,psnr_db,seconds,fallback_blocks")
    );
    assert_eq!(lines.count(), 2 * 2 * 4);
    assert!(out_dir.join("summary.csv").exists());
    let sweep = std::fs::read_to_string(out_dir.join("tau_sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 1 + 2 * 2 * 2);
}

#[test]
fn bench_needs_an_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_test_image(dir.path(), 8, 8);
    let config = dir.path().join("sweep.json");
    std::fs::write(
        &config,
        format!(
            r#"{{"images": ["{}"], "densities": [0.5], "seeds": [1], "methods": ["NN"]}}"#,
            input.display()
        ),
    )
    .unwrap();
    let out = fsr(&["bench", "--config", config.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("output directory"));
}
