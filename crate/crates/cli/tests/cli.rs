//! Drives the compiled binary through temporary directories exactly as a
//! user would from a shell: generate a host, embed, attack, extract, and
//! run the evaluation reports. The short payloads need 77 and 42 frames
//! stacked, or 112 for the single-domain schemes that carry both texts,
//! and 59136 samples (7.392 s) divides into all three counts on the
//! transform's sixteen-sample alignment, so no zero padding appears and
//! every frame carries signal.

use std::path::Path;
use std::process::{Command, Output};

const WM_DWT: &str = "alpha beta";
const WM_DCT: &str = "gamma";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_audiomark"))
        .args(args)
        .output()
        .expect("the binary should spawn")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed\nstdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn run_err(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        !out.status.success(),
        "command {args:?} should fail but printed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn s(path: &Path) -> &str {
    path.to_str().expect("temp paths are valid utf-8")
}

/// Writes a short host and embeds the test payloads into it, returning
/// the marked file and key paths.
fn fixture_and_embed(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let host = dir.join("host.wav");
    let marked = dir.join("marked.wav");
    let key = dir.join("key.json");
    let report = run_ok(&[
        "fixture",
        "--output",
        s(&host),
        "--seconds",
        "7.392",
        "--seed",
        "11",
    ]);
    assert!(
        report.contains("59136 samples"),
        "fixture report should state the sample count: {report}"
    );
    let report = run_ok(&[
        "embed",
        "--input",
        s(&host),
        "--output",
        s(&marked),
        "--key",
        s(&key),
        "--wm-dwt",
        WM_DWT,
        "--wm-dct",
        WM_DCT,
    ]);
    assert!(
        report.contains("embedding snr"),
        "embed report should state the quality figure: {report}"
    );
    (marked, key)
}

#[test]
fn embed_extract_round_trip_recovers_both_texts() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (marked, key) = fixture_and_embed(dir.path());
    let report = run_ok(&[
        "extract",
        "--input",
        s(&marked),
        "--key",
        s(&key),
        "--expected-dwt",
        WM_DWT,
        "--expected-dct",
        WM_DCT,
    ]);
    assert!(
        report.contains("dwt-svd: text \"alpha beta\""),
        "wavelet text should come back verbatim: {report}"
    );
    assert!(
        report.contains("dct-svd: text \"gamma\""),
        "cosine text should come back verbatim: {report}"
    );
    assert_eq!(
        report.matches("ber vs expected: 0.000000").count(),
        2,
        "both expected-text comparisons should be error free: {report}"
    );
}

#[test]
fn inversion_attack_leaves_a_static_read_intact() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (marked, key) = fixture_and_embed(dir.path());
    let flipped = dir.path().join("flipped.wav");
    run_ok(&[
        "attack",
        "--input",
        s(&marked),
        "--output",
        s(&flipped),
        "invert",
    ]);
    let report = run_ok(&[
        "extract",
        "--input",
        s(&flipped),
        "--key",
        s(&key),
        "--mode",
        "static",
    ]);
    assert!(
        report.contains("dwt-svd: text \"alpha beta\"")
            && report.contains("dct-svd: text \"gamma\""),
        "a polarity flip should not disturb either payload: {report}"
    );
}

#[test]
fn delay_attack_raises_a_desynchronisation_warning() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (marked, key) = fixture_and_embed(dir.path());
    let delayed = dir.path().join("delayed.wav");
    run_ok(&[
        "attack",
        "--input",
        s(&marked),
        "--output",
        s(&delayed),
        "delay",
        "--delay-ms",
        "100",
    ]);
    let report = run_ok(&["extract", "--input", s(&delayed), "--key", s(&key)]);
    assert!(
        report.contains("warning:"),
        "a shifted signal should be flagged before the texts are printed: {report}"
    );
}

#[test]
fn pcm16_embedding_reports_the_post_quantisation_read() {
    let dir = tempfile::tempdir().expect("tempdir");
    let host = dir.path().join("host.wav");
    let marked = dir.path().join("marked16.wav");
    let key = dir.path().join("key.json");
    run_ok(&[
        "fixture",
        "--output",
        s(&host),
        "--seconds",
        "7.392",
        "--seed",
        "11",
    ]);
    let report = run_ok(&[
        "embed",
        "--input",
        s(&host),
        "--output",
        s(&marked),
        "--key",
        s(&key),
        "--wm-dwt",
        WM_DWT,
        "--wm-dct",
        WM_DCT,
        "--pcm16",
    ]);
    assert!(
        report.contains("after pcm16 quantisation: adaptive ber dwt 0.000000, dct 0.000000"),
        "sixteen-bit quantisation noise is orders below the detection margin: {report}"
    );
}

#[test]
fn evaluate_writes_the_three_reports() {
    let dir = tempfile::tempdir().expect("tempdir");
    let host = dir.path().join("host.wav");
    let reports = dir.path().join("reports");
    run_ok(&[
        "fixture",
        "--output",
        s(&host),
        "--seconds",
        "7.392",
        "--seed",
        "11",
    ]);
    run_ok(&[
        "evaluate",
        "--input",
        s(&host),
        "--out-dir",
        s(&reports),
        "--wm-dwt",
        WM_DWT,
        "--wm-dct",
        WM_DCT,
    ]);
    let sweep = std::fs::read_to_string(reports.join("sweep.csv")).expect("sweep.csv");
    let attacks = std::fs::read_to_string(reports.join("attacks.csv")).expect("attacks.csv");
    let quality = std::fs::read_to_string(reports.join("quality.csv")).expect("quality.csv");
    assert!(
        sweep.starts_with("snr_db,scheme,mode,ber,ber_dwt,ber_dct"),
        "sweep header mismatch: {sweep}"
    );
    assert_eq!(
        sweep.lines().count(),
        1 + 11 * 4,
        "eleven sweep points, four scheme/mode rows each"
    );
    assert!(
        attacks.starts_with("attack,scheme,mode,ber,ber_dwt,ber_dct,detail"),
        "attacks header mismatch: {attacks}"
    );
    assert_eq!(
        attacks.lines().count(),
        1 + 5 * 4,
        "five non-noise attack channels, four scheme/mode rows each"
    );
    assert!(
        quality.starts_with("alpha,scheme,snr_db"),
        "quality header mismatch: {quality}"
    );
    assert_eq!(
        quality.lines().count(),
        1 + 2 * 3,
        "two intensities, three schemes"
    );
}

#[test]
fn missing_input_file_is_a_clean_failure() {
    let dir = tempfile::tempdir().expect("tempdir");
    let absent = dir.path().join("absent.wav");
    let key = dir.path().join("absent.json");
    let err = run_err(&["extract", "--input", s(&absent), "--key", s(&key)]);
    assert!(
        err.contains("reading"),
        "the error should name the file operation that failed: {err}"
    );
}

#[test]
fn out_of_range_intensity_is_rejected() {
    let dir = tempfile::tempdir().expect("tempdir");
    let host = dir.path().join("host.wav");
    run_ok(&[
        "fixture",
        "--output",
        s(&host),
        "--seconds",
        "7.392",
        "--seed",
        "11",
    ]);
    let err = run_err(&[
        "embed",
        "--input",
        s(&host),
        "--output",
        s(&dir.path().join("m.wav")),
        "--key",
        s(&dir.path().join("k.json")),
        "--wm-dwt",
        WM_DWT,
        "--wm-dct",
        WM_DCT,
        "--alpha",
        "1.5",
    ]);
    assert!(
        err.contains("outside the open interval (0, 1)"),
        "the intensity bound should be spelled out: {err}"
    );
}

#[test]
fn mismatched_expected_text_is_rejected() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (marked, key) = fixture_and_embed(dir.path());
    let err = run_err(&[
        "extract",
        "--input",
        s(&marked),
        "--key",
        s(&key),
        "--expected-dwt",
        "way too long for this key",
    ]);
    assert!(
        err.contains("payload bits"),
        "the length mismatch should name the payload size: {err}"
    );
}

#[test]
fn nonpositive_fixture_length_is_rejected() {
    let dir = tempfile::tempdir().expect("tempdir");
    let err = run_err(&[
        "fixture",
        "--output",
        s(&dir.path().join("h.wav")),
        "--seconds",
        "0",
    ]);
    assert!(
        err.contains("must be positive"),
        "a zero-length request should be refused up front: {err}"
    );
}
