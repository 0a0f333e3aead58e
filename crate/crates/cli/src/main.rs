//! Command line front end: embed, extract, attack, evaluate, fixture.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use audiomark::{
    attacks, ber, embed_multilevel, extract, run_evaluation, snr_db, synthetic_host, text_to_bits,
    wav, AttackSpec, AudioBuffer, DetectorMode, DomainDetection, ExperimentConfig, KeyFile,
};

#[derive(Parser)]
#[command(
    name = "audiomark",
    about = "Dual-domain singular-value audio watermarking",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Static,
    Adaptive,
}

impl From<CliMode> for DetectorMode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::Static => DetectorMode::Static,
            CliMode::Adaptive => DetectorMode::Adaptive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Embed two text watermarks into a WAV file.
    Embed {
        /// Host WAV file (PCM16 or float32; multichannel is downmixed).
        #[arg(long)]
        input: PathBuf,
        /// Watermarked WAV file to write.
        #[arg(long)]
        output: PathBuf,
        /// Key file to write; required to extract later.
        #[arg(long)]
        key: PathBuf,
        /// Text for the wavelet-domain stage.
        #[arg(long)]
        wm_dwt: String,
        /// Text for the cosine-domain stage.
        #[arg(long)]
        wm_dct: String,
        /// Embedding intensity in (0, 1).
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Write PCM16 instead of float32 and report the bit error rate
        /// that survives the quantisation.
        #[arg(long)]
        pcm16: bool,
    },
    /// Recover the watermarks from a WAV file.
    Extract {
        /// Watermarked (possibly attacked) WAV file.
        #[arg(long)]
        input: PathBuf,
        /// Key file written at embed time.
        #[arg(long)]
        key: PathBuf,
        /// Threshold policy.
        #[arg(long, value_enum, default_value_t = CliMode::Adaptive)]
        mode: CliMode,
        /// Expected wavelet-domain text; prints its bit error rate.
        #[arg(long)]
        expected_dwt: Option<String>,
        /// Expected cosine-domain text; prints its bit error rate.
        #[arg(long)]
        expected_dct: Option<String>,
    },
    /// Distort a WAV file through one attack channel.
    Attack {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(subcommand)]
        attack: AttackCmd,
    },
    /// Run the robustness and quality experiments, writing CSV reports.
    Evaluate {
        /// Host WAV file to embed into.
        #[arg(long)]
        input: PathBuf,
        /// Directory for sweep.csv, attacks.csv and quality.csv.
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "Pack my box with five dozen liquor jugs 1")]
        wm_dwt: String,
        #[arg(long, default_value = "The quick brown fox 0124")]
        wm_dct: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Base seed for the noise draws.
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Generate the deterministic speech-shaped test signal.
    Fixture {
        /// WAV file to write (32-bit float).
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 323.4)]
        seconds: f64,
        #[arg(long, default_value_t = 8000)]
        sample_rate: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum AttackCmd {
    /// Additive white Gaussian noise at an exact SNR.
    Awgn {
        #[arg(long)]
        snr_db: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Added sinusoid (mains interference).
    Hum {
        #[arg(long, default_value_t = 0.125)]
        amplitude: f64,
        #[arg(long, default_value_t = 50.0)]
        freq_hz: f64,
    },
    /// Uniform gain in decibels.
    Amplify {
        #[arg(long, default_value_t = 14.0)]
        gain_db: f64,
    },
    /// Prepend silence.
    Delay {
        #[arg(long, default_value_t = 100.0)]
        delay_ms: f64,
    },
    /// Flip the signal polarity.
    Invert,
    /// Zero all whole-signal cosine coefficients below the cutoff.
    Sparsify {
        #[arg(long, default_value_t = 0.05)]
        cutoff: f64,
    },
}

impl From<AttackCmd> for AttackSpec {
    fn from(cmd: AttackCmd) -> Self {
        match cmd {
            AttackCmd::Awgn { snr_db, seed } => AttackSpec::Awgn { snr_db, seed },
            AttackCmd::Hum { amplitude, freq_hz } => AttackSpec::Hum { amplitude, freq_hz },
            AttackCmd::Amplify { gain_db } => AttackSpec::Amplify { gain_db },
            AttackCmd::Delay { delay_ms } => AttackSpec::Delay { delay_ms },
            AttackCmd::Invert => AttackSpec::Invert,
            AttackCmd::Sparsify { cutoff } => AttackSpec::Sparsify { cutoff },
        }
    }
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Embed {
            input,
            output,
            key,
            wm_dwt,
            wm_dct,
            alpha,
            pcm16,
        } => cmd_embed(&input, &output, &key, &wm_dwt, &wm_dct, alpha, pcm16),
        Command::Extract {
            input,
            key,
            mode,
            expected_dwt,
            expected_dct,
        } => cmd_extract(&input, &key, mode.into(), expected_dwt, expected_dct),
        Command::Attack {
            input,
            output,
            attack,
        } => cmd_attack(&input, &output, attack.into()),
        Command::Evaluate {
            input,
            out_dir,
            wm_dwt,
            wm_dct,
            alpha,
            seed,
        } => cmd_evaluate(&input, &out_dir, &wm_dwt, &wm_dct, alpha, seed),
        Command::Fixture {
            output,
            seconds,
            sample_rate,
            seed,
        } => cmd_fixture(&output, seconds, sample_rate, seed),
    }
}

fn cmd_embed(
    input: &Path,
    output: &Path,
    key_path: &Path,
    wm_dwt: &str,
    wm_dct: &str,
    alpha: f64,
    pcm16: bool,
) -> anyhow::Result<()> {
    let host = wav::wav_read(input).with_context(|| format!("reading {}", input.display()))?;
    let (marked, key) = embed_multilevel(&host, wm_dwt, wm_dct, alpha)?;
    let quality = snr_db(&host.samples, &marked.samples[..host.len()])?;
    key.save(key_path)?;
    if pcm16 {
        wav::wav_write_pcm16(output, &marked)?;
    } else {
        wav::wav_write(output, &marked)?;
    }
    println!(
        "embedded {} + {} wavelet/cosine payload characters at alpha {alpha}",
        wm_dwt.len(),
        wm_dct.len()
    );
    println!(
        "host {} samples, padded to {} at {} Hz",
        host.len(),
        key.padded_length,
        key.sample_rate
    );
    println!("embedding snr {quality:.2} dB");
    println!("wrote {} and {}", output.display(), key_path.display());
    if pcm16 {
        let reread = wav::wav_read(output)?;
        let out = extract(&reread, &key, DetectorMode::Adaptive)?;
        let dwt_ref = text_to_bits(wm_dwt)?;
        let dct_ref = text_to_bits(wm_dct)?;
        let b_dwt = ber(&out.dwt.payload_bits, &dwt_ref.bits)?;
        let b_dct = ber(&out.dct.payload_bits, &dct_ref.bits)?;
        println!(
            "after pcm16 quantisation: adaptive ber dwt {:.6}, dct {:.6}",
            b_dwt.ber, b_dct.ber
        );
    }
    Ok(())
}

fn print_domain(d: &DomainDetection) {
    println!(
        "{}: text {:?}, threshold {:.6} ({}), known-char ber {:.4}, iterations {}, flag {}",
        d.domain,
        d.text,
        d.report.threshold,
        d.report.mode.label(),
        d.report.known_char_ber,
        d.report.iterations,
        d.report.flag
    );
}

fn print_expected_ber(label: &str, detected: &[u8], expected_text: &str) -> anyhow::Result<()> {
    let expected = text_to_bits(expected_text)?;
    if expected.bits.len() != detected.len() {
        bail!(
            "expected {label} text is {} bits but the key carries {} payload bits",
            expected.bits.len(),
            detected.len()
        );
    }
    let b = ber(detected, &expected.bits)?;
    println!(
        "{label} ber vs expected: {:.6} ({} of {} bits wrong)",
        b.ber, b.errors, b.size
    );
    Ok(())
}

fn cmd_extract(
    input: &Path,
    key_path: &Path,
    mode: DetectorMode,
    expected_dwt: Option<String>,
    expected_dct: Option<String>,
) -> anyhow::Result<()> {
    let audio = wav::wav_read(input).with_context(|| format!("reading {}", input.display()))?;
    let key = KeyFile::load(key_path)?;
    let out = extract(&audio, &key, mode)?;
    for w in &out.warnings {
        println!("warning: {w}");
    }
    print_domain(&out.dwt);
    print_domain(&out.dct);
    if let Some(text) = expected_dwt {
        print_expected_ber("dwt-svd", &out.dwt.payload_bits, &text)?;
    }
    if let Some(text) = expected_dct {
        print_expected_ber("dct-svd", &out.dct.payload_bits, &text)?;
    }
    Ok(())
}

fn cmd_attack(input: &Path, output: &Path, spec: AttackSpec) -> anyhow::Result<()> {
    let audio = wav::wav_read(input).with_context(|| format!("reading {}", input.display()))?;
    let outcome = attacks::apply(&audio, &spec)?;
    wav::wav_write(output, &outcome.audio)?;
    println!("{}: {}", spec.name(), outcome.detail);
    println!("wrote {}", output.display());
    Ok(())
}

fn cmd_evaluate(
    input: &Path,
    out_dir: &Path,
    wm_dwt: &str,
    wm_dct: &str,
    alpha: f64,
    seed: u64,
) -> anyhow::Result<()> {
    let host = wav::wav_read(input).with_context(|| format!("reading {}", input.display()))?;
    let mut config = ExperimentConfig::new(host, wm_dwt, wm_dct, out_dir);
    config.alpha = alpha;
    config.seed = seed;
    let outputs = run_evaluation(&config)?;
    println!("wrote {}", outputs.sweep_csv.display());
    println!("wrote {}", outputs.attacks_csv.display());
    println!("wrote {}", outputs.quality_csv.display());
    Ok(())
}

fn cmd_fixture(output: &Path, seconds: f64, sample_rate: u32, seed: u64) -> anyhow::Result<()> {
    if !(seconds.is_finite() && seconds > 0.0) {
        bail!("--seconds must be positive, got {seconds}");
    }
    let n = (seconds * f64::from(sample_rate)).round() as usize;
    let audio: AudioBuffer = synthetic_host(n, sample_rate, seed);
    wav::wav_write(output, &audio)?;
    let peak = audio.samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    println!(
        "wrote {}: {} samples ({:.3} s) at {} Hz, peak {:.3}, seed {}",
        output.display(),
        audio.len(),
        audio.duration_secs(),
        sample_rate,
        peak,
        seed
    );
    Ok(())
}
