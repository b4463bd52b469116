//! Command dispatch for the `gcdxor` binary.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when processing fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use gcdxor::{
    avalanche, chi_square, decrypt_file, encrypt_file, histogram, substitution_table, Error,
    FlipBit,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Column headers of the corpus report, tab separated.
pub const REPORT_HEADER: &str = "Source/Target File Size (Byte)\tEncryption Time (S)\tChi Square Value\tDegree of Freedom\tAvalanche Achieved (%)";

#[derive(Debug, Parser)]
#[command(
    name = "gcdxor",
    version,
    about = "Bit-level GCD-keyed XOR file cipher"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encrypt a file, writing raw ciphertext and a key file
    Encrypt {
        #[arg(long = "in", value_name = "PLAIN")]
        input: PathBuf,
        #[arg(long = "out", value_name = "CIPHER")]
        output: PathBuf,
        #[arg(long, value_name = "KEYFILE")]
        key: PathBuf,
    },
    /// Decrypt a ciphertext with its key file
    Decrypt {
        #[arg(long = "in", value_name = "CIPHER")]
        input: PathBuf,
        #[arg(long, value_name = "KEYFILE")]
        key: PathBuf,
        #[arg(long = "out", value_name = "PLAIN")]
        output: PathBuf,
    },
    /// Chi-square statistic between a source file and its encryption
    Analyze {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        enc: PathBuf,
    },
    /// Avalanche percentage when one bit of every plaintext byte is flipped
    Avalanche {
        #[arg(long = "in", value_name = "PLAIN")]
        input: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=7))]
        flip_bit: u8,
    },
    /// Dump the 256-entry substitution table as CSV
    Table {
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
    },
    /// Encrypt and analyze every regular file in a directory
    Report {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(0..=7))]
        flip_bit: u8,
        /// Print "-" instead of the measured encryption time
        #[arg(long)]
        no_timing: bool,
    },
}

/// A processing failure, labelled with what was being worked on.
#[derive(Debug)]
struct Failure {
    context: String,
    cause: Error,
}

fn fail(context: impl Into<String>) -> impl FnOnce(Error) -> Failure {
    let context = context.into();
    move |cause| Failure { context, cause }
}

fn io_fail(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure {
        context: path.display().to_string(),
        cause: Error::Io {
            path: path.to_path_buf(),
            source: e,
        },
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };

    match execute(cli.command) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.context, f.cause);
            EXIT_FAILURE
        }
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    let mut text = String::new();
    match command {
        Command::Encrypt { input, output, key } => {
            let job = encrypt_file(&input, &output, &key)
                .map_err(fail(format!("encrypting {}", input.display())))?;
            writeln!(
                text,
                "encrypted {} bytes: {} -> {} (key {})",
                job.bytes_processed,
                input.display(),
                output.display(),
                key.display()
            )
            .unwrap();
        }
        Command::Decrypt { input, key, output } => {
            let job = decrypt_file(&input, &key, &output).map_err(fail(format!(
                "decrypting {} with {}",
                input.display(),
                key.display()
            )))?;
            writeln!(
                text,
                "decrypted {} bytes: {} -> {}",
                job.bytes_processed,
                input.display(),
                output.display()
            )
            .unwrap();
        }
        Command::Analyze { src, enc } => {
            let source = histogram(&src).map_err(fail(src.display().to_string()))?;
            let encrypted = histogram(&enc).map_err(fail(enc.display().to_string()))?;
            let r = chi_square(&source, &encrypted).map_err(fail(format!(
                "{} vs {}",
                src.display(),
                enc.display()
            )))?;
            writeln!(text, "chi_square: {:.4}", r.statistic).unwrap();
            writeln!(text, "degrees_of_freedom: {}", r.degrees_of_freedom).unwrap();
            writeln!(text, "classes_used: {}", r.classes_used).unwrap();
        }
        Command::Avalanche { input, flip_bit } => {
            let flip = FlipBit::new(flip_bit).map_err(fail("--flip-bit"))?;
            let r = avalanche(&input, flip).map_err(fail(input.display().to_string()))?;
            writeln!(text, "flip_bit: {}", r.flipped_bit.index()).unwrap();
            writeln!(text, "total_bits: {}", r.total_bits).unwrap();
            writeln!(text, "differing_bits: {}", r.differing_bits).unwrap();
            writeln!(text, "avalanche_percent: {:.2}", r.percentage).unwrap();
        }
        Command::Table { output } => {
            fs::write(&output, table_csv()).map_err(io_fail(&output))?;
            writeln!(text, "wrote 256 entries to {}", output.display()).unwrap();
        }
        Command::Report {
            dir,
            flip_bit,
            no_timing,
        } => {
            let flip = FlipBit::new(flip_bit).map_err(fail("--flip-bit"))?;
            let rows = corpus_report(&dir, flip)?;
            text = render_report(&rows, !no_timing);
        }
    }
    Ok(text)
}

/// The substitution table as `plain,cipher,keyvalue` lines under a header.
pub fn table_csv() -> String {
    let mut csv = String::from("plain,cipher,keyvalue\n");
    for entry in substitution_table() {
        writeln!(
            csv,
            "{},{},{}",
            entry.plain,
            entry.cipher,
            entry.key_value().0
        )
        .unwrap();
    }
    csv
}

/// One line of the corpus report.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusReportRow {
    pub file_size_bytes: u64,
    pub encryption_time_s: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// `None` for empty files, which have no bits to flip.
    pub avalanche_percent: Option<f64>,
}

fn regular_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_fail(dir))? {
        let entry = entry.map_err(io_fail(dir))?;
        let path = entry.path();
        // follows symlinks, so a link to a regular file counts
        if fs::metadata(&path).map_err(io_fail(&path))?.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Encrypts each regular file in `dir` (sorted by name) into a scratch
/// directory and measures it.
fn corpus_report(dir: &Path, flip: FlipBit) -> Result<Vec<CorpusReportRow>, Failure> {
    let scratch = tempfile::tempdir().map_err(io_fail(Path::new("temporary directory")))?;
    let ct = scratch.path().join("ciphertext");
    let key = scratch.path().join("key");
    let mut rows = Vec::new();
    for file in regular_files(dir)? {
        let label = file.display().to_string();
        let job = encrypt_file(&file, &ct, &key).map_err(fail(&label))?;
        let source = histogram(&file).map_err(fail(&label))?;
        let encrypted = histogram(&ct).map_err(fail(&label))?;
        let chi = chi_square(&source, &encrypted).map_err(fail(&label))?;
        let avalanche_percent = match avalanche(&file, flip) {
            Ok(r) => Some(r.percentage),
            Err(Error::EmptyInput) => None,
            Err(e) => return Err(fail(&label)(e)),
        };
        rows.push(CorpusReportRow {
            file_size_bytes: job.bytes_processed,
            encryption_time_s: job.elapsed_secs(),
            chi_square: chi.statistic,
            degrees_of_freedom: chi.degrees_of_freedom,
            avalanche_percent,
        });
    }
    Ok(rows)
}

pub fn render_report(rows: &[CorpusReportRow], timing: bool) -> String {
    let mut text = String::new();
    writeln!(text, "{REPORT_HEADER}").unwrap();
    for row in rows {
        let time = if timing {
            format!("{:.2}", row.encryption_time_s)
        } else {
            "-".to_string()
        };
        let aval = row
            .avalanche_percent
            .map_or_else(|| "-".to_string(), |p| format!("{p:.2}"));
        writeln!(
            text,
            "{}\t{}\t{:.2}\t{}\t{}",
            row.file_size_bytes, time, row.chi_square, row.degrees_of_freedom, aval
        )
        .unwrap();
    }
    text
}
