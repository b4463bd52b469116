use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the key codec, the file pipelines and the analysis tools.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}: no space left on device", path.display())]
    NoSpace { path: PathBuf },

    #[error("key stream error: {0}")]
    Stream(#[from] io::Error),

    #[error("bad key file magic: expected \"SKC1\", found {found:02x?}")]
    BadMagic { found: Vec<u8> },

    #[error("truncated key file: expected {expected} bytes, found {actual}")]
    TruncatedFile { expected: u64, actual: u64 },

    #[error("invalid key record {index}: {reason}")]
    InvalidRecord { index: u64, reason: RecordDefect },

    #[error(
        "length mismatch: ciphertext has {ciphertext} bytes but key file has {records} records"
    )]
    LengthMismatch { ciphertext: u64, records: u64 },

    #[error("histogram totals differ: source {source_total}, encrypted {encrypted_total}")]
    HistogramMismatch {
        source_total: u64,
        encrypted_total: u64,
    },

    #[error("input is empty")]
    EmptyInput,

    #[error("flip bit {0} out of range (expected 0..=7)")]
    InvalidFlipBit(u8),
}

impl Error {
    /// Attach a path to an I/O error, mapping a full disk to [`Error::NoSpace`].
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        let path = path.into();
        if source.kind() == io::ErrorKind::StorageFull {
            Error::NoSpace { path }
        } else {
            Error::Io { path, source }
        }
    }

    /// Replace a pathless stream error with one naming `path`.
    pub(crate) fn at(self, path: &std::path::Path) -> Self {
        match self {
            Error::Stream(source) => Error::io(path, source),
            other => other,
        }
    }
}

/// Why a packed key record was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RecordDefect {
    #[error("odd-position sum {0} has bits outside positions 1, 3, 5, 7")]
    OddSum(u8),
    #[error("even-position sum {0} has bits outside positions 0, 2, 4, 6")]
    EvenSum(u8),
    #[error("condition bit disagrees with the sums")]
    Condition,
    #[error("major/minor blocks disagree with the condition bit")]
    Ordering,
}

pub type Result<T> = std::result::Result<T, Error>;
