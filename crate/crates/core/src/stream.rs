//! Whole-file encryption and decryption.
//!
//! Files are processed in fixed-size chunks. Outputs are written to temporary
//! files in the destination directory and renamed into place only after every
//! byte has been flushed, so a failed job leaves nothing under the final names.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use tempfile::NamedTempFile;

use crate::cipher::{decrypt_byte, encrypt_byte};
use crate::error::{Error, Result};
use crate::keycodec::{keyfile_len, KeyFileReader, KeyFileWriter};

pub const CHUNK_LEN: usize = 64 * 1024;

/// Outcome of one encryption or decryption job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobReport {
    pub input_path: PathBuf,
    pub output_path: PathBuf,
    pub bytes_processed: u64,
    /// Wall-clock time for the job.
    pub elapsed: Duration,
}

impl JobReport {
    pub fn elapsed_secs(&self) -> f64 {
        self.elapsed.as_secs_f64()
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn staging_file(dest: &Path) -> Result<NamedTempFile> {
    let dir = match dest.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    NamedTempFile::new_in(dir).map_err(|e| Error::io(dest, e))
}

fn commit(tmp: NamedTempFile, dest: &Path) -> Result<()> {
    tmp.as_file().sync_all().map_err(|e| Error::io(dest, e))?;
    tmp.persist(dest).map_err(|e| Error::io(dest, e.error))?;
    Ok(())
}

/// Reads into `buf` until it is full or the source is exhausted.
fn fill<R: Read>(src: &mut R, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut n = 0;
    while n < buf.len() {
        match src.read(&mut buf[n..]) {
            Ok(0) => break,
            Ok(k) => n += k,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(n)
}

/// Encrypts `src` into a raw ciphertext file and a key file.
pub fn encrypt_file(src: &Path, ct_out: &Path, key_out: &Path) -> Result<JobReport> {
    let started = Instant::now();
    let mut input = BufReader::new(open(src)?);

    let ct_tmp = staging_file(ct_out)?;
    let key_tmp = staging_file(key_out)?;
    let mut ct = BufWriter::new(ct_tmp.as_file());
    let mut keys =
        KeyFileWriter::new(BufWriter::new(key_tmp.as_file())).map_err(|e| e.at(key_out))?;

    let mut buf = vec![0u8; CHUNK_LEN];
    let mut total = 0u64;
    loop {
        let n = fill(&mut input, &mut buf).map_err(|e| Error::io(src, e))?;
        if n == 0 {
            break;
        }
        for b in &mut buf[..n] {
            let (c, rec) = encrypt_byte(*b);
            *b = c;
            keys.push(&rec).map_err(|e| e.at(key_out))?;
        }
        ct.write_all(&buf[..n]).map_err(|e| Error::io(ct_out, e))?;
        total += n as u64;
    }

    ct.flush().map_err(|e| Error::io(ct_out, e))?;
    drop(ct);
    keys.finish()
        .map_err(|e| e.at(key_out))?
        .flush()
        .map_err(|e| Error::io(key_out, e))?;

    commit(key_tmp, key_out)?;
    commit(ct_tmp, ct_out)?;

    Ok(JobReport {
        input_path: src.to_path_buf(),
        output_path: ct_out.to_path_buf(),
        bytes_processed: total,
        elapsed: started.elapsed(),
    })
}

/// Decrypts `ct` with the records of `key_in` into `pt_out`.
pub fn decrypt_file(ct: &Path, key_in: &Path, pt_out: &Path) -> Result<JobReport> {
    let started = Instant::now();
    let ct_file = open(ct)?;
    let ct_len = ct_file.metadata().map_err(|e| Error::io(ct, e))?.len();
    let key_file = open(key_in)?;
    let key_len = key_file.metadata().map_err(|e| Error::io(key_in, e))?.len();

    let mut keys = KeyFileReader::new(BufReader::new(key_file)).map_err(|e| e.at(key_in))?;
    let expected = keyfile_len(keys.count());
    if key_len != expected {
        return Err(Error::TruncatedFile {
            expected,
            actual: key_len,
        });
    }
    if ct_len != keys.count() {
        return Err(Error::LengthMismatch {
            ciphertext: ct_len,
            records: keys.count(),
        });
    }

    let mut input = BufReader::new(ct_file);
    let pt_tmp = staging_file(pt_out)?;
    let mut out = BufWriter::new(pt_tmp.as_file());
    let mut buf = vec![0u8; CHUNK_LEN];
    let mut total = 0u64;
    loop {
        let n = fill(&mut input, &mut buf).map_err(|e| Error::io(ct, e))?;
        if n == 0 {
            break;
        }
        for b in &mut buf[..n] {
            let rec =
                keys.next_record()
                    .map_err(|e| e.at(key_in))?
                    .ok_or(Error::LengthMismatch {
                        ciphertext: total + n as u64,
                        records: keys.count(),
                    })?;
            *b = decrypt_byte(*b, &rec);
        }
        out.write_all(&buf[..n]).map_err(|e| Error::io(pt_out, e))?;
        total += n as u64;
    }
    if total != keys.count() {
        return Err(Error::LengthMismatch {
            ciphertext: total,
            records: keys.count(),
        });
    }
    keys.finish().map_err(|e| e.at(key_in))?;

    out.flush().map_err(|e| Error::io(pt_out, e))?;
    drop(out);
    commit(pt_tmp, pt_out)?;

    Ok(JobReport {
        input_path: ct.to_path_buf(),
        output_path: pt_out.to_path_buf(),
        bytes_processed: total,
        elapsed: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use std::fs;

    use super::*;
    use crate::cipher::derive_key_record;
    use crate::keycodec::read_keyfile;

    #[test]
    fn do_becomes_el() {
        let dir = tempfile::tempdir().unwrap();
        let (pt, ct, key, back) = (
            dir.path().join("test.txt"),
            dir.path().join("ct_test.txt"),
            dir.path().join("test.skc"),
            dir.path().join("pt_test.txt"),
        );
        fs::write(&pt, b"do").unwrap();
        let report = encrypt_file(&pt, &ct, &key).unwrap();
        assert_eq!(report.bytes_processed, 2);
        assert_eq!(fs::read(&ct).unwrap(), b"el");
        let recs = read_keyfile(fs::File::open(&key).unwrap()).unwrap();
        assert_eq!(recs, [derive_key_record(b'd'), derive_key_record(b'o')]);

        let report = decrypt_file(&ct, &key, &back).unwrap();
        assert_eq!(report.bytes_processed, 2);
        assert_eq!(fs::read(&back).unwrap(), b"do");
    }

    #[test]
    fn empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let (pt, ct, key) = (
            dir.path().join("empty"),
            dir.path().join("ct"),
            dir.path().join("key"),
        );
        fs::write(&pt, b"").unwrap();
        encrypt_file(&pt, &ct, &key).unwrap();
        assert_eq!(fs::read(&ct).unwrap().len(), 0);
        assert_eq!(fs::read(&key).unwrap().len(), 12);
    }

    #[test]
    fn missing_input_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope");
        let err = encrypt_file(&missing, &dir.path().join("c"), &dir.path().join("k")).unwrap_err();
        assert!(matches!(&err, Error::Io { path, .. } if path == &missing));
        assert!(err.to_string().contains("nope"));
        // nothing left behind
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn length_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let (pt, ct, key, out) = (
            dir.path().join("pt"),
            dir.path().join("ct"),
            dir.path().join("key"),
            dir.path().join("out"),
        );
        fs::write(&pt, b"do").unwrap();
        encrypt_file(&pt, &ct, &key).unwrap();
        fs::write(&ct, b"elx").unwrap();
        assert!(matches!(
            decrypt_file(&ct, &key, &out),
            Err(Error::LengthMismatch {
                ciphertext: 3,
                records: 2
            })
        ));
        assert!(!out.exists());
    }

    #[test]
    fn tampered_record_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let (pt, ct, key, out) = (
            dir.path().join("pt"),
            dir.path().join("ct"),
            dir.path().join("key"),
            dir.path().join("out"),
        );
        fs::write(&pt, b"do").unwrap();
        encrypt_file(&pt, &ct, &key).unwrap();
        let mut raw = fs::read(&key).unwrap();
        raw[12 + 4 + 1] ^= 1; // cond bit of 'o'
        fs::write(&key, &raw).unwrap();
        assert!(matches!(
            decrypt_file(&ct, &key, &out),
            Err(Error::InvalidRecord { index: 1, .. })
        ));
        assert!(!out.exists());
    }
}
