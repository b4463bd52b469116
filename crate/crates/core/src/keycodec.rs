//! Key file codec.
//!
//! A key record packs into 32 bits, MSB first:
//!
//! ```text
//! byte 0    byte 1            byte 2   byte 3
//! s_op(8) | s_ep(7) cond(1) | major(8) | minor(8)
//! ```
//!
//! A key file is the 4-byte magic `SKC1`, a big-endian `u64` record count,
//! then one packed record per plaintext byte. Its length is always
//! `12 + 4 * count`.

use std::io::{self, Read, Seek, SeekFrom, Write};

use crate::cipher::KeyRecord;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"SKC1";
pub const HEADER_LEN: u64 = 12;
pub const RECORD_LEN: u64 = 4;

pub fn pack_record(rec: &KeyRecord) -> [u8; 4] {
    [
        rec.s_op(),
        (rec.s_ep() << 1) | u8::from(rec.cond()),
        rec.major(),
        rec.minor(),
    ]
}

/// Inverse of [`pack_record`]. `index` is only used to label errors.
pub fn unpack_record(raw: [u8; 4], index: u64) -> Result<KeyRecord> {
    let [s_op, mid, major, minor] = raw;
    KeyRecord::from_parts(s_op, mid >> 1, mid & 1 == 1, major, minor)
        .map_err(|reason| Error::InvalidRecord { index, reason })
}

/// Expected key file size for `count` records.
pub fn keyfile_len(count: u64) -> u64 {
    HEADER_LEN + RECORD_LEN * count
}

fn header(count: u64) -> [u8; 12] {
    let mut h = [0u8; 12];
    h[..4].copy_from_slice(&MAGIC);
    h[4..].copy_from_slice(&count.to_be_bytes());
    h
}

pub fn write_keyfile<W: Write>(records: &[KeyRecord], mut sink: W) -> Result<()> {
    sink.write_all(&header(records.len() as u64))?;
    for rec in records {
        sink.write_all(&pack_record(rec))?;
    }
    sink.flush()?;
    Ok(())
}

pub fn read_keyfile<R: Read>(source: R) -> Result<Vec<KeyRecord>> {
    let mut reader = KeyFileReader::new(source)?;
    let mut records = Vec::with_capacity(reader.count().min(1 << 20) as usize);
    while let Some(rec) = reader.next_record()? {
        records.push(rec);
    }
    reader.finish()?;
    Ok(records)
}

/// Streams records into a key file whose length is not known in advance.
///
/// The header is written with a zero count and patched by [`finish`].
///
/// [`finish`]: KeyFileWriter::finish
pub struct KeyFileWriter<W: Write + Seek> {
    sink: W,
    start: u64,
    count: u64,
}

impl<W: Write + Seek> KeyFileWriter<W> {
    pub fn new(mut sink: W) -> Result<Self> {
        let start = sink.stream_position()?;
        sink.write_all(&header(0))?;
        Ok(KeyFileWriter {
            sink,
            start,
            count: 0,
        })
    }

    pub fn push(&mut self, rec: &KeyRecord) -> Result<()> {
        self.sink.write_all(&pack_record(rec))?;
        self.count += 1;
        Ok(())
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Patches the record count and returns the sink.
    pub fn finish(mut self) -> Result<W> {
        let end = self.sink.stream_position()?;
        self.sink.seek(SeekFrom::Start(self.start + 4))?;
        self.sink.write_all(&self.count.to_be_bytes())?;
        self.sink.seek(SeekFrom::Start(end))?;
        self.sink.flush()?;
        Ok(self.sink)
    }
}

/// Reads a key file record by record, validating as it goes.
pub struct KeyFileReader<R: Read> {
    source: R,
    count: u64,
    read: u64,
}

impl<R: Read> KeyFileReader<R> {
    pub fn new(mut source: R) -> Result<Self> {
        let mut h = [0u8; 12];
        let got = read_full(&mut source, &mut h)?;
        if got >= 4 && h[..4] != MAGIC || got < 4 && h[..got] != MAGIC[..got] {
            return Err(Error::BadMagic {
                found: h[..got.min(4)].to_vec(),
            });
        }
        if got < h.len() {
            return Err(Error::TruncatedFile {
                expected: HEADER_LEN,
                actual: got as u64,
            });
        }
        let count = u64::from_be_bytes(h[4..].try_into().expect("8-byte slice"));
        Ok(KeyFileReader {
            source,
            count,
            read: 0,
        })
    }

    /// Record count declared by the header.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn next_record(&mut self) -> Result<Option<KeyRecord>> {
        if self.read == self.count {
            return Ok(None);
        }
        let mut raw = [0u8; 4];
        let got = read_full(&mut self.source, &mut raw)?;
        if got < raw.len() {
            return Err(Error::TruncatedFile {
                expected: keyfile_len(self.count),
                actual: keyfile_len(self.read) + got as u64,
            });
        }
        let rec = unpack_record(raw, self.read)?;
        self.read += 1;
        Ok(Some(rec))
    }

    /// Fails if bytes remain after the declared records.
    pub fn finish(mut self) -> Result<()> {
        let mut tail = Vec::new();
        self.source.read_to_end(&mut tail)?;
        if !tail.is_empty() || self.read != self.count {
            return Err(Error::TruncatedFile {
                expected: keyfile_len(self.count),
                actual: keyfile_len(self.read) + tail.len() as u64,
            });
        }
        Ok(())
    }
}

fn read_full<R: Read>(source: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match source.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}
