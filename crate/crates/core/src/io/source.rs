//! Byte-level data sources (which double as sinks).

use std::fs::{File, OpenOptions};
use std::io::{self, Cursor, Read, Seek, SeekFrom, Write};
use std::path::Path;

use crate::error::{Result, VktError};

enum Backing {
    File(File),
    Memory(Cursor<Vec<u8>>),
    Reader(Box<dyn Read + Send>),
    Writer(Box<dyn Write + Send>),
}

/// File, in-memory or stream backed byte source with an absolute cursor.
pub struct DataSource {
    backing: Backing,
    readable: bool,
    writable: bool,
    cursor: u64,
}

impl std::fmt::Debug for DataSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.backing {
            Backing::File(_) => "file",
            Backing::Memory(_) => "memory",
            Backing::Reader(_) => "reader",
            Backing::Writer(_) => "writer",
        };
        f.debug_struct("DataSource")
            .field("kind", &kind)
            .field("readable", &self.readable)
            .field("writable", &self.writable)
            .field("cursor", &self.cursor)
            .finish()
    }
}

fn denied(what: &str) -> VktError {
    VktError::IoFailure(io::Error::new(io::ErrorKind::PermissionDenied, format!("data source is not {what}")))
}

impl DataSource {
    /// Read-only file.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::with(Backing::File(File::open(path)?), true, false))
    }

    /// New (truncated) file, readable and writable.
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let f = OpenOptions::new().read(true).write(true).create(true).truncate(true).open(path)?;
        Ok(Self::with(Backing::File(f), true, true))
    }

    /// Existing file opened for in-place updates.
    pub fn open_read_write(path: impl AsRef<Path>) -> Result<Self> {
        let f = OpenOptions::new().read(true).write(true).open(path)?;
        Ok(Self::with(Backing::File(f), true, true))
    }

    /// Readable, writable, seekable in-memory bytes.
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self::with(Backing::Memory(Cursor::new(bytes)), true, true)
    }

    /// In-memory bytes that reject writes.
    pub fn read_only_bytes(bytes: Vec<u8>) -> Self {
        Self::with(Backing::Memory(Cursor::new(bytes)), true, false)
    }

    pub fn memory() -> Self {
        Self::from_bytes(Vec::new())
    }

    /// Forward-only input stream (e.g. standard input).
    pub fn from_reader(r: impl Read + Send + 'static) -> Self {
        Self::with(Backing::Reader(Box::new(r)), true, false)
    }

    /// Forward-only output stream.
    pub fn from_writer(w: impl Write + Send + 'static) -> Self {
        Self::with(Backing::Writer(Box::new(w)), false, true)
    }

    fn with(backing: Backing, readable: bool, writable: bool) -> Self {
        Self { backing, readable, writable, cursor: 0 }
    }

    pub fn is_readable(&self) -> bool {
        self.readable
    }

    pub fn is_writable(&self) -> bool {
        self.writable
    }

    pub fn is_seekable(&self) -> bool {
        matches!(self.backing, Backing::File(_) | Backing::Memory(_))
    }

    pub fn position(&self) -> u64 {
        self.cursor
    }

    /// Total length for seekable sources.
    pub fn len(&self) -> Option<u64> {
        match &self.backing {
            Backing::File(f) => f.metadata().ok().map(|m| m.len()),
            Backing::Memory(c) => Some(c.get_ref().len() as u64),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// In-memory contents, if memory backed.
    pub fn into_bytes(self) -> Option<Vec<u8>> {
        match self.backing {
            Backing::Memory(c) => Some(c.into_inner()),
            _ => None,
        }
    }

    /// Reads until `buf` is full or the source ends; returns the byte count.
    pub fn read(&mut self, buf: &mut [u8]) -> Result<usize> {
        if !self.readable {
            return Err(denied("readable"));
        }
        let mut n = 0;
        while n < buf.len() {
            let got = match &mut self.backing {
                Backing::File(f) => f.read(&mut buf[n..]),
                Backing::Memory(c) => c.read(&mut buf[n..]),
                Backing::Reader(r) => r.read(&mut buf[n..]),
                Backing::Writer(_) => unreachable!("writers are not readable"),
            };
            match got {
                Ok(0) => break,
                Ok(k) => n += k,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(e) => return Err(e.into()),
            }
        }
        self.cursor += n as u64;
        Ok(n)
    }

    pub fn write(&mut self, buf: &[u8]) -> Result<()> {
        if !self.writable {
            return Err(denied("writable"));
        }
        match &mut self.backing {
            Backing::File(f) => f.write_all(buf)?,
            Backing::Memory(c) => c.write_all(buf)?,
            Backing::Writer(w) => w.write_all(buf)?,
            Backing::Reader(_) => unreachable!("readers are not writable"),
        }
        self.cursor += buf.len() as u64;
        Ok(())
    }

    /// Absolute seek.
    pub fn seek(&mut self, pos: u64) -> Result<()> {
        match &mut self.backing {
            Backing::File(f) => f.seek(SeekFrom::Start(pos))?,
            Backing::Memory(c) => c.seek(SeekFrom::Start(pos))?,
            _ => return Err(VktError::NotSeekable),
        };
        self.cursor = pos;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        match &mut self.backing {
            Backing::File(f) => {
                f.flush()?;
                if self.writable {
                    f.sync_data()?;
                }
            }
            Backing::Memory(c) => c.flush()?,
            Backing::Writer(w) => w.flush()?,
            Backing::Reader(_) => {}
        }
        Ok(())
    }
}
