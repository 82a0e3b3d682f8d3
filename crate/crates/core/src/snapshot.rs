//! On-disk field snapshots and human-readable metadata sidecars.
//!
//! Snapshot layout: one ASCII header line `HMHD1 <n> <ncomp>` followed by
//! `ncomp * n^3` little-endian IEEE-754 doubles holding physical samples,
//! component-major, x varying fastest within a component. Reading and
//! re-writing a snapshot reproduces it bit for bit (samples are kept raw;
//! nothing re-enters spectral space on the way through).
//!
//! Sidecars are plain `key = value` text, one pair per line, order
//! preserved; they carry checkpoint time, physical parameters and the
//! configuration hash next to each snapshot.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{SpectralField, SpectralVectorField};
use crate::grid::Grid;

const MAGIC: &str = "HMHD1";

/// A snapshot as stored on disk: raw sample cubes, one per component.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSnapshot {
    pub n: usize,
    pub components: Vec<Vec<f64>>,
}

impl RawSnapshot {
    /// Capture a scalar field.
    pub fn from_scalar(field: &SpectralField) -> Self {
        RawSnapshot { n: field.grid().n(), components: vec![field.to_physical()] }
    }

    /// Capture a vector field (three components).
    pub fn from_vector(field: &SpectralVectorField) -> Self {
        let [x, y, z] = field.to_physical();
        RawSnapshot { n: field.grid().n(), components: vec![x, y, z] }
    }

    /// Serialize: header line, then components in order, little-endian.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{MAGIC} {} {}", self.n, self.components.len())?;
        let mut buf = Vec::with_capacity(self.n.pow(3) * 8);
        for comp in &self.components {
            buf.clear();
            for &sample in comp {
                buf.extend_from_slice(&sample.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    /// Parse a snapshot, validating the header and the exact byte count.
    pub fn read_from(mut r: impl Read) -> Result<Self> {
        // Read the header one byte at a time so no payload is consumed.
        let mut header = Vec::new();
        loop {
            let mut byte = [0u8; 1];
            r.read_exact(&mut byte)
                .map_err(|_| Error::SnapshotFormat("unexpected end of data in header".into()))?;
            if byte[0] == b'\n' {
                break;
            }
            if header.len() > 64 {
                return Err(Error::SnapshotFormat("header line too long".into()));
            }
            header.push(byte[0]);
        }
        let header = String::from_utf8(header)
            .map_err(|_| Error::SnapshotFormat("header is not valid UTF-8".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != MAGIC {
            return Err(Error::SnapshotFormat(format!("bad header line `{header}`")));
        }
        let n: usize = parts[1]
            .parse()
            .map_err(|_| Error::SnapshotFormat(format!("bad resolution `{}`", parts[1])))?;
        let ncomp: usize = parts[2]
            .parse()
            .map_err(|_| Error::SnapshotFormat(format!("bad component count `{}`", parts[2])))?;
        if n == 0 || ncomp == 0 {
            return Err(Error::SnapshotFormat("resolution and component count must be positive".into()));
        }
        let cube = n * n * n;
        let mut components = Vec::with_capacity(ncomp);
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        if payload.len() != ncomp * cube * 8 {
            return Err(Error::SnapshotFormat(format!(
                "expected {} payload bytes for n={n}, ncomp={ncomp}, found {}",
                ncomp * cube * 8,
                payload.len()
            )));
        }
        for c in 0..ncomp {
            let mut samples = Vec::with_capacity(cube);
            for i in 0..cube {
                let off = (c * cube + i) * 8;
                samples.push(f64::from_le_bytes(payload[off..off + 8].try_into().unwrap()));
            }
            components.push(samples);
        }
        Ok(RawSnapshot { n, components })
    }

    /// Interpret as a scalar field on `grid`.
    pub fn to_scalar(&self, grid: Grid) -> Result<SpectralField> {
        self.check_shape(grid, 1)?;
        SpectralField::from_physical(grid, &self.components[0])
    }

    /// Interpret as a vector field on `grid`.
    pub fn to_vector(&self, grid: Grid) -> Result<SpectralVectorField> {
        self.check_shape(grid, 3)?;
        SpectralVectorField::from_physical(
            grid,
            [&self.components[0], &self.components[1], &self.components[2]].map(|v| v.as_slice()),
        )
    }

    fn check_shape(&self, grid: Grid, ncomp: usize) -> Result<()> {
        if self.n != grid.n() {
            return Err(Error::GridMismatch(format!(
                "snapshot resolution {} vs grid {}",
                self.n,
                grid.n()
            )));
        }
        if self.components.len() != ncomp {
            return Err(Error::SnapshotFormat(format!(
                "expected {ncomp} components, snapshot has {}",
                self.components.len()
            )));
        }
        Ok(())
    }
}

/// Write a vector field to `path` in snapshot format.
pub fn save_vector(path: impl AsRef<Path>, field: &SpectralVectorField) -> Result<()> {
    let file = std::fs::File::create(path)?;
    RawSnapshot::from_vector(field).write_to(std::io::BufWriter::new(file))
}

/// Read a vector field from `path`; the grid is inferred from the header
/// (default box period).
pub fn load_vector(path: impl AsRef<Path>) -> Result<SpectralVectorField> {
    let file = std::fs::File::open(path)?;
    let raw = RawSnapshot::read_from(std::io::BufReader::new(file))?;
    let grid = Grid::new(raw.n)?;
    raw.to_vector(grid)
}

/// Ordered `key = value` metadata, the sidecar format used for checkpoints
/// and run manifests.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new() -> Self {
        Metadata::default()
    }

    /// Append a pair. Keys may repeat; order is preserved.
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidData(format!("metadata line {} has no `=`: `{line}`", lineno + 1))
            })?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Metadata { entries })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Metadata::from_text(&std::fs::read_to_string(path)?)
    }
}
