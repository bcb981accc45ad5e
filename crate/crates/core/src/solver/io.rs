//! Binary field files.
//!
//! Layout, all integers and floats little-endian:
//!
//! | offset | size | content                                      |
//! |-------:|-----:|----------------------------------------------|
//! | 0      | 8    | magic `SCHMGPE1`                             |
//! | 8      | 4    | u32 endianness tag `0x01020304`              |
//! | 12     | 4    | u32 format version (1)                       |
//! | 16     | 24   | 3 × u64 points per axis                      |
//! | 40     | 24   | 3 × f64 half-widths [m]                      |
//! | 64     | 8    | f64 length unit ρ₀ [m]                       |
//! | 72     | 8    | u64 problem hash                             |
//! | 80     | 8    | 3 × u8 axis roles (0 transverse, 1 longitudinal), 5 zero bytes |
//! | 88     | 8·n  | f64 field values, axis 0 slowest, in ρ₀^{-3/2} |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{AxisRole, Grid};

pub const MAGIC: &[u8; 8] = b"SCHMGPE1";
pub const ENDIAN_TAG: u32 = 0x0102_0304;
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 88;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub grid: Grid,
    /// ρ₀ [m].
    pub length_unit: f64,
    pub problem_hash: u64,
    pub psi: Vec<f64>,
}

/// Scalars checked by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldCheck {
    pub norm: f64,
    /// Largest |ψ(x) − ψ(−x)| over single-axis reflections, relative to max ψ.
    pub max_asymmetry: f64,
    pub min_value: f64,
}

impl FieldFile {
    pub fn write(&self, path: &Path) -> Result<()> {
        if self.psi.len() != self.grid.len() {
            return Err(Error::Format("field length does not match grid".into()));
        }
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(MAGIC)?;
        out.write_all(&ENDIAN_TAG.to_le_bytes())?;
        out.write_all(&VERSION.to_le_bytes())?;
        for n in self.grid.points {
            out.write_all(&(n as u64).to_le_bytes())?;
        }
        for l in self.grid.half_width {
            out.write_all(&(l * self.length_unit).to_le_bytes())?;
        }
        out.write_all(&self.length_unit.to_le_bytes())?;
        out.write_all(&self.problem_hash.to_le_bytes())?;
        let mut roles = [0u8; 8];
        for (slot, role) in roles.iter_mut().zip(self.grid.roles) {
            *slot = match role {
                AxisRole::Transverse => 0,
                AxisRole::Longitudinal => 1,
            };
        }
        out.write_all(&roles)?;
        for v in &self.psi {
            out.write_all(&v.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut inp = BufReader::new(File::open(path)?);
        let mut header = [0u8; HEADER_LEN];
        inp.read_exact(&mut header)
            .map_err(|_| Error::Format("file shorter than header".into()))?;
        if &header[0..8] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(header[o..o + 8].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
        if u32_at(8) != ENDIAN_TAG {
            return Err(Error::Format(format!("unexpected endianness tag {:#010x}", u32_at(8))));
        }
        if u32_at(12) != VERSION {
            return Err(Error::Format(format!("unsupported version {}", u32_at(12))));
        }
        let length_unit = f64_at(64);
        let points = [0, 1, 2].map(|i| u64_at(16 + 8 * i) as usize);
        let half_width = [0, 1, 2].map(|i| f64_at(40 + 8 * i) / length_unit);
        let mut roles = [AxisRole::Transverse; 3];
        for (i, role) in roles.iter_mut().enumerate() {
            *role = match header[80 + i] {
                0 => AxisRole::Transverse,
                1 => AxisRole::Longitudinal,
                b => return Err(Error::Format(format!("bad axis role byte {b}"))),
            };
        }
        let grid = Grid::new(points, half_width, roles)?;
        let mut bytes = Vec::new();
        inp.read_to_end(&mut bytes)?;
        if bytes.len() != 8 * grid.len() {
            return Err(Error::Format(format!(
                "expected {} data bytes, found {}",
                8 * grid.len(),
                bytes.len()
            )));
        }
        let psi = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self {
            grid,
            length_unit,
            problem_hash: u64_at(72),
            psi,
        })
    }

    pub fn check(&self) -> FieldCheck {
        check_field(&self.psi, &self.grid)
    }
}

pub fn check_field(psi: &[f64], grid: &Grid) -> FieldCheck {
    let norm = psi.iter().map(|v| v * v).sum::<f64>() * grid.cell_volume();
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let [nx, ny, nz] = grid.points;
    let mut asym = 0.0f64;
    grid.for_each_index(|flat, [i, j, k]| {
        for mirror in [
            grid.index(nx - 1 - i, j, k),
            grid.index(i, ny - 1 - j, k),
            grid.index(i, j, nz - 1 - k),
        ] {
            asym = asym.max((psi[flat] - psi[mirror]).abs());
        }
    });
    FieldCheck {
        norm,
        max_asymmetry: if peak > 0.0 { asym / peak } else { 0.0 },
        min_value: psi.iter().cloned().fold(f64::INFINITY, f64::min),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let (t, l) = (AxisRole::Transverse, AxisRole::Longitudinal);
        let grid = Grid::new([2, 4, 8], [6.0, 6.0, 20.0], [t, t, l]).unwrap();
        let psi: Vec<f64> = (0..grid.len()).map(|i| (i as f64).sin()).collect();
        let f = FieldFile {
            grid,
            length_unit: 8.1e-7,
            problem_hash: 0xdead_beef,
            psi,
        };
        let dir = std::env::temp_dir().join(format!("field-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("f.bin");
        f.write(&path).unwrap();
        let len = std::fs::metadata(&path).unwrap().len() as usize;
        assert_eq!(len, HEADER_LEN + 8 * f.grid.len());
        let g = FieldFile::read(&path).unwrap();
        assert_eq!(g.psi, f.psi);
        assert_eq!(g.problem_hash, f.problem_hash);
        for i in 0..3 {
            assert!((g.grid.half_width[i] / f.grid.half_width[i] - 1.0).abs() < 1e-15);
        }
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 1);
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(FieldFile::read(&path), Err(Error::Format(_))));
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(FieldFile::read(&path), Err(Error::Format(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
