//! The `WCT1` coefficient container.
//!
//! ```text
//! offset size  field
//!      0    4  magic "WCT1"
//!      4    2  version (1)
//!      6    1  dtype (0 = f32)
//!      7    1  flags (layout, see WctLayout)
//!      8    4  height
//!     12    4  width
//!     16    4  channels
//!     20    4  count
//!     24    …  count × channels × height × width values
//! ```
//!
//! All integers and values are little-endian. The payload is channel-major
//! per tensor and row-major within a channel.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::Array3;

use super::tensor::{PackedTensor, PACKED_CHANNELS};
use crate::augment::AugOperator;
use crate::error::{shape_err, Error, Result};

pub const WCT_MAGIC: [u8; 4] = *b"WCT1";
pub const WCT_VERSION: u16 = 1;
pub const DTYPE_F32: u8 = 0;
pub const HEADER_LEN: usize = 24;

const OPERATOR_BANK_FLAG: u8 = 0x80;

/// What the tensors in a file represent, stored in the flags byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WctLayout {
    /// Flags `0`: 12-channel packed level-1 subbands.
    Packed,
    /// Flags `1..=15`: 3 full-size Y/Cb/Cr planes in pyramid layout with this many levels.
    Pyramid { levels: u8 },
    /// Flags `0x80`: 2 channels, the left and right conjugated operator matrices.
    OperatorBank,
}

impl WctLayout {
    pub fn flags(self) -> u8 {
        match self {
            WctLayout::Packed => 0,
            WctLayout::Pyramid { levels } => levels & 0x0f,
            WctLayout::OperatorBank => OPERATOR_BANK_FLAG,
        }
    }

    pub fn from_flags(flags: u8) -> Result<Self> {
        match flags {
            0 => Ok(WctLayout::Packed),
            1..=15 => Ok(WctLayout::Pyramid { levels: flags }),
            OPERATOR_BANK_FLAG => Ok(WctLayout::OperatorBank),
            other => Err(Error::Format(format!("unknown WCT flags {other:#04x}"))),
        }
    }
}

/// A batch of equally shaped `(channels, height, width)` tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct WctFile {
    pub layout: WctLayout,
    pub shape: (usize, usize, usize),
    pub tensors: Vec<Array3<f32>>,
}

fn header_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Validation(format!("{what} {v} does not fit the WCT header")))
}

impl WctFile {
    pub fn new(layout: WctLayout, shape: (usize, usize, usize), tensors: Vec<Array3<f32>>) -> Result<Self> {
        for t in &tensors {
            if t.dim() != shape {
                return Err(shape_err("tensor in batch", shape, t.dim()));
            }
        }
        Ok(WctFile { layout, shape, tensors })
    }

    pub fn write_to<W: Write>(&self, writer: W) -> Result<()> {
        let (c, h, w) = self.shape;
        let mut out = BufWriter::new(writer);
        out.write_all(&WCT_MAGIC)?;
        out.write_u16::<LittleEndian>(WCT_VERSION)?;
        out.write_u8(DTYPE_F32)?;
        out.write_u8(self.layout.flags())?;
        out.write_u32::<LittleEndian>(header_u32(h, "height")?)?;
        out.write_u32::<LittleEndian>(header_u32(w, "width")?)?;
        out.write_u32::<LittleEndian>(header_u32(c, "channels")?)?;
        out.write_u32::<LittleEndian>(header_u32(self.tensors.len(), "count")?)?;
        for t in &self.tensors {
            // iteration follows logical (channel, row, column) order regardless of memory layout
            for &v in t.iter() {
                out.write_f32::<LittleEndian>(v)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(reader: R) -> Result<Self> {
        let mut r = BufReader::new(reader);
        let mut header = [0u8; HEADER_LEN];
        read_exact_or(&mut r, &mut header, "truncated WCT header")?;
        let mut h = &header[..];
        let mut magic = [0u8; 4];
        h.read_exact(&mut magic)?;
        if magic != WCT_MAGIC {
            return Err(Error::Format(format!(
                "bad WCT magic {:?}",
                String::from_utf8_lossy(&magic)
            )));
        }
        let version = h.read_u16::<LittleEndian>()?;
        if version != WCT_VERSION {
            return Err(Error::Format(format!("unsupported WCT version {version}")));
        }
        let dtype = h.read_u8()?;
        if dtype != DTYPE_F32 {
            return Err(Error::Format(format!("unsupported WCT dtype code {dtype}")));
        }
        let layout = WctLayout::from_flags(h.read_u8()?)?;
        let height = h.read_u32::<LittleEndian>()? as usize;
        let width = h.read_u32::<LittleEndian>()? as usize;
        let channels = h.read_u32::<LittleEndian>()? as usize;
        let count = h.read_u32::<LittleEndian>()? as usize;

        let per_tensor = channels
            .checked_mul(height)
            .and_then(|v| v.checked_mul(width))
            .ok_or_else(|| Error::Format("WCT dimensions overflow".into()))?;
        let mut tensors = Vec::with_capacity(count.min(1 << 16));
        let mut bytes = vec![0u8; per_tensor * 4];
        for i in 0..count {
            read_exact_or(
                &mut r,
                &mut bytes,
                &format!("truncated WCT payload: header declares {count} tensors, found {i}"),
            )?;
            let values: Vec<f32> = bytes
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
                .collect();
            tensors.push(Array3::from_shape_vec((channels, height, width), values).expect("sized above"));
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after WCT payload".into()));
        }
        Ok(WctFile {
            layout,
            shape: (channels, height, width),
            tensors,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(File::open(path)?)
    }
}

fn read_exact_or<R: Read>(r: &mut R, buf: &mut [u8], msg: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(msg.to_string()),
        _ => Error::Io(e),
    })
}

/// Writes packed tensors with the `Packed` layout.
pub fn write_wct(path: impl AsRef<Path>, tensors: &[PackedTensor]) -> Result<()> {
    let half = tensors.first().map_or(0, |t| t.height());
    let file = WctFile::new(
        WctLayout::Packed,
        (PACKED_CHANNELS, half, half),
        tensors.iter().map(|t| t.data().clone()).collect(),
    )?;
    file.save(path)
}

/// Reads a `Packed` layout file.
pub fn read_wct(path: impl AsRef<Path>) -> Result<Vec<PackedTensor>> {
    let file = WctFile::load(path)?;
    if file.layout != WctLayout::Packed {
        return Err(Error::Format(format!(
            "expected packed subband tensors, found {:?}",
            file.layout
        )));
    }
    file.tensors.into_iter().map(PackedTensor::new).collect()
}

/// Sidecar path for labels: same stem, `.lbl` extension.
pub fn label_path(wct_path: impl AsRef<Path>) -> PathBuf {
    wct_path.as_ref().with_extension("lbl")
}

/// One little-endian `u16` per tensor, nothing else.
pub fn write_labels(path: impl AsRef<Path>, labels: &[u16]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for &l in labels {
        out.write_u16::<LittleEndian>(l)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<u16>> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() % 2 != 0 {
        return Err(Error::Format("label file has an odd byte count".into()));
    }
    Ok(bytes
        .chunks_exact(2)
        .map(|b| u16::from_le_bytes([b[0], b[1]]))
        .collect())
}

/// Conjugated operator matrices for a training harness: each tensor holds
/// `G_conj` in channel 0 and `H_conj` in channel 1.
pub fn write_operator_bank(path: impl AsRef<Path>, ops: &[&AugOperator]) -> Result<()> {
    let n = ops.first().map_or(0, |op| op.n());
    let mut tensors = Vec::with_capacity(ops.len());
    for op in ops {
        if op.transposes() {
            return Err(Error::Validation(
                "transposing operators cannot be stored as a left/right matrix pair".into(),
            ));
        }
        let mut t = Array3::zeros((2, n, n));
        t.index_axis_mut(ndarray::Axis(0), 0)
            .assign(&op.g_conj().mapv(|v| v as f32));
        t.index_axis_mut(ndarray::Axis(0), 1)
            .assign(&op.h_conj().mapv(|v| v as f32));
        tensors.push(t);
    }
    WctFile::new(WctLayout::OperatorBank, (2, n, n), tensors)?.save(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_file(count: usize) -> WctFile {
        let tensors = (0..count)
            .map(|k| Array3::from_shape_fn((12, 2, 2), |(c, i, j)| (k * 100 + c * 4 + i * 2 + j) as f32 - 0.5))
            .collect();
        WctFile::new(WctLayout::Packed, (12, 2, 2), tensors).unwrap()
    }

    #[test]
    fn header_bytes_are_pinned() {
        let mut buf = Vec::new();
        sample_file(1).write_to(&mut buf).unwrap();
        assert_eq!(
            &buf[..HEADER_LEN],
            &[
                b'W', b'C', b'T', b'1', 1, 0, 0, 0, // magic, version, dtype, flags
                2, 0, 0, 0, 2, 0, 0, 0, 12, 0, 0, 0, 1, 0, 0, 0
            ]
        );
        assert_eq!(buf.len(), HEADER_LEN + 12 * 4 * 4);
        // first value -0.5, then 0.5: channel-major, row-major
        assert_eq!(&buf[24..28], &(-0.5f32).to_le_bytes());
        assert_eq!(&buf[28..32], &(0.5f32).to_le_bytes());
    }

    #[test]
    fn bad_magic_version_and_flags() {
        let mut buf = Vec::new();
        sample_file(1).write_to(&mut buf).unwrap();
        let mut bad = buf.clone();
        bad[..4].copy_from_slice(b"XXXX");
        assert!(matches!(WctFile::read_from(&bad[..]), Err(Error::Format(_))));
        let mut bad = buf.clone();
        bad[4] = 9;
        assert!(matches!(WctFile::read_from(&bad[..]), Err(Error::Format(_))));
        let mut bad = buf.clone();
        bad[7] = 0x40;
        assert!(matches!(WctFile::read_from(&bad[..]), Err(Error::Format(_))));
        let mut bad = buf.clone();
        bad[6] = 1;
        assert!(matches!(WctFile::read_from(&bad[..]), Err(Error::Format(_))));
    }

    #[test]
    fn truncation_and_trailing_bytes() {
        let mut buf = Vec::new();
        sample_file(1).write_to(&mut buf).unwrap();
        let mut short = buf.clone();
        short[20] = 2; // count = 2 with one tensor of payload
        let err = WctFile::read_from(&short[..]).unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
        assert!(matches!(WctFile::read_from(&buf[..10]), Err(Error::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(matches!(WctFile::read_from(&long[..]), Err(Error::Format(_))));
    }

    #[test]
    fn labels_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = label_path(dir.path().join("train.wct"));
        assert_eq!(path.extension().unwrap(), "lbl");
        write_labels(&path, &[0, 9, 65535]).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), vec![0, 0, 9, 0, 255, 255]);
        assert_eq!(read_labels(&path).unwrap(), vec![0, 9, 65535]);
    }

    #[test]
    fn layouts_from_flags() {
        for layout in [
            WctLayout::Packed,
            WctLayout::Pyramid { levels: 3 },
            WctLayout::OperatorBank,
        ] {
            assert_eq!(WctLayout::from_flags(layout.flags()).unwrap(), layout);
        }
    }
}
