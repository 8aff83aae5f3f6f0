use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// 8-bit RGB image with interleaved samples. Both sides are even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl RgbImage {
    pub fn from_raw(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || !width.is_multiple_of(2) || !height.is_multiple_of(2) {
            return Err(Error::Size("image dimensions must be even".into()));
        }
        if samples.len() != width * height * 3 {
            return Err(Error::Shape(format!(
                "expected {} samples for {width}x{height}, got {}",
                width * height * 3,
                samples.len()
            )));
        }
        Ok(RgbImage { width, height, samples })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                samples.extend_from_slice(&f(x, y));
            }
        }
        Self::from_raw(width, height, samples)
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::from_fn(width, height, |_, _| rgb)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.samples[i], self.samples[i + 1], self.samples[i + 2]]
    }

    /// Side length, for the square images the transform operates on.
    pub fn square_side(&self) -> Result<usize> {
        if self.width != self.height {
            return Err(Error::Size(format!(
                "image must be square, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(self.width)
    }
}

fn read_token<R: BufRead>(r: &mut R) -> Result<String> {
    let mut token = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        if r.read(&mut byte)? == 0 {
            break;
        }
        let b = byte[0];
        if b == b'#' && token.is_empty() {
            let mut comment = Vec::new();
            r.read_until(b'\n', &mut comment)?;
            continue;
        }
        if b.is_ascii_whitespace() {
            if token.is_empty() {
                continue;
            }
            break;
        }
        token.push(b);
    }
    if token.is_empty() {
        return Err(Error::Format("truncated PPM header".into()));
    }
    String::from_utf8(token).map_err(|_| Error::Format("non-ASCII PPM header".into()))
}

fn header_number<R: BufRead>(r: &mut R, what: &str) -> Result<usize> {
    let tok = read_token(r)?;
    tok.parse()
        .map_err(|_| Error::Format(format!("bad PPM {what}: {tok:?}")))
}

/// Binary PPM (`P6`, maxval 255). Exactly one whitespace byte separates the
/// header from the raster, which is what [`read_token`] consumes.
pub fn read_ppm<R: Read>(reader: R) -> Result<RgbImage> {
    let mut r = BufReader::new(reader);
    let magic = read_token(&mut r)?;
    if magic != "P6" {
        return Err(Error::Format(format!("expected P6 magic, got {magic:?}")));
    }
    let width = header_number(&mut r, "width")?;
    let height = header_number(&mut r, "height")?;
    let maxval = header_number(&mut r, "maxval")?;
    if maxval != 255 {
        return Err(Error::Format(format!("only maxval 255 is supported, got {maxval}")));
    }
    let len = width
        .checked_mul(height)
        .and_then(|v| v.checked_mul(3))
        .ok_or_else(|| Error::Format("PPM dimensions overflow".into()))?;
    let mut samples = vec![0u8; len];
    r.read_exact(&mut samples).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format("truncated PPM raster".into()),
        _ => Error::Io(e),
    })?;
    RgbImage::from_raw(width, height, samples)
}

pub fn write_ppm<W: Write>(img: &RgbImage, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    write!(w, "P6\n{} {}\n255\n", img.width, img.height)?;
    w.write_all(&img.samples)?;
    w.flush()?;
    Ok(())
}

pub fn load_ppm(path: impl AsRef<Path>) -> Result<RgbImage> {
    read_ppm(File::open(path)?)
}

pub fn save_ppm(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    write_ppm(img, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppm_roundtrip_is_bit_exact() {
        let img = RgbImage::from_fn(6, 4, |x, y| [x as u8 * 40, y as u8 * 60, 255 - x as u8]).unwrap();
        let mut buf = Vec::new();
        write_ppm(&img, &mut buf).unwrap();
        assert!(buf.starts_with(b"P6\n6 4\n255\n"));
        assert_eq!(read_ppm(&buf[..]).unwrap(), img);
        let mut again = Vec::new();
        write_ppm(&read_ppm(&buf[..]).unwrap(), &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut data = b"P6 # made by hand\n2 2\n# another\n255\n".to_vec();
        data.extend_from_slice(&[1; 12]);
        let img = read_ppm(&data[..]).unwrap();
        assert_eq!(img.pixel(1, 1), [1, 1, 1]);
    }

    #[test]
    fn odd_dimensions_are_a_size_error() {
        let mut data = b"P6\n3 2\n255\n".to_vec();
        data.extend_from_slice(&[0; 18]);
        let err = read_ppm(&data[..]).unwrap_err();
        assert!(matches!(err, Error::Size(_)));
        assert_eq!(err.to_string(), "image dimensions must be even");
    }

    #[test]
    fn malformed_input_is_a_format_error() {
        assert!(matches!(read_ppm(&b"P3\n2 2\n255\n"[..]), Err(Error::Format(_))));
        assert!(matches!(read_ppm(&b"P6\n2 2\n65535\n"[..]), Err(Error::Format(_))));
        assert!(matches!(
            read_ppm(&b"P6\n2 2\n255\n\x00\x00"[..]),
            Err(Error::Format(_))
        ));
        assert!(matches!(read_ppm(&b""[..]), Err(Error::Format(_))));
    }
}
