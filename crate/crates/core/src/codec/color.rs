//! Level offset and the irreversible color transform.

use ndarray::Array2;

use super::image::RgbImage;
use crate::error::{shape_err, Result};

pub const LEVEL_OFFSET: f64 = 128.0;

const FORWARD: [[f64; 3]; 3] = [
    [0.299, 0.587, 0.114],
    [-0.168_736, -0.331_264, 0.5],
    [0.5, -0.418_688, -0.081_312],
];

const INVERSE: [[f64; 3]; 3] = [[1.0, 0.0, 1.402], [1.0, -0.344_136, -0.714_136], [1.0, 1.772, 0.0]];

/// Offset-centered luma and chroma planes, each `height × width`.
#[derive(Debug, Clone, PartialEq)]
pub struct YcbcrPlanes {
    pub y: Array2<f64>,
    pub cb: Array2<f64>,
    pub cr: Array2<f64>,
}

impl YcbcrPlanes {
    pub fn new(y: Array2<f64>, cb: Array2<f64>, cr: Array2<f64>) -> Result<Self> {
        if cb.dim() != y.dim() {
            return Err(shape_err("Cb plane", y.dim(), cb.dim()));
        }
        if cr.dim() != y.dim() {
            return Err(shape_err("Cr plane", y.dim(), cr.dim()));
        }
        Ok(YcbcrPlanes { y, cb, cr })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        let z = Array2::zeros((height, width));
        YcbcrPlanes {
            y: z.clone(),
            cb: z.clone(),
            cr: z,
        }
    }

    pub fn channels(&self) -> [&Array2<f64>; 3] {
        [&self.y, &self.cb, &self.cr]
    }

    pub fn into_channels(self) -> [Array2<f64>; 3] {
        [self.y, self.cb, self.cr]
    }
}

pub fn forward_precoding(img: &RgbImage) -> YcbcrPlanes {
    let (h, w) = (img.height(), img.width());
    let mut planes = YcbcrPlanes::zeros(h, w);
    for (i, px) in img.samples().chunks_exact(3).enumerate() {
        let rgb: [f64; 3] = std::array::from_fn(|c| px[c] as f64 - LEVEL_OFFSET);
        let at = (i / w, i % w);
        let [y, cb, cr] = FORWARD.map(|row| row[0] * rgb[0] + row[1] * rgb[1] + row[2] * rgb[2]);
        planes.y[at] = y;
        planes.cb[at] = cb;
        planes.cr[at] = cr;
    }
    planes
}

/// Inverse color transform, level offset, round half away from zero, clamp
/// to `[0, 255]`.
pub fn inverse_precoding(planes: &YcbcrPlanes) -> Result<RgbImage> {
    let (h, w) = planes.y.dim();
    let mut samples = Vec::with_capacity(h * w * 3);
    for ((&y, &cb), &cr) in planes.y.iter().zip(&planes.cb).zip(&planes.cr) {
        for row in INVERSE {
            let v = row[0] * y + row[1] * cb + row[2] * cr + LEVEL_OFFSET;
            samples.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    RgbImage::from_raw(w, h, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_maps_to_zero() {
        let p = forward_precoding(&RgbImage::filled(4, 4, [128, 128, 128]).unwrap());
        for plane in p.channels() {
            assert!(plane.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn white_maps_to_127() {
        let p = forward_precoding(&RgbImage::filled(2, 2, [255, 255, 255]).unwrap());
        assert!(p.y.iter().all(|v| (v - 127.0).abs() < 1e-9));
        assert!(p.cb.iter().chain(p.cr.iter()).all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn pure_red_luma() {
        let p = forward_precoding(&RgbImage::filled(2, 2, [255, 0, 0]).unwrap());
        let expect = 0.299 * 127.0 + 0.587 * -128.0 + 0.114 * -128.0;
        assert!((p.y[[0, 0]] - expect).abs() < 1e-12);
        assert!((p.y[[0, 0]] + 51.755).abs() < 1e-3);
    }

    #[test]
    fn zero_planes_give_gray_and_out_of_gamut_clamps() {
        let img = inverse_precoding(&YcbcrPlanes::zeros(2, 4)).unwrap();
        assert!(img.samples().iter().all(|&v| v == 128));

        let mut p = YcbcrPlanes::zeros(2, 2);
        p.y.fill(1000.0);
        p.cr[[0, 0]] = -5000.0;
        let img = inverse_precoding(&p).unwrap();
        assert_eq!(img.pixel(1, 1), [255, 255, 255]);
        assert_eq!(img.pixel(0, 0)[0], 0);
    }

    #[test]
    fn exhaustive_colour_cube_roundtrip() {
        // every 5th level on each axis plus the extremes
        let levels: Vec<u8> = (0..=255u8).step_by(5).chain([254, 255]).collect();
        let mut colours = Vec::new();
        for &r in &levels {
            for &g in &levels {
                for &b in &levels {
                    colours.push([r, g, b]);
                }
            }
        }
        colours.truncate(colours.len() / 2 * 2);
        let img = RgbImage::from_fn(colours.len(), 2, |x, _| colours[x]).unwrap();
        assert_eq!(inverse_precoding(&forward_precoding(&img)).unwrap(), img);
    }
}
