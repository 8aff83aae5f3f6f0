use ndarray::{s, Array2, Array3};

use crate::error::{shape_err, Error, Result};
use crate::wavelet::{CoeffPlane, Subband};

pub const PACKED_CHANNELS: usize = 12;

/// Color component of a packed channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Y,
    Cb,
    Cr,
}

/// Channel `i` of a packed tensor holds `CHANNEL_ORDER[i]`.
pub const CHANNEL_ORDER: [(Component, Subband); PACKED_CHANNELS] = [
    (Component::Y, Subband::LL),
    (Component::Y, Subband::HL),
    (Component::Y, Subband::LH),
    (Component::Y, Subband::HH),
    (Component::Cb, Subband::LL),
    (Component::Cb, Subband::HL),
    (Component::Cb, Subband::LH),
    (Component::Cb, Subband::HH),
    (Component::Cr, Subband::LL),
    (Component::Cr, Subband::HL),
    (Component::Cr, Subband::LH),
    (Component::Cr, Subband::HH),
];

pub fn channel_name(index: usize) -> Option<String> {
    CHANNEL_ORDER.get(index).map(|(c, b)| format!("{c:?}-{b:?}"))
}

/// Half-resolution, 12-channel network input in single precision,
/// shape `(12, h, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedTensor {
    data: Array3<f32>,
}

impl PackedTensor {
    pub fn new(data: Array3<f32>) -> Result<Self> {
        let (c, h, w) = data.dim();
        if c != PACKED_CHANNELS {
            return Err(shape_err("packed channel count", PACKED_CHANNELS, c));
        }
        if h != w || h == 0 {
            return Err(Error::Shape(format!("packed tensor must be square, got {h}x{w}")));
        }
        Ok(PackedTensor { data })
    }

    pub fn zeros(half_side: usize) -> Result<Self> {
        Self::new(Array3::zeros((PACKED_CHANNELS, half_side, half_side)))
    }

    pub fn height(&self) -> usize {
        self.data.dim().1
    }

    pub fn width(&self) -> usize {
        self.data.dim().2
    }

    pub fn channels(&self) -> usize {
        PACKED_CHANNELS
    }

    pub fn data(&self) -> &Array3<f32> {
        &self.data
    }

    pub fn into_data(self) -> Array3<f32> {
        self.data
    }
}

/// Slices the four quadrants of each level-1 channel plane into twelve channels.
pub fn pack_subbands(y: &CoeffPlane, cb: &CoeffPlane, cr: &CoeffPlane) -> Result<PackedTensor> {
    let n = y.side();
    for p in [cb, cr] {
        if p.side() != n {
            return Err(shape_err("channel plane side", n, p.side()));
        }
    }
    for p in [y, cb, cr] {
        if p.level() != 1 {
            return Err(Error::Validation(format!(
                "packing needs level-1 planes, got level {}",
                p.level()
            )));
        }
    }
    let half = n / 2;
    let mut data = Array3::zeros((PACKED_CHANNELS, half, half));
    for (i, (component, band)) in CHANNEL_ORDER.iter().enumerate() {
        let plane = match component {
            Component::Y => y,
            Component::Cb => cb,
            Component::Cr => cr,
        };
        data.slice_mut(s![i, .., ..])
            .assign(&plane.subband(*band).mapv(|v| v as f32));
    }
    PackedTensor::new(data)
}

/// Inverse of [`pack_subbands`], returning the Y, Cb and Cr planes.
pub fn unpack_subbands(t: &PackedTensor) -> Result<[CoeffPlane; 3]> {
    let half = t.height();
    let mut planes = [
        Array2::<f64>::zeros((2 * half, 2 * half)),
        Array2::zeros((2 * half, 2 * half)),
        Array2::zeros((2 * half, 2 * half)),
    ];
    for (i, (component, band)) in CHANNEL_ORDER.iter().enumerate() {
        let plane = &mut planes[*component as usize];
        let (qr, qc) = band.quadrant();
        plane
            .slice_mut(s![qr * half..(qr + 1) * half, qc * half..(qc + 1) * half])
            .assign(&t.data.slice(s![i, .., ..]).mapv(f64::from));
    }
    let [y, cb, cr] = planes.map(|p| CoeffPlane::new(p, 1));
    Ok([y?, cb?, cr?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_lands_in_its_channel() {
        let n = 8;
        for (i, (component, band)) in CHANNEL_ORDER.iter().enumerate() {
            let mut planes = [Array2::zeros((n, n)), Array2::zeros((n, n)), Array2::zeros((n, n))];
            let (qr, qc) = band.quadrant();
            planes[*component as usize][[qr * 4 + 1, qc * 4 + 2]] = 1.0;
            let [y, cb, cr] = planes.map(|p| CoeffPlane::new(p, 1).unwrap());
            let t = pack_subbands(&y, &cb, &cr).unwrap();
            for c in 0..PACKED_CHANNELS {
                let sum: f32 = t.data().slice(s![c, .., ..]).sum();
                assert_eq!(sum, if c == i { 1.0 } else { 0.0 }, "impulse {i} leaked into {c}");
            }
            assert_eq!(t.data()[[i, 1, 2]], 1.0);
        }
        assert_eq!(channel_name(1).unwrap(), "Y-HL");
        assert_eq!(channel_name(11).unwrap(), "Cr-HH");
    }

    #[test]
    fn zero_tensor_unpacks_to_zero_planes() {
        let planes = unpack_subbands(&PackedTensor::zeros(4).unwrap()).unwrap();
        for p in planes {
            assert_eq!(p.side(), 8);
            assert!(p.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn wrong_channel_count() {
        assert!(matches!(
            PackedTensor::new(Array3::zeros((3, 4, 4))),
            Err(Error::Shape(_))
        ));
        let a = CoeffPlane::zeros(8).unwrap();
        let b = CoeffPlane::zeros(16).unwrap();
        assert!(matches!(pack_subbands(&a, &b, &a), Err(Error::Shape(_))));
    }
}
