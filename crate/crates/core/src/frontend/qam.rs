use num_complex::Complex64;

use crate::error::{Error, Result};

/// 2-bit Gray label → amplitude level, per dimension.
///
/// | bits | level |
/// |------|-------|
/// | 00   | −3    |
/// | 01   | −1    |
/// | 11   | +1    |
/// | 10   | +3    |
const GRAY_LEVEL: [f64; 4] = [-3.0, -1.0, 3.0, 1.0];

/// Unit-average-power Gray-labelled 16-QAM.
///
/// A symbol's 4-bit label is `i1 i0 q1 q0` (MSB first): the upper pair picks
/// the in-phase level, the lower pair the quadrature level. `points()[label]`
/// is the point carrying that label.
#[derive(Debug, Clone, PartialEq)]
pub struct QamConstellation {
    points: [Complex64; 16],
}

impl Default for QamConstellation {
    fn default() -> Self {
        Self::qam16()
    }
}

impl QamConstellation {
    pub const BITS_PER_SYMBOL: usize = 4;

    pub fn qam16() -> Self {
        let norm = 1.0 / 10f64.sqrt();
        let points = std::array::from_fn(|label| {
            let re = GRAY_LEVEL[label >> 2];
            let im = GRAY_LEVEL[label & 0b11];
            Complex64::new(re * norm, im * norm)
        });
        Self { points }
    }

    pub fn points(&self) -> &[Complex64; 16] {
        &self.points
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, label: u8) -> Complex64 {
        self.points[label as usize]
    }

    /// Map an MSB-first bit stream (one `bool` per bit) to symbols.
    pub fn modulate(&self, bits: &[bool]) -> Result<Vec<Complex64>> {
        if !bits.len().is_multiple_of(Self::BITS_PER_SYMBOL) {
            return Err(Error::MalformedBitLength(bits.len()));
        }
        Ok(bits
            .chunks_exact(Self::BITS_PER_SYMBOL)
            .map(|c| {
                let label = c.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8);
                self.point(label)
            })
            .collect())
    }

    /// Bits of `label`, MSB first.
    pub fn label_bits(label: u8) -> [bool; 4] {
        std::array::from_fn(|i| (label >> (3 - i)) & 1 == 1)
    }

    /// Label of the nearest point; ties resolve to the smallest label.
    pub fn demap(&self, x: Complex64) -> u8 {
        let mut best = 0u8;
        let mut best_d = f64::INFINITY;
        for (label, p) in self.points.iter().enumerate() {
            let d = (x - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = label as u8;
            }
        }
        best
    }

    /// Mean of `|c|²` over the alphabet.
    pub fn average_power(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.order() as f64
    }

    /// Smallest distance between two distinct points.
    pub fn min_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.min((a - b).norm());
            }
        }
        best
    }
}
