//! Counter-based seed derivation so that every Monte Carlo task owns an
//! independent stream regardless of scheduling.

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for child `index` of `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix64(mix64(parent) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Sub-stream tags used inside one trial.
pub(crate) mod stream {
    pub const CHANNEL: u64 = 1;
    pub const BIAS: u64 = 2;
    pub const BORROWED: u64 = 3;
    pub const SNR_BASE: u64 = 1_000;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_children() {
        let mut seen = std::collections::HashSet::new();
        for parent in 0..8 {
            for i in 0..64 {
                assert!(seen.insert(derive_seed(parent, i)));
            }
        }
    }
}
