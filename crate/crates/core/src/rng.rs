//! Counter-based uniforms for the subdivision tree.
//!
//! Every node of the tree gets its own uniform, computed as a hash of the
//! master seed, the replicate index and the node address. Sampling order and
//! thread assignment therefore never influence a realization, and replicates
//! drawn with the same key at different `p` share their uniforms.

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Key identifying one replicate of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeKey {
    base: u64,
}

impl TreeKey {
    pub fn new(seed: u64, sample_index: u64) -> Self {
        let base = mix64(mix64(seed ^ GOLDEN).wrapping_add(sample_index.wrapping_mul(GOLDEN)));
        Self { base }
    }

    /// Key whose stream is additionally decorrelated by an extra word, e.g. the bits of `p`.
    pub fn salted(self, salt: u64) -> Self {
        Self { base: mix64(self.base ^ mix64(salt.wrapping_add(GOLDEN))) }
    }

    /// Raw 64 random bits attached to node `index` (row-major within its level) at `level`.
    #[inline]
    pub fn bits(&self, level: u32, index: u64) -> u64 {
        let lvl = mix64(self.base.wrapping_add((level as u64 + 1).wrapping_mul(GOLDEN)));
        mix64(lvl ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&self, level: u32, index: u64) -> f64 {
        (self.bits(level, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let a = TreeKey::new(7, 3);
        assert_eq!(a.uniform(2, 11), TreeKey::new(7, 3).uniform(2, 11));
        assert_ne!(a.bits(2, 11), a.bits(2, 12));
        assert_ne!(a.bits(2, 11), a.bits(3, 11));
        assert_ne!(a.bits(2, 11), TreeKey::new(7, 4).bits(2, 11));
        assert_ne!(a.bits(2, 11), TreeKey::new(8, 3).bits(2, 11));
        assert_ne!(a, a.salted(1));
    }

    #[test]
    fn uniform_moments() {
        let k = TreeKey::new(1, 0);
        let n = 200_000u64;
        let (mut s, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let u = k.uniform(0, i);
            assert!((0.0..1.0).contains(&u));
            s += u;
            s2 += u * u;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!((mean - 0.5).abs() < 4.0 * (1.0 / 12.0 / n as f64).sqrt());
        assert!((var - 1.0 / 12.0).abs() < 1e-3);
    }
}
