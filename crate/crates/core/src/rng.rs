//! Counter-based randomness. Every draw is a pure function of a seed and a
//! counter, so generation order and thread layout never change results.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
pub fn hash2(seed: u64, a: u64) -> u64 {
    mix64(mix64(seed) ^ a.wrapping_mul(GOLDEN))
}

#[inline]
pub fn hash3(seed: u64, a: u64, b: u64) -> u64 {
    mix64(hash2(seed, a) ^ mix64(b))
}

/// Uniform in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `[0, n)` by multiply-shift.
#[inline]
pub fn below(h: u64, n: usize) -> usize {
    ((h as u128 * n as u128) >> 64) as usize
}

/// Derive an independent child seed for a named sub-stream.
pub fn split(seed: u64, stream: u64) -> u64 {
    hash2(seed ^ 0x5EED_0000_0000_0000, stream)
}
