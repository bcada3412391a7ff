//! Splittable counter-based random streams.
//!
//! A [`RandomStream`] is a `(key, counter)` pair; output `i` is a SplitMix64
//! finalizer applied to `key + i * GOLDEN`. Child streams get a fresh key
//! derived from the parent key and a label, so the stream for any
//! `(sample, thread)` coordinate is a pure function of the master seed.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Source of Bernoulli trials. Settling and shifting only ever ask for
/// biased coins, so tests can substitute a scripted source.
pub trait Coin {
    /// Returns `true` with probability `p`.
    fn flip(&mut self, p: f64) -> bool;
}

#[derive(Clone, Debug)]
pub struct RandomStream {
    key: u64,
    counter: u64,
    bits: u64,
    bits_left: u32,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self::with_key(mix64(seed ^ 0x6a09_e667_f3bc_c909))
    }

    fn with_key(key: u64) -> Self {
        RandomStream {
            key,
            counter: 0,
            bits: 0,
            bits_left: 0,
        }
    }

    /// Independent child stream identified by `label`. Does not advance
    /// `self`.
    pub fn split(&self, label: u64) -> RandomStream {
        let k = mix64(self.key ^ mix64(label.wrapping_add(1).wrapping_mul(GOLDEN)));
        Self::with_key(mix64(k.wrapping_add(GOLDEN)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One fair bit, drawn from a buffered 64-bit word.
    #[inline]
    pub fn next_bit(&mut self) -> bool {
        if self.bits_left == 0 {
            self.bits = self.next_u64();
            self.bits_left = 64;
        }
        let b = self.bits & 1 == 1;
        self.bits >>= 1;
        self.bits_left -= 1;
        b
    }
}

impl Coin for RandomStream {
    #[inline]
    fn flip(&mut self, p: f64) -> bool {
        if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else if p == 0.5 {
            self.next_bit()
        } else {
            self.next_f64() < p
        }
    }
}
