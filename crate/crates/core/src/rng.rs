//! xorshift64* generator.
//!
//! One fixed generator everywhere (payload scrambling, channel sampling,
//! experiment seeding) keeps every output bit-exact across platforms and
//! reimplementations. State update `x ^= x>>12; x ^= x<<25; x ^= x>>27`,
//! output `x * 0x2545F4914F6CDD1D`.

pub const GOLDEN_GAMMA: u64 = 0x9E3779B97F4A7C15;
const OUTPUT_MULT: u64 = 0x2545F4914F6CDD1D;

#[derive(Clone, Debug)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    /// Seed 0 is remapped to a fixed nonzero constant; xorshift state must
    /// never be zero.
    pub fn new(seed: u64) -> Self {
        Xorshift64Star {
            state: if seed == 0 { GOLDEN_GAMMA } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(OUTPUT_MULT)
    }

    /// Uniform draw in `[0, n)` by rejection, unbiased.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        if n == 1 {
            return 0;
        }
        let zone = u64::MAX - (u64::MAX - n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % n;
            }
        }
    }

    /// Uniform draw in `[0, n)` for 128-bit `n` (used for Hamming-ball sizes).
    pub fn next_below_u128(&mut self, n: u128) -> u128 {
        assert!(n > 0);
        if n <= u64::MAX as u128 {
            return self.next_below(n as u64) as u128;
        }
        let zone = u128::MAX - (u128::MAX - n + 1) % n;
        loop {
            let x = (self.next_u64() as u128) << 64 | self.next_u64() as u128;
            if x <= zone {
                return x % n;
            }
        }
    }

    pub fn fill_bytes(&mut self, out: &mut [u8]) {
        for chunk in out.chunks_mut(8) {
            let v = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }

    /// `k` distinct values from `[0, n)`, sorted ascending (partial
    /// Fisher-Yates).
    pub fn sample_distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.next_below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut picked = pool[..k].to_vec();
        picked.sort_unstable();
        picked
    }
}

/// The per-position scrambler word: a single xorshift64* step seeded with
/// `code_seed + position * GOLDEN_GAMMA`.
pub fn scrambler_word(code_seed: u64, position: u64) -> u64 {
    Xorshift64Star::new(code_seed.wrapping_add(position.wrapping_mul(GOLDEN_GAMMA))).next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = Xorshift64Star::new(42);
        let mut b = Xorshift64Star::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn first_output_matches_hand_computation() {
        // x = 1: x ^= x>>12 -> 1; x ^= x<<25 -> 0x2000001;
        // x ^= x>>27 -> 0x2000001 (shift drops all set bits);
        // output = 0x2000001 * 0x2545F4914F6CDD1D mod 2^64.
        let mut r = Xorshift64Star::new(1);
        let expected = 0x2000001u64.wrapping_mul(0x2545F4914F6CDD1D);
        assert_eq!(r.next_u64(), expected);
    }

    #[test]
    fn zero_seed_remapped() {
        let mut z = Xorshift64Star::new(0);
        let mut g = Xorshift64Star::new(GOLDEN_GAMMA);
        assert_eq!(z.next_u64(), g.next_u64());
    }

    #[test]
    fn next_below_in_range() {
        let mut r = Xorshift64Star::new(7);
        for n in [1u64, 2, 3, 10, 97, 1 << 40] {
            for _ in 0..50 {
                assert!(r.next_below(n) < n);
            }
        }
    }

    #[test]
    fn sample_distinct_sorted_unique() {
        let mut r = Xorshift64Star::new(9);
        for _ in 0..20 {
            let s = r.sample_distinct(10, 4);
            assert_eq!(s.len(), 4);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&x| x < 10));
        }
    }
}
