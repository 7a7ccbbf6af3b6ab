//! Packed bit vectors and small GF(2) helpers.
//!
//! Bit `i` of a [`BitRow`] is the i-th symbol of the strand/row, reading left
//! to right in the text format. Bits are packed MSB-first inside each word so
//! that comparing the word arrays gives the same order as comparing the
//! `0`/`1` strings character by character.

use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (63 - (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (63 - (i & 63));
        if v {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (63 - (i & 63));
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn hamming(&self, other: &BitRow) -> u32 {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// Dot product over GF(2).
    pub fn dot(&self, other: &BitRow) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            & 1
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    /// Bits `range.start..range.end` as a new row.
    pub fn slice(&self, start: usize, end: usize) -> BitRow {
        debug_assert!(start <= end && end <= self.len);
        let mut out = BitRow::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    /// Copies `src` into bits `start..start+src.len()`.
    pub fn splice(&mut self, start: usize, src: &BitRow) {
        debug_assert!(start + src.len <= self.len);
        for i in 0..src.len {
            self.set(start + i, src.get(i));
        }
    }

    /// Reads `width` bits starting at `start` as an integer, first bit most
    /// significant.
    pub fn read_int(&self, start: usize, width: usize) -> u64 {
        debug_assert!(width <= 64 && start + width <= self.len);
        let mut v = 0u64;
        for i in 0..width {
            v = v << 1 | self.get(start + i) as u64;
        }
        v
    }

    /// Writes `value` into `width` bits starting at `start`, most significant
    /// bit first.
    pub fn write_int(&mut self, start: usize, width: usize, value: u64) {
        debug_assert!(width <= 64 && start + width <= self.len);
        for i in 0..width {
            self.set(start + i, value >> (width - 1 - i) & 1 == 1);
        }
    }

    pub fn from_bitstring(s: &str) -> Option<BitRow> {
        let mut row = BitRow::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => row.set(i, true),
                _ => return None,
            }
        }
        Some(row)
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

impl Ord for BitRow {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words.cmp(&other.words).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for BitRow {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitRow({})", self.to_bitstring())
    }
}

/// Calls `f` with every subset of `{0..n}` of size `k`, in lexicographic
/// order. `k = 0` yields the empty subset once.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All bit patterns of length `n` with Hamming weight at most `cap`,
/// in (weight, support) lexicographic order. The zero pattern comes first.
pub fn low_weight_patterns(n: usize, cap: usize) -> Vec<BitRow> {
    let mut out = Vec::new();
    for w in 0..=cap.min(n) {
        for_each_combination(n, w, |support| {
            let mut row = BitRow::zeros(n);
            for &i in support {
                row.set(i, true);
            }
            out.push(row);
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_round_trip() {
        let s = "0110100111010001011";
        let row = BitRow::from_bitstring(s).unwrap();
        assert_eq!(row.to_bitstring(), s);
        assert_eq!(row.len(), s.len());
        assert_eq!(row.count_ones(), s.chars().filter(|&c| c == '1').count() as u32);
    }

    #[test]
    fn ordering_matches_string_order() {
        let mut strings = vec![
            "1010110", "0000001", "1111111", "0101010", "0000000", "1000000",
        ];
        let mut rows: Vec<BitRow> =
            strings.iter().map(|s| BitRow::from_bitstring(s).unwrap()).collect();
        strings.sort();
        rows.sort();
        let sorted: Vec<String> = rows.iter().map(|r| r.to_bitstring()).collect();
        assert_eq!(sorted, strings);
    }

    #[test]
    fn read_write_int() {
        let mut row = BitRow::zeros(70);
        row.write_int(3, 9, 0b101100111);
        assert_eq!(row.read_int(3, 9), 0b101100111);
        assert_eq!(row.read_int(0, 3), 0);
        row.write_int(60, 8, 0xA5);
        assert_eq!(row.read_int(60, 8), 0xA5);
    }

    #[test]
    fn combinations_count() {
        let mut count = 0usize;
        for_each_combination(7, 3, |c| {
            assert_eq!(c.len(), 3);
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            count += 1;
        });
        assert_eq!(count, 35);

        let mut empty = 0;
        for_each_combination(5, 0, |c| {
            assert!(c.is_empty());
            empty += 1;
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn low_weight_pattern_counts() {
        // |B_2(7)| = 1 + 7 + 21
        assert_eq!(low_weight_patterns(7, 2).len(), 29);
        assert!(low_weight_patterns(7, 2)[0].is_zero());
        // cap beyond n clamps to the whole space
        assert_eq!(low_weight_patterns(4, 9).len(), 16);
    }
}
