//! Shortened narrow-sense binary BCH codes with syndrome-targeted decoding.
//!
//! The code of length `L_M` is the length 2^m1 - 1 narrow-sense BCH code of
//! designed distance 2*eps2 + 1 (m1 = ceil(log2(L_M + 1))) restricted to its
//! first `L_M` coordinates; coordinate j carries locator alpha^j. `H1` is the
//! row-reduced binary parity-check matrix; pivots are chosen scanning columns
//! right to left, so parity bits sit at the right end of a row. For a
//! shortened cyclic code any r1 consecutive columns are independent, hence
//! the pivot block is exactly the last r1 columns and row-reduction leaves it
//! as an identity.

use std::fmt;

use super::field::FieldContext;
use super::locator::{berlekamp_massey, chien_search};
use super::rs::DecodeFailure;
use crate::bits::BitRow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BchError {
    ZeroLength,
    DistanceExceedsLength { length: usize, eps2: usize },
    RedundancyFillsCode { length: usize, r1: usize },
    LengthBeyondFieldTables { length: usize },
}

impl fmt::Display for BchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BchError::ZeroLength => write!(f, "code length must be positive"),
            BchError::DistanceExceedsLength { length, eps2 } => write!(
                f,
                "designed distance {} exceeds code length {length}",
                2 * eps2 + 1
            ),
            BchError::RedundancyFillsCode { length, r1 } => {
                write!(f, "redundancy {r1} leaves no data bits in length {length}")
            }
            BchError::LengthBeyondFieldTables { length } => {
                write!(f, "length {length} needs a locator field beyond GF(2^16)")
            }
        }
    }
}

impl std::error::Error for BchError {}

#[derive(Clone, Debug)]
pub struct BchCode {
    length: usize,
    eps2: usize,
    m1: u32,
    locator_field: Option<FieldContext>,
    /// Row-reduced parity-check matrix, r1 rows of `length` bits.
    h1: Vec<BitRow>,
    /// Pivot column of each H1 row, ascending; the pivot submatrix is the
    /// identity.
    parity_positions: Vec<usize>,
    /// Row i of the raw (field-expanded) matrix expressed in the H1 basis:
    /// raw syndrome bit i = parity of (raw_in_reduced[i] AND reduced syndrome).
    raw_in_reduced: Vec<u64>,
}

impl BchCode {
    pub fn build(length: usize, eps2: usize) -> Result<Self, BchError> {
        if length == 0 {
            return Err(BchError::ZeroLength);
        }
        if eps2 == 0 {
            return Ok(BchCode {
                length,
                eps2,
                m1: 0,
                locator_field: None,
                h1: Vec::new(),
                parity_positions: Vec::new(),
                raw_in_reduced: Vec::new(),
            });
        }
        if 2 * eps2 + 1 > length {
            return Err(BchError::DistanceExceedsLength { length, eps2 });
        }

        let m1 = (usize::BITS - length.leading_zeros()).max(2);
        if m1 > 16 {
            return Err(BchError::LengthBeyondFieldTables { length });
        }
        let field = FieldContext::new(m1, None).expect("m1 within 2..=16");

        // raw matrix: for each odd power o = 1, 3, .., 2*eps2-1, the m1 rows
        // of bits of alpha^(o*j) at column j
        let mut raw: Vec<BitRow> = Vec::with_capacity(eps2 * m1 as usize);
        for b in 0..eps2 {
            let o = (2 * b + 1) as u64;
            for bit in 0..m1 {
                let mut row = BitRow::zeros(length);
                for j in 0..length {
                    if field.pow(field.alpha_pow(1), o * j as u64) >> bit & 1 == 1 {
                        row.set(j, true);
                    }
                }
                raw.push(row);
            }
        }

        // Gauss-Jordan, scanning columns right to left
        let mut rows = raw.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0usize;
        for col in (0..length).rev() {
            let Some(pr) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pr);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        if rank >= length {
            return Err(BchError::RedundancyFillsCode { length, r1: rank });
        }

        // order rows by ascending pivot column
        let mut order: Vec<usize> = (0..rank).collect();
        order.sort_by_key(|&i| pivots[i]);
        let h1: Vec<BitRow> = order.iter().map(|&i| rows[i].clone()).collect();
        let parity_positions: Vec<usize> = order.iter().map(|&i| pivots[i]).collect();

        // every rowspace vector is the pivot-coordinate combination of the
        // reduced basis, so raw row v = sum_k v[p_k] * h1[k]
        let raw_in_reduced: Vec<u64> = raw
            .iter()
            .map(|v| {
                let mut mask = 0u64;
                for (k, &p) in parity_positions.iter().enumerate() {
                    if v.get(p) {
                        mask |= 1 << k;
                    }
                }
                mask
            })
            .collect();

        Ok(BchCode {
            length,
            eps2,
            m1,
            locator_field: Some(field),
            h1,
            parity_positions,
            raw_in_reduced,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn eps2(&self) -> usize {
        self.eps2
    }

    pub fn m1(&self) -> u32 {
        self.m1
    }

    /// Redundancy r1 = rank(H1).
    pub fn r1(&self) -> usize {
        self.h1.len()
    }

    pub fn h1(&self) -> &[BitRow] {
        &self.h1
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.parity_positions
    }

    /// Syndrome row * H1^T, bit k = dot with H1 row k.
    pub fn syndrome(&self, row: &BitRow) -> u64 {
        debug_assert_eq!(row.len(), self.length);
        let mut s = 0u64;
        for (k, h) in self.h1.iter().enumerate() {
            if h.dot(row) {
                s |= 1 << k;
            }
        }
        s
    }

    /// Finds `row'` with `syndrome(row') == target` and
    /// `d(row, row') <= eps2` by locating the difference-syndrome error
    /// pattern; fails when no such pattern of weight <= eps2 exists.
    pub fn decode_to_syndrome(&self, row: &BitRow, target: u64) -> Result<BitRow, DecodeFailure> {
        let diff = self.syndrome(row) ^ target;
        if diff == 0 {
            return Ok(row.clone());
        }
        let field = self.locator_field.as_ref().expect("r1 > 0 implies field");

        // difference syndrome back in raw (field) coordinates
        let m1 = self.m1 as usize;
        let raw_bits: Vec<bool> = self
            .raw_in_reduced
            .iter()
            .map(|mask| (mask & diff).count_ones() & 1 == 1)
            .collect();
        // S_1, S_3, ... from the raw blocks; even ones by squaring
        let mut synd = vec![0u32; 2 * self.eps2 + 1];
        for b in 0..self.eps2 {
            let mut s = 0u32;
            for bit in 0..m1 {
                if raw_bits[b * m1 + bit] {
                    s |= 1 << bit;
                }
            }
            synd[2 * b + 1] = s;
        }
        for i in 1..=self.eps2 {
            synd[2 * i] = field.mul(synd[i], synd[i]);
        }

        let lambda = berlekamp_massey(field, &synd[1..]);
        let nu = lambda.len() - 1;
        if nu > self.eps2 {
            return Err(DecodeFailure("locator degree exceeds capability"));
        }
        let positions = chien_search(field, &lambda, self.length);
        if positions.len() != nu {
            return Err(DecodeFailure("locator does not split within the word"));
        }
        let mut out = row.clone();
        for p in positions {
            out.flip(p);
        }
        if self.syndrome(&out) != target {
            return Err(DecodeFailure("no pattern within weight budget"));
        }
        Ok(out)
    }

    /// Completes the bits at `parity_positions` (which must be zero in the
    /// input) so the row's syndrome equals `target`. Always solvable: the
    /// pivot submatrix is the identity.
    pub fn solve_parity_bits(&self, row: &BitRow, target: u64) -> BitRow {
        debug_assert!(self.parity_positions.iter().all(|&p| !row.get(p)));
        let d = self.syndrome(row) ^ target;
        let mut out = row.clone();
        for (k, &p) in self.parity_positions.iter().enumerate() {
            if d >> k & 1 == 1 {
                out.set(p, true);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::low_weight_patterns;
    use crate::rng::Xorshift64Star;

    #[test]
    fn hamming_7_shape() {
        let code = BchCode::build(7, 1).unwrap();
        assert_eq!(code.r1(), 3);
        // the 7 columns must be the 7 distinct nonzero 3-bit patterns
        let mut cols: Vec<u64> = (0..7)
            .map(|j| {
                (0..3)
                    .map(|k| (code.h1()[k].get(j) as u64) << k)
                    .fold(0, |a, b| a | b)
            })
            .collect();
        cols.sort_unstable();
        assert_eq!(cols, vec![1, 2, 3, 4, 5, 6, 7]);
        // pivots are the last r1 columns, identity block
        assert_eq!(code.parity_positions(), &[4, 5, 6]);
    }

    #[test]
    fn bch_15_2_redundancy() {
        // BCH(15, 7), d = 5
        let code = BchCode::build(15, 2).unwrap();
        assert_eq!(code.r1(), 8);
        assert_eq!(
            code.parity_positions(),
            &(7..15).collect::<Vec<usize>>()[..]
        );
    }

    #[test]
    fn eps2_zero_degenerate() {
        let code = BchCode::build(23, 0).unwrap();
        assert_eq!(code.r1(), 0);
        let row = BitRow::from_bitstring("10110011101100110110100").unwrap();
        assert_eq!(code.syndrome(&row), 0);
        assert_eq!(code.decode_to_syndrome(&row, 0).unwrap(), row);
    }

    #[test]
    fn infeasible_distance() {
        assert!(matches!(
            BchCode::build(3, 2),
            Err(BchError::DistanceExceedsLength { .. })
        ));
        assert!(matches!(BchCode::build(0, 1), Err(BchError::ZeroLength)));
    }

    #[test]
    fn syndrome_linearity() {
        let code = BchCode::build(15, 2).unwrap();
        assert_eq!(code.syndrome(&BitRow::zeros(15)), 0);
        for j in 0..15 {
            let mut e = BitRow::zeros(15);
            e.set(j, true);
            let col: u64 = (0..code.r1())
                .map(|k| (code.h1()[k].get(j) as u64) << k)
                .fold(0, |a, b| a | b);
            assert_eq!(code.syndrome(&e), col);
        }
    }

    /// Exhaustive syndrome-targeted decoding at L_M = 15 for eps2 in {1, 2}:
    /// every flip pattern of weight <= eps2 on a batch of random rows.
    #[test]
    fn exhaustive_syndrome_targeted_decoding() {
        let mut rng = Xorshift64Star::new(3);
        for eps2 in [1usize, 2] {
            let code = BchCode::build(15, eps2).unwrap();
            let patterns = low_weight_patterns(15, eps2);
            for _ in 0..8 {
                let mut row = BitRow::zeros(15);
                for j in 0..15 {
                    if rng.next_below(2) == 1 {
                        row.set(j, true);
                    }
                }
                let target = code.syndrome(&row);
                for pat in &patterns {
                    let mut noisy = row.clone();
                    noisy.xor_assign(pat);
                    let fixed = code.decode_to_syndrome(&noisy, target).unwrap();
                    assert_eq!(fixed, row, "eps2={eps2} pattern {pat:?}");
                }
            }
        }
    }

    /// A target whose nearest explanation needs eps2+1 flips must be
    /// rejected, not miscorrected to something closer.
    #[test]
    fn unreachable_target_fails() {
        let code = BchCode::build(15, 1).unwrap();
        let row = BitRow::zeros(15);
        // find a syndrome not achievable by any weight <= 1 pattern
        let mut reachable = vec![false; 1 << code.r1()];
        for pat in low_weight_patterns(15, 1) {
            reachable[code.syndrome(&pat) as usize] = true;
        }
        let target = (0..1u64 << code.r1())
            .find(|&t| !reachable[t as usize])
            .expect("weight-2 syndromes exist beyond the weight-1 reach");
        assert!(code.decode_to_syndrome(&row, target).is_err());
    }

    #[test]
    fn solve_parity_matches_enumeration() {
        // Hamming(7,4): brute-force the unique parity completion and compare
        let code = BchCode::build(7, 1).unwrap();
        let data_positions: Vec<usize> =
            (0..7).filter(|p| !code.parity_positions().contains(p)).collect();
        let mut row = BitRow::zeros(7);
        for (bit, &p) in [true, false, true, true].iter().zip(&data_positions) {
            row.set(p, *bit);
        }
        for target in [0u64, 3, 5] {
            let solved = code.solve_parity_bits(&row, target);
            let mut expected = None;
            for combo in 0..8u64 {
                let mut cand = row.clone();
                for (k, &p) in code.parity_positions().iter().enumerate() {
                    cand.set(p, combo >> k & 1 == 1);
                }
                if code.syndrome(&cand) == target {
                    assert!(expected.is_none(), "completion not unique");
                    expected = Some(cand);
                }
            }
            assert_eq!(solved, expected.unwrap());
            assert_eq!(code.syndrome(&solved), target);
        }
    }

    #[test]
    fn shortened_code_min_distance_exceeds_2eps2() {
        // every nonzero null-space vector of weight <= 2*eps2 would break
        // unique decoding; verify none exists at a small shortened length
        let code = BchCode::build(11, 1).unwrap();
        for pat in low_weight_patterns(11, 2) {
            if !pat.is_zero() {
                assert_ne!(code.syndrome(&pat), 0, "weight<=2 codeword {pat:?}");
            }
        }
    }
}
