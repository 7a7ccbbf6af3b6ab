//! Tensor-product code over the M x L_M row array.
//!
//! Row syndromes under the inner BCH check matrix are constrained to form a
//! codeword of an outer Reed-Solomon code. Rows are grouped g at a time into
//! super-symbols of r1*g bits so the outer code lives in GF(2^(r1*g)); t
//! corrupted rows touch at most t super-symbols, within the reach of the
//! outer code's redundancy 2t. Decoding recovers the true syndromes through
//! the outer code, then repairs each row against its recovered syndrome.

use crate::algebra::bch::BchCode;
use crate::algebra::field::FieldContext;
use crate::algebra::rs::{DecodeFailure, RsCode};
use crate::bits::BitRow;

#[derive(Clone, Debug)]
pub struct TpcLayout {
    rows: usize,
    row_len: usize,
    t: usize,
    g: usize,
    c1: BchCode,
    /// Outer code over GF(2^(r1*g)); absent in the degenerate eps2 = 0 case.
    c2: Option<RsCode>,
}

impl TpcLayout {
    /// `g` must already satisfy the sizing rule rows/g <= 2^(r1*g) - 1 and
    /// divide `rows`; the parameter validator picks it.
    pub fn new(rows: usize, t: usize, g: usize, c1: BchCode) -> Self {
        let r1 = c1.r1();
        let c2 = if r1 == 0 {
            None
        } else {
            let field = FieldContext::new((r1 * g) as u32, None)
                .expect("r1*g within 2..=16 enforced by the validator");
            let n = rows / g;
            Some(RsCode::new(field, n, n - 2 * t).expect("sizing rule holds"))
        };
        TpcLayout {
            rows,
            row_len: c1.length(),
            t,
            g,
            c1,
            c2,
        }
    }

    pub fn c1(&self) -> &BchCode {
        &self.c1
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Indices of the rows whose parity-position bits are solved during
    /// encoding: the last 2t*g rows (none when r1 = 0).
    pub fn parity_rows(&self) -> std::ops::Range<usize> {
        if self.c1.r1() == 0 {
            self.rows..self.rows
        } else {
            self.rows - 2 * self.t * self.g..self.rows
        }
    }

    /// Total solved parity bits, r1 * 2t * g.
    pub fn parity_bits(&self) -> usize {
        if self.c1.r1() == 0 {
            0
        } else {
            self.c1.r1() * 2 * self.t * self.g
        }
    }

    /// Packs the syndromes of one row group into an outer-code symbol.
    /// Big-endian by row: the row with the smaller index occupies the more
    /// significant r1-bit block; within a block, H1 row k maps to block bit
    /// r1-1-k.
    fn group_symbol(&self, syndromes: &[u64], group: usize) -> u32 {
        let r1 = self.c1.r1();
        let mut sym = 0u32;
        for j in 0..self.g {
            let s = syndromes[group * self.g + j];
            let mut block = 0u32;
            for k in 0..r1 {
                if s >> k & 1 == 1 {
                    block |= 1 << (r1 - 1 - k);
                }
            }
            sym |= block << ((self.g - 1 - j) * r1);
        }
        sym
    }

    /// Inverse of [`Self::group_symbol`] for one row of the group.
    fn row_target(&self, symbol: u32, offset_in_group: usize) -> u64 {
        let r1 = self.c1.r1();
        let block = symbol >> ((self.g - 1 - offset_in_group) * r1) & ((1 << r1) - 1);
        let mut s = 0u64;
        for k in 0..r1 {
            if block >> (r1 - 1 - k) & 1 == 1 {
                s |= 1 << k;
            }
        }
        s
    }

    /// Completes the parity bits of the parity rows in place. All other bits
    /// (and all bits of data rows) are left untouched; the input parity
    /// positions of parity rows must be zero.
    pub fn encode(&self, rows: &mut [BitRow]) {
        debug_assert_eq!(rows.len(), self.rows);
        let Some(c2) = &self.c2 else {
            return;
        };
        let syndromes: Vec<u64> = rows.iter().map(|r| self.c1.syndrome(r)).collect();
        let n = self.rows / self.g;
        let k = n - 2 * self.t;
        let data_symbols: Vec<u32> = (0..k).map(|grp| self.group_symbol(&syndromes, grp)).collect();
        let word = c2.encode(&data_symbols).expect("dimension fixed");
        for grp in k..n {
            for j in 0..self.g {
                let row_idx = grp * self.g + j;
                let target = self.row_target(word[grp], j);
                rows[row_idx] = self.c1.solve_parity_bits(&rows[row_idx], target);
            }
        }
    }

    /// Verifies the grouped syndrome word is an outer codeword.
    pub fn is_codeword(&self, rows: &[BitRow]) -> bool {
        match &self.c2 {
            None => true,
            Some(c2) => {
                let syndromes: Vec<u64> = rows.iter().map(|r| self.c1.syndrome(r)).collect();
                let word: Vec<u32> = (0..self.rows / self.g)
                    .map(|grp| self.group_symbol(&syndromes, grp))
                    .collect();
                c2.is_codeword(&word)
            }
        }
    }

    /// Corrects up to t rows carrying up to eps2 bit errors each.
    pub fn decode(&self, rows: &[BitRow]) -> Result<Vec<BitRow>, DecodeFailure> {
        debug_assert_eq!(rows.len(), self.rows);
        let Some(c2) = &self.c2 else {
            return Ok(rows.to_vec());
        };
        let syndromes: Vec<u64> = rows.iter().map(|r| self.c1.syndrome(r)).collect();
        let received: Vec<u32> = (0..self.rows / self.g)
            .map(|grp| self.group_symbol(&syndromes, grp))
            .collect();
        let word = c2.decode(&received, &[])?;
        let mut out = Vec::with_capacity(self.rows);
        for (i, row) in rows.iter().enumerate() {
            let target = self.row_target(word[i / self.g], i % self.g);
            out.push(self.c1.decode_to_syndrome(row, target)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Xorshift64Star;

    fn random_rows(layout: &TpcLayout, rows: usize, len: usize, rng: &mut Xorshift64Star) -> Vec<BitRow> {
        let parity = layout.parity_rows();
        let mut out = Vec::new();
        for i in 0..rows {
            let mut row = BitRow::zeros(len);
            for j in 0..len {
                let solved = parity.contains(&i) && layout.c1().parity_positions().contains(&j);
                if !solved && rng.next_below(2) == 1 {
                    row.set(j, true);
                }
            }
            out.push(row);
        }
        out
    }

    fn layout_8_15() -> TpcLayout {
        TpcLayout::new(8, 1, 1, BchCode::build(15, 1).unwrap())
    }

    #[test]
    fn zero_array_is_codeword() {
        let layout = layout_8_15();
        let mut rows = vec![BitRow::zeros(15); 8];
        layout.encode(&mut rows);
        assert!(rows.iter().all(|r| r.is_zero()));
        assert!(layout.is_codeword(&rows));
    }

    #[test]
    fn encode_only_touches_parity_positions_of_parity_rows() {
        let layout = layout_8_15();
        let mut rng = Xorshift64Star::new(5);
        let rows = random_rows(&layout, 8, 15, &mut rng);
        let mut encoded = rows.clone();
        layout.encode(&mut encoded);
        assert!(layout.is_codeword(&encoded));
        for i in 0..8 {
            for j in 0..15 {
                let may_change =
                    layout.parity_rows().contains(&i) && layout.c1().parity_positions().contains(&j);
                if !may_change {
                    assert_eq!(rows[i].get(j), encoded[i].get(j), "row {i} col {j}");
                }
            }
        }
    }

    #[test]
    fn exhaustive_single_bit_errors() {
        let layout = layout_8_15();
        assert_eq!(layout.c1().r1(), 4);
        let mut rng = Xorshift64Star::new(6);
        let mut rows = random_rows(&layout, 8, 15, &mut rng);
        layout.encode(&mut rows);
        for i in 0..8 {
            for j in 0..15 {
                let mut noisy = rows.clone();
                noisy[i].flip(j);
                assert_eq!(layout.decode(&noisy).unwrap(), rows, "flip ({i},{j})");
            }
        }
    }

    #[test]
    fn grouped_super_symbols() {
        // rows/g must fit the outer field: 64 rows with r1 = 5 forces g = 2
        let layout = TpcLayout::new(64, 1, 2, BchCode::build(22, 1).unwrap());
        assert_eq!(layout.c1().r1(), 5);
        let mut rng = Xorshift64Star::new(7);
        let mut rows = random_rows(&layout, 64, 22, &mut rng);
        layout.encode(&mut rows);
        assert!(layout.is_codeword(&rows));
        // one corrupted row in each of two different groups is one symbol
        // error beyond the budget t=1; a single corrupted row is fine
        let mut noisy = rows.clone();
        noisy[13].flip(2);
        assert_eq!(layout.decode(&noisy).unwrap(), rows);
    }

    #[test]
    fn eps2_zero_passthrough() {
        let layout = TpcLayout::new(8, 1, 1, BchCode::build(15, 0).unwrap());
        let mut rng = Xorshift64Star::new(8);
        let mut rows = random_rows(&layout, 8, 15, &mut rng);
        let before = rows.clone();
        layout.encode(&mut rows);
        assert_eq!(rows, before);
        assert_eq!(layout.decode(&rows).unwrap(), rows);
        assert_eq!(layout.parity_bits(), 0);
    }

    #[test]
    fn beyond_budget_is_detected_or_defined() {
        let layout = layout_8_15();
        let mut rng = Xorshift64Star::new(9);
        let mut rows = random_rows(&layout, 8, 15, &mut rng);
        layout.encode(&mut rows);
        // t+1 = 2 corrupted rows: either a decode failure or some array is
        // returned; no panic, and success is not asserted
        for _ in 0..50 {
            let mut noisy = rows.clone();
            let picks = rng.sample_distinct(8, 2);
            for &i in &picks {
                noisy[i].flip(rng.next_below(15) as usize);
            }
            let _ = layout.decode(&noisy);
        }
    }

    #[test]
    fn parity_bit_accounting() {
        let layout = layout_8_15();
        assert_eq!(layout.parity_bits(), 4 * 2 * 1 * 1);
        assert_eq!(layout.parity_rows(), 6..8);
    }
}
