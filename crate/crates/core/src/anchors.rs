//! Anchor vectors: the l-bit field after each index that makes strand order
//! recoverable.
//!
//! A tuple (a_1, .., a_M) is valid when it is a codeword of the MDS code
//! RS[M, M-2t] over GF(2^l) and every pair of positions whose indices are
//! within Hamming distance 2*e1 carries anchors more than 2*e2 apart. The
//! encoder realizes the tuple constructively: payload symbols are XOR-masked
//! with a position-keyed scrambler word, RS-encoded, and the distance
//! constraint is verified; a violation is reported as a rejection rather
//! than silently retried.

use crate::algebra::rs::{DecodeFailure, RsCode};
use crate::bits::{for_each_combination, BitRow};
use crate::codec::{CodeParams, ReceivedSet};
use crate::rng::scrambler_word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorTuple {
    /// M symbols of GF(2^l), position order.
    pub symbols: Vec<u32>,
}

/// Per-position anchor observation built by index tally: a slot holds the
/// anchor of the unique strand claiming that index, or is erased.
#[derive(Debug, Clone)]
pub struct AnchorWord {
    pub slots: Vec<Option<u32>>,
}

impl AnchorWord {
    pub fn erasure_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_none()).count()
    }
}

/// Scrambler mask for 1-based anchor position `i`: the low l bits of one
/// xorshift64* output keyed by (code_seed, i).
pub fn scrambler_mask(params: &CodeParams, position: usize) -> u32 {
    let word = scrambler_word(params.code_seed, position as u64);
    (word & ((1u64 << params.anchor_len) - 1)) as u32
}

/// Every unordered pair (i, j), 1-based, with d(I(i), I(j)) <= 2*e1 whose
/// anchors fail the strict distance requirement d(a_i, a_j) > 2*e2. Index
/// neighborhoods are enumerated by flipping up to 2*e1 of the log M index
/// bits rather than scanning all M^2 pairs.
pub fn constraint_check(anchors: &AnchorTuple, params: &CodeParams) -> Vec<(usize, usize)> {
    let log_m = params.log_m;
    let radius = (2 * params.eps1).min(log_m);
    let mut violations = Vec::new();
    for i in 0..params.strands {
        for w in 1..=radius {
            for_each_combination(log_m, w, |bits| {
                let mask: usize = bits.iter().map(|b| 1usize << b).sum();
                let j = i ^ mask;
                if j > i {
                    let d = (anchors.symbols[i] ^ anchors.symbols[j]).count_ones() as usize;
                    if d <= 2 * params.eps2 {
                        violations.push((i + 1, j + 1));
                    }
                }
            });
        }
    }
    violations.sort_unstable();
    violations
}

/// Scramble-and-encode: masks the (M-2t) payload symbols, extends them to an
/// RS codeword, and returns the tuple together with any constraint
/// violations (empty list = valid tuple).
pub fn encode_tuple(
    payload_bits: &BitRow,
    params: &CodeParams,
    code: &RsCode,
) -> (AnchorTuple, Vec<(usize, usize)>) {
    let k = params.strands - 2 * params.t;
    let l = params.anchor_len;
    debug_assert_eq!(payload_bits.len(), k * l);
    let data: Vec<u32> = (0..k)
        .map(|i| payload_bits.read_int(i * l, l) as u32 ^ scrambler_mask(params, i + 1))
        .collect();
    let symbols = code.encode(&data).expect("data length fixed by params");
    let tuple = AnchorTuple { symbols };
    let violations = constraint_check(&tuple, params);
    (tuple, violations)
}

/// Recovers the masked payload bits from a (decoded) tuple.
pub fn extract_payload(anchors: &AnchorTuple, params: &CodeParams) -> BitRow {
    let k = params.strands - 2 * params.t;
    let l = params.anchor_len;
    let mut out = BitRow::zeros(k * l);
    for i in 0..k {
        let sym = anchors.symbols[i] ^ scrambler_mask(params, i + 1);
        out.write_int(i * l, l, sym as u64);
    }
    out
}

/// Declares every position claimed by other than exactly one received index
/// as an erasure and fills the rest with the claimant's anchor field.
pub fn index_tally(received: &ReceivedSet, params: &CodeParams) -> AnchorWord {
    let m = params.strands;
    let mut claim_count = vec![0usize; m];
    let mut claimant = vec![0u32; m];
    for strand in received.strands() {
        let idx = strand.read_int(0, params.log_m) as usize;
        claim_count[idx] += 1;
        claimant[idx] = strand.read_int(params.log_m, params.anchor_len) as u32;
    }
    AnchorWord {
        slots: (0..m)
            .map(|i| (claim_count[i] == 1).then_some(claimant[i]))
            .collect(),
    }
}

/// RS error-erasure decoding of the tally word; succeeds whenever the
/// channel stayed within its contract (each corrupted strand adds at most 2
/// to 2*errors + erasures, so the budget 2t is never exceeded).
pub fn recover(word: &AnchorWord, code: &RsCode) -> Result<AnchorTuple, DecodeFailure> {
    let mut symbols = vec![0u32; word.slots.len()];
    let mut erasures = Vec::new();
    for (i, slot) in word.slots.iter().enumerate() {
        match slot {
            Some(a) => symbols[i] = *a,
            None => erasures.push(i),
        }
    }
    let symbols = code.decode(&symbols, &erasures)?;
    Ok(AnchorTuple { symbols })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldContext;

    fn tiny_params() -> CodeParams {
        // M=4, l=12: anchors must be pairwise > 2 apart (all index pairs are
        // within radius 2*e1 = 2)
        CodeParams::derive(4, 19, 12, 1, 1, 1, 1).unwrap()
    }

    fn rs_for(params: &CodeParams) -> RsCode {
        let field = FieldContext::new(params.anchor_len as u32, None).unwrap();
        RsCode::new(field, params.strands, params.strands - 2 * params.t).unwrap()
    }

    #[test]
    fn all_identical_anchors_violate_every_pair() {
        let params = tiny_params();
        let tuple = AnchorTuple { symbols: vec![7; 4] };
        let violations = constraint_check(&tuple, &params);
        assert_eq!(violations, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
    }

    #[test]
    fn far_apart_anchors_pass() {
        let params = tiny_params();
        let tuple = AnchorTuple {
            symbols: vec![0b000000000000, 0b000000000111, 0b000111000000, 0b111000111000],
        };
        assert!(constraint_check(&tuple, &params).is_empty());
    }

    #[test]
    fn radius_zero_constrains_nothing() {
        let params = CodeParams::derive(4, 19, 12, 1, 0, 1, 1).unwrap();
        let tuple = AnchorTuple { symbols: vec![0; 4] };
        assert!(constraint_check(&tuple, &params).is_empty());
    }

    #[test]
    fn encode_is_deterministic_and_rs_member() {
        let params = tiny_params();
        let code = rs_for(&params);
        let payload = BitRow::from_bitstring("011010011101000101101101").unwrap();
        let (t1, _) = encode_tuple(&payload, &params, &code);
        let (t2, _) = encode_tuple(&payload, &params, &code);
        assert_eq!(t1, t2);
        assert!(code.is_codeword(&t1.symbols));
        assert_eq!(extract_payload(&t1, &params), payload);
    }

    #[test]
    fn crafted_payload_forces_named_violation() {
        // invert the scrambler so the first two data symbols coincide
        let params = tiny_params();
        let code = rs_for(&params);
        let l = params.anchor_len;
        let mut payload = BitRow::zeros(2 * l);
        payload.write_int(0, l, scrambler_mask(&params, 1) as u64);
        payload.write_int(l, l, scrambler_mask(&params, 2) as u64);
        let (tuple, violations) = encode_tuple(&payload, &params, &code);
        assert_eq!(tuple.symbols[0], tuple.symbols[1]);
        assert!(violations.contains(&(1, 2)), "violations: {violations:?}");
    }

    #[test]
    fn t_zero_tuple_is_masked_payload() {
        let params = CodeParams::derive(4, 24, 12, 0, 1, 1, 9).unwrap();
        let field = FieldContext::new(12, None).unwrap();
        let code = RsCode::new(field, 4, 4).unwrap();
        let mut payload = BitRow::zeros(4 * 12);
        payload.write_int(0, 12, 0xABC);
        let (tuple, _) = encode_tuple(&payload, &params, &code);
        assert_eq!(tuple.symbols[0], 0xABC ^ scrambler_mask(&params, 1));
        assert_eq!(tuple.symbols[3], scrambler_mask(&params, 4));
    }
}
