//! The (t, e1, e2) substitution channel: seeded corruption, exhaustive
//! enumeration of every possible output, ball-disjointness checking and the
//! indexed-output counting oracle.
//!
//! A channel use picks at most t strands; each picked strand absorbs an
//! index error of weight <= e1 and a data error of weight <= e2. Order is
//! then discarded and identical strands merge, so outputs are canonical
//! sorted deduplicated sets.

use std::collections::BTreeSet;
use std::fmt;

use crate::bits::{for_each_combination, low_weight_patterns, BitRow};
use crate::codec::{CodeParams, IndexedSet, ReceivedSet};
use crate::rng::Xorshift64Star;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorPattern {
    /// 1-based positions of the corrupted strands, ascending.
    pub positions: Vec<usize>,
    /// Index-field error per corrupted strand (log M bits).
    pub index_errors: Vec<BitRow>,
    /// Data-field error per corrupted strand (L_M bits).
    pub data_errors: Vec<BitRow>,
}

impl ErrorPattern {
    pub fn empty() -> Self {
        ErrorPattern {
            positions: Vec::new(),
            index_errors: Vec::new(),
            data_errors: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChannelError {
    GuardExceeded { patterns: u128, limit: u128 },
}

impl fmt::Display for ChannelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelError::GuardExceeded { patterns, limit } => write!(
                f,
                "enumeration of {patterns} error patterns exceeds the guard of {limit}"
            ),
        }
    }
}

impl std::error::Error for ChannelError {}

pub const ENUMERATION_GUARD: u128 = 10_000_000;

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn ball_u128(n: usize, cap: usize) -> u128 {
    (0..=cap.min(n)).map(|w| binomial_u128(n, w)).sum()
}

/// Number of (F, e) error patterns: C(M, t) * (B_e1(log M) * B_e2(L_M))^t.
pub fn pattern_count(params: &CodeParams) -> u128 {
    let per_strand = ball_u128(params.log_m, params.eps1)
        .saturating_mul(ball_u128(params.l_m, params.eps2));
    let mut acc = binomial_u128(params.strands, params.t);
    for _ in 0..params.t {
        acc = acc.saturating_mul(per_strand);
    }
    acc
}

/// Draws a uniform member of the radius-`cap` Hamming ball over `n` bits:
/// weight w with probability proportional to C(n, w), then a uniform
/// support.
fn sample_ball(n: usize, cap: usize, rng: &mut Xorshift64Star) -> BitRow {
    let cap = cap.min(n);
    let cumulative: Vec<u128> = (0..=cap)
        .scan(0u128, |acc, w| {
            *acc += binomial_u128(n, w);
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().unwrap();
    let draw = rng.next_below_u128(total);
    let w = cumulative.iter().position(|&c| draw < c).unwrap();
    let mut row = BitRow::zeros(n);
    for i in rng.sample_distinct(n, w) {
        row.set(i, true);
    }
    row
}

/// One random channel use, deterministic in `rng_seed`.
pub fn corrupt(
    set: &IndexedSet,
    params: &CodeParams,
    rng_seed: u64,
) -> (ReceivedSet, ErrorPattern) {
    let mut rng = Xorshift64Star::new(rng_seed);
    let positions: Vec<usize> = rng
        .sample_distinct(params.strands, params.t)
        .into_iter()
        .map(|p| p + 1)
        .collect();
    let index_errors: Vec<BitRow> = (0..params.t)
        .map(|_| sample_ball(params.log_m, params.eps1, &mut rng))
        .collect();
    let data_errors: Vec<BitRow> = (0..params.t)
        .map(|_| sample_ball(params.l_m, params.eps2, &mut rng))
        .collect();
    let pattern = ErrorPattern {
        positions,
        index_errors,
        data_errors,
    };
    (apply(set, params, &pattern), pattern)
}

/// Applies a concrete error pattern and canonicalizes the outcome.
pub fn apply(set: &IndexedSet, params: &CodeParams, pattern: &ErrorPattern) -> ReceivedSet {
    let mut strands: Vec<BitRow> = set.strands().to_vec();
    for (k, &pos) in pattern.positions.iter().enumerate() {
        let strand = &mut strands[pos - 1];
        for b in pattern.index_errors[k].iter_ones() {
            strand.flip(b);
        }
        for b in pattern.data_errors[k].iter_ones() {
            strand.flip(params.log_m + b);
        }
    }
    ReceivedSet::new(strands)
}

/// Every distinct channel output of `set`, canonical order. The zero-weight
/// pattern is included, so `set` itself is always present.
pub fn enumerate_outputs(
    set: &IndexedSet,
    params: &CodeParams,
) -> Result<Vec<ReceivedSet>, ChannelError> {
    let patterns = pattern_count(params);
    if patterns > ENUMERATION_GUARD {
        return Err(ChannelError::GuardExceeded {
            patterns,
            limit: ENUMERATION_GUARD,
        });
    }
    let index_patterns = low_weight_patterns(params.log_m, params.eps1);
    let data_patterns = low_weight_patterns(params.l_m, params.eps2);
    let per_strand = index_patterns.len() * data_patterns.len();

    let mut outputs: BTreeSet<Vec<BitRow>> = BTreeSet::new();
    for_each_combination(params.strands, params.t, |subset| {
        // odometer over per-strand error choices
        let mut choice = vec![0usize; params.t];
        loop {
            let pattern = ErrorPattern {
                positions: subset.iter().map(|&p| p + 1).collect(),
                index_errors: choice
                    .iter()
                    .map(|&c| index_patterns[c / data_patterns.len()].clone())
                    .collect(),
                data_errors: choice
                    .iter()
                    .map(|&c| data_patterns[c % data_patterns.len()].clone())
                    .collect(),
            };
            outputs.insert(apply(set, params, &pattern).strands().to_vec());

            let mut k = 0;
            loop {
                if k == params.t {
                    return;
                }
                choice[k] += 1;
                if choice[k] < per_strand {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    });
    // t = 0 has an empty combination loop body guard: handle explicitly
    if params.t == 0 {
        outputs.insert(set.strands().to_vec());
    }
    Ok(outputs
        .into_iter()
        .map(|strands| ReceivedSet::new(strands))
        .collect())
}

/// Whether no channel output of `s1` is also a channel output of `s2`.
pub fn balls_disjoint(
    s1: &IndexedSet,
    s2: &IndexedSet,
    params: &CodeParams,
) -> Result<bool, ChannelError> {
    let b1: BTreeSet<Vec<BitRow>> = enumerate_outputs(s1, params)?
        .into_iter()
        .map(|r| r.strands().to_vec())
        .collect();
    for out in enumerate_outputs(s2, params)? {
        if b1.contains(out.strands()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact count of channel outputs that are again well-formed indexed sets
/// (every index present exactly once).
pub fn count_indexed_outputs(
    set: &IndexedSet,
    params: &CodeParams,
) -> Result<u64, ChannelError> {
    let outputs = enumerate_outputs(set, params)?;
    Ok(outputs
        .iter()
        .filter(|out| {
            if out.len() != params.strands {
                return false;
            }
            let mut indices: Vec<u64> = out
                .strands()
                .iter()
                .map(|s| s.read_int(0, params.log_m))
                .collect();
            indices.sort_unstable();
            indices.iter().enumerate().all(|(i, &v)| v == i as u64)
        })
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p0_params() -> CodeParams {
        CodeParams::derive(4, 9, 3, 1, 1, 1, 1).unwrap()
    }

    /// A structured (not necessarily decodable) indexed set from seeded
    /// random data parts.
    fn seeded_set(params: &CodeParams, seed: u64) -> IndexedSet {
        let mut rng = Xorshift64Star::new(seed);
        let strands: Vec<BitRow> = (0..params.strands)
            .map(|i| {
                let mut s = BitRow::zeros(params.strand_len);
                s.write_int(0, params.log_m, i as u64);
                for b in params.log_m..params.strand_len {
                    if rng.next_below(2) == 1 {
                        s.set(b, true);
                    }
                }
                s
            })
            .collect();
        IndexedSet::from_strands(strands, params).unwrap()
    }

    #[test]
    fn pattern_count_p0() {
        // C(4,1) * B_1(2) * B_1(7) = 4 * 3 * 8
        assert_eq!(pattern_count(&p0_params()), 96);
    }

    #[test]
    fn t_zero_enumerates_only_the_input() {
        let params = CodeParams::derive(4, 9, 3, 0, 1, 1, 1).unwrap();
        let set = seeded_set(&params, 3);
        let outs = enumerate_outputs(&set, &params).unwrap();
        assert_eq!(outs.len(), 1);
        assert_eq!(outs[0].strands(), set.strands());
        let (received, pattern) = corrupt(&set, &params, 5);
        assert_eq!(received.strands(), set.strands());
        assert!(pattern.positions.is_empty());
    }

    #[test]
    fn corrupt_is_deterministic_and_in_ball() {
        let params = p0_params();
        let set = seeded_set(&params, 1);
        let (r1, p1) = corrupt(&set, &params, 42);
        let (r2, p2) = corrupt(&set, &params, 42);
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);

        let ball = enumerate_outputs(&set, &params).unwrap();
        for seed in 0..200 {
            let (out, _) = corrupt(&set, &params, seed);
            assert!(ball.iter().any(|b| b == &out), "seed {seed} output not in ball");
        }
    }

    #[test]
    fn enumeration_size_and_membership() {
        let params = p0_params();
        let set = seeded_set(&params, 2);
        let outs = enumerate_outputs(&set, &params).unwrap();
        assert!(!outs.is_empty() && outs.len() <= 96);
        assert!(outs.iter().any(|o| o.strands() == set.strands()));
        // output sizes within [M - t, M]
        assert!(outs
            .iter()
            .all(|o| o.len() >= params.strands - params.t && o.len() <= params.strands));
        // canonical order, duplicate free
        for w in outs.windows(2) {
            assert!(w[0].strands() < w[1].strands());
        }
    }

    #[test]
    fn ball_contains_self_and_neighbors_intersect() {
        let params = p0_params();
        let set = seeded_set(&params, 4);
        assert!(!balls_disjoint(&set, &set, &params).unwrap());

        // one flipped data bit is reachable from both sets
        let mut strands = set.strands().to_vec();
        strands[2].flip(params.strand_len - 1);
        let neighbor = IndexedSet::from_strands(strands, &params).unwrap();
        assert!(!balls_disjoint(&set, &neighbor, &params).unwrap());
    }

    #[test]
    fn counting_bound_at_p0() {
        let params = p0_params();
        // C(M,t) * (B_e2(L_M) - 1)^t = 4 * 7 = 28
        for seed in 1..=5 {
            let set = seeded_set(&params, seed);
            let count = count_indexed_outputs(&set, &params).unwrap();
            assert!(count >= 28, "seed {seed}: {count} < 28");
        }
        // with e1 = 0 every output keeps valid indices
        let params0 = CodeParams::derive(4, 9, 3, 1, 0, 1, 1).unwrap();
        let set = seeded_set(&params0, 1);
        let count = count_indexed_outputs(&set, &params0).unwrap();
        let total = enumerate_outputs(&set, &params0).unwrap().len() as u64;
        assert_eq!(count, total);
        assert!(count >= 28);
    }

    #[test]
    fn guard_rejects_huge_enumerations() {
        let params = CodeParams::derive(1 << 10, 64, 16, 5, 1, 2, 1).unwrap();
        let set = seeded_set(&params, 1);
        assert!(matches!(
            enumerate_outputs(&set, &params),
            Err(ChannelError::GuardExceeded { .. })
        ));
    }
}
