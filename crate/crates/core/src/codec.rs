//! End-to-end codec: parameter derivation, payload packing, encoding to an
//! indexed set, and the three-stage decoder (anchor recovery, position
//! matching, tensor-product repair).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::bch::{BchCode, BchError};
use crate::algebra::field::FieldContext;
use crate::algebra::rs::RsCode;
use crate::anchors::{self, AnchorTuple};
use crate::bits::BitRow;
use crate::tpc::TpcLayout;

/// All channel/code parameters plus derived quantities. Construction goes
/// through [`CodeParams::derive`], which validates every constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    /// Number of strands M (a power of two, at least 4).
    #[serde(rename = "M")]
    pub strands: usize,
    /// Strand length L in bits.
    #[serde(rename = "L")]
    pub strand_len: usize,
    /// Anchor length l in bits.
    #[serde(rename = "l")]
    pub anchor_len: usize,
    /// Maximum number of corrupted strands.
    pub t: usize,
    /// Per-strand index substitution budget.
    #[serde(rename = "e1")]
    pub eps1: usize,
    /// Per-strand data substitution budget.
    #[serde(rename = "e2")]
    pub eps2: usize,
    /// Scrambler seed; part of the code definition.
    #[serde(rename = "seed")]
    pub code_seed: u64,
    pub log_m: usize,
    /// Data-part length L_M = L - log M.
    pub l_m: usize,
    /// Index fraction log M / L, informational.
    pub beta: f64,
    /// Inner-code redundancy (rank of the BCH parity-check matrix).
    pub r1: usize,
    /// Rows per outer-code super-symbol.
    pub g: usize,
    /// Number of rows whose parity bits are solved by the tensor-product
    /// encoder (2 t g).
    pub parity_rows: usize,
    /// Anchor parity symbol count 2t.
    pub anchor_parity: usize,
    pub capacity_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    StrandCountNotPowerOfTwo(usize),
    TooFewStrands(usize),
    StrandTooShort { strand_len: usize, log_m: usize },
    Eps1ExceedsIndex { eps1: usize, log_m: usize },
    Eps2ExceedsData { eps2: usize, l_m: usize },
    AnchorTooShort { anchor_len: usize, min: usize },
    AnchorTooLong(usize),
    AnchorParityExceedsStrands { strands: usize, t: usize },
    DataRegionTooSmall { v_len: usize, r1: usize },
    NoFeasibleGrouping { strands: usize, r1: usize },
    GroupTooCoarse { per_group: usize, t: usize },
    InnerCode(BchError),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::StrandCountNotPowerOfTwo(m) => {
                write!(f, "M = {m} is not a power of two")
            }
            ParamError::TooFewStrands(m) => write!(f, "M = {m} is below the minimum of 4"),
            ParamError::StrandTooShort { strand_len, log_m } => write!(
                f,
                "L = {strand_len} leaves no data bits after the {log_m}-bit index"
            ),
            ParamError::Eps1ExceedsIndex { eps1, log_m } => {
                write!(f, "e1 = {eps1} exceeds the index length {log_m}")
            }
            ParamError::Eps2ExceedsData { eps2, l_m } => {
                write!(f, "e2 = {eps2} exceeds the data length {l_m}")
            }
            ParamError::AnchorTooShort { anchor_len, min } => write!(
                f,
                "l = {anchor_len} violates l >= log M + 1 = {min}"
            ),
            ParamError::AnchorTooLong(l) => {
                write!(f, "l = {l} exceeds the field-table limit of 16")
            }
            ParamError::AnchorParityExceedsStrands { strands, t } => write!(
                f,
                "2t = {} leaves no anchor data symbols among M = {strands}",
                2 * t
            ),
            ParamError::DataRegionTooSmall { v_len, r1 } => write!(
                f,
                "L_M - l = {v_len} is smaller than the inner redundancy r1 = {r1}"
            ),
            ParamError::NoFeasibleGrouping { strands, r1 } => write!(
                f,
                "no group size g <= 16/r1 fits M = {strands} rows into GF(2^(r1*g)) with r1 = {r1}"
            ),
            ParamError::GroupTooCoarse { per_group, t } => write!(
                f,
                "M/g = {per_group} super-symbols cannot carry outer redundancy 2t = {}",
                2 * t
            ),
            ParamError::InnerCode(e) => write!(f, "inner code: {e}"),
        }
    }
}

impl std::error::Error for ParamError {}

impl From<BchError> for ParamError {
    fn from(e: BchError) -> Self {
        ParamError::InnerCode(e)
    }
}

impl CodeParams {
    pub fn derive(
        strands: usize,
        strand_len: usize,
        anchor_len: usize,
        t: usize,
        eps1: usize,
        eps2: usize,
        code_seed: u64,
    ) -> Result<CodeParams, ParamError> {
        if strands < 4 {
            return Err(ParamError::TooFewStrands(strands));
        }
        if !strands.is_power_of_two() {
            return Err(ParamError::StrandCountNotPowerOfTwo(strands));
        }
        let log_m = strands.trailing_zeros() as usize;
        if strand_len <= log_m {
            return Err(ParamError::StrandTooShort { strand_len, log_m });
        }
        let l_m = strand_len - log_m;
        if eps1 > log_m {
            return Err(ParamError::Eps1ExceedsIndex { eps1, log_m });
        }
        if eps2 > l_m {
            return Err(ParamError::Eps2ExceedsData { eps2, l_m });
        }
        if anchor_len < log_m + 1 {
            return Err(ParamError::AnchorTooShort {
                anchor_len,
                min: log_m + 1,
            });
        }
        if anchor_len > 16 {
            return Err(ParamError::AnchorTooLong(anchor_len));
        }
        if strands < 2 * t + 1 {
            return Err(ParamError::AnchorParityExceedsStrands { strands, t });
        }

        let inner = BchCode::build(l_m, eps2)?;
        let r1 = inner.r1();
        if l_m - anchor_len < r1 {
            return Err(ParamError::DataRegionTooSmall {
                v_len: l_m - anchor_len,
                r1,
            });
        }

        // smallest power-of-two group size that fits M/g symbols into
        // GF(2^(r1*g)), keeping the field table-driven (r1*g <= 16)
        let g = if r1 == 0 {
            1
        } else {
            let mut found = None;
            let mut g = 1usize;
            while g <= strands && r1 * g <= 16 {
                if strands / g <= (1usize << (r1 * g)) - 1 {
                    found = Some(g);
                    break;
                }
                g *= 2;
            }
            found.ok_or(ParamError::NoFeasibleGrouping { strands, r1 })?
        };
        if strands / g < 2 * t + 1 {
            return Err(ParamError::GroupTooCoarse {
                per_group: strands / g,
                t,
            });
        }

        let parity_rows = if r1 == 0 { 0 } else { 2 * t * g };
        let capacity_bits = (strands - 2 * t) * anchor_len + strands * (l_m - anchor_len)
            - r1 * parity_rows;
        Ok(CodeParams {
            strands,
            strand_len,
            anchor_len,
            t,
            eps1,
            eps2,
            code_seed,
            log_m,
            l_m,
            beta: log_m as f64 / strand_len as f64,
            r1,
            g,
            parity_rows,
            anchor_parity: 2 * t,
            capacity_bits,
        })
    }

    /// Explicit redundancy paid by the codec: anchor parity plus solved
    /// tensor-product parity bits, M*L_M - capacity.
    pub fn implemented_redundancy(&self) -> usize {
        2 * self.t * self.anchor_len + self.r1 * self.parity_rows
    }

    /// Index map I(i): position i (1-based) carries binary(i-1), log M bits,
    /// most significant bit first.
    pub fn index_value(&self, position: usize) -> u64 {
        debug_assert!((1..=self.strands).contains(&position));
        (position - 1) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetError {
    WrongStrandCount { got: usize, want: usize },
    WrongStrandLength { strand: usize, got: usize, want: usize },
    BadIndexCoverage,
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::WrongStrandCount { got, want } => {
                write!(f, "expected {want} strands, got {got}")
            }
            SetError::WrongStrandLength { strand, got, want } => {
                write!(f, "strand {strand} has {got} bits, expected {want}")
            }
            SetError::BadIndexCoverage => {
                write!(f, "index fields do not cover every position exactly once")
            }
        }
    }
}

impl std::error::Error for SetError {}

/// An ordered-by-index collection of M strands; the channel input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedSet {
    strands: Vec<BitRow>,
}

impl IndexedSet {
    /// Validates count, lengths and exact index coverage, then stores the
    /// strands sorted by index.
    pub fn from_strands(strands: Vec<BitRow>, params: &CodeParams) -> Result<Self, SetError> {
        if strands.len() != params.strands {
            return Err(SetError::WrongStrandCount {
                got: strands.len(),
                want: params.strands,
            });
        }
        for (i, s) in strands.iter().enumerate() {
            if s.len() != params.strand_len {
                return Err(SetError::WrongStrandLength {
                    strand: i,
                    got: s.len(),
                    want: params.strand_len,
                });
            }
        }
        let mut sorted = strands;
        sorted.sort_unstable();
        let covered = sorted
            .iter()
            .enumerate()
            .all(|(i, s)| s.read_int(0, params.log_m) == i as u64);
        if !covered {
            return Err(SetError::BadIndexCoverage);
        }
        Ok(IndexedSet { strands: sorted })
    }

    pub fn strands(&self) -> &[BitRow] {
        &self.strands
    }

    /// The data-part rows (anchor + v), index order.
    pub fn rows(&self, params: &CodeParams) -> Vec<BitRow> {
        self.strands
            .iter()
            .map(|s| s.slice(params.log_m, params.strand_len))
            .collect()
    }
}

/// An unordered set of received strands, kept deduplicated in canonical
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedSet {
    strands: Vec<BitRow>,
}

impl ReceivedSet {
    pub fn new(mut strands: Vec<BitRow>) -> Self {
        strands.sort_unstable();
        strands.dedup();
        ReceivedSet { strands }
    }

    pub fn strands(&self) -> &[BitRow] {
        &self.strands
    }

    pub fn len(&self) -> usize {
        self.strands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strands.is_empty()
    }
}

impl From<&IndexedSet> for ReceivedSet {
    fn from(set: &IndexedSet) -> Self {
        ReceivedSet::new(set.strands.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodeError {
    PayloadTooLong { bits: usize, capacity: usize },
    /// The scrambled payload produced an anchor tuple violating the pairwise
    /// distance constraint at the listed (1-based) position pairs.
    Rejected(Vec<(usize, usize)>),
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::PayloadTooLong { bits, capacity } => {
                write!(f, "payload of {bits} bits exceeds capacity {capacity}")
            }
            EncodeError::Rejected(pairs) => {
                write!(f, "encoding rejection: anchor constraint violated at {pairs:?}")
            }
        }
    }
}

impl std::error::Error for EncodeError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    SizeMismatch { got: usize, want: usize },
    StrandLength { got: usize, want: usize },
    AnchorRs,
    AmbiguousMatch { position: usize, candidates: usize },
    MatchNotBijective { strand: usize },
    Tpc,
}

impl DecodeError {
    /// Stage tag for reports and the CLI.
    pub fn stage(&self) -> &'static str {
        match self {
            DecodeError::SizeMismatch { .. } | DecodeError::StrandLength { .. } => "size mismatch",
            DecodeError::AnchorRs => "anchor RS failure",
            DecodeError::AmbiguousMatch { .. } | DecodeError::MatchNotBijective { .. } => {
                "ambiguous match"
            }
            DecodeError::Tpc => "TPC failure",
        }
    }
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::SizeMismatch { got, want } => {
                write!(f, "size mismatch: received {got} strands, expected {want}")
            }
            DecodeError::StrandLength { got, want } => {
                write!(f, "size mismatch: strand of {got} bits, expected {want}")
            }
            DecodeError::AnchorRs => write!(f, "anchor RS failure"),
            DecodeError::AmbiguousMatch { position, candidates } => write!(
                f,
                "ambiguous match: {candidates} candidate strands for position {position}"
            ),
            DecodeError::MatchNotBijective { strand } => {
                write!(f, "ambiguous match: strand {strand} claimed by two positions")
            }
            DecodeError::Tpc => write!(f, "TPC failure"),
        }
    }
}

impl std::error::Error for DecodeError {}

/// The assembled construction for one parameter set.
pub struct Codec {
    params: CodeParams,
    anchor_code: RsCode,
    layout: TpcLayout,
}

impl Codec {
    pub fn new(params: CodeParams) -> Codec {
        let field = FieldContext::new(params.anchor_len as u32, None)
            .expect("anchor length validated to 2..=16");
        let anchor_code = RsCode::new(field, params.strands, params.strands - 2 * params.t)
            .expect("M <= 2^l - 1 follows from l >= log M + 1");
        let inner = BchCode::build(params.l_m, params.eps2).expect("validated at derive time");
        let layout = TpcLayout::new(params.strands, params.t, params.g, inner);
        Codec {
            params,
            anchor_code,
            layout,
        }
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn layout(&self) -> &TpcLayout {
        &self.layout
    }

    pub fn anchor_code(&self) -> &RsCode {
        &self.anchor_code
    }

    fn payload_bits(&self, payload: &[u8]) -> Result<BitRow, EncodeError> {
        let bits = payload.len() * 8;
        let capacity = self.params.capacity_bits;
        if bits > capacity {
            return Err(EncodeError::PayloadTooLong { bits, capacity });
        }
        let mut row = BitRow::zeros(capacity);
        for (i, &byte) in payload.iter().enumerate() {
            for b in 0..8 {
                if byte >> (7 - b) & 1 == 1 {
                    row.set(i * 8 + b, true);
                }
            }
        }
        Ok(row)
    }

    /// True iff column `col` of row `row_idx` is solved by the
    /// tensor-product encoder rather than carrying payload.
    fn is_solved_bit(&self, row_idx: usize, col: usize) -> bool {
        self.layout.parity_rows().contains(&row_idx)
            && self.layout.c1().parity_positions().contains(&col)
    }

    fn assemble(&self, payload_bits: &BitRow, anchors: &AnchorTuple) -> IndexedSet {
        let p = &self.params;
        let mut cursor = (p.strands - 2 * p.t) * p.anchor_len;
        let mut rows = Vec::with_capacity(p.strands);
        for i in 0..p.strands {
            let mut row = BitRow::zeros(p.l_m);
            row.write_int(0, p.anchor_len, anchors.symbols[i] as u64);
            for col in p.anchor_len..p.l_m {
                if self.is_solved_bit(i, col) {
                    continue;
                }
                row.set(col, payload_bits.get(cursor));
                cursor += 1;
            }
            rows.push(row);
        }
        debug_assert_eq!(cursor, p.capacity_bits);
        self.layout.encode(&mut rows);

        let strands = rows
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let mut s = BitRow::zeros(p.strand_len);
                s.write_int(0, p.log_m, p.index_value(i + 1));
                s.splice(p.log_m, &row);
                s
            })
            .collect();
        IndexedSet { strands }
    }

    /// Encodes a payload of at most `capacity_bits / 8` bytes (zero-padded
    /// to capacity).
    pub fn encode(&self, payload: &[u8]) -> Result<IndexedSet, EncodeError> {
        let (set, violations) = self.encode_unchecked(payload)?;
        if violations.is_empty() {
            Ok(set)
        } else {
            Err(EncodeError::Rejected(violations))
        }
    }

    /// Encoding without the anchor-constraint gate: returns the assembled
    /// set together with any constraint violations. With a nonempty
    /// violation list, the decoding guarantees do not hold; intended for
    /// channel studies on structured sets.
    pub fn encode_unchecked(
        &self,
        payload: &[u8],
    ) -> Result<(IndexedSet, Vec<(usize, usize)>), EncodeError> {
        let p = &self.params;
        let payload_bits = self.payload_bits(payload)?;
        let anchor_bits = payload_bits.slice(0, (p.strands - 2 * p.t) * p.anchor_len);
        let (anchors, violations) = anchors::encode_tuple(&anchor_bits, p, &self.anchor_code);
        Ok((self.assemble(&payload_bits, &anchors), violations))
    }

    /// Assigns each position its unique received strand: the one with
    /// d(index) <= e1 and d(anchor) <= e2. Returns indices into
    /// `received.strands()`.
    pub fn position_match(
        &self,
        anchors: &AnchorTuple,
        received: &ReceivedSet,
    ) -> Result<Vec<usize>, DecodeError> {
        let p = &self.params;
        let mut assignment = Vec::with_capacity(p.strands);
        for i in 0..p.strands {
            let want_index = p.index_value(i + 1);
            let want_anchor = anchors.symbols[i];
            let mut found = None;
            let mut count = 0usize;
            for (j, strand) in received.strands().iter().enumerate() {
                let d_index = (strand.read_int(0, p.log_m) ^ want_index).count_ones() as usize;
                if d_index > p.eps1 {
                    continue;
                }
                let got_anchor = strand.read_int(p.log_m, p.anchor_len) as u32;
                let d_anchor = (got_anchor ^ want_anchor).count_ones() as usize;
                if d_anchor > p.eps2 {
                    continue;
                }
                count += 1;
                found = Some(j);
            }
            if count != 1 {
                return Err(DecodeError::AmbiguousMatch {
                    position: i + 1,
                    candidates: count,
                });
            }
            assignment.push(found.unwrap());
        }
        let mut used = vec![false; received.strands().len()];
        for &j in &assignment {
            if used[j] {
                return Err(DecodeError::MatchNotBijective { strand: j });
            }
            used[j] = true;
        }
        Ok(assignment)
    }

    /// Full decoder. Returns the padded payload (`ceil(capacity / 8)`
    /// bytes); callers that know the original byte length truncate.
    pub fn decode(&self, received: &ReceivedSet) -> Result<Vec<u8>, DecodeError> {
        let p = &self.params;
        for s in received.strands() {
            if s.len() != p.strand_len {
                return Err(DecodeError::StrandLength {
                    got: s.len(),
                    want: p.strand_len,
                });
            }
        }
        // anchoring guarantees no merging, so a codeword's channel output
        // always has exactly M strands
        if received.len() != p.strands {
            return Err(DecodeError::SizeMismatch {
                got: received.len(),
                want: p.strands,
            });
        }

        let word = anchors::index_tally(received, p);
        let anchors_rec =
            anchors::recover(&word, &self.anchor_code).map_err(|_| DecodeError::AnchorRs)?;

        let assignment = self.position_match(&anchors_rec, received)?;

        // substitute the recovered anchors; residual errors are then
        // confined to the v-region of at most t rows
        let rows: Vec<BitRow> = (0..p.strands)
            .map(|i| {
                let strand = &received.strands()[assignment[i]];
                let mut row = strand.slice(p.log_m, p.strand_len);
                row.write_int(0, p.anchor_len, anchors_rec.symbols[i] as u64);
                row
            })
            .collect();

        let corrected = self.layout.decode(&rows).map_err(|_| DecodeError::Tpc)?;

        // unpack: anchor payload first, then the free v bits in row order
        let mut out_bits = BitRow::zeros(p.capacity_bits);
        let anchor_payload = anchors::extract_payload(&anchors_rec, p);
        out_bits.splice(0, &anchor_payload);
        let mut cursor = anchor_payload.len();
        for (i, row) in corrected.iter().enumerate() {
            for col in p.anchor_len..p.l_m {
                if self.is_solved_bit(i, col) {
                    continue;
                }
                out_bits.set(cursor, row.get(col));
                cursor += 1;
            }
        }
        debug_assert_eq!(cursor, p.capacity_bits);

        let mut bytes = vec![0u8; p.capacity_bits.div_ceil(8)];
        for i in 0..p.capacity_bits {
            if out_bits.get(i) {
                bytes[i / 8] |= 1 << (7 - i % 8);
            }
        }
        Ok(bytes)
    }
}
