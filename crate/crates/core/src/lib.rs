//! Error-correcting codes for unordered indexed sets of binary strands.
//!
//! A stored object is a set of `M` strands of `L` bits, each prefixed with a
//! unique index. The channel corrupts at most `t` strands, each with at most
//! `e1` substitutions in the index field and `e2` in the data field, then
//! discards ordering and merges duplicates. The codec here recovers from any
//! such corruption using a two-stage construction: an anchor field after the
//! index (an MDS codeword with a pairwise distance guarantee between
//! index-adjacent positions) restores the strand order, and a tensor-product
//! code over the remaining bits repairs the in-strand errors.
//!
//! The crate also ships the channel itself (seeded sampling plus exhaustive
//! output enumeration for desk-scale verification) and exact evaluators for
//! the sphere-packing and Gilbert-Varshamov redundancy bounds of this
//! channel model.

pub mod algebra;
pub mod anchors;
pub mod bits;
pub mod bounds;
pub mod channel;
pub mod codec;
pub mod experiment;
pub mod format;
pub mod rng;
pub mod tpc;

pub use bits::BitRow;
pub use bounds::{BoundsInput, BoundsReport};
pub use codec::{Codec, CodeParams, DecodeError, EncodeError, IndexedSet, ParamError, ReceivedSet};
pub use experiment::ExperimentReport;
