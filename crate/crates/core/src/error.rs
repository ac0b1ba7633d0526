use alloc::string::String;
use alloc::vec::Vec;

use crate::params::KoszulPosition;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// Parameters outside the range this tool is meant to handle; carries the
    /// supported range so front ends can print it.
    #[error("unsupported parameters ({reason}); supported range: {supported}")]
    Unsupported { reason: String, supported: String },

    #[error("width mismatch: expected {expected} parts, got {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("total mismatch: {left} != {right}")]
    TotalMismatch { left: u64, right: u64 },

    #[error("not a partition: {0:?}")]
    NotAPartition(Vec<u32>),

    #[error("characteristic {0} is neither 0 nor a prime below 2^31")]
    BadCharacteristic(u64),

    /// The infeasibility guard refused to build a block.
    #[error(
        "block at (p={p}, q={q}) has at least {columns} columns, above the cap of {cap}; \
         estimated work ~{estimated_ops:e} field operations (use force to override)"
    )]
    BlockTooLarge {
        p: u32,
        q: i32,
        columns: u64,
        cap: u64,
        estimated_ops: f64,
    },

    /// Greedy Schur decomposition hit a negative residual.
    #[error("weight table is not a representation: residual at weight {weight:?} would become {residual}")]
    NegativeResidual { weight: Vec<u32>, residual: i128 },

    /// A weight table that is not invariant under permuting coordinates.
    #[error("weight table is not symmetric: weight {0:?} left over after decomposition")]
    NotSymmetric(Vec<u32>),

    #[error("engine invariant violated at {position}: {detail}")]
    EngineInvariant {
        position: KoszulPosition,
        detail: String,
    },

    #[error("value overflow in {0}")]
    Overflow(&'static str),
}
