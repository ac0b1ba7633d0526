//! Koszul cohomology of Veronese modules, one torus weight at a time.
//!
//! `K_{p,q}` is the middle homology of
//! `Lambda^{p+1} V (x) B_{q-1} -> Lambda^p V (x) B_q -> Lambda^{p-1} V (x) B_{q+1}`
//! with `V = S_d` and `B_q = S_{qd+b}`. The differential
//! `m_1 ^ .. ^ m_p (x) f  |->  sum_i (-1)^(i-1) m_1 ^ .. ^ m_i^ ^ .. ^ m_p (x) m_i f`
//! preserves the `Z^{n+1}` weight, so every rank is computed block by block.

mod basis;
mod engine;
mod rank;
mod runner;

pub use basis::{Block, CapExceeded, MonomialBasis};
pub use engine::{
    koszul_space_dim, rnc_betti_oracle, CostEstimate, EngineConfig, EngineOutput, KoszulEngine,
    MultigradedTable, Progress, StratumRank, WeightScope, SUPPORTED_MAX_N, SUPPORTED_RANGE,
};
pub use rank::{rank_of, Field, SparseDifferential};
pub use runner::{Sequential, TaskRunner};
