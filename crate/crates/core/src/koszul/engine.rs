use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::basis::{Block, CapExceeded, MonomialBasis};
use super::rank::{rank_of, Field, SparseDifferential};
use super::runner::{Sequential, TaskRunner};
use crate::combinatorics::{
    binomial, dominant_weights, monomial_count, monomials_of_degree, Weight,
};
use crate::params::{KoszulPosition, VeroneseParams};
use crate::tables::{BettiEntry, Provenance, TotalBettiTable};
use crate::{Error, Result};

/// Per position, the multigraded Betti numbers `beta_{p,a}` (zeros omitted).
pub type MultigradedTable = BTreeMap<KoszulPosition, BTreeMap<Weight, u64>>;

/// Which weights get an explicit rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightScope {
    /// Only weakly decreasing weights; the rest are filled in by permuting
    /// coordinates, which is a ring automorphism.
    #[default]
    Dominant,
    /// Every weight is computed independently.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub field: Field,
    /// Largest admissible block, in basis elements.
    pub block_cap: u64,
    /// Ignore `block_cap`.
    pub force: bool,
    pub scope: WeightScope,
}

impl EngineConfig {
    pub const DEFAULT_BLOCK_CAP: u64 = 200_000;
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            field: Field::default(),
            block_cap: Self::DEFAULT_BLOCK_CAP,
            force: false,
            scope: WeightScope::Dominant,
        }
    }
}

/// Dimension of one weight stratum and the rank of the differential leaving it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StratumRank {
    pub dim: u64,
    pub out_rank: u64,
}

/// Emitted once per finished `(p, q)` while a whole table is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progress {
    pub position: KoszulPosition,
    pub value: u64,
    pub blocks: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostEstimate {
    /// Largest average block size over the positions that will be visited.
    pub max_average_block: u64,
    pub position: KoszulPosition,
    /// Rough count of field operations for the whole table.
    pub estimated_ops: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineOutput {
    pub table: TotalBettiTable,
    pub multigraded: MultigradedTable,
}

/// `dim Lambda^p S_d (x) S_{qd+b} = C(N, p) * C(qd+b+n, n)`.
pub fn koszul_space_dim(params: &VeroneseParams, pos: KoszulPosition) -> BigUint {
    binomial(u64::from(params.num_vars()), u64::from(pos.p))
        * monomial_count(params.width(), params.coefficient_degree(pos.q))
}

/// Eagon-Northcott value `beta_{p,p+1} = p * C(d, p+1)` for the rational
/// normal curve of degree `d`; zero outside `1 <= p <= d-1`.
pub fn rnc_betti_oracle(d: u64, p: u64) -> u64 {
    if p == 0 || p + 1 > d {
        return 0;
    }
    p * binomial(d, p + 1).to_u64().expect("binomial fits")
}

pub const SUPPORTED_MAX_N: u32 = 2;
pub const SUPPORTED_RANGE: &str = "n = 1 or 2";

/// Builds blocks, differentials and ranks for one `(n, d, b)`.
#[derive(Debug, Clone)]
pub struct KoszulEngine {
    params: VeroneseParams,
    config: EngineConfig,
    basis: MonomialBasis,
}

impl KoszulEngine {
    pub fn new(params: VeroneseParams, config: EngineConfig) -> Self {
        let basis = MonomialBasis::new(params.width(), params.d());
        Self {
            params,
            config,
            basis,
        }
    }

    pub fn params(&self) -> &VeroneseParams {
        &self.params
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn cap(&self) -> Option<usize> {
        (!self.config.force).then_some(self.config.block_cap as usize)
    }

    /// Weights visited at `pos` under the configured scope.
    pub fn weights_for(&self, pos: KoszulPosition) -> Vec<Weight> {
        let total = self.params.total_weight(pos);
        if total < 0 || self.params.coefficient_degree(pos.q) < 0 {
            return Vec::new();
        }
        match self.config.scope {
            WeightScope::Dominant => dominant_weights(self.params.width(), total as u32)
                .into_iter()
                .map(Weight::from)
                .collect(),
            WeightScope::All => monomials_of_degree(self.params.width(), total as u32),
        }
    }

    /// The basis of `Lambda^p V (x) B_q` in weight `w`.
    pub fn block(&self, pos: KoszulPosition, w: &Weight) -> Result<Block> {
        let total = self.params.total_weight(pos);
        if w.width() != self.params.width() {
            return Err(Error::WidthMismatch {
                expected: self.params.width(),
                found: w.width(),
            });
        }
        if total < 0 || w.total() != total as u64 {
            return Err(Error::TotalMismatch {
                left: w.total(),
                right: total.max(0) as u64,
            });
        }
        if self.params.coefficient_degree(pos.q) < 0 || pos.p as usize > self.basis.len() {
            return Ok(Block::empty(pos.p as usize, w.clone()));
        }
        Block::enumerate(&self.basis, pos.p as usize, w, self.cap()).map_err(
            |CapExceeded(columns)| {
                let c = columns as f64;
                Error::BlockTooLarge {
                    p: pos.p,
                    q: pos.q,
                    columns: columns as u64,
                    cap: self.config.block_cap,
                    estimated_ops: c * c * c,
                }
            },
        )
    }

    /// Every nonempty block of `pos`, keyed by weight, regardless of scope.
    pub fn build_blocks(&self, pos: KoszulPosition) -> Result<BTreeMap<Weight, Block>> {
        let total = self.params.total_weight(pos);
        let mut out = BTreeMap::new();
        if total < 0 {
            return Ok(out);
        }
        for w in monomials_of_degree(self.params.width(), total as u32) {
            let block = self.block(pos, &w)?;
            if !block.is_empty() {
                out.insert(w, block);
            }
        }
        Ok(out)
    }

    /// Matrix of the differential `(p, q) -> (p-1, q+1)` restricted to `w`.
    pub fn differential_block(
        &self,
        pos: KoszulPosition,
        w: &Weight,
    ) -> Result<SparseDifferential> {
        let source = self.block(pos, w)?;
        if pos.p == 0 {
            return Ok(SparseDifferential::new(0, source.len(), Vec::new()));
        }
        let target = self.block(KoszulPosition::new(pos.p - 1, pos.q + 1), w)?;
        Ok(differential_between(&source, &target))
    }

    /// Dimension of the `(pos, w)` stratum and the rank of `d` leaving it.
    pub fn out_rank(&self, pos: KoszulPosition, w: &Weight) -> Result<StratumRank> {
        let source = self.block(pos, w)?;
        if source.is_empty() {
            return Ok(StratumRank::default());
        }
        let dim = source.len() as u64;
        if pos.p == 0 {
            return Ok(StratumRank { dim, out_rank: 0 });
        }
        let target = self.block(KoszulPosition::new(pos.p - 1, pos.q + 1), w)?;
        let m = differential_between(&source, &target);
        Ok(StratumRank {
            dim,
            out_rank: rank_of(&m, self.config.field) as u64,
        })
    }

    /// `beta_{p,w} = dim - rank(out) - rank(in)` for a single weight.
    pub fn stratum_betti(&self, pos: KoszulPosition, w: &Weight) -> Result<u64> {
        let here = self.out_rank(pos, w)?;
        if here.dim == 0 {
            return Ok(0);
        }
        let incoming = self.out_rank(KoszulPosition::new(pos.p + 1, pos.q - 1), w)?;
        here.dim
            .checked_sub(here.out_rank + incoming.out_rank)
            .ok_or_else(|| Error::EngineInvariant {
                position: pos,
                detail: format!("ranks exceed block dimension at weight {w}"),
            })
    }

    /// Multigraded Betti numbers of `K_{p,q}`, zero weights omitted.
    pub fn multigraded_betti(&self, pos: KoszulPosition) -> Result<BTreeMap<Weight, u64>> {
        self.multigraded_betti_with(&Sequential, pos)
    }

    /// [`Self::multigraded_betti`] with the weight blocks spread over `runner`.
    pub fn multigraded_betti_with<R: TaskRunner>(
        &self,
        runner: &R,
        pos: KoszulPosition,
    ) -> Result<BTreeMap<Weight, u64>> {
        self.check_position(pos)?;
        let weights = self.weights_for(pos);
        let betas = runner.map(&weights, |w| self.stratum_betti(pos, w));
        let mut out = BTreeMap::new();
        for (w, beta) in weights.into_iter().zip(betas) {
            self.record(&mut out, w, beta?);
        }
        Ok(out)
    }

    /// `dim K_{p,q}`.
    pub fn kpq_dim(&self, pos: KoszulPosition) -> Result<u64> {
        Ok(self.multigraded_betti(pos)?.values().sum())
    }

    fn record(&self, out: &mut BTreeMap<Weight, u64>, w: Weight, beta: u64) {
        if beta == 0 {
            return;
        }
        match self.config.scope {
            WeightScope::Dominant => {
                for perm in w.permutations() {
                    out.insert(perm, beta);
                }
            }
            WeightScope::All => {
                out.insert(w, beta);
            }
        }
    }

    /// Feasibility guard for computing `K_{p,q}` alone: `n` must be
    /// supported and the average blocks at `(p, q)` and at `(p+1, q-1)`,
    /// whose differential lands there, must fit under the cap.
    pub fn check_position(&self, pos: KoszulPosition) -> Result<()> {
        if self.config.force {
            return Ok(());
        }
        if self.params.n() > SUPPORTED_MAX_N {
            return Err(Error::Unsupported {
                reason: format!("n = {}", self.params.n()),
                supported: String::from(SUPPORTED_RANGE),
            });
        }
        for at in [pos, KoszulPosition::new(pos.p + 1, pos.q - 1)] {
            let (avg, weights) = self.average_block(at);
            if avg > self.config.block_cap {
                let c = avg as f64;
                return Err(Error::BlockTooLarge {
                    p: at.p,
                    q: at.q,
                    columns: avg,
                    cap: self.config.block_cap,
                    estimated_ops: c * c * c * weights as f64,
                });
            }
        }
        Ok(())
    }

    /// Mean block size at `pos` (a lower bound for the largest block) and the
    /// number of weights of the right total.
    fn average_block(&self, pos: KoszulPosition) -> (u64, u64) {
        let total = self.params.total_weight(pos);
        if total < 0 {
            return (0, 0);
        }
        let weights = monomial_count(self.params.width(), total);
        let dim = koszul_space_dim(&self.params, pos);
        let avg = (&dim + &weights - 1u32) / &weights;
        (
            avg.to_u64().unwrap_or(u64::MAX),
            weights.to_u64().unwrap_or(u64::MAX),
        )
    }

    /// Cost estimate for the rows a full table computation will visit.
    pub fn estimate(&self) -> CostEstimate {
        let mut best = CostEstimate {
            max_average_block: 0,
            position: KoszulPosition::new(0, self.params.min_q()),
            estimated_ops: 0.0,
        };
        let last_q = self.params.min_q() + self.params.n() as i32 + 1;
        for q in self.params.min_q()..=last_q {
            for p in 0..=self.params.num_vars() {
                let pos = KoszulPosition::new(p, q);
                let (avg, weights) = self.average_block(pos);
                let a = avg as f64;
                best.estimated_ops += a * a * a * weights as f64;
                if avg > best.max_average_block {
                    best.max_average_block = avg;
                    best.position = pos;
                }
            }
        }
        best
    }

    /// Refuses `n > 2` and parameters whose average block already exceeds
    /// the cap.
    pub fn check_feasible(&self) -> Result<()> {
        if self.config.force {
            return Ok(());
        }
        if self.params.n() > SUPPORTED_MAX_N {
            return Err(Error::Unsupported {
                reason: format!("n = {}", self.params.n()),
                supported: String::from(SUPPORTED_RANGE),
            });
        }
        let est = self.estimate();
        if est.max_average_block > self.config.block_cap {
            return Err(Error::BlockTooLarge {
                p: est.position.p,
                q: est.position.q,
                columns: est.max_average_block,
                cap: self.config.block_cap,
                estimated_ops: est.estimated_ops,
            });
        }
        Ok(())
    }

    /// Computes the full Betti table and all multigraded Betti numbers.
    ///
    /// Rows `q = min_q, min_q + 1, ..` are processed in order; each outgoing
    /// rank is computed once and reused as the incoming rank of the next
    /// row. Rows `min_q ..= min_q + n + 1` are always computed and the loop
    /// stops at the first all-zero row after that. Homological degrees
    /// beyond `N - n - 1` are computed too and must come out zero.
    pub fn compute_table<R: TaskRunner>(
        &self,
        runner: &R,
        progress: &mut dyn FnMut(Progress),
    ) -> Result<EngineOutput> {
        self.check_feasible()?;
        let params = self.params;
        let provenance = match self.config.field {
            Field::Rational => Provenance::ComputedExact,
            Field::Prime(_) => Provenance::ComputedModP,
        };
        let mut table = TotalBettiTable::new(params);
        let mut multigraded: MultigradedTable = BTreeMap::new();
        let mut previous: BTreeMap<(u32, Weight), u64> = BTreeMap::new();
        let first_q = params.min_q();
        let required_q = first_q + params.n() as i32 + 1;
        let q_limit = required_q + params.num_vars() as i32;
        let mut q = first_q;
        loop {
            let tasks: Vec<(u32, Weight)> = (0..=params.num_vars())
                .flat_map(|p| {
                    self.weights_for(KoszulPosition::new(p, q))
                        .into_iter()
                        .map(move |w| (p, w))
                })
                .collect();
            let results = runner.map(&tasks, |(p, w)| {
                self.out_rank(KoszulPosition::new(*p, q), w)
            });
            let mut current: BTreeMap<(u32, Weight), u64> = BTreeMap::new();
            let mut by_p: BTreeMap<u32, Vec<(Weight, StratumRank)>> = BTreeMap::new();
            for ((p, w), r) in tasks.into_iter().zip(results) {
                let r = r?;
                if r.dim > 0 {
                    current.insert((p, w.clone()), r.out_rank);
                    by_p.entry(p).or_default().push((w, r));
                }
            }
            let mut row_total = 0u64;
            for p in 0..=params.num_vars() {
                let pos = KoszulPosition::new(p, q);
                let mut weights = BTreeMap::new();
                let strata = by_p.remove(&p).unwrap_or_default();
                let blocks = strata.len();
                for (w, r) in strata {
                    let incoming = previous.get(&(p + 1, w.clone())).copied().unwrap_or(0);
                    let beta = r.dim.checked_sub(r.out_rank + incoming).ok_or_else(|| {
                        Error::EngineInvariant {
                            position: pos,
                            detail: format!("ranks exceed block dimension at weight {w}"),
                        }
                    })?;
                    self.record(&mut weights, w, beta);
                }
                let value: u64 = weights.values().sum();
                row_total += value;
                if p > params.max_p() {
                    if value != 0 {
                        return Err(Error::EngineInvariant {
                            position: pos,
                            detail: format!("nonzero K_{{p,q}} = {value} beyond p = N - n - 1"),
                        });
                    }
                    continue;
                }
                table.insert(pos, BettiEntry::computed(value, provenance))?;
                if !weights.is_empty() {
                    multigraded.insert(pos, weights);
                }
                progress(Progress {
                    position: pos,
                    value,
                    blocks,
                });
            }
            previous = current;
            if q >= required_q && row_total == 0 {
                break;
            }
            q += 1;
            if q > q_limit {
                return Err(Error::EngineInvariant {
                    position: KoszulPosition::new(0, q),
                    detail: format!("rows still nonzero past q = {q_limit}"),
                });
            }
        }
        Ok(EngineOutput { table, multigraded })
    }
}

fn differential_between(source: &Block, target: &Block) -> SparseDifferential {
    let p = source.wedge_size();
    let mut entries = Vec::with_capacity(source.len() * p);
    let mut face = Vec::with_capacity(p.saturating_sub(1));
    for (col, subset) in source.iter().enumerate() {
        for i in 0..p {
            face.clear();
            face.extend_from_slice(&subset[..i]);
            face.extend_from_slice(&subset[i + 1..]);
            let row = target
                .index_of(&face)
                .expect("faces of a block element lie in the neighbouring block");
            let sign = if i % 2 == 0 { 1 } else { -1 };
            entries.push((row as u32, col as u32, sign));
        }
    }
    SparseDifferential::new(target.len(), source.len(), entries)
}
