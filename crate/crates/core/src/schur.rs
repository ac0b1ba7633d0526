//! Schur functor decomposition of weight tables.
//!
//! A `GL_{n+1}` representation is determined by its torus weights. Scanning
//! dominant weights from the top of a linear extension of dominance order,
//! the first one with positive residual multiplicity must be a highest
//! weight; peeling off `m * S_lambda` subtracts `m * K(lambda, mu)` from every
//! weight `mu`. Repeating until nothing is left gives the Schur Betti numbers.

use core::fmt;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::combinatorics::{
    dominance_leq, dominant_weights, schur_dimension, KostkaTable, Partition, Weight,
};
use crate::koszul::MultigradedTable;
use crate::params::{KoszulPosition, VeroneseParams};
use crate::{Error, Result};

/// `S_lambda` with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SchurEntry {
    pub lambda: Partition,
    pub multiplicity: u64,
}

impl fmt::Display for SchurEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda.braced(), self.multiplicity)
    }
}

/// `({9, 2, 1}, 1), ({8, 4, 0}, 1), ...`
pub fn render_entries(entries: &[SchurEntry]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{e}");
    }
    out
}

/// How the greedy step finds the next highest weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanOrder {
    /// First positive dominant weight in descending (graded) lex order.
    #[default]
    LexDescending,
    /// Scan from the lex-smallest dominant weight upwards and take the first
    /// one not strictly dominated by another positive weight.
    MaximalFromBottom,
}

/// Greedy highest-weight decomposition of a full weight table.
pub fn decompose_weights(weights: &BTreeMap<Weight, u64>, width: usize) -> Result<Vec<SchurEntry>> {
    decompose_weights_with(weights, width, ScanOrder::default())
}

pub fn decompose_weights_with(
    weights: &BTreeMap<Weight, u64>,
    width: usize,
    order: ScanOrder,
) -> Result<Vec<SchurEntry>> {
    let Some(total) = common_total(weights.keys(), width)? else {
        return Ok(Vec::new());
    };
    let mut residual: BTreeMap<Weight, i128> = weights
        .iter()
        .filter(|(_, &m)| m > 0)
        .map(|(w, &m)| (w.clone(), i128::from(m)))
        .collect();
    let dominants: Vec<Partition> = dominant_weights(width, total);
    let mut kostka = KostkaTable::new();
    let mut found: Vec<SchurEntry> = Vec::new();
    loop {
        let positive: Vec<&Partition> = dominants
            .iter()
            .filter(|l| residual.get(&l.as_weight()).copied().unwrap_or(0) > 0)
            .collect();
        let pick = match order {
            ScanOrder::LexDescending => positive.first().copied(),
            ScanOrder::MaximalFromBottom => positive.iter().rev().copied().find(|cand| {
                !positive.iter().any(|other| {
                    other != cand && dominance_leq(cand.parts(), other).unwrap_or(false)
                })
            }),
        };
        let Some(lambda) = pick else { break };
        let lambda = lambda.clone();
        if let Some(above) = positive.iter().find(|other| {
            **other != &lambda && dominance_leq(lambda.parts(), other).unwrap_or(false)
        }) {
            // cannot happen for a linear extension of dominance
            return Err(Error::NegativeResidual {
                weight: above.parts().to_vec(),
                residual: residual[&above.as_weight()],
            });
        }
        let m = residual[&lambda.as_weight()];
        for mu in &dominants {
            if !dominance_leq(mu.parts(), &lambda)? {
                continue;
            }
            let k = kostka.kostka(&lambda, &mu.as_weight())?;
            if k == 0 {
                continue;
            }
            for perm in mu.as_weight().permutations() {
                let slot = residual.entry(perm.clone()).or_insert(0);
                *slot -= m * i128::from(k);
                if *slot < 0 {
                    return Err(Error::NegativeResidual {
                        weight: perm.exponents().to_vec(),
                        residual: *slot,
                    });
                }
            }
        }
        found.push(SchurEntry {
            lambda,
            multiplicity: m as u64,
        });
        residual.retain(|_, v| *v != 0);
    }
    if let Some((w, _)) = residual.iter().find(|(_, v)| **v != 0) {
        return Err(Error::NotSymmetric(w.exponents().to_vec()));
    }
    found.sort_by(|a, b| b.lambda.cmp(&a.lambda));
    Ok(found)
}

fn common_total<'a>(
    mut keys: impl Iterator<Item = &'a Weight>,
    width: usize,
) -> Result<Option<u32>> {
    let Some(first) = keys.next() else {
        return Ok(None);
    };
    let check_width = |w: &Weight| {
        if w.width() != width {
            Err(Error::WidthMismatch {
                expected: width,
                found: w.width(),
            })
        } else {
            Ok(())
        }
    };
    check_width(first)?;
    let total = first.total();
    for w in keys {
        check_width(w)?;
        if w.total() != total {
            return Err(Error::TotalMismatch {
                left: w.total(),
                right: total,
            });
        }
    }
    u32::try_from(total)
        .map(Some)
        .map_err(|_| Error::Overflow("weight total"))
}

/// `sum_lambda m_lambda * K(lambda, mu)` for every weight `mu`.
pub fn reconstruct_weights(entries: &[SchurEntry], width: usize) -> Result<BTreeMap<Weight, u64>> {
    let mut out: BTreeMap<Weight, u64> = BTreeMap::new();
    let mut kostka = KostkaTable::new();
    for e in entries {
        if e.lambda.width() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                found: e.lambda.width(),
            });
        }
        let total = u32::try_from(e.lambda.size()).map_err(|_| Error::Overflow("weight total"))?;
        for mu in dominant_weights(width, total) {
            if !dominance_leq(mu.parts(), &e.lambda)? {
                continue;
            }
            let k = kostka.kostka(&e.lambda, &mu.as_weight())?;
            if k == 0 {
                continue;
            }
            for perm in mu.as_weight().permutations() {
                *out.entry(perm).or_insert(0) += e.multiplicity * k;
            }
        }
    }
    Ok(out)
}

/// Schur Betti numbers `m_{p,lambda}` for every nonzero position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurTable {
    params: VeroneseParams,
    entries: BTreeMap<KoszulPosition, Vec<SchurEntry>>,
}

impl SchurTable {
    pub fn new(params: VeroneseParams) -> Self {
        Self {
            params,
            entries: BTreeMap::new(),
        }
    }

    /// Decomposes every position of an engine-produced multigraded table.
    pub fn from_multigraded(
        params: VeroneseParams,
        multigraded: &MultigradedTable,
    ) -> Result<Self> {
        let mut table = Self::new(params);
        for (pos, weights) in multigraded {
            let entries = decompose_weights(weights, params.width())?;
            table.insert(*pos, entries)?;
        }
        Ok(table)
    }

    /// Stores a decomposition, checking `|lambda| = d(p+q) + b` and sorting.
    pub fn insert(&mut self, pos: KoszulPosition, mut entries: Vec<SchurEntry>) -> Result<()> {
        let total = self.params.total_weight(pos);
        for e in &entries {
            if e.lambda.width() != self.params.width() {
                return Err(Error::WidthMismatch {
                    expected: self.params.width(),
                    found: e.lambda.width(),
                });
            }
            if total < 0 || e.lambda.size() != total as u64 {
                return Err(Error::TotalMismatch {
                    left: e.lambda.size(),
                    right: total.max(0) as u64,
                });
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidParameters(alloc::format!(
                    "zero multiplicity for {} at {pos}",
                    e.lambda
                )));
            }
        }
        entries.sort_by(|a, b| b.lambda.cmp(&a.lambda));
        if entries.windows(2).any(|w| w[0].lambda == w[1].lambda) {
            return Err(Error::InvalidParameters(alloc::format!(
                "repeated partition at {pos}"
            )));
        }
        if entries.is_empty() {
            self.entries.remove(&pos);
        } else {
            self.entries.insert(pos, entries);
        }
        Ok(())
    }

    pub fn params(&self) -> &VeroneseParams {
        &self.params
    }

    pub fn get(&self, pos: KoszulPosition) -> &[SchurEntry] {
        self.entries.get(&pos).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn positions(&self) -> impl Iterator<Item = &KoszulPosition> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&KoszulPosition, &Vec<SchurEntry>)> {
        self.entries.iter()
    }

    /// `sum m_lambda * dim S_lambda` at `pos`.
    pub fn dimension(&self, pos: KoszulPosition) -> Result<BigUint> {
        let mut acc = BigUint::default();
        for e in self.get(pos) {
            acc += schur_dimension(&e.lambda, self.params.width())? * e.multiplicity;
        }
        Ok(acc)
    }

    /// Number of irreducible summands, with multiplicity.
    pub fn num_reps(&self) -> BTreeMap<KoszulPosition, u64> {
        self.entries
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|e| e.multiplicity).sum()))
            .collect()
    }

    /// Number of distinct irreducible summands.
    pub fn num_distinct_reps(&self) -> BTreeMap<KoszulPosition, u64> {
        self.entries
            .iter()
            .map(|(k, v)| (*k, v.len() as u64))
            .collect()
    }
}
