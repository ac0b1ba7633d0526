//! Invariant suite shared by `import` and the `check` command.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use veronese_core::schur::reconstruct_weights;
use veronese_core::tables::{certify, euler_check, BettiValue, EulerCheck};
use veronese_core::KoszulPosition;

use crate::store::{Dataset, StoreError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl CheckLine {
    fn new(name: &'static str, outcome: Outcome, detail: impl Into<String>) -> Self {
        Self {
            name,
            outcome,
            detail: detail.into(),
        }
    }

    fn from_result(name: &'static str, result: Result<String, String>) -> Self {
        match result {
            Ok(detail) => Self::new(name, Outcome::Pass, detail),
            Err(detail) => Self::new(name, Outcome::Fail, detail),
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<7} {}", self.outcome, self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Every check, in a fixed order.
pub fn run_all(ds: &Dataset) -> Vec<CheckLine> {
    vec![
        euler(ds),
        weight_totals(ds),
        multi_vs_total(ds),
        schur_vs_total(ds),
        schur_vs_multi(ds),
        kostka_round_trip(ds),
        symmetry(ds),
        certification(ds),
    ]
}

/// The dimension identities among whichever tables are present.
pub fn require_consistent(ds: &Dataset) -> Result<(), StoreError> {
    for line in [multi_vs_total(ds), schur_vs_total(ds), schur_vs_multi(ds)] {
        if line.outcome == Outcome::Fail {
            return Err(StoreError::Invariant {
                location: line.name.to_string(),
                message: line.detail,
            });
        }
    }
    Ok(())
}

fn skipped(name: &'static str, missing: &str) -> CheckLine {
    CheckLine::new(name, Outcome::Skipped, format!("no {missing} table"))
}

fn euler(ds: &Dataset) -> CheckLine {
    match euler_check(ds.total()) {
        EulerCheck::Pass => CheckLine::new("euler characteristic", Outcome::Pass, ""),
        EulerCheck::Fail {
            degree,
            expected,
            found,
        } => CheckLine::new(
            "euler characteristic",
            Outcome::Fail,
            format!("degree {degree}: alternating sum {found}, Hilbert series gives {expected}"),
        ),
        EulerCheck::Inapplicable => CheckLine::new(
            "euler characteristic",
            Outcome::Skipped,
            "table has unknown entries",
        ),
    }
}

fn weight_totals(ds: &Dataset) -> CheckLine {
    const NAME: &str = "weight totals";
    if ds.multi().is_none() && ds.schur().is_none() {
        return skipped(NAME, "schur or multi");
    }
    let params = ds.params();
    let mut count = 0usize;
    let result = (|| {
        for (pos, poly) in ds.multi().into_iter().flatten() {
            let expected = params.total_weight(*pos);
            for w in poly.terms().keys() {
                count += 1;
                if w.total() as i64 != expected {
                    return Err(format!(
                        "weight {w} at {pos} has total {}, expected {expected}",
                        w.total()
                    ));
                }
            }
        }
        for (pos, entries) in ds.schur().into_iter().flat_map(|s| s.iter()) {
            let expected = params.total_weight(*pos);
            for e in entries {
                count += 1;
                if e.lambda.size() as i64 != expected {
                    return Err(format!(
                        "partition {} at {pos} has size {}, expected {expected}",
                        e.lambda,
                        e.lambda.size()
                    ));
                }
            }
        }
        Ok(())
    })();
    CheckLine::from_result(
        NAME,
        result.map(|()| format!("{count} weights and partitions")),
    )
}

/// Compares `dim(pos)` with every known total entry over the union of
/// positions.
fn against_total(
    ds: &Dataset,
    name: &'static str,
    positions: BTreeSet<KoszulPosition>,
    dim: impl Fn(KoszulPosition) -> Result<BigUint, String>,
) -> CheckLine {
    let all: BTreeSet<KoszulPosition> = ds
        .total()
        .entries()
        .map(|(p, _)| *p)
        .chain(positions)
        .collect();
    let mut compared = 0usize;
    for pos in all {
        let BettiValue::Known(v) = ds.total().value(pos) else {
            continue;
        };
        let found = match dim(pos) {
            Ok(found) => found,
            Err(e) => return CheckLine::new(name, Outcome::Fail, e),
        };
        if found != BigUint::from(v) {
            return CheckLine::new(
                name,
                Outcome::Fail,
                format!("at {pos}: total table has {v}, decomposition gives {found}"),
            );
        }
        compared += 1;
    }
    CheckLine::new(name, Outcome::Pass, format!("{compared} positions"))
}

fn multi_vs_total(ds: &Dataset) -> CheckLine {
    const NAME: &str = "multigraded sum = total";
    let Some(multi) = ds.multi() else {
        return skipped(NAME, "multi");
    };
    against_total(ds, NAME, multi.keys().copied().collect(), |pos| {
        Ok(BigUint::from(multi.get(&pos).map_or(0, |p| p.dimension())))
    })
}

fn schur_vs_total(ds: &Dataset) -> CheckLine {
    const NAME: &str = "schur dimension = total";
    let Some(schur) = ds.schur() else {
        return skipped(NAME, "schur");
    };
    against_total(ds, NAME, schur.positions().copied().collect(), |pos| {
        schur.dimension(pos).map_err(|e| format!("at {pos}: {e}"))
    })
}

fn schur_vs_multi(ds: &Dataset) -> CheckLine {
    const NAME: &str = "schur dimension = multigraded sum";
    let (Some(schur), Some(multi)) = (ds.schur(), ds.multi()) else {
        return skipped(
            NAME,
            if ds.schur().is_none() {
                "schur"
            } else {
                "multi"
            },
        );
    };
    let positions: BTreeSet<KoszulPosition> =
        schur.positions().chain(multi.keys()).copied().collect();
    let result = (|| {
        for pos in &positions {
            let from_schur = schur
                .dimension(*pos)
                .map_err(|e| format!("at {pos}: {e}"))?;
            let from_multi = multi.get(pos).map_or(0, |p| p.dimension());
            if from_schur != BigUint::from(from_multi) {
                return Err(format!(
                    "at {pos}: schur gives {from_schur}, multigraded gives {from_multi}"
                ));
            }
        }
        Ok(format!("{} positions", positions.len()))
    })();
    CheckLine::from_result(NAME, result)
}

fn kostka_round_trip(ds: &Dataset) -> CheckLine {
    const NAME: &str = "schur characters = multigraded";
    let (Some(schur), Some(multi)) = (ds.schur(), ds.multi()) else {
        return skipped(
            NAME,
            if ds.schur().is_none() {
                "schur"
            } else {
                "multi"
            },
        );
    };
    let width = ds.params().width();
    let positions: BTreeSet<KoszulPosition> =
        schur.positions().chain(multi.keys()).copied().collect();
    let result = (|| {
        for pos in &positions {
            let rebuilt = reconstruct_weights(schur.get(*pos), width)
                .map_err(|e| format!("at {pos}: {e}"))?;
            let stored = multi
                .get(pos)
                .map(|p| p.terms().clone())
                .unwrap_or_default();
            if rebuilt != stored {
                return Err(format!(
                    "at {pos}: character of the schur entries differs from the multigraded table"
                ));
            }
        }
        Ok(format!("{} positions", positions.len()))
    })();
    CheckLine::from_result(NAME, result)
}

fn symmetry(ds: &Dataset) -> CheckLine {
    const NAME: &str = "weight symmetry";
    let Some(multi) = ds.multi() else {
        return skipped(NAME, "multi");
    };
    let result = (|| {
        for (pos, poly) in multi {
            for (w, c) in poly.terms() {
                for image in w.permutations() {
                    let found = poly.terms().get(&image).copied().unwrap_or(0);
                    if found != *c {
                        return Err(format!(
                            "at {pos}: weight {w} has coefficient {c} but {image} has {found}"
                        ));
                    }
                }
            }
        }
        Ok(format!("{} positions", multi.len()))
    })();
    CheckLine::from_result(NAME, result)
}

fn certification(ds: &Dataset) -> CheckLine {
    const NAME: &str = "certification";
    let derived = certify(ds.total());
    let (mut known, mut certified, mut unknown) = (0usize, 0usize, 0usize);
    for (pos, e) in ds.total().entries() {
        match e.value {
            BettiValue::Unknown => unknown += 1,
            BettiValue::Known(_) => known += 1,
        }
        if e.certified {
            if !derived.get(*pos).certified {
                return CheckLine::new(
                    NAME,
                    Outcome::Fail,
                    format!("{pos} is flagged certified but a neighbour may be nonzero"),
                );
            }
            certified += 1;
        }
    }
    CheckLine::new(
        NAME,
        Outcome::Pass,
        format!("{certified} of {known} known entries certified, {unknown} unknown"),
    )
}
