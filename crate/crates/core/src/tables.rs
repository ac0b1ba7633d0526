//! Betti tables, tallies and their text rendering.
//!
//! Two key conventions coexist. Hash-style maps are keyed by the Koszul
//! position `(p, q)`; tallies are keyed by `(p, {p+q}, p+q)`, i.e. by
//! homological degree and internal degree, and print `beta_{p,p+q}` in row
//! `q`, column `p`.

use core::fmt;
use core::fmt::Write;
use core::str::FromStr;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::{binomial, hilbert_function, Weight};
use crate::params::{KoszulPosition, VeroneseParams};
use crate::{Error, Result};

/// Token used for entries that were never computed.
pub const UNKNOWN_TOKEN: &str = "infinity";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BettiValue {
    Known(u64),
    Unknown,
}

impl BettiValue {
    pub fn known(&self) -> Option<u64> {
        match self {
            BettiValue::Known(v) => Some(*v),
            BettiValue::Unknown => None,
        }
    }

    pub fn is_known_zero(&self) -> bool {
        *self == BettiValue::Known(0)
    }

    /// Sum that stays unknown once any summand is unknown.
    pub fn add(self, other: BettiValue) -> BettiValue {
        match (self, other) {
            (BettiValue::Known(a), BettiValue::Known(b)) => BettiValue::Known(a + b),
            _ => BettiValue::Unknown,
        }
    }
}

impl fmt::Display for BettiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BettiValue::Known(v) => write!(f, "{v}"),
            BettiValue::Unknown => f.write_str(UNKNOWN_TOKEN),
        }
    }
}

impl FromStr for BettiValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == UNKNOWN_TOKEN {
            return Ok(BettiValue::Unknown);
        }
        s.parse::<u64>()
            .map(BettiValue::Known)
            .map_err(|_| Error::InvalidParameters(format!("bad Betti value {s:?}")))
    }
}

/// Where an entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    ComputedExact,
    ComputedModP,
    Imported,
    TrivialZero,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::ComputedExact => "computed-exact",
            Provenance::ComputedModP => "computed-modp",
            Provenance::Imported => "imported",
            Provenance::TrivialZero => "trivial-zero",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "computed-exact" => Provenance::ComputedExact,
            "computed-modp" => Provenance::ComputedModP,
            "imported" => Provenance::Imported,
            "trivial-zero" => Provenance::TrivialZero,
            _ => {
                return Err(Error::InvalidParameters(format!(
                    "unknown provenance {s:?}"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BettiEntry {
    pub value: BettiValue,
    pub provenance: Provenance,
    pub certified: bool,
}

impl BettiEntry {
    pub fn computed(value: u64, provenance: Provenance) -> Self {
        Self {
            value: BettiValue::Known(value),
            provenance,
            certified: false,
        }
    }

    pub fn unknown(provenance: Provenance) -> Self {
        Self {
            value: BettiValue::Unknown,
            provenance,
            certified: false,
        }
    }

    fn implicit_zero() -> Self {
        Self {
            value: BettiValue::Known(0),
            provenance: Provenance::TrivialZero,
            certified: false,
        }
    }
}

/// `beta_{p,p+q}` stored at `(p, q)`.
///
/// Only `0 <= p <= N - n - 1` can be stored; positions that are absent read
/// back as a known zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalBettiTable {
    params: VeroneseParams,
    entries: BTreeMap<KoszulPosition, BettiEntry>,
}

impl TotalBettiTable {
    pub fn new(params: VeroneseParams) -> Self {
        Self {
            params,
            entries: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> &VeroneseParams {
        &self.params
    }

    pub fn insert(&mut self, pos: KoszulPosition, mut entry: BettiEntry) -> Result<()> {
        if pos.p > self.params.max_p() {
            return Err(Error::InvalidParameters(format!(
                "position {pos} is beyond p = N - n - 1 = {}",
                self.params.max_p()
            )));
        }
        if entry.value == BettiValue::Unknown {
            entry.certified = false;
        }
        self.entries.insert(pos, entry);
        Ok(())
    }

    /// The stored entry, or an implicit zero.
    pub fn get(&self, pos: KoszulPosition) -> BettiEntry {
        self.entries
            .get(&pos)
            .copied()
            .unwrap_or_else(BettiEntry::implicit_zero)
    }

    pub fn value(&self, pos: KoszulPosition) -> BettiValue {
        self.get(pos).value
    }

    pub fn stored(&self, pos: KoszulPosition) -> Option<&BettiEntry> {
        self.entries.get(&pos)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&KoszulPosition, &BettiEntry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_unknown(&self) -> bool {
        self.entries
            .values()
            .any(|e| e.value == BettiValue::Unknown)
    }

    /// Known entries as a `(p, q) -> value` map (zeros kept).
    pub fn known_values(&self) -> BTreeMap<KoszulPosition, u64> {
        self.entries
            .iter()
            .filter_map(|(k, e)| e.value.known().map(|v| (*k, v)))
            .collect()
    }

    /// Sum of a column; unknown if any entry in it is.
    pub fn column_total(&self, p: u32) -> BettiValue {
        self.entries
            .iter()
            .filter(|(k, _)| k.p == p)
            .fold(BettiValue::Known(0), |acc, (_, e)| acc.add(e.value))
    }

    /// The table of `S(b';d)` for `b' = b + shift * d`: entry `(p, q)` of the
    /// result is entry `(p, q + shift)` of `self`.
    pub fn retwisted(&self, shift: i32) -> Result<TotalBettiTable> {
        let b = i64::from(self.params.b()) + i64::from(shift) * i64::from(self.params.d());
        let b = i32::try_from(b).map_err(|_| Error::Overflow("twist"))?;
        let params = VeroneseParams::new(self.params.n(), self.params.d(), b)?;
        let mut out = TotalBettiTable::new(params);
        for (pos, e) in &self.entries {
            out.entries
                .insert(KoszulPosition::new(pos.p, pos.q - shift), *e);
        }
        Ok(out)
    }
}

/// Splits `b = b_norm + q_shift * d` with `0 <= b_norm < d`.
///
/// The table of `S(b;d)` at `(p, q)` equals the table of `S(b_norm;d)` at
/// `(p, q + q_shift)`.
pub fn normalize_twist(_n: u32, d: u32, b: i64) -> (i64, i64) {
    let d = i64::from(d.max(1));
    (b.rem_euclid(d), b.div_euclid(d))
}

/// Marks entries whose value cannot be affected by cancellation.
///
/// `(p, q)` is certified when both `(p+1, q-1)` and `(p-1, q+1)` are known
/// zeros (or lie outside the table), or when it was computed over `Q`.
pub fn certify(table: &TotalBettiTable) -> TotalBettiTable {
    let vanishes = |p: i64, q: i64| -> bool {
        if p < 0 || p > i64::from(table.params.max_p()) {
            return true;
        }
        table
            .value(KoszulPosition::new(p as u32, q as i32))
            .is_known_zero()
    };
    let mut out = table.clone();
    for (pos, e) in out.entries.iter_mut() {
        let (p, q) = (i64::from(pos.p), i64::from(pos.q));
        e.certified = match e.value {
            BettiValue::Unknown => false,
            BettiValue::Known(_) => {
                e.provenance == Provenance::ComputedExact
                    || (vanishes(p + 1, q - 1) && vanishes(p - 1, q + 1))
            }
        };
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerCheck {
    Pass,
    /// First internal degree where the alternating sum disagrees.
    Fail {
        degree: i64,
        expected: BigInt,
        found: BigInt,
    },
    /// The table has unknown entries.
    Inapplicable,
}

impl EulerCheck {
    pub fn passed(&self) -> bool {
        *self == EulerCheck::Pass
    }
}

/// Checks `sum_p (-1)^p beta_{p,j}` against the coefficient of `x^j` in
/// `(1-x)^N * sum_k HF(k) x^k` for every internal degree `j` the table
/// covers.
pub fn euler_check(table: &TotalBettiTable) -> EulerCheck {
    if table.has_unknown() {
        return EulerCheck::Inapplicable;
    }
    let params = table.params;
    let lo =
        i64::from(params.min_q()).min(table.entries.keys().map(|k| k.degree()).min().unwrap_or(0));
    let q_hi = table
        .entries
        .keys()
        .map(|k| i64::from(k.q))
        .max()
        .unwrap_or(i64::from(params.min_q()));
    let hi = i64::from(params.max_p()) + q_hi;
    for j in lo..=hi {
        let expected = hilbert_numerator_coefficient(&params, j);
        let mut found = BigInt::zero();
        for p in 0..=params.max_p() {
            let q = j - i64::from(p);
            let Ok(q) = i32::try_from(q) else { continue };
            if let BettiValue::Known(v) = table.value(KoszulPosition::new(p, q)) {
                if p % 2 == 0 {
                    found += v;
                } else {
                    found -= v;
                }
            }
        }
        if expected != found {
            return EulerCheck::Fail {
                degree: j,
                expected,
                found,
            };
        }
    }
    EulerCheck::Pass
}

/// Key `(p, {j}, j)` of a tally entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TallyKey {
    pub p: u32,
    pub degree: i64,
}

impl TallyKey {
    /// The Koszul position `(p, j - p)`.
    pub fn position(&self) -> KoszulPosition {
        KoszulPosition::new(self.p, (self.degree - i64::from(self.p)) as i32)
    }
}

impl fmt::Display for TallyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{{}}}, {})", self.p, self.degree, self.degree)
    }
}

/// Betti numbers keyed by `(p, {p+q}, p+q)`; zero values are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTally {
    entries: BTreeMap<TallyKey, u64>,
}

impl BettiTally {
    pub fn get(&self, key: TallyKey) -> u64 {
        self.entries.get(&key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TallyKey, &u64)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Back to the `(p, q)` convention.
    pub fn to_hash(&self) -> BTreeMap<KoszulPosition, u64> {
        self.entries
            .iter()
            .map(|(k, v)| (k.position(), *v))
            .collect()
    }

    /// Column sums indexed by `p`.
    pub fn totals(&self) -> BTreeMap<u32, u64> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.entries {
            *out.entry(k.p).or_insert(0) += v;
        }
        out
    }

    /// Entries of row `q`, indexed by `p`.
    pub fn row(&self, q: i64) -> BTreeMap<u32, u64> {
        self.entries
            .iter()
            .filter(|(k, _)| k.degree - i64::from(k.p) == q)
            .map(|(k, v)| (k.p, *v))
            .collect()
    }
}

/// Re-keys `(p, q)` as `(p, {p+q}, p+q)`, dropping zeros.
pub fn make_betti_tally(hash: &BTreeMap<KoszulPosition, u64>) -> BettiTally {
    BettiTally {
        entries: hash
            .iter()
            .filter(|(_, &v)| v != 0)
            .map(|(pos, &v)| {
                (
                    TallyKey {
                        p: pos.p,
                        degree: pos.degree(),
                    },
                    v,
                )
            })
            .collect(),
    }
}

/// Grid rendering: a header of `p` indices, a `total:` row and one row per
/// `q`, zeros shown as `.`.
pub fn render_tally(tally: &BettiTally) -> String {
    let cells: BTreeMap<KoszulPosition, String> = tally
        .entries
        .iter()
        .map(|(k, v)| (k.position(), v.to_string()))
        .collect();
    let totals: BTreeMap<u32, String> = tally
        .totals()
        .into_iter()
        .map(|(p, v)| (p, v.to_string()))
        .collect();
    render_grid(&cells, &totals)
}

/// Like [`render_tally`] but straight from a table, printing unknown entries
/// (and totals that depend on them) as `infinity`.
pub fn render_table(table: &TotalBettiTable) -> String {
    let cells: BTreeMap<KoszulPosition, String> = table
        .entries
        .iter()
        .filter(|(_, e)| !e.value.is_known_zero())
        .map(|(k, e)| (*k, e.value.to_string()))
        .collect();
    let columns: Vec<u32> = {
        let mut ps: Vec<u32> = cells.keys().map(|k| k.p).collect();
        ps.dedup();
        ps.sort_unstable();
        ps.dedup();
        ps
    };
    let totals = columns
        .iter()
        .map(|&p| (p, table.column_total(p).to_string()))
        .collect();
    render_grid(&cells, &totals)
}

fn render_grid(cells: &BTreeMap<KoszulPosition, String>, totals: &BTreeMap<u32, String>) -> String {
    let mut out = String::new();
    if cells.is_empty() {
        out.push_str("       0\ntotal: 0\n");
        return out;
    }
    let p_lo = cells.keys().map(|k| k.p).min().unwrap_or(0).min(0);
    let p_hi = cells.keys().map(|k| k.p).max().unwrap_or(0);
    let q_lo = cells.keys().map(|k| k.q).min().unwrap_or(0);
    let q_hi = cells.keys().map(|k| k.q).max().unwrap_or(0);
    let label_width = "total:".len().max(
        (q_lo..=q_hi)
            .map(|q| q.to_string().len() + 1)
            .max()
            .unwrap_or(0),
    );
    let mut widths = vec![1usize; (p_hi - p_lo + 1) as usize];
    for p in p_lo..=p_hi {
        let w = &mut widths[(p - p_lo) as usize];
        *w = (*w).max(p.to_string().len());
        if let Some(t) = totals.get(&p) {
            *w = (*w).max(t.len());
        }
        for q in q_lo..=q_hi {
            if let Some(c) = cells.get(&KoszulPosition::new(p, q)) {
                *w = (*w).max(c.len());
            }
        }
    }
    let mut line = |label: &str, cell: &dyn Fn(u32) -> String| {
        let _ = write!(out, "{label:>label_width$}");
        for p in p_lo..=p_hi {
            let w = widths[(p - p_lo) as usize];
            let _ = write!(out, " {:>w$}", cell(p));
        }
        // trailing spaces are noise in diffs
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    line("", &|p| p.to_string());
    line("total:", &|p| {
        totals.get(&p).cloned().unwrap_or_else(|| "0".into())
    });
    for q in q_lo..=q_hi {
        let label = format!("{q}:");
        line(&label, &|p| {
            cells
                .get(&KoszulPosition::new(p, q))
                .cloned()
                .unwrap_or_else(|| ".".into())
        });
    }
    out
}

/// `sum_a beta_{p,a} t^a` for one position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultigradedPolynomial {
    terms: BTreeMap<Weight, u64>,
}

impl MultigradedPolynomial {
    /// Zero coefficients are dropped; all weights must share one width.
    pub fn new(terms: BTreeMap<Weight, u64>) -> Result<Self> {
        let mut widths = terms.keys().map(|w| w.width());
        if let Some(first) = widths.next() {
            if let Some(bad) = widths.find(|&w| w != first) {
                return Err(Error::WidthMismatch {
                    expected: first,
                    found: bad,
                });
            }
        }
        Ok(Self {
            terms: terms.into_iter().filter(|(_, c)| *c != 0).collect(),
        })
    }

    pub fn terms(&self) -> &BTreeMap<Weight, u64> {
        &self.terms
    }

    /// Sum of coefficients, i.e. `dim K_{p,q}`.
    pub fn dimension(&self) -> u64 {
        self.terms.values().sum()
    }

    /// The common total of every weight, if there is one.
    pub fn total_weight(&self) -> Option<u64> {
        let mut totals = self.terms.keys().map(|w| w.total());
        let first = totals.next()?;
        totals.all(|t| t == first).then_some(first)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Terms in descending lex order of weight, e.g.
/// `t_0^19 t_1^19 t_2^18 + t_0^19 t_1^18 t_2^19`.
pub fn render_multigraded(poly: &MultigradedPolynomial) -> String {
    if poly.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (w, &c)) in poly.terms.iter().rev().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let factors: Vec<String> = w
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                if e == 1 {
                    format!("t_{j}")
                } else {
                    format!("t_{j}^{e}")
                }
            })
            .collect();
        if factors.is_empty() {
            let _ = write!(out, "{c}");
        } else {
            if c != 1 {
                let _ = write!(out, "{c} ");
            }
            out.push_str(&factors.join(" "));
        }
    }
    out
}

impl fmt::Display for MultigradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_multigraded(self))
    }
}

/// Coefficient of `x^j` in `(1-x)^N * sum_k HF(k) x^k`, which equals
/// `sum_p (-1)^p beta_{p,j}` for a complete table.
pub fn hilbert_numerator_coefficient(params: &VeroneseParams, degree: i64) -> BigInt {
    let n_vars = u64::from(params.num_vars());
    let mut acc = BigInt::zero();
    for i in 0..=n_vars {
        let hf = hilbert_function(params, degree - i as i64);
        if hf.is_zero() {
            continue;
        }
        let term = BigInt::from(binomial(n_vars, i)) * BigInt::from(hf);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const O6_ROW1: [u64; 11] = [0, 75, 536, 1947, 4488, 7095, 7920, 6237, 3344, 1089, 120];

    fn quartic_surface() -> TotalBettiTable {
        let params = VeroneseParams::new(2, 4, 0).unwrap();
        let mut t = TotalBettiTable::new(params);
        for p in 0..=12u32 {
            for q in 0..=3i32 {
                let v = match (p, q) {
                    (0, 0) => 1,
                    (p, 1) if p <= 10 => O6_ROW1[p as usize],
                    (10, 2) => 55,
                    (11, 2) => 24,
                    (12, 2) => 3,
                    _ => 0,
                };
                t.insert(
                    KoszulPosition::new(p, q),
                    BettiEntry::computed(v, Provenance::ComputedModP),
                )
                .unwrap();
            }
        }
        t
    }

    fn pos(p: u32, q: i32) -> KoszulPosition {
        KoszulPosition::new(p, q)
    }

    #[test]
    fn tally_keys() {
        let tally = make_betti_tally(&BTreeMap::from([
            (pos(2, 1), 536),
            (pos(0, 0), 1),
            (pos(5, 0), 0),
        ]));
        assert_eq!(tally.get(TallyKey { p: 2, degree: 3 }), 536);
        assert_eq!(tally.get(TallyKey { p: 0, degree: 0 }), 1);
        assert_eq!(tally.iter().count(), 2);
        assert_eq!(TallyKey { p: 2, degree: 3 }.to_string(), "(2, {3}, 3)");
        assert_eq!(
            tally.to_hash(),
            BTreeMap::from([(pos(0, 0), 1), (pos(2, 1), 536)])
        );
    }

    #[test]
    fn render_quartic_surface() {
        let text = render_tally(&make_betti_tally(&quartic_surface().known_values()));
        let lines: Vec<&str> = text.lines().collect();
        let cells = |i: usize| -> Vec<&str> { lines[i].split_whitespace().collect() };
        assert_eq!(
            cells(0),
            ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12"]
        );
        assert_eq!(
            cells(1),
            [
                "total:", "1", "75", "536", "1947", "4488", "7095", "7920", "6237", "3344", "1089",
                "175", "24", "3"
            ]
        );
        assert_eq!(
            cells(2),
            ["0:", "1", ".", ".", ".", ".", ".", ".", ".", ".", ".", ".", ".", "."]
        );
        assert_eq!(
            cells(4),
            ["2:", ".", ".", ".", ".", ".", ".", ".", ".", ".", ".", "55", "24", "3"]
        );
        assert_eq!(lines.len(), 5);
        assert_eq!(render_tally(&BettiTally::default()), "       0\ntotal: 0\n");
    }

    #[test]
    fn render_with_unknowns() {
        let params = VeroneseParams::new(2, 7, 0).unwrap();
        let mut t = TotalBettiTable::new(params);
        t.insert(pos(0, 0), BettiEntry::computed(1, Provenance::Imported))
            .unwrap();
        t.insert(
            pos(4, 1),
            BettiEntry::computed(1031184, Provenance::Imported),
        )
        .unwrap();
        t.insert(pos(20, 1), BettiEntry::unknown(Provenance::Imported))
            .unwrap();
        let text = render_table(&t);
        assert!(text.contains("1031184"));
        assert_eq!(text.matches(UNKNOWN_TOKEN).count(), 2);
    }

    #[test]
    fn twist_normalization() {
        assert_eq!(normalize_twist(2, 4, 6), (2, 1));
        assert_eq!(normalize_twist(2, 4, 2), (2, 0));
        assert_eq!(normalize_twist(1, 3, -1), (2, -1));
        let t = quartic_surface();
        let up = t.retwisted(1).unwrap();
        assert_eq!(up.params().b(), 4);
        assert_eq!(up.value(pos(0, -1)), BettiValue::Known(1));
        assert_eq!(up.value(pos(2, 0)), BettiValue::Known(536));
    }

    #[test]
    fn certification() {
        let c = certify(&quartic_surface());
        assert!(c.get(pos(2, 1)).certified);
        assert!(c.get(pos(10, 1)).certified);
        // (10,2) sits next to (9,3) = 0 and (11,1) = 0
        assert!(c.get(pos(10, 2)).certified);

        let mut partial = quartic_surface();
        partial
            .insert(pos(3, 0), BettiEntry::unknown(Provenance::Imported))
            .unwrap();
        let c = certify(&partial);
        assert!(!c.get(pos(2, 1)).certified);
        assert!(!c.get(pos(3, 0)).certified);

        // monotone: resolving the unknown to zero restores certification
        partial
            .insert(pos(3, 0), BettiEntry::computed(0, Provenance::Imported))
            .unwrap();
        assert!(certify(&partial).get(pos(2, 1)).certified);

        let mut exact = partial.clone();
        exact
            .insert(pos(4, 0), BettiEntry::unknown(Provenance::Imported))
            .unwrap();
        exact
            .insert(
                pos(3, 1),
                BettiEntry::computed(1947, Provenance::ComputedExact),
            )
            .unwrap();
        assert!(certify(&exact).get(pos(3, 1)).certified);
    }

    #[test]
    fn euler() {
        let t = quartic_surface();
        assert_eq!(euler_check(&t), EulerCheck::Pass);
        let mut bad = t.clone();
        bad.insert(
            pos(5, 1),
            BettiEntry::computed(7096, Provenance::ComputedModP),
        )
        .unwrap();
        assert!(matches!(
            euler_check(&bad),
            EulerCheck::Fail { degree: 6, .. }
        ));
        let mut partial = t;
        partial
            .insert(pos(7, 1), BettiEntry::unknown(Provenance::Imported))
            .unwrap();
        assert_eq!(euler_check(&partial), EulerCheck::Inapplicable);

        let line = VeroneseParams::new(1, 1, 0).unwrap();
        let mut base = TotalBettiTable::new(line);
        base.insert(pos(0, 0), BettiEntry::computed(1, Provenance::TrivialZero))
            .unwrap();
        assert!(euler_check(&base).passed());
    }

    #[test]
    fn table_bounds() {
        let mut t = quartic_surface();
        assert!(t
            .insert(pos(13, 1), BettiEntry::computed(0, Provenance::Imported))
            .is_err());
        assert_eq!(t.value(pos(3, 7)), BettiValue::Known(0));
        assert_eq!(t.column_total(10), BettiValue::Known(175));
        let mut e = BettiEntry::unknown(Provenance::Imported);
        e.certified = true;
        t.insert(pos(1, 1), e).unwrap();
        assert!(!t.get(pos(1, 1)).certified);
        assert_eq!(t.column_total(1), BettiValue::Unknown);
    }

    #[test]
    fn multigraded_rendering() {
        let poly = MultigradedPolynomial::new(BTreeMap::from([
            (Weight::new(alloc::vec![19, 19, 18]), 1),
            (Weight::new(alloc::vec![19, 18, 19]), 1),
            (Weight::new(alloc::vec![18, 19, 19]), 1),
        ]))
        .unwrap();
        assert_eq!(
            render_multigraded(&poly),
            "t_0^19 t_1^19 t_2^18 + t_0^19 t_1^18 t_2^19 + t_0^18 t_1^19 t_2^19"
        );
        assert_eq!(poly.total_weight(), Some(56));
        let unit = MultigradedPolynomial::new(BTreeMap::from([(Weight::zero(3), 1)])).unwrap();
        assert_eq!(render_multigraded(&unit), "1");
        let mixed = MultigradedPolynomial::new(BTreeMap::from([
            (Weight::new(alloc::vec![1, 0, 2]), 2),
            (Weight::new(alloc::vec![3, 0, 0]), 0),
        ]))
        .unwrap();
        assert_eq!(mixed.to_string(), "2 t_0 t_2^2");
        assert_eq!(MultigradedPolynomial::default().to_string(), "0");
    }

    proptest::proptest! {
        #[test]
        fn tally_round_trip_and_totals(values in proptest::collection::btree_map((0u32..13, 0i32..4), 0u64..10_000, 0..40)) {
            let hash: BTreeMap<KoszulPosition, u64> =
                values.into_iter().map(|((p, q), v)| (KoszulPosition::new(p, q), v)).collect();
            let tally = make_betti_tally(&hash);
            let nonzero: BTreeMap<_, _> = hash.iter().filter(|(_, v)| **v != 0).map(|(k, v)| (*k, *v)).collect();
            proptest::prop_assert_eq!(tally.to_hash(), nonzero.clone());
            for (p, total) in tally.totals() {
                let col: u64 = nonzero.iter().filter(|(k, _)| k.p == p).map(|(_, v)| v).sum();
                proptest::prop_assert_eq!(total, col);
            }
        }
    }
}
