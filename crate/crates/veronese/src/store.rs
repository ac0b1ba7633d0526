//! Line-based text format for total, Schur and multigraded tables.
//!
//! ```text
//! version 1
//! n 2
//! d 4
//! b 0
//! char 32003
//! tool veronese 0.1.0
//! total:
//! 0 0 1 computed-modp certified
//! schur:
//! 2 1 [9,2,1] 1
//! multi:
//! 12 2 (19,19,18) 1
//! ```
//!
//! `timestamp` is an optional header key. Blank lines and lines starting
//! with `#` are ignored. Export sorts positions by `(p, q)`, partitions and
//! weights descending, so equal datasets produce equal bytes.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::{Read, Write};
use std::str::FromStr;

use veronese_core::combinatorics::{Partition, Weight};
use veronese_core::koszul::{EngineOutput, Field};
use veronese_core::schur::{SchurEntry, SchurTable};
use veronese_core::tables::{
    certify, BettiEntry, BettiValue, MultigradedPolynomial, Provenance, TotalBettiTable,
};
use veronese_core::{KoszulPosition, VeroneseParams};

use crate::checks;

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL: &str = concat!("veronese ", env!("CARGO_PKG_VERSION"));

const CERTIFIED: &str = "certified";
const UNCERTIFIED: &str = "uncertified";
const MIXED: &str = "mixed";

/// Multigraded Betti polynomials keyed by position; zero positions omitted.
pub type MultiTable = BTreeMap<KoszulPosition, MultigradedPolynomial>;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("unsupported format version {found} (this tool reads version {FORMAT_VERSION})")]
    Version { found: u32 },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("{location}: {message}")]
    Invariant { location: String, message: String },

    #[error("parameter mismatch: {left} vs {right}")]
    ParamMismatch {
        left: VeroneseParams,
        right: VeroneseParams,
    },

    #[error("conflicting {table} values at {position}: {left} vs {right}")]
    Conflict {
        table: &'static str,
        position: KoszulPosition,
        left: String,
        right: String,
    },
}

impl StoreError {
    fn syntax(line: usize, message: impl Into<String>) -> Self {
        StoreError::Syntax {
            line,
            message: message.into(),
        }
    }

    fn at_line(line: usize, message: impl Into<String>) -> Self {
        StoreError::Invariant {
            location: format!("line {line}"),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub version: u32,
    pub params: VeroneseParams,
    /// Field characteristic of the computation; `None` after merging data
    /// from different fields.
    pub characteristic: Option<u64>,
    pub tool: String,
    pub timestamp: Option<String>,
}

impl Header {
    pub fn new(params: VeroneseParams, characteristic: Option<u64>) -> Self {
        Self {
            version: FORMAT_VERSION,
            params,
            characteristic,
            tool: TOOL.to_string(),
            timestamp: None,
        }
    }
}

/// One `(n, d, b)` worth of tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    header: Header,
    total: TotalBettiTable,
    schur: Option<SchurTable>,
    multi: Option<MultiTable>,
}

impl Dataset {
    /// Fails if any table was built for other parameters than the header.
    pub fn new(
        header: Header,
        total: TotalBettiTable,
        schur: Option<SchurTable>,
        multi: Option<MultiTable>,
    ) -> Result<Self, StoreError> {
        let params = header.params;
        let mismatch = |other: VeroneseParams| StoreError::ParamMismatch {
            left: params,
            right: other,
        };
        if *total.params() != params {
            return Err(mismatch(*total.params()));
        }
        if let Some(s) = &schur {
            if *s.params() != params {
                return Err(mismatch(*s.params()));
            }
        }
        if let Some(m) = &multi {
            for (pos, poly) in m {
                let expected = params.total_weight(*pos);
                if let Some(w) = poly
                    .terms()
                    .keys()
                    .find(|w| w.width() != params.width() || w.total() as i64 != expected)
                {
                    return Err(StoreError::Invariant {
                        location: pos.to_string(),
                        message: format!(
                            "weight {w} does not have {} parts summing to {expected}",
                            params.width()
                        ),
                    });
                }
            }
        }
        Ok(Self {
            header,
            total,
            schur,
            multi,
        })
    }

    /// Packages engine output, optionally with its Schur decomposition and
    /// multigraded polynomials.
    pub fn from_engine(
        output: &EngineOutput,
        field: Field,
        with_schur: bool,
        with_multi: bool,
    ) -> Result<Self, veronese_core::Error> {
        let params = *output.table.params();
        let characteristic = match field {
            Field::Rational => 0,
            Field::Prime(p) => u64::from(p),
        };
        let schur = if with_schur {
            Some(SchurTable::from_multigraded(params, &output.multigraded)?)
        } else {
            None
        };
        let multi = if with_multi {
            let mut m = MultiTable::new();
            for (pos, weights) in &output.multigraded {
                m.insert(*pos, MultigradedPolynomial::new(weights.clone())?);
            }
            Some(m)
        } else {
            None
        };
        Ok(Self {
            header: Header::new(params, Some(characteristic)),
            total: certify(&output.table),
            schur,
            multi,
        })
    }

    /// A dataset holding `K_{p,q}` only. Every other position in rows
    /// `min_q ..= min_q + n + 1` is marked unknown so that certification
    /// and merging treat it as missing rather than zero.
    pub fn single_position(
        params: VeroneseParams,
        field: Field,
        pos: KoszulPosition,
        weights: &BTreeMap<Weight, u64>,
        with_schur: bool,
        with_multi: bool,
    ) -> Result<Self, veronese_core::Error> {
        let provenance = match field {
            Field::Rational => Provenance::ComputedExact,
            Field::Prime(_) => Provenance::ComputedModP,
        };
        let mut total = TotalBettiTable::new(params);
        let last_q = params.min_q() + params.n() as i32 + 1;
        for q in params.min_q()..=last_q {
            for p in 0..=params.max_p() {
                total.insert(KoszulPosition::new(p, q), BettiEntry::unknown(provenance))?;
            }
        }
        if pos.p <= params.max_p() {
            total.insert(
                pos,
                BettiEntry::computed(weights.values().sum(), provenance),
            )?;
        }
        let mut schur = with_schur.then(|| SchurTable::new(params));
        if let Some(s) = schur.as_mut() {
            s.insert(
                pos,
                veronese_core::schur::decompose_weights(weights, params.width())?,
            )?;
        }
        let mut multi = with_multi.then(MultiTable::new);
        if let Some(m) = multi.as_mut() {
            if !weights.is_empty() {
                m.insert(pos, MultigradedPolynomial::new(weights.clone())?);
            }
        }
        let characteristic = match field {
            Field::Rational => 0,
            Field::Prime(p) => u64::from(p),
        };
        Ok(Self {
            header: Header::new(params, Some(characteristic)),
            total: certify(&total),
            schur,
            multi,
        })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn header_mut(&mut self) -> &mut Header {
        &mut self.header
    }

    pub fn params(&self) -> &VeroneseParams {
        &self.header.params
    }

    pub fn total(&self) -> &TotalBettiTable {
        &self.total
    }

    pub fn schur(&self) -> Option<&SchurTable> {
        self.schur.as_ref()
    }

    pub fn multi(&self) -> Option<&MultiTable> {
        self.multi.as_ref()
    }

    pub fn set_total(&mut self, total: TotalBettiTable) -> Result<(), StoreError> {
        if total.params() != self.params() {
            return Err(StoreError::ParamMismatch {
                left: *self.params(),
                right: *total.params(),
            });
        }
        self.total = total;
        Ok(())
    }

    /// Moves every table from `S(b;d)` to `S(b + shift*d; d)`: an entry at
    /// `(p, q)` lands on `(p, q - shift)`.
    pub fn retwisted(&self, shift: i32) -> Result<Self, StoreError> {
        if shift == 0 {
            return Ok(self.clone());
        }
        let core = |e: veronese_core::Error| StoreError::Invariant {
            location: "retwist".into(),
            message: e.to_string(),
        };
        let total = self.total.retwisted(shift).map_err(core)?;
        let params = *total.params();
        let moved = |pos: &KoszulPosition| KoszulPosition::new(pos.p, pos.q - shift);
        let schur = match &self.schur {
            Some(s) => {
                let mut out = SchurTable::new(params);
                for (pos, entries) in s.iter() {
                    out.insert(moved(pos), entries.clone()).map_err(core)?;
                }
                Some(out)
            }
            None => None,
        };
        let multi = self.multi.as_ref().map(|m| {
            m.iter()
                .map(|(pos, poly)| (moved(pos), poly.clone()))
                .collect()
        });
        let mut header = self.header.clone();
        header.params = params;
        Dataset::new(header, total, schur, multi)
    }
}

/// Canonical text of `dataset`.
pub fn to_text(dataset: &Dataset) -> String {
    let mut out = String::new();
    let h = &dataset.header;
    let p = &h.params;
    let _ = writeln!(out, "version {}", h.version);
    let _ = writeln!(out, "n {}", p.n());
    let _ = writeln!(out, "d {}", p.d());
    let _ = writeln!(out, "b {}", p.b());
    match h.characteristic {
        Some(c) => {
            let _ = writeln!(out, "char {c}");
        }
        None => {
            let _ = writeln!(out, "char {MIXED}");
        }
    }
    let _ = writeln!(out, "tool {}", h.tool);
    if let Some(ts) = &h.timestamp {
        let _ = writeln!(out, "timestamp {ts}");
    }
    out.push_str("total:\n");
    for (pos, e) in dataset.total.entries() {
        let flag = if e.certified { CERTIFIED } else { UNCERTIFIED };
        let _ = writeln!(
            out,
            "{} {} {} {} {flag}",
            pos.p, pos.q, e.value, e.provenance
        );
    }
    if let Some(schur) = &dataset.schur {
        out.push_str("schur:\n");
        for (pos, entries) in schur.iter() {
            for e in entries {
                let _ = writeln!(out, "{} {} {} {}", pos.p, pos.q, e.lambda, e.multiplicity);
            }
        }
    }
    if let Some(multi) = &dataset.multi {
        out.push_str("multi:\n");
        for (pos, poly) in multi {
            for (w, c) in poly.terms().iter().rev() {
                let _ = writeln!(out, "{} {} {w} {c}", pos.p, pos.q);
            }
        }
    }
    out
}

pub fn export<W: Write>(dataset: &Dataset, mut destination: W) -> Result<(), StoreError> {
    destination.write_all(to_text(dataset).as_bytes())?;
    destination.flush()?;
    Ok(())
}

/// Parses and runs every check that needs no recomputation.
pub fn import<R: Read>(mut source: R) -> Result<Dataset, StoreError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let dataset = parse(&text)?;
    checks::require_consistent(&dataset)?;
    Ok(dataset)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Total,
    Schur,
    Multi,
}

#[derive(Default)]
struct HeaderFields {
    version: Option<u32>,
    n: Option<u32>,
    d: Option<u32>,
    b: Option<i32>,
    characteristic: Option<Option<u64>>,
    tool: Option<String>,
    timestamp: Option<String>,
}

impl HeaderFields {
    fn finish(self, line: usize) -> Result<Header, StoreError> {
        let missing = |key: &str| StoreError::syntax(line, format!("header key `{key}` missing"));
        let version = self.version.ok_or_else(|| missing("version"))?;
        let n = self.n.ok_or_else(|| missing("n"))?;
        let d = self.d.ok_or_else(|| missing("d"))?;
        let b = self.b.ok_or_else(|| missing("b"))?;
        let characteristic = self.characteristic.ok_or_else(|| missing("char"))?;
        let tool = self.tool.ok_or_else(|| missing("tool"))?;
        let params =
            VeroneseParams::new(n, d, b).map_err(|e| StoreError::at_line(line, e.to_string()))?;
        if let Some(c) = characteristic {
            Field::from_characteristic(c).map_err(|e| StoreError::at_line(line, e.to_string()))?;
        }
        Ok(Header {
            version,
            params,
            characteristic,
            tool,
            timestamp: self.timestamp,
        })
    }
}

fn number<T: FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<T, StoreError> {
    let token = token.ok_or_else(|| StoreError::syntax(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| StoreError::syntax(line, format!("bad {what} {token:?}")))
}

/// Splits `"[9, 2, 1] 1"` into `"[9, 2, 1]"` and `"1"`.
fn split_group(rest: &str, close: char, line: usize) -> Result<(&str, &str), StoreError> {
    let rest = rest.trim_start();
    let end = rest
        .find(close)
        .ok_or_else(|| StoreError::syntax(line, format!("missing `{close}`")))?;
    Ok((&rest[..=end], &rest[end + 1..]))
}

fn single<'a>(tail: &'a str, line: usize, what: &str) -> Result<&'a str, StoreError> {
    let mut it = tail.split_whitespace();
    let token = it
        .next()
        .ok_or_else(|| StoreError::syntax(line, format!("missing {what}")))?;
    if let Some(extra) = it.next() {
        return Err(StoreError::syntax(line, format!("unexpected {extra:?}")));
    }
    Ok(token)
}

/// Parses without the cross-table checks; [`import`] adds those.
///
/// Key ranges, widths and total weights are still enforced here, since the
/// table types cannot hold entries that violate them.
pub fn parse(text: &str) -> Result<Dataset, StoreError> {
    let mut fields = HeaderFields::default();
    let mut header: Option<Header> = None;
    let mut section = Section::Header;
    let mut seen: Vec<Section> = Vec::new();
    let mut total: Option<TotalBettiTable> = None;
    let mut schur_lines: BTreeMap<KoszulPosition, Vec<(usize, SchurEntry)>> = BTreeMap::new();
    let mut multi: BTreeMap<KoszulPosition, BTreeMap<Weight, u64>> = BTreeMap::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(name) = content.strip_suffix(':') {
            let next = match name {
                "total" => Section::Total,
                "schur" => Section::Schur,
                "multi" => Section::Multi,
                other => {
                    return Err(StoreError::syntax(
                        line,
                        format!("unknown section {other:?}"),
                    ))
                }
            };
            if seen.contains(&next) {
                return Err(StoreError::syntax(
                    line,
                    format!("section `{name}:` repeated"),
                ));
            }
            if header.is_none() {
                let h = std::mem::take(&mut fields).finish(line)?;
                total = Some(TotalBettiTable::new(h.params));
                header = Some(h);
            }
            seen.push(next);
            section = next;
            continue;
        }
        match section {
            Section::Header => {
                let (key, value) = content
                    .split_once(char::is_whitespace)
                    .unwrap_or((content, ""));
                let value = value.trim();
                let dup = |present: bool| {
                    if present {
                        Err(StoreError::syntax(
                            line,
                            format!("header key `{key}` repeated"),
                        ))
                    } else {
                        Ok(())
                    }
                };
                match key {
                    "version" => {
                        dup(fields.version.is_some())?;
                        let v: u32 = number(Some(value), line, "version")?;
                        if v != FORMAT_VERSION {
                            return Err(StoreError::Version { found: v });
                        }
                        fields.version = Some(v);
                    }
                    "n" => {
                        dup(fields.n.is_some())?;
                        fields.n = Some(number(Some(value), line, "n")?);
                    }
                    "d" => {
                        dup(fields.d.is_some())?;
                        fields.d = Some(number(Some(value), line, "d")?);
                    }
                    "b" => {
                        dup(fields.b.is_some())?;
                        fields.b = Some(number(Some(value), line, "b")?);
                    }
                    "char" => {
                        dup(fields.characteristic.is_some())?;
                        fields.characteristic = Some(if value == MIXED {
                            None
                        } else {
                            Some(number(Some(value), line, "char")?)
                        });
                    }
                    "tool" => {
                        dup(fields.tool.is_some())?;
                        fields.tool = Some(value.to_string());
                    }
                    "timestamp" => {
                        dup(fields.timestamp.is_some())?;
                        fields.timestamp = Some(value.to_string());
                    }
                    other => {
                        return Err(StoreError::syntax(
                            line,
                            format!("unknown header key {other:?}"),
                        ))
                    }
                }
            }
            Section::Total => {
                let table = total.as_mut().expect("header parsed");
                let mut it = content.split_whitespace();
                let p: u32 = number(it.next(), line, "p")?;
                let q: i32 = number(it.next(), line, "q")?;
                let value: BettiValue = number(it.next(), line, "value")?;
                let provenance: Provenance = number(it.next(), line, "provenance")?;
                let certified = match it.next() {
                    Some(CERTIFIED) => true,
                    Some(UNCERTIFIED) => false,
                    other => {
                        return Err(StoreError::syntax(
                            line,
                            format!("expected `{CERTIFIED}` or `{UNCERTIFIED}`, got {other:?}"),
                        ))
                    }
                };
                if let Some(extra) = it.next() {
                    return Err(StoreError::syntax(line, format!("unexpected {extra:?}")));
                }
                let pos = KoszulPosition::new(p, q);
                if table.stored(pos).is_some() {
                    return Err(StoreError::at_line(
                        line,
                        format!("position {pos} repeated"),
                    ));
                }
                if certified && value == BettiValue::Unknown {
                    return Err(StoreError::at_line(
                        line,
                        format!("unknown entry at {pos} marked certified"),
                    ));
                }
                table
                    .insert(
                        pos,
                        BettiEntry {
                            value,
                            provenance,
                            certified,
                        },
                    )
                    .map_err(|e| StoreError::at_line(line, e.to_string()))?;
            }
            Section::Schur => {
                let params = header.as_ref().expect("header parsed").params;
                let mut it = content.splitn(3, char::is_whitespace);
                let p: u32 = number(it.next(), line, "p")?;
                let q: i32 = number(it.next(), line, "q")?;
                let (group, tail) = split_group(it.next().unwrap_or(""), ']', line)?;
                let multiplicity: u64 = number(
                    Some(single(tail, line, "multiplicity")?),
                    line,
                    "multiplicity",
                )?;
                let pos = KoszulPosition::new(p, q);
                let parsed: Partition = group
                    .parse()
                    .map_err(|e: veronese_core::Error| StoreError::at_line(line, e.to_string()))?;
                let lambda =
                    Partition::with_width(parsed.parts(), params.width()).map_err(|_| {
                        StoreError::at_line(
                            line,
                            format!("partition {parsed} has more than {} parts", params.width()),
                        )
                    })?;
                let expected = params.total_weight(pos);
                if lambda.size() as i64 != expected {
                    return Err(StoreError::at_line(
                        line,
                        format!(
                            "partition {lambda} at {pos} has size {}, expected {expected}",
                            lambda.size()
                        ),
                    ));
                }
                if multiplicity == 0 {
                    return Err(StoreError::at_line(
                        line,
                        format!("partition {lambda} at {pos} has multiplicity 0"),
                    ));
                }
                if p > params.max_p() {
                    return Err(StoreError::at_line(
                        line,
                        format!("{pos} lies beyond p = {}", params.max_p()),
                    ));
                }
                let bucket = schur_lines.entry(pos).or_default();
                if let Some((first, _)) = bucket.iter().find(|(_, e)| e.lambda == lambda) {
                    return Err(StoreError::at_line(
                        line,
                        format!("partition {lambda} at {pos} already given on line {first}"),
                    ));
                }
                bucket.push((
                    line,
                    SchurEntry {
                        lambda,
                        multiplicity,
                    },
                ));
            }
            Section::Multi => {
                let params = header.as_ref().expect("header parsed").params;
                let mut it = content.splitn(3, char::is_whitespace);
                let p: u32 = number(it.next(), line, "p")?;
                let q: i32 = number(it.next(), line, "q")?;
                let (group, tail) = split_group(it.next().unwrap_or(""), ')', line)?;
                let coefficient: u64 = number(
                    Some(single(tail, line, "coefficient")?),
                    line,
                    "coefficient",
                )?;
                let pos = KoszulPosition::new(p, q);
                let weight: Weight = group
                    .parse()
                    .map_err(|e: veronese_core::Error| StoreError::at_line(line, e.to_string()))?;
                let expected = params.total_weight(pos);
                if weight.width() != params.width() {
                    return Err(StoreError::at_line(
                        line,
                        format!("weight {weight} needs {} parts", params.width()),
                    ));
                }
                if weight.total() as i64 != expected {
                    return Err(StoreError::at_line(
                        line,
                        format!(
                            "weight {weight} at {pos} has total {}, expected {expected}",
                            weight.total()
                        ),
                    ));
                }
                if coefficient == 0 {
                    return Err(StoreError::at_line(
                        line,
                        format!("weight {weight} at {pos} has coefficient 0"),
                    ));
                }
                if p > params.max_p() {
                    return Err(StoreError::at_line(
                        line,
                        format!("{pos} lies beyond p = {}", params.max_p()),
                    ));
                }
                if multi
                    .entry(pos)
                    .or_default()
                    .insert(weight.clone(), coefficient)
                    .is_some()
                {
                    return Err(StoreError::at_line(
                        line,
                        format!("weight {weight} at {pos} repeated"),
                    ));
                }
            }
        }
    }

    let header = match header {
        Some(h) => h,
        None => {
            fields.finish(last_line)?;
            return Err(StoreError::syntax(last_line, "section `total:` missing"));
        }
    };
    if !seen.contains(&Section::Total) {
        return Err(StoreError::syntax(last_line, "section `total:` missing"));
    }
    let params = header.params;
    let schur = if seen.contains(&Section::Schur) {
        let mut table = SchurTable::new(params);
        for (pos, lines) in schur_lines {
            let first = lines[0].0;
            let entries = lines.into_iter().map(|(_, e)| e).collect();
            table
                .insert(pos, entries)
                .map_err(|e| StoreError::at_line(first, e.to_string()))?;
        }
        Some(table)
    } else {
        None
    };
    let multi = if seen.contains(&Section::Multi) {
        let mut table = MultiTable::new();
        for (pos, terms) in multi {
            let poly = MultigradedPolynomial::new(terms).map_err(|e| StoreError::Invariant {
                location: pos.to_string(),
                message: e.to_string(),
            })?;
            table.insert(pos, poly);
        }
        Some(table)
    } else {
        None
    };
    Dataset::new(header, total.expect("header parsed"), schur, multi)
}

struct Described<'a>(&'a BettiEntry);

impl fmt::Display for Described<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.0.value, self.0.provenance)
    }
}

/// Combines two datasets for the same `(n, d, b)`.
///
/// Known values beat unknown ones and keep their provenance; two known
/// values must agree. Certification flags are recomputed with [`certify`]
/// on the merged table.
pub fn merge(a: &Dataset, b: &Dataset) -> Result<Dataset, StoreError> {
    let params = *a.params();
    if *b.params() != params {
        return Err(StoreError::ParamMismatch {
            left: params,
            right: *b.params(),
        });
    }
    let mut total = TotalBettiTable::new(params);
    let positions: std::collections::BTreeSet<KoszulPosition> = a
        .total
        .entries()
        .chain(b.total.entries())
        .map(|(pos, _)| *pos)
        .collect();
    let core = |e: veronese_core::Error| StoreError::Invariant {
        location: "merge".into(),
        message: e.to_string(),
    };
    for pos in positions {
        let merged = match (a.total.stored(pos), b.total.stored(pos)) {
            (Some(x), Some(y)) => merge_entry(pos, x, y)?,
            (Some(x), None) | (None, Some(x)) => *x,
            (None, None) => unreachable!("position came from one of the tables"),
        };
        total.insert(pos, merged).map_err(core)?;
    }
    let total = certify(&total);

    let schur = match (&a.schur, &b.schur) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => {
            let mut out = x.clone();
            for (pos, entries) in y.iter() {
                let existing = x.get(*pos);
                if existing.is_empty() {
                    out.insert(*pos, entries.clone()).map_err(core)?;
                } else if existing != entries.as_slice() {
                    return Err(StoreError::Conflict {
                        table: "schur",
                        position: *pos,
                        left: veronese_core::schur::render_entries(existing),
                        right: veronese_core::schur::render_entries(entries),
                    });
                }
            }
            Some(out)
        }
    };
    let multi = match (&a.multi, &b.multi) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => {
            let mut out = x.clone();
            for (pos, poly) in y {
                match x.get(pos) {
                    None => {
                        out.insert(*pos, poly.clone());
                    }
                    Some(existing) if existing == poly => {}
                    Some(existing) => {
                        return Err(StoreError::Conflict {
                            table: "multi",
                            position: *pos,
                            left: existing.to_string(),
                            right: poly.to_string(),
                        })
                    }
                }
            }
            Some(out)
        }
    };

    let characteristic = if a.header.characteristic == b.header.characteristic {
        a.header.characteristic
    } else {
        None
    };
    let mut header = Header::new(params, characteristic);
    header.timestamp = a.header.timestamp.clone().max(b.header.timestamp.clone());
    Dataset::new(header, total, schur, multi)
}

fn merge_entry(
    pos: KoszulPosition,
    x: &BettiEntry,
    y: &BettiEntry,
) -> Result<BettiEntry, StoreError> {
    match (x.value, y.value) {
        (BettiValue::Known(u), BettiValue::Known(v)) if u != v => Err(StoreError::Conflict {
            table: "total",
            position: pos,
            left: Described(x).to_string(),
            right: Described(y).to_string(),
        }),
        // equal values from two sources keep the stronger provenance, so
        // the result does not depend on argument order
        (BettiValue::Known(_), BettiValue::Known(_))
        | (BettiValue::Unknown, BettiValue::Unknown) => {
            Ok(if x.provenance <= y.provenance { *x } else { *y })
        }
        (BettiValue::Known(_), BettiValue::Unknown) => Ok(*x),
        (BettiValue::Unknown, BettiValue::Known(_)) => Ok(*y),
    }
}
