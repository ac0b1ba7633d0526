//! Partitions, weights, monomials, dominance order, Kostka numbers and the
//! Weyl dimension formula.
//!
//! Weights double as exponent vectors of monomials. The global monomial order
//! is descending lexicographic on exponent vectors; every enumeration in this
//! crate follows it.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::params::VeroneseParams;
use crate::{Error, Result};

/// An exponent vector / torus weight `a = (a_0, .., a_n)`.
///
/// The derived `Ord` is ascending lexicographic; canonical output order in
/// this crate is the reverse of it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<u32>);

impl Weight {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn zero(width: usize) -> Self {
        Self(vec![0; width])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&a| u64::from(a)).sum()
    }

    /// True if the entries are weakly decreasing.
    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// The dominant weight in the symmetric-group orbit of `self`.
    pub fn sorted(&self) -> Partition {
        let mut parts = self.0.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Weight) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Number of distinct permutations of the entries.
    pub fn orbit_size(&self) -> u64 {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for &a in &self.0 {
            *counts.entry(a).or_default() += 1;
        }
        let mut result = 1u64;
        let mut placed = 0u64;
        for &c in counts.values() {
            for i in 1..=c {
                placed += 1;
                result = result * placed / i;
            }
        }
        result
    }

    /// All distinct permutations of the entries, in descending lex order.
    pub fn permutations(&self) -> Vec<Weight> {
        let mut current = self.sorted().0;
        let mut out = vec![Weight(current.clone())];
        // descending lex successor = prev_permutation on a descending start
        while prev_permutation(&mut current) {
            out.push(Weight(current.clone()));
        }
        out
    }
}

fn prev_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] <= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] >= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_list(s, '(', ')').map(Weight)
    }
}

/// A partition with exactly `width` parts, trailing zeros kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotAPartition(parts));
        }
        Ok(Self(parts))
    }

    /// Pads with zeros to `width` parts; fails if there are already more
    /// nonzero parts than that.
    pub fn with_width(parts: &[u32], width: usize) -> Result<Self> {
        let nonzero = parts.iter().take_while(|&&x| x > 0).count();
        if nonzero > width || parts[nonzero..].iter().any(|&x| x > 0) {
            return Err(Error::NotAPartition(parts.to_vec()));
        }
        let mut v: Vec<u32> = parts[..nonzero].to_vec();
        v.resize(width, 0);
        Self::new(v)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&a| u64::from(a)).sum()
    }

    pub fn as_weight(&self) -> Weight {
        Weight(self.0.clone())
    }

    /// Prints in the `{9, 2, 1}` style used by decomposition listings.
    pub fn braced(&self) -> Braced<'_> {
        Braced(self)
    }
}

impl From<Partition> for Weight {
    fn from(p: Partition) -> Weight {
        Weight(p.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_list(s, '[', ']')?)
    }
}

pub struct Braced<'a>(&'a Partition);

impl fmt::Display for Braced<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0 .0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

fn parse_list(s: &str, open: char, close: char) -> Result<Vec<u32>> {
    let bad =
        || Error::InvalidParameters(alloc::format!("cannot parse {s:?} as {open}..{close} list"));
    let inner = s
        .trim()
        .strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(bad)?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
        .collect()
}

/// `C(n, k)` as an arbitrary-precision integer (zero when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` if it fits in a `u64`.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial(n, k).to_u64()
}

/// All exponent vectors of length `num_vars` and the given total degree, in
/// descending lexicographic order.
pub fn monomials_of_degree(num_vars: usize, degree: u32) -> Vec<Weight> {
    assert!(num_vars >= 1, "monomials need at least one variable");
    let mut out = Vec::new();
    let mut current = vec![0u32; num_vars];
    fill_monomials(&mut current, 0, degree, &mut out);
    out
}

fn fill_monomials(current: &mut [u32], slot: usize, remaining: u32, out: &mut Vec<Weight>) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        out.push(Weight(current.to_vec()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[slot] = a;
        fill_monomials(current, slot + 1, remaining - a, out);
    }
}

/// Partitions of `total` into at most `width` parts (padded to `width`), in
/// descending lexicographic order. These are the dominant weights of that
/// total.
pub fn dominant_weights(width: usize, total: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = vec![0u32; width];
    fill_partitions(&mut current, 0, total, total, &mut out);
    out
}

fn fill_partitions(
    current: &mut [u32],
    slot: usize,
    remaining: u32,
    cap: u32,
    out: &mut Vec<Partition>,
) {
    if slot == current.len() {
        if remaining == 0 {
            out.push(Partition(current.to_vec()));
        }
        return;
    }
    let slots_left = (current.len() - slot) as u32;
    // the remaining parts can hold at most slots_left * cap
    if u64::from(remaining) > u64::from(slots_left) * u64::from(cap) {
        return;
    }
    let lo = remaining.div_ceil(slots_left);
    for a in (lo..=cap.min(remaining)).rev() {
        current[slot] = a;
        fill_partitions(current, slot + 1, remaining - a, a, out);
    }
}

/// Dimension of the Schur functor `S_lambda(k^num_vars)` by the Weyl
/// dimension formula `prod_{i<j} (l_i - l_j + j - i) / (j - i)`.
pub fn schur_dimension(lambda: &Partition, num_vars: usize) -> Result<BigUint> {
    if lambda.width() != num_vars {
        return Err(Error::WidthMismatch {
            expected: num_vars,
            found: lambda.width(),
        });
    }
    let parts = lambda.parts();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..num_vars {
        for j in i + 1..num_vars {
            num *= u64::from(parts[i] - parts[j]) + (j - i) as u64;
            den *= (j - i) as u64;
        }
    }
    Ok(num / den)
}

/// `mu <= lambda` in dominance order, after sorting `mu` descending.
pub fn dominance_leq(mu: &[u32], lambda: &Partition) -> Result<bool> {
    if mu.len() != lambda.width() {
        return Err(Error::WidthMismatch {
            expected: lambda.width(),
            found: mu.len(),
        });
    }
    let mut sorted = mu.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let (mut s_mu, mut s_la) = (0u64, 0u64);
    for (&m, &l) in sorted.iter().zip(lambda.parts()) {
        s_mu += u64::from(m);
        s_la += u64::from(l);
        if s_mu > s_la {
            return Ok(false);
        }
    }
    if s_mu != s_la {
        return Err(Error::TotalMismatch {
            left: s_mu,
            right: s_la,
        });
    }
    Ok(true)
}

/// Memoized Kostka numbers.
///
/// `K(lambda, mu)` counts semistandard tableaux of shape `lambda` and content
/// `mu`. The recursion removes the cells holding the largest label, which
/// form a horizontal strip. The memo is keyed by (remaining shape, remaining
/// content), so one table can serve many different `mu`. It is not shared
/// between threads; give each worker its own.
#[derive(Debug, Default, Clone)]
pub struct KostkaTable {
    memo: BTreeMap<(Vec<u32>, Vec<u32>), u64>,
}

impl KostkaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn kostka(&mut self, lambda: &Partition, mu: &Weight) -> Result<u64> {
        if lambda.width() != mu.width() {
            return Err(Error::WidthMismatch {
                expected: lambda.width(),
                found: mu.width(),
            });
        }
        if lambda.size() != mu.total() {
            return Err(Error::TotalMismatch {
                left: lambda.size(),
                right: mu.total(),
            });
        }
        // content order does not matter; drop zeros and put the biggest label
        // counts first so the peeled strips stay short
        let mut content: Vec<u32> = mu.exponents().iter().copied().filter(|&c| c > 0).collect();
        content.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<u32> = lambda.parts().iter().copied().filter(|&c| c > 0).collect();
        self.count(shape, content)
    }

    fn count(&mut self, shape: Vec<u32>, content: Vec<u32>) -> Result<u64> {
        let Some(&last) = content.last() else {
            return Ok(u64::from(shape.is_empty()));
        };
        // column strictness: at most `content.len()` rows
        if shape.len() > content.len() {
            return Ok(0);
        }
        let key = (shape, content);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let (shape, content) = key;
        let rest = content[..content.len() - 1].to_vec();
        let mut total = 0u64;
        let mut inner = shape.clone();
        let mut strips = Vec::new();
        horizontal_strips(&shape, 0, last, &mut inner, rest.len(), &mut strips);
        for nu in strips {
            let v = self.count(nu, rest.clone())?;
            total = total.checked_add(v).ok_or(Error::Overflow("kostka"))?;
        }
        self.memo.insert((shape, content), total);
        Ok(total)
    }
}

/// Enumerates shapes `nu` with `lambda / nu` a horizontal strip of `size`
/// cells and at most `max_rows` nonzero rows; results have trailing zeros
/// trimmed.
fn horizontal_strips(
    lambda: &[u32],
    row: usize,
    size: u32,
    current: &mut Vec<u32>,
    max_rows: usize,
    out: &mut Vec<Vec<u32>>,
) {
    if row == lambda.len() {
        if size == 0 {
            let mut nu = current.clone();
            while nu.last() == Some(&0) {
                nu.pop();
            }
            if nu.len() <= max_rows {
                out.push(nu);
            }
        }
        return;
    }
    let floor = lambda.get(row + 1).copied().unwrap_or(0);
    let top = lambda[row];
    // rows at index >= max_rows must be emptied completely
    let lo_keep = if row >= max_rows { 0 } else { floor };
    let hi_keep = if row >= max_rows { 0 } else { top };
    if row >= max_rows && floor > 0 {
        return;
    }
    for keep in (lo_keep..=hi_keep).rev() {
        let removed = top - keep;
        if removed > size {
            continue;
        }
        current[row] = keep;
        horizontal_strips(lambda, row + 1, size - removed, current, max_rows, out);
    }
    current[row] = top;
}

/// `kostka` with a throwaway memo table.
pub fn kostka(lambda: &Partition, mu: &Weight) -> Result<u64> {
    KostkaTable::new().kostka(lambda, mu)
}

/// `dim S_{dk+b}`: the value of the Hilbert function of `S(b;d)` at `k`.
pub fn hilbert_function(params: &VeroneseParams, k: i64) -> BigUint {
    let degree = params.coefficient_degree(0) + i64::from(params.d()) * k;
    monomial_count(params.width(), degree)
}

/// Number of monomials of the given degree in `width` variables; zero for
/// negative degrees.
pub fn monomial_count(width: usize, degree: i64) -> BigUint {
    if degree < 0 {
        return BigUint::zero();
    }
    binomial(degree as u64 + width as u64 - 1, width as u64 - 1)
}

/// Compares two weights of the same total by descending graded
/// lexicographic order (which for a fixed total is descending lex).
pub fn graded_lex_desc(a: &Weight, b: &Weight) -> Ordering {
    b.total().cmp(&a.total()).then_with(|| b.cmp(a))
}
