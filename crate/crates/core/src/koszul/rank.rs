//! Exact rank of sparse `+-1` matrices over `Q` or `F_p`.
//!
//! Both fields share a fill-free first phase: a row or column with a single
//! live entry is a pivot that can be eliminated without creating new
//! nonzeros, and since every coefficient is a unit this is valid over any
//! field (and over `Z`). The leftover core is reduced densely: modular
//! elimination with lazy `u64` reduction for primes, fraction-free Bareiss
//! for the rationals.

use core::cmp::Reverse;

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// The coefficient field of a rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// Characteristic zero, exact rationals.
    Rational,
    /// `F_p` for a prime `p < 2^31`.
    Prime(u32),
}

impl Field {
    pub const DEFAULT_PRIME: u32 = 32003;

    pub fn from_characteristic(c: u64) -> Result<Self> {
        if c == 0 {
            return Ok(Field::Rational);
        }
        if c >= 1 << 31 || !is_prime(c) {
            return Err(Error::BadCharacteristic(c));
        }
        Ok(Field::Prime(c as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => u64::from(*p),
        }
    }
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(Self::DEFAULT_PRIME)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// A sparse matrix whose nonzero coefficients are all `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseDifferential {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, coefficient)`, sorted by column then row.
    pub entries: Vec<(u32, u32, i8)>,
}

impl SparseDifferential {
    pub fn new(rows: usize, cols: usize, mut entries: Vec<(u32, u32, i8)>) -> Self {
        debug_assert!(entries.iter().all(|&(_, _, c)| c == 1 || c == -1));
        entries.sort_unstable_by_key(|&(r, c, _)| (c, r));
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero entries of the integer product `self * other` (`self`
    /// applied after `other`).
    pub fn compose(&self, other: &SparseDifferential) -> Vec<(u32, u32, i64)> {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut by_col: Vec<Vec<(u32, i8)>> = vec![Vec::new(); self.cols];
        for &(r, c, v) in &self.entries {
            by_col[c as usize].push((r, v));
        }
        let mut out = Vec::new();
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        let mut start = 0;
        while start < other.entries.len() {
            let col = other.entries[start].1;
            let mut end = start;
            while end < other.entries.len() && other.entries[end].1 == col {
                let (mid, _, v) = other.entries[end];
                for &(r, u) in &by_col[mid as usize] {
                    *acc.entry(r).or_insert(0) += i64::from(u) * i64::from(v);
                }
                end += 1;
            }
            out.extend(
                acc.iter()
                    .filter(|(_, &v)| v != 0)
                    .map(|(&r, &v)| (r, col, v)),
            );
            acc.clear();
            start = end;
        }
        out
    }
}

/// Rank of `m` over `field`. Deterministic.
pub fn rank_of(m: &SparseDifferential, field: Field) -> usize {
    let (peeled, core) = peel(m);
    if core.rows.is_empty() || core.cols == 0 {
        return peeled;
    }
    peeled
        + match field {
            Field::Prime(p) => sparse_rank_mod_p(core, p),
            Field::Rational => bareiss_rank(&core),
        }
}

/// What is left after singleton peeling, with compacted column indices.
struct Core {
    rows: Vec<Vec<(u32, i8)>>,
    cols: usize,
}

/// Removes row and column singletons until none are left. Returns the number
/// of pivots found and the remaining core.
fn peel(m: &SparseDifferential) -> (usize, Core) {
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols];
    let mut row_cols: Vec<Vec<(u32, i8)>> = vec![Vec::new(); m.rows];
    for &(r, c, v) in &m.entries {
        col_rows[c as usize].push(r);
        row_cols[r as usize].push((c, v));
    }
    let mut row_live = vec![true; m.rows];
    let mut col_live = vec![true; m.cols];
    let mut row_cnt: Vec<u32> = row_cols.iter().map(|r| r.len() as u32).collect();
    let mut col_cnt: Vec<u32> = col_rows.iter().map(|c| c.len() as u32).collect();

    enum Item {
        Row(u32),
        Col(u32),
    }
    let mut stack: Vec<Item> = Vec::new();
    for (c, &n) in col_cnt.iter().enumerate() {
        if n == 1 {
            stack.push(Item::Col(c as u32));
        }
    }
    for (r, &n) in row_cnt.iter().enumerate() {
        if n == 1 {
            stack.push(Item::Row(r as u32));
        }
    }

    let mut rank = 0usize;
    while let Some(item) = stack.pop() {
        match item {
            Item::Col(c) => {
                let c = c as usize;
                if !col_live[c] || col_cnt[c] != 1 {
                    continue;
                }
                let r = col_rows[c]
                    .iter()
                    .copied()
                    .find(|&r| row_live[r as usize])
                    .unwrap() as usize;
                rank += 1;
                col_live[c] = false;
                row_live[r] = false;
                for &(c2, _) in &row_cols[r] {
                    let c2 = c2 as usize;
                    if col_live[c2] {
                        col_cnt[c2] -= 1;
                        if col_cnt[c2] == 1 {
                            stack.push(Item::Col(c2 as u32));
                        }
                    }
                }
            }
            Item::Row(r) => {
                let r = r as usize;
                if !row_live[r] || row_cnt[r] != 1 {
                    continue;
                }
                let c = row_cols[r]
                    .iter()
                    .find(|&&(c, _)| col_live[c as usize])
                    .unwrap()
                    .0 as usize;
                rank += 1;
                row_live[r] = false;
                col_live[c] = false;
                for &r2 in &col_rows[c] {
                    let r2 = r2 as usize;
                    if row_live[r2] {
                        row_cnt[r2] -= 1;
                        if row_cnt[r2] == 1 {
                            stack.push(Item::Row(r2 as u32));
                        }
                    }
                }
            }
        }
    }

    let mut col_map = vec![u32::MAX; m.cols];
    let mut cols = 0usize;
    for c in 0..m.cols {
        if col_live[c] && col_cnt[c] > 0 {
            col_map[c] = cols as u32;
            cols += 1;
        }
    }
    let rows = (0..m.rows)
        .filter(|&r| row_live[r] && row_cnt[r] > 0)
        .map(|r| {
            row_cols[r]
                .iter()
                .filter(|&&(c, _)| col_live[c as usize])
                .map(|&(c, v)| (col_map[c as usize], v))
                .collect()
        })
        .collect();
    (rank, Core { rows, cols })
}

/// Markowitz-style sparse elimination over `F_p`: repeatedly pivot on a
/// column of minimal live count, using its shortest row. Once the live part
/// gets dense the remainder goes to [`dense_rank_mod_p`].
fn sparse_rank_mod_p(core: Core, p: u32) -> usize {
    let p64 = u64::from(p);
    let ncols = core.cols;
    let mut rows: Vec<Vec<(u32, u32)>> = core
        .rows
        .into_iter()
        .map(|r| {
            let mut r: Vec<(u32, u32)> = r
                .into_iter()
                .map(|(c, v)| (c, if v > 0 { 1 } else { p - 1 }))
                .collect();
            r.sort_unstable_by_key(|e| e.0);
            r
        })
        .collect();
    let mut row_live = vec![true; rows.len()];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_cnt = vec![0u32; ncols];
    let mut nnz = 0usize;
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c as usize].push(i as u32);
            col_cnt[c as usize] += 1;
        }
        nnz += r.len();
    }
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..ncols)
        .filter(|&c| col_cnt[c] > 0)
        .map(|c| Reverse((col_cnt[c], c as u32)))
        .collect();
    let mut live_rows = rows.len();
    let mut live_cols = heap.len();
    let mut rank = 0usize;
    let mut scratch: Vec<(u32, u32)> = Vec::new();

    while let Some(Reverse((cnt, c))) = heap.pop() {
        let c = c as usize;
        if col_cnt[c] != cnt || cnt == 0 {
            continue;
        }
        // switch to dense once the live part has filled in
        let area = live_rows as f64 * live_cols as f64;
        if area > 0.0 && (nnz as f64) > SPARSE_DENSITY_LIMIT * area && live_rows > 64 {
            heap.push(Reverse((cnt, c as u32)));
            break;
        }
        let candidates: Vec<u32> = {
            let list = &mut col_rows[c];
            list.retain(|&r| {
                row_live[r as usize]
                    && rows[r as usize]
                        .binary_search_by_key(&(c as u32), |e| e.0)
                        .is_ok()
            });
            list.sort_unstable();
            list.dedup();
            list.clone()
        };
        debug_assert_eq!(candidates.len() as u32, cnt);
        let pivot = *candidates
            .iter()
            .min_by_key(|&&r| (rows[r as usize].len(), r))
            .unwrap();
        let pivot_row = core::mem::take(&mut rows[pivot as usize]);
        row_live[pivot as usize] = false;
        live_rows -= 1;
        let pv = pivot_row[pivot_row
            .binary_search_by_key(&(c as u32), |e| e.0)
            .unwrap()]
        .1;
        let inv = inverse_mod(u64::from(pv), p64);
        for &(c2, _) in &pivot_row {
            let c2 = c2 as usize;
            col_cnt[c2] -= 1;
            if col_cnt[c2] == 0 {
                live_cols -= 1;
            } else if c2 != c {
                heap.push(Reverse((col_cnt[c2], c2 as u32)));
            }
        }
        nnz -= pivot_row.len();
        for &r in &candidates {
            if r == pivot {
                continue;
            }
            let row = core::mem::take(&mut rows[r as usize]);
            let a = row[row.binary_search_by_key(&(c as u32), |e| e.0).unwrap()].1;
            // row - (a / pv) * pivot_row
            let f = (p64 - u64::from(a) * inv % p64) % p64;
            scratch.clear();
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < pivot_row.len() {
                let take_row = j == pivot_row.len() || (i < row.len() && row[i].0 < pivot_row[j].0);
                let take_piv = i == row.len() || (j < pivot_row.len() && pivot_row[j].0 < row[i].0);
                if take_row {
                    scratch.push(row[i]);
                    i += 1;
                } else if take_piv {
                    let (cc, v) = pivot_row[j];
                    let nv = (f * u64::from(v) % p64) as u32;
                    // nv != 0 since f != 0 and v != 0
                    scratch.push((cc, nv));
                    let cc = cc as usize;
                    if col_cnt[cc] == 0 {
                        live_cols += 1;
                    }
                    col_cnt[cc] += 1;
                    col_rows[cc].push(r);
                    heap.push(Reverse((col_cnt[cc], cc as u32)));
                    j += 1;
                } else {
                    let (cc, v) = row[i];
                    let nv = ((u64::from(v) + f * u64::from(pivot_row[j].1)) % p64) as u32;
                    if nv != 0 {
                        scratch.push((cc, nv));
                    } else {
                        let cc = cc as usize;
                        col_cnt[cc] -= 1;
                        if col_cnt[cc] == 0 {
                            live_cols -= 1;
                        } else {
                            heap.push(Reverse((col_cnt[cc], cc as u32)));
                        }
                    }
                    i += 1;
                    j += 1;
                }
            }
            nnz = nnz + scratch.len() - row.len();
            rows[r as usize] = scratch.clone();
            if scratch.is_empty() {
                row_live[r as usize] = false;
                live_rows -= 1;
            }
        }
        rank += 1;
    }

    if live_rows == 0 || live_cols == 0 {
        return rank;
    }
    let mut col_map = vec![u32::MAX; ncols];
    let mut dense_cols = 0usize;
    for c in 0..ncols {
        if col_cnt[c] > 0 {
            col_map[c] = dense_cols as u32;
            dense_cols += 1;
        }
    }
    let live: Vec<usize> = (0..rows.len()).filter(|&r| row_live[r]).collect();
    let mut dense = vec![0u64; live.len() * dense_cols];
    for (i, &r) in live.iter().enumerate() {
        for &(c, v) in &rows[r] {
            dense[i * dense_cols + col_map[c as usize] as usize] = u64::from(v);
        }
    }
    rank + dense_rank_mod_p(&dense, dense_cols, p)
}

/// Fraction of nonzeros at which sparse elimination hands over to dense.
const SPARSE_DENSITY_LIMIT: f64 = 0.15;

fn inverse_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Row echelon rank of a dense row-major matrix over `F_p`.
///
/// Entries are kept unreduced between pivots as long as the accumulated
/// products cannot overflow, so the inner loop is a plain multiply-add.
fn dense_rank_mod_p(matrix: &[u64], cols: usize, p: u32) -> usize {
    let p64 = u64::from(p);
    let rows = matrix.len() / cols.max(1);
    let mut a = matrix.to_vec();
    let max_product = (p64 - 1) * (p64 - 1);
    // how many unreduced updates an entry can absorb
    let lazy_budget = ((u64::MAX - p64) / max_product.max(1)) as usize;
    let mut since_reduce = 0usize;
    let mut rank = 0usize;
    let mut pivot_row = vec![0u64; cols];
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let mut found = None;
        for r in rank..rows {
            let v = a[r * cols + col] % p64;
            a[r * cols + col] = v;
            if v != 0 {
                found = Some(r);
                break;
            }
        }
        let Some(r) = found else { continue };
        if r != rank {
            for j in col..cols {
                a.swap(r * cols + j, rank * cols + j);
            }
        }
        let inv = inverse_mod(a[rank * cols + col], p64);
        for j in col..cols {
            pivot_row[j] = a[rank * cols + j] % p64 * inv % p64;
        }
        if since_reduce + 1 >= lazy_budget {
            for v in a[(rank + 1) * cols..].iter_mut() {
                *v %= p64;
            }
            since_reduce = 0;
        }
        since_reduce += 1;
        for r2 in rank + 1..rows {
            let f = a[r2 * cols + col] % p64;
            if f == 0 {
                continue;
            }
            let g = p64 - f;
            let row = &mut a[r2 * cols + col + 1..(r2 + 1) * cols];
            for (x, &y) in row.iter_mut().zip(&pivot_row[col + 1..]) {
                *x += g * y;
            }
            a[r2 * cols + col] = 0;
        }
        rank += 1;
    }
    rank
}

/// Fraction-free elimination over `Z`, which gives the rank over `Q`.
/// Starts in `i128` and restarts with big integers on overflow.
fn bareiss_rank(core: &Core) -> usize {
    let mut small: Vec<Vec<i128>> = core
        .rows
        .iter()
        .map(|row| {
            let mut dense = vec![0i128; core.cols];
            for &(c, v) in row {
                dense[c as usize] = i128::from(v);
            }
            dense
        })
        .collect();
    if let Some(r) = bareiss_i128(&mut small, core.cols) {
        return r;
    }
    let mut big: Vec<Vec<BigInt>> = core
        .rows
        .iter()
        .map(|row| {
            let mut dense = vec![BigInt::zero(); core.cols];
            for &(c, v) in row {
                dense[c as usize] = BigInt::from(v);
            }
            dense
        })
        .collect();
    bareiss_big(&mut big, core.cols)
}

fn bareiss_i128(a: &mut [Vec<i128>], cols: usize) -> Option<usize> {
    let rows = a.len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(r) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(r, rank);
        let piv = a[rank][col];
        for i in rank + 1..rows {
            let f = a[i][col];
            for j in col + 1..cols {
                let t = piv
                    .checked_mul(a[i][j])?
                    .checked_sub(f.checked_mul(a[rank][j])?)?;
                a[i][j] = t / prev;
            }
            a[i][col] = 0;
        }
        prev = piv;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(r) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(r, rank);
        let piv = a[rank][col].clone();
        for i in rank + 1..rows {
            let f = a[i][col].clone();
            for j in col + 1..cols {
                let t = &piv * &a[i][j] - &f * &a[rank][j];
                a[i][j] = t / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
    }
    rank
}
