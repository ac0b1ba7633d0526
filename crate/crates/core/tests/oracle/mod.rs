//! Brute-force Koszul cohomology for tiny cases.
//!
//! Builds the whole strand `Lambda^{p+1} V (x) B_{q-1} -> Lambda^p V (x) B_q ->
//! Lambda^{p-1} V (x) B_{q+1}` as global matrices over explicit monomial
//! bases, with no weight splitting, and takes ranks by textbook Gaussian
//! elimination over `Q` (i128 fractions). Shares no code with the engine.

#![allow(dead_code)]

use std::collections::HashMap;

fn monomials(vars: usize, degree: i64) -> Vec<Vec<u32>> {
    if degree < 0 {
        return Vec::new();
    }
    if vars == 1 {
        return vec![vec![degree as u32]];
    }
    let mut out = Vec::new();
    for a in (0..=degree).rev() {
        for mut rest in monomials(vars - 1, degree - a) {
            let mut m = vec![a as u32];
            m.append(&mut rest);
            out.push(m);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in subsets(n - first - 1, k - 1) {
            let mut s = vec![first];
            s.extend(rest.into_iter().map(|x| x + first + 1));
            out.push(s);
        }
    }
    out
}

type Basis = Vec<(Vec<usize>, Vec<u32>)>;

fn term_basis(vars: usize, d: i64, b: i64, p: i64, q: i64) -> Basis {
    if p < 0 {
        return Vec::new();
    }
    let v = monomials(vars, d);
    let mut out = Vec::new();
    for s in subsets(v.len(), p as usize) {
        for f in monomials(vars, q * d + b) {
            out.push((s.clone(), f));
        }
    }
    out
}

/// Global matrix of the differential out of `(p, q)`, as rows of the target.
fn matrix(vars: usize, d: i64, b: i64, p: i64, q: i64) -> (Vec<Vec<i128>>, usize) {
    let v = monomials(vars, d);
    let src = term_basis(vars, d, b, p, q);
    let tgt = term_basis(vars, d, b, p - 1, q + 1);
    let index: HashMap<&(Vec<usize>, Vec<u32>), usize> =
        tgt.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut m = vec![vec![0i128; src.len()]; tgt.len()];
    for (col, (s, f)) in src.iter().enumerate() {
        for (i, &mi) in s.iter().enumerate() {
            let mut face = s.clone();
            face.remove(i);
            let g: Vec<u32> = f.iter().zip(&v[mi]).map(|(a, b)| a + b).collect();
            let row = index[&(face, g)];
            m[row][col] += if i % 2 == 0 { 1 } else { -1 };
        }
    }
    (m, src.len())
}

fn rank_q(mut m: Vec<Vec<i128>>) -> usize {
    // fraction-free row reduction with gcd normalisation of each row
    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(r, rank);
        for i in 0..rows {
            if i == rank || m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[rank][c], m[i][c]);
            for j in 0..cols {
                m[i][j] = a * m[i][j] - b * m[rank][j];
            }
            let g = m[i].iter().fold(0, |g, &x| gcd(g, x));
            if g > 1 {
                for x in m[i].iter_mut() {
                    *x /= g;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim K_{p,q}` of `S(b;d)` over `Q` with `n + 1 = vars`.
pub fn kpq(vars: usize, d: i64, b: i64, p: i64, q: i64) -> u64 {
    let dim = term_basis(vars, d, b, p, q).len();
    if dim == 0 {
        return 0;
    }
    let (out, _) = matrix(vars, d, b, p, q);
    let (inc, _) = matrix(vars, d, b, p + 1, q - 1);
    let r_out = if p == 0 { 0 } else { rank_q(out) };
    let r_in = rank_q(inc);
    (dim - r_out - r_in) as u64
}
