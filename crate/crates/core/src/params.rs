//! The triple `(n, d, b)` and Koszul positions `(p, q)`.

use core::fmt;

use alloc::format;

use crate::combinatorics::binomial_u64;
use crate::{Error, Result};

/// Parameters of the Veronese module `S(b;d)` over `k[x_0, .., x_n]`.
///
/// `num_vars` caches `N = C(n+d, n) = dim S_d`, the number of variables of
/// `R = Sym(S_d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VeroneseParams {
    n: u32,
    d: u32,
    b: i32,
    num_vars: u32,
}

impl VeroneseParams {
    pub fn new(n: u32, d: u32, b: i32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters(format!(
                "n must be at least 1, got {n}"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidParameters(format!(
                "d must be at least 1, got {d}"
            )));
        }
        let num_vars = binomial_u64(u64::from(n) + u64::from(d), u64::from(n))
            .filter(|&v| v <= u64::from(u16::MAX))
            .ok_or(Error::Overflow("dim S_d"))?;
        Ok(Self {
            n,
            d,
            b,
            num_vars: num_vars as u32,
        })
    }

    /// Projective dimension `n`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Veronese degree `d`.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Twist `b`.
    pub fn b(&self) -> i32 {
        self.b
    }

    /// Number of variables `n + 1` of `S`; also the width of every weight.
    pub fn width(&self) -> usize {
        self.n as usize + 1
    }

    /// `N = dim S_d`.
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Largest homological degree with possibly nonzero syzygies, `N - n - 1`.
    pub fn max_p(&self) -> u32 {
        self.num_vars - self.n - 1
    }

    /// Smallest `q` with `qd + b >= 0`, i.e. the first strand with a nonzero
    /// coefficient space. Zero whenever `0 <= b < d`.
    pub fn min_q(&self) -> i32 {
        let d = self.d as i32;
        -self.b.div_euclid(d)
    }

    /// Degree `qd + b` of the coefficient space `B_q = S_{qd+b}`.
    pub fn coefficient_degree(&self, q: i32) -> i64 {
        i64::from(q) * i64::from(self.d) + i64::from(self.b)
    }

    /// Total torus weight `d(p+q) + b` of everything in `K_{p,q}`.
    pub fn total_weight(&self, pos: KoszulPosition) -> i64 {
        i64::from(self.d) * (i64::from(pos.p) + i64::from(pos.q)) + i64::from(self.b)
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.d as i32).contains(&self.b)
    }
}

impl fmt::Display for VeroneseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({};{}) on P^{}", self.b, self.d, self.n)
    }
}

/// A Koszul position `(p, q)`: `K_{p,q}` contributes `beta_{p,p+q}`.
///
/// `q` is signed so that twists `b >= d` can be handled without normalizing
/// first; for normalized twists every nonzero group has `q >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KoszulPosition {
    pub p: u32,
    pub q: i32,
}

impl KoszulPosition {
    pub const fn new(p: u32, q: i32) -> Self {
        Self { p, q }
    }

    /// Internal degree `p + q` of the corresponding Betti number.
    pub fn degree(&self) -> i64 {
        i64::from(self.p) + i64::from(self.q)
    }
}

impl fmt::Display for KoszulPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}
