//! Weight blocks of `Lambda^p S_d (x) S_{qd+b}`.
//!
//! Inside a block of fixed weight `w` the coefficient monomial is determined
//! by the wedge factors (it is `w` minus their exponent sum), so a block is
//! just the list of `p`-subsets of degree-`d` monomials whose exponent sum
//! is componentwise at most `w`. Subsets are stored as strictly increasing
//! index sequences into the monomial list; since that list is in descending
//! lex order, an increasing index sequence is a strictly descending monomial
//! sequence `m_1 > .. > m_p`. Blocks are kept in lexicographic index order,
//! which makes row lookup a binary search.

use core::cmp::Ordering;

use alloc::vec::Vec;

use crate::combinatorics::{monomials_of_degree, Weight};

/// Degree-`d` monomials in a flat layout.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    width: usize,
    exps: Vec<u32>,
}

impl MonomialBasis {
    pub fn new(width: usize, degree: u32) -> Self {
        let exps = monomials_of_degree(width, degree)
            .into_iter()
            .flat_map(|m| m.exponents().to_vec())
            .collect();
        Self { width, exps }
    }

    pub fn len(&self) -> usize {
        self.exps.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn exponents(&self, i: usize) -> &[u32] {
        &self.exps[i * self.width..(i + 1) * self.width]
    }
}

/// One weight stratum of one Koszul term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    size: usize,
    weight: Weight,
    subsets: Vec<u16>,
}

/// Returned when enumeration stops at the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CapExceeded(pub usize);

impl Block {
    /// Enumerates every `size`-subset whose exponent sum fits under `weight`.
    /// `weight` must already have the right total for the Koszul term; the
    /// difference is the coefficient monomial.
    pub fn enumerate(
        basis: &MonomialBasis,
        size: usize,
        weight: &Weight,
        cap: Option<usize>,
    ) -> Result<Self, CapExceeded> {
        let mut subsets = Vec::new();
        let mut budget: Vec<u32> = weight.exponents().to_vec();
        let mut chosen: Vec<u16> = Vec::with_capacity(size);
        let cap = cap.unwrap_or(usize::MAX);
        let mut count = 0usize;
        let mut walker = Walker {
            basis,
            size,
            budget: &mut budget,
            chosen: &mut chosen,
            out: &mut subsets,
            count: &mut count,
            cap,
        };
        walker.descend(0)?;
        Ok(Self {
            size,
            weight: weight.clone(),
            subsets,
        })
    }

    pub fn empty(size: usize, weight: Weight) -> Self {
        Self {
            size,
            weight,
            subsets: Vec::new(),
        }
    }

    /// Number of wedge factors `p`.
    pub fn wedge_size(&self) -> usize {
        self.size
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn len(&self) -> usize {
        if self.size == 0 {
            // the empty wedge is a single element when it fits at all
            self.subsets.len()
        } else {
            self.subsets.len() / self.size
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn subset(&self, i: usize) -> &[u16] {
        if self.size == 0 {
            &[]
        } else {
            &self.subsets[i * self.size..(i + 1) * self.size]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> + '_ {
        (0..self.len()).map(move |i| self.subset(i))
    }

    /// Position of `subset` in this block.
    pub fn index_of(&self, subset: &[u16]) -> Option<usize> {
        debug_assert_eq!(subset.len(), self.size);
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.subset(mid).cmp(subset) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

struct Walker<'a> {
    basis: &'a MonomialBasis,
    size: usize,
    budget: &'a mut Vec<u32>,
    chosen: &'a mut Vec<u16>,
    out: &'a mut Vec<u16>,
    count: &'a mut usize,
    cap: usize,
}

impl Walker<'_> {
    fn descend(&mut self, start: usize) -> Result<(), CapExceeded> {
        if self.chosen.len() == self.size {
            *self.count += 1;
            if *self.count > self.cap {
                return Err(CapExceeded(*self.count));
            }
            if self.size == 0 {
                // marker entry so that len() reports one element
                self.out.push(0);
            } else {
                self.out.extend_from_slice(self.chosen);
            }
            return Ok(());
        }
        let still_needed = self.size - self.chosen.len();
        let n = self.basis.len();
        for i in start..n {
            if n - i < still_needed {
                break;
            }
            let m = self.basis.exponents(i);
            if m.iter().zip(self.budget.iter()).any(|(a, b)| a > b) {
                continue;
            }
            for (b, a) in self.budget.iter_mut().zip(m) {
                *b -= a;
            }
            self.chosen.push(i as u16);
            let r = self.descend(i + 1);
            self.chosen.pop();
            for (b, a) in self.budget.iter_mut().zip(m) {
                *b += a;
            }
            r?;
        }
        Ok(())
    }
}
