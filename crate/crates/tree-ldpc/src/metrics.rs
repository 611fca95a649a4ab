//! Structural code metrics: GF(2) rank and null-space basis, the tree lower
//! bound on minimum distance, exact minimum distance by codeword enumeration,
//! and a randomized information-set search for low-weight codewords.

use crate::graph::{Girth, TannerGraph};
use crate::matrix::{BinaryMatrix, BitRow};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

/// Exact enumeration visits 2^k codewords; above this dimension it is refused.
pub const DMIN_EXACT_CAP_DEFAULT: usize = 26;

/// Combination counts above this skip the triples pass of the search.
const TRIPLES_CAP: u64 = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("tree bound needs degree >= 2 and even girth >= 6, got d = {d}, g = {g}")]
    InvalidTreeBoundParams { d: usize, g: usize },
    #[error("tree bound overflows u64 for d = {d}, g = {g}")]
    TreeBoundOverflow { d: usize, g: usize },
    #[error("code dimension {k} exceeds the exact-enumeration cap {cap}; use a bounded search")]
    DimensionExceedsCap { k: usize, cap: usize },
}

/// Lower bound on the minimum distance of a code whose Tanner graph has
/// minimum variable degree d and girth g: counting the variable nodes a
/// codeword's support must reach through the first g/2 tiers of its tree
/// neighborhood. Defined for even g >= 6, d >= 2.
pub fn tree_bound(d: usize, g: usize) -> Result<u64, MetricsError> {
    if d < 2 || g < 6 || g % 2 != 0 {
        return Err(MetricsError::InvalidTreeBoundParams { d, g });
    }
    let overflow = || MetricsError::TreeBoundOverflow { d, g };
    let du = d as u64;
    let mut sum: u64 = 1;
    let mut add = |v: u64| -> Result<(), MetricsError> {
        sum = sum.checked_add(v).ok_or_else(overflow)?;
        Ok(())
    };
    if (g / 2) % 2 == 1 {
        for i in 0..=(g - 6) / 4 {
            let tier = (du - 1)
                .checked_pow(i as u32)
                .and_then(|t| t.checked_mul(du))
                .ok_or_else(overflow)?;
            add(tier)?;
        }
    } else {
        for i in 0..=(g - 8) / 4 {
            let tier = (du - 1)
                .checked_pow(i as u32)
                .and_then(|t| t.checked_mul(du))
                .ok_or_else(overflow)?;
            add(tier)?;
        }
        let cap_tier = (du - 1)
            .checked_pow(((g - 4) / 4) as u32)
            .ok_or_else(overflow)?;
        add(cap_tier)?;
    }
    Ok(sum)
}

/// Row-reduces `rows` in place over GF(2), trying pivot columns in the order
/// given. Returns (pivot row, pivot column) pairs.
fn rref(rows: &mut [BitRow], col_order: &[usize]) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in col_order {
        if next >= rows.len() {
            break;
        }
        let Some(hit) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, hit);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_in(&pivot_row);
            }
        }
        pivots.push((next, col));
        next += 1;
    }
    pivots
}

pub fn gf2_rank(h: &BinaryMatrix) -> usize {
    let mut rows = h.packed_rows();
    let cols: Vec<usize> = (0..h.cols()).collect();
    rref(&mut rows, &cols).len()
}

/// A basis of the null space of `h`: one codeword per non-pivot column,
/// holding a single 1 among the free columns. Empty when the code is trivial.
pub fn generator_basis(h: &BinaryMatrix) -> Vec<BitRow> {
    let cols: Vec<usize> = (0..h.cols()).collect();
    generator_basis_ordered(h, &cols)
}

/// Same, but the systematic split follows `col_order`: earlier columns are
/// preferred as pivots, so the free (information) set lands late in the order.
fn generator_basis_ordered(h: &BinaryMatrix, col_order: &[usize]) -> Vec<BitRow> {
    let n = h.cols();
    let mut rows = h.packed_rows();
    let pivots = rref(&mut rows, col_order);
    let mut is_pivot = vec![false; n];
    for &(_, c) in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::with_capacity(n - pivots.len());
    for &f in col_order {
        if is_pivot[f] {
            continue;
        }
        let mut word = BitRow::zeros(n);
        word.set(f, true);
        for &(r, c) in &pivots {
            if rows[r].get(f) {
                word.set(c, true);
            }
        }
        debug_assert!(h.checks_satisfied(&word));
        basis.push(word);
    }
    basis
}

/// Exact minimum distance over the span of `basis` via Gray-code enumeration
/// of all 2^k - 1 nonzero codewords. `Ok(None)` means the code has no nonzero
/// codewords (k = 0).
pub fn dmin_exact(basis: &[BitRow], cap_k: usize) -> Result<Option<usize>, MetricsError> {
    let k = basis.len();
    if k > cap_k {
        return Err(MetricsError::DimensionExceedsCap { k, cap: cap_k });
    }
    if k == 0 {
        return Ok(None);
    }
    let mut current = BitRow::zeros(basis[0].len());
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        current.xor_in(&basis[flip]);
        best = best.min(current.weight());
    }
    Ok(Some(best))
}

/// A certified low-weight codeword found by search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowWeightWitness {
    pub weight: usize,
    pub support: Vec<usize>,
}

/// Randomized information-set search for a codeword of weight <= w_max:
/// each round re-derives a systematic generator over a shuffled column order
/// and scans single generator rows, pairs, and (within a budget) triples.
/// Any candidate is verified against `h` before it can become the witness,
/// so a `Some` result is always a true codeword; `None` only means the search
/// found nothing, not that nothing exists.
pub fn dmin_search_upper(
    h: &BinaryMatrix,
    w_max: usize,
    rounds: usize,
    seed: u64,
) -> Option<LowWeightWitness> {
    let n = h.cols();
    if n == 0 || w_max == 0 {
        return None;
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut col_order: Vec<usize> = (0..n).collect();
    let mut best: Option<(usize, BitRow)> = None;

    let consider = |word: &BitRow, best: &mut Option<(usize, BitRow)>| {
        let weight = word.weight();
        if weight == 0 || weight > w_max {
            return;
        }
        if best.as_ref().is_some_and(|(b, _)| *b <= weight) {
            return;
        }
        if h.checks_satisfied(word) {
            *best = Some((weight, word.clone()));
        } else {
            debug_assert!(false, "null-space combination failed the checks");
        }
    };

    for _ in 0..rounds {
        col_order.shuffle(&mut rng);
        let basis = generator_basis_ordered(h, &col_order);
        let k = basis.len();
        for row in &basis {
            consider(row, &mut best);
        }
        let mut pair = BitRow::zeros(n);
        for i in 0..k {
            for j in i + 1..k {
                pair.clone_from(&basis[i]);
                pair.xor_in(&basis[j]);
                consider(&pair, &mut best);
            }
        }
        let k64 = k as u64;
        let triple_count = if k >= 3 { k64 * (k64 - 1) * (k64 - 2) / 6 } else { 0 };
        if triple_count > 0 && triple_count <= TRIPLES_CAP {
            let mut partial = BitRow::zeros(n);
            let mut triple = BitRow::zeros(n);
            for i in 0..k {
                for j in i + 1..k {
                    partial.clone_from(&basis[i]);
                    partial.xor_in(&basis[j]);
                    for l in j + 1..k {
                        triple.clone_from(&partial);
                        triple.xor_in(&basis[l]);
                        consider(&triple, &mut best);
                    }
                }
            }
        }
    }
    best.map(|(weight, word)| LowWeightWitness {
        weight,
        support: word.support(),
    })
}

/// What is known about a code's minimum distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DminStatus {
    Exact(usize),
    /// `lower` comes from the tree bound (1 when no bound applies); `upper`
    /// is the lightest codeword a search produced, if any.
    Bounded { lower: usize, upper: Option<usize> },
    /// The code is trivial: rank(H) = n.
    NoCodewords,
    Unknown,
}

impl std::fmt::Display for DminStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DminStatus::Exact(d) => write!(f, "exact:{d}"),
            DminStatus::Bounded { lower, upper: Some(u) } => write!(f, "bounded:{lower}:{u}"),
            DminStatus::Bounded { lower, upper: None } => write!(f, "bounded:{lower}:none"),
            DminStatus::NoCodewords => write!(f, "no-codewords"),
            DminStatus::Unknown => write!(f, "unknown"),
        }
    }
}

/// How [`profile`] should establish the minimum distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DminMode {
    None,
    Exact { cap_k: usize },
    Bounded { w_max: usize, rounds: usize, seed: u64 },
}

/// Everything `analyze` reports about a code.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeProfile {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub k: usize,
    pub rate: f64,
    pub girth: Girth,
    pub min_var_degree: Option<usize>,
    /// Tree bound evaluated at the measured girth and minimum variable
    /// degree, when both are in range.
    pub tree_bound: Option<u64>,
    pub dmin: DminStatus,
}

pub fn profile(graph: &TannerGraph, mode: &DminMode) -> Result<CodeProfile, MetricsError> {
    let h = graph.to_check_matrix();
    let n = h.cols();
    let m = h.rows();
    let rank = gf2_rank(&h);
    let k = n - rank;
    let girth = graph.girth();
    let min_var_degree = graph.degree_profile().min_var_degree();
    let bound = match (girth, min_var_degree) {
        (Girth::Finite(g), Some(d)) if d >= 2 && g >= 6 => tree_bound(d, g).ok(),
        _ => None,
    };
    let dmin = if k == 0 {
        DminStatus::NoCodewords
    } else {
        match mode {
            DminMode::None => DminStatus::Unknown,
            DminMode::Exact { cap_k } => {
                let basis = generator_basis(&h);
                let d = dmin_exact(&basis, *cap_k)?.expect("k > 0 was checked");
                DminStatus::Exact(d)
            }
            DminMode::Bounded { w_max, rounds, seed } => DminStatus::Bounded {
                lower: bound.map(|b| b as usize).unwrap_or(1),
                upper: dmin_search_upper(&h, *w_max, *rounds, *seed).map(|w| w.weight),
            },
        }
    };
    Ok(CodeProfile {
        n,
        m,
        rank,
        k,
        rate: if n > 0 { k as f64 / n as f64 } else { 0.0 },
        girth,
        min_var_degree,
        tree_bound: bound,
        dmin,
    })
}
