//! BPSK/AWGN simulation: channel LLRs, iterative min-sum / sum-product
//! decoding, brute-force ML decoding for tiny codes, Monte Carlo sweeps, and
//! a girth-6 random regular baseline code.
//!
//! Conventions: bit 0 maps to +1 on the channel, so positive LLR favors 0.
//! Sweeps transmit the all-zero codeword. Every frame draws its noise from
//! its own counter-keyed stream, so results depend only on (seed, point
//! index, frame index) and never on thread count; stopping decisions happen
//! at fixed batch boundaries for the same reason.

use crate::graph::TannerGraph;
use crate::matrix::{BinaryMatrix, BitRow};
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::{self, Write};
use thiserror::Error;

/// Frames simulated between stopping-rule evaluations. Fixed so that results
/// are identical for any worker count.
pub const FRAME_BATCH: u64 = 1024;

/// Brute-force ML enumerates 2^k codewords; above this dimension it refuses.
pub const ML_DIMENSION_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("llr length {found} does not match code length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("code rate {0} outside (0, 1]")]
    InvalidRate(f64),
    #[error("normalization {0} outside (0, 1]")]
    InvalidNormalization(f64),
    #[error("max_iterations must be at least 1")]
    ZeroIterations,
    #[error("max_frames must be at least 1")]
    ZeroMaxFrames,
    #[error("code has no information bits (rank of H equals n)")]
    ZeroDimension,
    #[error("cannot simulate a code with no variables")]
    EmptyCode,
    #[error("ML decoding capped at dimension {cap}, code has {k}")]
    MlDimensionTooLarge { k: usize, cap: usize },
    #[error("received vector length {found} does not match code length {expected}")]
    ReceivedLengthMismatch { expected: usize, found: usize },
    #[error("regular code needs n*dv divisible by dc, got {n}*{dv} and {dc}")]
    IndivisibleDegrees { n: usize, dv: usize, dc: usize },
    #[error("regular code parameters out of range: n = {n} gives m = {m}, need 1 <= dv <= m and 1 <= dc <= n")]
    DegreesOutOfRange { n: usize, m: usize, dv: usize, dc: usize },
    #[error("no simple girth-6 {dv}-regular graph reached within the swap budget")]
    SwapBudgetExhausted { dv: usize },
}

/// Which check-node rule the iterative decoder applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderVariant {
    MinSum,
    SumProduct,
}

impl DecoderVariant {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderVariant::MinSum => "min-sum",
            DecoderVariant::SumProduct => "sum-product",
        }
    }
}

/// Iterative decoder settings. `normalization` scales min-sum check messages
/// (1.0 = plain min-sum); the sum-product rule ignores it.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderConfig {
    pub variant: DecoderVariant,
    pub max_iterations: usize,
    pub normalization: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            variant: DecoderVariant::MinSum,
            max_iterations: 50,
            normalization: 1.0,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.max_iterations == 0 {
            return Err(SimError::ZeroIterations);
        }
        if !(self.normalization > 0.0 && self.normalization <= 1.0) {
            return Err(SimError::InvalidNormalization(self.normalization));
        }
        Ok(())
    }
}

/// One Eb/N0 operating point: noise deviation for BPSK(+-1) at the given
/// code rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    pub ebno_db: f64,
    pub rate: f64,
    pub sigma: f64,
}

impl ChannelPoint {
    pub fn new(ebno_db: f64, rate: f64) -> Result<Self, SimError> {
        if !(rate > 0.0 && rate <= 1.0) || !rate.is_finite() {
            return Err(SimError::InvalidRate(rate));
        }
        let sigma = (1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt();
        Ok(ChannelPoint { ebno_db, rate, sigma })
    }
}

/// Transmits `word` over BPSK/AWGN and returns the channel LLRs 2y/sigma^2.
pub fn channel_llr<R: Rng + ?Sized>(word: &[bool], point: &ChannelPoint, rng: &mut R) -> Vec<f64> {
    let scale = 2.0 / (point.sigma * point.sigma);
    word.iter()
        .map(|&bit| {
            let x = if bit { -1.0 } else { 1.0 };
            let noise: f64 = StandardNormal.sample(rng);
            scale * (x + point.sigma * noise)
        })
        .collect()
}

/// The hard-decision result of an iterative decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub bits: Vec<bool>,
    /// True when the hard decisions satisfied every check, at which point
    /// iteration stopped.
    pub converged: bool,
    pub iterations_used: usize,
}

/// Flooding-schedule iterative decoder over a fixed parity-check matrix.
/// Messages live on an edge list grouped by check (and indexed from the
/// variable side), so decode passes are flat array sweeps.
pub struct Decoder {
    n: usize,
    check_starts: Vec<usize>,
    edge_var: Vec<usize>,
    var_starts: Vec<usize>,
    var_edges: Vec<usize>,
    max_check_degree: usize,
}

impl Decoder {
    pub fn new(h: &BinaryMatrix) -> Self {
        let n = h.cols();
        let m = h.rows();
        let mut check_starts = Vec::with_capacity(m + 1);
        let mut edge_var = Vec::with_capacity(h.num_entries());
        check_starts.push(0);
        for r in 0..m {
            edge_var.extend_from_slice(h.row_support(r));
            check_starts.push(edge_var.len());
        }
        let mut var_counts = vec![0usize; n];
        for &v in &edge_var {
            var_counts[v] += 1;
        }
        let mut var_starts = vec![0usize; n + 1];
        for v in 0..n {
            var_starts[v + 1] = var_starts[v] + var_counts[v];
        }
        let mut fill = var_starts.clone();
        let mut var_edges = vec![0usize; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        let max_check_degree = (0..m)
            .map(|r| check_starts[r + 1] - check_starts[r])
            .max()
            .unwrap_or(0);
        Decoder {
            n,
            check_starts,
            edge_var,
            var_starts,
            var_edges,
            max_check_degree,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    fn num_checks(&self) -> usize {
        self.check_starts.len() - 1
    }

    fn syndrome_ok(&self, bits: &[bool]) -> bool {
        (0..self.num_checks()).all(|c| {
            let range = self.check_starts[c]..self.check_starts[c + 1];
            self.edge_var[range].iter().filter(|&&v| bits[v]).count() % 2 == 0
        })
    }

    pub fn decode(&self, llr: &[f64], cfg: &DecoderConfig) -> Result<DecodeOutcome, SimError> {
        cfg.validate()?;
        if llr.len() != self.n {
            return Err(SimError::LengthMismatch {
                expected: self.n,
                found: llr.len(),
            });
        }
        let mut bits: Vec<bool> = llr.iter().map(|&l| l < 0.0).collect();
        if self.syndrome_ok(&bits) {
            return Ok(DecodeOutcome {
                bits,
                converged: true,
                iterations_used: 0,
            });
        }
        let num_edges = self.edge_var.len();
        let mut v2c: Vec<f64> = (0..num_edges).map(|e| llr[self.edge_var[e]]).collect();
        let mut c2v = vec![0.0f64; num_edges];
        let mut posterior = vec![0.0f64; self.n];
        let mut prefix = vec![0.0f64; self.max_check_degree + 1];
        let mut suffix = vec![0.0f64; self.max_check_degree + 1];

        for iteration in 1..=cfg.max_iterations {
            match cfg.variant {
                DecoderVariant::MinSum => self.check_pass_min_sum(&v2c, &mut c2v, cfg.normalization),
                DecoderVariant::SumProduct => {
                    self.check_pass_sum_product(&v2c, &mut c2v, &mut prefix, &mut suffix)
                }
            }
            for v in 0..self.n {
                let mut total = llr[v];
                for &e in &self.var_edges[self.var_starts[v]..self.var_starts[v + 1]] {
                    total += c2v[e];
                }
                posterior[v] = total;
                bits[v] = total < 0.0;
            }
            if self.syndrome_ok(&bits) {
                debug_assert!(self.syndrome_ok(&bits));
                return Ok(DecodeOutcome {
                    bits,
                    converged: true,
                    iterations_used: iteration,
                });
            }
            for e in 0..num_edges {
                v2c[e] = posterior[self.edge_var[e]] - c2v[e];
            }
        }
        Ok(DecodeOutcome {
            bits,
            converged: false,
            iterations_used: cfg.max_iterations,
        })
    }

    /// Check messages: product of signs times the minimum magnitude among the
    /// other edges, scaled by the normalization factor. Zero inputs count as
    /// non-negative, matching the bit-0 tie convention.
    fn check_pass_min_sum(&self, v2c: &[f64], c2v: &mut [f64], norm: f64) {
        for c in 0..self.num_checks() {
            let range = self.check_starts[c]..self.check_starts[c + 1];
            let mut sign_parity = false;
            let mut min1 = f64::INFINITY;
            let mut min2 = f64::INFINITY;
            let mut argmin = range.start;
            for e in range.clone() {
                let val = v2c[e];
                if val < 0.0 {
                    sign_parity = !sign_parity;
                }
                let mag = val.abs();
                if mag < min1 {
                    min2 = min1;
                    min1 = mag;
                    argmin = e;
                } else if mag < min2 {
                    min2 = mag;
                }
            }
            for e in range {
                let mag = if e == argmin { min2 } else { min1 };
                let negative = sign_parity ^ (v2c[e] < 0.0);
                c2v[e] = if negative { -norm * mag } else { norm * mag };
            }
        }
    }

    /// Check messages by the tanh rule, via prefix/suffix products so each
    /// check costs O(degree). Products are clamped just inside (-1, 1) to
    /// keep atanh finite.
    fn check_pass_sum_product(
        &self,
        v2c: &[f64],
        c2v: &mut [f64],
        prefix: &mut [f64],
        suffix: &mut [f64],
    ) {
        const CLAMP: f64 = 1.0 - 1e-12;
        for c in 0..self.num_checks() {
            let start = self.check_starts[c];
            let degree = self.check_starts[c + 1] - start;
            prefix[0] = 1.0;
            for i in 0..degree {
                prefix[i + 1] = prefix[i] * (v2c[start + i] / 2.0).tanh();
            }
            suffix[degree] = 1.0;
            for i in (0..degree).rev() {
                suffix[i] = suffix[i + 1] * (v2c[start + i] / 2.0).tanh();
            }
            for i in 0..degree {
                let product = (prefix[i] * suffix[i + 1]).clamp(-CLAMP, CLAMP);
                c2v[start + i] = 2.0 * product.atanh();
            }
        }
    }
}

/// One-shot convenience wrapper around [`Decoder`].
pub fn decode(
    h: &BinaryMatrix,
    llr: &[f64],
    cfg: &DecoderConfig,
) -> Result<DecodeOutcome, SimError> {
    Decoder::new(h).decode(llr, cfg)
}

/// Exact maximum-likelihood decoding by enumerating the whole code: returns
/// the codeword closest to `received` in Euclidean distance, breaking exact
/// ties toward the lexicographically smallest codeword. Only sensible for
/// tiny dimensions.
pub fn ml_decode(basis: &[BitRow], received: &[f64]) -> Result<Vec<bool>, SimError> {
    let k = basis.len();
    if k > ML_DIMENSION_CAP {
        return Err(SimError::MlDimensionTooLarge {
            k,
            cap: ML_DIMENSION_CAP,
        });
    }
    let n = received.len();
    if let Some(row) = basis.first() {
        if row.len() != n {
            return Err(SimError::ReceivedLengthMismatch {
                expected: row.len(),
                found: n,
            });
        }
    }
    // Distance to BPSK(c) is monotone in sum(received[i] for i in supp(c)).
    let score = |word: &BitRow| -> f64 { word.support().iter().map(|&i| received[i]).sum() };
    let mut best = BitRow::zeros(n);
    let mut best_score = 0.0f64;
    let mut current = BitRow::zeros(n);
    for step in 1u64..(1u64 << k) {
        let flip = step.trailing_zeros() as usize;
        current.xor_in(&basis[flip]);
        let s = score(&current);
        if s < best_score
            || (s == best_score && current.lex_cmp(&best) == std::cmp::Ordering::Less)
        {
            best_score = s;
            best.clone_from(&current);
        }
    }
    Ok(best.to_bools())
}

/// When to stop simulating one operating point: after any batch that reaches
/// `min_frame_errors`, or at `max_frames` regardless.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 100,
            max_frames: 10_000_000,
        }
    }
}

/// Accumulated counts for one Eb/N0 point. Frame errors split into detected
/// (decoder failed to converge) and undetected (converged to a wrong
/// codeword).
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub ebno_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub detected_errors: u64,
    pub undetected_errors: u64,
    pub iterations_sum: u64,
}

impl PointResult {
    fn new(ebno_db: f64) -> Self {
        PointResult {
            ebno_db,
            frames: 0,
            bit_errors: 0,
            frame_errors: 0,
            detected_errors: 0,
            undetected_errors: 0,
            iterations_sum: 0,
        }
    }

    pub fn ber(&self, n: usize) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.bit_errors as f64 / (self.frames as f64 * n as f64)
    }

    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.frame_errors as f64 / self.frames as f64
    }

    pub fn avg_iterations(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.iterations_sum as f64 / self.frames as f64
    }
}

/// A finished sweep: code parameters plus one [`PointResult`] per Eb/N0.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub n: usize,
    pub k: usize,
    pub rate: f64,
    pub points: Vec<PointResult>,
}

#[derive(Default, Clone, Copy)]
struct BatchTotals {
    bit_errors: u64,
    frame_errors: u64,
    detected: u64,
    undetected: u64,
    iterations: u64,
}

impl BatchTotals {
    fn merge(self, other: BatchTotals) -> BatchTotals {
        BatchTotals {
            bit_errors: self.bit_errors + other.bit_errors,
            frame_errors: self.frame_errors + other.frame_errors,
            detected: self.detected + other.detected,
            undetected: self.undetected + other.undetected,
            iterations: self.iterations + other.iterations,
        }
    }
}

/// The per-frame noise stream: a fixed-key stream cipher RNG keyed by
/// (sweep seed, point index, frame index) plus a domain tag.
fn frame_rng(seed: u64, point_idx: u64, frame_idx: u64) -> ChaCha12Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point_idx.to_le_bytes());
    key[16..24].copy_from_slice(&frame_idx.to_le_bytes());
    key[24..32].copy_from_slice(b"treeldpc");
    ChaCha12Rng::from_seed(key)
}

/// Monte Carlo sweep of the all-zero codeword over the given Eb/N0 points
/// (dB). The code rate is k/n with k = n - rank(H). Frames run in parallel
/// within fixed-size batches; results are bit-identical for any worker count
/// and depend only on the seed.
pub fn run_sweep(
    graph: &TannerGraph,
    ebno_dbs: &[f64],
    cfg: &DecoderConfig,
    stop: &StopRule,
    seed: u64,
) -> Result<SimResult, SimError> {
    cfg.validate()?;
    if stop.max_frames == 0 {
        return Err(SimError::ZeroMaxFrames);
    }
    let h = graph.to_check_matrix();
    let n = h.cols();
    if n == 0 {
        return Err(SimError::EmptyCode);
    }
    let rank = crate::metrics::gf2_rank(&h);
    let k = n - rank;
    if k == 0 {
        return Err(SimError::ZeroDimension);
    }
    let rate = k as f64 / n as f64;
    let decoder = Decoder::new(&h);
    let zero_word = vec![false; n];

    let mut points = Vec::with_capacity(ebno_dbs.len());
    for (point_idx, &ebno_db) in ebno_dbs.iter().enumerate() {
        let point = ChannelPoint::new(ebno_db, rate)?;
        let mut acc = PointResult::new(ebno_db);
        while acc.frame_errors < stop.min_frame_errors && acc.frames < stop.max_frames {
            let batch = FRAME_BATCH.min(stop.max_frames - acc.frames);
            let base = acc.frames;
            let totals = (0..batch)
                .into_par_iter()
                .map(|offset| {
                    let mut rng = frame_rng(seed, point_idx as u64, base + offset);
                    let llr = channel_llr(&zero_word, &point, &mut rng);
                    let outcome = decoder
                        .decode(&llr, cfg)
                        .expect("config validated and lengths match");
                    let wrong_bits = outcome.bits.iter().filter(|&&b| b).count() as u64;
                    let mut t = BatchTotals {
                        bit_errors: wrong_bits,
                        iterations: outcome.iterations_used as u64,
                        ..BatchTotals::default()
                    };
                    if wrong_bits > 0 {
                        t.frame_errors = 1;
                        if outcome.converged {
                            t.undetected = 1;
                        } else {
                            t.detected = 1;
                        }
                    } else {
                        debug_assert!(outcome.converged, "the zero word satisfies every check");
                    }
                    t
                })
                .reduce(BatchTotals::default, BatchTotals::merge);
            acc.frames += batch;
            acc.bit_errors += totals.bit_errors;
            acc.frame_errors += totals.frame_errors;
            acc.detected_errors += totals.detected;
            acc.undetected_errors += totals.undetected;
            acc.iterations_sum += totals.iterations;
        }
        points.push(acc);
    }
    Ok(SimResult { n, k, rate, points })
}

/// Writes sweep results as CSV with a fixed header and number formatting, so
/// equal results serialize to identical bytes.
pub fn write_results_csv<W: Write>(result: &SimResult, mut sink: W) -> io::Result<()> {
    writeln!(
        sink,
        "ebno_db,frames,bit_errors,frame_errors,detected_errors,undetected_errors,ber,fer,avg_iterations"
    )?;
    for p in &result.points {
        writeln!(
            sink,
            "{},{},{},{},{},{},{:.6e},{:.6e},{:.4}",
            p.ebno_db,
            p.frames,
            p.bit_errors,
            p.frame_errors,
            p.detected_errors,
            p.undetected_errors,
            p.ber(result.n),
            p.fer(),
            p.avg_iterations()
        )?;
    }
    Ok(())
}

/// Builds a random (dv, dc)-regular Tanner graph with girth at least 6 by
/// pairing variable and check sockets, then repairing parallel edges and
/// 4-cycles with random edge swaps. Deterministic for a given seed.
pub fn build_random_regular(
    n: usize,
    dv: usize,
    dc: usize,
    seed: u64,
) -> Result<TannerGraph, SimError> {
    if n == 0 || dv == 0 || dc == 0 || (n * dv) % dc != 0 {
        return Err(SimError::IndivisibleDegrees { n, dv, dc });
    }
    let m = n * dv / dc;
    if dv > m || dc > n {
        return Err(SimError::DegreesOutOfRange { n, m, dv, dc });
    }
    let num_edges = n * dv;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Slot e always belongs to variable e / dv; swaps exchange check
    // endpoints only, so variable degrees are fixed by construction.
    let mut checks: Vec<usize> = vec![0; num_edges];

    // Violations are parallel edges (a variable holding the same check
    // twice) and duplicated check pairs (two slot pairs seeing the same
    // unordered pair of checks, i.e. a 4-cycle once parallels are gone).
    // `score` counts both; zero means girth >= 6.
    let mut edge_mult: HashMap<(usize, usize), u32> = HashMap::with_capacity(num_edges);
    let mut pair_mult: HashMap<(usize, usize), u32> = HashMap::with_capacity(num_edges * dv);
    let mut score: i64;

    let pair_key = |a: usize, b: usize| (a.min(b), a.max(b));

    let mut budget: u64 = 200_000 + 200 * num_edges as u64;
    use rand::seq::SliceRandom;

    macro_rules! replace_check {
        ($slot:expr, $new:expr) => {{
            let slot: usize = $slot;
            let new_c: usize = $new;
            let v = slot / dv;
            let old_c = checks[slot];
            for other in v * dv..(v + 1) * dv {
                if other == slot {
                    continue;
                }
                let x = checks[other];
                if x != old_c {
                    let e = pair_mult.get_mut(&pair_key(old_c, x)).expect("tracked pair");
                    *e -= 1;
                    if *e >= 1 {
                        score -= 1;
                    }
                }
                if x != new_c {
                    let e = pair_mult.entry(pair_key(new_c, x)).or_insert(0);
                    if *e >= 1 {
                        score += 1;
                    }
                    *e += 1;
                }
            }
            let e = edge_mult.get_mut(&(v, old_c)).expect("tracked edge");
            *e -= 1;
            if *e >= 1 {
                score -= 1;
            }
            let e = edge_mult.entry((v, new_c)).or_insert(0);
            if *e >= 1 {
                score += 1;
            }
            *e += 1;
            checks[slot] = new_c;
        }};
    }

    // A slot is a culprit if its edge is parallel or it participates in a
    // duplicated check pair.
    macro_rules! slot_bad {
        ($slot:expr) => {{
            let slot: usize = $slot;
            let v = slot / dv;
            let c = checks[slot];
            if edge_mult.get(&(v, c)).copied().unwrap_or(0) > 1 {
                true
            } else {
                (v * dv..(v + 1) * dv).any(|other| {
                    other != slot
                        && checks[other] != c
                        && pair_mult
                            .get(&pair_key(c, checks[other]))
                            .copied()
                            .unwrap_or(0)
                            > 1
                })
            }
        }};
    }

    loop {
        // (Re)start from a fresh random stub matching.
        let mut sockets: Vec<usize> = (0..num_edges).map(|e| e / dc).collect();
        sockets.shuffle(&mut rng);
        edge_mult.clear();
        pair_mult.clear();
        score = 0;
        for (slot, &c) in sockets.iter().enumerate() {
            let v = slot / dv;
            for other in v * dv..slot {
                let x = sockets[other];
                if x != c {
                    let e = pair_mult.entry(pair_key(c, x)).or_insert(0);
                    if *e >= 1 {
                        score += 1;
                    }
                    *e += 1;
                }
            }
            let e = edge_mult.entry((v, c)).or_insert(0);
            if *e >= 1 {
                score += 1;
            }
            *e += 1;
        }
        checks = sockets;

        let mut stalled = 0u32;
        let stall_limit = 2_000 + 10 * num_edges as u32;
        while score > 0 && stalled < stall_limit {
            if budget == 0 {
                return Err(SimError::SwapBudgetExhausted { dv });
            }
            budget -= 1;
            // Find a culprit slot: a few random probes, then a scan.
            let mut culprit = None;
            for _ in 0..64 {
                let cand = rng.gen_range(0..num_edges);
                if slot_bad!(cand) {
                    culprit = Some(cand);
                    break;
                }
            }
            let i = match culprit.or_else(|| (0..num_edges).find(|&s| slot_bad!(s))) {
                Some(slot) => slot,
                None => break, // score bookkeeping said >0 but nothing found
            };
            let j = rng.gen_range(0..num_edges);
            let (v1, c1) = (i / dv, checks[i]);
            let (v2, c2) = (j / dv, checks[j]);
            if v1 == v2 || c1 == c2 {
                stalled += 1;
                continue;
            }
            let before = score;
            replace_check!(i, c2);
            replace_check!(j, c1);
            if score < before {
                stalled = 0;
            } else {
                replace_check!(j, c2);
                replace_check!(i, c1);
                stalled += 1;
            }
        }
        if score == 0 {
            break;
        }
        if budget == 0 {
            return Err(SimError::SwapBudgetExhausted { dv });
        }
    }

    let edges: Vec<(usize, usize)> = checks
        .iter()
        .enumerate()
        .map(|(slot, &c)| (slot / dv, c))
        .collect();
    let mut graph = TannerGraph::from_edges(n, m, &edges)
        .expect("repair loop leaves a simple in-range graph");
    graph.set_meta(crate::graph::CodeMeta {
        family: crate::graph::Family::RandomRegular,
        p: None,
        s: None,
        girth_by_design: Some(6),
        degenerate: false,
        seed: Some(seed),
    });
    Ok(graph)
}
