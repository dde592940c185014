//! Flip-style decoders: single-coordinate bit-flip for classical codes,
//! star-supported small-set-flip for CSS codes, and a seeded Monte-Carlo
//! harness.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::csscodes::CssCode;
use crate::enumerate::{gray_walk, span_size, WeightedVec};
use crate::gf::{vector, Matrix};

/// Default cap on (subset, value) combinations searched per star.
pub const STAR_SUBSET_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipRule {
    /// Apply the move with the largest syndrome reduction; ties go to the
    /// lowest index, then the lowest value.
    GreedyBest,
    /// Apply the first strictly improving move in a seeded scan order.
    FirstImproving,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub max_iters: usize,
    pub flip_rule: FlipRule,
    pub rng_seed: u64,
    /// Symbol error probability; errors are uniform over nonzero values.
    pub p_err: f64,
    pub subset_cap: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            max_iters: 1000,
            flip_rule: FlipRule::GreedyBest,
            rng_seed: 0,
            p_err: 0.0,
            subset_cap: STAR_SUBSET_CAP,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.p_err) {
            return Err(format!("p_err = {} is not in [0, 1]", self.p_err));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub estimate: Vec<u32>,
    pub converged: bool,
    pub iterations: usize,
    /// Syndrome weight before the first move and after every move.
    pub syndrome_trace: Vec<usize>,
    /// Set when some star exceeded the subset cap and only single
    /// coordinates were tried there.
    pub downgraded: bool,
}

fn columns(h: &Matrix) -> Vec<Vec<(usize, u32)>> {
    let t = h.transpose();
    (0..t.rows()).map(|j| t.row(j).to_vec()).collect()
}

/// Weight of s + c col after the change, without modifying s.
fn weight_after(s: &WeightedVec, col: &[(usize, u32)], c: u32, q: u32) -> usize {
    let mut w = s.weight;
    for &(i, x) in col {
        let old = s.values[i];
        let new = ((old as u64 + c as u64 * x as u64) % q as u64) as u32;
        match (old == 0, new == 0) {
            (true, false) => w += 1,
            (false, true) => w -= 1,
            _ => {}
        }
    }
    w
}

/// Single-coordinate flips that strictly lower the syndrome weight, until the
/// syndrome vanishes or no move improves.
pub fn bitflip_decode(h: &Matrix, y: &[u32], cfg: &DecoderConfig) -> DecodeOutcome {
    let f = h.field();
    let q = f.q();
    let n = h.cols();
    let cols = columns(h);
    let mut est = y.to_vec();
    let mut s = WeightedVec::zeros(q, h.rows());
    for (j, &v) in y.iter().enumerate() {
        if v != 0 {
            s.add_sparse(v, &cols[j]);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    if cfg.flip_rule == FlipRule::FirstImproving {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.rng_seed));
    }
    let mut trace = vec![s.weight];
    let mut iterations = 0;
    while s.weight > 0 && iterations < cfg.max_iters {
        let mut best: Option<(usize, usize, u32)> = None;
        'scan: for &j in &order {
            for v in 0..q {
                if v == est[j] {
                    continue;
                }
                let c = f.sub(v, est[j]);
                let w = weight_after(&s, &cols[j], c, q);
                if w < s.weight && best.map_or(true, |b| w < b.0) {
                    best = Some((w, j, v));
                    if cfg.flip_rule == FlipRule::FirstImproving {
                        break 'scan;
                    }
                }
            }
        }
        let Some((w, j, v)) = best else { break };
        let c = f.sub(v, est[j]);
        s.add_sparse(c, &cols[j]);
        est[j] = v;
        debug_assert_eq!(s.weight, w);
        assert!(w < *trace.last().unwrap(), "syndrome weight must drop");
        trace.push(w);
        iterations += 1;
    }
    DecodeOutcome {
        converged: s.weight == 0,
        estimate: est,
        iterations,
        syndrome_trace: trace,
        downgraded: false,
    }
}

/// Which check matrix produces the syndrome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CssSide {
    /// Syndrome H_X e; corrections are trivial modulo rowspace H_Z.
    X,
    /// Syndrome H_Z e; corrections are trivial modulo rowspace H_X.
    Z,
}

impl CssSide {
    pub fn checks<'a>(&self, code: &'a CssCode) -> &'a Matrix {
        match self {
            CssSide::X => &code.hx,
            CssSide::Z => &code.hz,
        }
    }

    pub fn stabilizers<'a>(&self, code: &'a CssCode) -> &'a Matrix {
        match self {
            CssSide::X => &code.hz,
            CssSide::Z => &code.hx,
        }
    }
}

/// Stars for the small-set-flip search: supports of the generators of the
/// opposite type, deduplicated.
pub fn generator_stars(code: &CssCode, side: CssSide) -> Vec<Vec<usize>> {
    let g = side.stabilizers(code);
    let mut stars: Vec<Vec<usize>> = (0..g.rows())
        .map(|i| g.row(i).iter().map(|e| e.0).collect::<Vec<_>>())
        .filter(|s: &Vec<usize>| !s.is_empty())
        .collect();
    stars.sort();
    stars.dedup();
    stars
}

/// Repeatedly applies the star-supported flip with the largest syndrome
/// reduction (ties: fewer flipped coordinates, then lower star index, then
/// earlier in enumeration order).
pub fn small_set_flip_decode(
    code: &CssCode,
    stars: &[Vec<usize>],
    syndrome: &[u32],
    side: CssSide,
    cfg: &DecoderConfig,
) -> DecodeOutcome {
    let h = side.checks(code);
    let f = h.field();
    let q = f.q();
    let cols = columns(h);
    let mut s = WeightedVec::zeros(q, h.rows());
    s.add_sparse(1, &crate::enumerate::to_sparse(syndrome));
    let mut correction = vec![0u32; h.cols()];
    let mut trace = vec![s.weight];
    let mut iterations = 0;
    let mut downgraded = false;
    while s.weight > 0 && iterations < cfg.max_iters {
        // (new weight, flipped count, star, values on the star)
        let mut best: Option<(usize, usize, usize, Vec<u32>)> = None;
        for (si, star) in stars.iter().enumerate() {
            let combos = span_size(q, star.len());
            if combos > cfg.subset_cap as u128 {
                downgraded = true;
                for (p, &j) in star.iter().enumerate() {
                    for c in 1..q {
                        let w = weight_after(&s, &cols[j], c, q);
                        if w < s.weight && best.as_ref().map_or(true, |b| (w, 1) < (b.0, b.1)) {
                            let mut vals = vec![0; star.len()];
                            vals[p] = c;
                            best = Some((w, 1, si, vals));
                        }
                    }
                }
                continue;
            }
            let mut t = s.clone();
            let mut vals = vec![0u32; star.len()];
            let mut flipped = 0usize;
            gray_walk(q, star.len(), |p| {
                let old = vals[p];
                vals[p] = (old + 1) % q;
                if old == 0 {
                    flipped += 1;
                } else if vals[p] == 0 {
                    flipped -= 1;
                }
                t.add_sparse(1, &cols[star[p]]);
                if flipped > 0 && t.weight < s.weight && best.as_ref().map_or(true, |b| (t.weight, flipped) < (b.0, b.1)) {
                    best = Some((t.weight, flipped, si, vals.clone()));
                }
                true
            });
        }
        let Some((w, _, si, vals)) = best else { break };
        for (&j, &c) in stars[si].iter().zip(&vals) {
            if c != 0 {
                s.add_sparse(c, &cols[j]);
                correction[j] = f.add(correction[j], c);
            }
        }
        debug_assert_eq!(s.weight, w);
        assert!(w < *trace.last().unwrap(), "syndrome weight must drop");
        trace.push(w);
        iterations += 1;
    }
    DecodeOutcome {
        converged: s.weight == 0,
        estimate: correction,
        iterations,
        syndrome_trace: trace,
        downgraded,
    }
}

/// Per-trial seed derived from the run seed (SplitMix64 step).
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    /// Each symbol independently hit with probability `DecoderConfig::p_err`.
    Symmetric,
    /// Exactly this many distinct symbols hit.
    FixedWeight(usize),
}

/// Error vector drawn from the channel.
pub fn sample_error(n: usize, q: u32, channel: Channel, p: f64, rng: &mut impl Rng) -> Vec<u32> {
    let mut e = vec![0u32; n];
    match channel {
        Channel::Symmetric => {
            for x in e.iter_mut() {
                if p >= 1.0 || rng.gen::<f64>() < p {
                    *x = rng.gen_range(1..q);
                }
            }
        }
        Channel::FixedWeight(t) => {
            let idx: Vec<usize> = rand::seq::index::sample(rng, n, t.min(n)).into_vec();
            for j in idx {
                e[j] = rng.gen_range(1..q);
            }
        }
    }
    e
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub trials: u64,
    pub successes: u64,
    /// Hamming weight of the residual error -> count.
    pub residual_weight_histogram: BTreeMap<usize, u64>,
    pub mean_iters: f64,
}

impl TrialReport {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    fn collect(results: Vec<(bool, usize, usize)>) -> Self {
        let mut hist = BTreeMap::new();
        let mut successes = 0;
        let mut iters = 0usize;
        for &(ok, w, it) in &results {
            successes += ok as u64;
            *hist.entry(w).or_insert(0) += 1;
            iters += it;
        }
        let trials = results.len() as u64;
        TrialReport {
            trials,
            successes,
            residual_weight_histogram: hist,
            mean_iters: if trials == 0 { 0.0 } else { iters as f64 / trials as f64 },
        }
    }
}

fn run_trials<T: Send>(trials: usize, threads: usize, f: impl Fn(u64) -> T + Sync + Send) -> Vec<T> {
    if threads <= 1 {
        return (0..trials as u64).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials as u64).into_par_iter().map(f).collect())
}

/// Classical trials: the zero codeword is sent and success means the
/// decoder returns it.
pub fn montecarlo_classical(h: &Matrix, cfg: &DecoderConfig, channel: Channel, trials: usize, threads: usize) -> TrialReport {
    let q = h.field().q();
    let n = h.cols();
    let results = run_trials(trials, threads, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.rng_seed, t));
        let e = sample_error(n, q, channel, cfg.p_err, &mut rng);
        let mut c = *cfg;
        c.rng_seed = trial_seed(cfg.rng_seed ^ 0x5EED, t);
        let out = bitflip_decode(h, &e, &c);
        let w = vector::weight(&out.estimate);
        (out.converged && w == 0, w, out.iterations)
    });
    TrialReport::collect(results)
}

/// CSS trials: success means the residual e - correction lies in the row
/// space of the opposite check matrix.
pub fn montecarlo_css(
    code: &CssCode,
    side: CssSide,
    cfg: &DecoderConfig,
    channel: Channel,
    trials: usize,
    threads: usize,
) -> TrialReport {
    let h = side.checks(code);
    let f = h.field();
    let stars = generator_stars(code, side);
    let trivial = side.stabilizers(code).row_space();
    let results = run_trials(trials, threads, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.rng_seed, t));
        let e = sample_error(code.n, f.q(), channel, cfg.p_err, &mut rng);
        let syn = h.mul_vec(&e);
        let out = small_set_flip_decode(code, &stars, &syn, side, cfg);
        let residual = vector::sub(f, &e, &out.estimate);
        let ok = out.converged && trivial.contains(&residual);
        (ok, vector::weight(&residual), out.iterations)
    });
    TrialReport::collect(results)
}
