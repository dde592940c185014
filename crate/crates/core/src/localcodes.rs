//! Classical local codes: distances, coset leaders, Delta-minimal codewords of
//! dual tensor codes and the product-expansion check.
//!
//! A codeword of ker(h (x) h') is stored as a matrix x with rows in the h-space
//! (length w_a = columns of h) and columns in the h'-space (length w_b), so
//! that h' x h^T = 0.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::enumerate::{gray_walk, required_bits, span_size, to_sparse, WeightedVec, DEFAULT_CAP_BITS};
use crate::gf::{vector, Field, Matrix};

/// Coset-leader tables are built only when q^r fits in this many bits.
pub const LEADER_TABLE_BITS: u32 = 22;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocalCodeError {
    #[error("coset leader table needs q^r = 2^{needed} entries, cap is 2^{cap}")]
    TableTooLarge { needed: u32, cap: u32 },
    #[error("enumeration needs 2^{needed} steps, cap is 2^{cap}")]
    EnumerationTooLarge { needed: u32, cap: u32 },
    #[error("syndrome length {found} does not match {expected} checks")]
    SyndromeLength { expected: usize, found: usize },
    #[error("matrix shape {found:?} does not match the codes, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("no admissible local pair after {0} tries")]
    SamplerExhausted(usize),
    #[error("invalid sampler settings: {0}")]
    BadSampler(String),
}

/// Classical code ker h.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCode {
    h: Matrix,
    rank: usize,
    kernel: Vec<Vec<u32>>,
}

impl LocalCode {
    pub fn new(h: Matrix) -> Self {
        let red = h.gauss_reduce();
        LocalCode {
            rank: red.rank,
            kernel: red.kernel,
            h,
        }
    }

    pub fn from_dense(field: Field, rows: &[Vec<u32>]) -> Result<Self, crate::gf::GfError> {
        Ok(Self::new(Matrix::from_dense(field, rows)?))
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn field(&self) -> Field {
        self.h.field()
    }

    /// Code length (columns of h).
    pub fn w(&self) -> usize {
        self.h.cols()
    }

    /// Number of checks (rows of h).
    pub fn r(&self) -> usize {
        self.h.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.h.rows()
    }

    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn kernel_basis(&self) -> &[Vec<u32>] {
        &self.kernel
    }

    pub fn syndrome(&self, x: &[u32]) -> Vec<u32> {
        self.h.mul_vec(x)
    }

    pub fn is_codeword(&self, x: &[u32]) -> bool {
        self.syndrome(x).iter().all(|&s| s == 0)
    }
}

/// Minimum distance: exact, or bounds when enumeration is out of reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    /// None means the code is zero (distance infinity).
    Exact(Option<usize>),
    Bounds { lower: usize, upper: Option<usize> },
}

impl Distance {
    pub fn exact(&self) -> Option<Option<usize>> {
        match self {
            Distance::Exact(d) => Some(*d),
            Distance::Bounds { .. } => None,
        }
    }

    /// A value guaranteed not to exceed the true distance (infinity as usize::MAX).
    pub fn lower(&self) -> usize {
        match self {
            Distance::Exact(d) => d.unwrap_or(usize::MAX),
            Distance::Bounds { lower, .. } => *lower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeProfile {
    pub n: usize,
    pub k: usize,
    pub d: Distance,
}

/// Minimum nonzero weight of the span of `basis`, by exhaustive Gray-code walk.
pub fn min_weight_of_span(field: Field, n: usize, basis: &[Vec<u32>]) -> Option<usize> {
    if basis.is_empty() {
        return None;
    }
    let sparse: Vec<_> = basis.iter().map(|b| to_sparse(b)).collect();
    let mut cur = WeightedVec::zeros(field.q(), n);
    let mut best = usize::MAX;
    gray_walk(field.q(), basis.len(), |j| {
        cur.add_sparse(1, &sparse[j]);
        if cur.weight > 0 && cur.weight < best {
            best = cur.weight;
        }
        best > 1
    });
    Some(best)
}

/// (n, k, d) of ker h. Exhaustive when q^k fits in `cap_bits`; otherwise a
/// lower bound from column independence and an upper bound from sampling.
pub fn code_profile(code: &LocalCode, cap_bits: u32) -> CodeProfile {
    let (n, k) = (code.w(), code.dim());
    let q = code.field().q();
    let d = if k == 0 {
        Distance::Exact(None)
    } else if required_bits(q, k) <= cap_bits {
        Distance::Exact(min_weight_of_span(code.field(), n, code.kernel_basis()))
    } else {
        let lower = distance_lower_bound(code, 1 << 20);
        let upper = sampled_upper_bound(code, 4096, 0);
        Distance::Bounds {
            lower,
            upper: Some(upper),
        }
    };
    CodeProfile { n, k, d }
}

/// Distance from column dependence: the smallest t such that some t columns of
/// h are linearly dependent. Independent of the kernel enumeration.
pub fn distance_by_column_dependence(code: &LocalCode) -> Option<usize> {
    if code.dim() == 0 {
        return None;
    }
    let n = code.w();
    let cols: Vec<Vec<u32>> = (0..n).map(|j| (0..code.r()).map(|i| code.h.get(i, j)).collect()).collect();
    for t in 1..=n {
        let mut found = false;
        for_each_subset(n, t, |s| {
            let rows: Vec<Vec<u32>> = s.iter().map(|&j| cols[j].clone()).collect();
            let m = Matrix::from_dense_with_cols(code.field(), &rows, code.r()).unwrap();
            if m.rank() < t {
                found = true;
                return false;
            }
            true
        });
        if found {
            return Some(t);
        }
    }
    unreachable!("a nonzero kernel has dependent columns")
}

/// Lower bound on d by checking t-subsets of columns for independence within
/// a budget of subset checks.
pub fn distance_lower_bound(code: &LocalCode, budget: usize) -> usize {
    let n = code.w();
    let cols: Vec<Vec<u32>> = (0..n).map(|j| (0..code.r()).map(|i| code.h.get(i, j)).collect()).collect();
    let mut spent = 0usize;
    for t in 1..=n {
        let mut dependent = false;
        let mut exhausted = false;
        for_each_subset(n, t, |s| {
            spent += 1;
            if spent > budget {
                exhausted = true;
                return false;
            }
            let rows: Vec<Vec<u32>> = s.iter().map(|&j| cols[j].clone()).collect();
            let m = Matrix::from_dense_with_cols(code.field(), &rows, code.r()).unwrap();
            if m.rank() < t {
                dependent = true;
                return false;
            }
            true
        });
        if dependent {
            return t;
        }
        if exhausted {
            return t;
        }
    }
    n + 1
}

/// Upper bound on d: weights of random codewords and basis vectors.
pub fn sampled_upper_bound(code: &LocalCode, samples: usize, seed: u64) -> usize {
    let f = code.field();
    let basis = code.kernel_basis();
    let mut best = basis.iter().map(|b| vector::weight(b)).min().unwrap_or(usize::MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut v = vec![0u32; code.w()];
        for b in basis {
            let c = rng.gen_range(0..f.q());
            vector::add_scaled(f, &mut v, c, b);
        }
        let w = vector::weight(&v);
        if w > 0 {
            best = best.min(w);
        }
    }
    best
}

/// Calls `visit` on each t-subset of 0..n in lexicographic order; stops when
/// `visit` returns false.
pub fn for_each_subset(n: usize, t: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if t > n {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(i) = (0..t).rev().find(|&i| idx[i] != i + n - t) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn syndrome_key(q: u32, s: &[u32]) -> u64 {
    s.iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
}

/// Visits vectors by increasing weight; supports in lexicographic order, then
/// values in lexicographic order. `visit(support, values, syndrome)` returns
/// false to stop. Weights above `max_weight` are not visited.
fn walk_by_weight(
    code: &LocalCode,
    max_weight: usize,
    mut visit: impl FnMut(&[usize], &[u32], &[u32]) -> bool,
) {
    let f = code.field();
    let (n, r) = (code.w(), code.r());
    let cols: Vec<Vec<u32>> = (0..n).map(|j| (0..r).map(|i| code.h.get(i, j)).collect()).collect();
    if !visit(&[], &[], &vec![0; r]) {
        return;
    }
    for t in 1..=max_weight.min(n) {
        let mut stop = false;
        for_each_subset(n, t, |support| {
            let mut vals = vec![1u32; t];
            loop {
                let mut syn = vec![0u32; r];
                for (&j, &v) in support.iter().zip(&vals) {
                    vector::add_scaled(f, &mut syn, v, &cols[j]);
                }
                if !visit(support, &vals, &syn) {
                    stop = true;
                    return false;
                }
                // next value tuple, last coordinate fastest
                let Some(i) = (0..t).rev().find(|&i| vals[i] < f.q() - 1) else {
                    break;
                };
                vals[i] += 1;
                for v in vals[i + 1..].iter_mut() {
                    *v = 1;
                }
            }
            true
        });
        if stop {
            return;
        }
    }
}

/// Minimal-weight vector for every reachable syndrome of ker h.
#[derive(Debug, Clone)]
pub struct CosetLeaderTable {
    field: Field,
    n: usize,
    r: usize,
    leaders: HashMap<u64, (Vec<usize>, Vec<u32>)>,
}

impl CosetLeaderTable {
    pub fn build(code: &LocalCode, cap_bits: u32) -> Result<Self, LocalCodeError> {
        let q = code.field().q();
        let needed = required_bits(q, code.r());
        if needed > cap_bits {
            return Err(LocalCodeError::TableTooLarge { needed, cap: cap_bits });
        }
        let reachable = span_size(q, code.rank()) as usize;
        let mut leaders = HashMap::with_capacity(reachable);
        walk_by_weight(code, code.w(), |support, vals, syn| {
            leaders
                .entry(syndrome_key(q, syn))
                .or_insert_with(|| (support.to_vec(), vals.to_vec()));
            leaders.len() < reachable
        });
        Ok(CosetLeaderTable {
            field: code.field(),
            n: code.w(),
            r: code.r(),
            leaders,
        })
    }

    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    /// Coset leader for a syndrome, None if the syndrome is not in im h.
    pub fn leader(&self, syndrome: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(syndrome.len(), self.r);
        let (s, v) = self.leaders.get(&syndrome_key(self.field.q(), syndrome))?;
        let mut out = vec![0; self.n];
        for (&j, &x) in s.iter().zip(v) {
            out[j] = x;
        }
        Some(out)
    }

    pub fn leader_weight(&self, syndrome: &[u32]) -> Option<usize> {
        self.leaders
            .get(&syndrome_key(self.field.q(), syndrome))
            .map(|(s, _)| s.len())
    }

    /// d(x, ker h) = wt(leader(h x)).
    pub fn distance_to_code(&self, code: &LocalCode, x: &[u32]) -> usize {
        self.leader_weight(&code.syndrome(x)).expect("h x lies in im h")
    }

    /// Leader weights for all syndromes, keyed by the base-q syndrome number.
    pub fn weights(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.leaders.iter().map(|(&k, (s, _))| (k, s.len()))
    }
}

/// Coset leader by per-query search up to `max_weight`, same tie-break as the
/// table: lowest weight, then lexicographic support, then values.
pub fn coset_leader_search(code: &LocalCode, syndrome: &[u32], max_weight: usize) -> Result<Option<Vec<u32>>, LocalCodeError> {
    if syndrome.len() != code.r() {
        return Err(LocalCodeError::SyndromeLength {
            expected: code.r(),
            found: syndrome.len(),
        });
    }
    let mut out = None;
    walk_by_weight(code, max_weight, |support, vals, syn| {
        if syn == syndrome {
            let mut v = vec![0; code.w()];
            for (&j, &x) in support.iter().zip(vals) {
                v[j] = x;
            }
            out = Some(v);
            return false;
        }
        true
    });
    Ok(out)
}

/// Coset leader via a table when q^r fits the cap, else refuses.
pub fn coset_leader(code: &LocalCode, syndrome: &[u32]) -> Result<Option<Vec<u32>>, LocalCodeError> {
    if syndrome.len() != code.r() {
        return Err(LocalCodeError::SyndromeLength {
            expected: code.r(),
            found: syndrome.len(),
        });
    }
    Ok(CosetLeaderTable::build(code, LEADER_TABLE_BITS)?.leader(syndrome))
}

pub fn distance_to_code(code: &LocalCode, x: &[u32]) -> Result<usize, LocalCodeError> {
    let table = CosetLeaderTable::build(code, LEADER_TABLE_BITS)?;
    Ok(table.distance_to_code(code, x))
}

/// Precomputed data for Delta-minimality checks of w_b x w_a matrices.
pub struct MinimalityOracle<'a> {
    ca: &'a LocalCode,
    cb: &'a LocalCode,
    ta: CosetLeaderTable,
    tb: CosetLeaderTable,
}

impl<'a> MinimalityOracle<'a> {
    pub fn new(ca: &'a LocalCode, cb: &'a LocalCode) -> Result<Self, LocalCodeError> {
        Ok(MinimalityOracle {
            ta: CosetLeaderTable::build(ca, LEADER_TABLE_BITS)?,
            tb: CosetLeaderTable::build(cb, LEADER_TABLE_BITS)?,
            ca,
            cb,
        })
    }

    /// Largest weight drop achievable on any row (via ker h) or column (via
    /// ker h'): max of wt - d(., code).
    pub fn max_excess(&self, x: &[Vec<u32>]) -> usize {
        let mut worst = 0;
        for row in x {
            let w = vector::weight(row);
            if w > 0 {
                worst = worst.max(w - self.ta.distance_to_code(self.ca, row));
            }
        }
        for j in 0..self.ca.w() {
            let col: Vec<u32> = x.iter().map(|r| r[j]).collect();
            let w = vector::weight(&col);
            if w > 0 {
                worst = worst.max(w - self.tb.distance_to_code(self.cb, &col));
            }
        }
        worst
    }

    pub fn is_delta_minimal(&self, x: &[Vec<u32>], delta: usize) -> bool {
        self.max_excess(x) <= delta
    }
}

/// Checks the Delta-minimality conditions for x (rows vs ker h, columns vs
/// ker h').
pub fn is_delta_minimal(x: &[Vec<u32>], ca: &LocalCode, cb: &LocalCode, delta: usize) -> Result<bool, LocalCodeError> {
    check_shape(x, ca, cb)?;
    Ok(MinimalityOracle::new(ca, cb)?.is_delta_minimal(x, delta))
}

fn check_shape(x: &[Vec<u32>], ca: &LocalCode, cb: &LocalCode) -> Result<(), LocalCodeError> {
    let found = (x.len(), x.first().map_or(0, |r| r.len()));
    if found != (cb.w(), ca.w()) || x.iter().any(|r| r.len() != ca.w()) {
        return Err(LocalCodeError::Shape {
            expected: (cb.w(), ca.w()),
            found,
        });
    }
    Ok(())
}

/// True when h' x h^T = 0.
pub fn is_tensor_codeword(x: &[Vec<u32>], ca: &LocalCode, cb: &LocalCode) -> bool {
    let f = ca.field();
    let xm = Matrix::from_dense_with_cols(f, x, ca.w()).unwrap();
    cb.h().mul(&xm).unwrap().mul(&ca.h().transpose()).unwrap().is_zero()
}

/// Basis of ker(h (x) h') as w_b x w_a matrices.
pub fn tensor_codeword_basis(ca: &LocalCode, cb: &LocalCode) -> Vec<Vec<Vec<u32>>> {
    let m = cb.h().kron(ca.h()).unwrap();
    let wa = ca.w();
    m.kernel()
        .into_iter()
        .map(|v| v.chunks(wa).map(|c| c.to_vec()).collect())
        .collect()
}

/// Minimum of wt(x restricted to rows A x cols B) over |A| = rows - m,
/// |B| = cols - m; returns the weight and the chosen (A, B).
pub fn min_window_weight(x: &[Vec<u32>], m: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let (nr, nc) = (x.len(), x.first().map_or(0, |r| r.len()));
    let md = m.min(nr).min(nc);
    let mut best = (usize::MAX, Vec::new(), Vec::new());
    for_each_subset(nc, md, |dropped_cols| {
        let mut keep_col = vec![true; nc];
        for &j in dropped_cols {
            keep_col[j] = false;
        }
        let mut rw: Vec<(usize, usize)> = x
            .iter()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(&keep_col).filter(|(&v, &k)| k && v != 0).count(), i))
            .collect();
        // drop the m heaviest rows; ties drop the lower index
        rw.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let total: usize = rw[md..].iter().map(|e| e.0).sum();
        if total < best.0 {
            let mut rows: Vec<usize> = rw[md..].iter().map(|e| e.1).collect();
            rows.sort_unstable();
            let cols: Vec<usize> = (0..nc).filter(|&j| keep_col[j]).collect();
            best = (total, rows, cols);
        }
        best.0 > 0
    });
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PexpParams {
    pub s: usize,
    pub m: usize,
    pub beta: f64,
    /// Overrides floor(beta w) when set.
    pub delta: Option<usize>,
}

impl PexpParams {
    pub fn delta_for(&self, w: usize) -> usize {
        self.delta.unwrap_or((self.beta * w as f64).floor() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized { seed: u64, restarts: usize },
}

/// A nonzero Delta-minimal codeword with a light window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PexpCounterexample {
    pub x: Vec<Vec<u32>>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub window_weight: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PexpVerdict {
    /// In randomized mode `true` only means not falsified.
    pub holds: bool,
    pub counterexample: Option<PexpCounterexample>,
    pub mode: SearchMode,
    pub delta: usize,
    /// Smallest window weight seen over Delta-minimal nonzero codewords.
    pub min_window_weight: Option<usize>,
    pub minimal_codewords: u64,
    pub kernel_dim: usize,
}

/// Exhaustive up to kernel dimension 22 (or the given cap), otherwise seeded
/// local search.
pub fn product_expansion_check(ca: &LocalCode, cb: &LocalCode, p: &PexpParams, cap_bits: u32, seed: u64) -> Result<PexpVerdict, LocalCodeError> {
    let basis = tensor_codeword_basis(ca, cb);
    let q = ca.field().q();
    if required_bits(q, basis.len()) <= cap_bits.min(LEADER_TABLE_BITS) {
        pexp_exhaustive(ca, cb, p, &basis)
    } else {
        pexp_randomized(ca, cb, p, &basis, seed, 2000)
    }
}

pub fn pexp_exhaustive(ca: &LocalCode, cb: &LocalCode, p: &PexpParams, basis: &[Vec<Vec<u32>>]) -> Result<PexpVerdict, LocalCodeError> {
    let f = ca.field();
    let delta = p.delta_for(ca.w().max(cb.w()));
    let oracle = MinimalityOracle::new(ca, cb)?;
    let (wa, wb) = (ca.w(), cb.w());
    let flat: Vec<Vec<(usize, u32)>> = basis.iter().map(|b| to_sparse(&b.concat())).collect();
    let mut cur = WeightedVec::zeros(f.q(), wa * wb);
    let mut best: Option<PexpCounterexample> = None;
    let mut min_w: Option<usize> = None;
    let mut count = 0u64;
    gray_walk(f.q(), basis.len(), |j| {
        cur.add_sparse(1, &flat[j]);
        if cur.weight == 0 {
            return true;
        }
        let x: Vec<Vec<u32>> = cur.values.chunks(wa).map(|c| c.to_vec()).collect();
        if !oracle.is_delta_minimal(&x, delta) {
            return true;
        }
        count += 1;
        let (ww, rows, cols) = min_window_weight(&x, p.m);
        if min_w.is_none_or(|m| ww < m) {
            min_w = Some(ww);
            if ww < p.s {
                best = Some(PexpCounterexample {
                    x,
                    rows,
                    cols,
                    window_weight: ww,
                });
            }
        }
        true
    });
    Ok(PexpVerdict {
        holds: best.is_none(),
        counterexample: best,
        mode: SearchMode::Exhaustive,
        delta,
        min_window_weight: min_w,
        minimal_codewords: count,
        kernel_dim: basis.len(),
    })
}

/// Seeded local search for a light Delta-minimal codeword. Each restart draws
/// a random codeword and greedily adds basis vectors while the window weight
/// drops.
pub fn pexp_randomized(
    ca: &LocalCode,
    cb: &LocalCode,
    p: &PexpParams,
    basis: &[Vec<Vec<u32>>],
    seed: u64,
    restarts: usize,
) -> Result<PexpVerdict, LocalCodeError> {
    let f = ca.field();
    let delta = p.delta_for(ca.w().max(cb.w()));
    let oracle = MinimalityOracle::new(ca, cb)?;
    let wa = ca.w();
    let flat: Vec<Vec<u32>> = basis.iter().map(|b| b.concat()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<PexpCounterexample> = None;
    let mut min_w: Option<usize> = None;
    let mut count = 0u64;
    let score = |v: &[u32]| -> (usize, usize) {
        let x: Vec<Vec<u32>> = v.chunks(wa).map(|c| c.to_vec()).collect();
        (oracle.max_excess(&x).saturating_sub(delta), min_window_weight(&x, p.m).0)
    };
    for _ in 0..restarts {
        if flat.is_empty() {
            break;
        }
        let mut v = vec![0u32; flat[0].len()];
        while vector::weight(&v) == 0 {
            for b in &flat {
                vector::add_scaled(f, &mut v, rng.gen_range(0..f.q()), b);
            }
        }
        let mut cur = score(&v);
        loop {
            let mut improved = false;
            for b in &flat {
                for c in 1..f.q() {
                    let mut t = v.clone();
                    vector::add_scaled(f, &mut t, c, b);
                    if vector::weight(&t) == 0 {
                        continue;
                    }
                    let s = score(&t);
                    if s < cur {
                        v = t;
                        cur = s;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if cur.0 == 0 {
            count += 1;
            let x: Vec<Vec<u32>> = v.chunks(wa).map(|c| c.to_vec()).collect();
            let (ww, rows, cols) = min_window_weight(&x, p.m);
            if min_w.is_none_or(|m| ww < m) {
                min_w = Some(ww);
                if ww < p.s {
                    best = Some(PexpCounterexample {
                        x,
                        rows,
                        cols,
                        window_weight: ww,
                    });
                }
            }
        }
    }
    Ok(PexpVerdict {
        holds: best.is_none(),
        counterexample: best,
        mode: SearchMode::Randomized { seed, restarts },
        delta,
        min_window_weight: min_w,
        minimal_codewords: count,
        kernel_dim: basis.len(),
    })
}

/// Re-checks a counterexample from scratch.
pub fn validate_counterexample(ca: &LocalCode, cb: &LocalCode, p: &PexpParams, cx: &PexpCounterexample) -> Result<bool, LocalCodeError> {
    check_shape(&cx.x, ca, cb)?;
    let nonzero = cx.x.iter().any(|r| r.iter().any(|&v| v != 0));
    let delta = p.delta_for(ca.w().max(cb.w()));
    let window: usize = cx
        .rows
        .iter()
        .map(|&i| cx.cols.iter().filter(|&&j| cx.x[i][j] != 0).count())
        .sum();
    Ok(nonzero
        && is_tensor_codeword(&cx.x, ca, cb)
        && is_delta_minimal(&cx.x, ca, cb, delta)?
        && cx.rows.len() + p.m >= cb.w()
        && cx.cols.len() + p.m >= ca.w()
        && window == cx.window_weight
        && window < p.s)
}

/// Outcome of checking a structural lemma over all minimal codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCheck {
    pub instances: u64,
    pub violations: u64,
    pub first_violation: Option<Vec<Vec<u32>>>,
}

fn for_each_minimal_codeword(
    ca: &LocalCode,
    cb: &LocalCode,
    delta: usize,
    cap_bits: u32,
    mut visit: impl FnMut(&[Vec<u32>]),
) -> Result<(), LocalCodeError> {
    let basis = tensor_codeword_basis(ca, cb);
    let q = ca.field().q();
    let needed = required_bits(q, basis.len());
    if needed > cap_bits {
        return Err(LocalCodeError::EnumerationTooLarge { needed, cap: cap_bits });
    }
    let oracle = MinimalityOracle::new(ca, cb)?;
    let wa = ca.w();
    let flat: Vec<Vec<(usize, u32)>> = basis.iter().map(|b| to_sparse(&b.concat())).collect();
    let mut cur = WeightedVec::zeros(q, wa * cb.w());
    gray_walk(q, basis.len(), |j| {
        cur.add_sparse(1, &flat[j]);
        if cur.weight > 0 {
            let x: Vec<Vec<u32>> = cur.values.chunks(wa).map(|c| c.to_vec()).collect();
            if oracle.is_delta_minimal(&x, delta) {
                visit(&x);
            }
        }
        true
    });
    Ok(())
}

/// d = min(d(ker h), d(ker h')) with infinity as usize::MAX.
pub fn pair_distance(ca: &LocalCode, cb: &LocalCode) -> usize {
    let da = code_profile(ca, DEFAULT_CAP_BITS).d.lower();
    let db = code_profile(cb, DEFAULT_CAP_BITS).d.lower();
    da.min(db)
}

/// Nonzero-block lemma: a floor(d/3)-minimal codeword vanishing on rows B x
/// cols A (or rows A x cols B) with |A| > w - d/3 and |B| >= w - d + 1 is
/// zero. Counts minimal codewords that contradict this.
pub fn check_nonzero_block_lemma(ca: &LocalCode, cb: &LocalCode, cap_bits: u32) -> Result<LemmaCheck, LocalCodeError> {
    let w = ca.w();
    assert_eq!(w, cb.w(), "square local codes expected");
    let d = pair_distance(ca, cb).min(w + 1);
    let delta = d / 3;
    // smallest admissible sizes; zero blocks only get easier on subsets
    // |A| > w - d/3, i.e. 3|A| > 3w - d
    let a_min = (3 * w).saturating_sub(d) / 3 + 1;
    let b_min = (w + 1).saturating_sub(d);
    let mut out = LemmaCheck {
        instances: 0,
        violations: 0,
        first_violation: None,
    };
    if a_min > w {
        return Ok(out);
    }
    for_each_minimal_codeword(ca, cb, delta, cap_bits, |x| {
        out.instances += 1;
        let xt: Vec<Vec<u32>> = (0..w).map(|j| x.iter().map(|r| r[j]).collect()).collect();
        let bad = [x, xt.as_slice()].iter().any(|m| {
            let mut hit = false;
            for_each_subset(w, a_min, |cols| {
                let zero_rows = m.iter().filter(|r| cols.iter().all(|&j| r[j] == 0)).count();
                if zero_rows >= b_min.max(1) {
                    hit = true;
                    return false;
                }
                true
            });
            hit
        });
        if bad {
            out.violations += 1;
            if out.first_violation.is_none() {
                out.first_violation = Some(x.to_vec());
            }
        }
    })?;
    Ok(out)
}

/// Rank lemma: for m <= d/6 and a floor(d/3)-minimal nonzero codeword with
/// some window of weight below s, rank(h' x) >= ceil(5 d^2 / (36 s)).
pub fn check_rank_lemma(ca: &LocalCode, cb: &LocalCode, m: usize, s: usize, cap_bits: u32) -> Result<LemmaCheck, LocalCodeError> {
    let d = pair_distance(ca, cb).min(ca.w() + 1);
    assert!(6 * m <= d, "rank lemma needs m <= d/6");
    let f = ca.field();
    let need = (5 * d * d).div_ceil(36 * s);
    let mut out = LemmaCheck {
        instances: 0,
        violations: 0,
        first_violation: None,
    };
    for_each_minimal_codeword(ca, cb, d / 3, cap_bits, |x| {
        if min_window_weight(x, m).0 >= s {
            return;
        }
        out.instances += 1;
        let xm = Matrix::from_dense_with_cols(f, x, ca.w()).unwrap();
        let rank = cb.h().mul(&xm).unwrap().rank();
        if rank < need {
            out.violations += 1;
            if out.first_violation.is_none() {
                out.first_violation = Some(x.to_vec());
            }
        }
    })?;
    Ok(out)
}

/// q-ary entropy H_q(x).
pub fn q_entropy(x: f64, q: u32) -> f64 {
    let lq = (q as f64).ln();
    let term = |p: f64| if p <= 0.0 { 0.0 } else { p * p.ln() / lq };
    x * ((q - 1) as f64).ln() / lq - term(x) - term(1.0 - x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    pub q: u32,
    pub w: usize,
    pub r1: f64,
    pub r2: f64,
    pub delta: f64,
    pub max_tries: usize,
    pub seed: u64,
}

/// A sampled pair: ker h and im g'^T (with parity-check h').
#[derive(Debug, Clone)]
pub struct SampledPair {
    pub h: LocalCode,
    pub g_prime: Matrix,
    pub h_prime: LocalCode,
    pub tries: usize,
    pub distance_h: Distance,
    pub distance_g: Distance,
}

/// Draws random h (floor(R1 w) x w) and g' (floor(R2 w) x w) until both have
/// full rank and min(d(ker h), d(im g'^T)) >= floor(delta w).
pub fn sample_local_pair(cfg: &SamplerConfig) -> Result<SampledPair, LocalCodeError> {
    let field = Field::new(cfg.q as u64).map_err(|e| LocalCodeError::BadSampler(e.to_string()))?;
    if !(0.0..1.0).contains(&cfg.r1) || !(0.0..1.0).contains(&cfg.r2) || cfg.w == 0 {
        return Err(LocalCodeError::BadSampler("rates must lie in (0, 1) and w > 0".into()));
    }
    let r1 = (cfg.r1 * cfg.w as f64).floor() as usize;
    let r2 = (cfg.r2 * cfg.w as f64).floor() as usize;
    let need = (cfg.delta * cfg.w as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut random = |rows: usize| -> Matrix {
        let d: Vec<Vec<u32>> = (0..rows)
            .map(|_| (0..cfg.w).map(|_| rng.gen_range(0..cfg.q)).collect())
            .collect();
        Matrix::from_dense_with_cols(field, &d, cfg.w).unwrap()
    };
    for attempt in 1..=cfg.max_tries {
        let h = random(r1);
        let g = random(r2);
        if h.rank() != r1 || g.rank() != r2 {
            continue;
        }
        let ch = LocalCode::new(h);
        let hp = Matrix::from_dense_with_cols(field, &g.kernel(), cfg.w).unwrap();
        let cg = LocalCode::new(hp);
        let dh = code_profile(&ch, DEFAULT_CAP_BITS).d;
        let dg = code_profile(&cg, DEFAULT_CAP_BITS).d;
        if dh.lower() >= need && dg.lower() >= need {
            return Ok(SampledPair {
                h: ch,
                g_prime: g,
                h_prime: cg,
                tries: attempt,
                distance_h: dh,
                distance_g: dg,
            });
        }
    }
    Err(LocalCodeError::SamplerExhausted(cfg.max_tries))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> LocalCode {
        LocalCode::from_dense(
            Field::binary(),
            &[
                vec![1, 0, 1, 0, 1, 0, 1],
                vec![0, 1, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn hamming_profile() {
        let p = code_profile(&hamming(), DEFAULT_CAP_BITS);
        assert_eq!((p.n, p.k, p.d), (7, 4, Distance::Exact(Some(3))));
    }

    #[test]
    fn parity_profile() {
        let c = LocalCode::from_dense(Field::binary(), &[vec![1, 1, 1]]).unwrap();
        let p = code_profile(&c, DEFAULT_CAP_BITS);
        assert_eq!((p.n, p.k, p.d), (3, 2, Distance::Exact(Some(2))));
    }

    #[test]
    fn hamming_leaders_have_weight_one() {
        let c = hamming();
        let t = CosetLeaderTable::build(&c, LEADER_TABLE_BITS).unwrap();
        assert_eq!(t.len(), 8);
        for (k, w) in t.weights() {
            assert_eq!(w, usize::from(k != 0));
        }
    }

    #[test]
    fn leader_tie_break_is_lexicographic() {
        let c = LocalCode::from_dense(Field::binary(), &[vec![1, 1, 1]]).unwrap();
        assert_eq!(coset_leader(&c, &[1]).unwrap(), Some(vec![1, 0, 0]));
    }

    #[test]
    fn entropy_at_half() {
        assert!((q_entropy(0.5, 2) - 1.0).abs() < 1e-12);
    }
}
