//! Exhaustive enumeration of F_q-spans in modular Gray-code order.
//!
//! Consecutive combinations differ by adding one basis vector, so callers can
//! keep weights and syndromes up to date incrementally.

use rayon::prelude::*;

/// Default enumeration cap: at most 2^24 combinations.
pub const DEFAULT_CAP_BITS: u32 = 24;

/// Number of combinations q^k, saturating.
pub fn span_size(q: u32, k: usize) -> u128 {
    let mut n: u128 = 1;
    for _ in 0..k {
        n = n.saturating_mul(q as u128);
    }
    n
}

/// Smallest number of bits b with q^k <= 2^b.
pub fn required_bits(q: u32, k: usize) -> u32 {
    let n = span_size(q, k);
    if n <= 1 {
        return 0;
    }
    128 - (n - 1).leading_zeros()
}

pub fn within_cap(q: u32, k: usize, cap_bits: u32) -> bool {
    required_bits(q, k) <= cap_bits
}

/// Walks all q^k coefficient vectors starting from zero. `step(j)` means:
/// coefficient j increases by 1 (mod q). Returns early when `step` is false.
pub fn gray_walk(q: u32, k: usize, mut step: impl FnMut(usize) -> bool) -> bool {
    let mut counter = vec![0u32; k];
    loop {
        let mut j = 0;
        while j < k && counter[j] == q - 1 {
            counter[j] = 0;
            j += 1;
        }
        if j == k {
            return true;
        }
        counter[j] += 1;
        if !step(j) {
            return false;
        }
    }
}

/// Runs `shard(prefix)` for every assignment of the top `top` coefficients
/// (prefix lists their values, lowest index first) in parallel and collects the
/// results in a fixed order.
pub fn sharded<T: Send>(
    q: u32,
    top: usize,
    threads: usize,
    shard: impl Fn(&[u32]) -> T + Sync,
) -> Vec<T> {
    let total = span_size(q, top) as usize;
    let prefixes: Vec<Vec<u32>> = (0..total)
        .map(|mut x| {
            (0..top)
                .map(|_| {
                    let d = (x % q as usize) as u32;
                    x /= q as usize;
                    d
                })
                .collect()
        })
        .collect();
    if threads <= 1 {
        return prefixes.iter().map(|p| shard(p)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| prefixes.par_iter().map(|p| shard(p)).collect())
}

/// Dense vector over F_q with an incrementally maintained Hamming weight.
#[derive(Debug, Clone)]
pub struct WeightedVec {
    q: u32,
    pub values: Vec<u32>,
    pub weight: usize,
}

impl WeightedVec {
    pub fn zeros(q: u32, n: usize) -> Self {
        WeightedVec {
            q,
            values: vec![0; n],
            weight: 0,
        }
    }

    /// Adds c times a sparse vector.
    pub fn add_sparse(&mut self, c: u32, v: &[(usize, u32)]) {
        let q = self.q as u64;
        for &(i, x) in v {
            let old = self.values[i];
            let new = ((old as u64 + c as u64 * x as u64) % q) as u32;
            self.values[i] = new;
            match (old == 0, new == 0) {
                (true, false) => self.weight += 1,
                (false, true) => self.weight -= 1,
                _ => {}
            }
        }
    }
}

/// Dense vector with block weight: the number of blocks carrying a nonzero
/// coordinate.
#[derive(Debug, Clone)]
pub struct BlockWeightedVec<'a> {
    q: u32,
    block_of: &'a [usize],
    pub values: Vec<u32>,
    nonzero_in_block: Vec<usize>,
    pub weight: usize,
}

impl<'a> BlockWeightedVec<'a> {
    pub fn zeros(q: u32, block_of: &'a [usize], blocks: usize) -> Self {
        BlockWeightedVec {
            q,
            block_of,
            values: vec![0; block_of.len()],
            nonzero_in_block: vec![0; blocks],
            weight: 0,
        }
    }

    pub fn add_sparse(&mut self, c: u32, v: &[(usize, u32)]) {
        let q = self.q as u64;
        for &(i, x) in v {
            let old = self.values[i];
            let new = ((old as u64 + c as u64 * x as u64) % q) as u32;
            self.values[i] = new;
            let b = self.block_of[i];
            match (old == 0, new == 0) {
                (true, false) => {
                    if self.nonzero_in_block[b] == 0 {
                        self.weight += 1;
                    }
                    self.nonzero_in_block[b] += 1;
                }
                (false, true) => {
                    self.nonzero_in_block[b] -= 1;
                    if self.nonzero_in_block[b] == 0 {
                        self.weight -= 1;
                    }
                }
                _ => {}
            }
        }
    }

    pub fn block_nonzero(&self, b: usize) -> bool {
        self.nonzero_in_block[b] > 0
    }
}

/// Converts a dense vector to sparse (index, value) form.
pub fn to_sparse(v: &[u32]) -> Vec<(usize, u32)> {
    v.iter()
        .enumerate()
        .filter(|e| *e.1 != 0)
        .map(|(i, &x)| (i, x))
        .collect()
}

/// Minimum weight over vectors sum_j c_j v_j where v = trivial ++ extra and at
/// least one extra coefficient is nonzero. With `blocks`, the weight is the
/// block weight under the given coordinate-to-block map. The result does not
/// depend on `threads`: the search is always split into the same shards and
/// reduced in shard order.
pub fn min_weight_outside(
    q: u32,
    n: usize,
    trivial: &[Vec<u32>],
    extra: &[Vec<u32>],
    blocks: Option<(&[usize], usize)>,
    threads: usize,
) -> Option<(usize, Vec<u32>)> {
    if extra.is_empty() {
        return None;
    }
    let identity: Vec<usize>;
    let (block_of, nblocks) = match blocks {
        Some(b) => b,
        None => {
            identity = (0..n).collect();
            (&identity[..], n)
        }
    };
    let basis: Vec<Vec<(usize, u32)>> = trivial.iter().chain(extra).map(|v| to_sparse(v)).collect();
    let k = basis.len();
    let nt = trivial.len();
    let mut top = 0;
    while top < extra.len() && span_size(q, top + 1) <= 64 {
        top += 1;
    }
    let inner = k - top;
    let results = sharded(q, top, threads, |prefix| {
        let mut v = BlockWeightedVec::zeros(q, block_of, nblocks);
        let mut nonzero_extra = 0usize;
        for (t, &c) in prefix.iter().enumerate() {
            if c != 0 {
                v.add_sparse(c, &basis[inner + t]);
                nonzero_extra += 1;
            }
        }
        let mut best: Option<(usize, Vec<u32>)> = None;
        let consider = |v: &BlockWeightedVec, nz: usize, best: &mut Option<(usize, Vec<u32>)>| {
            if nz > 0 && best.as_ref().map_or(true, |b| v.weight < b.0) {
                *best = Some((v.weight, v.values.clone()));
            }
        };
        consider(&v, nonzero_extra, &mut best);
        let mut coeffs = vec![0u32; inner];
        gray_walk(q, inner, |j| {
            let old = coeffs[j];
            coeffs[j] = (old + 1) % q;
            if j >= nt {
                if old == 0 {
                    nonzero_extra += 1;
                } else if coeffs[j] == 0 {
                    nonzero_extra -= 1;
                }
            }
            v.add_sparse(1, &basis[j]);
            consider(&v, nonzero_extra, &mut best);
            true
        });
        best
    });
    let mut best: Option<(usize, Vec<u32>)> = None;
    for r in results.into_iter().flatten() {
        if best.as_ref().map_or(true, |b| r.0 < b.0) {
            best = Some(r);
        }
    }
    best
}
