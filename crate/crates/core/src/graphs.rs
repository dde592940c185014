//! Multigraphs, voltage lifts, Cayley graphs, spectra and edge expansion.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groups::FiniteGroup;

/// Default vertex cap for dense eigensolves.
pub const SPECTRAL_CAP: usize = 6000;

/// Graphs up to this size are solved by cyclic Jacobi; larger ones by
/// Householder tridiagonalization and implicit QL.
pub const JACOBI_LIMIT: usize = 256;

/// Exhaustive subset checks are limited to this many vertices.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{expected} voltages needed, got {found}")]
    VoltageCount { expected: usize, found: usize },
    #[error("voltage {0} is not a group element")]
    BadVoltage(u32),
    #[error("generating set is not closed under inverses")]
    NotSymmetric,
    #[error("generator {0} is repeated, the double cover would have parallel edges")]
    DuplicateGenerator(u32),
    #[error("eigensolve of {n} vertices exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("exhaustive check limited to {limit} vertices, graph has {n}")]
    ExhaustiveTooLarge { n: usize, limit: usize },
}

/// Undirected multigraph with a fixed orientation (u, v) for every edge.
/// Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
        }
        Ok(Multigraph { n, edges })
    }

    /// B_w: one vertex with w loops.
    pub fn bouquet(w: usize) -> Self {
        Multigraph {
            n: 1,
            edges: vec![(0, 0); w],
        }
    }

    /// D_w: two vertices joined by w parallel edges oriented 0 -> 1.
    pub fn dipole(w: usize) -> Self {
        Multigraph {
            n: 2,
            edges: vec![(0, 1); w],
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        assert!(u < self.n && v < self.n);
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count_total(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Incidences (edge, endpoint slot) at every vertex, in edge order; a loop
    /// appears twice (slot 0 then slot 1).
    pub fn incidences(&self) -> Vec<Vec<(usize, u8)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push((e, 0));
            inc[v].push((e, 1));
        }
        inc
    }

    /// Degree with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        let first = *d.first()?;
        d.iter().all(|&x| x == first).then_some(first)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbor_lists();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Adjacency counts; a loop contributes 2 on the diagonal.
    pub fn adjacency(&self) -> Adjacency {
        let mut a = Adjacency::zeros(self.n);
        for &(u, v) in &self.edges {
            a.counts[u * self.n + v] += 1;
            a.counts[v * self.n + u] += 1;
        }
        a
    }

    /// Edge list text: "n m" then one "u v" line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// Dense symmetric adjacency counts, used for expansion checks and squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    counts: Vec<u64>,
}

impl Adjacency {
    pub fn zeros(n: usize) -> Self {
        Adjacency {
            n,
            counts: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.counts[u * self.n + v]
    }

    pub fn add(&mut self, u: usize, v: usize, c: u64) {
        self.counts[u * self.n + v] += c;
    }

    /// A^2: counts length-2 walks.
    pub fn square(&self) -> Adjacency {
        let n = self.n;
        let mut out = Adjacency::zeros(n);
        for u in 0..n {
            for k in 0..n {
                let a = self.get(u, k);
                if a == 0 {
                    continue;
                }
                for v in 0..n {
                    out.counts[u * n + v] += a * self.get(k, v);
                }
            }
        }
        out
    }

    pub fn row_sum(&self, u: usize) -> u64 {
        self.counts[u * self.n..(u + 1) * self.n].iter().sum()
    }

    /// |E(S, T)| = 1_S^T A 1_T; edges inside S and T count twice, loops twice.
    pub fn edge_count(&self, s: &[usize], t: &[usize]) -> u64 {
        s.iter().map(|&u| t.iter().map(|&v| self.get(u, v)).sum::<u64>()).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }
}

/// A graph lift together with its base data and group action.
#[derive(Debug, Clone)]
pub struct Lift {
    pub graph: Multigraph,
    pub base: Multigraph,
    pub group: Arc<FiniteGroup>,
    pub voltages: Vec<u32>,
}

impl Lift {
    #[inline]
    pub fn vertex_index(&self, v: usize, g: u32) -> usize {
        v * self.group.order() + g as usize
    }

    #[inline]
    pub fn edge_index(&self, e: usize, g: u32) -> usize {
        e * self.group.order() + g as usize
    }

    pub fn split_vertex(&self, x: usize) -> (usize, u32) {
        let m = self.group.order();
        (x / m, (x % m) as u32)
    }

    pub fn split_edge(&self, x: usize) -> (usize, u32) {
        self.split_vertex(x)
    }

    /// Right action (v, g) h = (v, g h).
    pub fn act_vertex(&self, x: usize, h: u32) -> usize {
        let (v, g) = self.split_vertex(x);
        self.vertex_index(v, self.group.mul(g, h))
    }

    pub fn act_edge(&self, x: usize, h: u32) -> usize {
        let (e, g) = self.split_edge(x);
        self.edge_index(e, self.group.mul(g, h))
    }
}

/// Derived graph: edge (e, g) joins (v, g) to (v', voltage(e) g).
pub fn derive_lift(base: &Multigraph, group: Arc<FiniteGroup>, voltages: &[u32]) -> Result<Lift, GraphError> {
    if voltages.len() != base.edge_count_total() {
        return Err(GraphError::VoltageCount {
            expected: base.edge_count_total(),
            found: voltages.len(),
        });
    }
    let m = group.order();
    if let Some(&bad) = voltages.iter().find(|&&x| x as usize >= m) {
        return Err(GraphError::BadVoltage(bad));
    }
    let mut edges = Vec::with_capacity(base.edge_count_total() * m);
    for (e, &(u, v)) in base.edges().iter().enumerate() {
        for g in 0..m as u32 {
            edges.push((u * m + g as usize, v * m + group.mul(voltages[e], g) as usize));
        }
    }
    Ok(Lift {
        graph: Multigraph {
            n: base.vertex_count() * m,
            edges,
        },
        base: base.clone(),
        group,
        voltages: voltages.to_vec(),
    })
}

/// Bipartite double cover Cay_2(G, S): the lift of D_w with voltages s_i, so
/// edges are {(g, 0), (s g, 1)}.
pub fn cayley_double_cover(group: Arc<FiniteGroup>, gens: &[u32]) -> Result<Lift, GraphError> {
    check_generators(&group, gens)?;
    derive_lift(&Multigraph::dipole(gens.len()), group, gens)
}

/// Cayley graph Cay(G, S) with edges {g, s g}, each undirected edge once.
pub fn cayley_graph(group: &FiniteGroup, gens: &[u32]) -> Result<Multigraph, GraphError> {
    check_generators(group, gens)?;
    let n = group.order();
    let mut edges = Vec::new();
    for &s in gens {
        let si = group.inv(s);
        for g in 0..n as u32 {
            let h = group.mul(s, g);
            // {g, s g} is also produced by (s^-1, s g); keep one of the two
            let keep = if si == s { g < h } else { s < si };
            if keep {
                edges.push((g as usize, h as usize));
            }
        }
    }
    Ok(Multigraph { n, edges })
}

fn check_generators(group: &FiniteGroup, gens: &[u32]) -> Result<(), GraphError> {
    let mut seen = std::collections::HashSet::new();
    for &s in gens {
        if s as usize >= group.order() {
            return Err(GraphError::BadVoltage(s));
        }
        if !seen.insert(s) {
            return Err(GraphError::DuplicateGenerator(s));
        }
    }
    if !group.is_symmetric_set(gens) {
        return Err(GraphError::NotSymmetric);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    Jacobi,
    TridiagonalQl,
}

/// Adjacency spectrum in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    pub eigenvalues: Vec<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_min: f64,
    /// max(|lambda_2|, |lambda_n|)
    pub lambda_abs: f64,
    pub tolerance: f64,
    pub method: EigenMethod,
}

pub fn spectral_profile(g: &Multigraph, cap: usize) -> Result<SpectralProfile, GraphError> {
    spectral_profile_of(&g.adjacency(), cap)
}

pub fn spectral_profile_of(a: &Adjacency, cap: usize) -> Result<SpectralProfile, GraphError> {
    let n = a.n();
    if n > cap {
        return Err(GraphError::TooLarge { n, cap });
    }
    let (mut ev, method) = if n <= JACOBI_LIMIT {
        (jacobi_eigenvalues(a.to_f64(), n), EigenMethod::Jacobi)
    } else {
        (symmetric_eigenvalues(a.to_f64(), n), EigenMethod::TridiagonalQl)
    };
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let lambda1 = ev.first().copied().unwrap_or(0.0);
    let lambda2 = ev.get(1).copied().unwrap_or(0.0);
    let lambda_min = ev.last().copied().unwrap_or(0.0);
    let lambda_abs = if n >= 2 { lambda2.abs().max(lambda_min.abs()) } else { 0.0 };
    Ok(SpectralProfile {
        eigenvalues: ev,
        lambda1,
        lambda2,
        lambda_min,
        lambda_abs,
        tolerance: 1e-6,
        method,
    })
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// iterated until the off-diagonal norm drops below 1e-9.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off < 1e-9 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Eigenvalues of a dense symmetric matrix: Householder reduction to
/// tridiagonal form followed by implicit QL with Wilkinson shifts.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Vec::new();
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    // tred2 without accumulating transformations
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                // p = A u / h from the lower triangle, row by row
                let (rows, tail) = a.split_at(i * n);
                let u = &tail[..=l];
                e[..=l].iter_mut().for_each(|x| *x = 0.0);
                for j in 0..=l {
                    let row = &rows[j * n..j * n + j];
                    let uj = u[j];
                    let mut acc = rows[j * n + j] * uj;
                    for (k, &ajk) in row.iter().enumerate() {
                        acc += ajk * u[k];
                        e[k] += ajk * uj;
                    }
                    e[j] += acc;
                }
                let mut f = 0.0;
                for j in 0..=l {
                    e[j] /= h;
                    f += e[j] * u[j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    // tqli
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let norm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                // absolute floor keeps clusters at zero from stalling
                if e[m].abs() <= f64::EPSILON * (dd + norm * 1e-2) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter < 200, "QL iteration did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// Which expansion lemma produced a certificate step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionRule {
    /// (n, w, lambda)-expander is (lambda n / w, 2 lambda)-edge-expanding.
    Spectral,
    /// A G-lift of an (a, lambda) graph is (a, |G| lambda).
    Lift,
    /// Double cover of the LPS graph on n vertices: (n / sqrt w, 8 sqrt w).
    RamanujanCover,
    /// Square of a w-regular (a, lambda) graph: (a / w, 2 lambda^2 (1 + ln w)).
    Square,
    /// Product skeleton Lambda: (a, 2 lambda).
    Skeleton,
    /// Square of the skeleton: (a / 2w, 8 lambda^2 (ln w + 2)).
    SkeletonSquare,
}

impl fmt::Display for ExpansionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExpansionRule::Spectral => "spectral",
            ExpansionRule::Lift => "lift",
            ExpansionRule::RamanujanCover => "ramanujan-cover",
            ExpansionRule::Square => "square",
            ExpansionRule::Skeleton => "skeleton",
            ExpansionRule::SkeletonSquare => "skeleton-square",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateStep {
    pub rule: ExpansionRule,
    pub a: f64,
    pub lambda: f64,
}

/// (a, lambda)-edge-expansion bound with the rules that derived it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCertificate {
    pub a: f64,
    pub lambda: f64,
    pub chain: Vec<CertificateStep>,
}

impl ExpansionCertificate {
    fn push(mut self, rule: ExpansionRule, a: f64, lambda: f64) -> Self {
        self.a = a;
        self.lambda = lambda;
        self.chain.push(CertificateStep { rule, a, lambda });
        self
    }

    pub fn from_spectrum(n: usize, w: usize, lambda: f64) -> Self {
        let start = ExpansionCertificate {
            a: 0.0,
            lambda: 0.0,
            chain: Vec::new(),
        };
        start.push(ExpansionRule::Spectral, lambda * n as f64 / w as f64, 2.0 * lambda)
    }

    pub fn ramanujan_cover(n: usize, w: usize) -> Self {
        let start = ExpansionCertificate {
            a: 0.0,
            lambda: 0.0,
            chain: Vec::new(),
        };
        let sw = (w as f64).sqrt();
        start.push(ExpansionRule::RamanujanCover, n as f64 / sw, 8.0 * sw)
    }

    pub fn lift(self, group_order: usize) -> Self {
        let (a, l) = (self.a, self.lambda * group_order as f64);
        self.push(ExpansionRule::Lift, a, l)
    }

    pub fn square(self, w: usize) -> Self {
        let wf = w as f64;
        let (a, l) = (self.a / wf, 2.0 * self.lambda * self.lambda * (1.0 + wf.ln()));
        self.push(ExpansionRule::Square, a, l)
    }

    pub fn skeleton(self) -> Self {
        let (a, l) = (self.a, 2.0 * self.lambda);
        self.push(ExpansionRule::Skeleton, a, l)
    }

    pub fn skeleton_square(self, w: usize) -> Self {
        let wf = w as f64;
        let (a, l) = (self.a / (2.0 * wf), 8.0 * self.lambda * self.lambda * (wf.ln() + 2.0));
        self.push(ExpansionRule::SkeletonSquare, a, l)
    }
}

/// Subsets with |E(S,T)| above the allowed bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionViolation {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub edges: u64,
    pub bound: f64,
}

/// Edge counts E(S, T) for all pairs of vertex subsets, as bitmasks.
fn all_pair_counts(a: &Adjacency, mut visit: impl FnMut(u32, u32, u64) -> bool) -> Result<(), GraphError> {
    let n = a.n();
    if n > EXHAUSTIVE_VERTEX_LIMIT {
        return Err(GraphError::ExhaustiveTooLarge {
            n,
            limit: EXHAUSTIVE_VERTEX_LIMIT,
        });
    }
    let full = 1u32 << n;
    let mut into = vec![0u64; n];
    let mut by_t = vec![0u64; full as usize];
    for s in 0..full {
        for (v, slot) in into.iter_mut().enumerate() {
            *slot = (0..n).filter(|&u| s >> u & 1 == 1).map(|u| a.get(u, v)).sum();
        }
        by_t[0] = 0;
        for t in 1..full {
            let low = t.trailing_zeros() as usize;
            by_t[t as usize] = by_t[(t & (t - 1)) as usize] + into[low];
            if !visit(s, t, by_t[t as usize]) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn mask_to_vec(m: u32) -> Vec<usize> {
    (0..32).filter(|&i| m >> i & 1 == 1).collect()
}

/// Exhaustively checks (a, lambda)-edge-expansion on a graph with at most 12
/// vertices.
pub fn verify_edge_expansion(a: &Adjacency, size_bound: f64, lambda: f64) -> Result<Option<ExpansionViolation>, GraphError> {
    let mut bad = None;
    all_pair_counts(a, |s, t, e| {
        let (ss, ts) = (s.count_ones() as f64, t.count_ones() as f64);
        if ss > size_bound || ts > size_bound || s == 0 {
            return true;
        }
        let bound = lambda * (ss * ts).sqrt();
        if e as f64 > bound + 1e-9 {
            bad = Some(ExpansionViolation {
                s: mask_to_vec(s),
                t: mask_to_vec(t),
                edges: e,
                bound,
            });
            return false;
        }
        true
    })?;
    Ok(bad)
}

/// Exhaustively checks the expander mixing inequality
/// | |E(S,T)| - w |S||T| / n | <= lambda sqrt(|S||T|) for a w-regular graph.
pub fn verify_mixing_lemma(a: &Adjacency, w: usize, lambda: f64) -> Result<Option<ExpansionViolation>, GraphError> {
    let n = a.n() as f64;
    let mut bad = None;
    all_pair_counts(a, |s, t, e| {
        if s == 0 {
            return true;
        }
        let (ss, ts) = (s.count_ones() as f64, t.count_ones() as f64);
        let bound = lambda * (ss * ts).sqrt();
        if (e as f64 - w as f64 * ss * ts / n).abs() > bound + 1e-9 {
            bad = Some(ExpansionViolation {
                s: mask_to_vec(s),
                t: mask_to_vec(t),
                edges: e,
                bound,
            });
            return false;
        }
        true
    })?;
    Ok(bad)
}
