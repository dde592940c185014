//! CSS codes from complexes and from group-algebra matrices, brute-force
//! quantum distances, and the classical soundness profiler.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complexes::{lifted_product, BasedComplex, ComplexError, ModuleComplex, ModuleTerm, Orientation};
use crate::enumerate::{gray_walk, min_weight_outside, required_bits, WeightedVec};
use crate::gf::{vector, Field, GfError, Matrix};
use crate::groups::{regular_rep, FiniteGroup, GroupAlgebraElem, Side};
use crate::localcodes::{coset_leader_search, CosetLeaderTable, LocalCode, LocalCodeError};

#[derive(Debug, Error)]
pub enum CssError {
    #[error("H_X row {x_row} is not orthogonal to H_Z row {z_row}")]
    Violation { x_row: usize, z_row: usize },
    #[error("H_X has {0} columns but H_Z has {1}")]
    Length(usize, usize),
    #[error("entries A[{a:?}] and B[{b:?}] do not commute")]
    Commutation { a: (usize, usize), b: (usize, usize) },
    #[error("group-algebra matrices use different groups or fields")]
    Mismatch,
    #[error("enumeration needs 2^{required_bits} steps, cap is 2^{cap_bits}")]
    Infeasible { required_bits: u32, cap_bits: u32 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Local(#[from] LocalCodeError),
}

/// CSS code Q(H_X, H_Z) with H_X H_Z^T = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    pub hx: Matrix,
    pub hz: Matrix,
    pub n: usize,
    pub k: usize,
    pub rank_x: usize,
    pub rank_z: usize,
}

impl CssCode {
    pub fn new(hx: Matrix, hz: Matrix) -> Result<Self, CssError> {
        if hx.cols() != hz.cols() {
            return Err(CssError::Length(hx.cols(), hz.cols()));
        }
        if hx.field() != hz.field() {
            return Err(GfError::FieldMismatch(hx.field().q(), hz.field().q()).into());
        }
        if let Some((x_row, z_row)) = css_violation(&hx, &hz) {
            return Err(CssError::Violation { x_row, z_row });
        }
        let n = hx.cols();
        let rank_x = hx.rank();
        let rank_z = hz.rank();
        Ok(CssCode {
            hx,
            hz,
            n,
            k: n - rank_x - rank_z,
            rank_x,
            rank_z,
        })
    }

    pub fn field(&self) -> Field {
        self.hx.field()
    }

    /// The code with the roles of H_X and H_Z swapped.
    pub fn dual(&self) -> CssCode {
        CssCode {
            hx: self.hz.clone(),
            hz: self.hx.clone(),
            n: self.n,
            k: self.k,
            rank_x: self.rank_z,
            rank_z: self.rank_x,
        }
    }
}

/// First (x row, z row) pair with nonzero inner product.
pub fn css_violation(hx: &Matrix, hz: &Matrix) -> Option<(usize, usize)> {
    let p = hx.mul(&hz.transpose()).ok()?;
    let first = p.triplets().next();
    first.map(|(i, j, _)| (i, j))
}

/// H_X = d_i, H_Z = d_{i+1}^T.
pub fn css_from_complex(c: &BasedComplex, i: i32) -> Result<CssCode, CssError> {
    if c.term(i).is_none() {
        return Err(ComplexError::DegreeOutOfRange(i).into());
    }
    CssCode::new(c.boundary_matrix(i), c.boundary_matrix(i + 1).transpose())
}

/// Hypergraph product: H_X = [A (x) I_mb, -I_ma (x) B],
/// H_Z = [I_na (x) B^T, A^T (x) I_nb].
pub fn hp_matrices(a: &Matrix, b: &Matrix) -> Result<CssCode, CssError> {
    let f = a.field();
    if b.field() != f {
        return Err(CssError::Mismatch);
    }
    let (ma, na) = a.shape();
    let (mb, nb) = b.shape();
    let hx = a.kron(&Matrix::identity(f, mb))?.hstack(&Matrix::identity(f, ma).kron(b)?.neg())?;
    let hz = Matrix::identity(f, na)
        .kron(&b.transpose())?
        .hstack(&a.transpose().kron(&Matrix::identity(f, nb))?)?;
    CssCode::new(hx, hz)
}

/// Matrix over the group algebra F_q G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMatrix {
    pub group: Arc<FiniteGroup>,
    pub field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<GroupAlgebraElem>,
}

impl GroupMatrix {
    pub fn zeros(group: Arc<FiniteGroup>, field: Field, rows: usize, cols: usize) -> Self {
        let z = GroupAlgebraElem::zero(group.clone(), field);
        GroupMatrix {
            group,
            field,
            rows,
            cols,
            entries: vec![z; rows * cols],
        }
    }

    pub fn identity(group: Arc<FiniteGroup>, field: Field, n: usize) -> Self {
        let mut m = Self::zeros(group.clone(), field, n, n);
        for i in 0..n {
            m.set(i, i, GroupAlgebraElem::one(group.clone(), field));
        }
        m
    }

    pub fn from_rows(group: Arc<FiniteGroup>, field: Field, rows: Vec<Vec<GroupAlgebraElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(group, field, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged group matrix");
            for (j, e) in row.into_iter().enumerate() {
                m.set(i, j, e);
            }
        }
        m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupAlgebraElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: GroupAlgebraElem) {
        self.entries[i * self.cols + j] = e;
    }

    /// Transpose with the antipode applied to every entry.
    pub fn conj_transpose(&self) -> Self {
        let mut m = Self::zeros(self.group.clone(), self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).antipode());
            }
        }
        m
    }

    /// Entrywise antipode, no transpose.
    pub fn antipode(&self) -> Self {
        let mut m = self.clone();
        for e in m.entries.iter_mut() {
            *e = e.antipode();
        }
        m
    }

    /// Kronecker product with an identity at the group-algebra level:
    /// `self (x) I_n` when `identity_left` is false, `I_n (x) self` otherwise.
    pub fn kron_identity(&self, n: usize, identity_left: bool) -> Self {
        let (r, c) = self.shape();
        let mut m = Self::zeros(self.group.clone(), self.field, r * n, c * n);
        for i in 0..r {
            for j in 0..c {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                for s in 0..n {
                    if identity_left {
                        m.set(s * r + i, s * c + j, e.clone());
                    } else {
                        m.set(i * n + s, j * n + s, e.clone());
                    }
                }
            }
        }
        m
    }

    /// Block matrix over F_q with each entry replaced by its regular
    /// representation.
    pub fn expand(&self, side: Side) -> Matrix {
        let l = self.group.order();
        let mut trip = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.is_zero() {
                    continue;
                }
                for (r, c, x) in regular_rep(e, side).triplets() {
                    trip.push((i * l + r, j * l + c, x));
                }
            }
        }
        Matrix::from_triplets(self.field, self.rows * l, self.cols * l, trip)
    }

    /// Two-term module complex R^cols -> R^rows: column j is a high cell,
    /// row i a low cell, and every term c g of entry (i, j) becomes one
    /// incidence with block [c] and shift g.
    pub fn to_module(&self) -> ModuleComplex {
        let mut terms = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (g, c) in self.get(i, j).terms() {
                    terms.push(ModuleTerm {
                        high: j,
                        low: i,
                        block: Matrix::from_triplets(self.field, 1, 1, [(0, 0, c)]),
                        shift: g,
                    });
                }
            }
        }
        ModuleComplex::new(self.field, self.group.clone(), vec![1; self.cols], vec![1; self.rows], terms)
            .expect("group matrix terms are well formed")
    }
}

/// LP(A, B): H_X = [A (x) I_mb, -I_ma (x) B], H_Z = [I_na (x) B*, A* (x) I_nb]
/// with A entries expanded by right and B entries by left regular
/// representations.
pub fn lp_matrices(a: &GroupMatrix, b: &GroupMatrix) -> Result<CssCode, CssError> {
    if *a.group != *b.group || a.field != b.field {
        return Err(CssError::Mismatch);
    }
    let (ma, na) = a.shape();
    let (mb, nb) = b.shape();
    let hx = a
        .kron_identity(mb, false)
        .expand(Side::Right)
        .hstack(&b.kron_identity(ma, true).expand(Side::Left).neg())?;
    let hz = b
        .kron_identity(na, true)
        .expand(Side::Left)
        .transpose()
        .hstack(&a.kron_identity(nb, false).expand(Side::Right).transpose())?;
    match CssCode::new(hx, hz) {
        Err(CssError::Violation { .. }) => Err(find_noncommuting(a, b)),
        other => other,
    }
}

fn find_noncommuting(a: &GroupMatrix, b: &GroupMatrix) -> CssError {
    let (ma, na) = a.shape();
    let (mb, nb) = b.shape();
    for i in 0..ma {
        for j in 0..na {
            let ra = regular_rep(a.get(i, j), Side::Right);
            for s in 0..mb {
                for t in 0..nb {
                    let lb = regular_rep(b.get(s, t), Side::Left);
                    if ra.mul(&lb).ok() != lb.mul(&ra).ok() {
                        return CssError::Commutation { a: (i, j), b: (s, t) };
                    }
                }
            }
        }
    }
    CssError::Violation { x_row: 0, z_row: 0 }
}

/// Explicit correspondence between LP(A, B) and the lifted product of the
/// module complexes of antipode(A) and B (orientation B). `x_rows[i]` is the
/// LP row of complex row i in H_X, likewise for columns and H_Z rows.
#[derive(Debug, Clone)]
pub struct LpCorrespondence {
    pub complex: BasedComplex,
    pub qubits: Vec<usize>,
    pub x_checks: Vec<usize>,
    pub z_checks: Vec<usize>,
    /// Number of qubits in the E-> block; the E^ block carries the sign flip.
    pub right_qubits: usize,
}

pub fn lp_correspondence(a: &GroupMatrix, b: &GroupMatrix) -> Result<LpCorrespondence, CssError> {
    if *a.group != *b.group || a.field != b.field {
        return Err(CssError::Mismatch);
    }
    let group = a.group.clone();
    let l = group.order();
    let c = lifted_product(&a.antipode().to_module(), &b.to_module(), Orientation::B)?;
    let (_, na) = a.shape();
    let (mb, nb) = b.shape();
    use crate::complexes::CellKind::*;
    let map = |deg: i32| -> Vec<usize> {
        let t = c.term(deg).unwrap();
        t.cells()
            .iter()
            .map(|cell| {
                let g = group.inv(cell.g) as usize;
                match cell.kind {
                    EdgeRight => (cell.a * mb + cell.b) * l + g,
                    EdgeUp => na * mb * l + (cell.a * nb + cell.b) * l + g,
                    Vertex => (cell.a * mb + cell.b) * l + g,
                    Face => (cell.a * nb + cell.b) * l + g,
                    Plain => unreachable!(),
                }
            })
            .collect()
    };
    Ok(LpCorrespondence {
        qubits: map(1),
        x_checks: map(0),
        z_checks: map(2),
        right_qubits: na * mb * l,
        complex: c,
    })
}

impl LpCorrespondence {
    /// True when LP(A, B) equals the complex code after the coordinate
    /// relabelling, with the E^ qubit block negated (and H_Z negated as a
    /// whole).
    pub fn matches(&self, lp: &CssCode) -> bool {
        let hx = self.complex.boundary_matrix(1);
        let hz = self.complex.boundary_matrix(2).transpose();
        let f = hx.field();
        let n = hx.cols();
        let signs: Vec<u32> = (0..n).map(|j| f.sign(j < self.right_qubits)).collect();
        let zsigns: Vec<u32> = signs.iter().map(|&s| f.neg(s)).collect();
        let lx = lp.hx.permute(&self.x_checks, &self.qubits);
        let lz = lp.hz.permute(&self.z_checks, &self.qubits);
        lx == hx.scale_columns(&signs) && lz == hz.scale_columns(&zsigns)
    }
}

/// d_X over ker H_X minus rowspace H_Z, d_Z symmetric; None is infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssDistance {
    pub dx: Option<usize>,
    pub dz: Option<usize>,
    pub witness_x: Option<Vec<u32>>,
    pub witness_z: Option<Vec<u32>>,
}

impl CssDistance {
    pub fn d(&self) -> Option<usize> {
        match (self.dx, self.dz) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Bits of enumeration needed for the exhaustive distance.
pub fn distance_required_bits(code: &CssCode) -> u32 {
    let q = code.field().q();
    required_bits(q, code.n - code.rank_x).max(required_bits(q, code.n - code.rank_z))
}

fn min_outside(q: u32, checks: &Matrix, stabilizers: &Matrix, threads: usize) -> Option<(usize, Vec<u32>)> {
    let n = checks.cols();
    let rs = stabilizers.row_space();
    let kernel = checks.kernel();
    let extra: Vec<Vec<u32>> = rs.extend_basis(&kernel).into_iter().map(|j| kernel[j].clone()).collect();
    min_weight_outside(q, n, rs.basis(), &extra, None, threads)
}

pub fn css_distance_bruteforce(code: &CssCode, cap_bits: u32, threads: usize) -> Result<CssDistance, CssError> {
    let bits = distance_required_bits(code);
    if bits > cap_bits {
        return Err(CssError::Infeasible {
            required_bits: bits,
            cap_bits,
        });
    }
    let q = code.field().q();
    let x = min_outside(q, &code.hx, &code.hz, threads);
    let z = min_outside(q, &code.hz, &code.hx, threads);
    Ok(CssDistance {
        dx: x.as_ref().map(|v| v.0),
        dz: z.as_ref().map(|v| v.0),
        witness_x: x.map(|v| v.1),
        witness_z: z.map(|v| v.1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoundnessMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

/// Empirical soundness of a parity-check matrix: the minimum of
/// n |Hx| / (m d(x, ker H)) over tested x outside the code.
#[derive(Debug, Clone, PartialEq)]
pub struct SoundnessReport {
    pub n: usize,
    pub m: usize,
    /// max(row weight, column weight); the column weight is what bounds
    /// |Hx| <= omega d(x, C).
    pub omega: usize,
    pub row_weight: usize,
    pub col_weight: usize,
    pub s_hat: f64,
    /// s_hat = num / den exactly.
    pub s_hat_num: u64,
    pub s_hat_den: u64,
    pub exhaustive: bool,
    pub samples: u64,
    pub witness: Vec<u32>,
    pub witness_syndrome_weight: usize,
    pub witness_distance: usize,
    /// Tested x with |Hx| > omega d(x, C).
    pub inequality_violations: u64,
}

struct Best {
    num: u64,
    den: u64,
    witness: Vec<u32>,
    sw: usize,
    d: usize,
}

impl Best {
    fn offer(best: &mut Option<Best>, n: usize, m: usize, sw: usize, d: usize, x: &[u32]) {
        if d == 0 {
            return;
        }
        let (num, den) = ((n * sw) as u64, (m * d) as u64);
        let better = match best {
            None => true,
            Some(b) => (num as u128) * (b.den as u128) < (b.num as u128) * (den as u128),
        };
        if better {
            *best = Some(Best {
                num,
                den,
                witness: x.to_vec(),
                sw,
                d,
            });
        }
    }
}

pub fn soundness_profile(h: &Matrix, mode: SoundnessMode, cap_bits: u32) -> Result<SoundnessReport, CssError> {
    let (m, n) = h.shape();
    let q = h.field().q();
    let row_weight = h.max_row_weight();
    let col_weight = h.max_col_weight();
    let omega = row_weight.max(col_weight);
    let code = LocalCode::new(h.clone());
    let ht = h.transpose();
    let mut best: Option<Best> = None;
    let mut samples = 0u64;
    let mut violations = 0u64;
    let exhaustive = matches!(mode, SoundnessMode::Exhaustive);
    match mode {
        SoundnessMode::Exhaustive if required_bits(q, n) <= cap_bits.min(22) => {
            // full scan: leader weights per syndrome, then every x
            let mut leader: HashMap<Vec<u32>, usize> = HashMap::new();
            let scan = |visit: &mut dyn FnMut(&WeightedVec, &WeightedVec)| {
                let mut x = WeightedVec::zeros(q, n);
                let mut s = WeightedVec::zeros(q, m);
                visit(&x, &s);
                gray_walk(q, n, |j| {
                    x.add_sparse(1, &[(j, 1)]);
                    s.add_sparse(1, ht.row(j));
                    visit(&x, &s);
                    true
                });
            };
            scan(&mut |x, s| {
                let e = leader.entry(s.values.clone()).or_insert(usize::MAX);
                *e = (*e).min(x.weight);
            });
            scan(&mut |x, s| {
                samples += 1;
                let d = leader[&s.values];
                if s.weight > omega * d {
                    violations += 1;
                }
                Best::offer(&mut best, n, m, s.weight, d, &x.values);
            });
        }
        SoundnessMode::Exhaustive => {
            let table = CosetLeaderTable::build(&code, cap_bits)?;
            let mut keys: Vec<(u64, usize)> = table.weights().collect();
            keys.sort_unstable();
            for (key, _) in keys {
                let syn = decode_key(q, key, m);
                let x = table.leader(&syn).expect("key from table");
                let sw = vector::weight(&syn);
                let d = vector::weight(&x);
                samples += 1;
                if sw > omega * d {
                    violations += 1;
                }
                Best::offer(&mut best, n, m, sw, d, &x);
            }
        }
        SoundnessMode::Sampled { seed, samples: count } => {
            let table = CosetLeaderTable::build(&code, cap_bits).ok();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = h.field();
            let basis = code.kernel_basis().to_vec();
            for t in 0..count {
                let mut x = vec![0u32; n];
                let near = table.is_none() || t % 2 == 1;
                if near {
                    for b in &basis {
                        vector::add_scaled(f, &mut x, rng.gen_range(0..q), b);
                    }
                    let flips = rng.gen_range(1..=2usize.min(n));
                    for _ in 0..flips {
                        let j = rng.gen_range(0..n);
                        x[j] = f.add(x[j], rng.gen_range(1..q));
                    }
                } else {
                    for v in x.iter_mut() {
                        *v = rng.gen_range(0..q);
                    }
                }
                let syn = h.mul_vec(&x);
                let sw = vector::weight(&syn);
                if sw == 0 {
                    continue;
                }
                let d = match &table {
                    Some(tb) => tb.leader_weight(&syn).expect("syndrome in image"),
                    None => vector::weight(&coset_leader_search(&code, &syn, 2)?.expect("perturbation of weight <= 2")),
                };
                samples += 1;
                if sw > omega * d {
                    violations += 1;
                }
                Best::offer(&mut best, n, m, sw, d, &x);
            }
        }
    }
    let b = best.unwrap_or(Best {
        num: 0,
        den: 1,
        witness: vec![0; n],
        sw: 0,
        d: 0,
    });
    Ok(SoundnessReport {
        n,
        m,
        omega,
        row_weight,
        col_weight,
        s_hat: if b.d == 0 { f64::INFINITY } else { b.num as f64 / b.den as f64 },
        s_hat_num: b.num,
        s_hat_den: b.den,
        exhaustive,
        samples,
        witness: b.witness,
        witness_syndrome_weight: b.sw,
        witness_distance: b.d,
        inequality_violations: violations,
    })
}

fn decode_key(q: u32, mut key: u64, r: usize) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let d = (key % q as u64) as u32;
            key /= q as u64;
            d
        })
        .collect()
}

/// Guarantees stated for the good LTC family at local degree w: locality
/// 2w, soundness w^{-7/2}/2 and relative distance at least w^{-7/2}/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticBounds {
    pub omega: usize,
    pub soundness: f64,
    pub relative_distance: f64,
}

pub fn asymptotic_bounds(w: usize) -> AsymptoticBounds {
    let s = 0.5 * (w as f64).powf(-3.5);
    AsymptoticBounds {
        omega: 2 * w,
        soundness: s,
        relative_distance: s,
    }
}

/// k / N >= (n - m)^2 / (n^2 + m^2), checked in integers.
pub fn intro_rate_floor_holds(k: usize, total: usize, n: usize, m: usize) -> bool {
    let lhs = k as u128 * (n * n + m * m) as u128;
    let d = n.abs_diff(m) as u128;
    lhs >= total as u128 * d * d || n < m
}

/// dim / total >= 1 - 4 r / w, checked in integers.
pub fn remark_rate_floor_holds(dim: usize, total: usize, r: usize, w: usize) -> bool {
    (dim * w) as i128 >= total as i128 * (w as i128 - 4 * r as i128)
}

/// Dense random sparse group-algebra matrix with at most `terms` nonzero
/// group terms per entry; handy for property tests.
pub fn random_group_matrix(
    group: Arc<FiniteGroup>,
    field: Field,
    rows: usize,
    cols: usize,
    terms: usize,
    rng: &mut impl Rng,
) -> GroupMatrix {
    let l = group.order() as u32;
    let mut m = GroupMatrix::zeros(group.clone(), field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let t = rng.gen_range(0..=terms);
            let e = GroupAlgebraElem::from_terms(
                group.clone(),
                field,
                (0..t).map(|_| (rng.gen_range(0..l), rng.gen_range(1..field.q()))),
            );
            m.set(i, j, e);
        }
    }
    m
}

/// Syndrome weights for a batch of vectors; convenience for reports.
pub fn syndrome_weight(h: &Matrix, x: &[u32]) -> usize {
    vector::weight(&h.mul_vec(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupSpec};

    fn toric_lp(l: u32) -> CssCode {
        let g = Arc::new(build_group(&GroupSpec::Product(vec![GroupSpec::Cyclic(l), GroupSpec::Cyclic(l)])).unwrap());
        let f = Field::binary();
        let x = g.from_product_coords(&[1, 0]).unwrap();
        let y = g.from_product_coords(&[0, 1]).unwrap();
        let a = GroupMatrix::from_rows(g.clone(), f, vec![vec![GroupAlgebraElem::from_terms(g.clone(), f, [(0, 1), (x, 1)])]]);
        let b = GroupMatrix::from_rows(g.clone(), f, vec![vec![GroupAlgebraElem::from_terms(g.clone(), f, [(0, 1), (y, 1)])]]);
        lp_matrices(&a, &b).unwrap()
    }

    #[test]
    fn toric_parameters() {
        for l in [2, 3, 4] {
            let c = toric_lp(l);
            assert_eq!((c.n, c.k), (2 * (l * l) as usize, 2));
        }
        let d = css_distance_bruteforce(&toric_lp(3), 24, 1).unwrap();
        assert_eq!((d.dx, d.dz), (Some(3), Some(3)));
    }

    #[test]
    fn hp_of_repetition() {
        let f = Field::binary();
        let a = Matrix::from_dense(f, &[vec![1, 1]]).unwrap();
        // A (x) A*: n = n_a n_b + m_a m_b
        let c = hp_matrices(&a, &a.transpose()).unwrap();
        assert_eq!((c.n, c.k), (5, 1));
        let d = css_distance_bruteforce(&c, 24, 1).unwrap();
        assert_eq!(d.d(), Some(2));
    }

    #[test]
    fn degenerate_code_has_full_rate() {
        let f = Field::binary();
        let c = CssCode::new(Matrix::zeros(f, 0, 4), Matrix::zeros(f, 0, 4)).unwrap();
        assert_eq!(c.k, 4);
    }

    #[test]
    fn exhaustive_soundness_of_repetition() {
        let f = Field::binary();
        let h = Matrix::from_dense(f, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let r = soundness_profile(&h, SoundnessMode::Exhaustive, 22).unwrap();
        assert_eq!(r.inequality_violations, 0);
        assert!(r.s_hat > 0.0);
        // x = 100: |Hx| = 1, d = 1 -> 3 * 1 / (2 * 1)
        assert_eq!((r.s_hat_num, r.s_hat_den), (3, 2));
    }
}
