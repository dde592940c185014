//! Based chain complexes with block (local system) structure, G-lifted
//! products of two-term module complexes, and brute-force distances.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::enumerate::{self, gray_walk, min_weight_outside, required_bits, BlockWeightedVec};
use crate::gf::{Field, GfError, Matrix};
use crate::graphs::Adjacency;
use crate::groups::FiniteGroup;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("inputs use different fields")]
    FieldMismatch,
    #[error("inputs use different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("module term {index}: {reason}")]
    BadTerm { index: usize, reason: String },
    #[error("degree {0} is outside the complex")]
    DegreeOutOfRange(i32),
    #[error("enumeration needs 2^{required_bits} steps, cap is 2^{cap_bits}")]
    Infeasible { required_bits: u32, cap_bits: u32 },
    #[error("complex has no product structure")]
    NoProductPoset,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Gf(#[from] GfError),
}

/// One incidence of a two-term free module complex: the high cell maps into
/// the low cell through `block`, and the group coordinate is multiplied on
/// the left by `shift`, i.e. a (x) g -> block(a) (x) shift*g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleTerm {
    pub high: usize,
    pub low: usize,
    pub block: Matrix,
    pub shift: u32,
}

/// Two-term complex of free right F_q G-modules, high -> low.
#[derive(Debug, Clone)]
pub struct ModuleComplex {
    pub field: Field,
    pub group: Arc<FiniteGroup>,
    pub high_dims: Vec<usize>,
    pub low_dims: Vec<usize>,
    pub terms: Vec<ModuleTerm>,
}

impl ModuleComplex {
    pub fn new(
        field: Field,
        group: Arc<FiniteGroup>,
        high_dims: Vec<usize>,
        low_dims: Vec<usize>,
        terms: Vec<ModuleTerm>,
    ) -> Result<Self, ComplexError> {
        for (index, t) in terms.iter().enumerate() {
            let bad = |reason: String| ComplexError::BadTerm { index, reason };
            if t.high >= high_dims.len() || t.low >= low_dims.len() {
                return Err(bad(format!("cell ({}, {}) out of range", t.high, t.low)));
            }
            if t.block.shape() != (low_dims[t.low], high_dims[t.high]) {
                return Err(bad(format!("block shape {:?}", t.block.shape())));
            }
            if t.block.field() != field {
                return Err(ComplexError::FieldMismatch);
            }
            if t.shift as usize >= group.order() {
                return Err(bad(format!("shift {} outside the group", t.shift)));
            }
        }
        Ok(ModuleComplex {
            field,
            group,
            high_dims,
            low_dims,
            terms,
        })
    }

    fn prefix(dims: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(dims.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &d in dims {
            acc += d;
            out.push(acc);
        }
        out
    }

    /// Boundary matrix over F_q; the coordinate of (cell x, g, k) is
    /// prefix(x)|G| + g dim(x) + k.
    pub fn flatten(&self) -> Matrix {
        let m = self.group.order();
        let hp = Self::prefix(&self.high_dims);
        let lp = Self::prefix(&self.low_dims);
        let mut trip = Vec::new();
        for t in &self.terms {
            let (dh, dl) = (self.high_dims[t.high], self.low_dims[t.low]);
            for g in 0..m as u32 {
                let tg = self.group.mul(t.shift, g) as usize;
                for (i, j, x) in t.block.triplets() {
                    trip.push((lp[t.low] * m + tg * dl + i, hp[t.high] * m + g as usize * dh + j, x));
                }
            }
        }
        Matrix::from_triplets(self.field, lp[self.low_dims.len()] * m, hp[self.high_dims.len()] * m, trip)
    }
}

/// Which B-side factor enters the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// A (x)_G B: C2 = F, C1 = E-> + E^, C0 = V.
    B,
    /// A (x)_G B*: C2 = E->, C1 = F + V, C0 = E^.
    BDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Plain,
    Vertex,
    EdgeRight,
    EdgeUp,
    Face,
}

/// Cell label; product cells are (a, g, b) triples of base cells and a group
/// element, plain cells only use `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub kind: CellKind,
    pub a: usize,
    pub g: u32,
    pub b: usize,
}

impl Cell {
    pub fn plain(i: usize) -> Self {
        Cell {
            kind: CellKind::Plain,
            a: i,
            g: 0,
            b: 0,
        }
    }
}

/// Cells of one degree with their coefficient dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    cells: Vec<Cell>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl Term {
    pub fn new(cells: Vec<Cell>, dims: Vec<usize>) -> Self {
        assert_eq!(cells.len(), dims.len());
        let mut offsets = vec![0];
        for &d in &dims {
            offsets.push(offsets.last().unwrap() + d);
        }
        Term { cells, dims, offsets }
    }

    pub fn scalar(n: usize) -> Self {
        Term::new((0..n).map(Cell::plain).collect(), vec![1; n])
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn max_cell_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// Cell index owning each coordinate.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim());
        for (i, &d) in self.dims.iter().enumerate() {
            out.extend(std::iter::repeat(i).take(d));
        }
        out
    }

    pub fn cell_of_coord(&self, coord: usize) -> usize {
        match self.offsets.binary_search(&coord) {
            Ok(mut i) => {
                while self.dims[i] == 0 {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        }
    }
}

/// Covering x > x' with its integer incidence number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub upper: usize,
    pub lower: usize,
    pub sign: i8,
}

/// Chain of a given degree as a flat coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVector {
    pub degree: i32,
    pub values: Vec<u32>,
}

impl ChainVector {
    pub fn zeros(c: &BasedComplex, degree: i32) -> Self {
        ChainVector {
            degree,
            values: vec![0; c.dim(degree)],
        }
    }

    pub fn block<'a>(&'a self, c: &BasedComplex, cell: usize) -> &'a [u32] {
        &self.values[c.term(self.degree).expect("degree in range").range(cell)]
    }

    pub fn hamming_weight(&self) -> usize {
        crate::gf::vector::weight(&self.values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Block,
    Hamming,
}

/// First nonzero entry of some composite boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainViolation {
    pub degree: i32,
    /// Cell in C_{degree-2}.
    pub row_cell: usize,
    /// Cell in C_{degree}.
    pub col_cell: usize,
}

/// Based chain complex C_hi -> ... -> C_lo with cells and block boundaries.
#[derive(Debug, Clone)]
pub struct BasedComplex {
    field: Field,
    lowest: i32,
    terms: Vec<Term>,
    /// boundaries[k] maps degree lowest+k+1 to lowest+k.
    boundaries: Vec<Matrix>,
    incidences: Option<Vec<Vec<Incidence>>>,
    product: Option<Arc<ProductPoset>>,
}

impl BasedComplex {
    pub fn new(field: Field, lowest: i32, terms: Vec<Term>, boundaries: Vec<Matrix>) -> Result<Self, ComplexError> {
        if terms.is_empty() || boundaries.len() + 1 != terms.len() {
            return Err(ComplexError::Unsupported("need one boundary between consecutive terms".into()));
        }
        for (k, m) in boundaries.iter().enumerate() {
            if m.field() != field {
                return Err(ComplexError::FieldMismatch);
            }
            let expect = (terms[k].dim(), terms[k + 1].dim());
            if m.shape() != expect {
                return Err(GfError::DimensionMismatch {
                    op: "boundary",
                    left: m.shape(),
                    right: expect,
                }
                .into());
            }
        }
        Ok(BasedComplex {
            field,
            lowest,
            terms,
            boundaries,
            incidences: None,
            product: None,
        })
    }

    /// Complex with one-dimensional cells; `boundaries[k]` maps degree
    /// lowest+k+1 to lowest+k.
    pub fn from_matrices(field: Field, lowest: i32, boundaries: Vec<Matrix>) -> Result<Self, ComplexError> {
        let mut terms = Vec::new();
        if let Some(first) = boundaries.first() {
            terms.push(Term::scalar(first.rows()));
        }
        for m in &boundaries {
            terms.push(Term::scalar(m.cols()));
        }
        BasedComplex::new(field, lowest, terms, boundaries)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lowest(&self) -> i32 {
        self.lowest
    }

    pub fn highest(&self) -> i32 {
        self.lowest + self.terms.len() as i32 - 1
    }

    fn slot(&self, i: i32) -> Option<usize> {
        if i < self.lowest || i > self.highest() {
            None
        } else {
            Some((i - self.lowest) as usize)
        }
    }

    pub fn term(&self, i: i32) -> Option<&Term> {
        self.slot(i).map(|k| &self.terms[k])
    }

    pub fn dim(&self, i: i32) -> usize {
        self.term(i).map_or(0, |t| t.dim())
    }

    /// The map C_i -> C_{i-1}, if both terms exist.
    pub fn boundary(&self, i: i32) -> Option<&Matrix> {
        if i <= self.lowest || i > self.highest() {
            None
        } else {
            Some(&self.boundaries[(i - self.lowest - 1) as usize])
        }
    }

    /// The map C_i -> C_{i-1} with zero maps outside the complex.
    pub fn boundary_matrix(&self, i: i32) -> Matrix {
        match self.boundary(i) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.field, self.dim(i - 1), self.dim(i)),
        }
    }

    pub fn replace_boundary(&mut self, i: i32, m: Matrix) -> Result<(), ComplexError> {
        let k = match self.boundary(i) {
            Some(old) if old.shape() == m.shape() => (i - self.lowest - 1) as usize,
            Some(old) => {
                return Err(GfError::DimensionMismatch {
                    op: "replace_boundary",
                    left: old.shape(),
                    right: m.shape(),
                }
                .into())
            }
            None => return Err(ComplexError::DegreeOutOfRange(i)),
        };
        self.boundaries[k] = m;
        Ok(())
    }

    /// Coverings C_i -> C_{i-1} with signs, when the complex was built with
    /// an incidence structure.
    pub fn incidences(&self, i: i32) -> Option<&[Incidence]> {
        let inc = self.incidences.as_ref()?;
        if i <= self.lowest || i > self.highest() {
            return None;
        }
        Some(&inc[(i - self.lowest - 1) as usize])
    }

    pub fn product(&self) -> Option<&ProductPoset> {
        self.product.as_deref()
    }

    /// Checks d_{i} d_{i+1} = 0 for every degree.
    pub fn verify_chain(&self) -> Result<(), ChainViolation> {
        for k in 1..self.boundaries.len() {
            let prod = self.boundaries[k - 1].mul(&self.boundaries[k]).expect("shapes chain");
            let first = prod.triplets().next();
            if let Some((r, c, _)) = first {
                let degree = self.lowest + k as i32 + 1;
                return Err(ChainViolation {
                    degree,
                    row_cell: self.terms[k - 1].cell_of_coord(r),
                    col_cell: self.terms[k + 1].cell_of_coord(c),
                });
            }
        }
        Ok(())
    }

    /// Nonzero boundary blocks only where an incidence is recorded.
    pub fn check_block_sparsity(&self) -> Result<(), (i32, usize, usize)> {
        let inc = match &self.incidences {
            Some(i) => i,
            None => return Ok(()),
        };
        for (k, m) in self.boundaries.iter().enumerate() {
            let allowed: std::collections::HashSet<(usize, usize)> =
                inc[k].iter().map(|x| (x.upper, x.lower)).collect();
            for (r, c, _) in m.triplets() {
                let (lo, up) = (self.terms[k].cell_of_coord(r), self.terms[k + 1].cell_of_coord(c));
                if !allowed.contains(&(up, lo)) {
                    return Err((self.lowest + k as i32 + 1, up, lo));
                }
            }
        }
        Ok(())
    }

    /// Integer identity sum_{x > x' > x''} [x:x'][x':x''] = 0.
    pub fn check_incidence_consistency(&self) -> Result<(), (i32, usize, usize)> {
        let inc = match &self.incidences {
            Some(i) => i,
            None => return Ok(()),
        };
        for k in 1..inc.len() {
            let mut down: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
            for x in &inc[k - 1] {
                down.entry(x.upper).or_default().push((x.lower, x.sign as i64));
            }
            let mut sums: HashMap<(usize, usize), i64> = HashMap::new();
            for x in &inc[k] {
                if let Some(list) = down.get(&x.lower) {
                    for &(l, s) in list {
                        *sums.entry((x.upper, l)).or_default() += s * x.sign as i64;
                    }
                }
            }
            let mut bad: Vec<_> = sums.into_iter().filter(|e| e.1 != 0).map(|e| e.0).collect();
            bad.sort_unstable();
            if let Some(&(u, l)) = bad.first() {
                return Err((self.lowest + k as i32 + 1, u, l));
            }
        }
        Ok(())
    }

    /// dim ker d_i - rank d_{i+1}.
    pub fn homology_dim(&self, i: i32) -> Result<usize, ComplexError> {
        if self.term(i).is_none() {
            return Err(ComplexError::DegreeOutOfRange(i));
        }
        let rank_out = self.boundary(i).map_or(0, |m| m.rank());
        let rank_in = self.boundary(i + 1).map_or(0, |m| m.rank());
        Ok(self.dim(i) - rank_out - rank_in)
    }

    /// Basis of Z_i = ker d_i.
    pub fn cycle_basis(&self, i: i32) -> Vec<Vec<u32>> {
        match self.boundary(i) {
            Some(m) => m.kernel(),
            None => (0..self.dim(i))
                .map(|j| {
                    let mut v = vec![0; self.dim(i)];
                    v[j] = 1;
                    v
                })
                .collect(),
        }
    }

    /// Dual complex: degree i holds the old degree lo+hi-i and the
    /// boundaries are transposed.
    pub fn dual(&self) -> BasedComplex {
        let terms: Vec<Term> = self.terms.iter().rev().cloned().collect();
        let boundaries: Vec<Matrix> = self.boundaries.iter().rev().map(|m| m.transpose()).collect();
        let incidences = self.incidences.as_ref().map(|inc| {
            inc.iter()
                .rev()
                .map(|list| {
                    list.iter()
                        .map(|x| Incidence {
                            upper: x.lower,
                            lower: x.upper,
                            sign: x.sign,
                        })
                        .collect()
                })
                .collect()
        });
        BasedComplex {
            field: self.field,
            lowest: self.lowest,
            terms,
            boundaries,
            incidences,
            product: None,
        }
    }

    /// Number of cells (restricted to `subset` if given) with a nonzero block.
    pub fn block_weight(&self, c: &ChainVector, subset: Option<&[usize]>) -> usize {
        let t = self.term(c.degree).expect("degree in range");
        let nonzero = |i: usize| c.values[t.range(i)].iter().any(|&x| x != 0);
        match subset {
            Some(s) => s.iter().filter(|&&i| nonzero(i)).count(),
            None => (0..t.cell_count()).filter(|&i| nonzero(i)).count(),
        }
    }
}

/// Geometry of the product poset: which vertices each edge touches and
/// which edges each face contains (with multiplicity). All indices are local
/// to the cell class.
#[derive(Debug, Clone)]
pub struct ProductPoset {
    pub orientation: Orientation,
    pub group_order: usize,
    /// (high, low) cell counts of the A and B factors.
    pub a_counts: (usize, usize),
    pub b_counts: (usize, usize),
    /// (high, low) coefficient dimensions of the factor cells.
    pub a_dims: (Vec<usize>, Vec<usize>),
    pub b_dims: (Vec<usize>, Vec<usize>),
    /// (degree, first cell index in that degree) for V, E->, E^, F.
    class_pos: [(i32, usize); 4],
    pub right_vertices: Vec<Vec<usize>>,
    pub up_vertices: Vec<Vec<usize>>,
    pub face_rights: Vec<Vec<usize>>,
    pub face_ups: Vec<Vec<usize>>,
}

/// Cell counts per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub vertices: usize,
    pub right_edges: usize,
    pub up_edges: usize,
    pub faces: usize,
}

fn class_slot(kind: CellKind) -> usize {
    match kind {
        CellKind::Vertex => 0,
        CellKind::EdgeRight => 1,
        CellKind::EdgeUp => 2,
        CellKind::Face => 3,
        CellKind::Plain => panic!("plain cells have no class"),
    }
}

impl ProductPoset {
    fn counts(&self, kind: CellKind) -> (usize, usize) {
        let (ah, al) = self.a_counts;
        let (bh, bl) = self.b_counts;
        match kind {
            CellKind::Vertex => (al, bl),
            CellKind::EdgeRight => (ah, bl),
            CellKind::EdgeUp => (al, bh),
            CellKind::Face => (ah, bh),
            CellKind::Plain => panic!("plain cells have no class"),
        }
    }

    /// Index of (a, g, b) within its class.
    pub fn index(&self, kind: CellKind, a: usize, g: u32, b: usize) -> usize {
        let (_, nb) = self.counts(kind);
        (a * self.group_order + g as usize) * nb + b
    }

    pub fn class_size(&self, kind: CellKind) -> usize {
        let (na, nb) = self.counts(kind);
        na * nb * self.group_order
    }

    /// (degree, index in that degree) of a class-local cell.
    pub fn position(&self, kind: CellKind, local: usize) -> (i32, usize) {
        let (d, start) = self.class_pos[class_slot(kind)];
        (d, start + local)
    }

    pub fn census(&self) -> Census {
        Census {
            vertices: self.class_size(CellKind::Vertex),
            right_edges: self.class_size(CellKind::EdgeRight),
            up_edges: self.class_size(CellKind::EdgeUp),
            faces: self.class_size(CellKind::Face),
        }
    }

    fn edge_lists(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.right_vertices.iter().chain(self.up_vertices.iter())
    }

    /// Neighbors in the skeleton graph (vertices V, edges E-> and E^), with
    /// multiplicity.
    pub fn lambda_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_size(CellKind::Vertex)];
        for vs in self.edge_lists() {
            for (i, &u) in vs.iter().enumerate() {
                for (j, &v) in vs.iter().enumerate() {
                    if i != j {
                        out[u].push(v);
                    }
                }
            }
        }
        for l in out.iter_mut() {
            l.sort_unstable();
        }
        out
    }

    pub fn lambda_adjacency(&self) -> Adjacency {
        let nb = self.lambda_neighbors();
        let mut a = Adjacency::zeros(nb.len());
        for (u, l) in nb.iter().enumerate() {
            for &v in l {
                a.add(u, v, 1);
            }
        }
        a
    }

    pub fn lambda_square(&self) -> Adjacency {
        self.lambda_adjacency().square()
    }

    /// Edges and faces at a vertex: (E-> edges, E^ edges, faces), each with
    /// multiplicity.
    pub fn vertex_star(&self, v: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let pick = |lists: &[Vec<usize>]| -> Vec<usize> {
            let mut out = Vec::new();
            for (e, vs) in lists.iter().enumerate() {
                for &u in vs {
                    if u == v {
                        out.push(e);
                    }
                }
            }
            out
        };
        let right = pick(&self.right_vertices);
        let up = pick(&self.up_vertices);
        let mut faces = Vec::new();
        for (f, es) in self.face_rights.iter().enumerate() {
            for &e in es {
                for &u in &self.right_vertices[e] {
                    if u == v {
                        faces.push(f);
                    }
                }
            }
        }
        faces.sort_unstable();
        faces.dedup();
        (right, up, faces)
    }

    /// Faces containing each E^ edge, with multiplicity.
    pub fn up_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_size(CellKind::EdgeUp)];
        for (f, es) in self.face_ups.iter().enumerate() {
            for &e in es {
                out[e].push(f);
            }
        }
        out
    }

    /// Square-complex census: every face has two edges of each direction and
    /// the same four corners through either; at every vertex each pair
    /// (E-> edge, E^ edge) spans exactly one face.
    pub fn check_complete_square(&self) -> Result<(), String> {
        for (f, (r, u)) in self.face_rights.iter().zip(&self.face_ups).enumerate() {
            if r.len() != 2 || u.len() != 2 {
                return Err(format!("face {f} has {} horizontal and {} vertical edges", r.len(), u.len()));
            }
            let mut c1: Vec<usize> = r.iter().flat_map(|&e| self.right_vertices[e].iter().copied()).collect();
            let mut c2: Vec<usize> = u.iter().flat_map(|&e| self.up_vertices[e].iter().copied()).collect();
            c1.sort_unstable();
            c2.sort_unstable();
            if c1.len() != 4 || c1 != c2 {
                return Err(format!("face {f} corners disagree: {c1:?} vs {c2:?}"));
            }
        }
        let mut by_pair: HashMap<(usize, usize), usize> = HashMap::new();
        for (r, u) in self.face_rights.iter().zip(&self.face_ups) {
            for &e1 in r {
                for &e2 in u {
                    *by_pair.entry((e1, e2)).or_default() += 1;
                }
            }
        }
        for v in 0..self.class_size(CellKind::Vertex) {
            let (right, up, _) = self.vertex_star(v);
            for &e1 in &right {
                for &e2 in &up {
                    let n = by_pair.get(&(e1, e2)).copied().unwrap_or(0);
                    if n != 1 {
                        return Err(format!("vertex {v}: edges ({e1}, {e2}) span {n} faces"));
                    }
                }
            }
            let corners: usize = self
                .face_rights
                .iter()
                .map(|es| es.iter().flat_map(|&e| &self.right_vertices[e]).filter(|&&x| x == v).count())
                .sum::<usize>();
            // each face corner at v is seen through exactly one of its two
            // horizontal edges
            if corners != right.len() * up.len() {
                return Err(format!(
                    "vertex {v}: {corners} face corners, expected {}",
                    right.len() * up.len()
                ));
            }
        }
        Ok(())
    }
}

fn degree_of(orientation: Orientation, kind: CellKind) -> i32 {
    match (orientation, kind) {
        (Orientation::B, CellKind::Face) => 2,
        (Orientation::B, CellKind::EdgeRight | CellKind::EdgeUp) => 1,
        (Orientation::B, CellKind::Vertex) => 0,
        (Orientation::BDual, CellKind::EdgeRight) => 2,
        (Orientation::BDual, CellKind::Face | CellKind::Vertex) => 1,
        (Orientation::BDual, CellKind::EdgeUp) => 0,
        (_, CellKind::Plain) => unreachable!(),
    }
}

fn degree_classes(orientation: Orientation) -> [Vec<CellKind>; 3] {
    use CellKind::*;
    match orientation {
        Orientation::B => [vec![Vertex], vec![EdgeRight, EdgeUp], vec![Face]],
        Orientation::BDual => [vec![EdgeUp], vec![Face, Vertex], vec![EdgeRight]],
    }
}

/// The G-lifted product of two module complexes. Over characteristic 2 the
/// signs vanish.
pub fn lifted_product(a: &ModuleComplex, b: &ModuleComplex, orientation: Orientation) -> Result<BasedComplex, ComplexError> {
    if a.field != b.field {
        return Err(ComplexError::FieldMismatch);
    }
    if *a.group != *b.group {
        return Err(ComplexError::GroupMismatch(a.group.name().into(), b.group.name().into()));
    }
    let field = a.field;
    let group = &a.group;
    let m = group.order();
    let a_counts = (a.high_dims.len(), a.low_dims.len());
    let b_counts = (b.high_dims.len(), b.low_dims.len());
    let dims_of = |kind: CellKind| -> (&[usize], &[usize]) {
        match kind {
            CellKind::Vertex => (&a.low_dims, &b.low_dims),
            CellKind::EdgeRight => (&a.high_dims, &b.low_dims),
            CellKind::EdgeUp => (&a.low_dims, &b.high_dims),
            CellKind::Face => (&a.high_dims, &b.high_dims),
            CellKind::Plain => unreachable!(),
        }
    };

    let classes = degree_classes(orientation);
    let mut terms = Vec::new();
    let mut class_pos = [(0i32, 0usize); 4];
    for (deg, kinds) in classes.iter().enumerate() {
        let mut cells = Vec::new();
        let mut dims = Vec::new();
        for &kind in kinds {
            class_pos[class_slot(kind)] = (deg as i32, cells.len());
            let (da, db) = dims_of(kind);
            for (x, &dx) in da.iter().enumerate() {
                for g in 0..m as u32 {
                    for (y, &dy) in db.iter().enumerate() {
                        cells.push(Cell { kind, a: x, g, b: y });
                        dims.push(dx * dy);
                    }
                }
            }
        }
        terms.push(Term::new(cells, dims));
    }

    let mut poset = ProductPoset {
        orientation,
        group_order: m,
        a_counts,
        b_counts,
        a_dims: (a.high_dims.clone(), a.low_dims.clone()),
        b_dims: (b.high_dims.clone(), b.low_dims.clone()),
        class_pos,
        right_vertices: Vec::new(),
        up_vertices: Vec::new(),
        face_rights: Vec::new(),
        face_ups: Vec::new(),
    };
    poset.right_vertices = vec![Vec::new(); poset.class_size(CellKind::EdgeRight)];
    poset.up_vertices = vec![Vec::new(); poset.class_size(CellKind::EdgeUp)];
    poset.face_rights = vec![Vec::new(); poset.class_size(CellKind::Face)];
    poset.face_ups = vec![Vec::new(); poset.class_size(CellKind::Face)];

    let mut trips: Vec<Vec<(usize, usize, u32)>> = vec![Vec::new(); 2];
    let mut incs: Vec<Vec<Incidence>> = vec![Vec::new(); 2];
    let mut add = |src: (CellKind, usize, u32, usize),
                   dst: (CellKind, usize, u32, usize),
                   sign: i8,
                   entries: &mut dyn Iterator<Item = (usize, usize, u32)>,
                   poset: &ProductPoset| {
        let sd = degree_of(orientation, src.0);
        let dd = degree_of(orientation, dst.0);
        debug_assert_eq!(sd, dd + 1);
        let (_, si) = poset.position(src.0, poset.index(src.0, src.1, src.2, src.3));
        let (_, di) = poset.position(dst.0, poset.index(dst.0, dst.1, dst.2, dst.3));
        let so = terms[sd as usize].offsets[si];
        let doff = terms[dd as usize].offsets[di];
        let s = field.sign(sign > 0);
        for (r, c, x) in entries {
            trips[dd as usize].push((doff + r, so + c, field.mul(s, x)));
        }
        incs[dd as usize].push(Incidence {
            upper: si,
            lower: di,
            sign,
        });
    };

    // A-part: (x, g, y) -> (x', shift g, y), block M (x) I, sign +.
    for t in &a.terms {
        for (src_kind, dst_kind, bdims) in [
            (CellKind::EdgeRight, CellKind::Vertex, &b.low_dims),
            (CellKind::Face, CellKind::EdgeUp, &b.high_dims),
        ] {
            for g in 0..m as u32 {
                let tg = group.mul(t.shift, g);
                for (y, &dy) in bdims.iter().enumerate() {
                    let mut it = t
                        .block
                        .triplets()
                        .flat_map(move |(i, j, x)| (0..dy).map(move |k| (i * dy + k, j * dy + k, x)));
                    add((src_kind, t.high, g, y), (dst_kind, t.low, tg, y), 1, &mut it, &poset);
                }
            }
        }
    }
    // B-part, sign (-1)^{deg x}: x high -> -1, x low -> +1.
    for t in &b.terms {
        let (dh, dl) = (b.high_dims[t.high], b.low_dims[t.low]);
        let sinv = group.inv(t.shift);
        for (xdims, x_high) in [(&a.high_dims, true), (&a.low_dims, false)] {
            let sign = if x_high { -1 } else { 1 };
            for g in 0..m as u32 {
                for (x, &dx) in xdims.iter().enumerate() {
                    match orientation {
                        Orientation::B => {
                            let (src_kind, dst_kind) = if x_high {
                                (CellKind::Face, CellKind::EdgeRight)
                            } else {
                                (CellKind::EdgeUp, CellKind::Vertex)
                            };
                            let tg = group.mul(g, sinv);
                            let mut it = t
                                .block
                                .triplets()
                                .flat_map(move |(p, q, v)| (0..dx).map(move |i| (i * dl + p, i * dh + q, v)));
                            add((src_kind, x, g, t.high), (dst_kind, x, tg, t.low), sign, &mut it, &poset);
                        }
                        Orientation::BDual => {
                            let (src_kind, dst_kind) = if x_high {
                                (CellKind::EdgeRight, CellKind::Face)
                            } else {
                                (CellKind::Vertex, CellKind::EdgeUp)
                            };
                            let tg = group.mul(g, t.shift);
                            let mut it = t
                                .block
                                .triplets()
                                .flat_map(move |(p, q, v)| (0..dx).map(move |i| (i * dh + q, i * dl + p, v)));
                            add((src_kind, x, g, t.low), (dst_kind, x, tg, t.high), sign, &mut it, &poset);
                        }
                    }
                }
            }
        }
    }

    // Geometry, independent of the orientation: E->(e, g, v) touches
    // V(v_a, shift g, v); E^(v, g, e) touches V(v, g shift^-1, v_b);
    // F(e, g, e') contains E^(v_a, shift g, e') and E->(e, g shift^-1, v_b).
    for t in &a.terms {
        for g in 0..m as u32 {
            let tg = group.mul(t.shift, g);
            for y in 0..b_counts.1 {
                let e = poset.index(CellKind::EdgeRight, t.high, g, y);
                let v = poset.index(CellKind::Vertex, t.low, tg, y);
                poset.right_vertices[e].push(v);
            }
            for y in 0..b_counts.0 {
                let f = poset.index(CellKind::Face, t.high, g, y);
                let e = poset.index(CellKind::EdgeUp, t.low, tg, y);
                poset.face_ups[f].push(e);
            }
        }
    }
    for t in &b.terms {
        let sinv = group.inv(t.shift);
        for g in 0..m as u32 {
            let tg = group.mul(g, sinv);
            for x in 0..a_counts.1 {
                let e = poset.index(CellKind::EdgeUp, x, g, t.high);
                let v = poset.index(CellKind::Vertex, x, tg, t.low);
                poset.up_vertices[e].push(v);
            }
            for x in 0..a_counts.0 {
                let f = poset.index(CellKind::Face, x, g, t.high);
                let e = poset.index(CellKind::EdgeRight, x, tg, t.low);
                poset.face_rights[f].push(e);
            }
        }
    }

    let boundaries: Vec<Matrix> = (0..2)
        .map(|k| Matrix::from_triplets(field, terms[k].dim(), terms[k + 1].dim(), std::mem::take(&mut trips[k])))
        .collect();
    let mut c = BasedComplex::new(field, 0, terms, boundaries)?;
    c.incidences = Some(incs);
    c.product = Some(Arc::new(poset));
    Ok(c)
}

/// Right action (a, g, b) h = (a, g h, b) on product chains. It commutes with
/// the boundary when G is abelian.
pub fn act_on_product_chain(c: &BasedComplex, chain: &ChainVector, h: u32, group: &FiniteGroup) -> ChainVector {
    let t = c.term(chain.degree).expect("degree in range");
    let p = c.product().expect("product complex");
    let mut out = vec![0; chain.values.len()];
    for (i, cell) in t.cells().iter().enumerate() {
        let moved = p.index(cell.kind, cell.a, group.mul(cell.g, h), cell.b);
        let (_, j) = p.position(cell.kind, moved);
        out[t.range(j)].copy_from_slice(&chain.values[t.range(i)]);
    }
    ChainVector {
        degree: chain.degree,
        values: out,
    }
}

/// Cell bijection dual(A (x)_G B*) -> B (x)_G A*: (x, g, y) -> (y, g^-1, x).
/// Returns, per degree of the dual, the image of every coordinate.
pub fn duality_coordinate_map(ab: &BasedComplex, ba: &BasedComplex, group: &FiniteGroup) -> Result<Vec<Vec<usize>>, ComplexError> {
    let pa = ab.product().ok_or(ComplexError::NoProductPoset)?;
    let pb = ba.product().ok_or(ComplexError::NoProductPoset)?;
    if pa.orientation != Orientation::BDual || pb.orientation != Orientation::BDual {
        return Err(ComplexError::Unsupported("duality map needs two B_dual products".into()));
    }
    let dual = ab.dual();
    let mut maps = Vec::new();
    for d in dual.lowest()..=dual.highest() {
        let t = dual.term(d).unwrap();
        let tb = ba.term(d).ok_or(ComplexError::DegreeOutOfRange(d))?;
        if t.dim() != tb.dim() {
            return Err(ComplexError::Unsupported(format!("degree {d} dimensions differ")));
        }
        let mut map = vec![0; t.dim()];
        for (i, cell) in t.cells().iter().enumerate() {
            let kind = match cell.kind {
                CellKind::EdgeRight => CellKind::EdgeUp,
                CellKind::EdgeUp => CellKind::EdgeRight,
                k => k,
            };
            let j = pb.index(kind, cell.b, group.inv(cell.g), cell.a);
            let (deg, jj) = pb.position(kind, j);
            if deg != d {
                return Err(ComplexError::Unsupported(format!("cell {cell:?} lands in degree {deg}")));
            }
            let dy = tb.cell_dim(jj);
            let dx = t.cell_dim(i);
            if dx != dy {
                return Err(ComplexError::Unsupported(format!("cell {cell:?} changes dimension")));
            }
            // local index (i_x, i_y) -> (i_y, i_x)
            let (da, db) = local_dims(pa, cell);
            let start = t.range(i).start;
            let tstart = tb.range(jj).start;
            for ia in 0..da {
                for ib in 0..db {
                    map[start + ia * db + ib] = tstart + ib * da + ia;
                }
            }
        }
        maps.push(map);
    }
    Ok(maps)
}

fn local_dims(p: &ProductPoset, cell: &Cell) -> (usize, usize) {
    let (ah, al) = &p.a_dims;
    let (bh, bl) = &p.b_dims;
    match cell.kind {
        CellKind::Vertex => (al[cell.a], bl[cell.b]),
        CellKind::EdgeRight => (ah[cell.a], bl[cell.b]),
        CellKind::EdgeUp => (al[cell.a], bh[cell.b]),
        CellKind::Face => (ah[cell.a], bh[cell.b]),
        CellKind::Plain => unreachable!(),
    }
}

/// Checks that `m2` equals `m1` after relabelling coordinates by the maps and
/// flipping cell signs, i.e. m2[map_r[i]][map_c[j]] = s_i t_j m1[i][j] for
/// sign vectors found by propagation. Over F_2 all signs are trivial.
pub fn signed_permutation_equal(m1: &Matrix, m2: &Matrix, map_rows: &[usize], map_cols: &[usize]) -> bool {
    if m1.shape() != m2.shape() || m1.nnz() != m2.nnz() {
        return false;
    }
    let f = m1.field();
    let (r, c) = m1.shape();
    // unknown signs: rows 0..r, columns r..r+c; value true = -1
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); r + c];
    for (i, j, x) in m1.triplets() {
        let y = m2.get(map_rows[i], map_cols[j]);
        let flip = if y == x {
            false
        } else if y == f.neg(x) {
            true
        } else {
            return false;
        };
        adj[i].push((r + j, flip));
        adj[r + j].push((i, flip));
    }
    let mut sign: Vec<Option<bool>> = vec![None; r + c];
    for s in 0..r + c {
        if sign[s].is_some() {
            continue;
        }
        sign[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let su = sign[u].unwrap();
            for &(v, flip) in &adj[u] {
                let want = su ^ flip;
                match sign[v] {
                    None => {
                        sign[v] = Some(want);
                        stack.push(v);
                    }
                    Some(sv) if sv != want && f.q() != 2 => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Sign vectors must also agree across degrees; this checks the whole
/// complex at once by treating every coordinate of every degree as one
/// unknown.
pub fn complexes_signed_isomorphic(c1: &BasedComplex, c2: &BasedComplex, maps: &[Vec<usize>]) -> bool {
    if c1.lowest() != c2.lowest() || c1.highest() != c2.highest() {
        return false;
    }
    let f = c1.field();
    let base: Vec<usize> = {
        let mut acc = 0;
        (c1.lowest()..=c1.highest())
            .map(|d| {
                let s = acc;
                acc += c1.dim(d);
                s
            })
            .collect()
    };
    let total: usize = (c1.lowest()..=c1.highest()).map(|d| c1.dim(d)).sum();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); total];
    for d in c1.lowest() + 1..=c1.highest() {
        let k = (d - c1.lowest()) as usize;
        let (m1, m2) = (c1.boundary(d).unwrap(), c2.boundary(d).unwrap());
        if m1.nnz() != m2.nnz() {
            return false;
        }
        for (i, j, x) in m1.triplets() {
            let y = m2.get(maps[k - 1][i], maps[k][j]);
            let flip = if y == x {
                false
            } else if y == f.neg(x) {
                true
            } else {
                return false;
            };
            let (u, v) = (base[k - 1] + i, base[k] + j);
            adj[u].push((v, flip));
            adj[v].push((u, flip));
        }
    }
    let mut sign: Vec<Option<bool>> = vec![None; total];
    for s in 0..total {
        if sign[s].is_some() {
            continue;
        }
        sign[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let su = sign[u].unwrap();
            for &(v, flip) in &adj[u] {
                let want = su ^ flip;
                match sign[v] {
                    None => {
                        sign[v] = Some(want);
                        stack.push(v);
                    }
                    Some(sv) if sv != want && f.q() != 2 => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Outcome of a minimum-weight search: `None` stands for infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: Option<usize>,
    pub witness: Option<ChainVector>,
    pub enumerated: u64,
}

fn check_cap(q: u32, k: usize, cap_bits: u32) -> Result<(), ComplexError> {
    let bits = required_bits(q, k);
    if bits > cap_bits {
        return Err(ComplexError::Infeasible {
            required_bits: bits,
            cap_bits,
        });
    }
    Ok(())
}

/// Minimum block weight over nonzero locally minimal i-cycles, where a cycle
/// c is locally minimal if |c + d(a x)| >= |c| for every cell x of degree
/// i+1 and every a in its coefficient space.
pub fn dlm_bruteforce(c: &BasedComplex, i: i32, cap_bits: u32) -> Result<DistanceResult, ComplexError> {
    let t = c.term(i).ok_or(ComplexError::DegreeOutOfRange(i))?;
    let q = c.field().q();
    let basis = c.cycle_basis(i);
    check_cap(q, basis.len(), cap_bits)?;
    let block_of = t.block_of();
    let sparse: Vec<Vec<(usize, u32)>> = basis.iter().map(|v| enumerate::to_sparse(v)).collect();

    // every single-cell move d(a x), deduplicated
    let mut moves: Vec<Vec<(usize, u32)>> = Vec::new();
    if let (Some(d), Some(up)) = (c.boundary(i + 1), c.term(i + 1)) {
        let dt = d.transpose();
        let f = c.field();
        for x in 0..up.cell_count() {
            let range = up.range(x);
            let dim = range.len();
            let mut a = vec![0u32; dim];
            gray_walk(q, dim, |j| {
                a[j] = (a[j] + 1) % q;
                let mut acc: HashMap<usize, u32> = HashMap::new();
                for (k, &ak) in a.iter().enumerate() {
                    if ak == 0 {
                        continue;
                    }
                    for &(r, v) in dt.row(range.start + k) {
                        let e = acc.entry(r).or_insert(0);
                        *e = f.add(*e, f.mul(ak, v));
                    }
                }
                let mut mv: Vec<(usize, u32)> = acc.into_iter().filter(|e| e.1 != 0).collect();
                mv.sort_unstable();
                if !mv.is_empty() {
                    moves.push(mv);
                }
                true
            });
        }
        moves.sort();
        moves.dedup();
    }

    let neg = |v: &[(usize, u32)]| -> Vec<(usize, u32)> { v.iter().map(|&(i, x)| (i, (q - x) % q)).collect() };
    let neg_moves: Vec<Vec<(usize, u32)>> = moves.iter().map(|m| neg(m)).collect();
    let mut v = BlockWeightedVec::zeros(q, &block_of, t.cell_count());
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut enumerated = 0u64;
    gray_walk(q, basis.len(), |j| {
        v.add_sparse(1, &sparse[j]);
        enumerated += 1;
        let w = v.weight;
        if w == 0 || best.as_ref().map_or(false, |b| w >= b.0) {
            return true;
        }
        let minimal = moves.iter().zip(&neg_moves).all(|(mv, nm)| {
            v.add_sparse(1, mv);
            let ok = v.weight >= w;
            v.add_sparse(1, nm);
            ok
        });
        if minimal {
            best = Some((w, v.values.clone()));
        }
        true
    });
    Ok(DistanceResult {
        value: best.as_ref().map(|b| b.0),
        witness: best.map(|b| ChainVector {
            degree: i,
            values: b.1,
        }),
        enumerated,
    })
}

/// min weight over Z_i \ B_i; B_i membership is decided by splitting a basis
/// of Z_i into a basis of B_i plus a complement.
pub fn systolic_distance_bruteforce(
    c: &BasedComplex,
    i: i32,
    weight: WeightKind,
    cap_bits: u32,
    threads: usize,
) -> Result<DistanceResult, ComplexError> {
    let t = c.term(i).ok_or(ComplexError::DegreeOutOfRange(i))?;
    let q = c.field().q();
    let cycles = c.cycle_basis(i);
    check_cap(q, cycles.len(), cap_bits)?;
    let n = t.dim();
    let bspace = match c.boundary(i + 1) {
        Some(d) => d.transpose().row_space(),
        None => Matrix::zeros(c.field(), 0, n).row_space(),
    };
    let trivial: Vec<Vec<u32>> = bspace.basis().to_vec();
    let extra: Vec<Vec<u32>> = bspace.extend_basis(&cycles).into_iter().map(|j| cycles[j].clone()).collect();
    let block_of = t.block_of();
    let blocks = match weight {
        WeightKind::Block => Some((&block_of[..], t.cell_count())),
        WeightKind::Hamming => None,
    };
    let found = min_weight_outside(q, n, &trivial, &extra, blocks, threads);
    let enumerated = enumerate::span_size(q, trivial.len() + extra.len()) as u64;
    Ok(DistanceResult {
        value: found.as_ref().map(|b| b.0),
        witness: found.map(|b| ChainVector {
            degree: i,
            values: b.1,
        }),
        enumerated,
    })
}

/// Exhaustive check of: |d c| >= d(c, Z_{i+1}) for every (i+1)-chain c with
/// |d c| < threshold (block weights).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtcCheck {
    pub chains: u64,
    pub syndromes: usize,
    pub checked: usize,
    pub violations: usize,
    /// (boundary weight, distance to cycles) of the first violation found.
    pub first_violation: Option<(usize, usize)>,
}

pub fn ltc_bound_check(c: &BasedComplex, i: i32, threshold: usize, cap_bits: u32) -> Result<LtcCheck, ComplexError> {
    let up = c.term(i + 1).ok_or(ComplexError::DegreeOutOfRange(i + 1))?;
    let low = c.term(i).ok_or(ComplexError::DegreeOutOfRange(i))?;
    let q = c.field().q();
    let n = up.dim();
    check_cap(q, n, cap_bits)?;
    let d = c.boundary_matrix(i + 1);
    let dt = d.transpose();
    let up_blocks = up.block_of();
    let low_blocks = low.block_of();
    let mut chain = BlockWeightedVec::zeros(q, &up_blocks, up.cell_count());
    let mut syn = BlockWeightedVec::zeros(q, &low_blocks, low.cell_count());
    // syndrome -> (syndrome block weight, min chain block weight)
    let mut table: HashMap<Vec<u32>, (usize, usize)> = HashMap::new();
    table.insert(vec![0; low.dim()], (0, 0));
    let mut chains = 1u64;
    gray_walk(q, n, |j| {
        chain.add_sparse(1, &[(j, 1)]);
        syn.add_sparse(1, dt.row(j));
        chains += 1;
        let e = table.entry(syn.values.clone()).or_insert((syn.weight, usize::MAX));
        e.1 = e.1.min(chain.weight);
        true
    });
    let mut out = LtcCheck {
        chains,
        syndromes: table.len(),
        checked: 0,
        violations: 0,
        first_violation: None,
    };
    let mut entries: Vec<_> = table.into_iter().collect();
    entries.sort();
    for (_, (sw, dist)) in entries {
        if sw < threshold {
            out.checked += 1;
            if sw < dist {
                out.violations += 1;
                out.first_violation.get_or_insert((sw, dist));
            }
        }
    }
    Ok(out)
}

/// Active / labeled vertex bookkeeping for a 1-chain of A (x)_G B*. Indices
/// are local to their cell class (V, F, E^).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellDiagnostics {
    pub active_vertices: Vec<usize>,
    pub active_faces: Vec<usize>,
    pub active_edges: Vec<usize>,
    pub face_active_edges: Vec<usize>,
    /// Active faces containing each face-active edge, aligned with
    /// `face_active_edges`.
    pub face_active_counts: Vec<usize>,
    pub labeled_vertices: Vec<usize>,
    /// Labeled vertices with >= m skeleton edges to labeled vertices.
    pub edge_expanding: Vec<usize>,
    /// Labeled vertices with >= s squared-skeleton edges to labeled vertices.
    pub face_expanding: Vec<usize>,
    /// Active edges with no labeled endpoint.
    pub unlabeled_active_edges: Vec<usize>,
    pub rounds: usize,
    pub m: usize,
    pub s: usize,
}

pub fn classify_cells(c: &BasedComplex, chain: &ChainVector, m: usize, s: usize) -> Result<CellDiagnostics, ComplexError> {
    let p = c.product().ok_or(ComplexError::NoProductPoset)?;
    if p.orientation != Orientation::BDual {
        return Err(ComplexError::Unsupported("cell classification needs the B_dual orientation".into()));
    }
    if chain.degree != 1 {
        return Err(ComplexError::DegreeOutOfRange(chain.degree));
    }
    let t = c.term(1).unwrap();
    let nonzero = |kind: CellKind, local: usize| {
        let (_, idx) = p.position(kind, local);
        chain.values[t.range(idx)].iter().any(|&x| x != 0)
    };
    let nv = p.class_size(CellKind::Vertex);
    let nf = p.class_size(CellKind::Face);
    let ne = p.class_size(CellKind::EdgeUp);
    let mut out = CellDiagnostics {
        m,
        s,
        ..Default::default()
    };
    let vertex_active: Vec<bool> = (0..nv).map(|v| nonzero(CellKind::Vertex, v)).collect();
    let face_active: Vec<bool> = (0..nf).map(|f| nonzero(CellKind::Face, f)).collect();
    out.active_vertices = (0..nv).filter(|&v| vertex_active[v]).collect();
    out.active_faces = (0..nf).filter(|&f| face_active[f]).collect();
    let up_faces = p.up_faces();
    for e in 0..ne {
        let at_vertex = p.up_vertices[e].iter().any(|&v| vertex_active[v]);
        let faces = up_faces[e].iter().filter(|&&f| face_active[f]).count();
        if at_vertex || faces > 0 {
            out.active_edges.push(e);
            if !at_vertex {
                out.face_active_edges.push(e);
                out.face_active_counts.push(faces);
            }
        }
    }

    let nb = p.lambda_neighbors();
    let mut labeled = vertex_active.clone();
    loop {
        out.rounds += 1;
        let mut fresh = Vec::new();
        for &e in &out.face_active_edges {
            for &u in &p.up_vertices[e] {
                if labeled[u] {
                    continue;
                }
                let mut seen: Vec<usize> = nb[u].iter().copied().filter(|&x| labeled[x]).collect();
                seen.dedup();
                if seen.len() >= m {
                    fresh.push(u);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for u in fresh {
            labeled[u] = true;
        }
    }
    out.labeled_vertices = (0..nv).filter(|&v| labeled[v]).collect();
    let to_labeled: Vec<usize> = (0..nv).map(|u| nb[u].iter().filter(|&&x| labeled[x]).count()).collect();
    for &u in &out.labeled_vertices {
        if to_labeled[u] >= m {
            out.edge_expanding.push(u);
        }
        let sq: usize = nb[u].iter().map(|&w| to_labeled[w]).sum();
        if sq >= s {
            out.face_expanding.push(u);
        }
    }
    out.unlabeled_active_edges = out
        .active_edges
        .iter()
        .copied()
        .filter(|&e| !p.up_vertices[e].iter().any(|&v| labeled[v]))
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupSpec};
    use crate::localcodes::LocalCode;
    use crate::tanner::{base_tanner, bouquet_tanner, lift_tanner};

    fn f2() -> Field {
        Field::binary()
    }

    fn toric(l: u32) -> BasedComplex {
        let g = Arc::new(build_group(&GroupSpec::Product(vec![GroupSpec::Cyclic(l), GroupSpec::Cyclic(l)])).unwrap());
        let h = LocalCode::from_dense(f2(), &[vec![1, 1]]).unwrap();
        let t = bouquet_tanner(&h).unwrap();
        let x = g.from_product_coords(&[1, 0]).unwrap();
        let y = g.from_product_coords(&[0, 1]).unwrap();
        let a = lift_tanner(&t, g.clone(), &[x]).unwrap();
        let b = lift_tanner(&t, g, &[y]).unwrap();
        lifted_product(&a.module(), &b.module(), Orientation::B).unwrap()
    }

    #[test]
    fn toric_homology() {
        for l in [2, 3, 4] {
            let c = toric(l);
            assert!(c.verify_chain().is_ok());
            assert_eq!(c.dim(1), 2 * (l * l) as usize);
            assert_eq!(c.homology_dim(1).unwrap(), 2);
        }
    }

    #[test]
    fn toric_systole() {
        let c = toric(3);
        let d = systolic_distance_bruteforce(&c, 1, WeightKind::Hamming, 24, 1).unwrap();
        assert_eq!(d.value, Some(3));
        let dd = systolic_distance_bruteforce(&c.dual(), 1, WeightKind::Hamming, 24, 2).unwrap();
        assert_eq!(dd.value, Some(3));
    }

    #[test]
    fn product_incidence_is_consistent() {
        let q = Field::new(3).unwrap();
        let g = Arc::new(build_group(&GroupSpec::Symmetric(3)).unwrap());
        let h = LocalCode::from_dense(q, &[vec![1, 2, 1]]).unwrap();
        let a = lift_tanner(&base_tanner(&h), g.clone(), &[0, 1, 3]).unwrap();
        let b = lift_tanner(&base_tanner(&h), g, &[2, 4, 5]).unwrap();
        for o in [Orientation::B, Orientation::BDual] {
            let c = lifted_product(&a.module(), &b.module(), o).unwrap();
            assert!(c.verify_chain().is_ok());
            assert!(c.check_incidence_consistency().is_ok());
            assert!(c.check_block_sparsity().is_ok());
            assert!(c.product().unwrap().check_complete_square().is_ok());
        }
    }

    #[test]
    fn corrupted_sign_is_located() {
        let q = Field::new(3).unwrap();
        let d2 = Matrix::from_dense(q, &[vec![1], vec![1]]).unwrap();
        let d1 = Matrix::from_dense(q, &[vec![1, 2]]).unwrap();
        let mut c = BasedComplex::from_matrices(q, 0, vec![d1, d2]).unwrap();
        assert!(c.verify_chain().is_ok());
        c.replace_boundary(1, Matrix::from_dense(q, &[vec![1, 1]]).unwrap()).unwrap();
        let v = c.verify_chain().unwrap_err();
        assert_eq!((v.degree, v.row_cell, v.col_cell), (2, 0, 0));
    }
}
