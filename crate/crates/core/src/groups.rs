//! Finite groups, generating sets and group algebras F_q[G].
//!
//! Elements are indexed 0..|G| with the identity at index 0. Small groups
//! carry a full multiplication table; larger ones multiply through their
//! concrete representation.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{is_prime, Field, Matrix};

/// Groups up to this order get a materialized multiplication table.
pub const TABLE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("PSL(2, q) needs an odd prime q, got {0}")]
    EvenCharacteristic(u64),
    #[error("cyclic group order must be positive")]
    EmptyCyclic,
    #[error("LPS preconditions violated: {}", .0.join("; "))]
    LpsPreconditions(Vec<String>),
    #[error("multiplication table is not a group: {0}")]
    BadTable(String),
    #[error("element {0} out of range for a group of order {1}")]
    ElementOutOfRange(usize, usize),
    #[error("group of order {0} exceeds the supported size")]
    TooLarge(usize),
}

/// Which group to build.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u32),
    Product(Vec<GroupSpec>),
    Psl2(u32),
    Symmetric(u32),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(l) => write!(f, "C{l}"),
            GroupSpec::Product(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", names.join("x"))
            }
            GroupSpec::Psl2(q) => write!(f, "PSL(2,{q})"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Cyclic(u32),
    Product { factors: Vec<FiniteGroup> },
    Psl2 { q: u32, elems: Vec<[u32; 4]>, index: HashMap<[u32; 4], u32> },
    Perm { perms: Vec<Vec<u8>>, index: HashMap<Vec<u8>, u32> },
    Table,
}

/// A finite group with elements 0..order and identity 0.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
    repr: Repr,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.order == other.order
    }
}

impl Eq for FiniteGroup {}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    let mut g = match spec {
        GroupSpec::Cyclic(l) => {
            if *l == 0 {
                return Err(GroupError::EmptyCyclic);
            }
            let l = *l;
            FiniteGroup {
                name: spec.to_string(),
                order: l as usize,
                table: None,
                inverse: (0..l).map(|x| (l - x) % l).collect(),
                repr: Repr::Cyclic(l),
            }
        }
        GroupSpec::Product(parts) => {
            let factors: Vec<FiniteGroup> = parts.iter().map(build_group).collect::<Result<_, _>>()?;
            let order = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.order));
            let order = order.ok_or(GroupError::TooLarge(usize::MAX))?;
            let mut g = FiniteGroup {
                name: spec.to_string(),
                order,
                table: None,
                inverse: Vec::new(),
                repr: Repr::Product { factors },
            };
            g.inverse = (0..order as u32).map(|x| g.compute_inverse(x)).collect();
            g
        }
        GroupSpec::Psl2(q) => psl2(*q)?,
        GroupSpec::Symmetric(n) => symmetric(*n)?,
    };
    if g.order <= TABLE_LIMIT {
        g.materialize();
    }
    Ok(g)
}

fn psl2(q: u32) -> Result<FiniteGroup, GroupError> {
    if !is_prime(q as u64) {
        return Err(GroupError::NotPrime(q as u64));
    }
    if q == 2 {
        return Err(GroupError::EvenCharacteristic(2));
    }
    let f = Field::new(q as u64).expect("prime");
    let mut elems: Vec<[u32; 4]> = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if f.sub(f.mul(a, d), f.mul(b, c)) == 1 {
                        let m = normalize_psl(f, [a, b, c, d]);
                        if m == [a, b, c, d] {
                            elems.push(m);
                        }
                    }
                }
            }
        }
    }
    elems.sort_unstable();
    let id = [1, 0, 0, 1];
    let pos = elems.iter().position(|e| *e == id).expect("identity");
    elems.remove(pos);
    elems.insert(0, id);
    let index: HashMap<[u32; 4], u32> = elems.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect();
    let inverse = elems
        .iter()
        .map(|&[a, b, c, d]| index[&normalize_psl(f, [d, f.neg(b), f.neg(c), a])])
        .collect();
    Ok(FiniteGroup {
        name: GroupSpec::Psl2(q).to_string(),
        order: elems.len(),
        table: None,
        inverse,
        repr: Repr::Psl2 { q, elems, index },
    })
}

/// Picks the representative of {M, -M} whose first nonzero entry (row-major)
/// lies in [1, (q-1)/2].
pub fn normalize_psl(f: Field, m: [u32; 4]) -> [u32; 4] {
    let first = m.iter().copied().find(|&x| x != 0).unwrap_or(0);
    if first > (f.q() - 1) / 2 {
        m.map(|x| f.neg(x))
    } else {
        m
    }
}

fn symmetric(n: u32) -> Result<FiniteGroup, GroupError> {
    if n > 8 {
        return Err(GroupError::TooLarge((1..=n as usize).product()));
    }
    let mut perms: Vec<Vec<u8>> = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        perms.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    let index: HashMap<Vec<u8>, u32> = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
    let inverse = perms
        .iter()
        .map(|p| {
            let mut inv = vec![0u8; p.len()];
            for (i, &x) in p.iter().enumerate() {
                inv[x as usize] = i as u8;
            }
            index[&inv]
        })
        .collect();
    Ok(FiniteGroup {
        name: GroupSpec::Symmetric(n).to_string(),
        order: perms.len(),
        table: None,
        inverse,
        repr: Repr::Perm { perms, index },
    })
}

impl FiniteGroup {
    /// Builds a group from a multiplication table (row a, column b holds ab).
    pub fn from_table(name: &str, table: Vec<Vec<u32>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::BadTable("empty".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::BadTable(format!("row {a} has length {}", row.len())));
            }
            if row.iter().any(|&x| x as usize >= n) {
                return Err(GroupError::BadTable(format!("row {a} has an entry out of range")));
            }
        }
        for a in 0..n {
            if table[0][a] != a as u32 || table[a][0] != a as u32 {
                return Err(GroupError::BadTable("element 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let Some(b) = (0..n).find(|&b| table[a][b] == 0) else {
                return Err(GroupError::BadTable(format!("element {a} has no inverse")));
            };
            inverse[a] = b as u32;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = table[table[a][b] as usize][c];
                    let r = table[a][table[b][c] as usize];
                    if l != r {
                        return Err(GroupError::BadTable(format!("({a}{b}){c} != {a}({b}{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            order: n,
            table: Some(table.into_iter().flatten().collect()),
            inverse,
            repr: Repr::Table,
        })
    }

    fn materialize(&mut self) {
        let n = self.order;
        let mut t = Vec::with_capacity(n * n);
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                t.push(self.compute_mul(a, b));
            }
        }
        self.table = Some(t);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> u32 {
        0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order + b as usize],
            None => self.compute_mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order as u32;
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Coordinates of an element of a direct product, one per factor.
    pub fn product_coords(&self, x: u32) -> Option<Vec<u32>> {
        let Repr::Product { factors } = &self.repr else {
            return None;
        };
        let mut out = vec![0; factors.len()];
        let mut x = x as usize;
        for (k, f) in factors.iter().enumerate().rev() {
            out[k] = (x % f.order) as u32;
            x /= f.order;
        }
        Some(out)
    }

    /// Element of a direct product with the given factor coordinates.
    pub fn from_product_coords(&self, coords: &[u32]) -> Option<u32> {
        let Repr::Product { factors } = &self.repr else {
            return None;
        };
        if coords.len() != factors.len() {
            return None;
        }
        let mut x = 0usize;
        for (f, &c) in factors.iter().zip(coords) {
            if c as usize >= f.order {
                return None;
            }
            x = x * f.order + c as usize;
        }
        Some(x as u32)
    }

    /// The normalized 2x2 matrix of a PSL(2, q) element.
    pub fn psl_matrix(&self, x: u32) -> Option<[u32; 4]> {
        match &self.repr {
            Repr::Psl2 { elems, .. } => elems.get(x as usize).copied(),
            _ => None,
        }
    }

    /// Index of the class of a det-1 matrix in PSL(2, q).
    pub fn psl_index(&self, m: [u32; 4]) -> Option<u32> {
        match &self.repr {
            Repr::Psl2 { q, index, .. } => {
                let f = Field::new(*q as u64).ok()?;
                index.get(&normalize_psl(f, m.map(|x| x % q))).copied()
            }
            _ => None,
        }
    }

    /// Permutation of a symmetric-group element (image of each point).
    pub fn permutation(&self, x: u32) -> Option<&[u8]> {
        match &self.repr {
            Repr::Perm { perms, .. } => perms.get(x as usize).map(|p| p.as_slice()),
            _ => None,
        }
    }

    fn compute_mul(&self, a: u32, b: u32) -> u32 {
        match &self.repr {
            Repr::Cyclic(l) => (a + b) % l,
            Repr::Product { factors } => {
                let (ca, cb) = (self.product_coords(a).unwrap(), self.product_coords(b).unwrap());
                let mut x = 0usize;
                for (k, f) in factors.iter().enumerate() {
                    x = x * f.order + f.mul(ca[k], cb[k]) as usize;
                }
                x as u32
            }
            Repr::Psl2 { q, elems, index } => {
                let f = Field::new(*q as u64).unwrap();
                let [a0, a1, a2, a3] = elems[a as usize];
                let [b0, b1, b2, b3] = elems[b as usize];
                let m = [
                    f.add(f.mul(a0, b0), f.mul(a1, b2)),
                    f.add(f.mul(a0, b1), f.mul(a1, b3)),
                    f.add(f.mul(a2, b0), f.mul(a3, b2)),
                    f.add(f.mul(a2, b1), f.mul(a3, b3)),
                ];
                index[&normalize_psl(f, m)]
            }
            Repr::Perm { perms, index } => {
                let (p, s) = (&perms[a as usize], &perms[b as usize]);
                let comp: Vec<u8> = s.iter().map(|&i| p[i as usize]).collect();
                index[&comp]
            }
            Repr::Table => self.table.as_ref().unwrap()[a as usize * self.order + b as usize],
        }
    }

    fn compute_inverse(&self, a: u32) -> u32 {
        match &self.repr {
            Repr::Product { factors } => {
                let c = self.product_coords(a).unwrap();
                let inv: Vec<u32> = factors.iter().zip(&c).map(|(f, &x)| f.inv(x)).collect();
                self.from_product_coords(&inv).unwrap()
            }
            _ => self.inverse[a as usize],
        }
    }

    /// Order of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[u32]) -> usize {
        let mut seen = vec![false; self.order];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(s, x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }

    pub fn is_symmetric_set(&self, set: &[u32]) -> bool {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for &s in set {
            *counts.entry(s).or_default() += 1;
        }
        counts.iter().all(|(&s, &c)| counts.get(&self.inv(s)) == Some(&c))
    }

    pub fn check_element(&self, x: u32) -> Result<(), GroupError> {
        if (x as usize) < self.order {
            Ok(())
        } else {
            Err(GroupError::ElementOutOfRange(x as usize, self.order))
        }
    }
}

/// Generators of the LPS Ramanujan graph X^{p,q} inside PSL(2, q).
#[derive(Debug, Clone)]
pub struct LpsGenerators {
    pub group: Arc<FiniteGroup>,
    /// Group elements in quadruple enumeration order.
    pub generators: Vec<u32>,
    pub quadruples: Vec<[i64; 4]>,
}

/// Solutions of a0^2 + a1^2 + a2^2 + a3^2 = p with a0 > 0 odd and a1, a2, a3
/// even, in lexicographic order of (a0, a1, a2, a3).
pub fn lps_quadruples(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let r = (p as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a0 in (1..=r).step_by(2) {
        for a1 in (-r..=r).filter(|x| x % 2 == 0) {
            for a2 in (-r..=r).filter(|x| x % 2 == 0) {
                for a3 in (-r..=r).filter(|x| x % 2 == 0) {
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p {
                        out.push([a0, a1, a2, a3]);
                    }
                }
            }
        }
    }
    out
}

pub fn lps_generators(p: u64, q: u64) -> Result<LpsGenerators, GroupError> {
    let mut bad = Vec::new();
    if !is_prime(p) {
        bad.push(format!("p = {p} is not prime"));
    }
    if !is_prime(q) {
        bad.push(format!("q = {q} is not prime"));
    }
    if p == q {
        bad.push("p must differ from q".to_string());
    }
    if p % 4 != 1 {
        bad.push(format!("p = {p} is not 1 mod 4"));
    }
    if q % 4 != 1 {
        bad.push(format!("q = {q} is not 1 mod 4"));
    }
    if q * q <= 4 * p {
        bad.push(format!("q = {q} is not greater than 2 sqrt(p)"));
    }
    if is_prime(q) && q > 2 {
        let f = Field::new(q).unwrap();
        let l = f.pow((p % q) as u32, (q - 1) / 2);
        if l != 1 {
            bad.push(format!("p^((q-1)/2) = {l} mod q, expected 1"));
        }
    }
    if !bad.is_empty() {
        return Err(GroupError::LpsPreconditions(bad));
    }
    let f = Field::new(q).unwrap();
    let group = Arc::new(build_group(&GroupSpec::Psl2(q as u32))?);
    let i = f.sqrt(f.neg(1)).expect("q = 1 mod 4");
    let root = f.sqrt((p % q) as u32).expect("p is a square mod q");
    let scale = f.inv(root);
    let quadruples = lps_quadruples(p);
    let generators = quadruples
        .iter()
        .map(|&[a0, a1, a2, a3]| {
            let e = |x: i64| f.from_i64(x);
            let m = [
                f.add(e(a0), f.mul(i, e(a1))),
                f.add(e(a2), f.mul(i, e(a3))),
                f.add(e(-a2), f.mul(i, e(a3))),
                f.sub(e(a0), f.mul(i, e(a1))),
            ]
            .map(|x| f.mul(x, scale));
            group.psl_index(m).expect("determinant one")
        })
        .collect();
    Ok(LpsGenerators {
        group,
        generators,
        quadruples,
    })
}

/// Which regular representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// x -> x r
    Right,
    /// x -> r x
    Left,
}

/// Element of the group algebra F_q[G] as a sparse coefficient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElem {
    pub group: Arc<FiniteGroup>,
    pub field: Field,
    coeffs: BTreeMap<u32, u32>,
}

impl GroupAlgebraElem {
    pub fn zero(group: Arc<FiniteGroup>, field: Field) -> Self {
        GroupAlgebraElem {
            group,
            field,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn element(group: Arc<FiniteGroup>, field: Field, g: u32) -> Self {
        let mut e = Self::zero(group, field);
        e.add_term(g, 1);
        e
    }

    pub fn one(group: Arc<FiniteGroup>, field: Field) -> Self {
        Self::element(group, field, 0)
    }

    pub fn from_terms(
        group: Arc<FiniteGroup>,
        field: Field,
        terms: impl IntoIterator<Item = (u32, u32)>,
    ) -> Self {
        let mut e = Self::zero(group, field);
        for (g, c) in terms {
            e.add_term(g, c);
        }
        e
    }

    pub fn add_term(&mut self, g: u32, c: u32) {
        assert!((g as usize) < self.group.order(), "element {g} outside the group");
        let f = self.field;
        let v = f.add(self.coeffs.get(&g).copied().unwrap_or(0), c % f.q());
        if v == 0 {
            self.coeffs.remove(&g);
        } else {
            self.coeffs.insert(g, v);
        }
    }

    pub fn coeff(&self, g: u32) -> u32 {
        self.coeffs.get(&g).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.coeffs.iter().map(|(&g, &c)| (g, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of group elements with a nonzero coefficient.
    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g, c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self::from_terms(self.group.clone(), f, self.terms().map(|(g, x)| (g, f.mul(x, c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field;
        let mut out = Self::zero(self.group.clone(), f);
        for (g, a) in self.terms() {
            for (h, b) in other.terms() {
                out.add_term(self.group.mul(g, h), f.mul(a, b));
            }
        }
        out
    }

    /// The involution sum a_g g -> sum a_g g^{-1}.
    pub fn antipode(&self) -> Self {
        Self::from_terms(
            self.group.clone(),
            self.field,
            self.terms().map(|(g, c)| (self.group.inv(g), c)),
        )
    }
}

/// Matrix of multiplication by `r` on F_q[G] in the element basis; column x
/// holds the image of x.
pub fn regular_rep(r: &GroupAlgebraElem, side: Side) -> Matrix {
    let g = &r.group;
    let n = g.order();
    let trip = (0..n as u32).flat_map(|x| {
        r.terms().map(move |(h, c)| {
            let y = match side {
                Side::Right => g.mul(x, h),
                Side::Left => g.mul(h, x),
            };
            (y as usize, x as usize, c)
        })
    });
    Matrix::from_triplets(r.field, n, n, trip)
}
