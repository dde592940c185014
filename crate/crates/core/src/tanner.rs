//! Tanner complexes F_q E -> F_q^r V on multigraphs and their G-lifts.

use std::sync::Arc;

use thiserror::Error;

use crate::complexes::{ModuleComplex, ModuleTerm};
use crate::gf::{Field, Matrix};
use crate::graphs::{derive_lift, GraphError, Lift, Multigraph};
use crate::groups::{build_group, FiniteGroup, GroupSpec};
use crate::localcodes::LocalCode;

#[derive(Debug, Error)]
pub enum TannerError {
    #[error("vertex {vertex} has degree {degree} but the local code has length {w}")]
    DegreeMismatch { vertex: usize, degree: usize, w: usize },
    #[error("local map at vertex {vertex} has {rows} rows, expected {r}")]
    RowMismatch { vertex: usize, rows: usize, r: usize },
    #[error("local maps must share one field")]
    FieldMismatch,
    #[error("only an unlifted complex can be lifted")]
    AlreadyLifted,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Lift bookkeeping: the base complex and the voltage data.
#[derive(Debug, Clone)]
pub struct TannerLift {
    pub base: Arc<TannerComplex>,
    pub lift: Lift,
}

/// Tanner complex: every vertex v carries a local map F_q^{deg v} -> F_q^r
/// whose columns follow `incidences[v]`.
#[derive(Debug, Clone)]
pub struct TannerComplex {
    field: Field,
    graph: Multigraph,
    incidences: Vec<Vec<(usize, u8)>>,
    local_maps: Vec<Matrix>,
    r: usize,
    reference: Option<Matrix>,
    lift: Option<TannerLift>,
}

impl TannerComplex {
    /// General constructor; incidences are taken in `Multigraph::incidences`
    /// order.
    pub fn new(field: Field, graph: Multigraph, local_maps: Vec<Matrix>, r: usize) -> Result<Self, TannerError> {
        let incidences = graph.incidences();
        for (v, (m, inc)) in local_maps.iter().zip(&incidences).enumerate() {
            if m.field() != field {
                return Err(TannerError::FieldMismatch);
            }
            if m.cols() != inc.len() {
                return Err(TannerError::DegreeMismatch {
                    vertex: v,
                    degree: inc.len(),
                    w: m.cols(),
                });
            }
            if m.rows() != r {
                return Err(TannerError::RowMismatch { vertex: v, rows: m.rows(), r });
            }
        }
        assert_eq!(local_maps.len(), graph.vertex_count());
        Ok(TannerComplex {
            field,
            graph,
            incidences,
            local_maps,
            r,
            reference: None,
            lift: None,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn incidences(&self, v: usize) -> &[(usize, u8)] {
        &self.incidences[v]
    }

    pub fn local_map(&self, v: usize) -> &Matrix {
        &self.local_maps[v]
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn reference(&self) -> Option<&Matrix> {
        self.reference.as_ref()
    }

    pub fn lift(&self) -> Option<&TannerLift> {
        self.lift.as_ref()
    }

    pub fn group(&self) -> Option<&Arc<FiniteGroup>> {
        self.lift.as_ref().map(|l| &l.lift.group)
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count_total()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Parity-check matrix of the Tanner code: row v*r + k, column e.
    pub fn global_matrix(&self) -> Matrix {
        let r = self.r;
        let mut trip = Vec::new();
        for (v, inc) in self.incidences.iter().enumerate() {
            let m = &self.local_maps[v];
            for (i, j, x) in m.triplets() {
                trip.push((v * r + i, inc[j].0, x));
            }
        }
        Matrix::from_triplets(self.field, self.vertex_count() * r, self.edge_count(), trip)
    }

    /// Boundary of an edge chain.
    pub fn boundary(&self, c: &[u32]) -> Vec<u32> {
        self.global_matrix().mul_vec(c)
    }

    /// Checks that c restricted to each vertex star is a local codeword.
    pub fn satisfies_local_checks(&self, c: &[u32]) -> bool {
        self.incidences.iter().zip(&self.local_maps).all(|(inc, m)| {
            let local: Vec<u32> = inc.iter().map(|&(e, _)| c[e]).collect();
            m.mul_vec(&local).iter().all(|&x| x == 0)
        })
    }

    /// True when every local map literally equals the reference matrix.
    pub fn local_maps_match_reference(&self) -> bool {
        match &self.reference {
            Some(h) => self.local_maps.iter().all(|m| m == h),
            None => false,
        }
    }

    /// The complex as a two-term free module complex over F_q G (the trivial
    /// group when unlifted). High cells are base edges, low cells base
    /// vertices.
    pub fn module(&self) -> ModuleComplex {
        let (base, group, voltages): (&TannerComplex, Arc<FiniteGroup>, Vec<u32>) = match &self.lift {
            Some(l) => (&l.base, l.lift.group.clone(), l.lift.voltages.clone()),
            None => {
                let g = Arc::new(build_group(&GroupSpec::Cyclic(1)).expect("trivial group"));
                (self, g, vec![0; self.edge_count()])
            }
        };
        let identity = group.identity();
        let mut terms = Vec::new();
        for (v, inc) in base.incidences.iter().enumerate() {
            let m = &base.local_maps[v];
            let mt = m.transpose();
            for (p, &(e, slot)) in inc.iter().enumerate() {
                let col: Vec<(usize, usize, u32)> = mt.row(p).iter().map(|&(i, x)| (i, 0, x)).collect();
                let block = Matrix::from_triplets(self.field, base.r, 1, col);
                let shift = if slot == 0 { identity } else { voltages[e] };
                terms.push(ModuleTerm {
                    high: e,
                    low: v,
                    block,
                    shift,
                });
            }
        }
        ModuleComplex::new(
            self.field,
            group,
            vec![1; base.edge_count()],
            vec![base.r; base.vertex_count()],
            terms,
        )
        .expect("tanner module is well formed")
    }

    /// Right action of h on an edge chain of a lifted complex.
    pub fn act_on_edges(&self, c: &[u32], h: u32) -> Vec<u32> {
        let l = &self.lift.as_ref().expect("lifted complex").lift;
        let mut out = vec![0; c.len()];
        for (x, &v) in c.iter().enumerate() {
            out[l.act_edge(x, h)] = v;
        }
        out
    }

    /// Right action of h on a vertex chain (blocks of size r).
    pub fn act_on_vertices(&self, c: &[u32], h: u32) -> Vec<u32> {
        let l = &self.lift.as_ref().expect("lifted complex").lift;
        let r = self.r;
        let mut out = vec![0; c.len()];
        for (i, &v) in c.iter().enumerate() {
            out[l.act_vertex(i / r, h) * r + i % r] = v;
        }
        out
    }
}

/// T(h) on the dipole D_w: two vertices, w parallel edges 0 -> 1, both local
/// maps equal to h.
pub fn base_tanner(h: &LocalCode) -> TannerComplex {
    tanner_on_graph(Multigraph::dipole(h.w()), h).expect("dipole is w-regular")
}

/// T(h) on the bouquet B_w' with w = 2 w': every loop gives two columns, in
/// the order (slot 0, slot 1).
pub fn bouquet_tanner(h: &LocalCode) -> Result<TannerComplex, TannerError> {
    if h.w() % 2 != 0 {
        return Err(TannerError::DegreeMismatch {
            vertex: 0,
            degree: h.w() + 1,
            w: h.w(),
        });
    }
    tanner_on_graph(Multigraph::bouquet(h.w() / 2), h)
}

/// Every vertex gets the local map h; the graph must be w-regular.
pub fn tanner_on_graph(graph: Multigraph, h: &LocalCode) -> Result<TannerComplex, TannerError> {
    let maps = vec![h.h().clone(); graph.vertex_count()];
    let mut t = TannerComplex::new(h.field(), graph, maps, h.r())?;
    t.reference = Some(h.h().clone());
    Ok(t)
}

/// The derived complex: edge (e, g) joins (v, g) and (v', voltage(e) g) and
/// each lifted vertex keeps its base local map with columns in base order.
pub fn lift_tanner(t: &TannerComplex, group: Arc<FiniteGroup>, voltages: &[u32]) -> Result<TannerComplex, TannerError> {
    if t.lift.is_some() {
        return Err(TannerError::AlreadyLifted);
    }
    let lift = derive_lift(&t.graph, group.clone(), voltages)?;
    let m = group.order();
    let nv = lift.graph.vertex_count();
    let mut incidences = vec![Vec::new(); nv];
    let mut local_maps = Vec::with_capacity(nv);
    for v in 0..t.vertex_count() {
        for g in 0..m as u32 {
            let x = lift.vertex_index(v, g);
            for &(e, slot) in &t.incidences[v] {
                let eg = if slot == 0 {
                    g
                } else {
                    group.mul(group.inv(voltages[e]), g)
                };
                incidences[x].push((lift.edge_index(e, eg), slot));
            }
            local_maps.push(t.local_maps[v].clone());
        }
    }
    Ok(TannerComplex {
        field: t.field,
        graph: lift.graph.clone(),
        incidences,
        local_maps,
        r: t.r,
        reference: t.reference.clone(),
        lift: Some(TannerLift {
            base: Arc::new(t.clone()),
            lift,
        }),
    })
}
