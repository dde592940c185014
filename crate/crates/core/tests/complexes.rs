use std::sync::Arc;

use liftcodes::complexes::*;
use liftcodes::gf::{Block, Field, Matrix};
use liftcodes::groups::{build_group, FiniteGroup, GroupSpec};
use liftcodes::localcodes::{code_profile, LocalCode};
use liftcodes::tanner::{base_tanner, bouquet_tanner, lift_tanner, TannerComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group(spec: GroupSpec) -> Arc<FiniteGroup> {
    Arc::new(build_group(&spec).unwrap())
}

fn random_full_rank(rng: &mut impl Rng, q: u32, r: usize, w: usize) -> LocalCode {
    let f = Field::new(q as u64).unwrap();
    loop {
        let rows: Vec<Vec<u32>> = (0..r).map(|_| (0..w).map(|_| rng.gen_range(0..q)).collect()).collect();
        let h = Matrix::from_dense_with_cols(f, &rows, w).unwrap();
        if h.rank() == r {
            return LocalCode::new(h);
        }
    }
}

fn random_lift(rng: &mut impl Rng, h: &LocalCode, g: &Arc<FiniteGroup>) -> TannerComplex {
    let volts: Vec<u32> = (0..h.w()).map(|_| rng.gen_range(0..g.order() as u32)).collect();
    lift_tanner(&base_tanner(h), g.clone(), &volts).unwrap()
}

fn lifted(rng: &mut impl Rng, q: u32, r: usize, w: usize, g: &Arc<FiniteGroup>) -> TannerComplex {
    let h = random_full_rank(rng, q, r, w);
    random_lift(rng, &h, g)
}

fn random_vec(rng: &mut impl Rng, q: u32, n: usize, density: f64) -> Vec<u32> {
    (0..n).map(|_| if rng.gen_bool(density) { rng.gen_range(1..q) } else { 0 }).collect()
}

fn span_element(rng: &mut impl Rng, q: u32, n: usize, basis: &[Vec<u32>]) -> Vec<u32> {
    let mut v = vec![0; n];
    for b in basis {
        let s = rng.gen_range(0..q);
        for (x, y) in v.iter_mut().zip(b) {
            *x = (*x + s * y) % q;
        }
    }
    v
}

#[test]
fn trivial_group_gives_kronecker_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g1 = group(GroupSpec::Cyclic(1));
    for q in [2u32, 3, 5] {
        let f = Field::new(q as u64).unwrap();
        let ha = random_full_rank(&mut rng, q, 1, 3);
        let hb = random_full_rank(&mut rng, q, 1, 4);
        let a = lift_tanner(&base_tanner(&ha), g1.clone(), &[0; 3]).unwrap();
        let b = lift_tanner(&base_tanner(&hb), g1.clone(), &[0; 4]).unwrap();
        let c = lifted_product(&a.module(), &b.module(), Orientation::B).unwrap();
        let (da, db) = (a.global_matrix(), b.global_matrix());
        let (na, ma) = (da.cols(), da.rows());
        let (nb, mb) = (db.cols(), db.rows());
        let i = |n| Matrix::identity(f, n);
        // C1 = [E-> = A1 (x) B0, E^ = A0 (x) B1]
        let d2 = Matrix::block_assemble(
            f,
            &[vec![Some(Block::neg(&i(na).kron(&db).unwrap()))], vec![Some(Block::pos(&da.kron(&i(nb)).unwrap()))]],
        )
        .unwrap();
        let d1 = Matrix::block_assemble(
            f,
            &[vec![Some(Block::pos(&da.kron(&i(mb)).unwrap())), Some(Block::pos(&i(ma).kron(&db).unwrap()))]],
        )
        .unwrap();
        assert_eq!(c.boundary_matrix(2), d2, "q = {q}");
        assert_eq!(c.boundary_matrix(1), d1, "q = {q}");
    }
}

#[test]
fn cayley_census_matches_cell_count_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (spec, gens) in [
        (GroupSpec::Cyclic(7), vec![1u32, 6, 2, 5]),
        (GroupSpec::Symmetric(3), vec![1, 2, 5]),
        (GroupSpec::Product(vec![GroupSpec::Cyclic(3), GroupSpec::Cyclic(3)]), vec![1, 2, 3, 6]),
    ] {
        let g = group(spec);
        assert!(g.is_symmetric_set(&gens));
        let w = gens.len();
        let (r, rp) = (1, 2);
        let ha = random_full_rank(&mut rng, 2, r, w);
        let hb = random_full_rank(&mut rng, 2, rp, w);
        let a = lift_tanner(&base_tanner(&ha), g.clone(), &gens).unwrap();
        let b = lift_tanner(&base_tanner(&hb), g.clone(), &gens).unwrap();
        let c = lifted_product(&a.module(), &b.module(), Orientation::BDual).unwrap();
        let n0 = 2 * g.order();
        assert_eq!(c.dim(0), n0 * r * w);
        assert_eq!(c.dim(2), n0 * rp * w);
        assert_eq!(2 * c.dim(1), n0 * (w * w + 4 * r * rp));
        let census = c.product().unwrap().census();
        assert_eq!(census.right_edges, n0 * w);
        assert_eq!(census.up_edges, n0 * w);
        assert_eq!(2 * census.faces, n0 * w * w);
        assert_eq!(census.vertices, 2 * n0);
        assert!(c.product().unwrap().check_complete_square().is_ok());
    }
}

#[test]
fn every_constructed_product_is_a_complex() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for spec in [GroupSpec::Cyclic(4), GroupSpec::Symmetric(3), GroupSpec::Psl2(5)] {
        let g = group(spec);
        for q in [2u32, 3] {
            let a = lifted(&mut rng, q, 2, 4, &g);
            let b = lifted(&mut rng, q, 1, 3, &g);
            for o in [Orientation::B, Orientation::BDual] {
                let c = lifted_product(&a.module(), &b.module(), o).unwrap();
                assert!(c.verify_chain().is_ok());
                assert!(c.dual().verify_chain().is_ok());
                assert!(c.check_block_sparsity().is_ok());
                assert!(c.check_incidence_consistency().is_ok());
                assert_eq!(c.dual().homology_dim(1).unwrap(), c.homology_dim(1).unwrap());
            }
        }
    }
}

#[test]
fn mutation_is_detected_and_located() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = group(GroupSpec::Cyclic(3));
    let a = lifted(&mut rng, 3, 1, 3, &g);
    let b = lifted(&mut rng, 3, 1, 3, &g);
    let c = lifted_product(&a.module(), &b.module(), Orientation::B).unwrap();
    let d2 = c.boundary_matrix(2);
    let f = c.field();
    for k in [0usize, 7, 20] {
        let trip: Vec<(usize, usize, u32)> = d2.triplets().collect();
        let (row, col, x) = trip[k % trip.len()];
        // negating one entry breaks d1 d2 = 0 unless d1 vanishes on that row
        let mutated: Vec<(usize, usize, u32)> = trip.iter().map(|&(i, j, v)| if (i, j) == (row, col) { (i, j, f.neg(x)) } else { (i, j, v) }).collect();
        let mut broken = c.clone();
        broken.replace_boundary(2, Matrix::from_triplets(f, d2.rows(), d2.cols(), mutated)).unwrap();
        let d1_row_zero = c.boundary_matrix(1).transpose().row(row).is_empty();
        match broken.verify_chain() {
            Ok(()) => assert!(d1_row_zero),
            Err(v) => {
                assert_eq!(v.degree, 2);
                assert_eq!(v.col_cell, c.term(2).unwrap().cell_of_coord(col));
            }
        }
    }
    let id = Matrix::identity(f, 3);
    let exact = BasedComplex::from_matrices(f, 0, vec![id]).unwrap();
    assert_eq!(exact.homology_dim(0).unwrap(), 0);
    assert_eq!(exact.homology_dim(1).unwrap(), 0);
}

#[test]
fn block_weight_sits_between_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = group(GroupSpec::Cyclic(3));
    let a = lifted(&mut rng, 2, 2, 4, &g);
    let b = lifted(&mut rng, 2, 3, 4, &g);
    let c = lifted_product(&a.module(), &b.module(), Orientation::BDual).unwrap();
    for d in 0..=2 {
        let t = c.term(d).unwrap();
        let zero = ChainVector::zeros(&c, d);
        assert_eq!(c.block_weight(&zero, None), 0);
        for _ in 0..50 {
            let v = ChainVector { degree: d, values: random_vec(&mut rng, 2, t.dim(), 0.1) };
            let bw = c.block_weight(&v, None);
            let hw = v.hamming_weight();
            assert!(bw <= hw && hw <= t.max_cell_dim() * bw);
        }
        // a full block on one cell counts once
        let big = (0..t.cell_count()).max_by_key(|&i| t.cell_dim(i)).unwrap();
        let mut v = ChainVector::zeros(&c, d);
        for k in t.range(big) {
            v.values[k] = 1;
        }
        assert_eq!(c.block_weight(&v, None), 1);
        assert_eq!(c.block_weight(&v, Some(&[big])), 1);
        assert_eq!(c.block_weight(&v, Some(&[])), 0);
    }
}

/// Small complex with d1 d2 = 0: d1 rows drawn from the left kernel of d2.
fn random_plain_complex(rng: &mut impl Rng, q: u32) -> BasedComplex {
    let f = Field::new(q as u64).unwrap();
    let (n0, n1, n2) = (rng.gen_range(2..=6), rng.gen_range(4..=16), rng.gen_range(2..=10));
    let d2 = Matrix::from_dense_with_cols(f, &(0..n1).map(|_| random_vec(rng, q, n2, 0.35)).collect::<Vec<_>>(), n2).unwrap();
    let left = d2.transpose().kernel();
    let rows: Vec<Vec<u32>> = (0..n0).map(|_| span_element(rng, q, n1, &left)).collect();
    let d1 = Matrix::from_dense_with_cols(f, &rows, n1).unwrap();
    BasedComplex::from_matrices(f, 0, vec![d1, d2]).unwrap()
}

fn tiny_product(rng: &mut impl Rng, q: u32) -> BasedComplex {
    let g = group(GroupSpec::Cyclic(rng.gen_range(2..=3)));
    let f = Field::new(q as u64).unwrap();
    let mut one_by_two = || LocalCode::from_dense(f, &[vec![rng.gen_range(1..q), rng.gen_range(1..q)]]).unwrap();
    let (ha, hb) = (one_by_two(), one_by_two());
    let base = |h: &LocalCode, dipole: bool| if dipole { base_tanner(h) } else { bouquet_tanner(h).unwrap() };
    let (da, db) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
    let va: Vec<u32> = (0..if da { 2 } else { 1 }).map(|_| rng.gen_range(0..g.order() as u32)).collect();
    let vb: Vec<u32> = (0..if db { 2 } else { 1 }).map(|_| rng.gen_range(0..g.order() as u32)).collect();
    let a = lift_tanner(&base(&ha, da), g.clone(), &va).unwrap();
    let b = lift_tanner(&base(&hb, db), g, &vb).unwrap();
    let o = if rng.gen_bool(0.5) { Orientation::B } else { Orientation::BDual };
    lifted_product(&a.module(), &b.module(), o).unwrap()
}

#[test]
fn local_minimality_oracles_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut instances = 0;
    let mut ltc_checked = 0;
    let mut nontrivial = 0;
    let mut largest = 0;
    while instances < 120 {
        let q = if rng.gen_bool(0.7) { 2 } else { 3 };
        let c = if instances % 2 == 0 { tiny_product(&mut rng, q) } else { random_plain_complex(&mut rng, q) };
        let z = c.cycle_basis(1).len();
        let bits_z = (z as f64 * (q as f64).log2()).ceil() as u32;
        let bits_up = (c.dim(2) as f64 * (q as f64).log2()).ceil() as u32;
        if z > 14 || bits_z > 22 || bits_up > 20 {
            continue;
        }
        instances += 1;
        largest = largest.max(z);
        let dlm = dlm_bruteforce(&c, 1, 24).unwrap();
        let sys = systolic_distance_bruteforce(&c, 1, WeightKind::Block, 24, 1).unwrap();
        match (sys.value, dlm.value) {
            (Some(s), Some(d)) => {
                assert!(s >= d, "systole {s} below d_LM {d}");
                nontrivial += 1;
            }
            (Some(s), None) => panic!("nontrivial homology with systole {s} but no locally minimal cycle"),
            (None, _) => assert_eq!(c.homology_dim(1).unwrap(), 0),
        }
        if let Some(w) = &dlm.witness {
            assert!(c.boundary_matrix(1).mul_vec(&w.values).iter().all(|&x| x == 0));
            assert_eq!(c.block_weight(w, None), dlm.value.unwrap());
        }
        let threshold = dlm.value.unwrap_or(usize::MAX);
        let ltc = ltc_bound_check(&c, 1, threshold, 24).unwrap();
        assert_eq!(ltc.violations, 0, "{:?}", ltc.first_violation);
        ltc_checked += ltc.checked;
    }
    assert!(ltc_checked > 0);
    eprintln!("{instances} complexes, {nontrivial} with homology, largest cycle space {largest}");
    assert!(nontrivial >= 30 && largest >= 12);
}

#[test]
fn zero_upper_boundary_makes_moves_vacuous() {
    let f = Field::binary();
    let d1 = Matrix::from_dense(f, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1]]).unwrap();
    let d2 = Matrix::zeros(f, 4, 2);
    let c = BasedComplex::from_matrices(f, 0, vec![d1, d2]).unwrap();
    let dlm = dlm_bruteforce(&c, 1, 24).unwrap();
    assert_eq!(dlm.value, Some(4));
    let sys = systolic_distance_bruteforce(&c, 1, WeightKind::Hamming, 24, 1).unwrap();
    assert_eq!(sys.value, Some(4));
    let exact = BasedComplex::from_matrices(f, 0, vec![Matrix::identity(f, 3), Matrix::zeros(f, 3, 1)]).unwrap();
    assert_eq!(systolic_distance_bruteforce(&exact, 1, WeightKind::Block, 24, 1).unwrap().value, None);
}

#[test]
fn face_active_edges_see_enough_active_faces() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = 0;
    for _ in 0..12 {
        let g = group(GroupSpec::Cyclic(rng.gen_range(2..=4)));
        let ha = random_full_rank(&mut rng, 2, 1, 3);
        let hb = random_full_rank(&mut rng, 2, 1, 3);
        let a = random_lift(&mut rng, &ha, &g);
        let b = random_lift(&mut rng, &hb, &g);
        let c = lifted_product(&a.module(), &b.module(), Orientation::BDual).unwrap();
        let da = code_profile(&ha, 24).d.lower();
        let cycles = c.cycle_basis(1);
        for _ in 0..20 {
            let v = ChainVector { degree: 1, values: span_element(&mut rng, 2, c.dim(1), &cycles) };
            let diag = classify_cells(&c, &v, 2, 3).unwrap();
            for &count in &diag.face_active_counts {
                assert!(count >= da, "{count} < {da}");
                seen += 1;
            }
            for u in &diag.active_vertices {
                assert!(diag.labeled_vertices.contains(u));
            }
        }
        let zero = classify_cells(&c, &ChainVector::zeros(&c, 1), 2, 3).unwrap();
        assert!(zero.active_vertices.is_empty() && zero.labeled_vertices.is_empty() && zero.active_edges.is_empty());
        let p = c.product().unwrap();
        let (_, idx) = p.position(CellKind::Vertex, 0);
        let mut single = ChainVector::zeros(&c, 1);
        single.values[c.term(1).unwrap().range(idx).start] = 1;
        let d = classify_cells(&c, &single, 1, 1).unwrap();
        assert_eq!(d.labeled_vertices, vec![0]);
        assert!(d.face_active_edges.is_empty());
        let wrong = lifted_product(&a.module(), &b.module(), Orientation::B).unwrap();
        assert!(classify_cells(&wrong, &ChainVector::zeros(&wrong, 1), 1, 1).is_err());
    }
    assert!(seen > 0);
}

#[test]
fn duality_is_a_signed_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for spec in [GroupSpec::Cyclic(5), GroupSpec::Product(vec![GroupSpec::Cyclic(2), GroupSpec::Cyclic(3)]), GroupSpec::Symmetric(3)] {
        let g = group(spec);
        for q in [2u32, 3] {
            let a = lifted(&mut rng, q, 1, 3, &g);
            let b = lifted(&mut rng, q, 2, 4, &g);
            let ab = lifted_product(&a.module(), &b.module(), Orientation::BDual).unwrap();
            let ba = lifted_product(&b.module(), &a.module(), Orientation::BDual).unwrap();
            let maps = duality_coordinate_map(&ab, &ba, &g).unwrap();
            assert!(complexes_signed_isomorphic(&ab.dual(), &ba, &maps), "q = {q}");
        }
    }
}

#[test]
fn abelian_action_commutes_with_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for spec in [GroupSpec::Cyclic(6), GroupSpec::Product(vec![GroupSpec::Cyclic(3), GroupSpec::Cyclic(3)])] {
        let g = group(spec);
        let a = lifted(&mut rng, 3, 1, 3, &g);
        let b = lifted(&mut rng, 3, 2, 3, &g);
        for o in [Orientation::B, Orientation::BDual] {
            let c = lifted_product(&a.module(), &b.module(), o).unwrap();
            for d in 1..=2 {
                let m = c.boundary_matrix(d);
                for _ in 0..20 {
                    let v = ChainVector { degree: d, values: random_vec(&mut rng, 3, c.dim(d), 0.1) };
                    let h = rng.gen_range(0..g.order() as u32);
                    let lhs = m.mul_vec(&act_on_product_chain(&c, &v, h, &g).values);
                    let image = ChainVector { degree: d - 1, values: m.mul_vec(&v.values) };
                    assert_eq!(lhs, act_on_product_chain(&c, &image, h, &g).values);
                }
            }
        }
    }
}
