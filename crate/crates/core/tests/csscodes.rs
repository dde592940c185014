use std::collections::HashMap;
use std::sync::Arc;

use liftcodes::complexes::{dlm_bruteforce, lifted_product, BasedComplex, Orientation};
use liftcodes::csscodes::*;
use liftcodes::gf::{Field, Matrix};
use liftcodes::groups::{build_group, FiniteGroup, GroupAlgebraElem, GroupSpec};
use liftcodes::localcodes::LocalCode;
use liftcodes::tanner::{base_tanner, lift_tanner, TannerComplex};
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

fn lifted(rng: &mut impl Rng, q: u32, r: usize, w: usize, g: &Arc<FiniteGroup>) -> TannerComplex {
    let h = random_full_rank(rng, q, r, w);
    let volts: Vec<u32> = (0..w).map(|_| rng.gen_range(0..g.order() as u32)).collect();
    lift_tanner(&base_tanner(&h), g.clone(), &volts).unwrap()
}

fn all_groups() -> Vec<GroupSpec> {
    let mut v: Vec<GroupSpec> = (2..=8).map(GroupSpec::Cyclic).collect();
    v.push(GroupSpec::Product(vec![GroupSpec::Cyclic(3), GroupSpec::Cyclic(3)]));
    v.push(GroupSpec::Symmetric(3));
    v.push(GroupSpec::Psl2(5));
    v
}

fn elem(g: &Arc<FiniteGroup>, f: Field, terms: &[(u32, u32)]) -> GroupAlgebraElem {
    GroupAlgebraElem::from_terms(g.clone(), f, terms.iter().copied())
}

fn toric(l: u32) -> CssCode {
    let g = group(GroupSpec::Product(vec![GroupSpec::Cyclic(l), GroupSpec::Cyclic(l)]));
    let f = Field::binary();
    let x = g.from_product_coords(&[1, 0]).unwrap();
    let y = g.from_product_coords(&[0, 1]).unwrap();
    let a = GroupMatrix::from_rows(g.clone(), f, vec![vec![elem(&g, f, &[(0, 1), (x, 1)])]]);
    let b = GroupMatrix::from_rows(g.clone(), f, vec![vec![elem(&g, f, &[(0, 1), (y, 1)])]]);
    lp_matrices(&a, &b).unwrap()
}

#[test]
fn css_condition_across_groups_and_orientations() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut built = 0;
    for spec in all_groups() {
        let g = group(spec);
        for o in [Orientation::B, Orientation::BDual] {
            for q in [2u32, 3] {
                let a = lifted(&mut rng, q, 1, 3, &g);
                let b = lifted(&mut rng, q, 2, 4, &g);
                let c = lifted_product(&a.module(), &b.module(), o).unwrap();
                let code = css_from_complex(&c, 1).unwrap();
                assert!(code.hx.mul(&code.hz.transpose()).unwrap().is_zero());
                assert_eq!(code.k, c.homology_dim(1).unwrap());
                built += 1;
            }
        }
        // random algebra matrices with up to 3 terms per entry
        for _ in 0..2 {
            let f = Field::binary();
            let a = random_group_matrix(g.clone(), f, 2, 3, 3, &mut rng);
            let b = random_group_matrix(g.clone(), f, 2, 2, 3, &mut rng);
            let code = lp_matrices(&a, &b).unwrap();
            assert!(css_violation(&code.hx, &code.hz).is_none());
            assert!(lp_correspondence(&a, &b).unwrap().matches(&code));
            built += 1;
        }
    }
    assert!(built >= 50);
}

#[test]
fn toric_codes() {
    for l in [2u32, 3, 4] {
        let c = toric(l);
        assert_eq!((c.n, c.k), (2 * (l * l) as usize, 2));
    }
    for l in [2u32, 3] {
        let d = css_distance_bruteforce(&toric(l), 24, 2).unwrap();
        assert_eq!((d.dx, d.dz, d.d()), (Some(l as usize), Some(l as usize), Some(l as usize)));
        let w = d.witness_x.unwrap();
        assert!(toric(l).hx.mul_vec(&w).iter().all(|&v| v == 0));
    }
}

#[test]
fn trivial_group_is_the_hypergraph_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = group(GroupSpec::Cyclic(1));
    for q in [2u32, 3, 5] {
        let f = Field::new(q as u64).unwrap();
        for _ in 0..5 {
            let (ma, na, mb, nb) = (rng.gen_range(1..4), rng.gen_range(1..5), rng.gen_range(1..4), rng.gen_range(1..5));
            let dense = |rng: &mut ChaCha8Rng, r: usize, c: usize| -> Vec<Vec<u32>> {
                (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..q)).collect()).collect()
            };
            let (da, db) = (dense(&mut rng, ma, na), dense(&mut rng, mb, nb));
            let lift = |d: &Vec<Vec<u32>>| {
                GroupMatrix::from_rows(g.clone(), f, d.iter().map(|r| r.iter().map(|&x| elem(&g, f, &[(0, x)])).collect()).collect())
            };
            let lp = lp_matrices(&lift(&da), &lift(&db)).unwrap();
            let hp = hp_matrices(&Matrix::from_dense_with_cols(f, &da, na).unwrap(), &Matrix::from_dense_with_cols(f, &db, nb).unwrap()).unwrap();
            assert_eq!(lp.hx, hp.hx);
            assert_eq!(lp.hz, hp.hz);
        }
    }
}

#[test]
fn small_hypergraph_products() {
    let f = Field::binary();
    let a = Matrix::from_dense(f, &[vec![1, 1]]).unwrap();
    let c = hp_matrices(&a, &a.transpose()).unwrap();
    assert_eq!((c.n, c.k), (5, 1));
    assert_eq!(css_distance_bruteforce(&c, 24, 1).unwrap().d(), Some(2));
    let id = hp_matrices(&Matrix::identity(f, 2), &Matrix::identity(f, 2)).unwrap();
    assert_eq!(id.k, 0);
    let d = css_distance_bruteforce(&id, 24, 1).unwrap();
    assert_eq!((d.dx, d.dz, d.d()), (None, None, None));
    let zero = BasedComplex::from_matrices(f, 0, vec![Matrix::zeros(f, 2, 4), Matrix::zeros(f, 4, 3)]).unwrap();
    assert_eq!(css_from_complex(&zero, 1).unwrap().k, 4);
}

#[test]
fn haah_cubic_code() {
    let g = group(GroupSpec::Product(vec![GroupSpec::Cyclic(3), GroupSpec::Cyclic(3), GroupSpec::Cyclic(3)]));
    let f = Field::binary();
    let c = |v: [u32; 3]| g.from_product_coords(&v).unwrap();
    let (x, y, z) = (c([1, 0, 0]), c([0, 1, 0]), c([0, 0, 1]));
    let (xy, xz, yz) = (c([1, 1, 0]), c([1, 0, 1]), c([0, 1, 1]));
    let a = GroupMatrix::from_rows(g.clone(), f, vec![vec![elem(&g, f, &[(0, 1), (x, 1), (y, 1), (z, 1)])]]);
    let b = GroupMatrix::from_rows(g.clone(), f, vec![vec![elem(&g, f, &[(0, 1), (xy, 1), (xz, 1), (yz, 1)])]]);
    let code = lp_matrices(&a, &b).unwrap();
    assert_eq!(code.n, 54);
    assert_eq!(code.hx.max_row_weight(), 8);
    assert!(css_violation(&code.hx, &code.hz).is_none());
    assert!(lp_correspondence(&a, &b).unwrap().matches(&code));
}

#[test]
fn lp_matches_lifted_product_up_to_relabelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for spec in [GroupSpec::Cyclic(4), GroupSpec::Symmetric(3), GroupSpec::Psl2(5)] {
        let g = group(spec);
        for q in [2u32, 3] {
            let f = Field::new(q as u64).unwrap();
            let a = random_group_matrix(g.clone(), f, 2, 3, 2, &mut rng);
            let b = random_group_matrix(g.clone(), f, 1, 2, 2, &mut rng);
            let lp = lp_matrices(&a, &b).unwrap();
            let corr = lp_correspondence(&a, &b).unwrap();
            assert!(corr.matches(&lp));
            let mut sorted = corr.qubits.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..lp.n).collect::<Vec<_>>());
        }
    }
}

#[test]
fn rate_floors_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let specs = all_groups();
    for t in 0..20 {
        let g = group(specs[t % specs.len()].clone());
        // Remark-type floor on A (x)_G B: dim Z_2 / dim C_2 >= 1 - 4r/w
        let w = rng.gen_range(5..=7);
        let a = lifted(&mut rng, 2, 1, w, &g);
        let b = lifted(&mut rng, 2, 1, w, &g);
        let c = lifted_product(&a.module(), &b.module(), Orientation::B).unwrap();
        let total = c.dim(2);
        let z2 = total - c.boundary_matrix(2).rank();
        assert!(remark_rate_floor_holds(z2, total, 1, w), "instance {t}");
        // intro floor on LP(A, A*)
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(3..=4));
        let am = random_group_matrix(g.clone(), Field::binary(), m, n, 2, &mut rng);
        let code = lp_matrices(&am, &am.conj_transpose()).unwrap();
        assert_eq!(code.n, (n * n + m * m) * g.order());
        assert!(intro_rate_floor_holds(code.k, code.n, n, m), "instance {t}: k = {} n = {}", code.k, code.n);
    }
}

#[test]
fn css_distance_dominates_local_minimality() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for t in 0..40 {
        let g = group(GroupSpec::Cyclic(rng.gen_range(2..=3)));
        let a = lifted(&mut rng, 2, 1, 2, &g);
        let wb = rng.gen_range(2..=3);
        let b = lifted(&mut rng, 2, 1, wb, &g);
        let o = if t % 2 == 0 { Orientation::B } else { Orientation::BDual };
        let c = lifted_product(&a.module(), &b.module(), o).unwrap();
        let code = css_from_complex(&c, 1).unwrap();
        if distance_required_bits(&code) > 20 || c.cycle_basis(1).len() > 20 || c.dual().cycle_basis(1).len() > 20 {
            continue;
        }
        let d = css_distance_bruteforce(&code, 24, 1).unwrap();
        let lm = dlm_bruteforce(&c, 1, 24).unwrap().value;
        let lm_dual = dlm_bruteforce(&c.dual(), 1, 24).unwrap().value;
        if let (Some(dx), Some(l)) = (d.dx, lm) {
            assert!(dx >= l);
        }
        if let (Some(dz), Some(l)) = (d.dz, lm_dual) {
            assert!(dz >= l);
        }
        checked += 1;
    }
    assert!(checked >= 20);
}

/// Exact min over x outside ker h of n|Hx| / (m d(x, C)), by full scan.
fn brute_soundness(h: &Matrix) -> (u64, u64, bool) {
    let (m, n) = h.shape();
    let ht = h.transpose().to_dense();
    let syn = |x: u32| -> Vec<u32> {
        let mut s = vec![0u32; m];
        for j in 0..n {
            if x >> j & 1 == 1 {
                for (k, v) in ht[j].iter().enumerate() {
                    s[k] ^= v;
                }
            }
        }
        s
    };
    let mut leader: HashMap<Vec<u32>, usize> = HashMap::new();
    for x in 0u32..(1 << n) {
        let e = leader.entry(syn(x)).or_insert(usize::MAX);
        *e = (*e).min(x.count_ones() as usize);
    }
    let omega = h.max_row_weight().max(h.max_col_weight());
    let mut best: Option<(u64, u64)> = None;
    let mut inequality = true;
    for x in 0u32..(1 << n) {
        let s = syn(x);
        let sw = s.iter().filter(|&&v| v != 0).count();
        let d = leader[&s];
        if d == 0 {
            continue;
        }
        inequality &= sw <= omega * d;
        let (num, den) = ((n * sw) as u64, (m * d) as u64);
        if best.map_or(true, |(bn, bd)| num * bd < bn * den) {
            best = Some((num, den));
        }
    }
    let (a, b) = best.unwrap();
    (a, b, inequality)
}

fn same_ratio(a: (u64, u64), b: (u64, u64)) -> bool {
    a.0 * b.1 == a.1 * b.0
}

#[test]
fn exhaustive_soundness_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases: Vec<Matrix> = Vec::new();
    let g = group(GroupSpec::Cyclic(3));
    for w in [3usize, 4] {
        cases.push(lifted(&mut rng, 2, 1, w, &g).global_matrix());
    }
    cases.push(lifted(&mut rng, 2, 2, 3, &group(GroupSpec::Cyclic(2))).global_matrix());
    for _ in 0..6 {
        let (m, n) = (rng.gen_range(2..=6), rng.gen_range(6..=14));
        let rows: Vec<Vec<u32>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..2)).collect()).collect();
        cases.push(Matrix::from_dense_with_cols(Field::binary(), &rows, n).unwrap());
    }
    for h in cases {
        if h.rank() == h.cols() || h.cols() > 18 {
            continue;
        }
        let rep = soundness_profile(&h, SoundnessMode::Exhaustive, 24).unwrap();
        let (num, den, ineq) = brute_soundness(&h);
        assert!(rep.s_hat > 0.0);
        assert!(same_ratio((rep.s_hat_num, rep.s_hat_den), (num, den)), "{}/{} vs {num}/{den}", rep.s_hat_num, rep.s_hat_den);
        assert!(ineq);
        assert_eq!(rep.inequality_violations, 0);
        // the witness realises the reported ratio
        let sw = syndrome_weight(&h, &rep.witness);
        assert_eq!(sw, rep.witness_syndrome_weight);
        assert!(same_ratio(((rep.n * sw) as u64, (rep.m * rep.witness_distance) as u64), (rep.s_hat_num, rep.s_hat_den)));
    }
}

#[test]
fn sampled_soundness_is_an_upper_estimate() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = lifted(&mut rng, 2, 1, 4, &group(GroupSpec::Cyclic(3))).global_matrix();
    let ex = soundness_profile(&h, SoundnessMode::Exhaustive, 24).unwrap();
    let mode = SoundnessMode::Sampled { seed: 11, samples: 500 };
    let s1 = soundness_profile(&h, mode, 24).unwrap();
    let s2 = soundness_profile(&h, mode, 24).unwrap();
    assert_eq!(s1, s2);
    assert!(s1.s_hat >= ex.s_hat);
    assert!(!s1.exhaustive);
}

#[test]
fn asymptotic_constants() {
    let b = asymptotic_bounds(16);
    assert_eq!(b.omega, 32);
    assert!((b.soundness - 0.5 * 16f64.powf(-3.5)).abs() < 1e-18);
    assert_eq!(b.soundness, b.relative_distance);
}
