//! End-to-end acceptance suite. Each criterion prints one line:
//! `criterion N PASS|FAIL  <name>  <detail>  <seconds>`.
//! Tolerances are the constants below; everything else is exact.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use liftcodes::complexes::{dlm_bruteforce, lifted_product, ltc_bound_check, systolic_distance_bruteforce, BasedComplex, Orientation, WeightKind};
use liftcodes::csscodes::*;
use liftcodes::decoders::*;
use liftcodes::gf::{Field, Matrix};
use liftcodes::graphs::{cayley_graph, derive_lift, spectral_profile, verify_mixing_lemma, Multigraph, SPECTRAL_CAP};
use liftcodes::groups::{build_group, lps_generators, FiniteGroup, GroupAlgebraElem, GroupSpec};
use liftcodes::localcodes::*;
use liftcodes::tanner::{base_tanner, bouquet_tanner, lift_tanner, TannerComplex};
use liftcodes_cli::run_command;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Agreement between a double cover's second eigenvalue and the base spectrum.
const SPECTRAL_TOL: f64 = 1e-6;
/// Slack on the Ramanujan bound and the mixing-lemma constant.
const RAMANUJAN_TOL: f64 = 1e-6;
/// Sampled soundness regression, 9 significant digits.
const FROZEN_SAMPLED_S_HAT: &str = "1.50000000e0";

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

fn random_matrix(rng: &mut impl Rng, f: Field, rows: usize, cols: usize, density: f64) -> Matrix {
    let d: Vec<Vec<u32>> = (0..rows)
        .map(|_| (0..cols).map(|_| if rng.gen_bool(density) { rng.gen_range(1..f.q()) } else { 0 }).collect())
        .collect();
    Matrix::from_dense_with_cols(f, &d, cols).unwrap()
}

fn all_groups() -> Vec<GroupSpec> {
    let mut v: Vec<GroupSpec> = (2..=8).map(GroupSpec::Cyclic).collect();
    v.push(GroupSpec::Product(vec![GroupSpec::Cyclic(3), GroupSpec::Cyclic(3)]));
    v.push(GroupSpec::Symmetric(3));
    v.push(GroupSpec::Psl2(5));
    v
}

fn toric(l: u32) -> CssCode {
    let g = group(GroupSpec::Product(vec![GroupSpec::Cyclic(l), GroupSpec::Cyclic(l)]));
    let f = Field::binary();
    let x = g.from_product_coords(&[1, 0]).unwrap();
    let y = g.from_product_coords(&[0, 1]).unwrap();
    let e = |s| GroupAlgebraElem::from_terms(g.clone(), f, [(0, 1), (s, 1)]);
    let a = GroupMatrix::from_rows(g.clone(), f, vec![vec![e(x)]]);
    let b = GroupMatrix::from_rows(g.clone(), f, vec![vec![e(y)]]);
    lp_matrices(&a, &b).unwrap()
}

fn css_condition() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut built = 0;
    for spec in all_groups() {
        let g = group(spec);
        for o in [Orientation::B, Orientation::BDual] {
            for q in [2u32, 3, 5] {
                let a = lifted(&mut rng, q, 1, 3, &g);
                let b = lifted(&mut rng, q, 2, 4, &g);
                let c = lifted_product(&a.module(), &b.module(), o).unwrap();
                let code = css_from_complex(&c, 1).unwrap();
                assert!(code.hx.mul(&code.hz.transpose()).unwrap().is_zero());
                built += 1;
            }
        }
    }
    assert!(built >= 50);
    format!("{built} products")
}

fn toric_recovery() -> String {
    for l in [2u32, 3, 4] {
        let c = toric(l);
        assert_eq!((c.n, c.k), (2 * (l * l) as usize, 2), "L = {l}");
    }
    for l in [2u32, 3] {
        assert_eq!(css_distance_bruteforce(&toric(l), 24, 1).unwrap().d(), Some(l as usize), "L = {l}");
    }
    "[[8,2,2]] [[18,2,3]] [[32,2]]".into()
}

fn trivial_group() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let g = group(GroupSpec::Cyclic(1));
    let mut n = 0;
    for q in [2u32, 3, 5, 7] {
        let f = Field::new(q as u64).unwrap();
        for _ in 0..10 {
            let (ma, na, mb, nb) = (rng.gen_range(1..5), rng.gen_range(1..6), rng.gen_range(1..5), rng.gen_range(1..6));
            let a = random_matrix(&mut rng, f, ma, na, 0.5);
            let b = random_matrix(&mut rng, f, mb, nb, 0.5);
            let lift = |m: &Matrix| {
                let rows = m.to_dense().iter().map(|r| r.iter().map(|&x| GroupAlgebraElem::from_terms(g.clone(), f, [(0, x)])).collect()).collect();
                GroupMatrix::from_rows(g.clone(), f, rows)
            };
            let lp = lp_matrices(&lift(&a), &lift(&b)).unwrap();
            let hp = hp_matrices(&a, &b).unwrap();
            assert_eq!((lp.hx, lp.hz), (hp.hx, hp.hz));
            n += 1;
        }
    }
    format!("{n} pairs")
}

fn random_vec(rng: &mut impl Rng, q: u32, n: usize, density: f64) -> Vec<u32> {
    (0..n).map(|_| if rng.gen_bool(density) { rng.gen_range(1..q) } else { 0 }).collect()
}

fn span_element(rng: &mut impl Rng, q: u32, n: usize, basis: &[Vec<u32>]) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for b in basis {
        let c = rng.gen_range(0..q);
        for (x, y) in v.iter_mut().zip(b) {
            *x = (*x + c * y) % q;
        }
    }
    v
}

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

fn local_minimality() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let (mut instances, mut chains) = (0, 0u64);
    while instances < 100 {
        let q = if rng.gen_bool(0.7) { 2 } else { 3 };
        let c = if instances % 2 == 0 { tiny_product(&mut rng, q) } else { random_plain_complex(&mut rng, q) };
        let z = c.cycle_basis(1).len();
        let bits_up = (c.dim(2) as f64 * (q as f64).log2()).ceil() as u32;
        if z > 14 || bits_up > 20 {
            continue;
        }
        instances += 1;
        let dlm = dlm_bruteforce(&c, 1, 24).unwrap();
        let sys = systolic_distance_bruteforce(&c, 1, WeightKind::Block, 24, 1).unwrap();
        match (sys.value, dlm.value) {
            (Some(s), Some(d)) => assert!(s >= d, "systole {s} below d_LM {d}"),
            (Some(_), None) => panic!("homology without a locally minimal cycle"),
            (None, _) => assert_eq!(c.homology_dim(1).unwrap(), 0),
        }
        let ltc = ltc_bound_check(&c, 1, dlm.value.unwrap_or(usize::MAX), 24).unwrap();
        assert_eq!(ltc.violations, 0, "{:?}", ltc.first_violation);
        chains += ltc.checked as u64;
    }
    format!("{instances} complexes, {chains} chains below threshold")
}

fn derangement(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    loop {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        if p.iter().enumerate().all(|(i, &x)| i != x) {
            return p;
        }
    }
}

fn random_regular(n: usize, k: usize, rng: &mut impl Rng) -> Multigraph {
    let mut edges = Vec::new();
    for _ in 0..k {
        let p = derangement(n, rng);
        edges.extend((0..n).map(|i| (i, p[i])));
    }
    Multigraph::from_edges(n, edges).unwrap()
}

fn spectral() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let c2 = group(GroupSpec::Cyclic(2));
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let base = random_regular(rng.gen_range(6..=200), 2, &mut rng);
        let cover = derive_lift(&base, c2.clone(), &vec![1; base.edge_count_total()]).unwrap();
        let pb = spectral_profile(&base, SPECTRAL_CAP).unwrap();
        let pc = spectral_profile(&cover.graph, SPECTRAL_CAP).unwrap();
        worst = worst.max((pc.lambda2 - pb.lambda_abs).abs());
    }
    assert!(worst < SPECTRAL_TOL, "cover mismatch {worst:e}");
    let lps = lps_generators(13, 17).unwrap();
    let x = cayley_graph(&lps.group, &lps.generators).unwrap();
    assert_eq!((x.vertex_count(), x.regular_degree()), (2448, Some(14)));
    let p = spectral_profile(&x, SPECTRAL_CAP).unwrap();
    let bound = 2.0 * 13f64.sqrt();
    assert!((p.lambda1 - 14.0).abs() < SPECTRAL_TOL);
    assert!(p.lambda_abs <= bound + RAMANUJAN_TOL, "{} > {bound}", p.lambda_abs);
    let mut mixing = 0;
    for n in [5usize, 8, 10, 12] {
        for k in [1usize, 2] {
            let g = random_regular(n, k, &mut rng);
            let pr = spectral_profile(&g, SPECTRAL_CAP).unwrap();
            assert_eq!(verify_mixing_lemma(&g.adjacency(), 2 * k, pr.lambda_abs + RAMANUJAN_TOL).unwrap(), None);
            mixing += 1;
        }
    }
    format!("cover gap {worst:.1e}, lambda(X^13,17) = {:.8} <= {bound:.8}, mixing on {mixing} graphs", p.lambda_abs)
}

fn census_and_rates() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for (spec, gens) in [
        (GroupSpec::Cyclic(7), vec![1u32, 6, 2, 5]),
        (GroupSpec::Symmetric(3), vec![1, 2, 5]),
        (GroupSpec::Product(vec![GroupSpec::Cyclic(3), GroupSpec::Cyclic(3)]), vec![1, 2, 3, 6]),
    ] {
        let g = group(spec);
        assert!(g.is_symmetric_set(&gens));
        let w = gens.len();
        let (r, rp) = (1, 2);
        let a = lift_tanner(&base_tanner(&random_full_rank(&mut rng, 2, r, w)), g.clone(), &gens).unwrap();
        let b = lift_tanner(&base_tanner(&random_full_rank(&mut rng, 2, rp, w)), g.clone(), &gens).unwrap();
        let c = lifted_product(&a.module(), &b.module(), Orientation::BDual).unwrap();
        let n0 = 2 * g.order();
        assert_eq!(c.dim(0), n0 * r * w);
        assert_eq!(c.dim(2), n0 * rp * w);
        assert_eq!(2 * c.dim(1), n0 * (w * w + 4 * r * rp));
    }
    let specs = all_groups();
    for t in 0..20 {
        let g = group(specs[t % specs.len()].clone());
        let w = rng.gen_range(5..=7);
        let a = lifted(&mut rng, 2, 1, w, &g);
        let b = lifted(&mut rng, 2, 1, w, &g);
        let c = lifted_product(&a.module(), &b.module(), Orientation::B).unwrap();
        let total = c.dim(2);
        assert!(remark_rate_floor_holds(total - c.boundary_matrix(2).rank(), total, 1, w), "instance {t}");
        let (m, n) = (rng.gen_range(1..=2), rng.gen_range(3..=4));
        let am = random_group_matrix(g.clone(), Field::binary(), m, n, 2, &mut rng);
        let code = lp_matrices(&am, &am.conj_transpose()).unwrap();
        assert!(intro_rate_floor_holds(code.k, code.n, n, m), "instance {t}");
    }
    "3 Cayley censuses, 20 rate instances".into()
}

fn product_expansion() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let (mut pairs, mut cx, mut lemma) = (0, 0, 0u64);
    let mut max_k = 0;
    while pairs < 8 {
        let w = rng.gen_range(4..=5);
        let ca = random_full_rank(&mut rng, 2, 2, w);
        let cb = random_full_rank(&mut rng, 2, 2, w);
        let k = tensor_codeword_basis(&ca, &cb).len();
        if k > 22 {
            continue;
        }
        pairs += 1;
        max_k = max_k.max(k);
        for s in [1usize, 3, 5] {
            let p = PexpParams { s, m: 1, beta: 0.0, delta: Some(1) };
            let v = product_expansion_check(&ca, &cb, &p, 22, 0).unwrap();
            assert_eq!(v.mode, SearchMode::Exhaustive);
            if let Some(c) = &v.counterexample {
                assert!(validate_counterexample(&ca, &cb, &p, c).unwrap());
                cx += 1;
            }
        }
        let nb = check_nonzero_block_lemma(&ca, &cb, 22).unwrap();
        assert_eq!(nb.violations, 0, "{:?}", nb.first_violation);
        lemma += nb.instances as u64;
        let rl = check_rank_lemma(&ca, &cb, 0, 2, 22).unwrap();
        assert_eq!(rl.violations, 0, "{:?}", rl.first_violation);
        lemma += rl.instances as u64;
    }
    format!("{pairs} pairs (kernel dim <= {max_k}), {cx} counterexamples re-validated, {lemma} lemma instances")
}

fn linear_algebra() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for t in 0..200 {
        let f = Field::new([2, 3, 5, 7][t % 4]).unwrap();
        let (ra, ca, rb, cb) = (rng.gen_range(1..=8), rng.gen_range(1..=8), rng.gen_range(1..=8), rng.gen_range(1..=8));
        let a = random_matrix(&mut rng, f, ra, ca, 0.4);
        let b = random_matrix(&mut rng, f, rb, cb, 0.4);
        assert_eq!(a.kron(&b).unwrap().rank(), a.rank() * b.rank(), "pair {t}");
    }
    for t in 0..500 {
        let f = Field::new([2, 3, 5, 7, 11][t % 5]).unwrap();
        let (r, c) = (rng.gen_range(1..=24), rng.gen_range(1..=24));
        let density = rng.gen_range(0.05..0.8);
        let m = random_matrix(&mut rng, f, r, c, density);
        let red = m.gauss_reduce();
        assert_eq!(red.rank + red.kernel.len(), c);
        for v in &red.kernel {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0), "matrix {t}");
        }
    }
    "200 kron pairs, 500 reductions".into()
}

fn syndrome_weight(h: &Matrix, v: &[u32]) -> usize {
    h.mul_vec(v).iter().filter(|&&x| x != 0).count()
}

/// (every maximal strictly improving path ends at zero, some path does).
fn path_oracle(h: &Matrix, y: Vec<u32>, memo: &mut HashMap<Vec<u32>, (bool, bool)>) -> (bool, bool) {
    if let Some(&r) = memo.get(&y) {
        return r;
    }
    let w0 = syndrome_weight(h, &y);
    let (mut all, mut some, mut moved) = (true, false, false);
    for j in 0..y.len() {
        for v in 0..h.field().q() {
            if v == y[j] {
                continue;
            }
            let mut z = y.clone();
            z[j] = v;
            if syndrome_weight(h, &z) < w0 {
                moved = true;
                let (a, s) = path_oracle(h, z, memo);
                all &= a;
                some |= s;
            }
        }
    }
    let zero = y.iter().all(|&x| x == 0);
    let r = if moved { (all, some) } else { (zero, zero) };
    memo.insert(y, r);
    r
}

fn decoders() -> String {
    let f = Field::binary();
    let rep: Vec<Vec<u32>> = (0..4).map(|i| (0..5).map(|j| (j == i || j == i + 1) as u32).collect()).collect();
    let rep = Matrix::from_dense(f, &rep).unwrap();
    for j in 0..5 {
        let mut y = vec![0; 5];
        y[j] = 1;
        let out = bitflip_decode(&rep, &y, &DecoderConfig::default());
        assert!(out.converged && out.estimate == vec![0; 5]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut codes = vec![rep];
    for (q, r, w, l) in [(2u32, 1, 3, 4u32), (2, 2, 5, 3), (2, 2, 4, 5), (3, 1, 3, 3), (2, 2, 6, 3)] {
        codes.push(lifted(&mut rng, q, r, w, &group(GroupSpec::Cyclic(l))).global_matrix());
    }
    let mut correctable = 0;
    for h in &codes {
        let (n, q) = (h.cols(), h.field().q());
        assert!(n <= 20);
        let mut memo = HashMap::new();
        for i in 0..n {
            for j in i..n {
                for a in 1..q {
                    for b in if i == j { 0..1 } else { 1..q } {
                        let mut e = vec![0; n];
                        e[i] = a;
                        e[j] = (e[j] + b) % q;
                        let (all, _) = path_oracle(h, e.clone(), &mut memo);
                        for rule in [FlipRule::GreedyBest, FlipRule::FirstImproving] {
                            let out = bitflip_decode(h, &e, &DecoderConfig { flip_rule: rule, ..Default::default() });
                            assert!(out.syndrome_trace.windows(2).all(|w| w[1] < w[0]));
                            if all {
                                assert!(out.converged && out.estimate.iter().all(|&x| x == 0), "{e:?}");
                            }
                        }
                        correctable += all as usize;
                    }
                }
            }
        }
    }
    let code = toric(3);
    for side in [CssSide::X, CssSide::Z] {
        let stars = generator_stars(&code, side);
        let trivial = side.stabilizers(&code).row_space();
        for j in 0..18 {
            let mut e = vec![0; 18];
            e[j] = 1;
            let out = small_set_flip_decode(&code, &stars, &side.checks(&code).mul_vec(&e), side, &DecoderConfig::default());
            assert!(out.syndrome_trace.windows(2).all(|w| w[1] < w[0]));
            let residual: Vec<u32> = e.iter().zip(&out.estimate).map(|(a, b)| a ^ b).collect();
            assert!(out.converged && trivial.contains(&residual));
        }
    }
    format!("{correctable} oracle-correctable patterns, 36 toric single errors")
}

fn soundness() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut codes = vec![];
    for (r, w, l) in [(1usize, 3usize, 3u32), (1, 4, 3), (2, 3, 2), (1, 6, 3), (2, 4, 4)] {
        codes.push(lifted(&mut rng, 2, r, w, &group(GroupSpec::Cyclic(l))).global_matrix());
    }
    let mut min_s = f64::INFINITY;
    for h in &codes {
        assert!(h.cols() <= 18);
        let rep = soundness_profile(h, SoundnessMode::Exhaustive, 24).unwrap();
        assert!(rep.exhaustive && rep.s_hat > 0.0);
        assert_eq!(rep.inequality_violations, 0);
        min_s = min_s.min(rep.s_hat);
    }
    let h = lifted(&mut ChaCha8Rng::seed_from_u64(111), 2, 2, 6, &group(GroupSpec::Cyclic(7))).global_matrix();
    let s = soundness_profile(&h, SoundnessMode::Sampled { seed: 2024, samples: 2000 }, 24).unwrap();
    let got = format!("{:.8e}", s.s_hat);
    assert_eq!(got, FROZEN_SAMPLED_S_HAT, "sampled regression");
    format!("{} exhaustive codes (min s_hat {min_s:.4}), sampled s_hat {got}", codes.len())
}

fn reproducibility() -> String {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for name in ["toric3.cfg", "toric3_decode.cfg", "s3_cayley.cfg", "ternary_toric.cfg"] {
        let p = dir.join(name);
        let run = || {
            let argv: Vec<String> = ["liftcodes", "--seed", "17", "construct", p.to_str().unwrap()].iter().map(|s| s.to_string()).collect();
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = run_command(&argv, &mut out, &mut err);
            (code, out)
        };
        let (a, b) = (run(), run());
        assert_eq!(a.0, 0, "{name}");
        assert_eq!(a, b, "{name}");
        n += 1;
    }
    format!("{n} configs byte-identical")
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> String); 11] = [
        ("css condition", css_condition),
        ("toric recovery", toric_recovery),
        ("trivial-group reduction", trivial_group),
        ("local minimality oracles", local_minimality),
        ("spectral and expansion", spectral),
        ("cell census and rate floors", census_and_rates),
        ("product expansion ground truth", product_expansion),
        ("kron rank and gauss consistency", linear_algebra),
        ("decoders", decoders),
        ("soundness profiler", soundness),
        ("reproducibility", reproducibility),
    ];
    let mut failed = vec![];
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f));
        let secs = t.elapsed().as_secs_f64();
        let line = match result {
            Ok(detail) => format!("criterion {:2} PASS  {name}  {detail}  {secs:.1}s", i + 1),
            Err(e) => {
                failed.push(i + 1);
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
                format!("criterion {:2} FAIL  {name}  {msg}  {secs:.1}s", i + 1)
            }
        };
        println!("{line}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
