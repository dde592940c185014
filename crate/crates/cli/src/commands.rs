//! Job construction and task execution.

use std::sync::Arc;

use liftcodes::complexes::{dlm_bruteforce, lifted_product, BasedComplex, ComplexError, Orientation};
use liftcodes::csscodes::{
    css_distance_bruteforce, css_from_complex, css_violation, soundness_profile, asymptotic_bounds, CssCode, CssError,
    SoundnessMode,
};
use liftcodes::decoders::{montecarlo_classical, montecarlo_css, Channel, CssSide, DecoderConfig, FlipRule, TrialReport};
use liftcodes::graphs::{spectral_profile, GraphError, Multigraph, SPECTRAL_CAP};
use liftcodes::groups::{build_group, lps_generators, FiniteGroup};
use liftcodes::localcodes::{
    product_expansion_check, sample_local_pair, LocalCode, LocalCodeError, PexpParams, SamplerConfig, SearchMode,
};
use liftcodes::tanner::{lift_tanner, tanner_on_graph, TannerComplex};
use liftcodes::{Field, Matrix};

use crate::config::{BaseGraph, JobConfig, LocalConfig, MatrixTarget, Task};
use crate::export::to_matrix_market;
use crate::report::{Report, Tag, Value};

/// Failure classes; each maps to a process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunError {
    /// A checked invariant does not hold.
    Invariant(String),
    /// Bad usage or configuration.
    Usage(String),
    /// Work refused by the enumeration cap; carries the bits needed.
    Infeasible { what: String, required_bits: u32, cap_bits: u32 },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invariant(_) => 1,
            RunError::Usage(_) => 2,
            RunError::Infeasible { .. } => 3,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Invariant(m) => write!(f, "invariant failed: {m}"),
            RunError::Usage(m) => write!(f, "{m}"),
            RunError::Infeasible { what, required_bits, cap_bits } => write!(
                f,
                "{what} needs an enumeration cap of {required_bits} bits (current cap {cap_bits}); rerun with --cap {required_bits}"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub seed: u64,
    pub threads: usize,
    pub cap_bits: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            threads: 1,
            cap_bits: liftcodes::enumerate::DEFAULT_CAP_BITS,
        }
    }
}

/// Everything a job config describes, built once.
pub struct Job {
    pub config: JobConfig,
    pub field: Field,
    pub group: Arc<FiniteGroup>,
    pub h: LocalCode,
    pub h_prime: LocalCode,
    pub sampler_tries: Option<usize>,
    pub base: Multigraph,
    pub tanner_a: TannerComplex,
    pub tanner_b: TannerComplex,
    pub complex: Option<BasedComplex>,
    pub css: Option<CssCode>,
    /// Set when H_X H_Z^T != 0; the report still gets written.
    pub css_failure: Option<(usize, usize)>,
}

fn usage(e: impl std::fmt::Display) -> RunError {
    RunError::Usage(e.to_string())
}

fn resolve_voltages(group: &FiniteGroup, tokens: &[Vec<u32>]) -> Result<Vec<u32>, RunError> {
    tokens
        .iter()
        .map(|t| {
            let x = if t.len() == 1 {
                Some(t[0]).filter(|&x| (x as usize) < group.order())
            } else {
                group.from_product_coords(t)
            };
            x.ok_or_else(|| {
                let s: Vec<String> = t.iter().map(|c| c.to_string()).collect();
                usage(format!("voltage {} is not an element of {}", s.join("."), group.name()))
            })
        })
        .collect()
}

impl Job {
    pub fn build(config: JobConfig) -> Result<Job, RunError> {
        let field = Field::new(config.q as u64).map_err(usage)?;
        let (group, base, volts, volts_b) = match &config.graph.base {
            BaseGraph::Lps { p, q } => {
                let l = lps_generators(*p, *q).map_err(usage)?;
                let g = l.generators.clone();
                (l.group, Multigraph::dipole(g.len()), g.clone(), g)
            }
            other => {
                let group = Arc::new(build_group(&config.group).map_err(usage)?);
                let base = match other {
                    BaseGraph::Bouquet(w) => Multigraph::bouquet(*w),
                    BaseGraph::Dipole(w) => Multigraph::dipole(*w),
                    BaseGraph::Explicit { vertices, edges } => {
                        Multigraph::from_edges(*vertices, edges.clone()).map_err(usage)?
                    }
                    BaseGraph::Lps { .. } => unreachable!(),
                };
                let v = resolve_voltages(&group, &config.graph.voltages)?;
                let vb = match &config.graph.voltages_b {
                    Some(t) => resolve_voltages(&group, t)?,
                    None => v.clone(),
                };
                (group, base, v, vb)
            }
        };
        let (h, h_prime, sampler_tries) = match &config.local {
            LocalConfig::Explicit { h, h_prime } => {
                let a = LocalCode::from_dense(field, h).map_err(usage)?;
                let b = match h_prime {
                    Some(m) => LocalCode::from_dense(field, m).map_err(usage)?,
                    None => a.clone(),
                };
                (a, b, None)
            }
            LocalConfig::Sampled { w, r1, r2, delta, seed, max_tries } => {
                let pair = sample_local_pair(&SamplerConfig {
                    q: config.q,
                    w: *w,
                    r1: *r1,
                    r2: *r2,
                    delta: *delta,
                    max_tries: *max_tries,
                    seed: *seed,
                })
                .map_err(usage)?;
                (pair.h, pair.h_prime, Some(pair.tries))
            }
        };
        let ta = tanner_on_graph(base.clone(), &h).map_err(usage)?;
        let tb = tanner_on_graph(base.clone(), &h_prime).map_err(usage)?;
        let tanner_a = lift_tanner(&ta, group.clone(), &volts).map_err(usage)?;
        let tanner_b = lift_tanner(&tb, group.clone(), &volts_b).map_err(usage)?;
        let (complex, css, css_failure) = match config.orientation {
            None => (None, None, None),
            Some(o) => {
                let c = lifted_product(&tanner_a.module(), &tanner_b.module(), o).map_err(usage)?;
                match css_from_complex(&c, 1) {
                    Ok(code) => (Some(c), Some(code), None),
                    Err(CssError::Violation { x_row, z_row }) => (Some(c), None, Some((x_row, z_row))),
                    Err(e) => return Err(usage(e)),
                }
            }
        };
        Ok(Job {
            config,
            field,
            group,
            h,
            h_prime,
            sampler_tries,
            base,
            tanner_a,
            tanner_b,
            complex,
            css,
            css_failure,
        })
    }

    fn css(&self) -> Result<&CssCode, RunError> {
        match (&self.css, self.css_failure) {
            (Some(c), _) => Ok(c),
            (None, Some((i, j))) => Err(RunError::Invariant(format!(
                "css condition fails at H_X row {i}, H_Z row {j}"
            ))),
            (None, None) => Err(usage("this task needs a [product] section")),
        }
    }

    pub fn matrix(&self, target: MatrixTarget) -> Result<Matrix, RunError> {
        Ok(match target {
            MatrixTarget::Tanner => self.tanner_a.global_matrix(),
            MatrixTarget::Hx => self.css()?.hx.clone(),
            MatrixTarget::Hz => self.css()?.hz.clone(),
        })
    }
}

/// Runs the construction summary and then `tasks` in order. Invariant
/// failures are collected so the report is still complete.
pub fn run_tasks(job: &Job, tasks: &[Task], opts: &RunOptions) -> Result<(Report, Vec<RunError>), RunError> {
    let mut r = Report::new(job.config.render());
    let mut failures = Vec::new();
    construct_section(job, &mut r);
    for &t in tasks {
        r.section(t.name());
        let res = match t {
            Task::Check => task_check(job, &mut r),
            Task::Homology => task_homology(job, &mut r),
            Task::Distance => task_distance(job, &mut r, opts),
            Task::Dlm => task_dlm(job, &mut r, opts),
            Task::Expansion => task_expansion(job, &mut r),
            Task::Pexp => task_pexp(job, &mut r, opts),
            Task::Soundness => task_soundness(job, &mut r, opts),
            Task::Decode => task_decode(job, &mut r, opts),
            Task::Export => task_export(job, &mut r),
        };
        match res {
            Ok(()) => {}
            Err(e @ RunError::Invariant(_)) => failures.push(e),
            Err(e) => return Err(e),
        }
    }
    Ok((r, failures))
}

fn construct_section(job: &Job, r: &mut Report) {
    r.section("construct");
    r.count("q", Tag::Exact, job.config.q as usize);
    r.text("group", Tag::Exact, job.group.name());
    r.count("group_order", Tag::Exact, job.group.order());
    r.count("base_vertices", Tag::Exact, job.base.vertex_count());
    r.count("base_edges", Tag::Exact, job.base.edge_count_total());
    r.count("lifted_vertices", Tag::Exact, job.tanner_a.vertex_count());
    r.count("lifted_edges", Tag::Exact, job.tanner_a.edge_count());
    for (name, c) in [("h", &job.h), ("h_prime", &job.h_prime)] {
        r.count(&format!("{name}_w"), Tag::Exact, c.w());
        r.count(&format!("{name}_r"), Tag::Exact, c.r());
        r.count(&format!("{name}_rank"), Tag::Exact, c.rank());
        r.count(&format!("{name}_k"), Tag::Exact, c.dim());
    }
    if let Some(t) = job.sampler_tries {
        r.count("sampler_tries", Tag::Exact, t);
    }
    let g = job.tanner_a.global_matrix();
    let rank = g.rank();
    r.count("tanner_n", Tag::Exact, g.cols());
    r.count("tanner_checks", Tag::Exact, g.rows());
    r.count("tanner_k", Tag::Exact, g.cols() - rank);
    if let Some(c) = &job.complex {
        r.text(
            "orientation",
            Tag::Exact,
            match job.config.orientation {
                Some(Orientation::B) => "B",
                _ => "B_dual",
            },
        );
        for i in c.lowest()..=c.highest() {
            r.count(&format!("dim_{i}"), Tag::Exact, c.dim(i));
        }
        if let Some(p) = c.product() {
            let s = p.census();
            r.count("cells_vertices", Tag::Exact, s.vertices);
            r.count("cells_right_edges", Tag::Exact, s.right_edges);
            r.count("cells_up_edges", Tag::Exact, s.up_edges);
            r.count("cells_faces", Tag::Exact, s.faces);
        }
    }
    if let Some(code) = &job.css {
        r.count("css_n", Tag::Exact, code.n);
        r.count("css_k", Tag::Exact, code.n - code.rank_x - code.rank_z);
        r.count("hx_rows", Tag::Exact, code.hx.rows());
        r.count("hz_rows", Tag::Exact, code.hz.rows());
        r.count("hx_max_row_weight", Tag::Exact, code.hx.max_row_weight());
        r.count("hz_max_row_weight", Tag::Exact, code.hz.max_row_weight());
        r.count("max_col_weight", Tag::Exact, code.hx.max_col_weight().max(code.hz.max_col_weight()));
    }
}

fn task_check(job: &Job, r: &mut Report) -> Result<(), RunError> {
    let mut bad = Vec::new();
    let mut check = |r: &mut Report, key: &str, ok: bool| {
        r.pass(key, ok);
        if !ok {
            bad.push(key.to_string());
        }
    };
    check(
        r,
        "local_maps",
        job.tanner_a.local_maps_match_reference() && job.tanner_b.local_maps_match_reference(),
    );
    let order = job.group.order();
    check(
        r,
        "lift_is_cover",
        job.tanner_a.vertex_count() == order * job.base.vertex_count()
            && job.tanner_a.graph().degrees() == vec![job.h.w(); job.tanner_a.vertex_count()],
    );
    if let Some(c) = &job.complex {
        check(r, "chain_condition", c.verify_chain().is_ok());
        let css_ok = match &job.css {
            Some(code) => css_violation(&code.hx, &code.hz).is_none(),
            None => false,
        };
        check(r, "css_condition", css_ok);
        check(r, "block_sparsity", c.check_block_sparsity().is_ok());
        check(r, "incidence_consistency", c.check_incidence_consistency().is_ok());
        if let Some(p) = c.product() {
            check(r, "complete_square", p.check_complete_square().is_ok());
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(RunError::Invariant(format!("check failed: {}", bad.join(", "))))
    }
}

fn complex_of(job: &Job) -> Result<&BasedComplex, RunError> {
    job.complex.as_ref().ok_or_else(|| usage("this task needs a [product] section"))
}

fn task_homology(job: &Job, r: &mut Report) -> Result<(), RunError> {
    let c = complex_of(job)?;
    for i in c.lowest()..=c.highest() {
        let h = c.homology_dim(i).map_err(usage)?;
        r.count(&format!("h_{i}"), Tag::Exact, h);
    }
    Ok(())
}

fn infeasible(what: &str, required_bits: u32, cap_bits: u32) -> RunError {
    RunError::Infeasible {
        what: what.to_string(),
        required_bits,
        cap_bits,
    }
}

fn put_opt(r: &mut Report, key: &str, tag: Tag, v: Option<usize>) {
    match v {
        Some(x) => r.count(key, tag, x),
        None => r.put(key, tag, Value::Infinite),
    }
}

fn task_distance(job: &Job, r: &mut Report, opts: &RunOptions) -> Result<(), RunError> {
    let code = job.css()?;
    let d = match css_distance_bruteforce(code, opts.cap_bits, opts.threads) {
        Ok(d) => d,
        Err(CssError::Infeasible { required_bits, cap_bits }) => {
            return Err(infeasible("distance", required_bits, cap_bits))
        }
        Err(e) => return Err(usage(e)),
    };
    put_opt(r, "dx", Tag::Exact, d.dx);
    put_opt(r, "dz", Tag::Exact, d.dz);
    put_opt(r, "d", Tag::Exact, d.d());
    Ok(())
}

fn task_dlm(job: &Job, r: &mut Report, opts: &RunOptions) -> Result<(), RunError> {
    let c = complex_of(job)?;
    let d = match dlm_bruteforce(c, 1, opts.cap_bits) {
        Ok(d) => d,
        Err(ComplexError::Infeasible { required_bits, cap_bits }) => {
            return Err(infeasible("dlm", required_bits, cap_bits))
        }
        Err(e) => return Err(usage(e)),
    };
    put_opt(r, "d_lm", Tag::Exact, d.value);
    r.int("enumerated", Tag::Exact, d.enumerated);
    Ok(())
}

fn task_expansion(job: &Job, r: &mut Report) -> Result<(), RunError> {
    let g = job.tanner_a.graph();
    let w = job.h.w();
    let bound = 2.0 * ((w.max(1) - 1) as f64).sqrt();
    r.float("ramanujan_bound", Tag::Exact, bound);
    match spectral_profile(g, SPECTRAL_CAP) {
        Ok(p) => {
            r.float("lambda1", Tag::Exact, p.lambda1);
            r.float("lambda2", Tag::Exact, p.lambda2);
            r.float("lambda_min", Tag::Exact, p.lambda_min);
            r.float("tolerance", Tag::Exact, p.tolerance);
            r.pass("lambda2_within_bound", p.lambda2 <= bound + p.tolerance);
        }
        Err(GraphError::TooLarge { n, cap }) => {
            r.text("lambda2", Tag::Unverified, format!("skipped ({n} vertices above {cap})"));
        }
        Err(e) => return Err(usage(e)),
    }
    Ok(())
}

fn task_pexp(job: &Job, r: &mut Report, opts: &RunOptions) -> Result<(), RunError> {
    let p = job
        .config
        .pexp
        .ok_or_else(|| usage("task 'pexp' needs a [pexp] section"))?;
    let params = PexpParams {
        s: p.s,
        m: p.m,
        beta: p.beta,
        delta: p.delta,
    };
    let v = product_expansion_check(&job.h, &job.h_prime, &params, opts.cap_bits, opts.seed).map_err(|e| match e {
        LocalCodeError::EnumerationTooLarge { needed, cap } => infeasible("pexp", needed, cap),
        e => usage(e),
    })?;
    let tag = match v.mode {
        SearchMode::Exhaustive => Tag::Exact,
        SearchMode::Randomized { .. } => Tag::Sampled,
    };
    r.count("kernel_dim", Tag::Exact, v.kernel_dim);
    r.count("delta", Tag::Exact, v.delta);
    r.put("holds", tag, Value::Pass(v.holds));
    put_opt(r, "min_window_weight", tag, v.min_window_weight);
    r.int("minimal_codewords", tag, v.minimal_codewords);
    Ok(())
}

fn task_soundness(job: &Job, r: &mut Report, opts: &RunOptions) -> Result<(), RunError> {
    let cfg = job.config.soundness.unwrap_or_default();
    let h = job.matrix(cfg.target)?;
    let mode = if cfg.exhaustive {
        SoundnessMode::Exhaustive
    } else {
        SoundnessMode::Sampled {
            seed: opts.seed,
            samples: cfg.samples,
        }
    };
    let s = soundness_profile(&h, mode, opts.cap_bits).map_err(|e| match e {
        CssError::Infeasible { required_bits, cap_bits } => infeasible("soundness", required_bits, cap_bits),
        CssError::Local(LocalCodeError::EnumerationTooLarge { needed, cap })
        | CssError::Local(LocalCodeError::TableTooLarge { needed, cap }) => infeasible("soundness", needed, cap),
        e => usage(e),
    })?;
    let tag = if s.exhaustive { Tag::Exact } else { Tag::Sampled };
    r.text("target", Tag::Exact, cfg.target.name());
    r.count("n", Tag::Exact, s.n);
    r.count("m", Tag::Exact, s.m);
    r.count("row_weight", Tag::Exact, s.row_weight);
    r.count("col_weight", Tag::Exact, s.col_weight);
    r.count("omega", Tag::Exact, s.omega);
    r.int("tested", Tag::Exact, s.samples);
    r.put("s_hat_ratio", tag, Value::Ratio(s.s_hat_num, s.s_hat_den));
    r.float("s_hat", tag, s.s_hat);
    r.count("witness_syndrome_weight", tag, s.witness_syndrome_weight);
    r.count("witness_distance", tag, s.witness_distance);
    r.int("inequality_violations", tag, s.inequality_violations);
    let w = job.h.w();
    let b = asymptotic_bounds(w);
    r.count("theorem_omega", Tag::BoundPaper, b.omega);
    r.float("theorem_soundness", Tag::BoundPaper, b.soundness);
    r.float("theorem_relative_distance", Tag::BoundPaper, b.relative_distance);
    if s.inequality_violations > 0 {
        return Err(RunError::Invariant(format!(
            "{} tested words violate |Hx| <= omega d(x, C)",
            s.inequality_violations
        )));
    }
    Ok(())
}

fn decode_report(r: &mut Report, t: &TrialReport) {
    r.int("trials", Tag::Exact, t.trials);
    r.int("successes", Tag::Sampled, t.successes);
    r.float("success_rate", Tag::Sampled, t.success_rate());
    r.float("mean_iters", Tag::Sampled, t.mean_iters);
    for (w, c) in &t.residual_weight_histogram {
        r.int(&format!("residual_weight_{w}"), Tag::Sampled, *c);
    }
}

fn task_decode(job: &Job, r: &mut Report, opts: &RunOptions) -> Result<(), RunError> {
    let d = job.config.decode.unwrap_or_default();
    let cfg = DecoderConfig {
        max_iters: d.max_iters,
        flip_rule: if d.greedy { FlipRule::GreedyBest } else { FlipRule::FirstImproving },
        rng_seed: opts.seed,
        p_err: d.p_err,
        ..Default::default()
    };
    let channel = match d.weight {
        Some(t) => Channel::FixedWeight(t),
        None => Channel::Symmetric,
    };
    let t = if d.css {
        let side = if d.side_x { CssSide::X } else { CssSide::Z };
        r.text("decoder", Tag::Exact, "small_set_flip");
        montecarlo_css(job.css()?, side, &cfg, channel, d.trials, opts.threads)
    } else {
        r.text("decoder", Tag::Exact, "bitflip");
        montecarlo_classical(&job.tanner_a.global_matrix(), &cfg, channel, d.trials, opts.threads)
    };
    decode_report(r, &t);
    Ok(())
}

/// FNV-1a, for stable fingerprints of exported text.
fn fnv64(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

fn task_export(job: &Job, r: &mut Report) -> Result<(), RunError> {
    let mut targets = vec![MatrixTarget::Tanner];
    if job.css.is_some() {
        targets.extend([MatrixTarget::Hx, MatrixTarget::Hz]);
    }
    for t in targets {
        let m = job.matrix(t)?;
        r.count(&format!("{}_nnz", t.name()), Tag::Exact, m.nnz());
        r.text(
            &format!("{}_mm_fnv64", t.name()),
            Tag::Exact,
            format!("{:016x}", fnv64(&to_matrix_market(&m))),
        );
    }
    Ok(())
}
