//! Sectioned key = value job files.
//!
//! ```text
//! # toric code, L = 3
//! [field]
//! q = 2
//! [group]
//! kind = cyclic
//! params = 3 3
//! [graph]
//! base = B1
//! voltages = 1.0
//! voltages_b = 0.1
//! [local]
//! h = 1 1
//! [product]
//! orientation = B
//! [tasks]
//! run = check homology distance
//! ```

use std::fmt::Write as _;
use std::path::Path;

use liftcodes::complexes::Orientation;
use liftcodes::groups::GroupSpec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ConfigError {
    fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ConfigError { line, col, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseGraph {
    /// w loops on one vertex.
    Bouquet(usize),
    /// w parallel edges between two vertices.
    Dipole(usize),
    Explicit { vertices: usize, edges: Vec<(usize, usize)> },
    /// Cay_2 of the LPS generators in PSL(2, q).
    Lps { p: u64, q: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphConfig {
    pub base: BaseGraph,
    /// One group element per base edge, as an index or as product
    /// coordinates "a.b".
    pub voltages: Vec<Vec<u32>>,
    pub voltages_b: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalConfig {
    Explicit { h: Vec<Vec<u32>>, h_prime: Option<Vec<Vec<u32>>> },
    Sampled { w: usize, r1: f64, r2: f64, delta: f64, seed: u64, max_tries: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Check,
    Homology,
    Distance,
    Dlm,
    Expansion,
    Pexp,
    Soundness,
    Decode,
    Export,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::Check,
        Task::Homology,
        Task::Distance,
        Task::Dlm,
        Task::Expansion,
        Task::Pexp,
        Task::Soundness,
        Task::Decode,
        Task::Export,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Check => "check",
            Task::Homology => "homology",
            Task::Distance => "distance",
            Task::Dlm => "dlm",
            Task::Expansion => "expansion",
            Task::Pexp => "pexp",
            Task::Soundness => "soundness",
            Task::Decode => "decode",
            Task::Export => "export",
        }
    }

    pub fn from_name(s: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PexpConfig {
    pub s: usize,
    pub m: usize,
    pub beta: f64,
    pub delta: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixTarget {
    Tanner,
    Hx,
    Hz,
}

impl MatrixTarget {
    pub fn name(self) -> &'static str {
        match self {
            MatrixTarget::Tanner => "tanner",
            MatrixTarget::Hx => "hx",
            MatrixTarget::Hz => "hz",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "tanner" => Some(MatrixTarget::Tanner),
            "hx" => Some(MatrixTarget::Hx),
            "hz" => Some(MatrixTarget::Hz),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoundnessConfig {
    pub exhaustive: bool,
    pub samples: usize,
    pub target: MatrixTarget,
}

impl Default for SoundnessConfig {
    fn default() -> Self {
        SoundnessConfig {
            exhaustive: true,
            samples: 10000,
            target: MatrixTarget::Tanner,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeConfig {
    pub trials: usize,
    pub p_err: f64,
    /// Fixed error weight instead of the symmetric channel.
    pub weight: Option<usize>,
    pub max_iters: usize,
    pub greedy: bool,
    /// Tanner code with bit-flip, or the CSS code with small-set-flip.
    pub css: bool,
    pub side_x: bool,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        DecodeConfig {
            trials: 100,
            p_err: 0.01,
            weight: None,
            max_iters: 1000,
            greedy: true,
            css: true,
            side_x: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub q: u32,
    pub group: GroupSpec,
    pub graph: GraphConfig,
    pub local: LocalConfig,
    pub orientation: Option<Orientation>,
    pub tasks: Vec<Task>,
    pub pexp: Option<PexpConfig>,
    pub soundness: Option<SoundnessConfig>,
    pub decode: Option<DecodeConfig>,
}

const SECTIONS: [(&str, &[&str]); 9] = [
    ("field", &["q"]),
    ("group", &["kind", "params"]),
    ("graph", &["base", "vertices", "edges", "voltages", "voltages_b", "lps"]),
    ("local", &["h", "h_prime", "w", "r1", "r2", "delta", "seed", "max_tries"]),
    ("product", &["orientation"]),
    ("tasks", &["run"]),
    ("pexp", &["s", "m", "beta", "delta"]),
    ("soundness", &["mode", "samples", "target"]),
    ("decode", &["trials", "p_err", "weight", "max_iters", "rule", "target", "side"]),
];

const REQUIRED: [&str; 5] = ["field", "group", "graph", "local", "tasks"];

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    /// Column of the value.
    col: usize,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn loc(&self) -> (usize, usize) {
        (self.line, 1)
    }
}

fn lex(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(ConfigError::at(line, indent + 1, "unterminated section header"));
            };
            let name = name.trim();
            if !SECTIONS.iter().any(|s| s.0 == name) {
                return Err(ConfigError::at(line, indent + 2, format!("unknown section [{name}]")));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(ConfigError::at(line, indent + 1, format!("duplicate section [{name}]")));
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(ConfigError::at(line, indent + 1, "expected key = value"));
        };
        let key = content[..eq].trim();
        let value = content[eq + 1..].trim();
        let vcol = eq + 2 + (content[eq + 1..].len() - content[eq + 1..].trim_start().len());
        let Some(sec) = sections.last_mut() else {
            return Err(ConfigError::at(line, indent + 1, "key outside of a section"));
        };
        let allowed = SECTIONS.iter().find(|s| s.0 == sec.name).unwrap().1;
        if !allowed.contains(&key) {
            return Err(ConfigError::at(line, indent + 1, format!("unknown key '{key}' in [{}]", sec.name)));
        }
        if let Some(prev) = sec.get(key) {
            return Err(ConfigError::at(
                line,
                indent + 1,
                format!("duplicate key '{key}' (first set on line {})", prev.line),
            ));
        }
        if value.is_empty() {
            return Err(ConfigError::at(line, vcol, format!("empty value for '{key}'")));
        }
        sec.entries.push(Entry {
            key: key.to_string(),
            value: value.split_whitespace().collect::<Vec<_>>().join(" "),
            line,
            col: vcol,
        });
    }
    Ok(sections)
}

fn err(e: &Entry, msg: impl Into<String>) -> ConfigError {
    ConfigError::at(e.line, e.col, msg)
}

fn num<T: std::str::FromStr>(e: &Entry) -> Result<T, ConfigError> {
    e.value
        .parse()
        .map_err(|_| err(e, format!("'{}' is not a valid number for '{}'", e.value, e.key)))
}

fn nums<T: std::str::FromStr>(e: &Entry, s: &str) -> Result<Vec<T>, ConfigError> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| err(e, format!("'{t}' is not a valid number"))))
        .collect()
}

fn float01(e: &Entry) -> Result<f64, ConfigError> {
    let x: f64 = num(e)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(err(e, format!("'{}' must lie in [0, 1]", e.key)));
    }
    Ok(x)
}

fn matrix_rows(e: &Entry) -> Result<Vec<Vec<u32>>, ConfigError> {
    let rows: Vec<Vec<u32>> = e
        .value
        .split(';')
        .map(|r| nums::<u32>(e, r))
        .collect::<Result<_, _>>()?;
    let w = rows[0].len();
    if w == 0 || rows.iter().any(|r| r.len() != w) {
        return Err(err(e, "matrix rows must be nonempty and of equal length"));
    }
    Ok(rows)
}

fn voltages(e: &Entry) -> Result<Vec<Vec<u32>>, ConfigError> {
    e.value
        .split_whitespace()
        .map(|t| {
            t.split('.')
                .map(|c| c.parse().map_err(|_| err(e, format!("'{t}' is not a group element"))))
                .collect()
        })
        .collect()
}

fn parse_group(kind: &Entry, params: &Entry) -> Result<GroupSpec, ConfigError> {
    let single = |e: &Entry| -> Result<u32, ConfigError> {
        let v = nums::<u32>(e, &e.value)?;
        if v.len() != 1 {
            return Err(err(e, "expected one parameter"));
        }
        Ok(v[0])
    };
    match kind.value.as_str() {
        "cyclic" => {
            let ls = nums::<u32>(params, &params.value)?;
            if ls.iter().any(|&l| l == 0) {
                return Err(err(params, "cyclic orders must be positive"));
            }
            Ok(if ls.len() == 1 {
                GroupSpec::Cyclic(ls[0])
            } else {
                GroupSpec::Product(ls.into_iter().map(GroupSpec::Cyclic).collect())
            })
        }
        "psl2" => Ok(GroupSpec::Psl2(single(params)?)),
        "symmetric" => Ok(GroupSpec::Symmetric(single(params)?)),
        "product" => {
            let factors = params
                .value
                .split_whitespace()
                .map(|t| factor_token(t).ok_or_else(|| err(params, format!("'{t}' is not a factor (C<n>, S<n>, PSL<q>)"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GroupSpec::Product(factors))
        }
        other => Err(err(kind, format!("unknown group kind '{other}'"))),
    }
}

fn factor_token(t: &str) -> Option<GroupSpec> {
    if let Some(n) = t.strip_prefix("PSL") {
        return n.parse().ok().map(GroupSpec::Psl2);
    }
    if let Some(n) = t.strip_prefix('C') {
        return n.parse().ok().filter(|&l| l > 0).map(GroupSpec::Cyclic);
    }
    if let Some(n) = t.strip_prefix('S') {
        return n.parse().ok().map(GroupSpec::Symmetric);
    }
    None
}

fn factor_name(g: &GroupSpec) -> String {
    match g {
        GroupSpec::Cyclic(l) => format!("C{l}"),
        GroupSpec::Symmetric(n) => format!("S{n}"),
        GroupSpec::Psl2(q) => format!("PSL{q}"),
        GroupSpec::Product(_) => g.to_string(),
    }
}

fn require<'a>(sec: &'a Section, key: &str) -> Result<&'a Entry, ConfigError> {
    sec.get(key).ok_or_else(|| {
        let (l, c) = sec.loc();
        ConfigError::at(l, c, format!("[{}] needs '{key}'", sec.name))
    })
}

fn reject_with(sec: &Section, keys: &[&str], why: &str) -> Result<(), ConfigError> {
    for k in keys {
        if let Some(e) = sec.get(k) {
            return Err(err(e, format!("'{k}' is not allowed {why}")));
        }
    }
    Ok(())
}

pub fn parse_config_str(text: &str) -> Result<JobConfig, ConfigError> {
    let sections = lex(text)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    for name in REQUIRED {
        if find(name).is_none() {
            return Err(ConfigError::at(1, 1, format!("missing section [{name}]")));
        }
    }

    let field = find("field").unwrap();
    let qe = require(field, "q")?;
    let q: u32 = num(qe)?;
    if !liftcodes::gf::is_prime(q as u64) || q > 65521 {
        return Err(err(qe, format!("q = {q} is not a supported prime")));
    }

    let gs = find("group").unwrap();
    let group = parse_group(require(gs, "kind")?, require(gs, "params")?)?;

    let gr = find("graph").unwrap();
    let be = require(gr, "base")?;
    let base = match be.value.as_str() {
        "explicit" => {
            let ve = require(gr, "vertices")?;
            let ee = require(gr, "edges")?;
            let vertices: usize = num(ve)?;
            let edges = ee
                .value
                .split_whitespace()
                .map(|t| {
                    let (u, v) = t.split_once('-').ok_or_else(|| err(ee, format!("'{t}' is not an edge u-v")))?;
                    let u: usize = u.parse().map_err(|_| err(ee, format!("bad vertex in '{t}'")))?;
                    let v: usize = v.parse().map_err(|_| err(ee, format!("bad vertex in '{t}'")))?;
                    if u >= vertices || v >= vertices {
                        return Err(err(ee, format!("edge '{t}' leaves the {vertices} vertices")));
                    }
                    Ok((u, v))
                })
                .collect::<Result<Vec<_>, _>>()?;
            BaseGraph::Explicit { vertices, edges }
        }
        "lps" => {
            let le = require(gr, "lps")?;
            let pq = nums::<u64>(le, &le.value)?;
            if pq.len() != 2 {
                return Err(err(le, "expected 'lps = p q'"));
            }
            if group != GroupSpec::Psl2(pq[1] as u32) {
                let (l, c) = gs.loc();
                return Err(ConfigError::at(l, c, format!("lps needs [group] kind = psl2, params = {}", pq[1])));
            }
            reject_with(gr, &["voltages", "voltages_b"], "with base = lps")?;
            BaseGraph::Lps { p: pq[0], q: pq[1] }
        }
        b => {
            let parsed = b
                .strip_prefix('B')
                .and_then(|w| w.parse().ok())
                .map(BaseGraph::Bouquet)
                .or_else(|| b.strip_prefix('D').and_then(|w| w.parse().ok()).map(BaseGraph::Dipole));
            match parsed {
                Some(BaseGraph::Bouquet(0)) | Some(BaseGraph::Dipole(0)) | None => {
                    return Err(err(be, format!("unknown base '{b}' (B<w>, D<w>, explicit, lps)")))
                }
                Some(g) => g,
            }
        }
    };
    if !matches!(base, BaseGraph::Explicit { .. }) {
        reject_with(gr, &["vertices", "edges"], "unless base = explicit")?;
    }
    if !matches!(base, BaseGraph::Lps { .. }) {
        reject_with(gr, &["lps"], "unless base = lps")?;
    }
    let edge_count = match &base {
        BaseGraph::Bouquet(w) | BaseGraph::Dipole(w) => Some(*w),
        BaseGraph::Explicit { edges, .. } => Some(edges.len()),
        BaseGraph::Lps { .. } => None,
    };
    let (volts, volts_b) = match edge_count {
        None => (Vec::new(), None),
        Some(count) => {
            let ve = require(gr, "voltages")?;
            let v = voltages(ve)?;
            if v.len() != count {
                return Err(err(ve, format!("{count} voltages needed, got {}", v.len())));
            }
            let vb = match gr.get("voltages_b") {
                Some(e) => {
                    let v = voltages(e)?;
                    if v.len() != count {
                        return Err(err(e, format!("{count} voltages needed, got {}", v.len())));
                    }
                    Some(v)
                }
                None => None,
            };
            (v, vb)
        }
    };
    let graph = GraphConfig {
        base,
        voltages: volts,
        voltages_b: volts_b,
    };

    let lo = find("local").unwrap();
    let local = if let Some(he) = lo.get("h") {
        reject_with(lo, &["w", "r1", "r2", "delta", "seed", "max_tries"], "next to an explicit h")?;
        let h = matrix_rows(he)?;
        let hp = lo.get("h_prime").map(matrix_rows).transpose()?;
        for (e, m) in [(Some(he), Some(&h)), (lo.get("h_prime"), hp.as_ref())] {
            if let (Some(e), Some(m)) = (e, m) {
                if m.iter().flatten().any(|&x| x >= q) {
                    return Err(err(e, format!("entries must be below q = {q}")));
                }
            }
        }
        LocalConfig::Explicit { h, h_prime: hp }
    } else {
        reject_with(lo, &["h_prime"], "without h")?;
        let w = num(require(lo, "w")?)?;
        LocalConfig::Sampled {
            w,
            r1: float01(require(lo, "r1")?)?,
            r2: float01(require(lo, "r2")?)?,
            delta: float01(require(lo, "delta")?)?,
            seed: num(require(lo, "seed")?)?,
            max_tries: lo.get("max_tries").map(num).transpose()?.unwrap_or(1000),
        }
    };

    let orientation = match find("product") {
        None => None,
        Some(p) => {
            let oe = require(p, "orientation")?;
            Some(match oe.value.as_str() {
                "B" => Orientation::B,
                "B_dual" => Orientation::BDual,
                o => return Err(err(oe, format!("orientation must be B or B_dual, got '{o}'"))),
            })
        }
    };

    let ts = find("tasks").unwrap();
    let re = require(ts, "run")?;
    let mut tasks = Vec::new();
    for t in re.value.split_whitespace() {
        let task = Task::from_name(t).ok_or_else(|| err(re, format!("unknown task '{t}'")))?;
        if tasks.contains(&task) {
            return Err(err(re, format!("task '{t}' listed twice")));
        }
        tasks.push(task);
    }
    for t in &tasks {
        let needs_product = matches!(t, Task::Homology | Task::Distance | Task::Dlm);
        if needs_product && orientation.is_none() {
            return Err(err(re, format!("task '{}' needs a [product] section", t.name())));
        }
    }

    let pexp = match find("pexp") {
        None => None,
        Some(p) => Some(PexpConfig {
            s: num(require(p, "s")?)?,
            m: num(require(p, "m")?)?,
            beta: p.get("beta").map(float01).transpose()?.unwrap_or(0.0),
            delta: p.get("delta").map(num).transpose()?,
        }),
    };

    let soundness = match find("soundness") {
        None => None,
        Some(s) => {
            let d = SoundnessConfig::default();
            let exhaustive = match s.get("mode") {
                None => d.exhaustive,
                Some(e) => match e.value.as_str() {
                    "exhaustive" => true,
                    "sampled" => false,
                    o => return Err(err(e, format!("mode must be exhaustive or sampled, got '{o}'"))),
                },
            };
            let target = match s.get("target") {
                None => d.target,
                Some(e) => MatrixTarget::from_name(&e.value).ok_or_else(|| err(e, "target must be tanner, hx or hz"))?,
            };
            Some(SoundnessConfig {
                exhaustive,
                samples: s.get("samples").map(num).transpose()?.unwrap_or(d.samples),
                target,
            })
        }
    };

    let decode = match find("decode") {
        None => None,
        Some(s) => {
            let d = DecodeConfig::default();
            let pick = |key: &str, a: &str, b: &str, dflt: bool| -> Result<bool, ConfigError> {
                match s.get(key) {
                    None => Ok(dflt),
                    Some(e) if e.value == a => Ok(true),
                    Some(e) if e.value == b => Ok(false),
                    Some(e) => Err(err(e, format!("'{key}' must be {a} or {b}"))),
                }
            };
            Some(DecodeConfig {
                trials: s.get("trials").map(num).transpose()?.unwrap_or(d.trials),
                p_err: s.get("p_err").map(float01).transpose()?.unwrap_or(d.p_err),
                weight: s.get("weight").map(num).transpose()?,
                max_iters: s.get("max_iters").map(num).transpose()?.unwrap_or(d.max_iters),
                greedy: pick("rule", "greedy", "first", d.greedy)?,
                css: pick("target", "css", "tanner", d.css)?,
                side_x: pick("side", "x", "z", d.side_x)?,
            })
        }
    };
    let uses_css = decode.map_or(false, |d| d.css) && tasks.contains(&Task::Decode)
        || soundness.map_or(false, |s| s.target != MatrixTarget::Tanner) && tasks.contains(&Task::Soundness);
    if uses_css && orientation.is_none() {
        return Err(err(re, "css targets need a [product] section"));
    }

    Ok(JobConfig {
        q,
        group,
        graph,
        local,
        orientation,
        tasks,
        pexp,
        soundness,
        decode,
    })
}

pub fn parse_config(path: &Path) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::at(0, 0, format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

fn rows_text(m: &[Vec<u32>]) -> String {
    m.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn voltages_text(v: &[Vec<u32>]) -> String {
    v.iter()
        .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("."))
        .collect::<Vec<_>>()
        .join(" ")
}

impl JobConfig {
    /// Canonical text: fixed section and key order, normalized values.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[field]\nq = {}", self.q);
        let (kind, params) = match &self.group {
            GroupSpec::Cyclic(l) => ("cyclic", l.to_string()),
            GroupSpec::Psl2(q) => ("psl2", q.to_string()),
            GroupSpec::Symmetric(n) => ("symmetric", n.to_string()),
            GroupSpec::Product(f) if f.iter().all(|g| matches!(g, GroupSpec::Cyclic(_))) => (
                "cyclic",
                f.iter()
                    .map(|g| match g {
                        GroupSpec::Cyclic(l) => l.to_string(),
                        _ => unreachable!(),
                    })
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
            GroupSpec::Product(f) => ("product", f.iter().map(factor_name).collect::<Vec<_>>().join(" ")),
        };
        let _ = writeln!(s, "[group]\nkind = {kind}\nparams = {params}");
        s.push_str("[graph]\n");
        match &self.graph.base {
            BaseGraph::Bouquet(w) => {
                let _ = writeln!(s, "base = B{w}");
            }
            BaseGraph::Dipole(w) => {
                let _ = writeln!(s, "base = D{w}");
            }
            BaseGraph::Explicit { vertices, edges } => {
                let e: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
                let _ = writeln!(s, "base = explicit\nvertices = {vertices}\nedges = {}", e.join(" "));
            }
            BaseGraph::Lps { p, q } => {
                let _ = writeln!(s, "base = lps\nlps = {p} {q}");
            }
        }
        if !self.graph.voltages.is_empty() {
            let _ = writeln!(s, "voltages = {}", voltages_text(&self.graph.voltages));
        }
        if let Some(v) = &self.graph.voltages_b {
            let _ = writeln!(s, "voltages_b = {}", voltages_text(v));
        }
        s.push_str("[local]\n");
        match &self.local {
            LocalConfig::Explicit { h, h_prime } => {
                let _ = writeln!(s, "h = {}", rows_text(h));
                if let Some(hp) = h_prime {
                    let _ = writeln!(s, "h_prime = {}", rows_text(hp));
                }
            }
            LocalConfig::Sampled { w, r1, r2, delta, seed, max_tries } => {
                let _ = writeln!(
                    s,
                    "w = {w}\nr1 = {r1}\nr2 = {r2}\ndelta = {delta}\nseed = {seed}\nmax_tries = {max_tries}"
                );
            }
        }
        if let Some(o) = self.orientation {
            let o = match o {
                Orientation::B => "B",
                Orientation::BDual => "B_dual",
            };
            let _ = writeln!(s, "[product]\norientation = {o}");
        }
        let names: Vec<&str> = self.tasks.iter().map(|t| t.name()).collect();
        let _ = writeln!(s, "[tasks]\nrun = {}", names.join(" "));
        if let Some(p) = self.pexp {
            let _ = writeln!(s, "[pexp]\ns = {}\nm = {}\nbeta = {}", p.s, p.m, p.beta);
            if let Some(d) = p.delta {
                let _ = writeln!(s, "delta = {d}");
            }
        }
        if let Some(c) = self.soundness {
            let mode = if c.exhaustive { "exhaustive" } else { "sampled" };
            let _ = writeln!(
                s,
                "[soundness]\nmode = {mode}\nsamples = {}\ntarget = {}",
                c.samples,
                c.target.name()
            );
        }
        if let Some(d) = self.decode {
            let _ = writeln!(s, "[decode]\ntrials = {}\np_err = {}", d.trials, d.p_err);
            if let Some(w) = d.weight {
                let _ = writeln!(s, "weight = {w}");
            }
            let _ = writeln!(
                s,
                "max_iters = {}\nrule = {}\ntarget = {}\nside = {}",
                d.max_iters,
                if d.greedy { "greedy" } else { "first" },
                if d.css { "css" } else { "tanner" },
                if d.side_x { "x" } else { "z" }
            );
        }
        s
    }
}
