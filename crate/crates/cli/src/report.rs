//! Plain-text reports: `[section]` headers followed by `key: tag value`
//! lines, in insertion order.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tag {
    Exact,
    Sampled,
    Bound,
    /// Guarantee stated for the asymptotic family, not a measurement.
    BoundPaper,
    /// A bound the run could not confirm.
    Unverified,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Exact => "exact",
            Tag::Sampled => "sampled",
            Tag::Bound => "bound",
            Tag::BoundPaper => "bound (paper)",
            Tag::Unverified => "bound unverified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i128),
    Float(f64),
    Ratio(u64, u64),
    Pass(bool),
    Text(String),
    Infinite,
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Int(x) => x.to_string(),
            Value::Float(x) => fmt_sig(*x),
            Value::Ratio(a, b) => {
                let g = gcd(*a, *b).max(1);
                format!("{}/{}", a / g, b / g)
            }
            Value::Pass(true) => "pass".into(),
            Value::Pass(false) => "fail".into(),
            Value::Text(s) => s.clone(),
            Value::Infinite => "inf".into(),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Nine significant digits in scientific notation; stable across platforms.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000e0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.8e}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    /// Canonical job text, echoed as comments.
    pub job: String,
    sections: Vec<(String, Vec<(String, Tag, Value)>)>,
}

impl Report {
    pub fn new(job: String) -> Self {
        Report {
            job,
            sections: Vec::new(),
        }
    }

    pub fn section(&mut self, name: &str) {
        self.sections.push((name.to_string(), Vec::new()));
    }

    pub fn put(&mut self, key: &str, tag: Tag, value: Value) {
        if self.sections.is_empty() {
            self.section("report");
        }
        self.sections.last_mut().unwrap().1.push((key.to_string(), tag, value));
    }

    pub fn int(&mut self, key: &str, tag: Tag, x: impl Into<i128>) {
        self.put(key, tag, Value::Int(x.into()));
    }

    pub fn count(&mut self, key: &str, tag: Tag, x: usize) {
        self.put(key, tag, Value::Int(x as i128));
    }

    pub fn float(&mut self, key: &str, tag: Tag, x: f64) {
        self.put(key, tag, Value::Float(x));
    }

    pub fn pass(&mut self, key: &str, ok: bool) {
        self.put(key, Tag::Exact, Value::Pass(ok));
    }

    pub fn text(&mut self, key: &str, tag: Tag, s: impl Into<String>) {
        self.put(key, tag, Value::Text(s.into()));
    }

    pub fn get(&self, section: &str, key: &str) -> Option<(Tag, &Value)> {
        self.sections
            .iter()
            .filter(|s| s.0 == section)
            .flat_map(|s| &s.1)
            .find(|e| e.0 == key)
            .map(|e| (e.1, &e.2))
    }

    pub fn render(&self) -> String {
        let mut out = String::from("# liftcodes report\n");
        for l in self.job.lines() {
            let _ = writeln!(out, "# {l}");
        }
        for (name, entries) in &self.sections {
            let _ = writeln!(out, "[{name}]");
            for (k, t, v) in entries {
                let _ = writeln!(out, "{k}: {} {}", t.as_str(), v.render());
            }
        }
        out
    }
}
