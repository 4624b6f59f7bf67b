//! Reports in two renderings.
//!
//! Machine format: one JSON object per line. The first line has
//! `"record": "report"` with `operation`, `input`, `sha256`, `seed`,
//! `form_degree` and `monomial_degree`. Each result follows as its own
//! record (`trace`, `form`, `class`, `residue`, `verdict`, `witness`,
//! `weights`, `fiber`, `entry`, `pullback`, `item`, `expectation`,
//! `error`). The last line is `{"record": "status", "exit": N}`.
//! Keys inside an object are sorted.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct Record {
    pub kind: &'static str,
    pub text: String,
    pub data: Map<String, Value>,
}

impl Record {
    pub fn new(kind: &'static str, text: impl Into<String>) -> Self {
        Record { kind, text: text.into(), data: Map::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.data.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.data.get(key)
    }

    fn json(&self) -> Value {
        let mut m = self.data.clone();
        m.insert("record".into(), self.kind.into());
        Value::Object(m)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub operation: String,
    pub input: String,
    pub digest: String,
    pub seed: u64,
    pub form_degree: Option<usize>,
    pub monomial_degree: Option<u32>,
    pub records: Vec<Record>,
    pub exit: i32,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(operation: &str, input: &str, text: &str, seed: u64) -> Self {
        Report {
            operation: operation.to_string(),
            input: input.to_string(),
            digest: sha256_hex(text.as_bytes()),
            seed,
            form_degree: None,
            monomial_degree: None,
            records: Vec::new(),
            exit: 0,
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    /// Raises the exit code, never lowers it.
    pub fn fail(&mut self, code: i32) {
        self.exit = self.exit.max(code);
    }

    pub fn records_of<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} (sha256 {})\n", self.operation, self.input, &self.digest[..12]);
        for r in &self.records {
            out.push_str(&r.text);
            out.push('\n');
        }
        out.push_str(&format!("exit {}\n", self.exit));
        out
    }

    pub fn to_machine(&self) -> String {
        let mut head = Map::new();
        head.insert("record".into(), "report".into());
        head.insert("operation".into(), self.operation.clone().into());
        head.insert("input".into(), self.input.clone().into());
        head.insert("sha256".into(), self.digest.clone().into());
        head.insert("seed".into(), self.seed.into());
        head.insert("form_degree".into(), self.form_degree.map_or(Value::Null, Value::from));
        head.insert("monomial_degree".into(), self.monomial_degree.map_or(Value::Null, Value::from));
        let mut out = Value::Object(head).to_string();
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.json().to_string());
            out.push('\n');
        }
        out.push_str(&serde_json::json!({ "record": "status", "exit": self.exit }).to_string());
        out.push('\n');
        out
    }
}
