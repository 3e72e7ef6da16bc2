use std::process::ExitCode;

use admit_core::chains::ChainBounds;
use admit_core::{GameGraph, VertexId};
use serde_json::{json, Map, Value};

/// The outcome of one command, rendered either as text or as one JSON object.
pub struct Report {
    verdict: &'static str,
    code: u8,
    show_verdict: bool,
    lines: Vec<String>,
    raw: Vec<String>,
    pub witness: Option<Value>,
    pub values: Option<Value>,
    pub bounds: Option<Value>,
}

impl Report {
    fn new(verdict: &'static str, code: u8) -> Self {
        Report {
            verdict,
            code,
            show_verdict: true,
            lines: Vec::new(),
            raw: Vec::new(),
            witness: None,
            values: None,
            bounds: None,
        }
    }

    pub fn answer(yes: bool) -> Self {
        if yes {
            Self::new("yes", 0)
        } else {
            Self::new("no", 1)
        }
    }

    pub fn success(verdict: &'static str) -> Self {
        Self::new(verdict, 0)
    }

    pub fn failure(verdict: &'static str) -> Self {
        Self::new(verdict, 1)
    }

    pub fn inconclusive() -> Self {
        Self::new("inconclusive", 2)
    }

    /// Text mode prints only the body, not the verdict word.
    pub fn quiet_verdict(mut self) -> Self {
        self.show_verdict = false;
        self
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Verbatim file content: printed as-is in text mode, under `output` in JSON.
    pub fn raw(&mut self, s: String) {
        self.raw.push(s);
    }

    pub fn with_bounds(mut self, b: &ChainBounds) -> Self {
        let mut text = format!("bounds: weak {} strict {}", b.n_weak, b.n_strict);
        if let Some(n) = b.n_strategy {
            text.push_str(&format!(" strategy {n}"));
        }
        if let Some(n) = b.n_chain {
            text.push_str(&format!(" chain {n}"));
        }
        self.lines.push(text);
        self.bounds = serde_json::to_value(b).ok();
        self
    }

    pub fn emit(self, json: bool) -> ExitCode {
        if json {
            let has_values = self.values.is_some();
            let mut obj = Map::new();
            obj.insert("verdict".into(), json!(self.verdict));
            for (key, v) in [
                ("witness", self.witness),
                ("values", self.values),
                ("bounds", self.bounds),
            ] {
                if let Some(v) = v {
                    obj.insert(key.into(), v);
                }
            }
            if !self.raw.is_empty() {
                obj.insert("output".into(), json!(self.raw.concat()));
            }
            if !self.lines.is_empty() && !has_values {
                obj.insert("details".into(), json!(self.lines));
            }
            println!("{}", Value::Object(obj));
        } else {
            if self.show_verdict {
                println!("{}", self.verdict);
            }
            for l in &self.lines {
                println!("{l}");
            }
            for r in &self.raw {
                print!("{r}");
            }
        }
        ExitCode::from(self.code)
    }
}

pub fn names(g: &GameGraph, h: &[VertexId]) -> Vec<String> {
    h.iter().map(|&v| g.name(v).to_string()).collect()
}

pub fn history(g: &GameGraph, h: &[VertexId]) -> String {
    names(g, h).join(" ")
}
