//! Line-oriented run reports with a versioned header. Report bodies are
//! deterministic for identical inputs and seeds; timing goes to stderr
//! only.

use std::fmt::Write as _;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLike,
}

pub struct Report {
    format: Format,
    fields: Vec<(String, String)>,
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, format: Format) -> Report {
        let mut r = Report {
            format,
            fields: Vec::new(),
            lines: Vec::new(),
        };
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    /// Free-form detail line (counterexamples, listings).
    pub fn line(&mut self, text: impl ToString) -> &mut Self {
        self.lines.push(text.to_string());
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        match self.format {
            Format::Text => {
                out.push_str("rmk-report v1\n");
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "{k}: {v}");
                }
                for l in &self.lines {
                    let _ = writeln!(out, "  {l}");
                }
            }
            Format::JsonLike => {
                out.push_str("{\n  \"report\": \"rmk-report v1\",\n");
                for (k, v) in &self.fields {
                    let _ = writeln!(out, "  \"{}\": \"{}\",", escape(k), escape(v));
                }
                out.push_str("  \"detail\": [\n");
                for (i, l) in self.lines.iter().enumerate() {
                    let comma = if i + 1 == self.lines.len() { "" } else { "," };
                    let _ = writeln!(out, "    \"{}\"{}", escape(l), comma);
                }
                out.push_str("  ]\n}\n");
            }
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
