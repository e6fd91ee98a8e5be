use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A command result; JSON is always available, CSV only for tabular output.
#[derive(Debug, Clone)]
pub struct Report {
    body: Value,
    csv: Vec<String>,
    text: Option<String>,
}

impl Report {
    pub fn new(body: Value) -> Self {
        Self { body, csv: Vec::new(), text: None }
    }

    pub fn with_csv(mut self, lines: Vec<String>) -> Self {
        self.csv = lines;
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.body).map_err(|e| e.to_string())?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv if self.csv.is_empty() => Err("this command has no CSV output; use --format json or text".into()),
            Format::Csv => Ok(self.csv.iter().map(|l| format!("{l}\n")).collect()),
            Format::Text if self.text.is_some() => Ok(self.text.clone().unwrap_or_default()),
            Format::Text => {
                let mut s = String::new();
                text(&mut s, "", &self.body, 0);
                Ok(s)
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flat_row(v: &Value) -> Option<String> {
    let items = v.as_array()?;
    let parts: Option<Vec<String>> = items.iter().map(scalar).collect();
    parts.map(|p| p.join(" "))
}

fn text(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    let label = if key.is_empty() { String::new() } else { format!("{key}:") };
    if let Some(s) = scalar(v).or_else(|| flat_row(v)) {
        let _ = writeln!(out, "{pad}{label} {s}");
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(|r| flat_row(r).is_some()) => {
            let _ = writeln!(out, "{pad}{label}");
            for r in items {
                let _ = writeln!(out, "{pad}  {}", flat_row(r).unwrap_or_default());
            }
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{pad}{label}");
            for (i, item) in items.iter().enumerate() {
                text(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        Value::Object(map) => {
            if !label.is_empty() {
                let _ = writeln!(out, "{pad}{label}");
            }
            let inner = if label.is_empty() { depth } else { depth + 1 };
            for (k, item) in map {
                text(out, k, item, inner);
            }
        }
        _ => {}
    }
}
