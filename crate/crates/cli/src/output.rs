//! Rendering shared by every command: the three output formats and the
//! exact-decimal conventions. Machine formats always carry the
//! certified/conjectured marker.

use clap::ValueEnum;
use regionbound_core::Histogram;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Histogram as `{"entries": ["<decimal>", ...]}`, index equals
/// position; strings because entries outgrow 64 bits.
pub fn histogram_json(h: &Histogram) -> Value {
    json!({
        "entries": h.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    })
}

/// Entries joined by ';' so a histogram fits one CSV cell.
pub fn histogram_csv(h: &Histogram) -> String {
    if h.entries().is_empty() {
        return String::from("0");
    }
    h.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(";")
}

/// Quotes a CSV field when it holds a delimiter or quote.
pub fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        String::from(text)
    }
}

pub fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("value rendering cannot fail"));
}
