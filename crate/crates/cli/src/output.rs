use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

/// One line of output.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub value: String,
    pub method: String,
    pub elapsed_ms: u64,
}

impl ResultRecord {
    pub fn new(command: &str, method: impl Into<String>, value: impl Into<String>) -> Self {
        ResultRecord {
            command: command.to_string(),
            parameters: Map::new(),
            value: value.into(),
            method: method.into(),
            elapsed_ms: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }
}

pub struct Printer {
    pretty: bool,
    header_done: bool,
}

impl Printer {
    pub fn new(pretty: bool) -> Self {
        Printer {
            pretty,
            header_done: false,
        }
    }

    pub fn emit(&mut self, record: &ResultRecord) {
        let mut out = io::stdout().lock();
        if !self.pretty {
            let line = serde_json::to_string(record).expect("records serialize");
            let _ = writeln!(out, "{line}");
            return;
        }
        if !self.header_done {
            let _ = writeln!(out, "{:<10} {:<34} {:<44} {:>8}  value", "command", "parameters", "method", "ms");
            self.header_done = true;
        }
        let params: Vec<String> = record
            .parameters
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        let _ = writeln!(
            out,
            "{:<10} {:<34} {:<44} {:>8}  {}",
            record.command,
            params.join(" "),
            record.method,
            record.elapsed_ms,
            record.value
        );
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorRecord<'a> {
    pub command: &'a str,
    pub error: &'a str,
    pub message: String,
}

pub fn emit_error(record: &ErrorRecord<'_>) {
    let line = serde_json::to_string(record).expect("errors serialize");
    eprintln!("{line}");
}
