//! The plain-text report every command prints.
//!
//! ```text
//! schema: liexp-report/1
//! version: liexp 0.1.0
//! command: liexp dims --genus 3 --ideal omega --degree-max 1
//! input-sha256: 3f1c…
//! exact: true
//! status: pass
//! ---
//! <payload lines>
//! ```
//!
//! Nothing time- or host-dependent is written, so reruns are byte-identical.

use std::fmt;

use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "liexp-report/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub payload: Vec<String>,
    pub failures: usize,
}

impl Report {
    /// `command` is the canonical invocation with defaults filled in; `inputs`
    /// are `(name, contents)` pairs of files the command read.
    pub fn new(command: String, inputs: &[(String, String)]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        hasher.update(b"\n");
        for (name, contents) in inputs {
            hasher.update(format!("file {name} {}\n", contents.len()).as_bytes());
            hasher.update(contents.as_bytes());
        }
        Report {
            command,
            input_digest: hex::encode(hasher.finalize()),
            payload: Vec::new(),
            failures: 0,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.payload.push(s.into());
    }

    pub fn fail(&mut self, s: impl Into<String>) {
        self.failures += 1;
        self.payload.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "schema: {SCHEMA}")?;
        writeln!(f, "version: liexp {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(f, "command: {}", self.command)?;
        writeln!(f, "input-sha256: {}", self.input_digest)?;
        writeln!(f, "exact: true")?;
        writeln!(f, "status: {}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "---")?;
        for l in &self.payload {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}
