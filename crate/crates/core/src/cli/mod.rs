//! Batch interface: one input document, one command, one result document.

mod commands;
mod document;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

pub use commands::{element_json, group_json, hom_json, Status, COMMANDS};
pub use document::{Document, InputError, Int, RawDocument, RawGroup, SCHEMA_VERSION};

use crate::invariants::DEFAULT_BOUND;

pub const EXIT_INPUT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Input(String),
    Internal(String),
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub bound: Option<u64>,
    pub query: Option<String>,
}

/// The bound from the flag, else `KSIX_BOUND`, else the default.
pub fn effective_bound(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("KSIX_BOUND") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("KSIX_BOUND=`{s}` is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BOUND),
    }
}

/// The emitted document. Every field re-parses into this type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub command: String,
    pub query: Option<String>,
    pub inputs: Value,
    pub status: String,
    pub result: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub document: ResultDocument,
    pub exit_code: i32,
}

impl Outcome {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("values serialize");
        s.push('\n');
        s
    }
}

fn failed(command: &str, query: Option<String>, inputs: Value, f: Failure) -> Outcome {
    let (status, code, msg) = match f {
        Failure::Input(m) => ("input-error", EXIT_INPUT, m),
        Failure::Internal(m) => ("internal-error", EXIT_INTERNAL, m),
    };
    Outcome {
        document: ResultDocument {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            query,
            inputs,
            status: status.into(),
            result: json!({ "error": msg }),
        },
        exit_code: code,
    }
}

/// Picks the query to run: the named one, or the only one using `command`.
fn select<'a>(
    doc: &'a Document,
    command: &str,
    wanted: Option<&str>,
) -> Result<(String, &'a Map<String, Value>), Failure> {
    let input = |m: String| Failure::Input(m);
    let (name, q) = match wanted {
        Some(n) => doc
            .queries
            .get_key_value(n)
            .ok_or_else(|| input(format!("no query named `{n}`")))?,
        None => {
            let mut hits = doc.queries.iter().filter(|(_, q)| q.command == command);
            let first = hits
                .next()
                .ok_or_else(|| input(format!("no query uses the command `{command}`")))?;
            if hits.next().is_some() {
                return Err(input(format!(
                    "several queries use `{command}`; pick one with --query"
                )));
            }
            first
        }
    };
    if q.command != command {
        return Err(input(format!(
            "query `{name}` is a `{}` query, not `{command}`",
            q.command
        )));
    }
    Ok((name.clone(), &q.args))
}

/// Runs `command` on already loaded document text.
pub fn run_text(command: &str, text: &str, flags: &Flags) -> Outcome {
    let query = flags.query.clone();
    if !COMMANDS.contains(&command) {
        return failed(
            command,
            query,
            Value::Null,
            Failure::Input(format!("unknown command `{command}`")),
        );
    }
    let doc = match Document::parse(text) {
        Ok(d) => d,
        Err(e) => return failed(command, query, Value::Null, Failure::Input(e.0)),
    };
    let (name, args) = match select(&doc, command, flags.query.as_deref()) {
        Ok(x) => x,
        Err(f) => return failed(command, query, Value::Null, f),
    };
    let inputs = Value::Object(args.clone());
    let bound = match effective_bound(flags.bound) {
        Ok(b) => b,
        Err(f) => return failed(command, Some(name), inputs, f),
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        commands::dispatch(command, &doc, args, bound)
    }));
    match outcome {
        Ok(Ok((status, result))) => Outcome {
            document: ResultDocument {
                schema_version: SCHEMA_VERSION,
                command: command.into(),
                query: Some(name),
                inputs,
                status: status.label().into(),
                result,
            },
            exit_code: status.exit_code(),
        },
        Ok(Err(f)) => failed(command, Some(name), inputs, f),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            failed(command, Some(name), inputs, Failure::Internal(msg))
        }
    }
}

/// Reads `input` and runs `command` on it.
pub fn run(command: &str, input: &Path, flags: &Flags) -> Outcome {
    match std::fs::read_to_string(input) {
        Ok(text) => run_text(command, &text, flags),
        Err(e) => failed(
            command,
            flags.query.clone(),
            Value::Null,
            Failure::Input(format!("cannot read {}: {e}", input.display())),
        ),
    }
}
