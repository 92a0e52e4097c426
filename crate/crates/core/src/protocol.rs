//! JSON-lines request/response protocol over a byte stream.
//!
//! Requests: `{"id": 1, "op": "reset", "problem": "path/to/file.p"}`,
//! `{"id": 2, "op": "step", "action": 0}`, `{"id": 3, "op": "render", "mode": "human"}`,
//! `{"id": 4, "op": "tstp_proof"}`, `{"id": 5, "op": "close"}`. `reset` takes
//! either `problem` or `problem_index` (default 0) into the configured list.
//!
//! Responses: `{"id": …, "ok": true, "payload": …}` or
//! `{"id": …, "ok": false, "error": "…"}`, one line each, in request order.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use serde_json::{json, Value};

use crate::env::{EnvConfig, EnvError, RenderMode, SaturationEnv};
use crate::json::object;
use crate::tptp::ProblemSource;

enum Reply {
    Continue(Value),
    Close(Value),
}

/// Serves requests from `input` until `close` or end of input.
pub fn serve<R: BufRead, W: Write>(config: EnvConfig, input: R, mut output: W) -> io::Result<()> {
    let mut env = SaturationEnv::new(config).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = handle_line(&mut env, &line);
        let (response, close) = match reply {
            Reply::Continue(v) => (v, false),
            Reply::Close(v) => (v, true),
        };
        writeln!(output, "{response}")?;
        output.flush()?;
        if close {
            break;
        }
    }
    Ok(())
}

fn ok(id: &Value, payload: Value) -> Value {
    object([("id", id.clone()), ("ok", true.into()), ("payload", payload)])
}

fn err(id: &Value, message: impl Into<String>) -> Value {
    json!({"id": id, "ok": false, "error": message.into()})
}

fn handle_line(env: &mut SaturationEnv, line: &str) -> Reply {
    let request: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return Reply::Continue(err(&Value::Null, format!("parse: {e}"))),
    };
    let id = request.get("id").cloned().unwrap_or(Value::Null);
    if !request.is_object() {
        return Reply::Continue(err(&id, "parse: request must be an object"));
    }
    if !(id.is_i64() || id.is_u64()) {
        return Reply::Continue(err(&Value::Null, "parse: missing integer `id`"));
    }
    let Some(op) = request.get("op").and_then(Value::as_str) else {
        return Reply::Continue(err(&id, "parse: missing `op`"));
    };
    let result: Result<Value, String> = match op {
        "reset" => reset(env, &request),
        "step" => match request.get("action").and_then(Value::as_u64) {
            Some(action) => env
                .step(action as usize)
                .map(|r| r.to_value())
                .map_err(|e| e.to_string()),
            None => Err("parse: `step` needs a nonnegative integer `action`".into()),
        },
        "render" => {
            let mode = match request.get("mode").and_then(Value::as_str) {
                None | Some("human") => Ok(RenderMode::Human),
                Some("json") => Ok(RenderMode::Json),
                Some(other) => Err(format!("parse: unknown render mode `{other}`")),
            };
            mode.and_then(|mode| match mode {
                RenderMode::Human => env.render(mode).map(Value::String).map_err(|e| e.to_string()),
                RenderMode::Json => env.observation().map(|o| o.to_value()).map_err(|e| e.to_string()),
            })
        }
        "tstp_proof" => env.tstp_proof().map(Value::String).map_err(|e| e.to_string()),
        "close" => return Reply::Close(ok(&id, Value::Null)),
        other => Err(format!("parse: unknown op `{other}`")),
    };
    Reply::Continue(match result {
        Ok(payload) => ok(&id, payload),
        Err(message) => err(&id, message),
    })
}

fn reset(env: &mut SaturationEnv, request: &Value) -> Result<Value, String> {
    let observation = if let Some(problem) = request.get("problem") {
        let Some(path) = problem.as_str() else {
            return Err("parse: `problem` must be a string".into());
        };
        env.reset_source(&ProblemSource::new(PathBuf::from(path)))
    } else {
        let index = match request.get("problem_index") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or("parse: `problem_index` must be a nonnegative integer")? as usize,
        };
        env.reset(index)
    };
    observation.map(|o| o.to_value()).map_err(|e: EnvError| e.to_string())
}
