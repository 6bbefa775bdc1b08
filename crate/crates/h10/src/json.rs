//! JSON input/output for the CLI: file-or-stdio plumbing plus the few
//! representations that need hand-written conversion (big naturals and
//! FRACTRAN programs).  Everything else round-trips through the serde
//! derives on the model types.

use std::io::{Read, Write};

use serde_json::Value;
use thiserror::Error;

use crate::models::FractranProg;
use crate::{nat, Nat};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Deserialize without serde_json's recursion limit: reduction outputs nest
/// existentials tens of thousands deep, far past the default guard.  The
/// stacker-backed deserializer grows the stack as needed.
pub fn from_str_deep<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, JsonError> {
    let mut de = serde_json::Deserializer::from_str(s);
    de.disable_recursion_limit();
    let de = serde_stacker::Deserializer::new(&mut de);
    let v = T::deserialize(de)?;
    Ok(v)
}

/// Read a whole input, with `-` meaning stdin.
pub fn read_input(path: &str) -> Result<String, JsonError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

/// Write an output with a trailing newline, with `-` meaning stdout.
pub fn write_output(path: &str, data: &str) -> Result<(), JsonError> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(data.as_bytes())?;
        out.write_all(b"\n")?;
        Ok(())
    } else {
        std::fs::write(path, format!("{}\n", data))?;
        Ok(())
    }
}

/// A natural as JSON: a plain number when it fits `u64`, a decimal string
/// otherwise.
pub fn nat_to_json(n: &Nat) -> Value {
    match u64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(n.to_str_radix(10)),
    }
}

/// Parse a natural from a JSON number or decimal string.
pub fn nat_from_json(v: &Value) -> Result<Nat, JsonError> {
    match v {
        Value::Number(x) => x
            .as_u64()
            .map(nat)
            .ok_or_else(|| JsonError::Malformed(format!("not a natural: {}", x))),
        Value::String(s) => Nat::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| JsonError::Malformed(format!("not a decimal natural: {:?}", s))),
        other => Err(JsonError::Malformed(format!(
            "expected a natural, got {}",
            other
        ))),
    }
}

/// FRACTRAN program as a JSON list of `[numerator, denominator]` pairs.
pub fn fractran_to_json(prog: &FractranProg) -> Value {
    Value::from(
        prog.fractions
            .iter()
            .map(|(p, q)| Value::from(vec![nat_to_json(p), nat_to_json(q)]))
            .collect::<Vec<_>>(),
    )
}

/// Parse a FRACTRAN program from its JSON form.
pub fn fractran_from_json(v: &Value) -> Result<FractranProg, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| JsonError::Malformed("expected a list of fractions".into()))?;
    let mut fractions = Vec::with_capacity(arr.len());
    for f in arr {
        let pair = f
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| JsonError::Malformed("fraction must be a pair".into()))?;
        fractions.push((nat_from_json(&pair[0])?, nat_from_json(&pair[1])?));
    }
    Ok(FractranProg::new(fractions))
}

/// Parse a list of naturals (register files, valuations, solutions).
pub fn nats_from_json(v: &Value) -> Result<Vec<Nat>, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| JsonError::Malformed("expected a list of naturals".into()))?;
    arr.iter().map(nat_from_json).collect()
}

/// Serialize a list of naturals.
pub fn nats_to_json(ns: &[Nat]) -> Value {
    Value::from(ns.iter().map(nat_to_json).collect::<Vec<_>>())
}
