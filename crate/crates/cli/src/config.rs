//! Option resolution: command-line flags over a config JSON section over
//! built-in defaults.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Failure;

/// Merge `flags` (unset options serialize as `null` and are skipped) over
/// the `section` object of the config file over `T::default()`.
pub fn resolve<T, F>(config: Option<&Path>, section: &str, flags: &F) -> Result<T, Failure>
where
    T: Serialize + DeserializeOwned + Default,
    F: Serialize,
{
    let mut merged = to_object(&T::default())?;
    if let Some(path) = config {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?;
        let doc: Value =
            serde_json::from_str(&text).map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))?;
        let Value::Object(mut sections) = doc else {
            return Err(Failure::usage(format!(
                "config {}: top level must be an object",
                path.display()
            )));
        };
        match sections.remove(section) {
            Some(Value::Object(values)) => overlay(&mut merged, values),
            Some(_) => return Err(Failure::usage(format!("config section `{section}` must be an object"))),
            None => {}
        }
    }
    overlay(&mut merged, to_object(flags)?);
    serde_json::from_value(Value::Object(merged)).map_err(|e| Failure::usage(format!("{section} options: {e}")))
}

fn to_object<S: Serialize>(value: &S) -> Result<Map<String, Value>, Failure> {
    match serde_json::to_value(value) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(Failure::usage("options must serialize to an object".into())),
        Err(e) => Err(Failure::usage(e.to_string())),
    }
}

/// Non-null entries of `top` replace entries of `base`; nested objects merge.
fn overlay(base: &mut Map<String, Value>, top: Map<String, Value>) {
    for (key, value) in top {
        match (base.get_mut(&key), value) {
            (_, Value::Null) => {}
            (Some(Value::Object(b)), Value::Object(t)) => overlay(b, t),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}
