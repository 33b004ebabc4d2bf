//! Run reports with a canonical JSON form.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub claim: String,
    pub parameters: BTreeMap<String, Value>,
    pub verified: bool,
    pub counterexample: Option<Value>,
    pub counts: BTreeMap<String, Value>,
    pub details: BTreeMap<String, Value>,
    /// Field moduli in the element grammar, keyed by field.
    pub moduli: BTreeMap<String, String>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: &str, claim: &str) -> Self {
        RunReport { command: command.into(), claim: claim.into(), ..Default::default() }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.into(), to_value(value));
        self
    }

    pub fn count(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.counts.insert(key.into(), to_value(value));
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.details.insert(key.into(), to_value(value));
        self
    }

    pub fn modulus(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.moduli.insert(key.into(), value.into());
        self
    }

    pub fn to_value(&self, with_elapsed: bool) -> Value {
        let mut v = to_value(self);
        if !with_elapsed {
            if let Value::Object(map) = &mut v {
                map.remove("elapsed_ms");
            }
        }
        v
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value(true)).expect("reports serialize")
    }

    /// The JSON form without `elapsed_ms`, for comparing runs.
    pub fn fingerprint(&self) -> String {
        serde_json::to_string(&self.to_value(false)).expect("reports serialize")
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_elapsed_is_dropped() {
        let mut r = RunReport::new("verify x", "claim");
        r.param("z", 1).param("a", vec![1, 2]).count("m", 3);
        r.elapsed_ms = 17;
        let text = r.to_json();
        assert!(text.find("\"a\"").unwrap() < text.find("\"z\"").unwrap());
        assert!(text.find("\"claim\"").unwrap() < text.find("\"command\"").unwrap());
        let mut other = r.clone();
        other.elapsed_ms = 99;
        assert_eq!(r.fingerprint(), other.fingerprint());
        assert!(!r.fingerprint().contains("elapsed_ms"));
    }
}
