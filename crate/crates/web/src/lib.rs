//! Browser bindings. Every export takes plain numbers or text and returns a
//! JSON string, so the page needs no glue beyond `JSON.parse`.

use bncert::json::to_canonical;
use bncert::numerics::{Bounds, Instance};
use bncert::reduction::{decide_good, verify_certificate, Certificate, DecideError, GlueReading, SearchOptions};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// The search recurses once per degree step, and the browser stack is small.
pub const MAX_DEGREE: i64 = 400;

fn error(msg: impl std::fmt::Display) -> String {
    to_canonical(&json!({ "error": msg.to_string() }))
}

fn instance(d: i32, g: i32, r: i32, n: i32) -> Result<Instance, String> {
    let inst = Instance::new(d.into(), g.into(), r.into(), n.into()).map_err(|e| e.to_string())?;
    if inst.d > MAX_DEGREE {
        return Err(format!("the demo caps d at {MAX_DEGREE}; use the command line for larger degrees"));
    }
    Ok(inst)
}

/// Closed-form counts for `(d, g, r)`.
#[wasm_bindgen]
pub fn bounds(d: i32, g: i32, r: i32) -> String {
    match instance(d, g, r, 0) {
        Ok(inst) => to_canonical(&Bounds::compute(inst.d, inst.g, inst.r)),
        Err(e) => error(e),
    }
}

/// Decides goodness and returns the status, the rendered proof tree and the
/// certificate in its canonical text form. `reading` is `"n2"` or `"n1+n2"`.
#[wasm_bindgen]
pub fn good(d: i32, g: i32, r: i32, n: i32, reading: &str) -> String {
    let inst = match instance(d, g, r, n) {
        Ok(inst) => inst,
        Err(e) => return error(e),
    };
    let Some(glue_reading) = GlueReading::parse(reading) else {
        return error(format!("unknown glue reading {reading:?}"));
    };
    let opts = SearchOptions { glue_reading, ..SearchOptions::default() };
    let out = match decide_good(&inst, &opts) {
        Ok(cert) => json!({
            "status": "established",
            "nodes": cert.node_count().to_string(),
            "tree": cert.render(),
            "certificate": cert.to_json(),
        }),
        Err(DecideError::Rejected(rej)) => json!({
            "status": "rejected",
            "reason": rej.to_string(),
        }),
        Err(e) => return error(e),
    };
    to_canonical(&out)
}

/// Replays a pasted certificate.
#[wasm_bindgen]
pub fn verify(text: &str) -> String {
    let cert = match Certificate::from_json(text) {
        Ok(cert) => cert,
        Err(e) => return error(format!("not a certificate: {e}")),
    };
    let out = match verify_certificate(&cert) {
        Ok(()) => json!({ "valid": true, "nodes": cert.node_count().to_string() }),
        Err(e) => json!({ "valid": false, "reason": e.to_string() }),
    };
    to_canonical(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(text: &str) -> Value {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn bounds_reports_strings() {
        let v = parse(&bounds(6, 4, 3));
        assert_eq!(v["rho"], "0");
        assert!(parse(&bounds(6, 4, 1))["error"].is_string());
    }

    #[test]
    fn good_then_verify() {
        let v = parse(&good(85, 65, 5, 3, "n2"));
        assert_eq!(v["status"], "established");
        let cert = v["certificate"].as_str().unwrap();
        assert_eq!(parse(&verify(cert))["valid"], true);

        let tampered = cert.replacen("\"d\": \"85\"", "\"d\": \"86\"", 1);
        assert_ne!(tampered, cert);
        assert_eq!(parse(&verify(&tampered))["valid"], false);
        assert!(parse(&verify("{}"))["error"].is_string());
    }

    #[test]
    fn caps_and_bad_reading() {
        assert!(parse(&good(401, 0, 5, 0, "n2"))["error"].is_string());
        assert!(parse(&good(11, 7, 5, 0, "both"))["error"].is_string());
    }
}
