#![no_main]

use libfuzzer_sys::fuzz_target;
use pgn::chains::{canonicalize, system_from_chain, validate_chain, ClosedChain};

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(c) = serde_json::from_slice::<ClosedChain>(data) else { return };
    if c.vertices.len() > 32 {
        return;
    }
    let r = validate_chain(&c);
    if r.ok {
        let _ = canonicalize(&c);
        let _ = system_from_chain(&c);
    }
});
