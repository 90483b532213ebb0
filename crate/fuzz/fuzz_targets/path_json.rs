#![no_main]

use libfuzzer_sys::fuzz_target;
use pgn::chains::{path_inf_sup, ElementaryPath};

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(p) = serde_json::from_slice::<ElementaryPath>(data) else { return };
    if p.validate().valid {
        let _ = path_inf_sup(&p);
    }
});
